#include <benchmark/benchmark.h>

#include "fimcrb/crb.hpp"
#include "fimcrb/fim.hpp"
#include "fimcrb/generators.hpp"
#include "fimcrb/gg_shape.hpp"
#include "fimcrb/oracle.hpp"

using namespace fimcrb;

static void BM_QuadratureCoefficientsGg(benchmark::State& state) {
    const auto g = generalized_gaussian_generator(static_cast<int>(state.range(0)), 0.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(elliptical_coefficients_quadrature(*g));
    }
}
BENCHMARK(BM_QuadratureCoefficientsGg)->Arg(1)->Arg(4)->Arg(16);

static void BM_QuadratureCoefficientsCompound(benchmark::State& state) {
    const auto g = compound_gaussian_generator(2, parse_texture("invgamma:2.5"));
    for (auto _ : state) {
        benchmark::DoNotOptimize(elliptical_coefficients_quadrature(*g));
    }
}
BENCHMARK(BM_QuadratureCoefficientsCompound);

static void BM_CovarianceInformation(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const CovarianceMap cov = builtin_symmetric_covariance(n);
    const MatrixXd j = cov.jacobian_vec(VectorXd::Zero(n * (n + 1) / 2));
    const MatrixXd sinv = MatrixXd::Identity(n, n);
    const auto route = state.range(1) ? KroneckerRoute::contracted : KroneckerRoute::materialized;
    for (auto _ : state) {
        benchmark::DoNotOptimize(covariance_information(j, sinv, 0.6, 0.05, route));
    }
}
BENCHMARK(BM_CovarianceInformation)->Args({4, 0})->Args({4, 1})->Args({12, 0})->Args({12, 1});

static void BM_EmpiricalFim(benchmark::State& state) {
    auto [mean, cov] = builtin_iid_scalar(2);
    const EllipticalScoreModel sm(LocationScaleModel(mean, cov, student_t_generator(2, 5.0)),
                                  VectorXd::Zero(1), VectorXd::Ones(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(empirical_fim(sm, static_cast<std::size_t>(state.range(0)), 1));
    }
}
BENCHMARK(BM_EmpiricalFim)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_GammaFim(benchmark::State& state) {
    double m = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gamma_fim(m, 1.0, 1));
        m += 1e-9;
    }
}
BENCHMARK(BM_GammaFim);

static void BM_UnknownShapeCrb(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(gg_crb_sigma2(1, 0.5, ShapeKnowledge::unknown_s));
    }
}
BENCHMARK(BM_UnknownShapeCrb)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
