#include "fimcrb/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fimcrb/error.hpp"

namespace fimcrb {
namespace {

constexpr double kAsymptoticThreshold = 10.0;

void require_positive(double x, const char* fn) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("x", std::string(fn) + ": argument must be finite and > 0, got " +
                                   std::to_string(x));
    }
}

// psi'(x) for x >= 10: 1/x + 1/(2x^2) + sum B_2k / x^(2k+1).
double trigamma_asymptotic(double x) {
    const double r = 1.0 / x;
    const double r2 = r * r;
    const double tail =
        r2 * (1.0 / 6.0 -
              r2 * (1.0 / 30.0 -
                    r2 * (1.0 / 42.0 -
                          r2 * (1.0 / 30.0 -
                                r2 * (5.0 / 66.0 - r2 * (691.0 / 2730.0 - r2 * (7.0 / 6.0)))))));
    return r + 0.5 * r2 + r * tail;
}

// x psi'(x) - 1 for x >= 10, same series multiplied through by x.
double trigamma_excess_asymptotic(double x) {
    const double r = 1.0 / x;
    const double r2 = r * r;
    const double tail =
        r2 * (1.0 / 6.0 -
              r2 * (1.0 / 30.0 -
                    r2 * (1.0 / 42.0 -
                          r2 * (1.0 / 30.0 -
                                r2 * (5.0 / 66.0 - r2 * (691.0 / 2730.0 - r2 * (7.0 / 6.0)))))));
    return 0.5 * r + tail;
}

}  // namespace

double digamma(double x) {
    require_positive(x, "digamma");
    double shift = 0.0;
    while (x < kAsymptoticThreshold) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    const double r2 = 1.0 / (x * x);
    const double series =
        r2 * (1.0 / 12.0 -
              r2 * (1.0 / 120.0 -
                    r2 * (1.0 / 252.0 -
                          r2 * (1.0 / 240.0 -
                                r2 * (1.0 / 132.0 - r2 * (691.0 / 32760.0 - r2 / 12.0))))));
    return shift + std::log(x) - 0.5 / x - series;
}

double trigamma(double x) {
    require_positive(x, "trigamma");
    double shift = 0.0;
    while (x < kAsymptoticThreshold) {
        shift += 1.0 / (x * x);
        x += 1.0;
    }
    return shift + trigamma_asymptotic(x);
}

double trigamma_excess(double x) {
    require_positive(x, "trigamma_excess");
    if (x >= kAsymptoticThreshold) {
        return trigamma_excess_asymptotic(x);
    }
    return x * trigamma(x) - 1.0;
}

double log_delta(int n) {
    if (n < 1) {
        throw DomainError("n", "log_delta: dimension must be >= 1");
    }
    return std::lgamma(0.5 * n) - 0.5 * n * std::log(std::numbers::pi);
}

}  // namespace fimcrb
