#include "fimcrb/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace fimcrb {
namespace {

// Kronrod abscissae (descending, last is the centre) and weights; the Gauss
// 7-point rule uses the odd-indexed abscissae.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double value;
    double error;

    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double abs_half = std::abs(half);

    const double fc = f(centre);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    double resabs = std::abs(resk);
    std::array<double, 7> f1{};
    std::array<double, 7> f2{};
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double lo = f(centre - dx);
        const double hi = f(centre + dx);
        f1[j] = lo;
        f2[j] = hi;
        resk += kWgk[j] * (lo + hi);
        resabs += kWgk[j] * (std::abs(lo) + std::abs(hi));
        if (j % 2 == 1) {
            resg += kWg[j / 2] * (lo + hi);
        }
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) {
        resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
    }

    Segment seg{a, b, resk * half, std::abs((resk - resg) * half)};
    resasc *= abs_half;
    resabs *= abs_half;
    if (resasc != 0.0 && seg.error != 0.0) {
        seg.error = resasc * std::min(1.0, std::pow(200.0 * seg.error / resasc, 1.5));
    }
    const double round_floor = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
    if (resabs > std::numeric_limits<double>::min() / (50.0 * std::numeric_limits<double>::epsilon())) {
        seg.error = std::max(round_floor, seg.error);
    }
    return seg;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts) {
    QuadratureResult out;
    std::priority_queue<Segment> heap;
    Segment first = gauss_kronrod(f, a, b);
    out.evaluations = 15;
    double total = first.value;
    double total_err = first.error;
    heap.push(first);

    auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };

    while (total_err > target() && static_cast<int>(heap.size()) < opts.max_intervals) {
        if (!std::isfinite(total) || !std::isfinite(total_err)) {
            break;
        }
        Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            break;  // interval no longer representable
        }
        heap.pop();
        Segment left = gauss_kronrod(f, worst.a, mid);
        Segment right = gauss_kronrod(f, mid, worst.b);
        out.evaluations += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum from scratch; the running totals accumulate cancellation error.
    std::vector<Segment> segments;
    segments.reserve(heap.size());
    while (!heap.empty()) {
        segments.push_back(heap.top());
        heap.pop();
    }
    std::sort(segments.begin(), segments.end(),
              [](const Segment& l, const Segment& r) { return std::abs(l.value) < std::abs(r.value); });
    double value = 0.0;
    double err = 0.0;
    for (const auto& s : segments) {
        value += s.value;
        err += s.error;
    }
    out.value = value;
    out.error = err;
    out.intervals = static_cast<int>(segments.size());
    out.converged = std::isfinite(value) && std::isfinite(err) &&
                    err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(value));
    return out;
}

QuadratureResult integrate_real_line(const std::function<double(double)>& f, double center,
                                     double scale, const QuadratureOptions& opts) {
    auto mapped = [&](double w) -> double {
        const double denom = 1.0 - w * w;
        if (denom <= 0.0) {
            return 0.0;
        }
        const double dv_dw = scale * (1.0 + w * w) / (denom * denom);
        return f(center + scale * w / denom) * dv_dw;
    };
    return integrate(mapped, -1.0, 1.0, opts);
}

QuadratureResult integrate_positive_axis(const std::function<double(double)>& log_weight,
                                         const std::function<double(double)>& f, double center,
                                         const QuadratureOptions& opts) {
    // exp() overflows past ~709; the weight is taken as zero out there.
    constexpr double kLogLimit = 700.0;
    auto in_v = [&](double v) -> double {
        if (std::abs(v) > kLogLimit) {
            return 0.0;
        }
        const double q = std::exp(v);
        const double lw = log_weight(q) + v;
        if (lw < -kLogLimit) {
            return 0.0;
        }
        return std::exp(lw) * f(q);
    };
    return integrate_real_line(in_v, center, 1.0, opts);
}

}  // namespace fimcrb
