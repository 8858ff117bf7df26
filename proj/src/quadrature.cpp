#include "hydrostat/quadrature.hpp"

#include <cmath>

#include "hydrostat/spectral_core.hpp"
#include <vector>

namespace hydrostat {

namespace {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1] (QUADPACK dqk15 constants).
const double xgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
const double wgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
const double wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Interval {
    double a, b, value, err;
};

Interval gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double result_gauss = wg[3] * fc;
    double result_kronrod = wgk[7] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        result_kronrod += wgk[j] * (f1 + f2);
        if (j % 2 == 1) result_gauss += wg[j / 2] * (f1 + f2);
    }
    Interval out;
    out.a = a;
    out.b = b;
    out.value = result_kronrod * h;
    out.err = std::abs((result_kronrod - result_gauss) * h);
    return out;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double rel_tol, double abs_tol,
                           int max_depth) {
    // global adaptive bisection: always split the interval with largest error
    std::vector<Interval> segs{gk15(f, a, b)};
    std::vector<int> depth{0};
    const int max_segments = 1 << 15;
    for (;;) {
        double total = 0.0, err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            total += segs[i].value;
            err += segs[i].err;
            if (segs[i].err > segs[worst].err) worst = i;
        }
        // the Kronrod estimate can be optimistic near algebraic endpoint
        // features of the mapped integrand; drive it an order tighter
        if (err <= 0.1 * std::max(abs_tol, rel_tol * std::abs(total))) {
            return {total, err, static_cast<int>(segs.size())};
        }
        if (depth[worst] >= max_depth ||
            segs.size() >= static_cast<std::size_t>(max_segments))
            throw QuadratureError(
                "adaptive quadrature did not converge: error estimate " +
                std::to_string(err) + " after " + std::to_string(segs.size()) +
                " subdivisions");
        const Interval w = segs[worst];
        const double m = 0.5 * (w.a + w.b);
        segs[worst] = gk15(f, w.a, m);
        segs.push_back(gk15(f, m, w.b));
        depth.push_back(depth[worst] + 1);
        depth[worst] += 1;
    }
}

QuadratureResult integrate_half_line(const std::function<double(double)>& f,
                                     double scale, double rel_tol,
                                     double abs_tol) {
    if (scale <= 0.0) throw QuadratureError("substitution scale must be positive");
    // s = scale * tan(theta) up to S; representable theta stops ~6e-17 short
    // of pi/2, which for algebraically decaying integrands would truncate an
    // s^{-gamma} tail far above the tolerance, so the far tail is integrated
    // under u = 1/s instead.
    const double S = 1e6 * scale;
    auto mapped = [&](double theta) {
        const double t = std::tan(theta);
        const double sec2 = 1.0 + t * t;
        return f(scale * t) * scale * sec2;
    };
    QuadratureResult head =
        integrate(mapped, 0.0, std::atan(S / scale), 0.5 * rel_tol, 0.5 * abs_tol);
    auto inverted = [&](double u) { return f(1.0 / u) / (u * u); };
    QuadratureResult tail =
        integrate(inverted, 0.0, 1.0 / S, 0.5 * rel_tol,
                  std::max(0.5 * abs_tol, 0.25 * rel_tol * std::abs(head.value)));
    return {head.value + tail.value, head.error_estimate + tail.error_estimate,
            head.subdivisions + tail.subdivisions};
}

}  // namespace hydrostat
