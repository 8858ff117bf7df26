#include "hydrostat/semigroups.hpp"

#include <cmath>

namespace hydrostat {

namespace {

void require_positive_time(double t, const char* what) {
    if (!(t > 0.0)) throw std::invalid_argument(std::string(what) + ": time must be > 0");
}

// 1D periodized Gaussian sum_k (4 pi t)^{-1/2} e^{-(x - 2 pi k)^2 / 4t}.
double gauss_periodized_1d(double x, double t, int radius) {
    const double norm = 1.0 / std::sqrt(4.0 * pi * t);
    double s = norm * std::exp(-x * x / (4.0 * t));
    if (radius > 0) {
        for (int k = 1; k <= radius; ++k) {
            const double a = x - two_pi * k, b = x + two_pi * k;
            s += norm * (std::exp(-a * a / (4.0 * t)) + std::exp(-b * b / (4.0 * t)));
        }
        return s;
    }
    for (int k = 1;; ++k) {
        const double a = x - two_pi * k, b = x + two_pi * k;
        const double shell =
            norm * (std::exp(-a * a / (4.0 * t)) + std::exp(-b * b / (4.0 * t)));
        s += shell;
        if (shell < 1e-16 * s && k >= 2) break;
        if (k > 10000) break;
    }
    return s;
}

// 1D spectral sum (1/2pi) sum_n |n|^s e^{-t n^2} e^{i n x} (real form).
double fractional_kernel_1d(double x, double t, double s) {
    double acc = (s == 0.0) ? 1.0 : 0.0;  // |0|^s with 0^0 := 1
    for (int n = 1;; ++n) {
        const double term = std::pow(n, s) * std::exp(-t * n * n);
        acc += 2.0 * term * std::cos(n * x);
        if (term < 1e-18 && n > 2) break;
        if (n > 100000) break;
    }
    return acc / two_pi;
}

}  // namespace

double heat_kernel_value(const KernelSpec& spec, const std::array<double, 3>& x) {
    require_positive_time(spec.t, "heat_kernel_value");
    if (spec.d < 1 || spec.d > 3)
        throw std::invalid_argument("kernel dimension must be 1, 2 or 3");
    if (spec.s == 0.0) {
        // the Gaussian factorizes, so the lattice sum is a product of 1D sums
        double v = 1.0;
        for (int a = 0; a < spec.d; ++a)
            v *= gauss_periodized_1d(x[a], spec.t, spec.truncation_radius);
        return v;
    }
    if (spec.d != 1)
        throw std::invalid_argument("fractional kernels are provided in 1D");
    return fractional_kernel_1d(x[0], spec.t, spec.s);
}

std::vector<double> heat_kernel_values(const KernelSpec& spec,
                                       const std::vector<std::array<double, 3>>& pts) {
    std::vector<double> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back(heat_kernel_value(spec, p));
    return out;
}

double heat_kernel_l1_norm(const KernelSpec& spec, int n_per_axis) {
    require_positive_time(spec.t, "heat_kernel_l1_norm");
    const double h = two_pi / n_per_axis;
    if (spec.s == 0.0) {
        // positive separable kernel: L1 over T^d is the d-th power of 1D
        double s = 0.0;
        for (int i = 0; i < n_per_axis; ++i)
            s += gauss_periodized_1d(-pi + i * h, spec.t, spec.truncation_radius);
        return std::pow(s * h, spec.d);
    }
    double s = 0.0;
    for (int i = 0; i < n_per_axis; ++i)
        s += std::abs(fractional_kernel_1d(-pi + i * h, spec.t, spec.s));
    return s * h;
}

SpectralField apply_heat(const SpectralField& f, double t) {
    if (t < 0.0) throw std::invalid_argument("apply_heat: negative time");
    if (t == 0.0) return f;
    SpectralField out(f.grid);
    for_each_mode(f.grid, [&](const std::array<int, 3>& k, std::size_t i) {
        const double k2 = double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2];
        out.coeffs[i] = f.coeffs[i] * std::exp(-t * k2);
    });
    return out;
}

SpectralField apply_split_heat(const SpectralField& f, double t1, double t2) {
    if (t1 < 0.0 || t2 < 0.0)
        throw std::invalid_argument("apply_split_heat: negative time");
    if (f.grid.ndim() != 3)
        throw std::invalid_argument("apply_split_heat needs a 3D grid");
    SpectralField out(f.grid);
    for_each_mode(f.grid, [&](const std::array<int, 3>& k, std::size_t i) {
        const double kh2 = double(k[0]) * k[0] + double(k[1]) * k[1];
        const double kv2 = double(k[2]) * k[2];
        out.coeffs[i] = f.coeffs[i] * std::exp(-t1 * kh2 - t2 * kv2);
    });
    return out;
}

namespace {
inline double pow_or_one(double base, double expo) {
    return expo == 0.0 ? 1.0 : std::pow(base, expo);
}
}  // namespace

SpectralField apply_fractional(const SpectralField& f, double s1, double s2,
                               double t1, double t2) {
    if (s1 < 0.0 || s1 > 1.0 || s2 < 0.0 || s2 > 1.0)
        throw std::invalid_argument("apply_fractional: orders must lie in [0,1]");
    require_positive_time(t1, "apply_fractional");
    require_positive_time(t2, "apply_fractional");
    if (f.grid.ndim() != 3)
        throw std::invalid_argument("apply_fractional needs a 3D grid");
    SpectralField out(f.grid);
    for_each_mode(f.grid, [&](const std::array<int, 3>& k, std::size_t i) {
        const double kh2 = double(k[0]) * k[0] + double(k[1]) * k[1];
        const double kv = std::abs(double(k[2]));
        const double m = pow_or_one(std::sqrt(kh2), s1) * pow_or_one(kv, s2) *
                         std::exp(-t1 * kh2 - t2 * kv * kv);
        out.coeffs[i] = f.coeffs[i] * m;
    });
    return out;
}

std::array<std::array<double, 3>, 3> projection_symbol(const std::array<int, 3>& k,
                                                       double epsilon) {
    const double xe0 = k[0], xe1 = k[1], xe2 = k[2] / epsilon;
    const double n2 = xe0 * xe0 + xe1 * xe1 + xe2 * xe2;
    std::array<std::array<double, 3>, 3> p{};
    const double xi[3] = {xe0, xe1, xe2};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            p[i][j] = (i == j ? 1.0 : 0.0) - xi[i] * xi[j] / n2;
    return p;
}

SpectralVec3 apply_projection_eps(const SpectralVec3& f, const ProjectionSpec& spec) {
    if (!(spec.epsilon > 0.0) || spec.epsilon > 1.0)
        throw std::invalid_argument("projection: epsilon must lie in (0,1]");
    const Grid& g = f[0].grid;
    if (g.ndim() != 3) throw std::invalid_argument("projection needs a 3D grid");
    SpectralVec3 out{SpectralField(g), SpectralField(g), SpectralField(g)};
    const int nyq0 = g.nyquist(0), nyq1 = g.nyquist(1), nyq2 = g.nyquist(2);
    const double inv_eps = 1.0 / spec.epsilon;
    for_each_mode(g, [&](const std::array<int, 3>& k, std::size_t i) {
        if (k[0] == 0 && k[1] == 0 && k[2] == 0) {
            if (spec.zero_mode_identity)
                for (int c = 0; c < 3; ++c) out[c].coeffs[i] = f[c].coeffs[i];
            return;
        }
        if (std::abs(k[0]) == nyq0 || std::abs(k[1]) == nyq1 ||
            std::abs(k[2]) == nyq2)
            return;  // left zero
        const double xi[3] = {double(k[0]), double(k[1]), k[2] * inv_eps};
        const double n2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        const complex dot =
            (xi[0] * f[0].coeffs[i] + xi[1] * f[1].coeffs[i] + xi[2] * f[2].coeffs[i]) /
            n2;
        for (int c = 0; c < 3; ++c) out[c].coeffs[i] = f[c].coeffs[i] - dot * xi[c];
    });
    return out;
}

SpectralField div_eps(const SpectralVec3& f, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("div_eps: epsilon must be > 0");
    const Grid& g = f[0].grid;
    if (g.ndim() != 3) throw std::invalid_argument("div_eps needs a 3D grid");
    SpectralField out(g);
    const int nyq0 = g.nyquist(0), nyq1 = g.nyquist(1), nyq2 = g.nyquist(2);
    const double inv_eps = 1.0 / epsilon;
    for_each_mode(g, [&](const std::array<int, 3>& k, std::size_t i) {
        complex s = 0.0;
        if (std::abs(k[0]) != nyq0) s += complex(0.0, k[0]) * f[0].coeffs[i];
        if (std::abs(k[1]) != nyq1) s += complex(0.0, k[1]) * f[1].coeffs[i];
        if (std::abs(k[2]) != nyq2) s += complex(0.0, k[2] * inv_eps) * f[2].coeffs[i];
        out.coeffs[i] = s;
    });
    return out;
}

SpectralVec3 composite_heat_proj(const SpectralVec3& f, double t,
                                 const ProjectionSpec& spec,
                                 const CompositeDeriv& deriv) {
    require_positive_time(t, "composite_heat_proj");
    const Grid& g = f[0].grid;
    if (g.ndim() != 3) throw std::invalid_argument("composite needs a 3D grid");
    SpectralVec3 out{SpectralField(g), SpectralField(g), SpectralField(g)};
    const int nyq0 = g.nyquist(0), nyq1 = g.nyquist(1), nyq2 = g.nyquist(2);
    const double inv_eps = 1.0 / spec.epsilon;
    for_each_mode(g, [&](const std::array<int, 3>& k, std::size_t i) {
        const double k2 =
            double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2];
        const double heat = std::exp(-t * k2);
        complex dsym;
        switch (deriv.kind) {
            case CompositeDeriv::none: dsym = 1.0; break;
            case CompositeDeriv::d1: dsym = complex(0.0, k[0]); break;
            case CompositeDeriv::d2: dsym = complex(0.0, k[1]); break;
            case CompositeDeriv::d3: dsym = complex(0.0, k[2]); break;
            case CompositeDeriv::horizontal_frac:
                dsym = pow_or_one(std::sqrt(double(k[0]) * k[0] + double(k[1]) * k[1]),
                                  deriv.s);
                break;
            case CompositeDeriv::vertical_frac:
                dsym = pow_or_one(std::abs(double(k[2])), deriv.s);
                break;
        }
        if (k[0] == 0 && k[1] == 0 && k[2] == 0) {
            if (spec.zero_mode_identity)
                for (int c = 0; c < 3; ++c)
                    out[c].coeffs[i] = f[c].coeffs[i] * dsym * heat;
            return;
        }
        if (std::abs(k[0]) == nyq0 || std::abs(k[1]) == nyq1 ||
            std::abs(k[2]) == nyq2)
            return;
        const double xi[3] = {double(k[0]), double(k[1]), k[2] * inv_eps};
        const double n2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        const complex dot =
            (xi[0] * f[0].coeffs[i] + xi[1] * f[1].coeffs[i] + xi[2] * f[2].coeffs[i]) /
            n2;
        for (int c = 0; c < 3; ++c)
            out[c].coeffs[i] = (f[c].coeffs[i] - dot * xi[c]) * dsym * heat;
    });
    return out;
}

DuhamelAccumulator::DuhamelAccumulator(const Grid& g, double dt, int components)
    : grid_(g), dt_(dt) {
    decay_.resize(g.size());
    for_each_mode(g, [&](const std::array<int, 3>& k, std::size_t i) {
        const double k2 =
            double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2];
        decay_[i] = std::exp(-dt * k2);
    });
    sum_.assign(components, SpectralField(g));
    prev_.assign(components, SpectralField(g));
}

void DuhamelAccumulator::reset() {
    for (auto& s : sum_) s = SpectralField(grid_);
    for (auto& p : prev_) p = SpectralField(grid_);
    first_ = true;
}

const std::vector<SpectralField>& DuhamelAccumulator::push(
    const std::vector<SpectralField>& g_k) {
    const double half = 0.5 * dt_;
    if (first_) {
        // I(t_0) = 0; remember g_0 for the next step
        for (std::size_t c = 0; c < sum_.size(); ++c) {
            prev_[c] = g_k[c];
            sum_[c] = SpectralField(grid_);
        }
        first_ = false;
        return sum_;
    }
    for (std::size_t c = 0; c < sum_.size(); ++c) {
        SpectralField& s = sum_[c];
        const SpectralField& gp = prev_[c];
        const SpectralField& gc = g_k[c];
        for (std::size_t i = 0; i < s.coeffs.size(); ++i)
            s.coeffs[i] = (s.coeffs[i] + half * gp.coeffs[i]) * decay_[i] +
                          half * gc.coeffs[i];
        prev_[c] = gc;
    }
    return sum_;
}

}  // namespace hydrostat
