#pragma once

#include <array>
#include <vector>

#include "hydrostat/spectral_core.hpp"

// Heat semigroups on the torus (isotropic, split horizontal/vertical,
// fractional), torus heat kernels by Gaussian periodization, the anisotropic
// Helmholtz projection with symbol I - xi_eps (x) xi_eps / |xi_eps|^2 where
// xi_eps = (xi', xi3/eps), the rescaled divergence, and fused
// heat x projection x derivative multiplier passes.

namespace hydrostat {

using SpectralVec3 = std::array<SpectralField, 3>;
using SpectralVec2 = std::array<SpectralField, 2>;

struct KernelSpec {
    double t = 1.0;             // diffusion time, > 0
    int d = 1;                  // dimension, 1..3
    double s = 0.0;             // fractional order of (-Laplace)^{s/2}, in [0,1]
    int truncation_radius = 0;  // 0 = choose so the omitted tail is < 1e-14
};

// Kernel values at points (first d coordinates used). For s = 0 this is the
// periodized Gaussian sum_k g_t(x - 2*pi*k); for s > 0 the spectral sum
// (2pi)^{-d} sum_n |n|^s e^{-t|n|^2} e^{i n.x}.
std::vector<double> heat_kernel_values(const KernelSpec& spec,
                                       const std::vector<std::array<double, 3>>& pts);
double heat_kernel_value(const KernelSpec& spec, const std::array<double, 3>& x);

// Trapezoid quadrature of |kernel| over T^d on n points per axis.
double heat_kernel_l1_norm(const KernelSpec& spec, int n_per_axis = 4096);

// e^{t*Laplace}: multiply mode k by e^{-t|k|^2}. t = 0 is the identity.
SpectralField apply_heat(const SpectralField& f, double t);

// e^{t1*Laplace_H} e^{t2*d3^2} on a 3D grid.
SpectralField apply_split_heat(const SpectralField& f, double t1, double t2);

// (-Laplace_H)^{s1/2} |d3|^{s2} e^{t1*Laplace_H} e^{t2*d3^2}.
SpectralField apply_fractional(const SpectralField& f, double s1, double s2,
                               double t1, double t2);

struct ProjectionSpec {
    double epsilon = 1.0;          // in (0, 1]
    bool zero_mode_identity = true;  // k = 0 passes through unchanged
};

// Per-mode orthogonal projection annihilating the xi_eps direction; the
// unmatched Nyquist planes are zeroed (their symbol sign is ambiguous).
SpectralVec3 apply_projection_eps(const SpectralVec3& f, const ProjectionSpec& spec);

// 3x3 symbol matrix at integer frequency k (zero-mode rule and Nyquist
// handling excluded); exposed for oracle checks.
std::array<std::array<double, 3>, 3> projection_symbol(const std::array<int, 3>& k,
                                                       double epsilon);

// div_eps f = div_H f' + d3 f3 / eps, evaluated spectrally.
SpectralField div_eps(const SpectralVec3& f, double epsilon);

struct CompositeDeriv {
    enum Kind { none, d1, d2, d3, horizontal_frac, vertical_frac } kind = none;
    double s = 0.0;  // order for the fractional kinds
};

// Single fused multiplier pass: derivative symbol x projection x e^{-t|k|^2}.
SpectralVec3 composite_heat_proj(const SpectralVec3& f, double t,
                                 const ProjectionSpec& spec,
                                 const CompositeDeriv& deriv);

// Duhamel sums on a uniform time grid: given integrands g(t_j) (already
// projected as needed), accumulate
//   I(t_k) = dt * sum_j'' e^{(t_k - t_j) Laplace} g(t_j)   (trapezoid weights)
// via the one-step recurrence I_k = e^{dt Laplace}(I_{k-1} + dt/2 g_{k-1}) +
// dt/2 g_k, which is exact for the per-mode exponentials.
class DuhamelAccumulator {
  public:
    DuhamelAccumulator(const Grid& g, double dt, int components);

    // push g(t_k) for k = 0, 1, ...; returns I(t_k)
    const std::vector<SpectralField>& push(const std::vector<SpectralField>& g_k);
    void reset();

  private:
    Grid grid_;
    double dt_;
    std::vector<double> decay_;  // e^{-|k|^2 dt} per mode
    std::vector<SpectralField> sum_;
    std::vector<SpectralField> prev_;
    bool first_ = true;
};

}  // namespace hydrostat
