#pragma once

#include <limits>
#include <vector>

#include "hydrostat/spectral_core.hpp"

// Anisotropic L^infty_H L^q norms (sup over horizontal position of the
// vertical q-norm), the barotropic/baroclinic split, the vertical
// antiderivative from x3 = -pi, and the sup-in-time trajectory functionals.

namespace hydrostat {

constexpr double q_infinity = std::numeric_limits<double>::infinity();

struct AnisoNormSpec {
    double q = 1.0;
    bool with_gradient = false;
    double time_weight = 0.0;  // applied as t^gamma
};

// sup_{x'} ( int_T |f(x',x3)|^q dx3 )^{1/q}; q = infinity is the grid sup.
// The vertical integral is the uniform Riemann sum with weight 2*pi/n_v.
double norm_linf_h_lq(const PhysicalField& f, double q);
double norm_linf_h_lq(const SpectralField& f, double q);

// Mean over the vertical line, (1/2pi) int_T f dz, as a 2D horizontal field.
PhysicalField vertical_average(const PhysicalField& f);

// f - (vertical average lifted); has zero vertical mean.
PhysicalField fluctuation(const PhysicalField& f);

// x3 |-> int_{-pi}^{x3} f(x',z) dz evaluated at grid points. The vertical
// mean contributes the exact linear ramp f_mean*(x3+pi); nonzero vertical
// modes are integrated spectrally, so the value at x3 = -pi is exactly 0.
PhysicalField vertical_antiderivative(const PhysicalField& f);

// Spectral antiderivative for fields with (numerically) zero vertical mean:
// mode k3 != 0 maps to c/(i k3) plus the boundary constant -c (-1)^{k3}/(i k3)
// accumulated on the k3 = 0 plane. The input's k3 = 0 plane is discarded
// (callers validate the mean-free precondition), as is the vertical Nyquist.
SpectralField vertical_antiderivative_meanfree(const SpectralField& f);

// Spectral split helpers: the k3 = 0 plane carries the vertical mean.
SpectralField vertical_fluct_spectral(const SpectralField& f);  // zero k3=0 plane
SpectralField lift_horizontal(const SpectralField& f2d, const Grid& g3);
SpectralField restrict_to_mean(const SpectralField& f3d, const Grid& g2);

// One stored time sample of a multi-component trajectory (non-owning).
struct TimeSample {
    double time = 0.0;
    std::vector<const SpectralField*> comps;
};

struct TrajectoryFunctionals {
    double x_value = 0.0;  // sup ||u|| + sup t^{1/2} ||grad u||
    double y_value = 0.0;  // sup ||u|| + sup ||grad_H u|| + sup t^{1/2} ||grad grad_H u||
    std::vector<double> norm_samples;           // ||u(t)||
    std::vector<double> grad_norm_samples;      // ||grad u(t)||
};

// sup_t t^gamma ||(grad)^{0,1} u(t)||_{Linf_H L^q}, max over components.
double weighted_sup(const std::vector<TimeSample>& traj, const AnisoNormSpec& spec);

TrajectoryFunctionals trajectory_functionals(const std::vector<TimeSample>& traj,
                                             double q);

}  // namespace hydrostat
