#pragma once

#include <optional>
#include <vector>

#include "hydrostat/pe_dynamics.hpp"

// The rescaled Navier-Stokes system for the state (v, eps*w), the difference
// system against a hydrostatic trajectory (solved either by direct
// subtraction or by fixed-point iteration on the Duhamel form), and the
// sup-in-time error functionals that quantify the hydrostatic limit.

namespace hydrostat {

struct ScaledState {
    SpectralField u1, u2, u3;  // u3 stores eps * w
    double epsilon = 1.0;
    double time = 0.0;
};

struct NseTrajectory {
    Grid grid;
    double dt = 0.0;
    double epsilon = 1.0;
    std::vector<ScaledState> states;
    std::vector<TimeSample> samples() const;
};

struct DifferenceState {
    SpectralField V1, V2, eW;  // (v_eps - v, eps*(w_eps - w))
    double epsilon = 1.0;
    double time = 0.0;
};

struct DiffTrajectory {
    Grid grid;
    double dt = 0.0;
    double epsilon = 1.0;
    std::vector<DifferenceState> states;
    std::vector<TimeSample> samples() const;
};

struct NseSolveOptions {
    int store_stride = 1;
    double invariant_tol = 1e-8;
};

// Exponential-midpoint solve of the rescaled system: the tendency is the
// projected advection -P_eps (u . grad v, eps * u . grad w). w0 defaults to
// the divergence-free reconstruction from v0.
NseTrajectory solve_scaled_nse(const SpectralVec2& v0,
                               const SpectralField* w0, double eps, double T,
                               double dt, const NseSolveOptions& opt = {});

// Pointwise V = v_eps - v, eW = eps w_eps - eps w at matching stored times.
DiffTrajectory difference_direct(const NseTrajectory& nse, const PeTrajectory& pe);

struct PicardOptions {
    double tol = 1e-10;    // sup-over-time of the update, coefficient sup norm
    int max_iter = 50;
    bool drop_self_term = false;  // linearized variant (no U x U term)
    int segments = 1;             // restart count over [0, T]
};

struct PicardResult {
    DiffTrajectory traj;
    std::vector<double> update_norms;  // one per iteration
    bool converged = false;
    int iterations = 0;
    double growth_factor = 0.0;  // last measured ratio when not contracting
};

// Fixed-point iteration on the mild difference system with the hydrostatic
// trajectory (and its forcing field) frozen: each sweep evaluates
//   U <- int_0^t e^{(t-s)Lap} P_eps [ -(U.grad)(U+u~) - (u.grad)U + eps(0,0,F~) ] ds
// with the time integral taken by composite trapezoid on the stored grid.
PicardResult solve_difference_picard(const PeTrajectory& pe, double eps,
                                     const PicardOptions& opt = {});
// Variant with precomputed forcing samples F~(t_k) (definition form).
PicardResult solve_difference_picard(const PeTrajectory& pe,
                                     const std::vector<SpectralField>& f_tilde,
                                     double eps, const PicardOptions& opt = {});

std::vector<SpectralField> compute_f_tilde_series(const PeTrajectory& pe);

struct NormReport {
    double sup_V = 0.0;
    double sup_tgradV = 0.0;
    double sup_eW = 0.0;
    double sup_tgradeW = 0.0;
    double total = 0.0;        // sum of the four terms above
    double sup_W = 0.0;        // eps-unweighted vertical component
    double sup_tgradW = 0.0;
    std::vector<double> times;
    std::vector<double> v_norms;
    std::vector<double> ew_norms;
};

// The four-term functional sup||V|| + sup t^{1/2}||grad V|| + sup||eps W|| +
// sup t^{1/2}||eps grad W|| in Linf_H L^q over stored times.
NormReport fujita_kato_report(const DiffTrajectory& diff, double q);

double div_eps_defect(const ScaledState& s);
double div_eps_defect(const DifferenceState& s);

}  // namespace hydrostat
