#pragma once

#include <string>
#include <vector>

#include "hydrostat/aniso_spaces.hpp"
#include "hydrostat/semigroups.hpp"
#include "hydrostat/spectral_core.hpp"

// Hydrostatic (primitive-equation) dynamics on the torus: the horizontal
// momentum equation with barotropic pressure elimination, vertical velocity
// reconstructed from the divergence-free constraint, an exponential-midpoint
// time integrator, and the right-hand side F of the parabolic w-equation
// along with the forcing field F~ used by the difference solver.

namespace hydrostat {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct HydroState {
    SpectralField v1, v2, w;
    double time = 0.0;
};

struct PeTrajectory {
    Grid grid;
    double dt = 0.0;  // spacing of stored states
    std::vector<HydroState> states;

    std::vector<TimeSample> samples() const;      // (v1, v2, w)
    std::vector<TimeSample> samples_v() const;    // (v1, v2)
};

// Invariant defects of one state: w-reconstruction, barotropic divergence,
// and full 3D divergence (all as sup over modes).
struct HydroDefects {
    double w_defect = 0.0;
    double barotropic_defect = 0.0;
    double divergence_defect = 0.0;
    double max() const;
};
HydroDefects hydro_defects(const HydroState& s);

// w = -int_{-pi}^{x3} div_H v dz. Requires div_H of the vertical average of v
// to vanish (within tol), else the reconstruction is not periodic.
SpectralField reconstruct_w(const SpectralVec2& v, double tol = 1e-11);

// Subtract grad_H pi with -Laplace_H pi = div_H (vertical average of f),
// zero-mean pi on T^2; the result has divergence-free vertical average.
SpectralVec2 hydrostatic_project(const SpectralVec2& f);

// -(v . grad_H v + w d3 v), dealiased, then hydrostatic_project.
SpectralVec2 pe_rhs(const HydroState& s);

struct PeSolveOptions {
    int store_stride = 1;
    double invariant_tol = 1e-8;
};

// Exponential midpoint (second order): a half step predicts the midpoint
// state, the full step applies e^{dt L} to the state and e^{dt L / 2} to the
// midpoint tendency. w is rebuilt from v every step.
PeTrajectory solve_pe(const SpectralVec2& v0, double T, double dt,
                      const PeSolveOptions& opt = {});

// Right-hand side of dt w - Laplace w = F(v, w): the vertical antiderivative
// of div_H of the mean-free part of the momentum nonlinearity. Expanding the
// fluctuation products gives the six-term form whose averaged pieces carry
// the prefactor (x3 + pi)/(2 pi).
SpectralField compute_F(const HydroState& s);

enum class FTildeForm {
    definition,  // -(F + u . grad w), with d3 w taken spectrally
    no_d3,       // vertical derivatives eliminated through the constraint
};
SpectralField compute_F_tilde(const HydroState& s, FTildeForm form);

struct WResidualReport {
    double max_residual = 0.0;
    double l2_residual = 0.0;
    int interior_samples = 0;
};

// Centered-difference residual of dt w - Laplace w - F over interior stored
// times; shrinks at second order when the step is halved.
WResidualReport check_w_equation(const PeTrajectory& traj);

// Initial-data presets. The default activates barotropic and baroclinic
// parts and every term of F; all presets satisfy div_H mean(v) = 0.
SpectralVec2 initial_default(const Grid& g);
SpectralVec2 initial_zero(const Grid& g);
SpectralVec2 initial_single_mode(const Grid& g, double amplitude = 1.0);

// Shared helpers (also used by the difference solver).
SpectralField div_h(const SpectralVec2& v);

// u . grad b for u = (a1, a2, a3) given in physical space; the products are
// dealiased. Pass a3 = nullptr to drop the vertical term.
SpectralField advect_phys(const PhysicalField& a1, const PhysicalField& a2,
                          const PhysicalField* a3, const SpectralField& b);

}  // namespace hydrostat
