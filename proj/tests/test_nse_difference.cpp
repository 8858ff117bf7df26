#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "hydrostat/estimate_lab.hpp"
#include "hydrostat/nse_difference.hpp"
#include "hydrostat/random_fields.hpp"

using namespace hydrostat;

namespace {

double spec_diff(const SpectralField& a, const SpectralField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
        m = std::max(m, std::abs(a.coeffs[i] - b.coeffs[i]));
    return m;
}

// Reference incompressible solver: hand-rolled Leray projection and the same
// exponential midpoint stepping, written independently of the library's
// projection path.
struct RefState {
    SpectralField u1, u2, u3;
};

RefState ref_project(const RefState& f) {
    const Grid& g = f.u1.grid;
    RefState out{SpectralField(g), SpectralField(g), SpectralField(g)};
    const int nyq0 = g.nyquist(0), nyq1 = g.nyquist(1), nyq2 = g.nyquist(2);
    for_each_mode(g, [&](const std::array<int, 3>& k, std::size_t i) {
        if (k[0] == 0 && k[1] == 0 && k[2] == 0) {
            out.u1.coeffs[i] = f.u1.coeffs[i];
            out.u2.coeffs[i] = f.u2.coeffs[i];
            out.u3.coeffs[i] = f.u3.coeffs[i];
            return;
        }
        if (std::abs(k[0]) == nyq0 || std::abs(k[1]) == nyq1 ||
            std::abs(k[2]) == nyq2)
            return;
        const double kk = double(k[0]) * k[0] + double(k[1]) * k[1] +
                          double(k[2]) * k[2];
        const complex dot = (double(k[0]) * f.u1.coeffs[i] +
                             double(k[1]) * f.u2.coeffs[i] +
                             double(k[2]) * f.u3.coeffs[i]) /
                            kk;
        out.u1.coeffs[i] = f.u1.coeffs[i] - dot * double(k[0]);
        out.u2.coeffs[i] = f.u2.coeffs[i] - dot * double(k[1]);
        out.u3.coeffs[i] = f.u3.coeffs[i] - dot * double(k[2]);
    });
    return out;
}

RefState ref_tendency(const RefState& s) {
    PhysicalField a1 = inverse(s.u1), a2 = inverse(s.u2), a3 = inverse(s.u3);
    RefState adv{advect_phys(a1, a2, &a3, s.u1), advect_phys(a1, a2, &a3, s.u2),
                 advect_phys(a1, a2, &a3, s.u3)};
    adv.u1 *= -1.0;
    adv.u2 *= -1.0;
    adv.u3 *= -1.0;
    return ref_project(adv);
}

RefState ref_solve_nse(const SpectralVec2& v0, double T, double dt) {
    RefState s{dealias(v0[0]), dealias(v0[1]),
               reconstruct_w({dealias(v0[0]), dealias(v0[1])})};
    const long n = std::lround(T / dt);
    const double half = 0.5 * dt;
    for (long k = 0; k < n; ++k) {
        RefState r0 = ref_tendency(s);
        RefState mid{apply_heat(s.u1, half) + half * apply_heat(r0.u1, half),
                     apply_heat(s.u2, half) + half * apply_heat(r0.u2, half),
                     apply_heat(s.u3, half) + half * apply_heat(r0.u3, half)};
        RefState rm = ref_tendency(mid);
        s = RefState{apply_heat(s.u1, dt) + dt * apply_heat(rm.u1, half),
                     apply_heat(s.u2, dt) + dt * apply_heat(rm.u2, half),
                     apply_heat(s.u3, dt) + dt * apply_heat(rm.u3, half)};
    }
    return s;
}

}  // namespace

TEST_CASE("scaled solve: zero data, eps validation, exact linear decay") {
    Grid g = Grid::make3d(16, 16);
    NseTrajectory z = solve_scaled_nse(initial_zero(g), nullptr, 0.5, 0.1, 0.01);
    for (const auto& s : z.states) CHECK(max_abs(s.u1) == 0.0);

    CHECK_THROWS_AS(solve_scaled_nse(initial_zero(g), nullptr, 0.0, 0.1, 0.01),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_scaled_nse(initial_zero(g), nullptr, 1.5, 0.1, 0.01),
                    std::invalid_argument);

    // (c sin x2, 0): the nonlinearity vanishes, each mode decays as e^{-t}
    NseTrajectory traj =
        solve_scaled_nse(initial_single_mode(g, 0.6), nullptr, 1.0, 0.2, 0.01);
    for (const auto& s : traj.states) {
        const complex got = s.u1.at_mode(0, 1, 0);
        const double expect = 0.6 * std::exp(-s.time);
        CHECK(std::abs(got - complex(0.0, -expect / 2)) < 1e-12);
    }
}

TEST_CASE("div_eps stays zero along stored trajectories") {
    Grid g = Grid::make3d(16, 16);
    for (double eps : {1.0, 0.2, 0.05}) {
        NseTrajectory traj =
            solve_scaled_nse(initial_default(g), nullptr, eps, 0.1, 5e-3);
        for (const auto& s : traj.states) CHECK(div_eps_defect(s) < 1e-11);
    }
}

TEST_CASE("eps = 1 equals an independent Leray reference solve") {
    Grid g = Grid::make3d(16, 16);
    const SpectralVec2 v0 = initial_default(g);
    NseTrajectory traj = solve_scaled_nse(v0, nullptr, 1.0, 0.1, 5e-3);
    RefState ref = ref_solve_nse(v0, 0.1, 5e-3);
    CHECK(spec_diff(traj.states.back().u1, ref.u1) < 1e-10);
    CHECK(spec_diff(traj.states.back().u2, ref.u2) < 1e-10);
    CHECK(spec_diff(traj.states.back().u3, ref.u3) < 1e-10);
}

TEST_CASE("scaled solve self-convergence is second order") {
    Grid g = Grid::make3d(16, 16);
    const SpectralVec2 v0 = initial_default(g);
    auto final_state = [&](double dt) {
        NseTrajectory t = solve_scaled_nse(v0, nullptr, 0.1, 0.1, dt);
        return t.states.back();
    };
    ScaledState s1 = final_state(4e-3);
    ScaledState s2 = final_state(2e-3);
    ScaledState s3 = final_state(1e-3);
    const double e12 = std::max({spec_diff(s1.u1, s2.u1), spec_diff(s1.u2, s2.u2),
                                 spec_diff(s1.u3, s2.u3)});
    const double e23 = std::max({spec_diff(s2.u1, s3.u1), spec_diff(s2.u2, s3.u2),
                                 spec_diff(s2.u3, s3.u3)});
    CHECK(e12 > 1e-12);
    CHECK(std::log2(e12 / e23) >= 1.8);
}

TEST_CASE("direct difference: matching data and the zero case") {
    Grid g = Grid::make3d(16, 16);
    // x3-independent data at eps = 1: hydrostatic and rescaled flows coincide
    SpectralVec2 tg{forward(sample_fn(g, [](double x1, double x2, double) {
                        return std::sin(x1) * std::cos(x2);
                    })),
                    forward(sample_fn(g, [](double x1, double x2, double) {
                        return -std::cos(x1) * std::sin(x2);
                    }))};
    PeTrajectory pe = solve_pe(tg, 0.1, 5e-3);
    NseTrajectory nse = solve_scaled_nse(tg, nullptr, 1.0, 0.1, 5e-3);
    DiffTrajectory diff = difference_direct(nse, pe);
    for (const auto& s : diff.states) {
        CHECK(max_abs(s.V1) < 1e-12);
        CHECK(max_abs(s.V2) < 1e-12);
        CHECK(max_abs(s.eW) < 1e-12);
        CHECK(div_eps_defect(s) < 1e-11);
    }

    // difference starts from zero for shared initial data
    PeTrajectory pe2 = solve_pe(initial_default(g), 0.05, 5e-3);
    NseTrajectory nse2 =
        solve_scaled_nse(initial_default(g), nullptr, 0.5, 0.05, 5e-3);
    DiffTrajectory d2 = difference_direct(nse2, pe2);
    CHECK(max_abs(d2.states.front().V1) == 0.0);
    CHECK(max_abs(d2.states.front().eW) == 0.0);
    CHECK(max_abs(d2.states.back().V1) > 1e-8);  // flows genuinely differ

    // mismatched trajectories are rejected
    PeTrajectory shorter = solve_pe(initial_default(g), 0.04, 5e-3);
    CHECK_THROWS_AS(difference_direct(nse2, shorter), std::invalid_argument);
}

TEST_CASE("picard: zero forcing fixed point in one sweep") {
    Grid g = Grid::make3d(16, 16);
    PeTrajectory zero = solve_pe(initial_zero(g), 0.1, 0.01);
    PicardResult r = solve_difference_picard(zero, 0.5);
    CHECK(r.converged);
    CHECK(r.iterations == 1);
    for (const auto& s : r.traj.states) {
        CHECK(max_abs(s.V1) == 0.0);
        CHECK(max_abs(s.eW) == 0.0);
    }
}

TEST_CASE("picard: linearized single-mode forcing against the closed form") {
    Grid g = Grid::make3d(16, 16);
    // frozen flow u = 0; forcing F~(s) = e^{-lambda s} cos(x1) cos(x3)
    const double lambda = 0.7, eps = 0.4;
    auto run = [&](double dt) {
        const long m = std::lround(0.2 / dt);
        PeTrajectory pe;
        pe.grid = g;
        pe.dt = dt;
        std::vector<SpectralField> ft;
        for (long k = 0; k <= m; ++k) {
            HydroState s;
            s.v1 = SpectralField(g);
            s.v2 = SpectralField(g);
            s.w = SpectralField(g);
            s.time = k * dt;
            pe.states.push_back(s);
            SpectralField f(g);
            const double amp = std::exp(-lambda * k * dt);
            f.mode_ref(1, 0, 1) = 0.25 * amp;
            f.mode_ref(-1, 0, -1) = 0.25 * amp;
            f.mode_ref(1, 0, -1) = 0.25 * amp;
            f.mode_ref(-1, 0, 1) = 0.25 * amp;
            ft.push_back(f);
        }
        PicardOptions opt;
        opt.drop_self_term = true;
        return solve_difference_picard(pe, ft, eps, opt);
    };
    // closed form per mode k: int_0^t e^{-|k|^2 (t-s)} e^{-lambda s} ds times
    // the projection column (-k1 k3/eps, -k2 k3/eps, |k'|^2) / |k_eps|^2
    auto closed_eW = [&](double t) {
        const double k2 = 2.0;  // |(1,0,1)|^2
        const double scalar =
            (std::exp(-lambda * t) - std::exp(-k2 * t)) / (k2 - lambda);
        const double ke2 = 1.0 + 1.0 / (eps * eps);
        return eps * scalar * (1.0 / ke2) * 0.25;
    };
    PicardResult r1 = run(2e-3);
    PicardResult r2 = run(1e-3);
    CHECK(r1.converged);
    CHECK(r1.iterations <= 3);
    const double t_end = 0.2;
    const double got1 = r1.traj.states.back().eW.at_mode(1, 0, 1).real();
    const double got2 = r2.traj.states.back().eW.at_mode(1, 0, 1).real();
    const double want = closed_eW(t_end);
    CHECK(std::abs(got1 - want) > 1e-14);  // quadrature error is visible...
    CHECK(std::abs(got1 - want) / std::abs(got2 - want) > 3.5);  // ...and O(ds^2)
    CHECK(got2 == doctest::Approx(want).epsilon(1e-4));
}

TEST_CASE("picard agrees with the direct difference and contracts geometrically") {
    Grid g = Grid::make3d(16, 16);
    const double eps = 0.1;
    PeTrajectory pe = solve_pe(initial_default(g), 0.25, 2.5e-3);
    NseTrajectory nse =
        solve_scaled_nse(initial_default(g), nullptr, eps, 0.25, 2.5e-3);
    DiffTrajectory direct = difference_direct(nse, pe);
    PicardResult pr = solve_difference_picard(pe, eps);
    CHECK(pr.converged);

    NormReport a = fujita_kato_report(direct, 1.0);
    NormReport b = fujita_kato_report(pr.traj, 1.0);
    CHECK(std::abs(a.total - b.total) / a.total < 0.15);

    // geometric contraction: log-updates fit a line with negative slope
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i + 1 < pr.update_norms.size(); ++i) {
        if (pr.update_norms[i] <= 0) break;
        xs.push_back(double(i));
        ys.push_back(std::log(pr.update_norms[i]));
    }
    REQUIRE(xs.size() >= 3);
    LinFit fit = ols_fit(xs, ys);
    CHECK(fit.slope < -0.5);
    CHECK(fit.r2 > 0.9);

    // div_eps-freeness of the fixed point
    for (const auto& s : pr.traj.states) CHECK(div_eps_defect(s) < 1e-11);
}

TEST_CASE("segmented restart reproduces the single-segment fixed point") {
    Grid g = Grid::make3d(16, 16);
    PeTrajectory pe = solve_pe(initial_default(g), 0.2, 2.5e-3);
    PicardOptions one;
    PicardOptions four;
    four.segments = 4;
    PicardResult a = solve_difference_picard(pe, 0.1, one);
    PicardResult b = solve_difference_picard(pe, 0.1, four);
    CHECK(a.converged);
    CHECK(b.converged);
    NormReport ra = fujita_kato_report(a.traj, 1.0);
    NormReport rb = fujita_kato_report(b.traj, 1.0);
    CHECK(std::abs(ra.total - rb.total) / ra.total < 0.01);
}

TEST_CASE("fujita-kato report: zero trajectory and scaling homogeneity") {
    Grid g = Grid::make3d(16, 16);
    DiffTrajectory z;
    z.grid = g;
    z.dt = 0.1;
    z.epsilon = 0.5;
    for (int k = 0; k < 3; ++k) {
        DifferenceState s;
        s.V1 = SpectralField(g);
        s.V2 = SpectralField(g);
        s.eW = SpectralField(g);
        s.epsilon = 0.5;
        s.time = 0.1 * k;
        z.states.push_back(s);
    }
    NormReport rz = fujita_kato_report(z, 1.0);
    CHECK(rz.total == 0.0);

    Rng rng(3);
    DiffTrajectory t = z;
    for (auto& s : t.states) {
        s.V1 = random_band_limited(g, rng);
        s.V2 = random_band_limited(g, rng);
        s.eW = random_band_limited(g, rng);
    }
    NormReport r1 = fujita_kato_report(t, 1.0);
    DiffTrajectory t2 = t;
    for (auto& s : t2.states) {
        s.V1 *= 3.0;
        s.V2 *= 3.0;
        s.eW *= 3.0;
    }
    NormReport r2 = fujita_kato_report(t2, 1.0);
    CHECK(r2.total == doctest::Approx(3.0 * r1.total).epsilon(1e-12));
    CHECK(r2.sup_V == doctest::Approx(3.0 * r1.sup_V).epsilon(1e-12));
}
