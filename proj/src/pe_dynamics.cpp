#include "hydrostat/pe_dynamics.hpp"

#include <cmath>
#include <sstream>

namespace hydrostat {

std::vector<TimeSample> PeTrajectory::samples() const {
    std::vector<TimeSample> out;
    out.reserve(states.size());
    for (const auto& s : states)
        out.push_back(TimeSample{s.time, {&s.v1, &s.v2, &s.w}});
    return out;
}

std::vector<TimeSample> PeTrajectory::samples_v() const {
    std::vector<TimeSample> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(TimeSample{s.time, {&s.v1, &s.v2}});
    return out;
}

double HydroDefects::max() const {
    return std::max(w_defect, std::max(barotropic_defect, divergence_defect));
}

SpectralField div_h(const SpectralVec2& v) {
    SpectralField out = derivative(v[0], 0);
    out += derivative(v[1], 1);
    return out;
}

SpectralField advect_phys(const PhysicalField& a1, const PhysicalField& a2,
                          const PhysicalField* a3, const SpectralField& b) {
    PhysicalField g1 = inverse(derivative(b, 0));
    PhysicalField g2 = inverse(derivative(b, 1));
    PhysicalField acc(b.grid);
    if (a3) {
        PhysicalField g3 = inverse(derivative(b, 2));
        for (std::size_t i = 0; i < acc.values.size(); ++i)
            acc.values[i] = a1.values[i] * g1.values[i] + a2.values[i] * g2.values[i] +
                            a3->values[i] * g3.values[i];
    } else {
        for (std::size_t i = 0; i < acc.values.size(); ++i)
            acc.values[i] = a1.values[i] * g1.values[i] + a2.values[i] * g2.values[i];
    }
    SpectralField out = forward(acc);
    dealias_in_place(out);
    return out;
}

SpectralField reconstruct_w(const SpectralVec2& v, double tol) {
    SpectralField d = div_h(v);
    // barotropic part of div_H v must vanish for w to be periodic
    double defect = 0.0;
    const Grid& g = d.grid;
    for (int i0 = 0; i0 < g.dim(0); ++i0)
        for (int i1 = 0; i1 < g.dim(1); ++i1)
            defect = std::max(defect, std::abs(d.coeffs[g.index(i0, i1, 0)]));
    if (defect > tol) {
        std::ostringstream msg;
        msg << "reconstruct_w: div_H of the vertical mean is " << defect
            << " (tolerance " << tol << ")";
        throw SolverError(msg.str());
    }
    SpectralField w = vertical_antiderivative_meanfree(d);
    w *= -1.0;
    return w;
}

SpectralVec2 hydrostatic_project(const SpectralVec2& f) {
    const Grid& g = f[0].grid;
    SpectralField m = div_h(f);  // only its k3 = 0 plane is used
    SpectralVec2 out = f;
    const int nyq0 = g.nyquist(0), nyq1 = g.nyquist(1);
    for (int i0 = 0; i0 < g.dim(0); ++i0) {
        const int k0 = g.wavenumber(0, i0);
        for (int i1 = 0; i1 < g.dim(1); ++i1) {
            const int k1 = g.wavenumber(1, i1);
            if ((k0 == 0 && k1 == 0) || std::abs(k0) == nyq0 || std::abs(k1) == nyq1)
                continue;
            const std::size_t idx = g.index(i0, i1, 0);
            const double kh2 = double(k0) * k0 + double(k1) * k1;
            // Lap_H pi = m, so div_H of the averaged output vanishes per mode
            const complex pi_hat = -m.coeffs[idx] / kh2;
            out[0].coeffs[idx] -= complex(0.0, k0) * pi_hat;
            out[1].coeffs[idx] -= complex(0.0, k1) * pi_hat;
        }
    }
    return out;
}

namespace {

struct PhysState {
    PhysicalField v1, v2, w;
};

PhysState to_phys(const HydroState& s) {
    return {inverse(s.v1), inverse(s.v2), inverse(s.w)};
}

// -(v . grad_H v + w d3 v), not yet projected
SpectralVec2 pe_nonlinearity(const HydroState& s) {
    PhysState p = to_phys(s);
    SpectralVec2 out{advect_phys(p.v1, p.v2, &p.w, s.v1),
                     advect_phys(p.v1, p.v2, &p.w, s.v2)};
    out[0] *= -1.0;
    out[1] *= -1.0;
    return out;
}

SpectralField heat_field(const SpectralField& f, double t) { return apply_heat(f, t); }

}  // namespace

SpectralVec2 pe_rhs(const HydroState& s) {
    return hydrostatic_project(pe_nonlinearity(s));
}

HydroDefects hydro_defects(const HydroState& s) {
    HydroDefects d;
    SpectralField dh = div_h({s.v1, s.v2});
    const Grid& g = dh.grid;
    for (int i0 = 0; i0 < g.dim(0); ++i0)
        for (int i1 = 0; i1 < g.dim(1); ++i1)
            d.barotropic_defect = std::max(
                d.barotropic_defect, std::abs(dh.coeffs[g.index(i0, i1, 0)]));
    SpectralField div3 = dh + derivative(s.w, 2);
    d.divergence_defect = max_abs(div3);
    SpectralField w_ref = vertical_antiderivative_meanfree(dh);
    w_ref *= -1.0;
    d.w_defect = max_abs(s.w - w_ref);
    return d;
}

PeTrajectory solve_pe(const SpectralVec2& v0, double T, double dt,
                      const PeSolveOptions& opt) {
    if (!(dt > 0.0) || T < dt) throw std::invalid_argument("solve_pe: need 0 < dt <= T");
    const long n_steps = std::lround(T / dt);
    if (std::abs(n_steps * dt - T) > 1e-9 * T)
        throw std::invalid_argument("solve_pe: dt must divide T");
    if (opt.store_stride < 1 || n_steps % opt.store_stride != 0)
        throw std::invalid_argument("solve_pe: store stride must divide the step count");

    const Grid& g = v0[0].grid;
    PeTrajectory traj;
    traj.grid = g;
    traj.dt = dt * opt.store_stride;

    HydroState s;
    s.v1 = dealias(v0[0]);
    s.v2 = dealias(v0[1]);
    s.w = reconstruct_w({s.v1, s.v2});
    s.time = 0.0;

    auto store = [&](const HydroState& st) {
        HydroDefects d = hydro_defects(st);
        if (d.max() > opt.invariant_tol || has_nan(st.v1) || has_nan(st.v2)) {
            std::ostringstream msg;
            msg << "solve_pe: invariant drift at t=" << st.time
                << " (w " << d.w_defect << ", barotropic " << d.barotropic_defect
                << ", divergence " << d.divergence_defect << ")";
            if (has_nan(st.v1) || has_nan(st.v2)) msg << " with NaN state";
            throw SolverError(msg.str());
        }
        traj.states.push_back(st);
    };
    store(s);

    const double half = 0.5 * dt;
    for (long n = 0; n < n_steps; ++n) {
        SpectralVec2 r0 = pe_rhs(s);
        HydroState mid;
        mid.v1 = heat_field(s.v1, half) + half * heat_field(r0[0], half);
        mid.v2 = heat_field(s.v2, half) + half * heat_field(r0[1], half);
        mid.w = reconstruct_w({mid.v1, mid.v2});
        mid.time = s.time + half;

        SpectralVec2 rm = pe_rhs(mid);
        HydroState next;
        next.v1 = heat_field(s.v1, dt) + dt * heat_field(rm[0], half);
        next.v2 = heat_field(s.v2, dt) + dt * heat_field(rm[1], half);
        next.w = reconstruct_w({next.v1, next.v2});
        next.time = s.time + dt;
        s = std::move(next);
        if ((n + 1) % opt.store_stride == 0) store(s);
    }
    return traj;
}

SpectralField compute_F(const HydroState& s) {
    PhysState p = to_phys(s);
    SpectralVec2 q{advect_phys(p.v1, p.v2, &p.w, s.v1),
                   advect_phys(p.v1, p.v2, &p.w, s.v2)};
    SpectralField dq = vertical_fluct_spectral(div_h(q));
    return vertical_antiderivative_meanfree(dq);
}

namespace {

// Expanded assembly without vertical derivatives: the w d3 v term is traded
// for div_H(w v~) plus the antiderivative of div_H((div_H v~) v~).
SpectralField compute_F_expanded(const HydroState& s) {
    const Grid& g = s.v1.grid;
    SpectralField vt1 = vertical_fluct_spectral(s.v1);
    SpectralField vt2 = vertical_fluct_spectral(s.v2);
    SpectralField vb1 = s.v1 - vt1;
    SpectralField vb2 = s.v2 - vt2;

    PhysicalField pt1 = inverse(vt1), pt2 = inverse(vt2);
    PhysicalField pb1 = inverse(vb1), pb2 = inverse(vb2);

    // T1 = v~ . grad_H v~
    SpectralVec2 t1{advect_phys(pt1, pt2, nullptr, vt1),
                    advect_phys(pt1, pt2, nullptr, vt2)};
    SpectralField f1 =
        vertical_antiderivative_meanfree(vertical_fluct_spectral(div_h(t1)));

    // antiderivative of the fluctuation, per component
    SpectralField ia1 = vertical_antiderivative_meanfree(vt1);
    SpectralField ia2 = vertical_antiderivative_meanfree(vt2);
    PhysicalField pia1 = inverse(ia1), pia2 = inverse(ia2);

    // F2 = div_H( (int v~) . grad_H vbar ),  F3 = div_H( vbar . grad_H (int v~) )
    SpectralVec2 b2{advect_phys(pia1, pia2, nullptr, vb1),
                    advect_phys(pia1, pia2, nullptr, vb2)};
    SpectralVec2 b3{advect_phys(pb1, pb2, nullptr, ia1),
                    advect_phys(pb1, pb2, nullptr, ia2)};
    SpectralField f23 = div_h(b2) + div_h(b3);

    // F4 = div_H(w v~)
    PhysicalField pw = inverse(s.w);
    PhysicalField wv1(g), wv2(g);
    for (std::size_t i = 0; i < pw.values.size(); ++i) {
        wv1.values[i] = pw.values[i] * pt1.values[i];
        wv2.values[i] = pw.values[i] * pt2.values[i];
    }
    SpectralField swv1 = forward(wv1);
    dealias_in_place(swv1);
    SpectralField swv2 = forward(wv2);
    dealias_in_place(swv2);
    SpectralField f4 = div_h({swv1, swv2});

    // T5 = (div_H v~) v~
    PhysicalField pdvt = inverse(div_h({vt1, vt2}));
    PhysicalField t5a(g), t5b(g);
    for (std::size_t i = 0; i < pdvt.values.size(); ++i) {
        t5a.values[i] = pdvt.values[i] * pt1.values[i];
        t5b.values[i] = pdvt.values[i] * pt2.values[i];
    }
    SpectralField st5a = forward(t5a);
    dealias_in_place(st5a);
    SpectralField st5b = forward(t5b);
    dealias_in_place(st5b);
    SpectralField f5 =
        vertical_antiderivative_meanfree(vertical_fluct_spectral(div_h({st5a, st5b})));

    SpectralField out = f1;
    out += f23;
    out += f4;
    out += f5;
    return out;
}

}  // namespace

SpectralField compute_F_tilde(const HydroState& s, FTildeForm form) {
    // The two routes are tied by an integration by parts whose boundary row
    // mixes every vertical mode of the quadratic products, so the products
    // are evaluated on a twice-padded grid (where nothing is truncated) and
    // only the final field is restricted and dealiased.
    const Grid& g = s.v1.grid;
    const Grid fine = Grid::make3d(2 * g.dim(0), 2 * g.dim(2));
    HydroState sf;
    sf.v1 = pad_to(s.v1, fine);
    sf.v2 = pad_to(s.v2, fine);
    sf.w = pad_to(s.w, fine);
    sf.time = s.time;
    PhysState p = to_phys(sf);

    SpectralField f(fine);
    if (form == FTildeForm::definition) {
        f = compute_F(sf);
        f += advect_phys(p.v1, p.v2, &p.w, sf.w);
    } else {
        // vertical-derivative-free route:
        // w d3 w = (int_{-pi}^{x3} div_H v dz) div_H v
        f = compute_F_expanded(sf);
        f += advect_phys(p.v1, p.v2, nullptr, sf.w);
        SpectralField dv = div_h({sf.v1, sf.v2});
        SpectralField adv = vertical_antiderivative_meanfree(dv);
        f += dealiased_product(adv, dv);
    }
    f *= -1.0;
    SpectralField out = restrict_to(f, g);
    dealias_in_place(out);
    return out;
}

WResidualReport check_w_equation(const PeTrajectory& traj) {
    if (traj.states.size() < 3)
        throw std::invalid_argument("check_w_equation: need at least 3 stored states");
    const double h = traj.dt;
    WResidualReport rep;
    double l2_acc = 0.0;
    for (std::size_t k = 1; k + 1 < traj.states.size(); ++k) {
        const HydroState& s = traj.states[k];
        SpectralField dtw = traj.states[k + 1].w - traj.states[k - 1].w;
        dtw *= 1.0 / (2.0 * h);
        SpectralField lap = derivative(s.w, 0, 2) + derivative(s.w, 1, 2) +
                            derivative(s.w, 2, 2);
        SpectralField r = dtw - lap - compute_F(s);
        PhysicalField rp = inverse(r);
        rep.max_residual = std::max(rep.max_residual, max_abs(rp));
        const double l2 = l2_norm_physical(rp);
        l2_acc += l2 * l2;
        ++rep.interior_samples;
    }
    rep.l2_residual = std::sqrt(l2_acc / std::max(rep.interior_samples, 1));
    return rep;
}

SpectralVec2 initial_default(const Grid& g) {
    PhysicalField a = sample_fn(g, [](double x1, double x2, double x3) {
        return std::sin(x1) * std::cos(x3) + 0.5 * std::sin(x2);
    });
    PhysicalField b = sample_fn(g, [](double x1, double x2, double x3) {
        return -std::cos(x1) * std::sin(x2) * std::cos(x3);
    });
    SpectralVec2 v{forward(a), forward(b)};
    dealias_in_place(v[0]);
    dealias_in_place(v[1]);
    return hydrostatic_project(v);
}

SpectralVec2 initial_zero(const Grid& g) {
    return {SpectralField(g), SpectralField(g)};
}

SpectralVec2 initial_single_mode(const Grid& g, double amplitude) {
    PhysicalField a = sample_fn(g, [amplitude](double, double x2, double) {
        return amplitude * std::sin(x2);
    });
    SpectralVec2 v{forward(a), SpectralField(g)};
    dealias_in_place(v[0]);
    return v;
}

}  // namespace hydrostat
