#include "hydrostat/aniso_spaces.hpp"

#include <cmath>

namespace hydrostat {

namespace {

void require_3d(const Grid& g, const char* what) {
    if (g.ndim() != 3 || g.vertical_axis() != 2)
        throw std::invalid_argument(std::string(what) + " requires a 3D grid");
}

}  // namespace

double norm_linf_h_lq(const PhysicalField& f, double q) {
    if (q < 1.0) throw std::invalid_argument("norm exponent q must be >= 1");
    if (std::isinf(q)) return max_abs(f);
    const Grid& g = f.grid;
    require_3d(g, "norm_linf_h_lq");
    const int nv = g.dim(2);
    const double h = g.spacing(2);
    double best = 0.0;
    for (int i0 = 0; i0 < g.dim(0); ++i0)
        for (int i1 = 0; i1 < g.dim(1); ++i1) {
            const std::size_t base = g.index(i0, i1, 0);
            double s = 0.0;
            for (int i2 = 0; i2 < nv; ++i2)
                s += std::pow(std::abs(f.values[base + i2]), q);
            best = std::max(best, s * h);
        }
    return std::pow(best, 1.0 / q);
}

double norm_linf_h_lq(const SpectralField& f, double q) {
    return norm_linf_h_lq(inverse(f), q);
}

PhysicalField vertical_average(const PhysicalField& f) {
    const Grid& g = f.grid;
    require_3d(g, "vertical_average");
    PhysicalField out(Grid::make2d(g.dim(0)));
    const int nv = g.dim(2);
    for (int i0 = 0; i0 < g.dim(0); ++i0)
        for (int i1 = 0; i1 < g.dim(1); ++i1) {
            const std::size_t base = g.index(i0, i1, 0);
            double s = 0.0;
            for (int i2 = 0; i2 < nv; ++i2) s += f.values[base + i2];
            out.values[out.grid.index(i0, i1)] = s / nv;
        }
    return out;
}

PhysicalField fluctuation(const PhysicalField& f) {
    const Grid& g = f.grid;
    PhysicalField avg = vertical_average(f);
    PhysicalField out(g);
    const int nv = g.dim(2);
    for (int i0 = 0; i0 < g.dim(0); ++i0)
        for (int i1 = 0; i1 < g.dim(1); ++i1) {
            const double m = avg.values[avg.grid.index(i0, i1)];
            const std::size_t base = g.index(i0, i1, 0);
            for (int i2 = 0; i2 < nv; ++i2)
                out.values[base + i2] = f.values[base + i2] - m;
        }
    return out;
}

SpectralField vertical_antiderivative_meanfree(const SpectralField& f) {
    const Grid& g = f.grid;
    require_3d(g, "vertical_antiderivative");
    const int nv = g.dim(2);
    const int nyq = nv / 2;
    SpectralField out(g);
    for (int i0 = 0; i0 < g.dim(0); ++i0)
        for (int i1 = 0; i1 < g.dim(1); ++i1) {
            const std::size_t base = g.index(i0, i1, 0);
            complex boundary = 0.0;
            for (int i2 = 1; i2 < nv; ++i2) {
                const int k = g.wavenumber(2, i2);
                if (std::abs(k) == nyq) continue;
                const complex c = f.coeffs[base + i2];
                const complex integ = c / complex(0.0, static_cast<double>(k));
                out.coeffs[base + i2] = integ;
                // value of the primitive at x3 = -pi: e^{-i k pi} = (-1)^k
                boundary -= integ * ((k & 1) ? -1.0 : 1.0);
            }
            out.coeffs[base + 0] = boundary;
        }
    return out;
}

PhysicalField vertical_antiderivative(const PhysicalField& f) {
    const Grid& g = f.grid;
    require_3d(g, "vertical_antiderivative");
    SpectralField F = forward(f);
    PhysicalField mean2d(Grid::make2d(g.dim(0)));
    {
        PhysicalField avg = vertical_average(f);
        mean2d.values = avg.values;
    }
    // periodic part from nonzero vertical modes
    SpectralField fluct = F;
    for (int i0 = 0; i0 < g.dim(0); ++i0)
        for (int i1 = 0; i1 < g.dim(1); ++i1) fluct.coeffs[g.index(i0, i1, 0)] = 0.0;
    PhysicalField out = inverse(vertical_antiderivative_meanfree(fluct));
    // exact linear ramp from the vertical mean
    const int nv = g.dim(2);
    const double h = g.spacing(2);
    for (int i0 = 0; i0 < g.dim(0); ++i0)
        for (int i1 = 0; i1 < g.dim(1); ++i1) {
            const double m = mean2d.values[mean2d.grid.index(i0, i1)];
            const std::size_t base = g.index(i0, i1, 0);
            for (int i2 = 0; i2 < nv; ++i2)
                out.values[base + i2] += m * (h * i2);  // x3 + pi = i2*h
        }
    return out;
}

SpectralField vertical_fluct_spectral(const SpectralField& f) {
    const Grid& g = f.grid;
    require_3d(g, "vertical_fluct_spectral");
    SpectralField out = f;
    for (int i0 = 0; i0 < g.dim(0); ++i0)
        for (int i1 = 0; i1 < g.dim(1); ++i1) out.coeffs[g.index(i0, i1, 0)] = 0.0;
    return out;
}

SpectralField lift_horizontal(const SpectralField& f2d, const Grid& g3) {
    require_3d(g3, "lift_horizontal");
    if (f2d.grid.ndim() != 2 || f2d.grid.dim(0) != g3.dim(0))
        throw std::invalid_argument("lift_horizontal: incompatible grids");
    SpectralField out(g3);
    for (int i0 = 0; i0 < g3.dim(0); ++i0)
        for (int i1 = 0; i1 < g3.dim(1); ++i1)
            out.coeffs[g3.index(i0, i1, 0)] = f2d.coeffs[f2d.grid.index(i0, i1)];
    return out;
}

SpectralField restrict_to_mean(const SpectralField& f3d, const Grid& g2) {
    require_3d(f3d.grid, "restrict_to_mean");
    SpectralField out(g2);
    for (int i0 = 0; i0 < g2.dim(0); ++i0)
        for (int i1 = 0; i1 < g2.dim(1); ++i1)
            out.coeffs[g2.index(i0, i1)] = f3d.coeffs[f3d.grid.index(i0, i1, 0)];
    return out;
}

namespace {

double max_component_norm(const TimeSample& s, double q) {
    double m = 0.0;
    for (const SpectralField* c : s.comps) m = std::max(m, norm_linf_h_lq(*c, q));
    return m;
}

double max_gradient_norm(const TimeSample& s, double q, bool horizontal_only) {
    double m = 0.0;
    const int last_axis = horizontal_only ? 1 : 2;
    for (const SpectralField* c : s.comps)
        for (int a = 0; a <= last_axis; ++a)
            m = std::max(m, norm_linf_h_lq(derivative(*c, a), q));
    return m;
}

double max_grad_gradH_norm(const TimeSample& s, double q) {
    double m = 0.0;
    for (const SpectralField* c : s.comps)
        for (int ah = 0; ah <= 1; ++ah) {
            SpectralField dh = derivative(*c, ah);
            for (int b = 0; b <= 2; ++b)
                m = std::max(m, norm_linf_h_lq(derivative(dh, b), q));
        }
    return m;
}

}  // namespace

double weighted_sup(const std::vector<TimeSample>& traj, const AnisoNormSpec& spec) {
    if (traj.empty()) throw std::invalid_argument("empty trajectory");
    double best = 0.0;
    for (const TimeSample& s : traj) {
        const double w =
            spec.time_weight == 0.0 ? 1.0 : std::pow(s.time, spec.time_weight);
        const double n = spec.with_gradient ? max_gradient_norm(s, spec.q, false)
                                            : max_component_norm(s, spec.q);
        best = std::max(best, w * n);
    }
    return best;
}

TrajectoryFunctionals trajectory_functionals(const std::vector<TimeSample>& traj,
                                             double q) {
    if (traj.empty()) throw std::invalid_argument("empty trajectory");
    TrajectoryFunctionals out;
    double sup_n = 0.0, sup_tg = 0.0, sup_h = 0.0, sup_thh = 0.0;
    for (const TimeSample& s : traj) {
        const double w = std::sqrt(std::max(s.time, 0.0));
        const double n0 = max_component_norm(s, q);
        const double n1 = max_gradient_norm(s, q, false);
        out.norm_samples.push_back(n0);
        out.grad_norm_samples.push_back(n1);
        sup_n = std::max(sup_n, n0);
        sup_tg = std::max(sup_tg, w * n1);
        sup_h = std::max(sup_h, max_gradient_norm(s, q, true));
        sup_thh = std::max(sup_thh, w * max_grad_gradH_norm(s, q));
    }
    out.x_value = sup_n + sup_tg;
    out.y_value = sup_n + sup_h + sup_thh;
    return out;
}

}  // namespace hydrostat
