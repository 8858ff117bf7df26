#include "hydrostat/spectral_core.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace hydrostat {

namespace {

void check_axis_size(int n) {
    if (n < 8 || n % 2 != 0)
        throw std::invalid_argument("grid axis size must be even and >= 8, got " +
                                    std::to_string(n));
}

// FFTW plans keyed by dims; planning is serialized, execution is not.
class PlanCache {
  public:
    static PlanCache& instance() {
        static PlanCache c;
        return c;
    }

    struct Plans {
        fftw_plan fwd = nullptr;
        fftw_plan bwd = nullptr;
    };

    Plans get(const Grid& g) {
        const std::array<int, 3> key{g.dim(0), g.dim(1), g.dim(2)};
        std::lock_guard<std::mutex> lock(mtx_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;

        std::vector<fftw_complex> a(g.size()), b(g.size());
        int dims[3] = {g.dim(0), g.dim(1), g.dim(2)};
        const int rank = g.ndim();  // unused trailing dims are 1
        Plans p;
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        p.fwd = fftw_plan_dft(rank, dims, a.data(), b.data(), FFTW_FORWARD, flags);
        p.bwd = fftw_plan_dft(rank, dims, a.data(), b.data(), FFTW_BACKWARD, flags);
        cache_[key] = p;
        return p;
    }

  private:
    PlanCache() = default;
    std::mutex mtx_;
    std::map<std::array<int, 3>, Plans> cache_;
};

// Grid samples sit at x = -pi + j h while the DFT assumes x = j h, so true
// coefficients pick up the phase (-1)^(k0+k1+k2).
inline double origin_sign(const std::array<int, 3>& k) {
    return ((k[0] + k[1] + k[2]) & 1) ? -1.0 : 1.0;
}

}  // namespace

Grid Grid::make3d(int n_h, int n_v) {
    check_axis_size(n_h);
    check_axis_size(n_v);
    Grid g;
    g.nd_ = 3;
    g.n_ = {n_h, n_h, n_v};
    g.role_ = {AxisRole::Horizontal, AxisRole::Horizontal, AxisRole::Vertical};
    g.vertical_axis_ = 2;
    g.size_ = static_cast<std::size_t>(n_h) * n_h * n_v;
    return g;
}

Grid Grid::make2d(int n_h) {
    check_axis_size(n_h);
    Grid g;
    g.nd_ = 2;
    g.n_ = {n_h, n_h, 1};
    g.role_ = {AxisRole::Horizontal, AxisRole::Horizontal, AxisRole::Horizontal};
    g.vertical_axis_ = -1;
    g.size_ = static_cast<std::size_t>(n_h) * n_h;
    return g;
}

Grid Grid::make1d(int n, AxisRole role) {
    check_axis_size(n);
    Grid g;
    g.nd_ = 1;
    g.n_ = {n, 1, 1};
    g.role_ = {role, AxisRole::Horizontal, AxisRole::Horizontal};
    g.vertical_axis_ = role == AxisRole::Vertical ? 0 : -1;
    g.size_ = static_cast<std::size_t>(n);
    return g;
}

namespace {
inline std::size_t mode_index(const Grid& g, int k0, int k1, int k2) {
    std::array<int, 3> k{k0, k1, k2};
    std::array<int, 3> idx{0, 0, 0};
    for (int a = 0; a < 3; ++a) {
        int m = k[a];
        if (m < 0) m += g.dim(a);
        idx[a] = m;
    }
    return g.index(idx[0], idx[1], idx[2]);
}
}  // namespace

complex SpectralField::at_mode(int k0, int k1, int k2) const {
    return coeffs[mode_index(grid, k0, k1, k2)];
}

complex& SpectralField::mode_ref(int k0, int k1, int k2) {
    return coeffs[mode_index(grid, k0, k1, k2)];
}

PhysicalField sample(const Grid& g, double (*fn)(double, double, double)) {
    return sample_fn(g, fn);
}

SpectralField forward(const PhysicalField& f) {
    const Grid& g = f.grid;
    SpectralField out(g);
    std::vector<complex> in(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) in[i] = f.values[i];
    auto plans = PlanCache::instance().get(g);
    fftw_execute_dft(plans.fwd, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.coeffs.data()));
    const double inv_n = 1.0 / static_cast<double>(g.size());
    for_each_mode(g, [&](const std::array<int, 3>& k, std::size_t i) {
        out.coeffs[i] *= inv_n * origin_sign(k);
    });
    return out;
}

PhysicalField inverse(const SpectralField& F) {
    const Grid& g = F.grid;
    std::vector<complex> in(g.size()), out(g.size());
    for_each_mode(g, [&](const std::array<int, 3>& k, std::size_t i) {
        in[i] = F.coeffs[i] * origin_sign(k);
    });
    auto plans = PlanCache::instance().get(g);
    fftw_execute_dft(plans.bwd, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    PhysicalField f(g);
    for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = out[i].real();
    return f;
}

SpectralField derivative(const SpectralField& F, int axis, int order) {
    if (order < 1) throw std::invalid_argument("derivative order must be >= 1");
    const Grid& g = F.grid;
    const int nyq = g.nyquist(axis);
    const bool odd = (order % 2) != 0;
    SpectralField out(g);
    for_each_mode(g, [&](const std::array<int, 3>& k, std::size_t i) {
        const int ka = k[axis];
        if (odd && std::abs(ka) == nyq) {
            out.coeffs[i] = 0.0;
            return;
        }
        complex m = std::pow(complex(0.0, static_cast<double>(ka)), order);
        out.coeffs[i] = m * F.coeffs[i];
    });
    return out;
}

void dealias_in_place(SpectralField& F) {
    const Grid& g = F.grid;
    std::array<int, 3> cut{g.dealias_cutoff(0), g.dealias_cutoff(1),
                           g.dealias_cutoff(2)};
    for_each_mode(g, [&](const std::array<int, 3>& k, std::size_t i) {
        if (std::abs(k[0]) > cut[0] || std::abs(k[1]) > cut[1] ||
            std::abs(k[2]) > cut[2])
            F.coeffs[i] = 0.0;
    });
}

SpectralField dealias(const SpectralField& F) {
    SpectralField out = F;
    dealias_in_place(out);
    return out;
}

SpectralField dealiased_product(const SpectralField& a, const SpectralField& b) {
    if (a.grid != b.grid) throw std::invalid_argument("grid mismatch in product");
    // with both factors inside the 2/3 band, truncating the product removes
    // every aliased image, so the retained modes are exact
    PhysicalField pa = inverse(dealias(a)), pb = inverse(dealias(b));
    for (std::size_t i = 0; i < pa.values.size(); ++i) pa.values[i] *= pb.values[i];
    SpectralField out = forward(pa);
    dealias_in_place(out);
    return out;
}

SpectralField pad_to(const SpectralField& f, const Grid& fine) {
    if (fine.ndim() != f.grid.ndim())
        throw std::invalid_argument("pad_to: dimension mismatch");
    SpectralField out(fine);
    for_each_mode(f.grid, [&](const std::array<int, 3>& k, std::size_t i) {
        out.mode_ref(k[0], k[1], k[2]) = f.coeffs[i];
    });
    return out;
}

SpectralField restrict_to(const SpectralField& f, const Grid& coarse) {
    if (coarse.ndim() != f.grid.ndim())
        throw std::invalid_argument("restrict_to: dimension mismatch");
    SpectralField out(coarse);
    for_each_mode(coarse, [&](const std::array<int, 3>& k, std::size_t i) {
        out.coeffs[i] = f.at_mode(k[0], k[1], k[2]);
    });
    return out;
}

double l2_norm_physical(const PhysicalField& f) {
    double cell = 1.0;
    for (int a = 0; a < f.grid.ndim(); ++a) cell *= f.grid.spacing(a);
    double s = 0.0;
    for (double v : f.values) s += v * v;
    return std::sqrt(s * cell);
}

double l2_norm_spectral(const SpectralField& F) {
    double s = 0.0;
    for (const complex& c : F.coeffs) s += std::norm(c);
    return std::sqrt(s * std::pow(two_pi, F.grid.ndim()));
}

double max_abs(const PhysicalField& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

double max_abs(const SpectralField& F) {
    double m = 0.0;
    for (const complex& c : F.coeffs) m = std::max(m, std::abs(c));
    return m;
}

bool has_nan(const SpectralField& F) {
    for (const complex& c : F.coeffs)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return true;
    return false;
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
    SpectralField out = a;
    out += b;
    return out;
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
    SpectralField out = a;
    out -= b;
    return out;
}

SpectralField operator*(double s, const SpectralField& a) {
    SpectralField out = a;
    out *= s;
    return out;
}

SpectralField& operator+=(SpectralField& a, const SpectralField& b) {
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) a.coeffs[i] += b.coeffs[i];
    return a;
}

SpectralField& operator-=(SpectralField& a, const SpectralField& b) {
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) a.coeffs[i] -= b.coeffs[i];
    return a;
}

SpectralField& operator*=(SpectralField& a, double s) {
    for (auto& c : a.coeffs) c *= s;
    return a;
}

}  // namespace hydrostat
