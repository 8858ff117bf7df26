#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

// Periodic pseudo-spectral kernel: grids on [-pi,pi)^d, unnormalized-inverse
// DFTs (forward carries 1/N so coefficients are true Fourier coefficients of
// the 2pi-periodic function), spectral differentiation and 2/3-rule dealiasing.

namespace hydrostat {

using complex = std::complex<double>;

constexpr double pi = 3.14159265358979323846;
constexpr double two_pi = 2.0 * pi;

enum class AxisRole { Horizontal, Vertical };

class Grid {
  public:
    // 3D grid, axes (x1,x2) horizontal with n_h points each, x3 vertical.
    static Grid make3d(int n_h, int n_v);
    // 2D horizontal grid (used for barotropic scalars).
    static Grid make2d(int n_h);
    // 1D grid (kernel studies); role selectable.
    static Grid make1d(int n, AxisRole role = AxisRole::Vertical);

    int ndim() const { return nd_; }
    int dim(int axis) const { return n_[axis]; }
    std::size_t size() const { return size_; }
    double spacing(int axis) const { return two_pi / n_[axis]; }
    AxisRole role(int axis) const { return role_[axis]; }
    int vertical_axis() const { return vertical_axis_; }  // -1 if none

    // Grid point coordinate along an axis: x = -pi + i * spacing.
    double coord(int axis, int i) const { return -pi + spacing(axis) * i; }

    // Integer wavenumber of FFT index m along an axis: in {-n/2+1, ..., n/2}.
    int wavenumber(int axis, int m) const {
        const int n = n_[axis];
        return m <= n / 2 ? m : m - n;
    }
    int nyquist(int axis) const { return n_[axis] / 2; }
    int dealias_cutoff(int axis) const { return n_[axis] / 3; }

    std::size_t index(int i0, int i1 = 0, int i2 = 0) const {
        return (static_cast<std::size_t>(i0) * n_[1] + i1) * n_[2] + i2;
    }

    bool operator==(const Grid& o) const {
        return nd_ == o.nd_ && n_ == o.n_ && vertical_axis_ == o.vertical_axis_;
    }
    bool operator!=(const Grid& o) const { return !(*this == o); }

  private:
    int nd_ = 0;
    std::array<int, 3> n_{1, 1, 1};
    std::array<AxisRole, 3> role_{AxisRole::Horizontal, AxisRole::Horizontal,
                                  AxisRole::Vertical};
    int vertical_axis_ = -1;
    std::size_t size_ = 0;
};

struct PhysicalField {
    Grid grid;
    std::vector<double> values;

    PhysicalField() = default;
    explicit PhysicalField(const Grid& g) : grid(g), values(g.size(), 0.0) {}

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
};

struct SpectralField {
    Grid grid;
    std::vector<complex> coeffs;

    SpectralField() = default;
    explicit SpectralField(const Grid& g) : grid(g), coeffs(g.size(), complex{}) {}

    complex& operator[](std::size_t i) { return coeffs[i]; }
    complex operator[](std::size_t i) const { return coeffs[i]; }

    // Coefficient at integer wavenumber k (any k in the grid's range).
    complex at_mode(int k0, int k1 = 0, int k2 = 0) const;
    complex& mode_ref(int k0, int k1 = 0, int k2 = 0);
};

// Visit every mode: f(k, flat_index) with k the integer wavenumber vector.
template <class F>
void for_each_mode(const Grid& g, F&& f) {
    std::size_t idx = 0;
    for (int i0 = 0; i0 < g.dim(0); ++i0) {
        const int k0 = g.wavenumber(0, i0);
        for (int i1 = 0; i1 < g.dim(1); ++i1) {
            const int k1 = g.wavenumber(1, i1);
            for (int i2 = 0; i2 < g.dim(2); ++i2, ++idx)
                f(std::array<int, 3>{k0, k1, g.wavenumber(2, i2)}, idx);
        }
    }
}

// Visit every grid point: f(x, flat_index) with x the coordinates.
template <class F>
void for_each_point(const Grid& g, F&& f) {
    std::size_t idx = 0;
    for (int i0 = 0; i0 < g.dim(0); ++i0) {
        const double x0 = g.coord(0, i0);
        for (int i1 = 0; i1 < g.dim(1); ++i1) {
            const double x1 = g.coord(1, i1);
            for (int i2 = 0; i2 < g.dim(2); ++i2, ++idx)
                f(std::array<double, 3>{x0, x1, g.coord(2, i2)}, idx);
        }
    }
}

PhysicalField sample(const Grid& g, double (*fn)(double, double, double));

template <class Fn>
PhysicalField sample_fn(const Grid& g, Fn&& fn) {
    PhysicalField f(g);
    for_each_point(g, [&](const std::array<double, 3>& x, std::size_t i) {
        f.values[i] = fn(x[0], x[1], x[2]);
    });
    return f;
}

// DFT pair. forward(inverse(F)) and inverse(forward(f)) are identities up to
// round-off; plans are cached and execution is thread-safe.
SpectralField forward(const PhysicalField& f);
PhysicalField inverse(const SpectralField& F);

// Coefficient at k multiplied by (i k_axis)^order; Nyquist zeroed when order
// is odd (it has no conjugate partner).
SpectralField derivative(const SpectralField& F, int axis, int order = 1);

// 2/3-rule: zero every mode with |k_axis| > floor(n_axis/3) on any axis.
SpectralField dealias(const SpectralField& F);
void dealias_in_place(SpectralField& F);

// Pointwise product of dealiased factors, dealiased again on output.
SpectralField dealiased_product(const SpectralField& a, const SpectralField& b);

// Zero-padding / band restriction between grids (modes copied by wavenumber).
SpectralField pad_to(const SpectralField& f, const Grid& fine);
SpectralField restrict_to(const SpectralField& f, const Grid& coarse);

double l2_norm_physical(const PhysicalField& f);      // sqrt(sum f^2 * cellvol)
double l2_norm_spectral(const SpectralField& F);      // sqrt((2pi)^d sum |c|^2)
double max_abs(const PhysicalField& f);
double max_abs(const SpectralField& F);
bool has_nan(const SpectralField& F);

SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator*(double s, const SpectralField& a);
SpectralField& operator+=(SpectralField& a, const SpectralField& b);
SpectralField& operator-=(SpectralField& a, const SpectralField& b);
SpectralField& operator*=(SpectralField& a, double s);

}  // namespace hydrostat
