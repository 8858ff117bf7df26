#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "hydrostat/random_fields.hpp"
#include "hydrostat/spectral_core.hpp"

using namespace hydrostat;

namespace {

double max_diff(const PhysicalField& a, const PhysicalField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

}  // namespace

TEST_CASE("grid construction") {
    Grid g = Grid::make3d(8, 8);
    CHECK(g.size() == 512);
    CHECK(g.spacing(0) == doctest::Approx(pi / 4).epsilon(1e-15));
    CHECK(g.spacing(2) == doctest::Approx(pi / 4).epsilon(1e-15));

    Grid g2 = Grid::make3d(16, 8);
    // frequency sets {-n/2+1, ..., n/2}
    int lo = 100, hi = -100;
    for (int m = 0; m < 16; ++m) {
        lo = std::min(lo, g2.wavenumber(0, m));
        hi = std::max(hi, g2.wavenumber(0, m));
    }
    CHECK(lo == -7);
    CHECK(hi == 8);
    lo = 100; hi = -100;
    for (int m = 0; m < 8; ++m) {
        lo = std::min(lo, g2.wavenumber(2, m));
        hi = std::max(hi, g2.wavenumber(2, m));
    }
    CHECK(lo == -3);
    CHECK(hi == 4);

    CHECK_THROWS_AS(Grid::make3d(6, 8), std::invalid_argument);
    CHECK_THROWS_AS(Grid::make3d(9, 8), std::invalid_argument);
    CHECK_THROWS_AS(Grid::make3d(16, 4), std::invalid_argument);
}

TEST_CASE("forward transform picks out single modes") {
    Grid g = Grid::make3d(16, 8);
    SpectralField one = forward(sample_fn(g, [](double, double, double) {
        return 1.0;
    }));
    CHECK(std::abs(one.at_mode(0, 0, 0) - 1.0) < 1e-14);
    double off = 0.0;
    for_each_mode(g, [&](const std::array<int, 3>& k, std::size_t i) {
        if (k[0] || k[1] || k[2]) off = std::max(off, std::abs(one.coeffs[i]));
    });
    CHECK(off < 1e-14);

    SpectralField c = forward(sample_fn(g, [](double x1, double, double) {
        return std::cos(x1);
    }));
    CHECK(std::abs(c.at_mode(1, 0, 0) - 0.5) < 1e-14);
    CHECK(std::abs(c.at_mode(-1, 0, 0) - 0.5) < 1e-14);
    double rest = 0.0;
    for_each_mode(g, [&](const std::array<int, 3>& k, std::size_t i) {
        if (std::abs(k[0]) != 1 || k[1] || k[2])
            rest = std::max(rest, std::abs(c.coeffs[i]));
    });
    CHECK(rest < 1e-14);
}

TEST_CASE("round trip and Parseval on random band-limited fields") {
    Grid g = Grid::make3d(24, 16);
    Rng rng(7);
    for (int trial = 0; trial < 4; ++trial) {
        SpectralField f = random_band_limited(g, rng);
        PhysicalField p = inverse(f);
        SpectralField f2 = forward(p);
        double scale = max_abs(f);
        double dm = 0.0;
        for (std::size_t i = 0; i < f.coeffs.size(); ++i)
            dm = std::max(dm, std::abs(f.coeffs[i] - f2.coeffs[i]));
        CHECK(dm < 1e-12 * scale);

        PhysicalField p2 = inverse(f2);
        CHECK(max_diff(p, p2) < 1e-12 * max_abs(p));

        // Parseval: sum f^2 * cellvol = (2 pi)^3 sum |c|^2
        const double lhs = l2_norm_physical(p);
        const double rhs = l2_norm_spectral(f);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("spectral derivatives of trigonometric modes") {
    Grid g = Grid::make3d(16, 16);
    SpectralField s = forward(sample_fn(g, [](double x1, double, double) {
        return std::sin(x1);
    }));
    PhysicalField d = inverse(derivative(s, 0));
    PhysicalField expect = sample_fn(g, [](double x1, double, double) {
        return std::cos(x1);
    });
    CHECK(max_diff(d, expect) < 1e-12);

    SpectralField c = forward(sample_fn(g, [](double, double, double x3) {
        return std::cos(2 * x3);
    }));
    PhysicalField d2 = inverse(derivative(c, 2, 2));
    PhysicalField expect2 = sample_fn(g, [](double, double, double x3) {
        return -4.0 * std::cos(2 * x3);
    });
    CHECK(max_diff(d2, expect2) < 1e-12);
}

TEST_CASE("spectral derivative against 6th-order finite differences") {
    // the FD error drops ~2^6 when h halves; the spectral result is exact
    auto fd_error = [](int n) {
        Grid g = Grid::make3d(n, 8);
        Rng rng(11);
        RandomFieldOptions opt;
        // band-limit well below the coarse grid cutoff so both grids resolve f
        SpectralField f(g);
        for (int k = -3; k <= 3; ++k)
            for (int l = -3; l <= 3; ++l) {
                if (k == 0 && l == 0) continue;
                const complex z(rng.next_normal(), rng.next_normal());
                f.mode_ref(k, l, 0) = z * 0.1;
                f.mode_ref(-k, -l, 0) = std::conj(z) * 0.1;
            }
        PhysicalField p = inverse(f);
        PhysicalField ds = inverse(derivative(f, 0));
        const double h = g.spacing(0);
        double worst = 0.0;
        for (int i0 = 0; i0 < n; ++i0)
            for (int i1 = 0; i1 < g.dim(1); ++i1)
                for (int i2 = 0; i2 < g.dim(2); ++i2) {
                    auto at = [&](int s) {
                        return p.values[g.index(((i0 + s) % n + n) % n, i1, i2)];
                    };
                    const double fd = (at(3) - 9 * at(2) + 45 * at(1) - 45 * at(-1) +
                                       9 * at(-2) - at(-3)) /
                                      (60 * h);
                    worst = std::max(
                        worst, std::abs(fd - ds.values[g.index(i0, i1, i2)]));
                }
        return worst;
    };
    const double e24 = fd_error(24);
    const double e48 = fd_error(48);
    CHECK(e24 > 1e-13);  // the comparison is nontrivial
    CHECK(e24 / e48 > 45.0);  // observed order >= ~5.5
}

TEST_CASE("dealias cutoff and idempotence") {
    Grid g = Grid::make3d(12, 12);
    Rng rng(3);
    SpectralField f(g);
    for_each_mode(g, [&](const std::array<int, 3>&, std::size_t i) {
        f.coeffs[i] = complex(rng.next_normal(), rng.next_normal());
    });
    SpectralField d = dealias(f);
    for_each_mode(g, [&](const std::array<int, 3>& k, std::size_t i) {
        if (std::abs(k[0]) >= 5 || std::abs(k[1]) >= 5 || std::abs(k[2]) >= 5)
            CHECK(d.coeffs[i] == complex(0.0, 0.0));
        else
            CHECK(d.coeffs[i] == f.coeffs[i]);
    });
    SpectralField dd = dealias(d);
    for (std::size_t i = 0; i < d.coeffs.size(); ++i)
        CHECK(dd.coeffs[i] == d.coeffs[i]);
}

TEST_CASE("dealiased product has no aliased contamination") {
    // cos(3 x1)^2 = 1/2 + cos(6 x1)/2; on n = 8 the k = 6 image wraps to -2.
    Grid g = Grid::make3d(8, 8);
    PhysicalField c3 = sample_fn(g, [](double x1, double, double) {
        return std::cos(3 * x1);
    });
    // raw product: contaminated k = +/-2 mode
    PhysicalField sq(g);
    for (std::size_t i = 0; i < sq.values.size(); ++i)
        sq.values[i] = c3.values[i] * c3.values[i];
    SpectralField raw = forward(sq);
    CHECK(std::abs(raw.at_mode(2, 0, 0)) == doctest::Approx(0.25).epsilon(1e-12));

    // dealiased pipeline: factors truncated first, k = +/-2 stays exact (zero)
    SpectralField clean = dealiased_product(forward(c3), forward(c3));
    CHECK(std::abs(clean.at_mode(2, 0, 0)) < 1e-14);
}

TEST_CASE("derivative commutes with the transform pair") {
    Grid g = Grid::make3d(16, 16);
    Rng rng(5);
    SpectralField f = random_band_limited(g, rng);
    SpectralField a = forward(inverse(derivative(f, 1)));
    SpectralField b = derivative(forward(inverse(f)), 1);
    double dm = 0.0;
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
        dm = std::max(dm, std::abs(a.coeffs[i] - b.coeffs[i]));
    CHECK(dm < 1e-14);
}

TEST_CASE("dealias is a linear projection") {
    Grid g = Grid::make3d(12, 8);
    Rng rng(9);
    SpectralField f(g), h(g);
    for_each_mode(g, [&](const std::array<int, 3>&, std::size_t i) {
        f.coeffs[i] = complex(rng.next_normal(), rng.next_normal());
        h.coeffs[i] = complex(rng.next_normal(), rng.next_normal());
    });
    SpectralField lin = dealias(f + h) - (dealias(f) + dealias(h));
    CHECK(max_abs(lin) == 0.0);
}
