#include "hydrostat/random_fields.hpp"

#include <cmath>

namespace hydrostat {

double Rng::next_normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    have_spare_ = true;
    spare_ = r * std::sin(two_pi * u2);
    return r * std::cos(two_pi * u2);
}

SpectralField random_band_limited(const Grid& g, Rng& rng,
                                  const RandomFieldOptions& opt) {
    SpectralField out(g);
    std::array<int, 3> cut{g.dealias_cutoff(0), g.dealias_cutoff(1),
                           g.dealias_cutoff(2)};
    // loop over canonical representatives; the partner gets the conjugate
    for (int k0 = -cut[0]; k0 <= cut[0]; ++k0)
        for (int k1 = -cut[1]; k1 <= cut[1]; ++k1)
            for (int k2 = -cut[2]; k2 <= cut[2]; ++k2) {
                const bool canonical =
                    k0 > 0 || (k0 == 0 && (k1 > 0 || (k1 == 0 && k2 > 0)));
                if (!canonical) continue;
                const double kk = std::sqrt(double(k0) * k0 + double(k1) * k1 +
                                            double(k2) * k2);
                const double amp = std::pow(1.0 + kk, -opt.decay);
                const complex z(amp * rng.next_normal(), amp * rng.next_normal());
                out.mode_ref(k0, k1, k2) = z;
                out.mode_ref(-k0, -k1, -k2) = std::conj(z);
            }
    out.mode_ref(0, 0, 0) = opt.zero_mean ? 0.0 : rng.next_normal();
    if (opt.zero_vertical_mean && g.ndim() == 3)
        for (int i0 = 0; i0 < g.dim(0); ++i0)
            for (int i1 = 0; i1 < g.dim(1); ++i1)
                out.coeffs[g.index(i0, i1, 0)] = 0.0;
    return out;
}

std::array<SpectralField, 3> random_band_limited_vec3(
    const Grid& g, Rng& rng, const RandomFieldOptions& opt) {
    return {random_band_limited(g, rng, opt), random_band_limited(g, rng, opt),
            random_band_limited(g, rng, opt)};
}

}  // namespace hydrostat
