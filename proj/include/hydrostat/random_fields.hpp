#pragma once

#include <cstdint>

#include "hydrostat/spectral_core.hpp"

// Deterministic random band-limited fields for operator-norm probing and
// randomized inequality checks. The generator is self-contained so identical
// seeds give identical fields on every platform.

namespace hydrostat {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next_u64() {
        // splitmix64
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in (0, 1]
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // standard normal via Box-Muller
    double next_normal();

  private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

struct RandomFieldOptions {
    double decay = 2.5;            // coefficient scale (1+|k|)^(-decay)
    bool zero_mean = false;        // zero the k = 0 coefficient
    bool zero_vertical_mean = false;  // zero the whole k3 = 0 plane
};

// Real-valued random field, band-limited to the 2/3 dealias band, with
// conjugate-symmetric i.i.d. complex Gaussian coefficients.
SpectralField random_band_limited(const Grid& g, Rng& rng,
                                  const RandomFieldOptions& opt = {});

// Three-component variant (independent components).
std::array<SpectralField, 3> random_band_limited_vec3(
    const Grid& g, Rng& rng, const RandomFieldOptions& opt = {});

}  // namespace hydrostat
