#pragma once

#include <string>

#include "hydrostat/nse_difference.hpp"
#include "hydrostat/pe_dynamics.hpp"

// Self-describing binary trajectory checkpoints: an 8-byte magic "HSCK0001",
// a u32 little-endian JSON header length, the JSON header, then the raw
// complex<double> coefficient blocks (little-endian), one per component per
// stored state in time order. The header records grid dims, axis roles,
// stored times, step, component names, epsilon when applicable, layout
// ("row-major, x3 fastest") and the coefficient normalization ("fourier";
// the coefficients are those of sum_k c_k e^{i k.x}).

namespace hydrostat {

void save_checkpoint(const std::string& path, const PeTrajectory& traj,
                     int stride = 1);
void save_checkpoint(const std::string& path, const NseTrajectory& traj,
                     int stride = 1);

// Loads the first stored state of a checkpoint as initial data (v1, v2).
SpectralVec2 load_initial_from_checkpoint(const std::string& path);

}  // namespace hydrostat
