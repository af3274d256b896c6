#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nlpr/image.hpp"

namespace nlpr {

struct NoiseSpec {
  double sigma = 0.0;  // on the [0,1] intensity scale
  std::uint64_t seed = 0;
};

// Standard-normal variate for sample `index` of stream `seed`.
//
// Counter based: two SplitMix64 hashes of (seed, index) feed a Box-Muller
// transform, so the value depends only on (seed, index) and never on the
// order in which samples are drawn.
double standard_normal(std::uint64_t seed, std::uint64_t index);

// clean + sigma * z, unclipped.
Image add_gaussian_noise(const Image& clean, const NoiseSpec& spec);
std::vector<double> add_gaussian_noise(std::span<const double> clean,
                                       const NoiseSpec& spec);

// Converts a noise level quoted on the 0-255 scale to [0,1] units.
inline constexpr double sigma_from_8bit(double sigma255) {
  return sigma255 / 255.0;
}

}  // namespace nlpr
