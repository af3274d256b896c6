#include "nlpr/noise.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nlpr/error.hpp"

namespace nlpr {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

void check_sigma(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw ParameterError("noise sigma must be finite and >= 0, got " +
                         std::to_string(sigma));
  }
}

}  // namespace

double standard_normal(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t key = splitmix64(seed);
  const std::uint64_t a = splitmix64(key + 2 * index);
  const std::uint64_t b = splitmix64(key + 2 * index + 1);
  // u1 in (0,1] keeps the log finite; u2 in [0,1).
  const double u1 = static_cast<double>((a >> 11) + 1) * kTwoPow53Inv;
  const double u2 = static_cast<double>(b >> 11) * kTwoPow53Inv;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<double> add_gaussian_noise(std::span<const double> clean,
                                       const NoiseSpec& spec) {
  check_sigma(spec.sigma);
  std::vector<double> out(clean.begin(), clean.end());
  if (spec.sigma == 0.0) return out;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] += spec.sigma * standard_normal(spec.seed, i);
  }
  return out;
}

Image add_gaussian_noise(const Image& clean, const NoiseSpec& spec) {
  return Image(clean.width(), clean.height(),
               add_gaussian_noise(clean.data(), spec));
}

}  // namespace nlpr
