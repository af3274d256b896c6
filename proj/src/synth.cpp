#include "nlpr/synth.hpp"

#include <string>

#include "nlpr/error.hpp"

namespace nlpr {

void CheckerSpec::validate() const {
  if (image_side <= 0 || square_side <= 0) {
    throw ParameterError("checker sizes must be positive");
  }
  if (image_side % square_side != 0) {
    throw ParameterError("checker square side " + std::to_string(square_side) +
                         " does not divide image side " +
                         std::to_string(image_side));
  }
  if (!(low < high)) throw ParameterError("checker needs low < high");
}

Image make_checker(const CheckerSpec& spec) {
  spec.validate();
  const int n = spec.image_side;
  std::vector<double> data(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const bool odd = ((r / spec.square_side) + (c / spec.square_side)) % 2;
      data[static_cast<std::size_t>(r) * n + c] = odd ? spec.high : spec.low;
    }
  }
  return Image(n, n, std::move(data));
}

void EdgeSpec::validate() const {
  if (length <= 0) throw ParameterError("edge length must be positive");
  if (edge_position <= 0 || edge_position >= length) {
    throw ParameterError("edge position " + std::to_string(edge_position) +
                         " must lie strictly inside (0, " +
                         std::to_string(length) + ")");
  }
}

std::vector<double> make_edge(const EdgeSpec& spec) {
  spec.validate();
  std::vector<double> s(spec.length, spec.low);
  for (int i = spec.edge_position; i < spec.length; ++i) s[i] = spec.high;
  return s;
}

std::vector<Patch> edge_patch_cloud(std::span<const double> signal,
                                    int reference, int half_window, int k) {
  const int n = static_cast<int>(signal.size());
  if (half_window < 0 || reference - half_window < 0 ||
      reference + half_window >= n) {
    throw BoundsError("patch cloud window [" +
                      std::to_string(reference - half_window) + ", " +
                      std::to_string(reference + half_window) +
                      "] outside signal of length " + std::to_string(n));
  }
  std::vector<Patch> cloud;
  cloud.reserve(2 * half_window + 1);
  for (int j = reference - half_window; j <= reference + half_window; ++j) {
    cloud.push_back(extract_line_patch(signal, j, k));
  }
  return cloud;
}

}  // namespace nlpr
