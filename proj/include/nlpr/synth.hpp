#pragma once

#include <span>
#include <vector>

#include "nlpr/image.hpp"

namespace nlpr {

struct CheckerSpec {
  int image_side = 256;
  int square_side = 32;
  double low = 0.0;
  double high = 1.0;

  void validate() const;
};

// Pixel (r, c) is `high` iff floor(r/square) + floor(c/square) is odd.
Image make_checker(const CheckerSpec& spec);

struct EdgeSpec {
  int length = 256;
  int edge_position = 128;  // first high sample
  double low = 0.0;
  double high = 1.0;

  void validate() const;
};

std::vector<double> make_edge(const EdgeSpec& spec);

// The 2*half_window + 1 patches of length k centered at reference-half_window
// ... reference+half_window, sampled like the 1-D denoiser samples them.
std::vector<Patch> edge_patch_cloud(std::span<const double> signal,
                                    int reference, int half_window, int k);

}  // namespace nlpr
