#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nlpr/image.hpp"

namespace nlpr {

struct SearchParams {
  int window = 21;     // S, side of the search window
  int patch_side = 7;  // k
  double h = 0.1;      // kernel bandwidth, intensity units

  void validate() const;
};

struct Neighbor {
  PixelIndex pixel;
  double weight = 0.0;
};

/// Weighted neighbors of one pixel. Entries come out of `compute_weights`
/// in row-major window order; `truncate_to_nearest_half` reorders them by
/// weight.
struct NeighborSet {
  PixelIndex center;
  std::vector<Neighbor> entries;
};

double squared_distance(std::span<const double> a, std::span<const double> b);

// exp(-d^2 / h^2)
double patch_weight(double squared_dist, double h);

/// Patches of every sample of an image (k*k values each) or of a 1-D
/// signal (k values each), stored contiguously by linear index.
class PatchTable {
 public:
  PatchTable(const Image& img, int side);
  static PatchTable from_line(std::span<const double> signal, int side);

  std::span<const double> patch(std::size_t linear) const {
    return {values_.data() + linear * dim_, dim_};
  }
  std::size_t dimension() const { return dim_; }
  std::size_t count() const { return dim_ == 0 ? 0 : values_.size() / dim_; }
  int side() const { return side_; }

 private:
  PatchTable() = default;

  int side_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> values_;
};

// Weights between `center` and every pixel of the window x window search
// area around it, clipped to the image. Includes the center itself
// (weight 1).
NeighborSet compute_weights(const Image& img, PixelIndex center,
                            const SearchParams& params);

// Same as above, reading patches from a precomputed table of `img`.
NeighborSet compute_weights(const PatchTable& table, int width, int height,
                            PixelIndex center, const SearchParams& params);

// 1-D version: `window` and `patch_side` are lengths along the signal and
// every PixelIndex has row 0.
NeighborSet compute_line_weights(std::span<const double> signal, int center,
                                 const SearchParams& params);
NeighborSet compute_line_weights(const PatchTable& table, int center,
                                 const SearchParams& params);

inline constexpr std::size_t nearest_half_count(std::size_t r) {
  return (r + 1) / 2;
}

// Keeps the ceil(r/2) heaviest entries sorted by non-increasing weight.
// Ties go to the center pixel first, then to the smaller linear index.
NeighborSet truncate_to_nearest_half(const NeighborSet& ns);

}  // namespace nlpr
