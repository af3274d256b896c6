#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace nlpr {

struct PixelIndex {
  int row = 0;
  int col = 0;

  friend bool operator==(const PixelIndex&, const PixelIndex&) = default;
};

/// Grayscale image with row-major intensities. Values nominally lie in
/// [0,1]; noisy images may leave that range.
class Image {
 public:
  Image() = default;
  Image(int width, int height, double fill = 0.0);
  Image(int width, int height, std::vector<double> data);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double operator()(int row, int col) const {
    return data_[static_cast<std::size_t>(row) * width_ + col];
  }
  double at(PixelIndex p) const;
  bool contains(PixelIndex p) const {
    return p.row >= 0 && p.row < height_ && p.col >= 0 && p.col < width_;
  }
  std::size_t linear_index(PixelIndex p) const {
    return static_cast<std::size_t>(p.row) * width_ + p.col;
  }

  std::span<const double> data() const { return data_; }

  double min_value() const;
  double max_value() const;

  // Returns a copy with `offset` added to every sample.
  Image shifted(double offset) const;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

/// Square k x k window flattened row-major. One-dimensional signals reuse
/// this type with `values.size() == side`; see `Patch::line`.
struct Patch {
  int side = 1;
  std::vector<double> values;

  Patch() : values(1, 0.0) {}
  Patch(int side, std::vector<double> values);

  // 1-D patch of `values.size()` samples (must be odd).
  static Patch line(std::vector<double> values);

  std::size_t dimension() const { return values.size(); }
};

// Maps an arbitrary index onto [0, n) by half-sample symmetric reflection:
// ... 2 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...
int reflect_index(int i, int n);

Patch extract_patch(const Image& img, PixelIndex center, int side);

// Writes the side x side window at `center` into `out` (size side*side).
// Same sampling as extract_patch, without bounds or parity checks.
void extract_patch_into(const Image& img, PixelIndex center, int side,
                        std::span<double> out);

// 1-D analogue: `side` consecutive samples centered at `center`.
Patch extract_line_patch(std::span<const double> signal, int center, int side);

double center_pixel(const Patch& patch);
double center_value(std::span<const double> values);

/// Returned by `psnr` when the two images are identical.
inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

double mean_squared_error(const Image& reference, const Image& estimate);

// -10 log10(MSE) for intensities on [0,1].
double psnr(const Image& reference, const Image& estimate);

}  // namespace nlpr
