#include "nlpr/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlpr/error.hpp"

namespace nlpr {

Image::Image(int width, int height, double fill)
    : Image(width, height,
            std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) *
                                    std::max(height, 0),
                                fill)) {}

Image::Image(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width <= 0 || height <= 0) {
    throw ParameterError("image dimensions must be positive, got " +
                         std::to_string(width) + "x" + std::to_string(height));
  }
  if (data_.size() != static_cast<std::size_t>(width) * height) {
    throw ParameterError("image data length " + std::to_string(data_.size()) +
                         " does not match " + std::to_string(width) + "x" +
                         std::to_string(height));
  }
}

double Image::at(PixelIndex p) const {
  if (!contains(p)) {
    throw BoundsError("pixel (" + std::to_string(p.row) + "," +
                      std::to_string(p.col) + ") outside " +
                      std::to_string(width_) + "x" + std::to_string(height_) +
                      " image");
  }
  return (*this)(p.row, p.col);
}

double Image::min_value() const {
  return *std::min_element(data_.begin(), data_.end());
}

double Image::max_value() const {
  return *std::max_element(data_.begin(), data_.end());
}

Image Image::shifted(double offset) const {
  std::vector<double> out(data_);
  for (double& v : out) v += offset;
  return Image(width_, height_, std::move(out));
}

Patch::Patch(int side_, std::vector<double> values_)
    : side(side_), values(std::move(values_)) {
  if (side <= 0 || side % 2 == 0) {
    throw ParameterError("patch side must be odd and positive, got " +
                         std::to_string(side));
  }
  if (values.size() != static_cast<std::size_t>(side) * side) {
    throw ParameterError("patch of side " + std::to_string(side) + " needs " +
                         std::to_string(side * side) + " values, got " +
                         std::to_string(values.size()));
  }
}

Patch Patch::line(std::vector<double> values_) {
  if (values_.empty() || values_.size() % 2 == 0) {
    throw ParameterError("line patch length must be odd, got " +
                         std::to_string(values_.size()));
  }
  Patch p;
  p.side = static_cast<int>(values_.size());
  p.values = std::move(values_);
  return p;
}

int reflect_index(int i, int n) {
  const int period = 2 * n;
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

namespace {

void check_side(int side) {
  if (side <= 0 || side % 2 == 0) {
    throw ParameterError("patch side must be odd and positive, got " +
                         std::to_string(side));
  }
}

}  // namespace

void extract_patch_into(const Image& img, PixelIndex center, int side,
                        std::span<double> out) {
  const int half = side / 2;
  std::size_t t = 0;
  for (int dr = -half; dr <= half; ++dr) {
    const int r = reflect_index(center.row + dr, img.height());
    for (int dc = -half; dc <= half; ++dc) {
      out[t++] = img(r, reflect_index(center.col + dc, img.width()));
    }
  }
}

Patch extract_patch(const Image& img, PixelIndex center, int side) {
  check_side(side);
  if (!img.contains(center)) {
    throw BoundsError("patch center (" + std::to_string(center.row) + "," +
                      std::to_string(center.col) + ") outside image");
  }
  std::vector<double> values(static_cast<std::size_t>(side) * side);
  extract_patch_into(img, center, side, values);
  return Patch(side, std::move(values));
}

Patch extract_line_patch(std::span<const double> signal, int center, int side) {
  check_side(side);
  const int n = static_cast<int>(signal.size());
  if (center < 0 || center >= n) {
    throw BoundsError("line patch center " + std::to_string(center) +
                      " outside signal of length " + std::to_string(n));
  }
  std::vector<double> values(side);
  const int half = side / 2;
  for (int d = -half; d <= half; ++d) {
    values[d + half] = signal[reflect_index(center + d, n)];
  }
  return Patch::line(std::move(values));
}

double center_value(std::span<const double> values) {
  if (values.empty()) throw ParameterError("empty patch has no center");
  return values[(values.size() - 1) / 2];
}

double center_pixel(const Patch& patch) { return center_value(patch.values); }

double mean_squared_error(const Image& reference, const Image& estimate) {
  if (reference.width() != estimate.width() ||
      reference.height() != estimate.height()) {
    throw ParameterError("psnr: image dimensions differ");
  }
  const auto a = reference.data();
  const auto b = estimate.data();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = b[i] - a[i];
    sum += d * d;
  }
  return sum / static_cast<double>(a.size());
}

double psnr(const Image& reference, const Image& estimate) {
  const double mse = mean_squared_error(reference, estimate);
  if (mse == 0.0) return kInfinitePsnr;
  return -10.0 * std::log10(mse);
}

}  // namespace nlpr
