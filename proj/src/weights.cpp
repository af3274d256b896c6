#include "nlpr/weights.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlpr/error.hpp"

namespace nlpr {

void SearchParams::validate() const {
  if (window <= 0 || window % 2 == 0) {
    throw ParameterError("search window must be odd and positive, got " +
                         std::to_string(window));
  }
  if (patch_side <= 0 || patch_side % 2 == 0) {
    throw ParameterError("patch side must be odd and positive, got " +
                         std::to_string(patch_side));
  }
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw ParameterError("h must be positive and finite, got " +
                         std::to_string(h));
  }
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    const double d = a[t] - b[t];
    sum += d * d;
  }
  return sum;
}

double patch_weight(double squared_dist, double h) {
  return std::exp(-squared_dist / (h * h));
}

PatchTable::PatchTable(const Image& img, int side) : side_(side) {
  if (side <= 0 || side % 2 == 0) {
    throw ParameterError("patch side must be odd and positive, got " +
                         std::to_string(side));
  }
  dim_ = static_cast<std::size_t>(side) * side;
  values_.resize(img.size() * dim_);
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      const std::size_t idx = img.linear_index({r, c});
      extract_patch_into(img, {r, c}, side,
                         std::span<double>(values_.data() + idx * dim_, dim_));
    }
  }
}

PatchTable PatchTable::from_line(std::span<const double> signal, int side) {
  if (side <= 0 || side % 2 == 0) {
    throw ParameterError("patch side must be odd and positive, got " +
                         std::to_string(side));
  }
  if (signal.empty()) throw ParameterError("empty signal");
  PatchTable t;
  t.side_ = side;
  t.dim_ = static_cast<std::size_t>(side);
  t.values_.resize(signal.size() * t.dim_);
  const int n = static_cast<int>(signal.size());
  const int half = side / 2;
  for (int i = 0; i < n; ++i) {
    for (int d = -half; d <= half; ++d) {
      t.values_[static_cast<std::size_t>(i) * t.dim_ + (d + half)] =
          signal[reflect_index(i + d, n)];
    }
  }
  return t;
}

NeighborSet compute_weights(const PatchTable& table, int width, int height,
                            PixelIndex center, const SearchParams& params) {
  params.validate();
  if (center.row < 0 || center.row >= height || center.col < 0 ||
      center.col >= width) {
    throw BoundsError("weights: center (" + std::to_string(center.row) + "," +
                      std::to_string(center.col) + ") outside image");
  }
  if (table.side() != params.patch_side) {
    throw ParameterError("patch table side does not match search params");
  }
  const int half = params.window / 2;
  const int r0 = std::max(0, center.row - half);
  const int r1 = std::min(height - 1, center.row + half);
  const int c0 = std::max(0, center.col - half);
  const int c1 = std::min(width - 1, center.col + half);

  NeighborSet ns;
  ns.center = center;
  ns.entries.reserve(static_cast<std::size_t>(r1 - r0 + 1) * (c1 - c0 + 1));
  const auto ref = table.patch(static_cast<std::size_t>(center.row) * width +
                               center.col);
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      const auto other = table.patch(static_cast<std::size_t>(r) * width + c);
      ns.entries.push_back(
          {{r, c}, patch_weight(squared_distance(ref, other), params.h)});
    }
  }
  return ns;
}

NeighborSet compute_weights(const Image& img, PixelIndex center,
                            const SearchParams& params) {
  params.validate();
  if (!img.contains(center)) {
    throw BoundsError("weights: center (" + std::to_string(center.row) + "," +
                      std::to_string(center.col) + ") outside image");
  }
  const int k = params.patch_side;
  const int half = params.window / 2;
  const int r0 = std::max(0, center.row - half);
  const int r1 = std::min(img.height() - 1, center.row + half);
  const int c0 = std::max(0, center.col - half);
  const int c1 = std::min(img.width() - 1, center.col + half);

  const Patch ref = extract_patch(img, center, k);
  std::vector<double> other(static_cast<std::size_t>(k) * k);
  NeighborSet ns;
  ns.center = center;
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      extract_patch_into(img, {r, c}, k, other);
      ns.entries.push_back(
          {{r, c}, patch_weight(squared_distance(ref.values, other), params.h)});
    }
  }
  return ns;
}

NeighborSet compute_line_weights(const PatchTable& table, int center,
                                 const SearchParams& params) {
  params.validate();
  const int n = static_cast<int>(table.count());
  if (center < 0 || center >= n) {
    throw BoundsError("weights: position " + std::to_string(center) +
                      " outside signal of length " + std::to_string(n));
  }
  if (table.side() != params.patch_side ||
      table.dimension() != static_cast<std::size_t>(params.patch_side)) {
    throw ParameterError("line patch table does not match search params");
  }
  const int half = params.window / 2;
  const int lo = std::max(0, center - half);
  const int hi = std::min(n - 1, center + half);
  NeighborSet ns;
  ns.center = {0, center};
  ns.entries.reserve(static_cast<std::size_t>(hi - lo + 1));
  const auto ref = table.patch(center);
  for (int j = lo; j <= hi; ++j) {
    ns.entries.push_back(
        {{0, j}, patch_weight(squared_distance(ref, table.patch(j)), params.h)});
  }
  return ns;
}

NeighborSet compute_line_weights(std::span<const double> signal, int center,
                                 const SearchParams& params) {
  params.validate();
  return compute_line_weights(PatchTable::from_line(signal, params.patch_side),
                              center, params);
}

NeighborSet truncate_to_nearest_half(const NeighborSet& ns) {
  if (ns.entries.empty()) {
    throw ParameterError("cannot truncate an empty neighbor set");
  }
  NeighborSet out;
  out.center = ns.center;
  out.entries = ns.entries;
  const auto heavier = [&](const Neighbor& a, const Neighbor& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    const bool a_self = a.pixel == ns.center;
    const bool b_self = b.pixel == ns.center;
    if (a_self != b_self) return a_self;
    if (a.pixel.row != b.pixel.row) return a.pixel.row < b.pixel.row;
    return a.pixel.col < b.pixel.col;
  };
  const std::size_t keep = nearest_half_count(out.entries.size());
  std::partial_sort(out.entries.begin(), out.entries.begin() + keep,
                    out.entries.end(), heavier);
  out.entries.resize(keep);
  return out;
}

}  // namespace nlpr
