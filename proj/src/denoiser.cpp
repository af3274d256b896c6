#include "nlpr/denoiser.hpp"

#include <chrono>
#include <string>

#include "nlpr/error.hpp"
#include "nlpr/parallel.hpp"

namespace nlpr {

DenoiseParams DenoiseParams::standard(double sigma, double p,
                                      bool knn_truncation) {
  DenoiseParams params;
  params.search = {21, 7, 10.0 * sigma};
  params.p = p;
  params.use_knn_truncation = knn_truncation;
  params.irls = IrlsConfig::for_patch(p, params.search.patch_side);
  return params;
}

IrlsConfig DenoiseParams::solver_config() const {
  IrlsConfig cfg = irls;
  cfg.p = p;
  return cfg;
}

void DenoiseParams::validate() const {
  search.validate();
  solver_config().validate();
}

namespace {

// Positively weighted neighbors only; zero weights add exact zeros to every
// sum in the solver.
PatchCloud gather(const NeighborSet& ns, const PatchTable& table, int width) {
  PatchCloud cloud(table.dimension());
  cloud.values.reserve(ns.entries.size() * table.dimension());
  cloud.weights.reserve(ns.entries.size());
  for (const auto& e : ns.entries) {
    if (e.weight == 0.0) continue;
    cloud.add(table.patch(static_cast<std::size_t>(e.pixel.row) * width +
                          e.pixel.col),
              e.weight);
  }
  return cloud;
}

std::string where(PixelIndex px) {
  return "pixel (" + std::to_string(px.row) + "," + std::to_string(px.col) +
         ")";
}

struct PixelOutcome {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  double seconds = 0.0;
};

}  // namespace

std::vector<DenoiseReport> denoise_many(const Image& noisy,
                                        const SearchParams& search,
                                        bool knn_truncation,
                                        std::span<const IrlsConfig> solvers,
                                        unsigned threads) {
  search.validate();
  for (const auto& cfg : solvers) cfg.validate();
  const PatchTable table(noisy, search.patch_side);
  const int width = noisy.width();
  const int height = noisy.height();
  const std::size_t npix = noisy.size();
  const std::size_t nsolvers = solvers.size();

  std::vector<PixelOutcome> outcomes(npix * nsolvers);
  parallel_for(static_cast<std::size_t>(height), threads, [&](std::size_t r) {
    for (int c = 0; c < width; ++c) {
      const PixelIndex px{static_cast<int>(r), c};
      NeighborSet ns = compute_weights(table, width, height, px, search);
      if (knn_truncation) ns = truncate_to_nearest_half(ns);
      const PatchCloud cloud = gather(ns, table, width);
      const std::vector<double> init = nlm_estimate(cloud);
      const std::size_t idx = noisy.linear_index(px);
      for (std::size_t s = 0; s < nsolvers; ++s) {
        const auto t0 = std::chrono::steady_clock::now();
        IrlsResult res;
        try {
          res = irls_solve(cloud, solvers[s], init);
        } catch (const NumericalError& e) {
          throw NumericalError(where(px) + ": " + e.what());
        }
        const std::chrono::duration<double> dt =
            std::chrono::steady_clock::now() - t0;
        outcomes[s * npix + idx] = {center_value(res.estimate), res.iterations,
                                    res.converged, dt.count()};
      }
    }
  });

  std::vector<DenoiseReport> reports;
  reports.reserve(nsolvers);
  for (std::size_t s = 0; s < nsolvers; ++s) {
    std::vector<double> out(npix);
    double iters = 0.0;
    double seconds = 0.0;
    std::size_t converged = 0;
    for (std::size_t i = 0; i < npix; ++i) {
      const auto& o = outcomes[s * npix + i];
      out[i] = o.value;
      iters += o.iterations;
      seconds += o.seconds;
      converged += o.converged ? 1 : 0;
    }
    reports.push_back({Image(width, height, std::move(out)),
                       iters / static_cast<double>(npix),
                       static_cast<double>(converged) / npix, seconds});
  }
  return reports;
}

DenoiseReport denoise(const Image& noisy, const DenoiseParams& params,
                      unsigned threads) {
  params.validate();
  const IrlsConfig cfg = params.solver_config();
  auto reports = denoise_many(noisy, params.search, params.use_knn_truncation,
                              std::span<const IrlsConfig>(&cfg, 1), threads);
  return std::move(reports.front());
}

Image nlm_closed_form(const Image& noisy, const SearchParams& search,
                      unsigned threads) {
  search.validate();
  const PatchTable table(noisy, search.patch_side);
  const int width = noisy.width();
  const int height = noisy.height();
  std::vector<double> out(noisy.size());
  parallel_for(static_cast<std::size_t>(height), threads, [&](std::size_t r) {
    for (int c = 0; c < width; ++c) {
      const PixelIndex px{static_cast<int>(r), c};
      const NeighborSet ns = compute_weights(table, width, height, px, search);
      double num = 0.0;
      double den = 0.0;
      for (const auto& e : ns.entries) {
        num += e.weight * noisy(e.pixel.row, e.pixel.col);
        den += e.weight;
      }
      out[noisy.linear_index(px)] = num / den;
    }
  });
  return Image(width, height, std::move(out));
}

namespace {

LineRegression regress_with_table(const PatchTable& table, int position,
                                  const DenoiseParams& params) {
  LineRegression lr;
  lr.neighbors = compute_line_weights(table, position, params.search);
  if (params.use_knn_truncation) {
    lr.neighbors = truncate_to_nearest_half(lr.neighbors);
  }
  lr.cloud = PatchCloud(table.dimension());
  for (const auto& e : lr.neighbors.entries) {
    lr.cloud.add(table.patch(e.pixel.col), e.weight);
  }
  lr.init = nlm_estimate(lr.cloud);
  try {
    lr.result = irls_solve(lr.cloud, params.solver_config(), lr.init);
  } catch (const NumericalError& e) {
    throw NumericalError("position " + std::to_string(position) + ": " +
                         e.what());
  }
  lr.estimate = center_value(lr.result.estimate);
  return lr;
}

}  // namespace

LineRegression regress_line_at(std::span<const double> signal, int position,
                               const DenoiseParams& params) {
  params.validate();
  const auto table = PatchTable::from_line(signal, params.search.patch_side);
  return regress_with_table(table, position, params);
}

LineDenoiseReport denoise_1d(std::span<const double> signal,
                             const DenoiseParams& params) {
  params.validate();
  const auto table = PatchTable::from_line(signal, params.search.patch_side);
  const int n = static_cast<int>(signal.size());
  LineDenoiseReport report;
  report.output.resize(n);
  report.iterations.resize(n);
  report.multipliers.resize(n);
  std::size_t converged = 0;
  double iters = 0.0;
  for (int i = 0; i < n; ++i) {
    LineRegression lr = regress_with_table(table, i, params);
    report.output[i] = lr.estimate;
    report.iterations[i] = lr.result.iterations;
    report.multipliers[i] = std::move(lr.result.multipliers);
    iters += lr.result.iterations;
    converged += lr.result.converged ? 1 : 0;
  }
  report.mean_iterations = iters / n;
  report.converged_fraction = static_cast<double>(converged) / n;
  return report;
}

}  // namespace nlpr
