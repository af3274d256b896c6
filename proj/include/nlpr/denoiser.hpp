#pragma once

#include <span>
#include <vector>

#include "nlpr/image.hpp"
#include "nlpr/irls.hpp"
#include "nlpr/weights.hpp"

namespace nlpr {

struct DenoiseParams {
  SearchParams search;
  double p = 2.0;
  bool use_knn_truncation = true;
  // Solver schedule; its `p` field is overridden by `p` above.
  IrlsConfig irls;

  // S = 21, k = 7, h = 10 sigma (sigma on the [0,1] scale).
  static DenoiseParams standard(double sigma, double p, bool knn_truncation);

  IrlsConfig solver_config() const;
  void validate() const;
};

struct DenoiseReport {
  Image output;
  double mean_iterations = 0.0;
  double converged_fraction = 0.0;
  // Solver time summed over pixels (CPU seconds, all threads).
  double solve_seconds = 0.0;
};

/// Patch-regression denoiser. For every pixel: weight the patches of the
/// search window, optionally keep the heavier half, solve the weighted
/// l_p regression from the weighted-mean start, and keep the center sample
/// of the regressed patch. Pixels are processed independently on up to
/// `threads` workers (0 = hardware concurrency); the output does not depend
/// on the thread count.
DenoiseReport denoise(const Image& noisy, const DenoiseParams& params,
                      unsigned threads = 0);

// Runs several solver configurations against one set of weights. Result i
// equals denoise() with p = solvers[i].p and schedule solvers[i].
std::vector<DenoiseReport> denoise_many(const Image& noisy,
                                        const SearchParams& search,
                                        bool knn_truncation,
                                        std::span<const IrlsConfig> solvers,
                                        unsigned threads = 0);

// Pixel-domain weighted average sum_j w_ij u_j / sum_j w_ij over the full
// window.
Image nlm_closed_form(const Image& noisy, const SearchParams& search,
                      unsigned threads = 0);

struct LineRegression {
  NeighborSet neighbors;  // after truncation, if enabled
  PatchCloud cloud;
  std::vector<double> init;
  IrlsResult result;
  double estimate = 0.0;  // center sample of result.estimate
};

// Regression at one position of a 1-D signal. search.window and
// search.patch_side are lengths along the signal.
LineRegression regress_line_at(std::span<const double> signal, int position,
                               const DenoiseParams& params);

struct LineDenoiseReport {
  std::vector<double> output;
  std::vector<int> iterations;
  std::vector<std::vector<double>> multipliers;
  double mean_iterations = 0.0;
  double converged_fraction = 0.0;
};

LineDenoiseReport denoise_1d(std::span<const double> signal,
                             const DenoiseParams& params);

}  // namespace nlpr
