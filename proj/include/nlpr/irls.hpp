#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nlpr/image.hpp"

namespace nlpr {

/// Neighbor patches and their similarity weights, stored contiguously:
/// patch j occupies values[j*dim, (j+1)*dim).
struct PatchCloud {
  std::size_t dim = 0;
  std::vector<double> values;
  std::vector<double> weights;

  PatchCloud() = default;
  explicit PatchCloud(std::size_t dim) : dim(dim) {}
  static PatchCloud from_patches(std::span<const Patch> patches,
                                 std::span<const double> weights);

  std::size_t size() const { return weights.size(); }
  bool empty() const { return weights.empty(); }
  std::span<const double> patch(std::size_t j) const {
    return {values.data() + j * dim, dim};
  }
  void add(std::span<const double> patch, double weight);
};

struct IrlsConfig {
  double p = 1.0;          // regression index, 0 < p <= 2
  int max_iters = 50;
  double tol = 7e-6;       // stop when |P(k) - P(k-1)| < tol with eps at floor
  double eps_init = 1.0;   // intensity^2 units
  double eps_shrink = 0.1;
  double eps_floor = 1e-8;

  // Default schedule for a patch of side k: 50 iterations (200 when
  // p < 0.4) and tol = 1e-6 * k.
  static IrlsConfig for_patch(double p, int patch_side);

  void validate() const;
};

struct IrlsResult {
  std::vector<double> estimate;
  int iterations = 0;
  // mu_j used to form the final estimate, one per neighbor.
  std::vector<double> multipliers;
  bool converged = false;
  // sum_j w_j |estimate - P_j|^p, without regularization.
  double objective = 0.0;
  // Regularization in effect at the last update.
  double final_eps = 0.0;
  // Set when the final iterate scored worse than init and init was returned.
  bool kept_init = false;
};

// Weighted mean of the cloud; the p = 2 solution and the IRLS start point.
std::vector<double> nlm_estimate(const PatchCloud& cloud);

double objective(const PatchCloud& cloud, std::span<const double> candidate,
                 double p);

// mu_j = (|x - P_j|^2 + eps)^(p/2 - 1)
std::vector<double> multipliers_at(const PatchCloud& cloud,
                                   std::span<const double> x, double p,
                                   double eps);

// One reweighted least-squares update from x with regularization eps.
std::vector<double> irls_step(const PatchCloud& cloud,
                              std::span<const double> x, double p, double eps);

// Minimizes sum_j w_j |P - P_j|^p by regularized IRLS, starting from init.
//
// Each update is the closed-form weighted mean with weights w_j mu_j, with
// mu_j evaluated at the previous iterate. eps starts at eps_init and is
// multiplied by eps_shrink whenever the RMS per-sample change drops below
// sqrt(eps)/100, down to eps_floor. A cloud of identical patches returns
// immediately with zero iterations. If the last iterate has a larger
// objective than init (possible when the iteration budget runs out while
// eps is still large), init is returned instead.
IrlsResult irls_solve(const PatchCloud& cloud, const IrlsConfig& cfg,
                      std::span<const double> init);

// Convenience: irls_solve started from nlm_estimate(cloud).
IrlsResult irls_solve(const PatchCloud& cloud, const IrlsConfig& cfg);

std::vector<double> sorted_multipliers(const IrlsResult& result);

}  // namespace nlpr
