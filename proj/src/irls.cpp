#include "nlpr/irls.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>

#include "nlpr/error.hpp"

namespace nlpr {

PatchCloud PatchCloud::from_patches(std::span<const Patch> patches,
                                    std::span<const double> weights) {
  if (patches.size() != weights.size()) {
    throw ParameterError("patch and weight counts differ");
  }
  if (patches.empty()) return PatchCloud();
  PatchCloud cloud(patches.front().dimension());
  for (std::size_t j = 0; j < patches.size(); ++j) {
    cloud.add(patches[j].values, weights[j]);
  }
  return cloud;
}

void PatchCloud::add(std::span<const double> patch, double weight) {
  if (patch.size() != dim) {
    throw ParameterError("patch of dimension " + std::to_string(patch.size()) +
                         " added to cloud of dimension " + std::to_string(dim));
  }
  values.insert(values.end(), patch.begin(), patch.end());
  weights.push_back(weight);
}

IrlsConfig IrlsConfig::for_patch(double p, int patch_side) {
  IrlsConfig cfg;
  cfg.p = p;
  cfg.max_iters = p < 0.4 ? 200 : 50;
  cfg.tol = 1e-6 * patch_side;
  return cfg;
}

void IrlsConfig::validate() const {
  if (!(p > 0.0 && p <= 2.0)) {
    throw ParameterError("p must lie in (0, 2], got " + std::to_string(p));
  }
  if (max_iters <= 0) throw ParameterError("max_iters must be positive");
  if (!(tol > 0.0)) throw ParameterError("tol must be positive");
  if (!(eps_floor > 0.0) || !(eps_init > eps_floor)) {
    throw ParameterError("need 0 < eps_floor < eps_init");
  }
  if (!(eps_shrink > 0.0 && eps_shrink < 1.0)) {
    throw ParameterError("eps_shrink must lie in (0, 1)");
  }
}

namespace {

void check_cloud(const PatchCloud& cloud) {
  if (cloud.empty()) throw DegenerateInputError("empty neighbor set");
  if (cloud.dim == 0 || cloud.values.size() != cloud.size() * cloud.dim) {
    throw ParameterError("malformed patch cloud");
  }
  double total = 0.0;
  for (double w : cloud.weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ParameterError("weights must be finite and nonnegative");
    }
    total += w;
  }
  if (!(total > 0.0)) throw DegenerateInputError("total neighbor weight is 0");
}

// Fast paths for the exponents that show up in every experiment.
double multiplier(double d2_plus_eps, double exponent) {
  if (exponent == 0.0) return 1.0;
  if (exponent == -0.5) return 1.0 / std::sqrt(d2_plus_eps);
  return std::pow(d2_plus_eps, exponent);
}

double norm_of_difference(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    const double d = a[t] - b[t];
    s += d * d;
  }
  return std::sqrt(s);
}

// Index of the single patch shared by every positively weighted neighbor,
// or cloud.size() if they differ. Zero-weight neighbors have no influence
// on the objective and are ignored.
std::size_t common_patch(const PatchCloud& cloud) {
  std::size_t first = cloud.size();
  for (std::size_t j = 0; j < cloud.size(); ++j) {
    if (cloud.weights[j] == 0.0) continue;
    if (first == cloud.size()) {
      first = j;
      continue;
    }
    const auto a = cloud.patch(first);
    if (!std::equal(a.begin(), a.end(), cloud.patch(j).begin())) {
      return cloud.size();
    }
  }
  return first;
}

// Writes the update into `next` and the multipliers into `mu`; returns the
// normalizing sum.
double weighted_update(const PatchCloud& cloud, std::span<const double> x,
                       double exponent, double eps, std::span<double> mu,
                       std::span<double> next) {
  const std::size_t dim = cloud.dim;
  std::fill(next.begin(), next.end(), 0.0);
  double denom = 0.0;
  const double* xs = x.data();
  double* out = next.data();
  for (std::size_t j = 0; j < cloud.size(); ++j) {
    const double* pj = cloud.values.data() + j * dim;
    double d2 = 0.0;
    for (std::size_t t = 0; t < dim; ++t) {
      const double d = xs[t] - pj[t];
      d2 += d * d;
    }
    mu[j] = multiplier(d2 + eps, exponent);
    const double c = cloud.weights[j] * mu[j];
    denom += c;
    for (std::size_t t = 0; t < dim; ++t) out[t] += c * pj[t];
  }
  for (std::size_t t = 0; t < dim; ++t) out[t] /= denom;
  return denom;
}

}  // namespace

std::vector<double> nlm_estimate(const PatchCloud& cloud) {
  check_cloud(cloud);
  if (const std::size_t c = common_patch(cloud); c < cloud.size()) {
    const auto only = cloud.patch(c);
    return {only.begin(), only.end()};
  }
  std::vector<double> sum(cloud.dim, 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j < cloud.size(); ++j) {
    const double w = cloud.weights[j];
    const auto pj = cloud.patch(j);
    for (std::size_t t = 0; t < cloud.dim; ++t) sum[t] += w * pj[t];
    total += w;
  }
  for (double& v : sum) v /= total;
  return sum;
}

double objective(const PatchCloud& cloud, std::span<const double> candidate,
                 double p) {
  double total = 0.0;
  for (std::size_t j = 0; j < cloud.size(); ++j) {
    const double d = norm_of_difference(candidate, cloud.patch(j));
    total += cloud.weights[j] * (d == 0.0 ? 0.0 : std::pow(d, p));
  }
  return total;
}

std::vector<double> multipliers_at(const PatchCloud& cloud,
                                   std::span<const double> x, double p,
                                   double eps) {
  std::vector<double> mu(cloud.size());
  const double exponent = 0.5 * p - 1.0;
  for (std::size_t j = 0; j < cloud.size(); ++j) {
    const double d = norm_of_difference(x, cloud.patch(j));
    mu[j] = multiplier(d * d + eps, exponent);
  }
  return mu;
}

std::vector<double> irls_step(const PatchCloud& cloud,
                              std::span<const double> x, double p, double eps) {
  check_cloud(cloud);
  if (x.size() != cloud.dim) throw ParameterError("iterate dimension mismatch");
  std::vector<double> mu(cloud.size());
  std::vector<double> next(cloud.dim);
  weighted_update(cloud, x, 0.5 * p - 1.0, eps, mu, next);
  return next;
}

IrlsResult irls_solve(const PatchCloud& cloud, const IrlsConfig& cfg,
                      std::span<const double> init) {
  cfg.validate();
  check_cloud(cloud);
  if (init.size() != cloud.dim) {
    throw ParameterError("initial patch has dimension " +
                         std::to_string(init.size()) + ", cloud has " +
                         std::to_string(cloud.dim));
  }

  const double exponent = 0.5 * cfg.p - 1.0;
  IrlsResult res;
  res.multipliers.assign(cloud.size(), 0.0);

  if (const std::size_t c = common_patch(cloud); c < cloud.size()) {
    const auto only = cloud.patch(c);
    res.estimate.assign(only.begin(), only.end());
    res.multipliers = multipliers_at(cloud, res.estimate, cfg.p, cfg.eps_floor);
    res.converged = true;
    res.objective = 0.0;
    res.final_eps = cfg.eps_floor;
    return res;
  }

  const double root_dim = std::sqrt(static_cast<double>(cloud.dim));
  std::vector<double> x(init.begin(), init.end());
  std::vector<double> next(cloud.dim);
  double eps = cfg.eps_init;

  for (int it = 1; it <= cfg.max_iters; ++it) {
    const double denom =
        weighted_update(cloud, x, exponent, eps, res.multipliers, next);
    if (!(denom > 0.0) || !std::isfinite(denom) ||
        !std::all_of(next.begin(), next.end(),
                     [](double v) { return std::isfinite(v); })) {
      std::ostringstream msg;
      msg << "IRLS produced a non-finite iterate at iteration " << it
          << " (p=" << cfg.p << ", eps=" << eps << ", normalizer=" << denom
          << ")";
      throw NumericalError(msg.str());
    }
    const double change = norm_of_difference(next, x);
    x.swap(next);
    res.iterations = it;
    res.final_eps = eps;

    // Multipliers are constant at p = 2, so the first update is final.
    if (exponent == 0.0) {
      res.converged = true;
      break;
    }
    if (eps <= cfg.eps_floor) {
      if (change < cfg.tol) {
        res.converged = true;
        break;
      }
    } else if (change / root_dim < std::sqrt(eps) / 100.0) {
      eps = std::max(eps * cfg.eps_shrink, cfg.eps_floor);
    }
  }

  res.estimate = std::move(x);
  res.objective = objective(cloud, res.estimate, cfg.p);
  if (exponent != 0.0) {
    const double start = objective(cloud, init, cfg.p);
    if (start < res.objective) {
      res.estimate.assign(init.begin(), init.end());
      res.objective = start;
      res.multipliers = multipliers_at(cloud, res.estimate, cfg.p, eps);
      res.kept_init = true;
    }
  }
  return res;
}

IrlsResult irls_solve(const PatchCloud& cloud, const IrlsConfig& cfg) {
  const auto init = nlm_estimate(cloud);
  return irls_solve(cloud, cfg, init);
}

std::vector<double> sorted_multipliers(const IrlsResult& result) {
  std::vector<double> mu = result.multipliers;
  std::sort(mu.begin(), mu.end(), std::greater<>());
  return mu;
}

}  // namespace nlpr
