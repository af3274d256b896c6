// Acceptance run: one PASS/FAIL/SKIPPED line per criterion, then a summary.
// Exit status is nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nlpr/denoiser.hpp"
#include "nlpr/harness.hpp"
#include "nlpr/irls.hpp"
#include "nlpr/noise.hpp"
#include "nlpr/synth.hpp"
#include "oracles.hpp"

using namespace nlpr;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

enum class Outcome { pass, fail, skipped };

int failures = 0;

void report(int id, const std::string& name, Outcome outcome,
            const std::string& detail) {
  const char* tag = outcome == Outcome::pass   ? "PASS"
                    : outcome == Outcome::fail ? "FAIL"
                                               : "SKIPPED";
  if (outcome == Outcome::fail) ++failures;
  std::cout << tag << " [" << id << "] " << name << ": " << detail << std::endl;
}

Outcome verdict(bool ok) { return ok ? Outcome::pass : Outcome::fail; }

double max_abs_diff(const Image& a, const Image& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  }
  return m;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

bool bitwise_equal(const Image& a, const Image& b) {
  return std::equal(a.data().begin(), a.data().end(), b.data().begin());
}

Image noisy_checker(int side, int square, double sigma255, std::uint64_t seed) {
  const Image clean = make_checker({side, square, 0.0, 1.0});
  return add_gaussian_noise(clean, {sigma_from_8bit(sigma255), seed});
}

PatchCloud random_cloud(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
  std::uniform_real_distribution<double> u(0, 1);
  PatchCloud cloud(dim);
  std::vector<double> patch(dim);
  for (std::size_t j = 0; j < n; ++j) {
    for (double& v : patch) v = u(rng);
    cloud.add(patch, 0.05 + 0.95 * u(rng));
  }
  return cloud;
}

PatchCloud scalar_cloud(const std::vector<double>& x, const std::vector<double>& w) {
  PatchCloud cloud(1);
  for (std::size_t j = 0; j < x.size(); ++j) cloud.add(std::vector<double>{x[j]}, w[j]);
  return cloud;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void nlm_equivalence() {
  const double sigma = 30.0 / 255.0;
  const Image noisy = noisy_checker(64, 8, 30.0, 1);
  const auto params = DenoiseParams::standard(sigma, 2.0, false);
  const auto t0 = Clock::now();
  const auto rep = denoise(noisy, params);
  const double elapsed = seconds_since(t0);
  const Image expected = oracle::direct_nlm(noisy, params.search.window,
                                            params.search.patch_side, params.search.h);
  const double err = max_abs_diff(rep.output, expected);
  std::ostringstream d;
  d << "max |diff| = " << fmt("%.3g", err) << " (tol 1e-10), denoise "
    << fmt("%.2f", elapsed) << " s (limit 10 s)";
  report(1, "NLM equivalence, 64x64 Checker, sigma 30, p=2",
         verdict(err <= 1e-10 && elapsed < 10.0), d.str());
}

EdgeStudyReport edge_study_and_check() {
  std::vector<std::uint64_t> seeds(10);
  std::iota(seeds.begin(), seeds.end(), 1);
  EdgeStudyConfig cfg;
  cfg.estimate_ps = {2.0, 1.0, 0.1};
  cfg.multiplier_ps = {2.0, 0.5};
  const auto t0 = Clock::now();
  const auto rep = run_edge_study(seeds, cfg);
  const double elapsed = seconds_since(t0);

  const double targets[] = {0.58, 0.82, 0.95};
  const double tols[] = {0.1, 0.1, 0.07};
  bool ok = elapsed < 5.0;
  std::ostringstream d;
  for (std::size_t i = 0; i < 3; ++i) {
    const double m = rep.mean_estimates[i];
    ok = ok && std::abs(m - targets[i]) <= tols[i];
    d << "p=" << cfg.estimate_ps[i] << " mean " << fmt("%.3f", m) << " (target "
      << targets[i] << " +/- " << tols[i] << "), ";
  }
  d << fmt("%.2f", elapsed) << " s (limit 5 s)";
  report(2, "Edge study, 10 seeds, reference 130", verdict(ok), d.str());
  return rep;
}

void multiplier_separation(const EdgeStudyReport& rep) {
  // multiplier_ps = {2, 0.5}. The criterion is judged on the sorted profile
  // averaged over the seeds; single seeds are listed for reference.
  const auto& profiles = rep.sorted_multipliers[1];
  const std::size_t n = profiles.front().size();
  const std::size_t q = n / 4;
  auto quartile_ratio = [q](const std::vector<double>& mu) {
    const double top = std::accumulate(mu.begin(), mu.begin() + q, 0.0) / q;
    const double bottom = std::accumulate(mu.end() - q, mu.end(), 0.0) / q;
    return bottom / top;
  };
  std::vector<double> mean_profile(n, 0.0);
  int seeds_within = 0;
  double worst_ratio = 0.0;
  std::uint64_t worst_seed = 0;
  for (std::size_t s = 0; s < profiles.size(); ++s) {
    for (std::size_t i = 0; i < n; ++i) mean_profile[i] += profiles[s][i] / profiles.size();
    const double r = quartile_ratio(profiles[s]);
    seeds_within += r <= 0.1 ? 1 : 0;
    if (r > worst_ratio) {
      worst_ratio = r;
      worst_seed = rep.seeds[s];
    }
  }
  const double ratio = quartile_ratio(mean_profile);

  double worst_spread = 0.0;
  for (const auto& mu : rep.sorted_multipliers[0]) {
    worst_spread = std::max(worst_spread, mu.front() - mu.back());
  }
  std::ostringstream d;
  d << "p=0.5 bottom/top quartile ratio of the " << profiles.size()
    << "-seed mean profile " << fmt("%.4f", ratio) << " (limit 0.1; single seeds "
    << seeds_within << "/" << profiles.size() << " within, worst "
    << fmt("%.4f", worst_ratio) << " at seed " << worst_seed << "); p=2 max spread "
    << fmt("%.3g", worst_spread) << " (tol 1e-12)";
  report(3, "Multiplier separation on the edge cloud",
         verdict(ratio <= 0.1 && worst_spread <= 1e-12), d.str());
}

void checker_trend() {
  ExperimentSpec spec;
  spec.input = ImageSource::generated({128, 16, 0.0, 1.0});
  spec.sigmas = {10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  spec.ps = {0.1, 0.5, 1.0, 1.5, 2.0};
  spec.realizations = 3;
  spec.base_seed = 1;
  spec.knn_truncation = false;

  const auto t0 = Clock::now();
  const auto rep = run_sweep(spec);
  const double elapsed = seconds_since(t0);

  std::size_t errors = 0;
  for (const auto& row : rep.rows) errors += row.error.empty() ? 0 : 1;

  std::cout << "  mean PSNR (dB), 128x128 Checker, 3 realizations\n  sigma";
  for (double p : spec.ps) std::cout << "  p=" << p;
  std::cout << "\n";
  std::vector<bool> monotone;
  for (double s : spec.sigmas) {
    std::cout << "  " << s;
    bool mono = true;
    double prev = INFINITY;
    for (double p : spec.ps) {
      const double m = rep.mean_psnr(s, p);
      std::cout << "  " << fmt("%.2f", m);
      mono = mono && m <= prev;
      prev = m;
    }
    monotone.push_back(mono);
    std::cout << (mono ? "  non-increasing" : "") << "\n";
  }

  // Smallest sigma from which every larger sigma is non-increasing in p.
  int star = -1;
  for (int i = static_cast<int>(monotone.size()) - 1; i >= 0 && monotone[i]; --i) star = i;
  const bool reversed = rep.mean_psnr(10, 2.0) > rep.mean_psnr(10, 0.1);

  std::ostringstream d;
  if (star >= 0) {
    d << "crossover sigma* = " << spec.sigmas[star];
  } else {
    d << "no crossover (sigma=100 not non-increasing in p)";
  }
  d << "; sigma=10: p=2 " << fmt("%.2f", rep.mean_psnr(10, 2.0)) << " vs p=0.1 "
    << fmt("%.2f", rep.mean_psnr(10, 0.1)) << " dB";
  if (errors) d << "; " << errors << " failed cells";
  d << "; " << fmt("%.0f", elapsed) << " s (limit 1800 s)";
  report(4, "Checker trend", verdict(star >= 0 && reversed && errors == 0 && elapsed < 1800.0),
         d.str());
}

void table1_checks() {
  const std::filesystem::path dir = NLPR_IMAGE_DIR;
  Table1Config cfg;
  cfg.image_dir = dir;
  std::vector<std::string> available;
  for (const auto& name : cfg.images) {
    if (find_image(dir, name)) available.push_back(name);
  }
  if (available.empty()) {
    const std::string why = "no standard images found in " + dir.string();
    report(5, "Table 1 spot checks", Outcome::skipped, why);
    report(6, "NLPR(p=0.1) dominance over NLM, sigma >= 20", Outcome::skipped, why);
    return;
  }
  cfg.images = available;
  const auto rep = run_table1(cfg, &std::cout);

  struct Spot {
    const char* image;
    double sigma;
    double nlm;
    double nlpr;
  };
  const Spot spots[] = {{"barbara", 40, 23.53, 25.39},
                        {"house", 60, 23.34, 24.69},
                        {"peppers", 10, 32.34, 31.20}};
  std::ostringstream d5;
  bool ok5 = true;
  int checked = 0;
  for (const auto& s : spots) {
    const Table1Row* row = rep.find(s.image, s.sigma);
    if (!row) {
      d5 << s.image << " missing; ";
      continue;
    }
    ++checked;
    bool ok = std::abs(row->nlm_psnr - s.nlm) <= 0.5 &&
              std::abs(row->nlpr_psnr - s.nlpr) <= 0.5;
    if (std::string(s.image) == "peppers") ok = ok && row->nlm_psnr > row->nlpr_psnr;
    ok5 = ok5 && ok;
    d5 << s.image << " sigma " << s.sigma << ": NLM " << fmt("%.2f", row->nlm_psnr)
       << " (" << s.nlm << "), NLPR " << fmt("%.2f", row->nlpr_psnr) << " (" << s.nlpr
       << "); ";
  }
  d5 << "tol 0.5 dB";
  const bool all_spots = checked == 3;
  report(5, "Table 1 spot checks",
         all_spots ? verdict(ok5) : (checked == 0 ? Outcome::skipped : verdict(ok5)),
         d5.str());

  std::ostringstream d6;
  bool ok6 = true;
  int rows = 0;
  for (const auto& row : rep.rows) {
    if (row.sigma < 20) continue;
    ++rows;
    if (!(row.nlpr_psnr > row.nlm_psnr)) {
      ok6 = false;
      d6 << row.image << " sigma " << row.sigma << " NLPR " << fmt("%.2f", row.nlpr_psnr)
         << " <= NLM " << fmt("%.2f", row.nlm_psnr) << "; ";
    }
  }
  d6 << rows << " (image, sigma) rows over " << available.size() << " images";
  report(6, "NLPR(p=0.1) dominance over NLM, sigma >= 20", verdict(ok6), d6.str());
}

void property_suite() {
  std::ostringstream d;
  bool ok = true;

  // Shift equivariance of the full denoiser.
  {
    const Image noisy = noisy_checker(32, 8, 30.0, 3);
    double worst = 0.0;
    for (double p : {0.1, 0.5, 1.0, 1.5, 2.0}) {
      for (bool knn : {false, true}) {
        const auto params = DenoiseParams::standard(30.0 / 255.0, p, knn);
        const auto a = denoise(noisy, params);
        const auto b = denoise(noisy.shifted(0.5), params);
        worst = std::max(worst, max_abs_diff(b.output, a.output.shifted(0.5)));
      }
    }
    ok = ok && worst <= 1e-12;
    d << "shift " << fmt("%.2g", worst) << " (tol 1e-12); ";
  }

  // Weight-scale invariance of the IRLS iterates.
  {
    std::mt19937_64 rng(101);
    bool exact = true;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      for (double p : {0.1, 0.5, 1.0, 1.5, 2.0}) {
        const PatchCloud cloud = random_cloud(rng, 20 + trial, 9);
        const auto cfg = IrlsConfig::for_patch(p, 3);
        const auto a = irls_solve(cloud, cfg);
        for (double lambda : {0.25, 8.0, 0.3, 7.1}) {
          PatchCloud scaled = cloud;
          for (double& w : scaled.weights) w *= lambda;
          const auto b = irls_solve(scaled, cfg);
          exact = exact && b.iterations == a.iterations;
          if (lambda == 0.25 || lambda == 8.0) {
            exact = exact && a.estimate == b.estimate;
          } else {
            worst = std::max(worst, max_abs_diff(a.estimate, b.estimate));
          }
        }
      }
    }
    ok = ok && exact && worst <= 1e-12;
    d << "weight scale: powers of two " << (exact ? "bitwise" : "DIFFER")
      << ", other factors " << fmt("%.2g", worst) << " (tol 1e-12); ";
  }

  // Descent from the weighted-mean start.
  {
    std::mt19937_64 rng(202);
    int bad = 0;
    int total = 0;
    int kept = 0;
    for (int trial = 0; trial < 50; ++trial) {
      for (double p : {0.1, 0.5, 1.0, 1.5}) {
        const PatchCloud cloud = random_cloud(rng, 10 + trial, trial % 2 ? 49 : 1);
        const auto init = nlm_estimate(cloud);
        const auto res = irls_solve(cloud, IrlsConfig::for_patch(p, 7), init);
        ++total;
        kept += res.kept_init ? 1 : 0;
        if (objective(cloud, res.estimate, p) > objective(cloud, init, p) + 1e-9) ++bad;
      }
    }
    ok = ok && bad == 0;
    d << "descent " << total - bad << "/" << total << " (tol 1e-9, start kept in "
      << kept << "); ";
  }

  // Convex regime against a grid-search minimizer.
  {
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> u(0, 1);
    std::uniform_int_distribution<int> count(2, 7);
    IrlsConfig tight;
    tight.eps_floor = 1e-14;
    tight.tol = 1e-12;
    tight.max_iters = 1000000;
    int total = 0;
    int matched = 0;
    int matched_default = 0;
    for (double p : {1.0, 1.5}) {
      tight.p = p;
      for (int trial = 0; trial < 120; ++trial) {
        const int n = count(rng);
        std::vector<double> x(n), w(n);
        for (int j = 0; j < n; ++j) {
          x[j] = u(rng);
          w[j] = 0.05 + 0.95 * u(rng);
        }
        const auto [argmin, fmin] = oracle::grid_minimize_1d(x, w, p, 0.0, 1.0, 1e-5);
        const auto cloud = scalar_cloud(x, w);
        ++total;
        if (std::abs(irls_solve(cloud, tight).estimate[0] - argmin) < 1e-3) ++matched;
        if (std::abs(irls_solve(cloud, IrlsConfig::for_patch(p, 1)).estimate[0] - argmin) <
            1e-3) {
          ++matched_default;
        }
      }
    }
    ok = ok && matched == total;
    d << "convex oracle " << matched << "/" << total
      << " (tol 1e-3, eps floor 1e-14; default schedule " << matched_default << "/"
      << total << "); ";
  }

  // Range containment and determinism.
  {
    const Image noisy = noisy_checker(32, 8, 60.0, 4);
    const double lo = noisy.min_value();
    const double hi = noisy.max_value();
    bool inside = true;
    bool same = true;
    for (double p : {0.1, 0.5, 1.0, 1.5, 2.0}) {
      const auto params = DenoiseParams::standard(60.0 / 255.0, p, true);
      const auto a = denoise(noisy, params, 1);
      const auto b = denoise(noisy, params, 1);
      const auto c = denoise(noisy, params, 4);
      inside = inside && a.output.min_value() >= lo && a.output.max_value() <= hi;
      same = same && bitwise_equal(a.output, b.output) && bitwise_equal(a.output, c.output);
    }
    ok = ok && inside && same;
    d << "range " << (inside ? "contained" : "VIOLATED") << "; reruns "
      << (same ? "bit-identical" : "DIFFER");
  }

  report(7, "Property suite", verdict(ok), d.str());
}

void noise_calibration() {
  const Image clean = make_checker({256, 32, 0.0, 1.0});
  const Image noisy = add_gaussian_noise(clean, {sigma_from_8bit(40.0), 1});
  const double measured = psnr(clean, noisy);
  const double expected = -20.0 * std::log10(40.0 / 255.0);
  std::ostringstream d;
  d << "PSNR " << fmt("%.3f", measured) << " dB vs " << fmt("%.3f", expected)
    << " dB (tol 0.2)";
  report(8, "Noise calibration, sigma 40, 256x256", verdict(std::abs(measured - expected) <= 0.2),
         d.str());
}

}  // namespace

int main(int argc, char** argv) {
  const bool quick = argc > 1 && std::string(argv[1]) == "--quick";
  try {
    nlm_equivalence();
    const auto edge = edge_study_and_check();
    multiplier_separation(edge);
    if (quick) {
      report(4, "Checker trend", Outcome::skipped, "--quick");
    } else {
      checker_trend();
    }
    table1_checks();
    property_suite();
    noise_calibration();
  } catch (const std::exception& e) {
    std::cout << "FAIL acceptance run aborted: " << e.what() << std::endl;
    return 1;
  }
  std::cout << (failures == 0 ? "all criteria passed or skipped" : "criteria failed: ")
            << (failures ? std::to_string(failures) : "") << std::endl;
  return failures == 0 ? 0 : 1;
}
