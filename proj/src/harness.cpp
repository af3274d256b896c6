#include "nlpr/harness.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "nlpr/denoiser.hpp"
#include "nlpr/error.hpp"
#include "nlpr/irls.hpp"
#include "nlpr/noise.hpp"
#include "nlpr/pgm.hpp"

namespace nlpr {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int precision) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

}  // namespace

SearchParams ParamsRule::for_sigma(double sigma) const {
  SearchParams sp{window, patch_side, std::max(h_factor * sigma, min_h)};
  sp.validate();
  return sp;
}

std::uint64_t realization_seed(std::uint64_t base_seed, int realization) {
  return base_seed * 1000 + static_cast<std::uint64_t>(realization);
}

ImageSource ImageSource::file(std::filesystem::path p) {
  ImageSource src;
  src.path = std::move(p);
  return src;
}

ImageSource ImageSource::generated(const CheckerSpec& spec) {
  ImageSource src;
  src.checker = spec;
  return src;
}

Image ImageSource::load() const {
  if (path) return read_pgm(*path);
  return make_checker(checker);
}

std::string ImageSource::describe() const {
  if (path) return path->string();
  return "checker " + std::to_string(checker.image_side) + "/" +
         std::to_string(checker.square_side);
}

void ExperimentSpec::validate() const {
  if (sigmas.empty()) throw ParameterError("sweep needs at least one sigma");
  if (ps.empty()) throw ParameterError("sweep needs at least one p");
  if (realizations < 1) throw ParameterError("realizations must be >= 1");
  for (double s : sigmas) {
    if (!(s >= 0.0)) throw ParameterError("sigma must be >= 0");
  }
  for (double p : ps) {
    if (!(p > 0.0 && p <= 2.0)) {
      throw ParameterError("p must lie in (0, 2], got " + std::to_string(p));
    }
  }
}

double SweepReport::mean_psnr(double sigma, double p) const {
  double sum = 0.0;
  int n = 0;
  for (const auto& r : rows) {
    if (r.sigma == sigma && r.p == p && r.error.empty()) {
      sum += r.psnr_db;
      ++n;
    }
  }
  return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / n;
}

void SweepReport::write_csv(std::ostream& out) const {
  out << "sigma,p,seed,psnr_db,mean_iters,runtime_s\n";
  for (const auto& r : rows) {
    out << r.sigma << ',' << r.p << ',' << r.seed << ','
        << (r.error.empty() ? format_psnr(r.psnr_db) : std::string("nan"))
        << ',' << fmt(r.mean_iters, 3) << ',' << fmt(r.runtime_s, 3) << '\n';
  }
}

SweepReport run_sweep(const ExperimentSpec& spec, std::ostream* progress) {
  spec.validate();
  const Image clean = spec.input.load();
  const std::size_t nps = spec.ps.size();

  // cells[sigma][realization][p]
  std::vector<SweepRow> cells(spec.sigmas.size() * spec.realizations * nps);
  auto cell = [&](std::size_t s, int r, std::size_t p) -> SweepRow& {
    return cells[(s * spec.realizations + r) * nps + p];
  };

  for (std::size_t s = 0; s < spec.sigmas.size(); ++s) {
    const double sigma255 = spec.sigmas[s];
    const double sigma = sigma_from_8bit(sigma255);
    const SearchParams search = spec.rule.for_sigma(sigma);
    std::vector<IrlsConfig> solvers;
    for (double p : spec.ps) {
      solvers.push_back(IrlsConfig::for_patch(p, search.patch_side));
    }
    for (int r = 0; r < spec.realizations; ++r) {
      const std::uint64_t seed = realization_seed(spec.base_seed, r);
      for (std::size_t p = 0; p < nps; ++p) {
        cell(s, r, p) = SweepRow{sigma255, spec.ps[p], seed, 0.0, 0.0, 0.0, {}};
      }
      const auto t0 = Clock::now();
      try {
        const Image noisy = add_gaussian_noise(clean, {sigma, seed});
        const auto reports = denoise_many(noisy, search, spec.knn_truncation,
                                          solvers, spec.threads);
        const double wall = seconds_since(t0);
        double solve_total = 0.0;
        for (const auto& rep : reports) solve_total += rep.solve_seconds;
        const double shared = std::max(0.0, wall - solve_total) / nps;
        for (std::size_t p = 0; p < nps; ++p) {
          auto& row = cell(s, r, p);
          row.psnr_db = psnr(clean, reports[p].output);
          row.mean_iters = reports[p].mean_iterations;
          row.runtime_s = reports[p].solve_seconds + shared;
        }
      } catch (const std::exception& e) {
        for (std::size_t p = 0; p < nps; ++p) {
          cell(s, r, p).error = e.what();
          cell(s, r, p).psnr_db = std::numeric_limits<double>::quiet_NaN();
        }
        if (progress) {
          *progress << "sigma=" << sigma255 << " seed=" << seed
                    << " failed: " << e.what() << '\n';
        }
      }
      if (progress) {
        *progress << "sigma=" << sigma255 << " seed=" << seed << " done in "
                  << fmt(seconds_since(t0), 1) << " s\n";
      }
    }
  }

  SweepReport report;
  report.rows.reserve(cells.size());
  for (std::size_t s = 0; s < spec.sigmas.size(); ++s) {
    for (std::size_t p = 0; p < nps; ++p) {
      for (int r = 0; r < spec.realizations; ++r) {
        report.rows.push_back(cell(s, r, p));
      }
    }
  }
  return report;
}

void EdgeStudyReport::write_estimates_csv(std::ostream& out) const {
  out << "p,seed,estimate\n";
  for (std::size_t p = 0; p < estimate_ps.size(); ++p) {
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      out << estimate_ps[p] << ',' << seeds[s] << ','
          << fmt(estimates[p][s], 6) << '\n';
    }
    out << estimate_ps[p] << ",mean," << fmt(mean_estimates[p], 6) << '\n';
  }
}

void EdgeStudyReport::write_multipliers_csv(std::ostream& out,
                                            std::size_t p_index,
                                            std::size_t seed_index) const {
  out << "rank,mu\n";
  const auto& mu = sorted_multipliers.at(p_index).at(seed_index);
  out << std::setprecision(10);
  for (std::size_t k = 0; k < mu.size(); ++k) {
    out << k + 1 << ',' << mu[k] << '\n';
  }
}

EdgeStudyReport run_edge_study(std::span<const std::uint64_t> seeds,
                               const EdgeStudyConfig& cfg) {
  if (seeds.empty()) throw ParameterError("edge study needs at least one seed");
  const std::vector<double> clean = make_edge(cfg.edge);

  DenoiseParams params;
  params.search = {cfg.window, cfg.patch_side,
                   std::max(cfg.h_factor * cfg.sigma, cfg.min_h)};
  params.use_knn_truncation = false;

  EdgeStudyReport rep;
  rep.seeds.assign(seeds.begin(), seeds.end());
  rep.estimate_ps = cfg.estimate_ps;
  rep.multiplier_ps = cfg.multiplier_ps;
  rep.estimates.assign(cfg.estimate_ps.size(),
                       std::vector<double>(seeds.size()));
  rep.sorted_multipliers.assign(cfg.multiplier_ps.size(),
                                std::vector<std::vector<double>>(seeds.size()));

  for (std::size_t s = 0; s < seeds.size(); ++s) {
    const auto noisy = add_gaussian_noise(clean, {cfg.sigma, seeds[s]});
    for (std::size_t p = 0; p < cfg.estimate_ps.size(); ++p) {
      params.p = cfg.estimate_ps[p];
      params.irls = IrlsConfig::for_patch(params.p, cfg.patch_side);
      rep.estimates[p][s] =
          regress_line_at(noisy, cfg.reference, params).estimate;
    }
    for (std::size_t p = 0; p < cfg.multiplier_ps.size(); ++p) {
      params.p = cfg.multiplier_ps[p];
      params.irls = IrlsConfig::for_patch(params.p, cfg.patch_side);
      rep.sorted_multipliers[p][s] =
          sorted_multipliers(regress_line_at(noisy, cfg.reference, params).result);
    }
  }
  for (const auto& per_seed : rep.estimates) {
    double sum = 0.0;
    for (double v : per_seed) sum += v;
    rep.mean_estimates.push_back(sum / static_cast<double>(per_seed.size()));
  }
  return rep;
}

std::optional<std::filesystem::path> find_image(
    const std::filesystem::path& dir, const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  std::string capital = lower;
  if (!capital.empty()) {
    capital[0] = static_cast<char>(std::toupper(capital[0]));
  }
  for (const auto& candidate : {name, lower, capital}) {
    const auto path = dir / (candidate + ".pgm");
    if (std::filesystem::is_regular_file(path)) return path;
  }
  return std::nullopt;
}

const Table1Row* Table1Report::find(const std::string& image,
                                    double sigma) const {
  for (const auto& r : rows) {
    if (r.image == image && r.sigma == sigma) return &r;
  }
  return nullptr;
}

void Table1Report::write_csv(std::ostream& out) const {
  out << "image,sigma,nlm_psnr_db,nlpr_psnr_db\n";
  for (const auto& r : rows) {
    out << r.image << ',' << r.sigma << ',' << format_psnr(r.nlm_psnr) << ','
        << format_psnr(r.nlpr_psnr) << '\n';
  }
}

void Table1Report::write_text(std::ostream& out) const {
  std::vector<std::string> images;
  std::vector<double> sigmas;
  for (const auto& r : rows) {
    if (std::find(images.begin(), images.end(), r.image) == images.end()) {
      images.push_back(r.image);
    }
    if (std::find(sigmas.begin(), sigmas.end(), r.sigma) == sigmas.end()) {
      sigmas.push_back(r.sigma);
    }
  }
  out << std::left << std::setw(12) << "image" << std::setw(8) << "method";
  for (double s : sigmas) out << std::right << std::setw(8) << s;
  out << '\n';
  for (const auto& img : images) {
    for (int method = 0; method < 2; ++method) {
      out << std::left << std::setw(12) << (method == 0 ? img : "")
          << std::setw(8) << (method == 0 ? "NLM" : "NLPR");
      for (double s : sigmas) {
        const Table1Row* r = find(img, s);
        const std::string cell =
            r ? format_psnr(method == 0 ? r->nlm_psnr : r->nlpr_psnr) : "-";
        out << std::right << std::setw(8) << cell;
      }
      out << '\n';
    }
  }
  for (const auto& m : missing) out << "missing: " << m << '\n';
}

Table1Report run_table1(const Table1Config& cfg, std::ostream* log) {
  if (cfg.realizations < 1) throw ParameterError("realizations must be >= 1");
  Table1Report report;
  for (const auto& name : cfg.images) {
    const auto path = find_image(cfg.image_dir, name);
    if (!path) {
      report.missing.push_back(name);
      if (log) {
        *log << "warning: " << name << ".pgm not found in "
             << cfg.image_dir.string() << ", skipping\n";
      }
      continue;
    }
    const Image clean = read_pgm(*path);
    if (clean.width() < cfg.rule.window || clean.height() < cfg.rule.window) {
      throw ParameterError(path->string() + " is smaller than the search window");
    }
    if (log) {
      *log << name << ": " << clean.width() << "x" << clean.height() << '\n';
    }
    for (double sigma255 : cfg.sigmas) {
      const double sigma = sigma_from_8bit(sigma255);
      const SearchParams search = cfg.rule.for_sigma(sigma);
      const IrlsConfig solver = IrlsConfig::for_patch(cfg.nlpr_p, search.patch_side);
      double nlm_sum = 0.0;
      double nlpr_sum = 0.0;
      for (int r = 0; r < cfg.realizations; ++r) {
        const auto seed = realization_seed(cfg.base_seed, r);
        const Image noisy = add_gaussian_noise(clean, {sigma, seed});
        nlm_sum += psnr(clean, nlm_closed_form(noisy, search, cfg.threads));
        const auto reports = denoise_many(
            noisy, search, true, std::span<const IrlsConfig>(&solver, 1),
            cfg.threads);
        nlpr_sum += psnr(clean, reports.front().output);
      }
      Table1Row row{name, sigma255, nlm_sum / cfg.realizations,
                    nlpr_sum / cfg.realizations};
      if (log) {
        *log << "  sigma=" << sigma255 << "  NLM " << format_psnr(row.nlm_psnr)
             << "  NLPR " << format_psnr(row.nlpr_psnr) << '\n';
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

std::string format_psnr(double psnr_db) {
  if (std::isinf(psnr_db) && psnr_db > 0) return "inf";
  return fmt(psnr_db, 2);
}

}  // namespace nlpr
