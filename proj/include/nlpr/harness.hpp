#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlpr/image.hpp"
#include "nlpr/synth.hpp"
#include "nlpr/weights.hpp"

namespace nlpr {

/// Maps a noise level to search parameters: fixed S and k, h = factor*sigma.
struct ParamsRule {
  int window = 21;
  int patch_side = 7;
  double h_factor = 10.0;
  // Lower bound on h so that sigma = 0 still yields a valid kernel.
  double min_h = 1e-6;

  SearchParams for_sigma(double sigma) const;  // sigma on the [0,1] scale
};

// Seed of realization r in a sweep started from base_seed.
std::uint64_t realization_seed(std::uint64_t base_seed, int realization);

/// Either a PGM file or a generated Checker image.
struct ImageSource {
  std::optional<std::filesystem::path> path;
  CheckerSpec checker;

  static ImageSource file(std::filesystem::path p);
  static ImageSource generated(const CheckerSpec& spec);
  Image load() const;
  std::string describe() const;
};

struct ExperimentSpec {
  ImageSource input = ImageSource::generated({});
  std::vector<double> sigmas;  // 0-255 scale
  std::vector<double> ps;
  int realizations = 1;
  std::uint64_t base_seed = 1;
  bool knn_truncation = true;
  ParamsRule rule;
  unsigned threads = 0;

  void validate() const;
};

struct SweepRow {
  double sigma = 0.0;  // 0-255 scale
  double p = 0.0;
  std::uint64_t seed = 0;
  double psnr_db = 0.0;
  double mean_iters = 0.0;
  double runtime_s = 0.0;
  std::string error;  // empty on success
};

struct SweepReport {
  std::vector<SweepRow> rows;

  // Mean PSNR over realizations; NaN if no successful row matches.
  double mean_psnr(double sigma, double p) const;
  void write_csv(std::ostream& out) const;
};

// For every (sigma, realization) the image is corrupted once and denoised
// with every p against the same weights. Rows are ordered by sigma, then p,
// then realization. A solver failure is recorded on its rows and the sweep
// moves on.
SweepReport run_sweep(const ExperimentSpec& spec,
                      std::ostream* progress = nullptr);

struct EdgeStudyConfig {
  EdgeSpec edge;
  double sigma = 0.3;
  int reference = 130;
  int patch_side = 3;
  int window = 41;
  double h_factor = 10.0;
  double min_h = 1e-6;
  std::vector<double> estimate_ps{2.0, 1.0, 0.1};
  std::vector<double> multiplier_ps{2.0, 1.0, 0.5};
};

struct EdgeStudyReport {
  std::vector<std::uint64_t> seeds;
  std::vector<double> estimate_ps;
  // estimates[p][seed]: center sample of the regressed reference patch.
  std::vector<std::vector<double>> estimates;
  std::vector<double> mean_estimates;
  std::vector<double> multiplier_ps;
  // sorted_multipliers[p][seed]: final multipliers, non-increasing.
  std::vector<std::vector<std::vector<double>>> sorted_multipliers;

  void write_estimates_csv(std::ostream& out) const;
  void write_multipliers_csv(std::ostream& out, std::size_t p_index,
                             std::size_t seed_index) const;
};

// Noisy ideal edge, full neighborhood, regression at the reference sample.
EdgeStudyReport run_edge_study(std::span<const std::uint64_t> seeds,
                               const EdgeStudyConfig& cfg = {});

struct Table1Config {
  std::filesystem::path image_dir;
  std::vector<std::string> images{"house", "barbara", "boat", "cameraman",
                                  "peppers"};
  std::vector<double> sigmas{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  int realizations = 10;
  std::uint64_t base_seed = 1;
  double nlpr_p = 0.1;
  ParamsRule rule;
  unsigned threads = 0;
};

struct Table1Row {
  std::string image;
  double sigma = 0.0;
  double nlm_psnr = 0.0;   // closed-form weighted mean, full window
  double nlpr_psnr = 0.0;  // l_p regression with top-half truncation
};

struct Table1Report {
  std::vector<Table1Row> rows;
  std::vector<std::string> missing;

  const Table1Row* find(const std::string& image, double sigma) const;
  void write_csv(std::ostream& out) const;
  void write_text(std::ostream& out) const;
};

// Looks for <name>.pgm (as given, lower case, or capitalized) in image_dir.
std::optional<std::filesystem::path> find_image(
    const std::filesystem::path& dir, const std::string& name);

// Missing images are listed in the report (and warned about on `log`) and
// skipped.
Table1Report run_table1(const Table1Config& cfg, std::ostream* log = nullptr);

// Formats a PSNR for reports; the infinite sentinel prints as "inf".
std::string format_psnr(double psnr_db);

}  // namespace nlpr
