// Command-line front end: denoise, sweep, edge-study, table1, checker.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlpr/denoiser.hpp"
#include "nlpr/error.hpp"
#include "nlpr/harness.hpp"
#include "nlpr/noise.hpp"
#include "nlpr/pgm.hpp"
#include "nlpr/synth.hpp"

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw nlpr::IoError("cannot open " + path + " for writing");
  return out;
}

bool parse_switch(const std::string& v) { return v == "on"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-local patch regression denoiser"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");

  // denoise
  auto* den = app.add_subcommand("denoise", "Denoise a PGM image");
  den->set_help_flag("--help", "Print this help message and exit");
  std::string in_path, out_path, noisy_out;
  double sigma = 0.0, p = 0.1;
  int window = 21, patch = 7, max_iters = 0;
  std::optional<double> h;
  std::string knn = "on";
  std::optional<std::uint64_t> seed;
  den->add_option("--input", in_path, "Input PGM")->required();
  den->add_option("--output", out_path, "Output PGM")->required();
  den->add_option("--sigma", sigma, "Noise level on the 0-255 scale")
      ->required();
  den->add_option("--p", p, "Regression index in (0,2]");
  den->add_option("--S", window, "Search window side");
  den->add_option("--k", patch, "Patch side");
  den->add_option("--h", h, "Kernel bandwidth on the 0-255 scale (default 10*sigma)");
  den->add_option("--knn", knn, "Keep only the heavier half of the neighbors")
      ->check(CLI::IsMember({"on", "off"}));
  den->add_option("--seed", seed,
                  "Treat the input as clean and corrupt it with this seed first");
  den->add_option("--max-iters", max_iters, "Solver iteration cap (0 = default)");
  den->add_option("--noisy-output", noisy_out, "Write the corrupted input here");

  // sweep
  auto* sw = app.add_subcommand("sweep", "PSNR sweep over sigma and p");
  std::string sw_input, sw_out;
  int checker_side = 256, checker_square = 32;
  std::vector<double> sw_sigmas{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  std::vector<double> sw_ps{0.1, 0.5, 1.0, 1.5, 2.0};
  int realizations = 1;
  std::uint64_t base_seed = 1;
  std::string sw_knn = "off";
  sw->add_option("--input", sw_input, "Clean PGM (default: generated checker)");
  sw->add_option("--checker-side", checker_side, "Generated checker size");
  sw->add_option("--checker-square", checker_square, "Generated checker square");
  sw->add_option("--sigmas", sw_sigmas, "Noise levels, 0-255 scale")
      ->delimiter(',');
  sw->add_option("--ps", sw_ps, "Regression indices")->delimiter(',');
  sw->add_option("--realizations", realizations, "Noise realizations");
  sw->add_option("--base-seed", base_seed, "Base seed");
  sw->add_option("--knn", sw_knn, "Top-half truncation")
      ->check(CLI::IsMember({"on", "off"}));
  sw->add_option("--S", window, "Search window side");
  sw->add_option("--k", patch, "Patch side");
  sw->add_option("--output", sw_out, "CSV report (default: stdout)");

  // edge-study
  auto* edge = app.add_subcommand("edge-study", "Ideal-edge inlier/outlier study");
  std::vector<std::uint64_t> edge_seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  double edge_sigma = 0.3;
  std::string edge_out, mu_prefix;
  edge->add_option("--seeds", edge_seeds, "Noise seeds")->delimiter(',');
  edge->add_option("--sigma", edge_sigma, "Noise level on the [0,1] scale");
  edge->add_option("--output", edge_out, "Estimates CSV (default: stdout)");
  edge->add_option("--multipliers", mu_prefix,
                   "Write <prefix>_p<p>.csv multiplier dumps for the first seed");

  // table1
  auto* t1 = app.add_subcommand("table1", "NLM vs NLPR on standard images");
  nlpr::Table1Config t1cfg;
  std::string t1_csv;
  t1->add_option("--image-dir", t1cfg.image_dir, "Directory with <name>.pgm")
      ->required();
  t1->add_option("--images", t1cfg.images, "Image names")->delimiter(',');
  t1->add_option("--sigmas", t1cfg.sigmas, "Noise levels, 0-255 scale")
      ->delimiter(',');
  t1->add_option("--realizations", t1cfg.realizations, "Noise realizations");
  t1->add_option("--base-seed", t1cfg.base_seed, "Base seed");
  t1->add_option("--p", t1cfg.nlpr_p, "Regression index for NLPR");
  t1->add_option("--csv", t1_csv, "Also write CSV here");

  // checker
  auto* ck = app.add_subcommand("checker", "Write a Checker test image");
  nlpr::CheckerSpec ckspec;
  std::string ck_out;
  ck->add_option("--size", ckspec.image_side, "Image side");
  ck->add_option("--square", ckspec.square_side, "Square side");
  ck->add_option("--output", ck_out, "Output PGM")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*den) {
      const double sigma01 = nlpr::sigma_from_8bit(sigma);
      nlpr::Image clean = nlpr::read_pgm(in_path);
      nlpr::Image noisy = clean;
      if (seed) {
        noisy = nlpr::add_gaussian_noise(clean, {sigma01, *seed});
        if (!noisy_out.empty()) nlpr::write_pgm(noisy_out, noisy);
      }
      nlpr::DenoiseParams params =
          nlpr::DenoiseParams::standard(sigma01, p, parse_switch(knn));
      params.search.window = window;
      params.search.patch_side = patch;
      if (h) params.search.h = nlpr::sigma_from_8bit(*h);
      params.irls = nlpr::IrlsConfig::for_patch(p, patch);
      if (max_iters > 0) params.irls.max_iters = max_iters;
      const auto report = nlpr::denoise(noisy, params, threads);
      nlpr::write_pgm(out_path, report.output);
      std::cerr << "mean iterations " << report.mean_iterations
                << ", converged " << report.converged_fraction * 100 << "%\n";
      if (seed) {
        std::cerr << "PSNR noisy " << nlpr::format_psnr(nlpr::psnr(clean, noisy))
                  << " dB, denoised "
                  << nlpr::format_psnr(nlpr::psnr(clean, report.output))
                  << " dB\n";
      }
    } else if (*sw) {
      nlpr::ExperimentSpec spec;
      spec.input = sw_input.empty()
                       ? nlpr::ImageSource::generated(
                             {checker_side, checker_square, 0.0, 1.0})
                       : nlpr::ImageSource::file(sw_input);
      spec.sigmas = sw_sigmas;
      spec.ps = sw_ps;
      spec.realizations = realizations;
      spec.base_seed = base_seed;
      spec.knn_truncation = parse_switch(sw_knn);
      spec.rule.window = window;
      spec.rule.patch_side = patch;
      spec.threads = threads;
      const auto report = nlpr::run_sweep(spec, &std::cerr);
      if (sw_out.empty()) {
        report.write_csv(std::cout);
      } else {
        auto out = open_output(sw_out);
        report.write_csv(out);
      }
    } else if (*edge) {
      nlpr::EdgeStudyConfig cfg;
      cfg.sigma = edge_sigma;
      const auto report = nlpr::run_edge_study(edge_seeds, cfg);
      if (edge_out.empty()) {
        report.write_estimates_csv(std::cout);
      } else {
        auto out = open_output(edge_out);
        report.write_estimates_csv(out);
      }
      if (!mu_prefix.empty()) {
        for (std::size_t i = 0; i < report.multiplier_ps.size(); ++i) {
          std::ostringstream name;
          name << mu_prefix << "_p" << report.multiplier_ps[i] << ".csv";
          auto out = open_output(name.str());
          report.write_multipliers_csv(out, i, 0);
        }
      }
    } else if (*t1) {
      t1cfg.threads = threads;
      const auto report = nlpr::run_table1(t1cfg, &std::cerr);
      report.write_text(std::cout);
      if (!t1_csv.empty()) {
        auto out = open_output(t1_csv);
        report.write_csv(out);
      }
    } else if (*ck) {
      nlpr::write_pgm(ck_out, nlpr::make_checker(ckspec));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
