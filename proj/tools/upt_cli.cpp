#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "upt/analyze.hpp"
#include "upt/config.hpp"
#include "upt/experiment.hpp"
#include "upt/table.hpp"

namespace {

upt::RunOptions run_options(unsigned threads, bool quiet) {
  upt::RunOptions o;
  o.threads = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  if (!quiet)
    o.progress = [](upt::Index done, upt::Index total) {
      std::cerr << "\rreplicate " << done << "/" << total << std::flush;
      if (done == total) std::cerr << '\n';
    };
  return o;
}

upt::ExperimentConfig resolve_config(const std::string& preset, const std::string& config_file,
                                     std::optional<upt::Index> reps, std::optional<std::uint64_t> seed) {
  upt::ExperimentConfig c = config_file.empty() ? upt::preset(preset) : upt::load_config(config_file);
  if (reps) c.reps = *reps;
  if (seed) c.master_seed = *seed;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UPT multiple testing for sparse linear regression"};
  app.require_subcommand(1);

  std::string preset, config_file, out_dir = "results";
  std::optional<upt::Index> reps;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  bool quiet = false;

  auto* sim = app.add_subcommand("simulate", "run a replicated experiment");
  auto* preset_opt = sim->add_option("--preset", preset, "EXP1..EXP5, SMOKE or TABLE1");
  sim->add_option("--config", config_file, "JSON configuration")->excludes(preset_opt)->check(CLI::ExistingFile);
  sim->add_option("--reps", reps, "replicate count");
  sim->add_option("--seed", seed, "master seed");
  sim->add_option("--out", out_dir, "output directory");
  sim->add_option("--threads", threads, "worker threads (0 = all cores)");
  sim->add_flag("--quiet", quiet, "no progress output");

  std::string x_file, y_file;
  double alpha = 0.05;
  std::optional<double> theta, r, q, K, gram_threshold;
  bool estimate = false;
  auto* an = app.add_subcommand("analyze", "run UPT on a dataset");
  an->add_option("--x", x_file, "design CSV (n x p)")->required()->check(CLI::ExistingFile);
  an->add_option("--y", y_file, "response CSV (n x 1)")->required()->check(CLI::ExistingFile);
  an->add_option("--alpha", alpha, "nominal mFDR level")->required();
  auto* theta_opt = an->add_option("--theta", theta, "sparsity exponent");
  auto* r_opt = an->add_option("--r", r, "strength exponent");
  theta_opt->needs(r_opt);
  r_opt->needs(theta_opt);
  auto* est_flag = an->add_flag("--estimate", estimate, "estimate theta and r from the data");
  est_flag->excludes(theta_opt)->excludes(r_opt);
  an->add_option("--q", q, "screening exponent");
  an->add_option("--K", K, "component constant");
  an->add_option("--gram-threshold", gram_threshold, "Gram entry threshold (default 1/log(p)^2)");

  std::string results_file, format = "markdown";
  auto* tab = app.add_subcommand("table", "render a results CSV");
  tab->add_option("--results", results_file, "results.csv")->required()->check(CLI::ExistingFile);
  tab->add_option("--format", format, "markdown or csv")->check(CLI::IsMember({"markdown", "csv"}));

  std::string reference = "bh", target = "upt";
  auto* match = app.add_subcommand("match-mfdr", "calibrate a method's nominal level to another's mFDR");
  auto* mpreset = match->add_option("--preset", preset, "experiment preset");
  match->add_option("--config", config_file, "JSON configuration")->excludes(mpreset)->check(CLI::ExistingFile);
  match->add_option("--reference", reference, "reference method");
  match->add_option("--target", target, "target method");
  match->add_option("--reps", reps, "replicate count");
  match->add_option("--seed", seed, "master seed");
  match->add_option("--out", out_dir, "output directory");
  match->add_option("--threads", threads, "worker threads (0 = all cores)");
  match->add_flag("--quiet", quiet, "no progress output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      if (preset.empty() && config_file.empty()) throw CLI::RequiredError("--preset or --config");
      const auto config = resolve_config(preset, config_file, reps, seed);
      upt::ExperimentRun run;
      int status = 0;
      try {
        run = upt::run_experiment(config, run_options(threads, quiet));
      } catch (const upt::ExperimentAborted& e) {
        std::cerr << e.what() << '\n';
        run = e.partial();
        status = 2;
      }
      upt::write_run_outputs(out_dir, run);
      std::cout << upt::render_table(run.table, upt::TableFormat::markdown);
      return status;
    }
    if (*an) {
      if (!estimate && !theta) throw CLI::RequiredError("--theta/--r or --estimate");
      upt::AnalyzeRequest req;
      req.alpha = alpha;
      req.theta = theta;
      req.r = r;
      req.settings.q = q;
      req.settings.K = K;
      req.settings.gram_threshold = gram_threshold;
      upt::write_report(std::cout, upt::analyze_files(x_file, y_file, req));
      return 0;
    }
    if (*tab) {
      std::ifstream in(results_file);
      const auto table = upt::parse_results_csv(in, results_file);
      std::cout << upt::render_table(table, upt::parse_table_format(format));
      return 0;
    }
    if (*match) {
      if (preset.empty() && config_file.empty()) throw CLI::RequiredError("--preset or --config");
      const auto config = resolve_config(preset, config_file, reps, seed);
      const auto result =
          upt::match_mfdr(config, upt::parse_method(reference), upt::parse_method(target), run_options(threads, quiet));
      for (const auto& o : result.outcomes) {
        std::cout << "tau=" << upt::format_double(o.tau) << " reference_mfdr=" << upt::format_double(o.reference_mfdr)
                  << " alpha=" << upt::format_double(o.alpha) << " achieved_mfdr=" << upt::format_double(o.achieved_mfdr)
                  << " iterations=" << o.iterations << (o.converged ? " converged" : " not-converged");
        if (!o.note.empty()) std::cout << " (" << o.note << ")";
        std::cout << '\n';
      }
      std::filesystem::create_directories(out_dir);
      std::ofstream f(std::filesystem::path(out_dir) / "results.csv");
      upt::write_results_csv(f, result.table);
      std::cout << upt::render_table(result.table, upt::TableFormat::markdown);
      return 0;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
