// Command-line front end: run sweeps, run the oracle suite, inspect presets.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ilc/harness/experiment.hpp"
#include "ilc/harness/presets.hpp"
#include "ilc/harness/validate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;

using namespace ilc::harness;

int cmd_run(const std::vector<std::string>& paths, const std::string& preset, std::optional<std::uint64_t> seed,
            const std::string& format, int jobs) {
  ExperimentConfig cfg;
  std::string outdir;
  if (!preset.empty()) {
    if (paths.size() != 1) throw ConfigError("", 0, 0, "with --preset, give only the output directory");
    cfg = preset_config(preset);
    outdir = paths[0];
  } else {
    if (paths.size() != 2) throw ConfigError("", 0, 0, "usage: ilc run <config> <outdir> (or --preset NAME <outdir>)");
    cfg = load_config(paths[0]);
    outdir = paths[1];
  }
  if (seed) cfg.seed = *seed;
  RunOptions opt;
  opt.jobs = jobs;
  opt.format = format == "json" ? OutputFormat::kJson : format == "both" ? OutputFormat::kBoth : OutputFormat::kCsv;

  const ExperimentOutput out = run_experiment(cfg, outdir, opt);
  std::printf("%-10s %-12s %8s %7s %12s %10s %5s  %s\n", "scenario", "method", "v(m/s)", "P(W)", "avg SE", "PTR",
              "iter", "status");
  for (const auto& c : out.cells) {
    const auto& r = c.row;
    std::printf("%-10s %-12s %8.2f %7.2f %12.6f %10.6f %5d  %s\n", r.scenario_id.c_str(), r.method.c_str(),
                r.velocity, r.p_max, r.average_se, r.ptr, r.iterations, r.status.c_str());
  }
  if (!out.data_sweep.empty())
    std::printf("data-duration sweep: %zu points written to %s/data_sweep.csv\n", out.data_sweep.size(),
                outdir.c_str());
  return kExitOk;
}

int cmd_validate(std::optional<std::uint64_t> seed, int jobs, bool quick, std::size_t trials, const std::string& fault) {
  ValidationOptions o;
  if (seed) o.seed = *seed;
  o.workers = static_cast<unsigned>(std::max(1, jobs));
  if (quick) o.mc_trials = 50'000;
  if (trials) o.mc_trials = trials;
  if (fault == "lambda-theta-sign") o.fault = Fault::kLambdaThetaSign;
  else if (!fault.empty() && fault != "none") throw ConfigError("--inject-fault", 0, 0, "unknown fault '" + fault + "'");

  bool ok = true;
  for (const auto& r : validate_oracles(o)) {
    std::printf("%-4s %-22s measured=%-12.4g threshold=%-10.4g %6.2fs%s%s\n", r.passed ? "PASS" : "FAIL",
                r.name.c_str(), r.measured, r.threshold, r.seconds, r.detail.empty() ? "" : "  ", r.detail.c_str());
    ok = ok && r.passed;
  }
  return ok ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frame structure, beamwidth and power optimization for a UAV-to-ground link"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  int jobs = 1;

  auto* run = app.add_subcommand("run", "run a sweep: ilc run <config> <outdir>, or ilc run --preset NAME <outdir>");
  std::vector<std::string> paths;
  std::string preset, format = "csv";
  run->add_option("paths", paths, "config file and output directory")->required()->expected(1, 2);
  run->add_option("--preset", preset, "built-in preset instead of a config file")
      ->check(CLI::IsMember({"fig3", "fig4", "fig5", "fig6", "fig7", "fig8"}));
  run->add_option("--seed", seed, "override the master seed");
  run->add_option("--format", format, "results format")->check(CLI::IsMember({"csv", "json", "both"}));
  run->add_option("--jobs", jobs, "parallel sweep cells")->check(CLI::PositiveNumber);

  auto* val = app.add_subcommand("validate", "run the oracle suite");
  bool quick = false;
  std::size_t trials = 0;
  std::string fault;
  val->add_option("--seed", seed, "oracle seed");
  val->add_option("--jobs", jobs, "Monte-Carlo worker threads")->check(CLI::PositiveNumber);
  val->add_flag("--quick", quick, "fewer Monte-Carlo trials");
  val->add_option("--trials", trials, "Monte-Carlo trials per grid point");
  val->add_option("--inject-fault", fault, "corrupt one quantity to exercise the checks")
      ->check(CLI::IsMember({"none", "lambda-theta-sign"}));

  auto* pre = app.add_subcommand("presets", "list or print built-in presets");
  pre->require_subcommand(1);
  auto* list = pre->add_subcommand("list", "list presets");
  auto* show = pre->add_subcommand("show", "print a preset config");
  std::string show_name;
  show->add_option("name", show_name)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(paths, preset, seed, format, jobs);
    if (val->parsed()) return cmd_validate(seed, jobs, quick, trials, fault);
    if (list->parsed()) {
      for (const auto& p : presets()) std::printf("%-6s %s\n", std::string(p.name).c_str(), std::string(p.summary).c_str());
      return kExitOk;
    }
    if (show->parsed()) {
      const Preset* p = find_preset(show_name);
      if (!p) throw ConfigError("", 0, 0, "unknown preset '" + show_name + "'");
      std::fwrite(p->text.data(), 1, p->text.size(), stdout);
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
  return kExitOk;
}
