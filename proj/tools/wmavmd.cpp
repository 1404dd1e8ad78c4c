#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "wmavmd/commands.hpp"

namespace {

struct Flags {
  std::string input, model, output, labels, reference, index_output, baseline_output;
  std::string window, window_range, cl_policy = "max", virtual_channel = "none";
  std::vector<double> f_check;
  std::uint64_t seed = 0;
  std::size_t iterations = 100000;
  std::size_t solver_iterations = 2000;
  std::size_t max_lag = 10;
  bool inject_solver_defect = false;
  wmavmd::BaselineThresholds baseline;
};

template <class T>
CLI::Option* opt(CLI::App* app, const std::string& name, T& target, const std::string& help,
                 const std::string& env) {
  return app->add_option(name, target, help)->envname("WMAVMD_" + env);
}

void add_io(CLI::App* app, Flags& f, bool model, bool reference) {
  opt(app, "--input,-i", f.input, "input file", "INPUT");
  opt(app, "--output,-o", f.output, "output file", "OUTPUT");
  if (model) opt(app, "--model,-m", f.model, "model JSON", "MODEL");
  if (reference) opt(app, "--reference", f.reference, "reference speed CSV (t,v_ref)", "REFERENCE");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace wmavmd;
  CLI::App app{"Wheelset intermittent over-creep detection with weighted VMD indices"};
  app.require_subcommand(1);
  Flags f;

  auto* simulate = app.add_subcommand("simulate", "generate a synthetic trace from a scenario");
  add_io(simulate, f, false, true);
  opt(simulate, "--labels", f.labels, "ground-truth label CSV", "LABELS");
  opt(simulate, "--seed", f.seed, "noise seed override", "SEED");

  auto* train = app.add_subcommand("train", "fit weights and control limits");
  add_io(train, f, true, true);
  auto* w1 = opt(train, "--window,-w", f.window, "window length", "WINDOW");
  auto* wr = opt(train, "--window-range", f.window_range, "window range a..b", "WINDOW_RANGE");
  w1->excludes(wr);
  opt(train, "--cl-policy", f.cl_policy, "max | quantile:q", "CL_POLICY");
  opt(train, "--virtual", f.virtual_channel, "none | reference | inertial[:a]", "VIRTUAL");
  opt(train, "--max-lag", f.max_lag, "largest autocovariance lag", "MAX_LAG");

  auto* detect = app.add_subcommand("detect", "run the online detector over a trace");
  add_io(detect, f, true, true);
  opt(detect, "--window,-w", f.window, "window length", "WINDOW");
  opt(detect, "--f-check", f.f_check, "tolerable fault magnitude (one value or one per channel)",
      "F_CHECK")
      ->delimiter(',');
  opt(detect, "--index-output", f.index_output, "per-sample index/CL CSV", "INDEX_OUTPUT");
  opt(detect, "--baseline-output", f.baseline_output, "baseline rule alarm CSV", "BASELINE_OUTPUT");
  opt(detect, "--jpe", f.baseline.traction_velocity, "traction speed-difference threshold", "JPE");
  opt(detect, "--jpa", f.baseline.traction_accel, "traction acceleration threshold", "JPA");
  opt(detect, "--jbe", f.baseline.braking_velocity, "braking speed-difference threshold", "JBE");
  opt(detect, "--jba", f.baseline.braking_accel, "braking deceleration threshold", "JBA");

  auto* analyze = app.add_subcommand("analyze", "print the isolability threshold table");
  opt(analyze, "--model,-m", f.model, "model JSON", "MODEL");
  opt(analyze, "--output,-o", f.output, "report file", "OUTPUT");
  opt(analyze, "--f-check", f.f_check, "tolerable fault magnitude", "F_CHECK")->delimiter(',');

  auto* fuzz = app.add_subcommand("fuzz", "run the randomized property suites");
  opt(fuzz, "--iterations", f.iterations, "operator cases", "ITERATIONS");
  opt(fuzz, "--solver-iterations", f.solver_iterations, "solver instances", "SOLVER_ITERATIONS");
  opt(fuzz, "--seed", f.seed, "seed", "SEED");
  opt(fuzz, "--output,-o", f.output, "report file", "OUTPUT");
  fuzz->add_flag("--inject-solver-defect", f.inject_solver_defect,
                 "corrupt the weight solver to exercise the suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  RunConfig cfg;
  try {
    if (simulate->parsed()) cfg.command = Command::Simulate;
    if (train->parsed()) cfg.command = Command::Train;
    if (detect->parsed()) cfg.command = Command::Detect;
    if (analyze->parsed()) cfg.command = Command::Analyze;
    if (fuzz->parsed()) cfg.command = Command::Fuzz;
    cfg.input = f.input;
    cfg.model = f.model;
    cfg.output = f.output;
    cfg.labels = f.labels;
    cfg.reference = f.reference;
    cfg.index_output = f.index_output;
    cfg.baseline_output = f.baseline_output;
    if (!f.window.empty()) cfg.windows = parse_window_range(f.window);
    if (!f.window_range.empty()) cfg.windows = parse_window_range(f.window_range);
    cfg.f_check = f.f_check;
    cfg.cl_policy = ClPolicy::parse(f.cl_policy);
    cfg.virtual_channel = VirtualChannelPolicy::parse(f.virtual_channel);
    cfg.baseline = f.baseline;
    bool seeded = false;
    for (auto* sub : {simulate, fuzz}) {
      if (sub->parsed() && sub->count("--seed") + (std::getenv("WMAVMD_SEED") ? 1 : 0) > 0) {
        seeded = true;
      }
    }
    if (seeded) cfg.seed = f.seed;
    cfg.iterations = f.iterations;
    cfg.solver_iterations = f.solver_iterations;
    cfg.max_lag = f.max_lag;
    cfg.inject_solver_defect = f.inject_solver_defect;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
  return run(cfg, std::cout, std::cerr);
}
