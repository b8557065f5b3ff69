// pdefr command-line front end.
//
// Exit codes: 0 success, 1 runtime or I/O failure, 2 configuration error,
// 3 when more than half of a sweep's trials did not converge.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "pdefr/pdefr.hpp"

namespace fs = std::filesystem;
using namespace pdefr;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNotConverged = 3;

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> flags;

  std::string in;
  std::string out;
  std::string mask;
  double tau = 0.0;
  double r = 0.0;
  double D = 0.0;
  bool bound = false;
  std::string sweep_kind;
};

ExperimentConfig build_config(const Options& opt) {
  ExperimentConfig cfg = opt.config_path.empty() ? ExperimentConfig{} : load_config(opt.config_path);
  for (const auto& [key, flag] : opt.flags) {
    if (flag->count() == 0) continue;
    try {
      apply_config_value(cfg, key, opt.values.at(key));
    } catch (const Error& e) {
      fail(ErrorKind::Config, "--" + key + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

std::string out_path(const Options& opt, const std::string& name) {
  fs::create_directories(opt.out_dir);
  return (fs::path(opt.out_dir) / name).string();
}

TrigPolynomial input_polynomial(const Options& opt, const ExperimentConfig& cfg, int N) {
  if (!opt.in.empty()) return read_sptp(opt.in);
  return make_family_for_grid(cfg.family, N);
}

int cmd_family(const Options& opt) {
  const ExperimentConfig cfg = build_config(opt);
  const int N = cfg.grid_sizes().front();
  const TrigPolynomial f = make_family_for_grid(cfg.family, N);
  const std::string path = opt.out.empty() ? out_path(opt, "family.sptp") : opt.out;
  write_sptp(path, f);
  std::printf("terms=%zu\nL2=%.12g\nmean=%.12g\npath=%s\n", f.terms().size(), continuous_l2(f), mean(f), path.c_str());
  return 0;
}

int cmd_fr(const Options& opt) {
  if (!opt.in.empty() && opt.in.ends_with(".spfd")) {
    const GridData data = read_spfd(opt.in);
    const double fr = std::visit([](const auto& x) { return fourier_ratio(x); }, data);
    std::printf("FR=%.12g\n", fr);
    return 0;
  }
  const ExperimentConfig cfg = build_config(opt);
  for (int N : cfg.grid_sizes()) {
    const TrigPolynomial f = input_polynomial(opt, cfg, N);
    std::printf("N=%d FR_g=%.12g\n", N, fourier_ratio(discretize(f, N)));
    for (double t : cfg.times) {
      const PdeKind pde(cfg.pde, t);
      std::printf("N=%d t=%.12g FR_gt=%.12g\n", N, t,
                  fourier_ratio(snapshot_grid(f, pde, N, cfg.allow_any_dimension)));
      if (opt.bound) {
        const FrBoundReport rep = cfg.pde == Pde::Wave ? fr_bound_wave(f, t, N) : fr_bound_heat(f, t, N);
        std::printf("%s", rep.key_values().c_str());
      }
    }
    if (opt.bound) std::printf("%s", fr_bound_initial(f, N).key_values().c_str());
  }
  return 0;
}

int cmd_snapshot(const Options& opt) {
  const ExperimentConfig cfg = build_config(opt);
  const int N = cfg.grid_sizes().front();
  const double t = cfg.times.front();
  const TrigPolynomial f = input_polynomial(opt, cfg, N);
  const GridField g = snapshot_grid(f, PdeKind(cfg.pde, t), N, cfg.allow_any_dimension);
  const std::string path = opt.out.empty() ? out_path(opt, "snapshot.spfd") : opt.out;
  write_spfd(path, g);
  std::printf("pde=%s\nt=%.12g\nN=%d\nd=%d\nFR=%.12g\npath=%s\n", to_string(cfg.pde), t, N, g.shape().d,
              fourier_ratio(g), path.c_str());
  return 0;
}

int cmd_sample(const Options& opt) {
  require(!opt.in.empty(), ErrorKind::Config, "sample needs --in field.spfd");
  const ExperimentConfig cfg = build_config(opt);
  const GridField field = read_spfd_field(opt.in);
  require(cfg.Ms.size() == 1, ErrorKind::Config, "sample needs exactly one --M");
  CounterRng sampler(cfg.master_seed, stream_id(StreamPurpose::Sampling, 0));
  CounterRng noise(cfg.master_seed, stream_id(StreamPurpose::Noise, 0));
  std::vector<std::size_t> X;
  try {
    X = sample_uniform(field.shape(), cfg.Ms.front(), sampler);
  } catch (const Error& e) {
    fail(ErrorKind::Config, e.what());
  }
  const SampleSet s = observe(field, std::move(X), cfg.sigma, noise);
  const std::string path = opt.out.empty() ? out_path(opt, "samples.csv") : opt.out;
  write_text(path, encode_samples_csv(s));
  std::printf("M=%zu\ntau=%.17g\npath=%s\n", s.size(), s.tau(), path.c_str());
  return 0;
}

int cmd_recover(const Options& opt) {
  require(!opt.in.empty() && !opt.mask.empty(), ErrorKind::Config, "recover needs --in and --mask");
  require(std::isfinite(opt.tau) && opt.tau >= 0.0, ErrorKind::Config, "--tau must be >= 0");
  const ExperimentConfig cfg = build_config(opt);
  const GridField reference = read_spfd_field(opt.in);
  SampleTable table = read_samples_csv(opt.mask, reference.shape().N);
  require(table.shape == reference.shape(), ErrorKind::Config, "samples dimension differs from the field");
  const SampleSet samples = to_sample_set(std::move(table), opt.tau);
  const RecoveryResult res = recover_l1(samples, cfg.solver);
  const std::string path = opt.out.empty() ? out_path(opt, "estimate.spfd") : opt.out;
  write_spfd(path, res.estimate);
  std::printf("objective=%.12g\nlower_bound=%.12g\nfeasibility_residual=%.6g\niterations=%d\nconverged=%d\n",
              res.objective, res.lower_bound, res.feasibility_residual, res.iterations, res.converged ? 1 : 0);
  if (grid_l2_norm(reference) > 0.0) std::printf("rel_err=%.12g\n", rel_err(res.estimate, reference));
  std::printf("path=%s\n", path.c_str());
  return res.converged ? 0 : kExitNotConverged;
}

int cmd_sweep(const Options& opt) {
  const ExperimentConfig cfg = build_config(opt);
  ResultTable table;
  std::vector<ChartKind> charts;
  if (opt.sweep_kind == "fr") {
    table = run_fr_sweep(cfg);
    charts = {ChartKind::FrVsT, ChartKind::FrVsN};
  } else {
    table = run_recovery_sweep(cfg);
    charts = {ChartKind::SuccessVsM, ChartKind::ErrVsM};
  }
  const std::string stem = opt.sweep_kind == "fr" ? "fr_sweep" : "recovery_sweep";
  emit_csv(table, out_path(opt, stem + ".csv"));
  emit_timing_csv(table, out_path(opt, stem + "_timing.csv"));
  for (ChartKind k : charts) emit_svg(table, k, out_path(opt, stem + "_" + to_string(k) + ".svg"));
  std::printf("rows=%zu\ntrials=%d\nnot_converged=%d\nout=%s\n", table.rows.size(), table.total_trials(),
              table.total_not_converged(), out_path(opt, stem + ".csv").c_str());
  return table.not_converged_dominated() ? kExitNotConverged : 0;
}

int cmd_budget(const Options& opt, const CLI::App& sub) {
  const ExperimentConfig cfg = build_config(opt);
  if (sub.count("--r") > 0) {
    require(sub.count("--D") > 0, ErrorKind::Config, "budget --r needs --D");
    std::uint64_t M = 0;
    double raw = 0.0;
    try {
      raw = sample_budget_raw(opt.r, cfg.eps, opt.D, cfg.C);
      M = sample_budget(opt.r, cfg.eps, opt.D, cfg.C);
    } catch (const Error& e) {
      fail(ErrorKind::Config, e.what());
    }
    std::printf("r=%.12g\neps=%.12g\nD=%.12g\nC=%.12g\nM_raw=%.12g\nM=%llu\n", opt.r, cfg.eps, opt.D, cfg.C, raw,
                static_cast<unsigned long long>(M));
    if (cfg.m0) {
      const double t = cfg.times.front();
      const double avail = SensorModel{*cfg.m0, cfg.lambda}.available(t);
      std::printf("t=%.12g\nm_available=%.12g\nfeasible=%d\n", t, avail, avail >= static_cast<double>(M) ? 1 : 0);
    }
    return 0;
  }
  const std::vector<BudgetStudy> studies = run_budget_study(cfg);
  write_text(out_path(opt, "budget.csv"), format_budget_csv(studies));
  for (const auto& s : studies) {
    if (s.curve.window) {
      std::printf("N=%d window=[%.12g, %.12g]\n", s.N, s.curve.window->first, s.curve.window->second);
    } else {
      std::printf("N=%d window=empty\n", s.N);
    }
  }
  return 0;
}

int cmd_minimal_budget(const Options& opt) {
  const ExperimentConfig cfg = build_config(opt);
  const auto rows = minimal_budget(cfg);
  write_text(out_path(opt, "minimal_budget.csv"), format_minimal_budget_csv(rows));
  int trials = 0, nc = 0;
  for (const auto& r : rows) {
    if (r.M_star) {
      std::printf("N=%d t=%.12g M_star=%zu\n", r.N, r.t, *r.M_star);
    } else {
      std::printf("N=%d t=%.12g M_star=above_range\n", r.N, r.t);
    }
    for (const auto& p : r.probes) trials += p.trials, nc += p.not_converged;
  }
  return 2 * nc > trials ? kExitNotConverged : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier-ratio experiments for periodic wave and heat snapshots"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--config", opt.config_path, "key=value config file")->check(CLI::ExistingFile);
  app.add_option("--out-dir", opt.out_dir, "directory for output files");
  for (const std::string& key : config_keys()) {
    opt.values[key];
    opt.flags[key] = app.add_option("--" + key, opt.values[key], "overrides config key " + key);
  }

  auto* family = app.add_subcommand("family", "write a test family as SPTP text");
  family->add_option("--out", opt.out, "output .sptp path");

  auto* fr = app.add_subcommand("fr", "Fourier ratios of a field, or of a family and its snapshots");
  fr->add_option("--in", opt.in, "input .spfd field or .sptp polynomial");
  fr->add_flag("--bound", opt.bound, "also print the FR bound reports");

  auto* snapshot = app.add_subcommand("snapshot", "discretized snapshot of a polynomial");
  snapshot->add_option("--in", opt.in, "input .sptp polynomial (default: the configured family)");
  snapshot->add_option("--out", opt.out, "output .spfd path");

  auto* sample = app.add_subcommand("sample", "random samples of a field as CSV");
  sample->add_option("--in", opt.in, "input .spfd field")->required();
  sample->add_option("--out", opt.out, "output samples CSV");

  auto* recover = app.add_subcommand("recover", "l1 recovery from samples");
  recover->add_option("--in", opt.in, "reference .spfd field (grid shape; error report)")->required();
  recover->add_option("--mask", opt.mask, "samples CSV")->required();
  recover->add_option("--tau", opt.tau, "data tolerance");
  recover->add_option("--out", opt.out, "output .spfd estimate");

  auto* sweep = app.add_subcommand("sweep", "Fourier-ratio or recovery sweep");
  sweep->add_option("kind", opt.sweep_kind, "fr or recovery")->required()->check(CLI::IsMember({"fr", "recovery"}));

  auto* budget = app.add_subcommand("budget", "sampling budget, or the budget study over the configured times");
  budget->add_option("--r", opt.r, "Fourier-ratio bound");
  budget->add_option("--D", opt.D, "ambient dimension N^d");

  auto* minimal = app.add_subcommand("minimal-budget", "smallest M reaching the target success rate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*family) return cmd_family(opt);
    if (*fr) return cmd_fr(opt);
    if (*snapshot) return cmd_snapshot(opt);
    if (*sample) return cmd_sample(opt);
    if (*recover) return cmd_recover(opt);
    if (*sweep) return cmd_sweep(opt);
    if (*budget) return cmd_budget(opt, *budget);
    if (*minimal) return cmd_minimal_budget(opt);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::Config ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}
