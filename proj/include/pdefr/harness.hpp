#ifndef PDEFR_HARNESS_HPP
#define PDEFR_HARNESS_HPP

// Experiment drivers: Fourier-ratio sweeps, Monte Carlo recovery sweeps,
// minimal-budget search, the sensor budget study, and their CSV/SVG output.
//
// Trial j of every (N, t, M) cell draws its sample set from the stream
// (master_seed, Sampling/j) and its noise from (master_seed, Noise/j). The
// sampler is a partial shuffle, so trial j's sets are nested in M.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "pdefr/bounds.hpp"
#include "pdefr/fields.hpp"
#include "pdefr/fourier.hpp"
#include "pdefr/io.hpp"
#include "pdefr/propagators.hpp"
#include "pdefr/recovery.hpp"

namespace pdefr {

inline constexpr int kResultSchemaVersion = 1;

struct ExperimentConfig {
  FamilySpec family;
  std::vector<int> Ns;  // empty: {64, 128, 256}, or {16, 32, 64} in d = 3
  std::vector<double> times{0.0, 0.01, 0.05, 0.1};
  Pde pde = Pde::Heat;
  bool allow_any_dimension = false;
  std::vector<std::size_t> Ms;  // empty: fixed fractions of N^d
  int trials = 50;
  double sigma = 0.0;
  double threshold = kDefaultSuccessThreshold;
  double target_prob = 0.9;
  std::uint64_t master_seed = 1;
  double eps = 0.1;
  double C = 1.0;
  std::optional<double> m0;
  double lambda = 0.0;
  int workers = 1;
  SolverConfig solver;

  std::vector<int> grid_sizes() const {
    if (!Ns.empty()) return Ns;
    return family.d == 3 ? std::vector<int>{16, 32, 64} : std::vector<int>{64, 128, 256};
  }

  std::vector<std::size_t> sample_sizes(int N) const {
    if (!Ms.empty()) return Ms;
    const double D = static_cast<double>(GridShape(N, family.d).size());
    std::vector<std::size_t> out;
    for (double frac : {1.0 / 32, 1.0 / 16, 1.0 / 8, 3.0 / 16, 1.0 / 4, 3.0 / 8, 1.0 / 2, 3.0 / 4, 1.0}) {
      const auto M = static_cast<std::size_t>(std::max(1.0, std::round(frac * D)));
      if (out.empty() || out.back() != M) out.push_back(M);
    }
    return out;
  }

  void validate() const {
    family.validate();
    require(trials >= 1, ErrorKind::Config, "trials must be >= 1");
    require(workers >= 1, ErrorKind::Config, "workers must be >= 1");
    require(!times.empty(), ErrorKind::Config, "at least one time is needed");
    for (double t : times) require(std::isfinite(t) && t >= 0.0, ErrorKind::Config, "times must be finite and >= 0");
    for (int N : grid_sizes()) {
      require(N >= 2 && N <= 4096, ErrorKind::Config, "grid size N must lie in [2, 4096]");
      const std::size_t D = GridShape(N, family.d).size();
      for (std::size_t M : sample_sizes(N)) {
        require(M >= 1 && M <= D, ErrorKind::Config,
                "sample size " + std::to_string(M) + " outside [1, " + std::to_string(D) + "] for N=" + std::to_string(N));
      }
    }
    require(std::isfinite(sigma) && sigma >= 0.0, ErrorKind::Config, "sigma must be >= 0");
    require(threshold > 0.0, ErrorKind::Config, "threshold must be positive");
    require(target_prob > 0.0 && target_prob <= 1.0, ErrorKind::Config, "target_prob must lie in (0, 1]");
    if (pde == Pde::Wave && family.d != 3 && !allow_any_dimension) {
      fail(ErrorKind::Config, "wave runs need d = 3 unless allow_any_dimension is set");
    }
    try {
      solver.validate();
    } catch (const Error& e) {
      fail(ErrorKind::Config, e.what());
    }
  }
};

// ---------------------------------------------------------------------------
// key=value configuration.

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size()) return x;
  } catch (const std::logic_error&) {
  }
  fail(ErrorKind::Config, "key '" + key + "': not a number: '" + v + "'");
}

inline std::int64_t parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used == v.size()) return x;
  } catch (const std::logic_error&) {
  }
  fail(ErrorKind::Config, "key '" + key + "': not an integer: '" + v + "'");
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    if (!v.empty() && v[0] != '-') {
      const unsigned long long x = std::stoull(v, &used, 0);
      if (used == v.size()) return x;
    }
  } catch (const std::logic_error&) {
  }
  fail(ErrorKind::Config, "key '" + key + "': not an unsigned integer: '" + v + "'");
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  fail(ErrorKind::Config, "key '" + key + "': not a boolean: '" + v + "'");
}

}  // namespace detail

/// Keys accepted in config files and mirrored as CLI flags.
inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "family", "d", "K", "alpha", "family_seed", "width", "bumps", "envelope_K", "carrier",
      "N", "t", "pde", "allow_any_dimension", "M", "trials", "sigma", "threshold", "target_prob",
      "seed", "eps", "C", "m0", "lambda", "workers", "max_iters", "step", "relaxation", "tol_feas",
      "tol_obj", "check_every"};
  return keys;
}

inline void apply_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& raw) {
  using namespace detail;
  const std::string v = trim(raw);
  auto as_int = [&] {
    const auto x = parse_int(key, v);
    require(x >= -(1LL << 31) && x < (1LL << 31), ErrorKind::Config, "key '" + key + "': value out of range");
    return static_cast<int>(x);
  };
  if (key == "family") {
    cfg.family.family = parse_family(v);
  } else if (key == "d") {
    cfg.family.d = as_int();
  } else if (key == "K") {
    cfg.family.K = as_int();
  } else if (key == "alpha") {
    cfg.family.alpha = parse_double(key, v);
  } else if (key == "family_seed") {
    cfg.family.seed = parse_u64(key, v);
  } else if (key == "width") {
    cfg.family.width = parse_double(key, v);
  } else if (key == "bumps") {
    cfg.family.bumps = as_int();
  } else if (key == "envelope_K") {
    cfg.family.envelope_K = as_int();
  } else if (key == "carrier") {
    const auto items = split_list(v);
    require(!items.empty() && items.size() <= 3, ErrorKind::Config, "carrier takes 1 to 3 integers");
    IntVec k{0, 0, 0};
    for (std::size_t j = 0; j < items.size(); ++j) k[j] = parse_int(key, items[j]);
    cfg.family.carrier = k;
  } else if (key == "N") {
    cfg.Ns.clear();
    for (const auto& s : split_list(v)) {
      const auto n = parse_int(key, s);
      require(n >= 2 && n <= 4096, ErrorKind::Config, "grid size N must lie in [2, 4096]");
      cfg.Ns.push_back(static_cast<int>(n));
    }
  } else if (key == "t") {
    cfg.times.clear();
    for (const auto& s : split_list(v)) cfg.times.push_back(parse_double(key, s));
  } else if (key == "pde") {
    cfg.pde = parse_pde(v);
  } else if (key == "allow_any_dimension") {
    cfg.allow_any_dimension = parse_bool(key, v);
  } else if (key == "M") {
    cfg.Ms.clear();
    for (const auto& s : split_list(v)) {
      const auto m = parse_int(key, s);
      require(m >= 1, ErrorKind::Config, "sample sizes must be >= 1");
      cfg.Ms.push_back(static_cast<std::size_t>(m));
    }
    std::sort(cfg.Ms.begin(), cfg.Ms.end());
    cfg.Ms.erase(std::unique(cfg.Ms.begin(), cfg.Ms.end()), cfg.Ms.end());
  } else if (key == "trials") {
    cfg.trials = as_int();
  } else if (key == "sigma") {
    cfg.sigma = parse_double(key, v);
  } else if (key == "threshold") {
    cfg.threshold = parse_double(key, v);
  } else if (key == "target_prob") {
    cfg.target_prob = parse_double(key, v);
  } else if (key == "seed") {
    cfg.master_seed = parse_u64(key, v);
  } else if (key == "eps") {
    cfg.eps = parse_double(key, v);
  } else if (key == "C") {
    cfg.C = parse_double(key, v);
  } else if (key == "m0") {
    cfg.m0 = parse_double(key, v);
  } else if (key == "lambda") {
    cfg.lambda = parse_double(key, v);
  } else if (key == "workers") {
    cfg.workers = as_int();
  } else if (key == "max_iters") {
    cfg.solver.max_iters = as_int();
  } else if (key == "step") {
    cfg.solver.step = parse_double(key, v);
  } else if (key == "relaxation") {
    cfg.solver.relaxation = parse_double(key, v);
  } else if (key == "tol_feas") {
    cfg.solver.tol_feas = parse_double(key, v);
  } else if (key == "tol_obj") {
    cfg.solver.tol_obj = parse_double(key, v);
  } else if (key == "check_every") {
    cfg.solver.check_every = as_int();
  } else {
    fail(ErrorKind::Config, "unknown config key '" + key + "'");
  }
}

/// Parses "key = value" lines; '#' starts a comment. Later lines win.
inline void apply_config_text(ExperimentConfig& cfg, const std::string& text, const std::string& path = "<config>") {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorKind::Config, path + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = detail::trim(line.substr(0, eq));
    try {
      apply_config_value(cfg, key, line.substr(eq + 1));
    } catch (const Error& e) {
      fail(ErrorKind::Config, path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Config, path + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  ExperimentConfig cfg;
  apply_config_text(cfg, ss.str(), path);
  return cfg;
}

// ---------------------------------------------------------------------------
// Results.

struct ResultRow {
  int d = 0;
  int N = 0;
  double t = 0.0;
  std::size_t M = 0;  // 0 on Fourier-ratio rows
  int trials = 0;
  int successes = 0;
  int not_converged = 0;
  double success_rate = std::nan("");
  double wilson_lo = std::nan("");
  double wilson_hi = std::nan("");
  double mean_rel_err = std::nan("");
  double FR_g = 0.0;
  double FR_gt = 0.0;
  std::string flags;
  double wall_time = 0.0;  // seconds; kept out of the results CSV
};

struct ResultTable {
  int schema_version = kResultSchemaVersion;
  std::vector<ResultRow> rows;

  int total_trials() const {
    int n = 0;
    for (const auto& r : rows) n += r.trials;
    return n;
  }
  int total_not_converged() const {
    int n = 0;
    for (const auto& r : rows) n += r.not_converged;
    return n;
  }
  /// More than half of all trials ended without a converged solve.
  bool not_converged_dominated() const { return 2 * total_not_converged() > total_trials(); }
};

/// Wilson score interval for k successes out of n at z = 1.96.
inline std::pair<double, double> wilson_interval(int k, int n, double z = 1.96) {
  require(n >= 1 && k >= 0 && k <= n, ErrorKind::InvalidArgument, "wilson interval needs 0 <= k <= n, n >= 1");
  const double nn = n;
  const double p = k / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  // The endpoints at k = 0 and k = n are exact; the formula only reaches them up to rounding.
  return {k == 0 ? 0.0 : std::max(0.0, centre - half), k == n ? 1.0 : std::min(1.0, centre + half)};
}

/// Runs fn(i) for i in [0, n) on up to `workers` threads.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  const std::size_t w = std::min<std::size_t>(std::max(1, workers), n);
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < w; ++k) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Cell {
  TrigPolynomial f;
  GridField g;
  GridField gt;
  double FR_g;
  double FR_gt;
  std::string flags;
};

/// The wave snapshot at t = 0 vanishes identically; such cells use the
/// initial data instead and carry the flag "wave_t0_initial_data".
inline Cell make_cell(const ExperimentConfig& cfg, int N, double t) {
  TrigPolynomial f = make_family_for_grid(cfg.family, N);
  GridField g = discretize(f, N);
  const bool wave_t0 = cfg.pde == Pde::Wave && t == 0.0;
  GridField gt = wave_t0 ? g : snapshot_grid(f, PdeKind(cfg.pde, t), N, cfg.allow_any_dimension);
  const double fg = fourier_ratio(g);
  const double fgt = wave_t0 ? fg : fourier_ratio(gt);
  std::string flags = wave_t0 ? "wave_t0_initial_data" : fgt == 0.0 ? "zero_snapshot" : "";
  return {std::move(f), std::move(g), std::move(gt), fg, fgt, std::move(flags)};
}

}  // namespace detail

/// One row per (N, t): Fourier ratios of the discretized data and snapshot.
inline ResultTable run_fr_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  ResultTable table;
  for (int N : cfg.grid_sizes()) {
    for (double t : cfg.times) {
      const auto t0 = std::chrono::steady_clock::now();
      const detail::Cell cell = detail::make_cell(cfg, N, t);
      ResultRow row;
      row.d = cfg.family.d;
      row.N = N;
      row.t = t;
      row.FR_g = cell.FR_g;
      row.FR_gt = cell.FR_gt;
      row.flags = cell.flags;
      row.wall_time = detail::seconds_since(t0);
      table.rows.push_back(row);
    }
  }
  return table;
}

struct TrialOutcome {
  double rel_err = 0.0;
  bool converged = false;
  bool success = false;
};

/// `trials` recoveries of the snapshot `truth` from M samples each.
inline std::vector<TrialOutcome> run_trials(const ExperimentConfig& cfg, const GridField& truth, std::size_t M) {
  std::vector<TrialOutcome> out(static_cast<std::size_t>(cfg.trials));
  parallel_for(out.size(), cfg.workers, [&](std::size_t j) {
    CounterRng sampler(cfg.master_seed, stream_id(StreamPurpose::Sampling, j));
    CounterRng noise(cfg.master_seed, stream_id(StreamPurpose::Noise, j));
    const SampleSet samples = observe(truth, sample_uniform(truth.shape(), M, sampler), cfg.sigma, noise);
    const RecoveryResult res = recover_l1(samples, cfg.solver);
    TrialOutcome& o = out[j];
    o.rel_err = rel_err(res.estimate, truth);
    o.converged = res.converged;
    o.success = res.converged && o.rel_err <= cfg.threshold;
  });
  return out;
}

inline ResultRow summarize_trials(const ExperimentConfig& cfg, int N, double t, std::size_t M,
                                  const detail::Cell& cell, const std::vector<TrialOutcome>& outcomes) {
  ResultRow row;
  row.d = cfg.family.d;
  row.N = N;
  row.t = t;
  row.M = M;
  row.trials = static_cast<int>(outcomes.size());
  double err = 0.0;
  for (const auto& o : outcomes) {
    row.successes += o.success ? 1 : 0;
    row.not_converged += o.converged ? 0 : 1;
    err += o.rel_err;
  }
  row.success_rate = static_cast<double>(row.successes) / row.trials;
  std::tie(row.wilson_lo, row.wilson_hi) = wilson_interval(row.successes, row.trials);
  row.mean_rel_err = err / row.trials;
  row.FR_g = cell.FR_g;
  row.FR_gt = cell.FR_gt;
  row.flags = cell.flags;
  if (row.not_converged > 0) row.flags += row.flags.empty() ? "not_converged" : ";not_converged";
  return row;
}

namespace detail {

inline Cell make_recovery_cell(const ExperimentConfig& cfg, int N, double t) {
  Cell cell = make_cell(cfg, N, t);
  require(grid_l2_norm(cell.gt) > 0.0, ErrorKind::Config,
          "snapshot at t=" + format_double(t) + " is identically zero; nothing to recover");
  return cell;
}

}  // namespace detail

/// One row per (N, t, M) with Monte Carlo success statistics.
inline ResultTable run_recovery_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  ResultTable table;
  for (int N : cfg.grid_sizes()) {
    for (double t : cfg.times) {
      const detail::Cell cell = detail::make_recovery_cell(cfg, N, t);
      for (std::size_t M : cfg.sample_sizes(N)) {
        const auto t0 = std::chrono::steady_clock::now();
        ResultRow row = summarize_trials(cfg, N, t, M, cell, run_trials(cfg, cell.gt, M));
        row.wall_time = detail::seconds_since(t0);
        table.rows.push_back(row);
      }
    }
  }
  return table;
}

struct MinimalBudgetRow {
  int d = 0;
  int N = 0;
  double t = 0.0;
  double target = 0.0;
  std::optional<std::size_t> M_star;  // nullopt: above the tested range
  std::vector<ResultRow> probes;      // in probe order
};

/// Smallest M in the grid with success rate >= target, by bisection over the
/// sorted grid (success is assumed monotone in M). Every probe runs the full
/// trial count.
inline std::vector<MinimalBudgetRow> minimal_budget(const ExperimentConfig& cfg, std::optional<double> target_prob = {}) {
  cfg.validate();
  const double target = target_prob.value_or(cfg.target_prob);
  require(target > 0.0 && target <= 1.0, ErrorKind::Config, "target_prob must lie in (0, 1]");
  std::vector<MinimalBudgetRow> out;
  for (int N : cfg.grid_sizes()) {
    std::vector<std::size_t> Ms = cfg.sample_sizes(N);
    std::sort(Ms.begin(), Ms.end());
    for (double t : cfg.times) {
      const detail::Cell cell = detail::make_recovery_cell(cfg, N, t);
      MinimalBudgetRow res{cfg.family.d, N, t, target, std::nullopt, {}};
      std::map<std::size_t, bool> reached;
      auto probe = [&](std::size_t i) {
        if (auto it = reached.find(i); it != reached.end()) return it->second;
        const auto t0 = std::chrono::steady_clock::now();
        ResultRow row = summarize_trials(cfg, N, t, Ms[i], cell, run_trials(cfg, cell.gt, Ms[i]));
        row.wall_time = detail::seconds_since(t0);
        res.probes.push_back(row);
        return reached[i] = row.success_rate >= target;
      };
      if (probe(Ms.size() - 1)) {
        std::size_t lo = 0, hi = Ms.size() - 1;  // answer in [lo, hi], hi known to reach the target
        while (lo < hi) {
          const std::size_t mid = lo + (hi - lo) / 2;
          if (probe(mid)) {
            hi = mid;
          } else {
            lo = mid + 1;
          }
        }
        res.M_star = Ms[hi];
      }
      out.push_back(std::move(res));
    }
  }
  return out;
}

struct BudgetStudy {
  int d = 0;
  int N = 0;
  double eps = 0.0;
  double C = 0.0;
  BudgetCurve curve;
};

/// r(t) = FR(g_t) measured by the sweep; M(t) and the sensor window from it.
inline std::vector<BudgetStudy> run_budget_study(const ExperimentConfig& cfg) {
  const ResultTable fr = run_fr_sweep(cfg);
  std::optional<SensorModel> sensor;
  if (cfg.m0) sensor = SensorModel{*cfg.m0, cfg.lambda};
  std::vector<BudgetStudy> out;
  for (int N : cfg.grid_sizes()) {
    std::vector<double> times, r;
    for (const auto& row : fr.rows) {
      if (row.N != N) continue;
      times.push_back(row.t);
      r.push_back(row.FR_gt);
    }
    const double D = static_cast<double>(GridShape(N, cfg.family.d).size());
    try {
      out.push_back({cfg.family.d, N, cfg.eps, cfg.C, budget_over_time(times, r, cfg.eps, D, cfg.C, sensor)});
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::BadParams) fail(ErrorKind::Config, e.what());
      throw;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV.

namespace detail {

inline std::string fmt12(double x) {
  if (std::isnan(x)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline void require_writable(std::ofstream& out, const std::string& path) {
  if (!out) fail(ErrorKind::Io, path + ": cannot open for writing");
}

}  // namespace detail

inline constexpr const char* kResultCsvHeader =
    "schema_version,d,N,t,M,trials,successes,not_converged,success_rate,wilson_lo,wilson_hi,mean_rel_err,FR_g,FR_gt,"
    "flags";

inline std::string format_csv(const ResultTable& table) {
  require(!table.rows.empty(), ErrorKind::InvalidArgument, "result table is empty");
  using detail::fmt12;
  std::string out = std::string(kResultCsvHeader) + "\n";
  for (const auto& r : table.rows) {
    const bool mc = r.trials > 0;
    out += std::to_string(table.schema_version) + "," + std::to_string(r.d) + "," + std::to_string(r.N) + "," +
           fmt12(r.t) + "," + (mc ? std::to_string(r.M) : "") + "," + (mc ? std::to_string(r.trials) : "") + "," +
           (mc ? std::to_string(r.successes) : "") + "," + (mc ? std::to_string(r.not_converged) : "") + "," +
           fmt12(r.success_rate) + "," + fmt12(r.wilson_lo) + "," + fmt12(r.wilson_hi) + "," +
           fmt12(r.mean_rel_err) + "," + fmt12(r.FR_g) + "," + fmt12(r.FR_gt) + "," + r.flags + "\n";
  }
  return out;
}

inline void emit_csv(const ResultTable& table, const std::string& path) {
  const std::string text = format_csv(table);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  detail::require_writable(out, path);
  out << text;
  if (!out) fail(ErrorKind::Io, path + ": write failed");
}

/// Wall-clock seconds per row, separate from the deterministic results.
inline void emit_timing_csv(const ResultTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  detail::require_writable(out, path);
  out << "N,t,M,wall_time\n";
  for (const auto& r : table.rows) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6f", r.wall_time);
    out << r.N << "," << detail::fmt12(r.t) << "," << r.M << "," << buf << "\n";
  }
  if (!out) fail(ErrorKind::Io, path + ": write failed");
}

inline std::string format_minimal_budget_csv(const std::vector<MinimalBudgetRow>& rows) {
  require(!rows.empty(), ErrorKind::InvalidArgument, "minimal budget table is empty");
  std::string out = "schema_version,d,N,t,target,M_star,probes\n";
  for (const auto& r : rows) {
    std::string probes;
    for (const auto& p : r.probes) probes += (probes.empty() ? "" : " ") + std::to_string(p.M) + ":" + std::to_string(p.successes);
    out += std::to_string(kResultSchemaVersion) + "," + std::to_string(r.d) + "," + std::to_string(r.N) + "," +
           detail::fmt12(r.t) + "," + detail::fmt12(r.target) + "," +
           (r.M_star ? std::to_string(*r.M_star) : std::string("above_range")) + "," + probes + "\n";
  }
  return out;
}

inline std::string format_budget_csv(const std::vector<BudgetStudy>& studies) {
  require(!studies.empty(), ErrorKind::InvalidArgument, "budget study is empty");
  std::string out = "schema_version,d,N,t,r,M_budget,m_available,in_window\n";
  for (const auto& s : studies) {
    const auto& c = s.curve;
    for (std::size_t i = 0; i < c.times.size(); ++i) {
      const bool in = c.window && c.times[i] >= c.window->first && c.times[i] <= c.window->second;
      out += std::to_string(kResultSchemaVersion) + "," + std::to_string(s.d) + "," + std::to_string(s.N) + "," +
             detail::fmt12(c.times[i]) + "," + detail::fmt12(c.r_of_t[i]) + "," + std::to_string(c.M_of_t[i]) + "," +
             (c.m_of_t ? detail::fmt12((*c.m_of_t)[i]) : std::string()) + "," + (in ? "1" : "0") + "\n";
    }
  }
  return out;
}

inline void write_text(const std::string& path, const std::string& text) { detail::write_file(path, text, true); }

// ---------------------------------------------------------------------------
// SVG line charts.

enum class ChartKind { FrVsT, SuccessVsM, ErrVsM, FrVsN };

inline const char* to_string(ChartKind k) {
  switch (k) {
    case ChartKind::FrVsT: return "fr_vs_t";
    case ChartKind::SuccessVsM: return "success_vs_M";
    case ChartKind::ErrVsM: return "err_vs_M";
    case ChartKind::FrVsN: return "fr_vs_N";
  }
  return "?";
}

inline ChartKind parse_chart_kind(const std::string& s) {
  for (ChartKind k : {ChartKind::FrVsT, ChartKind::SuccessVsM, ChartKind::ErrVsM, ChartKind::FrVsN})
    if (s == to_string(k)) return k;
  fail(ErrorKind::Config, "unknown chart kind '" + s + "'");
}

struct ChartSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

inline std::string render_line_chart(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                                     const std::vector<ChartSeries>& series) {
  using detail::svg_num;
  require(!series.empty(), ErrorKind::InvalidArgument, "chart has no series");
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    for (double v : s.x) x0 = std::min(x0, v), x1 = std::max(x1, v);
    for (double v : s.y) y0 = std::min(y0, v), y1 = std::max(y1, v);
  }
  require(std::isfinite(x0) && std::isfinite(y0), ErrorKind::InvalidArgument, "chart has no points");
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  y0 = std::min(y0, 0.0);

  const double W = 640, H = 420, L = 70, R = 170, T = 40, B = 60;
  const double pw = W - L - R, ph = H - T - B;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return T + ph - (y - y0) / (y1 - y0) * ph; };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" viewBox=\"0 0 640 420\">\n";
  s += "<rect width=\"640\" height=\"420\" fill=\"white\"/>\n";
  s += "<text x=\"" + svg_num(L + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
       detail::xml_escape(title) + "</text>\n";
  s += "<g class=\"axes\" stroke=\"black\">\n";
  s += "<line x1=\"" + svg_num(L) + "\" y1=\"" + svg_num(T + ph) + "\" x2=\"" + svg_num(L + pw) + "\" y2=\"" +
       svg_num(T + ph) + "\"/>\n";
  s += "<line x1=\"" + svg_num(L) + "\" y1=\"" + svg_num(T) + "\" x2=\"" + svg_num(L) + "\" y2=\"" + svg_num(T + ph) +
       "\"/>\n";
  s += "</g>\n<g class=\"ticks\" font-size=\"11\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0;
    const double yv = y0 + (y1 - y0) * i / 4.0;
    s += "<line x1=\"" + svg_num(px(xv)) + "\" y1=\"" + svg_num(T + ph) + "\" x2=\"" + svg_num(px(xv)) + "\" y2=\"" +
         svg_num(T + ph + 5) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + svg_num(px(xv)) + "\" y=\"" + svg_num(T + ph + 18) + "\" text-anchor=\"middle\">" +
         detail::tick_label(xv) + "</text>\n";
    s += "<line x1=\"" + svg_num(L - 5) + "\" y1=\"" + svg_num(py(yv)) + "\" x2=\"" + svg_num(L) + "\" y2=\"" +
         svg_num(py(yv)) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + svg_num(L - 8) + "\" y=\"" + svg_num(py(yv) + 4) + "\" text-anchor=\"end\">" +
         detail::tick_label(yv) + "</text>\n";
  }
  s += "</g>\n";
  s += "<text x=\"" + svg_num(L + pw / 2) + "\" y=\"" + svg_num(H - 18) + "\" text-anchor=\"middle\" font-size=\"13\">" +
       detail::xml_escape(xlabel) + "</text>\n";
  s += "<text x=\"18\" y=\"" + svg_num(T + ph / 2) + "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 " +
       svg_num(T + ph / 2) + ")\">" + detail::xml_escape(ylabel) + "</text>\n";

  s += "<g class=\"series\" fill=\"none\" stroke-width=\"2\">\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    std::string pts;
    for (std::size_t j = 0; j < series[i].x.size() && j < series[i].y.size(); ++j)
      pts += (j ? " " : "") + svg_num(px(series[i].x[j])) + "," + svg_num(py(series[i].y[j]));
    s += "<polyline stroke=\"" + std::string(palette[i % 8]) + "\" points=\"" + pts + "\"/>\n";
  }
  s += "</g>\n<g class=\"legend\" font-size=\"12\">\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double ly = T + 10 + 20.0 * i;
    s += "<rect x=\"" + svg_num(L + pw + 15) + "\" y=\"" + svg_num(ly - 9) + "\" width=\"14\" height=\"10\" fill=\"" +
         palette[i % 8] + "\"/>\n";
    s += "<text x=\"" + svg_num(L + pw + 35) + "\" y=\"" + svg_num(ly) + "\">" + detail::xml_escape(series[i].label) +
         "</text>\n";
  }
  s += "</g>\n</svg>\n";
  return s;
}

/// Groups table rows into one series per N (fr_vs_t), per (N, t) (success
/// and error against M) or per t (fr_vs_N).
inline std::vector<ChartSeries> chart_series(const ResultTable& table, ChartKind kind) {
  std::map<std::pair<int, double>, ChartSeries> groups;
  for (const auto& r : table.rows) {
    std::pair<int, double> key;
    double x = 0.0, y = 0.0;
    switch (kind) {
      case ChartKind::FrVsT:
        key = {r.N, 0.0}, x = r.t, y = r.FR_gt;
        break;
      case ChartKind::FrVsN:
        key = {0, r.t}, x = r.N, y = r.FR_gt;
        break;
      case ChartKind::SuccessVsM:
      case ChartKind::ErrVsM:
        if (r.trials == 0) continue;
        key = {r.N, r.t}, x = static_cast<double>(r.M), y = kind == ChartKind::SuccessVsM ? r.success_rate : r.mean_rel_err;
        break;
    }
    auto& s = groups[key];
    if (s.label.empty()) {
      s.label = kind == ChartKind::FrVsT ? "N=" + std::to_string(r.N)
              : kind == ChartKind::FrVsN ? "t=" + detail::tick_label(r.t)
                                         : "N=" + std::to_string(r.N) + " t=" + detail::tick_label(r.t);
    }
    s.x.push_back(x);
    s.y.push_back(y);
  }
  std::vector<ChartSeries> out;
  for (auto& [key, s] : groups) {
    std::vector<std::size_t> order(s.x.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s.x[a] < s.x[b]; });
    ChartSeries sorted{s.label, {}, {}};
    for (std::size_t i : order) sorted.x.push_back(s.x[i]), sorted.y.push_back(s.y[i]);
    out.push_back(std::move(sorted));
  }
  return out;
}

inline std::string format_svg(const ResultTable& table, ChartKind kind) {
  require(!table.rows.empty(), ErrorKind::InvalidArgument, "result table is empty");
  switch (kind) {
    case ChartKind::FrVsT: return render_line_chart("Fourier ratio of snapshots", "t", "FR(g_t)", chart_series(table, kind));
    case ChartKind::FrVsN: return render_line_chart("Fourier ratio against grid size", "N", "FR(g_t)", chart_series(table, kind));
    case ChartKind::SuccessVsM: return render_line_chart("Recovery success", "M", "success rate", chart_series(table, kind));
    case ChartKind::ErrVsM: return render_line_chart("Reconstruction error", "M", "mean RelErr", chart_series(table, kind));
  }
  return {};
}

inline void emit_svg(const ResultTable& table, ChartKind kind, const std::string& path) {
  write_text(path, format_svg(table, kind));
}

}  // namespace pdefr

#endif  // PDEFR_HARNESS_HPP
