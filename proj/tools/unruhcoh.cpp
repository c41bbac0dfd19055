// SPDX-License-Identifier: Apache-2.0
// unruhcoh: l1 coherence of multipartite states with accelerated parties.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "unruh/errors.hpp"
#include "unruh/sweep.hpp"

namespace {

using namespace unruh;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string family = "ghz";
  double theta = std::numbers::pi / 4;
  double phi = std::numbers::pi / 4;
  std::size_t n_qubits = 3;
  std::string accel = "none";
  double tail_tol = 1e-10;
  std::optional<std::size_t> n_max;
  std::size_t n_max_cap = kDefaultNMaxCap;
  std::string grid = "0:0:1";
  std::optional<std::string> grid2;
  std::optional<std::string> theta_grid;
  std::optional<std::string> phi_grid;
  std::optional<std::string> n_accel;
  bool normalized = false;
  std::string mode = "both";
  std::optional<std::string> out;
  std::string preset;
  double tol = 1e-6;
  std::size_t threads = std::max(1U, std::thread::hardware_concurrency());
};

void add_state_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--family", o.family, "ghz, w, w-sym, plus, wwbar, star, ghz-n or w-n")
      ->check(CLI::IsMember({"ghz", "w", "w-sym", "plus", "wwbar", "star", "ghz-n", "w-n"}));
  cmd->add_option("--theta", o.theta, "theta in radians");
  cmd->add_option("--phi", o.phi, "phi in radians");
  cmd->add_option("--N", o.n_qubits, "qubit count for plus, ghz-n and w-n");
  cmd->add_option("--accel", o.accel, "party:r list, central:r / peripheral:r for star, or none");
}

void add_numeric_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--tail-tol", o.tail_tol, "omitted probability per party");
  cmd->add_option("--n-max", o.n_max, "fixed Fock cutoff instead of a tail tolerance");
  cmd->add_option("--n-max-cap", o.n_max_cap, "largest cutoff a tolerance may select");
  cmd->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
}

void add_grid_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--grid", o.grid, "r grid start:stop:count, referenced as r in --accel");
  cmd->add_option("--grid2", o.grid2, "second r grid, referenced as r2 in --accel");
  cmd->add_option("--theta-grid", o.theta_grid, "theta grid start:stop:count");
  cmd->add_option("--phi-grid", o.phi_grid, "phi grid start:stop:count");
  cmd->add_option("--n-accel", o.n_accel, "ghz-n / w-n: accelerated count k or range a:b (highest ids)");
  cmd->add_flag("--normalized", o.normalized, "divide by the inertial coherence");
}

[[nodiscard]] TruncationPolicy policy_of(const Options& o) {
  if (o.n_max) return TruncationPolicy::fixed(*o.n_max, o.n_max_cap);
  return TruncationPolicy::tolerance(o.tail_tol, o.n_max_cap);
}

[[nodiscard]] std::vector<std::size_t> parse_n_accel(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return {detail::parse_count(text)};
  const std::size_t a = detail::parse_count(std::string_view(text).substr(0, colon));
  const std::size_t b = detail::parse_count(std::string_view(text).substr(colon + 1));
  if (a > b) throw std::invalid_argument("n-accel range must be ascending");
  std::vector<std::size_t> out;
  for (std::size_t k = a; k <= b; ++k) out.push_back(k);
  return out;
}

[[nodiscard]] SweepConfig sweep_config(const Options& o) {
  SweepConfig c;
  c.family = parse_family(o.family);
  c.thetas = o.theta_grid ? parse_grid(*o.theta_grid).values() : std::vector<double>{o.theta};
  c.phis = o.phi_grid ? parse_grid(*o.phi_grid).values() : std::vector<double>{o.phi};
  c.n_qubits = o.n_qubits;
  c.accel = parse_accel(o.accel);
  if (o.n_accel) c.n_accel = parse_n_accel(*o.n_accel);
  c.grid = parse_grid(o.grid);
  if (o.grid2) c.grid2 = parse_grid(*o.grid2);
  c.normalized = o.normalized;
  return c;
}

void emit(const Options& o, const std::string& text) {
  if (!o.out) {
    std::cout << text;
    return;
  }
  std::ofstream file(*o.out, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open '" + *o.out + "' for writing");
  file << text;
  file.close();
  if (!file) throw std::runtime_error("failed writing '" + *o.out + "'");
}

int run_rows(const Options& o, const std::vector<PointSpec>& points, EvalMode mode,
             std::optional<std::string_view> preset) {
  const auto rows = evaluate_all(points, mode, policy_of(o), o.threads);
  std::ostringstream os;
  write_csv(os, rows, preset);
  emit(o, os.str());
  return kExitOk;
}

int run_compare(const Options& o) {
  const auto points = expand(sweep_config(o));
  const auto rows = evaluate_all(points, EvalMode::Both, policy_of(o), o.threads);
  const Deviation d = max_deviation(rows);
  std::ostringstream os;
  os << "points=" << rows.size() << '\n'
     << "max_abs_deviation=" << format_number(d.max_abs) << '\n'
     << "propagated_tail_bound=" << format_number(10.0 * d.max_tail) << '\n'
     << "tolerance=" << format_number(o.tol) << '\n';
  if (!rows.empty()) os << "worst_row=" << format_row(rows[d.worst_row]) << '\n';
  const bool ok = d.max_abs <= o.tol;
  os << (ok ? "PASS" : "FAIL") << '\n';
  emit(o, os.str());
  return ok ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"l1 coherence of multipartite states with uniformly accelerated parties"};
  app.require_subcommand(1);

  auto* coherence = app.add_subcommand("coherence", "evaluate one state, print one CSV row");
  add_state_options(coherence, o);
  add_numeric_options(coherence, o);
  coherence->add_option("--mode", o.mode, "numeric, analytic or both")
      ->check(CLI::IsMember({"numeric", "analytic", "both"}));
  coherence->add_option("--out", o.out, "output path (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "evaluate a parameter grid, write CSV");
  add_state_options(sweep, o);
  add_numeric_options(sweep, o);
  add_grid_options(sweep, o);
  sweep->add_option("--mode", o.mode, "numeric, analytic or both")
      ->check(CLI::IsMember({"numeric", "analytic", "both"}));
  sweep->add_option("--out", o.out, "output path (default stdout)");

  auto* compare = app.add_subcommand("compare", "max |numeric - analytic| over a grid");
  add_state_options(compare, o);
  add_numeric_options(compare, o);
  add_grid_options(compare, o);
  compare->add_option("--tol", o.tol, "largest accepted absolute deviation");
  compare->add_option("--out", o.out, "report path (default stdout)");

  auto* preset = app.add_subcommand("preset", "regenerate the data behind one figure");
  std::vector<std::string> preset_names(std::begin(kPresetNames), std::end(kPresetNames));
  preset->add_option("--preset", o.preset, "figure name")->required()->check(CLI::IsMember(preset_names));
  preset->add_option("--mode", o.mode, "numeric, analytic or both (default analytic)")
      ->check(CLI::IsMember({"numeric", "analytic", "both"}))
      ->default_str("analytic");
  add_numeric_options(preset, o);
  preset->add_option("--out", o.out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (coherence->parsed()) {
      SweepConfig c = sweep_config(o);
      for (const auto& t : c.accel) {
        if (t.source != RSource::Fixed) throw std::invalid_argument("coherence takes numeric r values only");
      }
      return run_rows(o, expand(c), parse_mode(o.mode), std::nullopt);
    }
    if (sweep->parsed()) return run_rows(o, expand(sweep_config(o)), parse_mode(o.mode), std::nullopt);
    if (compare->parsed()) return run_compare(o);
    if (preset->parsed()) {
      const EvalMode mode = preset->count("--mode") ? parse_mode(o.mode) : EvalMode::Analytic;
      return run_rows(o, preset_points(o.preset), mode, o.preset);
    }
  } catch (const TruncationCapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::logic_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
