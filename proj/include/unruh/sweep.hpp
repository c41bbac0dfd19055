// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <exception>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

#include "unruh/closed_forms.hpp"
#include "unruh/coherence.hpp"
#include "unruh/state_builders.hpp"

namespace unruh {

inline constexpr std::string_view kCsvHeader =
    "family,theta,phi,r1,r2,N,n_accel,c_total_numeric,c_global_numeric,c_local_numeric,"
    "c_total_analytic,c_global_analytic,c_local_analytic,n_max,tail_bound";

/// Linear grid of `count` points from start to stop inclusive.
struct Grid {
  double start = 0.0;
  double stop = 0.0;
  std::size_t count = 1;

  [[nodiscard]] std::vector<double> values() const {
    if (count == 0) throw std::invalid_argument("grid count must be >= 1");
    if (count == 1) return {start};
    std::vector<double> v(count);
    const double step = (stop - start) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) v[i] = start + step * static_cast<double>(i);
    v.back() = stop;
    return v;
  }
};

namespace detail {

[[nodiscard]] inline double parse_double(std::string_view text) {
  const std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

[[nodiscard]] inline std::size_t parse_count(std::string_view text) {
  std::size_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw std::invalid_argument("not a count: '" + std::string(text) + "'");
  return v;
}

[[nodiscard]] inline std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, begin);
    out.push_back(text.substr(begin, pos == std::string_view::npos ? std::string_view::npos : pos - begin));
    if (pos == std::string_view::npos) return out;
    begin = pos + 1;
  }
}

}  // namespace detail

/// "start:stop:count".
[[nodiscard]] inline Grid parse_grid(std::string_view text) {
  const auto parts = detail::split(text, ':');
  if (parts.size() != 3) throw std::invalid_argument("grid must be start:stop:count");
  Grid g{detail::parse_double(parts[0]), detail::parse_double(parts[1]), detail::parse_count(parts[2])};
  if (g.count == 0) throw std::invalid_argument("grid count must be >= 1");
  if (g.start > g.stop) throw std::invalid_argument("grid start must not exceed stop");
  return g;
}

enum class FamilyKind { Ghz, W, WSym, Plus, WWbar, Star, GhzN, WN };

[[nodiscard]] inline FamilyKind parse_family(std::string_view name) {
  static const std::map<std::string_view, FamilyKind> names = {
      {"ghz", FamilyKind::Ghz},     {"w", FamilyKind::W},         {"w-sym", FamilyKind::WSym},
      {"plus", FamilyKind::Plus},   {"wwbar", FamilyKind::WWbar}, {"star", FamilyKind::Star},
      {"ghz-n", FamilyKind::GhzN},  {"w-n", FamilyKind::WN}};
  auto it = names.find(name);
  if (it == names.end()) throw std::invalid_argument("unknown family '" + std::string(name) + "'");
  return it->second;
}

[[nodiscard]] inline std::string_view to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Ghz: return "ghz";
    case FamilyKind::W: return "w";
    case FamilyKind::WSym: return "w-sym";
    case FamilyKind::Plus: return "plus";
    case FamilyKind::WWbar: return "wwbar";
    case FamilyKind::Star: return "star";
    case FamilyKind::GhzN: return "ghz-n";
    case FamilyKind::WN: return "w-n";
  }
  return "?";
}

[[nodiscard]] inline bool uses_theta(FamilyKind k) { return k == FamilyKind::Ghz || k == FamilyKind::W; }
[[nodiscard]] inline bool uses_phi(FamilyKind k) { return k == FamilyKind::W; }
[[nodiscard]] inline bool uses_n(FamilyKind k) {
  return k == FamilyKind::Plus || k == FamilyKind::GhzN || k == FamilyKind::WN;
}

/// Source of an accelerated party's r in a sweep.
enum class RSource { Fixed, Grid, Grid2 };

struct AccelToken {
  enum class Who { Party, Central, Peripheral } who = Who::Party;
  PartyId party = 0;
  RSource source = RSource::Fixed;
  double r = 0.0;
};

/// Comma list of party:r, central:r or peripheral:r (star only), or
/// "none". In sweeps r may be "r" (primary grid) or "r2" (secondary grid).
[[nodiscard]] inline std::vector<AccelToken> parse_accel(std::string_view text) {
  std::vector<AccelToken> out;
  if (text == "none" || text.empty()) return out;
  for (auto item : detail::split(text, ',')) {
    const auto kv = detail::split(item, ':');
    if (kv.size() != 2) throw std::invalid_argument("accel entry must be who:r, got '" + std::string(item) + "'");
    AccelToken t;
    if (kv[0] == "central") {
      t.who = AccelToken::Who::Central;
    } else if (kv[0] == "peripheral") {
      t.who = AccelToken::Who::Peripheral;
    } else {
      const std::size_t p = detail::parse_count(kv[0]);
      if (p > static_cast<std::size_t>(kMaxModes)) throw std::invalid_argument("party id out of range");
      t.party = static_cast<PartyId>(p);
    }
    if (kv[1] == "r") {
      t.source = RSource::Grid;
    } else if (kv[1] == "r2") {
      t.source = RSource::Grid2;
    } else {
      t.r = detail::parse_double(kv[1]);
      if (t.r < 0.0) throw std::invalid_argument("r must be >= 0");
    }
    out.push_back(t);
  }
  return out;
}

/// Party ids for the tokens. Central is the star's party 2; peripheral
/// tokens take parties 0 then 1.
[[nodiscard]] inline std::vector<PartyId> resolve_parties(FamilyKind family, std::span<const AccelToken> tokens) {
  std::vector<PartyId> out;
  PartyId next_peripheral = 0;
  for (const auto& t : tokens) {
    if (t.who == AccelToken::Who::Party) {
      out.push_back(t.party);
      continue;
    }
    if (family != FamilyKind::Star) throw std::invalid_argument("central/peripheral apply to the star family only");
    if (t.who == AccelToken::Who::Central) {
      out.push_back(kStarCentralParty);
    } else {
      while (std::find(out.begin(), out.end(), next_peripheral) != out.end()) ++next_peripheral;
      if (next_peripheral > 1) throw std::invalid_argument("star has only two peripheral qubits");
      out.push_back(next_peripheral++);
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = i + 1; j < out.size(); ++j) {
      if (out[i] == out[j]) throw std::invalid_argument("party " + std::to_string(out[i]) + " accelerated twice");
    }
  }
  return out;
}

enum class EvalMode { Numeric, Analytic, Both };

[[nodiscard]] inline EvalMode parse_mode(std::string_view s) {
  if (s == "numeric") return EvalMode::Numeric;
  if (s == "analytic") return EvalMode::Analytic;
  if (s == "both") return EvalMode::Both;
  throw std::invalid_argument("mode must be numeric, analytic or both");
}

/// One grid point, fully resolved.
struct PointSpec {
  FamilyKind family = FamilyKind::Ghz;
  double theta = std::numbers::pi / 4;
  double phi = std::numbers::pi / 4;
  std::size_t n_qubits = 3;
  std::map<PartyId, double> accel;
  /// Divide coherences by the inertial value; labelled "<family>-normalized".
  bool normalized = false;
};

[[nodiscard]] inline Family make_family(const PointSpec& p) {
  switch (p.family) {
    case FamilyKind::Ghz: return GeneralizedGhz{p.theta};
    case FamilyKind::W: return GeneralizedW{p.theta, p.phi};
    case FamilyKind::WSym: return SymmetricW{3};
    case FamilyKind::Plus: return PlusProduct{p.n_qubits};
    case FamilyKind::WWbar: return WWbar{};
    case FamilyKind::Star: return Star{};
    case FamilyKind::GhzN: return GhzN{p.n_qubits};
    case FamilyKind::WN: return SymmetricW{p.n_qubits};
  }
  throw std::invalid_argument("unknown family");
}

[[nodiscard]] inline StateSpec make_state_spec(const PointSpec& p, const TruncationPolicy& policy) {
  StateSpec s{make_family(p), {}, policy};
  for (const auto& [party, r] : p.accel) s.accel[party] = AccelerationSpec::from_r(r);
  return s;
}

[[nodiscard]] inline CoherenceTriple analytic_point(const PointSpec& p) {
  return analytic(make_state_spec(p, TruncationPolicy::fixed(0)));
}

struct Row {
  PointSpec point;
  std::optional<CoherenceTriple> numeric;
  std::optional<CoherenceTriple> closed;
  std::optional<std::size_t> n_max;
  std::optional<double> tail_bound;
};

[[nodiscard]] inline Row evaluate(const PointSpec& p, EvalMode mode, const TruncationPolicy& policy) {
  Row row{p, {}, {}, {}, {}};
  auto rescale = [](const CoherenceTriple& t, double by) {
    return CoherenceTriple{normalized_coherence(t.total, by), normalized_coherence(t.global, by),
                           normalized_coherence(t.local, by)};
  };
  double inertial = 1.0;
  if (p.normalized) {
    PointSpec at_rest = p;
    at_rest.accel.clear();
    inertial = analytic_point(at_rest).total;
  }
  if (mode != EvalMode::Analytic) {
    const CoherenceReport rep = measure(make_state_spec(p, policy));
    row.numeric = rescale({rep.c_total, *rep.c_global, *rep.c_local}, inertial);
    std::size_t n = 0;
    for (const auto& entry : rep.n_max_used) n = std::max(n, entry.second);
    row.n_max = n;
    row.tail_bound = rep.tail_bound_total;
  }
  if (mode != EvalMode::Numeric) row.closed = rescale(analytic_point(p), inertial);
  return row;
}

/// 17 significant digits, '.' decimal point regardless of locale.
[[nodiscard]] inline std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

[[nodiscard]] inline std::string format_row(const Row& row) {
  const PointSpec& p = row.point;
  std::string s(to_string(p.family));
  if (p.normalized) s += "-normalized";
  auto field = [&](std::optional<double> v) {
    s += ',';
    if (v) s += format_number(*v);
  };
  field(uses_theta(p.family) ? std::optional<double>(p.theta) : std::nullopt);
  field(uses_phi(p.family) ? std::optional<double>(p.phi) : std::nullopt);
  std::optional<double> r1;
  std::optional<double> r2;
  for (auto it = p.accel.rbegin(); it != p.accel.rend(); ++it) {
    if (!r1) {
      r1 = it->second;
    } else if (!r2) {
      r2 = it->second;
    }
  }
  field(r1);
  field(r2);
  s += ',' + std::to_string(p.n_qubits);
  s += ',' + std::to_string(p.accel.size());
  auto triple = [&](const std::optional<CoherenceTriple>& t) {
    field(t ? std::optional<double>(t->total) : std::nullopt);
    field(t ? std::optional<double>(t->global) : std::nullopt);
    field(t ? std::optional<double>(t->local) : std::nullopt);
  };
  triple(row.numeric);
  triple(row.closed);
  s += ',';
  if (row.n_max) s += std::to_string(*row.n_max);
  field(row.tail_bound);
  return s;
}

/// Evaluates points on `threads` workers; results are returned in input
/// order. The first exception raised by any point is rethrown.
[[nodiscard]] inline std::vector<Row> evaluate_all(const std::vector<PointSpec>& points, EvalMode mode,
                                                   const TruncationPolicy& policy, std::size_t threads = 1) {
  std::vector<std::optional<Row>> results(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        results[i] = evaluate(points[i], mode, policy);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  threads = std::max<std::size_t>(1, std::min(threads, points.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  std::vector<Row> out;
  out.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*results[i]));
  }
  return out;
}

inline void write_csv(std::ostream& os, const std::vector<Row>& rows, std::optional<std::string_view> preset = {}) {
  if (preset) os << "# preset=" << *preset << '\n';
  os << kCsvHeader << '\n';
  for (const auto& row : rows) os << format_row(row) << '\n';
}

/// Grid description of a sweep; expands to points in lexicographic order
/// of (theta, phi, n_accel, r, r2).
struct SweepConfig {
  FamilyKind family = FamilyKind::Ghz;
  std::vector<double> thetas{std::numbers::pi / 4};
  std::vector<double> phis{std::numbers::pi / 4};
  std::size_t n_qubits = 3;
  std::vector<AccelToken> accel;
  /// For ghz-n / w-n: numbers of accelerated qubits (the highest ids).
  std::vector<std::size_t> n_accel;
  Grid grid{0.0, 0.0, 1};
  std::optional<Grid> grid2;
  bool normalized = false;
};

[[nodiscard]] inline std::size_t default_party_count(FamilyKind k, std::size_t requested) {
  return uses_n(k) ? requested : 3;
}

[[nodiscard]] inline std::vector<PointSpec> expand(const SweepConfig& cfg) {
  const std::vector<PartyId> parties = resolve_parties(cfg.family, cfg.accel);
  const bool needs_grid2 = std::any_of(cfg.accel.begin(), cfg.accel.end(),
                                       [](const AccelToken& t) { return t.source == RSource::Grid2; });
  if (needs_grid2 && !cfg.grid2) throw std::invalid_argument("accel uses r2 but no second grid was given");
  const bool n_family = cfg.family == FamilyKind::GhzN || cfg.family == FamilyKind::WN;
  if (!cfg.n_accel.empty() && !n_family) throw std::invalid_argument("n-accel applies to ghz-n and w-n only");
  if (!cfg.n_accel.empty() && !cfg.accel.empty()) throw std::invalid_argument("give either accel or n-accel");

  const std::vector<double> rs = cfg.grid.values();
  const std::vector<double> rs2 = cfg.grid2 ? cfg.grid2->values() : std::vector<double>{0.0};
  const std::vector<double> thetas = uses_theta(cfg.family) ? cfg.thetas : std::vector<double>{0.0};
  const std::vector<double> phis = uses_phi(cfg.family) ? cfg.phis : std::vector<double>{0.0};
  const std::vector<std::size_t> counts = cfg.n_accel.empty() ? std::vector<std::size_t>{0} : cfg.n_accel;
  const std::size_t n_qubits = default_party_count(cfg.family, cfg.n_qubits);
  const bool uses_r = !cfg.n_accel.empty() ||
                      std::any_of(cfg.accel.begin(), cfg.accel.end(),
                                  [](const AccelToken& t) { return t.source == RSource::Grid; });

  std::vector<PointSpec> out;
  for (double theta : thetas) {
    for (double phi : phis) {
      for (std::size_t k : counts) {
        if (k > n_qubits) throw std::invalid_argument("n-accel exceeds N");
        for (double r : uses_r ? rs : std::vector<double>{0.0}) {
          for (double r2 : needs_grid2 ? rs2 : std::vector<double>{0.0}) {
            PointSpec p;
            p.family = cfg.family;
            p.theta = theta;
            p.phi = phi;
            p.n_qubits = n_qubits;
            p.normalized = cfg.normalized;
            for (std::size_t i = 0; i < cfg.accel.size(); ++i) {
              const auto& t = cfg.accel[i];
              p.accel[parties[i]] = t.source == RSource::Fixed ? t.r : t.source == RSource::Grid ? r : r2;
            }
            for (std::size_t i = 0; i < k; ++i) p.accel[static_cast<PartyId>(n_qubits - 1 - i)] = r;
            out.push_back(p);
          }
        }
      }
    }
  }
  return out;
}

/// Figure presets: each reproduces the data behind one figure panel.
inline constexpr std::string_view kPresetNames[] = {"fig3a", "fig3b", "fig4",  "fig5", "fig6",
                                                    "fig7",  "fig8",  "fig9a", "fig9b"};

[[nodiscard]] inline std::vector<PointSpec> preset_points(std::string_view name) {
  constexpr double pi = std::numbers::pi;
  std::vector<SweepConfig> parts;
  auto accel = [](std::string_view s) { return parse_accel(s); };
  if (name == "fig3a") {
    SweepConfig c;
    c.family = FamilyKind::Ghz;
    c.thetas = {pi / 4, pi / 5, pi / 6, pi / 8};
    c.accel = accel("2:r");
    c.grid = {0.0, 3.0, 60};
    parts.push_back(c);
  } else if (name == "fig3b") {
    for (double r : {0.0, 0.5, 1.0, 2.0, 4.0}) {
      SweepConfig c;
      c.family = FamilyKind::Ghz;
      c.thetas = Grid{0.0, pi, 181}.values();
      c.accel = accel("2:r");
      c.grid = {r, r, 1};
      parts.push_back(c);
    }
  } else if (name == "fig4") {
    SweepConfig c;
    c.family = FamilyKind::Ghz;
    c.thetas = {pi / 4, pi / 5, pi / 6};
    c.accel = accel("2:r,1:r2");
    c.grid = {0.0, 3.0, 31};
    c.grid2 = Grid{0.0, 3.0, 31};
    parts.push_back(c);
  } else if (name == "fig5") {
    SweepConfig sym;
    sym.family = FamilyKind::WSym;
    sym.accel = accel("2:r");
    sym.grid = {0.0, 3.0, 61};
    parts.push_back(sym);
    for (auto [t, f] : {std::pair{pi / 5, pi / 5}, std::pair{pi / 6, pi / 6}, std::pair{pi / 3, pi / 6}}) {
      SweepConfig c = sym;
      c.family = FamilyKind::W;
      c.thetas = {t};
      c.phis = {f};
      parts.push_back(c);
    }
  } else if (name == "fig6") {
    for (double r : {0.01, 4.0}) {
      SweepConfig c;
      c.family = FamilyKind::W;
      c.thetas = Grid{0.0, pi, 37}.values();
      c.phis = Grid{0.0, 2.0 * pi * 71.0 / 72.0, 72}.values();
      c.accel = accel("2:r");
      c.grid = {r, r, 1};
      parts.push_back(c);
    }
  } else if (name == "fig7") {
    for (auto [t, f] : {std::pair{kSymmetricWTheta, kSymmetricWPhi}, std::pair{pi / 5, pi / 5},
                        std::pair{pi / 6, pi / 6}, std::pair{pi / 3, pi / 6}}) {
      SweepConfig c;
      c.family = FamilyKind::W;
      c.thetas = {t};
      c.phis = {f};
      c.accel = accel("2:r,1:r2");
      c.grid = {0.0, 3.0, 31};
      c.grid2 = Grid{0.0, 3.0, 31};
      parts.push_back(c);
    }
  } else if (name == "fig8") {
    for (auto [fam, a] : {std::pair{FamilyKind::WWbar, "2:r"}, std::pair{FamilyKind::Star, "central:r"},
                          std::pair{FamilyKind::Star, "peripheral:r"}}) {
      SweepConfig c;
      c.family = fam;
      c.accel = accel(a);
      c.grid = {0.0, 3.0, 61};
      parts.push_back(c);
    }
  } else if (name == "fig9a" || name == "fig9b") {
    const bool a = name == "fig9a";
    for (auto [fam, norm] : {std::pair{FamilyKind::GhzN, false}, std::pair{FamilyKind::WN, false},
                             std::pair{FamilyKind::WN, true}}) {
      for (double r : a ? std::vector<double>{0.0} : std::vector<double>{1.5, 2.0}) {
        SweepConfig c;
        c.family = fam;
        c.normalized = norm;
        c.n_qubits = 11;
        if (a) {
          c.n_accel = {1, 10};
          c.grid = {0.0, 3.0, 61};
        } else {
          c.n_accel = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
          c.grid = {r, r, 1};
        }
        parts.push_back(c);
      }
    }
  } else {
    throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
  }
  std::vector<PointSpec> out;
  for (const auto& c : parts) {
    auto pts = expand(c);
    out.insert(out.end(), pts.begin(), pts.end());
  }
  return out;
}

/// Largest |numeric - analytic| over every column both paths produced.
struct Deviation {
  double max_abs = 0.0;
  double max_tail = 0.0;
  std::size_t worst_row = 0;
};

[[nodiscard]] inline Deviation max_deviation(const std::vector<Row>& rows) {
  Deviation d;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& row = rows[i];
    if (!row.numeric || !row.closed) throw std::logic_error("compare needs both numeric and analytic values");
    const double dev = std::max({std::abs(row.numeric->total - row.closed->total),
                                 std::abs(row.numeric->global - row.closed->global),
                                 std::abs(row.numeric->local - row.closed->local)});
    if (dev > d.max_abs) {
      d.max_abs = dev;
      d.worst_row = i;
    }
    if (row.tail_bound) d.max_tail = std::max(d.max_tail, *row.tail_bound);
  }
  return d;
}

}  // namespace unruh
