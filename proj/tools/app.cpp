#include "app.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "cbsignal.h"
#include "json.hpp"

namespace cli {

namespace {

using nlohmann::json;

// ---- table plumbing ---------------------------------------------------------

using Cell = std::variant<double, std::int64_t, std::uint64_t, std::string>;

struct Table {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string cell_to_csv(const Cell& cell) {
  struct Visitor {
    std::string operator()(double v) const { return fmt_double(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(std::uint64_t v) const { return std::to_string(v); }
    std::string operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

json cell_to_json(const Cell& cell) {
  struct Visitor {
    json operator()(double v) const { return v; }
    json operator()(std::int64_t v) const { return v; }
    json operator()(std::uint64_t v) const { return v; }
    json operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

// Everything the library reports keyed to the same leading columns.
const std::vector<std::string> kPrefixColumns = {"alpha", "beta", "n_investors",
                                                 "phi1",  "phi2", "alpha_tilde"};

Table make_table(std::string name, std::initializer_list<const char*> extra) {
  Table t;
  t.name = std::move(name);
  t.columns = kPrefixColumns;
  for (const char* c : extra) t.columns.emplace_back(c);
  return t;
}

std::vector<Cell> prefix_cells(const ScenarioConfig& cfg, double alpha_tilde) {
  return {cfg.alpha, cfg.beta, static_cast<std::int64_t>(cfg.n_investors),
          cfg.phi1, cfg.phi2, alpha_tilde};
}

class OutputWriter {
 public:
  OutputWriter(std::string dir, bool csv, bool json_fmt)
      : dir_(std::move(dir)), csv_(csv), json_(json_fmt) {}

  void write(const Table& t) {
    if (csv_) {
      std::string s;
      for (size_t c = 0; c < t.columns.size(); ++c) {
        if (c) s += ',';
        s += t.columns[c];
      }
      s += '\n';
      for (const auto& row : t.rows) {
        for (size_t c = 0; c < row.size(); ++c) {
          if (c) s += ',';
          s += cell_to_csv(row[c]);
        }
        s += '\n';
      }
      emit(t.name + ".csv", s);
    }
    if (json_) {
      json doc;
      doc["schema_version"] = 1;
      doc["table"] = t.name;
      doc["columns"] = t.columns;
      json rows = json::array();
      for (const auto& row : t.rows) {
        json r = json::array();
        for (const auto& cell : row) r.push_back(cell_to_json(cell));
        rows.push_back(std::move(r));
      }
      doc["rows"] = std::move(rows);
      emit(t.name + ".json", doc.dump(2) + "\n");
    }
  }

  void manifest(const std::string& command, const std::optional<std::uint64_t>& seed) {
    json m;
    m["schema_version"] = 1;
    m["command"] = command;
    std::sort(files_.begin(), files_.end());
    m["files"] = files_;
    if (seed)
      m["master_seed"] = *seed;
    else
      m["master_seed"] = nullptr;
    emit("manifest.json", m.dump(2) + "\n");
  }

 private:
  void emit(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::path(dir_) / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("out: cannot write " + path.string());
    out << content;
    if (!out) throw ConfigError("out: short write to " + path.string());
    files_.push_back(name);
  }

  std::string dir_;
  bool csv_;
  bool json_;
  std::vector<std::string> files_;
};

// ---- C API plumbing ---------------------------------------------------------

struct ApiError {
  cbs_status status;
  std::string message;
};

void check(cbs_status status) {
  if (status != CBS_OK)
    throw ApiError{status,
                   std::string(cbs_status_name(status)) + ": " + cbs_last_error_message()};
}

struct GameHandle {
  explicit GameHandle(const ScenarioConfig& cfg) {
    check(cbs_game_create(cfg.alpha, cfg.beta, cfg.n_investors, cfg.phi1, cfg.phi2,
                          &game_));
  }
  ~GameHandle() { cbs_game_destroy(game_); }
  GameHandle(const GameHandle&) = delete;
  GameHandle& operator=(const GameHandle&) = delete;

  cbs_game* get() const { return game_; }

 private:
  cbs_game* game_ = nullptr;
};

struct PartitionHandle {
  PartitionHandle(cbs_game* game, double alpha_tilde, int cells) {
    check(cbs_solve_partition(game, alpha_tilde, cells, &partition_));
  }
  ~PartitionHandle() { cbs_partition_destroy(partition_); }
  PartitionHandle(const PartitionHandle&) = delete;
  PartitionHandle& operator=(const PartitionHandle&) = delete;

  cbs_partition* get() const { return partition_; }

 private:
  cbs_partition* partition_ = nullptr;
};

struct ProfileSpec {
  cbs_profile_kind kind;
  const char* name;
};

constexpr std::array<ProfileSpec, 3> kProfiles = {{
    {CBS_PROFILE_COMPETITIVE, "competitive"},
    {CBS_PROFILE_OLIGOPOLY_TRANSPARENT, "oligopoly_transparent"},
    {CBS_PROFILE_OLIGOPOLY_CHEAP_TALK, "oligopoly_cheap_talk"},
}};

struct TriggerSpec {
  cbs_trigger_kind kind;
  const char* name;
};

constexpr std::array<TriggerSpec, 3> kTriggerKinds = {{
    {CBS_TRIGGER_DISCIPLINE, "discipline"},
    {CBS_TRIGGER_COLLUSION_FIRST_BEST, "collusion_first_best"},
    {CBS_TRIGGER_COLLUSION_MONOPOLY, "collusion_monopoly"},
}};

cbs_profile_kind profile_by_name(const std::string& name) {
  for (const auto& p : kProfiles)
    if (name == p.name) return p.kind;
  throw ConfigError("$.simulate.profiles: unknown profile '" + name + "'");
}

// Weight the row's numbers are computed at: the competitive benchmark always
// uses society's own weight.
double profile_weight(cbs_profile_kind kind, const ScenarioConfig& cfg, double at) {
  return kind == CBS_PROFILE_COMPETITIVE ? cfg.alpha : at;
}

// ---- config parsing ---------------------------------------------------------

[[noreturn]] void fail(const std::string& where, const std::string& why) {
  throw ConfigError(where + ": " + why);
}

void require_keys_known(const json& obj, const std::string& where,
                        std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        known = true;
        break;
      }
    if (!known) fail(where + "." + item.key(), "unknown key");
  }
}

const json& require_key(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) fail(where + "." + key, "required key is missing");
  return obj.at(key);
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "must be a number, got " + v.dump());
  return v.get<double>();
}

std::int64_t as_integer(const json& v, const std::string& where) {
  if (v.is_number_unsigned() || v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d == std::floor(d) && std::fabs(d) < 9.0e18) return static_cast<std::int64_t>(d);
  }
  fail(where, "must be an integer, got " + v.dump());
}

std::uint64_t as_seed(const json& v, const std::string& where) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  fail(where, "must be a nonnegative integer, got " + v.dump());
}

json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

}  // namespace

ScenarioConfig load_config(const std::string& path) {
  const json doc = parse_json_file(path);
  if (!doc.is_object()) throw ConfigError("$: config must be a JSON object");
  require_keys_known(doc, "$",
                     {"schema_version", "alpha", "beta", "n_investors", "phi1", "phi2",
                      "alpha_tilde", "seed", "partition", "simulate", "scan", "repeated"});

  if (doc.contains("schema_version")) {
    const auto v = as_integer(doc.at("schema_version"), "$.schema_version");
    if (v != 1) fail("$.schema_version", "unsupported version " + std::to_string(v));
  }

  ScenarioConfig cfg;
  cfg.alpha = as_number(require_key(doc, "$", "alpha"), "$.alpha");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    fail("$.alpha", "must lie in (0,1), got " + fmt_double(cfg.alpha));

  cfg.beta = as_number(require_key(doc, "$", "beta"), "$.beta");
  if (!(cfg.beta >= 0.0)) fail("$.beta", "must be nonnegative, got " + fmt_double(cfg.beta));

  const auto n = as_integer(require_key(doc, "$", "n_investors"), "$.n_investors");
  if (n < 1) fail("$.n_investors", "must be at least 1, got " + std::to_string(n));
  if (n > 1000000) fail("$.n_investors", "implausibly large, got " + std::to_string(n));
  cfg.n_investors = static_cast<int>(n);

  cfg.phi1 = as_number(require_key(doc, "$", "phi1"), "$.phi1");
  if (!(cfg.phi1 > 0.0)) fail("$.phi1", "must be positive, got " + fmt_double(cfg.phi1));
  cfg.phi2 = as_number(require_key(doc, "$", "phi2"), "$.phi2");
  if (!(cfg.phi2 > 0.0)) fail("$.phi2", "must be positive, got " + fmt_double(cfg.phi2));

  if (doc.contains("alpha_tilde")) {
    cfg.alpha_tilde = as_number(doc.at("alpha_tilde"), "$.alpha_tilde");
    if (!(cfg.alpha_tilde >= 0.0 && cfg.alpha_tilde < 1.0))
      fail("$.alpha_tilde", "must lie in [0,1), got " + fmt_double(cfg.alpha_tilde));
    cfg.has_alpha_tilde = true;
  }

  if (doc.contains("seed")) cfg.seed = as_seed(doc.at("seed"), "$.seed");

  if (doc.contains("partition")) {
    const json& block = doc.at("partition");
    if (!block.is_object()) fail("$.partition", "must be an object");
    require_keys_known(block, "$.partition", {"cells"});
    const auto cells = as_integer(require_key(block, "$.partition", "cells"),
                                  "$.partition.cells");
    if (cells < 0)
      fail("$.partition.cells", "must be nonnegative (0 picks the most informative)");
    if (cells > 10000000) fail("$.partition.cells", "too many cells to materialize");
    cfg.partition_cells = static_cast<int>(cells);
  }

  if (doc.contains("simulate")) {
    const json& block = doc.at("simulate");
    if (!block.is_object()) fail("$.simulate", "must be an object");
    require_keys_known(block, "$.simulate", {"replications", "profiles"});
    const auto reps = as_integer(require_key(block, "$.simulate", "replications"),
                                 "$.simulate.replications");
    if (reps < 2) fail("$.simulate.replications", "require at least 2 replications");
    cfg.sim_replications = reps;
    if (block.contains("profiles")) {
      const json& profiles = block.at("profiles");
      if (!profiles.is_array() || profiles.empty())
        fail("$.simulate.profiles", "must be a nonempty array of profile names");
      for (size_t i = 0; i < profiles.size(); ++i) {
        const json& p = profiles.at(i);
        const std::string where = "$.simulate.profiles[" + std::to_string(i) + "]";
        if (!p.is_string()) fail(where, "must be a string, got " + p.dump());
        profile_by_name(p.get<std::string>());  // validates
        cfg.sim_profiles.push_back(p.get<std::string>());
      }
    }
  }

  if (doc.contains("scan")) {
    const json& block = doc.at("scan");
    if (!block.is_object()) fail("$.scan", "must be an object");
    require_keys_known(block, "$.scan", {"dimension", "grid"});
    const json& dim = require_key(block, "$.scan", "dimension");
    if (!dim.is_string()) fail("$.scan.dimension", "must be a string, got " + dim.dump());
    const std::string name = dim.get<std::string>();
    if (cbs_scan_dimension_canonical(name.c_str()) == nullptr)
      fail("$.scan.dimension",
           "unknown dimension '" + name +
               "' (expected alpha, beta, n_investors, phi1 or phi2)");
    cfg.scan_dimension = name;
    const json& grid = require_key(block, "$.scan", "grid");
    if (!grid.is_array() || grid.empty())
      fail("$.scan.grid", "must be a nonempty array of numbers");
    for (size_t i = 0; i < grid.size(); ++i)
      cfg.scan_grid.push_back(
          as_number(grid.at(i), "$.scan.grid[" + std::to_string(i) + "]"));
  }

  if (doc.contains("repeated")) {
    const json& block = doc.at("repeated");
    if (!block.is_object()) fail("$.repeated", "must be an object");
    require_keys_known(block, "$.repeated", {"kind", "delta_grid", "replications"});
    cfg.has_repeated = true;
    if (block.contains("kind")) {
      const json& kind = block.at("kind");
      if (!kind.is_string()) fail("$.repeated.kind", "must be a string, got " + kind.dump());
      const std::string name = kind.get<std::string>();
      bool known = false;
      for (const auto& k : kTriggerKinds)
        if (name == k.name) known = true;
      if (!known)
        fail("$.repeated.kind",
             "unknown kind '" + name +
                 "' (expected discipline, collusion_first_best or collusion_monopoly)");
      cfg.repeated_kind = name;
    }
    if (block.contains("delta_grid")) {
      const json& grid = block.at("delta_grid");
      if (!grid.is_array() || grid.empty())
        fail("$.repeated.delta_grid", "must be a nonempty array of numbers");
      for (size_t i = 0; i < grid.size(); ++i) {
        const std::string where = "$.repeated.delta_grid[" + std::to_string(i) + "]";
        const double d = as_number(grid.at(i), where);
        if (!(d >= 0.0 && d < 1.0)) fail(where, "must lie in [0,1), got " + fmt_double(d));
        cfg.delta_grid.push_back(d);
      }
    }
    if (block.contains("replications")) {
      const auto reps =
          as_integer(block.at("replications"), "$.repeated.replications");
      if (reps < 2) fail("$.repeated.replications", "require at least 2 replications");
      cfg.stream_replications = reps;
    }
  }

  return cfg;
}

namespace {

// ---- commands -----------------------------------------------------------------

Table partition_table(const ScenarioConfig& cfg, double at, cbs_partition* partition) {
  int count = 0;
  check(cbs_partition_cutoff_count(partition, &count));
  std::vector<double> cutoffs(static_cast<size_t>(count));
  int got = 0;
  check(cbs_partition_cutoffs(partition, cutoffs.data(), count, &got));

  Table t = make_table("partition", {"cell", "lo", "hi", "cell_mean", "mass",
                                     "cell_variance"});
  for (int k = 0; k + 1 < count; ++k) {
    const double lo = cutoffs[static_cast<size_t>(k)];
    const double hi = cutoffs[static_cast<size_t>(k) + 1];
    const double len = hi - lo;
    auto row = prefix_cells(cfg, at);
    row.emplace_back(static_cast<std::int64_t>(k));
    row.emplace_back(lo);
    row.emplace_back(hi);
    row.emplace_back(0.5 * (lo + hi));
    row.emplace_back(len / (2.0 * cfg.phi1));
    row.emplace_back(len * len / 12.0);
    t.rows.push_back(std::move(row));
  }
  return t;
}

void cmd_solve(const ScenarioConfig& cfg, double at, cbs_game* game, OutputWriter& out) {
  cbs_solve_summary summary{};
  check(cbs_solve(game, at, &summary));

  Table t = make_table("solve", {"investment_bias", "p_bar", "residual_variance",
                                 "mean_distortion", "underreaction_slope"});
  auto row = prefix_cells(cfg, at);
  row.emplace_back(summary.investment_bias);
  if (summary.p_bar_unbounded)
    row.emplace_back(std::string("unbounded"));
  else
    row.emplace_back(static_cast<std::int64_t>(summary.p_bar));
  row.emplace_back(summary.residual_variance);
  row.emplace_back(summary.mean_distortion);
  row.emplace_back(summary.underreaction_slope);
  t.rows.push_back(std::move(row));
  out.write(t);

  Table rates = make_table("rates", {"profile", "omega1", "omega2", "rate"});
  const std::array<double, 3> w1 = {-0.5 * cfg.phi1, 0.0, 0.5 * cfg.phi1};
  const std::array<double, 3> w2 = {-0.5 * cfg.phi2, 0.0, 0.5 * cfg.phi2};
  for (const auto& p : kProfiles) {
    const double weight = profile_weight(p.kind, cfg, at);
    for (const double a : w1)
      for (const double b : w2) {
        double rate = 0.0;
        check(cbs_on_path_rate(game, p.kind, weight, a, b, &rate));
        auto r = prefix_cells(cfg, weight);
        r.emplace_back(std::string(p.name));
        r.emplace_back(a);
        r.emplace_back(b);
        r.emplace_back(rate);
        rates.rows.push_back(std::move(r));
      }
  }
  out.write(rates);

  if (!summary.p_bar_unbounded && summary.p_bar >= 1 && summary.p_bar <= 10000) {
    PartitionHandle partition(game, at, 0);
    out.write(partition_table(cfg, at, partition.get()));
  }
}

void cmd_partition(const ScenarioConfig& cfg, double at, cbs_game* game,
                   OutputWriter& out) {
  const int cells = cfg.partition_cells.value_or(0);
  PartitionHandle partition(game, at, cells);
  out.write(partition_table(cfg, at, partition.get()));

  int got_cells = 0;
  check(cbs_partition_cells(partition.get(), &got_cells));
  double residual = 0.0;
  check(cbs_partition_residual_variance(partition.get(), &residual));
  double violation = 0.0;
  check(cbs_verify_partition(game, partition.get(), at, &violation));
  int64_t p_bar = 0;
  int unbounded = 0;
  check(cbs_max_partitions(game, at, &p_bar, &unbounded));

  Table t = make_table("partition_summary",
                       {"cells", "p_bar", "residual_variance", "max_violation"});
  auto row = prefix_cells(cfg, at);
  row.emplace_back(static_cast<std::int64_t>(got_cells));
  if (unbounded)
    row.emplace_back(std::string("unbounded"));
  else
    row.emplace_back(static_cast<std::int64_t>(p_bar));
  row.emplace_back(residual);
  row.emplace_back(violation);
  t.rows.push_back(std::move(row));
  out.write(t);
}

void cmd_welfare(const ScenarioConfig& cfg, double at, cbs_game* game,
                 OutputWriter& out) {
  Table t = make_table("welfare",
                       {"profile", "W", "EU_i", "mean_distortion", "residual_variance"});
  for (const auto& p : kProfiles) {
    const double weight = profile_weight(p.kind, cfg, at);
    cbs_welfare_report report{};
    check(cbs_welfare_report_for(game, p.kind, weight, &report));
    auto row = prefix_cells(cfg, weight);
    row.emplace_back(std::string(p.name));
    row.emplace_back(report.welfare);
    row.emplace_back(report.investor_payoff);
    row.emplace_back(report.mean_distortion);
    row.emplace_back(report.residual_variance);
    t.rows.push_back(std::move(row));
  }
  out.write(t);
}

void cmd_banker(const ScenarioConfig& cfg, cbs_game* game, OutputWriter& out) {
  Table t = make_table("banker",
                       {"mode", "alpha_tilde_star", "society_welfare", "market_payoff"});
  const std::array<std::pair<cbs_delegation_mode, const char*>, 2> modes = {{
      {CBS_DELEGATION_TRANSPARENT, "transparent"},
      {CBS_DELEGATION_CHEAP_TALK, "cheap_talk"},
  }};
  for (const auto& [mode, name] : modes) {
    cbs_delegation_solution sol{};
    check(cbs_optimal_banker(game, mode, &sol));
    auto row = prefix_cells(cfg, sol.alpha_tilde_star);
    row.emplace_back(std::string(name));
    row.emplace_back(sol.alpha_tilde_star);
    row.emplace_back(sol.society_welfare);
    row.emplace_back(sol.market_payoff);
    t.rows.push_back(std::move(row));
  }
  out.write(t);

  if (cfg.n_investors == 1) {
    cbs_babbling_monopoly_report report{};
    check(cbs_babbling_monopoly_check(game, &report));
    Table b = make_table("banker_babbling",
                         {"ratio", "babbles_under_unbiased", "eu_unbiased", "eu_kitish",
                          "kitish_preferred", "condition_lhs", "condition_rhs"});
    auto row = prefix_cells(cfg, cfg.alpha);
    row.emplace_back(report.ratio);
    row.emplace_back(static_cast<std::int64_t>(report.babbles_under_unbiased));
    row.emplace_back(report.eu_unbiased);
    row.emplace_back(report.eu_kitish);
    row.emplace_back(static_cast<std::int64_t>(report.kitish_preferred));
    row.emplace_back(report.condition_lhs);
    row.emplace_back(report.condition_rhs);
    b.rows.push_back(std::move(row));
    out.write(b);
  }
}

std::vector<TriggerSpec> applicable_kinds(const ScenarioConfig& cfg) {
  std::vector<TriggerSpec> kinds;
  for (const auto& k : kTriggerKinds) {
    if (cfg.repeated_kind && *cfg.repeated_kind != k.name) continue;
    if (!cfg.repeated_kind && k.kind == CBS_TRIGGER_COLLUSION_MONOPOLY &&
        cfg.n_investors < 2)
      continue;  // mimicry is vacuous alone; keep it only on explicit request
    kinds.push_back(k);
  }
  return kinds;
}

void cmd_repeated(const ScenarioConfig& cfg, cbs_game* game, OutputWriter& out,
                  int workers) {
  const auto kinds = applicable_kinds(cfg);
  double phi1_bound = 0.0;
  check(cbs_discipline_phi1_bound(game, &phi1_bound));
  double variance_bound = 0.0;
  check(cbs_collusion_variance_bound(game, &variance_bound));

  Table t = make_table("repeated",
                       {"kind", "feasible", "delta_star", "path_stage_payoff",
                        "punish_stage_payoff", "one_shot_gain", "phi1_bound",
                        "variance_bound"});
  for (const auto& k : kinds) {
    cbs_trigger_equilibrium eq{};
    check(cbs_trigger_threshold(game, k.kind, &eq));
    auto row = prefix_cells(cfg, cfg.alpha);
    row.emplace_back(std::string(k.name));
    row.emplace_back(static_cast<std::int64_t>(eq.feasible));
    if (eq.feasible)
      row.emplace_back(eq.delta_star);
    else
      row.emplace_back(std::string("infeasible"));
    row.emplace_back(eq.path_stage_payoff);
    row.emplace_back(eq.punish_stage_payoff);
    row.emplace_back(eq.one_shot_gain);
    row.emplace_back(phi1_bound);
    row.emplace_back(variance_bound);
    t.rows.push_back(std::move(row));
  }
  out.write(t);

  cbs_preference_report pref{};
  check(cbs_investor_equilibrium_preference(game, &pref));
  Table p = make_table("preference",
                       {"monopoly_preferred", "first_best_preferred",
                        "first_best_stage_payoff", "monopoly_stage_payoff",
                        "sigma_hat_monopoly", "threshold"});
  auto row = prefix_cells(cfg, cfg.alpha);
  row.emplace_back(static_cast<std::int64_t>(pref.monopoly_preferred));
  row.emplace_back(static_cast<std::int64_t>(pref.first_best_preferred));
  row.emplace_back(pref.first_best_stage_payoff);
  row.emplace_back(pref.monopoly_stage_payoff);
  row.emplace_back(pref.sigma_hat_monopoly);
  row.emplace_back(pref.threshold);
  p.rows.push_back(std::move(row));
  out.write(p);

  if (cfg.delta_grid.empty()) return;
  if (!cfg.seed)
    throw ConfigError("$.seed: an explicit seed is required for randomized commands");

  Table s = make_table("repeated_stream",
                       {"kind", "delta", "horizon", "replications", "seed",
                        "v_path_mean", "v_path_se", "v_dev_mean", "v_dev_se",
                        "net_gain_mean", "net_gain_se"});
  for (const auto& k : kinds)
    for (const double delta : cfg.delta_grid) {
      cbs_trigger_stream_result r{};
      check(cbs_simulate_trigger_path(game, k.kind, delta, 0, 0,
                                      cfg.stream_replications, *cfg.seed, workers, &r));
      auto row = prefix_cells(cfg, cfg.alpha);
      row.emplace_back(std::string(k.name));
      row.emplace_back(r.delta);
      row.emplace_back(static_cast<std::int64_t>(r.horizon));
      row.emplace_back(static_cast<std::int64_t>(r.net_gain.replications));
      row.emplace_back(static_cast<std::uint64_t>(r.net_gain.seed));
      row.emplace_back(r.no_deviation.mean);
      row.emplace_back(r.no_deviation.std_error);
      row.emplace_back(r.with_deviation.mean);
      row.emplace_back(r.with_deviation.std_error);
      row.emplace_back(r.net_gain.mean);
      row.emplace_back(r.net_gain.std_error);
      s.rows.push_back(std::move(row));
    }
  out.write(s);
}

void cmd_simulate(const ScenarioConfig& cfg, double at, cbs_game* game,
                  OutputWriter& out, int workers) {
  if (!cfg.sim_replications)
    throw ConfigError("$.simulate: block is required for the simulate command");
  if (!cfg.seed)
    throw ConfigError("$.seed: an explicit seed is required for randomized commands");

  std::vector<std::string> names = cfg.sim_profiles;
  if (names.empty())
    for (const auto& p : kProfiles) names.emplace_back(p.name);

  Table t = make_table("simulate",
                       {"profile", "quantity", "mc_mean", "mc_stderr", "replications",
                        "seed", "algorithm", "analytic", "abs_z"});
  for (const auto& name : names) {
    const cbs_profile_kind kind = profile_by_name(name);
    const double weight = profile_weight(kind, cfg, at);
    cbs_mc_estimate welfare{};
    cbs_mc_estimate payoff{};
    check(cbs_run_monte_carlo(game, kind, weight, *cfg.sim_replications, *cfg.seed,
                              workers, &welfare, &payoff));
    cbs_welfare_report analytic{};
    check(cbs_welfare_report_for(game, kind, weight, &analytic));

    const auto add_row = [&](const char* quantity, const cbs_mc_estimate& est,
                             double reference) {
      auto row = prefix_cells(cfg, weight);
      row.emplace_back(std::string(name));
      row.emplace_back(std::string(quantity));
      row.emplace_back(est.mean);
      row.emplace_back(est.std_error);
      row.emplace_back(static_cast<std::int64_t>(est.replications));
      row.emplace_back(static_cast<std::uint64_t>(est.seed));
      row.emplace_back(std::string(est.algorithm));
      row.emplace_back(reference);
      row.emplace_back(est.std_error > 0.0
                           ? std::fabs(est.mean - reference) / est.std_error
                           : 0.0);
      t.rows.push_back(std::move(row));
    };
    add_row("welfare", welfare, analytic.welfare);
    add_row("investor_payoff", payoff, analytic.investor_payoff);
  }
  out.write(t);
}

void cmd_scan(const ScenarioConfig& cfg, cbs_game* game, OutputWriter& out) {
  if (!cfg.scan_dimension)
    throw ConfigError("$.scan: block is required for the scan command");
  const char* canonical = cbs_scan_dimension_canonical(cfg.scan_dimension->c_str());
  if (canonical == nullptr)
    throw ConfigError("$.scan.dimension: unknown dimension '" + *cfg.scan_dimension + "'");

  const int n = static_cast<int>(cfg.scan_grid.size());
  std::vector<cbs_scan_row> rows(static_cast<size_t>(n));
  int flags[CBS_SCAN_COLUMNS] = {};
  check(cbs_comparative_statics_scan(game, canonical, cfg.scan_grid.data(), n,
                                     rows.data(), flags));

  Table t = make_table("scan", {"dimension", "grid_value", "bias", "p_bar",
                                "residual_variance", "w_competitive", "w_transparent",
                                "w_cheap_talk", "alpha_tilde_tr", "alpha_tilde_ct"});
  const std::string dim = canonical;
  for (const auto& r : rows) {
    // the leading columns describe the substituted game point
    double alpha = cfg.alpha;
    double beta = cfg.beta;
    std::int64_t investors = cfg.n_investors;
    double phi1 = cfg.phi1;
    double phi2 = cfg.phi2;
    if (dim == "alpha")
      alpha = r.grid_value;
    else if (dim == "beta")
      beta = r.grid_value;
    else if (dim == "n_investors")
      investors = static_cast<std::int64_t>(std::llround(r.grid_value));
    else if (dim == "phi1")
      phi1 = r.grid_value;
    else if (dim == "phi2")
      phi2 = r.grid_value;

    std::vector<Cell> row = {alpha, beta, investors, phi1, phi2, alpha};
    row.emplace_back(dim);
    row.emplace_back(r.grid_value);
    row.emplace_back(r.bias);
    if (r.p_bar < 0)
      row.emplace_back(std::string("unbounded"));
    else
      row.emplace_back(static_cast<std::int64_t>(r.p_bar));
    row.emplace_back(r.residual_variance);
    row.emplace_back(r.w_competitive);
    row.emplace_back(r.w_transparent);
    row.emplace_back(r.w_cheap_talk);
    row.emplace_back(r.alpha_tilde_tr);
    row.emplace_back(r.alpha_tilde_ct);
    t.rows.push_back(std::move(row));
  }
  out.write(t);

  Table f = make_table("scan_flags", {"column", "monotonicity"});
  for (int c = 0; c < CBS_SCAN_COLUMNS; ++c) {
    auto row = prefix_cells(cfg, cfg.alpha);
    row.emplace_back(std::string(cbs_scan_column_name(c)));
    row.emplace_back(std::string(cbs_monotonicity_name(flags[c])));
    f.rows.push_back(std::move(row));
  }
  out.write(f);
}

std::pair<bool, bool> parse_formats(const std::string& spec) {
  bool csv = false;
  bool json_fmt = false;
  std::string token;
  const auto flush = [&] {
    // trim surrounding spaces
    size_t b = token.find_first_not_of(' ');
    size_t e = token.find_last_not_of(' ');
    std::string s =
        b == std::string::npos ? std::string() : token.substr(b, e - b + 1);
    token.clear();
    if (s.empty()) return;
    if (s == "csv")
      csv = true;
    else if (s == "json")
      json_fmt = true;
    else
      throw ConfigError("--format: unknown format '" + s + "' (expected csv and/or json)");
  };
  for (char c : spec) {
    if (c == ',')
      flush();
    else
      token += c;
  }
  flush();
  return {csv, json_fmt};
}

void execute(const Options& opt) {
  const auto [csv, json_fmt] = parse_formats(opt.formats);
  ScenarioConfig cfg = load_config(opt.config_path);
  if (opt.seed_override) cfg.seed = *opt.seed_override;
  const double at = cfg.has_alpha_tilde ? cfg.alpha_tilde : cfg.alpha;

  if (opt.out_dir.empty()) throw ConfigError("out: output directory is required");
  std::error_code ec;
  std::filesystem::create_directories(opt.out_dir, ec);
  if (ec)
    throw ConfigError("out: cannot create directory " + opt.out_dir + ": " +
                      ec.message());

  GameHandle game(cfg);
  OutputWriter out(opt.out_dir, csv, json_fmt);

  if (opt.command == "solve")
    cmd_solve(cfg, at, game.get(), out);
  else if (opt.command == "partition")
    cmd_partition(cfg, at, game.get(), out);
  else if (opt.command == "welfare")
    cmd_welfare(cfg, at, game.get(), out);
  else if (opt.command == "banker")
    cmd_banker(cfg, game.get(), out);
  else if (opt.command == "repeated")
    cmd_repeated(cfg, game.get(), out, opt.workers);
  else if (opt.command == "simulate")
    cmd_simulate(cfg, at, game.get(), out, opt.workers);
  else if (opt.command == "scan")
    cmd_scan(cfg, game.get(), out);
  else
    throw ConfigError("command: unknown command '" + opt.command + "'");

  out.manifest(opt.command, cfg.seed);
}

}  // namespace

int run_command(const Options& options) {
  try {
    execute(options);
    return 0;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const ApiError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    switch (e.status) {
      case CBS_INVALID_ARGUMENT:
        return 1;
      case CBS_INFEASIBLE:
        return 2;
      default:
        return 3;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}

int run(int argc, const char* const* argv) {
  CLI::App app{"Solver and simulator for the rate-signaling game"};
  app.require_subcommand(1);

  Options opt;
  std::uint64_t seed_storage = 0;

  const std::array<std::pair<const char*, const char*>, 7> defs = {{
      {"solve", "Static equilibrium objects at a banker weight"},
      {"partition", "Messaging partition cutoffs and diagnostics"},
      {"welfare", "Welfare reports for the three canonical profiles"},
      {"banker", "Optimal delegation in both disclosure modes"},
      {"repeated", "Trigger thresholds, preference report and payoff streams"},
      {"simulate", "Monte Carlo estimates against the closed forms"},
      {"scan", "Comparative-statics sweep over one parameter"},
  }};
  std::vector<CLI::App*> subs;
  for (const auto& [name, description] : defs) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", opt.config_path, "Scenario config file (JSON)")
        ->required();
    sub->add_option("--out", opt.out_dir, "Output directory")->required();
    sub->add_option("--format", opt.formats, "Comma-separated formats (csv,json)");
    sub->add_option("--seed", seed_storage, "Master seed override");
    sub->add_option("--workers", opt.workers, "Worker threads for simulation");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // normalize every usage problem onto the config-error code
  }

  for (CLI::App* sub : subs)
    if (sub->parsed()) {
      opt.command = sub->get_name();
      if (sub->count("--seed") > 0) opt.seed_override = seed_storage;
    }
  return run_command(opt);
}

}  // namespace cli
