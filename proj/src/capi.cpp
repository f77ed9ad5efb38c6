// extern-C surface over the core. Every entry point traps exceptions and maps
// them onto status codes; the offending message is parked in a thread-local
// slot for cbs_last_error_message().

#include "cbsignal.h"

#include <cstdio>
#include <memory>
#include <new>
#include <span>
#include <stdexcept>
#include <string>

#include "banker.hpp"
#include "cheap_talk.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "profile.hpp"
#include "repeated.hpp"
#include "sim.hpp"
#include "static_game.hpp"
#include "welfare.hpp"

struct cbs_game {
  cbs::GameParams params;
};

struct cbs_partition {
  cbs::Partition partition;
  double phi1;
};

namespace {

thread_local std::string t_error;

cbs_status fail_null(const char* what) {
  t_error = std::string(what) + ": null pointer";
  return CBS_NULL_POINTER;
}

template <typename Fn>
cbs_status guarded(Fn&& fn) {
  try {
    fn();
    t_error.clear();
    return CBS_OK;
  } catch (const cbs::InfeasibleError& e) {
    t_error = e.what();
    return CBS_INFEASIBLE;
  } catch (const cbs::NumericalError& e) {
    t_error = e.what();
    return CBS_NUMERICAL;
  } catch (const std::invalid_argument& e) {
    t_error = e.what();
    return CBS_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    t_error = e.what();
    return CBS_NUMERICAL;
  } catch (...) {
    t_error = "unknown failure";
    return CBS_NUMERICAL;
  }
}

cbs::StrategyProfile make_profile(const cbs::GameParams& params, cbs_profile_kind kind,
                                  double alpha_tilde) {
  switch (kind) {
    case CBS_PROFILE_COMPETITIVE:
      return cbs::competitive_profile(params);
    case CBS_PROFILE_OLIGOPOLY_TRANSPARENT:
      return cbs::transparent_oligopoly_profile(params, cbs::BankerWeight(alpha_tilde));
    case CBS_PROFILE_OLIGOPOLY_CHEAP_TALK:
      return cbs::most_informative_profile(params, cbs::BankerWeight(alpha_tilde));
  }
  throw std::invalid_argument("profile: unknown profile kind " +
                              std::to_string(static_cast<int>(kind)));
}

cbs::TriggerKind to_trigger_kind(cbs_trigger_kind kind) {
  switch (kind) {
    case CBS_TRIGGER_DISCIPLINE:
      return cbs::TriggerKind::discipline;
    case CBS_TRIGGER_COLLUSION_FIRST_BEST:
      return cbs::TriggerKind::collusion_first_best;
    case CBS_TRIGGER_COLLUSION_MONOPOLY:
      return cbs::TriggerKind::collusion_monopoly;
  }
  throw std::invalid_argument("kind: unknown trigger kind " +
                              std::to_string(static_cast<int>(kind)));
}

void to_c_estimate(const cbs::McEstimate& e, cbs_mc_estimate* out) {
  out->mean = e.mean;
  out->std_error = e.std_error;
  out->replications = e.replications;
  out->seed = e.seed;
  std::snprintf(out->algorithm, sizeof out->algorithm, "%s", e.algorithm.c_str());
}

// Partitions finer than this are never materialized through the C surface.
constexpr std::int64_t kMaxMaterializedCells = 10'000'000;

}  // namespace

extern "C" {

const char* cbs_version(void) { return "1.0.0"; }

const char* cbs_rng_algorithm(void) { return cbs::kRngAlgorithm; }

const char* cbs_status_name(cbs_status status) {
  switch (status) {
    case CBS_OK:
      return "ok";
    case CBS_INVALID_ARGUMENT:
      return "invalid_argument";
    case CBS_INFEASIBLE:
      return "infeasible";
    case CBS_NUMERICAL:
      return "numerical";
    case CBS_NULL_POINTER:
      return "null_pointer";
    case CBS_BUFFER_TOO_SMALL:
      return "buffer_too_small";
  }
  return "unknown";
}

const char* cbs_last_error_message(void) { return t_error.c_str(); }

cbs_status cbs_game_create(double alpha, double beta, int n_investors, double phi1,
                           double phi2, cbs_game** out_game) {
  if (out_game == nullptr) return fail_null("out_game");
  return guarded([&] {
    *out_game = new cbs_game{cbs::GameParams(alpha, beta, n_investors, phi1, phi2)};
  });
}

void cbs_game_destroy(cbs_game* game) { delete game; }

cbs_status cbs_investor_payoff(double position, double rate, double beta, double* out) {
  if (out == nullptr) return fail_null("out");
  return guarded([&] { *out = cbs::investor_payoff(position, rate, beta); });
}

cbs_status cbs_cb_loss(const double* positions, int n_positions, double rate,
                       double omega, double alpha_tilde, double* out) {
  if (positions == nullptr) return fail_null("positions");
  if (out == nullptr) return fail_null("out");
  return guarded([&] {
    if (n_positions < 1)
      throw std::invalid_argument("n_positions: require at least one position");
    *out = cbs::cb_loss(std::span<const double>(positions, static_cast<size_t>(n_positions)),
                        rate, omega, cbs::BankerWeight(alpha_tilde));
  });
}

cbs_status cbs_policy_rule(double omega, double mean_position, double alpha_tilde,
                           double* out) {
  if (out == nullptr) return fail_null("out");
  return guarded(
      [&] { *out = cbs::policy_rule(omega, mean_position, cbs::BankerWeight(alpha_tilde)); });
}

cbs_status cbs_underreaction_slope(double alpha_tilde, double* out) {
  if (out == nullptr) return fail_null("out");
  return guarded(
      [&] { *out = cbs::underreaction_slope(cbs::BankerWeight(alpha_tilde)); });
}

cbs_status cbs_investment_bias(const cbs_game* game, double alpha_tilde, double* out) {
  if (game == nullptr) return fail_null("game");
  if (out == nullptr) return fail_null("out");
  return guarded(
      [&] { *out = cbs::investment_bias(game->params, cbs::BankerWeight(alpha_tilde)); });
}

cbs_status cbs_best_response_investment(const cbs_game* game, double alpha_tilde,
                                        double expected_omega1,
                                        double mean_other_positions, double* out) {
  if (game == nullptr) return fail_null("game");
  if (out == nullptr) return fail_null("out");
  return guarded([&] {
    *out = cbs::best_response_investment(game->params, cbs::BankerWeight(alpha_tilde),
                                         expected_omega1, mean_other_positions);
  });
}

cbs_status cbs_utility_decomposition(const cbs_game* game, double alpha_tilde,
                                     double out_terms[3]) {
  if (game == nullptr) return fail_null("game");
  if (out_terms == nullptr) return fail_null("out_terms");
  return guarded([&] {
    const auto d =
        cbs::expected_utility_decomposition(game->params, cbs::BankerWeight(alpha_tilde));
    out_terms[0] = d.unbiased_term;
    out_terms[1] = d.readjustment_term;
    out_terms[2] = d.distortion_term;
  });
}

cbs_status cbs_on_path_rate(const cbs_game* game, cbs_profile_kind profile,
                            double alpha_tilde, double omega1, double omega2,
                            double* out) {
  if (game == nullptr) return fail_null("game");
  if (out == nullptr) return fail_null("out");
  return guarded([&] {
    const auto p = make_profile(game->params, profile, alpha_tilde);
    *out = cbs::on_path_rate(p, game->params, cbs::ShockPair{omega1, omega2});
  });
}

cbs_status cbs_solve(const cbs_game* game, double alpha_tilde, cbs_solve_summary* out) {
  if (game == nullptr) return fail_null("game");
  if (out == nullptr) return fail_null("out");
  return guarded([&] {
    const cbs::BankerWeight weight(alpha_tilde);
    const auto count = cbs::max_partitions(game->params, weight);
    out->investment_bias = cbs::investment_bias(game->params, weight);
    out->p_bar = count.unbounded ? -1 : count.value;
    out->p_bar_unbounded = count.unbounded ? 1 : 0;
    out->residual_variance =
        cbs::most_informative_residual_variance(game->params, weight);
    out->mean_distortion = alpha_tilde * out->investment_bias;
    out->underreaction_slope = 1.0 - alpha_tilde;
  });
}

cbs_status cbs_max_partitions(const cbs_game* game, double alpha_tilde,
                              int64_t* out_cells, int* out_unbounded) {
  if (game == nullptr) return fail_null("game");
  if (out_cells == nullptr) return fail_null("out_cells");
  if (out_unbounded == nullptr) return fail_null("out_unbounded");
  return guarded([&] {
    const auto count = cbs::max_partitions(game->params, cbs::BankerWeight(alpha_tilde));
    *out_cells = count.unbounded ? -1 : count.value;
    *out_unbounded = count.unbounded ? 1 : 0;
  });
}

cbs_status cbs_solve_partition(const cbs_game* game, double alpha_tilde, int cells,
                               cbs_partition** out_partition) {
  if (game == nullptr) return fail_null("game");
  if (out_partition == nullptr) return fail_null("out_partition");
  return guarded([&] {
    const cbs::BankerWeight weight(alpha_tilde);
    std::int64_t want = cells;
    if (want < 0) throw std::invalid_argument("cells: require a nonnegative cell count");
    if (want == 0) {
      const auto count = cbs::max_partitions(game->params, weight);
      if (count.unbounded)
        throw cbs::InfeasibleError(
            "fully revealing regime: every partition is supportable, none is most "
            "informative");
      want = count.value;
    }
    if (want > kMaxMaterializedCells)
      throw cbs::InfeasibleError("partition with " + std::to_string(want) +
                                 " cells is too fine to materialize");
    auto solved =
        cbs::solve_partition(game->params, weight, static_cast<int>(want));
    *out_partition = new cbs_partition{std::move(solved), game->params.phi1};
  });
}

void cbs_partition_destroy(cbs_partition* partition) { delete partition; }

cbs_status cbs_partition_cells(const cbs_partition* partition, int* out_cells) {
  if (partition == nullptr) return fail_null("partition");
  if (out_cells == nullptr) return fail_null("out_cells");
  return guarded([&] { *out_cells = partition->partition.cells(); });
}

cbs_status cbs_partition_cutoff_count(const cbs_partition* partition, int* out_count) {
  if (partition == nullptr) return fail_null("partition");
  if (out_count == nullptr) return fail_null("out_count");
  return guarded(
      [&] { *out_count = static_cast<int>(partition->partition.cutoffs.size()); });
}

cbs_status cbs_partition_cutoffs(const cbs_partition* partition, double* buffer,
                                 int capacity, int* out_count) {
  if (partition == nullptr) return fail_null("partition");
  if (out_count == nullptr) return fail_null("out_count");
  const auto& cutoffs = partition->partition.cutoffs;
  const int needed = static_cast<int>(cutoffs.size());
  *out_count = needed;
  if (capacity < needed) {
    t_error = "buffer holds " + std::to_string(capacity) + " entries, need " +
              std::to_string(needed);
    return CBS_BUFFER_TOO_SMALL;
  }
  if (buffer == nullptr) return fail_null("buffer");
  for (int i = 0; i < needed; ++i) buffer[i] = cutoffs[static_cast<size_t>(i)];
  t_error.clear();
  return CBS_OK;
}

cbs_status cbs_partition_residual_variance(const cbs_partition* partition, double* out) {
  if (partition == nullptr) return fail_null("partition");
  if (out == nullptr) return fail_null("out");
  return guarded(
      [&] { *out = cbs::residual_variance(partition->partition, partition->phi1); });
}

cbs_status cbs_verify_partition(const cbs_game* game, const cbs_partition* partition,
                                double alpha_tilde, double* out_max_violation) {
  if (game == nullptr) return fail_null("game");
  if (partition == nullptr) return fail_null("partition");
  if (out_max_violation == nullptr) return fail_null("out_max_violation");
  return guarded([&] {
    if (partition->phi1 != game->params.phi1)
      throw std::invalid_argument(
          "partition: solved for a different early-shock support");
    *out_max_violation = cbs::verify_partition(partition->partition, game->params,
                                               cbs::BankerWeight(alpha_tilde));
  });
}

cbs_status cbs_welfare_report_for(const cbs_game* game, cbs_profile_kind profile,
                                  double alpha_tilde, cbs_welfare_report* out) {
  if (game == nullptr) return fail_null("game");
  if (out == nullptr) return fail_null("out");
  return guarded([&] {
    cbs::WelfareReport report{};
    switch (profile) {
      case CBS_PROFILE_COMPETITIVE:
        report = cbs::competitive_values(game->params);
        break;
      case CBS_PROFILE_OLIGOPOLY_TRANSPARENT:
        report = cbs::transparent_oligopoly_welfare(game->params,
                                                    cbs::BankerWeight(alpha_tilde));
        break;
      case CBS_PROFILE_OLIGOPOLY_CHEAP_TALK:
        report = cbs::cheap_talk_welfare(game->params, cbs::BankerWeight(alpha_tilde));
        break;
      default:
        throw std::invalid_argument("profile: unknown profile kind " +
                                    std::to_string(static_cast<int>(profile)));
    }
    out->welfare = report.welfare;
    out->investor_payoff = report.investor_payoff;
    out->mean_distortion = report.mean_distortion;
    out->residual_variance = report.residual_variance;
  });
}

cbs_status cbs_optimal_banker(const cbs_game* game, cbs_delegation_mode mode,
                              cbs_delegation_solution* out) {
  if (game == nullptr) return fail_null("game");
  if (out == nullptr) return fail_null("out");
  return guarded([&] {
    cbs::DelegationSolution solution;
    switch (mode) {
      case CBS_DELEGATION_TRANSPARENT:
        solution = cbs::optimal_banker_transparent(game->params);
        break;
      case CBS_DELEGATION_CHEAP_TALK:
        solution = cbs::optimal_banker_cheap_talk(game->params);
        break;
      default:
        throw std::invalid_argument("mode: unknown delegation mode " +
                                    std::to_string(static_cast<int>(mode)));
    }
    out->mode = mode;
    out->alpha_tilde_star = solution.alpha_tilde_star;
    out->society_welfare = solution.society_welfare;
    out->market_payoff = solution.market_payoff;
  });
}

cbs_status cbs_babbling_monopoly_check(const cbs_game* game,
                                       cbs_babbling_monopoly_report* out) {
  if (game == nullptr) return fail_null("game");
  if (out == nullptr) return fail_null("out");
  return guarded([&] {
    const auto report = cbs::babbling_monopoly_check(game->params);
    out->ratio = report.ratio;
    out->babbles_under_unbiased = report.babbles_under_unbiased ? 1 : 0;
    out->eu_unbiased = report.eu_unbiased;
    out->eu_kitish = report.eu_kitish;
    out->kitish_preferred = report.kitish_preferred ? 1 : 0;
    out->condition_lhs = report.condition_lhs;
    out->condition_rhs = report.condition_rhs;
  });
}

cbs_status cbs_comparative_statics_scan(const cbs_game* game, const char* dimension,
                                        const double* grid, int n_grid,
                                        cbs_scan_row* rows_out,
                                        int mono_flags_out[CBS_SCAN_COLUMNS]) {
  if (game == nullptr) return fail_null("game");
  if (dimension == nullptr) return fail_null("dimension");
  if (grid == nullptr) return fail_null("grid");
  if (rows_out == nullptr) return fail_null("rows_out");
  if (mono_flags_out == nullptr) return fail_null("mono_flags_out");
  return guarded([&] {
    if (n_grid < 1) throw std::invalid_argument("n_grid: require at least one grid point");
    const auto dim = cbs::parse_scan_dimension(dimension);
    const auto table = cbs::comparative_statics_scan(
        game->params, dim, std::span<const double>(grid, static_cast<size_t>(n_grid)));
    for (int i = 0; i < n_grid; ++i) {
      const auto& row = table.rows[static_cast<size_t>(i)];
      rows_out[i].grid_value = row.grid_value;
      rows_out[i].bias = row.bias;
      rows_out[i].p_bar = row.p_bar;
      rows_out[i].residual_variance = row.residual_variance;
      rows_out[i].w_competitive = row.w_competitive;
      rows_out[i].w_transparent = row.w_transparent;
      rows_out[i].w_cheap_talk = row.w_cheap_talk;
      rows_out[i].alpha_tilde_tr = row.alpha_tilde_tr;
      rows_out[i].alpha_tilde_ct = row.alpha_tilde_ct;
    }
    for (int c = 0; c < CBS_SCAN_COLUMNS; ++c)
      mono_flags_out[c] = static_cast<int>(table.flags[static_cast<size_t>(c)]);
  });
}

const char* cbs_scan_dimension_canonical(const char* name) {
  if (name == nullptr) return nullptr;
  try {
    return cbs::scan_dimension_name(cbs::parse_scan_dimension(name));
  } catch (...) {
    return nullptr;
  }
}

const char* cbs_scan_column_name(int column) {
  if (column < 0 || column >= CBS_SCAN_COLUMNS) return nullptr;
  return cbs::ScanTable::column_names[static_cast<size_t>(column)];
}

const char* cbs_monotonicity_name(int flag) {
  if (flag < 0 || flag > static_cast<int>(cbs::Monotonicity::none)) return nullptr;
  return cbs::monotonicity_name(static_cast<cbs::Monotonicity>(flag));
}

cbs_status cbs_trigger_threshold(const cbs_game* game, cbs_trigger_kind kind,
                                 cbs_trigger_equilibrium* out) {
  if (game == nullptr) return fail_null("game");
  if (out == nullptr) return fail_null("out");
  return guarded([&] {
    const auto eq = cbs::trigger_threshold(game->params, to_trigger_kind(kind));
    out->kind = kind;
    out->feasible = eq.feasible ? 1 : 0;
    out->delta_star = eq.delta_star;
    out->path_stage_payoff = eq.path_stage_payoff;
    out->punish_stage_payoff = eq.punish_stage_payoff;
    out->one_shot_gain = eq.one_shot_gain;
  });
}

cbs_status cbs_discipline_phi1_bound(const cbs_game* game, double* out) {
  if (game == nullptr) return fail_null("game");
  if (out == nullptr) return fail_null("out");
  return guarded([&] { *out = cbs::discipline_phi1_bound(game->params); });
}

cbs_status cbs_collusion_variance_bound(const cbs_game* game, double* out) {
  if (game == nullptr) return fail_null("game");
  if (out == nullptr) return fail_null("out");
  return guarded([&] { *out = cbs::collusion_first_best_variance_bound(game->params); });
}

cbs_status cbs_investor_equilibrium_preference(const cbs_game* game,
                                               cbs_preference_report* out) {
  if (game == nullptr) return fail_null("game");
  if (out == nullptr) return fail_null("out");
  return guarded([&] {
    const auto report = cbs::investor_equilibrium_preference(game->params);
    out->monopoly_preferred = report.monopoly_preferred ? 1 : 0;
    out->first_best_preferred = report.first_best_preferred ? 1 : 0;
    out->first_best_stage_payoff = report.first_best_stage_payoff;
    out->monopoly_stage_payoff = report.monopoly_stage_payoff;
    out->sigma_hat_monopoly = report.sigma_hat_monopoly;
    out->threshold = report.threshold;
  });
}

cbs_status cbs_run_monte_carlo(const cbs_game* game, cbs_profile_kind profile,
                               double alpha_tilde, int64_t replications, uint64_t seed,
                               int workers, cbs_mc_estimate* out_welfare,
                               cbs_mc_estimate* out_investor_payoff) {
  if (game == nullptr) return fail_null("game");
  if (out_welfare == nullptr) return fail_null("out_welfare");
  if (out_investor_payoff == nullptr) return fail_null("out_investor_payoff");
  return guarded([&] {
    const auto p = make_profile(game->params, profile, alpha_tilde);
    cbs::RngSpec spec;
    spec.master_seed = seed;
    const auto report = cbs::run_monte_carlo(p, game->params, replications, spec, workers);
    to_c_estimate(report.welfare, out_welfare);
    to_c_estimate(report.investor_payoff, out_investor_payoff);
  });
}

cbs_status cbs_simulate_trigger_path(const cbs_game* game, cbs_trigger_kind kind,
                                     double delta, int64_t deviate_at, int64_t horizon,
                                     int64_t replications, uint64_t seed, int workers,
                                     cbs_trigger_stream_result* out) {
  if (game == nullptr) return fail_null("game");
  if (out == nullptr) return fail_null("out");
  return guarded([&] {
    cbs::RngSpec spec;
    spec.master_seed = seed;
    const auto result =
        cbs::simulate_trigger_path(game->params, to_trigger_kind(kind), delta, deviate_at,
                                   horizon, replications, spec, workers);
    to_c_estimate(result.no_deviation, &out->no_deviation);
    to_c_estimate(result.with_deviation, &out->with_deviation);
    to_c_estimate(result.net_gain, &out->net_gain);
    out->delta = result.delta;
    out->horizon = result.horizon;
  });
}

cbs_status cbs_trigger_bisection(const cbs_game* game, cbs_trigger_kind kind,
                                 int64_t replications, uint64_t seed, double tol,
                                 int workers, double* out_delta) {
  if (game == nullptr) return fail_null("game");
  if (out_delta == nullptr) return fail_null("out_delta");
  return guarded([&] {
    cbs::RngSpec spec;
    spec.master_seed = seed;
    *out_delta = cbs::trigger_bisection_delta(game->params, to_trigger_kind(kind),
                                              replications, spec, tol, workers);
  });
}

cbs_status cbs_deviation_oracle_investment(const cbs_game* game, cbs_profile_kind profile,
                                           double alpha_tilde, double* out_gain) {
  if (game == nullptr) return fail_null("game");
  if (out_gain == nullptr) return fail_null("out_gain");
  return guarded([&] {
    const auto p = make_profile(game->params, profile, alpha_tilde);
    *out_gain = cbs::deviation_oracle_investment(p, game->params);
  });
}

cbs_status cbs_deviation_oracle_message(const cbs_game* game, cbs_profile_kind profile,
                                        double alpha_tilde, int state_samples,
                                        uint64_t seed, double* out_gain) {
  if (game == nullptr) return fail_null("game");
  if (out_gain == nullptr) return fail_null("out_gain");
  return guarded([&] {
    if (state_samples < 1)
      throw std::invalid_argument("state_samples: require at least one sampled state");
    const auto p = make_profile(game->params, profile, alpha_tilde);
    cbs::RngSpec spec;
    spec.master_seed = seed;
    *out_gain = cbs::deviation_oracle_message(p, game->params, state_samples, spec);
  });
}

}  // extern "C"
