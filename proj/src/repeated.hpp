#pragma once

// Infinitely repeated interaction sustained by grim-trigger reversion:
// critical discount factors for disciplining investors toward the
// competitive benchmark and for collusive single-market mimicry, plus
// simulated discounted payoff streams used to certify the thresholds.

#include <cstdint>

#include "model.hpp"
#include "profile.hpp"
#include "sim.hpp"

namespace cbs {

// Truncation bound for simulated streams: the horizon must leave a discount
// tail delta^H below this.
inline constexpr double kDiscountTail = 1e-10;

enum class TriggerKind {
  // Investors hold unbiased positions, the policymaker reveals fully; a
  // deviation triggers permanent babbling with the one-shot biased response.
  discipline,
  // Same cooperative path, but reversion to the most informative static
  // cheap-talk equilibrium instead of babbling.
  collusion_first_best,
  // Investors jointly mimic the single-investor outcome (its partition and
  // its larger bias); reversion to the static cheap-talk equilibrium.
  // Requires at least two investors, since mimicry is vacuous alone.
  collusion_monopoly,
};

struct TriggerEquilibrium {
  TriggerKind kind = TriggerKind::discipline;
  bool feasible = false;             // some discount factor in [0,1) deters deviations
  double delta_star = 0.0;           // critical discount factor; NaN when infeasible
  double path_stage_payoff = 0.0;    // investor stage payoff on the cooperative path
  double punish_stage_payoff = 0.0;  // investor stage payoff under reversion
  double one_shot_gain = 0.0;        // best single-stage deviation gain on the path
};

TriggerEquilibrium discipline_threshold(const GameParams& params);
TriggerEquilibrium collusion_first_best_threshold(const GameParams& params);
TriggerEquilibrium collusion_monopoly_threshold(const GameParams& params);
TriggerEquilibrium trigger_threshold(const GameParams& params, TriggerKind kind);

// Discipline is feasible exactly when phi1 strictly exceeds this bound:
// with too little early-shock uncertainty the babbling threat has no bite.
double discipline_phi1_bound(const GameParams& params);

// Cheap-talk reversion deters deviations exactly when the residual variance
// of the static equilibrium strictly exceeds this floor.
double collusion_first_best_variance_bound(const GameParams& params);

// Stage profiles the trigger strategies are assembled from.
StrategyProfile trigger_path_profile(const GameParams& params, TriggerKind kind);
StrategyProfile trigger_punish_profile(const GameParams& params, TriggerKind kind);

// Which sustained outcome investors rank higher when both are on the table:
// unbiased first-best positioning or joint monopoly mimicry. Mimicry wins
// exactly when the mimicked partition loses little enough information,
// sigma_hat_monopoly < threshold.
struct PreferenceReport {
  bool monopoly_preferred = false;    // strict; both false on the knife edge
  bool first_best_preferred = false;
  double first_best_stage_payoff = 0.0;
  double monopoly_stage_payoff = 0.0;
  double sigma_hat_monopoly = 0.0;  // residual variance of the mimicked partition
  double threshold = 0.0;           // squared single-market bias
};

PreferenceReport investor_equilibrium_preference(const GameParams& params);

// Smallest horizon H with delta^H below the discount tail bound.
std::int64_t minimal_horizon(double delta);

// Discounted investor payoff streams under the trigger strategy, with and
// without a single deviation at stage `deviate_at` (negative: never deviate;
// the deviator best-responds once, then the market reverts forever). Both
// scenarios share every shock draw, so net_gain is a paired estimate.
// horizon 0 picks the minimal horizon for `delta`.
struct TriggerStreamResult {
  McEstimate no_deviation;
  McEstimate with_deviation;
  McEstimate net_gain;  // with_deviation minus no_deviation, per replication
  double delta = 0.0;
  std::int64_t horizon = 0;
};

TriggerStreamResult simulate_trigger_path(const GameParams& params, TriggerKind kind,
                                          double delta, std::int64_t deviate_at,
                                          std::int64_t horizon, std::int64_t replications,
                                          const RngSpec& rng, int workers = 1);

// Simulation-only estimate of the critical discount factor: bracket the sign
// change of the mean net deviation gain (deviation at stage zero) and bisect
// to `tol`. All probes reuse the same seed, keeping the curve monotone in
// delta. Throws InfeasibleError when no delta up to 0.99 deters deviations.
double trigger_bisection_delta(const GameParams& params, TriggerKind kind,
                               std::int64_t replications, const RngSpec& rng,
                               double tol = 1e-4, int workers = 1);

}  // namespace cbs
