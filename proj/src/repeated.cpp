#include "repeated.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cheap_talk.hpp"
#include "errors.hpp"
#include "static_game.hpp"
#include "welfare.hpp"

namespace cbs {

namespace {

constexpr std::int64_t kMaxHorizon = 5'000'000;

// Gains at or below this are rounding residue of the deviation oracle, not a
// profitable deviation.
constexpr double kGainFloor = 1e-14;

// Best one-shot gain from repositioning against unbiased opponents. The
// optimizer's advantage is state-independent, so this is exact.
double gain_against_competitive(const GameParams& params) {
  const double z = params.alpha * params.beta / (params.n_investors - params.alpha);
  return 0.5 * z * z;
}

void require_market(const GameParams& params, TriggerKind kind) {
  if (kind == TriggerKind::collusion_monopoly && params.n_investors < 2)
    throw std::invalid_argument(
        "n_investors: monopoly mimicry needs at least two investors");
}

TriggerEquilibrium assemble(const GameParams& params, TriggerKind kind) {
  require_market(params, kind);
  const StrategyProfile path = trigger_path_profile(params, kind);
  TriggerEquilibrium eq;
  eq.kind = kind;
  // No closed form is imposed for the mimicry gain: it is read off the
  // deviation oracle against the collusive path.
  eq.one_shot_gain = kind == TriggerKind::collusion_monopoly
                         ? deviation_oracle_investment(path, params)
                         : gain_against_competitive(params);
  eq.path_stage_payoff = profile_welfare_report(path, params).investor_payoff;
  eq.punish_stage_payoff =
      profile_welfare_report(trigger_punish_profile(params, kind), params).investor_payoff;

  if (eq.one_shot_gain <= kGainFloor) {  // nothing to deter
    eq.feasible = true;
    eq.delta_star = 0.0;
    return eq;
  }
  const double surplus = eq.path_stage_payoff - eq.punish_stage_payoff;
  if (surplus <= 0.0) {  // reversion is no threat: patience cannot help
    eq.feasible = false;
    eq.delta_star = std::numeric_limits<double>::quiet_NaN();
    return eq;
  }
  eq.delta_star = eq.one_shot_gain / (eq.one_shot_gain + surplus);
  eq.feasible = true;
  return eq;
}

}  // namespace

StrategyProfile trigger_path_profile(const GameParams& params, TriggerKind kind) {
  if (kind != TriggerKind::collusion_monopoly) return competitive_profile(params);
  // Mimicry: everyone plays as the sole investor of a single-market game
  // would, including its coarser partition and larger bias.
  const GameParams mono(params.alpha, params.beta, 1, params.phi1, params.phi2);
  return most_informative_profile(mono, BankerWeight(params.alpha));
}

StrategyProfile trigger_punish_profile(const GameParams& params, TriggerKind kind) {
  if (kind != TriggerKind::discipline)
    return most_informative_profile(params, BankerWeight(params.alpha));
  // Babbling: one cell spanning the support, one-shot biased positions.
  const BankerWeight weight(params.alpha);
  StrategyProfile profile;
  profile.kind = ProfileKind::oligopoly_cheap_talk;
  profile.banker = weight;
  profile.communication =
      Communication::from_partition(Partition{{-params.phi1, params.phi1}});
  profile.investment_bias = investment_bias(params, weight);
  return profile;
}

TriggerEquilibrium trigger_threshold(const GameParams& params, TriggerKind kind) {
  return assemble(params, kind);
}

TriggerEquilibrium discipline_threshold(const GameParams& params) {
  return assemble(params, TriggerKind::discipline);
}

TriggerEquilibrium collusion_first_best_threshold(const GameParams& params) {
  return assemble(params, TriggerKind::collusion_first_best);
}

TriggerEquilibrium collusion_monopoly_threshold(const GameParams& params) {
  return assemble(params, TriggerKind::collusion_monopoly);
}

double discipline_phi1_bound(const GameParams& params) {
  const double a = params.alpha;
  const double n = params.n_investors;
  return a * params.beta / ((n - a) * (1.0 - a)) *
         std::sqrt(3.0 * (2.0 * n - 1.0 - a) / (1.0 - a));
}

double collusion_first_best_variance_bound(const GameParams& params) {
  const double a = params.alpha;
  const double n = params.n_investors;
  const double z = a * params.beta / (n - a);
  return z * z * (2.0 * n - 1.0 - a) / ((1.0 - a) * (1.0 - a) * (1.0 - a));
}

PreferenceReport investor_equilibrium_preference(const GameParams& params) {
  PreferenceReport report;
  report.first_best_stage_payoff =
      profile_welfare_report(competitive_profile(params), params).investor_payoff;
  report.monopoly_stage_payoff =
      profile_welfare_report(trigger_path_profile(params, TriggerKind::collusion_monopoly),
                             params)
          .investor_payoff;
  const GameParams mono(params.alpha, params.beta, 1, params.phi1, params.phi2);
  report.sigma_hat_monopoly =
      most_informative_residual_variance(mono, BankerWeight(params.alpha));
  const double dm =
      params.alpha * params.beta / ((1.0 - params.alpha) * (1.0 - params.alpha));
  report.threshold = dm * dm;
  report.monopoly_preferred =
      report.monopoly_stage_payoff > report.first_best_stage_payoff;
  report.first_best_preferred =
      report.first_best_stage_payoff > report.monopoly_stage_payoff;
  return report;
}

std::int64_t minimal_horizon(double delta) {
  if (!(delta >= 0.0 && delta < 1.0))
    throw std::invalid_argument("delta: require 0 <= delta < 1, got " + std::to_string(delta));
  if (delta == 0.0) return 1;
  std::int64_t horizon =
      std::max<std::int64_t>(1, static_cast<std::int64_t>(
                                    std::ceil(std::log(kDiscountTail) / std::log(delta))));
  while (horizon <= kMaxHorizon &&
         std::pow(delta, static_cast<double>(horizon)) >= kDiscountTail)
    ++horizon;
  if (horizon > kMaxHorizon)
    throw std::invalid_argument(
        "delta: too close to one, the truncated stream would exceed the supported horizon");
  return horizon;
}

TriggerStreamResult simulate_trigger_path(const GameParams& params, TriggerKind kind,
                                          double delta, std::int64_t deviate_at,
                                          std::int64_t horizon, std::int64_t replications,
                                          const RngSpec& rng, int workers) {
  rng.validate();
  require_market(params, kind);
  if (!(delta >= 0.0 && delta < 1.0))
    throw std::invalid_argument("delta: require 0 <= delta < 1, got " + std::to_string(delta));
  if (horizon < 0)
    throw std::invalid_argument("horizon: require a nonnegative stage count");
  std::int64_t H = horizon == 0 ? minimal_horizon(delta) : horizon;
  if (H > kMaxHorizon)
    throw std::invalid_argument("horizon: exceeds the supported maximum of " +
                                std::to_string(kMaxHorizon));
  if (horizon > 0 && delta > 0.0 &&
      std::pow(delta, static_cast<double>(H)) >= kDiscountTail)
    throw std::invalid_argument("horizon: too short for the discount tail bound");
  if (deviate_at >= H)
    throw std::invalid_argument("deviate_at: stage " + std::to_string(deviate_at) +
                                " lies beyond the horizon " + std::to_string(H));

  const StrategyProfile path = trigger_path_profile(params, kind);
  const StrategyProfile punish = trigger_punish_profile(params, kind);
  const BankerWeight weight(params.alpha);
  const double n = params.n_investors;

  const auto body = [&](std::int64_t rep, double* vals) {
    UniformStream stream(rng.master_seed, static_cast<std::uint64_t>(rep));
    double v_no = 0.0;
    double v_dev = 0.0;
    double disc = 1.0;
    for (std::int64_t t = 0; t < H; ++t) {
      const double w1 = stream.symmetric(params.phi1);
      const double w2 = stream.symmetric(params.phi2);
      const double omega = w1 + w2;

      const double mu_path = path.communication.conditional_mean(w1);
      const double x_path = mu_path + path.investment_bias;
      const double u_path =
          investor_payoff(x_path, policy_rule(omega, x_path, weight), params.beta);
      v_no += disc * u_path;

      if (deviate_at < 0 || t < deviate_at) {
        v_dev += disc * u_path;
      } else if (t == deviate_at) {
        const double x_dev = best_response_investment(params, weight, mu_path, x_path);
        const double mean_pos = x_path + (x_dev - x_path) / n;
        const double u_dev =
            investor_payoff(x_dev, policy_rule(omega, mean_pos, weight), params.beta);
        v_dev += disc * u_dev;
      } else {
        const double x_pun =
            punish.communication.conditional_mean(w1) + punish.investment_bias;
        const double u_pun =
            investor_payoff(x_pun, policy_rule(omega, x_pun, weight), params.beta);
        v_dev += disc * u_pun;
      }
      disc *= delta;
    }
    vals[0] = v_no;
    vals[1] = v_dev;
    vals[2] = v_dev - v_no;
  };

  BlockAccumulator acc;
  run_replications(replications, workers, 3, body, acc);

  TriggerStreamResult result;
  result.no_deviation = estimate_from(acc, 0, rng);
  result.with_deviation = estimate_from(acc, 1, rng);
  result.net_gain = estimate_from(acc, 2, rng);
  result.delta = delta;
  result.horizon = H;
  return result;
}

double trigger_bisection_delta(const GameParams& params, TriggerKind kind,
                               std::int64_t replications, const RngSpec& rng, double tol,
                               int workers) {
  rng.validate();
  if (!(tol > 0.0))
    throw std::invalid_argument("tol: require a positive bisection tolerance");

  const auto net = [&](double delta) {
    return simulate_trigger_path(params, kind, delta, 0, 0, replications, rng, workers)
        .net_gain.mean;
  };

  double lo = 0.0;
  if (net(lo) <= 0.0) return 0.0;  // deviating does not even pay myopically

  constexpr double kDeltaCap = 0.99;
  double hi = 0.5;
  double hi_val = net(hi);
  while (hi_val > 0.0) {
    if (hi >= kDeltaCap)
      throw InfeasibleError(
          "no discount factor up to 0.99 deters the deviation for these parameters");
    lo = hi;
    hi = std::min(kDeltaCap, hi + 0.5 * (1.0 - hi));
    hi_val = net(hi);
  }

  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (net(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace cbs
