#include <cmath>
#include <random>
#include <stdexcept>

#include "cheap_talk.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "model.hpp"
#include "repeated.hpp"
#include "sim.hpp"
#include "static_game.hpp"
#include "support.hpp"
#include "welfare.hpp"

using namespace cbs;
using test_support::random_params;

namespace {

const RngSpec kRng{987654321, kRngAlgorithm};

// Closed form the mimicry gain must reproduce (the library reads it off the
// deviation oracle instead of assuming it).
double mimicry_gain_closed_form(const GameParams& p) {
  const double z = p.alpha * p.beta * (p.n_investors - 1) /
                   ((1.0 - p.alpha) * (p.n_investors - p.alpha));
  return 0.5 * z * z;
}

}  // namespace

TEST_CASE("discipline threshold at the wide-support reference point is 1/71") {
  const GameParams p(0.5, 1.0, 2, 10.0, 1.0);
  const TriggerEquilibrium eq = discipline_threshold(p);
  CHECK(eq.feasible);
  CHECK(std::fabs(eq.delta_star - 1.0 / 71.0) < 1e-6);
  CHECK(eq.one_shot_gain == doctest::Approx(0.5 * std::pow(0.5 / 1.5, 2)).epsilon(1e-12));
  // the threshold reproduces the gain / (gain + surplus) identity
  const double surplus = eq.path_stage_payoff - eq.punish_stage_payoff;
  CHECK(eq.delta_star ==
        doctest::Approx(eq.one_shot_gain / (eq.one_shot_gain + surplus)).epsilon(1e-12));
}

TEST_CASE("discipline is infeasible on a narrow support, with the exact bound") {
  const GameParams p(0.5, 1.0, 2, 1.0, 1.0);
  const TriggerEquilibrium eq = discipline_threshold(p);
  CHECK_FALSE(eq.feasible);
  CHECK(std::isnan(eq.delta_star));
  const double bound = discipline_phi1_bound(p);
  CHECK(bound == doctest::Approx(2.0 / 3.0 * std::sqrt(15.0)).epsilon(1e-12));

  // feasibility flips exactly at the bound
  const GameParams just_above(0.5, 1.0, 2, bound * (1.0 + 1e-6), 1.0);
  const GameParams just_below(0.5, 1.0, 2, bound * (1.0 - 1e-6), 1.0);
  CHECK(discipline_threshold(just_above).feasible);
  CHECK_FALSE(discipline_threshold(just_below).feasible);
}

TEST_CASE("first-best collusion: frozen threshold and variance-floor flip") {
  const GameParams p(0.2, 0.5, 5, 1.0, 1.0);
  const TriggerEquilibrium eq = collusion_first_best_threshold(p);
  CHECK(eq.feasible);
  CHECK(std::fabs(eq.delta_star - 0.0652742) < 1e-6);
  const double bound = collusion_first_best_variance_bound(p);
  CHECK(std::fabs(bound - 0.0074598) < 1e-6);
  CHECK(most_informative_residual_variance(p, BankerWeight(p.alpha)) > bound);

  // shrink the early support until the static equilibrium reveals too much
  const GameParams narrow(0.2, 0.5, 5, 0.1, 1.0);
  CHECK(most_informative_residual_variance(narrow, BankerWeight(0.2)) <
        collusion_first_best_variance_bound(narrow));
  CHECK_FALSE(collusion_first_best_threshold(narrow).feasible);
  CHECK(std::isnan(collusion_first_best_threshold(narrow).delta_star));
}

TEST_CASE("feasibility equals the variance-floor comparison on random draws") {
  std::mt19937_64 gen(89);
  for (int trial = 0; trial < 60; ++trial) {
    const GameParams p = random_params(gen);
    if (p.beta < 0.05) continue;
    const double sigma_hat =
        most_informative_residual_variance(p, BankerWeight(p.alpha));
    const TriggerEquilibrium eq = collusion_first_best_threshold(p);
    CHECK(eq.feasible == (sigma_hat > collusion_first_best_variance_bound(p)));
    if (eq.feasible) {
      CHECK(eq.delta_star > 0.0);
      CHECK(eq.delta_star < 1.0);
    }
  }
}

TEST_CASE("one-shot gains: closed form for reversion kinds, oracle for mimicry") {
  std::mt19937_64 gen(97);
  for (int trial = 0; trial < 20; ++trial) {
    GameParams p = random_params(gen);
    if (p.n_investors < 2)
      p = GameParams(p.alpha, p.beta, 2, p.phi1, p.phi2);
    const double competitive_gain =
        0.5 * std::pow(p.alpha * p.beta / (p.n_investors - p.alpha), 2);
    CHECK(discipline_threshold(p).one_shot_gain ==
          doctest::Approx(competitive_gain).epsilon(1e-12));
    CHECK(collusion_first_best_threshold(p).one_shot_gain ==
          doctest::Approx(competitive_gain).epsilon(1e-12));
    CHECK(std::fabs(collusion_monopoly_threshold(p).one_shot_gain -
                    mimicry_gain_closed_form(p)) < 1e-8);
  }
  // the pinned mimicry example: 2/9 at two investors
  const GameParams two(0.5, 1.0, 2, 1.0, 1.0);
  CHECK(std::fabs(collusion_monopoly_threshold(two).one_shot_gain - 2.0 / 9.0) < 1e-8);
}

TEST_CASE("mimicry needs a market: single-investor calls are rejected") {
  const GameParams solo(0.5, 1.0, 1, 1.0, 1.0);
  CHECK_THROWS_AS(collusion_monopoly_threshold(solo), std::invalid_argument);
  CHECK_THROWS_AS(simulate_trigger_path(solo, TriggerKind::collusion_monopoly, 0.5, 0, 0,
                                        100, kRng),
                  std::invalid_argument);
  CHECK_NOTHROW(discipline_threshold(solo));
}

TEST_CASE("mimicry path carries the single-market partition and bias") {
  const GameParams p(0.2, 0.5, 5, 1.0, 1.0);
  const StrategyProfile path = trigger_path_profile(p, TriggerKind::collusion_monopoly);
  const GameParams mono(p.alpha, p.beta, 1, p.phi1, p.phi2);
  CHECK(path.investment_bias ==
        doctest::Approx(investment_bias(mono, BankerWeight(p.alpha))).epsilon(1e-13));
  REQUIRE(path.communication.kind == CommunicationKind::partition);
  // the mimicked partition is an exact equilibrium of the single-market game
  CHECK(verify_partition(path.communication.partition, mono, BankerWeight(p.alpha)) <
        1e-10);
  const PartitionCount mono_count = max_partitions(mono, BankerWeight(p.alpha));
  REQUIRE_FALSE(mono_count.unbounded);
  CHECK(path.communication.partition.cells() == mono_count.value);
}

TEST_CASE("mimicry existence matches the informativeness-loss inequality") {
  std::mt19937_64 gen(101);
  int feasible_seen = 0, infeasible_seen = 0;
  for (int trial = 0; trial < 60; ++trial) {
    GameParams p = random_params(gen);
    if (p.n_investors < 2) p = GameParams(p.alpha, p.beta, 3, p.phi1, p.phi2);
    if (p.beta < 0.05) continue;
    const GameParams mono(p.alpha, p.beta, 1, p.phi1, p.phi2);
    const double sig_mono =
        most_informative_residual_variance(mono, BankerWeight(p.alpha));
    const double sig_market =
        most_informative_residual_variance(p, BankerWeight(p.alpha));
    const double dm = p.alpha * p.beta / std::pow(1.0 - p.alpha, 2);
    const double dn = p.alpha * p.beta / ((p.n_investors - p.alpha) * (1.0 - p.alpha));
    const double rhs = dm * dm - dn * dn * (2.0 * p.n_investors - 1.0 - p.alpha) /
                                      (1.0 - p.alpha);
    const TriggerEquilibrium eq = collusion_monopoly_threshold(p);
    CHECK(eq.feasible == (sig_mono - sig_market < rhs));
    if (eq.feasible) {
      CHECK(eq.delta_star > 0.0);
      CHECK(eq.delta_star < 1.0);
      ++feasible_seen;
    } else {
      CHECK(std::isnan(eq.delta_star));
      ++infeasible_seen;
    }
  }
  CHECK(feasible_seen > 0);
  CHECK(infeasible_seen > 0);
}

TEST_CASE("kind dispatch matches the dedicated entry points") {
  const GameParams p(0.3, 0.8, 4, 1.5, 1.0);
  CHECK(trigger_threshold(p, TriggerKind::discipline).delta_star ==
        discipline_threshold(p).delta_star);
  CHECK(trigger_threshold(p, TriggerKind::collusion_first_best).punish_stage_payoff ==
        collusion_first_best_threshold(p).punish_stage_payoff);
  CHECK(trigger_threshold(p, TriggerKind::collusion_monopoly).one_shot_gain ==
        collusion_monopoly_threshold(p).one_shot_gain);
}

TEST_CASE("stage payoffs on path and punishment match the closed-form reports") {
  const GameParams p(0.5, 1.0, 2, 10.0, 1.0);
  const TriggerEquilibrium eq = discipline_threshold(p);
  CHECK(eq.path_stage_payoff ==
        doctest::Approx(competitive_values(p).investor_payoff).epsilon(1e-12));
  // babbling reversion: full prior variance with the one-shot bias
  const WelfareReport punish =
      profile_welfare_report(trigger_punish_profile(p, TriggerKind::discipline), p);
  CHECK(eq.punish_stage_payoff == doctest::Approx(punish.investor_payoff).epsilon(1e-12));
  CHECK(punish.residual_variance == doctest::Approx(p.var1()).epsilon(1e-12));

  const TriggerEquilibrium fb = collusion_first_best_threshold(p);
  CHECK(fb.punish_stage_payoff ==
        doctest::Approx(cheap_talk_welfare(p, BankerWeight(p.alpha)).investor_payoff)
            .epsilon(1e-12));
}

TEST_CASE("preference: joint mimicry wins when the mimicked partition is sharp") {
  // babbling mimicry but a huge bias threshold: collusion still preferred
  const GameParams coarse(0.5, 1.0, 2, 0.5, 1.0);
  const PreferenceReport a = investor_equilibrium_preference(coarse);
  CHECK(a.sigma_hat_monopoly == doctest::Approx(0.25 / 3.0).epsilon(1e-12));
  CHECK(a.threshold == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(a.monopoly_preferred);
  CHECK_FALSE(a.first_best_preferred);

  // near-competitive stakes: the lost information dominates the tiny bias
  const GameParams sharp(0.05, 0.1, 4, 1.0, 1.0);
  const PreferenceReport b = investor_equilibrium_preference(sharp);
  CHECK(std::fabs(b.threshold - 3.07e-5) < 1e-6);
  CHECK(std::fabs(b.sigma_hat_monopoly - 0.0036912) < 1e-6);
  CHECK(b.first_best_preferred);
  CHECK_FALSE(b.monopoly_preferred);

  // no exposure, no conflict: exact knife edge reports a tie
  const GameParams knife(0.4, 0.0, 3, 1.0, 1.0);
  const PreferenceReport c = investor_equilibrium_preference(knife);
  CHECK_FALSE(c.monopoly_preferred);
  CHECK_FALSE(c.first_best_preferred);
  CHECK(c.first_best_stage_payoff == doctest::Approx(c.monopoly_stage_payoff).epsilon(1e-14));

  // the flag always agrees with the payoff comparison it summarizes
  std::mt19937_64 gen(103);
  for (int trial = 0; trial < 40; ++trial) {
    const GameParams p = random_params(gen);
    const PreferenceReport r = investor_equilibrium_preference(p);
    CHECK(r.monopoly_preferred ==
          (r.monopoly_stage_payoff > r.first_best_stage_payoff));
    CHECK(r.first_best_stage_payoff ==
          doctest::Approx(competitive_values(p).investor_payoff).epsilon(1e-12));
  }
}

TEST_CASE("minimal horizon hits the discount tail exactly") {
  CHECK(minimal_horizon(0.0) == 1);
  for (double delta : {0.01, 0.25, 0.5, 0.9, 0.99}) {
    const std::int64_t h = minimal_horizon(delta);
    CHECK(std::pow(delta, static_cast<double>(h)) < kDiscountTail);
    CHECK(std::pow(delta, static_cast<double>(h - 1)) >= kDiscountTail);
  }
  CHECK_THROWS_AS(minimal_horizon(0.9999999), std::invalid_argument);
  CHECK_THROWS_AS(minimal_horizon(1.0), std::invalid_argument);
  CHECK_THROWS_AS(minimal_horizon(-0.1), std::invalid_argument);
}

TEST_CASE("stream input validation") {
  const GameParams p(0.5, 1.0, 2, 10.0, 1.0);
  CHECK_THROWS_AS(
      simulate_trigger_path(p, TriggerKind::discipline, 1.0, 0, 0, 100, kRng),
      std::invalid_argument);
  CHECK_THROWS_AS(
      simulate_trigger_path(p, TriggerKind::discipline, 0.5, 0, 5, 100, kRng),
      std::invalid_argument);  // delta^5 is far above the tail bound
  CHECK_THROWS_AS(
      simulate_trigger_path(p, TriggerKind::discipline, 0.5, 40, 35, 100, kRng),
      std::invalid_argument);  // deviation beyond the horizon
  CHECK_THROWS_AS(trigger_bisection_delta(p, TriggerKind::discipline, 100, kRng, 0.0),
                  std::invalid_argument);
}

TEST_CASE("never deviating makes both streams identical") {
  const GameParams p(0.5, 1.0, 2, 10.0, 1.0);
  const TriggerStreamResult r =
      simulate_trigger_path(p, TriggerKind::discipline, 0.3, -1, 0, 20000, kRng, 2);
  CHECK(r.net_gain.mean == 0.0);
  CHECK(r.net_gain.std_error == 0.0);
  CHECK(r.no_deviation.mean == r.with_deviation.mean);
  // the stream reproduces the discounted stage value of the cooperative path
  const double stage = competitive_values(p).investor_payoff;
  const double geo = (1.0 - std::pow(0.3, static_cast<double>(r.horizon))) / 0.7;
  CHECK(std::fabs(r.no_deviation.mean - stage * geo) < 4.0 * r.no_deviation.std_error);
}

TEST_CASE("at delta zero the stream reduces to the one-shot deviation gain") {
  const GameParams p(0.5, 1.0, 2, 10.0, 1.0);
  const TriggerEquilibrium eq = discipline_threshold(p);
  const TriggerStreamResult r =
      simulate_trigger_path(p, TriggerKind::discipline, 0.0, 0, 0, 100000, kRng, 2);
  CHECK(r.horizon == 1);
  CHECK(std::fabs(r.net_gain.mean - eq.one_shot_gain) <
        3.5 * r.net_gain.std_error + 1e-12);
}

TEST_CASE("deterrence flips sign across the critical discount factor") {
  const GameParams p(0.5, 1.0, 2, 10.0, 1.0);
  const double ds = discipline_threshold(p).delta_star;
  const TriggerStreamResult below = simulate_trigger_path(
      p, TriggerKind::discipline, ds - 0.01, 0, 0, 100000, kRng, 2);
  const TriggerStreamResult above = simulate_trigger_path(
      p, TriggerKind::discipline, ds + 0.01, 0, 0, 100000, kRng, 2);
  CHECK(below.net_gain.mean > 3.0 * below.net_gain.std_error);
  CHECK(above.net_gain.mean < -3.0 * above.net_gain.std_error);

  const GameParams q(0.2, 0.5, 5, 1.0, 1.0);
  const double ds_fb = collusion_first_best_threshold(q).delta_star;
  const TriggerStreamResult fb_below = simulate_trigger_path(
      q, TriggerKind::collusion_first_best, ds_fb - 0.03, 0, 0, 400000, kRng, 4);
  const TriggerStreamResult fb_above = simulate_trigger_path(
      q, TriggerKind::collusion_first_best, ds_fb + 0.03, 0, 0, 400000, kRng, 4);
  CHECK(fb_below.net_gain.mean > 2.5 * fb_below.net_gain.std_error);
  CHECK(fb_above.net_gain.mean < -2.5 * fb_above.net_gain.std_error);
}

TEST_CASE("streams are bit-identical across worker counts") {
  const GameParams p(0.5, 1.0, 2, 10.0, 1.0);
  const TriggerStreamResult one =
      simulate_trigger_path(p, TriggerKind::discipline, 0.2, 1, 0, 20000, kRng, 1);
  const TriggerStreamResult four =
      simulate_trigger_path(p, TriggerKind::discipline, 0.2, 1, 0, 20000, kRng, 4);
  CHECK(one.no_deviation.mean == four.no_deviation.mean);
  CHECK(one.with_deviation.mean == four.with_deviation.mean);
  CHECK(one.net_gain.mean == four.net_gain.mean);
  CHECK(one.net_gain.std_error == four.net_gain.std_error);
}

TEST_CASE("bisection recovers the closed-form threshold from streams alone") {
  const GameParams p(0.5, 1.0, 2, 10.0, 1.0);
  const double closed = discipline_threshold(p).delta_star;
  const double bisected =
      trigger_bisection_delta(p, TriggerKind::discipline, 400000, kRng, 1e-4, 4);
  CHECK(std::fabs(bisected - closed) < 1e-3);
}

TEST_CASE("bisection reports infeasibility instead of a fake threshold") {
  const GameParams p(0.5, 1.0, 2, 1.0, 1.0);  // below the phi1 bound
  CHECK_THROWS_AS(
      trigger_bisection_delta(p, TriggerKind::discipline, 20000, kRng, 1e-3, 2),
      InfeasibleError);
}

TEST_CASE("zero exposure: nothing to deter, threshold zero") {
  const GameParams p(0.4, 0.0, 3, 1.0, 1.0);
  const TriggerEquilibrium eq = discipline_threshold(p);
  CHECK(eq.feasible);
  CHECK(eq.delta_star == 0.0);
  CHECK(trigger_bisection_delta(p, TriggerKind::discipline, 1000, kRng, 1e-3) == 0.0);
}
