#pragma once

// One-shot equilibrium objects under transparent disclosure: the oligopoly
// investment bias, best responses, the investor payoff decomposition and the
// realized on-path rate.

#include "model.hpp"
#include "profile.hpp"

namespace cbs {

// Constant equilibrium investment bias d(alpha_tilde) <= 0: investors shade
// positions below the conditional mean to pull the rate down.
double investment_bias(const GameParams& params, BankerWeight weight);

// Optimal position of one investor given the conditional mean of the
// fundamental and the mean position of the other investors (ignored for a
// single-investor market).
double best_response_investment(const GameParams& params, BankerWeight weight,
                                double expected_omega1, double mean_other_positions);

// Ex-ante expected investor utility on the transparent oligopoly path, split
// into the unbiased-equivalent term, the losses from the position bias, and
// the gain from the induced rate distortion.
struct UtilityDecomposition {
  double unbiased_term;
  double readjustment_term;
  double distortion_term;

  double total() const { return unbiased_term + readjustment_term + distortion_term; }
};

UtilityDecomposition expected_utility_decomposition(const GameParams& params,
                                                    BankerWeight weight);

// Realized rate when shocks hit and everyone follows the profile.
double on_path_rate(const StrategyProfile& profile, const GameParams& params,
                    ShockPair shocks);

// Price-taking benchmark: unbiased positions under full revelation, society's
// own gap weight. Not an equilibrium for finite markets; the limit object as
// the market becomes competitive.
StrategyProfile competitive_profile(const GameParams& params);

// Finite-market equilibrium under transparent disclosure.
StrategyProfile transparent_oligopoly_profile(const GameParams& params,
                                              BankerWeight weight);

}  // namespace cbs
