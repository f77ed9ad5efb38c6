#pragma once

// Ex-ante welfare and investor payoffs for the three canonical profiles,
// evaluated in closed form. Society's welfare always uses its own gap weight
// alpha, whatever weight the acting policymaker carries.

#include "model.hpp"
#include "profile.hpp"

namespace cbs {

struct WelfareReport {
  double welfare;            // minus society's expected loss
  double investor_payoff;    // ex-ante expected utility of one investor
  double mean_distortion;    // E[rate] minus the competitive-benchmark mean
  double residual_variance;  // information lost to coarse messaging
};

// Price-taking benchmark under full revelation.
WelfareReport competitive_values(const GameParams& params);

// Finite market, transparent disclosure, banker weight alpha_tilde.
WelfareReport transparent_oligopoly_welfare(const GameParams& params, BankerWeight weight);

// Finite market, most informative partition communication supportable at
// alpha_tilde. Reduces to the transparent report when the bias is
// numerically zero (fully revealing regime).
WelfareReport cheap_talk_welfare(const GameParams& params, BankerWeight weight);

// Report for an explicit profile: uses the profile's own banker weight, bias
// and communication rule. For the three canonical profiles this routes to the
// closed forms above.
WelfareReport profile_welfare_report(const StrategyProfile& profile,
                                     const GameParams& params);

// Signed closed-form gaps of the transparent oligopoly (at weight alpha)
// against the competitive benchmark.
double transparent_welfare_gap(const GameParams& params);   // <= 0
double transparent_investor_gain(const GameParams& params); // >= 0

}  // namespace cbs
