#include "static_game.hpp"

#include <cmath>

#include "errors.hpp"

namespace cbs {

double investment_bias(const GameParams& params, BankerWeight weight) {
  const double at = weight.alpha_tilde;
  const double n = static_cast<double>(params.n_investors);
  return -at * params.beta / ((n - at) * (1.0 - at));
}

double best_response_investment(const GameParams& params, BankerWeight weight,
                                double expected_omega1, double mean_other_positions) {
  const double at = weight.alpha_tilde;
  const double n = static_cast<double>(params.n_investors);
  const double c = 1.0 - at / n;  // marginal effect of own position on the gap
  if (!(c > 0.0))
    throw NumericalError("degenerate best-response coefficient 1 - alpha_tilde/N <= 0");
  const double others = params.n_investors > 1
                            ? at * (n - 1.0) * mean_other_positions / n
                            : 0.0;
  return ((1.0 - at) * expected_omega1 + others - at * params.beta / (n * c)) / c;
}

UtilityDecomposition expected_utility_decomposition(const GameParams& params,
                                                    BankerWeight weight) {
  const double at = weight.alpha_tilde;
  const double d = investment_bias(params, weight);
  const double slope_sq = (1.0 - at) * (1.0 - at);
  UtilityDecomposition out{};
  out.unbiased_term = -0.5 * slope_sq * params.var2();
  out.readjustment_term = -0.5 * slope_sq * d * d;
  out.distortion_term = -at * params.beta * d;
  return out;
}

double on_path_rate(const StrategyProfile& profile, const GameParams& params,
                    ShockPair shocks) {
  if (std::fabs(shocks.omega1) > params.phi1 || std::fabs(shocks.omega2) > params.phi2)
    throw std::invalid_argument("shock realization outside its support");
  const double mean = profile.communication.conditional_mean(shocks.omega1) +
                      profile.investment_bias;
  return policy_rule(shocks.total(), mean, profile.banker);
}

StrategyProfile competitive_profile(const GameParams& params) {
  StrategyProfile p;
  p.kind = ProfileKind::competitive;
  p.banker = BankerWeight(params.alpha);
  p.communication = Communication::full_revelation();
  p.investment_bias = 0.0;
  return p;
}

StrategyProfile transparent_oligopoly_profile(const GameParams& params,
                                              BankerWeight weight) {
  StrategyProfile p;
  p.kind = ProfileKind::oligopoly_transparent;
  p.banker = weight;
  p.communication = Communication::full_revelation();
  p.investment_bias = investment_bias(params, weight);
  return p;
}

}  // namespace cbs
