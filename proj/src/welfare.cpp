#include "welfare.hpp"

#include <stdexcept>

#include "cheap_talk.hpp"
#include "static_game.hpp"

namespace cbs {

namespace {

// Welfare and payoff for any symmetric profile where positions equal the
// induced conditional mean plus a constant bias d and the rate follows the
// optimal rule for weight at:
//   W  = -1/2 [ (1-a) at^2 + a (1-at)^2 ] (shat2 + s2 + d^2)
//   EU = -1/2 (1-at)^2 (shat2 + s2 + d^2) - at beta d
WelfareReport closed_form_report(const GameParams& params, double at, double d,
                                 double shat2) {
  const double a = params.alpha;
  const double s2 = params.var2();
  const double spread = shat2 + s2 + d * d;
  WelfareReport out{};
  out.welfare = -0.5 * ((1.0 - a) * at * at + a * (1.0 - at) * (1.0 - at)) * spread;
  out.investor_payoff = -0.5 * (1.0 - at) * (1.0 - at) * spread - at * params.beta * d;
  out.mean_distortion = at * d;
  out.residual_variance = shat2;
  return out;
}

}  // namespace

WelfareReport competitive_values(const GameParams& params) {
  return closed_form_report(params, params.alpha, 0.0, 0.0);
}

WelfareReport transparent_oligopoly_welfare(const GameParams& params, BankerWeight weight) {
  const double d = investment_bias(params, weight);
  return closed_form_report(params, weight.alpha_tilde, d, 0.0);
}

WelfareReport cheap_talk_welfare(const GameParams& params, BankerWeight weight) {
  const double d = investment_bias(params, weight);
  const double shat2 = most_informative_residual_variance(params, weight);
  return closed_form_report(params, weight.alpha_tilde, d, shat2);
}

WelfareReport profile_welfare_report(const StrategyProfile& profile,
                                     const GameParams& params) {
  double shat2 = 0.0;
  if (profile.communication.kind == CommunicationKind::partition)
    shat2 = residual_variance(profile.communication.partition, params.phi1);
  switch (profile.kind) {
    case ProfileKind::competitive:
    case ProfileKind::oligopoly_transparent:
    case ProfileKind::oligopoly_cheap_talk:
      return closed_form_report(params, profile.banker.alpha_tilde,
                                profile.investment_bias, shat2);
  }
  throw std::invalid_argument("unknown profile kind");
}

double transparent_welfare_gap(const GameParams& params) {
  const double a = params.alpha;
  const double n = static_cast<double>(params.n_investors);
  const double den = (n - a) * (n - a) * (1.0 - a);
  return -a * a * a * params.beta * params.beta / (2.0 * den);
}

double transparent_investor_gain(const GameParams& params) {
  const double a = params.alpha;
  const double n = static_cast<double>(params.n_investors);
  const double den = 2.0 * (n - a) * (n - a) * (1.0 - a);
  return (2.0 * n - 1.0 - a) * a * a * params.beta * params.beta / den;
}

}  // namespace cbs
