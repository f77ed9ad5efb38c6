#pragma once

// Primitives of the rate-setting game: parameters, shocks, market state,
// stage payoffs and the optimal policy rule.

#include <span>
#include <vector>

namespace cbs {

// Deep parameters. alpha is society's weight on the market-gap term of the
// policymaker's loss, beta the investors' direct exposure to the rate level,
// n_investors the number of strategic investors, phi1/phi2 the half-widths of
// the uniform supports of the early and late shocks.
struct GameParams {
  double alpha;
  double beta;
  int n_investors;
  double phi1;
  double phi2;

  GameParams(double alpha, double beta, int n_investors, double phi1, double phi2);

  double var1() const { return phi1 * phi1 / 3.0; }  // Var of the early shock
  double var2() const { return phi2 * phi2 / 3.0; }  // Var of the late shock
};

// Gap weight of the (possibly delegated) policymaker. 0 ("kitish") puts all
// weight on stabilization; values below society's alpha are rate-hawkish
// toward the market gap.
struct BankerWeight {
  double alpha_tilde;

  explicit BankerWeight(double alpha_tilde);
};

// Early shock (observed privately by the policymaker before communicating)
// and late shock (realized after investments are locked in).
struct ShockPair {
  double omega1;
  double omega2;

  double total() const { return omega1 + omega2; }
};

// Investment positions of the strategic investors.
struct MarketState {
  std::vector<double> positions;

  double mean_position() const;  // throws on an empty market
};

// Stage payoff of one investor holding `position` when the realized rate is
// `rate`: quadratic repositioning loss plus the direct rate exposure.
double investor_payoff(double position, double rate, double beta);

// Policymaker's stage loss: stabilization gap weighted 1 - alpha_tilde plus
// the average squared distance to investor positions weighted alpha_tilde.
double cb_loss(std::span<const double> positions, double rate, double omega,
               BankerWeight weight);

// Loss-minimizing rate given the fundamental omega and the mean position.
double policy_rule(double omega, double mean_position, BankerWeight weight);

// Slope of the optimal rate in the late shock, 1 - alpha_tilde. Requires an
// interior weight so the strict inequalities 0 < slope < 1 hold.
double underreaction_slope(BankerWeight weight);

// Forward-difference probe of the same slope through policy_rule.
double underreaction_slope_fd(double omega, double mean_position,
                              BankerWeight weight, double step = 1e-6);

}  // namespace cbs
