#include "model.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cbs {

namespace {

[[noreturn]] void reject(const std::string& field, const std::string& rule, double got) {
  std::ostringstream os;
  os << field << " must " << rule << "; got " << got;
  throw std::invalid_argument(os.str());
}

}  // namespace

GameParams::GameParams(double alpha_, double beta_, int n_investors_, double phi1_,
                       double phi2_)
    : alpha(alpha_), beta(beta_), n_investors(n_investors_), phi1(phi1_), phi2(phi2_) {
  if (!(alpha > 0.0 && alpha < 1.0)) reject("alpha", "lie in the open interval (0,1)", alpha);
  if (!(beta >= 0.0)) reject("beta", "be non-negative", beta);
  if (n_investors < 1) reject("n_investors", "be an integer >= 1", n_investors);
  if (!(phi1 > 0.0)) reject("phi1", "be strictly positive", phi1);
  if (!(phi2 > 0.0)) reject("phi2", "be strictly positive", phi2);
  if (!std::isfinite(beta)) reject("beta", "be finite", beta);
  if (!std::isfinite(phi1)) reject("phi1", "be finite", phi1);
  if (!std::isfinite(phi2)) reject("phi2", "be finite", phi2);
}

BankerWeight::BankerWeight(double alpha_tilde_) : alpha_tilde(alpha_tilde_) {
  if (!(alpha_tilde >= 0.0 && alpha_tilde < 1.0))
    reject("alpha_tilde", "lie in [0,1)", alpha_tilde);
}

double MarketState::mean_position() const {
  if (positions.empty())
    throw std::invalid_argument("market state must contain at least one position");
  const double sum = std::accumulate(positions.begin(), positions.end(), 0.0);
  return sum / static_cast<double>(positions.size());
}

double investor_payoff(double position, double rate, double beta) {
  if (!(beta >= 0.0)) reject("beta", "be non-negative", beta);
  const double gap = position - rate;
  return -0.5 * gap * gap - beta * rate;
}

double cb_loss(std::span<const double> positions, double rate, double omega,
               BankerWeight weight) {
  if (positions.empty())
    throw std::invalid_argument("cb_loss needs at least one investor position");
  const double at = weight.alpha_tilde;
  const double stab = rate - omega;
  double gap_sq = 0.0;
  for (double x : positions) {
    const double g = rate - x;
    gap_sq += g * g;
  }
  const double n = static_cast<double>(positions.size());
  return 0.5 * (1.0 - at) * stab * stab + at / (2.0 * n) * gap_sq;
}

double policy_rule(double omega, double mean_position, BankerWeight weight) {
  const double at = weight.alpha_tilde;
  return (1.0 - at) * omega + at * mean_position;
}

double underreaction_slope(BankerWeight weight) {
  const double at = weight.alpha_tilde;
  if (!(at > 0.0 && at < 1.0))
    throw std::invalid_argument(
        "underreaction_slope requires an interior weight (0 < alpha_tilde < 1)");
  return 1.0 - at;
}

double underreaction_slope_fd(double omega, double mean_position, BankerWeight weight,
                              double step) {
  if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  const double hi = policy_rule(omega + step, mean_position, weight);
  const double lo = policy_rule(omega, mean_position, weight);
  return (hi - lo) / step;
}

}  // namespace cbs
