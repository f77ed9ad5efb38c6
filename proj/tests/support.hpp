#pragma once

// Shared test helpers: parameter samplers and numerical differentiation.

#include <cmath>
#include <random>

#include "model.hpp"

namespace test_support {

// Draw interior parameter points away from the regime boundaries so finite
// differences and golden sections stay well conditioned.
inline cbs::GameParams random_params(std::mt19937_64& gen, int max_investors = 10) {
  std::uniform_real_distribution<double> alpha_dist(0.05, 0.9);
  std::uniform_real_distribution<double> beta_dist(0.05, 2.0);
  std::uniform_int_distribution<int> n_dist(1, max_investors);
  std::uniform_real_distribution<double> phi_dist(0.25, 2.5);
  return cbs::GameParams(alpha_dist(gen), beta_dist(gen), n_dist(gen), phi_dist(gen),
                         phi_dist(gen));
}

inline cbs::BankerWeight random_weight(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> dist(0.02, 0.9);
  return cbs::BankerWeight(dist(gen));
}

// Central difference with h tuned for ~1e-10 truncation error on smooth maps.
template <typename F>
double derivative(F&& f, double x, double h = 1e-5) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

template <typename F>
double second_derivative(F&& f, double x, double h = 1e-4) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

}  // namespace test_support
