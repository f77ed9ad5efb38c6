#pragma once

// Optimal delegation: society picks the banker's gap weight to maximize its
// own welfare, under transparent disclosure or under partition communication.
// Also the single-investor babbling example and parameter sweeps.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "model.hpp"

namespace cbs {

enum class DelegationMode { transparent, cheap_talk };

struct DelegationSolution {
  DelegationMode mode = DelegationMode::transparent;
  double alpha_tilde_star = 0.0;  // optimal banker weight in [0, alpha]
  double society_welfare = 0.0;   // society's welfare at the optimum
  double market_payoff = 0.0;     // investors' expected utility at the optimum
};

// Maximize transparent-disclosure welfare over the banker weight.
DelegationSolution optimal_banker_transparent(const GameParams& params);

// Maximize welfare when the banker communicates through the most informative
// supportable partition. The objective is continuous and piecewise smooth in
// the weight (kinks where the supportable cell count steps); each smooth
// piece is searched separately and ties resolve toward the smaller weight.
DelegationSolution optimal_banker_cheap_talk(const GameParams& params);

// Single-investor market: when the unbiased banker can only babble, compare
// the market's payoff under it against a maximally kitish (weight-zero,
// fully revealing) banker.
struct BabblingMonopolyReport {
  double ratio = 0.0;                  // alpha beta / (1-alpha)^2
  bool babbles_under_unbiased = false; // most informative partition has one cell
  double eu_unbiased = 0.0;            // market payoff under the unbiased banker (babbling form)
  double eu_kitish = 0.0;              // market payoff under the weight-zero banker
  bool kitish_preferred = false;
  double condition_lhs = 0.0;          // phi1^2/3 - ratio^2
  double condition_rhs = 0.0;          // [1-(1-a)^2]/(1-a)^2 * Var(omega2)
};

BabblingMonopolyReport babbling_monopoly_check(const GameParams& params);

enum class ScanDimension { alpha, beta, n_investors, phi1, phi2 };

enum class Monotonicity {
  constant,
  strictly_increasing,
  strictly_decreasing,
  non_decreasing,
  non_increasing,
  none,
};

const char* monotonicity_name(Monotonicity m);
ScanDimension parse_scan_dimension(const std::string& name);  // accepts "N" alias
const char* scan_dimension_name(ScanDimension d);

// One grid point of a comparative-statics sweep. Static objects are evaluated
// at the society weight; the last two columns re-solve both delegation
// problems at that point.
struct ScanRow {
  double grid_value = 0.0;
  double bias = 0.0;
  std::int64_t p_bar = 0;  // -1 marks the unbounded (fully revealing) regime
  double residual_variance = 0.0;
  double w_competitive = 0.0;
  double w_transparent = 0.0;
  double w_cheap_talk = 0.0;
  double alpha_tilde_tr = 0.0;
  double alpha_tilde_ct = 0.0;
};

struct ScanTable {
  static constexpr int kColumns = 8;  // numeric columns after grid_value
  static const std::array<const char*, kColumns> column_names;

  ScanDimension dimension = ScanDimension::alpha;
  std::vector<ScanRow> rows;
  std::array<Monotonicity, kColumns> flags{};
};

ScanTable comparative_statics_scan(const GameParams& base, ScanDimension dimension,
                                   std::span<const double> grid);

}  // namespace cbs
