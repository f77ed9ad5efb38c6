#include "banker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cheap_talk.hpp"
#include "errors.hpp"
#include "optimize.hpp"
#include "static_game.hpp"
#include "welfare.hpp"

namespace cbs {

namespace {

constexpr double kArgTol = 1e-10;     // bracket tolerance on the weight
constexpr int kMaxPieces = 512;       // explicit smooth pieces before grid fallback
constexpr int kPiecePresample = 33;   // per-piece seeding grid
constexpr int kTailPresample = 2049;  // fallback grid for the accumulated-kink tail

double feasibility_index(const GameParams& p, double at) {
  // phi1 / |d(at)|: the supportable cell count solves P(P-1) < this.
  // Strictly decreasing in at on (0,1).
  const double n = static_cast<double>(p.n_investors);
  return p.phi1 * (n - at) * (1.0 - at) / (at * p.beta);
}

// Weight at which |d| crosses `target` (|d| strictly increases in the weight).
double weight_for_bias(const GameParams& p, double target, double hi) {
  double lo = 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (absolute_bias(p, BankerWeight(mid)) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Weight where the supportable cell count steps from P to P-1, i.e. the root
// of feasibility_index(at) = P(P-1) inside (lo, hi).
double transition_weight(const GameParams& p, double pp1, double lo, double hi) {
  for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (feasibility_index(p, mid) > pp1)
      lo = mid;  // still supports P cells
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

DelegationSolution finish(const GameParams& p, DelegationMode mode, double at_star) {
  DelegationSolution out;
  out.mode = mode;
  out.alpha_tilde_star = at_star;
  const BankerWeight w(at_star);
  if (mode == DelegationMode::transparent) {
    const WelfareReport r = transparent_oligopoly_welfare(p, w);
    out.society_welfare = r.welfare;
    out.market_payoff = r.investor_payoff;
  } else {
    const WelfareReport r = cheap_talk_welfare(p, w);
    out.society_welfare = r.welfare;
    out.market_payoff = r.investor_payoff;
  }
  return out;
}

}  // namespace

DelegationSolution optimal_banker_transparent(const GameParams& params) {
  auto objective = [&](double at) {
    return transparent_oligopoly_welfare(params, BankerWeight(at)).welfare;
  };
  const OptimizeResult r =
      grid_refined_maximum(objective, 0.0, params.alpha, 65, kArgTol);
  return finish(params, DelegationMode::transparent, r.arg);
}

DelegationSolution optimal_banker_cheap_talk(const GameParams& params) {
  auto objective = [&](double at) {
    return cheap_talk_welfare(params, BankerWeight(at)).welfare;
  };
  const double hi = params.alpha;

  // Breakpoints of the piecewise-smooth objective: the upper edge of the
  // numerically-fully-revealing region, then every weight where the
  // supportable cell count steps down by one.
  std::vector<std::pair<double, double>> pieces;  // [lo, hi] smooth segments
  double tail_lo = -1.0, tail_hi = -1.0;          // unresolved kink-dense segment

  if (absolute_bias(params, BankerWeight(hi)) < kFullRevelationBiasFloor) {
    pieces.emplace_back(0.0, hi);  // fully revealing everywhere: one smooth piece
  } else {
    const double zero_hi = weight_for_bias(params, kFullRevelationBiasFloor, hi);
    if (zero_hi > 0.0) pieces.emplace_back(0.0, zero_hi);

    const PartitionCount at_alpha = max_partitions(params, BankerWeight(hi));
    std::int64_t pcount = at_alpha.unbounded ? 1 : at_alpha.value;
    double upper = hi;
    int made = 0;
    while (upper > zero_hi && made < kMaxPieces) {
      const double next_pp1 =
          static_cast<double>(pcount + 1) * static_cast<double>(pcount);
      double lower;
      if (feasibility_index(params, std::max(zero_hi, 1e-300)) <= next_pp1) {
        lower = zero_hi;  // no further step inside the bracket
      } else {
        lower = transition_weight(params, next_pp1, zero_hi, upper);
      }
      pieces.emplace_back(std::max(lower, zero_hi), upper);
      ++made;
      if (lower <= zero_hi) {
        upper = zero_hi;
        break;
      }
      upper = lower;
      ++pcount;
    }
    if (upper > zero_hi) {
      // Step points accumulate faster than the piece budget: sweep the
      // remainder on a dense grid (kinks there have vanishing amplitude).
      tail_lo = zero_hi;
      tail_hi = upper;
    }
  }

  struct Segment {
    double lo, hi;
    int presample;
  };
  std::vector<Segment> segments;
  segments.reserve(pieces.size() + 1);
  for (const auto& [lo, up] : pieces)
    if (up - lo > 0.0) segments.push_back({lo, up, kPiecePresample});
  if (tail_lo >= 0.0 && tail_hi - tail_lo > 0.0)
    segments.push_back({tail_lo, tail_hi, kTailPresample});
  // scan lowest weight first so exact ties resolve toward the smaller weight
  std::sort(segments.begin(), segments.end(),
            [](const Segment& a, const Segment& b) { return a.lo < b.lo; });

  double best_arg = 0.0;
  double best_val = -std::numeric_limits<double>::infinity();
  auto consider = [&](double arg, double val) {
    if (val > best_val) {
      best_val = val;
      best_arg = arg;
    }
  };
  for (const Segment& s : segments) {
    if (s.hi - s.lo <= kArgTol) {
      const double mid = 0.5 * (s.lo + s.hi);
      consider(mid, objective(mid));
      continue;
    }
    const OptimizeResult r =
        grid_refined_maximum(objective, s.lo, s.hi, s.presample, kArgTol);
    consider(r.arg, r.value);
  }
  if (!std::isfinite(best_val))
    throw NumericalError("delegation objective produced no finite value");
  return finish(params, DelegationMode::cheap_talk, best_arg);
}

BabblingMonopolyReport babbling_monopoly_check(const GameParams& params) {
  if (params.n_investors != 1)
    throw std::invalid_argument("babbling_monopoly_check requires a single-investor market");
  const double a = params.alpha;
  const double one_m = 1.0 - a;
  BabblingMonopolyReport out;
  out.ratio = a * params.beta / (one_m * one_m);
  const PartitionCount pbar = max_partitions(params, BankerWeight(a));
  out.babbles_under_unbiased = !pbar.unbounded && pbar.value == 1;
  const double s2 = params.var2();
  const double bab_var = params.phi1 * params.phi1 / 3.0;
  out.eu_unbiased = -0.5 * one_m * one_m * (bab_var + s2 - out.ratio * out.ratio);
  out.eu_kitish = -0.5 * s2;
  out.condition_lhs = bab_var - out.ratio * out.ratio;
  out.condition_rhs = (1.0 - one_m * one_m) / (one_m * one_m) * s2;
  out.kitish_preferred = out.condition_lhs > out.condition_rhs;
  return out;
}

const char* monotonicity_name(Monotonicity m) {
  switch (m) {
    case Monotonicity::constant: return "constant";
    case Monotonicity::strictly_increasing: return "strictly_increasing";
    case Monotonicity::strictly_decreasing: return "strictly_decreasing";
    case Monotonicity::non_decreasing: return "non_decreasing";
    case Monotonicity::non_increasing: return "non_increasing";
    case Monotonicity::none: return "none";
  }
  return "none";
}

ScanDimension parse_scan_dimension(const std::string& name) {
  if (name == "alpha") return ScanDimension::alpha;
  if (name == "beta") return ScanDimension::beta;
  if (name == "N" || name == "n" || name == "n_investors") return ScanDimension::n_investors;
  if (name == "phi1") return ScanDimension::phi1;
  if (name == "phi2") return ScanDimension::phi2;
  throw std::invalid_argument("unknown scan dimension '" + name +
                              "' (use alpha, beta, n_investors, phi1 or phi2)");
}

const char* scan_dimension_name(ScanDimension d) {
  switch (d) {
    case ScanDimension::alpha: return "alpha";
    case ScanDimension::beta: return "beta";
    case ScanDimension::n_investors: return "n_investors";
    case ScanDimension::phi1: return "phi1";
    case ScanDimension::phi2: return "phi2";
  }
  return "alpha";
}

const std::array<const char*, ScanTable::kColumns> ScanTable::column_names = {
    "bias",          "p_bar",         "residual_variance", "w_competitive",
    "w_transparent", "w_cheap_talk",  "alpha_tilde_tr",    "alpha_tilde_ct"};

namespace {

GameParams substitute(const GameParams& base, ScanDimension dim, double v) {
  switch (dim) {
    case ScanDimension::alpha:
      return GameParams(v, base.beta, base.n_investors, base.phi1, base.phi2);
    case ScanDimension::beta:
      return GameParams(base.alpha, v, base.n_investors, base.phi1, base.phi2);
    case ScanDimension::n_investors: {
      const double r = std::round(v);
      if (std::fabs(v - r) > 1e-9 || r < 1.0)
        throw std::invalid_argument("n_investors grid values must be integers >= 1");
      return GameParams(base.alpha, base.beta, static_cast<int>(r), base.phi1, base.phi2);
    }
    case ScanDimension::phi1:
      return GameParams(base.alpha, base.beta, base.n_investors, v, base.phi2);
    case ScanDimension::phi2:
      return GameParams(base.alpha, base.beta, base.n_investors, base.phi1, v);
  }
  throw std::invalid_argument("unknown scan dimension");
}

Monotonicity classify(std::span<const double> column) {
  if (column.size() < 2) return Monotonicity::constant;
  double scale = 1.0;
  for (double v : column) scale = std::max(scale, std::fabs(v));
  const double tol = 1e-12 * scale;
  bool any_up = false, any_down = false, strict_up = true, strict_down = true;
  for (size_t i = 0; i + 1 < column.size(); ++i) {
    const double diff = column[i + 1] - column[i];
    if (diff > tol) any_up = true;
    if (diff < -tol) any_down = true;
    if (!(diff > tol)) strict_up = false;
    if (!(diff < -tol)) strict_down = false;
  }
  if (!any_up && !any_down) return Monotonicity::constant;
  if (strict_up) return Monotonicity::strictly_increasing;
  if (strict_down) return Monotonicity::strictly_decreasing;
  if (!any_down) return Monotonicity::non_decreasing;
  if (!any_up) return Monotonicity::non_increasing;
  return Monotonicity::none;
}

}  // namespace

ScanTable comparative_statics_scan(const GameParams& base, ScanDimension dimension,
                                   std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("scan grid must be non-empty");
  ScanTable table;
  table.dimension = dimension;
  table.rows.reserve(grid.size());
  for (double v : grid) {
    const GameParams p = substitute(base, dimension, v);
    const BankerWeight society(p.alpha);
    ScanRow row;
    row.grid_value = v;
    row.bias = investment_bias(p, society);
    const PartitionCount pbar = max_partitions(p, society);
    row.p_bar = pbar.unbounded ? -1 : pbar.value;
    row.residual_variance = most_informative_residual_variance(p, society);
    row.w_competitive = competitive_values(p).welfare;
    row.w_transparent = transparent_oligopoly_welfare(p, society).welfare;
    row.w_cheap_talk = cheap_talk_welfare(p, society).welfare;
    row.alpha_tilde_tr = optimal_banker_transparent(p).alpha_tilde_star;
    row.alpha_tilde_ct = optimal_banker_cheap_talk(p).alpha_tilde_star;
    table.rows.push_back(row);
  }
  for (int c = 0; c < ScanTable::kColumns; ++c) {
    std::vector<double> col;
    col.reserve(table.rows.size());
    for (const ScanRow& r : table.rows) {
      switch (c) {
        case 0: col.push_back(r.bias); break;
        case 1:
          // treat the fully revealing regime as the upper limit of the count
          col.push_back(r.p_bar < 0 ? std::numeric_limits<double>::infinity()
                                    : static_cast<double>(r.p_bar));
          break;
        case 2: col.push_back(r.residual_variance); break;
        case 3: col.push_back(r.w_competitive); break;
        case 4: col.push_back(r.w_transparent); break;
        case 5: col.push_back(r.w_cheap_talk); break;
        case 6: col.push_back(r.alpha_tilde_tr); break;
        case 7: col.push_back(r.alpha_tilde_ct); break;
      }
    }
    table.flags[static_cast<size_t>(c)] = classify(col);
  }
  return table;
}

}  // namespace cbs
