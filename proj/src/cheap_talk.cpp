#include "cheap_talk.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"
#include "static_game.hpp"

namespace cbs {

namespace {

// Cells with more members than this cannot be materialized as cutoff arrays;
// closed forms cover every quantity needed in that regime.
constexpr std::int64_t kMaxMaterializedCells = 10'000'000;

}  // namespace

double absolute_bias(const GameParams& params, BankerWeight weight) {
  return std::fabs(investment_bias(params, weight));
}

double normalized_bias(const GameParams& params, BankerWeight weight) {
  return absolute_bias(params, weight) / (2.0 * params.phi1);
}

double cs_transform(double x, const GameParams& params, BankerWeight weight) {
  return (x + params.phi1 + absolute_bias(params, weight)) / (2.0 * params.phi1);
}

double cs_transform_inverse(double u, const GameParams& params, BankerWeight weight) {
  return 2.0 * params.phi1 * u - params.phi1 - absolute_bias(params, weight);
}

PartitionCount max_partitions(const GameParams& params, BankerWeight weight) {
  const double d = absolute_bias(params, weight);
  PartitionCount out;
  if (d < kFullRevelationBiasFloor) {
    out.unbounded = true;
    return out;
  }
  // Largest P with P(P-1) < phi1/d. Start from the real root and repair any
  // floating-point slip at the integer boundary.
  const double c = params.phi1 / d;
  auto p = static_cast<std::int64_t>(std::ceil(0.5 * (std::sqrt(1.0 + 4.0 * c) - 1.0)));
  p = std::max<std::int64_t>(p, 1);
  while (p > 1 && static_cast<double>(p) * static_cast<double>(p - 1) >= c) --p;
  while (static_cast<double>(p + 1) * static_cast<double>(p) < c) ++p;
  out.value = p;
  return out;
}

Partition solve_partition(const GameParams& params, BankerWeight weight, int cells) {
  if (cells < 1) throw std::invalid_argument("cell count must be >= 1");
  const double d = absolute_bias(params, weight);
  const double p = static_cast<double>(cells);
  if (p * (p - 1.0) * d >= params.phi1) {
    std::ostringstream os;
    const PartitionCount pbar = max_partitions(params, weight);
    os << "no equilibrium partition with " << cells << " cells at this bias"
       << " (supportable maximum is " << pbar.value << ")";
    throw InfeasibleError(os.str());
  }
  if (cells > kMaxMaterializedCells)
    throw NumericalError("partition too large to materialize as a cutoff array");

  // Cell lengths grow arithmetically by 4d toward the upper end of the
  // support; the first length makes them sum to the full support width.
  const double len1 = (2.0 * params.phi1 - 2.0 * p * (p - 1.0) * d) / p;
  Partition part;
  part.cutoffs.resize(static_cast<size_t>(cells) + 1);
  part.cutoffs.front() = -params.phi1;
  part.cutoffs.back() = params.phi1;
  for (int k = 1; k < cells; ++k) {
    const double kk = static_cast<double>(k);
    part.cutoffs[static_cast<size_t>(k)] =
        -params.phi1 + kk * len1 + 2.0 * kk * (kk - 1.0) * d;
  }
  part.validate(params.phi1);
  return part;
}

double residual_variance(const Partition& partition, double phi1) {
  if (!(phi1 > 0.0)) throw std::invalid_argument("phi1 must be strictly positive");
  double acc = 0.0;
  for (int k = 0; k < partition.cells(); ++k) {
    const double len = partition.length(k);
    acc += (len / (2.0 * phi1)) * (len * len / 12.0);
  }
  return acc;
}

double residual_variance_closed_form(const GameParams& params, BankerWeight weight,
                                     std::int64_t cells) {
  if (cells < 1) throw std::invalid_argument("cell count must be >= 1");
  const double d = absolute_bias(params, weight);
  const double p = static_cast<double>(cells);
  return params.phi1 * params.phi1 / (3.0 * p * p) + d * d * (p * p - 1.0) / 3.0;
}

double most_informative_residual_variance(const GameParams& params, BankerWeight weight) {
  const PartitionCount pbar = max_partitions(params, weight);
  if (pbar.unbounded) return 0.0;
  return residual_variance_closed_form(params, weight, pbar.value);
}

double verify_partition(const Partition& partition, const GameParams& params,
                        BankerWeight weight) {
  partition.validate(params.phi1);
  const double d = investment_bias(params, weight);
  double worst = 0.0;
  for (int k = 1; k < partition.cells(); ++k) {
    const double state = partition.cutoffs[static_cast<size_t>(k)];
    const double left = partition.cell_mean(k - 1) + d - state;
    const double right = partition.cell_mean(k) + d - state;
    worst = std::max(worst, std::fabs(left * left - right * right));
  }
  return worst;
}

StrategyProfile most_informative_profile(const GameParams& params, BankerWeight weight) {
  StrategyProfile p;
  p.kind = ProfileKind::oligopoly_cheap_talk;
  p.banker = weight;
  p.investment_bias = investment_bias(params, weight);
  const PartitionCount pbar = max_partitions(params, weight);
  if (pbar.unbounded || pbar.value > kMaxMaterializedCells) {
    // at double precision such partitions are indistinguishable from full
    // revelation (residual variance < 1e-14 * phi1^2)
    p.communication = Communication::full_revelation();
    return p;
  }
  p.communication = Communication::from_partition(
      solve_partition(params, weight, static_cast<int>(pbar.value)));
  return p;
}

}  // namespace cbs
