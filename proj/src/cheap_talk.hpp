#pragma once

// Pre-investment communication: partitional messaging equilibria of the
// disclosure stage, their informativeness, and the most informative profile.

#include <cstdint>

#include "model.hpp"
#include "profile.hpp"

namespace cbs {

// Below this absolute bias the communication game is treated as fully
// revealing: cell counts are unbounded and the residual variance is zero.
inline constexpr double kFullRevelationBiasFloor = 1e-12;

// |d(alpha_tilde)|: the conflict of interest driving coarse messaging.
double absolute_bias(const GameParams& params, BankerWeight weight);

// Bias expressed on the unit-interval normalization of the support.
double normalized_bias(const GameParams& params, BankerWeight weight);

// Affine map taking the shock support (shifted by the bias) onto [0,1], and
// its inverse. Bridges the game to the canonical uniform-quadratic setting.
double cs_transform(double x, const GameParams& params, BankerWeight weight);
double cs_transform_inverse(double u, const GameParams& params, BankerWeight weight);

struct PartitionCount {
  bool unbounded = false;     // true in the fully revealing regime
  std::int64_t value = 0;     // largest supportable cell count when bounded
};

// Largest number of cells an equilibrium partition can have.
PartitionCount max_partitions(const GameParams& params, BankerWeight weight);

// The unique equilibrium partition with the given number of cells. Throws
// InfeasibleError when `cells` exceeds the supportable count.
Partition solve_partition(const GameParams& params, BankerWeight weight, int cells);

// Residual variance of the early shock given the partition message,
// sum over cells of P(cell) * within-cell variance.
double residual_variance(const Partition& partition, double phi1);

// Same quantity from the closed form in the cell count; no partition built.
double residual_variance_closed_form(const GameParams& params, BankerWeight weight,
                                     std::int64_t cells);

// Residual variance of the most informative equilibrium (0 when unbounded).
double most_informative_residual_variance(const GameParams& params, BankerWeight weight);

// Maximum violation of the boundary-type indifference conditions, measured on
// the sender's reduced stage objective (induced mean position minus state,
// squared). Zero up to rounding for an exact equilibrium partition.
double verify_partition(const Partition& partition, const GameParams& params,
                        BankerWeight weight);

// Equilibrium profile with the most informative communication supportable at
// this weight: the max-cell partition, or the fully revealing marker when the
// bias is numerically zero.
StrategyProfile most_informative_profile(const GameParams& params, BankerWeight weight);

}  // namespace cbs
