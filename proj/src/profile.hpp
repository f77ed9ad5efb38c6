#pragma once

// Strategy-profile data shared across modules: interval partitions of the
// early-shock support, the communication rule, and the bundled profile
// (banker weight, communication, constant investment bias).

#include <vector>

#include "model.hpp"

namespace cbs {

// Interval partition of [-phi1, phi1]. cutoffs holds the P+1 boundaries in
// strictly increasing order, endpoints at the support edges.
struct Partition {
  std::vector<double> cutoffs;

  int cells() const { return static_cast<int>(cutoffs.size()) - 1; }
  double length(int k) const;     // width of cell k (0-based)
  double cell_mean(int k) const;  // conditional mean of a uniform prior on cell k
  double cell_variance(int k) const;

  // Cell containing omega1. Boundary states go to the right cell; states off
  // the support map to the nearest cell.
  int cell_index(double omega1) const;

  void validate(double phi1) const;  // throws std::invalid_argument
};

enum class CommunicationKind { full_revelation, partition };

// Communication rule of the policymaker about the early shock: either the
// fully revealing rule (a distinguished marker, not a limit of partitions)
// or a finite interval partition.
struct Communication {
  CommunicationKind kind = CommunicationKind::full_revelation;
  Partition partition;  // meaningful only when kind == partition

  static Communication full_revelation();
  static Communication from_partition(Partition p);

  // Market belief about the early shock induced by the realized message.
  double conditional_mean(double omega1) const;
};

enum class ProfileKind { competitive, oligopoly_transparent, oligopoly_cheap_talk };

// Symmetric stationary profile: every investor positions at the induced
// conditional mean plus a constant bias, the policymaker applies the optimal
// rate rule for `banker` and communicates per `communication`.
struct StrategyProfile {
  ProfileKind kind = ProfileKind::competitive;
  BankerWeight banker{0.0};
  Communication communication;
  double investment_bias = 0.0;
};

}  // namespace cbs
