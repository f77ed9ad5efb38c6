#include "profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cbs {

double Partition::length(int k) const {
  if (k < 0 || k >= cells()) throw std::invalid_argument("cell index out of range");
  return cutoffs[static_cast<size_t>(k) + 1] - cutoffs[static_cast<size_t>(k)];
}

double Partition::cell_mean(int k) const {
  if (k < 0 || k >= cells()) throw std::invalid_argument("cell index out of range");
  return 0.5 * (cutoffs[static_cast<size_t>(k)] + cutoffs[static_cast<size_t>(k) + 1]);
}

double Partition::cell_variance(int k) const {
  const double len = length(k);
  return len * len / 12.0;
}

int Partition::cell_index(double omega1) const {
  const auto it = std::upper_bound(cutoffs.begin(), cutoffs.end(), omega1);
  auto k = static_cast<int>(it - cutoffs.begin()) - 1;
  // clamp: cutoff states fall right, off-support states to the nearest cell
  return std::clamp(k, 0, cells() - 1);
}

void Partition::validate(double phi1) const {
  if (cutoffs.size() < 2)
    throw std::invalid_argument("partition needs at least two cutoffs");
  for (size_t i = 0; i + 1 < cutoffs.size(); ++i) {
    if (!(cutoffs[i] < cutoffs[i + 1])) {
      std::ostringstream os;
      os << "partition cutoffs must be strictly increasing (violated at index " << i << ")";
      throw std::invalid_argument(os.str());
    }
  }
  const double tol = 1e-9 * std::max(1.0, phi1);
  if (std::fabs(cutoffs.front() + phi1) > tol || std::fabs(cutoffs.back() - phi1) > tol)
    throw std::invalid_argument("partition endpoints must coincide with the shock support");
}

Communication Communication::full_revelation() {
  Communication c;
  c.kind = CommunicationKind::full_revelation;
  return c;
}

Communication Communication::from_partition(Partition p) {
  Communication c;
  c.kind = CommunicationKind::partition;
  c.partition = std::move(p);
  return c;
}

double Communication::conditional_mean(double omega1) const {
  if (kind == CommunicationKind::full_revelation) return omega1;
  return partition.cell_mean(partition.cell_index(omega1));
}

}  // namespace cbs
