#pragma once

// Reproducible Monte Carlo: per-replication generator streams derived from a
// master seed, worker-count-invariant reduction, and numeric deviation
// oracles used to certify the closed forms.

#include <cstdint>
#include <functional>
#include <random>
#include <string>

#include "model.hpp"
#include "profile.hpp"

namespace cbs {

// The only generator the engine runs: replication r draws from an mt19937_64
// seeded with splitmix64(master_seed, r); uniforms come from the top 53 bits
// by inverse transform. Fixed here so estimates are reproducible bit for bit
// across platforms and worker counts.
inline constexpr const char* kRngAlgorithm = "mt19937_64/splitmix64-stream";

struct RngSpec {
  std::uint64_t master_seed = 0;
  std::string algorithm = kRngAlgorithm;

  void validate() const;  // rejects algorithms other than the documented one
};

std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t replication);

// Draw stream of one replication.
class UniformStream {
 public:
  UniformStream(std::uint64_t master_seed, std::uint64_t replication)
      : gen_(derive_stream_seed(master_seed, replication)) {}

  // uniform on [-half_width, half_width)
  double symmetric(double half_width) {
    const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return half_width * (2.0 * u - 1.0);
  }

 private:
  std::mt19937_64 gen_;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t replications = 0;
  std::uint64_t seed = 0;
  std::string algorithm = kRngAlgorithm;
};

struct MonteCarloReport {
  McEstimate welfare;
  McEstimate investor_payoff;
};

// Simulate the profile: per replication draw both shocks, apply the stated
// positions and rate rule, record society's welfare (at society's weight) and
// one investor's payoff. Identical output for any worker count.
MonteCarloReport run_monte_carlo(const StrategyProfile& profile, const GameParams& params,
                                 std::int64_t replications, const RngSpec& rng,
                                 int workers = 1);

// Best one-shot gain an investor can secure by repositioning against the
// profile, maximized numerically over a bracket that provably contains the
// optimum. Zero (up to tolerance) certifies position optimality.
double deviation_oracle_investment(const StrategyProfile& profile,
                                   const GameParams& params, double tol = 1e-10);

// Same, with an explicit search bracket. Flags a boundary argmax as an error.
double deviation_oracle_investment(const StrategyProfile& profile,
                                   const GameParams& params, double bracket_lo,
                                   double bracket_hi, double tol);

// Best reduction in the policymaker's expected continuation loss achievable
// by announcing something other than the profile's message, maximized over
// sampled early-shock states. Zero certifies the communication rule.
double deviation_oracle_message(const StrategyProfile& profile, const GameParams& params,
                                int state_samples, const RngSpec& rng);

// Shared block-parallel driver: fills per-replication values (dims entries
// per replication) and reduces block sums in index order, so results do not
// depend on the worker count. Exposed for the repeated-interaction streams.
struct BlockAccumulator {
  std::int64_t count = 0;
  double sum[4] = {0, 0, 0, 0};
  double sum_sq[4] = {0, 0, 0, 0};
};

void run_replications(std::int64_t replications, int workers, int dims,
                      const std::function<void(std::int64_t, double*)>& body,
                      BlockAccumulator& out);

McEstimate estimate_from(const BlockAccumulator& acc, int dim, const RngSpec& rng);

}  // namespace cbs
