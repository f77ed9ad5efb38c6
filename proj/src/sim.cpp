#include "sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "optimize.hpp"
#include "static_game.hpp"

namespace cbs {

void RngSpec::validate() const {
  if (algorithm != kRngAlgorithm)
    throw std::invalid_argument("unsupported generator '" + algorithm +
                                "'; the engine is pinned to " + std::string(kRngAlgorithm));
}

std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t replication) {
  // splitmix64 over the master seed advanced by the replication index
  std::uint64_t z = master_seed + 0x9E3779B97F4A7C15ULL * (replication + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

constexpr std::int64_t kBlockSize = 8192;

int resolve_workers(int workers) {
  if (workers > 0) return workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

void run_replications(std::int64_t replications, int workers, int dims,
                      const std::function<void(std::int64_t, double*)>& body,
                      BlockAccumulator& out) {
  if (replications < 2) throw std::invalid_argument("need at least two replications");
  if (dims < 1 || dims > 4) throw std::invalid_argument("between 1 and 4 values per replication");

  const std::int64_t blocks = (replications + kBlockSize - 1) / kBlockSize;
  std::vector<BlockAccumulator> partial(static_cast<size_t>(blocks));

  auto run_block = [&](std::int64_t b) {
    BlockAccumulator acc;
    const std::int64_t lo = b * kBlockSize;
    const std::int64_t hi = std::min(replications, lo + kBlockSize);
    double vals[4];
    for (std::int64_t r = lo; r < hi; ++r) {
      body(r, vals);
      for (int d = 0; d < dims; ++d) {
        acc.sum[d] += vals[d];
        acc.sum_sq[d] += vals[d] * vals[d];
      }
    }
    acc.count = hi - lo;
    partial[static_cast<size_t>(b)] = acc;
  };

  const int nworkers =
      static_cast<int>(std::min<std::int64_t>(resolve_workers(workers), blocks));
  if (nworkers <= 1) {
    for (std::int64_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::atomic<std::int64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(nworkers));
    for (int w = 0; w < nworkers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::int64_t b = next.fetch_add(1);
          if (b >= blocks) return;
          run_block(b);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  // reduce in block order: the result is independent of scheduling
  out = BlockAccumulator{};
  for (const BlockAccumulator& acc : partial) {
    out.count += acc.count;
    for (int d = 0; d < dims; ++d) {
      out.sum[d] += acc.sum[d];
      out.sum_sq[d] += acc.sum_sq[d];
    }
  }
}

McEstimate estimate_from(const BlockAccumulator& acc, int dim, const RngSpec& rng) {
  McEstimate e;
  const double n = static_cast<double>(acc.count);
  e.mean = acc.sum[dim] / n;
  const double var = std::max(0.0, (acc.sum_sq[dim] - n * e.mean * e.mean) / (n - 1.0));
  e.std_error = std::sqrt(var / n);
  e.replications = acc.count;
  e.seed = rng.master_seed;
  e.algorithm = rng.algorithm;
  return e;
}

MonteCarloReport run_monte_carlo(const StrategyProfile& profile, const GameParams& params,
                                 std::int64_t replications, const RngSpec& rng,
                                 int workers) {
  rng.validate();
  const double a = params.alpha;
  const double at = profile.banker.alpha_tilde;
  const double beta = params.beta;
  const double d = profile.investment_bias;
  const Communication& comm = profile.communication;

  auto body = [&](std::int64_t rep, double* vals) {
    UniformStream s(rng.master_seed, static_cast<std::uint64_t>(rep));
    const double w1 = s.symmetric(params.phi1);  // draw order: early, then late
    const double w2 = s.symmetric(params.phi2);
    const double omega = w1 + w2;
    const double x = comm.conditional_mean(w1) + d;  // symmetric positions
    const double r = (1.0 - at) * omega + at * x;
    const double stab = r - omega;
    const double gap = r - x;
    vals[0] = -(0.5 * (1.0 - a) * stab * stab + 0.5 * a * gap * gap);
    vals[1] = -0.5 * gap * gap - beta * r;
  };

  BlockAccumulator acc;
  run_replications(replications, workers, 2, body, acc);
  MonteCarloReport report;
  report.welfare = estimate_from(acc, 0, rng);
  report.investor_payoff = estimate_from(acc, 1, rng);
  return report;
}

namespace {

// Expected utility of investor i conditional on one message, as a function of
// its own position, when the others hold x_other and the message induces mean
// mu and residual variance v for the early shock.
struct ConditionalUtility {
  double c;        // 1 - at/N
  double slope;    // 1 - at
  double at, beta, n;
  double mu, v, s2, x_other;

  double target() const {
    return slope * mu + (n > 1.0 ? at * (n - 1.0) * x_other / n : 0.0);
  }
  double operator()(double x) const {
    const double gap = c * x - target();
    const double mean_rate = slope * mu + at * (x + (n - 1.0) * x_other) / n;
    return -0.5 * (gap * gap + slope * slope * (v + s2)) - beta * mean_rate;
  }
  double derivative(double x) const {
    return -c * (c * x - target()) - beta * at / n;
  }
};

}  // namespace

double deviation_oracle_investment(const StrategyProfile& profile,
                                   const GameParams& params, double tol) {
  const double at = profile.banker.alpha_tilde;
  const double n = static_cast<double>(params.n_investors);
  const double c = 1.0 - at / n;
  const double d_abs = std::fabs(profile.investment_bias);
  // widen the canonical bracket by the worst-case optimizer shift so a true
  // optimum can never sit on the edge
  const double shift = at * params.beta / (n * c * c);
  const double lo = -params.phi1 - 5.0 * d_abs - shift - 1.0;
  const double hi = params.phi1 + 5.0 * d_abs + shift + 1.0;
  return deviation_oracle_investment(profile, params, lo, hi, tol);
}

double deviation_oracle_investment(const StrategyProfile& profile,
                                   const GameParams& params, double bracket_lo,
                                   double bracket_hi, double tol) {
  const double at = profile.banker.alpha_tilde;
  const double n = static_cast<double>(params.n_investors);

  ConditionalUtility u{};
  u.c = 1.0 - at / n;
  u.slope = 1.0 - at;
  u.at = at;
  u.beta = params.beta;
  u.n = n;
  u.s2 = params.var2();

  // candidate information states: every cell of a partition rule, or a few
  // interior means under full revelation (the gain is state-invariant there)
  std::vector<std::pair<double, double>> states;  // (mu, v)
  if (profile.communication.kind == CommunicationKind::partition) {
    const Partition& part = profile.communication.partition;
    for (int k = 0; k < part.cells(); ++k)
      states.emplace_back(part.cell_mean(k), part.cell_variance(k));
  } else {
    for (double f : {-0.5, 0.0, 0.5}) states.emplace_back(f * params.phi1, 0.0);
  }

  double worst = 0.0;
  for (const auto& [mu, v] : states) {
    u.mu = mu;
    u.v = v;
    u.x_other = mu + profile.investment_bias;  // the others stay on the profile
    const double on_path = u(u.x_other);
    const OptimizeResult best = maximize_scalar(
        [&](double x) { return u(x); }, bracket_lo, bracket_hi, tol);
    if (best.boundary)
      throw NumericalError(
          "deviation search bracket excludes the optimum (argmax at the boundary)");
    if (std::fabs(u.derivative(best.arg)) > 1e-6 * std::max(1.0, std::fabs(best.arg)))
      throw NumericalError("first-order condition violated at the numeric argmax");
    worst = std::max(worst, best.value - on_path);
  }
  return worst;
}

double deviation_oracle_message(const StrategyProfile& profile, const GameParams& params,
                                int state_samples, const RngSpec& rng) {
  if (state_samples < 1) throw std::invalid_argument("need at least one sampled state");
  rng.validate();
  const double at = profile.banker.alpha_tilde;
  const double scale = 0.5 * at * (1.0 - at);  // loss weight on the market-gap channel
  const double d = profile.investment_bias;

  double worst = 0.0;
  for (int i = 0; i < state_samples; ++i) {
    UniformStream s(rng.master_seed, static_cast<std::uint64_t>(i));
    const double w1 = s.symmetric(params.phi1);
    double on_gap, best_gap;
    if (profile.communication.kind == CommunicationKind::partition) {
      const Partition& part = profile.communication.partition;
      const int on_cell = part.cell_index(w1);
      auto gap_sq = [&](int cell) {
        const double g = part.cell_mean(cell) + d - w1;
        return g * g;
      };
      on_gap = gap_sq(on_cell);
      best_gap = on_gap;
      for (int k = 0; k < part.cells(); ++k) best_gap = std::min(best_gap, gap_sq(k));
    } else {
      auto gap_sq = [&](double m) {
        const double g = m + d - w1;
        return g * g;
      };
      on_gap = gap_sq(w1);
      // grid of alternative announcements plus the exact unconstrained best
      best_gap = on_gap;
      const double ideal = std::clamp(w1 - d, -params.phi1, params.phi1);
      best_gap = std::min(best_gap, gap_sq(ideal));
      for (int k = 0; k <= 200; ++k) {
        const double m = -params.phi1 + params.phi1 * static_cast<double>(k) / 100.0;
        best_gap = std::min(best_gap, gap_sq(m));
      }
    }
    worst = std::max(worst, scale * (on_gap - best_gap));
  }
  return worst;
}

}  // namespace cbs
