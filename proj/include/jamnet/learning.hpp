#ifndef JAMNET_LEARNING_HPP
#define JAMNET_LEARNING_HPP

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "jamnet/alp.hpp"
#include "jamnet/wpt_env.hpp"

namespace jamnet::learning {

struct EstimatorState {
  std::vector<std::vector<long>> counts;      // K x J
  std::vector<std::vector<double>> emp_means; // K x J, defined where counts > 0

  EstimatorState(int K, int J)
      : counts(K, std::vector<long>(J, 0)), emp_means(K, std::vector<double>(J, 0.0)) {}

  // Incremental mean update, exact per Algorithm-style bookkeeping.
  void record(int k, int arm, double reward) {
    auto& c = counts[k][arm - 1];
    auto& m = emp_means[k][arm - 1];
    c += 1;
    m += (reward - m) / static_cast<double>(c);
  }
};

struct ExplorationLength {
  long slots{0};
  bool clamped{false};
};

// ceil(K / ((1-delta) pi_min) + ln(T) max{1/delta^2, 16K / ((1-delta) pi_min Delta*^2)}),
// clamped to T. J is accepted for interface parity; the proved bound uses K.
ExplorationLength exploration_length(long T, int K, int J, double delta,
                                     double pi_min, double delta_star);

// Round-robin coverage: arm with the minimal count under context k, uniform
// random tie-break.
int explore_step(const EstimatorState& state, int k, std::mt19937_64& rng);

// One pairwise confidence comparison monitored by CLE. Counts of exactly
// known quantities (the dummy arm) use kExactCount.
struct Comparison {
  double eps1{0.0};
  double eps2{0.0};
  long n11{0}, n12{0}, n21{0}, n22{0};
};

inline constexpr long kExactCount = std::numeric_limits<long>::max();

// True iff every comparison passes exp(-2 Delta'^2 min-count) <= T^-2 on both
// sides. Zero counts fail the comparison (no error).
bool cle_should_stop(long T, std::span<const Comparison> comparisons,
                     double delta_c_min);

// The comparisons the candidate-set construction and the global threshold
// sort actually consult on the empirical means.
std::vector<Comparison> needed_comparisons(const EstimatorState& state,
                                           const Matrix& costs);

enum class ExplorationMode { fixed_length, cle };

struct UcbAilpConfig {
  ExplorationMode mode{ExplorationMode::fixed_length};
  double delta{0.5};
  double delta_star{0.0};      // needed for fixed_length via the formula
  long eps_override{-1};       // >= 0 forces the exploration length
  bool ucb_bonus{false};       // optional ablation: u_bar + sqrt(2 ln t / C)
  bool reveal_means{false};    // Case I wiring: skip exploration, use true means
};

struct EpisodeResult {
  std::vector<StepOutcome> trajectory;
  double pseudo_regret{0.0};
  long exploration_end{0};  // slots spent exploring
  EstimatorState estimates{1, 1};
  bool eps_clamped{false};
};

// Full epsilon-first run: explore (round-robin, or CLE-stopped), then exploit
// with the adaptive threshold LP on the empirical means.
EpisodeResult run_ucb_ailp(const WptEnvironment& env, long T, double budget,
                           const UcbAilpConfig& config, std::uint64_t seed);

// Known-statistics ALP baseline on the same episode engine.
EpisodeResult run_alp(const WptEnvironment& env, long T, double budget,
                      std::uint64_t seed);

}  // namespace jamnet::learning

#endif  // JAMNET_LEARNING_HPP
