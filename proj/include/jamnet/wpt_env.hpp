#ifndef JAMNET_WPT_ENV_HPP
#define JAMNET_WPT_ENV_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "jamnet/alp.hpp"

namespace jamnet {

struct EpisodeFinishedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class GainKind { deterministic, uniform, bernoulli };

// Per-(context, arm) channel power gain h with configurable family; every
// family is parameterized by its mean so constructed environments satisfy
// E[Y] = u exactly.
struct GainModel {
  GainKind kind{GainKind::deterministic};
  Matrix h_mean;          // K x J
  double bernoulli_p{0.5};

  double mean(int k, int j) const { return h_mean[k][j]; }
  double sup(int k, int j) const;
  double sample(int k, int j, std::mt19937_64& rng) const;
};

struct EnergyChannelModel {
  double xi{1.0};     // transducer conversion efficiency, (0,1]
  double alpha{0.0};  // power split fraction to communication, [0,1]
  GainModel gain;
  Matrix demand;      // costs c[k][j], > 0 for j >= 1 column entries

  void validate() const;
};

struct BudgetState {
  double remaining_budget{0.0};
  long remaining_time{0};
  long total_T{0};
  double total_budget{0.0};

  double rho() const { return total_T > 0 ? total_budget / static_cast<double>(total_T) : 0.0; }
};

struct StepOutcome {
  int context{0};
  int action{0};  // 0 = dummy
  double reward{0.0};
  double cost{0.0};
  bool coerced{false};  // requested arm was unaffordable, forced to dummy
};

// Stochastic WPT environment: i.i.d. contexts from pi, rewards in [0,1] with
// conditional means u[k][j], hard budget bookkeeping. Rewards come either
// from the physical channel model (xi, alpha, gain, demand) or, when no
// channel model is attached, from Bernoulli(u) draws.
class WptEnvironment {
 public:
  WptEnvironment(std::vector<double> pi, Matrix means, Matrix costs,
                 std::optional<EnergyChannelModel> channel = std::nullopt);

  static WptEnvironment from_channel_model(std::vector<double> pi,
                                           EnergyChannelModel channel);
  static WptEnvironment from_json_text(const std::string& text);
  std::string to_json_text() const;

  int num_contexts() const { return static_cast<int>(pi_.size()); }
  int num_arms() const { return num_arms_; }
  const std::vector<double>& pi() const { return pi_; }
  const Matrix& means() const { return means_; }
  const Matrix& costs() const { return costs_; }
  double cost(int k, int j) const { return costs_[k][j - 1]; }
  double mean(int k, int j) const { return means_[k][j - 1]; }
  double max_cost() const;
  std::uint64_t seed() const { return seed_; }
  void set_seed(std::uint64_t s) { seed_ = s; }

  BudgetState make_budget(long T, double total_budget) const;

  // Context index in [0, K).
  int sample_context(std::mt19937_64& rng) const;
  // Reward for arm j >= 1 under context k.
  double sample_reward(int k, int j, std::mt19937_64& rng) const;

  // One slot: the context was drawn by the caller (via sample_context), the
  // caller chose the action, the environment realizes reward/cost and
  // advances the budget state. Unaffordable arms coerce to the dummy.
  StepOutcome step(BudgetState& state, int context, int action,
                   std::mt19937_64& rng) const;

 private:
  std::vector<double> pi_;
  std::vector<double> pi_cdf_;
  Matrix means_;
  Matrix costs_;
  int num_arms_{0};
  std::optional<EnergyChannelModel> channel_;
  std::uint64_t seed_{0};
};

// LP-upper-bound pseudo-regret: T * v_hat(budget/T) - sum of realized rewards.
double pseudo_regret(std::span<const StepOutcome> trajectory,
                     const WptEnvironment& env, long T, double budget);

// Trajectory CSV: t, context, action, reward, cost, remaining_budget, coerced_flag.
std::string trajectory_csv(std::span<const StepOutcome> trajectory, long T,
                           double total_budget);

}  // namespace jamnet

#endif  // JAMNET_WPT_ENV_HPP
