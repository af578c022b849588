#ifndef JAMNET_ALP_HPP
#define JAMNET_ALP_HPP

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace jamnet {

class WptEnvironment;  // wpt_env.hpp

using Matrix = std::vector<std::vector<double>>;

namespace alp {

// Arms surviving the two pruning passes, ordered by descending normalized
// reward u/c; along the list u and c are strictly increasing.
struct CandidateSet {
  std::vector<int> arms;  // original arm ids
  std::vector<double> u;
  std::vector<double> c;
  std::vector<double> eta;
};

// Comparisons Algorithm-1 consulted, for the CLE confidence monitor.
// Pairs are (arm_a, arm_b) with arm id 0 meaning the dummy.
struct CandidateTrace {
  struct Pair {
    int a1, b1;  // first ratio: (u_a1 - u_b1) / (c_a1 - c_b1)
    int a2, b2;  // second ratio; b2 < 0 encodes the exact constant 0
  };
  std::vector<Pair> comparisons;
};

CandidateSet candidate_set(std::span<const double> costs, std::span<const double> means,
                           CandidateTrace* trace = nullptr);

struct VirtualArm {
  int context{0};
  int rank{0};  // position within the context's candidate list
  int arm{0};   // original arm id
  double du{0.0};
  double dc{0.0};
  double eta{0.0};
};

// Incremental (du, dc) transform of a candidate set; eta is non-increasing in
// rank or an internal-invariant error is raised.
std::vector<VirtualArm> virtualize(const CandidateSet& cands, int context);

struct LpSolution {
  Matrix probs;  // K x J, original arm ids
  long threshold_index{0};
  double value{0.0};
  std::vector<VirtualArm> sorted_pairs;
  std::string to_json_text() const;
};

LpSolution solve_threshold_lp(const std::vector<std::vector<VirtualArm>>& per_context,
                              std::span<const double> pi, double rho);

// Independent test oracle: the explicit LP solved by a dense textbook
// simplex. Shares no code or structure with the threshold route.
// Refuses instances with K*J > 16.
double lp_bruteforce(std::span<const double> pi, const Matrix& means,
                     const Matrix& costs, double rho);

// Per-instance cache: candidate sets, virtual arms, and the global eta-sorted
// pair list. Re-solving at a new rho is a prefix walk.
class AlpSolver {
 public:
  AlpSolver(std::vector<double> pi, Matrix means, Matrix costs);

  int num_contexts() const { return static_cast<int>(pi_.size()); }
  int num_arms() const { return num_arms_; }
  double c_max() const { return c_max_; }
  const std::vector<VirtualArm>& sorted_pairs() const { return sorted_; }
  const std::vector<double>& pi() const { return pi_; }
  const Matrix& costs() const { return costs_; }

  LpSolution solve(double rho) const;

  // Arm probabilities for one context at effective budget rho_eff
  // (clamped to [0, c_max]); entries follow candidate order.
  void context_probs(int context, double rho_eff, std::vector<double>& probs_out) const;

  // Samples the ALP action: a candidate arm or 0 (dummy).
  int sample_action(int context, double rho_eff, std::mt19937_64& rng) const;

 private:
  std::vector<double> pi_;
  Matrix costs_;
  int num_arms_{0};
  double c_max_{0.0};
  std::vector<CandidateSet> cands_;
  std::vector<std::vector<VirtualArm>> virt_;
  std::vector<VirtualArm> sorted_;
  std::vector<double> prefix_cost_;  // cumulative pi * dc along sorted_
};

// ALP decision for one slot: threshold LP at b_tau/tau, then sample.
// Non-positive remaining budget returns the dummy arm 0.
int alp_policy_step(const AlpSolver& solver, double remaining_budget,
                    long remaining_time, int context, std::mt19937_64& rng);

// Cumulative-cost breakpoints Q_i = sum_{i'<=i} pi * dc; `rho` equal to one
// of these is the boundary (O(sqrt T) regret) regime.
std::vector<double> budget_breakpoints(const AlpSolver& solver);

struct ConcentrationCurve {
  std::vector<long> tau_checkpoints;
  std::vector<double> empirical_exceedance;  // P{|b_tau/tau - rho| > delta}
  std::vector<double> lemma_bound;           // exp(-K delta^2 tau)
};

// Empirical check of the remaining-budget concentration under the ALP policy.
ConcentrationCurve concentration_probe(const WptEnvironment& env, long T,
                                       double budget, int replications,
                                       double delta, std::span<const long> checkpoints,
                                       std::uint64_t seed_base);

}  // namespace alp
}  // namespace jamnet

#endif  // JAMNET_ALP_HPP
