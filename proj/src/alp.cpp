#include "jamnet/alp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace jamnet::alp {

namespace {

struct RatedArm {
  int arm;
  double u;
  double c;
  double eta;
};

constexpr double kEtaTol = 1e-12;

}  // namespace

CandidateSet candidate_set(std::span<const double> costs, std::span<const double> means,
                           CandidateTrace* trace) {
  if (costs.size() != means.size()) throw std::invalid_argument("costs/means size mismatch");
  std::vector<RatedArm> rated;
  rated.reserve(costs.size());
  for (std::size_t j = 0; j < costs.size(); ++j) {
    if (!(costs[j] > 0.0)) throw std::invalid_argument("arm cost must be > 0");
    if (means[j] < 0.0 || means[j] > 1.0) throw std::invalid_argument("arm mean outside [0,1]");
    rated.push_back({static_cast<int>(j + 1), means[j], costs[j], means[j] / costs[j]});
  }
  // Descending eta; ties by lower cost, then lower arm id.
  std::stable_sort(rated.begin(), rated.end(), [](const RatedArm& a, const RatedArm& b) {
    if (a.eta != b.eta) return a.eta > b.eta;
    if (a.c != b.c) return a.c < b.c;
    return a.arm < b.arm;
  });
  if (trace) {
    // Certifying the eta order needs the adjacent pairs only; eta is the
    // ratio against the dummy arm.
    for (std::size_t i = 0; i + 1 < rated.size(); ++i) {
      trace->comparisons.push_back({rated[i].arm, 0, rated[i + 1].arm, 0});
    }
  }

  // Pass 1: drop any arm whose u does not strictly improve on all earlier
  // survivors (a running max suffices). Zero-mean arms never enter: their
  // optimal probability is 0 regardless.
  std::vector<RatedArm> kept;
  double u_max = 0.0;
  int u_max_arm = 0;
  for (const auto& a : rated) {
    if (trace && !kept.empty()) {
      if (a.c != kept.back().c) {  // cost-tied arms are ordered by u alone
        trace->comparisons.push_back({a.arm, u_max_arm, -1, -1});
      }
    }
    if (a.u > u_max) {
      kept.push_back(a);
      u_max = a.u;
      u_max_arm = a.arm;
    }
  }

  // Pass 2: increasing-rate sweep; from each position jump to the highest
  // incremental rate and drop everything in between.
  std::vector<RatedArm> sweep;
  std::size_t a = 0;
  while (a < kept.size()) {
    sweep.push_back(kept[a]);
    if (a + 1 >= kept.size()) break;
    std::size_t best = a + 1;
    double best_rate = (kept[a + 1].u - kept[a].u) / (kept[a + 1].c - kept[a].c);
    for (std::size_t b = a + 2; b < kept.size(); ++b) {
      const double rate = (kept[b].u - kept[a].u) / (kept[b].c - kept[a].c);
      if (rate > best_rate) {
        best_rate = rate;
        best = b;
      }
    }
    if (trace) {
      for (std::size_t b = a + 1; b < kept.size(); ++b) {
        if (b == best) continue;
        trace->comparisons.push_back(
            {kept[best].arm, kept[a].arm, kept[b].arm, kept[a].arm});
      }
    }
    a = best;
  }

  CandidateSet out;
  for (const auto& arm : sweep) {
    out.arms.push_back(arm.arm);
    out.u.push_back(arm.u);
    out.c.push_back(arm.c);
    out.eta.push_back(arm.eta);
  }
  return out;
}

std::vector<VirtualArm> virtualize(const CandidateSet& cands, int context) {
  std::vector<VirtualArm> out;
  out.reserve(cands.arms.size());
  double prev_u = 0.0;
  double prev_c = 0.0;
  double prev_eta = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < cands.arms.size(); ++a) {
    const double du = cands.u[a] - prev_u;
    const double dc = cands.c[a] - prev_c;
    if (!(du > 0.0) || !(dc > 0.0)) {
      throw std::logic_error("virtualize: candidate set violates strict monotonicity");
    }
    const double eta = du / dc;
    if (eta > prev_eta + kEtaTol) {
      throw std::logic_error("virtualize: virtual eta not non-increasing");
    }
    out.push_back({context, static_cast<int>(a), cands.arms[a], du, dc, eta});
    prev_u = cands.u[a];
    prev_c = cands.c[a];
    prev_eta = eta;
  }
  return out;
}

namespace {

std::vector<VirtualArm> global_sort(const std::vector<std::vector<VirtualArm>>& per_context) {
  std::vector<VirtualArm> sorted;
  for (const auto& ctx : per_context) sorted.insert(sorted.end(), ctx.begin(), ctx.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const VirtualArm& a, const VirtualArm& b) {
    if (a.eta != b.eta) return a.eta > b.eta;
    if (a.context != b.context) return a.context < b.context;
    return a.rank < b.rank;
  });
  return sorted;
}

// Threshold walk shared by solve() and context_probs(); returns virtual
// probabilities aligned with `sorted`.
void virtual_probs(const std::vector<VirtualArm>& sorted,
                   const std::vector<double>& prefix_cost,
                   std::span<const double> pi, double rho, long& threshold_out,
                   std::vector<double>& vp_out) {
  const double tol = 1e-12 * std::max(1.0, rho);
  long ti = 0;
  while (ti < static_cast<long>(sorted.size()) && prefix_cost[ti + 1] <= rho + tol) ++ti;
  threshold_out = ti;
  vp_out.assign(sorted.size(), 0.0);
  for (long i = 0; i < ti; ++i) vp_out[i] = 1.0;
  if (ti < static_cast<long>(sorted.size())) {
    const auto& next = sorted[ti];
    const double room = rho - prefix_cost[ti];
    if (room > 0.0) {
      vp_out[ti] = std::clamp(room / (pi[next.context] * next.dc), 0.0, 1.0);
    }
  }
}

}  // namespace

LpSolution solve_threshold_lp(const std::vector<std::vector<VirtualArm>>& per_context,
                              std::span<const double> pi, double rho) {
  if (rho < 0.0) throw std::invalid_argument("rho must be >= 0");
  LpSolution sol;
  sol.sorted_pairs = global_sort(per_context);
  std::vector<double> prefix(sol.sorted_pairs.size() + 1, 0.0);
  for (std::size_t i = 0; i < sol.sorted_pairs.size(); ++i) {
    const auto& v = sol.sorted_pairs[i];
    prefix[i + 1] = prefix[i] + pi[v.context] * v.dc;
  }
  std::vector<double> vp;
  virtual_probs(sol.sorted_pairs, prefix, pi, rho, sol.threshold_index, vp);

  // Reverse transform: p_a = vp_a - vp_{a+1} within each context.
  const int K = static_cast<int>(pi.size());
  int max_arm = 0;
  for (const auto& v : sol.sorted_pairs) max_arm = std::max(max_arm, v.arm);
  sol.probs.assign(K, std::vector<double>(max_arm + 1, 0.0));

  std::vector<std::vector<std::pair<int, double>>> by_context(K);  // (rank, vp)
  std::vector<std::vector<int>> arm_of_rank(K);
  for (std::size_t i = 0; i < sol.sorted_pairs.size(); ++i) {
    const auto& v = sol.sorted_pairs[i];
    by_context[v.context].push_back({v.rank, vp[i]});
    if (static_cast<int>(arm_of_rank[v.context].size()) <= v.rank) {
      arm_of_rank[v.context].resize(v.rank + 1, 0);
    }
    arm_of_rank[v.context][v.rank] = v.arm;
  }
  double value = 0.0;
  for (int k = 0; k < K; ++k) {
    auto& ranks = by_context[k];
    std::sort(ranks.begin(), ranks.end());
    for (std::size_t a = 0; a < ranks.size(); ++a) {
      const double next_vp = a + 1 < ranks.size() ? ranks[a + 1].second : 0.0;
      const double p = std::max(0.0, ranks[a].second - next_vp);
      sol.probs[k][arm_of_rank[k][ranks[a].first]] = p;
    }
  }
  // Objective in original space: sum_k pi_k sum_a p u. Candidate u values are
  // recovered from the virtual increments.
  for (int k = 0; k < K; ++k) {
    double u_cum = 0.0;
    auto& ranks = by_context[k];
    std::vector<double> du_of_rank(ranks.size(), 0.0);
    for (const auto& v : sol.sorted_pairs) {
      if (v.context == k) du_of_rank[v.rank] = v.du;
    }
    for (std::size_t a = 0; a < ranks.size(); ++a) {
      u_cum += du_of_rank[a];
      value += pi[k] * sol.probs[k][arm_of_rank[k][a]] * u_cum;
    }
  }
  sol.value = value;
  return sol;
}

std::string LpSolution::to_json_text() const {
  nlohmann::json j;
  j["threshold"] = threshold_index;
  j["value"] = value;
  j["probs"] = probs;
  return j.dump(2);
}

AlpSolver::AlpSolver(std::vector<double> pi, Matrix means, Matrix costs)
    : pi_(std::move(pi)), costs_(std::move(costs)) {
  const int K = static_cast<int>(pi_.size());
  if (static_cast<int>(means.size()) != K || static_cast<int>(costs_.size()) != K) {
    throw std::invalid_argument("pi/means/costs dimension mismatch");
  }
  double pi_sum = 0.0;
  for (double p : pi_) {
    if (!(p > 0.0)) throw std::invalid_argument("every pi_k must be > 0");
    pi_sum += p;
  }
  if (std::abs(pi_sum - 1.0) > 1e-9) throw std::invalid_argument("pi must sum to 1");
  num_arms_ = static_cast<int>(means.empty() ? 0 : means[0].size());
  for (int k = 0; k < K; ++k) {
    cands_.push_back(candidate_set(costs_[k], means[k]));
    virt_.push_back(virtualize(cands_.back(), k));
    for (double c : costs_[k]) c_max_ = std::max(c_max_, c);
  }
  sorted_ = global_sort(virt_);
  prefix_cost_.assign(sorted_.size() + 1, 0.0);
  for (std::size_t i = 0; i < sorted_.size(); ++i) {
    prefix_cost_[i + 1] = prefix_cost_[i] + pi_[sorted_[i].context] * sorted_[i].dc;
  }
}

LpSolution AlpSolver::solve(double rho) const { return solve_threshold_lp(virt_, pi_, rho); }

void AlpSolver::context_probs(int context, double rho_eff,
                              std::vector<double>& probs_out) const {
  rho_eff = std::clamp(rho_eff, 0.0, c_max_);
  long ti = 0;
  std::vector<double> vp;
  virtual_probs(sorted_, prefix_cost_, pi_, rho_eff, ti, vp);
  const auto& cand = cands_[context];
  probs_out.assign(cand.arms.size(), 0.0);
  // vp by rank for this context.
  std::vector<double> vp_rank(cand.arms.size(), 0.0);
  for (std::size_t i = 0; i < sorted_.size(); ++i) {
    if (sorted_[i].context == context) vp_rank[sorted_[i].rank] = vp[i];
  }
  for (std::size_t a = 0; a < probs_out.size(); ++a) {
    const double next_vp = a + 1 < probs_out.size() ? vp_rank[a + 1] : 0.0;
    probs_out[a] = std::max(0.0, vp_rank[a] - next_vp);
  }
}

int AlpSolver::sample_action(int context, double rho_eff, std::mt19937_64& rng) const {
  std::vector<double> probs;
  context_probs(context, rho_eff, probs);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double u = unif(rng);
  const auto& cand = cands_[context];
  for (std::size_t a = 0; a < probs.size(); ++a) {
    if (u < probs[a]) return cand.arms[a];
    u -= probs[a];
  }
  return 0;
}

int alp_policy_step(const AlpSolver& solver, double remaining_budget,
                    long remaining_time, int context, std::mt19937_64& rng) {
  if (remaining_time < 1) throw std::invalid_argument("remaining_time must be >= 1");
  if (remaining_budget <= 0.0) return 0;
  const double rho_eff = remaining_budget / static_cast<double>(remaining_time);
  return solver.sample_action(context, rho_eff, rng);
}

std::vector<double> budget_breakpoints(const AlpSolver& solver) {
  std::vector<double> q;
  double acc = 0.0;
  for (const auto& v : solver.sorted_pairs()) {
    acc += solver.pi()[v.context] * v.dc;
    q.push_back(acc);
  }
  return q;
}

}  // namespace jamnet::alp
