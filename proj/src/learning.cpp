#include "jamnet/learning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jamnet::learning {

ExplorationLength exploration_length(long T, int K, int J, double delta,
                                     double pi_min, double delta_star) {
  if (T < 1 || K < 1 || J < 1) throw std::invalid_argument("T, K, J must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must be in (0,1)");
  if (!(pi_min > 0.0)) throw std::invalid_argument("pi_min must be > 0");
  if (!(delta_star > 0.0)) {
    throw std::invalid_argument("delta_star must be > 0 (use CLE mode when unknown)");
  }
  const double head = static_cast<double>(K) / ((1.0 - delta) * pi_min);
  const double tail = std::log(static_cast<double>(T)) *
                      std::max(1.0 / (delta * delta),
                               16.0 * static_cast<double>(K) /
                                   ((1.0 - delta) * pi_min * delta_star * delta_star));
  const double raw = std::ceil(head + tail);
  ExplorationLength out;
  if (raw > static_cast<double>(T)) {
    out.slots = T;
    out.clamped = true;
  } else {
    out.slots = static_cast<long>(raw);
  }
  return out;
}

int explore_step(const EstimatorState& state, int k, std::mt19937_64& rng) {
  const auto& row = state.counts[k];
  long best = row[0];
  for (long c : row) best = std::min(best, c);
  std::vector<int> ties;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] == best) ties.push_back(static_cast<int>(j + 1));
  }
  if (ties.size() == 1) return ties[0];
  std::uniform_int_distribution<std::size_t> pick(0, ties.size() - 1);
  return ties[pick(rng)];
}

bool cle_should_stop(long T, std::span<const Comparison> comparisons,
                     double delta_c_min) {
  if (!(delta_c_min > 0.0)) throw std::invalid_argument("delta_c_min must be > 0");
  const double limit = 1.0 / (static_cast<double>(T) * static_cast<double>(T));
  for (const auto& c : comparisons) {
    if (c.n11 == 0 || c.n12 == 0 || c.n21 == 0 || c.n22 == 0) return false;
    const double dprime = delta_c_min * (c.eps1 - c.eps2) / 2.0;
    const double e2 = 2.0 * dprime * dprime;
    const auto side = [&](long a, long b) {
      const double n = static_cast<double>(std::min(a, b));
      return std::exp(-e2 * n) <= limit;
    };
    if (!side(c.n11, c.n12) || !side(c.n21, c.n22)) return false;
  }
  return true;
}

namespace {

double delta_c_min_of(const Matrix& costs) {
  double dmin = std::numeric_limits<double>::infinity();
  for (const auto& row : costs) {
    std::vector<double> cs(row.begin(), row.end());
    cs.push_back(0.0);  // dummy arm
    for (std::size_t i = 0; i < cs.size(); ++i) {
      for (std::size_t j = i + 1; j < cs.size(); ++j) {
        const double d = std::abs(cs[i] - cs[j]);
        if (d > 0.0) dmin = std::min(dmin, d);
      }
    }
  }
  return dmin;
}

// ratio (u_a - u_b)/(c_a - c_b) on empirical values; arm 0 is the dummy.
struct RatioEval {
  double value;
  long count_a;
  long count_b;
};

RatioEval eval_ratio(const EstimatorState& st, const Matrix& costs, int k, int a, int b) {
  const auto u_of = [&](int arm) { return arm == 0 ? 0.0 : st.emp_means[k][arm - 1]; };
  const auto c_of = [&](int arm) { return arm == 0 ? 0.0 : costs[k][arm - 1]; };
  const auto n_of = [&](int arm) { return arm == 0 ? kExactCount : st.counts[k][arm - 1]; };
  return {(u_of(a) - u_of(b)) / (c_of(a) - c_of(b)), n_of(a), n_of(b)};
}

}  // namespace

std::vector<Comparison> needed_comparisons(const EstimatorState& state,
                                           const Matrix& costs) {
  const int K = static_cast<int>(costs.size());
  std::vector<Comparison> out;
  std::vector<std::vector<alp::VirtualArm>> virt(K);
  for (int k = 0; k < K; ++k) {
    alp::CandidateTrace trace;
    const auto cand = alp::candidate_set(costs[k], state.emp_means[k], &trace);
    for (const auto& p : trace.comparisons) {
      const RatioEval r1 = eval_ratio(state, costs, k, p.a1, p.b1);
      Comparison c;
      c.eps1 = r1.value;
      c.n11 = r1.count_a;
      c.n12 = r1.count_b;
      if (p.a2 < 0) {  // against the exact constant 0
        c.eps2 = 0.0;
        c.n21 = kExactCount;
        c.n22 = kExactCount;
      } else {
        const RatioEval r2 = eval_ratio(state, costs, k, p.a2, p.b2);
        c.eps2 = r2.value;
        c.n21 = r2.count_a;
        c.n22 = r2.count_b;
      }
      out.push_back(c);
    }
    virt[k] = alp::virtualize(cand, k);
  }
  // The global threshold sort consults adjacent virtual pairs. A virtual
  // eta at rank a is the ratio between candidate arms (a, a-1), dummy below
  // rank 0.
  std::vector<alp::VirtualArm> sorted;
  for (const auto& v : virt) sorted.insert(sorted.end(), v.begin(), v.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const alp::VirtualArm& a, const alp::VirtualArm& b) {
                     if (a.eta != b.eta) return a.eta > b.eta;
                     if (a.context != b.context) return a.context < b.context;
                     return a.rank < b.rank;
                   });
  std::vector<std::vector<int>> cand_arms(K);
  for (const auto& v : sorted) {
    auto& arms = cand_arms[v.context];
    if (static_cast<int>(arms.size()) <= v.rank) arms.resize(v.rank + 1, 0);
    arms[v.rank] = v.arm;
  }
  const auto arm_below = [&](const alp::VirtualArm& v) {
    return v.rank == 0 ? 0 : cand_arms[v.context][v.rank - 1];
  };
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    const auto& v1 = sorted[i];
    const auto& v2 = sorted[i + 1];
    const RatioEval r1 = eval_ratio(state, costs, v1.context, v1.arm, arm_below(v1));
    const RatioEval r2 = eval_ratio(state, costs, v2.context, v2.arm, arm_below(v2));
    out.push_back({r1.value, r2.value, r1.count_a, r1.count_b, r2.count_a, r2.count_b});
  }
  return out;
}

namespace {

Matrix ucb_adjusted_means(const EstimatorState& st, long t) {
  Matrix m = st.emp_means;
  for (std::size_t k = 0; k < m.size(); ++k) {
    for (std::size_t j = 0; j < m[k].size(); ++j) {
      const long c = st.counts[k][j];
      if (c > 0) {
        m[k][j] = std::min(1.0, m[k][j] + std::sqrt(2.0 * std::log(static_cast<double>(t)) /
                                                    static_cast<double>(c)));
      }
    }
  }
  return m;
}

}  // namespace

EpisodeResult run_ucb_ailp(const WptEnvironment& env, long T, double budget,
                           const UcbAilpConfig& config, std::uint64_t seed) {
  const int K = env.num_contexts();
  const int J = env.num_arms();
  std::mt19937_64 rng(seed);
  EpisodeResult res;
  res.estimates = EstimatorState(K, J);
  BudgetState st = env.make_budget(T, budget);
  res.trajectory.reserve(T);

  long eps = 0;
  if (!config.reveal_means) {
    if (config.eps_override >= 0) {
      eps = std::min(config.eps_override, T);
      res.eps_clamped = config.eps_override > T;
    } else if (config.mode == ExplorationMode::fixed_length) {
      double pi_min = 1.0;
      for (double p : env.pi()) pi_min = std::min(pi_min, p);
      const auto el = exploration_length(T, K, J, config.delta, pi_min, config.delta_star);
      eps = el.slots;
      res.eps_clamped = el.clamped;
    } else {
      eps = T;  // CLE decides when to leave exploration
    }
  }
  const double dc_min = delta_c_min_of(env.costs());

  long t = 1;
  for (; t <= T && t <= eps; ++t) {
    if (config.mode == ExplorationMode::cle && config.eps_override < 0 &&
        !config.reveal_means) {
      const auto cmps = needed_comparisons(res.estimates, env.costs());
      if (cle_should_stop(T, cmps, dc_min)) break;
    }
    const int k = env.sample_context(rng);
    const int a = st.remaining_budget > 0.0 ? explore_step(res.estimates, k, rng) : 0;
    const StepOutcome out = env.step(st, k, a, rng);
    if (out.action > 0) res.estimates.record(k, out.action, out.reward);
    res.trajectory.push_back(out);
  }
  res.exploration_end = t - 1;

  // Exploitation on frozen estimates (or the true means in Case-I wiring).
  const Matrix& lp_means = config.reveal_means ? env.means() : res.estimates.emp_means;
  alp::AlpSolver solver(env.pi(), lp_means, env.costs());
  for (; t <= T; ++t) {
    const long tau = T - t + 1;
    const int k = env.sample_context(rng);
    int a = 0;
    if (st.remaining_budget > 0.0) {
      if (config.ucb_bonus && !config.reveal_means) {
        alp::AlpSolver bonus_solver(env.pi(), ucb_adjusted_means(res.estimates, t),
                                    env.costs());
        a = alp::alp_policy_step(bonus_solver, st.remaining_budget, tau, k, rng);
      } else {
        a = alp::alp_policy_step(solver, st.remaining_budget, tau, k, rng);
      }
    }
    const StepOutcome out = env.step(st, k, a, rng);
    res.trajectory.push_back(out);
  }
  res.pseudo_regret = pseudo_regret(res.trajectory, env, T, budget);
  return res;
}

EpisodeResult run_alp(const WptEnvironment& env, long T, double budget,
                      std::uint64_t seed) {
  UcbAilpConfig cfg;
  cfg.reveal_means = true;
  return run_ucb_ailp(env, T, budget, cfg, seed);
}

}  // namespace jamnet::learning
