#include <cmath>
#include <stdexcept>

#include "jamnet/alp.hpp"
#include "jamnet/wpt_env.hpp"

namespace jamnet::alp {

ConcentrationCurve concentration_probe(const WptEnvironment& env, long T,
                                       double budget, int replications,
                                       double delta, std::span<const long> checkpoints,
                                       std::uint64_t seed_base) {
  if (replications < 1) throw std::invalid_argument("replications must be >= 1");
  AlpSolver solver(env.pi(), env.means(), env.costs());
  const double rho = budget / static_cast<double>(T);

  ConcentrationCurve curve;
  curve.tau_checkpoints.assign(checkpoints.begin(), checkpoints.end());
  std::vector<long> exceed(checkpoints.size(), 0);
  const double kappa = rho * rho / (2.0 * solver.c_max() * solver.c_max());

  for (int rep = 0; rep < replications; ++rep) {
    std::mt19937_64 rng(seed_base + static_cast<std::uint64_t>(rep));
    BudgetState st = env.make_budget(T, budget);
    while (st.remaining_time > 0) {
      for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (st.remaining_time == checkpoints[i]) {
          const double ratio = st.remaining_budget / static_cast<double>(st.remaining_time);
          if (std::abs(ratio - rho) > delta) ++exceed[i];
        }
      }
      const int k = env.sample_context(rng);
      const int a = alp_policy_step(solver, st.remaining_budget, st.remaining_time, k, rng);
      env.step(st, k, a, rng);
    }
  }
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    curve.empirical_exceedance.push_back(static_cast<double>(exceed[i]) /
                                         static_cast<double>(replications));
    curve.lemma_bound.push_back(
        std::exp(-kappa * delta * delta * static_cast<double>(checkpoints[i])));
  }
  return curve;
}

}  // namespace jamnet::alp
