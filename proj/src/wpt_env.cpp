#include "jamnet/wpt_env.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace jamnet {

double GainModel::sup(int k, int j) const {
  switch (kind) {
    case GainKind::deterministic:
      return h_mean[k][j];
    case GainKind::uniform:
      return 2.0 * h_mean[k][j];
    case GainKind::bernoulli:
      return h_mean[k][j] / bernoulli_p;
  }
  return 0.0;
}

double GainModel::sample(int k, int j, std::mt19937_64& rng) const {
  switch (kind) {
    case GainKind::deterministic:
      return h_mean[k][j];
    case GainKind::uniform: {
      std::uniform_real_distribution<double> u(0.0, 2.0 * h_mean[k][j]);
      return u(rng);
    }
    case GainKind::bernoulli: {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      return u(rng) < bernoulli_p ? h_mean[k][j] / bernoulli_p : 0.0;
    }
  }
  return 0.0;
}

void EnergyChannelModel::validate() const {
  if (!(xi > 0.0) || xi > 1.0) throw std::invalid_argument("xi must be in (0,1]");
  if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must be in [0,1]");
  if (gain.kind == GainKind::bernoulli &&
      !(gain.bernoulli_p > 0.0 && gain.bernoulli_p <= 1.0)) {
    throw std::invalid_argument("bernoulli gain needs p in (0,1]");
  }
  for (std::size_t k = 0; k < demand.size(); ++k) {
    for (std::size_t j = 0; j < demand[k].size(); ++j) {
      if (!(demand[k][j] > 0.0)) throw std::invalid_argument("energy demand must be > 0");
      // Rewards must live in [0,1] without clamping in practice.
      const double sup = xi * (1.0 - alpha) * gain.sup(static_cast<int>(k), static_cast<int>(j)) *
                         demand[k][j];
      if (sup > 1.0 + 1e-9) {
        throw std::invalid_argument("channel model can exceed unit reward; rescale gains");
      }
    }
  }
}

WptEnvironment::WptEnvironment(std::vector<double> pi, Matrix means, Matrix costs,
                               std::optional<EnergyChannelModel> channel)
    : pi_(std::move(pi)), means_(std::move(means)), costs_(std::move(costs)),
      channel_(std::move(channel)) {
  const std::size_t K = pi_.size();
  if (K == 0 || means_.size() != K || costs_.size() != K) {
    throw std::invalid_argument("pi/means/costs dimension mismatch");
  }
  double sum = 0.0;
  for (double p : pi_) {
    if (!(p > 0.0)) throw std::invalid_argument("pi entries must be > 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("pi must sum to 1");
  num_arms_ = static_cast<int>(means_[0].size());
  for (std::size_t k = 0; k < K; ++k) {
    if (static_cast<int>(means_[k].size()) != num_arms_ ||
        static_cast<int>(costs_[k].size()) != num_arms_) {
      throw std::invalid_argument("ragged means/costs");
    }
    for (int j = 0; j < num_arms_; ++j) {
      if (means_[k][j] < 0.0 || means_[k][j] > 1.0) {
        throw std::invalid_argument("means must be in [0,1]");
      }
      if (!(costs_[k][j] > 0.0)) throw std::invalid_argument("costs must be > 0");
    }
  }
  if (channel_) channel_->validate();
  pi_cdf_.resize(K);
  double acc = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    acc += pi_[k];
    pi_cdf_[k] = acc;
  }
  pi_cdf_.back() = 1.0;
}

WptEnvironment WptEnvironment::from_channel_model(std::vector<double> pi,
                                                  EnergyChannelModel channel) {
  channel.validate();
  const std::size_t K = pi.size();
  Matrix means(K);
  const double scale = channel.xi * (1.0 - channel.alpha);
  for (std::size_t k = 0; k < K; ++k) {
    means[k].resize(channel.demand[k].size());
    for (std::size_t j = 0; j < channel.demand[k].size(); ++j) {
      means[k][j] = scale * channel.gain.mean(static_cast<int>(k), static_cast<int>(j)) *
                    channel.demand[k][j];
    }
  }
  Matrix costs = channel.demand;
  return WptEnvironment(std::move(pi), std::move(means), std::move(costs),
                        std::move(channel));
}

double WptEnvironment::max_cost() const {
  double m = 0.0;
  for (const auto& row : costs_) {
    for (double c : row) m = std::max(m, c);
  }
  return m;
}

BudgetState WptEnvironment::make_budget(long T, double total_budget) const {
  if (T < 1 || total_budget < 0.0) throw std::invalid_argument("bad budget horizon");
  return BudgetState{total_budget, T, T, total_budget};
}

int WptEnvironment::sample_context(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  const auto it = std::lower_bound(pi_cdf_.begin(), pi_cdf_.end(), u);
  return static_cast<int>(it - pi_cdf_.begin());
}

double WptEnvironment::sample_reward(int k, int j, std::mt19937_64& rng) const {
  if (j < 1 || j > num_arms_) throw std::invalid_argument("reward requires an arm j >= 1");
  if (channel_) {
    const double h = channel_->gain.sample(k, j - 1, rng);
    const double y = channel_->xi * (1.0 - channel_->alpha) * h * channel_->demand[k][j - 1];
    return std::clamp(y, 0.0, 1.0);
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  return unif(rng) < means_[k][j - 1] ? 1.0 : 0.0;
}

StepOutcome WptEnvironment::step(BudgetState& state, int context, int action,
                                 std::mt19937_64& rng) const {
  if (state.remaining_time < 1) throw EpisodeFinishedError("episode finished");
  StepOutcome out;
  out.context = context;
  out.action = action;
  if (action != 0) {
    const double c = cost(context, action);
    if (c > state.remaining_budget) {
      out.action = 0;
      out.coerced = true;  // hard budget: unaffordable arm becomes the dummy
    } else {
      out.cost = c;
      out.reward = sample_reward(context, action, rng);
      state.remaining_budget -= c;
    }
  }
  state.remaining_time -= 1;
  return out;
}

double pseudo_regret(std::span<const StepOutcome> trajectory,
                     const WptEnvironment& env, long T, double budget) {
  alp::AlpSolver solver(env.pi(), env.means(), env.costs());
  const double v_hat = solver.solve(budget / static_cast<double>(T)).value;
  double total = 0.0;
  for (const auto& s : trajectory) total += s.reward;
  return static_cast<double>(T) * v_hat - total;
}

std::string trajectory_csv(std::span<const StepOutcome> trajectory, long T,
                           double total_budget) {
  std::ostringstream os;
  os.precision(17);
  os << "t,context,action,reward,cost,remaining_budget,coerced_flag\n";
  double b = total_budget;
  long t = 1;
  for (const auto& s : trajectory) {
    b -= s.cost;
    os << t << ',' << (s.context + 1) << ',' << s.action << ',' << s.reward << ','
       << s.cost << ',' << b << ',' << (s.coerced ? 1 : 0) << '\n';
    ++t;
  }
  (void)T;
  return os.str();
}

namespace {

GainKind gain_kind_from_string(const std::string& s) {
  if (s == "deterministic") return GainKind::deterministic;
  if (s == "uniform") return GainKind::uniform;
  if (s == "bernoulli") return GainKind::bernoulli;
  throw std::invalid_argument("unknown gain kind: " + s);
}

std::string gain_kind_to_string(GainKind k) {
  switch (k) {
    case GainKind::deterministic: return "deterministic";
    case GainKind::uniform: return "uniform";
    case GainKind::bernoulli: return "bernoulli";
  }
  return "deterministic";
}

Matrix matrix_from_json(const nlohmann::json& j) {
  Matrix m;
  for (const auto& row : j) m.push_back(row.get<std::vector<double>>());
  return m;
}

}  // namespace

WptEnvironment WptEnvironment::from_json_text(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  auto pi = j.at("pi").get<std::vector<double>>();
  Matrix costs = matrix_from_json(j.at("costs"));
  const int K = j.value("K", static_cast<int>(pi.size()));
  const int J = j.value("J", static_cast<int>(costs.empty() ? 0 : costs[0].size()));
  if (K != static_cast<int>(pi.size())) throw std::invalid_argument("K disagrees with pi");
  if (!costs.empty() && J != static_cast<int>(costs[0].size())) {
    throw std::invalid_argument("J disagrees with costs");
  }
  std::optional<EnergyChannelModel> channel;
  if (j.contains("gain")) {
    EnergyChannelModel cm;
    cm.xi = j.value("xi", 1.0);
    cm.alpha = j.value("alpha", 0.0);
    cm.demand = costs;
    const auto& g = j.at("gain");
    cm.gain.kind = gain_kind_from_string(g.at("kind").get<std::string>());
    if (g.at("h_mean").is_number()) {
      const double h = g.at("h_mean").get<double>();
      cm.gain.h_mean.assign(K, std::vector<double>(J, h));
    } else {
      cm.gain.h_mean = matrix_from_json(g.at("h_mean"));
    }
    cm.gain.bernoulli_p = g.value("p", 0.5);
    channel = std::move(cm);
  }
  WptEnvironment env = channel
      ? from_channel_model(std::move(pi), std::move(*channel))
      : WptEnvironment(std::move(pi), matrix_from_json(j.at("means")), std::move(costs));
  if (j.contains("means") && channel) {
    const Matrix stated = matrix_from_json(j.at("means"));
    for (std::size_t k = 0; k < stated.size(); ++k) {
      for (std::size_t a = 0; a < stated[k].size(); ++a) {
        if (std::abs(stated[k][a] - env.means()[k][a]) > 1e-9) {
          throw std::invalid_argument("stated means disagree with the channel model");
        }
      }
    }
  }
  env.set_seed(j.value("seed", 0ull));
  return env;
}

std::string WptEnvironment::to_json_text() const {
  nlohmann::json j;
  j["K"] = num_contexts();
  j["J"] = num_arms_;
  j["pi"] = pi_;
  j["means"] = means_;
  j["costs"] = costs_;
  if (channel_) {
    j["xi"] = channel_->xi;
    j["alpha"] = channel_->alpha;
    j["gain"] = {{"kind", gain_kind_to_string(channel_->gain.kind)},
                 {"h_mean", channel_->gain.h_mean},
                 {"p", channel_->gain.bernoulli_p}};
  }
  j["seed"] = seed_;
  return j.dump(2);
}

}  // namespace jamnet
