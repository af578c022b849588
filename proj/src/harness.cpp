#include "jamnet/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace jamnet::harness {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

PolicyConfig PolicyConfig::from_json_text(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  PolicyConfig cfg;
  const std::string kind = j.value("policy", "alp");
  if (kind == "alp") cfg.kind = PolicyKind::alp;
  else if (kind == "eps_first") cfg.kind = PolicyKind::eps_first;
  else if (kind == "eps_first_cle") cfg.kind = PolicyKind::eps_first_cle;
  else if (kind == "uniform") cfg.kind = PolicyKind::uniform;
  else if (kind == "greedy") cfg.kind = PolicyKind::greedy;
  else throw std::invalid_argument("unknown policy: " + kind);
  cfg.delta = j.value("delta", 0.5);
  cfg.delta_star = j.value("delta_star", 0.0);
  cfg.eps_override = j.value("eps_override", -1l);
  cfg.ucb_bonus = j.value("ucb_bonus", false);
  return cfg;
}

namespace {

learning::EpisodeResult run_simple_baseline(const WptEnvironment& env, long T,
                                            double budget, PolicyKind kind,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  learning::EpisodeResult res;
  res.estimates = learning::EstimatorState(env.num_contexts(), env.num_arms());
  BudgetState st = env.make_budget(T, budget);
  res.trajectory.reserve(T);
  std::uniform_int_distribution<int> pick(1, env.num_arms());
  for (long t = 1; t <= T; ++t) {
    const int k = env.sample_context(rng);
    int a = 0;
    if (st.remaining_budget > 0.0) {
      if (kind == PolicyKind::uniform) {
        a = pick(rng);
      } else {  // greedy: reward-maximal arm, budget pacing ignored
        a = 1;
        for (int j = 2; j <= env.num_arms(); ++j) {
          if (env.mean(k, j) > env.mean(k, a)) a = j;
        }
      }
    }
    res.trajectory.push_back(env.step(st, k, a, rng));
  }
  res.pseudo_regret = pseudo_regret(res.trajectory, env, T, budget);
  return res;
}

}  // namespace

learning::EpisodeResult run_policy(const WptEnvironment& env, long T, double budget,
                                   const PolicyConfig& config, std::uint64_t seed) {
  switch (config.kind) {
    case PolicyKind::alp:
      return learning::run_alp(env, T, budget, seed);
    case PolicyKind::eps_first:
    case PolicyKind::eps_first_cle: {
      learning::UcbAilpConfig cfg;
      cfg.mode = config.kind == PolicyKind::eps_first
                     ? learning::ExplorationMode::fixed_length
                     : learning::ExplorationMode::cle;
      cfg.delta = config.delta;
      cfg.delta_star = config.delta_star;
      cfg.eps_override = config.eps_override;
      cfg.ucb_bonus = config.ucb_bonus;
      return learning::run_ucb_ailp(env, T, budget, cfg, seed);
    }
    case PolicyKind::uniform:
    case PolicyKind::greedy:
      return run_simple_baseline(env, T, budget, config.kind, seed);
  }
  throw std::logic_error("unreachable policy kind");
}

PlacementScenario generate_eavesdropper_scenario(const ScenarioGeometry& geom,
                                                 const RadioParams& radio,
                                                 double delta_ratio, double r,
                                                 const ScenarioGenConfig& cfg,
                                                 std::uint64_t seed) {
  if (cfg.n_eavesdroppers < 1) throw std::invalid_argument("need at least one eavesdropper");
  std::mt19937_64 rng(seed);
  PlacementScenario sc{geom, radio, delta_ratio, r, {}, {}};
  const double sigma = placement::safe_distance(delta_ratio, r, radio).sigma;

  const auto fence_samples = geom.fence.boundary_samples(geom.grid_spacing);
  if (fence_samples.empty()) throw std::invalid_argument("fence has no samples");
  std::uniform_int_distribution<std::size_t> pick(0, fence_samples.size() - 1);
  while (static_cast<int>(sc.targets.size()) < cfg.n_eavesdroppers) {
    const Point2D t = fence_samples[pick(rng)];
    const bool dup = std::any_of(sc.targets.begin(), sc.targets.end(),
                                 [&](const Point2D& q) { return dist2(q, t) < 1e-12; });
    if (!dup) sc.targets.push_back(t);
  }

  // Candidate jammers per target: lengths spread over [1, Delta], placed
  // inward from the target, kept only if they can ever be admitted
  // (allowable region and the sigma standoff from the storage).
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<placement::PlacementRequest> stream;
  for (std::size_t ti = 0; ti < sc.targets.size(); ++ti) {
    const Point2D target = sc.targets[ti];
    const Point2D s_pt = geom.storage.nearest_boundary_point(target);
    const double dlen = dist(target, s_pt);
    Point2D inward{(s_pt.x - target.x) / dlen, (s_pt.y - target.y) / dlen};
    int made = 0;
    for (int attempt = 0; attempt < cfg.candidates_per_target * 8 &&
                          made < cfg.candidates_per_target; ++attempt) {
      const double len = 1.0 + unif(rng) * (delta_ratio - 1.0);
      const double phi = (unif(rng) - 0.5) * 1.0;  // +- ~30 degrees
      const Point2D tangent{-inward.y, inward.x};
      placement::PlacementRequest req;
      req.target = target;
      req.jammer = Point2D{
          target.x + len * (std::cos(phi) * inward.x + std::sin(phi) * tangent.x),
          target.y + len * (std::cos(phi) * inward.y + std::sin(phi) * tangent.y)};
      if (!geom.allowable.contains(req.jammer)) continue;
      if (geom.storage.boundary_distance(req.jammer) < sigma) continue;
      if (cfg.duration_ratio > 1.0) {
        std::uniform_real_distribution<double> dur(1.0, cfg.duration_ratio);
        req.duration = std::floor(dur(rng));
      }
      stream.push_back(req);
      ++made;
    }
  }
  std::shuffle(stream.begin(), stream.end(), rng);
  for (std::size_t i = 0; i < stream.size(); ++i) {
    stream[i].arrival = static_cast<long>(i);
  }
  sc.stream = std::move(stream);
  return sc;
}

PlacementRunResult run_placement_stream(const PlacementScenario& scenario, int F,
                                        double power_cap, bool stop_at_coverage,
                                        double sample_spacing) {
  PlacementRunResult res;
  placement::AdmissionState state(scenario.geom, scenario.radio, scenario.delta_ratio,
                                  placement::PowerPolicy::polynomial(scenario.r), F,
                                  sample_spacing, power_cap);
  res.sigma = state.sigma();
  std::vector<bool> covered(scenario.targets.size(), false);
  auto coverage_complete = [&]() {
    return std::all_of(covered.begin(), covered.end(), [](bool b) { return b; });
  };
  for (const auto& req : scenario.stream) {
    const auto dec = state.admit(req, req.arrival);
    res.log.push_back({req.arrival, dec.accepted, dec.reason, dec.power, dec.channel});
    ++res.consumed;
    if (dec.accepted) {
      ++res.accepted;
      res.total_power += dec.power;
      for (std::size_t t = 0; t < scenario.targets.size(); ++t) {
        if (dist2(scenario.targets[t], req.target) < 1e-12) covered[t] = true;
      }
      if (stop_at_coverage && coverage_complete()) break;
    }
  }
  res.covered = coverage_complete();
  return res;
}

std::string decision_csv(const PlacementRunResult& result) {
  std::ostringstream os;
  os << "arrival,accept,reason,power,channel,sigma\n";
  for (const auto& row : result.log) {
    os << row.arrival << ',' << (row.accept ? 1 : 0) << ','
       << placement::to_string(row.reason) << ',' << fmt(row.power) << ','
       << row.channel << ',' << fmt(result.sigma) << '\n';
  }
  return os.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "point,replication,seed,metric,value\n";
  for (const auto& r : rows) {
    os << r.point << ',' << r.replication << ',' << r.seed << ',' << r.metric << ','
       << fmt(r.value) << '\n';
  }
  return os.str();
}

std::map<std::pair<std::string, std::string>, Aggregate> aggregate_rows(
    const std::vector<SweepRow>& rows) {
  std::map<std::pair<std::string, std::string>, std::vector<double>> groups;
  for (const auto& r : rows) groups[{r.point, r.metric}].push_back(r.value);
  std::map<std::pair<std::string, std::string>, Aggregate> out;
  for (auto& [key, vals] : groups) {
    Aggregate a;
    a.n = static_cast<int>(vals.size());
    for (double v : vals) a.mean += v;
    a.mean /= a.n;
    double ss = 0.0;
    for (double v : vals) ss += (v - a.mean) * (v - a.mean);
    a.stderr_ = a.n > 1 ? std::sqrt(ss / (a.n - 1) / a.n) : 0.0;
    std::sort(vals.begin(), vals.end());
    a.median = a.n % 2 == 1 ? vals[a.n / 2]
                            : 0.5 * (vals[a.n / 2 - 1] + vals[a.n / 2]);
    out[key] = a;
  }
  return out;
}

namespace {

void emit_placement_metrics(std::vector<SweepRow>& rows, const std::string& point,
                            int rep, std::uint64_t seed,
                            const PlacementRunResult& run) {
  rows.push_back({point, rep, seed, "jammer_count", static_cast<double>(run.accepted)});
  rows.push_back({point, rep, seed, "total_power", run.total_power});
  rows.push_back({point, rep, seed, "covered", run.covered ? 1.0 : 0.0});
  rows.push_back({point, rep, seed, "consumed", static_cast<double>(run.consumed)});
}

}  // namespace

SweepOutput run_ne_sweep(const PlacementScenario& base, const NeSweepConfig& cfg) {
  SweepOutput out;
  for (int ne : cfg.ne_values) {
    for (int rep = 0; rep < cfg.replications; ++rep) {
      const std::uint64_t seed = cfg.seed_base + static_cast<std::uint64_t>(rep);
      ScenarioGenConfig gen = cfg.gen;
      gen.n_eavesdroppers = ne;
      const auto sc = generate_eavesdropper_scenario(base.geom, base.radio,
                                                     base.delta_ratio, base.r, gen, seed);
      const auto run = run_placement_stream(sc, cfg.F, placement::kForever, true,
                                            base.geom.grid_spacing);
      emit_placement_metrics(out.rows, "ne=" + std::to_string(ne), rep, seed, run);
    }
  }
  out.csv = sweep_csv(out.rows);
  return out;
}

SweepOutput run_multichannel_sweep(const PlacementScenario& base,
                                   const MultichannelSweepConfig& cfg) {
  SweepOutput out;
  for (int rep = 0; rep < cfg.replications; ++rep) {
    const std::uint64_t seed = cfg.seed_base + static_cast<std::uint64_t>(rep);
    const auto sc = generate_eavesdropper_scenario(base.geom, base.radio,
                                                   base.delta_ratio, base.r, cfg.gen, seed);
    for (int F : cfg.channel_values) {
      const auto run = run_placement_stream(sc, F, placement::kForever, true,
                                            base.geom.grid_spacing);
      emit_placement_metrics(out.rows, "F=" + std::to_string(F), rep, seed, run);
    }
  }
  std::stable_sort(out.rows.begin(), out.rows.end(),
                   [](const SweepRow& a, const SweepRow& b) { return a.point < b.point; });
  out.csv = sweep_csv(out.rows);
  return out;
}

SweepOutput run_param_sweep(const WptEnvironment& env, const PlacementScenario& placement_base,
                            const ParamSweepConfig& cfg) {
  SweepOutput out;
  alp::AlpSolver solver(env.pi(), env.means(), env.costs());
  const double budget = cfg.budget_fraction * static_cast<double>(cfg.T) * solver.c_max();
  for (double eps : cfg.eps_values) {
    for (double delta : cfg.delta_values) {
      for (int m : cfg.phat_multipliers) {
        std::ostringstream point;
        point << "eps=" << eps << ";delta=" << delta << ";phat=" << m << "/eps";
        for (int rep = 0; rep < cfg.replications; ++rep) {
          const std::uint64_t seed = cfg.seed_base + static_cast<std::uint64_t>(rep);
          // eps-first exploration with eps(T) = ceil(eps * T); delta is the
          // confidence parameter surfaced in the record.
          learning::UcbAilpConfig lcfg;
          lcfg.eps_override = static_cast<long>(std::ceil(eps * cfg.T));
          lcfg.delta = std::min(delta, 0.999);
          const auto ep = learning::run_ucb_ailp(env, cfg.T, budget, lcfg, seed);
          double total_he = 0.0;
          for (const auto& s : ep.trajectory) total_he += s.reward;
          out.rows.push_back({point.str(), rep, seed, "pseudo_regret", ep.pseudo_regret});
          out.rows.push_back({point.str(), rep, seed, "total_he", total_he});

          const double cap = static_cast<double>(m) / eps;
          const auto sc = generate_eavesdropper_scenario(
              placement_base.geom, placement_base.radio, placement_base.delta_ratio,
              placement_base.r, ScenarioGenConfig{}, seed);
          const auto run = run_placement_stream(sc, 1, cap, true,
                                                placement_base.geom.grid_spacing);
          emit_placement_metrics(out.rows, point.str(), rep, seed, run);
        }
      }
    }
  }
  out.csv = sweep_csv(out.rows);
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string write_output(const std::string& dir, const std::string& name,
                         const std::string& content) {
  std::filesystem::create_directories(dir);
  const auto path = std::filesystem::path(dir) / name;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << content;
  os.close();
  std::ostringstream hex;
  hex << std::hex << fnv1a64(content);
  return hex.str();
}

std::string manifest_json(const std::string& config_text, std::uint64_t seed_base,
                          const std::vector<std::pair<std::string, std::string>>& outputs) {
  nlohmann::json j;
  std::ostringstream hex;
  hex << std::hex << fnv1a64(config_text);
  j["config_hash"] = hex.str();
  j["seed_base"] = seed_base;
  j["outputs"] = nlohmann::json::array();
  for (const auto& [name, digest] : outputs) {
    j["outputs"].push_back({{"file", name}, {"digest", digest}});
  }
  return j.dump(2);
}

PolygonalRegion make_ring(double cx, double cy, double outer_w, double outer_h,
                          double inner_w, double inner_h, double slit_width) {
  const double ow = outer_w / 2.0, oh = outer_h / 2.0;
  const double iw = inner_w / 2.0, ih = inner_h / 2.0;
  const double s = slit_width / 2.0;
  // Outer rectangle CCW starting right of the slit (slit cut at the bottom
  // edge midline), inner rectangle traversed CW, joined through the slit.
  std::vector<Point2D> v = {
      {cx + s, cy - oh}, {cx + ow, cy - oh}, {cx + ow, cy + oh}, {cx - ow, cy + oh},
      {cx - ow, cy - oh}, {cx - s, cy - oh}, {cx - s, cy - ih}, {cx - iw, cy - ih},
      {cx - iw, cy + ih}, {cx + iw, cy + ih}, {cx + iw, cy - ih}, {cx + s, cy - ih},
  };
  return PolygonalRegion(std::move(v));
}

ScenarioGeometry paper_scenario(double storage_w, double storage_h) {
  ScenarioGeometry g{make_rectangle(0, 0, storage_w, storage_h),
                     make_rectangle(0, 0, 500, 300),
                     make_ring(0, 0, 499, 299, storage_w + 1.0, storage_h + 1.0),
                     1.0};
  g.validate();
  return g;
}

}  // namespace jamnet::harness
