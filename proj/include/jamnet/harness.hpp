#ifndef JAMNET_HARNESS_HPP
#define JAMNET_HARNESS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jamnet/learning.hpp"
#include "jamnet/placement.hpp"

namespace jamnet::harness {

// ---------------------------------------------------------------------------
// WPT policies
// ---------------------------------------------------------------------------

enum class PolicyKind { alp, eps_first, eps_first_cle, uniform, greedy };

struct PolicyConfig {
  PolicyKind kind{PolicyKind::alp};
  double delta{0.5};
  double delta_star{0.0};
  long eps_override{-1};
  bool ucb_bonus{false};

  static PolicyConfig from_json_text(const std::string& text);
};

learning::EpisodeResult run_policy(const WptEnvironment& env, long T, double budget,
                                   const PolicyConfig& config, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Placement scenarios
// ---------------------------------------------------------------------------

struct PlacementScenario {
  ScenarioGeometry geom;
  RadioParams radio;
  double delta_ratio{16.0};
  double r{0.5};
  std::vector<placement::PlacementRequest> stream;
  std::vector<Point2D> targets;  // distinct eavesdropping locations
};

struct ScenarioGenConfig {
  int n_eavesdroppers{6};
  int candidates_per_target{8};
  double duration_ratio{0.0};  // > 1 samples durations from [1, Gamma]
};

// Targets drawn uniformly from the fence boundary samples; per target a queue
// of candidate jammer positions in the allowable region; arrival order is a
// seeded shuffle.
PlacementScenario generate_eavesdropper_scenario(const ScenarioGeometry& geom,
                                                 const RadioParams& radio,
                                                 double delta_ratio, double r,
                                                 const ScenarioGenConfig& cfg,
                                                 std::uint64_t seed);

struct DecisionRow {
  long arrival{0};
  bool accept{false};
  placement::RejectReason reason{placement::RejectReason::none};
  double power{0.0};
  int channel{0};
};

struct PlacementRunResult {
  std::vector<DecisionRow> log;
  int accepted{0};
  double total_power{0.0};
  bool covered{false};
  long consumed{0};
  double sigma{0.0};
};

// Feeds the stream through JAM-SAFE-DISTANCE in arrival order. With
// stop_at_coverage the run ends once every scenario target has an accepted
// jammer; that acceptance count is the "jammers needed" metric.
PlacementRunResult run_placement_stream(const PlacementScenario& scenario, int F,
                                        double power_cap, bool stop_at_coverage,
                                        double sample_spacing);

std::string decision_csv(const PlacementRunResult& result);

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct SweepRow {
  std::string point;  // canonical "name=value;..." id
  int replication{0};
  std::uint64_t seed{0};
  std::string metric;
  double value{0.0};
};

struct SweepOutput {
  std::vector<SweepRow> rows;
  std::string csv;  // canonical ordering: point, replication, metric
};

std::string sweep_csv(const std::vector<SweepRow>& rows);

// Aggregates (mean, stderr, median) per (point, metric).
struct Aggregate {
  double mean{0.0};
  double stderr_{0.0};
  double median{0.0};
  int n{0};
};
std::map<std::pair<std::string, std::string>, Aggregate> aggregate_rows(
    const std::vector<SweepRow>& rows);

struct NeSweepConfig {
  std::vector<int> ne_values{1, 2, 3, 4, 5, 6};
  int replications{10};
  std::uint64_t seed_base{1};
  ScenarioGenConfig gen;
  int F{1};
};

SweepOutput run_ne_sweep(const PlacementScenario& base, const NeSweepConfig& cfg);

struct MultichannelSweepConfig {
  std::vector<int> channel_values{1, 2, 4};
  int replications{10};
  std::uint64_t seed_base{1};
  ScenarioGenConfig gen;
};

// Identical streams per replication across channel counts.
SweepOutput run_multichannel_sweep(const PlacementScenario& base,
                                   const MultichannelSweepConfig& cfg);

struct ParamSweepConfig {
  std::vector<double> eps_values{0.1, 0.2, 0.3, 0.4, 0.5};
  std::vector<double> delta_values{0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<int> phat_multipliers{1, 2, 3, 4, 5};  // cap = m / eps
  int replications{5};
  std::uint64_t seed_base{1};
  long T{300};
  double budget_fraction{0.5};  // budget = fraction * T * c_max
};

// The printed eps/delta/P-hat grids: eps -> exploration fraction, delta ->
// confidence parameter, P-hat -> power cap on placement requests.
SweepOutput run_param_sweep(const WptEnvironment& env, const PlacementScenario& placement,
                            const ParamSweepConfig& cfg);

// ---------------------------------------------------------------------------
// Output files
// ---------------------------------------------------------------------------

std::uint64_t fnv1a64(const std::string& bytes);
std::string write_output(const std::string& dir, const std::string& name,
                         const std::string& content);  // returns digest hex

// Manifest JSON: config hash, seed base, outputs with digests.
std::string manifest_json(const std::string& config_text, std::uint64_t seed_base,
                          const std::vector<std::pair<std::string, std::string>>& outputs);

// C-shaped ring polygon (outer rect minus inner rect, joined through a thin
// slit) for allowable regions between storage and fence.
PolygonalRegion make_ring(double cx, double cy, double outer_w, double outer_h,
                          double inner_w, double inner_h, double slit_width = 0.5);

// The standard paper-scale scenario: 500x300 fence, concentric storage,
// ring-shaped allowable region.
ScenarioGeometry paper_scenario(double storage_w = 400.0, double storage_h = 200.0);

}  // namespace jamnet::harness

#endif  // JAMNET_HARNESS_HPP
