#ifndef JAMNET_PLACEMENT_HPP
#define JAMNET_PLACEMENT_HPP

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "jamnet/geometry.hpp"
#include "jamnet/kernels.hpp"
#include "jamnet/sir.hpp"

namespace jamnet::placement {

inline constexpr double kForever = std::numeric_limits<double>::infinity();

struct PlacementRequest {
  Point2D jammer;
  Point2D target;              // eavesdropping location on the fence
  double duration{kForever};   // slots; kForever = never expires
  long arrival{0};

  double length() const { return dist(jammer, target); }
};

struct InfeasibleConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SafeDistance {
  double sigma{0.0};          // effective safe distance for the given r
  double base_sigma{0.0};     // the min{2 Delta, max{...}} value
  double receiver_term{0.0};  // 4 Delta^r (72 delta_s / (p_rx (gamma-2)))^(1/gamma)
  double eaves_term{0.0};     // Delta^(1-r) (p_tx / delta_e)^(1/gamma)
};

// Safe distance for max/min length ratio `delta_ratio` and polynomial power
// exponent r. Throws InfeasibleConfigError when the constraint-derived lower
// bound exceeds the 2*Delta cap, and std::invalid_argument for gamma <= 2.
SafeDistance safe_distance(double delta_ratio, double r, const RadioParams& params);

struct PowerPolicy {
  enum class Kind { polynomial, table };
  Kind kind{Kind::polynomial};
  double r{0.5};
  std::vector<std::pair<double, double>> table;  // (length, power), sorted

  double power(double length, double gamma) const;
  static PowerPolicy polynomial(double r_) { return PowerPolicy{Kind::polynomial, r_, {}}; }
};

// Channel i such that Delta^((i-1)/F) <= length <= Delta^(i/F); exact class
// boundaries go to the lower channel.
int channel_class(double length, double delta_ratio, int F);

struct LayerSum {
  double series{0.0};  // 4 * sum_{l>=3} (l^2-(l-1)^2)/(l-1)^gamma, truncated
  double bound{0.0};   // 36/(gamma-2)
};

LayerSum layer_sum_bound(double gamma);

// Density cap on feasible jammers in a sector of side x.
double density_bound(double x, const RadioParams& params, double max_gap);

enum class RejectReason {
  none,
  outside_allowable,
  length_out_of_range,
  storage_too_close,
  safe_distance_conflict,
  power_cap,
};

std::string to_string(RejectReason r);

struct AcceptedJammer {
  PlacementRequest request;
  double power{0.0};
  int channel{1};
  double expiry{kForever};  // arrival + duration
};

struct AdmissionDecision {
  bool accepted{false};
  RejectReason reason{RejectReason::none};
  double power{0.0};
  int channel{0};
};

// Online JAM-SAFE-DISTANCE state. Decisions are irrevocable; expired
// requests stop blocking.
class AdmissionState {
 public:
  AdmissionState(const ScenarioGeometry& geom, const RadioParams& params,
                 double delta_ratio, PowerPolicy policy, int channels,
                 double sample_spacing, double power_cap = kForever);

  double sigma() const { return sigma_; }
  int channels() const { return channels_; }
  const std::vector<AcceptedJammer>& accepted() const { return accepted_; }
  bool eq17_holds() const { return eq17_holds_; }

  AdmissionDecision admit(const PlacementRequest& req, long now);

  // Active accepted jammers at time `now` as a SIR-checkable set.
  std::vector<ActiveJammer> active_jammers(double now) const;

 private:
  const ScenarioGeometry* geom_;
  RadioParams params_;
  double delta_ratio_;
  PowerPolicy policy_;
  int channels_;
  double power_cap_;
  double sigma_;
  bool eq17_holds_{false};
  kernels::PointsSoA storage_samples_;
  std::vector<AcceptedJammer> accepted_;
};

// Theorem-9 style stream: one max-length request, then unit-length requests
// packed along the fence inside the area the online rule blocks.
std::vector<PlacementRequest> adversarial_stream(double delta_ratio, int n_small,
                                                 const ScenarioGeometry& geom,
                                                 double sigma);

struct PackResult {
  std::vector<std::size_t> chosen;  // indices into the request stream
  bool exact{false};                // exhaustive (streams <= 20) vs greedy
};

// Offline feasibility stand-in for OPT: receiver constraint over the storage
// boundary plus every chosen request's own target jammed. Exhaustive
// max-cardinality search up to 20 requests, greedy shortest-first beyond.
PackResult offline_packer(std::span<const PlacementRequest> requests,
                          const ScenarioGeometry& geom, const RadioParams& params,
                          const PowerPolicy& policy, double delta_ratio, int channels,
                          double sample_spacing);

// Stream (de)serialization: one request per line
// {"jammer":[x,y],"target":[x,y],"duration":t|null,"arrival":slot}
std::string stream_to_jsonl(std::span<const PlacementRequest> requests);
std::vector<PlacementRequest> stream_from_jsonl(const std::string& text);

}  // namespace jamnet::placement

#endif  // JAMNET_PLACEMENT_HPP
