#ifndef JAMNET_SIR_HPP
#define JAMNET_SIR_HPP

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "jamnet/geometry.hpp"
#include "jamnet/kernels.hpp"

namespace jamnet {

struct RadioParams {
  double p_tx{1.0};     // legitimate transmit power seen by eavesdroppers
  double p_rx{1.0};     // legitimate received power inside the storage
  double delta_s{1.0};  // receiver SIR must stay strictly above this
  double delta_e{1.0};  // eavesdropper SIR must stay strictly below this
  double gamma{4.0};    // path-loss exponent

  void validate() const;
  bool gamma_typical() const { return gamma >= 2.0 && gamma <= 6.0; }
};

struct ActiveJammer {
  Point2D position;
  double power{1.0};
  int channel{1};
};

struct DegenerateDistanceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Eq.-style receiver SIR: p_rx / sum_j P_j d(j, p_s)^-gamma over jammers on
// `channel`. Empty interference -> +inf.
double sir_at_receiver(std::span<const ActiveJammer> jammers, const Point2D& p_s,
                       const RadioParams& params, int channel);

// Eavesdropper SIR with the numerator taken from the nearest storage boundary
// point: p_tx d(s(p_e), p_e)^-gamma / interference.
double sir_at_eavesdropper(std::span<const ActiveJammer> jammers,
                           const Point2D& p_e, const ScenarioGeometry& geom,
                           const RadioParams& params, int channel);

struct ChannelReport {
  int channel{1};
  double min_receiver_sir{0.0};
  Point2D argmin_receiver{};
  double max_eaves_sir{0.0};
  Point2D argmax_eaves{};
  bool receiver_ok{false};
  bool eaves_ok{false};
  bool valid{false};
  std::vector<double> receiver_sir;  // per storage-boundary sample
  std::vector<double> eaves_sir;     // per evaluated eavesdropper point
};

struct ConstraintReport {
  std::vector<ChannelReport> channels;
  bool valid{false};
  std::string to_json_text() const;
};

// Precomputed sample arrays for one geometry + radio parameterization. The
// interference accumulations run through the SIMD kernels; summation order is
// jammer index, so results do not depend on the backend.
class SirField {
 public:
  SirField(const ScenarioGeometry& geom, const RadioParams& params, double spacing);

  const kernels::PointsSoA& storage_points() const { return storage_pts_; }
  const kernels::PointsSoA& fence_points() const { return fence_pts_; }
  const RadioParams& params() const { return params_; }

  // p_tx * d(s(p_e), p_e)^-gamma for an arbitrary eavesdropper point.
  double eaves_numerator(const Point2D& p_e) const;

  ChannelReport evaluate_channel(std::span<const ActiveJammer> jammers, int channel,
                                 std::span<const Point2D> eaves_points) const;

  // Channels are taken from the jammer set (always at least channel 1).
  // When `eaves_points` is empty the fence samples are used.
  ConstraintReport validate(std::span<const ActiveJammer> jammers,
                            std::span<const Point2D> eaves_points = {}) const;

 private:
  const ScenarioGeometry* geom_;
  RadioParams params_;
  kernels::PointsSoA storage_pts_;
  kernels::PointsSoA fence_pts_;
  std::vector<Point2D> fence_sample_pts_;
  std::vector<double> fence_numerator_;
};

// One-shot convenience wrapper around SirField::validate.
ConstraintReport validate_placement(std::span<const ActiveJammer> jammers,
                                    const ScenarioGeometry& geom,
                                    const RadioParams& params, double spacing,
                                    std::span<const Point2D> eaves_points = {});

}  // namespace jamnet

#endif  // JAMNET_SIR_HPP
