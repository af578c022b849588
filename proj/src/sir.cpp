#include "jamnet/sir.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace jamnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pow_neg_gamma(double d2, double gamma) {
  if (gamma == 4.0) return 1.0 / (d2 * d2);
  if (gamma == 2.0) return 1.0 / d2;
  if (gamma == 6.0) return 1.0 / (d2 * d2 * d2);
  return std::pow(d2, -0.5 * gamma);
}

// Interference at a single point; terms summed in jammer-index order.
double interference_at(std::span<const ActiveJammer> jammers, const Point2D& p,
                       double gamma, int channel) {
  double sum = 0.0;
  for (const auto& j : jammers) {
    if (j.channel != channel) continue;
    const double d2 = dist2(j.position, p);
    if (d2 == 0.0) throw DegenerateDistanceError("jammer coincides with evaluation point");
    sum += j.power * pow_neg_gamma(d2, gamma);
  }
  return sum;
}

}  // namespace

void RadioParams::validate() const {
  if (!(p_tx > 0.0) || !(p_rx > 0.0) || !(delta_s > 0.0) || !(delta_e > 0.0) ||
      !(gamma > 0.0)) {
    throw std::invalid_argument("radio parameters must be positive");
  }
}

double sir_at_receiver(std::span<const ActiveJammer> jammers, const Point2D& p_s,
                       const RadioParams& params, int channel) {
  const double interference = interference_at(jammers, p_s, params.gamma, channel);
  if (interference == 0.0) return kInf;
  return params.p_rx / interference;
}

double sir_at_eavesdropper(std::span<const ActiveJammer> jammers,
                           const Point2D& p_e, const ScenarioGeometry& geom,
                           const RadioParams& params, int channel) {
  if (geom.storage.contains(p_e)) {
    throw DegenerateDistanceError("eavesdropper point on or inside the storage");
  }
  const Point2D s = geom.storage.nearest_boundary_point(p_e);
  const double d2 = dist2(s, p_e);
  if (d2 == 0.0) throw DegenerateDistanceError("eavesdropper on the storage boundary");
  const double numerator = params.p_tx * pow_neg_gamma(d2, params.gamma);
  const double interference = interference_at(jammers, p_e, params.gamma, channel);
  if (interference == 0.0) return kInf;
  return numerator / interference;
}

SirField::SirField(const ScenarioGeometry& geom, const RadioParams& params,
                   double spacing)
    : geom_(&geom), params_(params) {
  params_.validate();
  if (!(spacing > 0.0)) throw std::invalid_argument("spacing must be > 0");
  storage_pts_ = kernels::PointsSoA(geom.storage.boundary_samples(spacing));
  fence_sample_pts_ = geom.fence.boundary_samples(spacing);
  fence_pts_ = kernels::PointsSoA(fence_sample_pts_);
  fence_numerator_.reserve(fence_sample_pts_.size());
  for (const auto& q : fence_sample_pts_) fence_numerator_.push_back(eaves_numerator(q));
}

double SirField::eaves_numerator(const Point2D& p_e) const {
  if (geom_->storage.contains(p_e)) {
    throw DegenerateDistanceError("eavesdropper point on or inside the storage");
  }
  const Point2D s = geom_->storage.nearest_boundary_point(p_e);
  const double d2 = dist2(s, p_e);
  if (d2 == 0.0) throw DegenerateDistanceError("eavesdropper on the storage boundary");
  return params_.p_tx * pow_neg_gamma(d2, params_.gamma);
}

ChannelReport SirField::evaluate_channel(std::span<const ActiveJammer> jammers,
                                         int channel,
                                         std::span<const Point2D> eaves_points) const {
  ChannelReport rep;
  rep.channel = channel;

  // Receiver side over storage boundary samples.
  std::vector<double> interf(storage_pts_.size(), 0.0);
  for (const auto& j : jammers) {
    if (j.channel != channel) continue;
    kernels::accumulate_interference(storage_pts_, j.position.x, j.position.y,
                                     j.power, params_.gamma, interf);
  }
  rep.receiver_sir.resize(interf.size());
  rep.min_receiver_sir = kInf;
  for (std::size_t i = 0; i < interf.size(); ++i) {
    if (!std::isfinite(interf[i]) && interf[i] != 0.0) {
      throw DegenerateDistanceError("jammer coincides with a storage boundary sample");
    }
    const double sir = interf[i] == 0.0 ? kInf : params_.p_rx / interf[i];
    rep.receiver_sir[i] = sir;
    if (sir < rep.min_receiver_sir) {
      rep.min_receiver_sir = sir;
      rep.argmin_receiver = storage_pts_.at(i);
    }
  }
  if (interf.empty()) rep.min_receiver_sir = kInf;

  // Eavesdropper side: explicit points, or the fence samples by default.
  const bool use_fence = eaves_points.empty();
  const std::size_t ne = use_fence ? fence_sample_pts_.size() : eaves_points.size();
  kernels::PointsSoA epts;
  std::vector<double> numer;
  if (!use_fence) {
    epts = kernels::PointsSoA(std::vector<Point2D>(eaves_points.begin(), eaves_points.end()));
    numer.reserve(ne);
    for (const auto& q : eaves_points) numer.push_back(eaves_numerator(q));
  }
  const kernels::PointsSoA& pts = use_fence ? fence_pts_ : epts;
  const std::vector<double>& num = use_fence ? fence_numerator_ : numer;

  std::vector<double> einterf(ne, 0.0);
  for (const auto& j : jammers) {
    if (j.channel != channel) continue;
    kernels::accumulate_interference(pts, j.position.x, j.position.y, j.power,
                                     params_.gamma, einterf);
  }
  rep.eaves_sir.resize(ne);
  rep.max_eaves_sir = ne == 0 ? 0.0 : -kInf;
  for (std::size_t i = 0; i < ne; ++i) {
    if (!std::isfinite(einterf[i]) && einterf[i] != 0.0) {
      throw DegenerateDistanceError("jammer coincides with an eavesdropper point");
    }
    const double sir = einterf[i] == 0.0 ? kInf : num[i] / einterf[i];
    rep.eaves_sir[i] = sir;
    if (sir > rep.max_eaves_sir) {
      rep.max_eaves_sir = sir;
      rep.argmax_eaves = pts.at(i);
    }
  }

  rep.receiver_ok = rep.min_receiver_sir > params_.delta_s;
  rep.eaves_ok = ne > 0 && rep.max_eaves_sir < params_.delta_e;
  rep.valid = rep.receiver_ok && rep.eaves_ok;
  return rep;
}

ConstraintReport SirField::validate(std::span<const ActiveJammer> jammers,
                                    std::span<const Point2D> eaves_points) const {
  int max_channel = 1;
  for (const auto& j : jammers) max_channel = std::max(max_channel, j.channel);
  ConstraintReport report;
  report.valid = true;
  for (int ch = 1; ch <= max_channel; ++ch) {
    report.channels.push_back(evaluate_channel(jammers, ch, eaves_points));
    report.valid = report.valid && report.channels.back().valid;
  }
  return report;
}

ConstraintReport validate_placement(std::span<const ActiveJammer> jammers,
                                    const ScenarioGeometry& geom,
                                    const RadioParams& params, double spacing,
                                    std::span<const Point2D> eaves_points) {
  SirField field(geom, params, spacing);
  return field.validate(jammers, eaves_points);
}

std::string ConstraintReport::to_json_text() const {
  nlohmann::json j;
  j["valid"] = valid;
  j["channels"] = nlohmann::json::array();
  for (const auto& ch : channels) {
    nlohmann::json c;
    c["channel"] = ch.channel;
    c["min_receiver_sir"] = ch.min_receiver_sir;
    c["argmin_point"] = {ch.argmin_receiver.x, ch.argmin_receiver.y};
    c["max_eaves_sir"] = ch.max_eaves_sir;
    c["argmax_point"] = {ch.argmax_eaves.x, ch.argmax_eaves.y};
    c["valid"] = ch.valid;
    j["channels"].push_back(c);
  }
  return j.dump(2);
}

}  // namespace jamnet
