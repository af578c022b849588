#include "jamnet/placement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace jamnet::placement {

namespace {

double pow_neg_gamma(double d2, double gamma) {
  if (gamma == 4.0) return 1.0 / (d2 * d2);
  if (gamma == 2.0) return 1.0 / d2;
  if (gamma == 6.0) return 1.0 / (d2 * d2 * d2);
  return std::pow(d2, -0.5 * gamma);
}

constexpr double kLengthTol = 1e-9;

}  // namespace

SafeDistance safe_distance(double delta_ratio, double r, const RadioParams& params) {
  params.validate();
  if (!(params.gamma > 2.0)) {
    throw std::invalid_argument("safe distance requires gamma > 2");
  }
  if (!(delta_ratio >= 1.0)) throw std::invalid_argument("delta_ratio must be >= 1");
  SafeDistance out;
  out.receiver_term = 4.0 * std::pow(delta_ratio, r) *
                      std::pow(72.0 * params.delta_s /
                                   (params.p_rx * (params.gamma - 2.0)),
                               1.0 / params.gamma);
  out.eaves_term = std::pow(delta_ratio, 1.0 - r) *
                   std::pow(params.p_tx / params.delta_e, 1.0 / params.gamma);
  const double need = std::max(out.receiver_term, out.eaves_term);
  const double cap = 2.0 * delta_ratio;
  if (need > cap * (1.0 + 1e-12)) {
    throw InfeasibleConfigError(
        "required safe distance exceeds the 2*Delta cap; no valid sigma exists");
  }
  out.base_sigma = std::min(cap, need);
  out.sigma = out.base_sigma;
  if (r > 1.0) {
    out.sigma = std::pow(delta_ratio, r) * out.base_sigma;
  } else if (r < 0.0) {
    out.sigma = std::pow(delta_ratio, 1.0 - r) * out.base_sigma;
  }
  return out;
}

double PowerPolicy::power(double length, double gamma) const {
  if (kind == Kind::polynomial) return std::pow(length, r * gamma);
  if (table.empty()) throw std::invalid_argument("table power policy without entries");
  if (length <= table.front().first) return table.front().second;
  if (length >= table.back().first) return table.back().second;
  for (std::size_t i = 0; i + 1 < table.size(); ++i) {
    if (length <= table[i + 1].first) {
      const double t = (length - table[i].first) / (table[i + 1].first - table[i].first);
      return table[i].second + t * (table[i + 1].second - table[i].second);
    }
  }
  return table.back().second;
}

int channel_class(double length, double delta_ratio, int F) {
  if (F < 1) throw std::invalid_argument("channel count must be >= 1");
  if (length < 1.0 - kLengthTol || length > delta_ratio * (1.0 + kLengthTol)) {
    throw std::invalid_argument("length outside [1, Delta]");
  }
  if (F == 1 || delta_ratio <= 1.0) return 1;
  const double ratio = static_cast<double>(F) * std::log(std::max(length, 1.0)) /
                       std::log(delta_ratio);
  const double nearest = std::round(ratio);
  int ch;
  if (std::abs(ratio - nearest) < 1e-9) {
    ch = std::max(1, static_cast<int>(nearest));  // boundary -> lower channel
  } else {
    ch = static_cast<int>(std::floor(ratio)) + 1;
  }
  return std::clamp(ch, 1, F);
}

LayerSum layer_sum_bound(double gamma) {
  if (!(gamma > 2.0)) throw std::invalid_argument("series diverges for gamma <= 2");
  LayerSum out;
  out.bound = 36.0 / (gamma - 2.0);
  double sum = 0.0;
  double l = 3.0;
  double tail = std::numeric_limits<double>::infinity();
  const double cap = 2e7;
  while (l <= cap) {
    sum += (2.0 * l - 1.0) / std::pow(l - 1.0, gamma);
    if (std::fmod(l, 4096.0) == 0.0 || l < 16.0) {
      // Integral tail bound for the decreasing summand.
      const double m = l;  // next index is l+1; integrate from m
      tail = 2.0 * std::pow(m - 1.0, 2.0 - gamma) / (gamma - 2.0) +
             std::pow(m - 1.0, 1.0 - gamma) / (gamma - 1.0);
      if (4.0 * tail < 1e-12) break;
    }
    l += 1.0;
  }
  if (!(4.0 * tail < 1e-12)) {
    // Close the sum with the (upper) tail estimate; keeps the returned value
    // a valid upper bound for slowly converging gamma.
    sum += tail;
  }
  out.series = 4.0 * sum;
  return out;
}

double density_bound(double x, const RadioParams& params, double max_gap) {
  if (!(x >= 1.0)) throw std::invalid_argument("sector side must be >= 1");
  return (params.delta_e * std::pow(3.0, params.gamma) *
          std::pow(max_gap, params.gamma) / params.delta_s) *
         (params.p_rx / params.p_tx) * (x + 1.0) * (x + 1.0);
}

std::string to_string(RejectReason r) {
  switch (r) {
    case RejectReason::none: return "accepted";
    case RejectReason::outside_allowable: return "outside_allowable";
    case RejectReason::length_out_of_range: return "length_out_of_range";
    case RejectReason::storage_too_close: return "storage_too_close";
    case RejectReason::safe_distance_conflict: return "safe_distance_conflict";
    case RejectReason::power_cap: return "power_cap";
  }
  return "unknown";
}

AdmissionState::AdmissionState(const ScenarioGeometry& geom, const RadioParams& params,
                               double delta_ratio, PowerPolicy policy, int channels,
                               double sample_spacing, double power_cap)
    : geom_(&geom), params_(params), delta_ratio_(delta_ratio),
      policy_(std::move(policy)), channels_(channels), power_cap_(power_cap) {
  sigma_ = safe_distance(delta_ratio_, policy_.r, params_).sigma;
  storage_samples_ =
      kernels::PointsSoA(geom.storage.boundary_samples(sample_spacing));
  const auto gap = region_gap(geom.storage, geom.fence, sample_spacing);
  eq17_holds_ = gap.first >= (std::sqrt(2.0) + 2.0) * sigma_;
}

AdmissionDecision AdmissionState::admit(const PlacementRequest& req, long now) {
  AdmissionDecision dec;
  const double len = req.length();
  if (len < 1.0 - kLengthTol || len > delta_ratio_ * (1.0 + kLengthTol)) {
    dec.reason = RejectReason::length_out_of_range;
    return dec;
  }
  if (!geom_->allowable.contains(req.jammer)) {
    dec.reason = RejectReason::outside_allowable;
    return dec;
  }
  const double power = policy_.power(len, params_.gamma);
  if (power > power_cap_) {
    dec.reason = RejectReason::power_cap;
    return dec;
  }
  const int channel = channel_class(len, delta_ratio_, channels_);

  // (a) guarded distance to the storage boundary.
  const double d2s = kernels::min_dist2(storage_samples_, req.jammer);
  if (d2s < sigma_ * sigma_) {
    dec.reason = RejectReason::storage_too_close;
    return dec;
  }
  // (b) pairwise cross distances against active same-channel jammers.
  const double t_end =
      req.duration == kForever ? kForever : static_cast<double>(now) + req.duration;
  for (const auto& acc : accepted_) {
    if (acc.channel != channel) continue;
    if (acc.expiry <= static_cast<double>(now)) continue;  // expired never blocks
    (void)t_end;  // accepted arrivals precede `now`; overlap reduces to expiry > now
    const double cross = std::max(dist(req.jammer, acc.request.target),
                                  dist(acc.request.jammer, req.target));
    if (cross < sigma_) {
      dec.reason = RejectReason::safe_distance_conflict;
      return dec;
    }
  }
  dec.accepted = true;
  dec.power = power;
  dec.channel = channel;
  accepted_.push_back({req, power, channel,
                       req.duration == kForever
                           ? kForever
                           : static_cast<double>(now) + req.duration});
  return dec;
}

std::vector<ActiveJammer> AdmissionState::active_jammers(double now) const {
  std::vector<ActiveJammer> out;
  for (const auto& a : accepted_) {
    if (a.expiry > now) out.push_back({a.request.jammer, a.power, a.channel});
  }
  return out;
}

std::vector<PlacementRequest> adversarial_stream(double delta_ratio, int n_small,
                                                 const ScenarioGeometry& geom,
                                                 double sigma) {
  if (!(delta_ratio >= 2.0)) throw std::invalid_argument("delta_ratio must be >= 2");
  // Work along the longest fence edge; the interior is to its left (CCW).
  const auto& verts = geom.fence.vertices();
  std::size_t e = 0;
  double best_len = 0.0;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const double l = dist(verts[i], verts[(i + 1) % verts.size()]);
    if (l > best_len) {
      best_len = l;
      e = i;
    }
  }
  const Point2D a = verts[e];
  const Point2D b = verts[(e + 1) % verts.size()];
  const double len = dist(a, b);
  const Point2D t_hat{(b.x - a.x) / len, (b.y - a.y) / len};
  const Point2D n_hat{-t_hat.y, t_hat.x};  // inward for CCW order
  const Point2D mid{(a.x + b.x) / 2.0, (a.y + b.y) / 2.0};
  const auto at = [&](double s, double h) {
    return Point2D{mid.x + s * t_hat.x + h * n_hat.x, mid.y + s * t_hat.y + h * n_hat.y};
  };

  std::vector<PlacementRequest> stream;
  // First request: jammer one unit inside the fence, target Delta away along
  // the fence so the request has the maximal length.
  const double s_target = std::sqrt(delta_ratio * delta_ratio - 1.0);
  PlacementRequest first;
  first.jammer = at(0.0, 1.0);
  first.target = at(s_target, 0.0);
  first.arrival = 0;
  stream.push_back(first);

  if (n_small <= 0) return stream;
  // Unit-length requests whose cross distances to the first request both stay
  // under sigma: the zone the online rule blocks.
  const double hw = sigma > 1.0 ? std::sqrt(sigma * sigma - 1.0) : 0.0;
  const double lo = std::max(1.0, s_target - hw + 0.5);
  const double hi = std::min(hw - 0.5, len / 2.0 - 1.0);
  long arrival = 1;
  for (double s = lo; s <= hi && static_cast<int>(stream.size()) <= n_small; s += 1.0) {
    PlacementRequest r;
    r.target = at(s, 0.0);
    r.jammer = at(s, 1.0);
    r.arrival = arrival++;
    stream.push_back(r);
  }
  return stream;
}

namespace {

// Incremental Eq.-(6) feasibility for subsets of one request stream:
// receiver constraint over storage samples per channel, plus every chosen
// request's own target jammed.
class PackerEval {
 public:
  PackerEval(std::span<const PlacementRequest> reqs, const ScenarioGeometry& geom,
             const RadioParams& params, const PowerPolicy& policy,
             double delta_ratio, int channels, double spacing)
      : n_(reqs.size()), params_(params) {
    const auto samples = geom.storage.boundary_samples(spacing);
    const std::size_t S = samples.size();
    power_.resize(n_);
    channel_.resize(n_);
    need_.resize(n_);
    contr_r_.assign(n_, std::vector<double>(S, 0.0));
    contr_e_.assign(n_, std::vector<double>(n_, 0.0));
    for (std::size_t i = 0; i < n_; ++i) {
      const double len = reqs[i].length();
      power_[i] = policy.power(len, params.gamma);
      channel_[i] = channel_class(len, delta_ratio, channels);
      const Point2D s_pt = geom.storage.nearest_boundary_point(reqs[i].target);
      const double numer =
          params.p_tx * pow_neg_gamma(dist2(s_pt, reqs[i].target), params.gamma);
      need_[i] = numer / params.delta_e;  // interference must exceed this
      for (std::size_t s = 0; s < S; ++s) {
        contr_r_[i][s] = power_[i] * pow_neg_gamma(dist2(reqs[i].jammer, samples[s]),
                                                   params.gamma);
      }
    }
    for (std::size_t j = 0; j < n_; ++j) {
      for (std::size_t i = 0; i < n_; ++i) {
        if (channel_[j] != channel_[i]) continue;
        contr_e_[j][i] =
            power_[j] * pow_neg_gamma(dist2(reqs[j].jammer, reqs[i].target), params.gamma);
      }
    }
    int max_ch = 1;
    for (int c : channel_) max_ch = std::max(max_ch, c);
    interf_r_.assign(max_ch + 1, std::vector<double>(S, 0.0));
    receiver_limit_ = params.p_rx / params.delta_s;  // interference must stay below
    viol_r_.assign(max_ch + 1, 0);
    interf_e_.assign(n_, 0.0);
    chosen_.assign(n_, false);
  }

  void flip(std::size_t j) {
    const bool adding = !chosen_[j];
    const double sign = adding ? 1.0 : -1.0;
    auto& ir = interf_r_[channel_[j]];
    long& viol = viol_r_[channel_[j]];
    const auto& cr = contr_r_[j];
    for (std::size_t s = 0; s < ir.size(); ++s) {
      const bool was = ir[s] >= receiver_limit_;
      ir[s] += sign * cr[s];
      const bool now = ir[s] >= receiver_limit_;
      viol += static_cast<long>(now) - static_cast<long>(was);
    }
    for (std::size_t i = 0; i < n_; ++i) {
      if (i == j || channel_[i] != channel_[j]) continue;
      const bool was_ok = interf_e_[i] > need_[i];
      interf_e_[i] += sign * contr_e_[j][i];
      const bool now_ok = interf_e_[i] > need_[i];
      if (chosen_[i]) {
        underjammed_ += static_cast<long>(!now_ok) - static_cast<long>(!was_ok);
      }
    }
    // The jammer contributes to its own target; membership changes with the flip.
    if (adding) {
      interf_e_[j] += contr_e_[j][j];
      chosen_[j] = true;
      if (!(interf_e_[j] > need_[j])) ++underjammed_;
    } else {
      if (!(interf_e_[j] > need_[j])) --underjammed_;
      chosen_[j] = false;
      interf_e_[j] -= contr_e_[j][j];
    }
  }

  bool feasible() const {
    if (underjammed_ != 0) return false;
    for (long v : viol_r_) {
      if (v != 0) return false;
    }
    return true;
  }

  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  RadioParams params_;
  std::vector<double> power_;
  std::vector<int> channel_;
  std::vector<double> need_;
  std::vector<std::vector<double>> contr_r_;
  std::vector<std::vector<double>> contr_e_;
  std::vector<std::vector<double>> interf_r_;
  std::vector<long> viol_r_;
  std::vector<double> interf_e_;
  std::vector<bool> chosen_;
  double receiver_limit_{0.0};
  long underjammed_{0};
};

}  // namespace

PackResult offline_packer(std::span<const PlacementRequest> requests,
                          const ScenarioGeometry& geom, const RadioParams& params,
                          const PowerPolicy& policy, double delta_ratio, int channels,
                          double sample_spacing) {
  PackResult result;
  const std::size_t n = requests.size();
  if (n == 0) return result;
  PackerEval eval(requests, geom, params, policy, delta_ratio, channels,
                  sample_spacing);

  if (n <= 20) {
    result.exact = true;
    // Gray-code walk over all subsets; one flip per step.
    std::vector<bool> current(n, false);
    std::vector<std::size_t> best;
    long popcount = 0;
    std::uint32_t prev_gray = 0;
    const std::uint32_t total = 1u << n;
    for (std::uint32_t k = 1; k < total; ++k) {
      const std::uint32_t gray = k ^ (k >> 1);
      const std::uint32_t diff = gray ^ prev_gray;
      prev_gray = gray;
      std::size_t bit = 0;
      while (!((diff >> bit) & 1u)) ++bit;
      eval.flip(bit);
      popcount += current[bit] ? -1 : 1;
      current[bit] = !current[bit];
      if (popcount > static_cast<long>(best.size()) && eval.feasible()) {
        best.clear();
        for (std::size_t i = 0; i < n; ++i) {
          if (current[i]) best.push_back(i);
        }
      }
    }
    result.chosen = std::move(best);
    return result;
  }

  // Greedy shortest-first, then one local-insertion pass over the leftovers.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return requests[a].length() < requests[b].length();
  });
  std::vector<bool> in(n, false);
  const auto try_add = [&](std::size_t i) {
    eval.flip(i);
    if (eval.feasible()) {
      in[i] = true;
      return true;
    }
    eval.flip(i);
    return false;
  };
  for (std::size_t i : order) try_add(i);
  for (std::size_t i : order) {
    if (!in[i]) try_add(i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (in[i]) result.chosen.push_back(i);
  }
  return result;
}

std::string stream_to_jsonl(std::span<const PlacementRequest> requests) {
  std::ostringstream os;
  for (const auto& r : requests) {
    nlohmann::json j;
    j["jammer"] = {r.jammer.x, r.jammer.y};
    j["target"] = {r.target.x, r.target.y};
    if (r.duration == kForever) {
      j["duration"] = nullptr;
    } else {
      j["duration"] = r.duration;
    }
    j["arrival"] = r.arrival;
    os << j.dump() << '\n';
  }
  return os.str();
}

std::vector<PlacementRequest> stream_from_jsonl(const std::string& text) {
  std::vector<PlacementRequest> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    PlacementRequest r;
    r.jammer = {j.at("jammer")[0].get<double>(), j.at("jammer")[1].get<double>()};
    r.target = {j.at("target")[0].get<double>(), j.at("target")[1].get<double>()};
    r.duration = j.at("duration").is_null() ? kForever : j.at("duration").get<double>();
    r.arrival = j.value("arrival", 0l);
    out.push_back(r);
  }
  return out;
}

}  // namespace jamnet::placement
