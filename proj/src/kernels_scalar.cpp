#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "jamnet/kernels.hpp"

namespace jamnet::kernels {

PointsSoA::PointsSoA(const std::vector<Point2D>& pts) {
  x.reserve(pts.size());
  y.reserve(pts.size());
  for (const auto& p : pts) {
    x.push_back(p.x);
    y.push_back(p.y);
  }
}

namespace detail {

// d^(-gamma) from d^2. The even-integer exponents common in the simulations
// stay in plain multiplies so the scalar and SIMD paths agree bit for bit.
inline double pow_neg_gamma(double d2, double gamma) {
  if (gamma == 4.0) {
    return 1.0 / (d2 * d2);
  }
  if (gamma == 2.0) {
    return 1.0 / d2;
  }
  if (gamma == 6.0) {
    return 1.0 / (d2 * d2 * d2);
  }
  return std::pow(d2, -0.5 * gamma);
}

}  // namespace detail

void accumulate_interference_scalar(const double* xs, const double* ys,
                                    std::size_t n, double jx, double jy,
                                    double power, double gamma, double* acc) {
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - jx;
    const double dy = ys[i] - jy;
    const double d2 = dx * dx + dy * dy;
    acc[i] += power * detail::pow_neg_gamma(d2, gamma);
  }
}

double min_dist2_scalar(const double* xs, const double* ys, std::size_t n,
                        double px, double py) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - px;
    const double dy = ys[i] - py;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best) best = d2;
  }
  return best;
}

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

Backend detect_backend() {
  if (const char* env = std::getenv("JAMNET_KERNELS")) {
    const std::string v(env);
    if (v == "scalar") return Backend::scalar;
    if (v == "avx2" && cpu_has_avx2()) return Backend::avx2;
  }
  return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

}  // namespace

Backend active_backend() {
  static const Backend b = detect_backend();
  return b;
}

std::string backend_name() {
  return active_backend() == Backend::avx2 ? "avx2" : "scalar";
}

void accumulate_interference(const double* xs, const double* ys, std::size_t n,
                             double jx, double jy, double power, double gamma,
                             double* acc) {
#if defined(__x86_64__) || defined(_M_X64)
  if (active_backend() == Backend::avx2) {
    accumulate_interference_avx2(xs, ys, n, jx, jy, power, gamma, acc);
    return;
  }
#endif
  accumulate_interference_scalar(xs, ys, n, jx, jy, power, gamma, acc);
}

double min_dist2(const double* xs, const double* ys, std::size_t n, double px,
                 double py) {
#if defined(__x86_64__) || defined(_M_X64)
  if (active_backend() == Backend::avx2) {
    return min_dist2_avx2(xs, ys, n, px, py);
  }
#endif
  return min_dist2_scalar(xs, ys, n, px, py);
}

}  // namespace jamnet::kernels
