#ifndef JAMNET_KERNELS_HPP
#define JAMNET_KERNELS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "jamnet/geometry.hpp"

namespace jamnet::kernels {

// Structure-of-arrays point set; the layout the kernels consume.
struct PointsSoA {
  std::vector<double> x;
  std::vector<double> y;

  PointsSoA() = default;
  explicit PointsSoA(const std::vector<Point2D>& pts);
  std::size_t size() const { return x.size(); }
  Point2D at(std::size_t i) const { return Point2D{x[i], y[i]}; }
};

// acc[i] += power * d((jx,jy), pts[i])^(-gamma).
// A coincident point (d == 0) pushes +inf into acc[i]; callers treat a
// non-finite accumulator as a degenerate-distance condition.
void accumulate_interference_scalar(const double* xs, const double* ys,
                                    std::size_t n, double jx, double jy,
                                    double power, double gamma, double* acc);

// min_i d((px,py), pts[i])^2
double min_dist2_scalar(const double* xs, const double* ys, std::size_t n,
                        double px, double py);

#if defined(__x86_64__) || defined(_M_X64)
void accumulate_interference_avx2(const double* xs, const double* ys,
                                  std::size_t n, double jx, double jy,
                                  double power, double gamma, double* acc);
double min_dist2_avx2(const double* xs, const double* ys, std::size_t n,
                      double px, double py);
#endif

enum class Backend { scalar, avx2 };

// Picked once at startup from CPUID; JAMNET_KERNELS=scalar|avx2 overrides.
Backend active_backend();
std::string backend_name();

// Dispatched entry points.
void accumulate_interference(const double* xs, const double* ys, std::size_t n,
                             double jx, double jy, double power, double gamma,
                             double* acc);
double min_dist2(const double* xs, const double* ys, std::size_t n, double px,
                 double py);

inline void accumulate_interference(const PointsSoA& pts, double jx, double jy,
                                    double power, double gamma,
                                    std::vector<double>& acc) {
  accumulate_interference(pts.x.data(), pts.y.data(), pts.size(), jx, jy, power,
                          gamma, acc.data());
}

inline double min_dist2(const PointsSoA& pts, const Point2D& p) {
  return min_dist2(pts.x.data(), pts.y.data(), pts.size(), p.x, p.y);
}

}  // namespace jamnet::kernels

#endif  // JAMNET_KERNELS_HPP
