#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "jamnet/kernels.hpp"

namespace jamnet::kernels {

namespace {

// Per-lane op sequence mirrors the scalar kernel exactly (mul/add, no FMA),
// so both backends produce identical bits.
inline __m256d dist2_pd(const double* xs, const double* ys, std::size_t i,
                        __m256d jx, __m256d jy) {
  const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), jx);
  const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), jy);
  return _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
}

}  // namespace

void accumulate_interference_avx2(const double* xs, const double* ys,
                                  std::size_t n, double jx, double jy,
                                  double power, double gamma, double* acc) {
  const __m256d vjx = _mm256_set1_pd(jx);
  const __m256d vjy = _mm256_set1_pd(jy);
  const __m256d vp = _mm256_set1_pd(power);
  const __m256d ones = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  if (gamma == 4.0) {
    for (; i + 4 <= n; i += 4) {
      const __m256d d2 = dist2_pd(xs, ys, i, vjx, vjy);
      const __m256d w = _mm256_div_pd(ones, _mm256_mul_pd(d2, d2));
      const __m256d a = _mm256_loadu_pd(acc + i);
      _mm256_storeu_pd(acc + i, _mm256_add_pd(a, _mm256_mul_pd(vp, w)));
    }
  } else if (gamma == 2.0) {
    for (; i + 4 <= n; i += 4) {
      const __m256d d2 = dist2_pd(xs, ys, i, vjx, vjy);
      const __m256d w = _mm256_div_pd(ones, d2);
      const __m256d a = _mm256_loadu_pd(acc + i);
      _mm256_storeu_pd(acc + i, _mm256_add_pd(a, _mm256_mul_pd(vp, w)));
    }
  } else if (gamma == 6.0) {
    for (; i + 4 <= n; i += 4) {
      const __m256d d2 = dist2_pd(xs, ys, i, vjx, vjy);
      const __m256d d6 = _mm256_mul_pd(_mm256_mul_pd(d2, d2), d2);
      const __m256d w = _mm256_div_pd(ones, d6);
      const __m256d a = _mm256_loadu_pd(acc + i);
      _mm256_storeu_pd(acc + i, _mm256_add_pd(a, _mm256_mul_pd(vp, w)));
    }
  } else {
    // No vector pow; evaluate std::pow per lane on the SIMD-computed d2.
    alignas(32) double d2s[4];
    for (; i + 4 <= n; i += 4) {
      _mm256_store_pd(d2s, dist2_pd(xs, ys, i, vjx, vjy));
      for (int l = 0; l < 4; ++l) {
        acc[i + l] += power * std::pow(d2s[l], -0.5 * gamma);
      }
    }
  }
  accumulate_interference_scalar(xs + i, ys + i, n - i, jx, jy, power, gamma,
                                 acc + i);
}

double min_dist2_avx2(const double* xs, const double* ys, std::size_t n,
                      double px, double py) {
  const __m256d vpx = _mm256_set1_pd(px);
  const __m256d vpy = _mm256_set1_pd(py);
  __m256d vbest = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    vbest = _mm256_min_pd(vbest, dist2_pd(xs, ys, i, vpx, vpy));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, vbest);
  double best = std::min(std::min(lanes[0], lanes[1]), std::min(lanes[2], lanes[3]));
  const double tail = min_dist2_scalar(xs + i, ys + i, n - i, px, py);
  return std::min(best, tail);
}

}  // namespace jamnet::kernels

#endif  // x86_64
