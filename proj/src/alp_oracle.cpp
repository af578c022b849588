#include <cmath>
#include <stdexcept>
#include <vector>

#include "jamnet/alp.hpp"

namespace jamnet::alp {

namespace {

// Textbook dense simplex for: maximize c.x s.t. A x <= b, x >= 0, b >= 0.
// Bland's rule, so it terminates without cycling. Small instances only.
double simplex_max(const std::vector<std::vector<double>>& A,
                   const std::vector<double>& b, const std::vector<double>& c) {
  const std::size_t m = A.size();
  const std::size_t n = c.size();
  const std::size_t cols = n + m + 1;
  constexpr double kTol = 1e-11;

  std::vector<std::vector<double>> t(m + 1, std::vector<double>(cols, 0.0));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = A[i][j];
    t[i][n + i] = 1.0;
    t[i][cols - 1] = b[i];
    basis[i] = n + i;
  }
  for (std::size_t j = 0; j < n; ++j) t[m][j] = -c[j];

  for (int iter = 0; iter < 10000; ++iter) {
    // Bland: smallest-index improving column.
    std::size_t enter = cols;
    for (std::size_t j = 0; j + 1 < cols; ++j) {
      if (t[m][j] < -kTol) {
        enter = j;
        break;
      }
    }
    if (enter == cols) return t[m][cols - 1];  // optimal

    std::size_t leave = m;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] > kTol) {
        const double ratio = t[i][cols - 1] / t[i][enter];
        if (leave == m || ratio < best_ratio - kTol ||
            (std::abs(ratio - best_ratio) <= kTol && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave == m) throw std::runtime_error("simplex: unbounded LP");

    const double piv = t[leave][enter];
    for (std::size_t j = 0; j < cols; ++j) t[leave][j] /= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double f = t[i][enter];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols; ++j) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }
  throw std::runtime_error("simplex: iteration limit");
}

}  // namespace

double lp_bruteforce(std::span<const double> pi, const Matrix& means,
                     const Matrix& costs, double rho) {
  const std::size_t K = pi.size();
  if (K == 0 || means.size() != K || costs.size() != K) {
    throw std::invalid_argument("lp_bruteforce: dimension mismatch");
  }
  const std::size_t J = means[0].size();
  if (K * J > 16) throw std::invalid_argument("lp_bruteforce: instance too large");
  if (rho < 0.0) throw std::invalid_argument("lp_bruteforce: rho must be >= 0");

  const std::size_t n = K * J;
  std::vector<double> obj(n, 0.0);
  std::vector<std::vector<double>> A;
  std::vector<double> b;

  // Budget row.
  {
    std::vector<double> row(n, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t j = 0; j < J; ++j) row[k * J + j] = pi[k] * costs[k][j];
    }
    A.push_back(row);
    b.push_back(rho);
  }
  // Per-context probability rows.
  for (std::size_t k = 0; k < K; ++k) {
    std::vector<double> row(n, 0.0);
    for (std::size_t j = 0; j < J; ++j) row[k * J + j] = 1.0;
    A.push_back(row);
    b.push_back(1.0);
  }
  // Upper bounds p <= 1.
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<double> row(n, 0.0);
    row[v] = 1.0;
    A.push_back(row);
    b.push_back(1.0);
  }
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < J; ++j) obj[k * J + j] = pi[k] * means[k][j];
  }
  return simplex_max(A, b, obj);
}

}  // namespace jamnet::alp
