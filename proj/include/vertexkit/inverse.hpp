#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>

#include "vertexkit/basis.hpp"
#include "vertexkit/common.hpp"
#include "vertexkit/modes.hpp"

namespace vertexkit {

enum class InverseRoute { ansatz, special_plus, special_minus };

// Parameters for inverting beta*M1^T + alpha*M2^T.  The inverse is
// alpha'*M1 + beta'*M2; p = 0 marks the two special routes where the
// combination collapses to M1 -+ M2 up to scale.
struct InverseParams {
  double alpha = 0.0;
  double beta = 0.0;
  int p = 0;
  double alpha_prime = 0.0;
  double beta_prime = 0.0;
  InverseRoute route = InverseRoute::ansatz;
  std::optional<int> k;
};

inline InverseParams solve_params(double alpha, double beta) {
  require(beta != 0.0, "beta must be nonzero");
  const double ratio = alpha / beta;
  InverseParams out;
  out.alpha = alpha;
  out.beta = beta;
  if (std::abs(ratio - 1.0) <= 1e-9 || std::abs(ratio + 1.0) <= 1e-9) {
    out.route = ratio > 0.0 ? InverseRoute::special_plus : InverseRoute::special_minus;
    out.p = 0;
    out.alpha_prime = 1.0 / alpha;
    out.beta_prime = -1.0 / beta;
    return out;
  }
  for (int p = 2; p <= 64; ++p) {
    const double c = std::cos(pi / p);
    if (std::abs(std::abs(ratio) - c) <= 1e-9) {
      const double s = std::sin(pi / p);
      out.route = InverseRoute::ansatz;
      out.p = p;
      out.alpha_prime = 1.0 / (2.0 * s * beta);
      out.beta_prime = (p == 2) ? 0.0 : -c / (2.0 * s * alpha);
      return out;
    }
  }
  throw std::domain_error("alpha/beta matches no invertible family");
}

// Residual of the two bilinear relations the primed coefficients satisfy.
inline double params_condition_residual(const InverseParams& pr) {
  if (pr.route != InverseRoute::ansatz) return 0.0;
  const double c = std::cos(pi / pr.p);
  const double c1 = pr.beta_prime * pr.alpha + pr.alpha_prime * pr.beta * c;
  const double c2 = pr.alpha_prime * pr.alpha + pr.beta_prime * pr.beta * c;
  return std::max(std::abs(c1), std::abs(c2));
}

// Closed-form inverse of beta*M1^T + alpha*M2^T built from the mode tables
// with exponents 1/p and 1-1/p.
inline Mat ansatz_inverse(const InverseParams& pr, const ModeTable& a, const ModeTable& b,
                          std::size_t N) {
  require(pr.route == InverseRoute::ansatz, "params do not select the closed-form route");
  require(pr.p >= 3, "closed-form route needs p >= 3");
  require(a.exponents.p == pr.p && a.exponents.q == 1, "first table must have exponent 1/p");
  require(b.exponents.p == pr.p && b.exponents.q == pr.p - 1,
          "second table must have exponent 1-1/p");
  require(a.length() >= 2 * N && b.length() >= 2 * N, "mode tables must cover 2N");
  const double s = std::sin(pi / pr.p);
  const double c = std::cos(pi / pr.p);
  const double coef_diff = 1.0 / pr.beta;
  const double coef_sum = c / pr.alpha;
  Mat g(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  for (std::size_t n = 1; n <= N; ++n) {
    for (std::size_t m = 1; m <= N; ++m) {
      const double even = 2.0 * static_cast<double>(n);
      const double odd = 2.0 * static_cast<double>(m) - 1.0;
      const double sym = b[2 * n] * a[2 * m - 1] + a[2 * n] * b[2 * m - 1];
      const double asym = b[2 * n] * a[2 * m - 1] - a[2 * n] * b[2 * m - 1];
      const double sign = ((n + m) % 2 == 0) ? 1.0 : -1.0;
      g(n - 1, m - 1) = sign * std::sqrt(even) * std::sqrt(odd) / (2.0 * s) *
                        (coef_diff * sym / (even - odd) - coef_sum * asym / (even + odd));
    }
  }
  return g;
}

inline Mat special_inverse(Sign sign, const CouplingMatrices& cm) {
  return (sign == Sign::plus) ? Mat(cm.m1 - cm.m2) : Mat(cm.m1 + cm.m2);
}

struct TwoSidedResidual {
  double left = 0.0;
  double right = 0.0;
  std::size_t window = 0;
};

namespace detail {

inline TwoSidedResidual inverse_pair_residual(const Mat& combo_t, const Mat& inv,
                                              std::size_t window) {
  const auto w = static_cast<Eigen::Index>(window);
  const Mat id = Mat::Identity(w, w);
  TwoSidedResidual r;
  r.window = window;
  r.left = ((combo_t * inv).topLeftCorner(w, w) - id).cwiseAbs().maxCoeff();
  r.right = ((inv * combo_t).topLeftCorner(w, w) - id).cwiseAbs().maxCoeff();
  return r;
}

}  // namespace detail

inline TwoSidedResidual ansatz_inverse_residual(const InverseParams& pr, const ModeTable& a,
                                                const ModeTable& b, const CouplingMatrices& cm,
                                                std::size_t window) {
  require(window >= 1 && window <= cm.N, "window must lie in [1, N]");
  const Mat combo_t = pr.beta * cm.m1.transpose() + pr.alpha * cm.m2.transpose();
  const Mat inv = ansatz_inverse(pr, a, b, cm.N);
  return detail::inverse_pair_residual(combo_t, inv, window);
}

inline TwoSidedResidual special_inverse_residual(Sign sign, const CouplingMatrices& cm,
                                                 std::size_t window) {
  require(window >= 1 && window <= cm.N, "window must lie in [1, N]");
  const Mat combo_t = (sign == Sign::plus) ? Mat(cm.m1.transpose() + cm.m2.transpose())
                                           : Mat(cm.m1.transpose() - cm.m2.transpose());
  return detail::inverse_pair_residual(combo_t, special_inverse(sign, cm), window);
}

}  // namespace vertexkit
