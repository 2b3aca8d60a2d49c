#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "vertexkit/common.hpp"

namespace vertexkit {

// M1 couples even modes 2m to odd modes 2n-1 through 1/(2m-(2n-1)); M2 is the
// same weight with the sum 2m+(2n-1) in the denominator.  Both are stored
// 0-based for half-indices m,n = 1..N.
struct CouplingMatrices {
  std::size_t N = 0;
  Mat m1;
  Mat m2;
};

inline CouplingMatrices build_coupling(std::size_t N) {
  require(N >= 1, "coupling needs N >= 1");
  CouplingMatrices cm;
  cm.N = N;
  cm.m1.resize(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  cm.m2.resize(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  for (std::size_t m = 1; m <= N; ++m) {
    for (std::size_t n = 1; n <= N; ++n) {
      const double even = 2.0 * static_cast<double>(m);
      const double odd = 2.0 * static_cast<double>(n) - 1.0;
      const double common =
          2.0 / pi * std::sqrt(even / odd) * (((m + n) % 2 == 0) ? 1.0 : -1.0);
      cm.m1(m - 1, n - 1) = common / (even - odd);
      cm.m2(m - 1, n - 1) = common / (even + odd);
    }
  }
  return cm;
}

struct CouplingIdentityResiduals {
  double col_identity = 0.0;  // |M1^T M1 - M2^T M2 - I|
  double col_skew = 0.0;      // |M1^T M2 - M2^T M1|
  double row_identity = 0.0;  // |M1 M1^T - M2 M2^T - I|
  double row_skew = 0.0;      // |M1 M2^T - M2 M1^T|
  std::size_t window = 0;
};

inline CouplingIdentityResiduals coupling_identity_residuals(const CouplingMatrices& cm,
                                                             std::size_t window) {
  require(window >= 1 && window <= cm.N, "window must lie in [1, N]");
  const auto w = static_cast<Eigen::Index>(window);
  const Mat& a = cm.m1;
  const Mat& b = cm.m2;
  const Mat id = Mat::Identity(w, w);
  CouplingIdentityResiduals r;
  r.window = window;
  r.col_identity = ((a.transpose() * a - b.transpose() * b).topLeftCorner(w, w) - id)
                       .cwiseAbs()
                       .maxCoeff();
  r.col_skew = (a.transpose() * b - b.transpose() * a).topLeftCorner(w, w).cwiseAbs().maxCoeff();
  r.row_identity =
      ((a * a.transpose() - b * b.transpose()).topLeftCorner(w, w) - id).cwiseAbs().maxCoeff();
  r.row_skew = (a * b.transpose() - b * a.transpose()).topLeftCorner(w, w).cwiseAbs().maxCoeff();
  return r;
}

// Layout of the full-string column vector: [0] zero mode, [1..N] odd modes
// 2n-1, [N+1..2N] even modes 2n.  Half-string layout: [0] midpoint, [1..N]
// left modes, [N+1..2N] right modes.
enum class BasisKind { coord_fwd, coord_inv, mom_fwd, mom_inv };

struct BasisMap {
  BasisKind kind = BasisKind::coord_fwd;
  std::size_t N = 0;
  Mat T;
};

namespace detail {

inline Mat coord_fwd_matrix(std::size_t N, const CouplingMatrices& cm) {
  const auto n2 = static_cast<Eigen::Index>(2 * N + 1);
  Mat T = Mat::Zero(n2, n2);
  T(0, 0) = 1.0;
  for (std::size_t m = 1; m <= N; ++m)
    T(0, static_cast<Eigen::Index>(N + m)) = std::sqrt(2.0) * ((m % 2 == 0) ? 1.0 : -1.0);
  for (std::size_t n = 1; n <= N; ++n) {
    const auto ln = static_cast<Eigen::Index>(n);
    const auto rn = static_cast<Eigen::Index>(N + n);
    T(ln, ln) = 1.0;
    T(rn, ln) = -1.0;
    for (std::size_t m = 1; m <= N; ++m) {
      const double wgt = std::sqrt(2.0 * m / (2.0 * n - 1.0)) *
                         (cm.m1(m - 1, n - 1) + cm.m2(m - 1, n - 1));
      T(ln, static_cast<Eigen::Index>(N + m)) = wgt;
      T(rn, static_cast<Eigen::Index>(N + m)) = wgt;
    }
  }
  return T;
}

inline Mat coord_inv_matrix(std::size_t N, const CouplingMatrices& cm) {
  const auto n2 = static_cast<Eigen::Index>(2 * N + 1);
  Mat T = Mat::Zero(n2, n2);
  T(0, 0) = 1.0;
  for (std::size_t n = 1; n <= N; ++n) {
    const double mid = -std::sqrt(2.0) / pi * ((n % 2 == 0) ? 1.0 : -1.0) / (2.0 * n - 1.0);
    T(0, static_cast<Eigen::Index>(n)) = mid;
    T(0, static_cast<Eigen::Index>(N + n)) = mid;
    T(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) = 0.5;
    T(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(N + n)) = -0.5;
  }
  for (std::size_t n = 1; n <= N; ++n) {
    for (std::size_t m = 1; m <= N; ++m) {
      const double wgt = 0.5 * std::sqrt((2.0 * m - 1.0) / (2.0 * n)) *
                         (cm.m1(n - 1, m - 1) - cm.m2(n - 1, m - 1));
      T(static_cast<Eigen::Index>(N + n), static_cast<Eigen::Index>(m)) = wgt;
      T(static_cast<Eigen::Index>(N + n), static_cast<Eigen::Index>(N + m)) = wgt;
    }
  }
  return T;
}

}  // namespace detail

inline BasisMap build_basis_map(BasisKind kind, std::size_t N) {
  require(N >= 1, "basis map needs N >= 1");
  const CouplingMatrices cm = build_coupling(N);
  BasisMap map;
  map.kind = kind;
  map.N = N;
  switch (kind) {
    case BasisKind::coord_fwd: map.T = detail::coord_fwd_matrix(N, cm); break;
    case BasisKind::coord_inv: map.T = detail::coord_inv_matrix(N, cm); break;
    case BasisKind::mom_fwd: map.T = detail::coord_inv_matrix(N, cm).transpose(); break;
    case BasisKind::mom_inv: map.T = detail::coord_fwd_matrix(N, cm).transpose(); break;
  }
  return map;
}

// Half -> full applied after full -> half; measured on the zero-mode row and
// the leading window of each parity sector, where the composition converges.
inline double round_trip_residual(BasisKind family, std::size_t N, std::size_t window) {
  require(window >= 1 && window <= N, "window must lie in [1, N]");
  const CouplingMatrices cm = build_coupling(N);
  Mat fwd, inv;
  if (family == BasisKind::coord_fwd || family == BasisKind::coord_inv) {
    fwd = detail::coord_fwd_matrix(N, cm);
    inv = detail::coord_inv_matrix(N, cm);
  } else {
    inv = detail::coord_fwd_matrix(N, cm).transpose();
    fwd = detail::coord_inv_matrix(N, cm).transpose();
  }
  std::vector<Eigen::Index> idx;
  idx.push_back(0);
  for (std::size_t k = 1; k <= window; ++k) idx.push_back(static_cast<Eigen::Index>(k));
  for (std::size_t k = 1; k <= window; ++k) idx.push_back(static_cast<Eigen::Index>(N + k));
  double worst = 0.0;
  for (Eigen::Index r : idx) {
    for (Eigen::Index c : idx) {
      const double val = inv.row(r).dot(fwd.col(c));
      const double target = (r == c) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(val - target));
    }
  }
  return worst;
}

inline CMat33 z3_matrix() {
  const cplx e = std::exp(cplx(0.0, 2.0 * pi / 3.0));
  const cplx eb = std::conj(e);
  const double r = 1.0 / std::sqrt(3.0);
  CMat33 t;
  t << r * e, r * eb, cplx(r), r * eb, r * e, cplx(r), cplx(r), cplx(r), cplx(r);
  return t;
}

inline Eigen::Matrix3d z3_shift() {
  Eigen::Matrix3d s = Eigen::Matrix3d::Zero();
  s(1, 0) = 1.0;
  s(2, 1) = 1.0;
  s(0, 2) = 1.0;
  return s;
}

inline Eigen::Vector3cd z3_apply(const Eigen::Vector3cd& v) { return z3_matrix() * v; }

}  // namespace vertexkit
