#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "vertexkit/basis.hpp"
#include "vertexkit/common.hpp"
#include "vertexkit/modes.hpp"

namespace vertexkit {

inline double f00() {
  const double l = std::log(27.0 / 16.0);
  return (l - 1.0) / (l + 1.0);
}

// Partial sum of a_{2n}/(2n) over n >= 1; converges to half of log(27/16).
inline SumValue f00_series(const ModeTable& a, const SumConfig& cfg) {
  require(a.length() >= 2 * cfg.sum_order, "mode table too short for sum_order");
  const double s = a.s();
  return detail::accelerate(
      [&](std::size_t j) {
        const std::size_t n = 2 * (j + 1);
        return a[n] / static_cast<double>(n);
      },
      cfg, s - 1.0, -s - 1.0);
}

struct FMatrix {
  std::size_t N = 0;
  CMatX entries;
  double f00 = 0.0;
  SumConfig sum_cfg;
};

// Single source for every entry; indices are mode numbers 0..N.  The a table
// carries exponent 1/3, the b table 2/3.
inline cplx f_element(std::size_t n, std::size_t m, const ModeTable& a, const ModeTable& b,
                      const SumConfig& cfg) {
  require(a.exponents.p == 3 && a.exponents.q == 1, "first table must have exponent 1/3");
  require(b.exponents.p == 3 && b.exponents.q == 2, "second table must have exponent 2/3");
  require(a.length() >= std::max<std::size_t>({n, m, 1}), "mode table too short");
  const double w = f00() - 1.0;
  const auto half = [](std::size_t mode) { return (mode + 1) / 2; };
  const auto sgn = [](std::size_t k) { return (k % 2 == 0) ? 1.0 : -1.0; };
  if (n == 0 && m == 0) return f00();
  if (m == 0) {
    const double base = w * sgn(half(n)) * a[n] / std::sqrt(static_cast<double>(n));
    return (n % 2 == 0) ? cplx(base, 0.0) : cplx(0.0, base);
  }
  if (n == 0) {
    const double base = w * sgn(half(m)) * a[m] / std::sqrt(static_cast<double>(m));
    return (m % 2 == 0) ? cplx(base, 0.0) : cplx(0.0, -base);
  }
  const double dn = static_cast<double>(n), dm = static_cast<double>(m);
  const double rn = std::sqrt(dn), rm = std::sqrt(dm);
  const double sign = sgn(half(n) + half(m));
  const double sym = a[n] * b[m] + b[n] * a[m];
  const double asym = a[n] * b[m] - b[n] * a[m];
  if (n % 2 == 0 && m % 2 == 1) {
    const double series = sign * rn * rm / 2.0 * (sym / (dn - dm) + asym / (dn + dm));
    const double tail = w * sign * a[n] * a[m] / (rn * rm);
    return cplx(0.0, -series - tail);
  }
  if (n % 2 == 1 && m % 2 == 0) return std::conj(f_element(m, n, a, b, cfg));
  if (n % 2 == 0) {
    if (n != m) {
      const double lead = w * sign * a[n] * a[m] / (rn * rm);
      const double series = sign * rn * rm / 2.0 * (sym / (dn + dm) + asym / (dn - dm));
      return cplx(lead - series, 0.0);
    }
    const SumValue sb = sum_Stilde(Sign::plus, n, b, cfg);
    const SumValue sa = sum_Stilde(Sign::plus, n, a, cfg);
    const double val = w * a[n] * a[n] / dn - b[n] * a[n] / 2.0 - 0.5 -
                       dn / pi * (0.5 * std::sqrt(3.0)) * (a[n] * sb.value - b[n] * sa.value);
    return cplx(val, 0.0);
  }
  if (n != m) {
    const double lead = w * sign * a[n] * a[m] / (rn * rm);
    const double series = sign * rn * rm / 2.0 * (sym / (dn + dm) + asym / (dn - dm));
    return cplx(lead + series, 0.0);
  }
  const SumValue eb = sum_Etilde(Sign::plus, n, b, cfg);
  const SumValue ea = sum_Etilde(Sign::plus, n, a, cfg);
  const double val = w * a[n] * a[n] / dn + a[n] * b[n] / 2.0 + 0.5 +
                     std::sqrt(3.0) / (2.0 * pi) * dn * (a[n] * eb.value - b[n] * ea.value);
  return cplx(val, 0.0);
}

inline std::size_t default_f_window(std::size_t N) { return std::max<std::size_t>(8, N / 16); }

inline FMatrix f_assemble(std::size_t N, const ModeTable& a, const ModeTable& b,
                          const SumConfig& cfg) {
  require(N >= 2, "truncation needs N >= 2");
  require(a.length() >= N && b.length() >= N, "mode tables must cover N");
  FMatrix f;
  f.N = N;
  f.f00 = f00();
  f.sum_cfg = cfg;
  f.entries.resize(static_cast<Eigen::Index>(N + 1), static_cast<Eigen::Index>(N + 1));
  for (std::size_t r = 0; r <= N; ++r)
    for (std::size_t c = 0; c <= N; ++c)
      f.entries(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          f_element(r, c, a, b, cfg);
  for (std::size_t r = 0; r <= N; ++r) {
    for (std::size_t c = 0; c <= N; ++c) {
      const cplx v = f.entries(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      const cplx h = f.entries(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r));
      require(std::abs(v - std::conj(h)) <= 1e-12, "assembled matrix lost hermiticity");
      const double defect = ((r + c) % 2 == 0) ? std::abs(v.imag()) : std::abs(v.real());
      require(defect <= 1e-12, "assembled matrix lost the parity reality pattern");
    }
  }
  return f;
}

inline double hermiticity_residual(const FMatrix& f) {
  return (f.entries - f.entries.adjoint()).cwiseAbs().maxCoeff();
}

inline double parity_reality_residual(const FMatrix& f) {
  double worst = 0.0;
  for (std::size_t r = 0; r <= f.N; ++r)
    for (std::size_t c = 0; c <= f.N; ++c) {
      const cplx v = f.entries(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      worst = std::max(worst, ((r + c) % 2 == 0) ? std::abs(v.imag()) : std::abs(v.real()));
    }
  return worst;
}

// Defect of F*F = 1 on the leading window block.
inline double involution_residual(const FMatrix& f, std::size_t window) {
  require(window >= 1 && 2 * window <= f.N, "window must lie in [1, N/2]");
  const auto w = static_cast<Eigen::Index>(window);
  const CMatX prod = f.entries.topRows(w + 1) * f.entries.leftCols(w + 1);
  return (prod - CMatX::Identity(w + 1, w + 1)).cwiseAbs().maxCoeff();
}

struct ConstraintReport {
  double family1 = 0.0;  // odd rows tied to even rows through M1 + M2
  double family2 = 0.0;  // odd rows tied to even rows and the zero mode through M1 - M2
  double family3 = 0.0;  // zero-mode row tied to the even rows
  std::vector<double> rows1;
  std::vector<double> rows2;
  std::vector<double> cols3;
  std::size_t window = 0;
};

inline ConstraintReport f_constraint_residual(const FMatrix& f, const CouplingMatrices& cm,
                                              std::size_t window = 0) {
  const std::size_t N = f.N;
  const std::size_t ne = N / 2, nh = (N + 1) / 2;
  if (window == 0) window = default_f_window(N);
  require(window <= nh && window <= N, "window too large for this truncation");
  require(cm.N >= std::max(ne, nh), "coupling matrices too small for this truncation");
  const auto ei = [](std::size_t k) { return static_cast<Eigen::Index>(k); };
  const cplx i3 = cplx(0.0, std::sqrt(3.0));

  CMatX fe_plus(ei(ne), ei(N + 1)), fe_minus(ei(ne), ei(N + 1));
  for (std::size_t mm = 1; mm <= ne; ++mm)
    for (std::size_t k = 0; k <= N; ++k) {
      const cplx d = (2 * mm == k) ? 1.0 : 0.0;
      fe_plus(ei(mm - 1), ei(k)) = f.entries(ei(2 * mm), ei(k)) + d;
      fe_minus(ei(mm - 1), ei(k)) = f.entries(ei(2 * mm), ei(k)) - d;
    }

  ConstraintReport rep;
  rep.window = window;
  rep.rows1.assign(window, 0.0);
  rep.rows2.assign(window, 0.0);
  rep.cols3.assign(window, 0.0);

  const Mat p = (cm.m1 + cm.m2).topLeftCorner(ei(ne), ei(nh));
  const Mat q = (cm.m1 - cm.m2).topLeftCorner(ei(ne), ei(nh));
  const CMatX mix1 = i3 * (p.transpose().cast<cplx>() * fe_plus);
  const CMatX mix2 = (cplx(0.0, 1.0 / std::sqrt(3.0))) * (q.transpose().cast<cplx>() * fe_minus);

  for (std::size_t nn = 1; nn <= window; ++nn) {
    const double on = 2.0 * nn - 1.0;
    const cplx cn = 4.0 / pi * cplx(0.0, 1.0 / std::sqrt(3.0)) * ((nn % 2 == 0) ? 1.0 : -1.0) /
                    (on * std::sqrt(on));
    for (std::size_t k = 0; k < window; ++k) {
      const cplx d = (2 * nn - 1 == k) ? 1.0 : 0.0;
      const cplx d0 = (k == 0) ? 1.0 : 0.0;
      const cplx fo = f.entries(ei(2 * nn - 1), ei(k));
      const cplx r1 = fo + d - mix1(ei(nn - 1), ei(k));
      const cplx r2 = fo - d + mix2(ei(nn - 1), ei(k)) - cn * (f.entries(0, ei(k)) - d0);
      rep.rows1[nn - 1] = std::max(rep.rows1[nn - 1], std::abs(r1));
      rep.rows2[nn - 1] = std::max(rep.rows2[nn - 1], std::abs(r2));
    }
    rep.family1 = std::max(rep.family1, rep.rows1[nn - 1]);
    rep.family2 = std::max(rep.family2, rep.rows2[nn - 1]);
  }
  for (std::size_t k = 0; k < window; ++k) {
    const cplx d0 = (k == 0) ? 1.0 : 0.0;
    cplx r3 = f.entries(0, ei(k)) + d0;
    for (std::size_t j = 1; j <= ne; ++j)
      r3 += ((j % 2 == 0) ? 1.0 : -1.0) * 2.0 / std::sqrt(2.0 * j) * fe_plus(ei(j - 1), ei(k));
    rep.cols3[k] = std::abs(r3);
    rep.family3 = std::max(rep.family3, rep.cols3[k]);
  }
  return rep;
}

struct OracleResult {
  FMatrix matrix;
  Eigen::Index rank = 0;
  Eigen::Index nullity = 0;
  double condition = 0.0;
  double herm_defect = 0.0;
};

// Rebuild the matrix from the constraint families alone: one square complex
// system shared by every column, no series input.
inline OracleResult f_oracle_solve(std::size_t N, const SumConfig& cfg) {
  require(N >= 4 && N % 2 == 0, "constraint solve needs even N >= 4");
  require(N <= 128, "constraint solve supported for N <= 128");
  const std::size_t ne = N / 2, nh = N / 2;
  const auto ei = [](std::size_t k) { return static_cast<Eigen::Index>(k); };
  const CouplingMatrices cm = build_coupling(std::max(ne, nh));
  const Mat p = (cm.m1 + cm.m2).topLeftCorner(ei(ne), ei(nh));
  const Mat q = (cm.m1 - cm.m2).topLeftCorner(ei(ne), ei(nh));
  const cplx i1 = cplx(0.0, 1.0);

  CMatX A = CMatX::Zero(ei(N + 1), ei(N + 1));
  CMatX B = CMatX::Zero(ei(N + 1), ei(N + 1));
  std::vector<cplx> cn(nh);
  for (std::size_t n = 1; n <= nh; ++n) {
    const double on = 2.0 * n - 1.0;
    cn[n - 1] = 4.0 / pi * i1 / std::sqrt(3.0) * ((n % 2 == 0) ? 1.0 : -1.0) / (on * std::sqrt(on));
  }
  for (std::size_t n = 1; n <= nh; ++n) {
    A(ei(n - 1), ei(2 * n - 1)) = 1.0;
    A(ei(nh + n - 1), ei(2 * n - 1)) = 1.0;
    A(ei(nh + n - 1), 0) -= cn[n - 1];
    for (std::size_t m = 1; m <= ne; ++m) {
      A(ei(n - 1), ei(2 * m)) = -i1 * std::sqrt(3.0) * p(ei(m - 1), ei(n - 1));
      A(ei(nh + n - 1), ei(2 * m)) = i1 / std::sqrt(3.0) * q(ei(m - 1), ei(n - 1));
    }
  }
  A(ei(2 * nh), 0) = 1.0;
  for (std::size_t j = 1; j <= ne; ++j)
    A(ei(2 * nh), ei(2 * j)) = ((j % 2 == 0) ? 1.0 : -1.0) * 2.0 / std::sqrt(2.0 * j);

  for (std::size_t col = 0; col <= N; ++col) {
    const bool even_col = col % 2 == 0 && col >= 2;
    const std::size_t mc = even_col ? col / 2 : 0;
    for (std::size_t n = 1; n <= nh; ++n) {
      cplx b1 = 0.0, b2 = 0.0;
      if (2 * n - 1 == col) {
        b1 -= 1.0;
        b2 += 1.0;
      }
      if (even_col) {
        b1 += i1 * std::sqrt(3.0) * p(ei(mc - 1), ei(n - 1));
        b2 += i1 / std::sqrt(3.0) * q(ei(mc - 1), ei(n - 1));
      }
      if (col == 0) b2 -= cn[n - 1];
      B(ei(n - 1), ei(col)) = b1;
      B(ei(nh + n - 1), ei(col)) = b2;
    }
    cplx b3 = (col == 0) ? cplx(-1.0) : cplx(0.0);
    if (even_col) b3 -= ((mc % 2 == 0) ? 1.0 : -1.0) * 2.0 / std::sqrt(2.0 * mc);
    B(ei(2 * nh), ei(col)) = b3;
  }

  for (Eigen::Index r = 0; r < A.rows(); ++r) {
    const double norm = A.row(r).norm();
    A.row(r) /= norm;
    B.row(r) /= norm;
  }

  Eigen::ColPivHouseholderQR<CMatX> qr(A);
  OracleResult out;
  out.rank = qr.rank();
  out.nullity = static_cast<Eigen::Index>(N + 1) - out.rank;
  const CMatX X = qr.solve(B);
  Eigen::JacobiSVD<CMatX> svd(A);
  const auto& sv = svd.singularValues();
  out.condition = sv(0) / sv(sv.size() - 1);

  out.matrix.N = N;
  out.matrix.entries = X;
  out.matrix.f00 = X(0, 0).real();
  out.matrix.sum_cfg = cfg;

  const auto w = ei(default_f_window(N));
  out.herm_defect =
      (X.topLeftCorner(w + 1, w + 1) - X.topLeftCorner(w + 1, w + 1).adjoint())
          .cwiseAbs()
          .maxCoeff();
  return out;
}

struct MidpointResiduals {
  double f00 = 0.0;
  double even_cols = 0.0;
  double odd_cols = 0.0;
  std::size_t window = 0;
};

// The even-mode rows resum to the zero-mode row; alternating partial sums are
// extrapolated at ne/4, ne/2, ne with tail exponents -2/3 and -5/3.
inline MidpointResiduals midpoint_residuals(const FMatrix& f) {
  const std::size_t N = f.N;
  const std::size_t ne = N / 2;
  require(ne >= 8, "midpoint check needs N >= 16");
  const auto ei = [](std::size_t k) { return static_cast<Eigen::Index>(k); };
  const std::size_t c4 = ne / 4, c2 = ne / 2;
  const double r_hi = static_cast<double>(ne) / c2;
  const double r_lo = static_cast<double>(c2) / c4;
  const auto accel = [&](const std::vector<cplx>& terms) {
    cplx s = 0.0, s4 = 0.0, s2 = 0.0;
    for (std::size_t j = 0; j < ne; ++j) {
      s += terms[j];
      if (j + 1 == c4) s4 = s;
      if (j + 1 == c2) s2 = s;
    }
    const auto elim = [](cplx lo, cplx hi, double e, double ratio) {
      const double t = std::pow(ratio, -e);
      return (t * hi - lo) / (t - 1.0);
    };
    const cplx ea = elim(s4, s2, -2.0 / 3.0, r_lo);
    const cplx eb = elim(s2, s, -2.0 / 3.0, r_hi);
    return elim(ea, eb, -5.0 / 3.0, r_hi);
  };

  MidpointResiduals out;
  out.window = std::min<std::size_t>(16, std::max<std::size_t>(2, N / 16));
  std::vector<cplx> terms(ne);

  for (std::size_t k = 1; k <= ne; ++k)
    terms[k - 1] = ((k % 2 == 1) ? 2.0 : -2.0) / std::sqrt(2.0 * k) * f.entries(ei(2 * k), 0);
  out.f00 = std::abs(accel(terms) - (f.f00 + 1.0));

  for (std::size_t m = 1; m <= out.window && 2 * m <= N; ++m) {
    for (std::size_t k = 1; k <= ne; ++k)
      terms[k - 1] =
          ((k % 2 == 1) ? 2.0 : -2.0) / std::sqrt(2.0 * k) * f.entries(ei(2 * k), ei(2 * m));
    const cplx target = accel(terms) + ((m % 2 == 1) ? 2.0 : -2.0) / std::sqrt(2.0 * m);
    out.even_cols = std::max(out.even_cols, std::abs(target - f.entries(0, ei(2 * m))));
  }
  for (std::size_t m = 1; m <= out.window && 2 * m - 1 <= N; ++m) {
    for (std::size_t k = 1; k <= ne; ++k)
      terms[k - 1] =
          ((k % 2 == 1) ? 2.0 : -2.0) / std::sqrt(2.0 * k) * f.entries(ei(2 * k), ei(2 * m - 1));
    out.odd_cols = std::max(out.odd_cols, std::abs(accel(terms) - f.entries(0, ei(2 * m - 1))));
  }
  return out;
}

}  // namespace vertexkit
