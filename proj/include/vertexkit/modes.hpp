#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "vertexkit/common.hpp"

namespace vertexkit {

// Exponent q/p of the generating function ((1+x)/(1-x))^(q/p).
struct ExponentPair {
  int p = 3;
  int q = 1;
};

struct ModeTable {
  ExponentPair exponents;
  std::vector<double> coeffs;  // u_0 .. u_L

  std::size_t length() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  double s() const { return static_cast<double>(exponents.q) / exponents.p; }
  double operator[](std::size_t k) const { return coeffs[k]; }
};

enum class Extrapolation { none, richardson1, richardson2 };
enum class Sign { plus, minus };

struct SumConfig {
  std::size_t sum_order = 2048;
  Extrapolation extrapolation = Extrapolation::richardson2;
  double tolerance = 1e-4;
};

inline const char* extrapolation_name(Extrapolation e) {
  switch (e) {
    case Extrapolation::none: return "none";
    case Extrapolation::richardson1: return "richardson1";
    case Extrapolation::richardson2: return "richardson2";
  }
  return "none";
}

struct SumValue {
  double value = 0.0;
  double est_error = 0.0;
  std::size_t terms_used = 0;
};

inline void validate_exponents(const ExponentPair& e) {
  require(e.p >= 2, "exponent p must be >= 2");
  require(e.q == 1 || e.q == e.p - 1, "exponent q must be 1 or p-1");
}

inline ModeTable generate_modes(const ExponentPair& e, std::size_t L) {
  validate_exponents(e);
  ModeTable t;
  t.exponents = e;
  t.coeffs.assign(L + 1, 1.0);
  const double two_s = 2.0 * static_cast<double>(e.q) / e.p;
  if (L >= 1) t.coeffs[1] = two_s;
  for (std::size_t k = 1; k < L; ++k)
    t.coeffs[k + 1] =
        (two_s * t.coeffs[k] + (static_cast<double>(k) - 1.0) * t.coeffs[k - 1]) / (k + 1.0);
  return t;
}

// Independent route: convolve the binomial series of (1+x)^s and (1-x)^(-s).
inline ModeTable generate_modes_oracle(const ExponentPair& e, std::size_t L) {
  validate_exponents(e);
  const long double s = static_cast<long double>(e.q) / e.p;
  std::vector<long double> plus(L + 1, 1.0L), minus(L + 1, 1.0L);
  for (std::size_t k = 0; k < L; ++k) {
    plus[k + 1] = plus[k] * (s - static_cast<long double>(k)) / (k + 1.0L);
    minus[k + 1] = minus[k] * (s + static_cast<long double>(k)) / (k + 1.0L);
  }
  ModeTable t;
  t.exponents = e;
  t.coeffs.resize(L + 1);
  for (std::size_t k = 0; k <= L; ++k) {
    long double acc = 0.0L;
    for (std::size_t j = 0; j <= k; ++j) acc += plus[j] * minus[k - j];
    t.coeffs[k] = static_cast<double>(acc);
  }
  return t;
}

inline double recursion_residual(const ModeTable& t) {
  const double two_s = 2.0 * t.s();
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 <= t.length(); ++k) {
    const double lhs = (k + 1.0) * t[k + 1];
    const double rhs = two_s * t[k] + (static_cast<double>(k) - 1.0) * t[k - 1];
    worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
  }
  return worst;
}

namespace detail {

inline double eliminate(double lo, double hi, double exponent, double ratio) {
  const double t = std::pow(ratio, -exponent);
  return (t * hi - lo) / (t - 1.0);
}

// Partial sums at M/4, M/2, M; e0 and e1 are the two leading tail exponents of
// the partial-sum error, interleaved from the x=1 and x=-1 singularities.
template <class Term>
SumValue accelerate(Term&& term, const SumConfig& cfg, double e0, double e1) {
  require(cfg.sum_order >= 16, "sum_order must be >= 16");
  const std::size_t M = cfg.sum_order, m2 = M / 2, m4 = M / 4;
  double s = 0.0, s2 = 0.0, s4 = 0.0;
  for (std::size_t j = 0; j < M; ++j) {
    s += term(j);
    if (j + 1 == m4) s4 = s;
    if (j + 1 == m2) s2 = s;
  }
  const double r_hi = static_cast<double>(M) / static_cast<double>(m2);
  const double r_lo = static_cast<double>(m2) / static_cast<double>(m4);
  SumValue out;
  out.terms_used = M;
  switch (cfg.extrapolation) {
    case Extrapolation::none:
      out.value = s;
      out.est_error = 4.0 * std::abs(s - s2);
      break;
    case Extrapolation::richardson1: {
      const double e1v = eliminate(s2, s, e0, r_hi);
      out.value = e1v;
      out.est_error = std::abs(e1v - s);
      break;
    }
    case Extrapolation::richardson2: {
      const double ea = eliminate(s4, s2, e0, r_lo);
      const double eb = eliminate(s2, s, e0, r_hi);
      const double e2v = eliminate(ea, eb, e1, r_hi);
      out.value = e2v;
      out.est_error = 4.0 * std::abs(e2v - eb);
      break;
    }
  }
  out.est_error += 16.0 * std::numeric_limits<double>::epsilon() * std::abs(out.value);
  return out;
}

inline void require_length(const ModeTable& u, const SumConfig& cfg) {
  require(u.length() >= 2 * cfg.sum_order - 1, "mode table too short for sum_order");
}

}  // namespace detail

// O_{+-n} = sum over odd m of u_m / (+-n + m), n even >= 2.
inline SumValue sum_O(Sign sign, std::size_t n, const ModeTable& u, const SumConfig& cfg) {
  require(n >= 2 && n % 2 == 0, "sum_O needs even n >= 2");
  detail::require_length(u, cfg);
  const double s = u.s();
  const double shift = (sign == Sign::plus) ? static_cast<double>(n) : -static_cast<double>(n);
  return detail::accelerate(
      [&](std::size_t j) {
        const std::size_t m = 2 * j + 1;
        return u[m] / (shift + static_cast<double>(m));
      },
      cfg, s - 1.0, -s - 1.0);
}

inline double sum_O_closed(Sign sign, std::size_t n, const ModeTable& u) {
  require(n >= 2 && n % 2 == 0, "sum_O_closed needs even n >= 2");
  require(u.length() >= n, "mode table too short");
  const double g = u.s() * pi;
  const double base = pi / (2.0 * std::sin(g)) * u[n];
  return (sign == Sign::plus) ? base : -std::cos(g) * base;
}

// S_n = sum over m >= 0, m = n (mod 2), of u_m / (n + m).
inline SumValue sum_S(std::size_t n, const ModeTable& u, const SumConfig& cfg) {
  require(n >= 1, "sum_S needs n >= 1");
  detail::require_length(u, cfg);
  const double s = u.s();
  const std::size_t parity = n % 2;
  return detail::accelerate(
      [&](std::size_t j) {
        const std::size_t m = 2 * j + parity;
        return u[m] / static_cast<double>(n + m);
      },
      cfg, s - 1.0, -s - 1.0);
}

// S-tilde_{+-n} = sum over odd m of u_m / (+-n + m)^2, n even >= 2.
inline SumValue sum_Stilde(Sign sign, std::size_t n, const ModeTable& u, const SumConfig& cfg) {
  require(n >= 2 && n % 2 == 0, "sum_Stilde needs even n >= 2");
  detail::require_length(u, cfg);
  const double s = u.s();
  const double shift = (sign == Sign::plus) ? static_cast<double>(n) : -static_cast<double>(n);
  return detail::accelerate(
      [&](std::size_t j) {
        const std::size_t m = 2 * j + 1;
        const double d = shift + static_cast<double>(m);
        return u[m] / (d * d);
      },
      cfg, s - 2.0, -s - 2.0);
}

// E-tilde_{+-n} = sum over even m >= 0 of u_m / (+-n + m)^2, n odd >= 1.
inline SumValue sum_Etilde(Sign sign, std::size_t n, const ModeTable& u, const SumConfig& cfg) {
  require(n >= 1 && n % 2 == 1, "sum_Etilde needs odd n >= 1");
  detail::require_length(u, cfg);
  const double s = u.s();
  const double shift = (sign == Sign::plus) ? static_cast<double>(n) : -static_cast<double>(n);
  return detail::accelerate(
      [&](std::size_t j) {
        const std::size_t m = 2 * j;
        const double d = shift + static_cast<double>(m);
        return u[m] / (d * d);
      },
      cfg, s - 2.0, -s - 2.0);
}

// Value the minus-sign squared sums must take given the plus-sign sum and the
// matching S_n; covers both the S-tilde and E-tilde reflection relations.
inline double tilde_reflection(double plus_value, double s_value, const ExponentPair& e) {
  const double g = static_cast<double>(e.q) / e.p * pi;
  return std::cos(g) * plus_value + 0.5 * pi * std::sin(g) * s_value;
}

// u_{2n}^{1/p} S_{2n}^{(p-1,p)} + u_{2n}^{1-1/p} S_{2n}^{(1,p)}, exact value 1/n.
inline SumValue identity_uS(std::size_t n, const ModeTable& a, const ModeTable& b,
                            const SumConfig& cfg) {
  require(n >= 1, "identity_uS needs n >= 1");
  require(a.exponents.p == b.exponents.p, "mode tables must share p");
  require(a.length() >= 2 * n && b.length() >= 2 * n, "mode table too short");
  const SumValue sa = sum_S(2 * n, a, cfg);
  const SumValue sb = sum_S(2 * n, b, cfg);
  SumValue out;
  out.value = a[2 * n] * sb.value + b[2 * n] * sa.value;
  out.est_error = a[2 * n] * sb.est_error + b[2 * n] * sa.est_error;
  out.terms_used = sa.terms_used;
  return out;
}

// W_{mn} = (u_m^{1/p} u_n^{1-1/p} + u_m^{1-1/p} u_n^{1/p}) / (m + n).
inline double w_element(std::size_t m, std::size_t n, const ModeTable& a, const ModeTable& b) {
  require(m + n > 0, "w_element needs m + n > 0");
  require(a.length() >= std::max(m, n) && b.length() >= std::max(m, n), "mode table too short");
  return (a[m] * b[n] + b[m] * a[n]) / static_cast<double>(m + n);
}

inline double w_recursion_residual(std::size_t m, std::size_t n, const ModeTable& a,
                                   const ModeTable& b) {
  require((m + n) % 2 == 1, "w recursion holds for odd m + n");
  require(m >= 1 && n >= 1, "w recursion sampled at interior indices");
  return std::abs((n + 1.0) * w_element(m, n + 1, a, b) -
                  (n - 1.0) * w_element(m, n - 1, a, b) +
                  (m + 1.0) * w_element(m + 1, n, a, b) -
                  (m - 1.0) * w_element(m - 1, n, a, b));
}

}  // namespace vertexkit
