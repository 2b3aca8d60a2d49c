#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "vertexkit/common.hpp"
#include "vertexkit/fmatrix.hpp"

namespace vertexkit {

struct NeumannFamily {
  std::size_t N = 0;
  std::map<std::pair<int, int>, Mat> blocks;
};

namespace detail {

// (C + w^j X + conj(w)^j X^T) / 3 with w = exp(2 pi i / 3).  For a hermitian
// X the transpose equals the conjugate and the result is real; any residual
// imaginary part flags a broken input.
inline Mat cyclic_combination(const CMatX& x, int j, double imag_tol) {
  const cplx w = std::exp(cplx(0.0, 2.0 * pi / 3.0));
  const cplx wj = std::pow(w, j);
  const auto n = x.rows();
  CMatX c = CMatX::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) c(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
  const CMatX m = (c + wj * x + std::conj(wj) * x.transpose()) / 3.0;
  const double imag_max = m.imag().cwiseAbs().maxCoeff();
  if (imag_max > imag_tol) throw std::runtime_error("cyclic combination has an imaginary residue");
  return m.real();
}

}  // namespace detail

inline double cyclic_imag_residual(const CMatX& x) {
  const cplx w = std::exp(cplx(0.0, 2.0 * pi / 3.0));
  double worst = 0.0;
  for (int j = 0; j < 3; ++j) {
    const cplx wj = std::pow(w, j);
    const CMatX m = (wj * x + std::conj(wj) * x.transpose()) / 3.0;
    worst = std::max(worst, m.imag().cwiseAbs().maxCoeff());
  }
  return worst;
}

inline Mat neumann_block(const FMatrix& f, int r, int s, double imag_tol = 1e-12) {
  require(r >= 1 && r <= 3 && s >= 1 && s <= 3, "string labels must lie in {1,2,3}");
  const int j = ((s - r) % 3 + 3) % 3;
  return detail::cyclic_combination(f.entries, j, imag_tol);
}

inline NeumannFamily build_neumann(const FMatrix& f) {
  NeumannFamily fam;
  fam.N = f.N;
  for (int r = 1; r <= 3; ++r)
    for (int s = 1; s <= 3; ++s) fam.blocks[{r, s}] = neumann_block(f, r, s);
  return fam;
}

inline double neumann_row_sum_residual(const NeumannFamily& fam) {
  const auto n = fam.blocks.at({1, 1}).rows();
  Mat c = Mat::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) c(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
  double worst = 0.0;
  for (int r = 1; r <= 3; ++r) {
    Mat sum = Mat::Zero(n, n);
    for (int s = 1; s <= 3; ++s) sum += fam.blocks.at({r, s});
    worst = std::max(worst, (sum - c).cwiseAbs().maxCoeff());
  }
  return worst;
}

inline double neumann_cyclicity_residual(const NeumannFamily& fam) {
  const auto next = [](int r) { return r % 3 + 1; };
  double worst = 0.0;
  for (int r = 1; r <= 3; ++r)
    for (int s = 1; s <= 3; ++s)
      worst = std::max(worst, (fam.blocks.at({r, s}) - fam.blocks.at({next(r), next(s)}))
                                  .cwiseAbs()
                                  .maxCoeff());
  return worst;
}

inline double neumann_exchange_residual(const NeumannFamily& fam) {
  double worst = (fam.blocks.at({1, 1}) - fam.blocks.at({1, 1}).transpose()).cwiseAbs().maxCoeff();
  worst = std::max(worst,
                   (fam.blocks.at({1, 2}) - fam.blocks.at({2, 1}).transpose()).cwiseAbs().maxCoeff());
  return worst;
}

struct MomentumRep {
  std::size_t N = 0;
  double f00_prime = 0.0;
  CVecX f0n_prime;   // row 0, modes 1..N
  CMatX fnm_prime;   // interior block, modes 1..N
};

inline MomentumRep momentum_rep(const FMatrix& f) {
  const double f00v = f.entries(0, 0).real();
  const double denom = 1.0 - f00v;
  if (std::abs(denom) < 1e-12) throw std::domain_error("representation change undefined at f00 = 1");
  const auto n = static_cast<Eigen::Index>(f.N);
  MomentumRep rep;
  rep.N = f.N;
  rep.f00_prime = (1.0 + f00v) / denom;
  rep.f0n_prime = f.entries.row(0).segment(1, n).transpose() / denom;
  rep.fnm_prime = f.entries.block(1, 1, n, n) +
                  f.entries.col(0).segment(1, n) * f.entries.row(0).segment(1, n) / denom;
  return rep;
}

inline CMatX primed_matrix(const MomentumRep& rep) {
  const auto n = static_cast<Eigen::Index>(rep.N);
  CMatX out(n + 1, n + 1);
  out(0, 0) = rep.f00_prime;
  out.row(0).segment(1, n) = rep.f0n_prime.transpose();
  out.col(0).segment(1, n) = rep.f0n_prime.conjugate();
  out.block(1, 1, n, n) = rep.fnm_prime;
  return out;
}

// Defect of the interior-block involution in the primed representation.
inline double primed_involution_residual(const MomentumRep& rep, std::size_t window) {
  require(window >= 1 && 2 * window <= rep.N, "window must lie in [1, N/2]");
  const auto w = static_cast<Eigen::Index>(window);
  const CMatX prod = rep.fnm_prime.topRows(w) * rep.fnm_prime.leftCols(w);
  return (prod - CMatX::Identity(w, w)).cwiseAbs().maxCoeff();
}

inline Mat g_block(const MomentumRep& rep, int r, int s, double imag_tol = 1e-12) {
  require(r >= 1 && r <= 3 && s >= 1 && s <= 3, "string labels must lie in {1,2,3}");
  const int j = ((s - r) % 3 + 3) % 3;
  const Mat combo = detail::cyclic_combination(primed_matrix(rep), j, imag_tol);
  const auto n = combo.rows();
  Vec d(n);
  d(0) = 1.0;
  for (Eigen::Index k = 1; k < n; ++k) d(k) = 1.0 / std::sqrt(static_cast<double>(k));
  return -(d.asDiagonal() * combo * d.asDiagonal());
}

inline NeumannFamily build_g(const MomentumRep& rep) {
  NeumannFamily fam;
  fam.N = rep.N;
  for (int r = 1; r <= 3; ++r)
    for (int s = 1; s <= 3; ++s) fam.blocks[{r, s}] = g_block(rep, r, s);
  return fam;
}

inline double g_symmetry_residual(const NeumannFamily& g) {
  double worst = 0.0;
  for (int r = 1; r <= 3; ++r)
    for (int s = 1; s <= 3; ++s)
      worst = std::max(
          worst, (g.blocks.at({r, s}) - g.blocks.at({s, r}).transpose()).cwiseAbs().maxCoeff());
  return worst;
}

struct GhostInsertion {
  std::size_t N = 0;
  std::vector<double> coeffs;  // index = mode number; nonzero at even n >= 2
};

inline GhostInsertion ghost_insertion(std::size_t N) {
  require(N >= 2, "ghost insertion needs N >= 2");
  GhostInsertion g;
  g.N = N;
  g.coeffs.assign(N + 1, 0.0);
  for (std::size_t n = 2; n <= N; n += 2)
    g.coeffs[n] = 3.0 * ((n / 2 % 2 == 0) ? 1.0 : -1.0) / std::sqrt(static_cast<double>(n));
  return g;
}

}  // namespace vertexkit
