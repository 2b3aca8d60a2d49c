#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "vertexkit/vertex.hpp"

using namespace vertexkit;

namespace {

const FMatrix& base_f() {
  static const ModeTable a = generate_modes({3, 1}, 4096);
  static const ModeTable b = generate_modes({3, 2}, 4096);
  static const FMatrix f =
      f_assemble(64, a, b, SumConfig{2048, Extrapolation::richardson2, 1e-4});
  return f;
}

}  // namespace

TEST_CASE("three-string blocks combine the matrix with its twist conjugate") {
  const FMatrix& f = base_f();
  const Mat m11 = neumann_block(f, 1, 1);
  CHECK_THAT(m11(0, 0), Catch::Matchers::WithinAbs(0.12467752625114644255, 1e-12));

  const NeumannFamily fam = build_neumann(f);
  CHECK(fam.N == 64);
  CHECK(fam.blocks.size() == 9);
  CHECK(neumann_row_sum_residual(fam) <= 1e-12);
  CHECK(neumann_cyclicity_residual(fam) <= 1e-12);
  CHECK(neumann_exchange_residual(fam) <= 1e-12);
  CHECK(cyclic_imag_residual(f.entries) <= 1e-12);
}

TEST_CASE("a non-hermitian input is rejected when the rotated combination is taken") {
  FMatrix f = base_f();
  f.entries(0, 1) += 0.3;
  CHECK_THROWS_AS(neumann_block(f, 1, 2), std::runtime_error);
}

TEST_CASE("momentum representation pins its first column exactly") {
  const MomentumRep rep = momentum_rep(base_f());
  CHECK(std::abs(rep.f00_prime - std::log(27.0 / 16.0)) <= 1e-14);
  CHECK(std::abs(rep.f0n_prime(0) - cplx(0.0, -2.0 / 3.0)) <= 1e-14);

  const CMatX p = primed_matrix(rep);
  CHECK((p - p.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);

  FMatrix bad = base_f();
  bad.entries(0, 0) = 1.0;
  CHECK_THROWS_AS(momentum_rep(bad), std::domain_error);
}

TEST_CASE("primed interior block squares to the identity in the limit") {
  static const ModeTable a = generate_modes({3, 1}, 4096);
  static const ModeTable b = generate_modes({3, 2}, 4096);
  const SumConfig cfg{2048, Extrapolation::richardson2, 1e-4};
  double prev = -1.0;
  for (std::size_t N : {128, 256}) {
    const MomentumRep rep = momentum_rep(f_assemble(N, a, b, cfg));
    const double r = primed_involution_residual(rep, N / 16);
    INFO("N=" << N);
    CHECK(r <= 5e-2);
    if (prev >= 0.0) CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("momentum-space blocks carry the inverse mode weights") {
  const MomentumRep rep = momentum_rep(base_f());
  const Mat g11 = g_block(rep, 1, 1);
  CHECK_THAT(g11(0, 0), Catch::Matchers::WithinAbs(-0.68216542917636522435, 1e-12));

  const double expected02 = -(2.0 / 3.0) * rep.f0n_prime(1).real() / std::sqrt(2.0);
  CHECK_THAT(g11(0, 2), Catch::Matchers::WithinAbs(expected02, 1e-15));
  CHECK_THAT(g11(2, 0), Catch::Matchers::WithinAbs(expected02, 1e-15));

  const auto fam = build_g(rep);
  CHECK(g_symmetry_residual(fam) <= 1e-12);
}

TEST_CASE("ghost midpoint insertion coefficients") {
  const GhostInsertion g = ghost_insertion(6);
  CHECK(g.coeffs.size() == 7);
  CHECK(g.coeffs[0] == 0.0);
  CHECK(g.coeffs[1] == 0.0);
  CHECK(g.coeffs[3] == 0.0);
  CHECK(g.coeffs[5] == 0.0);
  CHECK_THAT(g.coeffs[2], Catch::Matchers::WithinAbs(-3.0 / std::sqrt(2.0), 1e-15));
  CHECK_THAT(g.coeffs[4], Catch::Matchers::WithinAbs(1.5, 1e-15));
  CHECK_THAT(g.coeffs[6], Catch::Matchers::WithinAbs(-3.0 / std::sqrt(6.0), 1e-15));
  CHECK_THROWS_AS(ghost_insertion(1), std::invalid_argument);
}
