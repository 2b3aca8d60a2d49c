#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "vertexkit/basis.hpp"
#include "vertexkit/common.hpp"
#include "vertexkit/fmatrix.hpp"
#include "vertexkit/inverse.hpp"
#include "vertexkit/mode_cache.hpp"
#include "vertexkit/modes.hpp"
#include "vertexkit/vertex.hpp"

namespace vertexkit {

struct RunConfig {
  std::size_t N = 256;
  SumConfig sum{2048, Extrapolation::richardson1, 1e-4};
  std::size_t window = 16;
  std::map<std::string, double> tol_overrides;
  std::optional<std::uint64_t> perturb_seed;
  std::string cache_dir;
};

inline void validate_config(const RunConfig& cfg) {
  require(cfg.N >= 4, "N must be >= 4");
  require(cfg.window >= 1, "window must be >= 1");
  require(cfg.window <= cfg.N / 4, "window must be <= N/4");
  require(cfg.sum.sum_order >= 16, "sum_order must be >= 16");
  require(cfg.sum.sum_order >= cfg.N, "sum_order must be >= N");
  require(cfg.sum.tolerance > 0.0, "tolerance must be positive");
}

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerifyReport {
  std::string suite;
  std::size_t N = 0;
  std::vector<Check> checks;
  bool pass = false;
};

namespace detail {

struct Checker {
  const RunConfig* cfg = nullptr;
  std::vector<Check> checks;

  void add(const std::string& name, double value, double fallback_tol) {
    double tol = fallback_tol;
    if (auto it = cfg->tol_overrides.find(name); it != cfg->tol_overrides.end()) tol = it->second;
    checks.push_back({name, value, tol, value <= tol});
  }
};

inline std::size_t mode_table_length(const RunConfig& cfg) {
  return std::max({2 * cfg.N, 2 * cfg.sum.sum_order, std::size_t{2000}});
}

inline FMatrix assemble_for(const RunConfig& cfg) {
  const std::size_t L = mode_table_length(cfg);
  const ModeTable a = obtain_modes({3, 1}, L, cfg.cache_dir);
  const ModeTable b = obtain_modes({3, 2}, L, cfg.cache_dir);
  return f_assemble(cfg.N, a, b, cfg.sum);
}

inline void modes_suite(const RunConfig& cfg, Checker& ck) {
  const std::size_t L = mode_table_length(cfg);
  const ModeTable a = obtain_modes({3, 1}, L, cfg.cache_dir);
  const ModeTable b = obtain_modes({3, 2}, L, cfg.cache_dir);
  ck.add("recursion_residual", std::max(recursion_residual(a), recursion_residual(b)), 1e-12);

  {
    const std::size_t Lo = std::min<std::size_t>(L, 2000);
    const ModeTable oa = generate_modes_oracle({3, 1}, Lo);
    const ModeTable ob = generate_modes_oracle({3, 2}, Lo);
    double worst = 0.0;
    for (std::size_t k = 0; k <= Lo; ++k) {
      worst = std::max(worst, std::abs(a[k] - oa[k]) / oa[k]);
      worst = std::max(worst, std::abs(b[k] - ob[k]) / ob[k]);
    }
    ck.add("oracle_agreement", worst, 1e-12);
  }

  {
    double worst = 0.0;
    for (const ModeTable* t : {&a, &b}) {
      const double e = 1.0 - t->s();
      double prev = -1.0;
      for (std::size_t k = 64; 2 * k <= t->length(); k *= 2) {
        const double d = std::abs((*t)[k] * std::pow(k, e) - (*t)[2 * k] * std::pow(2 * k, e));
        if (prev >= 0.0) worst = std::max(worst, d - prev);
        prev = d;
      }
    }
    ck.add("asymptotic_trend", worst, 0.0);
  }

  ck.add("series_half_log", std::abs(f00_series(a, cfg.sum).value - 0.5 * std::log(27.0 / 16.0)),
         1e-5);

  SumConfig rcfg = cfg.sum;
  rcfg.extrapolation = Extrapolation::richardson2;
  {
    double worst_closed = 0.0, worst_reflect = 0.0;
    for (const ModeTable* t : {&a, &b}) {
      for (std::size_t n = 2; n <= 20; n += 2) {
        const SumValue op = sum_O(Sign::plus, n, *t, rcfg);
        const SumValue om = sum_O(Sign::minus, n, *t, rcfg);
        worst_closed = std::max(
            worst_closed, std::abs(op.value - sum_O_closed(Sign::plus, n, *t)) - 2.0 * op.est_error);
        worst_reflect =
            std::max(worst_reflect, std::abs(om.value - sum_O_closed(Sign::minus, n, *t)) -
                                        2.0 * om.est_error);
      }
    }
    ck.add("closed_form_O", worst_closed, 0.0);
    ck.add("reflection_O", worst_reflect, 0.0);
  }

  {
    double worst = 0.0;
    for (const ModeTable* t : {&a, &b}) {
      for (std::size_t n = 2; n <= 4; n += 2) {
        const SumValue sm = sum_Stilde(Sign::minus, n, *t, rcfg);
        const SumValue sp = sum_Stilde(Sign::plus, n, *t, rcfg);
        const SumValue sn = sum_S(n, *t, rcfg);
        worst = std::max(worst,
                         std::abs(sm.value - tilde_reflection(sp.value, sn.value, t->exponents)));
      }
    }
    ck.add("reflection_Stilde", worst, cfg.sum.tolerance);
  }
  {
    double worst = 0.0;
    for (const ModeTable* t : {&a, &b}) {
      for (std::size_t n = 1; n <= 3; n += 2) {
        const SumValue em = sum_Etilde(Sign::minus, n, *t, rcfg);
        const SumValue ep = sum_Etilde(Sign::plus, n, *t, rcfg);
        const SumValue sn = sum_S(n, *t, rcfg);
        worst = std::max(worst,
                         std::abs(em.value - tilde_reflection(ep.value, sn.value, t->exponents)));
      }
    }
    ck.add("reflection_Etilde", worst, cfg.sum.tolerance);
  }

  {
    double worst = 0.0;
    for (std::size_t n = 1; n <= 50; ++n)
      worst = std::max(worst, std::abs(identity_uS(n, a, b, rcfg).value - 1.0 / n));
    ck.add("identity_uS", worst, cfg.sum.tolerance);
  }

  {
    double worst = 0.0;
    for (std::size_t m = 1; m <= 499; ++m) {
      for (std::size_t n = (m % 2 == 0) ? 1 : 2; n <= 499; n += 2)
        worst = std::max(worst, w_recursion_residual(m, n, a, b));
    }
    ck.add("w_recursion", worst, 1e-12);
  }
}

inline void basis_suite(const RunConfig& cfg, Checker& ck) {
  const CouplingMatrices cm = build_coupling(cfg.N);
  const std::size_t w8 = std::max<std::size_t>(1, cfg.N / 8);
  const CouplingIdentityResiduals r = coupling_identity_residuals(cm, w8);
  ck.add("m_col_identity", r.col_identity, 5e-2);
  ck.add("m_col_skew", r.col_skew, 5e-2);
  ck.add("m_row_identity", r.row_identity, 5e-2);
  ck.add("m_row_skew", r.row_skew, 5e-2);

  ck.add("round_trip_coord", round_trip_residual(BasisKind::coord_fwd, cfg.N, w8), 1e-2);
  ck.add("round_trip_momentum", round_trip_residual(BasisKind::mom_fwd, cfg.N, w8), 1e-2);

  const CMat33 t = z3_matrix();
  ck.add("z3_unitarity", (t * t.adjoint() - CMat33::Identity()).cwiseAbs().maxCoeff(), 1e-14);
  const cplx e = std::exp(cplx(0.0, 2.0 * pi / 3.0));
  const CMat33 d = t * z3_shift().cast<cplx>() * t.adjoint();
  double shift_residual = std::abs(d(2, 2) - 1.0);
  shift_residual = std::max(shift_residual, std::abs(d(1, 1) - std::conj(d(0, 0))));
  shift_residual = std::max(shift_residual, std::min(std::abs(d(0, 0) - e),
                                                     std::abs(d(0, 0) - std::conj(e))));
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      if (r != c) shift_residual = std::max(shift_residual, std::abs(d(r, c)));
  ck.add("z3_shift_diagonal", shift_residual, 1e-14);
  Eigen::Vector3cd ones;
  ones << 1.0, 1.0, 1.0;
  Eigen::Vector3cd want;
  want << 0.0, 0.0, std::sqrt(3.0);
  ck.add("z3_apply", (z3_apply(ones) - want).cwiseAbs().maxCoeff(), 1e-14);
}

inline void inverse_suite(const RunConfig& cfg, Checker& ck) {
  const InverseParams pr = solve_params(0.5, 1.0);
  ck.add("params_condition", params_condition_residual(pr), 1e-14);

  const std::size_t L = mode_table_length(cfg);
  const ModeTable a = obtain_modes({3, 1}, L, cfg.cache_dir);
  const ModeTable b = obtain_modes({3, 2}, L, cfg.cache_dir);
  const CouplingMatrices cm = build_coupling(cfg.N);
  const std::size_t w16 = std::max<std::size_t>(1, cfg.N / 16);
  const TwoSidedResidual ar = ansatz_inverse_residual(pr, a, b, cm, w16);
  ck.add("ansatz_left", ar.left, 5e-2);
  ck.add("ansatz_right", ar.right, 5e-2);
  const TwoSidedResidual sp = special_inverse_residual(Sign::plus, cm, w16);
  const TwoSidedResidual sm = special_inverse_residual(Sign::minus, cm, w16);
  ck.add("special_plus", std::max(sp.left, sp.right), 5e-2);
  ck.add("special_minus", std::max(sm.left, sm.right), 5e-2);
}

inline void f_properties_suite(const RunConfig& cfg, Checker& ck) {
  FMatrix f = assemble_for(cfg);
  if (cfg.perturb_seed) {
    std::mt19937_64 gen(*cfg.perturb_seed);
    std::uniform_int_distribution<std::size_t> pick(0, cfg.window);
    const auto i = static_cast<Eigen::Index>(pick(gen));
    const auto j = static_cast<Eigen::Index>(pick(gen));
    f.entries(i, j) += 0.25;
  }
  ck.add("hermiticity", hermiticity_residual(f), 1e-12);
  ck.add("parity_reality", parity_reality_residual(f), 1e-12);
  ck.add("involution", involution_residual(f, cfg.window), 5e-2);
  const CouplingMatrices cm = build_coupling(std::max<std::size_t>(1, cfg.N / 2));
  const ConstraintReport cr = f_constraint_residual(f, cm, cfg.window);
  ck.add("constraint_family1", cr.family1, 1e-1);
  ck.add("constraint_family2", cr.family2, 1e-1);
  ck.add("constraint_family3", cr.family3, 1e-1);
  const MidpointResiduals mr = midpoint_residuals(f);
  ck.add("midpoint_f00", mr.f00, 1e-2);
  ck.add("midpoint_even", mr.even_cols, 1e-2);
  ck.add("midpoint_odd", mr.odd_cols, 1e-2);
}

inline void vertex_suite(const RunConfig& cfg, Checker& ck) {
  const FMatrix f = assemble_for(cfg);
  ck.add("vertex_reality", cyclic_imag_residual(f.entries), 1e-12);
  const NeumannFamily fam = build_neumann(f);
  ck.add("vertex_row_sum", neumann_row_sum_residual(fam), 1e-12);
  ck.add("vertex_cyclicity", neumann_cyclicity_residual(fam), 1e-12);
  ck.add("vertex_exchange", neumann_exchange_residual(fam), 1e-12);

  const MomentumRep rep = momentum_rep(f);
  ck.add("primed_zero_mode", std::abs(rep.f00_prime - std::log(27.0 / 16.0)), 1e-14);
  ck.add("primed_first_mode", std::abs(rep.f0n_prime(0) - cplx(0.0, -2.0 / 3.0)), 1e-14);
  ck.add("primed_involution", primed_involution_residual(rep, cfg.window), 5e-2);

  const NeumannFamily g = build_g(rep);
  ck.add("g_symmetry", g_symmetry_residual(g), 1e-12);
  ck.add("g_zero_mode",
         std::abs(g.blocks.at({1, 1})(0, 0) - (-(1.0 + 2.0 * std::log(27.0 / 16.0)) / 3.0)),
         1e-12);

  const GhostInsertion gh = ghost_insertion(std::max<std::size_t>(4, cfg.N));
  ck.add("ghost_coefficients",
         std::max(std::abs(gh.coeffs[2] + 3.0 / std::sqrt(2.0)), std::abs(gh.coeffs[4] - 1.5)),
         1e-14);
}

}  // namespace detail

inline VerifyReport run_verify(const std::string& suite, const RunConfig& cfg) {
  validate_config(cfg);
  detail::Checker ck;
  ck.cfg = &cfg;
  if (suite == "modes") {
    detail::modes_suite(cfg, ck);
  } else if (suite == "basis") {
    detail::basis_suite(cfg, ck);
  } else if (suite == "inverse") {
    detail::inverse_suite(cfg, ck);
  } else if (suite == "f-properties") {
    detail::f_properties_suite(cfg, ck);
  } else if (suite == "vertex") {
    detail::vertex_suite(cfg, ck);
  } else if (suite == "all") {
    detail::modes_suite(cfg, ck);
    detail::basis_suite(cfg, ck);
    detail::inverse_suite(cfg, ck);
    detail::f_properties_suite(cfg, ck);
    detail::vertex_suite(cfg, ck);
  } else {
    throw std::invalid_argument("unknown suite: " + suite);
  }
  VerifyReport rep;
  rep.suite = suite;
  rep.N = cfg.N;
  rep.checks = std::move(ck.checks);
  rep.pass = true;
  for (const Check& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

struct ConvergencePoint {
  std::size_t N = 0;
  double residual = 0.0;
  std::optional<double> est_order;
};

struct ConvergenceReport {
  std::string identity;
  std::vector<ConvergencePoint> points;
  double tolerance = 0.0;
  bool pass = false;
};

inline ConvergenceReport run_convergence(const std::string& identity,
                                         const std::vector<std::size_t>& Ns,
                                         const RunConfig& cfg) {
  require(!Ns.empty(), "convergence scan needs at least one N");
  for (std::size_t n : Ns) {
    RunConfig probe = cfg;
    probe.N = n;
    probe.window = std::min(cfg.window, n / 4);
    probe.window = std::max<std::size_t>(1, probe.window);
    validate_config(probe);
  }

  double fallback_tol = 0.0;
  if (identity == "m_identity" || identity == "special_inverse" || identity == "ansatz_inverse" ||
      identity == "involution" || identity == "primed_involution")
    fallback_tol = 5e-2;
  else if (identity == "round_trip")
    fallback_tol = 1e-2;
  else if (identity == "constraints")
    fallback_tol = 1e-1;
  else
    throw std::invalid_argument("unknown identity: " + identity);
  double tol = fallback_tol;
  if (auto it = cfg.tol_overrides.find(identity); it != cfg.tol_overrides.end()) tol = it->second;

  const std::size_t maxN = *std::max_element(Ns.begin(), Ns.end());
  ModeTable a, b;
  if (identity == "ansatz_inverse" || identity == "involution" ||
      identity == "primed_involution" || identity == "constraints") {
    RunConfig big = cfg;
    big.N = maxN;
    const std::size_t L = detail::mode_table_length(big);
    a = obtain_modes({3, 1}, L, cfg.cache_dir);
    b = obtain_modes({3, 2}, L, cfg.cache_dir);
  }

  const auto residual_at = [&](std::size_t N) -> double {
    if (identity == "m_identity") {
      const CouplingIdentityResiduals r =
          coupling_identity_residuals(build_coupling(N), std::max<std::size_t>(1, N / 8));
      return std::max({r.col_identity, r.col_skew, r.row_identity, r.row_skew});
    }
    if (identity == "special_inverse") {
      const CouplingMatrices cm = build_coupling(N);
      const std::size_t w = std::max<std::size_t>(1, N / 16);
      const TwoSidedResidual sp = special_inverse_residual(Sign::plus, cm, w);
      const TwoSidedResidual sm = special_inverse_residual(Sign::minus, cm, w);
      return std::max({sp.left, sp.right, sm.left, sm.right});
    }
    if (identity == "ansatz_inverse") {
      const InverseParams pr = solve_params(0.5, 1.0);
      const TwoSidedResidual r = ansatz_inverse_residual(pr, a, b, build_coupling(N),
                                                         std::max<std::size_t>(1, N / 16));
      return std::max(r.left, r.right);
    }
    if (identity == "round_trip") {
      const std::size_t w = std::max<std::size_t>(1, N / 8);
      return std::max(round_trip_residual(BasisKind::coord_fwd, N, w),
                      round_trip_residual(BasisKind::mom_fwd, N, w));
    }
    const FMatrix f = f_assemble(N, a, b, cfg.sum);
    if (identity == "involution") return involution_residual(f, default_f_window(N));
    if (identity == "primed_involution")
      return primed_involution_residual(momentum_rep(f), default_f_window(N));
    const ConstraintReport cr =
        f_constraint_residual(f, build_coupling(std::max<std::size_t>(1, N / 2)));
    return std::max({cr.family1, cr.family2, cr.family3});
  };

  ConvergenceReport rep;
  rep.identity = identity;
  rep.tolerance = tol;
  double prev = 0.0;
  bool decreasing = true;
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    ConvergencePoint pt;
    pt.N = Ns[i];
    pt.residual = residual_at(Ns[i]);
    if (i > 0) {
      pt.est_order = std::log2(prev / pt.residual);
      decreasing = decreasing && pt.residual < prev;
    }
    prev = pt.residual;
    rep.points.push_back(pt);
  }
  rep.pass = decreasing && rep.points.back().residual <= tol;
  return rep;
}

}  // namespace vertexkit
