#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "vertexkit/basis.hpp"
#include "vertexkit/fmatrix.hpp"
#include "vertexkit/inverse.hpp"
#include "vertexkit/io.hpp"
#include "vertexkit/mode_cache.hpp"
#include "vertexkit/modes.hpp"
#include "vertexkit/verify.hpp"
#include "vertexkit/vertex.hpp"

namespace {

using namespace vertexkit;

struct GlobalOpts {
  std::size_t N = 256;
  std::size_t sum_order = 2048;
  std::size_t window = 16;
  std::string out;
  std::string format = "json";
  std::string cache_dir;
  std::vector<std::string> tolerances;
};

RunConfig make_run_config(const GlobalOpts& o) {
  RunConfig rc;
  rc.N = o.N;
  rc.sum.sum_order = o.sum_order;
  rc.window = o.window;
  rc.cache_dir = o.cache_dir;
  for (const std::string& kv : o.tolerances) {
    const auto eq = kv.find('=');
    require(eq != std::string::npos && eq > 0 && eq + 1 < kv.size(),
            "tolerance overrides take the form KEY=VALUE");
    const std::string key = kv.substr(0, eq);
    const double val = std::stod(kv.substr(eq + 1));
    if (key == "sum_tolerance")
      rc.sum.tolerance = val;
    else
      rc.tol_overrides[key] = val;
  }
  return rc;
}

void emit(const GlobalOpts& o, const std::string& content) {
  if (o.out.empty()) {
    std::cout << content << "\n";
  } else {
    atomic_write(o.out, content + "\n");
  }
}

std::string sum_cfg_json(const SumConfig& s) {
  return std::string("{\"sum_order\":") + jsonw::num(s.sum_order) + ",\"extrapolation\":" +
         jsonw::str(extrapolation_name(s.extrapolation)) + ",\"tolerance\":" +
         jsonw::num(s.tolerance) + "}";
}

std::string complex_vector_json(const CVecX& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += fmt17(v(i));
  }
  return out + "]";
}

std::string blocks_json(const NeumannFamily& fam) {
  std::string out = "{";
  bool first = true;
  for (const auto& [key, block] : fam.blocks) {
    if (!first) out += ",";
    first = false;
    out += "\"" + std::to_string(key.first) + std::to_string(key.second) + "\":" +
           jsonw::matrix(block);
  }
  return out + "}";
}

int run_modes(const GlobalOpts& o, int p, int q, std::size_t L) {
  const ModeTable t = obtain_modes({p, q}, L, o.cache_dir);
  if (o.format == "csv") {
    emit(o, csv_modes(p, q, t.coeffs));
    return 0;
  }
  emit(o, "{\"schema_version\":1,\"kind\":\"modes\",\"p\":" + jsonw::num(p) + ",\"q\":" +
          jsonw::num(q) + ",\"length\":" + jsonw::num(t.length()) + ",\"coeffs\":" +
          jsonw::array(t.coeffs) + "}");
  return 0;
}

int run_matrices(const GlobalOpts& o, const std::string& which) {
  const CouplingMatrices cm = build_coupling(o.N);
  if (o.format == "csv") {
    if (which == "m1")
      emit(o, csv_matrix("m1", o.N, 1, cm.m1));
    else if (which == "m2")
      emit(o, csv_matrix("m2", o.N, 1, cm.m2));
    else {
      std::cerr << "error: csv output holds one matrix; pass --which m1 or --which m2\n";
      return 1;
    }
    return 0;
  }
  std::string body = "{\"schema_version\":1,\"kind\":\"coupling\",\"n\":" + jsonw::num(o.N);
  if (which == "m1" || which == "both") body += ",\"m1\":" + jsonw::matrix(cm.m1);
  if (which == "m2" || which == "both") body += ",\"m2\":" + jsonw::matrix(cm.m2);
  emit(o, body + "}");
  return 0;
}

const char* route_name(InverseRoute r) {
  switch (r) {
    case InverseRoute::ansatz: return "ansatz";
    case InverseRoute::special_plus: return "special_plus";
    case InverseRoute::special_minus: return "special_minus";
  }
  return "ansatz";
}

int run_inverse(const GlobalOpts& o, double alpha, double beta) {
  const InverseParams pr = solve_params(alpha, beta);
  Mat inv;
  if (pr.route == InverseRoute::ansatz) {
    const std::size_t L = 2 * o.N;
    const ModeTable a = obtain_modes({pr.p, 1}, L, o.cache_dir);
    const ModeTable b = obtain_modes({pr.p, pr.p - 1}, L, o.cache_dir);
    inv = ansatz_inverse(pr, a, b, o.N);
  } else {
    inv = special_inverse(pr.route == InverseRoute::special_plus ? Sign::plus : Sign::minus,
                          build_coupling(o.N));
  }
  if (o.format == "csv") {
    emit(o, csv_matrix("inverse", o.N, 1, inv));
    return 0;
  }
  emit(o, "{\"schema_version\":1,\"kind\":\"inverse\",\"route\":" + jsonw::str(route_name(pr.route)) +
          ",\"alpha\":" + jsonw::num(pr.alpha) + ",\"beta\":" + jsonw::num(pr.beta) + ",\"p\":" +
          jsonw::num(pr.p) + ",\"alpha_prime\":" + jsonw::num(pr.alpha_prime) +
          ",\"beta_prime\":" + jsonw::num(pr.beta_prime) + ",\"n\":" + jsonw::num(o.N) +
          ",\"entries\":" + jsonw::matrix(inv) + "}");
  return 0;
}

int run_fmatrix(const GlobalOpts& o, bool oracle) {
  const RunConfig rc = make_run_config(o);
  if (oracle) {
    const OracleResult res = f_oracle_solve(o.N, rc.sum);
    if (o.format == "csv") {
      emit(o, csv_matrix("fmatrix_oracle", o.N, 0, res.matrix.entries));
      return 0;
    }
    emit(o, "{\"schema_version\":1,\"kind\":\"fmatrix\",\"n\":" + jsonw::num(o.N) + ",\"f00\":" +
            jsonw::num(res.matrix.f00) + ",\"sum_cfg\":" + sum_cfg_json(rc.sum) + ",\"rank\":" +
            jsonw::num(static_cast<int>(res.rank)) + ",\"nullity\":" +
            jsonw::num(static_cast<int>(res.nullity)) + ",\"condition\":" +
            jsonw::num(res.condition) + ",\"herm_defect\":" + jsonw::num(res.herm_defect) +
            ",\"entries\":" + jsonw::matrix(res.matrix.entries) + "}");
    return 0;
  }
  const std::size_t L = std::max(2 * o.N, 2 * rc.sum.sum_order);
  const ModeTable a = obtain_modes({3, 1}, L, o.cache_dir);
  const ModeTable b = obtain_modes({3, 2}, L, o.cache_dir);
  const FMatrix f = f_assemble(o.N, a, b, rc.sum);
  if (o.format == "csv") {
    emit(o, csv_matrix("fmatrix", o.N, 0, f.entries));
    return 0;
  }
  emit(o, "{\"schema_version\":1,\"kind\":\"fmatrix\",\"n\":" + jsonw::num(o.N) + ",\"f00\":" +
          jsonw::num(f.f00) + ",\"sum_cfg\":" + sum_cfg_json(f.sum_cfg) + ",\"entries\":" +
          jsonw::matrix(f.entries) + "}");
  return 0;
}

int run_vertex(const GlobalOpts& o, const std::string& rep, bool want_g,
               const std::string& block) {
  const RunConfig rc = make_run_config(o);
  const std::size_t L = std::max(2 * o.N, 2 * rc.sum.sum_order);
  const ModeTable a = obtain_modes({3, 1}, L, o.cache_dir);
  const ModeTable b = obtain_modes({3, 2}, L, o.cache_dir);
  const FMatrix f = f_assemble(o.N, a, b, rc.sum);

  const auto emit_blocks = [&](const NeumannFamily& fam, const std::string& kind) -> int {
    if (o.format == "csv") {
      if (block.size() != 2 || block[0] < '1' || block[0] > '3' || block[1] < '1' ||
          block[1] > '3') {
        std::cerr << "error: csv output needs --block rs with r,s in {1,2,3}\n";
        return 1;
      }
      const int r = block[0] - '0', s = block[1] - '0';
      emit(o, csv_matrix(kind + "_" + block, o.N, 0, fam.blocks.at({r, s})));
      return 0;
    }
    emit(o, "{\"schema_version\":1,\"kind\":" + jsonw::str(kind) + ",\"rep\":" +
            jsonw::str(want_g ? "momentum" : rep) + ",\"n\":" + jsonw::num(o.N) +
            ",\"blocks\":" + blocks_json(fam) + "}");
    return 0;
  };

  if (want_g) return emit_blocks(build_g(momentum_rep(f)), "g");
  if (rep == "oscillator") return emit_blocks(build_neumann(f), "vertex");

  const MomentumRep m = momentum_rep(f);
  if (o.format == "csv") {
    std::cerr << "error: the momentum representation is written as json\n";
    return 1;
  }
  emit(o, "{\"schema_version\":1,\"kind\":\"vertex\",\"rep\":\"momentum\",\"n\":" +
          jsonw::num(o.N) + ",\"f00_prime\":" + jsonw::num(m.f00_prime) + ",\"f0n_prime\":" +
          complex_vector_json(m.f0n_prime) + ",\"fnm_prime\":" + jsonw::matrix(m.fnm_prime) + "}");
  return 0;
}

std::string verify_report_json(const VerifyReport& rep, const RunConfig& rc) {
  std::string out = "{\"schema_version\":1,\"kind\":\"verify\",\"suite\":" + jsonw::str(rep.suite) +
                    ",\"n\":" + jsonw::num(rep.N) + ",\"window\":" + jsonw::num(rc.window) +
                    ",\"sum_cfg\":" + sum_cfg_json(rc.sum) + ",\"checks\":[";
  for (std::size_t i = 0; i < rep.checks.size(); ++i) {
    const Check& c = rep.checks[i];
    if (i) out += ",";
    out += "{\"name\":" + jsonw::str(c.name) + ",\"value\":" + jsonw::num(c.value) +
           ",\"tolerance\":" + jsonw::num(c.tolerance) + ",\"pass\":" +
           (c.pass ? "true" : "false") + "}";
  }
  out += "],\"pass\":";
  out += rep.pass ? "true" : "false";
  return out + "}";
}

int run_verify_cmd(const GlobalOpts& o, const std::string& suite,
                   const std::optional<std::uint64_t>& seed) {
  RunConfig rc = make_run_config(o);
  rc.perturb_seed = seed;
  if (o.format != "json") {
    std::cerr << "error: verify reports are written as json\n";
    return 1;
  }
  const VerifyReport rep = run_verify(suite, rc);
  for (const Check& c : rep.checks)
    std::printf("%-22s %-24s %-12s %s\n", c.name.c_str(), fmt17(c.value).c_str(),
                fmt17(c.tolerance).c_str(), c.pass ? "PASS" : "FAIL");
  std::printf("suite %s: %s\n", rep.suite.c_str(), rep.pass ? "PASS" : "FAIL");
  if (!o.out.empty()) atomic_write(o.out, verify_report_json(rep, rc) + "\n");
  return rep.pass ? 0 : 2;
}

int run_convergence_cmd(const GlobalOpts& o, const std::string& identity,
                        const std::string& n_list) {
  if (o.format != "json") {
    std::cerr << "error: convergence reports are written as json\n";
    return 1;
  }
  std::vector<std::size_t> Ns;
  std::size_t pos = 0;
  while (pos < n_list.size()) {
    const auto comma = n_list.find(',', pos);
    const std::string tok = n_list.substr(pos, comma == std::string::npos ? comma : comma - pos);
    require(!tok.empty(), "empty entry in N list");
    Ns.push_back(static_cast<std::size_t>(std::stoull(tok)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  const RunConfig rc = make_run_config(o);
  const ConvergenceReport rep = run_convergence(identity, Ns, rc);
  for (const ConvergencePoint& p : rep.points) {
    if (p.est_order)
      std::printf("N=%-6zu residual=%-24s est_order=%s\n", p.N, fmt17(p.residual).c_str(),
                  fmt17(*p.est_order).c_str());
    else
      std::printf("N=%-6zu residual=%-24s est_order=n/a\n", p.N, fmt17(p.residual).c_str());
  }
  std::printf("identity %s: %s\n", rep.identity.c_str(), rep.pass ? "PASS" : "FAIL");
  if (!o.out.empty()) {
    std::string body = "{\"schema_version\":1,\"kind\":\"convergence\",\"identity\":" +
                       jsonw::str(rep.identity) + ",\"tolerance\":" + jsonw::num(rep.tolerance) +
                       ",\"points\":[";
    for (std::size_t i = 0; i < rep.points.size(); ++i) {
      const ConvergencePoint& p = rep.points[i];
      if (i) body += ",";
      body += "{\"n\":" + jsonw::num(p.N) + ",\"residual\":" + jsonw::num(p.residual) +
              ",\"est_order\":" + (p.est_order ? jsonw::num(*p.est_order) : "null") + "}";
    }
    body += "],\"pass\":";
    body += rep.pass ? "true" : "false";
    atomic_write(o.out, body + "}\n");
  }
  return rep.pass ? 0 : 2;
}

int run_cache(const GlobalOpts& o, const std::string& action, int p, std::size_t L) {
  if (action == "list") {
    for (const std::string& name : cache_list(o.cache_dir)) std::printf("%s\n", name.c_str());
    return 0;
  }
  if (action == "clear") {
    std::printf("removed %zu\n", cache_clear(o.cache_dir));
    return 0;
  }
  obtain_modes({p, 1}, L, o.cache_dir);
  obtain_modes({p, p - 1}, L, o.cache_dir);
  const auto dir = cache_dir(o.cache_dir);
  std::printf("%s\n", cache_file(dir, {p, 1}, L).string().c_str());
  std::printf("%s\n", cache_file(dir, {p, p - 1}, L).string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"half-string vertex matrix toolkit"};
  app.require_subcommand(1);

  GlobalOpts o;
  app.add_option("--N", o.N, "truncation size");
  app.add_option("--sum-order", o.sum_order, "terms per infinite sum");
  app.add_option("--window", o.window, "window for residual checks");
  app.add_option("--out", o.out, "write the artifact to this file");
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--tolerance", o.tolerances, "per-check tolerance override KEY=VALUE");
  app.add_option("--cache-dir", o.cache_dir, "mode cache directory (default VERTEXKIT_CACHE)");

  auto* modes = app.add_subcommand("modes", "generate Taylor mode coefficients");
  int mp = 3, mq = 1;
  std::size_t mL = 64;
  modes->add_option("--p", mp, "exponent denominator");
  modes->add_option("--q", mq, "exponent numerator");
  modes->add_option("--L", mL, "highest coefficient index");

  auto* matrices = app.add_subcommand("matrices", "build the odd/even coupling matrices");
  std::string which = "both";
  matrices->add_option("--which", which, "m1, m2, or both")
      ->check(CLI::IsMember({"m1", "m2", "both"}));

  auto* inverse = app.add_subcommand("inverse", "invert beta*M1^T + alpha*M2^T");
  double alpha = 0.5, beta = 1.0;
  inverse->add_option("--alpha", alpha, "coefficient of M2^T");
  inverse->add_option("--beta", beta, "coefficient of M1^T");

  auto* fmatrix = app.add_subcommand("fmatrix", "assemble the coupling matrix of the vertex");
  bool oracle = false;
  fmatrix->add_flag("--oracle", oracle, "rebuild from the linear constraints instead");

  auto* vertex = app.add_subcommand("vertex", "combine the matrix into interaction blocks");
  std::string rep = "oscillator", block;
  bool want_g = false;
  vertex->add_option("--rep", rep, "oscillator or momentum")
      ->check(CLI::IsMember({"oscillator", "momentum"}));
  vertex->add_flag("--g", want_g, "weighted momentum-representation blocks");
  vertex->add_option("--block", block, "single block rs for csv output");

  auto* verify = app.add_subcommand("verify", "run a residual check suite");
  std::string suite = "all";
  std::uint64_t seed_value = 0;
  verify->add_option("--suite", suite, "modes, basis, inverse, f-properties, vertex, or all");
  auto* seed_opt = verify->add_option("--perturb-seed", seed_value,
                                      "tamper with one matrix entry before checking");

  auto* convergence = app.add_subcommand("convergence", "track a residual across truncations");
  std::string identity = "involution", n_list = "128,256,512";
  convergence->add_option("--identity", identity,
                          "m_identity, special_inverse, ansatz_inverse, round_trip, involution, "
                          "primed_involution, or constraints");
  convergence->add_option("--N", n_list, "comma-separated truncation sizes");

  auto* cache = app.add_subcommand("cache", "manage the mode cache");
  std::string action;
  int cp = 3;
  std::size_t cL = 8192;
  cache->add_option("action", action, "list, clear, or prewarm")
      ->required()
      ->check(CLI::IsMember({"list", "clear", "prewarm"}));
  cache->add_option("--p", cp, "exponent denominator to prewarm");
  cache->add_option("--L", cL, "table length to prewarm");

  for (CLI::App* s : {modes, matrices, inverse, fmatrix, vertex, verify, convergence, cache})
    s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*modes) return run_modes(o, mp, mq, mL);
    if (*matrices) return run_matrices(o, which);
    if (*inverse) return run_inverse(o, alpha, beta);
    if (*fmatrix) return run_fmatrix(o, oracle);
    if (*vertex) return run_vertex(o, rep, want_g, block);
    if (*verify) {
      std::optional<std::uint64_t> seed;
      if (seed_opt->count() > 0) seed = seed_value;
      return run_verify_cmd(o, suite, seed);
    }
    if (*convergence) return run_convergence_cmd(o, identity, n_list);
    if (*cache) return run_cache(o, action, cp, cL);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
