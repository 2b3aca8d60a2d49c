#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>
#include <sys/wait.h>

#include "vertexkit/basis.hpp"
#include "vertexkit/fmatrix.hpp"
#include "vertexkit/inverse.hpp"
#include "vertexkit/io.hpp"
#include "vertexkit/modes.hpp"
#include "vertexkit/vertex.hpp"

using namespace vertexkit;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int n, bool pass, const std::string& detail) {
  if (pass) {
    std::printf("ACCEPTANCE %d: PASS\n", n);
  } else {
    ++failures;
    if (detail.empty())
      std::printf("ACCEPTANCE %d: FAIL\n", n);
    else
      std::printf("ACCEPTANCE %d: FAIL (%s)\n", n, detail.c_str());
  }
  std::fflush(stdout);
}

template <typename Fn>
void criterion(int n, Fn&& fn) {
  try {
    std::string detail;
    const bool ok = fn(detail);
    report(n, ok, detail);
  } catch (const std::exception& e) {
    report(n, false, e.what());
  }
}

std::string g3(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const SumConfig assemble_cfg{2048, Extrapolation::richardson2, 1e-4};

const FMatrix& fmat(std::size_t N) {
  static std::map<std::size_t, FMatrix> built;
  auto it = built.find(N);
  if (it == built.end()) {
    static const ModeTable a = generate_modes({3, 1}, 4096);
    static const ModeTable b = generate_modes({3, 2}, 4096);
    it = built.emplace(N, f_assemble(N, a, b, assemble_cfg)).first;
  }
  return it->second;
}

const ModeTable& long_a() {
  static const ModeTable t = generate_modes({3, 1}, 16384);
  return t;
}

const ModeTable& long_b() {
  static const ModeTable t = generate_modes({3, 2}, 16384);
  return t;
}

int run_command(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";

  criterion(1, [](std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    const double v = f00();
    const double target = std::log(27.0 / 16.0);
    bool ok = std::abs((1.0 + v) / (1.0 - v) - target) <= 1e-14;
    if (!ok) detail = "closed form off by " + g3(std::abs((1.0 + v) / (1.0 - v) - target));

    const ModeTable a = generate_modes({3, 1}, 4096);
    const double half_log = 0.5 * target;
    const SumValue raw = f00_series(a, SumConfig{2048, Extrapolation::none, 1e-4});
    if (std::abs(raw.value - half_log) > 1e-2) {
      ok = false;
      detail += " raw series error " + g3(std::abs(raw.value - half_log));
    }
    const SumValue acc = f00_series(a, SumConfig{2048, Extrapolation::richardson1, 1e-4});
    if (std::abs(acc.value - half_log) > 1e-5) {
      ok = false;
      detail += " accelerated series error " + g3(std::abs(acc.value - half_log));
    }
    const double dt = seconds_since(t0);
    if (dt >= 1.0) {
      ok = false;
      detail += " runtime " + g3(dt) + "s";
    }
    return ok;
  });

  criterion(2, [](std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int p : {2, 3, 4, 6}) {
      for (int q : {1, p - 1}) {
        const ModeTable t = generate_modes({p, q}, 2000);
        const ModeTable o = generate_modes_oracle({p, q}, 2000);
        for (std::size_t k = 0; k <= 2000; ++k)
          worst = std::max(worst, std::abs(t.coeffs[k] - o.coeffs[k]) / std::abs(o.coeffs[k]));
        if (p == 2) break;
      }
    }
    bool ok = worst <= 1e-12;
    if (!ok) detail = "worst relative deviation " + g3(worst);
    const double dt = seconds_since(t0);
    if (dt >= 5.0) {
      ok = false;
      detail += " runtime " + g3(dt) + "s";
    }
    return ok;
  });

  criterion(3, [](std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    double prev[4] = {-1.0, -1.0, -1.0, -1.0};
    bool ok = true;
    double final_worst = 0.0;
    for (std::size_t N : {128, 256, 512}) {
      const CouplingIdentityResiduals r =
          coupling_identity_residuals(build_coupling(N), N / 8);
      const double cur[4] = {r.col_identity, r.col_skew, r.row_identity, r.row_skew};
      for (int i = 0; i < 4; ++i) {
        if (prev[i] >= 0.0 && cur[i] >= prev[i]) {
          ok = false;
          detail = "identity " + std::to_string(i) + " stalls at N=" + std::to_string(N);
        }
        prev[i] = cur[i];
        final_worst = std::max(final_worst, cur[i]);
      }
    }
    if (final_worst > 5e-2) {
      ok = false;
      detail += " final residual " + g3(final_worst);
    }
    const double dt = seconds_since(t0);
    if (dt >= 30.0) {
      ok = false;
      detail += " runtime " + g3(dt) + "s";
    }
    return ok;
  });

  criterion(4, [](std::string& detail) {
    const ModeTable a = generate_modes({3, 1}, 2048);
    const ModeTable b = generate_modes({3, 2}, 2048);
    const InverseParams pr = solve_params(0.5, 1.0);
    bool ok = true;
    double prev = -1.0;
    double last = 0.0;
    for (std::size_t N : {128, 256, 512}) {
      const TwoSidedResidual r = ansatz_inverse_residual(pr, a, b, build_coupling(N), N / 16);
      const double m = std::max(r.left, r.right);
      if (prev >= 0.0 && m >= prev) {
        ok = false;
        detail = "residual stalls at N=" + std::to_string(N);
      }
      prev = m;
      last = m;
    }
    if (last > 5e-2) {
      ok = false;
      detail += " final residual " + g3(last);
    }
    const CouplingMatrices cm = build_coupling(1024);
    const Mat combo_t = pr.beta * cm.m1.transpose() + pr.alpha * cm.m2.transpose();
    const Mat dense = combo_t.partialPivLu().inverse();
    const Mat closed = ansatz_inverse(pr, a, b, 1024);
    const double diff =
        (dense.topLeftCorner(16, 16) - closed.topLeftCorner(16, 16)).cwiseAbs().maxCoeff();
    if (diff > 1e-2) {
      ok = false;
      detail += " dense comparison " + g3(diff);
    }
    return ok;
  });

  criterion(5, [](std::string& detail) {
    bool ok = true;
    for (std::size_t N : {64, 256}) {
      const double h = hermiticity_residual(fmat(N));
      const double p = parity_reality_residual(fmat(N));
      if (h > 1e-12 || p > 1e-12) {
        ok = false;
        detail += " structure at N=" + std::to_string(N) + " h=" + g3(h) + " p=" + g3(p);
      }
    }
    double prev = -1.0, last = 0.0;
    for (std::size_t N : {128, 256, 512}) {
      const double r = involution_residual(fmat(N), default_f_window(N));
      if (prev >= 0.0 && r >= prev) {
        ok = false;
        detail += " involution stalls at N=" + std::to_string(N);
      }
      prev = r;
      last = r;
    }
    if (last > 5e-2) {
      ok = false;
      detail += " involution final " + g3(last);
    }
    return ok;
  });

  criterion(6, [](std::string& detail) {
    const OracleResult res = f_oracle_solve(64, assemble_cfg);
    const FMatrix& f = fmat(64);
    double worst = 0.0;
    for (Eigen::Index r = 0; r <= 8; ++r)
      for (Eigen::Index c = 0; c <= 8; ++c)
        worst = std::max(worst, std::abs(res.matrix.entries(r, c) - f.entries(r, c)));
    bool ok = worst <= 5e-2;
    if (!ok) detail = "window deviation " + g3(worst);
    const double f00_dev = std::abs(res.matrix.f00 - (-0.312987));
    if (f00_dev > 2e-2) {
      ok = false;
      detail += " zero-mode deviation " + g3(f00_dev);
    }
    return ok;
  });

  criterion(7, [](std::string& detail) {
    const SumConfig cfg{8192, Extrapolation::richardson2, 1e-4};
    bool ok = true;
    for (std::size_t n = 1; n <= 50; ++n) {
      const SumValue v = identity_uS(n, long_a(), long_b(), cfg);
      if (std::abs(v.value - 1.0 / static_cast<double>(n)) > 1e-4) {
        ok = false;
        detail = "mode-sum identity fails at n=" + std::to_string(n);
        break;
      }
    }
    for (const ModeTable* u : {&long_a(), &long_b()}) {
      for (std::size_t n = 2; n <= 20; n += 2) {
        for (Sign s : {Sign::plus, Sign::minus}) {
          const SumValue v = sum_O(s, n, *u, cfg);
          const double closed = sum_O_closed(s, n, *u);
          if (std::abs(v.value - closed) > v.est_error + 1e-12) {
            ok = false;
            detail += " odd-harmonic sum off at n=" + std::to_string(n) + " by " +
                      g3(std::abs(v.value - closed)) + " vs est " + g3(v.est_error);
          }
        }
      }
    }
    double worst = 0.0;
    for (std::size_t m = 1; m <= 499; ++m)
      for (std::size_t n = (m % 2 == 0) ? 1 : 2; n <= 500; n += 2)
        worst = std::max(worst, w_recursion_residual(m, n, long_a(), long_b()));
    if (worst > 1e-12) {
      ok = false;
      detail += " pair-sum recursion residual " + g3(worst);
    }
    return ok;
  });

  criterion(8, [](std::string& detail) {
    const NeumannFamily fam = build_neumann(fmat(128));
    bool ok = true;
    const double rs = neumann_row_sum_residual(fam);
    const double cy = neumann_cyclicity_residual(fam);
    const double ex = neumann_exchange_residual(fam);
    const double im = cyclic_imag_residual(fmat(128).entries);
    if (rs > 1e-12 || cy > 1e-12 || ex > 1e-12 || im > 1e-12) {
      ok = false;
      detail = "block identities rs=" + g3(rs) + " cy=" + g3(cy) + " ex=" + g3(ex) +
               " im=" + g3(im);
    }
    double prev = -1.0, last = 0.0;
    for (std::size_t N : {128, 256, 512}) {
      const MomentumRep rep = momentum_rep(fmat(N));
      const double r = primed_involution_residual(rep, N / 16);
      if (prev >= 0.0 && r >= prev) {
        ok = false;
        detail += " primed involution stalls at N=" + std::to_string(N);
      }
      prev = r;
      last = r;
    }
    if (last > 5e-2) {
      ok = false;
      detail += " primed involution final " + g3(last);
    }
    return ok;
  });

  criterion(9, [&cli](std::string& detail) {
    if (cli.empty()) {
      detail = "command line binary path missing";
      return false;
    }
    const fs::path dir = fs::temp_directory_path() / "vertexkit-acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir / "cache");
    const std::string cache = " --cache-dir \"" + (dir / "cache").string() + "\"";
    const std::string quiet = " > /dev/null 2>&1";

    const fs::path fa = dir / "fa.json";
    const fs::path fb = dir / "fb.json";
    const std::string base = "\"" + cli + "\" fmatrix --N 8 --sum-order 256" + cache;
    bool ok = true;
    if (run_command(base + " --out \"" + fa.string() + "\"" + quiet) != 0 ||
        run_command(base + " --out \"" + fb.string() + "\"" + quiet) != 0) {
      detail = "matrix export did not exit cleanly";
      return false;
    }
    if (read_text(fa) != read_text(fb)) {
      ok = false;
      detail = "repeated matrix exports differ";
    }

    const fs::path ra = dir / "ra.json";
    const fs::path rb = dir / "rb.json";
    const std::string verify =
        "\"" + cli + "\" verify --suite f-properties --N 64 --window 8 --sum-order 2048" + cache;
    if (run_command(verify + " --out \"" + ra.string() + "\"" + quiet) != 0 ||
        run_command(verify + " --out \"" + rb.string() + "\"" + quiet) != 0) {
      ok = false;
      detail += " clean verify did not exit 0";
    } else if (read_text(ra) != read_text(rb)) {
      ok = false;
      detail += " repeated verify reports differ";
    }
    const int tampered = run_command(verify + " --perturb-seed 7" + quiet);
    if (tampered != 2) {
      ok = false;
      detail += " tampered verify exited " + std::to_string(tampered);
    }
    return ok;
  });

  if (failures) {
    std::printf("%d of 9 criteria failed\n", failures);
    return 1;
  }
  std::printf("all 9 criteria passed\n");
  return 0;
}
