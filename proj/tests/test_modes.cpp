#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "vertexkit/modes.hpp"

using namespace vertexkit;

namespace {

const ModeTable& table_a() {
  static const ModeTable t = generate_modes({3, 1}, 4096);
  return t;
}

const ModeTable& table_b() {
  static const ModeTable t = generate_modes({3, 2}, 4096);
  return t;
}

const SumConfig r2_cfg{2048, Extrapolation::richardson2, 1e-4};

}  // namespace

TEST_CASE("leading coefficients match the closed fractions") {
  const ModeTable& a = table_a();
  const ModeTable& b = table_b();
  const double a_ref[6] = {1.0,       2.0 / 3.0, 2.0 / 9.0,
                           22.0 / 81.0, 0.15637860082304526749, 0.18381344307270233196};
  const double b_ref[6] = {1.0,       4.0 / 3.0, 8.0 / 9.0,
                           68.0 / 81.0, 0.72427983539094650206, 0.69684499314128943759};
  for (int k = 0; k < 6; ++k) {
    CHECK_THAT(a[k], Catch::Matchers::WithinRel(a_ref[k], 1e-14));
    CHECK_THAT(b[k], Catch::Matchers::WithinRel(b_ref[k], 1e-14));
  }
}

TEST_CASE("tables are positive with unit head and tiny recursion residual") {
  for (const ModeTable* t : {&table_a(), &table_b()}) {
    CHECK((*t)[0] == 1.0);
    for (std::size_t k = 0; k <= t->length(); ++k) CHECK((*t)[k] > 0.0);
    CHECK(recursion_residual(*t) <= 1e-12);
  }
}

TEST_CASE("recursion route agrees with the convolution route") {
  for (int p : {2, 3, 4, 6}) {
    for (int q : {1, p - 1}) {
      if (q < 1) continue;
      const ModeTable fast = generate_modes({p, q}, 2000);
      const ModeTable slow = generate_modes_oracle({p, q}, 2000);
      double worst = 0.0;
      for (std::size_t k = 0; k <= 2000; ++k)
        worst = std::max(worst, std::abs(fast[k] - slow[k]) / slow[k]);
      INFO("p=" << p << " q=" << q);
      CHECK(worst <= 1e-12);
      if (q == p - 1) break;
    }
  }
}

TEST_CASE("scaled coefficients settle as the index doubles") {
  for (const ModeTable* t : {&table_a(), &table_b()}) {
    const double e = 1.0 - t->s();
    double prev = -1.0;
    for (std::size_t k = 64; 2 * k <= t->length(); k *= 2) {
      const double d = std::abs((*t)[k] * std::pow(k, e) - (*t)[2 * k] * std::pow(2 * k, e));
      if (prev >= 0.0) CHECK(d < prev);
      prev = d;
    }
  }
}

TEST_CASE("exponent validation") {
  CHECK_THROWS_AS(generate_modes({3, 0}, 8), std::invalid_argument);
  CHECK_THROWS_AS(generate_modes({4, 2}, 8), std::invalid_argument);
  CHECK_THROWS_AS(generate_modes({1, 1}, 8), std::invalid_argument);
  CHECK_THROWS_AS(generate_modes_oracle({5, 3}, 8), std::invalid_argument);
  CHECK_NOTHROW(generate_modes({4, 3}, 8));
  CHECK_NOTHROW(generate_modes({2, 1}, 8));
}

TEST_CASE("sum guards") {
  const ModeTable& a = table_a();
  CHECK_THROWS_AS(sum_S(1, a, SumConfig{8, Extrapolation::none, 1e-4}), std::invalid_argument);
  const ModeTable small = generate_modes({3, 1}, 64);
  CHECK_THROWS_AS(sum_S(1, small, r2_cfg), std::invalid_argument);
  CHECK_THROWS_AS(sum_O(Sign::plus, 3, a, r2_cfg), std::invalid_argument);
  CHECK_THROWS_AS(sum_O(Sign::plus, 0, a, r2_cfg), std::invalid_argument);
  CHECK_THROWS_AS(sum_Stilde(Sign::plus, 3, a, r2_cfg), std::invalid_argument);
  CHECK_THROWS_AS(sum_Etilde(Sign::plus, 2, a, r2_cfg), std::invalid_argument);
}

TEST_CASE("odd-shift sum matches its closed form") {
  const ModeTable& a = table_a();
  const SumValue o2 = sum_O(Sign::plus, 2, a, r2_cfg);
  const double ref = 0.40306652538538174458;
  CHECK(std::abs(sum_O_closed(Sign::plus, 2, a) - ref) <= 1e-14);
  CHECK(std::abs(o2.value - ref) <= 1e-6);
  CHECK(std::abs(o2.value - ref) <= 2.0 * o2.est_error + 1e-12);

  for (const ModeTable* t : {&table_a(), &table_b()}) {
    for (std::size_t n = 2; n <= 20; n += 2) {
      const SumValue plus = sum_O(Sign::plus, n, *t, r2_cfg);
      const SumValue minus = sum_O(Sign::minus, n, *t, r2_cfg);
      INFO("q=" << t->exponents.q << " n=" << n);
      CHECK(std::abs(plus.value - sum_O_closed(Sign::plus, n, *t)) <=
            2.0 * plus.est_error + 1e-12);
      CHECK(std::abs(minus.value - sum_O_closed(Sign::minus, n, *t)) <=
            2.0 * minus.est_error + 1e-12);
    }
  }
}

TEST_CASE("same-parity sums hit their frozen references") {
  const double ref_a[5] = {0.53790187962670312706, 0.67930062654223437569,
                           0.33025632132939757028, 0.39469303349268344956,
                           0.25077953059666300211};
  const double ref_b[5] = {1.9241962407465905305, 1.7827974938310592819, 1.4337531886182224765,
                           1.3693164764549365972, 1.2254029735589161497};
  const ModeTable fine_a = generate_modes({3, 1}, 16384);
  const ModeTable fine_b = generate_modes({3, 2}, 16384);
  const SumConfig fine_cfg{8192, Extrapolation::richardson2, 1e-4};
  for (std::size_t n = 1; n <= 5; ++n) {
    const SumValue va = sum_S(n, fine_a, fine_cfg);
    const SumValue vb = sum_S(n, fine_b, fine_cfg);
    INFO("n=" << n);
    CHECK(std::abs(va.value - ref_a[n - 1]) <= 2.0 * va.est_error + 1e-12);
    CHECK(std::abs(vb.value - ref_b[n - 1]) <= 2.0 * vb.est_error + 1e-12);
    CHECK(std::abs(va.value - ref_a[n - 1]) <= 1e-5);
    CHECK(std::abs(vb.value - ref_b[n - 1]) <= 1e-5);
  }
}

TEST_CASE("squared-denominator sums hit their frozen references") {
  const double stil_a[2] = {0.093994171415730834234, 0.038464323743709525891};
  const double stil_b[2] = {0.22482673864340518272, 0.10139702147459913127};
  for (std::size_t i = 0; i < 2; ++i) {
    const std::size_t n = 2 * (i + 1);
    const SumValue va = sum_Stilde(Sign::plus, n, table_a(), r2_cfg);
    const SumValue vb = sum_Stilde(Sign::plus, n, table_b(), r2_cfg);
    CHECK(std::abs(va.value - stil_a[i]) <= 2.0 * va.est_error + 1e-12);
    CHECK(std::abs(vb.value - stil_b[i]) <= 2.0 * vb.est_error + 1e-12);
  }
  const double etil_a[3] = {1.0377322493447832738, 0.12794410616412320579,
                            0.050047808562247006365};
  const double etil_b[3] = {1.1685648165724576223, 0.19087680389501281117,
                            0.089813536656061650799};
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t n = 2 * i + 1;
    const SumValue va = sum_Etilde(Sign::plus, n, table_a(), r2_cfg);
    const SumValue vb = sum_Etilde(Sign::plus, n, table_b(), r2_cfg);
    CHECK(std::abs(va.value - etil_a[i]) <= 2.0 * va.est_error + 1e-12);
    CHECK(std::abs(vb.value - etil_b[i]) <= 2.0 * vb.est_error + 1e-12);
  }
}

TEST_CASE("reflection relations for the squared-denominator sums") {
  CHECK(std::abs(tilde_reflection(0.0, 1.0, {3, 1}) - pi * std::sqrt(3.0) / 4.0) <= 1e-15);
  CHECK(std::abs(tilde_reflection(1.0, 0.0, {3, 1}) - 0.5) <= 1e-15);
  for (const ModeTable* t : {&table_a(), &table_b()}) {
    for (std::size_t n = 2; n <= 4; n += 2) {
      const SumValue minus = sum_Stilde(Sign::minus, n, *t, r2_cfg);
      const SumValue plus = sum_Stilde(Sign::plus, n, *t, r2_cfg);
      const SumValue sn = sum_S(n, *t, r2_cfg);
      INFO("Stilde q=" << t->exponents.q << " n=" << n);
      CHECK(std::abs(minus.value - tilde_reflection(plus.value, sn.value, t->exponents)) <= 1e-4);
    }
    for (std::size_t n = 1; n <= 3; n += 2) {
      const SumValue minus = sum_Etilde(Sign::minus, n, *t, r2_cfg);
      const SumValue plus = sum_Etilde(Sign::plus, n, *t, r2_cfg);
      const SumValue sn = sum_S(n, *t, r2_cfg);
      INFO("Etilde q=" << t->exponents.q << " n=" << n);
      CHECK(std::abs(minus.value - tilde_reflection(plus.value, sn.value, t->exponents)) <= 1e-4);
    }
  }
}

TEST_CASE("crossed products of coefficients and sums telescope to 1/n") {
  double worst = 0.0;
  for (std::size_t n = 1; n <= 50; ++n) {
    const SumValue v = identity_uS(n, table_a(), table_b(), r2_cfg);
    worst = std::max(worst, std::abs(v.value - 1.0 / n));
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("symmetric pair matrix") {
  const ModeTable& a = table_a();
  const ModeTable& b = table_b();
  CHECK_THAT(w_element(1, 2, a, b), Catch::Matchers::WithinRel(8.0 / 27.0, 1e-14));
  CHECK_THAT(w_element(0, 1, a, b), Catch::Matchers::WithinRel(2.0, 1e-14));
  CHECK(w_element(2, 1, a, b) == w_element(1, 2, a, b));
  CHECK_THROWS_AS(w_element(0, 0, a, b), std::invalid_argument);

  double worst = 0.0;
  for (std::size_t m = 1; m <= 499; ++m)
    for (std::size_t n = (m % 2 == 0) ? 1 : 2; n <= 499; n += 2)
      worst = std::max(worst, w_recursion_residual(m, n, a, b));
  CHECK(worst <= 1e-12);
}

TEST_CASE("error estimates stay honest against a refined reference") {
  const ModeTable big = generate_modes({3, 1}, 16384);
  const SumValue ref = sum_S(2, big, SumConfig{8192, Extrapolation::richardson2, 1e-4});
  for (auto mode : {Extrapolation::none, Extrapolation::richardson1, Extrapolation::richardson2}) {
    const SumValue v = sum_S(2, big, SumConfig{512, mode, 1e-4});
    INFO("extrapolation=" << extrapolation_name(mode));
    CHECK(std::abs(v.value - ref.value) <= v.est_error + ref.est_error);
    CHECK(v.terms_used == 512);
  }
}
