#include <doctest.h>

#include "support.hpp"

using namespace passive;
using testing::Rng;

namespace {
const Hamiltoniand kLadder{0.0, 3.0, 4.0};
const Hamiltoniand kDouble{0.0, 1.0, 3.0};  // gap21 = 2 gap10
const RationalGapRatio kTwoOne(2, 1);

// State with ln(p0/p1) = hot and ln(p1/p2) = cold.
DiagonalStated from_log_gaps(double hot, double cold) {
  Vector<double> w(3);
  w << std::exp(hot + cold), std::exp(cold), 1.0;
  return DiagonalStated::normalized(w / w.sum());
}

// Smallest N, then M, within tolerance, by exhaustive search.
RationalGapRatio brute_ratio(double g10, double g21, double tol) {
  for (std::int64_t N = 1;; ++N)
    for (std::int64_t M = 1; double(M) * g10 <= double(N) * g21 + tol * g21 + g10; ++M)
      if (std::abs(double(M) * g10 - double(N) * g21) <= tol * g21) return {M, N};
}
}  // namespace

TEST_CASE("gap ratio examples") {
  CHECK(approximate_gap_ratio(kDouble, 1e-9) == RationalGapRatio(2, 1));
  CHECK(approximate_gap_ratio(Hamiltoniand{0.0, 1.5, 3.0}, 1e-9) == RationalGapRatio(1, 1));
  CHECK(approximate_gap_ratio(kLadder, 1e-9) == RationalGapRatio(1, 3));
  const double phi = (1 + std::sqrt(5.0)) / 2;
  const auto golden = approximate_gap_ratio(Hamiltoniand{0.0, phi, phi + 1.0}, 1e-3);
  std::vector<std::int64_t> fib{1, 1};
  while (fib.size() < 40) fib.push_back(fib[fib.size() - 1] + fib[fib.size() - 2]);
  bool consecutive = false;
  for (std::size_t k = 0; k + 1 < fib.size(); ++k) consecutive |= golden.M == fib[k] && golden.N == fib[k + 1];
  CHECK(consecutive);
  CHECK(golden == brute_ratio(phi, 1.0, 1e-3));
  CHECK_THROWS_AS(approximate_gap_ratio(Hamiltoniand{0.0, 1.0, 1.0}, 1e-6), Error);
  CHECK_THROWS_AS(approximate_gap_ratio(Hamiltoniand{0.0, 0.0, 1.0}, 1e-6), Error);
}

TEST_CASE("gap ratio agrees with exhaustive search") {
  Rng rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const double g10 = rng.uniform(0.1, 3.0), g21 = rng.uniform(0.1, 3.0);
    const double tol = std::pow(10.0, -rng.uniform(1.0, 4.0));
    const auto r = approximate_gap_ratio(Hamiltoniand{0.0, g10, g10 + g21}, tol);
    CHECK(std::abs(double(r.M) * g10 - double(r.N) * g21) <= tol * g21);
    CHECK(r == brute_ratio(g10, g21, tol));
  }
}

TEST_CASE("region labels") {
  CHECK(classify(thermal_state(0.8, kDouble), kTwoOne) == RegionLabel::balanced);
  CHECK(classify(DiagonalStated{0.5, 0.35, 0.15}, kTwoOne) == RegionLabel::cold_steeper);
  CHECK(classify(DiagonalStated{0.55, 0.3, 0.15}, kTwoOne) == RegionLabel::hot_steeper);
  CHECK(classify(DiagonalStated::uniform(3), kTwoOne) == RegionLabel::balanced);
  CHECK(to_string(RegionLabel::cold_steeper) == "cold_steeper");
  CHECK_THROWS_AS(classify(DiagonalStated{0.6, 0.4, 0.0}, kTwoOne), Error);
  // Exactly one label, matching the sign of the log comparison.
  Rng rng(42);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = testing::random_passive(rng);
    const RationalGapRatio ratio(rng.integer(1, 5), rng.integer(1, 5));
    const double gap = double(ratio.N) * std::log(p[1] / p[2]) - double(ratio.M) * std::log(p[0] / p[1]);
    const auto label = classify(p, ratio);
    if (gap > 1e-6) CHECK(label == RegionLabel::cold_steeper);
    if (gap < -1e-6) CHECK(label == RegionLabel::hot_steeper);
  }
}

TEST_CASE("region labels do not depend on the energy unit") {
  Rng rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    const auto h = testing::random_ladder(rng, 3);
    const double scale = rng.uniform(0.01, 100.0);
    const Hamiltoniand scaled(Vector<double>(h.energies() * scale));
    const auto r = approximate_gap_ratio(h, 1e-2);
    CHECK(approximate_gap_ratio(scaled, 1e-2) == r);
    const double beta = rng.uniform(0.05, 3.0);
    const auto a = thermal_state(beta, h);
    const auto b = thermal_state(beta / scale, scaled);
    CHECK(testing::max_diff(a.probs(), b.probs()) < 1e-12);
    const auto p = testing::random_passive(rng);
    const CycleParams params(rng.integer(1, 6), rng.integer(1, 6));
    CHECK(in_activation_region(p, h, params) == in_activation_region(p, scaled, params));
  }
}

TEST_CASE("activation region examples") {
  CHECK(in_activation_region(DiagonalStated{0.5, 0.35, 0.15}, kLadder, CycleParams(1, 1)));
  CHECK_FALSE(in_activation_region(DiagonalStated{0.5, 0.3, 0.2}, kLadder, CycleParams(1, 1)));
  const auto o = run_cycle(DiagonalStated{0.5, 0.3, 0.2}, kLadder, CycleParams(1, 1));
  CHECK(o.delta_p == doctest::Approx(-0.01 / 1.3).epsilon(1e-13));
  for (int m = 1; m <= 6; ++m)
    for (int n = 1; n <= 6; ++n) CHECK_FALSE(in_activation_region(thermal_state(0.9, kLadder), kLadder, CycleParams(m, n)));
  // Balanced energy exchange never activates.
  CHECK_FALSE(in_activation_region(DiagonalStated{0.5, 0.35, 0.15}, kDouble, CycleParams(2, 1)));
}

TEST_CASE("activation region and the sign of the work") {
  for (const auto& h : {kLadder, kDouble, Hamiltoniand{0.0, 2.0, 2.5}}) {
    const auto grid = passive_simplex_grid<double>(50);
    for (int m = 1; m <= 6; ++m) {
      for (int n = 1; n <= 6; ++n) {
        const CycleParams params(m, n);
        for (const auto& p : grid) {
          if (!(p[1] > p[2]) || !(p[0] > p[1])) continue;
          const auto o = run_cycle(p, h, params);
          if (std::abs(o.work) < 1e-13) {
            CHECK_FALSE((in_activation_region(p, h, params) && o.work < -1e-13));
            continue;
          }
          CHECK((o.work > 0) == in_activation_region(p, h, params));
        }
      }
    }
  }
}

TEST_CASE("covering cycles") {
  const auto deep = DiagonalStated{0.5, 0.45, 0.05};
  REQUIRE(classify(deep, kTwoOne) == RegionLabel::cold_steeper);
  const auto c = covering_cycle(deep, kTwoOne, 50);
  REQUIRE(c.has_value());
  CHECK(*c == CycleParams(3, 1));

  // Family members for (M, N) = (2, 1) are m = 2n + 1.
  const auto near = from_log_gaps(0.3, 0.6 + 0.07);
  const auto cn = covering_cycle(near, kTwoOne, 50);
  REQUIRE(cn.has_value());
  CHECK(cn->m == 2 * cn->n + 1);
  CHECK(cn->n > 1);
  CHECK(in_activation_region(near, kDouble, *cn));
  for (int k = 1; k < cn->n; ++k) CHECK_FALSE(in_activation_region(near, kDouble, CycleParams(2 * k + 1, k)));

  const auto mirror = covering_cycle(DiagonalStated{0.9, 0.08, 0.02}, kTwoOne, 50);
  REQUIRE(mirror.has_value());
  CHECK(*mirror == CycleParams(2, 2));

  CHECK_FALSE(covering_cycle(from_log_gaps(0.5, 1.0 + 1e-4), kTwoOne, 10).has_value());
  try {
    covering_cycle(thermal_state(0.8, kDouble), kTwoOne, 10);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::never_activable);
  }
}

TEST_CASE("covering family stays inside its region") {
  const auto grid = passive_simplex_grid<double>(60);
  for (int n = 1; n <= 40; ++n) {
    const CycleParams params(2 * n + 1, n);
    for (const auto& p : grid) {
      if (classify(p, kTwoOne) != RegionLabel::cold_steeper) CHECK_FALSE(in_activation_region(p, kTwoOne, params));
    }
  }
}

TEST_CASE("k-activability witness examples") {
  const DiagonalStated p{0.4, 0.35, 0.25};
  CHECK(k_activability_witness(p, Hamiltoniand{0.0, 1.0, 2.0}, CycleParams(2, 1)));
  CHECK(std::pow(0.35, 3) == doctest::Approx(0.042875));
  CHECK_FALSE(k_activability_witness(p, Hamiltoniand{0.0, 1.0, 3.0}, CycleParams(2, 1)));
  for (int m = 1; m <= 6; ++m)
    for (int n = 1; n <= 6; ++n) CHECK_FALSE(k_activability_witness(thermal_state(0.6, kLadder), kLadder, CycleParams(m, n)));
}

TEST_CASE("activation implies an active tensor power") {
  Rng rng(44);
  for (int trial = 0; trial < 12; ++trial) {
    const auto p = testing::random_passive(rng, 3, 0.02);
    const auto h = testing::random_ladder(rng, 3);
    for (int m = 1; m <= 5; ++m) {
      for (int n = 1; m + n <= 8 && n <= 5; ++n) {
        const CycleParams params(m, n);
        if (!in_activation_region(p, h, params)) continue;
        CHECK(k_activability_witness(p, h, params));
        CHECK(testing::tensor_power_ergotropy(p, h, m + n) > 1e-14);
      }
    }
  }
  // Witnesses are never issued for single copies of passive states at the
  // energy-balanced point.
  CHECK_FALSE(k_activability_witness(DiagonalStated{0.5, 0.35, 0.15}, kDouble, CycleParams(2, 1)));
}

TEST_CASE("coverage of the cold-steeper region") {
  CHECK(coverage_fraction(kTwoOne, CycleParams(2, 1), 50) == 0.0);
  const double f31 = coverage_fraction(kTwoOne, CycleParams(3, 1), 50);
  const double f52 = coverage_fraction(kTwoOne, CycleParams(5, 2), 50);
  const double f115 = coverage_fraction(kTwoOne, CycleParams(11, 5), 50);
  CHECK(f31 > 0);
  CHECK(f31 <= f52);
  CHECK(f52 <= f115);
  CHECK(f115 <= 1.0);
  double prev = 0;
  for (int n : {1, 2, 5, 10, 50, 200}) {
    const double f = coverage_fraction(kTwoOne, CycleParams(2 * n + 1, n), 200);
    CHECK(f >= prev);
    prev = f;
  }
  CHECK(prev > 0.99);
  CHECK_THROWS_AS(coverage_fraction(kTwoOne, CycleParams(3, 1), 5), Error);
}

TEST_CASE("simplex grid") {
  const auto grid = passive_simplex_grid<double>(10);
  CHECK(grid.size() == 55);
  for (const auto& p : grid) {
    CHECK(p[0] >= p[1] - 1e-15);
    CHECK(p[1] >= p[2] - 1e-15);
    CHECK(p[2] > 0);
  }
}
