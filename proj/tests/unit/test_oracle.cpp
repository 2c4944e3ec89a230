#include <doctest.h>

#include "support.hpp"

#include <numeric>
#include <set>

using namespace passive;
using testing::Rng;

namespace {
const Hamiltoniand kLadder{0.0, 3.0, 4.0};
const DiagonalStated kExample{0.5, 0.35, 0.15};

std::vector<double> sorted_entries(const Matrix<double>& m) {
  std::vector<double> v(m.data(), m.data() + m.size());
  std::sort(v.begin(), v.end());
  return v;
}

JointStated random_joint(Rng& rng, int ds, int dm) {
  const auto w = testing::random_weights(rng, ds * dm);
  return JointStated(Eigen::Map<const Matrix<double>>(w.data(), ds, dm));
}
}  // namespace

TEST_CASE("cycle step sequences") {
  const auto one = build_cycle(CycleParams(1, 1));
  REQUIRE(one.size() == 2);
  CHECK(one[0] == SwapStep{0, 1, 0, 1});
  CHECK(one[1] == SwapStep{1, 2, 0, 1});

  const auto two_one = build_cycle(CycleParams(2, 1));
  REQUIRE(two_one.size() == 3);
  CHECK(two_one[0] == SwapStep{0, 1, 0, 1});
  CHECK(two_one[1] == SwapStep{0, 1, 1, 2});
  CHECK(two_one[2] == SwapStep{1, 2, 0, 2});

  const auto two_three = build_cycle(CycleParams(2, 3));
  const std::vector<SwapStep> expected{{0, 1, 0, 1}, {0, 1, 1, 4}, {1, 2, 3, 4}, {1, 2, 2, 3}, {1, 2, 0, 2}};
  CHECK(two_three == expected);
}

TEST_CASE("machine levels touched by a cycle form one closed loop") {
  for (int m = 1; m <= 9; ++m) {
    for (int n = 1; n <= 9; ++n) {
      const CycleParams params(m, n);
      const auto steps = build_cycle(params);
      const int d = m + n;
      CHECK(int(steps.size()) == d);
      int hot = 0;
      for (const auto& s : steps) hot += s.a == 0 && s.b == 1;
      CHECK(hot == m);
      if (d < 3) continue;
      // Every level has two incident arrows and walking them visits all levels.
      std::vector<std::vector<int>> adj{std::size_t(d)};
      for (const auto& s : steps) {
        adj[std::size_t(s.c)].push_back(int(s.e));
        adj[std::size_t(s.e)].push_back(int(s.c));
      }
      for (const auto& a : adj) CHECK(a.size() == 2);
      int prev = -1, cur = 0, visited = 0;
      do {
        const int next = adj[std::size_t(cur)][0] != prev ? adj[std::size_t(cur)][0] : adj[std::size_t(cur)][1];
        prev = cur;
        cur = next;
        ++visited;
      } while (cur != 0 && visited <= d);
      CHECK(visited == d);
    }
  }
}

TEST_CASE("swap steps are involutions that preserve the joint multiset") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = rng.integer(1, 6), n = rng.integer(1, 6);
    const auto joint = random_joint(rng, 3, m + n);
    const auto steps = build_cycle(CycleParams(m, n));
    for (const auto& s : steps) {
      const auto twice = apply_cycle(apply_cycle(joint, {s}), {s});
      CHECK(twice.probs() == joint.probs());
    }
    const auto after = apply_cycle(joint, steps);
    CHECK(sorted_entries(after.probs()) == sorted_entries(joint.probs()));
    const std::vector<SwapStep> reversed(steps.rbegin(), steps.rend());
    CHECK(apply_cycle(after, reversed).probs() == joint.probs());
  }
}

TEST_CASE("apply_cycle leaves untouched cells alone") {
  Rng rng(32);
  const auto joint = random_joint(rng, 4, 5);
  const SwapStep s{1, 3, 0, 4};
  const auto out = apply_cycle(joint, {s});
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = 0; j < 5; ++j) {
      if ((i == 1 && j == 4) || (i == 3 && j == 0)) continue;
      CHECK(out(i, j) == joint(i, j));
    }
  }
  CHECK(out(1, 4) == joint(3, 0));
  CHECK(out(3, 0) == joint(1, 4));
  CHECK_THROWS_AS(apply_cycle(joint, {SwapStep{0, 4, 0, 1}}), Error);
  CHECK_THROWS_AS(apply_cycle(joint, {SwapStep{0, 0, 0, 1}}), Error);
}

TEST_CASE("worked example through the joint permutation") {
  const DiagonalStated q{0.85 / 1.35, 0.5 / 1.35};
  const auto sim = simulate_cycle(kExample, kLadder, CycleParams(1, 1), q);
  CHECK(std::abs(sim.system[0] - 0.535185) < 1e-6);
  CHECK(std::abs(sim.system[1] - 0.279630) < 1e-6);
  CHECK(std::abs(sim.system[2] - 0.185185) < 1e-6);
  CHECK(std::abs(sim.work - 0.0703704) < 1e-6);
  // The same marginal written out from the permuted cells.
  CHECK(sim.system[0] == doctest::Approx((0.5 + 0.35) * q[0]).epsilon(1e-15));
  CHECK(sim.system[2] == doctest::Approx((0.35 + 0.15) * q[1]).epsilon(1e-15));
}

TEST_CASE("two-level machine fixed point") {
  const auto q = stationary_machine(kExample, CycleParams(1, 1));
  CHECK(q[0] == doctest::Approx(0.85 / 1.35).epsilon(1e-15));
  CHECK(q[1] == doctest::Approx(0.5 / 1.35).epsilon(1e-15));
  CHECK(std::abs(q[0] - 0.629630) < 1e-6);
  Rng rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = testing::random_passive(rng);
    const auto r = stationary_machine(p, CycleParams(1, 1));
    CHECK(r[0] == doctest::Approx((p[0] + p[1]) / (1 + p[1])).epsilon(1e-14));
  }
}

TEST_CASE("fixed point residuals") {
  Rng rng(34);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = testing::random_passive(rng);
    const int m = rng.integer(1, 12), n = rng.integer(1, 12);
    const CycleParams params(m, n);
    const auto q = stationary_machine(p, params);
    CHECK(fixed_point_residual(p, params, q) <= 1e-13);
    CHECK((q.probs().array() > 0).all());
  }
  const auto p = testing::random_passive(rng);
  CHECK(fixed_point_residual(p, CycleParams(4, 3), stationary_machine(p, CycleParams(4, 3))) <= 1e-13);
}

TEST_CASE("uniform system gives a uniform machine") {
  const auto u = DiagonalStated::uniform(3);
  for (int m = 1; m <= 7; ++m) {
    for (int n = 1; n <= 7; ++n) {
      const auto q = stationary_machine(u, CycleParams(m, n));
      CHECK(testing::max_diff(q.probs(), Vector<double>::Constant(m + n, 1.0 / (m + n))) < 1e-14);
    }
  }
}

TEST_CASE("transfer map is column-stochastic and sparse") {
  Rng rng(35);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = testing::random_passive(rng);
    const int m = rng.integer(1, 10), n = rng.integer(1, 10);
    const auto t = machine_transfer(p, build_cycle(CycleParams(m, n)), m + n);
    const Matrix<double> dense(t);
    CHECK((dense.colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-15);
    CHECK((dense.array() >= 0).all());
    for (Eigen::Index j = 0; j < dense.cols(); ++j) CHECK((dense.col(j).array() != 0).count() <= 3);
  }
}

TEST_CASE("reusability, work consistency and correlations") {
  Rng rng(36);
  for (int trial = 0; trial < 60; ++trial) {
    const auto p = testing::random_passive(rng);
    const auto h = testing::random_ladder(rng, 3);
    const int m = rng.integer(1, 9), n = rng.integer(1, 9);
    const CycleParams params(m, n);
    const auto q = stationary_machine(p, params);
    const auto sim = simulate_cycle(p, h, params, q);
    CHECK(testing::max_diff(sim.machine.probs(), q.probs()) <= 1e-12);
    const auto o = run_cycle(p, h, params);
    CHECK(std::abs(sim.work - o.work) <= 1e-12);
    CHECK(testing::max_diff(sim.system.probs(), o.final_system.probs()) <= 1e-12);
    if (std::abs(o.work) > 1e-12) CHECK(mutual_information(sim.final_joint) > 0);
    CHECK(sorted_entries(sim.final_joint.probs()) == sorted_entries(sim.initial.probs()));
  }
}

TEST_CASE("mutual information") {
  Rng rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = testing::random_state(rng, rng.integer(2, 5));
    const auto b = testing::random_state(rng, rng.integer(2, 5));
    CHECK(mutual_information(JointStated::product(a, b)) < 1e-14);
  }
  Matrix<double> corr = Matrix<double>::Zero(2, 2);
  corr(0, 0) = corr(1, 1) = 0.5;
  CHECK(mutual_information(JointStated(corr)) == doctest::Approx(std::log(2.0)).epsilon(1e-15));

  const DiagonalStated q{0.85 / 1.35, 0.5 / 1.35};
  const auto joint = apply_cycle(JointStated::product(kExample, q), build_cycle(CycleParams(1, 1)));
  // Independent evaluation from the explicit 3 x 2 table.
  const Matrix<double> t = joint.probs();
  const Vector<double> rows = t.rowwise().sum();
  const Vector<double> cols = t.colwise().sum().transpose();
  double info = 0;
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 2; ++j)
      if (t(i, j) > 0) info += t(i, j) * std::log(t(i, j) / (rows[i] * cols[j]));
  CHECK(info > 0);
  CHECK(mutual_information(joint) == doctest::Approx(info).epsilon(1e-12));
}

TEST_CASE("power iteration agrees with the direct solve") {
  Rng rng(38);
  StationaryOptions power;
  power.solver = StationarySolver::power_iteration;
  StationaryOptions direct;
  direct.solver = StationarySolver::direct;
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = testing::random_passive(rng, 3, 0.05);
    const CycleParams params(rng.integer(1, 5), rng.integer(1, 5));
    const auto a = stationary_machine(p, params, power);
    const auto b = stationary_machine(p, params, direct);
    CHECK(testing::max_diff(a.probs(), b.probs()) < 1e-10);
  }
  StationaryOptions starved = power;
  starved.max_iterations = 2;
  try {
    stationary_machine(kExample, CycleParams(6, 7), starved);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::no_convergence);
  }
  // Automatic mode switches to iteration above the direct-solve threshold.
  StationaryOptions small_direct;
  small_direct.direct_max_dim = 2;
  CHECK(testing::max_diff(stationary_machine(kExample, CycleParams(2, 3), small_direct).probs(),
                          stationary_machine(kExample, CycleParams(2, 3)).probs()) < 1e-10);
}

TEST_CASE("reducible transfer maps are reported") {
  Eigen::SparseMatrix<double> identity(4, 4);
  identity.setIdentity();
  try {
    stationary_distribution(identity);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::singular_system);
  }
  // A pure ground system drains the machine into one level.
  const auto t = machine_transfer(DiagonalStated{1.0, 0.0, 0.0}, build_cycle(CycleParams(2, 2)), 4);
  try {
    stationary_distribution(t);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::singular_system);
  }
}

TEST_CASE("stationary machine preconditions") {
  CHECK_THROWS_AS(stationary_machine(DiagonalStated{0.2, 0.5, 0.3}, CycleParams(1, 1)), Error);
  CHECK_THROWS_AS(stationary_machine(DiagonalStated{0.6, 0.4, 0.0}, CycleParams(1, 1)), Error);
  CHECK_THROWS_AS(stationary_machine(DiagonalStated{0.6, 0.4}, CycleParams(1, 1)), Error);
  CHECK_THROWS_AS(simulate_cycle(kExample, kLadder, CycleParams(2, 1), DiagonalStated{0.5, 0.5}), Error);
  Matrix<double> bad = Matrix<double>::Constant(2, 2, 0.3);
  CHECK_THROWS_AS(JointStated{bad}, Error);
}
