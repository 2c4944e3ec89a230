// SPDX-License-Identifier: Apache-2.0
//
// Closed-form evaluation of the swap cycle on a qutrit: stationary machine,
// probability unit, work, heats, efficiency and final system state.
#pragma once

#include "passive/cycle.hpp"
#include "passive/oracle.hpp"
#include "passive/states.hpp"

#include <cmath>
#include <limits>
#include <optional>

namespace passive {

/// Sum_{l=0}^{h} lambda^l, with T(-1) = 0 and T(-2) = -1/lambda.
template <typename Scalar>
Scalar geometric_sum(int h, Scalar lambda) {
  if (h < -2) throw Error(Errc::invalid_argument, "engine", "geometric sum needs h >= -2");
  if (!(lambda > Scalar(0))) throw Error(Errc::invalid_argument, "engine", "geometric ratio must be positive");
  if (h == -2) return -Scalar(1) / lambda;
  if (h == -1) return Scalar(0);
  if (h == 0) return Scalar(1);
  using std::abs;
  const Scalar gap = lambda - Scalar(1);
  if (abs(gap) <= Scalar(1e-9)) {
    Scalar acc(0), term(1);
    for (int l = 0; l <= h; ++l, term *= lambda) acc += term;
    return acc;
  }
  using std::expm1;
  using std::log1p;
  return expm1(Scalar(h + 1) * log1p(gap)) / gap;
}

/// ln T(h, lambda) for h >= -1 (ln 0 = -inf), safe for lambda^h beyond range.
template <typename Scalar>
Scalar log_geometric_sum(int h, Scalar lambda) {
  using std::log;
  if (h == -1) return -std::numeric_limits<Scalar>::infinity();
  if (h < -1) throw Error(Errc::invalid_argument, "engine", "log geometric sum needs h >= -1");
  if (lambda > Scalar(1)) return Scalar(h) * log(lambda) + log(geometric_sum(h, Scalar(1) / lambda));
  return log(geometric_sum(h, lambda));
}

/// Ratios and geometric sums entering the machine distribution.
template <typename Scalar>
struct CoefficientTable {
  Scalar r1;   // p0 / p1
  Scalar r2;   // p1 / p2
  Scalar dmn;  // ratio of the last two machine populations

  Scalar t1(int h) const { return geometric_sum(h, r1); }
  Scalar t2(int h) const { return geometric_sum(h, r2); }
};

namespace detail {

template <typename Scalar>
struct ClosedForm {
  Vector<Scalar> q;
  Scalar delta_p;
  Scalar alpha;
  Scalar dmn;
};

// Arithmetic on plain values.
template <typename Scalar>
struct DirectArith {
  Scalar r1, r2;
  Scalar zero() const { return Scalar(0); }
  Scalar pow1(int k) const { using std::pow; return pow(r1, Scalar(k)); }
  Scalar pow2(int k) const { using std::pow; return pow(r2, Scalar(k)); }
  Scalar t1(int h) const { return geometric_sum(h, r1); }
  Scalar t2(int h) const { return geometric_sum(h, r2); }
  static Scalar mul(Scalar a, Scalar b) { return a * b; }
  static Scalar add(Scalar a, Scalar b) { return a + b; }
  static Scalar ratio(Scalar a, Scalar b) { return a / b; }
};

// Arithmetic on logarithms of positive values.
template <typename Scalar>
struct LogArith {
  Scalar r1, r2, l1, l2;
  Scalar zero() const { return -std::numeric_limits<Scalar>::infinity(); }
  Scalar pow1(int k) const { return Scalar(k) * l1; }
  Scalar pow2(int k) const { return Scalar(k) * l2; }
  Scalar t1(int h) const { return log_geometric_sum(h, r1); }
  Scalar t2(int h) const { return log_geometric_sum(h, r2); }
  static Scalar mul(Scalar a, Scalar b) { return a + b; }
  static Scalar add(Scalar a, Scalar b) { return log_add(a, b); }
  static Scalar ratio(Scalar a, Scalar b) { using std::exp; return exp(a - b); }
};

// Unnormalised machine weights as sums of positive terms, valid for n >= 2.
template <typename Arith>
auto machine_weights(const Arith& A, int m, int n) {
  using Scalar = decltype(A.zero());
  const int d = m + n;
  Vector<Scalar> u(d);
  const Scalar r2n = A.pow2(n);
  const Scalar t2n2 = A.t2(n - 2);
  for (int j = 0; j < m; ++j) {
    const int k = m - j;
    const Scalar r1k = A.pow1(k);
    Scalar acc = A.mul(r2n, A.t1(k - 1));
    if (k < m) acc = A.add(acc, A.mul(r1k, A.t1(m - 1 - k)));
    acc = A.add(acc, A.mul(A.mul(A.pow2(1), r1k), t2n2));
    acc = A.add(acc, A.mul(r1k, r2n));
    u[j] = acc;
  }
  const Scalar r1m = A.pow1(m);
  const Scalar t1m1 = A.t1(m - 1);
  for (int j = m; j + 2 < d; ++j) {
    const int k = d - j - 2;
    const Scalar r2k1 = A.pow2(k + 1);
    Scalar acc = A.mul(A.mul(A.pow2(1), r1m), A.t2(k - 1));
    acc = A.add(acc, A.mul(r2k1, t1m1));
    acc = A.add(acc, A.mul(r2k1, r1m));
    acc = A.add(acc, A.mul(A.pow2(k + 2), A.t2(n - 2 - k)));
    u[j] = acc;
  }
  u[d - 2] = A.mul(A.pow2(1), A.add(A.t1(m), A.mul(A.pow2(1), t2n2)));
  u[d - 1] = A.add(t1m1, A.mul(A.pow2(1), A.t2(n - 1)));
  return u;
}

// Closed form without range checks; valid for m >= 1, n >= 2.
template <typename Scalar>
ClosedForm<Scalar> closed_form_unchecked(const DiagonalState<Scalar>& p, int m, int n) {
  using std::log;
  const Scalar r1 = p[0] / p[1];
  const Scalar r2 = p[1] / p[2];
  const Scalar l1 = log(r1), l2 = log(r2);
  const Scalar big = log(Scalar(1e12));
  using std::abs;
  const auto finish = [&](const auto& A, const Vector<Scalar>& u, Scalar unit_one) {
    Scalar z = u[0];
    for (Eigen::Index j = 1; j < u.size(); ++j) z = A.add(z, u[j]);
    ClosedForm<Scalar> out;
    out.q.resize(u.size());
    for (Eigen::Index j = 0; j < u.size(); ++j) out.q[j] = A.ratio(u[j], z);
    using std::expm1;
    out.alpha = p[1] * A.ratio(unit_one, z);
    out.delta_p = p[1] * A.ratio(A.pow1(m), z) * expm1(Scalar(n) * l2 - Scalar(m) * l1);
    out.dmn = A.ratio(u[u.size() - 2], u[u.size() - 1]);
    return out;
  };
  if (abs(Scalar(m) * l1) > big || abs(Scalar(n) * l2) > big) {
    const LogArith<Scalar> A{r1, r2, l1, l2};
    return finish(A, machine_weights(A, m, n), Scalar(0));
  }
  const DirectArith<Scalar> A{r1, r2};
  return finish(A, machine_weights(A, m, n), Scalar(1));
}

template <typename Scalar>
void require_positive_passive_qutrit(const DiagonalState<Scalar>& p, std::string_view module) {
  if (p.dim() != 3) throw Error(Errc::dimension_mismatch, module, "system must be a qutrit");
  if (!p.strictly_positive())
    throw Error(Errc::zero_probability, module, "system probabilities must be strictly positive");
  if (!(p[0] >= p[1] && p[1] >= p[2])) throw Error(Errc::not_passive, module, "system state is not passive");
}

}  // namespace detail

/// Smallest (m, n) handled by the closed form; smaller cycles use the oracle.
inline bool closed_form_applies(const CycleParams& params) noexcept { return params.m >= 2 && params.n >= 3; }

template <typename Scalar>
CoefficientTable<Scalar> coefficient_table(const DiagonalState<Scalar>& p, const CycleParams& params) {
  detail::require_positive_passive_qutrit(p, "engine");
  if (params.n < 2) throw Error(Errc::below_closed_form, "engine", "coefficient table needs n >= 2");
  const auto cf = detail::closed_form_unchecked(p, params.m, params.n);
  return {p[0] / p[1], p[1] / p[2], cf.dmn};
}

/// Stationary machine from the closed form (m >= 2, n >= 3).
template <typename Scalar>
DiagonalState<Scalar> machine_distribution(const DiagonalState<Scalar>& p, const CycleParams& params) {
  detail::require_positive_passive_qutrit(p, "engine");
  if (!closed_form_applies(params))
    throw Error(Errc::below_closed_form, "engine", "closed form needs m >= 2 and n >= 3");
  return DiagonalState<Scalar>::normalized(detail::closed_form_unchecked(p, params.m, params.n).q);
}

template <typename Scalar>
struct CycleOutcome {
  CycleParams params;
  Scalar delta_p;
  Scalar work;
  Scalar q_hot;
  Scalar q_cold;
  Scalar heat_hot;
  Scalar heat_cold;
  std::optional<Scalar> efficiency;  // empty when m * gap10 = 0
  bool efficiency_meaningful;        // work > 0
  DiagonalState<Scalar> final_system;
  DiagonalState<Scalar> machine;
  Scalar alpha_coeff;  // delta_p / (r2^n - r1^m)
  bool closed_form;    // false when the oracle fixed point was used
  bool final_active;
};

template <typename Scalar>
CycleOutcome<Scalar> run_cycle(const DiagonalState<Scalar>& p, const Hamiltonian<Scalar>& h,
                               const CycleParams& params) {
  detail::require_positive_passive_qutrit(p, "engine");
  if (h.dim() != 3) throw Error(Errc::dimension_mismatch, "engine", "Hamiltonian must be a qutrit ladder");
  const int m = params.m, n = params.n;

  Vector<Scalar> q;
  Scalar delta_p, alpha;
  const bool closed = closed_form_applies(params);
  if (closed) {
    auto cf = detail::closed_form_unchecked(p, m, n);
    q = std::move(cf.q);
    delta_p = cf.delta_p;
    alpha = cf.alpha;
  } else {
    q = stationary_machine(p, params).probs();
    const Eigen::Index d = params.machine_dim();
    // Flux through the hot closing swap; every edge of the loop carries it.
    delta_p = p[1] * q[m - 1] - p[0] * q[d - 1];
    const Scalar r1 = p[0] / p[1], r2 = p[1] / p[2];
    alpha = p[1] * q[d - 1] / (geometric_sum(m - 1, r1) + r2 * geometric_sum(n - 1, r2));
  }

  const Scalar g10 = h.gap10(), g21 = h.gap21();
  const Scalar q_hot = g10 * delta_p;
  const Scalar q_cold = g21 * delta_p;
  const Scalar heat_hot = Scalar(m) * q_hot;
  const Scalar heat_cold = Scalar(n) * q_cold;
  const Scalar work = heat_hot - heat_cold;

  std::optional<Scalar> eta;
  if (Scalar(m) * g10 != Scalar(0)) eta = Scalar(1) - Scalar(n) * g21 / (Scalar(m) * g10);

  Vector<Scalar> shifted(3);
  shifted << p[0] + Scalar(m) * delta_p, p[1] - Scalar(m + n) * delta_p, p[2] + Scalar(n) * delta_p;
  DiagonalState<Scalar> final_system(shifted);
  const bool active = !is_passive(final_system, h);

  return {params, delta_p, work, q_hot, q_cold, heat_hot, heat_cold, eta, work > Scalar(0),
          std::move(final_system), DiagonalState<Scalar>::normalized(q), alpha, closed, active};
}

}  // namespace passive
