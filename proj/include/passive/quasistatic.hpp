// SPDX-License-Identifier: Apache-2.0
//
// Infinite-machine limit: admissible swap ratios, the asymptotic machine and
// the quasi-static flow of passive qutrit states toward the thermal manifold.
#pragma once

#include "passive/engine.hpp"
#include "passive/states.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string_view>
#include <vector>

namespace passive {

/// Admissible swap ratios alpha = n/m: lower keeps the population flow
/// positive, upper keeps the work positive.
template <typename Scalar>
struct AlphaRange {
  Scalar lower;  // ln(p0/p1) / ln(p1/p2)
  Scalar upper;  // gap10 / gap21

  bool contains(Scalar alpha) const noexcept { return alpha >= lower && alpha <= upper; }
};

namespace detail {

template <typename Scalar>
void require_qutrit_pair(const DiagonalState<Scalar>& p, const Hamiltonian<Scalar>& h, std::string_view module) {
  if (p.dim() != 3 || h.dim() != 3) throw Error(Errc::dimension_mismatch, module, "qutrit system expected");
}

template <typename Scalar>
AlphaRange<Scalar> raw_alpha_range(const DiagonalState<Scalar>& p, const Hamiltonian<Scalar>& h) {
  using std::log;
  if (!(h.gap21() > Scalar(0))) throw Error(Errc::degenerate_gap, "quasistatic", "upper gap is zero");
  const Scalar l1 = log(p[0] / p[1]), l2 = log(p[1] / p[2]);
  const Scalar lower = l2 > Scalar(0) ? l1 / l2 : std::numeric_limits<Scalar>::infinity();
  return {lower, h.gap10() / h.gap21()};
}

}  // namespace detail

template <typename Scalar>
AlphaRange<Scalar> alpha_range(const DiagonalState<Scalar>& p, const Hamiltonian<Scalar>& h) {
  detail::require_qutrit_pair(p, h, "quasistatic");
  if (!p.strictly_positive()) throw Error(Errc::zero_probability, "quasistatic", "probabilities must be positive");
  const auto range = detail::raw_alpha_range(p, h);
  if (!(range.lower < range.upper))
    throw Error(Errc::not_in_region, "quasistatic", "admissible swap-ratio range is empty");
  return range;
}

/// Large-machine stationary distribution: a geometric tail with ratio p1/p0
/// on the m hot levels and one with ratio p2/p1 on the next n - 2 levels.
template <typename Scalar>
struct AsymptoticMachine {
  int m;
  int n;
  Scalar mixture_weight;
  Scalar hot_ratio;
  Scalar cold_ratio;
  Scalar z_hot;
  Scalar z_cold;

  Vector<Scalar> hot_tail() const {
    Vector<Scalar> t(m);
    Scalar w(1);
    for (int j = 0; j < m; ++j, w *= hot_ratio) t[j] = w / z_hot;
    return t;
  }
  Vector<Scalar> cold_tail() const {
    Vector<Scalar> t(n - 2);
    Scalar w(1);
    for (int j = 0; j < n - 2; ++j, w *= cold_ratio) t[j] = w / z_cold;
    return t;
  }
  /// Mixture over all m + n machine levels; the last two carry no weight.
  Vector<Scalar> distribution() const {
    Vector<Scalar> q = Vector<Scalar>::Zero(m + n);
    q.head(m) = mixture_weight * hot_tail();
    q.segment(m, n - 2) = (Scalar(1) - mixture_weight) * cold_tail();
    return q;
  }
};

/// Asymptotic machine for n = ceil(alpha m) cold swaps.
template <typename Scalar>
AsymptoticMachine<Scalar> asymptotic_machine(const DiagonalState<Scalar>& p, const Hamiltonian<Scalar>& h, int m,
                                             Scalar alpha) {
  const auto range = alpha_range(p, h);
  if (!range.contains(alpha)) throw Error(Errc::out_of_range, "quasistatic", "alpha outside the admissible range");
  if (m < 1) throw Error(Errc::invalid_argument, "quasistatic", "m must be positive");
  using std::ceil;
  const int n = int(ceil(alpha * Scalar(m)));
  if (n < 3) throw Error(Errc::invalid_argument, "quasistatic", "need at least three cold swaps");
  const Scalar x = p[1] / p[0], y = p[2] / p[1];
  const Scalar weight = (Scalar(1) - y) / (Scalar(1) - x * y);
  return {m, n, weight, x, y, geometric_sum(m - 1, x), geometric_sum(n - 3, y)};
}

/// c in delta_p ~ c (p1/p0)^m for large machines.
template <typename Scalar>
Scalar asymptotic_delta_p_prefactor(const DiagonalState<Scalar>& p) {
  if (p.dim() != 3) throw Error(Errc::dimension_mismatch, "quasistatic", "system must be a qutrit");
  if (!(p[0] > p[1] && p[1] > p[2] && p[2] > Scalar(0)))
    throw Error(Errc::degenerate_gap, "quasistatic", "prefactor needs p0 > p1 > p2 > 0");
  const Scalar a = p[1] - p[2], b = p[0] - p[1], c = p[0] - p[2];
  return a * a * b * b / (p[1] * c * c);
}

/// Common rate of the flow, dp0/dt.
template <typename Scalar>
Scalar flow_rate(const Vector<Scalar>& p) {
  const Scalar a = p[1] - p[2], b = p[0] - p[1], c = p[0] - p[2];
  if (c == Scalar(0)) return Scalar(0);
  return a * a * b * b / (p[1] * c * c);
}

/// How alpha(t) is chosen along a trajectory.
template <typename Scalar>
class AlphaStrategy {
 public:
  enum class Kind { energy_conserving, entropy_conserving, constant, custom };
  using Callback = std::function<Scalar(const Vector<Scalar>& p, const AlphaRange<Scalar>& range)>;

  static AlphaStrategy energy_conserving() { return AlphaStrategy(Kind::energy_conserving); }
  static AlphaStrategy entropy_conserving() { return AlphaStrategy(Kind::entropy_conserving); }
  static AlphaStrategy constant(Scalar alpha) {
    AlphaStrategy s(Kind::constant);
    s.alpha_ = alpha;
    return s;
  }
  /// User rule; its value must stay inside the admissible range.
  static AlphaStrategy custom(Callback fn) {
    AlphaStrategy s(Kind::custom);
    s.fn_ = std::move(fn);
    return s;
  }

  Kind kind() const noexcept { return kind_; }
  Scalar constant_value() const noexcept { return alpha_; }

  Scalar operator()(const Vector<Scalar>& p, const AlphaRange<Scalar>& range) const {
    switch (kind_) {
      case Kind::energy_conserving: return range.upper;
      case Kind::entropy_conserving: return range.lower;
      case Kind::constant: return alpha_;
      case Kind::custom: break;
    }
    const Scalar a = fn_(p, range);
    using std::abs;
    const Scalar slack = Scalar(1e-12) * std::max(Scalar(1), abs(range.upper));
    if (!(a >= range.lower - slack && a <= range.upper + slack))
      throw Error(Errc::out_of_range, "quasistatic", "strategy returned alpha outside the admissible range");
    return a;
  }

  /// The swap ratio whose balance ends the trajectory.
  Scalar terminal_alpha(const AlphaRange<Scalar>& range) const {
    return kind_ == Kind::constant ? alpha_ : range.upper;
  }

 private:
  explicit AlphaStrategy(Kind k) : kind_(k) {}
  Kind kind_;
  Scalar alpha_ = Scalar(0);
  Callback fn_;
};

namespace detail {

template <typename Scalar>
Vector<Scalar> flow_direction(const Vector<Scalar>& p, Scalar alpha) {
  Vector<Scalar> v(3);
  v << Scalar(1), -(Scalar(1) + alpha), alpha;
  return flow_rate(p) * v;
}

template <typename Scalar>
AlphaRange<Scalar> range_at(const Vector<Scalar>& p, const Hamiltonian<Scalar>& h) {
  using std::log;
  const Scalar l2 = log(p[1] / p[2]);
  const Scalar lower = l2 > Scalar(0) ? log(p[0] / p[1]) / l2 : std::numeric_limits<Scalar>::infinity();
  return {lower, h.gap10() / h.gap21()};
}

// alpha* ln(p1/p2) - ln(p0/p1): positive while the flow for alpha* moves population.
template <typename Scalar>
Scalar balance_gap(const Vector<Scalar>& p, Scalar alpha_star) {
  using std::log;
  return alpha_star * log(p[1] / p[2]) - log(p[0] / p[1]);
}

template <typename Scalar>
bool inside_passive_simplex(const Vector<Scalar>& p) {
  return p[2] > Scalar(0) && p[1] >= p[2] && p[0] >= p[1];
}

}  // namespace detail

/// dp/dt for the given strategy; zero outside the strict admissible region.
template <typename Scalar>
Vector<Scalar> flow_field(const DiagonalState<Scalar>& p, const Hamiltonian<Scalar>& h,
                          const AlphaStrategy<Scalar>& strategy) {
  detail::require_qutrit_pair(p, h, "quasistatic");
  const auto range = detail::range_at(p.probs(), h);
  using std::abs;
  const Scalar slack = Scalar(1e-12) * std::max(Scalar(1), abs(range.upper));
  if (!p.strictly_positive() || !(range.lower < range.upper - slack)) return Vector<Scalar>::Zero(3);
  return detail::flow_direction(p.probs(), strategy(p.probs(), range));
}

template <typename Scalar>
struct TrajectorySample {
  Scalar t;
  DiagonalState<Scalar> state;
  DiagramPoint<Scalar> point;
  Scalar alpha;     // swap ratio in use at this sample
  Scalar work;      // accumulated up to this sample
  Scalar heat_hot;  // accumulated up to this sample
};

enum class Termination { reached_thermal, alpha_exhausted, max_steps };

constexpr std::string_view to_string(Termination t) noexcept {
  switch (t) {
    case Termination::reached_thermal: return "reached_thermal";
    case Termination::alpha_exhausted: return "alpha_exhausted";
    case Termination::max_steps: return "max_steps";
  }
  return "unknown";
}

template <typename Scalar>
struct Trajectory {
  std::vector<TrajectorySample<Scalar>> samples;
  Scalar accumulated_work = Scalar(0);
  Scalar accumulated_heat_hot = Scalar(0);
  Scalar endpoint_beta = Scalar(0);  // from the (0,2) level pair of the last sample
  Termination termination = Termination::reached_thermal;
  long rejected_steps = 0;
};

struct TrajectoryOptions {
  double terminal_tolerance = 1e-10;
  int max_halvings = 80;
};

/// RK4 integration of the flow. A step is halved, and stays halved, whenever
/// it would leave the passive simplex or cross the terminal balance.
template <typename Scalar>
Trajectory<Scalar> integrate_trajectory(const DiagonalState<Scalar>& start, const Hamiltonian<Scalar>& h,
                                        const AlphaStrategy<Scalar>& strategy, Scalar step, long max_steps,
                                        const TrajectoryOptions& opt = {}) {
  detail::require_qutrit_pair(start, h, "quasistatic");
  if (!(step > Scalar(0))) throw Error(Errc::invalid_argument, "quasistatic", "step must be positive");
  if (!start.strictly_positive()) throw Error(Errc::zero_probability, "quasistatic", "probabilities must be positive");
  if (!is_passive(start, h)) throw Error(Errc::not_passive, "quasistatic", "start state is not passive");
  if (!(h.gap10() > Scalar(0)) || !(h.gap21() > Scalar(0)))
    throw Error(Errc::degenerate_gap, "quasistatic", "both gaps must be positive");

  const Scalar tol = Scalar(opt.terminal_tolerance);
  const Scalar g10 = h.gap10(), g21 = h.gap21();
  using std::log;

  Trajectory<Scalar> traj;
  Vector<Scalar> p = start.probs();
  auto range = detail::range_at(p, h);
  const Scalar alpha_star = strategy.terminal_alpha(range);
  const Termination event =
      strategy.kind() == AlphaStrategy<Scalar>::Kind::constant ? Termination::alpha_exhausted : Termination::reached_thermal;

  const Scalar gap0 = detail::balance_gap(p, alpha_star);
  if (gap0 < -tol || alpha_star > range.upper + tol * std::max(Scalar(1), range.upper))
    throw Error(Errc::not_in_region, "quasistatic", "start state is outside the admissible region for this strategy");

  const auto record = [&](Scalar t, const Vector<Scalar>& q, Scalar alpha) {
    DiagonalState<Scalar> s = DiagonalState<Scalar>::normalized(q);
    traj.samples.push_back({t, s, diagram_point(s, h), alpha, traj.accumulated_work, traj.accumulated_heat_hot});
  };
  // Stage points may overshoot the balance, where the range is empty.
  const auto alpha_at = [&](const Vector<Scalar>& q) {
    const auto r = detail::range_at(q, h);
    return r.lower < r.upper ? strategy(q, r) : alpha_star;
  };

  Scalar alpha = gap0 > tol ? alpha_at(p) : alpha_star;
  record(Scalar(0), p, alpha);
  traj.termination = event;
  if (gap0 <= tol) {
    traj.endpoint_beta = log(p[0] / p[2]) / (h[2] - h[0]);
    return traj;
  }

  Scalar t(0), dt = step;
  long accepted = 0;
  int halvings = 0;
  bool done = false;
  while (!done) {
    if (accepted >= max_steps) {
      traj.termination = Termination::max_steps;
      break;
    }
    const Vector<Scalar> k1 = detail::flow_direction(p, alpha);
    const Vector<Scalar> y2 = p + dt / 2 * k1;
    const Vector<Scalar> k2 = detail::flow_direction(y2, alpha_at(y2));
    const Vector<Scalar> y3 = p + dt / 2 * k2;
    const Vector<Scalar> k3 = detail::flow_direction(y3, alpha_at(y3));
    const Vector<Scalar> y4 = p + dt * k3;
    const Vector<Scalar> k4 = detail::flow_direction(y4, alpha_at(y4));
    const Vector<Scalar> next = p + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);

    const bool inside = detail::inside_passive_simplex(next);
    const Scalar gap = inside ? detail::balance_gap(next, alpha_star) : Scalar(-1);
    if (!inside || gap < Scalar(0)) {
      if (++halvings > opt.max_halvings)
        throw Error(Errc::step_rejected, "quasistatic", "step size underflow near the terminal balance");
      dt /= 2;
      ++traj.rejected_steps;
      continue;
    }

    const Scalar next_alpha = gap <= tol ? alpha_star : alpha_at(next);
    const Scalar dp0 = next[0] - p[0];
    traj.accumulated_work += (g10 - alpha * g21 + g10 - next_alpha * g21) / 2 * dp0;
    traj.accumulated_heat_hot += g10 * dp0;
    t += dt;
    p = next;
    alpha = next_alpha;
    ++accepted;
    record(t, p, alpha);
    done = gap <= tol;
  }
  traj.endpoint_beta = log(p[0] / p[2]) / (h[2] - h[0]);
  return traj;
}

/// <H>(p) - <H>(thermal state with the entropy of p).
template <typename Scalar>
Scalar optimal_work(const DiagonalState<Scalar>& p, const Hamiltonian<Scalar>& h) {
  if (!is_passive(p, h)) throw Error(Errc::not_passive, "quasistatic", "state is not passive");
  const auto beta = beta_from_entropy(entropy(p), h);
  return std::max(mean_energy(p, h) - mean_energy(thermal_state(beta, h), h), Scalar(0));
}

template <typename Scalar>
Scalar instantaneous_efficiency(const Hamiltonian<Scalar>& h, Scalar alpha) {
  if (!(h.gap10() > Scalar(0))) throw Error(Errc::degenerate_gap, "quasistatic", "lower gap is zero");
  return Scalar(1) - alpha * h.gap21() / h.gap10();
}

/// 1 - beta_hot / beta_cold from the current virtual temperatures.
template <typename Scalar>
Scalar instantaneous_carnot(const DiagonalState<Scalar>& p, const Hamiltonian<Scalar>& h) {
  const auto table = virtual_temperatures(p, h);
  return Scalar(1) - table.beta_hot() / table.beta_cold();
}

/// Largest gap between efficiency and Carnot efficiency along the
/// entropy-conserving trajectory from p.
template <typename Scalar>
Scalar carnot_check(const DiagonalState<Scalar>& p, const Hamiltonian<Scalar>& h, Scalar step = Scalar(1e-2),
                    long max_steps = 100000) {
  alpha_range(p, h);
  const auto traj = integrate_trajectory(p, h, AlphaStrategy<Scalar>::entropy_conserving(), step, max_steps);
  Scalar worst(0);
  using std::abs;
  for (const auto& s : traj.samples) {
    const Scalar lower = detail::range_at(s.state.probs(), h).lower;
    worst = std::max(worst, abs(instantaneous_efficiency(h, lower) - instantaneous_carnot(s.state, h)));
  }
  return worst;
}

}  // namespace passive
