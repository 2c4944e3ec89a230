// SPDX-License-Identifier: Apache-2.0
//
// Brute-force simulator: the cycle as a literal permutation of joint
// system-machine outcomes, and the machine fixed point by linear algebra.
#pragma once

#include "passive/cycle.hpp"
#include "passive/states.hpp"

#include <Eigen/SparseCore>

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

namespace passive {

/// Diagonal joint distribution, rows indexed by system level and columns by
/// machine level.
template <typename Scalar>
class JointState {
 public:
  explicit JointState(Matrix<Scalar> probs) : probs_(std::move(probs)) {
    if (probs_.size() == 0) throw Error(Errc::invalid_state, "oracle", "empty joint distribution");
    if ((probs_.array() < Scalar(0)).any())
      throw Error(Errc::invalid_state, "oracle", "negative joint probability");
    using std::abs;
    if (abs(probs_.sum() - Scalar(1)) > Scalar(1e-12))
      throw Error(Errc::invalid_state, "oracle", "joint probabilities must sum to one");
  }

  static JointState product(const DiagonalState<Scalar>& system, const DiagonalState<Scalar>& machine) {
    return JointState(system.probs() * machine.probs().transpose());
  }

  Eigen::Index system_dim() const noexcept { return probs_.rows(); }
  Eigen::Index machine_dim() const noexcept { return probs_.cols(); }
  const Matrix<Scalar>& probs() const noexcept { return probs_; }
  Scalar operator()(Eigen::Index i, Eigen::Index j) const { return probs_(i, j); }

  DiagonalState<Scalar> system_marginal() const {
    return DiagonalState<Scalar>::normalized(probs_.rowwise().sum());
  }
  DiagonalState<Scalar> machine_marginal() const {
    return DiagonalState<Scalar>::normalized(probs_.colwise().sum().transpose());
  }

 private:
  Matrix<Scalar> probs_;
};

using JointStated = JointState<double>;

/// Exchange of |a>_P|e>_M with |b>_P|c>_M.
struct SwapStep {
  Eigen::Index a = 0, b = 1;  // system pair
  Eigen::Index c = 0, e = 1;  // machine pair

  friend bool operator==(const SwapStep&, const SwapStep&) = default;
};

/// Steps in application order: hot swaps along the machine chain, the hot
/// closing swap, cold swaps back down the chain, the cold closing swap.
inline std::vector<SwapStep> build_cycle(const CycleParams& params) {
  const Eigen::Index m = params.m;
  const Eigen::Index d = params.machine_dim();
  std::vector<SwapStep> steps;
  steps.reserve(std::size_t(d));
  for (Eigen::Index j = 0; j + 1 < m; ++j) steps.push_back({0, 1, j, j + 1});
  steps.push_back({0, 1, m - 1, d - 1});
  for (Eigen::Index j = d - 2; j >= m; --j) steps.push_back({1, 2, j, j + 1});
  steps.push_back({1, 2, 0, m});
  return steps;
}

/// Moves every step's system pair up by `offset` levels, used to embed a
/// qutrit cycle in a window of a larger system.
inline std::vector<SwapStep> shift_system_levels(std::vector<SwapStep> steps, Eigen::Index offset) {
  for (auto& s : steps) {
    s.a += offset;
    s.b += offset;
  }
  return steps;
}

namespace detail {

inline void check_step(const SwapStep& s, Eigen::Index ds, Eigen::Index dm) {
  const auto in = [](Eigen::Index x, Eigen::Index n) { return x >= 0 && x < n; };
  if (s.a == s.b || s.c == s.e || !in(s.a, ds) || !in(s.b, ds) || !in(s.c, dm) || !in(s.e, dm))
    throw Error(Errc::out_of_range, "oracle", "swap step indices out of range");
}

// For every joint cell (row-major index i*dm + j) after the cycle, the
// original cell whose mass ends up there.
inline std::vector<Eigen::Index> cycle_source_cells(const std::vector<SwapStep>& steps, Eigen::Index ds,
                                                    Eigen::Index dm) {
  std::vector<Eigen::Index> source(std::size_t(ds * dm));
  for (std::size_t k = 0; k < source.size(); ++k) source[k] = Eigen::Index(k);
  for (const auto& s : steps) {
    check_step(s, ds, dm);
    std::swap(source[std::size_t(s.a * dm + s.e)], source[std::size_t(s.b * dm + s.c)]);
  }
  return source;
}

}  // namespace detail

template <typename Scalar>
JointState<Scalar> apply_cycle(const JointState<Scalar>& joint, const std::vector<SwapStep>& steps) {
  Matrix<Scalar> out = joint.probs();
  for (const auto& s : steps) {
    detail::check_step(s, joint.system_dim(), joint.machine_dim());
    std::swap(out(s.a, s.e), out(s.b, s.c));
  }
  return JointState<Scalar>(std::move(out));
}

/// Column-stochastic map q -> machine marginal of the cycle applied to p (x) q,
/// stored sparsely (at most one entry per system level per column).
template <typename Scalar>
Eigen::SparseMatrix<Scalar> machine_transfer(const DiagonalState<Scalar>& p, const std::vector<SwapStep>& steps,
                                             Eigen::Index machine_dim) {
  const Eigen::Index ds = p.dim();
  const auto source = detail::cycle_source_cells(steps, ds, machine_dim);
  std::vector<Eigen::Triplet<Scalar>> entries;
  entries.reserve(source.size());
  for (std::size_t cell = 0; cell < source.size(); ++cell) {
    const Eigen::Index to = Eigen::Index(cell) % machine_dim;
    const Eigen::Index from_sys = source[cell] / machine_dim;
    const Eigen::Index from_mach = source[cell] % machine_dim;
    if (p[from_sys] != Scalar(0)) entries.emplace_back(to, from_mach, p[from_sys]);
  }
  Eigen::SparseMatrix<Scalar> transfer(machine_dim, machine_dim);
  transfer.setFromTriplets(entries.begin(), entries.end());
  return transfer;
}

enum class StationarySolver { automatic, direct, power_iteration };

struct StationaryOptions {
  StationarySolver solver = StationarySolver::automatic;
  Eigen::Index direct_max_dim = 2048;
  double power_tolerance = 1e-13;
  long max_iterations = 1000000;
};

namespace detail {

// Grassmann-Taksar-Heyman elimination on the row-stochastic form of the
// transfer matrix. Subtraction-free, so small stationary entries keep full
// relative accuracy.
template <typename Scalar>
Vector<Scalar> stationary_gth(const Eigen::SparseMatrix<Scalar>& transfer) {
  const Eigen::Index d = transfer.rows();
  Matrix<Scalar> rates = Matrix<Scalar>(transfer).transpose();  // rates(i, j): i -> j
  for (Eigen::Index k = d - 1; k >= 1; --k) {
    const Scalar out = rates.row(k).head(k).sum();
    if (!(out > Scalar(0)))
      throw Error(Errc::singular_system, "oracle",
                  "machine fixed point is not unique (reducible transfer map)");
    rates.col(k).head(k) /= out;
    rates.topLeftCorner(k, k).noalias() += rates.col(k).head(k) * rates.row(k).head(k);
  }
  Vector<Scalar> q(d);
  q[0] = Scalar(1);
  for (Eigen::Index j = 1; j < d; ++j) q[j] = q.head(j).dot(rates.col(j).head(j));
  return q / q.sum();
}

template <typename Scalar>
Vector<Scalar> stationary_power(const Eigen::SparseMatrix<Scalar>& transfer, const StationaryOptions& opt) {
  const Eigen::Index d = transfer.rows();
  Vector<Scalar> q = Vector<Scalar>::Constant(d, Scalar(1) / Scalar(d));
  Vector<Scalar> next(d);
  for (long it = 0; it < opt.max_iterations; ++it) {
    next.noalias() = transfer * q;
    next /= next.sum();
    const Scalar residual = (next - q).cwiseAbs().maxCoeff();
    q.swap(next);
    if (residual <= Scalar(opt.power_tolerance)) return q;
  }
  throw Error(Errc::no_convergence, "oracle", "power iteration did not reach the residual tolerance");
}

}  // namespace detail

/// Fixed point of a column-stochastic transfer map.
template <typename Scalar>
Vector<Scalar> stationary_distribution(const Eigen::SparseMatrix<Scalar>& transfer,
                                       const StationaryOptions& opt = {}) {
  const bool direct = opt.solver == StationarySolver::direct ||
                      (opt.solver == StationarySolver::automatic && transfer.rows() <= opt.direct_max_dim);
  Vector<Scalar> q = direct ? detail::stationary_gth(transfer) : detail::stationary_power(transfer, opt);
  if (!(q.array() > Scalar(0)).all())
    throw Error(Errc::singular_system, "oracle", "machine fixed point has a non-positive entry");
  return q;
}

template <typename Scalar>
DiagonalState<Scalar> stationary_machine(const DiagonalState<Scalar>& p, const CycleParams& params,
                                         const StationaryOptions& opt = {}) {
  if (p.dim() != 3) throw Error(Errc::dimension_mismatch, "oracle", "system must be a qutrit");
  if (!p.strictly_positive())
    throw Error(Errc::zero_probability, "oracle", "system probabilities must be strictly positive");
  if (!(p[0] >= p[1] && p[1] >= p[2])) throw Error(Errc::not_passive, "oracle", "system state is not passive");
  const auto transfer = machine_transfer(p, build_cycle(params), params.machine_dim());
  return DiagonalState<Scalar>::normalized(stationary_distribution(transfer, opt));
}

/// Max-norm distance between q and its image under one cycle.
template <typename Scalar>
Scalar fixed_point_residual(const DiagonalState<Scalar>& p, const CycleParams& params,
                            const DiagonalState<Scalar>& q) {
  const auto transfer = machine_transfer(p, build_cycle(params), params.machine_dim());
  return (transfer * q.probs() - q.probs()).cwiseAbs().maxCoeff();
}

template <typename Scalar>
struct CycleSimulation {
  JointState<Scalar> initial;
  JointState<Scalar> final_joint;
  DiagonalState<Scalar> system;   // final system marginal
  DiagonalState<Scalar> machine;  // final machine marginal
  Scalar work;                    // mean-energy drop of the system
};

/// One cycle applied to p (x) q with an explicitly given machine state.
template <typename Scalar>
CycleSimulation<Scalar> simulate_cycle(const DiagonalState<Scalar>& p, const Hamiltonian<Scalar>& h,
                                       const CycleParams& params, const DiagonalState<Scalar>& q) {
  if (p.dim() != 3 || h.dim() != 3)
    throw Error(Errc::dimension_mismatch, "oracle", "system must be a qutrit");
  if (q.dim() != params.machine_dim())
    throw Error(Errc::dimension_mismatch, "oracle", "machine dimension must be m + n");
  auto initial = JointState<Scalar>::product(p, q);
  auto final_joint = apply_cycle(initial, build_cycle(params));
  auto system = final_joint.system_marginal();
  auto machine = final_joint.machine_marginal();
  const Scalar work = h.energies().dot(p.probs() - final_joint.probs().rowwise().sum());
  return {std::move(initial), std::move(final_joint), std::move(system), std::move(machine), work};
}

/// I(S:M) = S(system) + S(machine) - S(joint), in nats, clipped at zero.
template <typename Scalar>
Scalar mutual_information(const JointState<Scalar>& joint) {
  Scalar joint_entropy(0);
  for (Eigen::Index i = 0; i < joint.system_dim(); ++i)
    for (Eigen::Index j = 0; j < joint.machine_dim(); ++j) joint_entropy -= detail::xlogx(joint(i, j));
  const Scalar info = entropy(joint.system_marginal()) + entropy(joint.machine_marginal()) - joint_entropy;
  return std::max(info, Scalar(0));
}

}  // namespace passive
