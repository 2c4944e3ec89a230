// SPDX-License-Identifier: Apache-2.0
//
// Activation bookkeeping: cycle work against ergotropy and the optimal
// bound, and the free-energy ledger of a thermal-bath completion.
#pragma once

#include "passive/engine.hpp"
#include "passive/oracle.hpp"
#include "passive/quasistatic.hpp"
#include "passive/states.hpp"

#include <cmath>
#include <limits>
#include <optional>

namespace passive {

template <typename Scalar>
struct ActivationReport {
  Scalar work_cycle;
  Scalar ergotropy_value;
  bool activated;   // cycle work beats unitary work on the system alone
  bool energy_ok;   // final energy strictly below the passified energy
  bool entropy_ok;  // entropy did not decrease
};

template <typename Scalar>
ActivationReport<Scalar> assess_activation(const DiagonalState<Scalar>& p, const Hamiltonian<Scalar>& h, Scalar work,
                                           const DiagonalState<Scalar>& final_system) {
  const Scalar erg = ergotropy(p, h);
  const Scalar passive_energy = mean_energy(passify(p, h), h);
  return {work, erg, work > erg, mean_energy(final_system, h) < passive_energy,
          entropy(final_system) >= entropy(p) - Scalar(1e-12)};
}

template <typename Scalar>
ActivationReport<Scalar> assess_activation(const DiagonalState<Scalar>& p, const Hamiltonian<Scalar>& h,
                                           const CycleOutcome<Scalar>& outcome) {
  return assess_activation(p, h, outcome.work, outcome.final_system);
}

/// Cycle work never exceeds the entropy-preserving optimum.
template <typename Scalar>
bool optimal_bound_check(const DiagonalState<Scalar>& p, const Hamiltonian<Scalar>& h, Scalar work) {
  return work <= optimal_work(p, h) + Scalar(1e-12);
}

template <typename Scalar>
bool optimal_bound_check(const DiagonalState<Scalar>& p, const Hamiltonian<Scalar>& h,
                         const CycleOutcome<Scalar>& outcome) {
  return optimal_bound_check(p, h, outcome.work);
}

/// D(p||q) in nats; +infinity when p has support outside q.
template <typename Scalar>
Scalar relative_entropy(const DiagonalState<Scalar>& p, const DiagonalState<Scalar>& q) {
  if (p.dim() != q.dim()) throw Error(Errc::dimension_mismatch, "activation", "distributions differ in size");
  using std::log;
  Scalar acc(0);
  for (Eigen::Index i = 0; i < p.dim(); ++i) {
    if (p[i] == Scalar(0)) continue;
    if (q[i] == Scalar(0)) return std::numeric_limits<Scalar>::infinity();
    acc += p[i] * log(p[i] / q[i]);
  }
  return std::max(acc, Scalar(0));
}

/// Free energy <H> - S/beta; empty at beta = 0.
template <typename Scalar>
std::optional<Scalar> free_energy(const DiagonalState<Scalar>& s, const Hamiltonian<Scalar>& h, Scalar beta) {
  if (beta == Scalar(0)) return std::nullopt;
  return mean_energy(s, h) - entropy(s) / beta;
}

template <typename Scalar>
struct BathLedger {
  Scalar beta;
  std::optional<Scalar> free_energy_initial;
  std::optional<Scalar> free_energy_thermal;
  Scalar delta_w1;                  // energy drop of the system during the cycle
  std::optional<Scalar> delta_w2;   // work from relaxing the output against the bath
  std::optional<Scalar> q2;         // heat drawn from the bath
  Scalar relative_entropy;          // D(output || thermal)
  Scalar mutual_info;               // system-ancilla correlations after the cycle
};

/// Bookkeeping for a cycle followed by a bath at inverse temperature beta.
/// The ancilla must come back in `ancilla_initial`.
template <typename Scalar>
BathLedger<Scalar> bath_ledger(const DiagonalState<Scalar>& p, const Hamiltonian<Scalar>& h,
                               const JointState<Scalar>& final_joint, Scalar beta,
                               const DiagonalState<Scalar>& ancilla_initial) {
  if (final_joint.system_dim() != p.dim() || final_joint.machine_dim() != ancilla_initial.dim())
    throw Error(Errc::dimension_mismatch, "activation", "joint state does not match the inputs");
  if (!(beta >= Scalar(0)) || !std::isfinite(static_cast<double>(beta)))
    throw Error(Errc::out_of_range, "activation", "beta must be finite and non-negative");
  const auto ancilla = final_joint.machine_marginal();
  if ((ancilla.probs() - ancilla_initial.probs()).cwiseAbs().maxCoeff() > Scalar(1e-10))
    throw Error(Errc::reusability_violated, "activation", "ancilla did not return to its initial state");

  const auto output = final_joint.system_marginal();
  const auto tau = thermal_state(beta, h);
  BathLedger<Scalar> led;
  led.beta = beta;
  led.delta_w1 = mean_energy(p, h) - mean_energy(output, h);
  led.relative_entropy = relative_entropy(output, tau);
  led.mutual_info = mutual_information(final_joint);
  if (beta > Scalar(0)) {
    led.free_energy_initial = free_energy(p, h, beta);
    led.free_energy_thermal = free_energy(tau, h, beta);
    led.delta_w2 = (led.relative_entropy + led.mutual_info) / beta;
    led.q2 = (entropy(tau) - entropy(p)) / beta;
  }
  return led;
}

}  // namespace passive
