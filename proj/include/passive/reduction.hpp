// SPDX-License-Identifier: Apache-2.0
//
// Running the qutrit cycle on a window of three adjacent levels of a qudit.
#pragma once

#include "passive/engine.hpp"

#include <optional>
#include <utility>

namespace passive {

template <typename Scalar>
struct SubspaceWindow {
  Eigen::Index k;                        // first level of the window
  Scalar weight;                         // probability mass inside the window
  DiagonalState<Scalar> reduced_state;   // window populations / weight
  Hamiltonian<Scalar> reduced_h;
};

template <typename Scalar>
SubspaceWindow<Scalar> decompose(const DiagonalState<Scalar>& p, const Hamiltonian<Scalar>& h, Eigen::Index k) {
  if (p.dim() != h.dim())
    throw Error(Errc::dimension_mismatch, "reduction", "state and Hamiltonian dimensions differ");
  if (k < 0 || k + 3 > p.dim()) throw Error(Errc::out_of_range, "reduction", "window start out of range");
  const Vector<Scalar> slice = p.probs().segment(k, 3);
  const Scalar weight = slice.sum();
  if (!(weight > Scalar(0))) throw Error(Errc::zero_probability, "reduction", "window carries no probability");
  return {k, weight, DiagonalState<Scalar>::normalized(slice),
          Hamiltonian<Scalar>(Vector<Scalar>(h.energies().segment(k, 3)))};
}

/// Cycle on window k, with work, heats and population shifts scaled by the
/// window mass and the final state embedded back into all d levels.
template <typename Scalar>
CycleOutcome<Scalar> lifted_cycle(const DiagonalState<Scalar>& p, const Hamiltonian<Scalar>& h, Eigen::Index k,
                                  const CycleParams& params) {
  const SubspaceWindow<Scalar> w = decompose(p, h, k);
  CycleOutcome<Scalar> local = run_cycle(w.reduced_state, w.reduced_h, params);
  const Scalar lambda = w.weight;
  Vector<Scalar> lifted = p.probs();
  lifted.segment(k, 3) = lambda * local.final_system.probs();
  DiagonalState<Scalar> final_system(lifted);
  const bool active = !is_passive(final_system, h);
  return {params,
          lambda * local.delta_p,
          lambda * local.work,
          lambda * local.q_hot,
          lambda * local.q_cold,
          lambda * local.heat_hot,
          lambda * local.heat_cold,
          local.efficiency,
          local.efficiency_meaningful,
          std::move(final_system),
          std::move(local.machine),
          lambda * local.alpha_coeff,
          local.closed_form,
          active};
}

/// Window with the largest lifted work; ties go to the smallest k. Windows
/// whose reduced state cannot run the cycle are skipped.
template <typename Scalar>
std::pair<Eigen::Index, CycleOutcome<Scalar>> best_window(const DiagonalState<Scalar>& p,
                                                          const Hamiltonian<Scalar>& h, const CycleParams& params) {
  if (p.dim() < 3) throw Error(Errc::dimension_mismatch, "reduction", "need at least three levels");
  std::optional<std::pair<Eigen::Index, CycleOutcome<Scalar>>> best;
  std::optional<Error> last_error;
  for (Eigen::Index k = 0; k + 3 <= p.dim(); ++k) {
    try {
      auto out = lifted_cycle(p, h, k, params);
      if (!best || out.work > best->second.work) best.emplace(k, std::move(out));
    } catch (const Error& e) {
      if (e.code() != Errc::zero_probability && e.code() != Errc::not_passive) throw;
      last_error = e;
    }
  }
  if (!best) throw *last_error;
  return std::move(*best);
}

}  // namespace passive
