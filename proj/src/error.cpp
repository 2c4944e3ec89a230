// SPDX-License-Identifier: Apache-2.0
#include "passive/core.hpp"

namespace passive {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::invalid_state: return "invalid_state";
    case Errc::invalid_hamiltonian: return "invalid_hamiltonian";
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::not_passive: return "not_passive";
    case Errc::zero_probability: return "zero_probability";
    case Errc::degenerate_gap: return "degenerate_gap";
    case Errc::out_of_range: return "out_of_range";
    case Errc::not_in_region: return "not_in_region";
    case Errc::never_activable: return "never_activable";
    case Errc::below_closed_form: return "below_closed_form";
    case Errc::singular_system: return "singular_system";
    case Errc::no_convergence: return "no_convergence";
    case Errc::reusability_violated: return "reusability_violated";
    case Errc::step_rejected: return "step_rejected";
  }
  return "unknown";
}

}  // namespace passive
