// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace passive {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

enum class Errc {
  dimension_mismatch,
  invalid_state,
  invalid_hamiltonian,
  invalid_argument,
  not_passive,
  zero_probability,
  degenerate_gap,
  out_of_range,
  not_in_region,
  never_activable,
  below_closed_form,
  singular_system,
  no_convergence,
  reusability_violated,
  step_rejected,
};

std::string_view to_string(Errc code) noexcept;

/// Domain error raised by every module. `what()` reads "<module>: <message>".
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string_view module, const std::string& message)
      : std::runtime_error(std::string(module) + ": " + message),
        code_(code),
        module_(module) {}

  Errc code() const noexcept { return code_; }
  const std::string& module() const noexcept { return module_; }

 private:
  Errc code_;
  std::string module_;
};

/// Inverse temperature. The zero-temperature limit is carried by a flag and
/// never enters arithmetic as a floating infinity.
template <typename Scalar>
class InverseTemperature {
 public:
  static InverseTemperature finite(Scalar beta) {
    if (!std::isfinite(static_cast<double>(beta)) || beta < Scalar(0))
      throw Error(Errc::out_of_range, "states",
                  "inverse temperature must be finite and non-negative");
    return InverseTemperature(beta, false);
  }
  static InverseTemperature infinite() {
    return InverseTemperature(std::numeric_limits<Scalar>::max(), true);
  }

  bool is_infinite() const noexcept { return infinite_; }

  /// Finite value; throws for the zero-temperature sentinel.
  Scalar value() const {
    if (infinite_)
      throw Error(Errc::out_of_range, "states",
                  "inverse temperature is infinite (ground-state limit)");
    return value_;
  }

  /// Raw storage, the sentinel `numeric_limits::max()` when infinite.
  Scalar sentinel_value() const noexcept { return value_; }

 private:
  InverseTemperature(Scalar v, bool inf) : value_(v), infinite_(inf) {}
  Scalar value_;
  bool infinite_;
};

namespace detail {

// x ln x with the 0 ln 0 = 0 convention.
template <typename Scalar>
Scalar xlogx(Scalar x) {
  using std::log;
  return x > Scalar(0) ? x * log(x) : Scalar(0);
}

// ln(exp(a) + exp(b)) for a, b possibly -inf.
template <typename Scalar>
Scalar log_add(Scalar a, Scalar b) {
  using std::exp;
  using std::log1p;
  const Scalar neg_inf = -std::numeric_limits<Scalar>::infinity();
  if (a == neg_inf) return b;
  if (b == neg_inf) return a;
  if (a < b) std::swap(a, b);
  return a + log1p(exp(b - a));
}

template <typename Scalar>
constexpr Scalar epsilon() {
  return std::numeric_limits<Scalar>::epsilon();
}

}  // namespace detail
}  // namespace passive
