// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "passive/core.hpp"

#include <string>

namespace passive {

/// Swap counts of a cycle: m hot swaps on the (0,1) system gap and n cold
/// swaps on the (1,2) gap, acting on a machine with m + n levels.
struct CycleParams {
  int m = 1;
  int n = 1;

  CycleParams() = default;
  CycleParams(int hot, int cold) : m(hot), n(cold) {
    if (m < 1 || n < 1)
      throw Error(Errc::invalid_argument, "engine",
                  "swap counts must be positive, got m=" + std::to_string(m) + " n=" + std::to_string(n));
  }

  Eigen::Index machine_dim() const noexcept { return Eigen::Index(m) + Eigen::Index(n); }

  friend bool operator==(const CycleParams&, const CycleParams&) = default;
};

}  // namespace passive
