// SPDX-License-Identifier: Apache-2.0
//
// Which cycles extract work from which passive qutrit states.
#pragma once

#include "passive/cycle.hpp"
#include "passive/states.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace passive {

/// Integers with M * gap10 ~= N * gap21.
struct RationalGapRatio {
  std::int64_t M = 1;
  std::int64_t N = 1;

  RationalGapRatio() = default;
  RationalGapRatio(std::int64_t hot, std::int64_t cold) : M(hot), N(cold) {
    if (M < 1 || N < 1) throw Error(Errc::invalid_argument, "regions", "gap ratio entries must be positive");
  }
  friend bool operator==(const RationalGapRatio&, const RationalGapRatio&) = default;
};

/// Smallest-N pair with |M gap10 - N gap21| <= tol * gap21, from the
/// continued-fraction convergents of gap21 / gap10.
template <typename Scalar>
RationalGapRatio approximate_gap_ratio(const Hamiltonian<Scalar>& h, Scalar tol) {
  if (h.dim() != 3) throw Error(Errc::dimension_mismatch, "regions", "gap ratio needs a qutrit ladder");
  const Scalar g10 = h.gap10(), g21 = h.gap21();
  if (!(g21 > Scalar(0))) throw Error(Errc::degenerate_gap, "regions", "upper gap is zero");
  if (!(g10 > Scalar(0))) throw Error(Errc::degenerate_gap, "regions", "lower gap is zero");
  using std::abs;
  using std::floor;
  const Scalar x = g21 / g10;
  // Convergents h_k / k_k of x.
  std::int64_t h_prev = 0, h_cur = 1, k_prev = 1, k_cur = 0;
  Scalar rest = x;
  for (int it = 0; it < 64; ++it) {
    const Scalar a_real = floor(rest);
    if (a_real > Scalar(1e15)) break;
    const auto a = static_cast<std::int64_t>(a_real);
    const std::int64_t h_next = a * h_cur + h_prev;
    const std::int64_t k_next = a * k_cur + k_prev;
    h_prev = h_cur, h_cur = h_next;
    k_prev = k_cur, k_cur = k_next;
    if (h_cur >= 1 && abs(Scalar(h_cur) * g10 - Scalar(k_cur) * g21) <= tol * g21) return {h_cur, k_cur};
    const Scalar frac = rest - a_real;
    if (frac == Scalar(0)) break;
    rest = Scalar(1) / frac;
  }
  throw Error(Errc::no_convergence, "regions", "no rational gap ratio within tolerance");
}

enum class RegionLabel {
  cold_steeper,  // N ln(p1/p2) > M ln(p0/p1): cold gap colder than the hot gap
  hot_steeper,   // the reverse inequality
  balanced,      // equal within tolerance (thermal for exactly rational gaps)
};

constexpr std::string_view to_string(RegionLabel r) noexcept {
  switch (r) {
    case RegionLabel::cold_steeper: return "cold_steeper";
    case RegionLabel::hot_steeper: return "hot_steeper";
    case RegionLabel::balanced: return "balanced";
  }
  return "unknown";
}

namespace detail {

template <typename Scalar>
void require_positive_qutrit(const DiagonalState<Scalar>& p) {
  if (p.dim() != 3) throw Error(Errc::dimension_mismatch, "regions", "system must be a qutrit");
  if (!p.strictly_positive()) throw Error(Errc::zero_probability, "regions", "zero probability in ratio");
}

// N ln(p1/p2) - M ln(p0/p1) together with the scale it is compared against.
template <typename Scalar>
std::pair<Scalar, Scalar> region_gap(const DiagonalState<Scalar>& p, std::int64_t M, std::int64_t N) {
  using std::abs;
  using std::log;
  const Scalar cold = Scalar(N) * log(p[1] / p[2]);
  const Scalar hot = Scalar(M) * log(p[0] / p[1]);
  return {cold - hot, std::max(abs(cold), abs(hot))};
}

}  // namespace detail

template <typename Scalar>
RegionLabel classify(const DiagonalState<Scalar>& p, const RationalGapRatio& ratio, Scalar tol = Scalar(1e-9)) {
  detail::require_positive_qutrit(p);
  const auto [gap, scale] = detail::region_gap(p, ratio.M, ratio.N);
  using std::abs;
  const Scalar floor_slack = Scalar(8) * detail::epsilon<Scalar>() * Scalar(std::max(ratio.M, ratio.N));
  if (abs(gap) <= tol * scale + floor_slack) return RegionLabel::balanced;
  return gap > Scalar(0) ? RegionLabel::cold_steeper : RegionLabel::hot_steeper;
}

/// Sign rule for positive work: population imbalance and energy imbalance of
/// the cycle point the same way. `energy_sign` is sign(m gap10 - n gap21).
template <typename Scalar>
bool activation_sign_rule(const DiagonalState<Scalar>& p, const CycleParams& params, int energy_sign) {
  detail::require_positive_qutrit(p);
  if (energy_sign == 0) return false;
  using std::log;
  const Scalar cold = Scalar(params.n) * log(p[1] / p[2]);
  const Scalar hot = Scalar(params.m) * log(p[0] / p[1]);
  return energy_sign > 0 ? cold > hot : cold < hot;
}

template <typename Scalar>
bool in_activation_region(const DiagonalState<Scalar>& p, const Hamiltonian<Scalar>& h, const CycleParams& params) {
  if (h.dim() != 3) throw Error(Errc::dimension_mismatch, "regions", "Hamiltonian must be a qutrit ladder");
  const Scalar e = Scalar(params.m) * h.gap10() - Scalar(params.n) * h.gap21();
  return activation_sign_rule(p, params, (e > Scalar(0)) - (e < Scalar(0)));
}

/// Membership with the energy imbalance taken from an exact gap ratio.
template <typename Scalar>
bool in_activation_region(const DiagonalState<Scalar>& p, const RationalGapRatio& ratio, const CycleParams& params) {
  const std::int64_t e = std::int64_t(params.m) * ratio.N - std::int64_t(params.n) * ratio.M;
  return activation_sign_rule(p, params, (e > 0) - (e < 0));
}

/// First cycle of the covering family that activates p: m = (M/N) n + 1 for
/// cold_steeper states, n = (N/M) m + 1 for hot_steeper ones. The free swap
/// count runs up to `max_count`.
template <typename Scalar>
std::optional<CycleParams> covering_cycle(const DiagonalState<Scalar>& p, const RationalGapRatio& ratio,
                                          int max_count) {
  const RegionLabel label = classify(p, ratio);
  if (label == RegionLabel::balanced)
    throw Error(Errc::never_activable, "regions", "state lies on the balanced set and is never activable");
  for (int k = 1; k <= max_count; ++k) {
    std::optional<CycleParams> cand;
    if (label == RegionLabel::cold_steeper && (ratio.M * k) % ratio.N == 0)
      cand = CycleParams(int(ratio.M * k / ratio.N + 1), k);
    else if (label == RegionLabel::hot_steeper && (ratio.N * k) % ratio.M == 0)
      cand = CycleParams(k, int(ratio.N * k / ratio.M + 1));
    if (cand && in_activation_region(p, ratio, *cand)) return cand;
  }
  return std::nullopt;
}

/// Certificate that p^{(x)(m+n)} is active: |1>^{(m+n)} against |0>^m |2>^n
/// ordered one way in energy and the other way in probability.
template <typename Scalar>
bool k_activability_witness(const DiagonalState<Scalar>& p, const Hamiltonian<Scalar>& h, const CycleParams& params) {
  if (p.dim() != 3 || h.dim() != 3) throw Error(Errc::dimension_mismatch, "regions", "qutrit system expected");
  using std::log;
  const Scalar m = Scalar(params.m), n = Scalar(params.n);
  const Scalar e_mid = (m + n) * h[1];
  const Scalar e_ends = m * h[0] + n * h[2];
  const Scalar l_mid = (m + n) * log(p[1]);
  const Scalar l_ends = m * log(p[0]) + n * log(p[2]);
  return (e_mid > e_ends && l_mid > l_ends) || (e_mid < e_ends && l_mid < l_ends);
}

/// Barycentric grid over the passive simplex with vertices (1,0,0),
/// (1/2,1/2,0), (1/3,1/3,1/3); points with p2 = 0 are left out.
template <typename Scalar>
std::vector<DiagonalState<Scalar>> passive_simplex_grid(int resolution) {
  if (resolution < 1) throw Error(Errc::invalid_argument, "regions", "grid resolution must be positive");
  std::vector<DiagonalState<Scalar>> grid;
  const Scalar g = Scalar(resolution);
  for (int c = 1; c <= resolution; ++c) {
    for (int b = 0; b + c <= resolution; ++b) {
      const int a = resolution - b - c;
      const Scalar wa = Scalar(a) / g, wb = Scalar(b) / g, wc = Scalar(c) / g;
      Vector<Scalar> p(3);
      p << wa + wb / Scalar(2) + wc / Scalar(3), wb / Scalar(2) + wc / Scalar(3), wc / Scalar(3);
      grid.push_back(DiagonalState<Scalar>::normalized(p));
    }
  }
  return grid;
}

/// Share of grid points with log-gap above `band` (cold_steeper, away from the
/// balanced set) that the cycle activates.
template <typename Scalar = double>
Scalar coverage_fraction(const RationalGapRatio& ratio, const CycleParams& params, int resolution,
                         Scalar band = Scalar(1e-3)) {
  if (resolution < 10) throw Error(Errc::invalid_argument, "regions", "grid resolution must be at least 10");
  std::size_t total = 0, covered = 0;
  for (const auto& p : passive_simplex_grid<Scalar>(resolution)) {
    if (!(detail::region_gap(p, ratio.M, ratio.N).first > band)) continue;
    ++total;
    if (in_activation_region(p, ratio, params)) ++covered;
  }
  return total == 0 ? Scalar(0) : Scalar(covered) / Scalar(total);
}

}  // namespace passive
