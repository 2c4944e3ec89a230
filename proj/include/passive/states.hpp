// SPDX-License-Identifier: Apache-2.0
//
// Diagonal states and Hamiltonians: passivity, ergotropy, virtual
// temperatures, thermal states and their energy/entropy inverses.
#pragma once

#include "passive/core.hpp"

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

namespace passive {

/// Non-decreasing energy ladder E_0 <= E_1 <= ... <= E_{d-1}.
template <typename Scalar>
class Hamiltonian {
 public:
  explicit Hamiltonian(Vector<Scalar> energies) : energies_(std::move(energies)) {
    if (energies_.size() < 2)
      throw Error(Errc::invalid_hamiltonian, "states", "need at least two levels");
    for (Eigen::Index i = 0; i < energies_.size(); ++i) {
      if (!std::isfinite(static_cast<double>(energies_[i])))
        throw Error(Errc::invalid_hamiltonian, "states", "energies must be finite");
      if (i > 0 && energies_[i] < energies_[i - 1])
        throw Error(Errc::invalid_hamiltonian, "states", "energies must be non-decreasing");
    }
  }
  Hamiltonian(std::initializer_list<Scalar> energies)
      : Hamiltonian(Vector<Scalar>::Map(energies.begin(), Eigen::Index(energies.size()))) {}

  Eigen::Index dim() const noexcept { return energies_.size(); }
  const Vector<Scalar>& energies() const noexcept { return energies_; }
  Scalar operator[](Eigen::Index i) const { return energies_[i]; }
  Scalar ground() const noexcept { return energies_[0]; }
  Scalar spread() const noexcept { return energies_[dim() - 1] - energies_[0]; }

  Scalar gap10() const { return energies_[1] - energies_[0]; }
  Scalar gap21() const {
    if (dim() < 3) throw Error(Errc::dimension_mismatch, "states", "gap21 needs three levels");
    return energies_[2] - energies_[1];
  }

  template <typename Other>
  Hamiltonian<Other> cast() const {
    return Hamiltonian<Other>(energies_.template cast<Other>());
  }

 private:
  Vector<Scalar> energies_;
};

/// Probability distribution over energy eigenstates. Entries are
/// non-negative and sum to one within 1e-12; negative round-off down to
/// -1e-14 is flushed to zero.
template <typename Scalar>
class DiagonalState {
 public:
  static constexpr double kNormTolerance = 1e-12;

  explicit DiagonalState(Vector<Scalar> probs) : probs_(std::move(probs)) {
    if (probs_.size() < 1) throw Error(Errc::invalid_state, "states", "empty distribution");
    Scalar total(0);
    for (Eigen::Index i = 0; i < probs_.size(); ++i) {
      Scalar& x = probs_[i];
      if (!std::isfinite(static_cast<double>(x)))
        throw Error(Errc::invalid_state, "states", "probabilities must be finite");
      if (x < Scalar(0)) {
        if (x < Scalar(-1e-14))
          throw Error(Errc::invalid_state, "states", "negative probability");
        x = Scalar(0);
      }
      total += x;
    }
    using std::abs;
    if (abs(total - Scalar(1)) > Scalar(kNormTolerance))
      throw Error(Errc::invalid_state, "states", "probabilities must sum to one");
  }
  DiagonalState(std::initializer_list<Scalar> probs)
      : DiagonalState(Vector<Scalar>::Map(probs.begin(), Eigen::Index(probs.size()))) {}

  /// Rescales a non-negative weight vector to unit mass.
  static DiagonalState normalized(const Vector<Scalar>& weights) {
    const Scalar total = weights.sum();
    if (!(total > Scalar(0)))
      throw Error(Errc::invalid_state, "states", "weights must have positive mass");
    return DiagonalState(weights / total);
  }

  static DiagonalState uniform(Eigen::Index d) {
    return DiagonalState(Vector<Scalar>::Constant(d, Scalar(1) / Scalar(d)));
  }

  Eigen::Index dim() const noexcept { return probs_.size(); }
  const Vector<Scalar>& probs() const noexcept { return probs_; }
  Scalar operator[](Eigen::Index i) const { return probs_[i]; }

  bool strictly_positive() const { return (probs_.array() > Scalar(0)).all(); }

  template <typename Other>
  DiagonalState<Other> cast() const {
    return DiagonalState<Other>::normalized(probs_.template cast<Other>());
  }

 private:
  Vector<Scalar> probs_;
};

using Hamiltoniand = Hamiltonian<double>;
using DiagonalStated = DiagonalState<double>;
using InverseTemperatured = InverseTemperature<double>;

/// Point of the energy-entropy diagram.
template <typename Scalar>
struct DiagramPoint {
  Scalar energy;
  Scalar entropy;  // nats
};

template <typename Scalar>
struct VirtualTemperature {
  enum class Kind { finite, infinite, degenerate, undefined };
  Kind kind = Kind::undefined;
  Scalar value = Scalar(0);
};

/// Pairwise virtual inverse temperatures, keyed by (upper, lower) level.
template <typename Scalar>
class VirtualTemperatureTable {
 public:
  using Entry = VirtualTemperature<Scalar>;
  using Key = std::pair<Eigen::Index, Eigen::Index>;

  void set(Eigen::Index upper, Eigen::Index lower, Entry e) { entries_[{upper, lower}] = e; }

  const Entry& entry(Eigen::Index i, Eigen::Index j) const {
    const auto it = entries_.find(order(i, j));
    if (it == entries_.end())
      throw Error(Errc::out_of_range, "states", "no such level pair");
    return it->second;
  }

  InverseTemperature<Scalar> inverse_temperature(Eigen::Index i, Eigen::Index j) const {
    const Entry& e = entry(i, j);
    switch (e.kind) {
      case Entry::Kind::finite: return InverseTemperature<Scalar>::finite(std::max(e.value, Scalar(0)));
      case Entry::Kind::infinite: return InverseTemperature<Scalar>::infinite();
      case Entry::Kind::degenerate:
        throw Error(Errc::degenerate_gap, "states", "virtual temperature undefined on a degenerate gap");
      case Entry::Kind::undefined: break;
    }
    throw Error(Errc::zero_probability, "states", "virtual temperature undefined: zero probability");
  }

  /// Finite β_ij; throws for degenerate gaps and zero probabilities.
  Scalar beta(Eigen::Index i, Eigen::Index j) const {
    const Entry& e = entry(i, j);
    if (e.kind == Entry::Kind::finite) return e.value;
    if (e.kind == Entry::Kind::degenerate)
      throw Error(Errc::degenerate_gap, "states", "virtual temperature undefined on a degenerate gap");
    throw Error(Errc::zero_probability, "states", "zero probability in queried ratio");
  }

  Scalar beta_hot() const { return beta(1, 0); }
  Scalar beta_cold() const { return beta(2, 1); }

  const std::map<Key, Entry>& entries() const noexcept { return entries_; }

 private:
  static Key order(Eigen::Index i, Eigen::Index j) { return i > j ? Key{i, j} : Key{j, i}; }
  std::map<Key, Entry> entries_;
};

namespace detail {

template <typename Scalar>
void require_same_dim(const DiagonalState<Scalar>& s, const Hamiltonian<Scalar>& h) {
  if (s.dim() != h.dim())
    throw Error(Errc::dimension_mismatch, "states", "state and Hamiltonian dimensions differ");
}

// Absolute slack used when comparing energies of a ladder.
template <typename Scalar>
Scalar energy_slack(const Hamiltonian<Scalar>& h) {
  using std::abs;
  return Scalar(16) * epsilon<Scalar>() * (abs(h.ground()) + h.spread() + Scalar(1));
}

template <typename Scalar>
Eigen::Index ground_degeneracy(const Hamiltonian<Scalar>& h) {
  Eigen::Index g = 0;
  while (g < h.dim() && h[g] == h.ground()) ++g;
  return g;
}

}  // namespace detail

template <typename Scalar>
Scalar mean_energy(const DiagonalState<Scalar>& s, const Hamiltonian<Scalar>& h) {
  detail::require_same_dim(s, h);
  return s.probs().dot(h.energies());
}

/// Shannon (von Neumann, diagonal) entropy in nats.
template <typename Scalar>
Scalar entropy(const DiagonalState<Scalar>& s) {
  Scalar acc(0);
  for (Eigen::Index i = 0; i < s.dim(); ++i) acc -= detail::xlogx(s[i]);
  return acc;
}

template <typename Scalar>
bool is_passive(const DiagonalState<Scalar>& s, const Hamiltonian<Scalar>& h) {
  detail::require_same_dim(s, h);
  using std::abs;
  const Scalar degenerate_slack = Scalar(8) * detail::epsilon<Scalar>();
  for (Eigen::Index i = 0; i + 1 < s.dim(); ++i) {
    if (h[i] == h[i + 1]) {
      if (abs(s[i] - s[i + 1]) > degenerate_slack) return false;
    } else if (s[i] < s[i + 1]) {
      return false;
    }
  }
  return true;
}

/// Probabilities re-assigned in non-increasing order along the energy ladder.
template <typename Scalar>
DiagonalState<Scalar> passify(const DiagonalState<Scalar>& s, const Hamiltonian<Scalar>& h) {
  detail::require_same_dim(s, h);
  if (is_passive(s, h)) return s;
  std::vector<Scalar> sorted(s.probs().data(), s.probs().data() + s.dim());
  std::sort(sorted.begin(), sorted.end(), std::greater<Scalar>());
  return DiagonalState<Scalar>(Vector<Scalar>::Map(sorted.data(), s.dim()));
}

template <typename Scalar>
Scalar ergotropy(const DiagonalState<Scalar>& s, const Hamiltonian<Scalar>& h) {
  const DiagonalState<Scalar> pass = passify(s, h);
  Scalar acc(0);
  for (Eigen::Index i = 0; i < s.dim(); ++i) acc += h[i] * (s[i] - pass[i]);
  return std::max(acc, Scalar(0));
}

template <typename Scalar>
VirtualTemperatureTable<Scalar> virtual_temperatures(const DiagonalState<Scalar>& s,
                                                     const Hamiltonian<Scalar>& h) {
  detail::require_same_dim(s, h);
  using std::log;
  using Entry = VirtualTemperature<Scalar>;
  VirtualTemperatureTable<Scalar> table;
  for (Eigen::Index i = 1; i < s.dim(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      Entry e;
      if (h[i] == h[j]) {
        e.kind = Entry::Kind::degenerate;
      } else if (s[i] > Scalar(0) && s[j] > Scalar(0)) {
        e.kind = Entry::Kind::finite;
        e.value = log(s[j] / s[i]) / (h[i] - h[j]);
      } else if (s[i] == Scalar(0) && s[j] > Scalar(0)) {
        e.kind = Entry::Kind::infinite;
      } else {
        e.kind = Entry::Kind::undefined;
      }
      table.set(i, j, e);
    }
  }
  return table;
}

template <typename Scalar>
DiagonalState<Scalar> thermal_state(const InverseTemperature<Scalar>& beta,
                                    const Hamiltonian<Scalar>& h) {
  Vector<Scalar> w(h.dim());
  if (beta.is_infinite()) {
    for (Eigen::Index i = 0; i < h.dim(); ++i) w[i] = h[i] == h.ground() ? Scalar(1) : Scalar(0);
  } else {
    using std::exp;
    const Scalar b = beta.value();
    for (Eigen::Index i = 0; i < h.dim(); ++i) w[i] = exp(-b * (h[i] - h.ground()));
  }
  return DiagonalState<Scalar>::normalized(w);
}

template <typename Scalar>
DiagonalState<Scalar> thermal_state(Scalar beta, const Hamiltonian<Scalar>& h) {
  return thermal_state(InverseTemperature<Scalar>::finite(beta), h);
}

template <typename Scalar>
DiagramPoint<Scalar> diagram_point(const DiagonalState<Scalar>& s, const Hamiltonian<Scalar>& h) {
  return {mean_energy(s, h), entropy(s)};
}

namespace detail {

// Largest β probed by the root finders: exp(-700) is the underflow edge.
template <typename Scalar>
Scalar beta_ceiling(const Hamiltonian<Scalar>& h) {
  return Scalar(700) / h.spread();
}

// Bisection for a quantity that decreases monotonically in β.
template <typename Scalar, typename F>
Scalar bisect_decreasing(F&& value_at, Scalar target, Scalar lo, Scalar hi) {
  for (int it = 0; it < 200; ++it) {
    const Scalar mid = (lo + hi) / Scalar(2);
    if (mid <= lo || mid >= hi) break;
    if (value_at(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return (lo + hi) / Scalar(2);
}

}  // namespace detail

/// β of the thermal state with the given mean energy (β_min of a trajectory).
template <typename Scalar>
InverseTemperature<Scalar> beta_from_energy(Scalar target_energy, const Hamiltonian<Scalar>& h) {
  const Scalar slack = detail::energy_slack(h);
  const Scalar e_uniform = h.energies().mean();
  if (target_energy < h.ground() - slack)
    throw Error(Errc::out_of_range, "states", "target energy below the ground energy");
  if (target_energy > e_uniform + slack)
    throw Error(Errc::out_of_range, "states",
                "target energy above the maximally mixed energy (negative temperature)");
  if (target_energy >= e_uniform - slack) return InverseTemperature<Scalar>::finite(Scalar(0));
  if (target_energy <= h.ground() + slack) return InverseTemperature<Scalar>::infinite();
  const auto energy_at = [&](Scalar b) { return mean_energy(thermal_state(b, h), h); };
  return InverseTemperature<Scalar>::finite(
      detail::bisect_decreasing(energy_at, target_energy, Scalar(0), detail::beta_ceiling(h)));
}

/// β of the thermal state with the given entropy (β_max of a trajectory).
template <typename Scalar>
InverseTemperature<Scalar> beta_from_entropy(Scalar target_entropy, const Hamiltonian<Scalar>& h) {
  using std::log;
  const Scalar slack = Scalar(64) * detail::epsilon<Scalar>();
  const Scalar s_max = log(Scalar(h.dim()));
  const Scalar s_min = log(Scalar(detail::ground_degeneracy(h)));
  if (target_entropy > s_max + slack || target_entropy < s_min - slack)
    throw Error(Errc::out_of_range, "states", "target entropy outside the thermal range");
  if (target_entropy >= s_max - slack) return InverseTemperature<Scalar>::finite(Scalar(0));
  if (target_entropy <= s_min + slack) return InverseTemperature<Scalar>::infinite();
  const auto entropy_at = [&](Scalar b) { return entropy(thermal_state(b, h)); };
  return InverseTemperature<Scalar>::finite(
      detail::bisect_decreasing(entropy_at, target_entropy, Scalar(0), detail::beta_ceiling(h)));
}

/// True when every non-degenerate pairwise virtual temperature agrees,
/// i.e. the state is thermal (ground state included).
template <typename Scalar>
bool is_completely_passive(const DiagonalState<Scalar>& s, const Hamiltonian<Scalar>& h, Scalar tol) {
  using Kind = typename VirtualTemperature<Scalar>::Kind;
  using std::abs;
  const auto table = virtual_temperatures(s, h);
  bool seen_finite = false, seen_infinite = false;
  Scalar lo(0), hi(0);
  for (const auto& [key, e] : table.entries()) {
    if (e.kind == Kind::finite) {
      if (!seen_finite) lo = hi = e.value;
      lo = std::min(lo, e.value);
      hi = std::max(hi, e.value);
      seen_finite = true;
    } else if (e.kind == Kind::infinite) {
      seen_infinite = true;
    }
  }
  if (seen_finite && seen_infinite) return false;
  if (!seen_finite) return true;
  return hi - lo <= tol * std::max({Scalar(1), abs(lo), abs(hi)});
}

}  // namespace passive
