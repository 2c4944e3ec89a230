// Shared generators and oracles for the test suites.
#pragma once

#include "passive/passive.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace testing {

using passive::DiagonalStated;
using passive::Hamiltoniand;
using passive::Vector;

/// SplitMix64; reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) { return lo + int(next_u64() % std::uint64_t(hi - lo + 1)); }

 private:
  std::uint64_t state_;
};

/// Uniform point of the probability simplex.
inline Vector<double> random_weights(Rng& rng, int d) {
  Vector<double> w(d);
  for (int i = 0; i < d; ++i) w[i] = -std::log(1.0 - rng.uniform());
  return w / w.sum();
}

/// Strictly positive passive distribution with margin between levels.
inline DiagonalStated random_passive(Rng& rng, int d = 3, double floor = 1e-3) {
  for (;;) {
    Vector<double> w = random_weights(rng, d);
    std::sort(w.data(), w.data() + d, std::greater<double>());
    bool ok = w[d - 1] > floor;
    for (int i = 0; i + 1 < d; ++i) ok = ok && w[i] - w[i + 1] > 1e-6;
    if (ok) return DiagonalStated::normalized(w);
  }
}

inline DiagonalStated random_state(Rng& rng, int d) { return DiagonalStated::normalized(random_weights(rng, d)); }

/// Strictly increasing ladder starting at zero.
inline Hamiltoniand random_ladder(Rng& rng, int d, double max_gap = 3.0) {
  Vector<double> e(d);
  e[0] = 0;
  for (int i = 1; i < d; ++i) e[i] = e[i - 1] + rng.uniform(0.05, max_gap);
  return Hamiltoniand(e);
}

/// Plain-loop thermal weights, written independently of the library.
inline Vector<double> gibbs(double beta, const std::vector<double>& energies) {
  Vector<double> w(Eigen::Index(energies.size()));
  double z = 0;
  for (std::size_t i = 0; i < energies.size(); ++i) z += w[Eigen::Index(i)] = std::exp(-beta * energies[i]);
  return w / z;
}

/// Maximum entry-wise distance.
inline double max_diff(const Vector<double>& a, const Vector<double>& b) { return (a - b).cwiseAbs().maxCoeff(); }

/// Maximum mean energy reachable by permuting p over the ladder h: its
/// negative is the energy of the passified state.
inline double sorted_energy(std::vector<double> p, const std::vector<double>& e) {
  std::sort(p.begin(), p.end(), std::greater<double>());
  double s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * e[i];
  return s;
}

/// Ergotropy of the k-fold tensor power of a qutrit state, by enumeration.
inline double tensor_power_ergotropy(const DiagonalStated& p, const Hamiltoniand& h, int k) {
  std::size_t count = 1;
  for (int i = 0; i < k; ++i) count *= 3;
  std::vector<double> probs(count), energies(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::size_t rest = idx;
    double pr = 1, en = 0;
    for (int i = 0; i < k; ++i) {
      const auto level = Eigen::Index(rest % 3);
      rest /= 3;
      pr *= p[level];
      en += h[level];
    }
    probs[idx] = pr;
    energies[idx] = en;
  }
  double mean = 0;
  for (std::size_t i = 0; i < count; ++i) mean += probs[i] * energies[i];
  std::vector<std::size_t> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return energies[a] < energies[b]; });
  std::vector<double> sorted = probs;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double passive = 0;
  for (std::size_t i = 0; i < count; ++i) passive += sorted[i] * energies[order[i]];
  return mean - passive;
}

}  // namespace testing
