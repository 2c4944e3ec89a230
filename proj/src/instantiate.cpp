// SPDX-License-Identifier: Apache-2.0
// Explicit instantiations for the two scalar types the tools and tests use.
#include "passive/passive.hpp"

namespace passive {

template class Hamiltonian<double>;
template class DiagonalState<double>;
template class JointState<double>;
template CycleOutcome<double> run_cycle(const DiagonalState<double>&, const Hamiltonian<double>&,
                                        const CycleParams&);
template DiagonalState<double> stationary_machine(const DiagonalState<double>&, const CycleParams&,
                                                  const StationaryOptions&);

template class Hamiltonian<long double>;
template class DiagonalState<long double>;
template class JointState<long double>;
template CycleOutcome<long double> run_cycle(const DiagonalState<long double>&,
                                             const Hamiltonian<long double>&, const CycleParams&);
template DiagonalState<long double> stationary_machine(const DiagonalState<long double>&, const CycleParams&,
                                                       const StationaryOptions&);

}  // namespace passive
