#pragma once

#include "zenochain/fock.hpp"

namespace zenochain {

/// Physical parameters of the A1-B-A2 chain. The canonical mode order
/// everywhere in this library is (A1, B, A2), with B the monitored middle
/// mode detuned by `delta`.
struct ChainParams {
    double kappa1 = 0.0;  // A1-B coupling
    double kappa2 = 0.0;  // A2-B coupling
    double delta = 0.0;   // detuning of mode B
};

/// Bright-mode decomposition: kappa = sqrt(kappa1^2 + kappa2^2) and theta
/// with cos(theta) = kappa1/kappa, sin(theta) = kappa2/kappa.
struct DerivedModeParams {
    double theta = 0.0;
    double kappa = 0.0;
};

DerivedModeParams derived_mode_params(const ChainParams& params);

/// Matrix of kappa1 (a1^dag b + a1 b^dag) + kappa2 (a2^dag b + a2 b^dag)
/// - delta b^dag b on a 3-mode basis ordered (A1, B, A2).
Matrix build_chain_hamiltonian(const ChainParams& params, const FockBasis& basis);

/// The 3x3 single-excitation matrix in the basis (|A1>, |B>, |A2>), which is
/// also the V-configuration atomic Hamiltonian with two driving couplings.
Matrix build_atomic_hamiltonian(const ChainParams& params);

/// Unitary change of basis from the (A1, A2) amplitudes to the bright/dark
/// amplitudes of a = cos(theta) a1 + sin(theta) a2, c = -sin(theta) a1 +
/// cos(theta) a2. On the one-excitation pair (|1,0>, |0,1>) this is the 2x2
/// rotation ((cos, sin), (-sin, cos)). `mode_a`/`mode_c` select which basis
/// modes are rotated, so the map extends by identity on any other mode.
Matrix mode_rotation_unitary(double theta, const FockBasis& basis, int mode_a = 0,
                             int mode_c = 1);

}  // namespace zenochain
