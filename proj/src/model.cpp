#include "zenochain/model.hpp"

#include <cmath>
#include <stdexcept>

namespace zenochain {

DerivedModeParams derived_mode_params(const ChainParams& params) {
    double kappa = std::hypot(params.kappa1, params.kappa2);
    if (kappa <= 0.0)
        throw std::invalid_argument("derived_mode_params: both couplings are zero");
    return {std::atan2(params.kappa2, params.kappa1), kappa};
}

Matrix build_chain_hamiltonian(const ChainParams& params, const FockBasis& basis) {
    if (basis.mode_count() != 3)
        throw std::invalid_argument("build_chain_hamiltonian: basis must cover 3 modes");
    Matrix h01 = hopping_operator(basis, 0, 1);  // a1^dag b
    Matrix h21 = hopping_operator(basis, 2, 1);  // a2^dag b
    return params.kappa1 * (h01 + h01.adjoint()) + params.kappa2 * (h21 + h21.adjoint()) -
           params.delta * number_operator(basis, 1);
}

Matrix build_atomic_hamiltonian(const ChainParams& params) {
    Matrix h = Matrix::Zero(3, 3);
    h(0, 1) = h(1, 0) = params.kappa1;
    h(1, 2) = h(2, 1) = params.kappa2;
    h(1, 1) = -params.delta;
    return h;
}

Matrix mode_rotation_unitary(double theta, const FockBasis& basis, int mode_a, int mode_c) {
    // Generator a1^dag a2 - a2^dag a1 is anti-Hermitian; exp(theta G) is the
    // multimode representation of the rotation (exactly unitary on any basis
    // whose excitation sectors are complete).
    Matrix hop = hopping_operator(basis, mode_a, mode_c);
    Matrix generator_i = Complex(0.0, 1.0) * (hop - Matrix(hop.adjoint()));
    return expi_hermitian(generator_i, theta);
}

}  // namespace zenochain
