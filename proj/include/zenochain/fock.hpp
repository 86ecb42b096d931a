#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace zenochain {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

// Tolerances shared across the library.
inline constexpr double kNormTolerance = 1e-9;       // slack on probability bounds
inline constexpr double kHermitianTol = 1e-12;       // max |H - H^dag| entry
inline constexpr double kEntropyEigFloor = 1e-12;    // eigenvalues below this drop out of -p ln p

enum class BasisKind { Sector, Truncated };

/// Enumerated occupation-number basis of a small multimode bosonic space.
///
/// Two kinds: a fixed-total-excitation sector, or an independent per-mode
/// truncation. Tuples are stored in occupation-descending lexicographic
/// order, so the one-excitation tuples of a 3-mode sector enumerate as
/// (1,0,0), (0,1,0), (0,0,1).
class FockBasis {
public:
    static FockBasis sector(int mode_count, int total_excitations);
    static FockBasis truncated(std::vector<int> cutoffs);

    int mode_count() const { return mode_count_; }
    BasisKind kind() const { return kind_; }
    bool is_sector() const { return kind_ == BasisKind::Sector; }
    int total_excitations() const;
    const std::vector<int>& cutoffs() const;

    std::size_t size() const { return size_; }
    std::span<const int> occupations(std::size_t index) const;
    std::optional<std::size_t> find(std::span<const int> occ) const;
    std::size_t index_of(std::span<const int> occ) const;
    bool contains(std::span<const int> occ) const { return find(occ).has_value(); }

    bool operator==(const FockBasis& other) const;
    bool operator!=(const FockBasis& other) const { return !(*this == other); }

private:
    FockBasis() = default;

    int mode_count_ = 0;
    BasisKind kind_ = BasisKind::Sector;
    int total_ = 0;              // sector kind only
    std::vector<int> cutoffs_;   // truncated kind only
    std::size_t size_ = 0;
    std::vector<int> flat_;      // size_ * mode_count_ occupations, ordered
};

/// Complex amplitudes over a FockBasis. Possibly unnormalized: for
/// post-selected evolution the squared norm is the cumulative success
/// probability.
class StateVector {
public:
    explicit StateVector(FockBasis basis);
    StateVector(FockBasis basis, Vector amplitudes);

    const FockBasis& basis() const { return basis_; }
    const Vector& amplitudes() const { return amps_; }
    Vector& amplitudes() { return amps_; }

    Complex amplitude(std::span<const int> occ) const;
    void set_amplitude(std::span<const int> occ, Complex value);

    double norm_squared() const { return amps_.squaredNorm(); }
    double norm() const { return amps_.norm(); }
    StateVector normalized() const;

private:
    FockBasis basis_;
    Vector amps_;
};

/// Hermitian operator over a FockBasis, trace in [0, 1 + eps] for states.
class DensityOperator {
public:
    DensityOperator(FockBasis basis, Matrix matrix);
    static DensityOperator from_pure(const StateVector& state);

    const FockBasis& basis() const { return basis_; }
    const Matrix& matrix() const { return mat_; }
    double trace() const { return mat_.trace().real(); }
    double purity() const { return (mat_ * mat_).trace().real(); }

private:
    FockBasis basis_;
    Matrix mat_;
};

StateVector fock_state(const FockBasis& basis, std::span<const int> occupations);

/// Single-mode coherent state truncated at `cutoff`:
/// amplitude at n is e^{-|alpha|^2/2} alpha^n / sqrt(n!).
StateVector coherent_amplitudes(Complex alpha, int cutoff);

// Operator builders. Hopping conserves total excitation number, so it stays
// within a sector basis; on a truncated basis, elements that would leave the
// truncation range are dropped.
Matrix hopping_operator(const FockBasis& basis, int to_mode, int from_mode);  // a_to^dag a_from
Matrix number_operator(const FockBasis& basis, int mode);
/// Annihilation on `mode` as a rectangular map between two bases.
Matrix annihilation_operator(const FockBasis& from, const FockBasis& to, int mode);

bool is_hermitian(const Matrix& m, double tol = kHermitianTol);
/// exp(-i H t) for Hermitian H via eigendecomposition. No hermiticity check.
Matrix expi_hermitian(const Matrix& hamiltonian, double t);

/// Conditional expectation of n_mode^power in the normalized state.
double occupation_moment(const StateVector& state, int mode, int power = 1);
double mean_occupation(const StateVector& state, int mode);
double total_mean_occupation(const StateVector& state);

/// Reduced density matrix of the normalized state over `keep_modes`, indexed
/// by the distinct kept tuples (occupation-descending order). The kept tuple
/// list is written to `kept_tuples` when non-null.
Matrix reduced_density_matrix(const StateVector& state, std::span<const int> keep_modes,
                              std::vector<std::vector<int>>* kept_tuples = nullptr);

/// Von Neumann entropy (nats) of the reduced state of `first_group`; the
/// complement of the group forms the other half of the bipartition.
double entanglement_entropy(const StateVector& state, std::span<const int> first_group);

/// Tr(rho^2) of the reduced state of `keep_modes`.
double reduced_purity(const StateVector& state, std::span<const int> keep_modes);

}  // namespace zenochain
