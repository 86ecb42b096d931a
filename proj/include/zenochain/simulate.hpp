#pragma once

#include <vector>

#include "zenochain/analytic.hpp"
#include "zenochain/fock.hpp"
#include "zenochain/model.hpp"

namespace zenochain {

/// exp(-i H dt) via Hermitian eigendecomposition. Rejects non-Hermitian
/// input and negative dt.
Matrix unitary_step(const Matrix& hamiltonian, double dt);

/// An operator on the (A1, A2) space obtained by compressing a 3-mode step.
struct ProjectedStep {
    FockBasis basis;  // 2-mode basis the operator acts on
    Matrix op;
};

/// <0|_B exp(-i H dt) |0>_B: one free-evolution interval compressed to the
/// B-vacuum in and out, as a matrix on the (A1, A2) basis. `basis` must be a
/// 3-mode basis in the canonical (A1, B, A2) order.
ProjectedStep vacuum_projected_step(const FockBasis& basis, const Matrix& hamiltonian,
                                    double dt);

/// The measurement-induced phase unitary e^{i phi_j a^dag a} on the bright
/// mode a = cos(theta) a1 + sin(theta) a2, as a matrix on a 2-mode basis.
Matrix dephasing_operator(const FockBasis& basis, double phi_j, double theta);

StateVector apply_dephasing(const StateVector& state, double phi_j, double theta);

/// K_m = <m|_B U |0>_B. On a sector basis the output lives in a lower
/// sector, so the operator is rectangular.
struct KrausOperator {
    int b_photons = 0;
    FockBasis out_basis;
    FockBasis in_basis;
    Matrix mat;
};

/// Kraus set of one non-referring measurement interval, m = 0..b_cutoff
/// (clipped to the available excitation content on a sector basis). K_0 is
/// the post-selection operator of vacuum_projected_step.
std::vector<KrausOperator> kraus_set(const FockBasis& basis, const Matrix& hamiltonian,
                                     double dt, int b_cutoff);

struct InitialState {
    enum class Kind { OnePhoton, Number, Coherent };
    Kind kind = Kind::OnePhoton;
    int photons = 1;          // Number
    Complex alpha{1.0, 0.0};  // Coherent
    int cutoff = 0;           // Coherent; 0 selects the default rule
};

/// Default per-mode truncation for coherent runs.
int default_coherent_cutoff(Complex alpha);

struct EvolutionConfig {
    ChainParams params;
    double total_time = 0.0;
    int steps = 1;
    PhaseSchedule phases = PhaseSchedule::deterministic({});
    InitialState initial;
    /// Optional non-uniform step durations; when nonempty its length must
    /// equal `steps` and it overrides total_time / steps.
    std::vector<double> step_durations;
};

struct StepRecord {
    int step = 0;
    double success_prob = 0.0;   // cumulative, squared norm of the unnormalized state
    double transfer_prob = 0.0;  // conditional transferred fraction
    double entropy = 0.0;        // A1|A2 entanglement entropy, nats
};

struct Trajectory {
    std::vector<StepRecord> records;
    /// Unnormalized one-photon amplitudes (zeta1, zeta2) per step; empty for
    /// multi-photon runs.
    std::vector<ZetaPair> one_photon_amplitudes;
    StateVector final_state;  // unnormalized
};

/// Alternates the B-vacuum compressed interval and the bright-mode phase
/// shift on the unnormalized (A1, A2) state. Success probability must be
/// nonincreasing; a violation beyond rounding throws.
Trajectory run_postselected(const EvolutionConfig& config);

/// Non-referring monitoring: rho_j = sum_m K_m rho_{j-1} K_m^dag followed by
/// the same bright-mode dephasing, on a truncated (A1, A2) basis. Returns
/// rho_0..rho_n; the trace is checked to stay within kNormTolerance of 1.
std::vector<DensityOperator> run_nonreferring(const EvolutionConfig& config, int b_cutoff);

/// Three-level route: 3x3 unitary interval, projection onto the complement
/// of |B>, bright-state phase shift. Returns the unnormalized (A1, A2)
/// amplitudes after each step.
std::vector<ZetaPair> run_atomic_postselected(const ChainParams& params, double t, int n,
                                              const PhaseSchedule& phases);

struct MonteCarloResult {
    double mean_p = 0.0;
    double std_error = 0.0;
    double mean_success = 0.0;
    double mean_entropy = 0.0;
};

/// Repeats run_postselected with fresh uniform phase draws per trial; trial
/// k uses the schedule seeded by mix_seed(seed, k), so results are
/// reproducible and independent of `jobs`.
MonteCarloResult monte_carlo_random_phases(const EvolutionConfig& config, int trials,
                                           int jobs = 1);

}  // namespace zenochain
