#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "zenochain/fock.hpp"

namespace zenochain {

/// Deterministic mix of a base seed and a stream index (splitmix64 finisher).
/// Used to derive independent per-trial generators.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// One observation interval: gamma = sqrt(kappa^2 + delta^2/4) is the Rabi
/// frequency of the bright-mode/B pair, mu and nu the survival and leakage
/// amplitudes, and chi the bright-mode factor picked up by a successful
/// vacuum check (including the measurement phase phi_j).
struct StepFactor {
    double gamma = 0.0;
    Complex mu{1.0, 0.0};
    Complex nu{0.0, 0.0};
    Complex chi{1.0, 0.0};
};

/// mu = cos(gamma dt) - i (delta/2gamma) sin(gamma dt),
/// nu = -i (kappa/gamma) sin(gamma dt),
/// chi = e^{i phi_j} e^{i delta dt / 2} mu.
/// The gamma = 0 point is resolved by continuity (mu = 1, nu = 0).
StepFactor step_factor(double kappa, double delta, double dt, double phi_j = 0.0);

/// Sequence of measurement-induced phase shifts, either given explicitly or
/// drawn uniformly from [0, 2pi). Random schedules are materialized from a
/// seeded mt19937_64 with a fixed 53-bit mapping, so the same seed yields the
/// identical sequence on every platform.
class PhaseSchedule {
public:
    static PhaseSchedule deterministic(std::vector<double> phis);
    static PhaseSchedule uniform_random(std::uint64_t seed);

    bool is_random() const { return random_; }
    std::uint64_t seed() const;
    /// The n per-step phases; a deterministic schedule must have length n.
    std::vector<double> materialize(int n) const;

private:
    PhaseSchedule() = default;
    bool random_ = false;
    std::uint64_t seed_ = 0;
    std::vector<double> phis_;
};

/// phi_total split evenly over n steps.
std::vector<double> evenly_spread(double phi_total, int n);

/// Accumulated bright-mode factor chi = prod_j chi_j for n uniform steps of
/// duration t/n.
Complex chi_total(double kappa, double delta, double t, int n, const PhaseSchedule& phases);
/// Same with explicit per-step durations (lengths must match).
Complex chi_total(double kappa, double delta, std::span<const double> step_durations,
                  std::span<const double> phis);

/// Post-selected one-photon amplitudes: zeta1 on |1,0> (photon still in A1),
/// zeta2 on |0,1> (photon transferred to A2).
struct ZetaPair {
    Complex zeta1{1.0, 0.0};
    Complex zeta2{0.0, 0.0};
};

/// zeta1 = chi cos^2(theta) + sin^2(theta), zeta2 = (chi - 1) cos sin.
ZetaPair zeta_pair(Complex chi, double theta);

struct TransferProbabilities {
    double success = 0.0;      // P: all n checks found B in vacuum
    double conditional = 0.0;  // p: photon found in A2, given success
};

TransferProbabilities probabilities(const ZetaPair& z);

/// The frequent-monitoring limit of the conditional transfer probability,
/// 2 cos^2(theta) sin^2(theta) (1 - cos(phi_eff)). Without a detuning the
/// effective phase is phi itself; with detuning it is kappa^2 t / delta - phi.
/// Validity of the detuned form needs |delta| well above kappa (error of
/// order (kappa/delta)^2 per step) and step intervals coarse on the 1/delta
/// timescale; the function computes the formula for any delta != 0.
double limit_transfer_prob(double theta, double phi, double kappa, double t,
                           std::optional<double> delta);

/// Average of the dephasing-limit formula over fully random phases:
/// 2 kappa1^2 kappa2^2 / (kappa1^2 + kappa2^2)^2, at most 1/2.
double random_phase_average(double kappa1, double kappa2);

struct PhotonStats {
    double success = 0.0;
    double mean_n2 = 0.0;
    double var_n2 = 0.0;
};

/// N-photon input in A1: P = (|z1|^2 + |z2|^2)^N, transferred photon count
/// is binomial with mean N |z2|^2 / (|z1|^2 + |z2|^2).
PhotonStats number_state_stats(int photons, const ZetaPair& z);

struct CoherentStats {
    double success = 0.0;
    double mean_n2 = 0.0;
    double var_n2 = 0.0;
    Complex out1{0.0, 0.0};  // coherent amplitude left in A1: alpha zeta1
    Complex out2{0.0, 0.0};  // coherent amplitude in A2: alpha zeta2
};

/// Coherent input |alpha> in A1 evolves to the product of coherent states
/// (alpha zeta1, alpha zeta2) with success probability
/// e^{-|alpha|^2 (1 - |zeta1|^2 - |zeta2|^2)}.
CoherentStats coherent_state_stats(Complex alpha, const ZetaPair& z);

/// Phase of the limiting bright-mode unitary e^{i (phi - kappa^2 t / delta)
/// a^dag a}, the lossless-beam-splitter limit. delta must be nonzero.
double effective_beam_splitter_phase(double phi, double kappa, double t, double delta);

}  // namespace zenochain
