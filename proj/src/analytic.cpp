#include "zenochain/analytic.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace zenochain {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

StepFactor step_factor(double kappa, double delta, double dt, double phi_j) {
    if (dt < 0.0) throw std::invalid_argument("step_factor: dt must be >= 0");
    StepFactor f;
    f.gamma = std::sqrt(kappa * kappa + delta * delta / 4.0);
    if (f.gamma > 0.0) {
        double s = std::sin(f.gamma * dt);
        f.mu = Complex(std::cos(f.gamma * dt), -delta / (2.0 * f.gamma) * s);
        f.nu = Complex(0.0, -kappa / f.gamma * s);
    }
    f.chi = std::exp(Complex(0.0, phi_j + delta * dt / 2.0)) * f.mu;
    return f;
}

PhaseSchedule PhaseSchedule::deterministic(std::vector<double> phis) {
    PhaseSchedule s;
    s.phis_ = std::move(phis);
    return s;
}

PhaseSchedule PhaseSchedule::uniform_random(std::uint64_t seed) {
    PhaseSchedule s;
    s.random_ = true;
    s.seed_ = seed;
    return s;
}

std::uint64_t PhaseSchedule::seed() const {
    if (!random_) throw std::logic_error("PhaseSchedule: seed of a deterministic schedule");
    return seed_;
}

std::vector<double> PhaseSchedule::materialize(int n) const {
    if (n < 0) throw std::invalid_argument("PhaseSchedule: negative step count");
    if (!random_) {
        if (static_cast<int>(phis_.size()) != n)
            throw std::invalid_argument("PhaseSchedule: deterministic schedule has " +
                                        std::to_string(phis_.size()) + " phases, expected " +
                                        std::to_string(n));
        return phis_;
    }
    std::mt19937_64 eng(seed_);
    std::vector<double> phis(static_cast<std::size_t>(n));
    for (auto& phi : phis)
        phi = 2.0 * std::numbers::pi * static_cast<double>(eng() >> 11) * 0x1.0p-53;
    return phis;
}

std::vector<double> evenly_spread(double phi_total, int n) {
    if (n < 1) throw std::invalid_argument("evenly_spread: n must be >= 1");
    return std::vector<double>(static_cast<std::size_t>(n), phi_total / n);
}

Complex chi_total(double kappa, double delta, double t, int n, const PhaseSchedule& phases) {
    if (n < 1) throw std::invalid_argument("chi_total: n must be >= 1");
    if (t < 0.0) throw std::invalid_argument("chi_total: t must be >= 0");
    std::vector<double> phis = phases.materialize(n);
    Complex base = step_factor(kappa, delta, t / n).chi;
    Complex chi(1.0, 0.0);
    for (double phi : phis) chi *= std::exp(Complex(0.0, phi)) * base;
    return chi;
}

Complex chi_total(double kappa, double delta, std::span<const double> step_durations,
                  std::span<const double> phis) {
    if (step_durations.size() != phis.size())
        throw std::invalid_argument("chi_total: durations and phases differ in length");
    Complex chi(1.0, 0.0);
    for (std::size_t j = 0; j < phis.size(); ++j)
        chi *= step_factor(kappa, delta, step_durations[j], phis[j]).chi;
    return chi;
}

ZetaPair zeta_pair(Complex chi, double theta) {
    double c = std::cos(theta), s = std::sin(theta);
    return {chi * c * c + s * s, (chi - 1.0) * c * s};
}

TransferProbabilities probabilities(const ZetaPair& z) {
    double success = std::norm(z.zeta1) + std::norm(z.zeta2);
    if (success <= 0.0)
        throw std::invalid_argument("probabilities: success probability is zero, "
                                    "conditional transfer probability is undefined");
    return {success, std::norm(z.zeta2) / success};
}

double limit_transfer_prob(double theta, double phi, double kappa, double t,
                           std::optional<double> delta) {
    double phi_eff = phi;
    if (delta) {
        if (*delta == 0.0)
            throw std::invalid_argument("limit_transfer_prob: delta must be nonzero "
                                        "(pass no delta for the resonant case)");
        phi_eff = kappa * kappa * t / *delta - phi;
    }
    double c = std::cos(theta), s = std::sin(theta);
    return 2.0 * c * c * s * s * (1.0 - std::cos(phi_eff));
}

double random_phase_average(double kappa1, double kappa2) {
    double k2 = kappa1 * kappa1 + kappa2 * kappa2;
    if (k2 <= 0.0) throw std::invalid_argument("random_phase_average: both couplings are zero");
    return 2.0 * kappa1 * kappa1 * kappa2 * kappa2 / (k2 * k2);
}

PhotonStats number_state_stats(int photons, const ZetaPair& z) {
    if (photons < 1) throw std::invalid_argument("number_state_stats: photons must be >= 1");
    double w1 = std::norm(z.zeta1), w2 = std::norm(z.zeta2);
    double p2 = w1 + w2;
    if (p2 <= 0.0) throw std::invalid_argument("number_state_stats: degenerate zero amplitudes");
    PhotonStats stats;
    stats.success = std::pow(p2, photons);
    stats.mean_n2 = photons * w2 / p2;
    stats.var_n2 = photons * w1 * w2 / (p2 * p2);
    return stats;
}

CoherentStats coherent_state_stats(Complex alpha, const ZetaPair& z) {
    double w1 = std::norm(z.zeta1), w2 = std::norm(z.zeta2);
    CoherentStats stats;
    stats.success = std::exp(-std::norm(alpha) * (1.0 - w1 - w2));
    stats.out1 = alpha * z.zeta1;
    stats.out2 = alpha * z.zeta2;
    stats.mean_n2 = std::norm(alpha) * w2;
    stats.var_n2 = stats.mean_n2;
    return stats;
}

double effective_beam_splitter_phase(double phi, double kappa, double t, double delta) {
    if (delta == 0.0)
        throw std::invalid_argument("effective_beam_splitter_phase: delta must be nonzero");
    return phi - kappa * kappa * t / delta;
}

}  // namespace zenochain
