#include "zenochain/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <thread>

namespace zenochain {

namespace {

constexpr int kBMode = 1;  // canonical mode order (A1, B, A2)

struct BSlice {
    FockBasis reduced;
    std::vector<std::size_t> full_index;  // full-basis index per reduced element
};

// Elements of a 3-mode basis with exactly m photons in mode B, enumerated as
// the corresponding 2-mode (A1, A2) basis. Empty when a sector basis cannot
// hold m photons in B.
std::optional<BSlice> slice_at_b(const FockBasis& basis3, int m) {
    std::optional<FockBasis> reduced;
    if (basis3.is_sector()) {
        int remaining = basis3.total_excitations() - m;
        if (remaining < 0) return std::nullopt;
        reduced = FockBasis::sector(2, remaining);
    } else {
        const auto& c = basis3.cutoffs();
        if (m > c[kBMode]) return std::nullopt;
        reduced = FockBasis::truncated({c[0], c[2]});
    }
    BSlice slice{std::move(*reduced), {}};
    slice.full_index.reserve(slice.reduced.size());
    std::vector<int> full(3);
    for (std::size_t k = 0; k < slice.reduced.size(); ++k) {
        auto occ = slice.reduced.occupations(k);
        full[0] = occ[0];
        full[1] = m;
        full[2] = occ[1];
        slice.full_index.push_back(basis3.index_of(full));
    }
    return slice;
}

void require_three_modes(const FockBasis& basis, const char* where) {
    if (basis.mode_count() != 3)
        throw std::invalid_argument(std::string(where) + ": basis must cover 3 modes");
}

}  // namespace

Matrix unitary_step(const Matrix& hamiltonian, double dt) {
    if (dt < 0.0) throw std::invalid_argument("unitary_step: dt must be >= 0");
    if (!is_hermitian(hamiltonian))
        throw std::invalid_argument("unitary_step: Hamiltonian is not Hermitian");
    return expi_hermitian(hamiltonian, dt);
}

ProjectedStep vacuum_projected_step(const FockBasis& basis, const Matrix& hamiltonian,
                                    double dt) {
    require_three_modes(basis, "vacuum_projected_step");
    Matrix u = unitary_step(hamiltonian, dt);
    BSlice s0 = *slice_at_b(basis, 0);
    const auto dim = static_cast<Eigen::Index>(s0.reduced.size());
    Matrix v(dim, dim);
    for (Eigen::Index row = 0; row < dim; ++row)
        for (Eigen::Index col = 0; col < dim; ++col)
            v(row, col) = u(static_cast<Eigen::Index>(s0.full_index[static_cast<std::size_t>(row)]),
                            static_cast<Eigen::Index>(s0.full_index[static_cast<std::size_t>(col)]));
    return {std::move(s0.reduced), std::move(v)};
}

Matrix dephasing_operator(const FockBasis& basis, double phi_j, double theta) {
    if (basis.mode_count() != 2)
        throw std::invalid_argument("dephasing_operator: basis must cover 2 modes");
    Matrix rot = mode_rotation_unitary(theta, basis);
    Vector phases(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i)
        phases(static_cast<Eigen::Index>(i)) =
            std::exp(Complex(0.0, phi_j * basis.occupations(i)[0]));
    return rot.adjoint() * phases.asDiagonal() * rot;
}

StateVector apply_dephasing(const StateVector& state, double phi_j, double theta) {
    Matrix d = dephasing_operator(state.basis(), phi_j, theta);
    return StateVector(state.basis(), d * state.amplitudes());
}

std::vector<KrausOperator> kraus_set(const FockBasis& basis, const Matrix& hamiltonian,
                                     double dt, int b_cutoff) {
    require_three_modes(basis, "kraus_set");
    if (b_cutoff < 0) throw std::invalid_argument("kraus_set: b_cutoff must be >= 0");
    Matrix u = unitary_step(hamiltonian, dt);
    BSlice in = *slice_at_b(basis, 0);
    std::vector<KrausOperator> ops;
    for (int m = 0; m <= b_cutoff; ++m) {
        auto out = slice_at_b(basis, m);
        if (!out) break;
        Matrix k(static_cast<Eigen::Index>(out->reduced.size()),
                 static_cast<Eigen::Index>(in.reduced.size()));
        for (std::size_t row = 0; row < out->reduced.size(); ++row)
            for (std::size_t col = 0; col < in.reduced.size(); ++col)
                k(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
                    u(static_cast<Eigen::Index>(out->full_index[row]),
                      static_cast<Eigen::Index>(in.full_index[col]));
        ops.push_back({m, std::move(out->reduced), in.reduced, std::move(k)});
    }
    return ops;
}

int default_coherent_cutoff(Complex alpha) {
    double a = std::abs(alpha);
    return std::max(12, static_cast<int>(std::ceil(a * a + 6.0 * a + 4.0)));
}

namespace {

double bright_theta(const ChainParams& params) {
    // With both couplings zero there is no bright mode; fall back to A1 so
    // the phase unitary remains well defined.
    if (params.kappa1 == 0.0 && params.kappa2 == 0.0) return 0.0;
    return derived_mode_params(params).theta;
}

struct InitData {
    FockBasis basis;
    Vector psi;
    double reference_photons;  // denominator of the transferred fraction
};

InitData initial_two_mode_state(const InitialState& initial) {
    switch (initial.kind) {
        case InitialState::Kind::OnePhoton: {
            FockBasis b = FockBasis::sector(2, 1);
            int occ[2] = {1, 0};
            return {b, fock_state(b, occ).amplitudes(), 1.0};
        }
        case InitialState::Kind::Number: {
            if (initial.photons < 1)
                throw std::invalid_argument("run: photon number must be >= 1");
            FockBasis b = FockBasis::sector(2, initial.photons);
            std::vector<int> occ = {initial.photons, 0};
            return {b, fock_state(b, occ).amplitudes(), static_cast<double>(initial.photons)};
        }
        case InitialState::Kind::Coherent: {
            int cutoff = initial.cutoff > 0 ? initial.cutoff
                                            : default_coherent_cutoff(initial.alpha);
            FockBasis b = FockBasis::truncated({cutoff, cutoff});
            StateVector mode = coherent_amplitudes(initial.alpha, cutoff);
            StateVector s(b);
            for (int n = 0; n <= cutoff; ++n) {
                int one[1] = {n};
                int two[2] = {n, 0};
                s.set_amplitude(two, mode.amplitude(one));
            }
            return {b, s.amplitudes(), std::norm(initial.alpha)};
        }
    }
    throw std::logic_error("initial_two_mode_state: unreachable");
}

// Precomputed operators for one uniform-duration observation interval on a
// 2-mode basis: the B-vacuum compressed step, the bright/dark rotation, and
// the bright occupation of each rotated coordinate.
struct StepEngine {
    Matrix v;
    Matrix rot;
    std::vector<int> bright;
};

StepEngine make_step_engine(const ChainParams& params, double dt, const FockBasis& basis2) {
    const auto dim = static_cast<Eigen::Index>(basis2.size());
    Matrix v = Matrix::Zero(dim, dim);
    if (basis2.is_sector()) {
        FockBasis b3 = FockBasis::sector(3, basis2.total_excitations());
        v = vacuum_projected_step(b3, build_chain_hamiltonian(params, b3), dt).op;
    } else {
        // Assemble sector by sector: the compressed step conserves the total
        // excitation number, and every sector that fits inside the cutoffs is
        // handled without truncation error.
        const auto& c = basis2.cutoffs();
        for (int total = 0; total <= c[0] + c[1]; ++total) {
            FockBasis b3 = FockBasis::sector(3, total);
            ProjectedStep ps = vacuum_projected_step(b3, build_chain_hamiltonian(params, b3), dt);
            std::vector<std::optional<std::size_t>> to_big(ps.basis.size());
            for (std::size_t k = 0; k < ps.basis.size(); ++k)
                to_big[k] = basis2.find(ps.basis.occupations(k));
            for (std::size_t row = 0; row < ps.basis.size(); ++row) {
                if (!to_big[row]) continue;
                for (std::size_t col = 0; col < ps.basis.size(); ++col)
                    if (to_big[col])
                        v(static_cast<Eigen::Index>(*to_big[row]),
                          static_cast<Eigen::Index>(*to_big[col])) =
                            ps.op(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
            }
        }
    }
    StepEngine engine{std::move(v), mode_rotation_unitary(bright_theta(params), basis2), {}};
    engine.bright.reserve(basis2.size());
    for (std::size_t i = 0; i < basis2.size(); ++i)
        engine.bright.push_back(basis2.occupations(i)[0]);
    return engine;
}

std::vector<double> resolve_durations(const EvolutionConfig& config) {
    if (config.steps < 1) throw std::invalid_argument("run: steps must be >= 1");
    if (!config.step_durations.empty()) {
        if (static_cast<int>(config.step_durations.size()) != config.steps)
            throw std::invalid_argument("run: step_durations length must equal steps");
        for (double d : config.step_durations)
            if (d < 0.0) throw std::invalid_argument("run: step durations must be >= 0");
        return config.step_durations;
    }
    if (config.total_time < 0.0) throw std::invalid_argument("run: total_time must be >= 0");
    return std::vector<double>(static_cast<std::size_t>(config.steps),
                               config.total_time / config.steps);
}

}  // namespace

Trajectory run_postselected(const EvolutionConfig& config) {
    const std::vector<double> durations = resolve_durations(config);
    const std::vector<double> phis = config.phases.materialize(config.steps);
    const bool uniform = std::all_of(durations.begin(), durations.end(),
                                     [&](double d) { return d == durations.front(); });

    InitData init = initial_two_mode_state(config.initial);
    const FockBasis& basis2 = init.basis;
    const bool one_photon = config.initial.kind == InitialState::Kind::OnePhoton;
    const int first_group[1] = {0};

    std::optional<StepEngine> shared;
    if (uniform) shared = make_step_engine(config.params, durations.front(), basis2);

    Vector psi = std::move(init.psi);
    Trajectory traj{{}, {}, StateVector(basis2)};
    traj.records.reserve(static_cast<std::size_t>(config.steps));
    double previous = psi.squaredNorm();
    for (int j = 1; j <= config.steps; ++j) {
        if (!uniform)
            shared = make_step_engine(config.params, durations[static_cast<std::size_t>(j - 1)],
                                      basis2);
        const StepEngine& eng = *shared;
        psi = eng.v * psi;
        const double phi_j = phis[static_cast<std::size_t>(j - 1)];
        if (phi_j != 0.0) {
            Vector rotated = eng.rot * psi;
            for (Eigen::Index i = 0; i < rotated.size(); ++i)
                rotated(i) *= std::exp(Complex(0.0, phi_j * eng.bright[static_cast<std::size_t>(i)]));
            psi = eng.rot.adjoint() * rotated;
        }
        const double success = psi.squaredNorm();
        if (success > previous + 1e-12)
            throw std::runtime_error("run_postselected: success probability increased at step " +
                                     std::to_string(j));
        if (success <= 0.0)
            throw std::runtime_error("run_postselected: state vanished at step " +
                                     std::to_string(j));
        previous = success;

        StateVector state(basis2, psi);
        double transferred = mean_occupation(state, 1);
        StepRecord rec;
        rec.step = j;
        rec.success_prob = success;
        rec.transfer_prob = init.reference_photons > 0.0 ? transferred / init.reference_photons
                                                         : 0.0;
        rec.entropy = entanglement_entropy(state, first_group);
        traj.records.push_back(rec);
        if (one_photon) {
            int occ10[2] = {1, 0};
            int occ01[2] = {0, 1};
            traj.one_photon_amplitudes.push_back(
                {state.amplitude(occ10), state.amplitude(occ01)});
        }
    }
    traj.final_state = StateVector(basis2, std::move(psi));
    return traj;
}

std::vector<DensityOperator> run_nonreferring(const EvolutionConfig& config, int b_cutoff) {
    const std::vector<double> durations = resolve_durations(config);
    const std::vector<double> phis = config.phases.materialize(config.steps);

    InitData init = initial_two_mode_state(config.initial);
    int n_max = init.basis.is_sector() ? init.basis.total_excitations()
                                       : init.basis.cutoffs()[0];
    FockBasis basis2 = FockBasis::truncated({n_max, n_max});
    FockBasis basis3 = FockBasis::truncated({n_max, b_cutoff, n_max});
    Matrix h3 = build_chain_hamiltonian(config.params, basis3);
    const double theta = bright_theta(config.params);

    // Re-express the initial amplitudes on the truncated channel basis.
    Vector psi0 = Vector::Zero(static_cast<Eigen::Index>(basis2.size()));
    for (std::size_t i = 0; i < init.basis.size(); ++i) {
        auto occ = init.basis.occupations(i);
        if (auto idx = basis2.find(occ))
            psi0(static_cast<Eigen::Index>(*idx)) = init.psi(static_cast<Eigen::Index>(i));
    }
    Matrix rho = psi0 * psi0.adjoint();
    const double trace0 = rho.trace().real();

    const bool uniform = std::all_of(durations.begin(), durations.end(),
                                     [&](double d) { return d == durations.front(); });
    std::vector<KrausOperator> ops;
    if (uniform) ops = kraus_set(basis3, h3, durations.front(), b_cutoff);

    std::vector<DensityOperator> out;
    out.reserve(static_cast<std::size_t>(config.steps) + 1);
    out.emplace_back(basis2, rho);
    for (int j = 1; j <= config.steps; ++j) {
        if (!uniform)
            ops = kraus_set(basis3, h3, durations[static_cast<std::size_t>(j - 1)], b_cutoff);
        Matrix next = Matrix::Zero(rho.rows(), rho.cols());
        for (const KrausOperator& k : ops) next += k.mat * rho * k.mat.adjoint();
        const double phi_j = phis[static_cast<std::size_t>(j - 1)];
        if (phi_j != 0.0) {
            Matrix d = dephasing_operator(basis2, phi_j, theta);
            next = d * next * d.adjoint();
        }
        rho = std::move(next);
        double drift = std::abs(rho.trace().real() - trace0);
        if (drift > kNormTolerance)
            throw std::runtime_error(
                "run_nonreferring: trace drifted by " + std::to_string(drift) +
                " at step " + std::to_string(j) + "; raise b_cutoff");
        out.emplace_back(basis2, rho);
    }
    return out;
}

std::vector<ZetaPair> run_atomic_postselected(const ChainParams& params, double t, int n,
                                              const PhaseSchedule& phases) {
    if (n < 1) throw std::invalid_argument("run_atomic_postselected: n must be >= 1");
    if (t < 0.0) throw std::invalid_argument("run_atomic_postselected: t must be >= 0");
    const std::vector<double> phis = phases.materialize(n);
    Matrix u = unitary_step(build_atomic_hamiltonian(params), t / n);
    Eigen::Matrix2cd v;  // projection onto span{|A1>, |A2>} of the interval
    v << u(0, 0), u(0, 2), u(2, 0), u(2, 2);
    const double theta = bright_theta(params);
    Eigen::Matrix2cd rot;
    rot << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);

    Eigen::Vector2cd psi(1.0, 0.0);
    std::vector<ZetaPair> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        psi = v * psi;
        if (phis[static_cast<std::size_t>(j)] != 0.0) {
            Eigen::Vector2cd bright = rot * psi;
            bright(0) *= std::exp(Complex(0.0, phis[static_cast<std::size_t>(j)]));
            psi = rot.adjoint() * bright;
        }
        out.push_back({psi(0), psi(1)});
    }
    return out;
}

MonteCarloResult monte_carlo_random_phases(const EvolutionConfig& config, int trials,
                                           int jobs) {
    if (trials < 2) throw std::invalid_argument("monte_carlo_random_phases: trials must be >= 2");
    if (!config.phases.is_random())
        throw std::invalid_argument(
            "monte_carlo_random_phases: config must carry a UniformRandom phase schedule");
    const std::uint64_t seed = config.phases.seed();

    std::vector<double> p(static_cast<std::size_t>(trials));
    std::vector<double> success(static_cast<std::size_t>(trials));
    std::vector<double> entropy(static_cast<std::size_t>(trials));
    auto run_trial = [&](int k) {
        EvolutionConfig trial = config;
        trial.phases = PhaseSchedule::uniform_random(mix_seed(seed, static_cast<std::uint64_t>(k)));
        Trajectory traj = run_postselected(trial);
        const StepRecord& last = traj.records.back();
        p[static_cast<std::size_t>(k)] = last.transfer_prob;
        success[static_cast<std::size_t>(k)] = last.success_prob;
        entropy[static_cast<std::size_t>(k)] = last.entropy;
    };

    jobs = std::clamp(jobs, 1, trials);
    if (jobs == 1) {
        for (int k = 0; k < trials; ++k) run_trial(k);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int w = 0; w < jobs; ++w)
            pool.emplace_back([&, w] {
                for (int k = w; k < trials; k += jobs) run_trial(k);
            });
        for (auto& th : pool) th.join();
    }

    MonteCarloResult result;
    for (int k = 0; k < trials; ++k) {
        result.mean_p += p[static_cast<std::size_t>(k)];
        result.mean_success += success[static_cast<std::size_t>(k)];
        result.mean_entropy += entropy[static_cast<std::size_t>(k)];
    }
    result.mean_p /= trials;
    result.mean_success /= trials;
    result.mean_entropy /= trials;
    double ss = 0.0;
    for (int k = 0; k < trials; ++k) {
        double d = p[static_cast<std::size_t>(k)] - result.mean_p;
        ss += d * d;
    }
    result.std_error = std::sqrt(ss / (trials - 1.0)) / std::sqrt(static_cast<double>(trials));
    return result;
}

}  // namespace zenochain
