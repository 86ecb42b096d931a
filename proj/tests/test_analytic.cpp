#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "zenochain/analytic.hpp"

using namespace zenochain;
using std::numbers::pi;

TEST_CASE("step factor") {
    SUBCASE("resonant case") {
        StepFactor f = step_factor(1.3, 0.0, 0.4);
        CHECK(f.mu == Complex(std::cos(1.3 * 0.4), 0.0));
        CHECK(f.nu == Complex(0.0, -std::sin(1.3 * 0.4)));
        CHECK(f.chi == Complex(std::cos(1.3 * 0.4), 0.0));
    }
    SUBCASE("zero duration") {
        StepFactor f = step_factor(2.0, 3.0, 0.0, 0.8);
        CHECK(f.mu == Complex(1.0, 0.0));
        CHECK(f.nu == Complex(0.0, 0.0));
        CHECK(std::abs(f.chi - std::exp(Complex(0.0, 0.8))) < 1e-15);
    }
    SUBCASE("both rates zero resolves by continuity") {
        StepFactor f = step_factor(0.0, 0.0, 1.7);
        CHECK(f.gamma == 0.0);
        CHECK(f.mu == Complex(1.0, 0.0));
        CHECK(f.nu == Complex(0.0, 0.0));
    }
    SUBCASE("detuned values against long-double arithmetic") {
        StepFactor f = step_factor(1.0, 10.0, 0.1);
        CHECK(f.gamma == doctest::Approx(std::sqrt(26.0)).epsilon(1e-15));
        long double g = std::sqrt(26.0L);
        long double s = std::sin(g * 0.1L);
        Complex mu(static_cast<double>(std::cos(g * 0.1L)),
                   static_cast<double>(-5.0L / g * s));
        Complex nu(0.0, static_cast<double>(-1.0L / g * s));
        CHECK(std::abs(f.mu - mu) < 1e-15);
        CHECK(std::abs(f.nu - nu) < 1e-15);
        CHECK(std::norm(f.mu) + std::norm(f.nu) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("negative duration is rejected") {
        CHECK_THROWS_AS(step_factor(1.0, 0.0, -0.1), std::invalid_argument);
    }
}

TEST_CASE("step factors are unimodular for random parameters") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        StepFactor f = step_factor(4.0 * u(rng), 16.0 * (u(rng) - 0.5), 3.0 * u(rng), 2 * pi * u(rng));
        CHECK(std::abs(std::norm(f.mu) + std::norm(f.nu) - 1.0) < 1e-12);
        CHECK(std::abs(std::abs(f.chi) - std::abs(f.mu)) < 1e-12);
    }
}

TEST_CASE("phase schedules") {
    PhaseSchedule det = PhaseSchedule::deterministic({0.1, 0.2, 0.3});
    CHECK(det.materialize(3) == std::vector<double>{0.1, 0.2, 0.3});
    CHECK_THROWS_AS(det.materialize(4), std::invalid_argument);

    PhaseSchedule rnd = PhaseSchedule::uniform_random(99);
    auto a = rnd.materialize(1000);
    auto b = PhaseSchedule::uniform_random(99).materialize(1000);
    CHECK(a == b);
    for (double phi : a) {
        CHECK(phi >= 0.0);
        CHECK(phi < 2 * pi);
    }
    CHECK(PhaseSchedule::uniform_random(100).materialize(1000) != a);

    CHECK(evenly_spread(pi, 4) == std::vector<double>{pi / 4, pi / 4, pi / 4, pi / 4});
    CHECK(mix_seed(1, 0) != mix_seed(1, 1));
    CHECK(mix_seed(1, 0) == mix_seed(1, 0));
}

TEST_CASE("accumulated chi") {
    SUBCASE("resonant, no dephasing: cos^n(kappa t / n)") {
        const double kappa = 1.4, t = 2.0;
        const int n = 37;
        Complex chi = chi_total(kappa, 0.0, t, n, PhaseSchedule::deterministic(
                                                       evenly_spread(0.0, n)));
        CHECK(std::abs(chi - std::pow(std::cos(kappa * t / n), n)) < 1e-13);
    }
    SUBCASE("frequent monitoring keeps only the accumulated phase") {
        const int n = 100000;
        const double phi = 0.7;
        Complex chi = chi_total(1.0, 0.0, 1.0, n,
                                PhaseSchedule::deterministic(evenly_spread(phi, n)));
        CHECK(std::abs(chi - std::exp(Complex(0.0, phi))) < 1e-3);
    }
    SUBCASE("strong detuning at full Rabi periods") {
        // With gamma dt = pi the checks always catch B empty: |chi| = 1
        // exactly and the phase advances by -kappa^2 t / delta up to a
        // relative error of order (kappa/delta)^2.
        const double kappa = 1.0, delta = 100.0;
        const double gamma = std::sqrt(kappa * kappa + delta * delta / 4.0);
        const double dt = pi / gamma;
        const int n = 160;
        const double t = n * dt;
        Complex chi = chi_total(kappa, delta, t, n,
                                PhaseSchedule::deterministic(evenly_spread(0.0, n)));
        CHECK(std::abs(std::abs(chi) - 1.0) < 1e-12);
        double target = -kappa * kappa * t / delta;
        double err = std::abs(std::arg(chi * std::exp(Complex(0.0, -target))));
        CHECK(err <= 2.0 * (kappa / delta) * (kappa / delta) * std::abs(target));
    }
    SUBCASE("per-step durations") {
        std::vector<double> dts = {0.1, 0.25, 0.0, 0.4};
        std::vector<double> phis = {0.3, -0.2, 1.0, 0.0};
        Complex expected(1.0, 0.0);
        for (std::size_t j = 0; j < dts.size(); ++j)
            expected *= step_factor(0.9, 1.2, dts[j], phis[j]).chi;
        CHECK(std::abs(chi_total(0.9, 1.2, dts, phis) - expected) < 1e-15);
        std::vector<double> short_phis = {0.3};
        CHECK_THROWS_AS(chi_total(0.9, 1.2, dts, short_phis), std::invalid_argument);
    }
}

TEST_CASE("zeta pair") {
    ZetaPair none = zeta_pair(Complex(1.0, 0.0), 1.234);
    CHECK(std::abs(none.zeta1 - Complex(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(none.zeta2) < 1e-15);

    ZetaPair full = zeta_pair(Complex(-1.0, 0.0), pi / 4);
    CHECK(std::abs(full.zeta1) < 1e-15);
    CHECK(std::abs(full.zeta2 - Complex(-1.0, 0.0)) < 1e-15);

    // One resonant step with kappa dt = pi/4 at theta = pi/4, checked against
    // an independent 3x3 eigendecomposition of the one-excitation block.
    const double theta = pi / 4, kdt = pi / 4;
    ZetaPair z = zeta_pair(Complex(std::cos(kdt), 0.0), theta);
    CHECK(z.zeta1.real() == doctest::Approx(0.85355339059327373).epsilon(1e-12));
    CHECK(z.zeta2.real() == doctest::Approx(-0.14644660940672624).epsilon(1e-12));

    Matrix h(3, 3);
    const double k1 = std::cos(theta), k2 = std::sin(theta);  // kappa = 1
    h << 0, k1, 0, k1, 0, k2, 0, k2, 0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Vector phases(3);
    for (int k = 0; k < 3; ++k)
        phases(k) = std::exp(Complex(0.0, -es.eigenvalues()(k) * kdt));
    Matrix u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    CHECK(std::abs(u(0, 0) - z.zeta1) < 1e-12);
    CHECK(std::abs(u(2, 0) - z.zeta2) < 1e-12);
}

TEST_CASE("success and conditional probabilities") {
    TransferProbabilities stay = probabilities({Complex(1.0, 0.0), Complex(0.0, 0.0)});
    CHECK(stay.success == doctest::Approx(1.0));
    CHECK(stay.conditional == doctest::Approx(0.0));

    TransferProbabilities moved = probabilities({Complex(0.0, 0.0), Complex(-1.0, 0.0)});
    CHECK(moved.success == doctest::Approx(1.0));
    CHECK(moved.conditional == doctest::Approx(1.0));

    ZetaPair z = zeta_pair(Complex(std::cos(pi / 4), 0.0), pi / 4);
    TransferProbabilities tp = probabilities(z);
    CHECK(tp.success == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(tp.conditional == doctest::Approx((1.5 - std::numbers::sqrt2) / 3.0).epsilon(1e-12));
    CHECK(tp.conditional == doctest::Approx(0.02860).epsilon(2e-3));

    CHECK_THROWS_AS(probabilities({Complex(0.0, 0.0), Complex(0.0, 0.0)}),
                    std::invalid_argument);
}

TEST_CASE("pure dephasing never fails post-selection") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        Complex chi = std::exp(Complex(0.0, 2 * pi * u(rng)));
        double theta = pi * u(rng);
        CHECK(probabilities(zeta_pair(chi, theta)).success == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("limit transfer probability") {
    CHECK(limit_transfer_prob(pi / 4, 0.0, 1.0, 1.0, std::nullopt) == doctest::Approx(0.0));
    CHECK(limit_transfer_prob(pi / 4, pi, 1.0, 1.0, std::nullopt) == doctest::Approx(1.0));
    // kappa^2 t / delta = pi with phi = 0
    CHECK(limit_transfer_prob(pi / 4, 0.0, 1.0, 7.0 * pi, 7.0) == doctest::Approx(1.0));
    // sign convention: cos(kappa^2 t / delta - phi)
    CHECK(limit_transfer_prob(pi / 4, pi / 2, 1.0, 7.0 * pi, 7.0) ==
          doctest::Approx(0.5 * (1.0 - std::cos(pi / 2))));
    CHECK_THROWS_AS(limit_transfer_prob(pi / 4, 0.0, 1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("the exact conditional probability approaches the dephasing limit") {
    const double theta = pi / 6, phi = pi / 3, kappa = 1.0, t = 1.0;
    const double target = limit_transfer_prob(theta, phi, kappa, t, std::nullopt);
    double previous = 1.0;
    for (int n : {100, 1000, 10000}) {
        Complex chi =
            chi_total(kappa, 0.0, t, n, PhaseSchedule::deterministic(evenly_spread(phi, n)));
        double p = probabilities(zeta_pair(chi, theta)).conditional;
        double err = std::abs(p - target);
        CHECK(err < previous);
        CHECK(err <= 0.1 / n);  // ~C/n with C fitted from the n = 100 point
        previous = err;
    }
}

TEST_CASE("random phase average") {
    CHECK(random_phase_average(1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(random_phase_average(2.0, 0.0) == doctest::Approx(0.0));
    CHECK(random_phase_average(3.0, 4.0) == doctest::Approx(0.4608).epsilon(1e-15));
    CHECK_THROWS_AS(random_phase_average(0.0, 0.0), std::invalid_argument);
}

TEST_CASE("quadrature over phi reproduces the random-phase average") {
    const double k1 = 1.3, k2 = 0.6;
    const double theta = std::atan2(k2, k1);
    const int points = 4096;
    double acc = 0.0;
    for (int i = 0; i < points; ++i) {
        double phi = 2 * pi * (i + 0.5) / points;
        acc += limit_transfer_prob(theta, phi, 1.0, 1.0, std::nullopt);
    }
    CHECK(std::abs(acc / points - random_phase_average(k1, k2)) < 1e-6);
}

TEST_CASE("number-state statistics") {
    ZetaPair z = zeta_pair(Complex(std::cos(pi / 4), 0.0), pi / 4);

    SUBCASE("N = 1 reduces to the one-photon probabilities") {
        PhotonStats stats = number_state_stats(1, z);
        TransferProbabilities tp = probabilities(z);
        CHECK(stats.success == doctest::Approx(tp.success).epsilon(1e-15));
        CHECK(stats.mean_n2 == doctest::Approx(tp.conditional).epsilon(1e-15));
    }
    SUBCASE("complete transfer has vanishing uncertainty") {
        PhotonStats stats = number_state_stats(5, {Complex(0.0, 0.0), Complex(0.8, 0.0)});
        CHECK(stats.mean_n2 == doctest::Approx(5.0));
        CHECK(stats.var_n2 == doctest::Approx(0.0));
    }
    SUBCASE("N = 2 example") {
        PhotonStats stats = number_state_stats(2, z);
        double w1 = std::norm(z.zeta1), w2 = std::norm(z.zeta2), p2 = w1 + w2;
        CHECK(stats.success == doctest::Approx(0.5625).epsilon(1e-12));
        CHECK(stats.mean_n2 == doctest::Approx(2.0 * w2 / p2).epsilon(1e-15));
        CHECK(stats.mean_n2 == doctest::Approx(0.05719).epsilon(1e-3));
        CHECK(stats.var_n2 == doctest::Approx(2.0 * w1 * w2 / (p2 * p2)).epsilon(1e-15));
    }
    CHECK_THROWS_AS(number_state_stats(0, z), std::invalid_argument);
}

TEST_CASE("coherent-state statistics") {
    SUBCASE("vacuum input") {
        CoherentStats stats = coherent_state_stats(Complex(0.0, 0.0), zeta_pair(Complex(0.3, 0.1), 0.7));
        CHECK(stats.success == doctest::Approx(1.0));
        CHECK(stats.mean_n2 == doctest::Approx(0.0));
    }
    SUBCASE("complete transfer") {
        Complex phase = std::exp(Complex(0.0, 1.1));
        CoherentStats stats = coherent_state_stats(Complex(1.2, -0.3), {Complex(0.0, 0.0), phase});
        CHECK(stats.success == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(stats.mean_n2 == doctest::Approx(std::norm(Complex(1.2, -0.3))).epsilon(1e-12));
    }
    SUBCASE("one mean photon at the quarter-period step") {
        ZetaPair z = zeta_pair(Complex(std::cos(pi / 4), 0.0), pi / 4);
        CoherentStats stats = coherent_state_stats(Complex(1.0, 0.0), z);
        CHECK(stats.success == doctest::Approx(std::exp(-0.25)).epsilon(1e-12));
        CHECK(stats.mean_n2 == doctest::Approx(0.02145).epsilon(1e-3));
        CHECK(stats.var_n2 == stats.mean_n2);
        CHECK(std::abs(stats.out1 - z.zeta1) < 1e-15);
        CHECK(std::abs(stats.out2 - z.zeta2) < 1e-15);
    }
}

TEST_CASE("effective beam-splitter phase") {
    CHECK(effective_beam_splitter_phase(0.5, 1.0, 2.0, 4.0) == doctest::Approx(0.0));
    CHECK(effective_beam_splitter_phase(0.0, 1.0, 5.0 * pi, 5.0) == doctest::Approx(-pi));
    CHECK(effective_beam_splitter_phase(pi / 2, 1.0, 2.0 * pi / 4.0, 1.0) ==
          doctest::Approx(0.0));
    CHECK_THROWS_AS(effective_beam_splitter_phase(0.0, 1.0, 1.0, 0.0), std::invalid_argument);
}
