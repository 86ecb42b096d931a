#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "zenochain/fock.hpp"

using namespace zenochain;

namespace {

// Independent stars-and-bars count.
std::size_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::size_t r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
    return r;
}

}  // namespace

TEST_CASE("sector enumeration: sizes and ordering") {
    FockBasis one = FockBasis::sector(3, 1);
    REQUIRE(one.size() == 3);
    CHECK(one.occupations(0)[0] == 1);  // (1,0,0) first: the A1 slot
    CHECK(one.occupations(1)[1] == 1);  // (0,1,0): the B slot
    CHECK(one.occupations(2)[2] == 1);  // (0,0,1): the A2 slot

    CHECK(FockBasis::sector(3, 0).size() == 1);
    CHECK(FockBasis::sector(3, 2).size() == 6);

    for (int modes : {1, 2, 3, 4}) {
        for (int total : {0, 1, 2, 5}) {
            FockBasis b = FockBasis::sector(modes, total);
            CHECK(b.size() == binomial(total + modes - 1, modes - 1));
        }
    }
}

TEST_CASE("tuple -> index -> tuple is the identity") {
    for (const FockBasis& b :
         {FockBasis::sector(3, 3), FockBasis::sector(2, 5), FockBasis::truncated({3, 2, 1}),
          FockBasis::truncated({4})}) {
        for (std::size_t i = 0; i < b.size(); ++i) CHECK(b.index_of(b.occupations(i)) == i);
    }
    FockBasis b = FockBasis::sector(3, 1);
    int absent[3] = {2, 0, 0};
    CHECK(!b.find(absent).has_value());
    CHECK_THROWS_AS((void)b.index_of(absent), std::out_of_range);
}

TEST_CASE("fock_state") {
    FockBasis b = FockBasis::sector(3, 1);
    int occ[3] = {1, 0, 0};
    StateVector s = fock_state(b, occ);
    CHECK(s.amplitude(occ) == Complex(1.0, 0.0));
    CHECK(s.norm() == doctest::Approx(1.0));

    FockBasis vac = FockBasis::sector(3, 0);
    int zero[3] = {0, 0, 0};
    CHECK(fock_state(vac, zero).norm() == doctest::Approx(1.0));

    int bad[3] = {2, 0, 0};
    CHECK_THROWS_AS(fock_state(b, bad), std::out_of_range);
}

TEST_CASE("coherent amplitudes against the term-by-term series") {
    StateVector zero = coherent_amplitudes(Complex(0.0, 0.0), 6);
    int n0[1] = {0};
    CHECK(zero.amplitude(n0) == Complex(1.0, 0.0));
    CHECK(zero.norm() == doctest::Approx(1.0));

    StateVector s = coherent_amplitudes(Complex(1.0, 0.0), 12);
    long double fact = 1.0L;
    for (int n = 0; n <= 12; ++n) {
        if (n > 0) fact *= n;
        long double expected = std::exp(-0.5L) / std::sqrt(fact);  // alpha = 1
        int occ[1] = {n};
        CHECK(std::abs(s.amplitude(occ) - Complex(static_cast<double>(expected), 0.0)) < 1e-14);
    }
    int n1[1] = {1};
    CHECK(s.amplitude(n1).real() == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));

    // Poisson tail: 1 - norm^2 = sum_{n>12} e^{-1}/n!
    long double tail = 0.0L, f = 1.0L;
    for (int n = 1; n <= 12; ++n) f *= n;
    long double term = std::exp(-1.0L) / f;
    for (int n = 13; n <= 60; ++n) {
        term /= n;
        tail += term;
    }
    CHECK(1.0 - s.norm_squared() == doctest::Approx(static_cast<double>(tail)).epsilon(1e-6));
    CHECK(1.0 - s.norm_squared() < 1e-9);
}

TEST_CASE("coherent norm is nondecreasing in the cutoff and tends to 1") {
    const Complex alpha(0.9, -0.7);
    double prev = 0.0;
    for (int cutoff = 1; cutoff <= 24; ++cutoff) {
        double n2 = coherent_amplitudes(alpha, cutoff).norm_squared();
        CHECK(n2 >= prev - 1e-15);
        prev = n2;
    }
    CHECK(prev == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("entanglement entropy") {
    const int group[1] = {0};
    FockBasis b = FockBasis::sector(2, 1);
    int occ10[2] = {1, 0};
    int occ01[2] = {0, 1};

    SUBCASE("product state has zero entropy") {
        CHECK(entanglement_entropy(fock_state(b, occ10), group) < 1e-10);
    }
    SUBCASE("balanced single excitation gives ln 2") {
        StateVector s(b);
        s.set_amplitude(occ10, Complex(1.0 / std::numbers::sqrt2, 0.0));
        s.set_amplitude(occ01, Complex(1.0 / std::numbers::sqrt2, 0.0));
        CHECK(entanglement_entropy(s, group) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    }
    SUBCASE("weights 3/4 and 1/4 give the binary entropy") {
        StateVector s(b);
        s.set_amplitude(occ10, Complex(std::sqrt(3.0) / 2.0, 0.0));
        s.set_amplitude(occ01, Complex(0.0, 0.5));
        double expected = -(0.75 * std::log(0.75) + 0.25 * std::log(0.25));
        CHECK(entanglement_entropy(s, group) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(expected == doctest::Approx(0.5623).epsilon(1e-4));
    }
    SUBCASE("invariant under scaling by a nonzero complex number") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        StateVector s(b);
        s.set_amplitude(occ10, Complex(u(rng), u(rng)));
        s.set_amplitude(occ01, Complex(u(rng), u(rng)));
        double base = entanglement_entropy(s, group);
        for (int i = 0; i < 10; ++i) {
            Complex scale(u(rng) * 3.0, u(rng) * 3.0);
            if (std::abs(scale) < 1e-3) continue;
            StateVector scaled(b, scale * s.amplitudes());
            CHECK(std::abs(entanglement_entropy(scaled, group) - base) < 1e-10);
        }
    }
    SUBCASE("zero state is rejected") {
        CHECK_THROWS_AS(entanglement_entropy(StateVector(b), group), std::invalid_argument);
    }
}

TEST_CASE("tensor products across the bipartition carry no entanglement") {
    // Product of two truncated coherent states on a 2-mode basis.
    StateVector m1 = coherent_amplitudes(Complex(0.6, 0.2), 5);
    StateVector m2 = coherent_amplitudes(Complex(-0.3, 0.5), 5);
    FockBasis b = FockBasis::truncated({5, 5});
    StateVector s(b);
    for (int i = 0; i <= 5; ++i)
        for (int j = 0; j <= 5; ++j) {
            int left[1] = {i}, right[1] = {j}, both[2] = {i, j};
            s.set_amplitude(both, m1.amplitude(left) * m2.amplitude(right));
        }
    const int group[1] = {0};
    CHECK(entanglement_entropy(s, group) < 1e-10);
    CHECK(reduced_purity(s, group) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("occupation moments") {
    FockBasis b = FockBasis::sector(2, 2);
    int occ20[2] = {2, 0};
    int occ02[2] = {0, 2};
    StateVector s(b);
    s.set_amplitude(occ20, Complex(std::sqrt(0.75), 0.0));
    s.set_amplitude(occ02, Complex(0.0, std::sqrt(0.25)));
    CHECK(mean_occupation(s, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(occupation_moment(s, 1, 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(total_mean_occupation(s) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("hopping and number operators") {
    FockBasis b = FockBasis::truncated({2, 2});
    Matrix hop = hopping_operator(b, 0, 1);
    // a0^dag a1 sends (0,1) -> (1,0) with amplitude 1, (1,1) -> (2,0) with sqrt(2)
    int from[2] = {0, 1}, to[2] = {1, 0};
    CHECK(hop(static_cast<Eigen::Index>(b.index_of(to)),
              static_cast<Eigen::Index>(b.index_of(from)))
              .real() == doctest::Approx(1.0));
    int from2[2] = {1, 1}, to2[2] = {2, 0};
    CHECK(hop(static_cast<Eigen::Index>(b.index_of(to2)),
              static_cast<Eigen::Index>(b.index_of(from2)))
              .real() == doctest::Approx(std::numbers::sqrt2));

    Matrix n0 = number_operator(b, 0);
    int occ[2] = {2, 1};
    auto idx = static_cast<Eigen::Index>(b.index_of(occ));
    CHECK(n0(idx, idx).real() == doctest::Approx(2.0));
}
