#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "acbell/spin.hpp"
#include "oracle_helpers.hpp"

using namespace acbell;
using spin::CoupledLabel;
using spin::PairGrouping;
using spin::StateVector;
using Complex = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

double max_component_distance(const StateVector& a, const oracle::State16& b) {
    double worst = 0.0;
    for (unsigned label = 0; label < 16; ++label) {
        worst = std::max(worst, std::abs(a.amp[label] - b[label]));
    }
    return worst;
}

unsigned label_of(const char* signs) {
    unsigned label = 0;
    for (int particle = 1; particle <= 4; ++particle) {
        if (signs[particle - 1] == '+') {
            label |= 1u << (particle - 1);
        }
    }
    return label;
}

}  // namespace

TEST_CASE("build_singlet_product: source grouping expansion") {
    const StateVector state = spin::build_singlet_product(spin::kSourcePairs);
    CHECK(state.amp[label_of("+-+-")] == Complex(0.5, 0.0));
    CHECK(state.amp[label_of("+--+")] == Complex(-0.5, 0.0));
    CHECK(state.amp[label_of("-++-")] == Complex(-0.5, 0.0));
    CHECK(state.amp[label_of("-+-+")] == Complex(0.5, 0.0));
    CHECK(state.amp[label_of("++--")] == Complex(0.0, 0.0));
    CHECK(spin::state_norm(state) == doctest::Approx(1.0).epsilon(1e-14));

    CHECK(max_component_distance(state, oracle::singlet_product(1, 2, 3, 4)) == 0.0);
}

TEST_CASE("build_singlet_product: every grouping matches the tensor expansion") {
    const int groupings[][4] = {{1, 2, 3, 4}, {1, 4, 2, 3}, {1, 3, 2, 4},
                                {2, 1, 4, 3}, {4, 1, 3, 2}, {3, 4, 1, 2}};
    for (const auto& g : groupings) {
        const StateVector state =
            spin::build_singlet_product(PairGrouping{{g[0], g[1]}, {g[2], g[3]}});
        CHECK(max_component_distance(state, oracle::singlet_product(g[0], g[1], g[2], g[3])) ==
              0.0);
    }

    // Meeting grouping spot checks: pair (1,4) = (+,+) is impossible, while
    // |++--> holds (+,-) on (1,4) and (+,-) on (2,3).
    const StateVector meeting = spin::build_singlet_product(spin::kMeetingPairs);
    CHECK(meeting.amp[label_of("+--+")] == Complex(0.0, 0.0));
    CHECK(meeting.amp[label_of("++--")] == Complex(0.5, 0.0));
}

TEST_CASE("build_singlet_product: invalid groupings rejected") {
    CHECK_THROWS_AS(spin::build_singlet_product(PairGrouping{{1, 1}, {3, 4}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(spin::build_singlet_product(PairGrouping{{1, 2}, {2, 4}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(spin::build_singlet_product(PairGrouping{{0, 2}, {3, 4}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(spin::build_singlet_product(PairGrouping{{1, 2}, {3, 5}}),
                    std::invalid_argument);
}

TEST_CASE("apply_local_phase: identity, quarter phase, input checks") {
    const StateVector state = spin::build_singlet_product(spin::kSourcePairs);

    const StateVector unchanged = spin::apply_local_phase(state, 1, 0.0);
    for (unsigned label = 0; label < 16; ++label) {
        CHECK(unchanged.amp[label] == state.amp[label]);
    }

    // e^{i pi/2} = i lands on every |+>-component of particle 1.
    const StateVector rotated = spin::apply_local_phase(state, 1, kPi / 2);
    CHECK(std::abs(rotated.amp[label_of("+-+-")] - Complex(0.0, 0.5)) < 1e-15);
    CHECK(std::abs(rotated.amp[label_of("-++-")] - Complex(0.0, 0.5)) < 1e-15);

    CHECK_THROWS_AS(spin::apply_local_phase(state, 0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(spin::apply_local_phase(state, 5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(spin::apply_local_phase(state, 1, std::nan("")), std::invalid_argument);
}

TEST_CASE("property: local phases preserve the norm and commute") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const StateVector state = oracle::random_state(rng);
        const int particle = 1 + trial % 4;
        const int other = 1 + (trial + 1) % 4;
        const double phi = oracle::uniform(rng, -6, 6);
        const double psi = oracle::uniform(rng, -6, 6);

        CHECK(std::abs(spin::state_norm(spin::apply_local_phase(state, particle, phi)) -
                       spin::state_norm(state)) < 1e-12);

        const StateVector ab = spin::apply_local_phase(
            spin::apply_local_phase(state, particle, phi), other, psi);
        const StateVector ba = spin::apply_local_phase(
            spin::apply_local_phase(state, other, psi), particle, phi);
        for (unsigned label = 0; label < 16; ++label) {
            CHECK(std::abs(ab.amp[label] - ba.amp[label]) < 1e-12);
        }
    }
}

TEST_CASE("property: phased singlet splits into cos/sin singlet-triplet weights") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        const double phi1 = oracle::uniform(rng, -kPi, kPi);
        const double phi2 = oracle::uniform(rng, -kPi, kPi);
        const double delta = phi1 - phi2;

        StateVector state = spin::build_singlet_product(spin::kSourcePairs);
        state = spin::apply_local_phase(state, 1, phi1);
        state = spin::apply_local_phase(state, 2, phi2);

        const Complex s =
            spin::coupled_amplitude(state, spin::kSourcePairs, CoupledLabel::S, CoupledLabel::S);
        const Complex t0 =
            spin::coupled_amplitude(state, spin::kSourcePairs, CoupledLabel::T0, CoupledLabel::S);
        const Complex tp =
            spin::coupled_amplitude(state, spin::kSourcePairs, CoupledLabel::Tp, CoupledLabel::S);
        const Complex tm =
            spin::coupled_amplitude(state, spin::kSourcePairs, CoupledLabel::Tm, CoupledLabel::S);

        CHECK(std::abs(s - Complex(std::cos(delta), 0.0)) < 1e-12);
        CHECK(std::abs(t0 - Complex(0.0, std::sin(delta))) < 1e-12);
        CHECK(std::abs(tp) < 1e-12);
        CHECK(std::abs(tm) < 1e-12);
    }
}

TEST_CASE("property: phased second-pair singlet behaves the same way") {
    std::mt19937 rng(29);
    for (int trial = 0; trial < 100; ++trial) {
        const double phi3 = oracle::uniform(rng, -kPi, kPi);
        const double phi4 = oracle::uniform(rng, -kPi, kPi);
        const double delta = phi3 - phi4;

        StateVector state = spin::build_singlet_product(spin::kSourcePairs);
        state = spin::apply_local_phase(state, 3, phi3);
        state = spin::apply_local_phase(state, 4, phi4);

        const Complex s =
            spin::coupled_amplitude(state, spin::kSourcePairs, CoupledLabel::S, CoupledLabel::S);
        const Complex t0 =
            spin::coupled_amplitude(state, spin::kSourcePairs, CoupledLabel::S, CoupledLabel::T0);
        CHECK(std::abs(s - Complex(std::cos(delta), 0.0)) < 1e-12);
        CHECK(std::abs(t0 - Complex(0.0, std::sin(delta))) < 1e-12);
    }
}

TEST_CASE("coupled_amplitude: self overlap and meeting-basis regrouping") {
    const StateVector state = spin::build_singlet_product(spin::kSourcePairs);

    CHECK(std::abs(spin::coupled_amplitude(state, spin::kSourcePairs, CoupledLabel::S,
                                           CoupledLabel::S) -
                   Complex(1.0, 0.0)) < 1e-15);

    CHECK(std::abs(spin::coupled_amplitude(state, spin::kMeetingPairs, CoupledLabel::S,
                                           CoupledLabel::S) -
                   Complex(-0.5, 0.0)) < 1e-15);
    CHECK(std::abs(spin::coupled_amplitude(state, spin::kMeetingPairs, CoupledLabel::Tp,
                                           CoupledLabel::Tm) -
                   Complex(-0.5, 0.0)) < 1e-15);
    CHECK(std::abs(spin::coupled_amplitude(state, spin::kMeetingPairs, CoupledLabel::T0,
                                           CoupledLabel::T0) -
                   Complex(0.5, 0.0)) < 1e-15);
}

TEST_CASE("property: coupled_amplitude equals the explicit change-of-basis matrix") {
    std::mt19937 rng(41);
    const int groupings[][4] = {{1, 2, 3, 4}, {1, 4, 2, 3}, {1, 3, 2, 4}, {4, 2, 3, 1}};
    for (const auto& g : groupings) {
        const auto matrix = oracle::change_of_basis(g[0], g[1], g[2], g[3]);
        const PairGrouping grouping{{g[0], g[1]}, {g[2], g[3]}};
        for (int trial = 0; trial < 25; ++trial) {
            const StateVector state = oracle::random_state(rng);
            for (int first = 0; first < 4; ++first) {
                for (int second = 0; second < 4; ++second) {
                    Complex expected = 0.0;
                    for (unsigned label = 0; label < 16; ++label) {
                        expected += matrix[first * 4 + second][label] * state.amp[label];
                    }
                    const Complex got = spin::coupled_amplitude(
                        state, grouping, spin::kCoupledLabels[first],
                        spin::kCoupledLabels[second]);
                    CHECK(std::abs(got - expected) < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("property: coupled product states are orthonormal") {
    for (const auto& g : {spin::kSourcePairs, spin::kMeetingPairs}) {
        const auto matrix = oracle::change_of_basis(g.first_pair[0], g.first_pair[1],
                                                    g.second_pair[0], g.second_pair[1]);
        for (int row = 0; row < 16; ++row) {
            StateVector basis_state;
            for (unsigned label = 0; label < 16; ++label) {
                basis_state.amp[label] = matrix[row][label];
            }
            for (int first = 0; first < 4; ++first) {
                for (int second = 0; second < 4; ++second) {
                    const Complex overlap = spin::coupled_amplitude(
                        basis_state, g, spin::kCoupledLabels[first],
                        spin::kCoupledLabels[second]);
                    const double expected = (first * 4 + second == row) ? 1.0 : 0.0;
                    CHECK(std::abs(overlap - Complex(expected, 0.0)) < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("probability_of: zero-phase meeting outcomes and completeness") {
    const StateVector state = spin::build_singlet_product(spin::kSourcePairs);

    CHECK(spin::probability_of(state, spin::kMeetingPairs, CoupledLabel::T0, CoupledLabel::T0) ==
          doctest::Approx(0.25).epsilon(1e-13));
    CHECK(spin::probability_of(state, spin::kMeetingPairs, CoupledLabel::S, CoupledLabel::T0) ==
          doctest::Approx(0.0));

    std::mt19937 rng(53);
    for (int trial = 0; trial < 50; ++trial) {
        const StateVector random = oracle::random_state(rng);
        double total = 0.0;
        for (CoupledLabel first : spin::kCoupledLabels) {
            for (CoupledLabel second : spin::kCoupledLabels) {
                total += spin::probability_of(random, spin::kMeetingPairs, first, second);
            }
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("probability_of: unnormalized states rejected") {
    StateVector state = spin::build_singlet_product(spin::kSourcePairs);
    for (Complex& a : state.amp) {
        a *= 1.1;
    }
    CHECK_THROWS_AS(
        spin::probability_of(state, spin::kMeetingPairs, CoupledLabel::S, CoupledLabel::S),
        std::invalid_argument);
}

TEST_CASE("state_norm: construction, zero state, unitarity") {
    CHECK(spin::state_norm(spin::build_singlet_product(spin::kSourcePairs)) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(spin::state_norm(StateVector{}) == 0.0);

    std::mt19937 rng(61);
    StateVector state = oracle::random_state(rng);
    const double before = spin::state_norm(state);
    state = spin::apply_local_phase(state, 2, 1.234);
    CHECK(std::abs(spin::state_norm(state) - before) < 1e-12);
}

TEST_CASE("label helpers") {
    CHECK(spin::label_string(label_of("+-+-")) == "+-+-");
    CHECK(spin::label_string(0) == "----");
    CHECK(spin::label_string(15) == "++++");
    CHECK(spin::spin_sign(label_of("+-+-"), 1) == +1);
    CHECK(spin::spin_sign(label_of("+-+-"), 2) == -1);
    CHECK_THROWS_AS(spin::spin_sign(0, 5), std::invalid_argument);
}
