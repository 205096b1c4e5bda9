#include "acbell/spin.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace acbell::spin {

namespace {

constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;

// Norm^2 may deviate from 1 by at most this before probabilities are refused.
constexpr double kNormTolerance = 1e-9;

unsigned particle_bit(int particle) { return 1u << (particle - 1); }

void check_particle(int particle) {
    if (particle < 1 || particle > kNumParticles) {
        throw std::invalid_argument("particle index must be in 1..4");
    }
}

void check_grouping(const PairGrouping& grouping) {
    if (!is_valid(grouping)) {
        throw std::invalid_argument("pair grouping must use each of particles 1..4 exactly once");
    }
}

// Coefficient of the product configuration (sa, sb) in the coupled state.
double pair_coefficient(CoupledLabel label, int sa, int sb) {
    switch (label) {
        case CoupledLabel::S:
            if (sa > 0 && sb < 0) return kInvSqrt2;
            if (sa < 0 && sb > 0) return -kInvSqrt2;
            return 0.0;
        case CoupledLabel::T0:
            return sa != sb ? kInvSqrt2 : 0.0;
        case CoupledLabel::Tp:
            return (sa > 0 && sb > 0) ? 1.0 : 0.0;
        case CoupledLabel::Tm:
            return (sa < 0 && sb < 0) ? 1.0 : 0.0;
    }
    return 0.0;
}

}  // namespace

int spin_sign(unsigned label, int particle) {
    check_particle(particle);
    return (label & particle_bit(particle)) != 0 ? +1 : -1;
}

std::string label_string(unsigned label) {
    std::string out;
    for (int particle = 1; particle <= kNumParticles; ++particle) {
        out += (label & particle_bit(particle)) != 0 ? '+' : '-';
    }
    return out;
}

const char* to_string(CoupledLabel label) {
    switch (label) {
        case CoupledLabel::S: return "S";
        case CoupledLabel::T0: return "T0";
        case CoupledLabel::Tp: return "Tp";
        case CoupledLabel::Tm: return "Tm";
    }
    return "?";
}

bool is_valid(const PairGrouping& grouping) {
    unsigned seen = 0;
    for (int p : {grouping.first_pair[0], grouping.first_pair[1], grouping.second_pair[0],
                  grouping.second_pair[1]}) {
        if (p < 1 || p > kNumParticles) return false;
        seen |= particle_bit(p);
    }
    return seen == 0xFu;
}

StateVector build_singlet_product(const PairGrouping& grouping) {
    check_grouping(grouping);
    StateVector state;
    // Expand (|+-> - |-+>)/sqrt2 on each pair; the product leaves +-1/2 on
    // four labels. i/j = 0 puts |+> on the pair's first particle.
    for (int i : {0, 1}) {
        for (int j : {0, 1}) {
            const unsigned label = particle_bit(grouping.first_pair[i]) |
                                   particle_bit(grouping.second_pair[j]);
            state.amp[label] = (i == j) ? 0.5 : -0.5;
        }
    }
    return state;
}

StateVector apply_local_phase(const StateVector& state, int particle, double phi) {
    check_particle(particle);
    if (!std::isfinite(phi)) {
        throw std::invalid_argument("phase must be finite");
    }
    const Amplitude plus = std::polar(1.0, phi);
    const Amplitude minus = std::conj(plus);
    StateVector out;
    for (unsigned label = 0; label < kDimension; ++label) {
        out.amp[label] =
            state.amp[label] * ((label & particle_bit(particle)) != 0 ? plus : minus);
    }
    return out;
}

Amplitude coupled_amplitude(const StateVector& state, const PairGrouping& grouping,
                            CoupledLabel first, CoupledLabel second) {
    check_grouping(grouping);
    Amplitude overlap = 0.0;
    for (unsigned label = 0; label < kDimension; ++label) {
        const double c1 = pair_coefficient(first, spin_sign(label, grouping.first_pair[0]),
                                           spin_sign(label, grouping.first_pair[1]));
        if (c1 == 0.0) continue;
        const double c2 = pair_coefficient(second, spin_sign(label, grouping.second_pair[0]),
                                           spin_sign(label, grouping.second_pair[1]));
        if (c2 == 0.0) continue;
        overlap += c1 * c2 * state.amp[label];
    }
    return overlap;
}

double probability_of(const StateVector& state, const PairGrouping& grouping,
                      CoupledLabel first, CoupledLabel second) {
    double norm2 = 0.0;
    for (const Amplitude& a : state.amp) {
        norm2 += std::norm(a);
    }
    if (std::abs(norm2 - 1.0) > kNormTolerance) {
        throw std::invalid_argument("state is not normalized");
    }
    return std::norm(coupled_amplitude(state, grouping, first, second));
}

double state_norm(const StateVector& state) {
    double norm2 = 0.0;
    for (const Amplitude& a : state.amp) {
        norm2 += std::norm(a);
    }
    return std::sqrt(norm2);
}

}  // namespace acbell::spin
