#pragma once

#include <array>
#include <complex>
#include <string>

namespace acbell::spin {

using Amplitude = std::complex<double>;

inline constexpr int kNumParticles = 4;
inline constexpr int kDimension = 16;

// Dense four-spin state over the product basis. Basis labels are packed into
// a 4-bit index: bit (i-1) holds particle i's projection along the
// line-charge axis, set bit = |+>. Label 0b0101 is therefore |+-+->, reading
// particles 1..4 left to right.
struct StateVector {
    std::array<Amplitude, kDimension> amp{};
};

// Spin projection of `particle` (1..4) in product-basis label `label`: +1 or -1.
int spin_sign(unsigned label, int particle);

// Human-readable label, particle 1 first, e.g. "+-+-".
std::string label_string(unsigned label);

// Two-particle total-spin states of a pair, in the coupling order given by a
// PairGrouping: S = (|+-> - |-+>)/sqrt2, T0 = (|+-> + |-+>)/sqrt2,
// Tp = |++>, Tm = |-->.
enum class CoupledLabel { S, T0, Tp, Tm };

inline constexpr std::array<CoupledLabel, 4> kCoupledLabels = {
    CoupledLabel::S, CoupledLabel::T0, CoupledLabel::Tp, CoupledLabel::Tm};

const char* to_string(CoupledLabel label);

// Partition of the four particles into two coupled pairs. Within each pair
// the tuple order fixes which particle is "first" in |+->.
struct PairGrouping {
    std::array<int, 2> first_pair;
    std::array<int, 2> second_pair;
};

// Pairings used by the experiment: singlets are prepared on (1,2) and (3,4)
// at the sources; total pair spin is measured on (1,4) and (2,3) at the
// meeting stations.
inline constexpr PairGrouping kSourcePairs{{1, 2}, {3, 4}};
inline constexpr PairGrouping kMeetingPairs{{1, 4}, {2, 3}};

bool is_valid(const PairGrouping& grouping);

// Normalized product of singlets on the two pairs of `grouping`.
StateVector build_singlet_product(const PairGrouping& grouping);

// Multiplies every |+>-component of `particle` by e^{+i phi} and every
// |->-component by e^{-i phi}. Norm-preserving.
StateVector apply_local_phase(const StateVector& state, int particle, double phi);

// <first (x) second | state> in the coupled basis of `grouping`.
Amplitude coupled_amplitude(const StateVector& state, const PairGrouping& grouping,
                            CoupledLabel first, CoupledLabel second);

// |coupled_amplitude|^2; requires a normalized state.
double probability_of(const StateVector& state, const PairGrouping& grouping,
                      CoupledLabel first, CoupledLabel second);

double state_norm(const StateVector& state);

}  // namespace acbell::spin
