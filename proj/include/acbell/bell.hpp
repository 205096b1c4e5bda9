#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>

#include "acbell/geometry.hpp"
#include "acbell/spin.hpp"

namespace acbell::bell {

using geom::LineCharge;
using geom::MagneticMoment;
using geom::Polyline;
using geom::Vec2;

// Planar four-particle interferometer: singlet pairs (1,2) and (3,4) leave
// sources C and D; particles 1 and 4 meet at station A, particles 2 and 3 at
// station B. Trajectories default to straight segments unless `paths` is set.
struct ExperimentLayout {
    Vec2 source_c;
    Vec2 source_d;
    Vec2 meeting_a;
    Vec2 meeting_b;
    std::array<MagneticMoment, 4> moments{};  // particles 1..4
    LineCharge charge;
    std::optional<std::array<Polyline, 4>> paths;  // C->A, C->B, D->B, D->A
    double exclusion_radius = 1e-3;
};

// Contour order matches `ExperimentLayout::paths` and the particle carrying
// each leg: particle 1 on C->A, 2 on C->B, 3 on D->B, 4 on D->A.
inline constexpr std::array<const char*, 4> kContourNames = {"C->A", "C->B", "D->B", "D->A"};

// The four leg phases and the station phases phi_a = phi1 - phi4,
// phi_b = phi2 - phi3 they combine into.
struct PhaseQuadruple {
    double phi1 = 0.0;
    double phi2 = 0.0;
    double phi3 = 0.0;
    double phi4 = 0.0;
    double phi_a = 0.0;
    double phi_b = 0.0;
};

PhaseQuadruple make_phase_quadruple(double phi1, double phi2, double phi3, double phi4);

// Joint total-spin outcomes in the m = 0 sector at stations (A, B): outcome 1
// is the pair triplet |1,0>, outcome 0 the pair singlet. `residual` is the
// discarded m = +-1 mass.
struct JointDistribution {
    double p11 = 0.0;
    double p00 = 0.0;
    double p10 = 0.0;
    double p01 = 0.0;
    double residual = 0.0;
};

// One correlation evaluation through the full pipeline.
struct CorrelationPoint {
    double phi_a = 0.0;
    double phi_b = 0.0;
    JointDistribution dist;
    double e = 0.0;
};

struct DirectPhaseSettings {
    double phi_a = 0.0;
    double phi_a_prime = 0.0;
    double phi_b = 0.0;
    double phi_b_prime = 0.0;
};

struct GeometricSettings {
    Vec2 meeting_a;
    Vec2 meeting_a_prime;
    Vec2 meeting_b;
    Vec2 meeting_b_prime;
};

// S = E(a,b) - E(a,b') + E(a',b) + E(a',b') with every E from the pipeline.
struct ChshRecord {
    CorrelationPoint ab;
    CorrelationPoint ab_prime;
    CorrelationPoint a_prime_b;
    CorrelationPoint a_prime_b_prime;
    double s = 0.0;
};

struct ScanEntry {
    std::size_t a_index = 0;
    std::size_t a_prime_index = 0;
    std::size_t b_index = 0;
    std::size_t b_prime_index = 0;
    double phi_a = 0.0;
    double phi_a_prime = 0.0;
    double phi_b = 0.0;
    double phi_b_prime = 0.0;
    double e_ab = 0.0;
    double e_abp = 0.0;
    double e_apb = 0.0;
    double e_apbp = 0.0;
    double s = 0.0;
};

struct ScanResult {
    ScanEntry best;
    std::size_t combinations = 0;
};

// The four trajectories, explicit or auto-generated straight segments.
// Explicit paths must start and end on the declared source/meeting points.
std::array<Polyline, 4> contour_paths(const ExperimentLayout& layout);

// Leg phases of the four contours with their particles' moments; throws
// PathViolationError naming the contour when a trajectory breaks the
// exclusion radius.
PhaseQuadruple compute_phases(const ExperimentLayout& layout);

// Singlet product on the source pairs with each particle's leg phase applied.
spin::StateVector assemble_total_state(const PhaseQuadruple& phases);

// Projects onto the coupled basis of the meeting pairs (1,4) and (2,3).
JointDistribution joint_probabilities(const spin::StateVector& state);

// (p11 + p00 - p10 - p01) / (p11 + p00 + p10 + p01).
double correlation(const JointDistribution& dist);

// The same correlation in closed form: cos 2(phi_a - phi_b).
double closed_form_correlation(double phi_a, double phi_b);

// Full pipeline at directly specified station phases.
CorrelationPoint evaluate_direct(double phi_a, double phi_b);

// Station phase realized by a candidate meeting point with the layout's
// sources, moments and charge (straight legs).
double station_a_phase(const ExperimentLayout& layout, Vec2 candidate_a);
double station_b_phase(const ExperimentLayout& layout, Vec2 candidate_b);

ChshRecord chsh_value(const DirectPhaseSettings& settings);
ChshRecord chsh_value(const GeometricSettings& settings, const ExperimentLayout& layout);

// Evaluates every ordered combination (A, A', B, B') with A != A', B != B'
// drawn from the loci and returns the entry maximizing |S| (ties: first in
// lexicographic index order). `on_entry` receives the full table in that
// order when set. With `allow_parallel` the search may use several threads;
// results are identical either way.
ScanResult scan_chsh_over_locations(const ExperimentLayout& layout,
                                    std::span<const Vec2> locus_a,
                                    std::span<const Vec2> locus_b,
                                    const std::function<void(const ScanEntry&)>& on_entry = {},
                                    bool allow_parallel = true);

// Largest |S| over `samples` random deterministic local strategies; never
// exceeds the classical bound 2.
double lhv_reference_bound(long samples, unsigned long long seed);

// Largest |S| over all deterministic local strategies (exhaustive): exactly 2.
double lhv_exhaustive_bound();

}  // namespace acbell::bell
