#include "acbell/bell.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "acbell/errors.hpp"

namespace acbell::bell {

namespace {

using spin::CoupledLabel;
using spin::StateVector;

constexpr double kEndpointTolerance = 1e-12;

void check_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string(name) + " must be finite");
    }
}

std::string point_str(Vec2 p) {
    std::ostringstream os;
    os << "(" << p.x << ", " << p.y << ")";
    return os.str();
}

void check_endpoints(const Polyline& path, Vec2 start, Vec2 end, const char* contour) {
    if (path.points.size() < 2 || geom::norm(path.points.front() - start) > kEndpointTolerance ||
        geom::norm(path.points.back() - end) > kEndpointTolerance) {
        throw PathViolationError(std::string("contour ") + contour +
                                 ": explicit path does not connect " + point_str(start) +
                                 " to " + point_str(end));
    }
}

void check_exclusion(const Polyline& path, const ExperimentLayout& layout,
                     const std::string& contour) {
    const geom::PathValidation check =
        geom::validate_path(path, layout.charge, layout.exclusion_radius);
    if (!check.ok) {
        const geom::PathViolation& v = check.violations.front();
        std::ostringstream os;
        os << "contour " << contour << ": segment " << v.segment << " at distance "
           << v.distance << " within exclusion radius " << layout.exclusion_radius;
        throw PathViolationError(os.str());
    }
}

// Phases of the two legs ending at one station; used by geometric CHSH
// settings and scans, where only the meeting point moves.
struct LegPhases {
    double from_c = 0.0;  // particle 1 (station A) or 2 (station B)
    double from_d = 0.0;  // particle 4 (station A) or 3 (station B)
};

LegPhases meeting_leg_phases(const ExperimentLayout& layout, Vec2 meeting, bool station_a,
                             const std::string& variant) {
    const Polyline from_c{{layout.source_c, meeting}};
    const Polyline from_d{{layout.source_d, meeting}};
    const std::string base = station_a ? "C->A" : "C->B";
    const std::string other = station_a ? "D->A" : "D->B";
    check_exclusion(from_c, layout, base + " (" + variant + " at " + point_str(meeting) + ")");
    check_exclusion(from_d, layout, other + " (" + variant + " at " + point_str(meeting) + ")");
    const MagneticMoment& mc = station_a ? layout.moments[0] : layout.moments[1];
    const MagneticMoment& md = station_a ? layout.moments[3] : layout.moments[2];
    return {geom::ac_phase_analytic(from_c, mc, layout.charge),
            geom::ac_phase_analytic(from_d, md, layout.charge)};
}

CorrelationPoint evaluate_quadruple(const PhaseQuadruple& phases) {
    const JointDistribution dist = joint_probabilities(assemble_total_state(phases));
    return {phases.phi_a, phases.phi_b, dist, correlation(dist)};
}

ChshRecord make_record(const CorrelationPoint& ab, const CorrelationPoint& ab_prime,
                       const CorrelationPoint& a_prime_b,
                       const CorrelationPoint& a_prime_b_prime) {
    ChshRecord record{ab, ab_prime, a_prime_b, a_prime_b_prime, 0.0};
    record.s = ab.e - ab_prime.e + a_prime_b.e + a_prime_b_prime.e;
    return record;
}

}  // namespace

PhaseQuadruple make_phase_quadruple(double phi1, double phi2, double phi3, double phi4) {
    check_finite(phi1, "phi1");
    check_finite(phi2, "phi2");
    check_finite(phi3, "phi3");
    check_finite(phi4, "phi4");
    return {phi1, phi2, phi3, phi4, phi1 - phi4, phi2 - phi3};
}

std::array<Polyline, 4> contour_paths(const ExperimentLayout& layout) {
    const std::array<Vec2, 4> starts = {layout.source_c, layout.source_c, layout.source_d,
                                        layout.source_d};
    const std::array<Vec2, 4> ends = {layout.meeting_a, layout.meeting_b, layout.meeting_b,
                                      layout.meeting_a};
    if (layout.paths) {
        for (int i = 0; i < 4; ++i) {
            check_endpoints((*layout.paths)[i], starts[i], ends[i], kContourNames[i]);
        }
        return *layout.paths;
    }
    std::array<Polyline, 4> straight;
    for (int i = 0; i < 4; ++i) {
        straight[i].points = {starts[i], ends[i]};
    }
    return straight;
}

PhaseQuadruple compute_phases(const ExperimentLayout& layout) {
    const std::array<Polyline, 4> paths = contour_paths(layout);
    std::array<double, 4> phi{};
    for (int i = 0; i < 4; ++i) {
        check_exclusion(paths[i], layout, kContourNames[i]);
        phi[i] = geom::ac_phase_analytic(paths[i], layout.moments[i], layout.charge);
    }
    return make_phase_quadruple(phi[0], phi[1], phi[2], phi[3]);
}

spin::StateVector assemble_total_state(const PhaseQuadruple& phases) {
    StateVector state = spin::build_singlet_product(spin::kSourcePairs);
    state = spin::apply_local_phase(state, 1, phases.phi1);
    state = spin::apply_local_phase(state, 2, phases.phi2);
    state = spin::apply_local_phase(state, 3, phases.phi3);
    state = spin::apply_local_phase(state, 4, phases.phi4);
    return state;
}

JointDistribution joint_probabilities(const spin::StateVector& state) {
    JointDistribution dist;
    double others = 0.0;
    for (CoupledLabel first : spin::kCoupledLabels) {
        for (CoupledLabel second : spin::kCoupledLabels) {
            const double p = spin::probability_of(state, spin::kMeetingPairs, first, second);
            if (first == CoupledLabel::T0 && second == CoupledLabel::T0) {
                dist.p11 = p;
            } else if (first == CoupledLabel::S && second == CoupledLabel::S) {
                dist.p00 = p;
            } else if (first == CoupledLabel::T0 && second == CoupledLabel::S) {
                dist.p10 = p;
            } else if (first == CoupledLabel::S && second == CoupledLabel::T0) {
                dist.p01 = p;
            } else {
                others += p;
            }
        }
    }
    dist.residual = others;
    return dist;
}

double correlation(const JointDistribution& dist) {
    const double m0 = dist.p11 + dist.p00 + dist.p10 + dist.p01;
    if (!(m0 > 0.0)) {
        throw std::invalid_argument("correlation undefined: no m = 0 probability mass");
    }
    return (dist.p11 + dist.p00 - dist.p10 - dist.p01) / m0;
}

double closed_form_correlation(double phi_a, double phi_b) {
    check_finite(phi_a, "phi_a");
    check_finite(phi_b, "phi_b");
    return std::cos(2.0 * (phi_a - phi_b));
}

CorrelationPoint evaluate_direct(double phi_a, double phi_b) {
    return evaluate_quadruple(make_phase_quadruple(phi_a, phi_b, 0.0, 0.0));
}

double station_a_phase(const ExperimentLayout& layout, Vec2 candidate_a) {
    const LegPhases legs = meeting_leg_phases(layout, candidate_a, true, "candidate A");
    return legs.from_c - legs.from_d;
}

double station_b_phase(const ExperimentLayout& layout, Vec2 candidate_b) {
    const LegPhases legs = meeting_leg_phases(layout, candidate_b, false, "candidate B");
    return legs.from_c - legs.from_d;
}

ChshRecord chsh_value(const DirectPhaseSettings& settings) {
    return make_record(evaluate_direct(settings.phi_a, settings.phi_b),
                       evaluate_direct(settings.phi_a, settings.phi_b_prime),
                       evaluate_direct(settings.phi_a_prime, settings.phi_b),
                       evaluate_direct(settings.phi_a_prime, settings.phi_b_prime));
}

ChshRecord chsh_value(const GeometricSettings& settings, const ExperimentLayout& layout) {
    const LegPhases a = meeting_leg_phases(layout, settings.meeting_a, true, "meeting A");
    const LegPhases ap = meeting_leg_phases(layout, settings.meeting_a_prime, true, "meeting A'");
    const LegPhases b = meeting_leg_phases(layout, settings.meeting_b, false, "meeting B");
    const LegPhases bp = meeting_leg_phases(layout, settings.meeting_b_prime, false, "meeting B'");
    const auto e = [](const LegPhases& sa, const LegPhases& sb) {
        return evaluate_quadruple(
            make_phase_quadruple(sa.from_c, sb.from_c, sb.from_d, sa.from_d));
    };
    return make_record(e(a, b), e(a, bp), e(ap, b), e(ap, bp));
}

ScanResult scan_chsh_over_locations(const ExperimentLayout& layout,
                                    std::span<const Vec2> locus_a,
                                    std::span<const Vec2> locus_b,
                                    const std::function<void(const ScanEntry&)>& on_entry,
                                    bool allow_parallel) {
    const std::size_t na = locus_a.size();
    const std::size_t nb = locus_b.size();
    if (na < 2 || nb < 2) {
        throw std::invalid_argument("scan needs at least 2 candidate points per locus");
    }

    std::vector<LegPhases> legs_a(na);
    std::vector<LegPhases> legs_b(nb);
    for (std::size_t i = 0; i < na; ++i) {
        legs_a[i] = meeting_leg_phases(layout, locus_a[i], true,
                                       "locus_a[" + std::to_string(i) + "]");
    }
    for (std::size_t j = 0; j < nb; ++j) {
        legs_b[j] = meeting_leg_phases(layout, locus_b[j], false,
                                       "locus_b[" + std::to_string(j) + "]");
    }

    // Every E comes from the full pipeline, but it only depends on one
    // (A candidate, B candidate) pair, so the na x nb matrix is computed once.
    std::vector<double> e(na * nb);
    std::vector<double> phi_a(na);
    std::vector<double> phi_b(nb);
    for (std::size_t i = 0; i < na; ++i) phi_a[i] = legs_a[i].from_c - legs_a[i].from_d;
    for (std::size_t j = 0; j < nb; ++j) phi_b[j] = legs_b[j].from_c - legs_b[j].from_d;
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < nb; ++j) {
            e[i * nb + j] = evaluate_quadruple(make_phase_quadruple(
                                                   legs_a[i].from_c, legs_b[j].from_c,
                                                   legs_b[j].from_d, legs_a[i].from_d))
                                .e;
        }
    }

    const auto make_entry = [&](std::size_t i, std::size_t ip, std::size_t j, std::size_t jp) {
        ScanEntry entry{i, ip, j, jp, phi_a[i], phi_a[ip], phi_b[j], phi_b[jp],
                        e[i * nb + j], e[i * nb + jp], e[ip * nb + j], e[ip * nb + jp], 0.0};
        entry.s = entry.e_ab - entry.e_abp + entry.e_apb + entry.e_apbp;
        return entry;
    };

    // Best-|S| search over a contiguous range of `a_index`, in lexicographic
    // (a, a', b, b') order so the first maximum wins ties.
    const auto search_range = [&](std::size_t i_begin, std::size_t i_end) {
        ScanEntry best;
        double best_abs = -1.0;
        for (std::size_t i = i_begin; i < i_end; ++i) {
            for (std::size_t ip = 0; ip < na; ++ip) {
                if (ip == i) continue;
                for (std::size_t j = 0; j < nb; ++j) {
                    for (std::size_t jp = 0; jp < nb; ++jp) {
                        if (jp == j) continue;
                        const double s = e[i * nb + j] - e[i * nb + jp] + e[ip * nb + j] +
                                         e[ip * nb + jp];
                        if (std::abs(s) > best_abs) {
                            best_abs = std::abs(s);
                            best = make_entry(i, ip, j, jp);
                        }
                    }
                }
            }
        }
        return best;
    };

    const std::size_t combinations = na * (na - 1) * nb * (nb - 1);
    ScanResult result;
    result.combinations = combinations;

    if (on_entry) {
        // Streaming the table fixes the evaluation order, so run sequentially.
        ScanEntry best;
        double best_abs = -1.0;
        for (std::size_t i = 0; i < na; ++i) {
            for (std::size_t ip = 0; ip < na; ++ip) {
                if (ip == i) continue;
                for (std::size_t j = 0; j < nb; ++j) {
                    for (std::size_t jp = 0; jp < nb; ++jp) {
                        if (jp == j) continue;
                        const ScanEntry entry = make_entry(i, ip, j, jp);
                        on_entry(entry);
                        if (std::abs(entry.s) > best_abs) {
                            best_abs = std::abs(entry.s);
                            best = entry;
                        }
                    }
                }
            }
        }
        result.best = best;
        return result;
    }

    const unsigned hw = std::thread::hardware_concurrency();
    const bool parallel = allow_parallel && hw > 1 && combinations >= (1u << 16) && na >= 4;
    if (!parallel) {
        result.best = search_range(0, na);
        return result;
    }

    // Chunk by a_index; merging per-chunk winners in chunk order preserves the
    // lexicographic tie-break.
    const std::size_t chunks = std::min<std::size_t>(hw, na);
    std::vector<std::future<ScanEntry>> futures;
    futures.reserve(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
        const std::size_t begin = na * c / chunks;
        const std::size_t end = na * (c + 1) / chunks;
        futures.push_back(std::async(std::launch::async, search_range, begin, end));
    }
    ScanEntry best;
    double best_abs = -1.0;
    for (auto& f : futures) {
        const ScanEntry candidate = f.get();
        if (std::abs(candidate.s) > best_abs) {
            best_abs = std::abs(candidate.s);
            best = candidate;
        }
    }
    result.best = best;
    return result;
}

double lhv_reference_bound(long samples, unsigned long long seed) {
    if (samples < 1) {
        throw std::invalid_argument("need at least one strategy sample");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coin(0, 1);
    double best = 0.0;
    for (long n = 0; n < samples; ++n) {
        const int a = coin(rng) * 2 - 1;
        const int ap = coin(rng) * 2 - 1;
        const int b = coin(rng) * 2 - 1;
        const int bp = coin(rng) * 2 - 1;
        const double s = static_cast<double>(a * b - a * bp + ap * b + ap * bp);
        best = std::max(best, std::abs(s));
    }
    return best;
}

double lhv_exhaustive_bound() {
    // A deterministic local strategy fixes one outcome per setting per side:
    // (A(a), A(a'), B(b), B(b')) ranges over {-1,+1}^4.
    double best = 0.0;
    for (int mask = 0; mask < 16; ++mask) {
        const int a = (mask & 1) ? +1 : -1;
        const int ap = (mask & 2) ? +1 : -1;
        const int b = (mask & 4) ? +1 : -1;
        const int bp = (mask & 8) ? +1 : -1;
        const double s = static_cast<double>(a * b - a * bp + ap * b + ap * bp);
        best = std::max(best, std::abs(s));
    }
    return best;
}

}  // namespace acbell::bell
