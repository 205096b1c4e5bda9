#include "acbell/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "acbell/bell.hpp"
#include "acbell/config.hpp"
#include "acbell/errors.hpp"
#include "acbell/report.hpp"

namespace acbell::cli {

namespace {

using geom::Vec2;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitComputation = 2;

constexpr double kClassicalBound = 2.0;
const double kTsirelsonBound = 2.0 * std::sqrt(2.0);

bool parallel_scans_allowed() {
    const char* flag = std::getenv("AC_BELL_NO_PARALLEL");
    return flag == nullptr || std::string(flag).empty() || std::string(flag) == "0";
}

struct Overrides {
    std::optional<double> exclusion;
    std::optional<int> nodes;
};

ExperimentConfig load_with_overrides(const std::string& path, const Overrides& overrides) {
    ExperimentConfig config = load_config(path);
    if (overrides.exclusion) {
        config.numerics.exclusion_radius = *overrides.exclusion;
        config.layout.exclusion_radius = *overrides.exclusion;
    }
    if (overrides.nodes) {
        config.numerics.quadrature_nodes = *overrides.nodes;
    }
    return config;
}

void write_point(JsonWriter& w, Vec2 p) {
    w.begin_array();
    w.value(p.x);
    w.value(p.y);
    w.end_array();
}

void write_phases(JsonWriter& w, const bell::PhaseQuadruple& q) {
    w.begin_object();
    w.key("phi1");
    w.value(q.phi1);
    w.key("phi2");
    w.value(q.phi2);
    w.key("phi3");
    w.value(q.phi3);
    w.key("phi4");
    w.value(q.phi4);
    w.key("phi_a");
    w.value(q.phi_a);
    w.key("phi_b");
    w.value(q.phi_b);
    w.end_object();
}

void write_distribution(JsonWriter& w, const bell::JointDistribution& d) {
    w.begin_object();
    w.key("p11");
    w.value(d.p11);
    w.key("p00");
    w.value(d.p00);
    w.key("p10");
    w.value(d.p10);
    w.key("p01");
    w.value(d.p01);
    w.key("residual");
    w.value(d.residual);
    w.end_object();
}

void write_correlation_point(JsonWriter& w, const char* name,
                             const bell::CorrelationPoint& point) {
    w.begin_object();
    w.key("setting");
    w.value(name);
    w.key("phi_a");
    w.value(point.phi_a);
    w.key("phi_b");
    w.value(point.phi_b);
    w.key("e");
    w.value(point.e);
    w.key("distribution");
    write_distribution(w, point.dist);
    w.end_object();
}

int run_phases(const ExperimentConfig& config, std::ostream& out) {
    const bell::PhaseQuadruple quad = bell::compute_phases(config.layout);
    const std::array<geom::Polyline, 4> paths = bell::contour_paths(config.layout);

    std::array<double, 4> deltas{};
    const std::array<double, 4> analytic = {quad.phi1, quad.phi2, quad.phi3, quad.phi4};
    for (int i = 0; i < 4; ++i) {
        const double numeric =
            geom::ac_phase_quadrature(paths[i], config.layout.moments[i], config.layout.charge,
                                      config.numerics.quadrature_nodes);
        deltas[i] = std::abs(numeric - analytic[i]);
    }

    JsonWriter w(out);
    w.begin_object();
    w.key("phi1");
    w.value(quad.phi1);
    w.key("phi2");
    w.value(quad.phi2);
    w.key("phi3");
    w.value(quad.phi3);
    w.key("phi4");
    w.value(quad.phi4);
    w.key("phi_a");
    w.value(quad.phi_a);
    w.key("phi_b");
    w.value(quad.phi_b);
    w.key("quadrature_nodes");
    w.value(config.numerics.quadrature_nodes);
    w.key("quadrature_delta");
    w.begin_object();
    w.key("phi1");
    w.value(deltas[0]);
    w.key("phi2");
    w.value(deltas[1]);
    w.key("phi3");
    w.value(deltas[2]);
    w.key("phi4");
    w.value(deltas[3]);
    w.end_object();
    w.end_object();
    w.finish();
    return kExitOk;
}

int run_state(const ExperimentConfig& config, std::ostream& out) {
    const bell::PhaseQuadruple quad = bell::compute_phases(config.layout);
    const spin::StateVector state = bell::assemble_total_state(quad);

    JsonWriter w(out);
    w.begin_object();
    w.key("phases");
    write_phases(w, quad);
    w.key("norm");
    w.value(spin::state_norm(state));
    w.key("product_amplitudes");
    w.begin_array();
    for (unsigned label = 0; label < spin::kDimension; ++label) {
        w.begin_object();
        w.key("label");
        w.value(spin::label_string(label));
        w.key("re");
        w.value(state.amp[label].real());
        w.key("im");
        w.value(state.amp[label].imag());
        w.end_object();
    }
    w.end_array();
    w.key("coupled_grouping");
    w.value("(1,4)x(2,3)");
    w.key("coupled_amplitudes");
    w.begin_array();
    for (spin::CoupledLabel first : spin::kCoupledLabels) {
        for (spin::CoupledLabel second : spin::kCoupledLabels) {
            const spin::Amplitude a =
                spin::coupled_amplitude(state, spin::kMeetingPairs, first, second);
            w.begin_object();
            w.key("first");
            w.value(spin::to_string(first));
            w.key("second");
            w.value(spin::to_string(second));
            w.key("re");
            w.value(a.real());
            w.key("im");
            w.value(a.imag());
            w.end_object();
        }
    }
    w.end_array();
    w.end_object();
    w.finish();
    return kExitOk;
}

int run_correlate(const ExperimentConfig& config, std::ostream& out) {
    const bell::PhaseQuadruple quad = bell::compute_phases(config.layout);
    const bell::JointDistribution dist =
        bell::joint_probabilities(bell::assemble_total_state(quad));
    const double e = bell::correlation(dist);

    JsonWriter w(out);
    w.begin_object();
    w.key("phases");
    write_phases(w, quad);
    w.key("distribution");
    write_distribution(w, dist);
    w.key("correlation");
    w.value(e);
    w.key("closed_form");
    w.value(bell::closed_form_correlation(quad.phi_a, quad.phi_b));
    w.end_object();
    w.finish();
    return kExitOk;
}

void write_chsh_record(JsonWriter& w, const bell::ChshRecord& record) {
    w.key("correlations");
    w.begin_array();
    write_correlation_point(w, "ab", record.ab);
    write_correlation_point(w, "ab_prime", record.ab_prime);
    write_correlation_point(w, "a_prime_b", record.a_prime_b);
    write_correlation_point(w, "a_prime_b_prime", record.a_prime_b_prime);
    w.end_array();
    w.key("s");
    w.value(record.s);
    w.key("classical_bound");
    w.value(kClassicalBound);
    w.key("tsirelson_bound");
    w.value(kTsirelsonBound);
}

int run_chsh_direct(const std::vector<double>& direct, std::ostream& out) {
    const bell::DirectPhaseSettings settings{direct[0], direct[1], direct[2], direct[3]};
    const bell::ChshRecord record = bell::chsh_value(settings);

    JsonWriter w(out);
    w.begin_object();
    w.key("mode");
    w.value("direct");
    w.key("settings");
    w.begin_object();
    w.key("phi_a");
    w.value(settings.phi_a);
    w.key("phi_a_prime");
    w.value(settings.phi_a_prime);
    w.key("phi_b");
    w.value(settings.phi_b);
    w.key("phi_b_prime");
    w.value(settings.phi_b_prime);
    w.end_object();
    write_chsh_record(w, record);
    w.end_object();
    w.finish();
    return kExitOk;
}

int run_chsh_geometric(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
    if (config.layout.paths) {
        err << "chsh: explicit paths are incompatible with moving meeting points; remove the "
               "paths section\n";
        return kExitUsage;
    }
    if (!config.scan || config.scan->locus_a.size() < 2 || config.scan->locus_b.size() < 2) {
        err << "chsh: geometric mode takes (A, A') and (B, B') from the first two points of "
               "scan.locus_a and scan.locus_b; provide a scan section or use --direct\n";
        return kExitUsage;
    }
    const bell::GeometricSettings settings{config.scan->locus_a[0], config.scan->locus_a[1],
                                           config.scan->locus_b[0], config.scan->locus_b[1]};
    const bell::ChshRecord record = bell::chsh_value(settings, config.layout);

    JsonWriter w(out);
    w.begin_object();
    w.key("mode");
    w.value("geometric");
    w.key("settings");
    w.begin_object();
    w.key("meeting_a");
    write_point(w, settings.meeting_a);
    w.key("meeting_a_prime");
    write_point(w, settings.meeting_a_prime);
    w.key("meeting_b");
    write_point(w, settings.meeting_b);
    w.key("meeting_b_prime");
    write_point(w, settings.meeting_b_prime);
    w.key("phi_a");
    w.value(record.ab.phi_a);
    w.key("phi_a_prime");
    w.value(record.a_prime_b.phi_a);
    w.key("phi_b");
    w.value(record.ab.phi_b);
    w.key("phi_b_prime");
    w.value(record.ab_prime.phi_b);
    w.end_object();
    write_chsh_record(w, record);
    w.end_object();
    w.finish();
    return kExitOk;
}

void write_scan_entry_fields(JsonWriter& w, const bell::ScanEntry& entry) {
    w.key("a_index");
    w.value(entry.a_index);
    w.key("a_prime_index");
    w.value(entry.a_prime_index);
    w.key("b_index");
    w.value(entry.b_index);
    w.key("b_prime_index");
    w.value(entry.b_prime_index);
    w.key("phi_a");
    w.value(entry.phi_a);
    w.key("phi_a_prime");
    w.value(entry.phi_a_prime);
    w.key("phi_b");
    w.value(entry.phi_b);
    w.key("phi_b_prime");
    w.value(entry.phi_b_prime);
    w.key("E_ab");
    w.value(entry.e_ab);
    w.key("E_abp");
    w.value(entry.e_abp);
    w.key("E_apb");
    w.value(entry.e_apb);
    w.key("E_apbp");
    w.value(entry.e_apbp);
    w.key("S");
    w.value(entry.s);
}

int run_scan(const ExperimentConfig& config, const std::string& format, std::ostream& out,
             std::ostream& err) {
    if (!config.scan) {
        err << "scan: config has no scan section\n";
        return kExitUsage;
    }
    const bool parallel = parallel_scans_allowed();

    if (format == "csv") {
        out << "a_index,a_prime_index,b_index,b_prime_index,phi_a,phi_a_prime,phi_b,"
               "phi_b_prime,E_ab,E_abp,E_apb,E_apbp,S\n";
        bell::scan_chsh_over_locations(
            config.layout, config.scan->locus_a, config.scan->locus_b,
            [&](const bell::ScanEntry& entry) {
                out << entry.a_index << ',' << entry.a_prime_index << ',' << entry.b_index << ','
                    << entry.b_prime_index << ',' << format_double(entry.phi_a) << ','
                    << format_double(entry.phi_a_prime) << ',' << format_double(entry.phi_b)
                    << ',' << format_double(entry.phi_b_prime) << ','
                    << format_double(entry.e_ab) << ',' << format_double(entry.e_abp) << ','
                    << format_double(entry.e_apb) << ',' << format_double(entry.e_apbp) << ','
                    << format_double(entry.s) << '\n';
            },
            parallel);
        return kExitOk;
    }

    JsonWriter w(out);
    w.begin_object();
    w.key("locus_a_size");
    w.value(config.scan->locus_a.size());
    w.key("locus_b_size");
    w.value(config.scan->locus_b.size());
    w.key("table");
    w.begin_array();
    const bell::ScanResult result = bell::scan_chsh_over_locations(
        config.layout, config.scan->locus_a, config.scan->locus_b,
        [&](const bell::ScanEntry& entry) {
            w.begin_object();
            write_scan_entry_fields(w, entry);
            w.end_object();
        },
        parallel);
    w.end_array();
    w.key("combinations");
    w.value(result.combinations);
    w.key("best");
    w.begin_object();
    write_scan_entry_fields(w, result.best);
    w.end_object();
    w.key("classical_bound");
    w.value(kClassicalBound);
    w.key("tsirelson_bound");
    w.value(kTsirelsonBound);
    w.end_object();
    w.finish();
    return kExitOk;
}

int run_lhv(long samples, unsigned long long seed, std::ostream& out) {
    const double sampled = bell::lhv_reference_bound(samples, seed);
    JsonWriter w(out);
    w.begin_object();
    w.key("samples");
    w.value(static_cast<long long>(samples));
    w.key("seed");
    w.value(static_cast<long long>(seed));
    w.key("max_abs_s_sampled");
    w.value(sampled);
    w.key("max_abs_s_exhaustive");
    w.value(bell::lhv_exhaustive_bound());
    w.key("classical_bound");
    w.value(kClassicalBound);
    w.end_object();
    w.finish();
    return kExitOk;
}

int run_validate(const ExperimentConfig& config, std::ostream& out) {
    const std::array<geom::Polyline, 4> paths = bell::contour_paths(config.layout);
    bool all_ok = true;

    JsonWriter w(out);
    w.begin_object();
    w.key("exclusion_radius");
    w.value(config.numerics.exclusion_radius);
    w.key("contours");
    w.begin_array();
    for (int i = 0; i < 4; ++i) {
        const geom::PathValidation check =
            geom::validate_path(paths[i], config.layout.charge, config.layout.exclusion_radius);
        all_ok = all_ok && check.ok;
        double min_distance = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s + 1 < paths[i].points.size(); ++s) {
            min_distance = std::min(
                min_distance, geom::min_distance_to_segment(paths[i].points[s],
                                                            paths[i].points[s + 1],
                                                            config.layout.charge.puncture));
        }
        w.begin_object();
        w.key("name");
        w.value(bell::kContourNames[i]);
        w.key("ok");
        w.value(check.ok);
        w.key("min_distance");
        w.value(min_distance);
        w.key("violations");
        w.begin_array();
        for (const geom::PathViolation& v : check.violations) {
            w.begin_object();
            w.key("segment");
            w.value(v.segment);
            w.key("distance");
            w.value(v.distance);
            w.end_object();
        }
        w.end_array();
        w.end_object();
    }
    w.end_array();
    w.key("ok");
    w.value(all_ok);
    w.end_object();
    w.finish();
    return all_ok ? kExitOk : kExitComputation;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Four-particle Aharonov-Casher Bell-test simulator"};
    app.name("ac_bell");

    std::string dump_config_path;
    app.add_option("--dump-config", dump_config_path,
                   "Parse CONFIG, echo its canonical form and exit");

    Overrides overrides;
    double exclusion = 0.0;
    auto* exclusion_opt =
        app.add_option("--exclusion", exclusion, "Override numerics.exclusion_radius");
    int nodes = 0;
    auto* nodes_opt =
        app.add_option("--nodes", nodes, "Override numerics.quadrature_nodes (>= 2)");

    std::string config_path;
    std::string format = "json";
    std::vector<double> direct;
    long samples = 10000;
    unsigned long long seed = 1;

    CLI::App* cmd_phases = app.add_subcommand("phases", "Leg and station phases of the layout");
    cmd_phases->add_option("config", config_path, "JSON experiment config")->required();

    CLI::App* cmd_state = app.add_subcommand(
        "state", "Four-spin state: product and coupled amplitudes");
    cmd_state->add_option("config", config_path, "JSON experiment config")->required();

    CLI::App* cmd_correlate = app.add_subcommand(
        "correlate", "Joint m=0 outcome distribution and correlation E");
    cmd_correlate->add_option("config", config_path, "JSON experiment config")->required();

    CLI::App* cmd_chsh = app.add_subcommand("chsh", "CHSH aggregate S for one settings choice");
    cmd_chsh->add_option("config", config_path,
                         "JSON experiment config (geometric mode: A,A',B,B' are the first two "
                         "points of scan.locus_a/scan.locus_b)");
    cmd_chsh->add_option("--direct", direct,
                         "Direct station phases phi_a,phi_a',phi_b,phi_b' (radians)")
        ->delimiter(',');

    CLI::App* cmd_scan = app.add_subcommand(
        "scan", "CHSH over all meeting-point combinations from scan loci");
    cmd_scan->add_option("config", config_path, "JSON experiment config")->required();
    cmd_scan->add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));

    CLI::App* cmd_lhv = app.add_subcommand(
        "lhv", "Classical reference bound from deterministic local strategies");
    cmd_lhv->add_option("--samples", samples, "Number of sampled strategies (>= 1)");
    cmd_lhv->add_option("--seed", seed, "RNG seed for the strategy sampler");

    CLI::App* cmd_validate = app.add_subcommand("validate", "Impenetrability check of all paths");
    cmd_validate->add_option("config", config_path, "JSON experiment config")->required();

    for (CLI::App* sub : {cmd_phases, cmd_state, cmd_correlate, cmd_chsh, cmd_scan, cmd_lhv,
                          cmd_validate}) {
        sub->fallthrough();
    }

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("ac_bell");
    for (const std::string& a : args) {
        argv.push_back(a.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    if (*exclusion_opt) {
        if (!std::isfinite(exclusion) || exclusion < 0.0) {
            err << "error: --exclusion must be finite and non-negative\n";
            return kExitUsage;
        }
        overrides.exclusion = exclusion;
    }
    if (*nodes_opt) {
        if (nodes < 2) {
            err << "error: --nodes must be >= 2\n";
            return kExitUsage;
        }
        overrides.nodes = nodes;
    }

    try {
        if (!dump_config_path.empty()) {
            out << dump_config(load_with_overrides(dump_config_path, overrides));
            return kExitOk;
        }

        if (cmd_lhv->parsed()) {
            if (samples < 1) {
                err << "error: --samples must be >= 1\n";
                return kExitUsage;
            }
            return run_lhv(samples, seed, out);
        }

        if (cmd_chsh->parsed()) {
            const bool has_direct = !direct.empty();
            const bool has_config = !config_path.empty();
            if (has_direct == has_config) {
                err << "chsh: give exactly one of a config file (geometric mode) or --direct "
                       "phases\n";
                return kExitUsage;
            }
            if (has_direct) {
                if (direct.size() != 4) {
                    err << "chsh: --direct needs exactly 4 comma-separated phases\n";
                    return kExitUsage;
                }
                for (double v : direct) {
                    if (!std::isfinite(v)) {
                        err << "chsh: --direct phases must be finite\n";
                        return kExitUsage;
                    }
                }
                return run_chsh_direct(direct, out);
            }
            return run_chsh_geometric(load_with_overrides(config_path, overrides), out, err);
        }

        if (cmd_phases->parsed()) {
            return run_phases(load_with_overrides(config_path, overrides), out);
        }
        if (cmd_state->parsed()) {
            return run_state(load_with_overrides(config_path, overrides), out);
        }
        if (cmd_correlate->parsed()) {
            return run_correlate(load_with_overrides(config_path, overrides), out);
        }
        if (cmd_scan->parsed()) {
            const ExperimentConfig config = load_with_overrides(config_path, overrides);
            if (config.layout.paths) {
                err << "scan: explicit paths are incompatible with moving meeting points; "
                       "remove the paths section\n";
                return kExitUsage;
            }
            return run_scan(config, format, out, err);
        }
        if (cmd_validate->parsed()) {
            return run_validate(load_with_overrides(config_path, overrides), out);
        }
    } catch (const ConfigError& e) {
        for (const std::string& m : e.messages()) {
            err << "config error: " << m << '\n';
        }
        return kExitUsage;
    } catch (const PathViolationError& e) {
        err << "path violation: " << e.what() << '\n';
        return kExitComputation;
    } catch (const SingularityError& e) {
        err << "singularity: " << e.what() << '\n';
        return kExitComputation;
    } catch (const AccuracyError& e) {
        err << "accuracy: " << e.what() << '\n';
        return kExitComputation;
    } catch (const std::invalid_argument& e) {
        err << "computation error: " << e.what() << '\n';
        return kExitComputation;
    }

    err << "error: no command given\n\n" << app.help();
    return kExitUsage;
}

}  // namespace acbell::cli
