#include "acbell/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "acbell/report.hpp"

namespace acbell::cli {

namespace {

using geom::Polyline;
using geom::Vec2;
using nlohmann::json;

const char* const kTopLevelKeys[] = {"charge", "sources", "meetings", "moments",
                                     "paths",  "scan",    "numerics"};

std::string joined(const std::vector<std::string>& messages) {
    std::string all;
    for (const std::string& m : messages) {
        if (!all.empty()) all += '\n';
        all += m;
    }
    return all;
}

// Walks the parsed document, collecting every schema violation instead of
// stopping at the first one.
class Reader {
public:
    std::vector<std::string> errors;

    const json* member(const json& obj, const std::string& path, const char* key,
                       bool required) {
        if (!obj.is_object()) {
            fail(path, "expected an object");
            return nullptr;
        }
        const auto it = obj.find(key);
        if (it == obj.end()) {
            if (required) fail(path.empty() ? key : path + "." + key, "missing required key");
            return nullptr;
        }
        return &*it;
    }

    double number(const json& j, const std::string& path) {
        if (!j.is_number()) {
            fail(path, "expected a number");
            return 0.0;
        }
        const double v = j.get<double>();
        if (!std::isfinite(v)) {
            fail(path, "must be finite");
            return 0.0;
        }
        return v;
    }

    int sign(const json& j, const std::string& path) {
        if (!j.is_number_integer()) {
            fail(path, "expected +1 or -1");
            return 1;
        }
        const int v = j.get<int>();
        if (v != 1 && v != -1) {
            fail(path, "expected +1 or -1");
            return 1;
        }
        return v;
    }

    int positive_int(const json& j, const std::string& path, int minimum) {
        if (!j.is_number_integer()) {
            fail(path, "expected an integer");
            return minimum;
        }
        const long long v = j.get<long long>();
        if (v < minimum) {
            fail(path, "must be >= " + std::to_string(minimum));
            return minimum;
        }
        return static_cast<int>(v);
    }

    Vec2 point(const json& j, const std::string& path) {
        if (!j.is_array() || j.size() != 2) {
            fail(path, "expected a point as [x, y]");
            return {};
        }
        return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
    }

    std::vector<Vec2> point_list(const json& j, const std::string& path, std::size_t min_size) {
        std::vector<Vec2> points;
        if (!j.is_array()) {
            fail(path, "expected an array of points");
            return points;
        }
        if (j.size() < min_size) {
            fail(path, "needs at least " + std::to_string(min_size) + " points");
        }
        points.reserve(j.size());
        for (std::size_t i = 0; i < j.size(); ++i) {
            points.push_back(point(j[i], path + "[" + std::to_string(i) + "]"));
        }
        return points;
    }

    void fail(const std::string& path, const std::string& reason) {
        errors.push_back(path + ": " + reason);
    }
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> messages)
    : std::runtime_error(joined(messages)), messages_(std::move(messages)) {}

ExperimentConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("config: ") + e.what()});
    }

    Reader r;
    ExperimentConfig config;

    if (!root.is_object()) {
        throw ConfigError({"config: top level must be an object"});
    }
    for (const auto& item : root.items()) {
        bool known = false;
        for (const char* key : kTopLevelKeys) {
            if (item.key() == key) known = true;
        }
        if (!known) r.fail(item.key(), "unknown section");
    }

    if (const json* charge = r.member(root, "", "charge", true)) {
        if (const json* lambda = r.member(*charge, "charge", "lambda", true)) {
            config.layout.charge.lambda = r.number(*lambda, "charge.lambda");
        }
        if (const json* puncture = r.member(*charge, "charge", "puncture", true)) {
            config.layout.charge.puncture = r.point(*puncture, "charge.puncture");
        }
        if (const json* axis = r.member(*charge, "charge", "axis_sign", false)) {
            config.layout.charge.axis_sign = r.sign(*axis, "charge.axis_sign");
        }
    }

    if (const json* sources = r.member(root, "", "sources", true)) {
        if (const json* c = r.member(*sources, "sources", "c", true)) {
            config.layout.source_c = r.point(*c, "sources.c");
        }
        if (const json* d = r.member(*sources, "sources", "d", true)) {
            config.layout.source_d = r.point(*d, "sources.d");
        }
    }

    if (const json* meetings = r.member(root, "", "meetings", true)) {
        if (const json* a = r.member(*meetings, "meetings", "a", true)) {
            config.layout.meeting_a = r.point(*a, "meetings.a");
        }
        if (const json* b = r.member(*meetings, "meetings", "b", true)) {
            config.layout.meeting_b = r.point(*b, "meetings.b");
        }
    }

    if (const json* moments = r.member(root, "", "moments", true)) {
        if (!moments->is_array() || moments->size() != 4) {
            r.fail("moments", "expected exactly 4 entries (particles 1..4)");
        } else {
            for (std::size_t i = 0; i < 4; ++i) {
                const std::string path = "moments[" + std::to_string(i) + "]";
                const json& m = (*moments)[i];
                if (const json* mag = r.member(m, path, "magnitude", true)) {
                    const double v = r.number(*mag, path + ".magnitude");
                    if (v < 0.0) {
                        r.fail(path + ".magnitude", "must be non-negative");
                    }
                    config.layout.moments[i].magnitude = v;
                }
                if (const json* s = r.member(m, path, "sign", true)) {
                    config.layout.moments[i].sign = r.sign(*s, path + ".sign");
                }
            }
        }
    }

    if (const json* paths = r.member(root, "", "paths", false)) {
        static const char* const kPathKeys[] = {"c_to_a", "c_to_b", "d_to_b", "d_to_a"};
        std::array<Polyline, 4> contours;
        for (int i = 0; i < 4; ++i) {
            if (const json* p = r.member(*paths, "paths", kPathKeys[i], true)) {
                contours[i].points = r.point_list(*p, std::string("paths.") + kPathKeys[i], 2);
            }
        }
        config.layout.paths = std::move(contours);
    }

    if (const json* scan = r.member(root, "", "scan", false)) {
        ScanConfig sc;
        if (const json* la = r.member(*scan, "scan", "locus_a", true)) {
            sc.locus_a = r.point_list(*la, "scan.locus_a", 2);
        }
        if (const json* lb = r.member(*scan, "scan", "locus_b", true)) {
            sc.locus_b = r.point_list(*lb, "scan.locus_b", 2);
        }
        config.scan = std::move(sc);
    }

    if (const json* numerics = r.member(root, "", "numerics", false)) {
        if (const json* excl = r.member(*numerics, "numerics", "exclusion_radius", false)) {
            const double v = r.number(*excl, "numerics.exclusion_radius");
            if (v < 0.0) {
                r.fail("numerics.exclusion_radius", "must be non-negative");
            } else {
                config.numerics.exclusion_radius = v;
            }
        }
        if (const json* nodes = r.member(*numerics, "numerics", "quadrature_nodes", false)) {
            config.numerics.quadrature_nodes =
                r.positive_int(*nodes, "numerics.quadrature_nodes", 2);
        }
    }

    if (!r.errors.empty()) {
        throw ConfigError(std::move(r.errors));
    }
    config.layout.exclusion_radius = config.numerics.exclusion_radius;
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError({"config: cannot read file '" + path + "'"});
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string dump_config(const ExperimentConfig& config) {
    std::ostringstream out;
    JsonWriter w(out);

    const auto point = [&](Vec2 p) {
        w.begin_array();
        w.value(p.x);
        w.value(p.y);
        w.end_array();
    };

    w.begin_object();

    w.key("charge");
    w.begin_object();
    w.key("lambda");
    w.value(config.layout.charge.lambda);
    w.key("puncture");
    point(config.layout.charge.puncture);
    w.key("axis_sign");
    w.value(config.layout.charge.axis_sign);
    w.end_object();

    w.key("sources");
    w.begin_object();
    w.key("c");
    point(config.layout.source_c);
    w.key("d");
    point(config.layout.source_d);
    w.end_object();

    w.key("meetings");
    w.begin_object();
    w.key("a");
    point(config.layout.meeting_a);
    w.key("b");
    point(config.layout.meeting_b);
    w.end_object();

    w.key("moments");
    w.begin_array();
    for (const geom::MagneticMoment& m : config.layout.moments) {
        w.begin_object();
        w.key("magnitude");
        w.value(m.magnitude);
        w.key("sign");
        w.value(m.sign);
        w.end_object();
    }
    w.end_array();

    if (config.layout.paths) {
        static const char* const kPathKeys[] = {"c_to_a", "c_to_b", "d_to_b", "d_to_a"};
        w.key("paths");
        w.begin_object();
        for (int i = 0; i < 4; ++i) {
            w.key(kPathKeys[i]);
            w.begin_array();
            for (Vec2 p : (*config.layout.paths)[i].points) {
                point(p);
            }
            w.end_array();
        }
        w.end_object();
    }

    if (config.scan) {
        w.key("scan");
        w.begin_object();
        w.key("locus_a");
        w.begin_array();
        for (Vec2 p : config.scan->locus_a) point(p);
        w.end_array();
        w.key("locus_b");
        w.begin_array();
        for (Vec2 p : config.scan->locus_b) point(p);
        w.end_array();
        w.end_object();
    }

    w.key("numerics");
    w.begin_object();
    w.key("exclusion_radius");
    w.value(config.numerics.exclusion_radius);
    w.key("quadrature_nodes");
    w.value(config.numerics.quadrature_nodes);
    w.end_object();

    w.end_object();
    w.finish();
    return out.str();
}

}  // namespace acbell::cli
