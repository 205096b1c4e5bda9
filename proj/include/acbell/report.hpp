#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace acbell::cli {

// Doubles in reports are printed with 17 significant digits so they
// round-trip losslessly and byte-identically.
std::string format_double(double v);

// Minimal streaming JSON emitter with a fixed, caller-controlled field order
// and deterministic number formatting. Output is pretty-printed with 2-space
// indentation.
class JsonWriter {
public:
    explicit JsonWriter(std::ostream& out) : out_(out) {}

    JsonWriter(const JsonWriter&) = delete;
    JsonWriter& operator=(const JsonWriter&) = delete;

    void begin_object();
    void end_object();
    void begin_array();
    void end_array();
    void key(std::string_view name);
    void value(double v);
    void value(long long v);
    void value(std::size_t v);
    void value(int v);
    void value(bool v);
    void value(std::string_view v);
    void value(const char* v) { value(std::string_view(v)); }

    // Finishes the document with a trailing newline.
    void finish();

private:
    enum class Scope { Object, Array };
    struct Level {
        Scope scope;
        bool has_items = false;
    };

    void prepare_for_value();
    void newline_indent();
    void write_escaped(std::string_view s);

    std::ostream& out_;
    std::vector<Level> stack_;
    bool pending_key_ = false;
};

}  // namespace acbell::cli
