#include "acbell/report.hpp"

#include <cassert>
#include <cstdio>

namespace acbell::cli {

std::string format_double(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

void JsonWriter::newline_indent() {
    out_ << '\n';
    for (std::size_t i = 0; i < stack_.size(); ++i) {
        out_ << "  ";
    }
}

void JsonWriter::prepare_for_value() {
    if (pending_key_) {
        pending_key_ = false;
        return;
    }
    if (stack_.empty()) {
        return;
    }
    assert(stack_.back().scope == Scope::Array);
    if (stack_.back().has_items) {
        out_ << ',';
    }
    stack_.back().has_items = true;
    newline_indent();
}

void JsonWriter::begin_object() {
    prepare_for_value();
    out_ << '{';
    stack_.push_back({Scope::Object});
}

void JsonWriter::end_object() {
    assert(!stack_.empty() && stack_.back().scope == Scope::Object);
    const bool had_items = stack_.back().has_items;
    stack_.pop_back();
    if (had_items) {
        newline_indent();
    }
    out_ << '}';
}

void JsonWriter::begin_array() {
    prepare_for_value();
    out_ << '[';
    stack_.push_back({Scope::Array});
}

void JsonWriter::end_array() {
    assert(!stack_.empty() && stack_.back().scope == Scope::Array);
    const bool had_items = stack_.back().has_items;
    stack_.pop_back();
    if (had_items) {
        newline_indent();
    }
    out_ << ']';
}

void JsonWriter::key(std::string_view name) {
    assert(!stack_.empty() && stack_.back().scope == Scope::Object && !pending_key_);
    if (stack_.back().has_items) {
        out_ << ',';
    }
    stack_.back().has_items = true;
    newline_indent();
    out_ << '"';
    write_escaped(name);
    out_ << "\": ";
    pending_key_ = true;
}

void JsonWriter::value(double v) {
    prepare_for_value();
    out_ << format_double(v);
}

void JsonWriter::value(long long v) {
    prepare_for_value();
    out_ << v;
}

void JsonWriter::value(std::size_t v) {
    prepare_for_value();
    out_ << v;
}

void JsonWriter::value(int v) {
    prepare_for_value();
    out_ << v;
}

void JsonWriter::value(bool v) {
    prepare_for_value();
    out_ << (v ? "true" : "false");
}

void JsonWriter::value(std::string_view v) {
    prepare_for_value();
    out_ << '"';
    write_escaped(v);
    out_ << '"';
}

void JsonWriter::write_escaped(std::string_view s) {
    for (char c : s) {
        switch (c) {
            case '"': out_ << "\\\""; break;
            case '\\': out_ << "\\\\"; break;
            case '\n': out_ << "\\n"; break;
            case '\t': out_ << "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buffer[8];
                    std::snprintf(buffer, sizeof(buffer), "\\u%04x", c);
                    out_ << buffer;
                } else {
                    out_ << c;
                }
        }
    }
}

void JsonWriter::finish() {
    assert(stack_.empty());
    out_ << '\n';
}

}  // namespace acbell::cli
