#include "germ/report.hpp"

#include <cmath>
#include <cstdio>

namespace germ {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string json_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

void JsonWriter::comma_if_needed() {
    if (pending_key_) {
        pending_key_ = false;
        return;
    }
    if (!need_comma_.empty()) {
        if (need_comma_.back()) out_ += ", ";
        need_comma_.back() = true;
    }
}

JsonWriter& JsonWriter::begin_object() {
    comma_if_needed();
    out_ += '{';
    need_comma_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    out_ += '}';
    need_comma_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    comma_if_needed();
    out_ += '[';
    need_comma_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    out_ += ']';
    need_comma_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::key(std::string_view name) {
    comma_if_needed();
    out_ += '"';
    out_ += json_escape(name);
    out_ += "\": ";
    pending_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(double v) {
    comma_if_needed();
    if (std::isfinite(v)) {
        out_ += format_double(v);
    } else {
        // JSON has no literal for these; the schema documents null here.
        out_ += "null";
    }
    return *this;
}

JsonWriter& JsonWriter::value(int v) {
    comma_if_needed();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(long long v) {
    comma_if_needed();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(std::size_t v) {
    comma_if_needed();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(bool v) {
    comma_if_needed();
    out_ += v ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::value(std::string_view s) {
    comma_if_needed();
    out_ += '"';
    out_ += json_escape(s);
    out_ += '"';
    return *this;
}

JsonWriter& JsonWriter::value_null() {
    comma_if_needed();
    out_ += "null";
    return *this;
}

JsonWriter& JsonWriter::value(const Vec& v) {
    begin_array();
    for (double x : v) value(x);
    return end_array();
}

JsonWriter& JsonWriter::value(const Matrix& m) {
    begin_array();
    for (int i = 0; i < m.rows(); ++i) {
        begin_array();
        for (int j = 0; j < m.cols(); ++j) value(m(i, j));
        end_array();
    }
    return end_array();
}

void CsvWriter::field(std::string_view s) {
    if (row_started_) out_ += ',';
    out_ += s;
    row_started_ = true;
}

void CsvWriter::field(double v) { field(std::string_view(format_double(v))); }

void CsvWriter::field(int v) { field(std::string_view(std::to_string(v))); }

void CsvWriter::end_row() {
    out_ += '\n';
    row_started_ = false;
}

}  // namespace germ
