#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "germ/linalg.hpp"

namespace germ {

/// Round-trippable fixed formatting: 17 significant digits. All floats
/// in CSV and JSON output go through this, which is what makes repeated
/// runs byte-identical.
std::string format_double(double value);

/// Minimal streaming JSON writer. Hand-rolled so the float format above
/// applies uniformly; emits no whitespace except after ':' and ','.
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(std::string_view name);
    JsonWriter& value(double v);
    JsonWriter& value(int v);
    JsonWriter& value(long long v);
    JsonWriter& value(std::size_t v);
    JsonWriter& value(bool v);
    JsonWriter& value(std::string_view s);
    JsonWriter& value_null();
    JsonWriter& value(const Vec& v);
    JsonWriter& value(const Matrix& m);

    const std::string& str() const noexcept { return out_; }

private:
    void comma_if_needed();
    std::string out_;
    std::vector<bool> need_comma_;
    bool pending_key_ = false;
};

std::string json_escape(std::string_view s);

/// One CSV line, '\n'-terminated; floats via format_double.
class CsvWriter {
public:
    void field(std::string_view s);
    void field(double v);
    void field(int v);
    void end_row();
    const std::string& str() const noexcept { return out_; }

private:
    std::string out_;
    bool row_started_ = false;
};

}  // namespace germ
