#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sma {

/// Doubles rendered with "%.17g": round-trip exact and byte-stable, so
/// identical runs emit identical reports.
std::string format_double(double v);

/// Minimal streaming JSON writer. Key order is the insertion order, output
/// has no whitespace; byte-deterministic for deterministic inputs.
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(std::string_view name);
    JsonWriter& value(double v);
    JsonWriter& value(bool v);
    JsonWriter& value(int v);
    JsonWriter& value(std::uint64_t v);
    JsonWriter& value(std::int64_t v);
    JsonWriter& value(std::string_view v);
    JsonWriter& value(const char* v) { return value(std::string_view(v)); }

    /// Inserts a preformatted JSON fragment verbatim.
    JsonWriter& raw_value(std::string_view fragment);

    const std::string& str() const { return out_; }

private:
    void separate();

    std::string out_;
    std::vector<bool> needs_comma_;
    bool after_key_ = false;
};

} // namespace sma
