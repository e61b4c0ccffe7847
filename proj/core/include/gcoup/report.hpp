#pragma once

#include <map>
#include <string>
#include <vector>

#include "gcoup/extreal.hpp"

namespace gcoup {

// Deterministic JSON builder: object keys serialize sorted, numbers with 17
// significant digits, infinities as the strings "inf" / "-inf". Identical
// trees dump to identical bytes.
class JsonValue {
public:
    JsonValue() : kind_(Kind::object) {}

    static JsonValue obj() { return JsonValue(); }
    static JsonValue arr();
    static JsonValue num(double v);
    static JsonValue integer(long long v);
    static JsonValue str(std::string v);
    static JsonValue flag(bool v);
    static JsonValue ext(ExtReal v);

    JsonValue& set(const std::string& key, JsonValue v);
    JsonValue& push(JsonValue v);

    std::string dump(int indent = 2) const;

private:
    enum class Kind { object, array, number, integer, string, boolean };
    Kind kind_;
    std::map<std::string, JsonValue> fields_;
    std::vector<JsonValue> items_;
    double num_ = 0.0;
    long long int_ = 0;
    std::string str_;
    bool bool_ = false;
    bool is_inf_ = false;  // number kind: serialize as quoted inf string

    void write(std::string& out, int indent, int depth) const;
};

std::string format_number(double v);  // %.17g
std::string format_ext(ExtReal v);   // %.17g, or inf / -inf

// Value tables flatten to CSV; cells are preformatted strings.
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);

}  // namespace gcoup
