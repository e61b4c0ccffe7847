#include "gcoup/report.hpp"

#include <cmath>
#include <cstdio>

#include "gcoup/errors.hpp"

namespace gcoup {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_ext(ExtReal v) {
    if (v.is_pos_inf()) return "inf";
    if (v.is_neg_inf()) return "-inf";
    return format_number(v.raw());
}

JsonValue JsonValue::arr() {
    JsonValue v;
    v.kind_ = Kind::array;
    return v;
}

JsonValue JsonValue::num(double v) {
    JsonValue j;
    j.kind_ = Kind::number;
    j.num_ = v;
    if (std::isinf(v)) j.is_inf_ = true;
    if (std::isnan(v)) throw Error("JsonValue: NaN has no serialization");
    return j;
}

JsonValue JsonValue::integer(long long v) {
    JsonValue j;
    j.kind_ = Kind::integer;
    j.int_ = v;
    return j;
}

JsonValue JsonValue::str(std::string v) {
    JsonValue j;
    j.kind_ = Kind::string;
    j.str_ = std::move(v);
    return j;
}

JsonValue JsonValue::flag(bool v) {
    JsonValue j;
    j.kind_ = Kind::boolean;
    j.bool_ = v;
    return j;
}

JsonValue JsonValue::ext(ExtReal v) {
    if (v.finite()) return num(v.raw());
    JsonValue j;
    j.kind_ = Kind::number;
    j.is_inf_ = true;
    j.num_ = v.is_pos_inf() ? 1.0 : -1.0;
    return j;
}

JsonValue& JsonValue::set(const std::string& key, JsonValue v) {
    if (kind_ != Kind::object) throw Error("JsonValue: set on a non-object");
    fields_[key] = std::move(v);
    return *this;
}

JsonValue& JsonValue::push(JsonValue v) {
    if (kind_ != Kind::array) throw Error("JsonValue: push on a non-array");
    items_.push_back(std::move(v));
    return *this;
}

namespace {

void escape_into(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

}  // namespace

void JsonValue::write(std::string& out, int indent, int depth) const {
    auto newline = [&](int d) {
        if (indent <= 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (kind_) {
        case Kind::object: {
            if (fields_.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool firstf = true;
            for (const auto& [k, v] : fields_) {
                if (!firstf) out += ',';
                firstf = false;
                newline(depth + 1);
                escape_into(out, k);
                out += indent > 0 ? ": " : ":";
                v.write(out, indent, depth + 1);
            }
            newline(depth);
            out += '}';
            return;
        }
        case Kind::array: {
            if (items_.empty()) {
                out += "[]";
                return;
            }
            out += '[';
            bool firsti = true;
            for (const auto& v : items_) {
                if (!firsti) out += ',';
                firsti = false;
                newline(depth + 1);
                v.write(out, indent, depth + 1);
            }
            newline(depth);
            out += ']';
            return;
        }
        case Kind::number:
            if (is_inf_)
                out += num_ > 0 ? "\"inf\"" : "\"-inf\"";
            else
                out += format_number(num_);
            return;
        case Kind::integer: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%lld", int_);
            out += buf;
            return;
        }
        case Kind::string:
            escape_into(out, str_);
            return;
        case Kind::boolean:
            out += bool_ ? "true" : "false";
            return;
    }
}

std::string JsonValue::dump(int indent) const {
    std::string out;
    write(out, indent, 0);
    out += '\n';
    return out;
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
    auto cell = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') q += '"';
            q += c;
        }
        q += '"';
        return q;
    };
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out += ',';
        out += cell(header[i]);
    }
    out += '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out += ',';
            out += cell(r[i]);
        }
        out += '\n';
    }
    return out;
}

}  // namespace gcoup
