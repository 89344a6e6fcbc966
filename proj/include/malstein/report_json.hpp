#pragma once

#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bounds.hpp"

namespace malstein {

// All numeric output goes through %.17g so that identical inputs always
// produce byte-identical documents.
inline std::string json_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string json_string(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    out += '"';
    return out;
}

// Object builder that emits keys in sorted order.
class JsonObject {
    std::map<std::string, std::string> fields_;

 public:
    JsonObject& raw(const std::string& key, std::string value) {
        fields_[key] = std::move(value);
        return *this;
    }
    JsonObject& number(const std::string& key, double v) { return raw(key, json_number(v)); }
    JsonObject& integer(const std::string& key, long long v) { return raw(key, std::to_string(v)); }
    JsonObject& text(const std::string& key, const std::string& v) { return raw(key, json_string(v)); }
    JsonObject& boolean(const std::string& key, bool v) { return raw(key, v ? "true" : "false"); }

    std::string str() const {
        std::string out = "{";
        bool first = true;
        for (const auto& [k, v] : fields_) {
            if (!first) out += ',';
            first = false;
            out += json_string(k);
            out += ':';
            out += v;
        }
        out += '}';
        return out;
    }
};

inline std::string json_array(const std::vector<std::string>& items) {
    std::string out = "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        out += items[i];
    }
    out += ']';
    return out;
}

inline std::string report_to_json(const BoundReport& r) {
    std::vector<std::string> terms;
    terms.reserve(r.terms.size());
    for (const auto& [label, value] : r.terms)
        terms.push_back(JsonObject().text("label", label).number("value", value).str());
    JsonObject meta;
    for (const auto& [k, v] : r.metadata) meta.number(k, v);
    return JsonObject()
        .text("bound_name", r.bound_name)
        .raw("metadata", meta.str())
        .raw("terms", json_array(terms))
        .number("total", r.total)
        .boolean("vacuous", r.vacuous)
        .str();
}

// CSV rows: one key,value pair per line; term and metadata keys are prefixed
// so the flat file remains unambiguous.
inline void report_to_csv_rows(const BoundReport& r,
                               std::vector<std::pair<std::string, std::string>>& rows,
                               const std::string& prefix = "") {
    rows.push_back({prefix + "bound_name", r.bound_name});
    rows.push_back({prefix + "total", json_number(r.total)});
    rows.push_back({prefix + "vacuous", r.vacuous ? "true" : "false"});
    for (const auto& [label, value] : r.terms)
        rows.push_back({prefix + "term:" + label, json_number(value)});
    for (const auto& [k, v] : r.metadata)
        rows.push_back({prefix + "meta:" + k, json_number(v)});
}

inline std::string csv_document(const std::vector<std::pair<std::string, std::string>>& rows) {
    std::string out;
    for (const auto& [k, v] : rows) {
        out += k;
        out += ',';
        out += v;
        out += '\n';
    }
    return out;
}

} // namespace malstein
