#pragma once

#include <nsgames/rational.hpp>
#include <nsgames/serialize.hpp>

#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>

namespace nsgames {

// Doubles are rendered with 15 significant digits so that reports are
// byte-stable across runs and platforms.
inline std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", value);
    return buf;
}

namespace detail {

inline void dump_json_impl(const Json& j, std::string& out, int indent, int depth) {
    const auto pad = [&](int d) { out.append(static_cast<std::size_t>(d) * indent, ' '); };
    if (j.is_object()) {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        std::size_t i = 0;
        for (const auto& [key, value] : j.items()) {
            pad(depth + 1);
            out += Json(key).dump();
            out += ": ";
            dump_json_impl(value, out, indent, depth + 1);
            if (++i < j.size()) out += ',';
            out += '\n';
        }
        pad(depth);
        out += '}';
    } else if (j.is_array()) {
        if (j.empty()) {
            out += "[]";
            return;
        }
        bool scalars_only = true;
        for (const auto& e : j)
            if (e.is_object() || e.is_array()) scalars_only = false;
        if (scalars_only && j.size() <= 16) {
            out += '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ", ";
                dump_json_impl(j[i], out, indent, depth);
            }
            out += ']';
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            pad(depth + 1);
            dump_json_impl(j[i], out, indent, depth + 1);
            if (i + 1 < j.size()) out += ',';
            out += '\n';
        }
        pad(depth);
        out += ']';
    } else if (j.is_number_float()) {
        out += format_double(j.get<double>());
    } else {
        out += j.dump();
    }
}

}  // namespace detail

inline std::string dump_json(const Json& j, int indent = 2) {
    std::string out;
    detail::dump_json_impl(j, out, indent, 0);
    out += '\n';
    return out;
}

namespace detail {

inline std::string scalar_text(const Json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_float()) return format_double(j.get<double>());
    if (j.is_null()) return "";
    if (j.is_object() || j.is_array()) {
        std::string flat;
        dump_json_impl(j, flat, 0, 0);
        std::string one_line;
        for (const char c : flat)
            if (c != '\n') one_line += c;
        return one_line;
    }
    return j.dump();
}

inline std::string markdown_cell(const std::string& s) {
    std::string out;
    for (const char c : s) {
        if (c == '|') out += "\\|";
        else if (c == '\n') out += ' ';
        else out += c;
    }
    return out;
}

inline std::string markdown_table(const Json& array) {
    std::ostringstream out;
    if (!array.empty() && array.front().is_object()) {
        std::vector<std::string> keys;
        for (const auto& [key, value] : array.front().items()) {
            (void)value;
            keys.push_back(key);
        }
        out << '|';
        for (const auto& k : keys) out << ' ' << markdown_cell(k) << " |";
        out << "\n|";
        for (std::size_t i = 0; i < keys.size(); ++i) out << " --- |";
        out << '\n';
        for (const auto& row : array) {
            out << '|';
            for (const auto& k : keys)
                out << ' '
                    << markdown_cell(row.count(k) ? scalar_text(row.at(k)) : "")
                    << " |";
            out << '\n';
        }
    } else {
        out << "| value |\n| --- |\n";
        for (const auto& e : array) out << "| " << markdown_cell(scalar_text(e)) << " |\n";
    }
    return out.str();
}

}  // namespace detail

inline std::string render_markdown(const Json& j) {
    if (j.is_array()) return detail::markdown_table(j);
    if (!j.is_object()) return detail::scalar_text(j) + "\n";
    std::ostringstream out;
    bool have_scalars = false;
    for (const auto& [key, value] : j.items()) {
        if (value.is_object() || value.is_array()) continue;
        if (!have_scalars) {
            out << "| field | value |\n| --- | --- |\n";
            have_scalars = true;
        }
        out << "| " << detail::markdown_cell(key) << " | "
            << detail::markdown_cell(detail::scalar_text(value)) << " |\n";
    }
    for (const auto& [key, value] : j.items()) {
        if (!value.is_object() && !value.is_array()) continue;
        if (have_scalars || out.tellp() > 0) out << '\n';
        out << "#### " << detail::markdown_cell(key) << "\n\n";
        if (value.is_array()) out << detail::markdown_table(value);
        else out << render_markdown(value);
    }
    return out.str();
}

namespace detail {

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

}  // namespace detail

inline std::string render_csv(const Json& j) {
    std::ostringstream out;
    if (j.is_array() && !j.empty() && j.front().is_object()) {
        std::vector<std::string> keys;
        for (const auto& [key, value] : j.front().items()) {
            (void)value;
            keys.push_back(key);
        }
        for (std::size_t i = 0; i < keys.size(); ++i)
            out << (i ? "," : "") << detail::csv_escape(keys[i]);
        out << '\n';
        for (const auto& row : j) {
            for (std::size_t i = 0; i < keys.size(); ++i)
                out << (i ? "," : "")
                    << detail::csv_escape(
                           row.count(keys[i]) ? detail::scalar_text(row.at(keys[i])) : "");
            out << '\n';
        }
        return out.str();
    }
    if (j.is_array()) {
        out << "value\n";
        for (const auto& e : j) out << detail::csv_escape(detail::scalar_text(e)) << '\n';
        return out.str();
    }
    out << "field,value\n";
    for (const auto& [key, value] : j.items())
        out << detail::csv_escape(key) << ',' << detail::csv_escape(detail::scalar_text(value))
            << '\n';
    return out.str();
}

// Guard rails every value report passes through: the classical value can
// never exceed the non-signaling value, and a quantum value can neither fall
// below classical (beyond roundoff) nor exceed 1.
inline void check_value_sanity(const Rational& classical, const Rational* ns,
                               const double* quantum) {
    if (ns && classical > *ns)
        throw std::logic_error("sanity violation: classical value exceeds the "
                               "non-signaling value");
    if (quantum && to_double(classical) > *quantum + 1e-9)
        throw std::logic_error("sanity violation: classical value exceeds the "
                               "quantum value");
    if (quantum && *quantum > 1 + 1e-12)
        throw std::logic_error("sanity violation: quantum value exceeds 1");
}

}  // namespace nsgames
