#pragma once

#include <complex>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mwk/finite.hpp"

namespace mwk {

// Complex literals in the two accepted CLI formats: "re" or "re+imi" / "re-imi".
inline Complex parse_complex(const std::string& text) {
    std::string s = text;
    if (s.empty()) throw std::invalid_argument("parse_complex: empty literal");
    if (s.back() == 'i' || s.back() == 'I') {
        s.pop_back();
        // split at the sign that separates real and imaginary parts
        std::size_t pos = std::string::npos;
        for (std::size_t k = s.size(); k-- > 1;) {
            if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
                pos = k;
                break;
            }
        }
        if (pos == std::string::npos) {
            // pure imaginary literal: "0.4i", "-i"
            if (s.empty() || s == "+") return {0.0, 1.0};
            if (s == "-") return {0.0, -1.0};
            std::size_t used = 0;
            double im = std::stod(s, &used);
            if (used != s.size())
                throw std::invalid_argument("parse_complex: malformed literal '" + text + "'");
            return {0.0, im};
        }
        std::size_t used = 0;
        double re = std::stod(s.substr(0, pos), &used);
        if (used != pos) throw std::invalid_argument("parse_complex: bad real part in '" + text + "'");
        std::string imtxt = s.substr(pos);
        double im = imtxt == "+" ? 1.0 : imtxt == "-" ? -1.0 : std::stod(imtxt);
        return {re, im};
    }
    std::size_t used = 0;
    double re = std::stod(s, &used);
    if (used != s.size())
        throw std::invalid_argument("parse_complex: malformed literal '" + text + "'");
    return {re, 0.0};
}

// Kernel matrix file: { "n1": int, "n2": int, "entries": [[re, im], ...] } row-major.
inline FiniteKernel read_kernel_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open kernel file: " + path);
    nlohmann::json j;
    in >> j;
    int n1 = j.at("n1").get<int>();
    int n2 = j.at("n2").get<int>();
    int n = n1 + n2;
    const auto& entries = j.at("entries");
    if (static_cast<int>(entries.size()) != n * n)
        throw std::invalid_argument("kernel file: entries size != (n1+n2)^2");
    MatrixC m(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            const auto& e = entries.at(r * n + c);
            m(r, c) = Complex(e.at(0).get<double>(), e.size() > 1 ? e.at(1).get<double>() : 0.0);
        }
    return {m, n1, n2};
}

// key=value config file; returns parse-checked lines, naming the offending line.
inline void validate_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = line;
        auto h = t.find('#');
        if (h != std::string::npos) t = t.substr(0, h);
        t.erase(0, t.find_first_not_of(" \t\r"));
        t.erase(t.find_last_not_of(" \t\r") + 1);
        if (t.empty()) continue;
        auto eq = t.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("config parse error at line " + std::to_string(lineno) +
                                        ": expected key=value");
    }
}

// parsed key=value pairs (call validate_config_file first for line diagnostics)
inline std::vector<std::pair<std::string, std::string>> read_config_file(
    const std::string& path) {
    validate_config_file(path);
    std::vector<std::pair<std::string, std::string>> out;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        auto h = line.find('#');
        if (h != std::string::npos) line = line.substr(0, h);
        line.erase(0, line.find_first_not_of(" \t\r"));
        line.erase(line.find_last_not_of(" \t\r") + 1);
        if (line.empty()) continue;
        auto eq = line.find('=');
        std::string key = line.substr(0, eq), value = line.substr(eq + 1);
        key.erase(key.find_last_not_of(" \t") + 1);
        value.erase(0, value.find_first_not_of(" \t"));
        out.emplace_back(key, value);
    }
    return out;
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace mwk
