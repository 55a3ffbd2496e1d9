#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bypass.hpp"
#include "numeric.hpp"
#include "statistics.hpp"

namespace checkers {

// Shortest round-trip decimal form, 17 significant digits.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

// Compact rational: plain integer when the denominator is one.
inline std::string format_rational(const Rational& r) {
    const Int num = boost::multiprecision::numerator(r);
    const Int den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

// Strict num/den form used in CSV cells, so the schema stays uniform.
inline std::string format_rational_frac(const Rational& r) {
    return boost::multiprecision::numerator(r).str() + "/" +
           boost::multiprecision::denominator(r).str();
}

inline void write_distribution_csv(std::ostream& os, const ExactDistribution& d,
                                   bool totals = false) {
    os << "n,p_minus,p_plus,p_total\n";
    Rational sum_minus{0};
    Rational sum_plus{0};
    for (const auto& e : d.entries) {
        os << e.n << ',' << format_rational_frac(e.p_minus) << ','
           << format_rational_frac(e.p_plus) << ','
           << format_rational_frac(e.p_minus + e.p_plus) << '\n';
        sum_minus += e.p_minus;
        sum_plus += e.p_plus;
    }
    if (totals) {
        os << "total," << format_rational_frac(sum_minus) << ','
           << format_rational_frac(sum_plus) << ','
           << format_rational_frac(sum_minus + sum_plus) << '\n';
    }
}

inline void write_distribution_csv(std::ostream& os, const FloatDistribution& d,
                                   bool totals = false) {
    os << "n,p_minus,p_plus,p_total\n";
    double sum_minus = 0.0;
    double sum_plus = 0.0;
    for (const auto& e : d.entries) {
        os << e.n << ',' << format_double(e.p_minus) << ',' << format_double(e.p_plus) << ','
           << format_double(e.p_minus + e.p_plus) << '\n';
        sum_minus += e.p_minus;
        sum_plus += e.p_plus;
    }
    if (totals) {
        os << "total," << format_double(sum_minus) << ',' << format_double(sum_plus) << ','
           << format_double(sum_minus + sum_plus) << '\n';
    }
}

// Bypass sets travel as a JSON array of [n, tau] pairs.
inline BypassSet load_bypass_set(std::istream& in) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("bypass set: invalid JSON: ") + e.what());
    }
    if (!j.is_array()) throw std::runtime_error("bypass set: expected a JSON array of pairs");
    std::vector<Site> sites;
    for (const auto& item : j) {
        if (!item.is_array() || item.size() != 2 || !item[0].is_number_integer() ||
            !item[1].is_number_integer()) {
            throw std::runtime_error("bypass set: each entry must be an [n, tau] integer pair");
        }
        sites.push_back(Site{item[0].get<int>(), item[1].get<int>()});
    }
    return BypassSet{sites};
}

inline BypassSet load_bypass_set_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("bypass set: cannot open " + path);
    return load_bypass_set(in);
}

}  // namespace checkers
