#pragma once

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>

#include "numeric.hpp"

namespace checkers {

// Dimensionless mass parameter m*eps >= 0. Carries either an exact rational
// value (enabling exact-arithmetic computations) or a plain double. Every
// exact value also offers a double view; the reverse conversion is refused.
class MassParam {
public:
    static MassParam exact(Rational v) {
        if (v < 0) throw std::invalid_argument("mass must be >= 0");
        MassParam m;
        m.exact_ = true;
        m.rational_ = std::move(v);
        m.double_ = to_double(m.rational_);
        return m;
    }

    static MassParam exact(long long num, long long den = 1) {
        if (den <= 0) throw std::invalid_argument("mass denominator must be > 0");
        return exact(Rational{Int{num}, Int{den}});
    }

    static MassParam floating(double v) {
        if (!(v >= 0)) throw std::invalid_argument("mass must be >= 0");
        MassParam m;
        m.exact_ = false;
        m.double_ = v;
        return m;
    }

    bool is_exact() const { return exact_; }

    const Rational& rational() const {
        if (!exact_) throw std::logic_error("mass has no exact representation");
        return rational_;
    }

    double value() const { return double_; }

    // m^2 in whichever representation is requested.
    Rational m2() const { return rational() * rational(); }
    double m2f() const { return double_ * double_; }

    std::string str() const {
        if (exact_) {
            std::ostringstream os;
            os << rational_;
            return os.str();
        }
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", double_);
        return buf;
    }

private:
    MassParam() = default;

    bool exact_ = true;
    Rational rational_{1};
    double double_ = 1.0;
};

// Accepts "p/q" or a bare integer as exact rationals; anything with a decimal
// point or exponent becomes a float mass.
inline MassParam parse_mass(const std::string& text) {
    const auto bad = [&] {
        return std::invalid_argument("cannot parse mass '" + text + "'");
    };
    if (text.empty()) throw bad();
    if (text.find('/') != std::string::npos) {
        const auto slash = text.find('/');
        if (slash == 0 || slash + 1 == text.size() ||
            text.find('/', slash + 1) != std::string::npos) {
            throw bad();
        }
        try {
            Int num{text.substr(0, slash)};
            Int den{text.substr(slash + 1)};
            if (den <= 0) throw bad();
            return MassParam::exact(Rational{num, den});
        } catch (const std::runtime_error&) {
            throw bad();
        }
    }
    if (text.find('.') == std::string::npos && text.find('e') == std::string::npos &&
        text.find('E') == std::string::npos) {
        try {
            return MassParam::exact(Rational{Int{text}});
        } catch (const std::runtime_error&) {
            throw bad();
        }
    }
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw bad();
    }
    if (used != text.size() || !std::isfinite(v)) throw bad();
    return MassParam::floating(v);
}

}  // namespace checkers
