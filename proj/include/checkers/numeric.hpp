#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace checkers {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational pow_rational(const Rational& base, unsigned exp) {
    Rational result{1};
    Rational b = base;
    while (exp != 0) {
        if (exp & 1u) result *= b;
        b *= b;
        exp >>= 1u;
    }
    return result;
}

inline Int binomial(unsigned n, unsigned k) {
    if (k > n) return Int{0};
    if (k > n - k) k = n - k;
    Int result{1};
    for (unsigned j = 1; j <= k; ++j) {
        result *= n - k + j;
        result /= j;  // exact at every step: result is C(n-k+j, j)
    }
    return result;
}

}  // namespace checkers
