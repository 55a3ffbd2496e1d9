#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lattice.hpp"
#include "mass.hpp"
#include "numeric.hpp"

namespace checkers {

struct ResourceLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace limits {
inline constexpr int kTauMaxFloat = 5000;
inline constexpr int kTauMaxExact = 500;
inline constexpr int kTauMaxOracle = 16;
}  // namespace limits

struct Limits {
    int tau_max_float = limits::kTauMaxFloat;
    int tau_max_exact = limits::kTauMaxExact;
    int tau_max_oracle = limits::kTauMaxOracle;
};

inline const Limits& default_limits() {
    static const Limits l{};
    return l;
}

struct exact_mode_t {
    explicit exact_mode_t() = default;
};
struct float_mode_t {
    explicit float_mode_t() = default;
};
inline constexpr exact_mode_t exact_mode{};
inline constexpr float_mode_t float_mode{};

// ===================================================================
// Amplitude values
// ===================================================================

// Exact amplitude in numerator form: the amplitude at a site with time tau is
//     a = (A1 + i*A2) / (1 + m^2)^(k/2),   k = tau - 1,
// so A1, A2 stay rational (integer for integer mass) and the only irrational
// factor is the common power of sqrt(1 + m^2). The squared norm
// (A1^2 + A2^2) / (1+m^2)^k is an exact rational.
struct ExactAmplitude {
    Rational A1{0};
    Rational A2{0};
    int k = 0;

    bool is_zero() const { return A1 == 0 && A2 == 0; }

    friend bool operator==(const ExactAmplitude&, const ExactAmplitude&) = default;
};

// Floating-point amplitude with the normalization factor already applied.
struct Amplitude {
    double a1 = 0.0;
    double a2 = 0.0;

    double prob() const { return a1 * a1 + a2 * a2; }
};

inline Rational prob(const ExactAmplitude& a, const MassParam& m) {
    const Rational one_plus_M = 1 + m.m2();
    return (a.A1 * a.A1 + a.A2 * a.A2) / pow_rational(one_plus_M, static_cast<unsigned>(a.k));
}

namespace detail {

// Divides a numerator by (1+M)^(k/2) without ever materializing a huge double.
inline double descale(const Rational& num, const Rational& one_plus_M, int k, double one_plus_M_f) {
    const Rational partial = num / pow_rational(one_plus_M, static_cast<unsigned>(k / 2));
    double v = to_double(partial);
    if (k & 1) v /= std::sqrt(one_plus_M_f);
    return v;
}

}  // namespace detail

inline Amplitude to_float(const ExactAmplitude& a, const MassParam& m) {
    const Rational one_plus_M = 1 + m.m2();
    const double opmf = 1.0 + m.m2f();
    return Amplitude{detail::descale(a.A1, one_plus_M, a.k, opmf),
                     detail::descale(a.A2, one_plus_M, a.k, opmf)};
}

// ===================================================================
// Rows
// ===================================================================

// One lattice row, indexed by lam = (tau + n)/2 in [1, tau]; entry lam lives
// at vector index lam - 1. Exact rows store numerators (see ExactAmplitude).
struct ExactRow {
    int tau = 1;
    std::vector<Rational> A1;
    std::vector<Rational> A2;

    int k() const { return tau - 1; }

    int lam_of(int n) const {
        const Site s{n, tau};
        if (!reachable(s)) return 0;
        return (tau + n) / 2;
    }

    ExactAmplitude at(int n) const {
        const int lam = lam_of(n);
        if (lam == 0) return ExactAmplitude{0, 0, tau - 1};
        return ExactAmplitude{A1[lam - 1], A2[lam - 1], tau - 1};
    }

    // Reachable site coordinates in ascending n order.
    std::vector<int> sites() const {
        std::vector<int> out;
        out.reserve(tau);
        for (int lam = 1; lam <= tau; ++lam) out.push_back(2 * lam - tau);
        return out;
    }
};

// Floating-point row; entries are normalized amplitudes.
struct FloatRow {
    int tau = 1;
    std::vector<double> a1;
    std::vector<double> a2;

    int lam_of(int n) const {
        const Site s{n, tau};
        if (!reachable(s)) return 0;
        return (tau + n) / 2;
    }

    Amplitude at(int n) const {
        const int lam = lam_of(n);
        if (lam == 0) return Amplitude{};
        return Amplitude{a1[lam - 1], a2[lam - 1]};
    }

    std::vector<int> sites() const {
        std::vector<int> out;
        out.reserve(tau);
        for (int lam = 1; lam <= tau; ++lam) out.push_back(2 * lam - tau);
        return out;
    }
};

inline ExactRow seed_row(exact_mode_t) { return ExactRow{1, {Rational{0}}, {Rational{1}}}; }

inline FloatRow seed_row(float_mode_t) { return FloatRow{1, {0.0}, {1.0}}; }

// One step of the evolution, tau -> tau + 1, in lam coordinates:
//   A1[lam] <- A1[lam] + m*A2[lam]        (lam <= old tau, else 0)
//   A2[lam] <- A2[lam-1] - m*A1[lam-1]    (lam >= 2, else 0)
inline void row_advance(ExactRow& row, const Rational& m) {
    const int t = row.tau + 1;
    std::vector<Rational> A1(static_cast<std::size_t>(t));
    std::vector<Rational> A2(static_cast<std::size_t>(t));
    for (int lam = 1; lam <= t - 1; ++lam) {
        A1[lam - 1] = row.A1[lam - 1] + m * row.A2[lam - 1];
        A2[lam] = row.A2[lam - 1] - m * row.A1[lam - 1];
    }
    row.A1 = std::move(A1);
    row.A2 = std::move(A2);
    row.tau = t;
}

inline void row_advance(FloatRow& row, double m) {
    const int t = row.tau + 1;
    const double c = 1.0 / std::sqrt(1.0 + m * m);
    std::vector<double> a1(static_cast<std::size_t>(t), 0.0);
    std::vector<double> a2(static_cast<std::size_t>(t), 0.0);
    for (int lam = 1; lam <= t - 1; ++lam) {
        a1[lam - 1] = c * (row.a1[lam - 1] + m * row.a2[lam - 1]);
        a2[lam] = c * (row.a2[lam - 1] - m * row.a1[lam - 1]);
    }
    row.a1 = std::move(a1);
    row.a2 = std::move(a2);
    row.tau = t;
}

namespace detail {

inline void check_tau(int tau, int limit, const char* what) {
    if (tau < 1) throw InvalidSiteError("tau must be >= 1");
    if (tau > limit) {
        throw ResourceLimitError(std::string(what) + ": tau " + std::to_string(tau) +
                                 " exceeds limit " + std::to_string(limit));
    }
}

}  // namespace detail

inline ExactRow amplitude_row_dp(int tau, const MassParam& m, exact_mode_t,
                                 const Limits& lim = default_limits()) {
    detail::check_tau(tau, lim.tau_max_exact, "amplitude_row_dp(exact)");
    const Rational& mv = m.rational();
    ExactRow row = seed_row(exact_mode);
    while (row.tau < tau) row_advance(row, mv);
    return row;
}

inline FloatRow amplitude_row_dp(int tau, const MassParam& m, float_mode_t,
                                 const Limits& lim = default_limits()) {
    detail::check_tau(tau, lim.tau_max_float, "amplitude_row_dp(float)");
    const double mv = m.value();
    FloatRow row = seed_row(float_mode);
    while (row.tau < tau) row_advance(row, mv);
    return row;
}

inline ExactAmplitude amplitude_dp(Site s, const MassParam& m, exact_mode_t,
                                   const Limits& lim = default_limits()) {
    detail::check_tau(s.tau, lim.tau_max_exact, "amplitude_dp(exact)");
    if (!reachable(s)) return ExactAmplitude{0, 0, s.tau - 1};
    return amplitude_row_dp(s.tau, m, exact_mode, lim).at(s.n);
}

inline Amplitude amplitude_dp(Site s, const MassParam& m, float_mode_t,
                              const Limits& lim = default_limits()) {
    detail::check_tau(s.tau, lim.tau_max_float, "amplitude_dp(float)");
    if (!reachable(s)) return Amplitude{};
    return amplitude_row_dp(s.tau, m, float_mode, lim).at(s.n);
}

// ===================================================================
// Closed form
// ===================================================================

// Finite-sum evaluation for interior sites (|n| < tau), with p = lam - 1 and
// q = mu - 1:
//   A1 = sum_{r>=0} (-1)^r C(p,r) C(q,r)   m^(2r+1)
//   A2 = sum_{r>=1} (-1)^r C(p,r) C(q,r-1) m^(2r)
// Cone-boundary sites are rejected; callers route those to amplitude_edge.
inline ExactAmplitude amplitude_closed_form(Site s, const MassParam& m, exact_mode_t,
                                            const Limits& lim = default_limits()) {
    detail::check_tau(s.tau, lim.tau_max_exact, "amplitude_closed_form(exact)");
    if (classify(s) != SiteClass::interior) {
        throw InvalidSiteError("amplitude_closed_form: site (" + std::to_string(s.n) + "," +
                               std::to_string(s.tau) + ") is not interior");
    }
    const RotatedSite r = to_rotated(s);
    const int p = r.lam - 1;
    const int q = r.mu_row - 1;
    const Rational& mv = m.rational();
    const Rational M = mv * mv;

    const int rmax_a1 = std::min(p, q);
    const int rmax = std::min(p, q + 1);
    Int cp{1};
    Int cq{1};
    Int cq_prev{0};
    Rational m2r{1};
    Rational A1{0};
    Rational A2{0};
    for (int rr = 0;; ++rr) {
        const bool neg = (rr & 1) != 0;
        if (rr <= rmax_a1) {
            const Rational term = Rational{cp * cq} * m2r * mv;
            A1 += neg ? -term : term;
        }
        if (rr >= 1) {
            const Rational term = Rational{cp * cq_prev} * m2r;
            A2 += neg ? -term : term;
        }
        if (rr == rmax) break;
        cp = cp * (p - rr) / (rr + 1);
        cq_prev = cq;
        cq = (rr < q) ? cq * (q - rr) / (rr + 1) : Int{0};
        m2r *= M;
    }
    return ExactAmplitude{std::move(A1), std::move(A2), s.tau - 1};
}

// Double-precision version of the same sum. The alternating terms cancel, so
// accuracy degrades deep in the interior as tau grows; intended for small tau.
inline Amplitude amplitude_closed_form(Site s, const MassParam& m, float_mode_t,
                                       const Limits& lim = default_limits()) {
    detail::check_tau(s.tau, lim.tau_max_float, "amplitude_closed_form(float)");
    if (classify(s) != SiteClass::interior) {
        throw InvalidSiteError("amplitude_closed_form: site (" + std::to_string(s.n) + "," +
                               std::to_string(s.tau) + ") is not interior");
    }
    const RotatedSite r = to_rotated(s);
    const int p = r.lam - 1;
    const int q = r.mu_row - 1;
    const double mv = m.value();
    const double M = mv * mv;

    const int rmax_a1 = std::min(p, q);
    const int rmax = std::min(p, q + 1);
    double cp = 1.0;
    double cq = 1.0;
    double cq_prev = 0.0;
    double m2r = 1.0;
    double A1 = 0.0;
    double A2 = 0.0;
    for (int rr = 0;; ++rr) {
        const double sign = (rr & 1) ? -1.0 : 1.0;
        if (rr <= rmax_a1) A1 += sign * cp * cq * m2r * mv;
        if (rr >= 1) A2 += sign * cp * cq_prev * m2r;
        if (rr == rmax) break;
        cp = cp * (p - rr) / (rr + 1);
        cq_prev = cq;
        cq = (rr < q) ? cq * (q - rr) / (rr + 1) : 0.0;
        m2r *= M;
    }
    const double scale = std::pow(1.0 + M, -0.5 * (s.tau - 1));
    return Amplitude{A1 * scale, A2 * scale};
}

// ===================================================================
// Cone edges
// ===================================================================

// The two columns not covered by the interior sum: the right cone boundary
// n = tau (a single never-turning path) and the leftmost reachable column
// n = -tau + 2 (paths that turn immediately and never again).
inline ExactAmplitude amplitude_edge(Site s, const MassParam& m) {
    if (s.tau < 1) throw InvalidSiteError("amplitude_edge: tau must be >= 1");
    if (s.n == s.tau) return ExactAmplitude{0, 1, s.tau - 1};
    if (s.tau >= 2 && s.n == -s.tau + 2) return ExactAmplitude{m.rational(), 0, s.tau - 1};
    throw InvalidSiteError("amplitude_edge: site (" + std::to_string(s.n) + "," +
                           std::to_string(s.tau) + ") is not on a handled edge");
}

// ===================================================================
// Path-sum oracle
// ===================================================================

// Literal evaluation of the defining sum over all 2^(tau-1) checker paths:
//   a = (1+m^2)^((1-tau)/2) * i * sum_paths (-i*m)^turns(path).
// Exponential in tau; guarded by tau_max_oracle.
inline std::map<int, ExactAmplitude> oracle_row(int tau, const MassParam& m,
                                                const Limits& lim = default_limits()) {
    detail::check_tau(tau, lim.tau_max_oracle, "oracle_row");
    // counts[lam-1][t] = number of paths to lam with t turns
    std::vector<std::vector<Int>> counts(static_cast<std::size_t>(tau),
                                         std::vector<Int>(static_cast<std::size_t>(tau), Int{0}));
    const std::uint32_t free_steps = static_cast<std::uint32_t>(tau - 1);
    const std::uint32_t mask_count = 1u << free_steps;
    const std::uint32_t pair_mask = mask_count - 1u;
    for (std::uint32_t mask = 0; mask < mask_count; ++mask) {
        const std::uint32_t seq = (mask << 1) | 1u;  // bit j = step j+1 is up-right
        const int ups = __builtin_popcount(seq);
        const int turns = __builtin_popcount((seq ^ (seq >> 1)) & pair_mask);
        counts[static_cast<std::size_t>(ups - 1)][static_cast<std::size_t>(turns)] += 1;
    }
    std::vector<Rational> mpow(static_cast<std::size_t>(tau));
    mpow[0] = 1;
    for (int t = 1; t < tau; ++t) mpow[static_cast<std::size_t>(t)] = mpow[static_cast<std::size_t>(t - 1)] * m.rational();

    std::map<int, ExactAmplitude> out;
    for (int lam = 1; lam <= tau; ++lam) {
        Rational A1{0};
        Rational A2{0};
        for (int t = 0; t < tau; ++t) {
            const Int& c = counts[static_cast<std::size_t>(lam - 1)][static_cast<std::size_t>(t)];
            if (c == 0) continue;
            const Rational w = Rational{c} * mpow[static_cast<std::size_t>(t)];
            // i * (-i)^t cycles with period 4 over t
            switch (t & 3) {
                case 0: A2 += w; break;
                case 1: A1 += w; break;
                case 2: A2 -= w; break;
                case 3: A1 -= w; break;
            }
        }
        out.emplace(2 * lam - tau, ExactAmplitude{std::move(A1), std::move(A2), tau - 1});
    }
    return out;
}

inline ExactAmplitude amplitude_oracle(Site s, const MassParam& m,
                                       const Limits& lim = default_limits()) {
    detail::check_tau(s.tau, lim.tau_max_oracle, "amplitude_oracle");
    if (!reachable(s)) return ExactAmplitude{0, 0, s.tau - 1};
    auto row = oracle_row(s.tau, m, lim);
    return row.at(s.n);
}

// Number of checker paths from the origin to a reachable site: C(tau-1, mu).
inline Int path_count(Site s) {
    if (!reachable(s)) return Int{0};
    const RotatedSite r = to_rotated(s);
    return binomial(static_cast<unsigned>(s.tau - 1), static_cast<unsigned>(r.mu_row));
}

// ===================================================================
// Downward recursion
// ===================================================================

// Inverse of row_advance: reconstructs row tau from row tau + 1 via
//   A1[lam]@tau = (A1[lam]@tau+1 - m*A2[lam+1]@tau+1) / (1+M)
//   A2[lam]@tau = (A2[lam+1]@tau+1 + m*A1[lam]@tau+1) / (1+M)
inline ExactRow row_down(const ExactRow& above, const MassParam& m) {
    if (above.tau < 2) throw InvalidSiteError("row_down: need tau >= 2 above");
    const Rational& mv = m.rational();
    const Rational one_plus_M = 1 + mv * mv;
    const int t = above.tau - 1;
    ExactRow row;
    row.tau = t;
    row.A1.resize(static_cast<std::size_t>(t));
    row.A2.resize(static_cast<std::size_t>(t));
    for (int lam = 1; lam <= t; ++lam) {
        row.A1[lam - 1] = (above.A1[lam - 1] - mv * above.A2[lam]) / one_plus_M;
        row.A2[lam - 1] = (above.A2[lam] + mv * above.A1[lam - 1]) / one_plus_M;
    }
    return row;
}

inline FloatRow row_down(const FloatRow& above, const MassParam& m) {
    if (above.tau < 2) throw InvalidSiteError("row_down: need tau >= 2 above");
    const double mv = m.value();
    const double c = 1.0 / std::sqrt(1.0 + mv * mv);
    const int t = above.tau - 1;
    FloatRow row;
    row.tau = t;
    row.a1.resize(static_cast<std::size_t>(t));
    row.a2.resize(static_cast<std::size_t>(t));
    for (int lam = 1; lam <= t; ++lam) {
        row.a1[lam - 1] = c * (above.a1[lam - 1] - mv * above.a2[lam]);
        row.a2[lam - 1] = c * (above.a2[lam] + mv * above.a1[lam - 1]);
    }
    return row;
}

inline ExactAmplitude amplitude_down(Site s, const ExactRow& row_above, const MassParam& m) {
    if (row_above.tau != s.tau + 1) {
        throw InvalidSiteError("amplitude_down: row_above must have tau = site tau + 1");
    }
    return row_down(row_above, m).at(s.n);
}

inline Amplitude amplitude_down(Site s, const FloatRow& row_above, const MassParam& m) {
    if (row_above.tau != s.tau + 1) {
        throw InvalidSiteError("amplitude_down: row_above must have tau = site tau + 1");
    }
    return row_down(row_above, m).at(s.n);
}

}  // namespace checkers
