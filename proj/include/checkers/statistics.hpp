#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "amplitude.hpp"
#include "lattice.hpp"
#include "mass.hpp"
#include "numeric.hpp"

namespace checkers {

// ===================================================================
// Distributions
// ===================================================================

// Position distribution of one row, split by chirality: p_minus = a1^2 (left
// mover), p_plus = a2^2 (right mover). Entries ascend in n; float totals are
// accumulated strictly left to right so output bytes are reproducible.
template <class P>
struct BasicDistribution {
    struct Entry {
        int n;
        P p_minus;
        P p_plus;
    };

    int tau = 1;
    std::vector<Entry> entries;

    P total() const {
        P sum{};
        for (const Entry& e : entries) sum += e.p_minus + e.p_plus;
        return sum;
    }
};

using ExactDistribution = BasicDistribution<Rational>;
using FloatDistribution = BasicDistribution<double>;

inline ExactDistribution distribution(int tau, const MassParam& m, exact_mode_t,
                                      const Limits& lim = default_limits()) {
    const ExactRow row = amplitude_row_dp(tau, m, exact_mode, lim);
    const Rational denom = pow_rational(1 + m.m2(), static_cast<unsigned>(tau - 1));
    ExactDistribution d;
    d.tau = tau;
    d.entries.reserve(static_cast<std::size_t>(tau));
    for (int lam = 1; lam <= tau; ++lam) {
        const Rational& A1 = row.A1[lam - 1];
        const Rational& A2 = row.A2[lam - 1];
        d.entries.push_back({2 * lam - tau, A1 * A1 / denom, A2 * A2 / denom});
    }
    return d;
}

inline FloatDistribution distribution(int tau, const MassParam& m, float_mode_t,
                                      const Limits& lim = default_limits()) {
    const FloatRow row = amplitude_row_dp(tau, m, float_mode, lim);
    FloatDistribution d;
    d.tau = tau;
    d.entries.reserve(static_cast<std::size_t>(tau));
    for (int lam = 1; lam <= tau; ++lam) {
        const double a1 = row.a1[lam - 1];
        const double a2 = row.a2[lam - 1];
        d.entries.push_back({2 * lam - tau, a1 * a1, a2 * a2});
    }
    return d;
}

// Interior reachable sites with exactly zero probability, up to tau_max.
// Expected empty for every rational m > 0; massless input is refused because
// the vanishing statement needs m > 0.
inline std::vector<Site> nonzero_scan(int tau_max, const MassParam& m,
                                      const Limits& lim = default_limits()) {
    if (m.rational() == 0) {
        throw std::invalid_argument("nonzero_scan: requires m > 0");
    }
    detail::check_tau(tau_max, lim.tau_max_exact, "nonzero_scan");
    std::vector<Site> zeros;
    ExactRow row = seed_row(exact_mode);
    for (int tau = 1; tau <= tau_max; ++tau) {
        if (tau > 1) row_advance(row, m.rational());
        for (int lam = 1; lam <= tau; ++lam) {
            const Site s{2 * lam - tau, tau};
            if (classify(s) != SiteClass::interior) continue;
            if (row.A1[lam - 1] == 0 && row.A2[lam - 1] == 0) zeros.push_back(s);
        }
    }
    return zeros;
}

// ===================================================================
// Velocity
// ===================================================================

namespace detail {

inline Rational row_drift(const ExactRow& row, const Rational& denom) {
    // sum of p_plus - p_minus over the row
    Rational d{0};
    for (std::size_t i = 0; i < row.A1.size(); ++i) {
        d += (row.A2[i] * row.A2[i] - row.A1[i] * row.A1[i]);
    }
    return d / denom;
}

inline double row_drift(const FloatRow& row) {
    double d = 0.0;
    for (std::size_t i = 0; i < row.a1.size(); ++i) {
        d += row.a2[i] * row.a2[i] - row.a1[i] * row.a1[i];
    }
    return d;
}

}  // namespace detail

// Expectation of the average velocity x/T over the row at T.
inline Rational mean_avg_velocity(int T, const MassParam& m, exact_mode_t,
                                  const Limits& lim = default_limits()) {
    const ExactDistribution d = distribution(T, m, exact_mode, lim);
    Rational v{0};
    for (const auto& e : d.entries) v += Rational{e.n} * (e.p_minus + e.p_plus);
    return v / T;
}

inline double mean_avg_velocity(int T, const MassParam& m, float_mode_t,
                                const Limits& lim = default_limits()) {
    const FloatDistribution d = distribution(T, m, float_mode, lim);
    double v = 0.0;
    for (const auto& e : d.entries) v += e.n * (e.p_minus + e.p_plus);
    return v / T;
}

// Expectation of the instantaneous velocity (the step direction leaving the
// previous moment): sum of p_plus - p_minus over the row at t.
inline Rational mean_inst_velocity(int t, const MassParam& m, exact_mode_t,
                                   const Limits& lim = default_limits()) {
    const ExactRow row = amplitude_row_dp(t, m, exact_mode, lim);
    return detail::row_drift(row, pow_rational(1 + m.m2(), static_cast<unsigned>(t - 1)));
}

inline double mean_inst_velocity(int t, const MassParam& m, float_mode_t,
                                 const Limits& lim = default_limits()) {
    return detail::row_drift(amplitude_row_dp(t, m, float_mode, lim));
}

struct VelocityIdentity {
    Rational lhs;  // E(v_T)
    Rational rhs;  // (1/T) * sum of E(u_t), t = 1..T
    bool equal = false;
};

// The average-velocity expectation equals the time average of the
// instantaneous one. Both sides are built exactly in a single sweep.
inline VelocityIdentity velocity_identity_check(int T, const MassParam& m,
                                                const Limits& lim = default_limits()) {
    detail::check_tau(T, lim.tau_max_exact, "velocity_identity_check");
    const Rational& mv = m.rational();
    const Rational one_plus_M = 1 + mv * mv;
    ExactRow row = seed_row(exact_mode);
    Rational denom{1};
    Rational drift_sum{0};
    for (int t = 1; t <= T; ++t) {
        if (t > 1) {
            row_advance(row, mv);
            denom *= one_plus_M;
        }
        drift_sum += detail::row_drift(row, denom);
    }
    Rational lhs{0};
    for (int lam = 1; lam <= T; ++lam) {
        const Rational p = (row.A1[lam - 1] * row.A1[lam - 1] + row.A2[lam - 1] * row.A2[lam - 1]) / denom;
        lhs += Rational{2 * lam - T} * p;
    }
    lhs /= T;
    const Rational rhs = drift_sum / T;
    return VelocityIdentity{lhs, rhs, lhs == rhs};
}

struct LimitVelocity {
    double value = 0.0;
    // The closed form is only proved for 0 <= m <= 1; beyond that the value
    // is reported but flagged instead of silently extrapolated.
    bool outside_proved_range = false;
};

inline LimitVelocity limit_velocity(const MassParam& m) {
    const double mv = m.value();
    return LimitVelocity{1.0 - mv / std::sqrt(1.0 + mv * mv), mv > 1.0};
}

struct VelocityReport {
    int T = 1;
    double mean_avg_velocity = 0.0;
    std::vector<double> mean_inst_velocity;  // entry t-1 holds E(u_t)
    double limit = 0.0;
    double delta = 0.0;  // mean_avg_velocity - limit
};

inline VelocityReport velocity_report(int T, const MassParam& m,
                                      const Limits& lim = default_limits()) {
    detail::check_tau(T, lim.tau_max_float, "velocity_report");
    const double mv = m.value();
    VelocityReport rep;
    rep.T = T;
    rep.mean_inst_velocity.reserve(static_cast<std::size_t>(T));
    FloatRow row = seed_row(float_mode);
    for (int t = 1; t <= T; ++t) {
        if (t > 1) row_advance(row, mv);
        rep.mean_inst_velocity.push_back(detail::row_drift(row));
    }
    double v = 0.0;
    for (int lam = 1; lam <= T; ++lam) {
        const double p = row.a1[lam - 1] * row.a1[lam - 1] + row.a2[lam - 1] * row.a2[lam - 1];
        v += (2 * lam - T) * p;
    }
    rep.mean_avg_velocity = v / T;
    const LimitVelocity lv = limit_velocity(m);
    rep.limit = lv.value;
    rep.delta = rep.mean_avg_velocity - rep.limit;
    return rep;
}

// ===================================================================
// Left-mover probability
// ===================================================================

inline Rational left_prob(int t, const MassParam& m, exact_mode_t,
                          const Limits& lim = default_limits()) {
    const ExactRow row = amplitude_row_dp(t, m, exact_mode, lim);
    Rational s{0};
    for (const Rational& A1 : row.A1) s += A1 * A1;
    return s / pow_rational(1 + m.m2(), static_cast<unsigned>(t - 1));
}

inline double left_prob(int t, const MassParam& m, float_mode_t,
                        const Limits& lim = default_limits()) {
    const FloatRow row = amplitude_row_dp(t, m, float_mode, lim);
    double s = 0.0;
    for (const double a1 : row.a1) s += a1 * a1;
    return s;
}

// Large-time limit of the left-mover mass: m / (2*sqrt(1+m^2)).
inline double left_prob_limit(const MassParam& m) {
    const double mv = m.value();
    return mv / (2.0 * std::sqrt(1.0 + mv * mv));
}

struct LeftProbSeries {
    Rational sum_a1_sq;
    Rational series_value;
    bool equal = false;
};

// At unit mass the left-mover probability telescopes to the partial sums of
// the central-binomial series (1/2) * sum_k (-1/4)^k * C(2k,k).
inline LeftProbSeries left_prob_series(int t, const MassParam& m,
                                       const Limits& lim = default_limits()) {
    if (m.rational() != 1) {
        throw std::invalid_argument("left_prob_series: series comparison requires m = 1");
    }
    const Rational sum = left_prob(t, m, exact_mode, lim);
    Rational series{0};
    Rational term{Rational{1, 2}};  // (1/2) * (-1/4)^k * C(2k,k) at k = 0
    for (int k = 0; k < t / 2; ++k) {
        series += term;
        // C(2k+2,k+1) = C(2k,k) * 2(2k+1)/(k+1), then * (-1/4)
        term *= Rational{-(2 * k + 1), 2 * (k + 1)};
    }
    return LeftProbSeries{sum, series, sum == series};
}

// ===================================================================
// The c_t sequence at unit mass
// ===================================================================

struct CtReport {
    int t_max = 1;
    std::vector<double> c;  // c[t-1] = sum of a1^2 at t, minus 1/(2*sqrt 2)
    bool pairing = false;      // c_t = c_{t+1} for even t
    bool decay_bound = false;  // |c_t| < 1/sqrt(t) for all t
    bool alternating = false;  // opposite signs of c_t, c_{t+2} for t > 1
    bool shrinking = false;    // |c_t| > |c_{t+2}| for t > 1
};

// Facts about c_t = sum a1^2 - 1/(2*sqrt 2) at m = 1, established exactly:
// every comparison against the irrational limit is reduced to a rational
// comparison by squaring, using positivity of the quantities involved.
inline CtReport ct_sequence(int t_max, const Limits& lim = default_limits()) {
    detail::check_tau(t_max, lim.tau_max_exact, "ct_sequence");
    const MassParam m = MassParam::exact(1);
    std::vector<Rational> s;  // s[t-1] = sum of a1^2 at t
    s.reserve(static_cast<std::size_t>(t_max));
    {
        ExactRow row = seed_row(exact_mode);
        Rational denom{1};
        for (int t = 1; t <= t_max; ++t) {
            if (t > 1) {
                row_advance(row, m.rational());
                denom *= 2;
            }
            Rational acc{0};
            for (const Rational& A1 : row.A1) acc += A1 * A1;
            s.push_back(acc / denom);
        }
    }

    CtReport rep;
    rep.t_max = t_max;
    const double limit = 1.0 / (2.0 * std::sqrt(2.0));
    rep.c.reserve(s.size());
    for (const Rational& v : s) rep.c.push_back(to_double(v) - limit);

    // sign of c_t = sign of s_t^2 - 1/8 (s_t >= 0 and the limit is positive)
    const auto sign_of_c = [&](int t) -> int {
        const Rational d = s[static_cast<std::size_t>(t - 1)] * s[static_cast<std::size_t>(t - 1)] -
                           Rational{1, 8};
        return d > 0 ? 1 : (d < 0 ? -1 : 0);
    };

    rep.pairing = true;
    for (int t = 2; t + 1 <= t_max; t += 2) {
        if (s[static_cast<std::size_t>(t - 1)] != s[static_cast<std::size_t>(t)]) {
            rep.pairing = false;
            break;
        }
    }

    rep.decay_bound = true;
    for (int t = 1; t <= t_max; ++t) {
        // t*c^2 < 1 with c = s - L, L^2 = 1/8:  t*(s^2 + 1/8) - 1 < t*s*sqrt(1/2)
        const Rational& st = s[static_cast<std::size_t>(t - 1)];
        const Rational lhs = t * (st * st + Rational{1, 8}) - 1;
        if (lhs < 0) continue;
        if (lhs * lhs < Rational{t} * t * st * st / 2) continue;
        rep.decay_bound = false;
        break;
    }

    rep.alternating = true;
    for (int t = 2; t + 2 <= t_max; ++t) {
        if (sign_of_c(t) * sign_of_c(t + 2) != -1) {
            rep.alternating = false;
            break;
        }
    }

    rep.shrinking = true;
    for (int t = 2; t + 2 <= t_max; ++t) {
        // |c_t| > |c_{t+2}| iff (s_t - s_{t+2}) * (S - 1/sqrt 2) > 0 with
        // S = s_t + s_{t+2}; the second factor's sign is that of S^2 - 1/2.
        const Rational diff = s[static_cast<std::size_t>(t - 1)] - s[static_cast<std::size_t>(t + 1)];
        const Rational S = s[static_cast<std::size_t>(t - 1)] + s[static_cast<std::size_t>(t + 1)];
        const Rational cmp = S * S - Rational{1, 2};
        if (!((diff > 0 && cmp > 0) || (diff < 0 && cmp < 0))) {
            rep.shrinking = false;
            break;
        }
    }
    return rep;
}

// ===================================================================
// Classical flea walk
// ===================================================================

struct FleaWalk {
    Rational p;
    Rational q;

    explicit FleaWalk(Rational p_up) : p(std::move(p_up)), q(1 - p) {
        if (p < 0 || p > 1) throw std::invalid_argument("flea probability must lie in [0,1]");
    }
};

// Classical biased walk from the origin; returns the nonzero entries of the
// binomial distribution at time t.
inline std::map<int, Rational> flea_distribution(int t, const Rational& p) {
    const FleaWalk walk{p};
    if (t < 0) throw std::invalid_argument("flea_distribution: t must be >= 0");
    std::vector<Rational> row{Rational{1}};  // index i <-> x = 2i - t_current
    for (int step = 1; step <= t; ++step) {
        std::vector<Rational> next(static_cast<std::size_t>(step) + 1);
        for (std::size_t i = 0; i < next.size(); ++i) {
            Rational v{0};
            if (i >= 1) v += walk.p * row[i - 1];
            if (i < row.size()) v += walk.q * row[i];
            next[i] = std::move(v);
        }
        row = std::move(next);
    }
    std::map<int, Rational> out;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i] != 0) out.emplace(static_cast<int>(2 * i) - t, std::move(row[i]));
    }
    return out;
}

struct FleaVelocity {
    Rational mean_avg;
    Rational expected;  // p - q
    bool equal = false;
};

inline FleaVelocity flea_velocity_check(int T, const Rational& p) {
    if (T < 1) throw std::invalid_argument("flea_velocity_check: T must be >= 1");
    const FleaWalk walk{p};
    const auto dist = flea_distribution(T, p);
    Rational avg{0};
    for (const auto& [x, prob_x] : dist) avg += Rational{x} * prob_x;
    avg /= T;
    const Rational expected = walk.p - walk.q;
    return FleaVelocity{avg, expected, avg == expected};
}

}  // namespace checkers
