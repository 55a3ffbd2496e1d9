#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "amplitude.hpp"
#include "lattice.hpp"
#include "mass.hpp"
#include "numeric.hpp"

namespace checkers {

// Thrown by conservation_bypass when the absorbing set lets paths escape.
struct NonBlockingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A finite set of absorbing lattice sites. The walk is stopped (recorded and
// zeroed) the first time it lands on a member.
class BypassSet {
public:
    BypassSet() = default;

    explicit BypassSet(const std::vector<Site>& sites) {
        for (const Site& s : sites) {
            if (s.n == 0 && s.tau == 0) {
                throw InvalidSiteError("bypass set may not contain the origin");
            }
            if (s.tau < 1) {
                throw InvalidSiteError("bypass site (" + std::to_string(s.n) + "," +
                                       std::to_string(s.tau) + ") has tau < 1");
            }
            if (members_.insert(s).second) {
                sites_.push_back(s);
                max_tau_ = std::max(max_tau_, s.tau);
            }
        }
        std::sort(sites_.begin(), sites_.end(), [](const Site& a, const Site& b) {
            return a.tau != b.tau ? a.tau < b.tau : a.n < b.n;
        });
    }

    bool contains(Site s) const { return members_.count(s) != 0; }
    bool empty() const { return sites_.empty(); }
    int max_tau() const { return max_tau_; }

    // Members sorted by (tau, n).
    const std::vector<Site>& sites() const { return sites_; }

    // lam indices of reachable members in a given row, ascending.
    std::vector<int> lams_in_row(int tau) const {
        std::vector<int> out;
        for (const Site& s : sites_) {
            if (s.tau == tau && reachable(s)) out.push_back((s.tau + s.n) / 2);
        }
        return out;
    }

private:
    std::set<Site> members_;
    std::vector<Site> sites_;
    int max_tau_ = 0;
};

struct BypassRecord {
    Site site;
    ExactAmplitude arrival;  // amplitude just before absorption
};

struct BypassRecordFloat {
    Site site;
    Amplitude arrival;
};

struct BypassRun {
    ExactRow final_row;  // post-absorption row at the requested horizon
    std::vector<BypassRecord> recorded;
};

struct BypassRunFloat {
    FloatRow final_row;
    std::vector<BypassRecordFloat> recorded;
};

// Absorbing evolution: advance row by row; whenever the row reaches a member
// of T, record the arriving amplitude and zero that entry before continuing.
// The recorded arrival at s equals the amplitude bypassing T \ {s}, since
// same-row absorptions act on disjoint entries.
inline BypassRun bypass_run(int horizon, const BypassSet& T, const MassParam& m, exact_mode_t,
                            const Limits& lim = default_limits()) {
    detail::check_tau(horizon, lim.tau_max_exact, "bypass_run(exact)");
    const Rational& mv = m.rational();
    BypassRun out;
    ExactRow row = seed_row(exact_mode);
    for (int tau = 1;; ++tau) {
        for (int lam : T.lams_in_row(tau)) {
            ExactAmplitude arrival{row.A1[lam - 1], row.A2[lam - 1], tau - 1};
            if (!arrival.is_zero()) {
                out.recorded.push_back(BypassRecord{Site{2 * lam - tau, tau}, std::move(arrival)});
            }
            row.A1[lam - 1] = 0;
            row.A2[lam - 1] = 0;
        }
        if (tau == horizon) break;
        row_advance(row, mv);
    }
    out.final_row = std::move(row);
    return out;
}

inline BypassRunFloat bypass_run(int horizon, const BypassSet& T, const MassParam& m, float_mode_t,
                                 const Limits& lim = default_limits()) {
    detail::check_tau(horizon, lim.tau_max_float, "bypass_run(float)");
    const double mv = m.value();
    BypassRunFloat out;
    FloatRow row = seed_row(float_mode);
    for (int tau = 1;; ++tau) {
        for (int lam : T.lams_in_row(tau)) {
            const Amplitude arrival{row.a1[lam - 1], row.a2[lam - 1]};
            if (arrival.a1 != 0.0 || arrival.a2 != 0.0) {
                out.recorded.push_back(BypassRecordFloat{Site{2 * lam - tau, tau}, arrival});
            }
            row.a1[lam - 1] = 0.0;
            row.a2[lam - 1] = 0.0;
        }
        if (tau == horizon) break;
        row_advance(row, mv);
    }
    out.final_row = std::move(row);
    return out;
}

namespace detail {

template <class Run>
auto bypass_lookup(const Run& run, Site s, const BypassSet& T, bool exclude_endpoint) {
    using Value = decltype(run.final_row.at(0));
    if (T.contains(s) && exclude_endpoint) {
        for (const auto& rec : run.recorded) {
            if (rec.site == s) return rec.arrival;
        }
        return Value{};  // absorbed nothing: zero arrival
    }
    return run.final_row.at(s.n);
}

}  // namespace detail

// Amplitude at s for walks that avoid T strictly before arrival. When s is a
// member of T, exclude_endpoint (default true) evaluates the arrival value,
// i.e. the amplitude bypassing T \ {s}; passing false keeps s absorbing and
// the result is zero.
inline ExactAmplitude amplitude_bypass(Site s, const BypassSet& T, const MassParam& m,
                                       exact_mode_t,
                                       std::optional<bool> exclude_endpoint = std::nullopt,
                                       const Limits& lim = default_limits()) {
    detail::check_tau(s.tau, lim.tau_max_exact, "amplitude_bypass(exact)");
    if (!reachable(s)) return ExactAmplitude{0, 0, s.tau - 1};
    const BypassRun run = bypass_run(s.tau, T, m, exact_mode, lim);
    ExactAmplitude a = detail::bypass_lookup(run, s, T, exclude_endpoint.value_or(true));
    a.k = s.tau - 1;
    return a;
}

inline Amplitude amplitude_bypass(Site s, const BypassSet& T, const MassParam& m, float_mode_t,
                                  std::optional<bool> exclude_endpoint = std::nullopt,
                                  const Limits& lim = default_limits()) {
    detail::check_tau(s.tau, lim.tau_max_float, "amplitude_bypass(float)");
    if (!reachable(s)) return Amplitude{};
    const BypassRunFloat run = bypass_run(s.tau, T, m, float_mode, lim);
    return detail::bypass_lookup(run, s, T, exclude_endpoint.value_or(true));
}

// True when every infinite walk path from the origin hits T. Propagates path
// support row by row; absorption past max_tau(T) is impossible, so an empty
// support row must appear by then or never.
inline bool blocking_check(const BypassSet& T, int horizon) {
    if (horizon < T.max_tau()) {
        throw std::invalid_argument("blocking_check: horizon below the deepest bypass site");
    }
    if (T.empty()) return false;
    std::vector<char> support{1};  // row tau = 1, lam-indexed
    for (int tau = 1; tau <= T.max_tau(); ++tau) {
        for (int lam : T.lams_in_row(tau)) support[lam - 1] = 0;
        if (std::all_of(support.begin(), support.end(), [](char c) { return c == 0; })) {
            return true;
        }
        std::vector<char> next(static_cast<std::size_t>(tau + 1), 0);
        for (int lam = 1; lam <= tau; ++lam) {
            if (!support[lam - 1]) continue;
            next[lam - 1] = 1;  // up-left keeps lam
            next[lam] = 1;      // up-right shifts to lam + 1
        }
        support = std::move(next);
    }
    return false;
}

// Sum of absorbed squared norms over a blocking set; equals one exactly.
inline Rational conservation_bypass(const BypassSet& T, const MassParam& m,
                                    const Limits& lim = default_limits()) {
    if (!blocking_check(T, T.max_tau())) {
        throw NonBlockingError("conservation_bypass: set does not block every path");
    }
    const BypassRun run = bypass_run(T.max_tau(), T, m, exact_mode, lim);
    Rational total{0};
    for (const auto& rec : run.recorded) total += prob(rec.arrival, m);
    return total;
}

// Directed flux on a lattice edge v -> w between consecutive rows: the square
// of the single arrival component at w fed by v (a2 for an up-right step, a1
// for up-left), with walks bypassing T \ {w}.
struct EdgeFlux {
    Site from;
    Site to;
    Rational j;
};

inline EdgeFlux edge_flux(Site from, Site to, const BypassSet& T, const MassParam& m,
                          const Limits& lim = default_limits()) {
    const bool origin_edge = from == Site{0, 0} && to == Site{1, 1};
    if (!origin_edge) {
        if (to.tau != from.tau + 1 || (to.n != from.n + 1 && to.n != from.n - 1) || from.tau < 1) {
            throw std::invalid_argument("edge_flux: sites are not joined by a lattice edge");
        }
    }
    const ExactAmplitude a = amplitude_bypass(to, T, m, exact_mode, true, lim);
    const Rational one_plus_M = 1 + m.m2();
    const Rational denom = pow_rational(one_plus_M, static_cast<unsigned>(a.k));
    const bool up_right = to.n == from.n + 1;
    const Rational& comp = up_right ? a.A2 : a.A1;
    return EdgeFlux{from, to, comp * comp / denom};
}

struct KirchhoffViolation {
    Site site;
    Rational inflow;
    Rational outflow;
};

// Current conservation at every vertex outside T with tau < tau_max: the flux
// arriving on the two incoming edges equals the flux leaving on the two
// outgoing ones. Absorbing vertices break the law, which is the point; they
// are skipped. Also checks the source edge out of the origin carries flux 1.
inline std::vector<KirchhoffViolation> kirchhoff_check(int tau_max, const BypassSet& T,
                                                       const MassParam& m,
                                                       const Limits& lim = default_limits()) {
    detail::check_tau(tau_max, lim.tau_max_exact, "kirchhoff_check");
    const Rational& mv = m.rational();
    const Rational one_plus_M = 1 + mv * mv;
    std::vector<KirchhoffViolation> out;

    ExactRow pre = seed_row(exact_mode);  // arrival values, before zeroing
    {
        const Rational seed_flux = pre.A2[0] * pre.A2[0];
        if (seed_flux != 1) out.push_back(KirchhoffViolation{Site{1, 1}, seed_flux, 1});
    }
    for (int tau = 1; tau < tau_max; ++tau) {
        ExactRow post = pre;
        for (int lam : T.lams_in_row(tau)) {
            post.A1[lam - 1] = 0;
            post.A2[lam - 1] = 0;
        }
        ExactRow next = post;
        row_advance(next, mv);
        const Rational denom_in = pow_rational(one_plus_M, static_cast<unsigned>(tau - 1));
        const Rational denom_out = denom_in * one_plus_M;
        for (int lam = 1; lam <= tau; ++lam) {
            const Site v{2 * lam - tau, tau};
            if (T.contains(v)) continue;
            const Rational inflow =
                (pre.A1[lam - 1] * pre.A1[lam - 1] + pre.A2[lam - 1] * pre.A2[lam - 1]) / denom_in;
            // outgoing edges: up-left feeds a1 at lam, up-right feeds a2 at lam+1
            const Rational outflow =
                (next.A1[lam - 1] * next.A1[lam - 1] + next.A2[lam] * next.A2[lam]) / denom_out;
            if (inflow != outflow) out.push_back(KirchhoffViolation{v, inflow, outflow});
        }
        pre = std::move(next);
    }
    return out;
}

}  // namespace checkers
