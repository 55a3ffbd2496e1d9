#pragma once

#include <compare>
#include <stdexcept>
#include <string>

namespace checkers {

// Thrown when a site violates a precondition (bad parity, outside the light
// cone, tau < 1, malformed coordinates).
struct InvalidSiteError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Lattice site in dimensionless coordinates: n = x/eps, tau = t/eps, tau >= 1.
struct Site {
    int n = 0;
    int tau = 1;

    friend constexpr auto operator<=>(const Site&, const Site&) = default;
};

// Site in rotated coordinates: lam = (tau + n)/2, mu_row = (tau - n)/2.
// lam >= 1 and mu_row >= 0 exactly when the original site is reachable.
struct RotatedSite {
    int lam = 1;
    int mu_row = 0;

    friend constexpr auto operator<=>(const RotatedSite&, const RotatedSite&) = default;
};

// A site carries nonzero amplitude iff a walk path from the origin with first
// step up-right can end there: matching parity, inside the light cone, and not
// on the left cone boundary (the first step forbids n = -tau).
constexpr bool reachable(Site s) {
    if (s.tau < 1) return false;
    if (((s.n + s.tau) & 1) != 0) return false;
    return s.n <= s.tau && s.n > -s.tau;
}

enum class SiteClass { unreachable, cone_boundary, interior };

inline SiteClass classify(Site s) {
    if (s.tau < 1) throw InvalidSiteError("classify: tau must be >= 1");
    if (!reachable(s)) return SiteClass::unreachable;
    if (s.n == s.tau) return SiteClass::cone_boundary;
    return SiteClass::interior;
}

inline RotatedSite to_rotated(Site s) {
    if (!reachable(s)) {
        throw InvalidSiteError("to_rotated: site (" + std::to_string(s.n) + "," +
                               std::to_string(s.tau) + ") is not reachable");
    }
    return RotatedSite{(s.tau + s.n) / 2, (s.tau - s.n) / 2};
}

constexpr Site from_rotated(RotatedSite r) {
    return Site{r.lam - r.mu_row, r.lam + r.mu_row};
}

inline void validate_rotated(RotatedSite r) {
    if (r.lam < 1 || r.mu_row < 0) {
        throw InvalidSiteError("rotated site requires lam >= 1 and mu_row >= 0");
    }
}

}  // namespace checkers
