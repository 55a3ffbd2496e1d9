#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <checkers.hpp>

using namespace checkers;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitBadArgs = 2;
constexpr int kExitResource = 3;
constexpr int kExitNonBlocking = 4;

std::optional<int> env_tau_max() {
    const char* v = std::getenv("CHECKERS_TAU_MAX");
    if (v == nullptr || *v == '\0') return std::nullopt;
    char* end = nullptr;
    const long x = std::strtol(v, &end, 10);
    if (end == nullptr || *end != '\0' || x < 1 || x > 1000000) {
        throw std::invalid_argument("CHECKERS_TAU_MAX must be a positive integer");
    }
    return static_cast<int>(x);
}

// The env var overrides the row-depth ceilings for row-based commands.
Limits effective_limits() {
    Limits lim;
    if (const auto t = env_tau_max()) {
        lim.tau_max_exact = *t;
        lim.tau_max_float = *t;
    }
    return lim;
}

int suite_tau(int flag_value, int suite_default) {
    if (flag_value > 0) return flag_value;
    if (const auto t = env_tau_max()) return std::min(suite_default, *t);
    return suite_default;
}

struct ModeChoice {
    MassParam mass{MassParam::exact(1)};
    bool exact = true;
};

// Decimal mass text forces float mode; exact mode demands a rational mass.
ModeChoice resolve_mode(const std::string& mass_str, const std::string& mode_str) {
    ModeChoice mc;
    mc.mass = parse_mass(mass_str);
    if (mode_str.empty()) {
        mc.exact = mc.mass.is_exact();
    } else if (mode_str == "exact") {
        if (!mc.mass.is_exact()) {
            throw std::invalid_argument("exact mode requires a rational mass (write p/q)");
        }
        mc.exact = true;
    } else if (mode_str == "float") {
        mc.exact = false;
    } else {
        throw std::invalid_argument("mode must be 'exact' or 'float'");
    }
    return mc;
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::invalid_argument("cannot open output file: " + path);
    return file;
}

void print_exact_record(std::ostream& os, const ExactAmplitude& a, const MassParam& m) {
    const Amplitude f = to_float(a, m);
    os << "A1=" << format_rational(a.A1) << " A2=" << format_rational(a.A2) << " k=" << a.k
       << "\n";
    os << "a1=" << format_double(f.a1) << " a2=" << format_double(f.a2) << "\n";
    os << "P=" << format_rational(prob(a, m)) << "\n";
}

void print_float_record(std::ostream& os, const Amplitude& a) {
    os << "a1=" << format_double(a.a1) << " a2=" << format_double(a.a2) << "\n";
    os << "P=" << format_double(a.prob()) << "\n";
}

// ---------------- amplitude ----------------

int run_amplitude(int n, int tau, const ModeChoice& mc, const std::string& method) {
    const Limits lim = effective_limits();
    if (tau < 1) throw InvalidSiteError("tau must be >= 1");
    const Site s{n, tau};
    if (!reachable(s)) {
        throw InvalidSiteError("site (" + std::to_string(n) + "," + std::to_string(tau) +
                               ") is not reachable (parity or light cone)");
    }
    if (method != "dp" && method != "closed" && method != "oracle") {
        throw std::invalid_argument("method must be dp, closed, or oracle");
    }
    if (mc.exact) {
        ExactAmplitude a;
        if (method == "dp") {
            a = amplitude_dp(s, mc.mass, exact_mode, lim);
        } else if (method == "closed") {
            a = amplitude_closed_form(s, mc.mass, exact_mode, lim);
        } else {
            a = amplitude_oracle(s, mc.mass, lim);
        }
        print_exact_record(std::cout, a, mc.mass);
    } else {
        if (method == "oracle") {
            throw std::invalid_argument("the oracle evaluator is exact-only; use a rational mass");
        }
        const Amplitude a = (method == "dp") ? amplitude_dp(s, mc.mass, float_mode, lim)
                                             : amplitude_closed_form(s, mc.mass, float_mode, lim);
        print_float_record(std::cout, a);
    }
    return kExitOk;
}

// ---------------- distribution ----------------

int run_distribution(int tau, const ModeChoice& mc, bool totals, const std::string& out_path) {
    const Limits lim = effective_limits();
    std::ofstream file;
    std::ostream& os = open_output(file, out_path);
    if (mc.exact) {
        write_distribution_csv(os, distribution(tau, mc.mass, exact_mode, lim), totals);
    } else {
        write_distribution_csv(os, distribution(tau, mc.mass, float_mode, lim), totals);
    }
    return kExitOk;
}

// ---------------- verify ----------------

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

void require_rational(const MassParam& m, const std::string& suite) {
    if (!m.is_exact()) {
        throw std::invalid_argument("suite '" + suite + "' needs exact arithmetic; pass a rational mass");
    }
}

Check check_conservation(int tau_max, const MassParam& m, const Limits& lim) {
    Check c{"row-probability-conserved", true, ""};
    if (m.is_exact()) {
        const Rational& mv = m.rational();
        const Rational one_plus_M = 1 + mv * mv;
        ExactRow row = seed_row(exact_mode);
        Rational denom{1};
        for (int tau = 1; tau <= tau_max; ++tau) {
            if (tau > 1) {
                row_advance(row, mv);
                denom *= one_plus_M;
            }
            Rational total{0};
            for (const Rational& v : row.A1) total += v * v;
            for (const Rational& v : row.A2) total += v * v;
            if (total != denom) {
                c.pass = false;
                c.detail = "first failure at tau=" + std::to_string(tau);
                return c;
            }
        }
        c.detail = "exact total = 1 for every tau <= " + std::to_string(tau_max);
    } else {
        for (int tau = 1; tau <= tau_max; ++tau) {
            const double total = distribution(tau, m, float_mode, lim).total();
            if (std::abs(total - 1.0) > 1e-10) {
                c.pass = false;
                c.detail = "first failure at tau=" + std::to_string(tau);
                return c;
            }
        }
        c.detail = "float total within 1e-10 of 1 for every tau <= " + std::to_string(tau_max);
    }
    return c;
}

Check check_nonzero(int tau_max, const MassParam& m, const Limits& lim) {
    require_rational(m, "nonzero");
    const auto zeros = nonzero_scan(tau_max, m, lim);
    Check c{"no-interior-zero", zeros.empty(), ""};
    c.detail = std::to_string(zeros.size()) + " zero-probability interior sites up to tau=" +
               std::to_string(tau_max);
    return c;
}

Check check_velocity(int tau_max, const MassParam& m, const Limits& lim) {
    require_rational(m, "velocity");
    Check c{"avg-velocity-equals-time-average", true, ""};
    for (int T = 1; T <= tau_max; ++T) {
        if (!velocity_identity_check(T, m, lim).equal) {
            c.pass = false;
            c.detail = "first failure at T=" + std::to_string(T);
            return c;
        }
    }
    c.detail = "exact equality for every T <= " + std::to_string(tau_max);
    return c;
}

Check check_symmetry(int tau_max, const MassParam& m) {
    require_rational(m, "symmetry");
    Check c{"row-reflection-symmetry", true, ""};
    ExactRow row = seed_row(exact_mode);
    for (int tau = 1; tau <= tau_max; ++tau) {
        if (tau > 1) row_advance(row, m.rational());
        for (int lam = 1; lam <= tau; ++lam) {
            const int mirror = tau - lam;  // lam index of site -n
            const Rational lhs1 = row.A1[lam - 1];
            const Rational rhs1 = (mirror >= 1) ? row.A1[mirror - 1] : Rational{0};
            const int n = 2 * lam - tau;
            const Rational lhs2 = Rational{tau - n} * row.A2[lam - 1];
            const Rational rhs2 = Rational{tau + n - 2} * row.A2[tau - lam];  // site 2-n
            if (lhs1 != rhs1 || lhs2 != rhs2) {
                c.pass = false;
                c.detail = "first failure at tau=" + std::to_string(tau) + " n=" + std::to_string(n);
                return c;
            }
        }
    }
    c.detail = "component symmetries exact for every tau <= " + std::to_string(tau_max);
    return c;
}

Check check_series(int tau_max, const MassParam& m, const Limits& lim) {
    require_rational(m, "series");
    if (m.rational() != 1) {
        throw std::invalid_argument("suite 'series' is stated for mass 1 only");
    }
    Check c{"left-prob-central-binomial-series", true, ""};
    for (int t = 1; t <= tau_max; ++t) {
        if (!left_prob_series(t, m, lim).equal) {
            c.pass = false;
            c.detail = "first failure at t=" + std::to_string(t);
            return c;
        }
    }
    c.detail = "exact equality for every t <= " + std::to_string(tau_max);
    return c;
}

std::vector<Site> full_row_sites(int tau) {
    std::vector<Site> out;
    for (int lam = 1; lam <= tau; ++lam) out.push_back(from_rotated(RotatedSite{lam, tau - lam}));
    return out;
}

std::vector<Check> check_bypass(const MassParam& m, const Limits& lim) {
    require_rational(m, "bypass");
    std::vector<Check> out;
    {
        Check c{"full-row-absorption-sums-to-one", true, ""};
        for (int tau : {3, 5, 10}) {
            if (conservation_bypass(BypassSet{full_row_sites(tau)}, m, lim) != 1) {
                c.pass = false;
                c.detail = "failed for row tau=" + std::to_string(tau);
                break;
            }
        }
        if (c.pass) c.detail = "exact sum 1 for full rows tau in {3,5,10}";
        out.push_back(c);
    }
    {
        Check c{"wall-absorption-sums-to-one", true, ""};
        for (int n = 1; n <= 3 && c.pass; ++n) {
            for (int mu_hat = 1; mu_hat <= 2 && c.pass; ++mu_hat) {
                std::vector<Site> sites;
                for (int lam = 1; lam <= n; ++lam) {
                    sites.push_back(from_rotated(RotatedSite{lam, mu_hat}));
                }
                for (int mu = 0; mu < mu_hat; ++mu) {
                    sites.push_back(from_rotated(RotatedSite{n + mu_hat - mu, mu}));
                }
                if (conservation_bypass(BypassSet{sites}, m, lim) != 1) {
                    c.pass = false;
                    c.detail = "failed for wall n=" + std::to_string(n) +
                               " depth=" + std::to_string(mu_hat);
                }
            }
        }
        if (c.pass) c.detail = "exact sum 1 for wall sets n <= 3, depth <= 2";
        out.push_back(c);
    }
    {
        Check c{"vertex-flux-balance", true, ""};
        const auto v1 = kirchhoff_check(12, BypassSet{}, m, lim);
        const auto v2 = kirchhoff_check(12, BypassSet{{Site{2, 2}}}, m, lim);
        c.pass = v1.empty() && v2.empty();
        c.detail = std::to_string(v1.size() + v2.size()) +
                   " violations at free vertices up to tau=12";
        out.push_back(c);
    }
    return out;
}

std::vector<Check> check_linear(int tau_max, const MassParam& m, const Limits& lim) {
    require_rational(m, "linear");
    std::vector<Check> out;
    {
        Check c{"row-sum-gaussian-phase-exact", true, ""};
        for (int tau = 1; tau <= tau_max; ++tau) {
            if (!linear_identity_check(tau, m, lim).equal) {
                c.pass = false;
                c.detail = "first failure at tau=" + std::to_string(tau);
                break;
            }
        }
        if (c.pass) c.detail = "Gaussian-rational equality for every tau <= " + std::to_string(tau_max);
        out.push_back(c);
    }
    {
        Check c{"row-sum-sine-cosine-float", true, ""};
        const double theta = std::atan(m.value());
        double worst = 0.0;
        for (int tau = 1; tau <= tau_max; ++tau) {
            const LinearSumsFloat lf = linear_sums(tau, m, float_mode, lim);
            worst = std::max(worst, std::abs(lf.sum_a1 - std::sin((tau - 1) * theta)));
            worst = std::max(worst, std::abs(lf.sum_a2 - std::cos((tau - 1) * theta)));
        }
        c.pass = worst <= 1e-10;
        c.detail = "max deviation " + format_double(worst) + " for tau <= " + std::to_string(tau_max);
        out.push_back(c);
    }
    return out;
}

std::vector<Check> check_quadratic(const MassParam& m) {
    std::vector<Check> out;
    const struct {
        QuadKind kind;
        const char* name;
    } kinds[] = {{QuadKind::row_b1, "squared-row-sum-is-one"},
                 {QuadKind::col_b1, "squared-col-b1-sum-is-one"},
                 {QuadKind::col_b2, "squared-col-b2-sum-is-one"}};
    for (const auto& k : kinds) {
        Check c{k.name, true, ""};
        double worst = 0.0;
        for (int idx = 1; idx <= 10; ++idx) {
            const SeriesResult r = quadratic_sums(k.kind, idx, m);
            if (!r.converged) {
                c.pass = false;
                c.detail = "series did not converge at index " + std::to_string(idx);
                break;
            }
            worst = std::max(worst, std::abs(r.value - 1.0));
        }
        if (c.pass) {
            c.pass = worst <= 1e-9;
            c.detail = "max |sum - 1| = " + format_double(worst) + " for index <= 10";
        }
        out.push_back(c);
    }
    return out;
}

int run_verify(const std::string& suite, const std::string& mass_str, int tau_flag,
               const std::string& out_path) {
    const MassParam m = parse_mass(mass_str);
    const Limits lim = effective_limits();
    std::vector<Check> checks;
    int tau_used = 0;

    auto guarded = [&](int t) {
        const int cap = m.is_exact() ? lim.tau_max_exact : lim.tau_max_float;
        if (t > cap) {
            throw ResourceLimitError("verify: tau_max " + std::to_string(t) +
                                     " exceeds the depth ceiling " + std::to_string(cap));
        }
        return t;
    };

    auto run_one = [&](const std::string& name) {
        if (name == "conservation") {
            tau_used = guarded(suite_tau(tau_flag, 200));
            checks.push_back(check_conservation(tau_used, m, lim));
        } else if (name == "nonzero") {
            tau_used = guarded(suite_tau(tau_flag, 60));
            checks.push_back(check_nonzero(tau_used, m, lim));
        } else if (name == "velocity") {
            tau_used = guarded(suite_tau(tau_flag, 100));
            checks.push_back(check_velocity(tau_used, m, lim));
        } else if (name == "symmetry") {
            tau_used = guarded(suite_tau(tau_flag, 60));
            checks.push_back(check_symmetry(tau_used, m));
        } else if (name == "series") {
            tau_used = guarded(suite_tau(tau_flag, 200));
            checks.push_back(check_series(tau_used, m, lim));
        } else if (name == "bypass") {
            const auto more = check_bypass(m, lim);
            checks.insert(checks.end(), more.begin(), more.end());
        } else if (name == "linear") {
            tau_used = guarded(suite_tau(tau_flag, 200));
            const auto more = check_linear(tau_used, m, lim);
            checks.insert(checks.end(), more.begin(), more.end());
        } else if (name == "quadratic") {
            const auto more = check_quadratic(m);
            checks.insert(checks.end(), more.begin(), more.end());
        } else {
            throw std::invalid_argument("unknown suite: " + name);
        }
    };

    if (suite == "all") {
        for (const char* name : {"conservation", "nonzero", "velocity", "symmetry", "series",
                                 "bypass", "linear", "quadratic"}) {
            run_one(name);
        }
    } else {
        run_one(suite);
    }

    int passed = 0;
    int failed = 0;
    ordered_json jchecks = ordered_json::array();
    for (const Check& c : checks) {
        (c.pass ? passed : failed) += 1;
        jchecks.push_back({{"name", c.name}, {"status", c.pass ? "pass" : "fail"},
                           {"detail", c.detail}});
    }
    ordered_json summary{{"suite", suite},
                         {"mass", m.str()},
                         {"tau_max", tau_used},
                         {"checks", jchecks},
                         {"passed", passed},
                         {"failed", failed},
                         {"status", failed == 0 ? "pass" : "fail"}};
    std::ofstream file;
    std::ostream& os = open_output(file, out_path);
    os << summary.dump(2) << "\n";
    return failed == 0 ? kExitOk : kExitVerifyFailed;
}

// ---------------- identities ----------------

struct IdentityRow {
    std::string name;
    std::string parameters;
    double lhs = 0.0;
    double rhs = 0.0;
    bool converged = false;
    long terms_used = 0;
    std::optional<double> rhs_alt;
    bool unresolved = false;
};

int run_identities(int index_max, int mu_max, const std::string& mass_str, double tol,
                   const std::string& format, const std::string& out_path) {
    if (index_max < 1 || index_max > 10 || mu_max < 1 || mu_max > 10) {
        throw std::invalid_argument("--index-max and --mu-max must be in [1, 10]");
    }
    if (tol <= 0) throw std::invalid_argument("--tol must be positive");
    if (format != "csv" && format != "json") {
        throw std::invalid_argument("--format must be csv or json");
    }
    const MassParam m = parse_mass(mass_str);
    std::vector<IdentityRow> rows;

    for (int idx = 1; idx <= index_max; ++idx) {
        const std::string prow = "mu=" + std::to_string(idx) + ";mass=" + m.str();
        const std::string pcol = "lam=" + std::to_string(idx) + ";mass=" + m.str();
        const RowSums rs = rotated_row_sum(idx, m, tol);
        rows.push_back({"row-sum-b1", prow, rs.b1.value, rs.target_b1, rs.b1.converged,
                        rs.b1.terms_used, std::nullopt, false});
        rows.push_back({"row-sum-b2", prow, rs.b2.value, rs.target_b2, rs.b2.converged,
                        rs.b2.terms_used, std::nullopt, false});
        const ColSums cs = rotated_col_sum(idx, m, tol);
        rows.push_back({"col-sum-b1", pcol, cs.b1.value, cs.target_b1, cs.b1.converged,
                        cs.b1.terms_used, std::nullopt, false});
        rows.push_back({"col-sum-b2", pcol, cs.b2.value, cs.target_b2, cs.b2.converged,
                        cs.b2.terms_used, std::nullopt, false});
        const SeriesResult q1 = quadratic_sums(QuadKind::row_b1, idx, m, tol);
        rows.push_back({"quad-row-b1", prow, q1.value, 1.0, q1.converged, q1.terms_used,
                        std::nullopt, false});
        const SeriesResult q2 = quadratic_sums(QuadKind::col_b1, idx, m, tol);
        rows.push_back({"quad-col-b1", pcol, q2.value, 1.0, q2.converged, q2.terms_used,
                        std::nullopt, false});
        const SeriesResult q3 = quadratic_sums(QuadKind::col_b2, idx, m, tol);
        rows.push_back({"quad-col-b2", pcol, q3.value, 1.0, q3.converged, q3.terms_used,
                        std::nullopt, false});
    }

    for (const ConjectureItem& item : conjecture_report(mu_max, m, tol)) {
        IdentityRow r;
        r.name = "conjecture-" + std::to_string(item.item);
        const std::string mass_text = (item.item == 1) ? m.str() : std::string("1");
        r.parameters = "mu=" + std::to_string(item.mu_row) + ";mass=" + mass_text;
        r.lhs = item.series.value;
        r.rhs = item.rhs;
        r.converged = item.series.converged;
        r.terms_used = item.series.terms_used;
        if (!std::isnan(item.rhs_alt)) r.rhs_alt = item.rhs_alt;
        r.unresolved = item.unresolved;
        rows.push_back(r);
    }

    std::ofstream file;
    std::ostream& os = open_output(file, out_path);
    if (format == "csv") {
        os << "name,parameters,lhs,rhs,abs_diff,converged,terms_used,rhs_alt,abs_diff_alt,unresolved\n";
        for (const IdentityRow& r : rows) {
            os << r.name << ',' << r.parameters << ',' << format_double(r.lhs) << ','
               << format_double(r.rhs) << ',' << format_double(std::abs(r.lhs - r.rhs)) << ','
               << (r.converged ? "true" : "false") << ',' << r.terms_used << ',';
            if (r.rhs_alt) {
                os << format_double(*r.rhs_alt) << ',' << format_double(std::abs(r.lhs - *r.rhs_alt));
            } else {
                os << ',';
            }
            os << ',' << (r.unresolved ? "true" : "false") << '\n';
        }
    } else {
        ordered_json arr = ordered_json::array();
        for (const IdentityRow& r : rows) {
            ordered_json j{{"name", r.name},       {"parameters", r.parameters},
                           {"lhs", r.lhs},         {"rhs", r.rhs},
                           {"abs_diff", std::abs(r.lhs - r.rhs)},
                           {"converged", r.converged},
                           {"terms_used", r.terms_used}};
            if (r.rhs_alt) {
                j["rhs_alt"] = *r.rhs_alt;
                j["abs_diff_alt"] = std::abs(r.lhs - *r.rhs_alt);
            } else {
                j["rhs_alt"] = nullptr;
                j["abs_diff_alt"] = nullptr;
            }
            j["unresolved"] = r.unresolved;
            arr.push_back(j);
        }
        os << arr.dump(2) << "\n";
    }
    return kExitOk;
}

// ---------------- bypass ----------------

int run_bypass(const std::string& set_path, const ModeChoice& mc, bool conservation, int n,
               int tau, bool have_query) {
    const Limits lim = effective_limits();
    const BypassSet T = load_bypass_set_file(set_path);
    if (conservation) {
        if (!mc.exact) {
            throw std::invalid_argument("conservation is an exact check; pass a rational mass");
        }
        const Rational total = conservation_bypass(T, mc.mass, lim);
        std::cout << "sum=" << format_rational(total) << "\n";
        return kExitOk;
    }
    if (have_query) {
        if (tau < 1) throw InvalidSiteError("tau must be >= 1");
        const Site s{n, tau};
        if (!reachable(s)) {
            throw InvalidSiteError("site (" + std::to_string(n) + "," + std::to_string(tau) +
                                   ") is not reachable (parity or light cone)");
        }
        if (mc.exact) {
            print_exact_record(std::cout, amplitude_bypass(s, T, mc.mass, exact_mode,
                                                           std::nullopt, lim), mc.mass);
        } else {
            print_float_record(std::cout, amplitude_bypass(s, T, mc.mass, float_mode,
                                                           std::nullopt, lim));
        }
        return kExitOk;
    }
    if (T.empty()) throw std::invalid_argument("bypass set is empty; nothing to report");
    if (mc.exact) {
        const BypassRun run = bypass_run(T.max_tau(), T, mc.mass, exact_mode, lim);
        for (const BypassRecord& rec : run.recorded) {
            std::cout << "n=" << rec.site.n << " tau=" << rec.site.tau
                      << " A1=" << format_rational(rec.arrival.A1)
                      << " A2=" << format_rational(rec.arrival.A2) << " k=" << rec.arrival.k
                      << " P=" << format_rational(prob(rec.arrival, mc.mass)) << "\n";
        }
    } else {
        const BypassRunFloat run = bypass_run(T.max_tau(), T, mc.mass, float_mode, lim);
        for (const BypassRecordFloat& rec : run.recorded) {
            std::cout << "n=" << rec.site.n << " tau=" << rec.site.tau
                      << " a1=" << format_double(rec.arrival.a1)
                      << " a2=" << format_double(rec.arrival.a2)
                      << " P=" << format_double(rec.arrival.prob()) << "\n";
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Feynman-checkers lattice walk: amplitudes, distributions, identity checks"};
    app.require_subcommand(1);

    // amplitude
    auto* cmd_amp = app.add_subcommand("amplitude", "Amplitude and probability at one site");
    int amp_n = 0;
    int amp_tau = 1;
    std::string amp_mass;
    std::string amp_mode;
    std::string amp_method = "dp";
    cmd_amp->add_option("--n", amp_n, "Spatial index n")->required();
    cmd_amp->add_option("--tau", amp_tau, "Time row tau >= 1")->required();
    cmd_amp->add_option("--mass", amp_mass, "Mass: p/q rational or decimal")->required();
    cmd_amp->add_option("--mode", amp_mode, "exact or float (default by mass form)");
    cmd_amp->add_option("--method", amp_method, "dp, closed, or oracle");

    // distribution
    auto* cmd_dist = app.add_subcommand("distribution", "CSV probability distribution of a row");
    int dist_tau = 1;
    std::string dist_mass;
    std::string dist_mode;
    std::string dist_out;
    bool dist_totals = false;
    cmd_dist->add_option("--tau", dist_tau, "Time row tau >= 1")->required();
    cmd_dist->add_option("--mass", dist_mass, "Mass: p/q rational or decimal")->required();
    cmd_dist->add_option("--mode", dist_mode, "exact or float (default by mass form)");
    cmd_dist->add_option("--output", dist_out, "Output file (default stdout)");
    cmd_dist->add_flag("--totals", dist_totals, "Append a totals row");

    // verify
    auto* cmd_ver = app.add_subcommand("verify", "Run an invariant suite, print a JSON summary");
    std::string ver_suite;
    std::string ver_mass = "1";
    int ver_tau = 0;
    std::string ver_out;
    cmd_ver->add_option("--suite", ver_suite,
                        "conservation|nonzero|velocity|symmetry|series|bypass|linear|quadratic|all")
        ->required();
    cmd_ver->add_option("--mass", ver_mass, "Mass (default 1)");
    cmd_ver->add_option("--tau-max", ver_tau, "Depth override (default per suite)");
    cmd_ver->add_option("--output", ver_out, "Output file (default stdout)");

    // identities
    auto* cmd_id = app.add_subcommand("identities", "Series identity report (CSV or JSON)");
    int id_index_max = 4;
    int id_mu_max = 4;
    std::string id_mass = "1";
    double id_tol = 1e-9;
    std::string id_format = "csv";
    std::string id_out;
    cmd_id->add_option("--index-max", id_index_max, "Row/column sums up to this index (<= 10)");
    cmd_id->add_option("--mu-max", id_mu_max, "Conjectured sums up to this depth (<= 10)");
    cmd_id->add_option("--mass", id_mass, "Mass for the non-unit-mass rows (default 1)");
    cmd_id->add_option("--tol", id_tol, "Truncation tolerance (default 1e-9)");
    cmd_id->add_option("--format", id_format, "csv or json");
    cmd_id->add_option("--output", id_out, "Output file (default stdout)");

    // bypass
    auto* cmd_by = app.add_subcommand("bypass", "Absorbing-set amplitudes and conservation");
    std::string by_set;
    std::string by_mass = "1";
    std::string by_mode;
    bool by_cons = false;
    int by_n = 0;
    int by_tau = 0;
    cmd_by->add_option("--set", by_set, "JSON file with [[n,tau],...] absorbing sites")->required();
    cmd_by->add_option("--mass", by_mass, "Mass (default 1)");
    cmd_by->add_option("--mode", by_mode, "exact or float (default by mass form)");
    cmd_by->add_flag("--conservation", by_cons, "Print the absorbed-probability sum");
    auto* opt_by_n = cmd_by->add_option("--n", by_n, "Query site: spatial index");
    auto* opt_by_tau = cmd_by->add_option("--tau", by_tau, "Query site: time row");
    opt_by_n->needs(opt_by_tau);
    opt_by_tau->needs(opt_by_n);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitBadArgs;
    }

    try {
        if (app.got_subcommand(cmd_amp)) {
            return run_amplitude(amp_n, amp_tau, resolve_mode(amp_mass, amp_mode), amp_method);
        }
        if (app.got_subcommand(cmd_dist)) {
            return run_distribution(dist_tau, resolve_mode(dist_mass, dist_mode), dist_totals,
                                    dist_out);
        }
        if (app.got_subcommand(cmd_ver)) {
            return run_verify(ver_suite, ver_mass, ver_tau, ver_out);
        }
        if (app.got_subcommand(cmd_id)) {
            return run_identities(id_index_max, id_mu_max, id_mass, id_tol, id_format, id_out);
        }
        if (app.got_subcommand(cmd_by)) {
            const bool have_query = opt_by_n->count() > 0;
            return run_bypass(by_set, resolve_mode(by_mass, by_mode), by_cons, by_n, by_tau,
                              have_query);
        }
    } catch (const NonBlockingError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNonBlocking;
    } catch (const ResourceLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitResource;
    } catch (const InvalidSiteError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadArgs;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadArgs;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadArgs;
    }
    return kExitBadArgs;
}
