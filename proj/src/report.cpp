#include "indelphy/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "indelphy/stats.hpp"

namespace indelphy {

namespace {

std::string short_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// CSV cells are unquoted; free-text fields drop the separator characters.
std::string csv_safe(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) out.push_back((c == ',' || c == '\n' || c == '\r') ? ' ' : c);
    return out;
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CheckResult mean_check(std::string name, double observed, double expected, double se,
                       std::size_t n, double z_limit) {
    CheckResult c;
    c.name = std::move(name);
    c.kind = "mean";
    c.observed = observed;
    c.expected = expected;
    c.se = se;
    c.n = n;
    c.z = z_score(observed, expected, se);
    c.pass = std::fabs(c.z) <= z_limit;
    return c;
}

bool RunReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

void RunReport::write_text(std::ostream& os) const {
    os << "== " << title << " ==\n";
    os << "seed: " << seed << "\n";
    if (!config_echo.empty()) {
        os << "config:\n";
        for (const auto& [k, v] : config_echo) os << "  " << k << " = " << v << "\n";
    }
    if (!replicates.empty()) {
        std::size_t ok = 0, rf0 = 0, with_rf = 0;
        double sup = 0.0;
        bool any_sup = false;
        for (const auto& r : replicates) {
            if (r.ok) ++ok;
            if (r.rf >= 0) {
                ++with_rf;
                if (r.rf == 0) ++rf0;
            }
            if (!std::isnan(r.sup_error)) {
                any_sup = true;
                sup = std::max(sup, r.sup_error);
            }
        }
        os << "replicates: " << replicates.size() << " (" << ok << " ok)\n";
        if (with_rf > 0)
            os << "exact topology: " << rf0 << "/" << with_rf << "\n";
        if (any_sup) os << "max distance sup-error: " << short_double(sup) << "\n";
    }
    if (!checks.empty()) {
        os << "checks:\n";
        for (const auto& c : checks) {
            os << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name << " (" << c.kind
               << "): observed " << short_double(c.observed) << ", expected "
               << short_double(c.expected) << ", se " << short_double(c.se) << ", z "
               << short_double(c.z) << ", n " << c.n;
            if (!c.note.empty()) os << "  # " << c.note;
            os << "\n";
        }
        os << "overall: " << (all_pass() ? "PASS" : "FAIL") << "\n";
    }
    for (const auto& [label, sec] : timings)
        os << "time: " << label << " " << short_double(sec) << " s\n";
}

void RunReport::write_replicates_csv(std::ostream& os) const {
    os << "replicate,k_r,rf,sup_error,inf_entries,good_event,ok,error\n";
    for (const auto& r : replicates) {
        os << r.index << ',' << r.k_r << ',';
        if (r.rf >= 0) os << r.rf;
        os << ',';
        if (!std::isnan(r.sup_error)) os << format_double(r.sup_error);
        os << ',' << r.inf_entries << ',';
        if (r.good_event >= 0) os << r.good_event;
        os << ',' << (r.ok ? 1 : 0) << ',' << csv_safe(r.error) << '\n';
    }
}

void RunReport::write_checks_csv(std::ostream& os) const {
    os << "name,kind,observed,expected,se,z,n,pass,note\n";
    for (const auto& c : checks) {
        os << csv_safe(c.name) << ',' << c.kind << ',' << format_double(c.observed) << ','
           << format_double(c.expected) << ',' << format_double(c.se) << ',' << format_double(c.z)
           << ',' << c.n << ',' << (c.pass ? 1 : 0) << ',' << csv_safe(c.note) << '\n';
    }
}

}  // namespace indelphy
