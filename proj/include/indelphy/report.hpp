#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace indelphy {

// One statistical or exact verdict. Mean-style checks carry observed/expected
// with a standard error and z = (observed - expected)/se; bound- and
// frequency-style checks reuse the same fields with kind-specific meaning,
// recorded in `kind` and `note`. Sample size always accompanies the verdict.
struct CheckResult {
    std::string name;
    std::string kind;  // mean | bound | freq | slope | exact | trend | info
    double observed = 0.0;
    double expected = 0.0;
    double se = 0.0;
    double z = 0.0;
    std::size_t n = 0;
    bool pass = false;
    std::string note;
};

CheckResult mean_check(std::string name, double observed, double expected, double se,
                       std::size_t n, double z_limit = 5.0);

// One experiment replicate. Fields not meaningful for a given run keep their
// sentinel (-1 / NaN) and serialize as empty CSV cells.
struct ReplicateRow {
    std::size_t index = 0;
    std::size_t k_r = 0;
    long long rf = -1;
    double sup_error = std::numeric_limits<double>::quiet_NaN();
    std::size_t inf_entries = 0;
    int good_event = -1;  // 1/0 when diagnosed, -1 when not applicable
    bool ok = true;
    std::string error;
};

struct RunReport {
    std::string title;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> config_echo;
    std::vector<ReplicateRow> replicates;
    std::vector<CheckResult> checks;
    // wall-clock section, human-readable output only; never serialized to CSV
    std::vector<std::pair<std::string, double>> timings;

    bool all_pass() const;
    void add_timing(std::string label, double seconds) {
        timings.emplace_back(std::move(label), seconds);
    }

    // Human-readable summary (the only place timings appear).
    void write_text(std::ostream& os) const;
    // Machine-readable tables; byte-identical for identical config + seed.
    void write_replicates_csv(std::ostream& os) const;
    void write_checks_csv(std::ostream& os) const;
};

// Full-precision decimal form that round-trips a double ("%.17g"); "inf",
// "-inf", "nan" for the non-finite values.
std::string format_double(double v);

}  // namespace indelphy
