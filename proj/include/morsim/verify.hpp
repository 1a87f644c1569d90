#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace morsim {

struct VerifyOptions {
    /// Mutation fixture: propagate the b modes with the wrong rotation sign.
    bool inject_b_sign_error = false;
    /// Worker threads for fringe scans; the report does not depend on it.
    unsigned threads = 1;
};

struct CheckResult {
    std::string name;
    double max_error = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool all_passed() const;
};

/// Oracle-equivalence and invariant suite.
VerifyReport run_verify(const VerifyOptions& options = {});

/// One line per check; floats with 17 significant digits.
void write_report(const VerifyReport& report, std::ostream& out);

}  // namespace morsim
