#pragma once

#include <string>
#include <vector>

namespace wptsim::validation {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

// Acceptance checks, in order. Each is self-contained; `scratch_dir` holds
// experiment outputs (and lets the determinism check reuse the stationary
// run when the whole battery executes in order).
std::vector<std::string> check_names();
CheckResult run_check(const std::string& name, const std::string& scratch_dir);
std::vector<CheckResult> run_all(const std::string& scratch_dir);

}  // namespace wptsim::validation
