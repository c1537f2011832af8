#pragma once

#include <string>
#include <vector>

namespace qkdcal {

struct CheckResult {
    std::string name;
    double measured = 0.0;   // deviation or headline value, check-specific
    std::string criterion;   // human-readable pass condition
    bool pass = false;
};

// Built-in oracle suite: symbolic regression of the calibration transform,
// measurement-inversion round trip, dense-grid vs optimizer agreement and
// the QBER threshold cross-check. `deep` enlarges grids and sample counts.
std::vector<CheckResult> run_self_checks(bool deep);

}  // namespace qkdcal
