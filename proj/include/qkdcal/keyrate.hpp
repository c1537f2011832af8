#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qkdcal/calibration.hpp"
#include "qkdcal/entropy.hpp"

namespace qkdcal {

struct OptimizerOptions {
    double x_max = 8.0;       // upper bound of the x2/x4 search box
    int grid_points = 33;     // coarse grid resolution per coordinate
    int starts = 8;           // number of grid points refined by descent
    int descent_rounds = 24;  // coordinate-descent sweeps per start
    double theta_eps = 1e-6;  // theta restricted to (eps, pi - eps)
    double zero_tol = 1e-9;   // |E| below this saturates the bound at 1
    bool force_optimizer = false;  // skip the analytic diagonal shortcut
    // Feasible parameter points the returned bound must dominate; each is
    // evaluated alongside the search.
    std::vector<CalibrationParams> probes;
};

struct OptimizerTrace {
    std::int64_t evaluations = 0;
    int iterations = 0;
    CalibrationParams best = CalibrationParams::identity();
    double min_abs_corr = 1.0;     // minimized |E(X'bar Y')|
    double feasibility_margin = 0.0;  // smallest reconstruction slack at best
};

struct KeyRateReport {
    double mutual_info = 0.0;
    double adversary_bound = 0.0;
    double rate = 0.0;
    double rate_clamped = 0.0;
    std::optional<double> qber;
    std::optional<OptimizerTrace> trace;
};

struct AdversaryBound {
    double bits = 0.0;
    CalibrationParams best = CalibrationParams::identity();
    OptimizerTrace trace;
};

// Analytic symmetric-error rate: mutual_info = 1 - h2(q),
// adversary_bound = h2(q), rate = 1 - 2 h2(q). q in [0, 1/2].
KeyRateReport symmetric_rate(double qber);

// Closed-form maximum h2((1 - sigma)/2) of the calibration-robust bound for
// the symmetric observation diag(1, sigma, sigma).
double symmetric_adversary_bound(const SymmetricObservation& s);

// Supremum over feasible calibration parameters of
// h2((1 - E(X'bar Y'))/2) evaluated on transform(d, p). Throws
// infeasible_error when d admits no feasible calibration.
AdversaryBound general_adversary_bound(const DataMatrix& d, const OptimizerOptions& opts = {});

// Full chain: mutual information of the (X, Y) pair minus the adversary
// bound (analytic path for diagonal d unless opts.force_optimizer).
KeyRateReport rate_from_data(const DataMatrix& d, const OptimizerOptions& opts = {});

// Root of 1 - 2 h2(Q) on (0, 1/2) by bisection to 1e-9.
double threshold_qber();

}  // namespace qkdcal
