#include "qkdcal/keyrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace qkdcal {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDiagonalTol = 1e-9;

// Smallest reconstruction slack across the four pairwise joints and the
// entry box; negative means infeasible.
double feasibility_margin(const DataMatrix& dbar) {
    double margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) margin = std::min(margin, 1.0 - std::fabs(dbar.d[i][j]));
    for (int a = 1; a <= 2; ++a) {
        for (int b = 1; b <= 2; ++b) {
            const CorrelationTriple c = dbar.triple(a, b);
            for (double sa : {+1.0, -1.0})
                for (double sb : {+1.0, -1.0})
                    margin = std::min(margin,
                                      (1.0 + sa * c.ex + sb * c.ey + sa * sb * c.exy) / 4.0);
        }
    }
    return margin;
}

// Search state for the |E(X'bar Y')| minimization. The objective and the
// feasibility of rows 0 and 2 of the transformed matrix depend only on
// (x3, x4, theta); x1 = 0, x2 = 1 keeps row 1 feasible for any valid input.
class BoundSearch {
public:
    explicit BoundSearch(const DataMatrix& d) : d_(d) {}

    std::int64_t evaluations() const { return evaluations_; }
    bool found() const { return found_; }
    double best_value() const { return best_value_; }
    std::tuple<double, double, double> best_point() const { return {bx3_, bx4_, btheta_}; }
    double best_margin() const { return best_margin_; }

    // Returns |t| at (x3, x4, theta) or +inf when infeasible or outside the
    // parameter box (coordinate scans can momentarily leave it).
    double evaluate(double x3, double x4, double theta) {
        if (x4 < 1.0 || std::fabs(x3) > x4 - 1.0 + 1e-12) {
            return std::numeric_limits<double>::infinity();
        }
        ++evaluations_;
        const CalibrationParams p(0.0, 1.0, x3, x4, theta);
        const DataMatrix dbar = transform(d_, p);
        const double margin = feasibility_margin(dbar);
        if (margin < -kProbClamp) return std::numeric_limits<double>::infinity();
        const double value = std::fabs(dbar.d[2][2]);
        consider(value, x3, x4, theta, margin);
        return value;
    }

private:
    void consider(double value, double x3, double x4, double theta, double margin) {
        const auto key = std::make_tuple(x3, x4, theta);
        if (value < best_value_ - 1e-15 ||
            (value < best_value_ + 1e-15 && (!found_ || key < best_point()))) {
            found_ = true;
            best_value_ = std::min(best_value_, value);
            bx3_ = x3;
            bx4_ = x4;
            btheta_ = theta;
            best_margin_ = margin;
        }
    }

    const DataMatrix& d_;
    std::int64_t evaluations_ = 0;
    bool found_ = false;
    double best_value_ = std::numeric_limits<double>::infinity();
    double bx3_ = 0.0, bx4_ = 1.0, btheta_ = kPi / 2.0;
    double best_margin_ = 0.0;
};

struct GridPoint {
    double value;
    double x3, x4, theta;
    bool operator<(const GridPoint& o) const {
        return std::tie(value, x3, x4, theta) < std::tie(o.value, o.x3, o.x4, o.theta);
    }
};

}  // namespace

KeyRateReport symmetric_rate(double qber) {
    if (!(qber >= 0.0 && qber <= 0.5)) {
        throw std::domain_error("symmetric_rate: QBER outside [0, 1/2]");
    }
    KeyRateReport r;
    r.qber = qber;
    r.adversary_bound = binary_entropy(qber);
    r.mutual_info = 1.0 - r.adversary_bound;
    r.rate = r.mutual_info - r.adversary_bound;
    r.rate_clamped = std::max(0.0, r.rate);
    return r;
}

double symmetric_adversary_bound(const SymmetricObservation& s) {
    if (!(s.sigma >= 0.0 && s.sigma <= 1.0)) {
        throw std::domain_error("symmetric_adversary_bound: sigma outside [0,1]");
    }
    return binary_entropy((1.0 - s.sigma) / 2.0);
}

AdversaryBound general_adversary_bound(const DataMatrix& d, const OptimizerOptions& opts) {
    const Feasibility valid = validate_data(d);
    if (!valid.ok) throw infeasible_error("general_adversary_bound: invalid data: " + valid.detail);

    BoundSearch search(d);
    const double theta_lo = opts.theta_eps;
    const double theta_hi = kPi - opts.theta_eps;
    const int n = std::max(3, opts.grid_points);

    // Coarse grid; x4 = 1, x3 = 0, theta = pi/2 are always included.
    std::vector<double> theta_grid;
    for (int i = 0; i < n; ++i)
        theta_grid.push_back(theta_lo + (theta_hi - theta_lo) * i / (n - 1));
    theta_grid.push_back(kPi / 2.0);
    std::sort(theta_grid.begin(), theta_grid.end());

    std::vector<GridPoint> grid;
    for (int i4 = 0; i4 < n; ++i4) {
        const double x4 = 1.0 + (opts.x_max - 1.0) * i4 / (n - 1);
        const double x3_max = x4 - 1.0;
        const int n3 = x3_max > 0.0 ? (n | 1) : 1;  // odd count keeps x3 = 0 on the grid
        for (int i3 = 0; i3 < n3; ++i3) {
            const double x3 = n3 == 1 ? 0.0 : -x3_max + 2.0 * x3_max * i3 / (n3 - 1);
            for (double theta : theta_grid) {
                const double v = search.evaluate(x3, x4, theta);
                if (std::isfinite(v)) grid.push_back({v, x3, x4, theta});
            }
        }
    }
    if (!search.found()) {
        throw infeasible_error(
            "general_adversary_bound: no feasible calibration parameters found");
    }

    // Coordinate descent from the best grid points.
    std::sort(grid.begin(), grid.end());
    const int starts = std::min<int>(opts.starts, static_cast<int>(grid.size()));
    int iterations = 0;
    for (int s = 0; s < starts; ++s) {
        double x3 = grid[s].x3, x4 = grid[s].x4, theta = grid[s].theta;
        double best = grid[s].value;
        for (int round = 0; round < opts.descent_rounds; ++round) {
            ++iterations;
            const double before = best;
            // One line scan + shrink per coordinate.
            auto line = [&](int coord) {
                double lo, hi;
                if (coord == 0) {
                    lo = -(x4 - 1.0);
                    hi = x4 - 1.0;
                } else if (coord == 1) {
                    lo = 1.0;
                    hi = opts.x_max;
                } else {
                    lo = theta_lo;
                    hi = theta_hi;
                }
                if (hi <= lo) return;
                const int samples = 33;
                double arg = coord == 0 ? x3 : coord == 1 ? x4 : theta;
                for (int shrink = 0; shrink < 10; ++shrink) {
                    double best_arg = arg;
                    for (int i = 0; i <= samples; ++i) {
                        const double candidate = lo + (hi - lo) * i / samples;
                        const double v =
                            coord == 0   ? search.evaluate(candidate, x4, theta)
                            : coord == 1 ? search.evaluate(x3, candidate, theta)
                                         : search.evaluate(x3, x4, candidate);
                        if (v < best) {
                            best = v;
                            best_arg = candidate;
                        }
                    }
                    arg = best_arg;
                    const double span = (hi - lo) / samples;
                    lo = std::max(lo, arg - span);
                    hi = std::min(hi, arg + span);
                }
                if (coord == 0)
                    x3 = arg;
                else if (coord == 1)
                    x4 = arg;
                else
                    theta = arg;
                // Shrinking x4 may strand x3 outside its box.
                x3 = std::clamp(x3, -(x4 - 1.0), x4 - 1.0);
            };
            line(0);
            line(1);
            line(2);
            if (before - best < 1e-15) break;
        }
    }

    double min_abs = search.best_value();
    auto [bx3, bx4, btheta] = search.best_point();
    CalibrationParams best_params(0.0, 1.0, bx3, bx4, btheta);
    double margin = search.best_margin();

    // Caller-supplied probe points participate in the supremum directly.
    for (const CalibrationParams& p : opts.probes) {
        const DataMatrix dbar = transform(d, p);
        const double m = feasibility_margin(dbar);
        if (m < -kProbClamp) continue;
        const double value = std::fabs(dbar.d[2][2]);
        if (value < min_abs) {
            min_abs = value;
            best_params = p;
            margin = m;
        }
    }

    AdversaryBound out;
    out.bits = min_abs <= opts.zero_tol ? 1.0 : binary_entropy((1.0 - min_abs) / 2.0);
    out.best = best_params;
    out.trace.evaluations = search.evaluations();
    out.trace.iterations = iterations;
    out.trace.best = best_params;
    out.trace.min_abs_corr = min_abs;
    out.trace.feasibility_margin = margin;
    return out;
}

KeyRateReport rate_from_data(const DataMatrix& d, const OptimizerOptions& opts) {
    const Feasibility valid = validate_data(d);
    if (!valid.ok) throw infeasible_error("rate_from_data: invalid data: " + valid.detail);

    KeyRateReport r;
    r.mutual_info = mutual_information(joint_from_correlations(d.triple(1, 1)));

    if (!opts.force_optimizer && is_diagonal(d, kDiagonalTol)) {
        r.adversary_bound = binary_entropy((1.0 - std::fabs(d.d[2][2])) / 2.0);
    } else {
        const AdversaryBound b = general_adversary_bound(d, opts);
        r.adversary_bound = b.bits;
        r.trace = b.trace;
    }
    r.rate = r.mutual_info - r.adversary_bound;
    r.rate_clamped = std::max(0.0, r.rate);

    // QBER is defined for uniform marginals of the key-generating pair.
    if (std::fabs(d.d[1][0]) <= kDiagonalTol && std::fabs(d.d[0][1]) <= kDiagonalTol &&
        d.d[1][1] >= 0.0) {
        r.qber = (1.0 - d.d[1][1]) / 2.0;
    }
    return r;
}

double threshold_qber() {
    double lo = 1e-12, hi = 0.5 - 1e-12;
    // 1 - 2 h2 is positive at lo, negative at hi; bisect to 1e-9.
    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
        const double mid = (lo + hi) / 2.0;
        if (1.0 - 2.0 * binary_entropy(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return (lo + hi) / 2.0;
}

}  // namespace qkdcal
