#include "qkdcal/calibration.hpp"

#include <cmath>
#include <stdexcept>

namespace qkdcal {

namespace {
// Slack for constraints produced by floating-point inversion of exactly
// saturating measurement models (eta + |b| = 1).
constexpr double kConstraintTol = 1e-12;
// sin(pi) evaluates to ~1.2e-16 in double arithmetic; anything this close to
// the endpoints is treated as singular.
constexpr double kSingularAngleTol = 1e-12;
}  // namespace

CalibrationParams::CalibrationParams(double x1, double x2, double x3, double x4, double theta)
    : x1_(x1), x2_(x2), x3_(x3), x4_(x4), theta_(theta) {
    if (!(x2 >= 1.0 + std::fabs(x1) - kConstraintTol)) {
        throw std::domain_error("CalibrationParams: x2 < 1 + |x1|");
    }
    if (!(x4 >= 1.0 + std::fabs(x3) - kConstraintTol)) {
        throw std::domain_error("CalibrationParams: x4 < 1 + |x3|");
    }
    if (!(std::sin(theta) > kSingularAngleTol)) {
        throw std::domain_error("CalibrationParams: sin(theta) <= 0");
    }
}

CalibrationParams CalibrationParams::identity() {
    return CalibrationParams(0.0, 1.0, 0.0, 1.0, std::acos(-1.0) / 2.0);
}

DataMatrix diagonal_data(const SymmetricObservation& s) {
    if (!(s.sigma >= 0.0 && s.sigma <= 1.0)) {
        throw std::domain_error("diagonal_data: sigma outside [0,1]");
    }
    DataMatrix m;
    m.d[1][1] = s.sigma;
    m.d[2][2] = s.sigma;
    return m;
}

Mat3 s_matrix(const CalibrationParams& p) {
    return {{{1.0, 0.0, 0.0}, {p.x1(), p.x2(), 0.0}, {p.x3(), 0.0, p.x4()}}};
}

Mat3 r_matrix(double theta) {
    const double s = std::sin(theta);
    if (!(s > kSingularAngleTol)) {
        throw std::domain_error("r_matrix: sin(theta) <= 0, transform singular");
    }
    const double cot = std::cos(theta) / s;
    const double csc = 1.0 / s;
    return {{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, -cot, csc}}};
}

Mat3 mat_mul(const Mat3& a, const Mat3& b) {
    Mat3 c{};
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

DataMatrix transform(const DataMatrix& d, const CalibrationParams& p) {
    DataMatrix out;
    out.d = mat_mul(s_matrix(p), mat_mul(r_matrix(p.theta()), d.d));
    return out;
}

DataMatrix rs_transform(const DataMatrix& d, const CalibrationParams& p) {
    DataMatrix out;
    out.d = mat_mul(r_matrix(p.theta()), mat_mul(s_matrix(p), d.d));
    return out;
}

Feasibility feasible(const DataMatrix& dbar) {
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (!(std::fabs(dbar.d[i][j]) <= 1.0 + kProbClamp)) {
                return {false, "entry out of [-1,1] at (row " + std::to_string(i) + ", col " +
                                   std::to_string(j) + ")"};
            }
        }
    }
    for (int a = 1; a <= 2; ++a) {
        for (int b = 1; b <= 2; ++b) {
            std::string why;
            if (!triple_valid(dbar.triple(a, b), &why)) {
                return {false, "pair (row " + std::to_string(a) + ", col " + std::to_string(b) +
                                   "): " + why};
            }
        }
    }
    return {};
}

Feasibility validate_data(const DataMatrix& d) {
    if (d.d[0][0] != 1.0) return {false, "d[0][0] != 1"};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (std::isnan(d.d[i][j]))
                return {false, "undefined cell at (row " + std::to_string(i) + ", col " +
                                   std::to_string(j) + ")"};
    return feasible(d);
}

bool is_diagonal(const DataMatrix& d, double tol) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j && std::fabs(d.d[i][j]) > tol) return false;
    return true;
}

}  // namespace qkdcal
