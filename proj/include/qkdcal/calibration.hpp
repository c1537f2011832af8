#pragma once

#include <array>
#include <string>

#include "qkdcal/entropy.hpp"

namespace qkdcal {

using Mat3 = std::array<std::array<double, 3>, 3>;

// Unsharpness parameters x1..x4 of Alice's two measurements plus the relative
// angle theta between their Bloch axes. Construction enforces
// x2 >= 1+|x1|, x4 >= 1+|x3| and sin(theta) > 0.
class CalibrationParams {
public:
    CalibrationParams(double x1, double x2, double x3, double x4, double theta);

    double x1() const { return x1_; }
    double x2() const { return x2_; }
    double x3() const { return x3_; }
    double x4() const { return x4_; }
    double theta() const { return theta_; }

    // Identity calibration: sharp, unbiased, mutually unbiased measurements.
    static CalibrationParams identity();

    friend bool operator==(const CalibrationParams&, const CalibrationParams&) = default;

private:
    double x1_, x2_, x3_, x4_, theta_;
};

// Correlation strength sigma of the symmetric BB84 observation
// (uniform marginals, no cross-basis correlations).
struct SymmetricObservation {
    double sigma;
};

// 3x3 table of marginal and joint expectation values. Row/column 0 hold
// marginals (d[0][0] = 1), rows 1-2 are Alice's observables, columns 1-2
// Bob's.
struct DataMatrix {
    Mat3 d{{{1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}}};

    // Correlation triple of (Alice row a, Bob column b), a,b in {1,2}.
    CorrelationTriple triple(int a, int b) const {
        return {d[a][0], d[0][b], d[a][b]};
    }
};

struct Feasibility {
    bool ok = true;
    std::string detail;  // first violated cell or sign pair, empty when ok
};

// diag(1, sigma, sigma); the symmetric-error observation.
DataMatrix diagonal_data(const SymmetricObservation& s);

// [[1,0,0],[x1,x2,0],[x3,0,x4]]
Mat3 s_matrix(const CalibrationParams& p);

// [[1,0,0],[0,1,0],[0,-cot(theta),csc(theta)]]. Throws std::domain_error
// when sin(theta) <= 0.
Mat3 r_matrix(double theta);

// The calibration transform producing the hypothetical sharp/MUB data matrix:
// S * (R * d). For diagonal d = diag(1,s,s) this yields rows
// (x1, s*x2, 0) and (x3, -s*x4*cot, s*x4*csc). Row 0 passes through.
//
// Note the composition order: the literal product R*S*d (see rs_transform)
// gives a different third row for general d; this function matches the
// diagonal-case result the key-rate bound is built from.
DataMatrix transform(const DataMatrix& d, const CalibrationParams& p);

// The literal product R * (S * d): per-measurement sharpening first, then
// rotation of the second axis into the mutually unbiased direction. This is
// the composition that inverts a concrete unsharp measurement pair exactly
// (see qubit_model::true_calibration round-trip).
DataMatrix rs_transform(const DataMatrix& d, const CalibrationParams& p);

// A matrix is feasible when every entry lies in [-1,1] and all four pairwise
// correlation triples reconstruct to valid distributions (kProbClamp rule).
Feasibility feasible(const DataMatrix& dbar);

// feasible() plus the d[0][0] = 1 anchor; used to validate external input.
Feasibility validate_data(const DataMatrix& d);

bool is_diagonal(const DataMatrix& d, double tol);

Mat3 mat_mul(const Mat3& a, const Mat3& b);

}  // namespace qkdcal
