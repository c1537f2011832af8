#pragma once

#include <array>

#include "qkdcal/errors.hpp"

namespace qkdcal {

// Tolerances shared by distribution reconstruction throughout the library.
// A reconstructed cell probability in [-kProbClamp, 0) is clamped to zero and
// the table renormalized; anything below -kProbClamp is rejected.
inline constexpr double kProbClamp = 1e-9;
inline constexpr double kProbSumTol = 1e-12;

// Expectation values E(X), E(Y), E(XY) of a pair of dichotomic +-1 variables.
struct CorrelationTriple {
    double ex = 0.0;
    double ey = 0.0;
    double exy = 0.0;
};

// Probability table of one dichotomic variable pair. Index 0 is outcome +1,
// index 1 is outcome -1.
struct JointDistribution {
    std::array<std::array<double, 2>, 2> p{};

    double ex() const { return p[0][0] + p[0][1] - p[1][0] - p[1][1]; }
    double ey() const { return p[0][0] - p[0][1] + p[1][0] - p[1][1]; }
    double exy() const { return p[0][0] - p[0][1] - p[1][0] + p[1][1]; }
    CorrelationTriple correlations() const { return {ex(), ey(), exy()}; }
};

// h2(x) = -x log2 x - (1-x) log2 (1-x), with 0 log 0 = 0.
// Throws std::domain_error outside [0,1].
double binary_entropy(double x);

// Is (1 + a ex + b ey + ab exy)/4 >= -kProbClamp for all four sign pairs?
// If not, *detail (when non-null) receives the offending sign pair.
bool triple_valid(const CorrelationTriple& c, std::string* detail = nullptr);

// p(a,b) = (1 + a ex + b ey + ab exy) / 4. Marginally negative cells are
// clamped per kProbClamp; a genuinely negative cell raises infeasible_error
// naming the sign pair.
JointDistribution joint_from_correlations(const CorrelationTriple& c);

double joint_entropy(const JointDistribution& j);
double marginal_entropy_a(const JointDistribution& j);
double marginal_entropy_b(const JointDistribution& j);

// I(A:B) = H(A) + H(B) - H(A,B), in bits.
double mutual_information(const JointDistribution& j);

// H(A|B) = H(A,B) - H(B), in bits.
double conditional_entropy(const JointDistribution& j);

// Fano-type upper bound h2((1-exy)/2) on the conditional entropy of any pair
// with product expectation exy. Throws std::domain_error for |exy| > 1.
double disagreement_entropy_bound(const CorrelationTriple& c);

}  // namespace qkdcal
