#include "qkdcal/entropy.hpp"

#include <cmath>
#include <string>

namespace qkdcal {

double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::domain_error("binary_entropy: argument " + std::to_string(x) +
                                " outside [0,1]");
    }
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

namespace {

constexpr double kSigns[2] = {+1.0, -1.0};

std::string sign_pair_name(int i, int j) {
    return std::string("(") + (i == 0 ? "+" : "-") + "," + (j == 0 ? "+" : "-") + ")";
}

// Entropy contribution of a single cell.
double plogp(double p) {
    return p > 0.0 ? -p * std::log2(p) : 0.0;
}

}  // namespace

bool triple_valid(const CorrelationTriple& c, std::string* detail) {
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double a = kSigns[i], b = kSigns[j];
            const double cell = (1.0 + a * c.ex + b * c.ey + a * b * c.exy) / 4.0;
            if (cell < -kProbClamp) {
                if (detail) *detail = "negative probability at sign pair " + sign_pair_name(i, j);
                return false;
            }
        }
    }
    return true;
}

JointDistribution joint_from_correlations(const CorrelationTriple& c) {
    JointDistribution j;
    double total = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j2 = 0; j2 < 2; ++j2) {
            const double a = kSigns[i], b = kSigns[j2];
            double cell = (1.0 + a * c.ex + b * c.ey + a * b * c.exy) / 4.0;
            if (cell < 0.0) {
                if (cell < -kProbClamp) {
                    throw infeasible_error("correlation triple infeasible: " +
                                           std::string("negative probability at sign pair ") +
                                           sign_pair_name(i, j2));
                }
                cell = 0.0;
            }
            j.p[i][j2] = cell;
            total += cell;
        }
    }
    for (auto& row : j.p)
        for (auto& cell : row) cell /= total;
    return j;
}

double joint_entropy(const JointDistribution& j) {
    double h = 0.0;
    for (const auto& row : j.p)
        for (double cell : row) h += plogp(cell);
    return h;
}

double marginal_entropy_a(const JointDistribution& j) {
    return plogp(j.p[0][0] + j.p[0][1]) + plogp(j.p[1][0] + j.p[1][1]);
}

double marginal_entropy_b(const JointDistribution& j) {
    return plogp(j.p[0][0] + j.p[1][0]) + plogp(j.p[0][1] + j.p[1][1]);
}

double mutual_information(const JointDistribution& j) {
    return marginal_entropy_a(j) + marginal_entropy_b(j) - joint_entropy(j);
}

double conditional_entropy(const JointDistribution& j) {
    return joint_entropy(j) - marginal_entropy_b(j);
}

double disagreement_entropy_bound(const CorrelationTriple& c) {
    if (!(std::fabs(c.exy) <= 1.0)) {
        throw std::domain_error("disagreement_entropy_bound: |exy| > 1");
    }
    return binary_entropy((1.0 - c.exy) / 2.0);
}

}  // namespace qkdcal
