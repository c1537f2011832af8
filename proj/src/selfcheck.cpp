#include "qkdcal/selfcheck.hpp"

#include <cmath>
#include <random>

#include "qkdcal/keyrate.hpp"
#include "qkdcal/qubit.hpp"
#include "qkdcal/sim.hpp"

namespace qkdcal {

namespace {

constexpr double kPi = 3.14159265358979323846;

TwoQubitState random_state(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    std::exponential_distribution<double> expo(1.0);
    Mat4 rho;
    double wsum = 0.0;
    for (int term = 0; term < 4; ++term) {
        std::array<cplx, 4> psi;
        double n2 = 0.0;
        for (auto& c : psi) {
            c = cplx(gauss(rng), gauss(rng));
            n2 += std::norm(c);
        }
        const double w = expo(rng);
        wsum += w;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) rho.at(i, j) += cplx(w / n2) * psi[i] * std::conj(psi[j]);
    }
    for (auto& c : rho.m) c /= wsum;
    return {rho};
}

Vec3 random_axis(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    while (true) {
        Vec3 v{gauss(rng), gauss(rng), gauss(rng)};
        if (v.norm() > 1e-6) return v.normalized();
    }
}

MeasurementModel random_measurement(std::mt19937_64& rng, double eta_min) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    MeasurementModel m;
    m.axis = random_axis(rng);
    m.sharpness = eta_min + (1.0 - eta_min) * uni(rng);
    m.bias = (2.0 * uni(rng) - 1.0) * (1.0 - m.sharpness);
    return m;
}

// Alice measurement pair with a well-conditioned relative angle.
std::array<MeasurementModel, 2> random_alice_pair(std::mt19937_64& rng, double eta_min) {
    while (true) {
        MeasurementModel a = random_measurement(rng, eta_min);
        MeasurementModel b = random_measurement(rng, eta_min);
        if (std::fabs(a.axis.dot(b.axis)) < 0.95) return {a, b};
    }
}

CheckResult eq5_regression(bool deep) {
    std::mt19937_64 rng(20240901);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const int trials = deep ? 5000 : 1000;
    double worst = 0.0;
    for (int i = 0; i < trials; ++i) {
        const double sigma = uni(rng);
        const double x2 = 1.0 + 3.0 * uni(rng);
        const double x1 = (2.0 * uni(rng) - 1.0) * (x2 - 1.0);
        const double x4 = 1.0 + 3.0 * uni(rng);
        const double x3 = (2.0 * uni(rng) - 1.0) * (x4 - 1.0);
        const double theta = 0.05 + (kPi - 0.1) * uni(rng);
        const CalibrationParams p(x1, x2, x3, x4, theta);
        const DataMatrix dbar = transform(diagonal_data({sigma}), p);
        const double cot = std::cos(theta) / std::sin(theta);
        const double csc = 1.0 / std::sin(theta);
        const Mat3 expected = {{{1.0, 0.0, 0.0},
                                {x1, sigma * x2, 0.0},
                                {x3, -sigma * x4 * cot, sigma * x4 * csc}}};
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                worst = std::max(worst, std::fabs(dbar.d[r][c] - expected[r][c]));
    }
    return {"transform_symbolic_regression", worst, "max deviation < 1e-12", worst < 1e-12};
}

CheckResult calibration_roundtrip(bool deep) {
    std::mt19937_64 rng(77001);
    const int trials = deep ? 500 : 200;
    double worst = 0.0;
    for (int i = 0; i < trials; ++i) {
        SimConfig cfg;
        cfg.state = random_state(rng);
        cfg.alice = random_alice_pair(rng, 0.4);
        cfg.bob = {random_measurement(rng, 0.4), random_measurement(rng, 0.4)};
        const DataMatrix observed = exact_data(cfg);
        const CalibrationParams p = true_calibration(cfg.alice[0], cfg.alice[1]);
        const DataMatrix dbar = rs_transform(observed, p);

        // Direct computation with sharp measurements: Alice's first axis and
        // the in-plane direction mutually unbiased to it.
        const double cosang = cfg.alice[0].axis.dot(cfg.alice[1].axis);
        const double sinang = std::sqrt(1.0 - cosang * cosang);
        const Vec3 perp =
            (1.0 / sinang) * (cfg.alice[1].axis - cosang * cfg.alice[0].axis);
        SimConfig sharp = cfg;
        sharp.alice = {MeasurementModel::sharp(cfg.alice[0].axis), MeasurementModel::sharp(perp)};
        const DataMatrix direct = exact_data(sharp);

        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                worst = std::max(worst, std::fabs(dbar.d[r][c] - direct.d[r][c]));
    }
    return {"calibration_roundtrip", worst, "max deviation < 1e-10", worst < 1e-10};
}

// Dense grid over (x4, csc theta) of h2((1 - sigma*x4*csc)/2) on the
// feasible region; independent of the optimizer path.
double grid_oracle_bound(double sigma, double step) {
    if (sigma <= 0.0) return 1.0;
    double best = 0.0;
    for (double x4 = 1.0; sigma * x4 <= 1.0 + 1e-15; x4 += step) {
        for (double csc = 1.0; sigma * x4 * csc <= 1.0 + 1e-15; csc += step) {
            best = std::max(best, binary_entropy((1.0 - sigma * x4 * csc) / 2.0));
        }
    }
    return best;
}

CheckResult grid_vs_optimizer(bool deep) {
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> uni(0.3, 0.99);
    std::vector<double> sigmas = {0.5, 0.8, 0.9, 0.98};
    if (deep)
        for (int i = 0; i < 20; ++i) sigmas.push_back(uni(rng));
    double worst = 0.0;
    for (double sigma : sigmas) {
        const double oracle = grid_oracle_bound(sigma, 1e-3);
        const double found = general_adversary_bound(diagonal_data({sigma})).bits;
        worst = std::max(worst, std::fabs(found - oracle));
    }
    return {"grid_vs_optimizer", worst, "max |optimizer - dense grid| < 1e-4", worst < 1e-4};
}

CheckResult threshold_check() {
    const double q = threshold_qber();
    const double dev = std::fabs(binary_entropy(q) - 0.5);
    CheckResult r{"threshold_qber", q, "|h2-0.5| < 1e-6", dev < 1e-6};
    return r;
}

}  // namespace

std::vector<CheckResult> run_self_checks(bool deep) {
    return {eq5_regression(deep), calibration_roundtrip(deep), grid_vs_optimizer(deep),
            threshold_check()};
}

}  // namespace qkdcal
