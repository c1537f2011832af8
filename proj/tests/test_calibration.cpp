#include <cmath>
#include <random>

#include "doctest.h"
#include "qkdcal/calibration.hpp"
#include "qkdcal/json_io.hpp"

using namespace qkdcal;

namespace {
constexpr double kPi = 3.14159265358979323846;

CalibrationParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double x2 = 1.0 + 3.0 * uni(rng);
    const double x1 = (2.0 * uni(rng) - 1.0) * (x2 - 1.0);
    const double x4 = 1.0 + 3.0 * uni(rng);
    const double x3 = (2.0 * uni(rng) - 1.0) * (x4 - 1.0);
    const double theta = 0.05 + (kPi - 0.1) * uni(rng);
    return CalibrationParams(x1, x2, x3, x4, theta);
}
}  // namespace

TEST_CASE("CalibrationParams constraints") {
    CHECK_NOTHROW(CalibrationParams(0.0, 1.0, 0.0, 1.0, kPi / 2));
    CHECK_THROWS_AS(CalibrationParams(0.0, 0.5, 0.0, 1.0, kPi / 2), std::domain_error);
    CHECK_THROWS_AS(CalibrationParams(0.5, 1.2, 0.0, 1.0, kPi / 2), std::domain_error);
    CHECK_THROWS_AS(CalibrationParams(0.0, 1.0, 0.9, 1.5, kPi / 2), std::domain_error);
    CHECK_THROWS_AS(CalibrationParams(0.0, 1.0, 0.0, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(CalibrationParams(0.0, 1.0, 0.0, 1.0, kPi), std::domain_error);
}

TEST_CASE("s_matrix layout") {
    const Mat3 s = s_matrix(CalibrationParams(-0.125, 1.25, 0.0, 1.0, kPi / 2));
    const Mat3 expected = {{{1, 0, 0}, {-0.125, 1.25, 0}, {0, 0, 1}}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(s[i][j] == expected[i][j]);

    const Mat3 ident = s_matrix(CalibrationParams(0, 1, 0, 1, kPi / 2));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(ident[i][j] == (i == j ? 1.0 : 0.0));
}

TEST_CASE("r_matrix layout") {
    const Mat3 mub = r_matrix(kPi / 2);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(mub[i][j] == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-15));

    const Mat3 r = r_matrix(kPi / 4);
    CHECK(r[2][1] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(r[2][2] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

    CHECK_THROWS_AS(r_matrix(0.0), std::domain_error);
    CHECK_THROWS_AS(r_matrix(kPi), std::domain_error);
}

TEST_CASE("diagonal_data") {
    const DataMatrix d = diagonal_data({0.9});
    CHECK(d.d[0][0] == 1.0);
    CHECK(d.d[1][1] == 0.9);
    CHECK(d.d[2][2] == 0.9);
    CHECK(d.d[0][1] == 0.0);
    CHECK_THROWS_AS(diagonal_data({1.5}), std::domain_error);
}

TEST_CASE("transform reproduces the diagonal-case rows") {
    // identity calibration is the identity map
    const DataMatrix d9 = diagonal_data({0.9});
    const DataMatrix same = transform(d9, CalibrationParams::identity());
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(std::fabs(same.d[i][j] - d9.d[i][j]) < 1e-14);

    // sigma=0.8, x4=1.2, theta=pi/2: third row ends in 0.96
    const DataMatrix a =
        transform(diagonal_data({0.8}), CalibrationParams(0, 1, 0, 1.2, kPi / 2));
    CHECK(a.d[2][0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(std::fabs(a.d[2][1]) < 1e-15);
    CHECK(a.d[2][2] == doctest::Approx(0.96).epsilon(1e-14));

    // general parameters at theta=pi/3
    const DataMatrix b =
        transform(diagonal_data({0.8}), CalibrationParams(0.1, 1.2, 0.2, 1.3, kPi / 3));
    CHECK(b.d[1][0] == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(b.d[1][1] == doctest::Approx(0.96).epsilon(1e-14));
    CHECK(b.d[1][2] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(b.d[2][0] == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(b.d[2][1] == doctest::Approx(-0.6004442799572111).epsilon(1e-12));
    CHECK(b.d[2][2] == doctest::Approx(1.2008885599144217).epsilon(1e-12));
}

TEST_CASE("transform symbolic regression on random diagonal inputs") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double sigma = uni(rng);
        const CalibrationParams p = random_params(rng);
        const DataMatrix out = transform(diagonal_data({sigma}), p);
        const double cot = std::cos(p.theta()) / std::sin(p.theta());
        const double csc = 1.0 / std::sin(p.theta());
        CHECK(std::fabs(out.d[0][0] - 1.0) < 1e-12);
        CHECK(std::fabs(out.d[1][0] - p.x1()) < 1e-12);
        CHECK(std::fabs(out.d[1][1] - sigma * p.x2()) < 1e-12);
        CHECK(std::fabs(out.d[1][2]) < 1e-12);
        CHECK(std::fabs(out.d[2][0] - p.x3()) < 1e-12);
        CHECK(std::fabs(out.d[2][1] + sigma * p.x4() * cot) < 1e-12);
        CHECK(std::fabs(out.d[2][2] - sigma * p.x4() * csc) < 1e-12);
    }
}

TEST_CASE("transform is linear and preserves row 0") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> uni(-0.3, 0.3);
    for (int trial = 0; trial < 100; ++trial) {
        DataMatrix d1, d2;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                d1.d[i][j] = uni(rng);
                d2.d[i][j] = uni(rng);
            }
        d1.d[0][0] = d2.d[0][0] = 1.0;
        const CalibrationParams p = random_params(rng);
        const double alpha = (uni(rng) + 0.3) / 0.6;
        DataMatrix mix;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                mix.d[i][j] = alpha * d1.d[i][j] + (1 - alpha) * d2.d[i][j];
        const DataMatrix lhs = transform(mix, p);
        const DataMatrix t1 = transform(d1, p), t2 = transform(d2, p);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(std::fabs(lhs.d[i][j] -
                                (alpha * t1.d[i][j] + (1 - alpha) * t2.d[i][j])) < 1e-12);
        for (int j = 0; j < 3; ++j) CHECK(lhs.d[0][j] == mix.d[0][j]);
    }
}

TEST_CASE("feasible flags out-of-range cells and invalid joints") {
    CHECK(feasible(diagonal_data({0.9})).ok);
    CHECK(feasible(diagonal_data({1.0})).ok);

    const DataMatrix bad =
        transform(diagonal_data({0.8}), CalibrationParams(0.1, 1.2, 0.2, 1.3, kPi / 3));
    const Feasibility f = feasible(bad);
    CHECK_FALSE(f.ok);
    CHECK(f.detail.find("row 2, col 2") != std::string::npos);

    DataMatrix joint_bad = diagonal_data({0.9});
    joint_bad.d[1][0] = 0.9;
    joint_bad.d[0][1] = -0.9;
    CHECK_FALSE(feasible(joint_bad).ok);
}

TEST_CASE("DataMatrix JSON round trip and validation") {
    const std::string text = R"({"d": [[1,0,0],[0,0.9,0],[0,0,0.9]]})";
    const DataMatrix d = data_matrix_from_json(text);
    CHECK(d.d[1][1] == 0.9);
    const DataMatrix again = data_matrix_from_json(data_matrix_to_json(d));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(again.d[i][j] == d.d[i][j]);

    CHECK_THROWS_AS(data_matrix_from_json("{"), io_error);
    CHECK_THROWS_AS(data_matrix_from_json(R"({"d": [[1,0],[0,1]]})"), io_error);
    CHECK_THROWS_AS(data_matrix_from_json(R"({"d": [[0.5,0,0],[0,0.9,0],[0,0,0.9]]})"),
                    infeasible_error);
    CHECK_THROWS_AS(data_matrix_from_json(R"({"d": [[1,0.9,0],[-0.9,0.9,0],[0,0,0.9]]})"),
                    infeasible_error);
}
