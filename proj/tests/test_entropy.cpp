#include <cmath>
#include <random>

#include "doctest.h"
#include "qkdcal/entropy.hpp"

using namespace qkdcal;

namespace {

// Rejection sampler for valid correlation triples.
CorrelationTriple random_valid_triple(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    while (true) {
        CorrelationTriple c{uni(rng), uni(rng), uni(rng)};
        if (triple_valid(c)) return c;
    }
}

}  // namespace

TEST_CASE("binary_entropy pinned values") {
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    // mpmath: -0.05 log2 0.05 - 0.95 log2 0.95
    CHECK(binary_entropy(0.05) == doctest::Approx(0.2863969571159561).epsilon(1e-9));
    CHECK_THROWS_AS(binary_entropy(-0.01), std::domain_error);
    CHECK_THROWS_AS(binary_entropy(1.01), std::domain_error);
}

TEST_CASE("binary_entropy symmetry and concavity") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = uni(rng);
        CHECK(std::fabs(binary_entropy(x) - binary_entropy(1.0 - x)) < 1e-12);
        const double y = uni(rng);
        CHECK(binary_entropy((x + y) / 2.0) >=
              (binary_entropy(x) + binary_entropy(y)) / 2.0 - 1e-12);
    }
}

TEST_CASE("joint_from_correlations reconstruction") {
    const JointDistribution perfect = joint_from_correlations({0.0, 0.0, 1.0});
    CHECK(perfect.p[0][0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(perfect.p[1][1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(perfect.p[0][1] == 0.0);
    CHECK(perfect.p[1][0] == 0.0);

    const JointDistribution indep = joint_from_correlations({0.0, 0.0, 0.0});
    for (const auto& row : indep.p)
        for (double cell : row) CHECK(cell == doctest::Approx(0.25).epsilon(1e-15));

    const JointDistribution strong = joint_from_correlations({0.0, 0.0, 0.9});
    CHECK(strong.p[0][0] == doctest::Approx(0.475).epsilon(1e-14));
    CHECK(strong.p[0][1] == doctest::Approx(0.025).epsilon(1e-14));

    CHECK_THROWS_AS(joint_from_correlations({0.9, -0.9, 0.9}), infeasible_error);
}

TEST_CASE("marginally negative cells are clamped and renormalized") {
    const JointDistribution j = joint_from_correlations({0.0, 0.0, 1.0 + 5e-10});
    double total = 0.0;
    for (const auto& row : j.p)
        for (double cell : row) {
            CHECK(cell >= 0.0);
            total += cell;
        }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("round trip: correlations in, correlations out") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 2000; ++i) {
        const CorrelationTriple c = random_valid_triple(rng);
        const JointDistribution j = joint_from_correlations(c);
        CHECK(std::fabs(j.ex() - c.ex) < 1e-12);
        CHECK(std::fabs(j.ey() - c.ey) < 1e-12);
        CHECK(std::fabs(j.exy() - c.exy) < 1e-12);
    }
}

TEST_CASE("mutual information pinned values and identities") {
    CHECK(mutual_information(joint_from_correlations({0, 0, 1})) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mutual_information(joint_from_correlations({0, 0, 0})) ==
          doctest::Approx(0.0).epsilon(1e-12));
    // 1 - h2(0.05); direct summation over the four cells agrees.
    CHECK(mutual_information(joint_from_correlations({0, 0, 0.9})) ==
          doctest::Approx(1.0 - 0.2863969571159561).epsilon(1e-9));

    std::mt19937_64 rng(3);
    for (int i = 0; i < 1000; ++i) {
        const JointDistribution j = joint_from_correlations(random_valid_triple(rng));
        const double mi = mutual_information(j);
        CHECK(mi >= -1e-12);
        // chain rule I = H(A) - H(A|B), with H(A|B) = H(A,B) - H(B)
        const double h_a_given_b = joint_entropy(j) - marginal_entropy_b(j);
        CHECK(std::fabs(mi - (marginal_entropy_a(j) - h_a_given_b)) < 1e-12);
    }
}

TEST_CASE("conditional entropy matches h2((1-sigma)/2) for symmetric data") {
    CHECK(conditional_entropy(joint_from_correlations({0, 0, 0.9})) ==
          doctest::Approx(0.2863969571159561).epsilon(1e-9));
    CHECK(conditional_entropy(joint_from_correlations({0, 0, 1})) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(conditional_entropy(joint_from_correlations({0, 0, 0})) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("disagreement bound values and Fano dominance") {
    CHECK(disagreement_entropy_bound({0, 0, 1.0}) == 0.0);
    CHECK(disagreement_entropy_bound({0, 0, 0.0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(disagreement_entropy_bound({0, 0, 0.9}) ==
          doctest::Approx(0.2863969571159561).epsilon(1e-9));
    CHECK_THROWS_AS(disagreement_entropy_bound({0, 0, 1.5}), std::domain_error);

    std::mt19937_64 rng(4);
    for (int i = 0; i < 10000; ++i) {
        const CorrelationTriple c = random_valid_triple(rng);
        CHECK(conditional_entropy(joint_from_correlations(c)) <=
              disagreement_entropy_bound(c) + 1e-12);
    }
}
