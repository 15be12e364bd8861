#include <gtest/gtest.h>

#include <random>

#include "hypermat/approx.hpp"
#include "hypermat/spectral2.hpp"

using namespace hypermat;

namespace {

Hypermatrix uniform(const Shape& s, std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return Hypermatrix::generate(s, [&](const Index&) { return cplx(d(rng)); });
}

Tuple random_rank1_factors(std::mt19937_64& rng, std::size_t m, std::size_t n) {
    Tuple out;
    for (std::size_t t = 0; t < m; ++t) {
        Shape s(m, n);
        s[contracted_axis(t, m)] = 1;
        out.push_back(uniform(s, rng, 0.5, 2.0));
    }
    return out;
}

}  // namespace

TEST(RelativeError, Basics) {
    auto a = Hypermatrix::matrix({{2, 4}, {1, 1}});
    auto b = Hypermatrix::matrix({{2, 4}, {1, 2}});
    EXPECT_DOUBLE_EQ(relative_error(b, a), 0.25);
    EXPECT_DOUBLE_EQ(relative_error(a, Hypermatrix::zeros({2, 2})), 4.0);
}

TEST(Rank1, SystemShape) {
    auto p = build_rank1_problem(Hypermatrix::filled({3, 3, 3}, 2.0));
    EXPECT_EQ(p.system.rows(), 27u);
    EXPECT_EQ(p.system.var_count, 27u);
    for (const auto& row : p.system.exponents) {
        Rational s = 0;
        for (const auto& e : row) s += e;
        EXPECT_EQ(s, Rational(3));
    }
}

TEST(Rank1, ConsistentInputsRecovered) {
    std::mt19937_64 rng(70);
    for (std::size_t m : {2u, 3u, 4u}) {
        for (int k = 0; k < 10; ++k) {
            auto h = bm_product(random_rank1_factors(rng, m, 2));
            auto r = bm_rank1_approx(h);
            EXPECT_LT(r.residual, 1e-10);
            EXPECT_LT(relative_error(bm_product(r.factors), h), 1e-9);
        }
    }
}

TEST(Rank1, RejectsZeroEntries) {
    EXPECT_THROW(bm_rank1_approx(group_adjacency_z2(1)), DomainError);
    EXPECT_THROW(bm_rank1_approx(Hypermatrix::filled({2, 3}, 1.0)), ShapeError);
}

TEST(Rank1, NotWorseThanRandomSearch) {
    std::mt19937_64 rng(71);
    std::normal_distribution<double> g;
    for (int k = 0; k < 3; ++k) {
        auto h = Hypermatrix::generate({2, 2, 2}, [&](const Index&) { return cplx(std::exp(g(rng))); });
        auto r = bm_rank1_approx(h);
        const double oracle = random_search_oracle(build_rank1_problem(h).system, 1000000, 100 + k);
        EXPECT_LE(r.residual, oracle);
        EXPECT_GT(r.residual, 1e-6);
    }
}

TEST(Rank1, ConsistencyImpliesVanishingHyperdet) {
    std::mt19937_64 rng(72);
    for (int k = 0; k < 50; ++k) {
        auto h = bm_product(random_rank1_factors(rng, 3, 2));
        ASSERT_TRUE(bm_rank_one_consistent(h));
        EXPECT_LT(std::abs(hyperdet_side2(h)), 1e-9);
    }
}

TEST(Rank1, ComplexTargetUsesBranchSearch) {
    std::mt19937_64 rng(73);
    auto f = random_rank1_factors(rng, 3, 2);
    f[0] = f[0].map([](cplx v) { return v * std::polar(1.0, 2.5); });
    f[1] = f[1].map([](cplx v) { return v * std::polar(1.0, 2.0); });
    auto h = bm_product(f);
    auto r = bm_rank1_approx(h);
    EXPECT_LT(relative_error(bm_product(r.factors), h), 1e-9) << r.residual;
}

TEST(Kron, RecoversTwoFactorProduct) {
    std::mt19937_64 rng(74);
    for (int k = 0; k < 10; ++k) {
        auto x = uniform({2, 2}, rng, 0.5, 2), y = uniform({2, 2}, rng, 0.5, 2);
        auto a = kronecker(x, y);
        auto r = kron_factor_approx(a, {4});
        ASSERT_EQ(r.factors.size(), 1u);
        ASSERT_EQ(r.factors[0].size(), 2u);
        EXPECT_LT(r.residual, 1e-10);
        EXPECT_LT(relative_error(kron_chain(r.factors[0], 2), a), 1e-9);
    }
}

TEST(Kron, DirectSumOfBlocksAndThirdOrder) {
    std::mt19937_64 rng(75);
    auto b0 = uniform({2, 2, 2}, rng, 0.5, 2);
    auto b1 = kronecker(uniform({2, 2, 2}, rng, 0.5, 2), uniform({2, 2, 2}, rng, 0.5, 2));
    auto a = direct_sum(b0, b1);
    auto r = kron_factor_approx(a, {2, 4});
    ASSERT_EQ(r.factors.size(), 2u);
    EXPECT_EQ(r.factors[0].size(), 1u);
    EXPECT_EQ(r.factors[1].size(), 2u);
    EXPECT_LT(r.residual, 1e-10);
    EXPECT_LT(relative_error(direct_sum(kron_chain(r.factors[0], 3), kron_chain(r.factors[1], 3)), a), 1e-9);
}

TEST(Kron, GaugeSplitsLogMassEvenly) {
    std::mt19937_64 rng(76);
    auto x = uniform({2, 2}, rng, 0.5, 2);
    auto r = kron_factor_approx(kronecker(x, x), {4});
    EXPECT_NEAR(std::abs(r.factors[0][0][0]), std::abs(r.factors[0][1][0]), 1e-12);
    // Reciprocal rescaling of two factors leaves the product unchanged.
    auto f = r.factors[0];
    f[0] = f[0].scale(3.0);
    f[1] = f[1].scale(1.0 / 3.0);
    EXPECT_LT(kron_chain(f, 2).max_abs_diff(kron_chain(r.factors[0], 2)), 1e-12);
}

TEST(Kron, PerturbedBlockNotWorseThanRandomSearch) {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> g;
    auto a = kronecker(uniform({2, 2}, rng, 0.5, 2), uniform({2, 2}, rng, 0.5, 2));
    a = a.map([&](cplx v) { return v * std::exp(1e-3 * g(rng)); });
    auto r = kron_factor_approx(a, {4});
    auto p = build_kron_factor_problem(a, {4});
    EXPECT_LE(r.residual, random_search_oracle(p.systems[0], 1000000, 7));
    EXPECT_GT(r.residual, 0.0);
}

TEST(Kron, Rejections) {
    auto a = Hypermatrix::filled({4, 4}, 1.0);
    a({1, 1}) = 0;
    EXPECT_THROW(kron_factor_approx(a, {4}), DomainError);
    EXPECT_THROW(kron_factor_approx(Hypermatrix::filled({3, 3}, 1.0), {3}), DomainError);
    EXPECT_THROW(kron_factor_approx(Hypermatrix::filled({4, 4}, 1.0), {2, 2}), DomainError);
    EXPECT_THROW(kron_factor_approx(Hypermatrix::filled({4, 4}, 1.0), {2}), ShapeError);
}

TEST(RankUpper, DeltaAndRankOne) {
    auto cert = bm_rank_upper(kron_delta(3, 2), 2);
    EXPECT_TRUE(cert.certified);
    EXPECT_LT(bm_product(cert.factors).max_abs_diff(kron_delta(3, 2)), 1e-15);
    // The slot identity behind the certificate.
    auto d = kron_delta(3, 2);
    Hypermatrix sum = Hypermatrix::zeros({2, 2, 2});
    for (std::size_t t = 0; t < 2; ++t) sum = sum.add(outer_product_slot({d, d, d}, t));
    EXPECT_EQ(sum, d);

    std::mt19937_64 rng(78);
    auto h = bm_product(random_rank1_factors(rng, 3, 3));
    auto c1 = bm_rank_upper(h, 1);
    EXPECT_TRUE(c1.certified) << c1.residual;
    EXPECT_THROW(bm_rank_upper(h, 4), DomainError);
}

TEST(RankUpper, GenericSide2NeedsTwoTerms) {
    std::mt19937_64 rng(79);
    for (int k = 0; k < 20; ++k) {
        auto h = uniform({2, 2, 2}, rng, 1, 2);
        ASSERT_GT(std::abs(hyperdet_side2(h)), 1e-12);
        EXPECT_TRUE(bm_rank_upper(h, 2).certified);
        EXPECT_FALSE(bm_rank_upper(h, 1).certified);
    }
}

TEST(RankUpper, AlternatingFitOnSide3) {
    std::mt19937_64 rng(80);
    // A sum of two rank-one terms on side 3 is within reach of the alternating fit.
    auto f0 = random_rank1_factors(rng, 3, 3), f1 = random_rank1_factors(rng, 3, 3);
    auto h = bm_product(f0).add(bm_product(f1));
    auto c = bm_rank_upper(h, 2);
    EXPECT_LE(c.sweeps, 200u);
    EXPECT_TRUE(c.certified) << c.residual;
    EXPECT_LT(relative_error(bm_product(c.factors), h), 1e-8);
}
