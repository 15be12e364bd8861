#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "hypermat/structured.hpp"

using namespace hypermat;

namespace {

Hypermatrix example_hadamard_222() {
    return Hypermatrix::from_frontal_slices({{{1, 1}, {-1, 1}}, {{1, 1}, {1, 1}}});
}

bool is_prime(std::size_t p) {
    if (p < 2) return false;
    for (std::size_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

std::size_t pow_mod(std::size_t b, std::size_t e, std::size_t mod) {
    std::size_t r = 1 % mod;
    b %= mod;
    while (e) {
        if (e & 1) r = r * b % mod;
        b = b * b % mod;
        e >>= 1;
    }
    return r;
}

// Uncorrelated iff no (u,v,w), not all equal, has (u-w)^2+(u-v)^2+(v-w)^2 = 0 mod n.
bool geometric_sum_oracle(std::size_t n) {
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t w = 0; w < n; ++w) {
                if (u == v && v == w) continue;
                long long a = (long long)u - (long long)w, b = (long long)u - (long long)v,
                          c = (long long)v - (long long)w;
                if ((a * a + b * b + c * c) % (long long)n == 0) return false;
            }
    return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Predicates
// ---------------------------------------------------------------------------

TEST(Uncorrelated, Examples) {
    auto d = kron_delta(3, 2);
    auto r = is_uncorrelated({d, d, d});
    EXPECT_TRUE(r.ok);
    EXPECT_EQ(r.residual, 0.0);
    auto ones = Hypermatrix::filled({2, 2, 2}, 1.0);
    auto bad = is_uncorrelated({ones, ones, ones});
    EXPECT_FALSE(bad.ok);
    EXPECT_DOUBLE_EQ(bad.residual, 2.0);
    EXPECT_THROW(is_uncorrelated({Hypermatrix::zeros({2, 3}), Hypermatrix::zeros({3, 2})}), ShapeError);
}

TEST(Orthogonal, DeltaAndRotation) {
    EXPECT_TRUE(is_orthogonal(kron_delta(3, 2)).ok);
    const double th = 0.7;
    auto rot = Hypermatrix::matrix({{std::cos(th), -std::sin(th)}, {std::sin(th), std::cos(th)}});
    EXPECT_TRUE(is_orthogonal(rot, 1e-14).ok);
    EXPECT_THROW(is_orthogonal(Hypermatrix::zeros({2, 3})), ShapeError);
}

TEST(Unitary, DftIdentityAndUnnormalized) {
    EXPECT_TRUE(is_unitary(dft_matrix(5), 1e-12).ok);
    EXPECT_TRUE(is_unitary(kron_delta(2, 3)).ok);
    auto r = is_unitary(Hypermatrix::matrix({{1, 1}, {1, -1}}));
    EXPECT_FALSE(r.ok);
    EXPECT_DOUBLE_EQ(r.residual, 1.0);
    EXPECT_THROW(is_unitary(kron_delta(3, 2)), DomainError);
}

TEST(Unitary, FourthOrderDeltaAndKroneckerOfUnitaries) {
    EXPECT_TRUE(is_unitary(kron_delta(4, 2)).ok);
    auto f = dft_matrix(2);
    EXPECT_TRUE(is_unitary(kronecker(f, dft_matrix(3)), 1e-12).ok);
}

// ---------------------------------------------------------------------------
// DFT constructions
// ---------------------------------------------------------------------------

TEST(Dft, SmallMatrices) {
    EXPECT_EQ(dft_matrix(1), Hypermatrix::matrix({{1}}));
    const double s = 1.0 / std::sqrt(2.0);
    EXPECT_LT(dft_matrix(2).max_abs_diff(Hypermatrix::matrix({{s, s}, {s, -s}})), 1e-15);
    auto f = dft_matrix(4);
    EXPECT_LT(bm_product({f, f.conjugate().transpose()}).max_abs_diff(kron_delta(2, 4)), 1e-13);
}

TEST(Dft, AdmissibilityExamples) {
    EXPECT_TRUE(check_dft_admissible(5).admissible);
    auto r7 = check_dft_admissible(7);
    ASSERT_FALSE(r7.admissible);
    EXPECT_EQ(r7.witness->x, 2);
    EXPECT_EQ(r7.witness->y, 1);
    auto r6 = check_dft_admissible(6);
    ASSERT_FALSE(r6.admissible);
    EXPECT_EQ(r6.witness->x, 3);
    EXPECT_EQ(r6.witness->y, 0);
    for (std::size_t p = 5; p < 100; ++p) {
        if (is_prime(p) && (p % 12 == 5 || p % 12 == 11)) {
            EXPECT_TRUE(check_dft_admissible(p).admissible) << p;
        }
    }
}

TEST(Dft, WitnessesVerifyAndClassificationMatchesGeometricSum) {
    for (std::size_t n = 2; n <= 60; ++n) {
        auto r = check_dft_admissible(n);
        EXPECT_EQ(r.admissible, !r.witness.has_value());
        EXPECT_TRUE(witness_verifies(r)) << n;
        EXPECT_EQ(r.admissible, geometric_sum_oracle(n)) << n;
    }
}

TEST(Dft, AgreesWithLegendreCriterionForPrimes) {
    for (std::size_t p = 2; p < 200; ++p) {
        if (!is_prime(p)) continue;
        bool nonresidue = p > 3 && pow_mod(p - 3, (p - 1) / 2, p) == p - 1;
        EXPECT_EQ(check_dft_admissible(p).admissible, nonresidue) << p;
    }
}

TEST(Dft, TriplesAreUncorrelated) {
    auto t5 = dft_triple(5);
    EXPECT_TRUE(is_uncorrelated(t5, 1e-9).ok);
    EXPECT_TRUE(is_uncorrelated(dft_triple(11), 1e-9).ok);
    for (std::size_t n = 2; n <= 30; ++n) {
        if (!check_dft_admissible(n).admissible) continue;
        EXPECT_TRUE(is_uncorrelated(dft_triple(n), 1e-9).ok) << n;
    }
}

TEST(Dft, InadmissibleTripleCarriesWitness) {
    try {
        dft_triple(7);
        FAIL() << "expected InadmissibleError";
    } catch (const InadmissibleError& e) {
        EXPECT_EQ(e.witness().x, 2);
        EXPECT_EQ(e.witness().y, 1);
    }
}

TEST(Closure, DirectSumAndKroneckerOfUncorrelatedTuples) {
    auto a = dft_triple(5);
    auto d = kron_delta(3, 2);
    Tuple b{d, d, d};
    EXPECT_TRUE(is_uncorrelated(direct_sum_tuple(a, b), 1e-10).ok);
    EXPECT_TRUE(is_uncorrelated(kronecker_tuple(b, a), 1e-10).ok);
}

// ---------------------------------------------------------------------------
// Hadamard hypermatrices
// ---------------------------------------------------------------------------

TEST(Hadamard, ExamplesAndNegatives) {
    EXPECT_TRUE(is_hadamard(example_hadamard_222()));
    EXPECT_TRUE(is_hadamard(Hypermatrix::matrix({{1, 1}, {1, -1}})));
    EXPECT_FALSE(is_hadamard(Hypermatrix::filled({2, 2}, 1.0)));
    EXPECT_THROW(is_hadamard(Hypermatrix::matrix({{1, 2}, {1, -1}})), DomainError);
}

TEST(Hadamard, CriterionAgreesWithFloatingProduct) {
    auto h = example_hadamard_222();
    auto p = bm_product(cyclic_tuple(h));
    EXPECT_EQ(p, kron_delta(3, 2).scale(2.0));
}

TEST(Hadamard, Side2ConstructionForOddOrders) {
    for (std::size_t m : {3u, 5u, 7u}) {
        auto h = hadamard_side2(m);
        EXPECT_EQ(h.shape(), Shape(m, 2));
        EXPECT_TRUE(is_hadamard(h)) << m;
    }
    EXPECT_THROW(hadamard_side2(4), DomainError);
    EXPECT_THROW(hadamard_side2(2), DomainError);
}

TEST(Hadamard, OrderFiveWindowAssignment) {
    std::map<std::string, int> assignment;
    for (const auto& w : {"0001", "1001", "1011"}) assignment[w] = -1;
    EXPECT_TRUE(window_assignment_satisfies(5, assignment));
    EXPECT_TRUE(is_hadamard(lift_window_assignment(5, assignment)));
    assignment.erase("1011");
    EXPECT_FALSE(window_assignment_satisfies(5, assignment));
}

TEST(Hadamard, GraphInvariants) {
    for (std::size_t m : {3u, 5u, 7u}) {
        auto g = build_necklace_graph(m);
        EXPECT_TRUE(g.connected);
        EXPECT_EQ(g.vertices.size(), necklace_count_formula(m) - 2);
        std::set<std::string> seen;
        std::size_t labels = 0;
        for (const auto& e : g.edges) {
            for (const auto& w : e.windows) {
                EXPECT_TRUE(seen.insert(w).second) << "window on two edges: " << w;
                ++labels;
            }
        }
        EXPECT_EQ(labels, (std::size_t{1} << (m - 1)) - 2);
        assign_windows_by_pairing(g);
        std::vector<int> degree(g.vertices.size(), 0);
        for (auto e : g.chosen_edges) {
            ++degree[g.edges[e].a];
            ++degree[g.edges[e].b];
        }
        for (auto d : degree) EXPECT_EQ(d % 2, 1);
        EXPECT_TRUE(window_assignment_satisfies(m, g.window_assignment));
    }
}

TEST(Hadamard, EliminationFallbackAlsoValid) {
    for (std::size_t m : {3u, 5u, 7u}) {
        auto g = build_necklace_graph(m);
        assign_windows_by_elimination(g);
        EXPECT_TRUE(g.used_fallback);
        EXPECT_TRUE(window_assignment_satisfies(m, g.window_assignment));
        EXPECT_TRUE(is_hadamard(lift_window_assignment(m, g.window_assignment)));
    }
}

TEST(Hadamard, KroneckerPowers) {
    auto s = Hypermatrix::matrix({{1, 1}, {1, -1}});
    auto h8 = hadamard_kron_power(s, 3);
    EXPECT_EQ(h8.shape(), (Shape{8, 8}));
    EXPECT_TRUE(is_hadamard(h8));
    auto h4 = hadamard_kron_power(example_hadamard_222(), 2);
    EXPECT_TRUE(is_hadamard(h4));
    EXPECT_EQ(bm_product(cyclic_tuple(h4))(0, 0, 0), cplx(4.0));
    EXPECT_EQ(hadamard_kron_power(s, 1), s);
    EXPECT_THROW(hadamard_kron_power(Hypermatrix::filled({2, 2}, 1.0), 2), DomainError);
    EXPECT_THROW(hadamard_kron_power(s, 0), DomainError);
}

TEST(Hadamard, ExhaustiveSearch) {
    EXPECT_FALSE(exhaustive_hadamard_search(4).has_value());
    auto h3 = exhaustive_hadamard_search(3);
    ASSERT_TRUE(h3.has_value());
    EXPECT_TRUE(is_hadamard(*h3));
    auto h2 = exhaustive_hadamard_search(2);
    ASSERT_TRUE(h2.has_value());
    EXPECT_TRUE(is_hadamard(*h2));
    EXPECT_THROW(exhaustive_hadamard_search(5), DomainError);
}

// ---------------------------------------------------------------------------
// Necklaces
// ---------------------------------------------------------------------------

TEST(Necklaces, OrderFiveAndThree) {
    EXPECT_EQ(nonconstant_necklaces(5),
              (std::vector<std::string>{"00001", "00011", "00101", "00111", "01011", "01111"}));
    EXPECT_EQ(enumerate_necklaces(3), (std::vector<std::string>{"000", "001", "011", "111"}));
}

TEST(Necklaces, CountsMatchBurnside) {
    for (std::size_t m = 1; m <= 12; ++m) {
        EXPECT_EQ(enumerate_necklaces(m).size(), necklace_count_formula(m)) << m;
        if (m >= 3 && m % 2 == 1) {
            EXPECT_EQ(necklace_count_formula(m) % 2, 0u) << m;
        }
    }
}

TEST(Necklaces, ShiftInvariantWordsHavePeriodDividingShift) {
    for (std::size_t m = 1; m <= 10; ++m) {
        for (std::size_t bits = 0; bits < (std::size_t{1} << m); ++bits) {
            std::string w(m, '0');
            for (std::size_t i = 0; i < m; ++i)
                if (bits >> i & 1U) w[i] = '1';
            const std::size_t pi = minimal_period(w);
            for (std::size_t p = 1; p < m; ++p) {
                bool holds = true;
                for (std::size_t i = 1; i < m && holds; ++i) holds = w[i] == w[(i + m - p) % m];
                if (holds) {
                    EXPECT_EQ(p % pi, 0u) << w << " p=" << p;
                }
            }
        }
    }
}
