#include <gtest/gtest.h>

#include <random>

#include "hypermat/orthogonalize.hpp"
#include "hypermat/transforms.hpp"

using namespace hypermat;

namespace {

Hypermatrix uniform(const Shape& s, std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return Hypermatrix::generate(s, [&](const Index&) { return cplx(d(rng)); });
}

Hypermatrix column(std::vector<cplx> v, std::size_t m) {
    Shape s(m, 1);
    s[0] = v.size();
    return Hypermatrix(s, std::move(v));
}

Hypermatrix real_orthogonal_222(std::mt19937_64& rng) {
    for (;;) {
        try {
            auto q = solve_orthogonalization(uniform({2, 2, 2}, rng, 1, 2));
            if (q.is_real(1e-12)) return q.map([](cplx v) { return cplx(v.real()); });
        } catch (const NumericError&) {
        }
    }
}

Hypermatrix symmetric_scales(std::mt19937_64& rng) {
    auto l = uniform({2, 2}, rng, 0.2, 2.0);
    l({1, 0}) = l(0, 1);
    return l;
}

}  // namespace

TEST(Parseval, ProjectorExamples) {
    auto id = kron_delta(2, 3);
    auto pp = parseval_projectors({id, id});
    for (std::size_t k = 0; k < 3; ++k)
        EXPECT_EQ(pp.projectors[k], Hypermatrix::generate({3, 3}, [&](const Index& i) {
                      return cplx(i[0] == k && i[1] == k ? 1.0 : 0.0);
                  }));
    auto d = kron_delta(3, 2);
    auto pd = parseval_projectors({d, d, d});
    for (std::size_t k = 0; k < 2; ++k) EXPECT_EQ(pd.projectors[k], kron_delta_slot(3, 2, k));

    auto dft = parseval_projectors(dft_triple(5));
    EXPECT_LT(dft.sum_residual, 1e-9);
    EXPECT_LT(dft.uncorrelated_residual, 1e-9);
    EXPECT_THROW(parseval_projectors({d, id}), ShapeError);
}

TEST(Transform, PrincipalRootRange) {
    std::mt19937_64 rng(60);
    std::normal_distribution<double> g;
    for (std::size_t m = 2; m <= 5; ++m) {
        for (int k = 0; k < 50; ++k) {
            const cplx v(g(rng), g(rng));
            const cplx r = principal_root(v, m);
            double arg = std::arg(r);
            if (arg < 0) arg += 2 * std::numbers::pi;
            EXPECT_LT(arg, 2 * std::numbers::pi / static_cast<double>(m) + 1e-15);
            EXPECT_LT(std::abs(std::pow(r, static_cast<int>(m)) - v), 1e-12 * (1 + std::abs(v)));
        }
    }
    EXPECT_EQ(principal_root(0.0, 3), cplx(0));
}

TEST(Transform, IdentityPairGivesSignClass) {
    auto id = kron_delta(2, 4);
    auto x = column({1.5, -2.0, 0.25, -0.5}, 2);
    auto y = apply_transform({id, id}, x);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(y[k]) - std::abs(x[k]), 0, 1e-15);
    EXPECT_EQ(apply_transform({id, id}, Hypermatrix::zeros({4, 1})), Hypermatrix::zeros({4, 1}));
}

TEST(Transform, PowerSumPreservedForDftAndSolvedTuples) {
    std::mt19937_64 rng(61);
    std::vector<Tuple> tuples{dft_triple(5), dft_triple(11)};
    for (int k = 0; k < 3; ++k) {
        Tuple t{uniform({2, 2, 2}, rng, 1, 2), uniform({2, 2, 2}, rng, 1, 2), uniform({2, 2, 2}, rng, 1, 2)};
        tuples.push_back(solve_uncorrelated(t).tuple);
        tuples.push_back(cyclic_tuple(solve_orthogonalization(uniform({2, 2, 2}, rng, 1, 2))));
    }
    for (const auto& t : tuples) {
        const std::size_t m = t.size(), n = t.front().dim(0);
        for (int s = 0; s < 100; ++s) {
            Shape sh(m, 1);
            sh[0] = n;
            auto x = uniform(sh, rng, -1, 1);
            auto y = apply_transform(t, x);
            const cplx px = power_sum(x, m), py = power_sum(y, m);
            EXPECT_LT(std::abs(py - px), 1e-8 * (1 + std::abs(px)));
        }
    }
}

TEST(Transform, RejectsCorrelatedTuple) {
    std::mt19937_64 rng(62);
    Tuple t{uniform({2, 2, 2}, rng, 1, 2), uniform({2, 2, 2}, rng, 1, 2), uniform({2, 2, 2}, rng, 1, 2)};
    try {
        apply_transform(t, column({1, 2}, 3));
        FAIL();
    } catch (const NotUncorrelatedError& e) {
        EXPECT_GT(e.residual(), 1e-8);
    }
}

TEST(ParsevalCheck, UnitaryMatrixPair) {
    std::mt19937_64 rng(63);
    // A 2x2 unitary built from an angle and phases.
    const double th = 0.7;
    const cplx p = std::polar(1.0, 0.3), q = std::polar(1.0, -1.1);
    auto u = Hypermatrix::matrix({{p * std::cos(th), -q * std::sin(th)}, {std::conj(q) * std::sin(th), std::conj(p) * std::cos(th)}});
    ASSERT_LT(bm_product({u, u.transpose().conjugate()}).max_abs_diff(kron_delta(2, 2)), 1e-15);
    Tuple tuple{u.transpose(), u.conjugate()};
    auto x = uniform({2, 1}, rng, -1, 1).add(uniform({2, 1}, rng, -1, 1).scale(cplx(0, 1)));
    auto y0 = bm_product({u, x});
    auto y1 = bm_product({u.conjugate(), x.conjugate()});
    auto r = parseval_check(tuple, {x, x.conjugate()}, {y0, y1}, 1e-10);
    EXPECT_TRUE(r.hypothesis_ok);
    EXPECT_TRUE(r.ok);
    EXPECT_NEAR(r.x_side.real(), std::norm(x[0]) + std::norm(x[1]), 1e-12);

    auto broken = y0;
    broken[0] *= 2.0;
    auto bad = parseval_check(tuple, {x, x.conjugate()}, {broken, y1}, 1e-10);
    EXPECT_FALSE(bad.hypothesis_ok);
    ASSERT_TRUE(bad.failing_slot.has_value());
    EXPECT_EQ(*bad.failing_slot, 0u);
}

TEST(ParsevalCheck, SolvedTripleWithRootsPerSlot) {
    std::mt19937_64 rng(64);
    Tuple t{uniform({2, 2, 2}, rng, 1, 2), uniform({2, 2, 2}, rng, 1, 2), uniform({2, 2, 2}, rng, 1, 2)};
    auto tuple = solve_uncorrelated(t).tuple;
    auto pp = parseval_projectors(tuple);
    Tuple xs{uniform({2, 1, 1}, rng, -1, 1), uniform({2, 1, 1}, rng, -1, 1), uniform({2, 1, 1}, rng, -1, 1)};
    auto y = Hypermatrix::zeros({2, 1, 1});
    for (std::size_t k = 0; k < 2; ++k) y[k] = principal_root(multilinear_form(pp.projectors[k], xs), 3);
    auto r = parseval_check(tuple, xs, {y, y, y});
    EXPECT_TRUE(r.ok) << r.residual;
}

TEST(Rayleigh, DiagonalExample) {
    auto d = spectral_from_eigenbasis(kron_delta(2, 2), {1.0, 3.0});
    auto r = rayleigh_bounds_matrix(d, column({1, 0}, 2), column({1, 0}, 2));
    EXPECT_EQ(r.lower, 1.0);
    EXPECT_EQ(r.upper, 3.0);
    EXPECT_NEAR(std::abs(r.quotient - cplx(1)), 0, 1e-15);
    EXPECT_THROW(rayleigh_bounds_matrix(d, column({1, 0}, 2), column({0, 1}, 2)), DomainError);
    EXPECT_THROW(rayleigh_bounds_matrix(d, column({1, 0}, 2), column({-1, 0}, 2)), ConeViolationError);
    auto neg = spectral_from_eigenbasis(kron_delta(2, 2), {-1.0, 3.0});
    EXPECT_THROW(rayleigh_bounds_matrix(neg, column({1, 0}, 2), column({1, 0}, 2)), DomainError);
}

TEST(Rayleigh, MatrixBoundsAndAttainment) {
    std::mt19937_64 rng(65);
    std::uniform_int_distribution<std::size_t> side(2, 4);
    std::uniform_real_distribution<double> lam(0.0, 5.0);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = side(rng);
        auto u = uniform({n, n}, rng, -1, 1).add(uniform({n, n}, rng, -1, 1).scale(cplx(0, 1)));
        std::vector<cplx> l(n);
        for (auto& v : l) v = lam(rng);
        std::sort(l.begin(), l.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
        auto d = spectral_from_eigenbasis(u, l);
        for (int s = 0; s < 1000; ++s) {
            auto [x, y] = sample_cone_matrix(d, rng);
            auto r = rayleigh_bounds_matrix(d, x, y);
            EXPECT_TRUE(r.holds(1e-9)) << r.quotient << " not in [" << r.lower << ", " << r.upper << "]";
        }
        auto col = [&](const Hypermatrix& m, std::size_t j) { return m.slice(1, j); };
        auto lo = rayleigh_bounds_matrix(d, col(d.v, 0), col(d.u, 0));
        auto hi = rayleigh_bounds_matrix(d, col(d.v, n - 1), col(d.u, n - 1));
        EXPECT_LT(std::abs(lo.quotient - cplx(lo.lower)), 1e-10);
        EXPECT_LT(std::abs(hi.quotient - cplx(hi.upper)), 1e-10);
    }
}

TEST(SlotMatrix, ExamplesAndLinearity) {
    for (std::size_t k = 0; k < 2; ++k) {
        auto z = column({k == 0 ? 1.0 : 0.0, k == 1 ? 1.0 : 0.0}, 3);
        auto mk = slot_matrix(kron_delta_slot(3, 2, k), z);
        EXPECT_EQ(mk, Hypermatrix::generate({2, 2}, [&](const Index& i) {
                      return cplx(i[0] == k && i[1] == k ? 1.0 : 0.0);
                  }));
    }
    std::mt19937_64 rng(66);
    auto p = uniform({3, 3, 3}, rng, -1, 1);
    auto z1 = uniform({3, 1, 1}, rng, -1, 1), z2 = uniform({3, 1, 1}, rng, -1, 1);
    const cplx a(0.3, -1.2), b(2.0, 0.5);
    auto lhs = slot_matrix(p, z1.scale(a).add(z2.scale(b)));
    auto rhs = slot_matrix(p, z1).scale(a).add(slot_matrix(p, z2).scale(b));
    EXPECT_LT(lhs.max_abs_diff(rhs), 1e-12);

    auto x = uniform({3, 1, 1}, rng, -1, 1), y = uniform({3, 1, 1}, rng, -1, 1);
    auto mk = slot_matrix(p, z1);
    cplx xmy = 0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) xmy += x[i] * mk(i, j) * y[j];
    EXPECT_LT(std::abs(xmy - multilinear_form(p, {x, y, z1})), 1e-12);
}

TEST(SlotMatrix, SymmetricDecompositionGivesSymmetricMatrices) {
    std::mt19937_64 rng(67);
    for (int rep = 0; rep < 10; ++rep) {
        auto d = symmetric_decomposition(real_orthogonal_222(rng), symmetric_scales(rng));
        auto z = uniform({2, 1, 1}, rng, -1, 1);
        auto rep_ = cone_conditions_side2(d, z);
        ASSERT_EQ(rep_.closed_form.size(), 4u);
        for (std::size_t k = 0; k < 2; ++k) {
            EXPECT_TRUE(rep_.slots[k].symmetric);
            EXPECT_NEAR(rep_.closed_form[2 * k], rep_.slots[k].trace.real(), 1e-12);
            EXPECT_NEAR(rep_.closed_form[2 * k + 1], rep_.slots[k].det.real(), 1e-12);
        }
    }
}

TEST(Rayleigh, ThirdOrderDeltaDecomposition) {
    auto delta = kron_delta(3, 2);
    auto mu = Hypermatrix::matrix({{2, 0.5}, {0.5, 3}});
    SpectralDecomposition d{delta, delta, delta, mu, mu, mu};
    auto e0 = column({1, 0}, 3);
    auto r = rayleigh_bounds_3(d, e0, e0, e0);
    EXPECT_NEAR(r.quotient.real(), std::pow(2.0, 6), 1e-12);
    EXPECT_TRUE(r.holds(1e-9));
}

TEST(Rayleigh, ThirdOrderConeViolation) {
    std::mt19937_64 rng(68);
    auto d = symmetric_decomposition(real_orthogonal_222(rng), symmetric_scales(rng));
    // Find z failing the trace/det tests; the x = y form is then negative for some slot and x.
    for (int tries = 0; tries < 1000; ++tries) {
        auto z = uniform({2, 1, 1}, rng, -1, 1);
        auto rep = cone_conditions_side2(d, z);
        if (rep.ok) continue;
        bool thrown = false;
        for (int s = 0; s < 200 && !thrown; ++s) {
            auto x = uniform({2, 1, 1}, rng, -1, 1);
            try {
                rayleigh_bounds_3(d, x, x, z);
            } catch (const ConeViolationError&) {
                thrown = true;
            }
        }
        EXPECT_TRUE(thrown);
        return;
    }
    FAIL() << "no violating z found";
}

TEST(Rayleigh, ThirdOrderSymmetricSide2Bound) {
    std::mt19937_64 rng(69);
    std::size_t violations = 0, total = 0;
    std::size_t skipped = 0;
    double worst = 0;
    for (int rep = 0; rep < 10;) {
        auto d = symmetric_decomposition(real_orthogonal_222(rng), symmetric_scales(rng));
        // Some decompositions admit no z at all; their cone intersection is empty.
        try {
            sample_cone_side2(d, rng, 20000);
        } catch (const NumericError&) {
            ++skipped;
            continue;
        }
        ++rep;
        for (int s = 0; s < 20; ++s) {
            auto c = sample_cone_side2(d, rng);
            auto r = rayleigh_bounds_3(d, c.x, c.y, c.z);
            ++total;
            if (!r.holds(1e-9)) {
                ++violations;
                worst = std::max(worst, std::max(r.lower - r.quotient.real(), r.quotient.real() - r.upper));
            }
        }
    }
    RecordProperty("violations", std::to_string(violations));
    RecordProperty("decompositions_without_admissible_z", std::to_string(skipped));
    EXPECT_EQ(violations, 0u) << violations << " of " << total << " cone samples fall outside the bounds (worst "
                              << worst << ")";
}
