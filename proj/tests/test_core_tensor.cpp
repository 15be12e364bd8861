#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hypermat/error.hpp"
#include "hypermat/hypermatrix.hpp"
#include "hypermat/json_io.hpp"

using namespace hypermat;

namespace {

Hypermatrix random_hm(const Shape& s, std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    return Hypermatrix::generate(s, [&](const Index&) { return cplx(d(rng), d(rng)); });
}

Hypermatrix z2_adjacency() {
    return Hypermatrix::generate({2, 2, 2}, [](const Index& i) {
        return cplx((i[0] + i[1]) % 2 == i[2] ? 1.0 : 0.0);
    });
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction and indexing
// ---------------------------------------------------------------------------

TEST(Hypermatrix, RejectsEntryCountMismatch) {
    EXPECT_THROW(Hypermatrix({2, 2}, std::vector<cplx>(3)), ShapeError);
    EXPECT_THROW(Hypermatrix(Shape{}, {}), ShapeError);
    EXPECT_THROW(Hypermatrix({2, 0}, {}), ShapeError);
}

TEST(Hypermatrix, RowMajorFirstIndexSlowest) {
    Hypermatrix a({2, 3}, {1, 2, 3, 4, 5, 6});
    EXPECT_EQ(a(0, 2), cplx(3));
    EXPECT_EQ(a(1, 0), cplx(4));
    EXPECT_EQ(a.unravel(5), (Index{1, 2}));
    EXPECT_THROW(a.at({2, 0}), ShapeError);
}

TEST(Hypermatrix, FrontalSlicesLayout) {
    auto h = Hypermatrix::from_frontal_slices({{{1, 1}, {-1, 1}}, {{1, 1}, {1, 1}}});
    EXPECT_EQ(h(1, 0, 0), cplx(-1));
    EXPECT_EQ(h(1, 0, 1), cplx(1));
    EXPECT_EQ(h(0, 1, 0), cplx(1));
}

// ---------------------------------------------------------------------------
// Transpose
// ---------------------------------------------------------------------------

TEST(Transpose, MatrixCase) {
    auto m = Hypermatrix({2, 3}, {1, 2, 3, 4, 5, 6});
    auto t = transpose(m);
    ASSERT_EQ(t.shape(), (Shape{3, 2}));
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(t(j, i), m(i, j));
}

TEST(Transpose, EntryMovesToRotatedIndex) {
    std::mt19937_64 rng(1);
    auto a = random_hm({2, 3, 4}, rng);
    auto t = a.transpose();
    ASSERT_EQ(t.shape(), (Shape{3, 4, 2}));
    EXPECT_EQ(t(2, 3, 1), a(1, 2, 3));
}

TEST(Transpose, OrderPowerIsIdentityExactly) {
    std::mt19937_64 rng(2);
    for (std::size_t m = 2; m <= 5; ++m) {
        Shape s;
        for (std::size_t a = 0; a < m; ++a) s.push_back(1 + (a % 3));
        auto a = random_hm(s, rng);
        EXPECT_EQ(a.transpose(static_cast<long long>(m)), a);
        EXPECT_EQ(a.transpose(1), a.transpose(static_cast<long long>(m + 1)));
        EXPECT_EQ(a.transpose(-1), a.transpose(static_cast<long long>(m - 1)));
    }
}

TEST(Transpose, OrderOneRejected) {
    auto v = Hypermatrix({3}, {1, 2, 3});
    EXPECT_THROW(v.transpose(), ShapeError);
}

// ---------------------------------------------------------------------------
// Slicing
// ---------------------------------------------------------------------------

TEST(Slice, Z2AdjacencyFrontSlice) {
    auto s = slice(z2_adjacency(), 2, 0);
    ASSERT_EQ(s.shape(), (Shape{2, 2, 1}));
    EXPECT_EQ(s(0, 0, 0), cplx(1));
    EXPECT_EQ(s(0, 1, 0), cplx(0));
    EXPECT_EQ(s(1, 0, 0), cplx(0));
    EXPECT_EQ(s(1, 1, 0), cplx(1));
}

TEST(Slice, VectorEntryAndShape) {
    auto x = Hypermatrix::vector({4.0, 5.0, 6.0}, 3);
    auto s = x.slice(0, 1);
    ASSERT_EQ(s.shape(), (Shape{1, 1, 1}));
    EXPECT_EQ(s[0], cplx(5.0));
    std::mt19937_64 rng(3);
    auto a = random_hm({2, 4, 3}, rng);
    EXPECT_EQ(a.slice(1, 2).shape(), (Shape{2, 1, 3}));
}

TEST(Slice, BoundsChecked) {
    auto a = Hypermatrix::zeros({2, 2});
    EXPECT_THROW(a.slice(2, 0), ShapeError);
    EXPECT_THROW(a.slice(0, 2), ShapeError);
}

TEST(Slice, ReassembleReproducesOriginal) {
    std::mt19937_64 rng(4);
    auto a = random_hm({3, 2, 4}, rng);
    for (std::size_t axis = 0; axis < 3; ++axis) {
        std::vector<Hypermatrix> parts;
        for (std::size_t t = 0; t < a.shape()[axis]; ++t) parts.push_back(a.slice(axis, t));
        EXPECT_EQ(concatenate(parts, axis), a);
    }
}

// ---------------------------------------------------------------------------
// Entrywise operations
// ---------------------------------------------------------------------------

TEST(Entrywise, HadamardMasksDiagonal) {
    auto mask = Hypermatrix::matrix({{0, 1}, {1, 0}});
    auto b = Hypermatrix::matrix({{5, 6}, {7, 8}});
    EXPECT_EQ(hadamard_entrywise(mask, b), Hypermatrix::matrix({{0, 6}, {7, 0}}));
    EXPECT_EQ(hadamard_entrywise(b, Hypermatrix::filled({2, 2}, 1.0)), b);
    EXPECT_THROW(hadamard_entrywise(b, Hypermatrix::zeros({2, 3})), ShapeError);
}

TEST(Entrywise, DeltaIdempotent) {
    auto d = Hypermatrix::generate({2, 2, 2}, [](const Index& i) {
        return cplx(i[0] == i[1] && i[1] == i[2] ? 1.0 : 0.0);
    });
    EXPECT_EQ(d.hadamard(d), d);
}

TEST(Entrywise, NormsAndConjugate) {
    EXPECT_DOUBLE_EQ(norm_l2(Hypermatrix::filled({2, 2, 2}, 1.0)), std::sqrt(8.0));
    std::mt19937_64 rng(5);
    auto a = random_hm({3, 3}, rng);
    EXPECT_EQ(max_abs_diff(a, a), 0.0);
    auto c = conjugate(Hypermatrix::matrix({{cplx(0, 1)}}));
    EXPECT_EQ(c[0], cplx(0, -1));
    EXPECT_EQ(add(a, scale(a, -1.0)).max_abs(), 0.0);
    EXPECT_THROW(add(a, Hypermatrix::zeros({3, 2})), ShapeError);
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

TEST(Json, RoundTripIsBitExact) {
    std::mt19937_64 rng(6);
    auto a = random_hm({2, 3, 2}, rng);
    auto text = dump_json(to_json(a));
    auto b = hypermatrix_from_json(json::parse(text));
    EXPECT_EQ(a, b);
}

TEST(Json, ImaginaryOmittedWhenZero) {
    auto a = Hypermatrix::matrix({{1, 2}, {3, 4}});
    auto j = to_json(a);
    EXPECT_FALSE(j.contains("im"));
    EXPECT_EQ(hypermatrix_from_json(j), a);
}

TEST(Json, MalformedInputRejected) {
    EXPECT_THROW(hypermatrix_from_json(json::parse(R"({"shape":[2],"re":[1]})")), ParseError);
    EXPECT_THROW(hypermatrix_from_json(json::parse(R"({"re":[1]})")), ParseError);
    EXPECT_THROW(hypermatrix_from_json(json::parse(R"({"shape":[0],"re":[]})")), ParseError);
    EXPECT_THROW(hypermatrix_from_json(json::parse(R"({"shape":[1],"re":["x"]})")), ParseError);
}
