#include "hypermat/transforms.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace hypermat {

namespace {

constexpr double kConeSlack = 1e-9;

/// Reshape a vector with n entries to (n, 1, ..., 1) of order m.
Hypermatrix column(const Hypermatrix& v, std::size_t m, std::size_t n, const char* what) {
    if (v.size() != n)
        throw ShapeError(std::string(what) + ": expected " + std::to_string(n) + " entries, got " +
                         std::to_string(v.size()));
    Shape s(m, 1);
    s[0] = n;
    return Hypermatrix(s, v.data());
}

void require_cubic_tuple(const Tuple& tuple, const char* op) {
    if (tuple.size() < 2) throw ShapeError(std::string(op) + ": need at least two operands");
    const std::size_t m = tuple.size();
    for (std::size_t s = 0; s < m; ++s) {
        const auto& a = tuple[s];
        if (a.order() != m || !a.is_cubic() || a.dim(0) != tuple.front().dim(0))
            throw ShapeError(std::string(op) + ": operand " + std::to_string(s) + " must be cubic of order " +
                             std::to_string(m) + " with the common side");
    }
}

cplx plain_form(const Tuple& vs) {
    cplx s = 0;
    for (std::size_t t = 0; t < vs.front().size(); ++t) {
        cplx p = 1;
        for (const auto& v : vs) p *= v[t];
        s += p;
    }
    return s;
}

double real_nonnegative(cplx v, const std::string& what) {
    const double scale = 1.0 + std::abs(v);
    if (std::abs(v.imag()) > 1e-12 * scale || v.real() < -1e-12 * scale)
        throw DomainError(what + " must be real and non-negative");
    return v.real();
}

std::vector<ConeMembership> check_cones(const std::vector<Hypermatrix>& projectors, const Tuple& vectors) {
    std::vector<ConeMembership> out;
    for (std::size_t k = 0; k < projectors.size(); ++k) {
        out.push_back(cone_membership(k, multilinear_form(projectors[k], vectors)));
        if (!out.back().member) throw ConeViolationError(k, out.back().value);
    }
    return out;
}

cplx checked_denominator(const Tuple& vectors) {
    const cplx den = plain_form(vectors);
    Tuple mags;
    for (const auto& v : vectors) mags.push_back(v.map([](cplx c) { return cplx(std::abs(c)); }));
    if (std::abs(den) <= 1e-14 * std::max(1e-300, plain_form(mags).real()))
        throw DomainError("rayleigh: the denominator form vanishes");
    return den;
}

}  // namespace

// ---------------------------------------------------------------- Parseval

ParsevalProjectors parseval_projectors(const Tuple& tuple) {
    require_cubic_tuple(tuple, "parseval_projectors");
    check_conformable(tuple);
    const std::size_t m = tuple.size(), n = tuple.front().dim(0);
    ParsevalProjectors out;
    out.source = tuple;
    const Hypermatrix full = bm_product(tuple);
    Hypermatrix sum = Hypermatrix::zeros(full.shape());
    for (std::size_t k = 0; k < n; ++k) {
        out.projectors.push_back(outer_product_slot(tuple, k));
        sum = sum.add(out.projectors.back());
    }
    out.sum_residual = sum.max_abs_diff(full);
    out.uncorrelated_residual = full.max_abs_diff(kron_delta(m, n));
    return out;
}

cplx principal_root(cplx v, std::size_t m) {
    if (v == cplx(0)) return 0;
    double arg = std::arg(v);
    if (arg < 0) arg += 2 * std::numbers::pi;
    return std::polar(std::pow(std::abs(v), 1.0 / static_cast<double>(m)), arg / static_cast<double>(m));
}

Hypermatrix apply_transform(const Tuple& tuple, const Hypermatrix& x, double tol) {
    auto pp = parseval_projectors(tuple);
    if (pp.uncorrelated_residual > tol)
        throw NotUncorrelatedError("apply_transform: tuple is not uncorrelated (residual " +
                                       std::to_string(pp.uncorrelated_residual) + ")",
                                   pp.uncorrelated_residual);
    const std::size_t m = tuple.size(), n = tuple.front().dim(0);
    const Hypermatrix xc = column(x, m, n, "apply_transform");
    const Tuple forms(m, xc);
    Hypermatrix y = Hypermatrix::zeros(xc.shape());
    for (std::size_t k = 0; k < n; ++k) y[k] = principal_root(multilinear_form(pp.projectors[k], forms), m);
    return y;
}

cplx power_sum(const Hypermatrix& v, std::size_t m) {
    cplx s = 0;
    for (std::size_t k = 0; k < v.size(); ++k) s += std::pow(v[k], static_cast<int>(m));
    return s;
}

ParsevalReport parseval_check(const Tuple& tuple, const Tuple& xs, const Tuple& ys, double tol) {
    auto pp = parseval_projectors(tuple);
    const std::size_t m = tuple.size(), n = tuple.front().dim(0);
    if (xs.size() != m || ys.size() != m)
        throw ShapeError("parseval_check: expected " + std::to_string(m) + " x and y vectors");
    Tuple xc, yc;
    for (std::size_t j = 0; j < m; ++j) {
        xc.push_back(column(xs[j], m, n, "parseval_check"));
        yc.push_back(column(ys[j], m, n, "parseval_check"));
    }
    ParsevalReport r;
    r.hypothesis_ok = true;
    for (std::size_t k = 0; k < n; ++k) {
        cplx lhs = 1;
        for (const auto& y : yc) lhs *= y[k];
        const cplx rhs = multilinear_form(pp.projectors[k], xc);
        r.slot_residuals.push_back(std::abs(lhs - rhs));
        if (r.hypothesis_ok && r.slot_residuals.back() > tol * (1.0 + std::abs(rhs))) {
            r.hypothesis_ok = false;
            r.failing_slot = k;
        }
    }
    r.x_side = plain_form(xc);
    r.y_side = plain_form(yc);
    r.residual = std::abs(r.y_side - r.x_side);
    r.ok = r.hypothesis_ok && r.residual <= tol * (1.0 + std::abs(r.x_side));
    return r;
}

// -------------------------------------------------------------------- cones

ConeMembership cone_membership(std::size_t k, cplx value) {
    const double scale = kConeSlack * (1.0 + std::abs(value));
    return {k, value, std::abs(value.imag()) <= scale && value.real() >= -scale};
}

ConeViolationError::ConeViolationError(std::size_t slot, cplx value)
    : DomainError("cone violation at slot " + std::to_string(slot) + ": form value (" +
                  std::to_string(value.real()) + ", " + std::to_string(value.imag()) + ")"),
      slot_(slot),
      value_(value) {}

bool RayleighResult::holds(double slack) const {
    return std::abs(quotient.imag()) <= slack * (1.0 + std::abs(quotient)) && quotient.real() >= lower - slack &&
           quotient.real() <= upper + slack;
}

MatrixSpectral spectral_from_eigenbasis(const Hypermatrix& u, const std::vector<cplx>& lambda) {
    if (u.order() != 2 || !u.is_cubic() || u.dim(0) != lambda.size())
        throw ShapeError("spectral_from_eigenbasis: need an n x n basis and n eigenvalues");
    const std::size_t n = u.dim(0);
    Eigen::MatrixXcd e(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) e(i, j) = u(i, j);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(e);
    if (!lu.isInvertible()) throw DegeneracyError("spectral_from_eigenbasis: basis is singular");
    const Eigen::MatrixXcd inv = lu.inverse();
    auto v = Hypermatrix::generate({n, n}, [&](const Index& i) { return inv(i[1], i[0]); });
    return {u, v, lambda, std::vector<cplx>(n, cplx(1))};
}

RayleighResult rayleigh_bounds_matrix(const MatrixSpectral& d, const Hypermatrix& x, const Hypermatrix& y) {
    const std::size_t n = d.u.dim(0);
    RayleighResult r;
    r.lower = std::numeric_limits<double>::infinity();
    r.upper = -r.lower;
    for (auto l : d.lambda()) {
        const double v = real_nonnegative(l, "rayleigh_bounds_matrix: eigenvalues");
        r.lower = std::min(r.lower, v);
        r.upper = std::max(r.upper, v);
    }
    const Tuple vecs{column(x, 2, n, "rayleigh_bounds_matrix"), column(y, 2, n, "rayleigh_bounds_matrix")};
    const Tuple basis{d.u, d.v.transpose()};
    std::vector<Hypermatrix> pk;
    for (std::size_t k = 0; k < n; ++k) pk.push_back(outer_product_slot(basis, k));
    r.cones = check_cones(pk, vecs);
    r.quotient = multilinear_form(reconstruct(d), vecs) / checked_denominator(vecs);
    return r;
}

std::vector<double> rayleigh_products_3(const SpectralDecomposition& d) {
    const std::size_t n = d.mu.dim(0);
    for (const auto* s : {&d.mu, &d.nu, &d.omega})
        for (std::size_t k = 0; k < s->size(); ++k) real_nonnegative((*s)[k], "rayleigh_bounds_3: scale entries");
    auto re = [](const Hypermatrix& s, std::size_t a, std::size_t b) { return s(a, b).real(); };
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t t = 0; t < n; ++t)
                    out.push_back(re(d.mu, i, t) * re(d.mu, t, k) * re(d.nu, j, t) * re(d.nu, t, i) *
                                  re(d.omega, k, t) * re(d.omega, t, j));
    return out;
}

RayleighResult rayleigh_bounds_3(const SpectralDecomposition& d, const Hypermatrix& x, const Hypermatrix& y,
                                 const Hypermatrix& z) {
    const std::size_t n = d.u.dim(0);
    const auto products = rayleigh_products_3(d);
    RayleighResult r;
    r.lower = *std::min_element(products.begin(), products.end());
    r.upper = *std::max_element(products.begin(), products.end());
    const Tuple vecs{column(x, 3, n, "rayleigh_bounds_3"), column(y, 3, n, "rayleigh_bounds_3"),
                     column(z, 3, n, "rayleigh_bounds_3")};
    const Tuple basis = eigen_tuple(d);
    std::vector<Hypermatrix> pk;
    for (std::size_t k = 0; k < n; ++k) pk.push_back(outer_product_slot(basis, k));
    r.cones = check_cones(pk, vecs);
    r.quotient = multilinear_form(reconstruct(d), vecs) / checked_denominator(vecs);
    return r;
}

Hypermatrix slot_matrix(const Hypermatrix& pk, const Hypermatrix& z) {
    if (pk.order() != 3 || !pk.is_cubic()) throw ShapeError("slot_matrix: P_k must be cubic of order 3");
    const std::size_t n = pk.dim(0);
    if (z.size() != n) throw ShapeError("slot_matrix: z must have " + std::to_string(n) + " entries");
    return Hypermatrix::generate({n, n}, [&](const Index& i) {
        cplx s = 0;
        for (std::size_t l = 0; l < n; ++l) s += pk(i[0], i[1], l) * z[l];
        return s;
    });
}

ConeConditionsReport cone_conditions_side2(const SpectralDecomposition& d, const Hypermatrix& z) {
    if (d.u.shape() != Shape{2, 2, 2}) throw ShapeError("cone_conditions_side2: decomposition must have side 2");
    const Tuple basis = eigen_tuple(d);
    ConeConditionsReport rep;
    rep.ok = true;
    for (std::size_t k = 0; k < 2; ++k) {
        const Hypermatrix mk = slot_matrix(outer_product_slot(basis, k), z);
        SlotConeReport s;
        s.trace = mk(0, 0) + mk(1, 1);
        s.det = mk(0, 0) * mk(1, 1) - mk(0, 1) * mk(1, 0);
        s.discriminant = s.trace * s.trace - 4.0 * s.det;
        const double scale = kConeSlack * (1.0 + mk.max_abs() * mk.max_abs());
        s.symmetric = std::abs(mk(0, 1) - mk(1, 0)) <= kConeSlack * (1.0 + mk.max_abs());
        const bool real = std::abs(s.trace.imag()) <= scale && std::abs(s.det.imag()) <= scale;
        const bool tr = s.trace.real() >= -scale, dt = s.det.real() >= -scale;
        s.ok = real && tr && ((s.discriminant.real() > scale && dt) || (std::abs(s.discriminant) <= scale && s.symmetric));
        rep.ok = rep.ok && s.ok;
        rep.slots.push_back(s);
    }
    if (d.u == d.v && d.u == d.w) {
        const auto& q = d.u;
        const cplx z0 = z[0], z1 = z[1];
        for (std::size_t k = 0; k < 2; ++k) {
            const cplx a = q(0, k, 0), b = q(0, k, 1), c = q(1, k, 0), e = q(1, k, 1);
            const cplx m00 = a * a * a * z0 + a * b * c * z1;
            const cplx m11 = b * c * e * z0 + e * e * e * z1;
            const cplx m01 = a * b * c * z0 + b * c * e * z1;
            rep.closed_form.push_back((m00 + m11).real());
            rep.closed_form.push_back((m00 * m11 - m01 * m01).real());
        }
    }
    return rep;
}

// ------------------------------------------------------------------ samplers

std::pair<Hypermatrix, Hypermatrix> sample_cone_matrix(const MatrixSpectral& d, std::mt19937_64& rng) {
    const std::size_t n = d.u.dim(0);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> r(0.0, 2.0);
    auto x = Hypermatrix::zeros({n, 1}), y = Hypermatrix::zeros({n, 1});
    for (std::size_t k = 0; k < n; ++k) {
        const cplx alpha(g(rng), g(rng));
        const cplx beta = r(rng) * std::conj(alpha);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * d.v(i, k);
            y[i] += beta * d.u(i, k);
        }
    }
    return {x, y};
}

ConeSample3 sample_cone_side2(const SpectralDecomposition& d, std::mt19937_64& rng, std::size_t max_tries) {
    if (!(d.u == d.v && d.u == d.w) || !d.u.is_real())
        throw DomainError("sample_cone_side2: decomposition must be symmetric and real");
    std::normal_distribution<double> g;
    ConeSample3 s;
    for (s.z_tries = 1; s.z_tries <= max_tries; ++s.z_tries) {
        s.z = Hypermatrix::generate({2, 1, 1}, [&](const Index&) { return cplx(g(rng)); });
        if (!cone_conditions_side2(d, s.z).ok) continue;
        // M_k(z) is symmetric positive semidefinite here, so x^T M_k(z) x >= 0.
        do {
            s.x = Hypermatrix::generate({2, 1, 1}, [&](const Index&) { return cplx(g(rng)); });
        } while (std::abs(plain_form({s.x, s.x, s.z})) < 1e-9);
        s.y = s.x;
        return s;
    }
    throw NumericError("sample_cone_side2: no admissible z found in " + std::to_string(max_tries) + " draws");
}

SpectralDecomposition symmetric_decomposition(const Hypermatrix& q, const Hypermatrix& lambda) {
    if (q.order() != 3 || !q.is_cubic()) throw ShapeError("symmetric_decomposition: Q must be cubic of order 3");
    if (lambda.shape() != Shape{q.dim(0), q.dim(0)})
        throw ShapeError("symmetric_decomposition: lambda must be n x n");
    return {q, q, q, lambda, lambda, lambda};
}

}  // namespace hypermat
