#include "hypermat/spectral2.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "hypermat/monomial.hpp"
#include "hypermat/structured.hpp"

namespace hypermat {

namespace {

constexpr double kPi = std::numbers::pi;

void require_222(const Hypermatrix& a, const char* op) {
    if (a.shape() != Shape{2, 2, 2}) throw ShapeError(std::string(op) + ": expected a 2x2x2 hypermatrix");
}

bool close(cplx x, cplx y, double tol) {
    return std::abs(x - y) <= tol * std::max({std::abs(x), std::abs(y), 1e-300});
}

cplx root_of_unity(int k, int n) { return std::polar(1.0, 2.0 * kPi * k / n); }

double relative_max_diff(const Hypermatrix& a, const Hypermatrix& b) {
    const double scale = std::max(1.0, b.max_abs());
    return a.max_abs_diff(b) / scale;
}

Hypermatrix diag_times(const Hypermatrix& u, const std::vector<cplx>& lambda) {
    Hypermatrix out = u;
    for (std::size_t i = 0; i < u.dim(0); ++i)
        for (std::size_t t = 0; t < u.dim(1); ++t) out({i, t}) *= lambda[t];
    return out;
}

std::vector<cplx> kron_vec(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    std::vector<cplx> out;
    for (auto x : a)
        for (auto y : b) out.push_back(x * y);
    return out;
}

}  // namespace

cplx hyperdet_side2(const Hypermatrix& a) {
    if (a.order() < 2) throw ShapeError("hyperdet_side2: order must be at least 2");
    for (auto d : a.shape())
        if (d != 2) throw ShapeError("hyperdet_side2: every side must be 2");
    cplx even = 1, odd = 1;
    // Row-major with side 2: the bits of the offset are the index entries.
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (std::popcount(k) % 2 == 0)
            even *= a[k];
        else
            odd *= a[k];
    }
    return even - odd;
}

std::array<cplx, 2> CharGenerators::evaluate(cplx s00_sq, cplx s01_sq, cplx s11_sq) const {
    return {p * s01_sq - q * s00_sq + c, p * s11_sq - q * s01_sq + c};
}

CharGenerators char_generators_222(const Hypermatrix& a) {
    require_222(a, "char_generators_222");
    CharGenerators g;
    g.p = a(0, 0, 1) * a(0, 1, 0) * a(1, 0, 0);
    g.q = a(0, 1, 1) * a(1, 0, 1) * a(1, 1, 0);
    g.c = a(0, 0, 0) * g.q - g.p * a(1, 1, 1);
    return g;
}

Hypermatrix scale_hypermatrix(const Hypermatrix& s) {
    if (s.order() != 2 || !s.is_cubic()) throw ShapeError("scale_hypermatrix: expected a square matrix");
    const std::size_t n = s.dim(0);
    return Hypermatrix::generate({n, n, n}, [&](const Index& i) { return i[1] == i[2] ? s(i[0], i[2]) : cplx(0); });
}

Hypermatrix reconstruct(const SpectralDecomposition& d) {
    auto scaled = [](const Hypermatrix& x, const Hypermatrix& s) {
        const Hypermatrix dd = scale_hypermatrix(s);
        return bm_product({x, dd, dd.transpose()});
    };
    const Hypermatrix u = scaled(d.u, d.mu), v = scaled(d.v, d.nu), w = scaled(d.w, d.omega);
    return bm_product({u, v.transpose(2), w.transpose()});
}

Tuple eigen_tuple(const SpectralDecomposition& d) { return {d.u, d.v.transpose(2), d.w.transpose()}; }

SpectralDecomposition spectral_decompose_222(const Hypermatrix& a, SpectralDiagnostics* diag,
                                             const SpectralOptions& opt) {
    require_222(a, "spectral_decompose_222");
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k] == cplx(0)) throw DomainError("spectral_decompose_222: zero entry at offset " + std::to_string(k));
    const auto g = char_generators_222(a);
    const double det_scale = std::abs(a(0, 0, 0) * g.q) + std::abs(g.p * a(1, 1, 1));
    if (std::abs(g.c) <= 1e-12 * det_scale) throw DegeneracyError("spectral_decompose_222: hyperdeterminant vanishes");

    const cplx a000 = a(0, 0, 0), a111 = a(1, 1, 1);
    const double tol = opt.degeneracy_tol;
    // The free value s00^2 = a000 makes a diagonal slot product vanish, so
    // scan multiples of a000 and take the first one passing every block check.
    const std::array<cplx, 8> factors{2.0, 3.0, 0.5, -1.0, cplx(1, 1), cplx(2, -1), 5.0, cplx(-2, 3)};
    cplx s00sq, s01sq, s11sq;
    Hypermatrix mu;
    bool found = false;
    for (cplx f : factors) {
        s00sq = f * a000;
        s01sq = (g.q * s00sq - g.c) / g.p;
        s11sq = (g.q * s01sq - g.c) / g.p;
        const cplx s00 = std::sqrt(s00sq), s01 = std::sqrt(s01sq), s11 = std::sqrt(s11sq);
        if (close(s00sq, a000, tol) || close(s01sq, a000, tol) || close(s11sq, a111, tol)) continue;
        if (close(s01sq, s00sq, tol) || close(s11sq, s01sq, tol)) continue;
        if (std::abs(s01) <= tol * std::max(std::abs(s00), 1.0) || close(s00, s11, tol)) continue;
        mu = Hypermatrix::matrix({{s00, s01}, {s01, s11}});
        found = true;
        break;
    }
    if (!found) throw DegeneracyError("spectral_decompose_222: no admissible free scale value (block degeneracy)");
    const Hypermatrix ones = Hypermatrix::filled({2, 2}, 1.0);

    // Per (i,j,k): p0 + p1 = delta, lambda0 p0 + lambda1 p1 = a_ijk, where
    // p_t = U[i,t,k] V[j,t,i] W[k,t,j] and lambda_t = mu_it mu_kt (nu = omega = 1).
    MonomialSystem sys;
    sys.var_count = 24;
    Index idx(3, 0);
    do {
        const std::size_t i = idx[0], j = idx[1], k = idx[2];
        const cplx l0 = mu(i, 0) * mu(k, 0), l1 = mu(i, 1) * mu(k, 1);
        const cplx delta = (i == j && j == k) ? 1.0 : 0.0;
        if (close(l0, l1, tol)) throw DegeneracyError("spectral_decompose_222: singular block at (" +
                                                      std::to_string(i) + "," + std::to_string(j) + "," +
                                                      std::to_string(k) + ")");
        const cplx p1 = (a(idx) - l0 * delta) / (l1 - l0);
        const cplx p0 = delta - p1;
        for (std::size_t t = 0; t < 2; ++t) {
            const cplx p = t == 0 ? p0 : p1;
            if (std::abs(p) <= 1e-14 * std::max(1.0, std::abs(a(idx))))
                throw DegeneracyError("spectral_decompose_222: vanishing slot product");
            std::vector<Rational> row(24, Rational(0));
            row[(i * 2 + t) * 2 + k] += 1;           // U[i,t,k]
            row[8 + (j * 2 + t) * 2 + i] += 1;       // V[j,t,i]
            row[16 + (k * 2 + t) * 2 + j] += 1;      // W[k,t,j]
            sys.add_row(std::move(row), p);
        }
    } while (next_index(idx, a.shape()));

    MonomialSolution sol;
    try {
        sol = gauss_jordan_solve(sys);
    } catch (const NumericError& e) {
        throw NumericError(std::string("spectral_decompose_222: decomposition failure: ") + e.what());
    }
    SpectralDecomposition d;
    d.u = Hypermatrix({2, 2, 2}, std::vector<cplx>(sol.values.begin(), sol.values.begin() + 8));
    d.v = Hypermatrix({2, 2, 2}, std::vector<cplx>(sol.values.begin() + 8, sol.values.begin() + 16));
    d.w = Hypermatrix({2, 2, 2}, std::vector<cplx>(sol.values.begin() + 16, sol.values.end()));
    d.mu = mu;
    d.nu = ones;
    d.omega = ones;

    const double err = relative_max_diff(reconstruct(d), a);
    if (diag) {
        diag->s00_sq = s00sq;
        diag->s01_sq = s01sq;
        diag->s11_sq = s11sq;
        diag->generators = g.evaluate(s00sq, s01sq, s11sq);
        diag->reconstruction_error = err;
        diag->monomial_residual = sol.residual;
    }
    if (err > opt.reconstruction_tol)
        throw NumericError("spectral_decompose_222: decomposition failure, reconstruction error " + std::to_string(err));
    return d;
}

// ----------------------------------------------------------------- matrices

std::vector<cplx> MatrixSpectral::lambda() const {
    std::vector<cplx> out(mu.size());
    for (std::size_t t = 0; t < mu.size(); ++t) out[t] = mu[t] * nu[t];
    return out;
}

MatrixSpectral matrix_spectral_2x2(const Hypermatrix& a) {
    if (a.shape() != Shape{2, 2}) throw ShapeError("matrix_spectral_2x2: expected a 2x2 matrix");
    const cplx tr = a(0, 0) + a(1, 1);
    const cplx det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const cplx r = std::sqrt(tr * tr - 4.0 * det);
    if (std::abs(r) <= 1e-12 * std::max(1.0, std::abs(tr)))
        throw DegeneracyError("matrix_spectral_2x2: repeated eigenvalue");
    const std::array<cplx, 2> lam{(tr - r) / 2.0, (tr + r) / 2.0};
    Hypermatrix u = Hypermatrix::zeros({2, 2});
    for (std::size_t t = 0; t < 2; ++t) {
        cplx x, y;
        if (a(0, 1) != cplx(0)) {
            x = a(0, 1);
            y = lam[t] - a(0, 0);
        } else if (a(1, 0) != cplx(0)) {
            x = lam[t] - a(1, 1);
            y = a(1, 0);
        } else {
            // Diagonal: the eigenvector is the axis whose entry equals lambda.
            const bool first = std::abs(a(0, 0) - lam[t]) <= std::abs(a(1, 1) - lam[t]);
            x = first ? 1.0 : 0.0;
            y = first ? 0.0 : 1.0;
        }
        u({0, t}) = x;
        u({1, t}) = y;
    }
    const cplx du = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
    // V = (U^{-1})^T
    Hypermatrix v = Hypermatrix::matrix({{u(1, 1) / du, -u(1, 0) / du}, {-u(0, 1) / du, u(0, 0) / du}});
    return {u, v, {lam[0], lam[1]}, {1.0, 1.0}};
}

Hypermatrix reconstruct(const MatrixSpectral& d) { return bm_product({diag_times(d.u, d.lambda()), d.v.transpose()}); }

// -------------------------------------------------------------- composition

SpectralTree SpectralTree::leaf(Hypermatrix g) {
    SpectralTree t;
    t.kind = Kind::Leaf;
    t.generator = std::move(g);
    return t;
}

SpectralTree SpectralTree::kron(SpectralTree a, SpectralTree b) {
    SpectralTree t;
    t.kind = Kind::Kronecker;
    t.children = {std::move(a), std::move(b)};
    return t;
}

SpectralTree SpectralTree::sum(SpectralTree a, SpectralTree b) {
    SpectralTree t;
    t.kind = Kind::DirectSum;
    t.children = {std::move(a), std::move(b)};
    return t;
}

Hypermatrix SpectralTree::evaluate() const {
    switch (kind) {
        case Kind::Leaf: return generator;
        case Kind::Kronecker: return kronecker(children.at(0).evaluate(), children.at(1).evaluate());
        case Kind::DirectSum: return direct_sum(children.at(0).evaluate(), children.at(1).evaluate());
    }
    return generator;
}

namespace {

SpectralDecomposition compose_at(const SpectralTree& t, const std::string& path, const SpectralOptions& opt) {
    if (t.kind == SpectralTree::Kind::Leaf) {
        try {
            return spectral_decompose_222(t.generator, nullptr, opt);
        } catch (const Error& e) {
            throw DegeneracyError("compose_spectral: generator at " + path + " is not decomposable: " + e.what());
        }
    }
    if (t.children.size() != 2) throw ShapeError("compose_spectral: node at " + path + " needs two children");
    const auto a = compose_at(t.children[0], path + "/0", opt);
    const auto b = compose_at(t.children[1], path + "/1", opt);
    auto op = t.kind == SpectralTree::Kind::Kronecker ? kronecker : direct_sum;
    return {op(a.u, b.u), op(a.v, b.v), op(a.w, b.w), op(a.mu, b.mu), op(a.nu, b.nu), op(a.omega, b.omega)};
}

MatrixSpectral compose_matrix_at(const SpectralTree& t, const std::string& path) {
    if (t.kind == SpectralTree::Kind::Leaf) {
        try {
            return matrix_spectral_2x2(t.generator);
        } catch (const Error& e) {
            throw DegeneracyError("compose_matrix_spectral: generator at " + path + " is not decomposable: " + e.what());
        }
    }
    if (t.children.size() != 2) throw ShapeError("compose_matrix_spectral: node at " + path + " needs two children");
    const auto a = compose_matrix_at(t.children[0], path + "/0");
    const auto b = compose_matrix_at(t.children[1], path + "/1");
    if (t.kind == SpectralTree::Kind::Kronecker)
        return {kronecker(a.u, b.u), kronecker(a.v, b.v), kron_vec(a.mu, b.mu), kron_vec(a.nu, b.nu)};
    MatrixSpectral out{direct_sum(a.u, b.u), direct_sum(a.v, b.v), a.mu, a.nu};
    out.mu.insert(out.mu.end(), b.mu.begin(), b.mu.end());
    out.nu.insert(out.nu.end(), b.nu.begin(), b.nu.end());
    return out;
}

}  // namespace

SpectralDecomposition compose_spectral(const SpectralTree& tree, const SpectralOptions& opt) {
    return compose_at(tree, "root", opt);
}

MatrixSpectral compose_matrix_spectral(const SpectralTree& tree) { return compose_matrix_at(tree, "root"); }

// ------------------------------------------------------------------- Z/2Z

Hypermatrix group_adjacency_z2(std::size_t k) {
    if (k < 1) throw DomainError("group_adjacency_z2: k must be at least 1");
    const Hypermatrix base =
        Hypermatrix::generate({2, 2, 2}, [](const Index& i) { return cplx((i[0] + i[1]) % 2 == i[2] ? 1.0 : 0.0); });
    Hypermatrix out = base;
    for (std::size_t r = 1; r < k; ++r) out = kronecker(out, base);
    return out;
}

std::string Z2Branch::to_string() const {
    return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "," + std::to_string(d) + ")";
}

Z2Parametrization z2_parametrization(cplx x, const Z2Branch& br) {
    const cplx x3 = x * x * x;
    if (std::abs(x) < 1e-12) throw DomainError("z2_parametrization: branch singularity at x = 0");
    if (std::abs(x3 + 1.0) < 1e-12) throw DomainError("z2_parametrization: branch singularity at x^3 = -1");
    const cplx a = std::pow(x3 + 1.0, -1.0 / 3.0) * root_of_unity(br.a, 3);
    const cplx b = std::pow(1.0 / x3 + 1.0, -1.0 / 3.0) * root_of_unity(br.b, 3);
    const cplx l00 = std::pow(-x3, 1.0 / 12.0) * root_of_unity(br.c, 12);
    const cplx l01 = std::pow(-x3, 1.0 / 6.0) * root_of_unity(br.d, 6);
    Z2Parametrization p;
    p.q = Hypermatrix::from_frontal_slices({{{a, b}, {-x, 1.0}}, {{1.0, 1.0}, {a, b}}});
    p.d = Hypermatrix::from_frontal_slices({{{l00, 0.0}, {l01, 0.0}}, {{0.0, l01}, {0.0, 1.0}}});
    return p;
}

cplx z2_equation_residual(cplx x) {
    const cplx i(0, 1);
    const cplx num = std::exp(i * (5.0 * kPi / 6.0)) * std::pow(x, 3.5) - std::exp(i * (kPi / 3.0)) * x * x;
    const cplx den = std::pow(x * x - x + 1.0, 1.0 / 3.0) * std::pow(x + 1.0, 1.0 / 3.0);
    return num / den - (std::pow(x, 6) + x * std::sqrt(-x)) / (x * x * x + 1.0);
}

Hypermatrix z2_reconstruct(const Hypermatrix& q, const Hypermatrix& d) {
    const Hypermatrix s = bm_product({q, d, d.transpose()});
    return bm_product({s, s.transpose(2), s.transpose()});
}

std::vector<cplx> z2_find_roots(double tol) {
    std::vector<cplx> roots;
    auto f = z2_equation_residual;
    for (int ri = 0; ri < 8; ++ri) {
        const double r = 0.1 + (4.0 - 0.1) * ri / 7.0;
        for (int ti = 0; ti < 8; ++ti) {
            cplx z = std::polar(r, 2.0 * kPi * ti / 8.0);
            bool ok = true;
            for (int it = 0; it < 200; ++it) {
                const cplx fz = f(z);
                if (!std::isfinite(fz.real()) || !std::isfinite(fz.imag())) {
                    ok = false;
                    break;
                }
                if (std::abs(fz) < tol) break;
                const double h = 1e-7 * std::max(1.0, std::abs(z));
                const cplx dz = (f(z + h) - f(z - h)) / (2.0 * h);
                if (dz == cplx(0) || !std::isfinite(std::abs(dz))) {
                    ok = false;
                    break;
                }
                z -= fz / dz;
            }
            if (!ok || std::abs(z) < 1e-3 || std::abs(z * z * z + 1.0) < 1e-6) continue;
            if (std::abs(f(z)) >= 1e-9) continue;
            bool dup = false;
            for (auto q : roots) dup = dup || std::abs(q - z) < 1e-6;
            if (!dup) roots.push_back(z);
        }
    }
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return roots;
}

Z2Report z2_decompose(double tol) {
    Z2Report rep;
    const Hypermatrix target = group_adjacency_z2(1);
    const Hypermatrix delta = kron_delta(3, 2);
    rep.roots = z2_find_roots();
    for (auto r : rep.roots) rep.root_residuals.push_back(std::abs(z2_equation_residual(r)));

    const double inf = std::numeric_limits<double>::infinity();
    std::size_t best_direct = SIZE_MAX, best_prop = SIZE_MAX;
    for (std::size_t ri = 0; ri < rep.roots.size(); ++ri) {
        Z2Branch br;
        for (br.a = 0; br.a < 3; ++br.a)
            for (br.b = 0; br.b < 3; ++br.b)
                for (br.c = 0; br.c < 12; ++br.c)
                    for (br.d = 0; br.d < 6; ++br.d) {
                        const auto p = z2_parametrization(rep.roots[ri], br);
                        const Hypermatrix rec = z2_reconstruct(p.q, p.d);
                        Z2BranchTrial trial{ri, br, rec.max_abs_diff(target), inf,
                                            bm_product(cyclic_tuple(p.q)).max_abs_diff(delta)};
                        const cplx c = rec(0, 1, 1);
                        if (std::abs(c) > 1e-12) trial.proportional_error = rec.scale(1.0 / c).max_abs_diff(target);
                        rep.trials.push_back(trial);
                        const std::size_t id = rep.trials.size() - 1;
                        if (trial.direct_error <= tol &&
                            (best_direct == SIZE_MAX || trial.direct_error < rep.trials[best_direct].direct_error))
                            best_direct = id;
                        if (trial.proportional_error <= tol &&
                            (best_prop == SIZE_MAX ||
                             trial.proportional_error < rep.trials[best_prop].proportional_error))
                            best_prop = id;
                    }
    }
    const std::size_t pick = best_direct != SIZE_MAX ? best_direct : best_prop;
    if (pick == SIZE_MAX) return rep;

    const auto& trial = rep.trials[pick];
    rep.root_index = trial.root_index;
    rep.branch = trial.branch;
    rep.decomposition = z2_parametrization(rep.roots[trial.root_index], trial.branch);
    if (pick != best_direct) {
        rep.rescaled = true;
        rep.scale = z2_reconstruct(rep.decomposition.q, rep.decomposition.d)(0, 1, 1);
        rep.decomposition.d = rep.decomposition.d.scale(std::pow(rep.scale, -1.0 / 6.0));
    }
    rep.reconstruction_error = z2_reconstruct(rep.decomposition.q, rep.decomposition.d).max_abs_diff(target);
    rep.success = rep.reconstruction_error <= tol;
    return rep;
}

}  // namespace hypermat
