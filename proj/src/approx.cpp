#include "hypermat/approx.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace hypermat {

namespace {

void require_nonzero(const Hypermatrix& h, const char* op) {
    for (std::size_t k = 0; k < h.size(); ++k)
        if (h[k] == cplx(0))
            throw DomainError(std::string(op) + ": zero entry at offset " + std::to_string(k) +
                              " has no logarithm");
}

void require_cubic(const Hypermatrix& h, const char* op) {
    if (h.order() < 2 || !h.is_cubic()) throw ShapeError(std::string(op) + ": input must be cubic of order >= 2");
}

Shape factor_shape(const Shape& s, std::size_t t, std::size_t len) {
    Shape out = s;
    out[contracted_axis(t, s.size())] = len;
    return out;
}

Tuple split_values(const std::vector<cplx>& values, const std::vector<Shape>& shapes) {
    Tuple out;
    std::size_t pos = 0;
    for (const auto& s : shapes) {
        const std::size_t vol = shape_volume(s);
        out.emplace_back(s, std::vector<cplx>(values.begin() + pos, values.begin() + pos + vol));
        pos += vol;
    }
    return out;
}

bool any_complex(const std::vector<cplx>& v) {
    return std::any_of(v.begin(), v.end(), [](cplx b) { return b.imag() != 0.0 || b.real() < 0.0; });
}

/// Least squares first; the branch-searching exact solver only when principal
/// logs leave a residual on a complex system.
MonomialSolution solve_log_system(const MonomialSystem& sys, double tol) {
    MonomialSolution best = log_least_square(sys);
    if (best.residual <= tol || !any_complex(sys.rhs)) return best;
    try {
        auto exact = gauss_jordan_solve(sys);
        if (exact.residual < best.residual) return exact;
    } catch (const Error&) {
    }
    return best;
}

double relative_l2(const Hypermatrix& a, const Hypermatrix& ref) {
    const double n = ref.norm_l2();
    const double d = a.subtract(ref).norm_l2();
    return n > 0 ? d / n : d;
}

/// Exact least-squares update of factor s with the others fixed. The problem
/// splits into one small rho-column system per fiber along the contracted axis.
void als_update(const Hypermatrix& h, Tuple& x, std::size_t s) {
    const std::size_t m = h.order(), n = h.dim(0);
    const std::size_t a = contracted_axis(s, m), rho = x[s].dim(a);
    Shape fibers = h.shape();
    fibers[a] = 1;
    Index f(m, 0);
    Eigen::MatrixXcd c(n, rho);
    Eigen::VectorXcd rhs(n);
    do {
        for (std::size_t r = 0; r < n; ++r) {
            Index i = f;
            i[a] = r;
            rhs(r) = h(i);
            for (std::size_t t = 0; t < rho; ++t) {
                cplx p = 1;
                for (std::size_t o = 0; o < m; ++o) {
                    if (o == s) continue;
                    Index j = i;
                    j[contracted_axis(o, m)] = t;
                    p *= x[o](j);
                }
                c(r, t) = p;
            }
        }
        const Eigen::VectorXcd sol = c.completeOrthogonalDecomposition().solve(rhs);
        for (std::size_t t = 0; t < rho; ++t) {
            Index j = f;
            j[a] = t;
            x[s](j) = sol(t);
        }
    } while (next_index(f, fibers));
}

}  // namespace

double relative_error(const Hypermatrix& a, const Hypermatrix& ref) {
    const double scale = ref.max_abs();
    const double d = a.max_abs_diff(ref);
    return scale > 0 ? d / scale : d;
}

Rank1Problem build_rank1_problem(const Hypermatrix& h) {
    require_cubic(h, "bm_rank1_approx");
    require_nonzero(h, "bm_rank1_approx");
    const std::size_t m = h.order();
    Rank1Problem p;
    p.target = h;
    std::vector<std::size_t> base;
    std::size_t vars = 0;
    for (std::size_t t = 0; t < m; ++t) {
        p.factor_shapes.push_back(factor_shape(h.shape(), t, 1));
        base.push_back(vars);
        vars += shape_volume(p.factor_shapes.back());
    }
    p.system.var_count = vars;
    Index i(m, 0);
    do {
        std::vector<Rational> row(vars, Rational(0));
        for (std::size_t t = 0; t < m; ++t) {
            Index j = i;
            j[contracted_axis(t, m)] = 0;
            std::size_t off = 0;
            for (std::size_t a = 0; a < m; ++a) off = off * p.factor_shapes[t][a] + j[a];
            row[base[t] + off] += 1;
        }
        p.system.add_row(std::move(row), h(i));
    } while (next_index(i, h.shape()));
    return p;
}

Rank1Result bm_rank1_approx(const Hypermatrix& h) {
    auto p = build_rank1_problem(h);
    auto sol = solve_log_system(p.system, 1e-20);
    return {split_values(sol.values, p.factor_shapes), sol.residual, sol.rank_deficient};
}

bool bm_rank_one_consistent(const Hypermatrix& h, double tol) {
    return bm_rank1_approx(h).residual <= tol;
}

// ------------------------------------------------------------------ Kronecker

KronFactorProblem build_kron_factor_problem(const Hypermatrix& a, const std::vector<std::size_t>& block_sides) {
    require_cubic(a, "kron_factor_approx");
    const std::size_t m = a.order(), n = a.dim(0);
    if (block_sides.empty()) throw ShapeError("kron_factor_approx: no blocks declared");
    std::size_t total = 0;
    KronFactorProblem p;
    for (auto s : block_sides) {
        if (s == 0 || (s & (s - 1)) != 0)
            throw DomainError("kron_factor_approx: block side " + std::to_string(s) + " is not a power of 2");
        p.exponents.push_back(static_cast<std::size_t>(std::countr_zero(s)));
        total += s;
    }
    if (total != n)
        throw ShapeError("kron_factor_approx: block sides sum to " + std::to_string(total) + ", input side is " +
                         std::to_string(n));

    // Owner block of every coordinate; entries mixing owners must vanish.
    std::vector<std::size_t> owner(n), start;
    for (std::size_t j = 0, pos = 0; j < block_sides.size(); ++j) {
        start.push_back(pos);
        for (std::size_t k = 0; k < block_sides[j]; ++k) owner[pos++] = j;
    }
    const double tiny = 1e-12 * std::max(1.0, a.max_abs());
    Index i(m, 0);
    do {
        bool same = std::all_of(i.begin(), i.end(), [&](std::size_t v) { return owner[v] == owner[i[0]]; });
        if (!same && std::abs(a(i)) > tiny)
            throw DomainError("kron_factor_approx: input is not block diagonal for the declared sides");
    } while (next_index(i, a.shape()));

    for (std::size_t j = 0; j < block_sides.size(); ++j) {
        const std::size_t side = block_sides[j], e = p.exponents[j];
        auto block = Hypermatrix::generate(Shape(m, side), [&](const Index& b) {
            Index g = b;
            for (auto& v : g) v += start[j];
            return a(g);
        });
        require_nonzero(block, "kron_factor_approx");
        const std::size_t per = std::size_t{1} << m;
        MonomialSystem sys;
        sys.var_count = e * per;
        Index b(m, 0);
        do {
            std::vector<Rational> row(sys.var_count, Rational(0));
            for (std::size_t f = 0; f < e; ++f) {
                std::size_t off = 0;
                for (std::size_t ax = 0; ax < m; ++ax) off = off * 2 + ((b[ax] >> (e - 1 - f)) & 1u);
                row[f * per + off] += 1;
            }
            sys.add_row(std::move(row), block(b));
        } while (next_index(b, block.shape()));
        p.blocks.push_back(std::move(block));
        p.systems.push_back(std::move(sys));
    }
    return p;
}

Hypermatrix kron_chain(const Tuple& factors, std::size_t order) {
    Hypermatrix out = Hypermatrix::filled(Shape(order, 1), 1.0);
    for (const auto& f : factors) out = kronecker(out, f);
    return out;
}

KronFactorResult kron_factor_approx(const Hypermatrix& a, const std::vector<std::size_t>& block_sides) {
    auto p = build_kron_factor_problem(a, block_sides);
    const std::size_t m = a.order();
    KronFactorResult out;
    for (std::size_t j = 0; j < p.blocks.size(); ++j) {
        auto sol = solve_log_system(p.systems[j], 1e-20);
        std::vector<Shape> shapes(p.exponents[j], Shape(m, 2));
        out.factors.push_back(split_values(sol.values, shapes));
        out.block_residuals.push_back(sol.residual);
        out.residual += sol.residual;
    }
    return out;
}

// ------------------------------------------------------------------- BM rank

RankCertificate bm_rank_upper(const Hypermatrix& h, std::size_t rho, const RankOptions& opt) {
    require_cubic(h, "bm_rank_upper");
    const std::size_t m = h.order(), n = h.dim(0);
    if (rho == 0 || rho > n)
        throw DomainError("bm_rank_upper: rank bound must lie in [1, " + std::to_string(n) + "]");
    RankCertificate cert;
    cert.rho = rho;

    if (rho == n) {
        // H = Prod(H, E, 1, ..., 1) with E[i with axis c(1) = j] = [j == i_1].
        const std::size_t ax1 = contracted_axis(1, m);
        cert.factors.push_back(h);
        cert.factors.push_back(Hypermatrix::generate(h.shape(), [&](const Index& i) {
            return cplx(i[ax1] == i[1] ? 1.0 : 0.0);
        }));
        for (std::size_t s = 2; s < m; ++s) cert.factors.push_back(Hypermatrix::filled(h.shape(), 1.0));
        cert.residual = relative_l2(bm_product(cert.factors), h);
        cert.certified = cert.residual < opt.certify_tol;
        return cert;
    }

    require_nonzero(h, "bm_rank_upper");
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> mag(0.5, 1.5);
    std::normal_distribution<double> noise(0.0, 0.5);
    const bool complex_h = !h.is_real();

    // Start 0 stacks rho noisy copies of the rank-one log fit; later starts are random.
    const Tuple base = bm_rank1_approx(h).factors;
    double best_res = std::numeric_limits<double>::infinity();
    for (std::size_t start = 0; start < std::max<std::size_t>(1, opt.restarts); ++start) {
        Tuple x;
        for (std::size_t s = 0; s < m; ++s) {
            const std::size_t a = contracted_axis(s, m);
            if (start == 0) {
                std::vector<Hypermatrix> parts;
                for (std::size_t t = 0; t < rho; ++t) {
                    const double w = (s == 0 ? 1.0 / static_cast<double>(rho) : 1.0);
                    parts.push_back(base[s].map([&](cplx v) { return rho == 1 ? v : v * w * std::exp(noise(rng)); }));
                }
                x.push_back(concatenate(parts, a));
            } else {
                x.push_back(Hypermatrix::generate(factor_shape(h.shape(), s, rho), [&](const Index&) {
                    return cplx(mag(rng), complex_h ? noise(rng) : 0.0);
                }));
            }
        }
        double prev = relative_l2(bm_product(x), h);
        std::size_t sweeps = 0;
        for (; sweeps < opt.max_sweeps && prev > 0; ++sweeps) {
            for (std::size_t s = 0; s < m; ++s) als_update(h, x, s);
            const double cur = relative_l2(bm_product(x), h);
            const bool stalled = prev - cur <= opt.improvement_tol * prev;
            prev = cur;
            if (stalled) break;
        }
        if (prev < best_res) {
            best_res = prev;
            cert.factors = x;
            cert.sweeps = sweeps;
        }
        if (best_res < opt.certify_tol) break;
    }
    cert.residual = relative_l2(bm_product(cert.factors), h);
    cert.certified = cert.residual < opt.certify_tol;
    return cert;
}

// -------------------------------------------------------------------- oracle

double random_search_oracle(const MonomialSystem& sys, std::size_t samples, std::uint64_t seed) {
    sys.validate();
    std::vector<std::vector<double>> a(sys.rows(), std::vector<double>(sys.var_count));
    std::vector<cplx> logb(sys.rows());
    double radius = 1.0;
    for (std::size_t r = 0; r < sys.rows(); ++r) {
        for (std::size_t c = 0; c < sys.var_count; ++c) a[r][c] = to_double(sys.exponents[r][c]);
        logb[r] = std::log(sys.rhs[r]);
        radius = std::max(radius, std::abs(logb[r].real()) + 1.0);
    }
    const bool complex_rhs = any_complex(sys.rhs);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> re(-radius, radius), im(-std::numbers::pi, std::numbers::pi);
    std::vector<cplx> x(sys.var_count);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < samples; ++s) {
        for (auto& v : x) v = cplx(re(rng), complex_rhs ? im(rng) : 0.0);
        double res = 0;
        for (std::size_t r = 0; r < sys.rows() && res < best; ++r) {
            cplx z = -logb[r];
            for (std::size_t c = 0; c < sys.var_count; ++c) z += a[r][c] * x[c];
            const double wrapped = std::remainder(z.imag(), 2 * std::numbers::pi);
            res += z.real() * z.real() + wrapped * wrapped;
        }
        best = std::min(best, res);
    }
    return best;
}

}  // namespace hypermat
