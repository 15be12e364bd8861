#include "hypermat/orthogonalize.hpp"

#include <cmath>
#include <map>

#include "hypermat/structured.hpp"

namespace hypermat {

namespace {

void require_generic(const Hypermatrix& a, const char* op) {
    if (a.order() < 2 || !a.is_cubic()) throw ShapeError(std::string(op) + ": input must be cubic of order >= 2");
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k] == cplx(0)) throw DomainError(std::string(op) + ": input has a zero entry at offset " + std::to_string(k));
}

bool off_diagonal(const Index& i) {
    for (auto v : i)
        if (v != i[0]) return true;
    return false;
}

/// For every operand, a table mapping its entries to unknown indices.
/// Rows are built as prod_s var(s, i with axis c(s) set to t) = target_t[i].
MonomialSystem build_slot_system(const Tuple& targets_ops, const std::vector<Hypermatrix>& id_tables,
                                 std::size_t var_count, bool dedupe) {
    const std::size_t m = targets_ops.size();
    const std::size_t n = targets_ops.front().dim(0);
    const Shape shape(m, n);
    const Hypermatrix full = bm_product(targets_ops);

    MonomialSystem sys;
    sys.var_count = var_count;
    std::map<std::vector<std::size_t>, cplx> seen;
    for (std::size_t t = 0; t < n; ++t) {
        const Hypermatrix slot = outer_product_slot(targets_ops, t);
        Index i(m, 0);
        do {
            if (!off_diagonal(i)) continue;
            std::vector<std::size_t> vars;
            for (std::size_t s = 0; s < m; ++s) {
                Index idx = i;
                idx[contracted_axis(s, m)] = t;
                vars.push_back(static_cast<std::size_t>(id_tables[s](idx).real()));
            }
            const cplx b = slot(i) - full(i) / static_cast<double>(n);
            std::sort(vars.begin(), vars.end());
            if (dedupe) {
                auto it = seen.find(vars);
                if (it != seen.end() && std::abs(it->second - b) <= 1e-12 * std::max(1.0, std::abs(b))) continue;
                seen.emplace(vars, b);
            }
            if (b == cplx(0))
                throw DegeneracyError("orthogonalization: target vanishes at a slot " + std::to_string(t) +
                                      " constraint, input is not generic");
            std::vector<Rational> row(var_count, Rational(0));
            for (auto v : vars) row[v] += 1;
            sys.add_row(std::move(row), b);
        } while (next_index(i, shape));
    }
    return sys;
}

Hypermatrix id_table(const Shape& shape, std::size_t base) {
    std::size_t k = 0;
    return Hypermatrix::generate(shape, [&](const Index&) { return cplx(static_cast<double>(base + k++)); });
}

MonomialSolution solve_or_degenerate(const MonomialSystem& sys, const char* op, bool generic_free = false) {
    MonomialOptions opt;
    if (generic_free) {
        // Deterministic values in [1,2) from the golden-ratio sequence.
        opt.free_value = [](std::size_t v) {
            double f = static_cast<double>(v + 1) * 0.6180339887498949;
            return cplx(1.0 + (f - std::floor(f)));
        };
    }
    try {
        return gauss_jordan_solve(sys, opt);
    } catch (const NumericError& e) {
        throw DegeneracyError(std::string(op) + ": elimination failed: " + e.what());
    }
}

Tuple split_tuple(const std::vector<cplx>& values, const Shape& shape, std::size_t m) {
    Tuple out;
    const std::size_t vol = shape_volume(shape);
    for (std::size_t s = 0; s < m; ++s)
        out.emplace_back(shape, std::vector<cplx>(values.begin() + s * vol, values.begin() + (s + 1) * vol));
    return out;
}

/// Principal d^(-1/m), rejecting diagonals lost to cancellation.
cplx inverse_root(cplx d, double scale, std::size_t m, std::size_t i) {
    if (std::abs(d) <= 1e-12 * scale)
        throw DegeneracyError("normalization: diagonal entry " + std::to_string(i) + " of the product vanishes");
    return std::pow(d, -1.0 / static_cast<double>(m));
}

}  // namespace

OrthogonalizationProblem build_orthogonalization_system(const Hypermatrix& a) {
    require_generic(a, "build_orthogonalization_system");
    const auto ids = cyclic_tuple(id_table(a.shape(), 0));
    return {a, build_slot_system(cyclic_tuple(a), ids, a.size(), true)};
}

UncorrelatedProblem build_uncorrelated_system(const Tuple& tuple) {
    if (tuple.empty()) throw ShapeError("build_uncorrelated_system: empty tuple");
    const std::size_t m = tuple.size();
    for (const auto& a : tuple) {
        require_generic(a, "build_uncorrelated_system");
        if (a.order() != m || a.shape() != tuple.front().shape())
            throw ShapeError("build_uncorrelated_system: expected " + std::to_string(m) +
                             " cubic operands of order " + std::to_string(m) + " and equal side");
    }
    std::vector<Hypermatrix> ids;
    const std::size_t vol = tuple.front().size();
    for (std::size_t s = 0; s < m; ++s) ids.push_back(id_table(tuple.front().shape(), s * vol));
    return {tuple, build_slot_system(tuple, ids, m * vol, false)};
}

Hypermatrix solve_orthogonalization_unnormalized(const Hypermatrix& a) {
    auto problem = build_orthogonalization_system(a);
    auto sol = solve_or_degenerate(problem.system, "solve_orthogonalization");
    return Hypermatrix(a.shape(), sol.values);
}

Hypermatrix solve_orthogonalization(const Hypermatrix& a) {
    auto problem = build_orthogonalization_system(a);
    Hypermatrix x;
    try {
        x = normalize_rows(Hypermatrix(a.shape(), solve_or_degenerate(problem.system, "solve_orthogonalization").values));
    } catch (const DegeneracyError&) {
        // Unit free variables can make a diagonal vanish; retry with a generic assignment.
        auto sol = solve_or_degenerate(problem.system, "solve_orthogonalization", true);
        x = normalize_rows(Hypermatrix(a.shape(), sol.values));
    }
    auto check = is_orthogonal(x, 1e-9);
    if (!check.ok)
        throw DegeneracyError("solve_orthogonalization: normalized result is not orthogonal (residual " +
                              std::to_string(check.residual) + ")");
    for (std::size_t k = 0; k < x.size(); ++k)
        if (x[k] == cplx(0)) throw DegeneracyError("solve_orthogonalization: result has a zero entry");
    return x;
}

UncorrelatedSolution solve_uncorrelated(const Tuple& tuple) {
    auto problem = build_uncorrelated_system(tuple);
    const Shape& shape = tuple.front().shape();
    const std::size_t m = tuple.size();
    UncorrelatedSolution out;
    for (bool generic : {false, true}) {
        auto sol = solve_or_degenerate(problem.system, "solve_uncorrelated", generic);
        out.unnormalized = split_tuple(sol.values, shape, m);
        out.residual = sol.residual;
        try {
            out.tuple = normalize_tuple(out.unnormalized);
            break;
        } catch (const DegeneracyError&) {
            if (generic) throw;
        }
    }
    auto check = is_uncorrelated(out.tuple, 1e-9);
    if (!check.ok)
        throw DegeneracyError("solve_uncorrelated: normalized tuple is not uncorrelated (residual " +
                              std::to_string(check.residual) + ")");
    return out;
}

Hypermatrix normalize_rows(const Hypermatrix& x) {
    if (x.order() < 2 || !x.is_cubic()) throw ShapeError("normalize_rows: input must be cubic of order >= 2");
    const std::size_t m = x.order(), n = x.dim(0);
    const Hypermatrix p = bm_product(cyclic_tuple(x));
    const Hypermatrix mags = bm_product(cyclic_tuple(x.map([](cplx v) { return cplx(std::abs(v)); })));
    std::vector<cplx> factor(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Index diag(m, i);
        factor[i] = inverse_root(p(diag), mags(diag).real(), m, i);
    }
    Hypermatrix out = x;
    Index idx(m, 0);
    std::size_t k = 0;
    do {
        out[k++] *= factor[idx[0]];
    } while (next_index(idx, x.shape()));
    return out;
}

Tuple normalize_tuple(const Tuple& x) {
    const std::size_t m = x.size();
    if (m < 2) throw ShapeError("normalize_tuple: need at least two operands");
    const std::size_t n = x.front().dim(0);
    const Hypermatrix p = bm_product(x);
    Tuple abs_ops;
    for (const auto& a : x) abs_ops.push_back(a.map([](cplx v) { return cplx(std::abs(v)); }));
    const Hypermatrix mags = bm_product(abs_ops);
    std::vector<cplx> factor(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Index diag(m, i);
        factor[i] = inverse_root(p(diag), mags(diag).real(), m, i);
    }
    // Operands before the last keep i_0 on axis 0; the last one keeps i_1 on axis 1.
    Tuple out = x;
    for (std::size_t s = 0; s < m; ++s) {
        const std::size_t axis = s + 1 < m ? 0 : 1;
        Index idx(m, 0);
        std::size_t k = 0;
        do {
            out[s][k++] *= factor[idx[axis]];
        } while (next_index(idx, x[s].shape()));
    }
    return out;
}

}  // namespace hypermat
