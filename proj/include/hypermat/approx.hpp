#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hypermat/bm_ops.hpp"
#include "hypermat/monomial.hpp"

namespace hypermat {

/// max |a - ref| / max |ref|; plain max |a - ref| when ref is zero.
double relative_error(const Hypermatrix& a, const Hypermatrix& ref);

/// H = Prod_{Delta^(0)}(X^(0), ..., X^(m-1)). Factor s has the shape of H
/// with its contracted axis reduced to length 1; unknowns are numbered factor
/// by factor in row-major order.
struct Rank1Problem {
    Hypermatrix target;
    std::vector<Shape> factor_shapes;
    MonomialSystem system;
};

Rank1Problem build_rank1_problem(const Hypermatrix& h);

struct Rank1Result {
    Tuple factors;
    /// Sum of squared log residuals of the monomial system.
    double residual = 0;
    bool rank_deficient = false;
};

/// Minimum-norm logarithmic least-squares fit. Complex targets whose principal
/// logs do not fit retry with the branch-searching exact solver.
Rank1Result bm_rank1_approx(const Hypermatrix& h);

/// True when the rank-one system is solvable to residual `tol`.
bool bm_rank_one_consistent(const Hypermatrix& h, double tol = 1e-10);

struct KronFactorProblem {
    std::vector<Hypermatrix> blocks;
    std::vector<std::size_t> exponents;  ///< block j has side 2^exponents[j]
    std::vector<MonomialSystem> systems;
};

/// Splits A along the diagonal into blocks of the given sides and validates
/// that everything outside the blocks vanishes.
KronFactorProblem build_kron_factor_problem(const Hypermatrix& a, const std::vector<std::size_t>& block_sides);

struct KronFactorResult {
    /// factors[j] lists the side-2 factors of block j, most significant first.
    std::vector<Tuple> factors;
    std::vector<double> block_residuals;
    double residual = 0;
};

KronFactorResult kron_factor_approx(const Hypermatrix& a, const std::vector<std::size_t>& block_sides);
/// Kronecker product of the factors (the 1-entry hypermatrix for none).
Hypermatrix kron_chain(const Tuple& factors, std::size_t order);

struct RankCertificate {
    bool certified = false;
    std::size_t rho = 0;
    /// Factors with contracted length rho; Prod(factors) approximates H.
    Tuple factors;
    /// ||Prod(factors) - H||_2 / ||H||_2
    double residual = 0;
    std::size_t sweeps = 0;
};

struct RankOptions {
    std::size_t max_sweeps = 200;
    double improvement_tol = 1e-12;
    double certify_tol = 1e-8;
    /// Independent starts of the alternating fit; the first is seeded from the rank-one log fit.
    std::size_t restarts = 4;
    std::uint64_t seed = 0;
};

/// One-sided test of BM-rank <= rho. For rho >= n a constructive certificate
/// is returned directly; otherwise the factors are refined by alternating
/// least squares, one factor at a time.
RankCertificate bm_rank_upper(const Hypermatrix& h, std::size_t rho, const RankOptions& opt = {});

/// Best residual over `samples` random points in log space, a blind baseline
/// for the least-squares solvers.
double random_search_oracle(const MonomialSystem& sys, std::size_t samples, std::uint64_t seed = 0);

}  // namespace hypermat
