#pragma once

#include "hypermat/bm_ops.hpp"
#include "hypermat/monomial.hpp"

namespace hypermat {

/// Off-diagonal slot constraints whose solution X is orthogonal after row normalization.
/// Unknowns are the entries of X in row-major order.
struct OrthogonalizationProblem {
    Hypermatrix input;
    MonomialSystem system;
};

/// Same construction for an m-tuple. Unknowns are the entries of X^(0), then X^(1), ...
struct UncorrelatedProblem {
    Tuple input;
    MonomialSystem system;
};

struct UncorrelatedSolution {
    Tuple unnormalized;  ///< direct solution of the monomial constraints
    Tuple tuple;         ///< after joint normalization
    double residual = 0; ///< monomial-solver substitution residual
};

OrthogonalizationProblem build_orthogonalization_system(const Hypermatrix& a);
UncorrelatedProblem build_uncorrelated_system(const Tuple& tuple);

/// Solution of the constraints before normalization (free variables set to 1).
Hypermatrix solve_orthogonalization_unnormalized(const Hypermatrix& a);
/// Orthogonal hypermatrix derived from a generic cubic input with no zero entries.
Hypermatrix solve_orthogonalization(const Hypermatrix& a);

UncorrelatedSolution solve_uncorrelated(const Tuple& tuple);

/// Scale slice X[i,...] by d_i^(-1/m), d_i the i-th diagonal entry of the cyclic product.
Hypermatrix normalize_rows(const Hypermatrix& x);
/// Joint normalization of a tuple so the diagonal of its product is all ones.
Tuple normalize_tuple(const Tuple& x);

}  // namespace hypermat
