#pragma once

#include <vector>

#include "hypermat/hypermatrix.hpp"

namespace hypermat {

using Tuple = std::vector<Hypermatrix>;

/// Result of validating a BM-conformable operand list.
struct ConformabilityReport {
    std::size_t contracted_length = 0;  ///< common k; 0 when slot lengths differ
    std::vector<std::size_t> slot_lengths;  ///< contracted length per operand
    Shape result_shape;
};

/// Axis contracted in operand `t` (0-based) of an order-m product:
/// operand t < m-1 contracts axis t+1, the last operand contracts axis 0.
inline std::size_t contracted_axis(std::size_t t, std::size_t m) { return (t + 1) % m; }

/// Validate operands for the BM product. Throws ConformabilityError naming
/// the first offending operand and axis.
ConformabilityReport check_conformable(const Tuple& operands);

/// BM product: entry i is sum_j prod_t A_t[i with axis c(t) set to j].
Hypermatrix bm_product(const Tuple& operands);

/// BM product with background b: operand t contracts its own index j_t and
/// each term is weighted by b[j_0,...,j_{m-1}]. The background axis t must
/// have the length of operand t's contracted axis.
Hypermatrix general_bm_product(const Tuple& operands, const Hypermatrix& background);

/// Slot-t outer product, i.e. the general product with background Delta^(t).
Hypermatrix outer_product_slot(const Tuple& operands, std::size_t t);

/// Kronecker delta of order m and side n.
Hypermatrix kron_delta(std::size_t m, std::size_t n);
/// Single 1 at (t,...,t).
Hypermatrix kron_delta_slot(std::size_t m, std::size_t n, std::size_t t);

/// Per-axis Kronecker product; index i_a = alpha_a * shapeB[a] + beta_a.
Hypermatrix kronecker(const Hypermatrix& a, const Hypermatrix& b);
/// Block-diagonal direct sum of two cubic hypermatrices of equal order.
Hypermatrix direct_sum(const Hypermatrix& a, const Hypermatrix& b);

/// sum over i of a[i] * x0[i0] * ... * x_{m-1}[i_{m-1}], each x_j of shape
/// (n_j,1,...,1). Evaluated as a general BM product with background `a`.
cplx multilinear_form(const Hypermatrix& a, const Tuple& vectors);

/// (Q, Q^{T^(m-1)}, ..., Q^{T^1}): operand s is Q transposed (m - s) mod m times.
Tuple cyclic_tuple(const Hypermatrix& q);

/// Kronecker / direct sum applied factor-wise to two tuples of equal length.
Tuple kronecker_tuple(const Tuple& a, const Tuple& b);
Tuple direct_sum_tuple(const Tuple& a, const Tuple& b);

}  // namespace hypermat
