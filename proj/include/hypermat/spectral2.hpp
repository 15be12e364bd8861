#pragma once

#include <array>
#include <string>
#include <vector>

#include "hypermat/bm_ops.hpp"

namespace hypermat {

/// Product of even-parity entries minus product of odd-parity entries of a
/// side-2 hypermatrix of any order >= 2.
cplx hyperdet_side2(const Hypermatrix& a);

// --------------------------------------------------------------- generators

/// g1 = P*s01^2 - Q*s00^2 + C and g2 = P*s11^2 - Q*s01^2 + C where
/// P = a001 a010 a100, Q = a011 a101 a110 and C = a000 Q - P a111.
struct CharGenerators {
    cplx p, q, c;
    std::array<cplx, 2> evaluate(cplx s00_sq, cplx s01_sq, cplx s11_sq) const;
};
CharGenerators char_generators_222(const Hypermatrix& a);

// ------------------------------------------------------ third-order spectra

/// Scale hypermatrix with [D]_{ijk} = s(i,k) when j == k and 0 otherwise,
/// for a symmetric n x n matrix s.
Hypermatrix scale_hypermatrix(const Hypermatrix& s);

/// A = Prod(Prod(U,D0,D0^T), Prod(V,D1,D1^T)^{T^2}, Prod(W,D2,D2^T)^T) with
/// Prod(U, V^{T^2}, W^T) = Delta. mu, nu, omega are symmetric n x n matrices.
struct SpectralDecomposition {
    Hypermatrix u, v, w;
    Hypermatrix mu, nu, omega;
};

/// Diagnostics from the side-2 solver.
struct SpectralDiagnostics {
    cplx s00_sq, s01_sq, s11_sq;          ///< chosen squared scale products
    std::array<cplx, 2> generators{};    ///< g1, g2 at the chosen values
    double reconstruction_error = 0;     ///< max |reconstruct - A| / max |A|
    double monomial_residual = 0;
};

struct SpectralOptions {
    /// Relative separation required by the block nondegeneracy checks.
    double degeneracy_tol = 1e-8;
    double reconstruction_tol = 1e-6;
};

SpectralDecomposition spectral_decompose_222(const Hypermatrix& a, SpectralDiagnostics* diag = nullptr,
                                             const SpectralOptions& opt = {});
Hypermatrix reconstruct(const SpectralDecomposition& d);
/// (U, V^{T^2}, W^T), the tuple that must be uncorrelated.
Tuple eigen_tuple(const SpectralDecomposition& d);

// ----------------------------------------------------------- matrix spectra

/// A = U diag(lambda) V^T with U V^T = I and lambda_t = mu_t nu_t.
struct MatrixSpectral {
    Hypermatrix u, v;
    std::vector<cplx> mu, nu;
    std::vector<cplx> lambda() const;
};

/// Closed-form eigen decomposition of a 2x2 matrix with distinct eigenvalues,
/// eigenvalues in the order (tr - r)/2, (tr + r)/2 with r the principal root
/// of the discriminant; mu = lambda and nu = 1.
MatrixSpectral matrix_spectral_2x2(const Hypermatrix& a);
Hypermatrix reconstruct(const MatrixSpectral& d);

// --------------------------------------------------------------- composition

/// Expression tree of generators combined by Kronecker products and direct sums.
struct SpectralTree {
    enum class Kind { Leaf, Kronecker, DirectSum };
    Kind kind = Kind::Leaf;
    Hypermatrix generator;
    std::vector<SpectralTree> children;

    static SpectralTree leaf(Hypermatrix g);
    static SpectralTree kron(SpectralTree a, SpectralTree b);
    static SpectralTree sum(SpectralTree a, SpectralTree b);

    /// The hypermatrix the tree describes.
    Hypermatrix evaluate() const;
};

/// Third-order composition. Leaf failures are rethrown as DegeneracyError
/// naming the leaf path, e.g. "root/0/1".
SpectralDecomposition compose_spectral(const SpectralTree& tree, const SpectralOptions& opt = {});
/// Matrix composition for trees of 2x2 generators.
MatrixSpectral compose_matrix_spectral(const SpectralTree& tree);

// ------------------------------------------------------------ Z/2Z example

/// Adjacency hypermatrix of (Z/2Z)^k: a_{ijk} = 1 iff i + j = k, as a k-fold Kronecker power.
Hypermatrix group_adjacency_z2(std::size_t k);

/// Branch selection for the fractional powers in the parametrization:
/// the two cube roots get factors e^{2 pi i a/3}, e^{2 pi i b/3}; the 12th and
/// 6th roots of -x^3 get e^{2 pi i c/12}, e^{2 pi i d/6}. All zero is principal.
struct Z2Branch {
    int a = 0, b = 0, c = 0, d = 0;
    std::string to_string() const;
};

struct Z2Parametrization {
    Hypermatrix q, d;
};

/// Q and D of the orthogonal parametrization. Throws DomainError at x = 0 or x^3 = -1.
Z2Parametrization z2_parametrization(cplx x, const Z2Branch& branch = {});
/// Left side of the closed scalar equation in x, principal powers throughout.
cplx z2_equation_residual(cplx x);
/// Prod(Prod(Q,D,D^T), Prod(Q,D,D^T)^{T^2}, Prod(Q,D,D^T)^T).
Hypermatrix z2_reconstruct(const Hypermatrix& q, const Hypermatrix& d);

/// Nontrivial roots from a 64-start Newton search on |x| in [0.1, 4], sorted
/// by (real, imag) after deduplication.
std::vector<cplx> z2_find_roots(double tol = 1e-12);

struct Z2BranchTrial {
    std::size_t root_index;
    Z2Branch branch;
    double direct_error;        ///< max |R - A|
    double proportional_error;  ///< max |R / R[0,1,1] - A|, or +inf when R[0,1,1] = 0
    double orthogonality_error; ///< max |Prod(Q,Q^{T^2},Q^T) - Delta|
};

struct Z2Report {
    std::vector<cplx> roots;
    std::vector<double> root_residuals;
    std::vector<Z2BranchTrial> trials;
    bool success = false;
    bool rescaled = false;       ///< D was multiplied by c^{-1/6} to remove a proportional factor c
    std::size_t root_index = 0;
    Z2Branch branch;
    cplx scale = 1.0;            ///< the factor c (1 when no rescale was needed)
    Z2Parametrization decomposition;
    double reconstruction_error = 0;
};

/// Enumerates all 648 branch combinations at every root. A branch whose
/// reconstruction equals A (tol) is accepted directly; otherwise one equal to
/// c*A is accepted after rescaling D by c^{-1/6}. When nothing matches the
/// report has success = false and lists every trial.
Z2Report z2_decompose(double tol = 1e-6);

}  // namespace hypermat
