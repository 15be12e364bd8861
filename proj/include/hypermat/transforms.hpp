#pragma once

#include <optional>
#include <random>
#include <vector>

#include "hypermat/spectral2.hpp"
#include "hypermat/structured.hpp"

namespace hypermat {

// ---------------------------------------------------------------- Parseval

struct ParsevalProjectors {
    Tuple source;
    /// P_k = Prod_{Delta^(k)}(source)
    std::vector<Hypermatrix> projectors;
    /// max |sum_k P_k - Prod(source)|
    double sum_residual = 0;
    /// max |Prod(source) - Delta|
    double uncorrelated_residual = 0;
};

ParsevalProjectors parseval_projectors(const Tuple& tuple);

/// Raised when a transform is requested for a tuple that is not uncorrelated.
class NotUncorrelatedError : public DomainError {
public:
    NotUncorrelatedError(const std::string& what, double residual) : DomainError(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// m-th root with argument in [0, 2 pi / m).
cplx principal_root(cplx v, std::size_t m);

/// y_k = principal m-th root of Prod_{P_k}(x, ..., x). x has shape (n, 1, ..., 1).
Hypermatrix apply_transform(const Tuple& tuple, const Hypermatrix& x, double tol = 1e-8);
/// sum_k v_k^m
cplx power_sum(const Hypermatrix& v, std::size_t m);

struct ParsevalReport {
    bool hypothesis_ok = false;
    std::optional<std::size_t> failing_slot;
    std::vector<double> slot_residuals;
    bool ok = false;
    /// |Prod(y-forms) - Prod(x-forms)|
    double residual = 0;
    cplx x_side, y_side;
};

/// Checks prod_j y^(j)_k = Prod_{P_k}(x^(0), ..., x^(m-1)) for every slot, then
/// compares sum_t prod_j y^(j)_t with sum_t prod_j x^(j)_t.
ParsevalReport parseval_check(const Tuple& tuple, const Tuple& xs, const Tuple& ys, double tol = 1e-8);

// -------------------------------------------------------------------- cones

/// Membership of a slot form value in the closed cone of non-negative reals,
/// judged with slack 1e-9 * (1 + |value|).
struct ConeMembership {
    std::size_t k = 0;
    cplx value;
    bool member = false;
};

ConeMembership cone_membership(std::size_t k, cplx value);

class ConeViolationError : public DomainError {
public:
    ConeViolationError(std::size_t slot, cplx value);
    std::size_t slot() const noexcept { return slot_; }
    cplx value() const noexcept { return value_; }

private:
    std::size_t slot_;
    cplx value_;
};

struct RayleighResult {
    double lower = 0;
    double upper = 0;
    cplx quotient;
    std::vector<ConeMembership> cones;
    /// lower - slack <= Re(quotient) <= upper + slack and Im(quotient) within slack
    bool holds(double slack) const;
};

/// Spectral data from an eigenbasis: V = (U^{-1})^T, mu = lambda, nu = 1.
MatrixSpectral spectral_from_eigenbasis(const Hypermatrix& u, const std::vector<cplx>& lambda);

/// Bounds for x^T A y / x^T y with A = U diag(lambda) V^T and non-negative lambda.
/// Throws ConeViolationError naming the first slot outside the cone.
RayleighResult rayleigh_bounds_matrix(const MatrixSpectral& d, const Hypermatrix& x, const Hypermatrix& y);

/// Products mu_it mu_tk nu_jt nu_ti omega_kt omega_tj over all i, j, k, t.
std::vector<double> rayleigh_products_3(const SpectralDecomposition& d);

/// Third-order analogue: Prod_A(x, y, z) / sum_t x_t y_t z_t against the
/// extremes of rayleigh_products_3.
RayleighResult rayleigh_bounds_3(const SpectralDecomposition& d, const Hypermatrix& x, const Hypermatrix& y,
                                 const Hypermatrix& z);

/// M_k(z)_{ij} = sum_l P_k[i, j, l] z_l.
Hypermatrix slot_matrix(const Hypermatrix& pk, const Hypermatrix& z);

struct SlotConeReport {
    cplx trace, det, discriminant;
    bool symmetric = false;
    bool ok = false;  ///< diagonalizable with non-negative eigenvalues by the trace/det tests
};

struct ConeConditionsReport {
    std::vector<SlotConeReport> slots;
    /// The four closed-form trace/det inequalities in the entries of q = U for
    /// symmetric decompositions (empty otherwise).
    std::vector<double> closed_form;
    bool ok = false;
};

ConeConditionsReport cone_conditions_side2(const SpectralDecomposition& d, const Hypermatrix& z);

// ------------------------------------------------------------------ samplers

/// x = sum_i alpha_i V[:, i], y = sum_j beta_j U[:, j] with alpha_k beta_k >= 0.
std::pair<Hypermatrix, Hypermatrix> sample_cone_matrix(const MatrixSpectral& d, std::mt19937_64& rng);

struct ConeSample3 {
    Hypermatrix x, y, z;
    std::size_t z_tries = 0;
};

/// For symmetric real side-2 decompositions: z drawn until both M_k(z) pass
/// the trace and determinant tests, then x = y drawn freely. Throws
/// NumericError after max_tries rejected z.
ConeSample3 sample_cone_side2(const SpectralDecomposition& d, std::mt19937_64& rng, std::size_t max_tries = 100000);

/// (Q, Q, Q, lambda, lambda, lambda).
SpectralDecomposition symmetric_decomposition(const Hypermatrix& q, const Hypermatrix& lambda);

}  // namespace hypermat
