#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hypermat/error.hpp"
#include "hypermat/hypermatrix.hpp"
#include "hypermat/json_io.hpp"
#include "hypermat/rational.hpp"

namespace hypermat {

/// Constraints prod_t x_t^{exponents[i][t]} = rhs[i], one per row.
struct MonomialSystem {
    std::vector<std::vector<Rational>> exponents;
    std::vector<cplx> rhs;
    std::size_t var_count = 0;

    std::size_t rows() const { return rhs.size(); }
    /// Throws ShapeError on ragged rows and DomainError on a zero right-hand side.
    void validate() const;
    void add_row(std::vector<Rational> row, cplx b);
};

struct MonomialSolution {
    std::vector<cplx> values;
    std::vector<std::size_t> free_vars;
    double residual = 0.0;
    /// Set by log_least_square when the normal system is singular.
    bool rank_deficient = false;
    /// Number of winding vectors evaluated by gauss_jordan_solve (1 when the principal branch works).
    std::size_t branch_attempts = 0;
};

/// A constraint of the form 1 = b obtained by elimination.
struct DerivedConstraint {
    /// Multiplier of each original row, so the constraint is prod_i R_i^{combination[i]}.
    std::vector<Rational> combination;
    cplx rhs;
};

class InfeasibleSystemError : public InfeasibleError {
public:
    InfeasibleSystemError(const std::string& what, DerivedConstraint c)
        : InfeasibleError(what), constraint_(std::move(c)) {}
    const DerivedConstraint& constraint() const noexcept { return constraint_; }

private:
    DerivedConstraint constraint_;
};

struct MonomialOptions {
    /// Acceptance threshold on the substitution residual.
    double tol = 1e-12;
    /// Systems with at most this many rows get an exhaustive {-1,0,1} winding search;
    /// larger ones use a greedy coordinate search.
    std::size_t exhaustive_rows = 6;
    std::size_t greedy_passes = 4;
    /// Value assigned to a free variable (by variable index); 1 when unset.
    std::function<cplx(std::size_t)> free_value;
};

/// Sum over rows of |Log(b_i^{-1} prod_j x_j^{a_ij})|^2, x^a taken as exp(a Log x).
double residual(const MonomialSystem& sys, const std::vector<cplx>& values);

/// Multiplicative Gauss-Jordan elimination. Free variables are set to 1 unless
/// opt.free_value says otherwise.
MonomialSolution gauss_jordan_solve(const MonomialSystem& sys, const MonomialOptions& opt = {});

/// Minimizer of the residual over principal logarithms.
MonomialSolution log_least_square(const MonomialSystem& sys);

// Multiplicative row operations; they leave the solution set unchanged.
MonomialSystem row_exchange(MonomialSystem sys, std::size_t i, std::size_t j);
MonomialSystem row_scale(MonomialSystem sys, std::size_t i, const Rational& k);
/// R_i^k * R_j -> R_j
MonomialSystem row_combine(MonomialSystem sys, std::size_t i, std::size_t j, const Rational& k);

/// {"exponents":[["p/q",...],...],"rhs_re":[...],"rhs_im":[...]}; exponents may be
/// strings or integers, rhs_im is optional.
MonomialSystem monomial_system_from_json(const json& j);
json to_json(const MonomialSystem& sys);
json to_json(const MonomialSolution& sol);

}  // namespace hypermat
