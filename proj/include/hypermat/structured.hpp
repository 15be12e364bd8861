#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hypermat/bm_ops.hpp"
#include "hypermat/error.hpp"
#include "hypermat/hypermatrix.hpp"

namespace hypermat {

struct CheckResult {
    bool ok = false;
    double residual = 0.0;
};

/// max |Prod(tuple) - Delta| <= tol.
CheckResult is_uncorrelated(const Tuple& tuple, double tol = kDefaultTol);
/// Prod(Q, Q^{T^(m-1)}, ..., Q^T) compared with Delta.
CheckResult is_orthogonal(const Hypermatrix& q, double tol = kDefaultTol);
/// Even order 2m: operand t is U^{T^e}, e = (2m - t) mod 2m, conjugated when e is odd.
CheckResult is_unitary(const Hypermatrix& u, double tol = kDefaultTol);
Tuple unitary_tuple(const Hypermatrix& u);

// ---------------------------------------------------------------- DFT

Hypermatrix dft_matrix(std::size_t n);

struct DftWitness {
    long long x = 0;
    long long y = 0;
};

/// Outcome of the admissibility scan for the third-order DFT construction.
/// For odd n a witness solves x^2 + 3y^2 = 0 mod n; for even n the witness is
/// (n/2, 0), which solves the unreduced form 2(x^2 + xy + y^2) = 0 mod n.
struct AdmissibilityResult {
    std::size_t n = 0;
    bool admissible = false;
    std::optional<DftWitness> witness;
};

AdmissibilityResult check_dft_admissible(std::size_t n);
/// True when the witness satisfies the congruence it is documented to solve.
bool witness_verifies(const AdmissibilityResult& r);

class InadmissibleError : public DomainError {
public:
    InadmissibleError(std::size_t n, DftWitness w);
    const DftWitness& witness() const noexcept { return witness_; }

private:
    DftWitness witness_;
};

/// (F, G, H) with F[u,t,w] = e^{2 pi i t (u-w)^2 / n} / cbrt(n) and the
/// analogous G[u,v,t], H[t,v,w]. Throws InadmissibleError for bad n.
Tuple dft_triple(std::size_t n);

// ------------------------------------------------------------ Hadamard

/// Entries must be exactly +1 or -1 (DomainError otherwise). The cyclic
/// product is evaluated in integer arithmetic.
bool is_hadamard(const Hypermatrix& h);

/// Canonical representative (least rotation) of a binary word.
std::string necklace_of(const std::string& word);
/// Smallest p dividing |w| with w invariant under rotation by p.
std::size_t minimal_period(const std::string& word);
/// All binary necklaces of length m, sorted.
std::vector<std::string> enumerate_necklaces(std::size_t m);
std::vector<std::string> nonconstant_necklaces(std::size_t m);
/// (1/m) sum_{k | m} phi(k) 2^{m/k}.
std::size_t necklace_count_formula(std::size_t m);
/// Distinct cyclic windows of length m-1 of a word of length m.
std::vector<std::string> cyclic_windows(const std::string& word);

struct NecklaceEdge {
    std::size_t a = 0;
    std::size_t b = 0;
    std::vector<std::string> windows;
};

/// Constraint graph of the side-2 Hadamard construction: one vertex per
/// non-constant necklace, one edge per pair of necklaces sharing windows.
struct NecklaceConstraintGraph {
    std::size_t m = 0;
    std::vector<std::string> vertices;
    std::vector<NecklaceEdge> edges;
    std::map<std::string, int> window_assignment;
    std::vector<std::size_t> chosen_edges;
    bool connected = false;
    bool used_fallback = false;
};

NecklaceConstraintGraph build_necklace_graph(std::size_t m);
/// Fill window_assignment from an odd-degree spanning subgraph (pairing paths, XOR).
void assign_windows_by_pairing(NecklaceConstraintGraph& g);
/// Fill window_assignment by GF(2) elimination on the necklace constraints.
void assign_windows_by_elimination(NecklaceConstraintGraph& g);
/// Every non-constant necklace has window product -1.
bool window_assignment_satisfies(std::size_t m, const std::map<std::string, int>& assignment);
/// Entries from window values with the slice h[:,1,:,...] fixed to +1.
Hypermatrix lift_window_assignment(std::size_t m, const std::map<std::string, int>& assignment);

/// Order-m side-2 Hadamard hypermatrix, m odd and at least 3.
Hypermatrix hadamard_side2(std::size_t m);
Hypermatrix hadamard_kron_power(const Hypermatrix& seed, std::size_t k);
/// Scan all sign patterns of a side-2 order-m hypermatrix (m <= 4) and return
/// the first Hadamard one, ordering patterns lexicographically with +1 < -1.
std::optional<Hypermatrix> exhaustive_hadamard_search(std::size_t m, std::size_t side = 2);

}  // namespace hypermat
