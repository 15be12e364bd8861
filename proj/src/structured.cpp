#include "hypermat/structured.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <set>

namespace hypermat {

namespace {

CheckResult compare_with_delta(const Hypermatrix& prod, double tol) {
    const Hypermatrix delta = kron_delta(prod.order(), prod.shape()[0]);
    const double r = prod.max_abs_diff(delta);
    return {r <= tol, r};
}

void require_cubic(const Hypermatrix& a, const char* what) {
    if (!a.is_cubic()) throw ShapeError(std::string(what) + ": hypermatrix must be cubic");
}

std::size_t positive_mod(long long v, std::size_t n) {
    long long r = v % static_cast<long long>(n);
    return static_cast<std::size_t>(r < 0 ? r + static_cast<long long>(n) : r);
}

// Cyclic Hadamard product in integers. Operand s of Prod(H, H^{T^(m-1)}, ..., H^T)
// contributes h[i_s, j, i_{s+2}, ..., i_{s+m-1}] (indices mod m).
bool hadamard_criterion(const std::vector<int>& h, std::size_t n, std::size_t m) {
    std::vector<std::size_t> stride(m, 1);
    for (std::size_t a = m; a-- > 1;) stride[a - 1] = stride[a] * n;
    Index idx(m, 0);
    const Shape shape(m, n);
    do {
        long long sum = 0;
        for (std::size_t j = 0; j < n; ++j) {
            long long p = 1;
            for (std::size_t s = 0; s < m; ++s) {
                std::size_t off = idx[s] * stride[0] + j * (m > 1 ? stride[1] : 0);
                for (std::size_t q = 2; q < m; ++q) off += idx[(q + s) % m] * stride[q];
                p *= h[off];
            }
            sum += p;
        }
        const bool diag = std::all_of(idx.begin(), idx.end(), [&](auto v) { return v == idx[0]; });
        if (sum != (diag ? static_cast<long long>(n) : 0)) return false;
    } while (next_index(idx, shape));
    return true;
}

bool is_constant(const std::string& w) {
    return std::all_of(w.begin(), w.end(), [&](char c) { return c == w[0]; });
}

std::size_t euler_phi(std::size_t k) {
    std::size_t result = k;
    for (std::size_t p = 2; p * p <= k; ++p) {
        if (k % p == 0) {
            while (k % p == 0) k /= p;
            result -= result / p;
        }
    }
    if (k > 1) result -= result / k;
    return result;
}

}  // namespace

CheckResult is_uncorrelated(const Tuple& tuple, double tol) {
    for (const auto& a : tuple) require_cubic(a, "is_uncorrelated");
    for (const auto& a : tuple) {
        if (a.shape() != tuple.front().shape()) throw ShapeError("is_uncorrelated: operands differ in shape");
    }
    return compare_with_delta(bm_product(tuple), tol);
}

CheckResult is_orthogonal(const Hypermatrix& q, double tol) {
    require_cubic(q, "is_orthogonal");
    return compare_with_delta(bm_product(cyclic_tuple(q)), tol);
}

Tuple unitary_tuple(const Hypermatrix& u) {
    const std::size_t big_m = u.order();
    if (big_m % 2 != 0) throw DomainError("is_unitary: order must be even, got " + std::to_string(big_m));
    Tuple ops;
    for (std::size_t t = 0; t < big_m; ++t) {
        const std::size_t e = (big_m - t) % big_m;
        Hypermatrix op = u.transpose(static_cast<long long>(e));
        ops.push_back(e % 2 == 1 ? op.conjugate() : op);
    }
    return ops;
}

CheckResult is_unitary(const Hypermatrix& u, double tol) {
    require_cubic(u, "is_unitary");
    return compare_with_delta(bm_product(unitary_tuple(u)), tol);
}

// ---------------------------------------------------------------- DFT

Hypermatrix dft_matrix(std::size_t n) {
    if (n == 0) throw DomainError("dft_matrix: n must be positive");
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    return Hypermatrix::generate({n, n}, [&](const Index& idx) {
        const std::size_t e = (idx[0] * idx[1]) % n;
        return std::polar(scale, 2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(n));
    });
}

AdmissibilityResult check_dft_admissible(std::size_t n) {
    if (n < 2) throw DomainError("check_dft_admissible: n must be at least 2");
    AdmissibilityResult r;
    r.n = n;
    if (n % 2 == 0) {
        r.witness = DftWitness{static_cast<long long>(n / 2), 0};
        return r;
    }
    for (std::size_t y = 0; y < n; ++y) {
        for (std::size_t x = 0; x < n; ++x) {
            if (x == 0 && y == 0) continue;
            if ((x * x + 3 * y * y) % n == 0) {
                r.witness = DftWitness{static_cast<long long>(x), static_cast<long long>(y)};
                return r;
            }
        }
    }
    r.admissible = true;
    return r;
}

bool witness_verifies(const AdmissibilityResult& r) {
    if (!r.witness) return r.admissible;
    const long long n = static_cast<long long>(r.n);
    const long long x = r.witness->x, y = r.witness->y;
    if (positive_mod(x, r.n) == 0 && positive_mod(y, r.n) == 0) return false;
    if (r.n % 2 == 0) return positive_mod(2 * (x * x + x * y + y * y), r.n) == 0;
    return (x * x + 3 * y * y) % n == 0;
}

InadmissibleError::InadmissibleError(std::size_t n, DftWitness w)
    : DomainError("n = " + std::to_string(n) + " is not admissible: witness (" + std::to_string(w.x) +
                  ", " + std::to_string(w.y) + ")"),
      witness_(w) {}

Tuple dft_triple(std::size_t n) {
    const auto adm = check_dft_admissible(n);
    if (!adm.admissible) throw InadmissibleError(n, *adm.witness);
    const double scale = 1.0 / std::cbrt(static_cast<double>(n));
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
    auto phase = [&](std::size_t t, long long d) {
        const std::size_t e = (t * positive_mod(d * d, n)) % n;
        return std::polar(scale, step * static_cast<double>(e));
    };
    auto sd = [](std::size_t a, std::size_t b) { return static_cast<long long>(a) - static_cast<long long>(b); };
    const Shape s{n, n, n};
    Hypermatrix f = Hypermatrix::generate(s, [&](const Index& i) { return phase(i[1], sd(i[0], i[2])); });
    Hypermatrix g = Hypermatrix::generate(s, [&](const Index& i) { return phase(i[2], sd(i[0], i[1])); });
    Hypermatrix h = Hypermatrix::generate(s, [&](const Index& i) { return phase(i[0], sd(i[1], i[2])); });
    return {f, g, h};
}

// ------------------------------------------------------------ Hadamard

bool is_hadamard(const Hypermatrix& h) {
    require_cubic(h, "is_hadamard");
    if (h.order() < 2) throw DomainError("is_hadamard: order must be at least 2");
    std::vector<int> signs;
    signs.reserve(h.size());
    for (const auto& z : h.data()) {
        if (z == cplx(1.0)) {
            signs.push_back(1);
        } else if (z == cplx(-1.0)) {
            signs.push_back(-1);
        } else {
            throw DomainError("is_hadamard: entries must be exactly +1 or -1");
        }
    }
    return hadamard_criterion(signs, h.side(), h.order());
}

std::string necklace_of(const std::string& word) {
    std::string best = word;
    std::string rot = word;
    for (std::size_t i = 1; i < word.size(); ++i) {
        std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        best = std::min(best, rot);
    }
    return best;
}

std::size_t minimal_period(const std::string& word) {
    const std::size_t m = word.size();
    for (std::size_t p = 1; p <= m; ++p) {
        if (m % p != 0) continue;
        bool ok = true;
        for (std::size_t i = 0; i < m && ok; ++i) ok = word[i] == word[(i + p) % m];
        if (ok) return p;
    }
    return m;
}

std::vector<std::string> enumerate_necklaces(std::size_t m) {
    if (m == 0 || m > 24) throw DomainError("enumerate_necklaces: m must be in [1, 24]");
    std::set<std::string> out;
    for (std::size_t bits = 0; bits < (std::size_t{1} << m); ++bits) {
        std::string w(m, '0');
        for (std::size_t i = 0; i < m; ++i) {
            if (bits >> (m - 1 - i) & 1U) w[i] = '1';
        }
        if (necklace_of(w) == w) out.insert(w);
    }
    return {out.begin(), out.end()};
}

std::vector<std::string> nonconstant_necklaces(std::size_t m) {
    auto all = enumerate_necklaces(m);
    std::vector<std::string> out;
    for (auto& w : all) {
        if (!is_constant(w)) out.push_back(w);
    }
    return out;
}

std::size_t necklace_count_formula(std::size_t m) {
    if (m == 0) throw DomainError("necklace_count_formula: m must be positive");
    std::size_t total = 0;
    for (std::size_t k = 1; k <= m; ++k) {
        if (m % k == 0) total += euler_phi(k) * (std::size_t{1} << (m / k));
    }
    return total / m;
}

std::vector<std::string> cyclic_windows(const std::string& word) {
    const std::size_t m = word.size();
    const std::string doubled = word + word;
    std::set<std::string> out;
    for (std::size_t p = 0; p < m; ++p) out.insert(doubled.substr(p, m - 1));
    return {out.begin(), out.end()};
}

NecklaceConstraintGraph build_necklace_graph(std::size_t m) {
    if (m < 3) throw DomainError("build_necklace_graph: m must be at least 3");
    NecklaceConstraintGraph g;
    g.m = m;
    g.vertices = nonconstant_necklaces(m);
    std::map<std::string, std::size_t> vid;
    for (std::size_t i = 0; i < g.vertices.size(); ++i) vid[g.vertices[i]] = i;

    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::string>> labels;
    for (std::size_t bits = 0; bits < (std::size_t{1} << (m - 1)); ++bits) {
        std::string w(m - 1, '0');
        for (std::size_t i = 0; i < m - 1; ++i) {
            if (bits >> (m - 2 - i) & 1U) w[i] = '1';
        }
        if (is_constant(w)) continue;
        std::size_t a = vid.at(necklace_of(w + "0"));
        std::size_t b = vid.at(necklace_of(w + "1"));
        labels[{std::min(a, b), std::max(a, b)}].push_back(w);
    }
    for (auto& [key, ws] : labels) {
        std::sort(ws.begin(), ws.end());
        g.edges.push_back({key.first, key.second, ws});
    }

    std::vector<std::vector<std::size_t>> adj(g.vertices.size());
    for (const auto& e : g.edges) {
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    std::vector<bool> seen(g.vertices.size(), false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!queue.empty()) {
        auto v = queue.front();
        queue.pop_front();
        for (auto u : adj[v]) {
            if (!seen[u]) {
                seen[u] = true;
                ++reached;
                queue.push_back(u);
            }
        }
    }
    g.connected = reached == g.vertices.size();
    return g;
}

void assign_windows_by_pairing(NecklaceConstraintGraph& g) {
    const std::size_t nv = g.vertices.size();
    if (nv % 2 != 0) throw DegeneracyError("odd number of non-constant necklaces");
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(nv);  // (neighbour, edge id)
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        adj[g.edges[e].a].push_back({g.edges[e].b, e});
        adj[g.edges[e].b].push_back({g.edges[e].a, e});
    }
    for (auto& list : adj) std::sort(list.begin(), list.end());

    std::set<std::size_t> chosen;
    for (std::size_t p = 0; p + 1 < nv; p += 2) {
        const std::size_t src = p, dst = p + 1;
        std::vector<long long> via(nv, -1);
        std::vector<bool> seen(nv, false);
        std::deque<std::size_t> queue{src};
        seen[src] = true;
        while (!queue.empty() && !seen[dst]) {
            auto v = queue.front();
            queue.pop_front();
            for (auto [u, e] : adj[v]) {
                if (seen[u]) continue;
                seen[u] = true;
                via[u] = static_cast<long long>(e);
                queue.push_back(u);
            }
        }
        if (!seen[dst]) throw DegeneracyError("necklace graph is disconnected");
        for (std::size_t v = dst; v != src;) {
            const auto e = static_cast<std::size_t>(via[v]);
            if (!chosen.erase(e)) chosen.insert(e);
            v = g.edges[e].a == v ? g.edges[e].b : g.edges[e].a;
        }
    }
    g.chosen_edges.assign(chosen.begin(), chosen.end());
    g.window_assignment.clear();
    for (const auto& e : g.edges) {
        for (const auto& w : e.windows) g.window_assignment[w] = 1;
    }
    for (auto e : g.chosen_edges) g.window_assignment[g.edges[e].windows.front()] = -1;
    g.used_fallback = false;
}

void assign_windows_by_elimination(NecklaceConstraintGraph& g) {
    std::vector<std::string> vars;
    for (const auto& e : g.edges) vars.insert(vars.end(), e.windows.begin(), e.windows.end());
    std::sort(vars.begin(), vars.end());
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < vars.size(); ++i) col[vars[i]] = i;

    const std::size_t nc = vars.size();
    std::vector<std::vector<std::uint8_t>> rows;
    for (const auto& v : g.vertices) {
        std::vector<std::uint8_t> row(nc + 1, 0);
        for (const auto& w : cyclic_windows(v)) {
            if (!is_constant(w)) row[col.at(w)] ^= 1;
        }
        row[nc] = 1;
        rows.push_back(std::move(row));
    }
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < nc && r < rows.size(); ++c) {
        std::size_t piv = r;
        while (piv < rows.size() && !rows[piv][c]) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[r], rows[piv]);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i != r && rows[i][c]) {
                for (std::size_t k = c; k <= nc; ++k) rows[i][k] ^= rows[r][k];
            }
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < rows.size(); ++i) {
        if (rows[i][nc]) throw DegeneracyError("necklace constraints have no +-1 solution");
    }
    g.window_assignment.clear();
    for (const auto& w : vars) g.window_assignment[w] = 1;
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i][nc]) g.window_assignment[vars[pivot_col[i]]] = -1;
    }
    g.chosen_edges.clear();
    g.used_fallback = true;
}

bool window_assignment_satisfies(std::size_t m, const std::map<std::string, int>& assignment) {
    for (const auto& v : nonconstant_necklaces(m)) {
        int prod = 1;
        for (const auto& w : cyclic_windows(v)) {
            if (is_constant(w)) continue;
            auto it = assignment.find(w);
            prod *= it == assignment.end() ? 1 : it->second;
        }
        if (prod != -1) return false;
    }
    return true;
}

Hypermatrix lift_window_assignment(std::size_t m, const std::map<std::string, int>& assignment) {
    // Operand s of the cyclic product reads h[i_s, j, i_{s+2}, ..., i_{s+m-1}];
    // moving i_s to the end turns that key into the contiguous window
    // starting at position s+2, which is how windows are named.
    return Hypermatrix::generate(Shape(m, 2), [&](const Index& idx) {
        if (idx[1] == 1) return cplx(1.0);
        std::string w;
        for (std::size_t q = 2; q < m; ++q) w.push_back(static_cast<char>('0' + idx[q]));
        w.push_back(static_cast<char>('0' + idx[0]));
        if (is_constant(w)) return cplx(1.0);
        auto it = assignment.find(w);
        return cplx(it == assignment.end() ? 1.0 : static_cast<double>(it->second));
    });
}

Hypermatrix hadamard_side2(std::size_t m) {
    if (m % 2 == 0) {
        throw DomainError("no side-2 Hadamard hypermatrix exists for even order " + std::to_string(m));
    }
    if (m < 3) throw DomainError("hadamard_side2: order must be at least 3");
    auto g = build_necklace_graph(m);
    if (g.connected) {
        assign_windows_by_pairing(g);
    } else {
        assign_windows_by_elimination(g);
    }
    if (!window_assignment_satisfies(m, g.window_assignment)) {
        throw DegeneracyError("window assignment violates a necklace constraint");
    }
    Hypermatrix h = lift_window_assignment(m, g.window_assignment);
    if (!is_hadamard(h)) throw DegeneracyError("lifted hypermatrix fails the Hadamard criterion");
    return h;
}

Hypermatrix hadamard_kron_power(const Hypermatrix& seed, std::size_t k) {
    if (k == 0) throw DomainError("hadamard_kron_power: k must be at least 1");
    if (!is_hadamard(seed)) throw DomainError("hadamard_kron_power: seed is not Hadamard");
    Hypermatrix out = seed;
    for (std::size_t i = 1; i < k; ++i) out = kronecker(out, seed);
    return out;
}

std::optional<Hypermatrix> exhaustive_hadamard_search(std::size_t m, std::size_t side) {
    if (m < 1 || side < 1) throw DomainError("exhaustive_hadamard_search: bad order or side");
    const double cells = std::pow(static_cast<double>(side), static_cast<double>(m));
    if (cells > 16.0) {
        throw DomainError("exhaustive_hadamard_search: side^m must be at most 16 (2^16 patterns)");
    }
    const std::size_t count = static_cast<std::size_t>(cells);
    std::vector<int> h(count);
    for (std::size_t pattern = 0; pattern < (std::size_t{1} << count); ++pattern) {
        for (std::size_t e = 0; e < count; ++e) h[e] = (pattern >> (count - 1 - e) & 1U) ? -1 : 1;
        if (hadamard_criterion(h, side, m)) {
            std::vector<cplx> data(h.begin(), h.end());
            return Hypermatrix(Shape(m, side), std::move(data));
        }
    }
    return std::nullopt;
}

}  // namespace hypermat
