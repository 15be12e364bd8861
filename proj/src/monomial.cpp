#include "hypermat/monomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

namespace hypermat {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduce the imaginary part into (-pi, pi]; this is Log(exp(z)) without overflow.
cplx wrap_log(cplx z) {
    double im = std::remainder(z.imag(), kTwoPi);
    if (im <= -std::numbers::pi) im += kTwoPi;
    return {z.real(), im};
}

using RMatrix = std::vector<std::vector<Rational>>;

struct Elimination {
    RMatrix reduced;               // reduced row echelon form of the exponents
    RMatrix transform;             // reduced = transform * original
    std::vector<std::size_t> pivot_cols;  // pivot column of row r for r < rank
    std::size_t rank = 0;
};

/// Gauss-Jordan on exact rationals with the transform tracked alongside.
/// Pivot: first column with a nonzero entry among the remaining rows, the row
/// with the largest |entry| in that column (earliest row on ties).
Elimination eliminate(const RMatrix& rows, std::size_t cols) {
    Elimination e;
    const std::size_t R = rows.size();
    e.reduced = rows;
    e.transform.assign(R, std::vector<Rational>(R, Rational(0)));
    for (std::size_t i = 0; i < R; ++i) e.transform[i][i] = 1;

    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < R; ++c) {
        std::size_t best = R;
        for (std::size_t i = r; i < R; ++i) {
            if (e.reduced[i][c] == 0) continue;
            if (best == R || abs(e.reduced[i][c]) > abs(e.reduced[best][c])) best = i;
        }
        if (best == R) continue;
        std::swap(e.reduced[r], e.reduced[best]);
        std::swap(e.transform[r], e.transform[best]);
        const Rational inv = 1 / e.reduced[r][c];
        for (auto& v : e.reduced[r]) v *= inv;
        for (auto& v : e.transform[r]) v *= inv;
        for (std::size_t i = 0; i < R; ++i) {
            if (i == r || e.reduced[i][c] == 0) continue;
            const Rational f = e.reduced[i][c];
            for (std::size_t k = 0; k < cols; ++k) e.reduced[i][k] -= f * e.reduced[r][k];
            for (std::size_t k = 0; k < R; ++k) e.transform[i][k] -= f * e.transform[r][k];
        }
        e.pivot_cols.push_back(c);
        ++r;
    }
    e.rank = r;
    return e;
}

std::vector<cplx> principal_logs(const MonomialSystem& sys) {
    std::vector<cplx> l(sys.rows());
    for (std::size_t i = 0; i < sys.rows(); ++i) l[i] = std::log(sys.rhs[i]);
    return l;
}

cplx rational_power(cplx b, const Rational& k) { return std::exp(to_double(k) * std::log(b)); }

}  // namespace

void MonomialSystem::validate() const {
    if (exponents.size() != rhs.size())
        throw ShapeError("monomial system: " + std::to_string(exponents.size()) + " exponent rows but " +
                         std::to_string(rhs.size()) + " right-hand sides");
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        if (exponents[i].size() != var_count)
            throw ShapeError("monomial system: row " + std::to_string(i) + " has " +
                             std::to_string(exponents[i].size()) + " exponents, expected " +
                             std::to_string(var_count));
        if (rhs[i] == cplx(0)) throw DomainError("monomial system: right-hand side " + std::to_string(i) + " is zero");
    }
}

void MonomialSystem::add_row(std::vector<Rational> row, cplx b) {
    exponents.push_back(std::move(row));
    rhs.push_back(b);
}

double residual(const MonomialSystem& sys, const std::vector<cplx>& values) {
    sys.validate();
    if (values.size() != sys.var_count)
        throw ShapeError("residual: expected " + std::to_string(sys.var_count) + " values, got " +
                         std::to_string(values.size()));
    std::vector<cplx> logs(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (values[j] == cplx(0)) throw DomainError("residual: value " + std::to_string(j) + " is zero");
        logs[j] = std::log(values[j]);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < sys.rows(); ++i) {
        cplx s = -std::log(sys.rhs[i]);
        for (std::size_t j = 0; j < sys.var_count; ++j)
            if (sys.exponents[i][j] != 0) s += to_double(sys.exponents[i][j]) * logs[j];
        total += std::norm(wrap_log(s));
    }
    return total;
}

MonomialSolution gauss_jordan_solve(const MonomialSystem& sys, const MonomialOptions& opt) {
    sys.validate();
    const std::size_t R = sys.rows();
    const std::size_t n = sys.var_count;
    const Elimination e = eliminate(sys.exponents, n);

    std::vector<std::vector<double>> td(R, std::vector<double>(R));
    for (std::size_t i = 0; i < R; ++i)
        for (std::size_t k = 0; k < R; ++k) td[i][k] = to_double(e.transform[i][k]);
    const auto base = principal_logs(sys);

    std::vector<bool> is_pivot(n, false);
    for (auto c : e.pivot_cols) is_pivot[c] = true;

    auto derived_logs = [&](const std::vector<int>& wind) {
        std::vector<cplx> out(R);
        for (std::size_t i = 0; i < R; ++i) {
            cplx s = 0;
            for (std::size_t k = 0; k < R; ++k)
                if (td[i][k] != 0.0) s += td[i][k] * (base[k] + cplx(0, kTwoPi * wind[k]));
            out[i] = s;
        }
        return out;
    };
    MonomialSolution best;
    for (std::size_t j = 0; j < n; ++j)
        if (!is_pivot[j]) best.free_vars.push_back(j);
    std::vector<cplx> free_vals(n, cplx(1));
    if (opt.free_value) {
        for (auto f : best.free_vars) {
            free_vals[f] = opt.free_value(f);
            if (free_vals[f] == cplx(0)) throw DomainError("gauss_jordan_solve: free variable value must be nonzero");
        }
    }

    auto values_for = [&](const std::vector<int>& wind) {
        auto l = derived_logs(wind);
        std::vector<cplx> x = free_vals;
        for (std::size_t r = 0; r < e.rank; ++r) {
            cplx s = l[r];
            if (opt.free_value)
                for (auto f : best.free_vars)
                    if (e.reduced[r][f] != 0) s -= to_double(e.reduced[r][f]) * std::log(free_vals[f]);
            x[e.pivot_cols[r]] = std::exp(s);
        }
        return x;
    };

    std::vector<int> best_wind(R, 0);
    best.values = values_for(best_wind);
    best.residual = residual(sys, best.values);
    best.branch_attempts = 1;

    auto consider = [&](const std::vector<int>& wind) {
        auto x = values_for(wind);
        double res = residual(sys, x);
        ++best.branch_attempts;
        if (res < best.residual) {
            best.residual = res;
            best.values = std::move(x);
            best_wind = wind;
        }
        return best.residual <= opt.tol;
    };

    if (best.residual > opt.tol && R > 0) {
        if (R <= opt.exhaustive_rows) {
            // Enumerate {-1,0,1}^R by increasing number of nonzero windings.
            std::size_t total = 1;
            for (std::size_t i = 0; i < R; ++i) total *= 3;
            std::vector<std::vector<int>> all;
            all.reserve(total);
            for (std::size_t code = 0; code < total; ++code) {
                std::vector<int> w(R);
                std::size_t c = code;
                for (std::size_t i = 0; i < R; ++i, c /= 3) w[i] = static_cast<int>(c % 3) - 1;
                if (w != best_wind) all.push_back(std::move(w));
            }
            std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
                auto nz = [](const auto& v) { return std::count_if(v.begin(), v.end(), [](int x) { return x != 0; }); };
                return nz(a) < nz(b);
            });
            for (const auto& w : all)
                if (consider(w)) break;
        } else {
            for (std::size_t pass = 0; pass < opt.greedy_passes && best.residual > opt.tol; ++pass) {
                bool improved = false;
                for (std::size_t i = 0; i < R && best.residual > opt.tol; ++i) {
                    for (int d : {-1, 1}) {
                        auto w = best_wind;
                        w[i] = d;
                        if (w == best_wind) continue;
                        double before = best.residual;
                        consider(w);
                        if (best.residual < before) {
                            improved = true;
                            break;
                        }
                    }
                }
                if (!improved) break;
            }
        }
    }

    if (best.residual <= opt.tol) return best;

    // Report the first zero row whose derived right-hand side is not 1.
    auto l = derived_logs(best_wind);
    for (std::size_t r = e.rank; r < R; ++r) {
        cplx lhs = wrap_log(l[r]);
        if (std::abs(lhs) > 1e-9) {
            const cplx b = std::exp(l[r]);
            std::string rows;
            for (std::size_t k = 0; k < R; ++k) {
                if (e.transform[r][k] == 0) continue;
                if (!rows.empty()) rows += " * ";
                rows += "R" + std::to_string(k) + "^(" + to_string(e.transform[r][k]) + ")";
            }
            throw InfeasibleSystemError("monomial system is inconsistent: " + rows + " gives 1 = " +
                                            format_double(b.real()) + (b.imag() < 0 ? "" : "+") +
                                            format_double(b.imag()) + "i",
                                        DerivedConstraint{e.transform[r], b});
        }
    }
    throw NumericError("monomial system: branch search exhausted after " + std::to_string(best.branch_attempts) +
                       " attempts, best residual " + std::to_string(best.residual));
}

MonomialSolution log_least_square(const MonomialSystem& sys) {
    sys.validate();
    const std::size_t R = sys.rows();
    const std::size_t n = sys.var_count;
    const auto l = principal_logs(sys);

    // Normal system (A^H A) L = A^H l; exponents are real so A^H = A^T.
    RMatrix normal(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t i = 0; i < R; ++i) normal[a][b] += sys.exponents[i][a] * sys.exponents[i][b];

    MonomialSolution sol;
    std::vector<cplx> logs(n, cplx(0));
    const Elimination e = eliminate(normal, n);
    if (e.rank == n) {
        // reduced = I, so transform = normal^{-1}; combine with A^T exactly.
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t i = 0; i < R; ++i) {
                Rational coef = 0;
                for (std::size_t b = 0; b < n; ++b) coef += e.transform[a][b] * sys.exponents[i][b];
                if (coef != 0) logs[a] += to_double(coef) * l[i];
            }
        }
    } else {
        sol.rank_deficient = true;
        Eigen::MatrixXcd a(R, n);
        Eigen::VectorXcd rhs(R);
        for (std::size_t i = 0; i < R; ++i) {
            rhs(i) = l[i];
            for (std::size_t j = 0; j < n; ++j) a(i, j) = to_double(sys.exponents[i][j]);
        }
        Eigen::VectorXcd x = a.completeOrthogonalDecomposition().solve(rhs);
        for (std::size_t j = 0; j < n; ++j) logs[j] = x(j);
    }
    sol.values.resize(n);
    for (std::size_t j = 0; j < n; ++j) sol.values[j] = std::exp(logs[j]);
    sol.residual = residual(sys, sol.values);
    sol.branch_attempts = 1;
    return sol;
}

MonomialSystem row_exchange(MonomialSystem sys, std::size_t i, std::size_t j) {
    if (i >= sys.rows() || j >= sys.rows()) throw ShapeError("row_exchange: row index out of range");
    std::swap(sys.exponents[i], sys.exponents[j]);
    std::swap(sys.rhs[i], sys.rhs[j]);
    return sys;
}

MonomialSystem row_scale(MonomialSystem sys, std::size_t i, const Rational& k) {
    if (i >= sys.rows()) throw ShapeError("row_scale: row index out of range");
    if (k == 0) throw DomainError("row_scale: exponent must be nonzero");
    for (auto& v : sys.exponents[i]) v *= k;
    sys.rhs[i] = rational_power(sys.rhs[i], k);
    return sys;
}

MonomialSystem row_combine(MonomialSystem sys, std::size_t i, std::size_t j, const Rational& k) {
    if (i >= sys.rows() || j >= sys.rows()) throw ShapeError("row_combine: row index out of range");
    if (i == j) throw DomainError("row_combine: rows must differ");
    for (std::size_t t = 0; t < sys.var_count; ++t) sys.exponents[j][t] += k * sys.exponents[i][t];
    sys.rhs[j] *= rational_power(sys.rhs[i], k);
    return sys;
}

MonomialSystem monomial_system_from_json(const json& j) {
    if (!j.is_object() || !j.contains("exponents") || !j.contains("rhs_re"))
        throw ParseError("monomial system: expected object with \"exponents\" and \"rhs_re\"");
    const auto& ex = j.at("exponents");
    const auto& re = j.at("rhs_re");
    if (!ex.is_array() || !re.is_array()) throw ParseError("monomial system: exponents and rhs_re must be arrays");
    MonomialSystem sys;
    sys.var_count = ex.empty() ? 0 : ex[0].size();
    for (const auto& row : ex) {
        if (!row.is_array()) throw ParseError("monomial system: exponent rows must be arrays");
        std::vector<Rational> r;
        for (const auto& v : row) {
            if (v.is_string()) {
                r.push_back(parse_rational(v.get<std::string>()));
            } else if (v.is_number_integer()) {
                r.emplace_back(v.get<long long>());
            } else if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>()) {
                r.emplace_back(static_cast<long long>(v.get<double>()));
            } else {
                throw ParseError("monomial system: exponent must be an integer or a \"p/q\" string");
            }
        }
        sys.exponents.push_back(std::move(r));
    }
    std::vector<double> im(re.size(), 0.0);
    if (j.contains("rhs_im")) {
        const auto& jim = j.at("rhs_im");
        if (!jim.is_array() || jim.size() != re.size())
            throw ParseError("monomial system: rhs_im must match rhs_re in length");
        for (std::size_t i = 0; i < jim.size(); ++i) {
            if (!jim[i].is_number()) throw ParseError("monomial system: rhs_im entries must be numbers");
            im[i] = jim[i].get<double>();
        }
    }
    for (std::size_t i = 0; i < re.size(); ++i) {
        if (!re[i].is_number()) throw ParseError("monomial system: rhs_re entries must be numbers");
        sys.rhs.emplace_back(re[i].get<double>(), im[i]);
    }
    try {
        sys.validate();
    } catch (const Error& err) {
        throw ParseError(err.what());
    }
    return sys;
}

json to_json(const MonomialSystem& sys) {
    json ex = json::array();
    for (const auto& row : sys.exponents) {
        json r = json::array();
        for (const auto& v : row) r.push_back(to_string(v));
        ex.push_back(std::move(r));
    }
    json re = json::array(), im = json::array();
    for (auto b : sys.rhs) {
        re.push_back(b.real());
        im.push_back(b.imag());
    }
    return json{{"exponents", ex}, {"rhs_re", re}, {"rhs_im", im}};
}

json to_json(const MonomialSolution& sol) {
    json re = json::array(), im = json::array();
    for (auto v : sol.values) {
        re.push_back(v.real());
        im.push_back(v.imag());
    }
    return json{{"values_re", re},          {"values_im", im},
                {"free_vars", sol.free_vars}, {"residual", sol.residual},
                {"rank_deficient", sol.rank_deficient}, {"branch_attempts", sol.branch_attempts}};
}

}  // namespace hypermat
