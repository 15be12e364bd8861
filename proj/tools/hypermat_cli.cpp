#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "hypermat/approx.hpp"
#include "hypermat/monomial.hpp"
#include "hypermat/orthogonalize.hpp"
#include "hypermat/spectral2.hpp"
#include "hypermat/structured.hpp"
#include "hypermat/transforms.hpp"

using namespace hypermat;

namespace {

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2, kNumeric = 3 };

struct Globals {
    double tol = kDefaultTol;
    std::uint64_t seed = 0;
    std::string command;
};

Globals g;

int print(const json& j, int code) {
    std::cout << dump_json(j) << "\n";
    return code;
}

json certificate(bool pass, double residual) {
    return json{{"command", g.command}, {"verdict", pass ? "pass" : "fail"}, {"residual", residual},
                {"tolerance", g.tol}};
}

int verdict(json cert) {
    const bool pass = cert["verdict"] == "pass";
    return print(cert, pass ? kPass : kFail);
}

int error_out(const std::string& msg, int code, json extra = json::object()) {
    std::cerr << "error: " << msg << "\n";
    json j{{"command", g.command}, {"verdict", "error"}, {"error", msg}, {"tolerance", g.tol}};
    for (auto& [k, v] : extra.items()) j[k] = v;
    return print(j, code);
}

// ------------------------------------------------------------ serialization

json tuple_json(const Tuple& t) {
    json arr = json::array();
    for (const auto& a : t) arr.push_back(to_json(a));
    return json{{"tuple", arr}};
}

Tuple read_tuple(const std::vector<std::string>& files) {
    if (files.size() == 1) {
        json j = read_json_file(files[0]);
        if (j.is_object() && j.contains("tuple")) {
            Tuple t;
            for (const auto& e : j.at("tuple")) t.push_back(hypermatrix_from_json(e));
            return t;
        }
        return {hypermatrix_from_json(j)};
    }
    Tuple t;
    for (const auto& f : files) t.push_back(read_hypermatrix_file(f));
    return t;
}

json complex_list(const std::vector<cplx>& v) {
    json arr = json::array();
    for (auto z : v) arr.push_back(complex_to_json(z));
    return arr;
}

std::vector<cplx> complex_list_from(const json& j) {
    std::vector<cplx> out;
    for (const auto& e : j) out.push_back(complex_from_json(e));
    return out;
}

json decomposition_json(const SpectralDecomposition& d) {
    return json{{"u", to_json(d.u)},   {"v", to_json(d.v)},   {"w", to_json(d.w)},
                {"mu", to_json(d.mu)}, {"nu", to_json(d.nu)}, {"omega", to_json(d.omega)}};
}

SpectralDecomposition decomposition_from(const json& j) {
    return {hypermatrix_from_json(j.at("u")),  hypermatrix_from_json(j.at("v")),
            hypermatrix_from_json(j.at("w")),  hypermatrix_from_json(j.at("mu")),
            hypermatrix_from_json(j.at("nu")), hypermatrix_from_json(j.at("omega"))};
}

json matrix_spectral_json(const MatrixSpectral& d) {
    return json{{"u", to_json(d.u)}, {"v", to_json(d.v)}, {"mu", complex_list(d.mu)}, {"nu", complex_list(d.nu)}};
}

SpectralTree tree_from(const json& j) {
    if (j.contains("leaf")) return SpectralTree::leaf(hypermatrix_from_json(j.at("leaf")));
    for (const char* key : {"kron", "sum"}) {
        if (!j.contains(key)) continue;
        const auto& c = j.at(key);
        if (!c.is_array() || c.size() != 2) throw ParseError(std::string("\"") + key + "\" needs two subtrees");
        auto a = tree_from(c[0]), b = tree_from(c[1]);
        return key == std::string("kron") ? SpectralTree::kron(std::move(a), std::move(b))
                                          : SpectralTree::sum(std::move(a), std::move(b));
    }
    throw ParseError("tree nodes must have a \"leaf\", \"kron\" or \"sum\" key");
}

bool all_matrix_leaves(const SpectralTree& t) {
    if (t.kind == SpectralTree::Kind::Leaf) return t.generator.order() == 2;
    return std::all_of(t.children.begin(), t.children.end(), all_matrix_leaves);
}

json derived_constraint_json(const DerivedConstraint& c) {
    json comb = json::array();
    for (const auto& r : c.combination) comb.push_back(to_string(r));
    return json{{"combination", comb}, {"rhs", complex_to_json(c.rhs)}};
}

// ---------------------------------------------------------------- handlers

int cmd_product(const std::vector<std::string>& files, const std::string& background) {
    const Tuple ops = read_tuple(files);
    if (background.empty()) return print(to_json(bm_product(ops)), kPass);
    return print(to_json(general_bm_product(ops, read_hypermatrix_file(background))), kPass);
}

int cmd_check(const std::string& mode, const std::vector<std::string>& files) {
    CheckResult r;
    if (mode == "hadamard") {
        const Hypermatrix h = read_hypermatrix_file(files.at(0));
        const bool ok = is_hadamard(h);
        const double n = static_cast<double>(h.dim(0));
        const double res = bm_product(cyclic_tuple(h)).max_abs_diff(kron_delta(h.order(), h.dim(0)).scale(n));
        return verdict(certificate(ok, res));
    }
    if (mode == "uncorrelated") {
        r = is_uncorrelated(read_tuple(files), g.tol);
    } else {
        const Hypermatrix a = read_hypermatrix_file(files.at(0));
        r = mode == "orthogonal" ? is_orthogonal(a, g.tol) : is_unitary(a, g.tol);
    }
    return verdict(certificate(r.ok, r.residual));
}

int cmd_dft_admissible(std::size_t n) {
    auto r = check_dft_admissible(n);
    json cert = certificate(r.admissible, 0.0);
    cert["n"] = n;
    if (r.witness) cert["witness"] = json{{"x", r.witness->x}, {"y", r.witness->y}};
    return verdict(cert);
}

int cmd_dft_triple(std::size_t n) {
    try {
        return print(tuple_json(dft_triple(n)), kPass);
    } catch (const InadmissibleError& e) {
        json cert = certificate(false, 0.0);
        cert["error"] = e.what();
        cert["witness"] = json{{"x", e.witness().x}, {"y", e.witness().y}};
        return print(cert, kFail);
    }
}

int cmd_orthogonalize(const std::string& file) {
    const Hypermatrix q = solve_orthogonalization(read_hypermatrix_file(file));
    const auto r = is_orthogonal(q, g.tol);
    json cert = certificate(r.ok, r.residual);
    cert["result"] = to_json(q);
    return verdict(cert);
}

int cmd_uncorrelate(const std::vector<std::string>& files) {
    const auto sol = solve_uncorrelated(read_tuple(files));
    const auto r = is_uncorrelated(sol.tuple, g.tol);
    json cert = certificate(r.ok, r.residual);
    cert["result"] = tuple_json(sol.tuple);
    return verdict(cert);
}

int cmd_hyperdet(const std::string& file) {
    json cert = certificate(true, 0.0);
    cert["value"] = complex_to_json(hyperdet_side2(read_hypermatrix_file(file)));
    return verdict(cert);
}

int cmd_charpoly(const std::string& file) {
    const Hypermatrix a = read_hypermatrix_file(file);
    const auto gen = char_generators_222(a);
    json cert = certificate(true, 0.0);
    cert["generators"] = json{{"p", complex_to_json(gen.p)}, {"q", complex_to_json(gen.q)}, {"c", complex_to_json(gen.c)}};
    cert["hyperdet"] = complex_to_json(hyperdet_side2(a));
    return verdict(cert);
}

int cmd_decompose(const std::string& file) {
    const Hypermatrix a = read_hypermatrix_file(file);
    SpectralDiagnostics diag;
    const auto d = spectral_decompose_222(a, &diag);
    const double res = relative_error(reconstruct(d), a);
    json cert = certificate(res <= g.tol, res);
    cert["result"] = decomposition_json(d);
    cert["generators"] = complex_list({diag.generators[0], diag.generators[1]});
    cert["scale_squares"] = complex_list({diag.s00_sq, diag.s01_sq, diag.s11_sq});
    return verdict(cert);
}

int cmd_compose(const std::string& file) {
    const SpectralTree tree = tree_from(read_json_file(file));
    const Hypermatrix a = tree.evaluate();
    if (all_matrix_leaves(tree)) {
        const auto d = compose_matrix_spectral(tree);
        const double res = relative_error(reconstruct(d), a);
        json cert = certificate(res <= g.tol, res);
        cert["result"] = matrix_spectral_json(d);
        return verdict(cert);
    }
    const auto d = compose_spectral(tree);
    const double res = relative_error(reconstruct(d), a);
    json cert = certificate(res <= g.tol, res);
    cert["result"] = decomposition_json(d);
    return verdict(cert);
}

int cmd_z2_decompose() {
    const auto rep = z2_decompose(g.tol);
    json cert = certificate(rep.success, rep.success ? rep.reconstruction_error : 0.0);
    cert["roots"] = complex_list(rep.roots);
    cert["root_residuals"] = rep.root_residuals;
    if (rep.success) {
        cert["root"] = complex_to_json(rep.roots[rep.root_index]);
        cert["branch"] = rep.branch.to_string();
        cert["rescaled"] = rep.rescaled;
        cert["scale"] = complex_to_json(rep.scale);
        cert["result"] = json{{"q", to_json(rep.decomposition.q)}, {"d", to_json(rep.decomposition.d)}};
    } else {
        json trials = json::array();
        for (const auto& t : rep.trials)
            trials.push_back(json{{"root", t.root_index},
                                  {"branch", t.branch.to_string()},
                                  {"direct_error", t.direct_error},
                                  {"proportional_error", t.proportional_error}});
        cert["witness"] = json{{"trials", trials}};
    }
    return verdict(cert);
}

int cmd_transform(const std::vector<std::string>& files) {
    if (files.size() < 2) throw ShapeError("transform needs a tuple and a vector file");
    const Hypermatrix x = read_hypermatrix_file(files.back());
    const Tuple tuple = read_tuple({files.begin(), files.end() - 1});
    try {
        const Hypermatrix y = apply_transform(tuple, x, std::max(g.tol, 1e-8));
        const std::size_t m = tuple.size();
        const cplx px = power_sum(x, m);
        const double res = std::abs(power_sum(y, m) - px) / (1.0 + std::abs(px));
        json cert = certificate(res <= g.tol, res);
        cert["result"] = to_json(y);
        return verdict(cert);
    } catch (const NotUncorrelatedError& e) {
        json cert = certificate(false, e.residual());
        cert["error"] = e.what();
        return print(cert, kFail);
    }
}

int cmd_rayleigh(const std::string& file) {
    const json j = read_json_file(file);
    try {
        RayleighResult r;
        if (j.contains("lambda") && j.contains("u") && !j.contains("z")) {
            const auto d = spectral_from_eigenbasis(hypermatrix_from_json(j.at("u")), complex_list_from(j.at("lambda")));
            r = rayleigh_bounds_matrix(d, hypermatrix_from_json(j.at("x")), hypermatrix_from_json(j.at("y")));
        } else {
            const auto d = j.contains("decomposition")
                               ? decomposition_from(j.at("decomposition"))
                               : symmetric_decomposition(hypermatrix_from_json(j.at("q")),
                                                         hypermatrix_from_json(j.at("lambda")));
            r = rayleigh_bounds_3(d, hypermatrix_from_json(j.at("x")), hypermatrix_from_json(j.at("y")),
                                  hypermatrix_from_json(j.at("z")));
        }
        const double excess = std::max({0.0, r.lower - r.quotient.real(), r.quotient.real() - r.upper,
                                        std::abs(r.quotient.imag())});
        json cert = certificate(r.holds(g.tol), excess);
        cert["lower"] = r.lower;
        cert["upper"] = r.upper;
        cert["quotient"] = complex_to_json(r.quotient);
        return verdict(cert);
    } catch (const ConeViolationError& e) {
        json cert = certificate(false, 0.0);
        cert["error"] = e.what();
        cert["witness"] = json{{"slot", e.slot()}, {"value", complex_to_json(e.value())}};
        return print(cert, kFail);
    }
}

int cmd_monomial(const std::string& file, bool least_squares) {
    const MonomialSystem sys = monomial_system_from_json(read_json_file(file));
    try {
        const auto sol = least_squares ? log_least_square(sys) : gauss_jordan_solve(sys);
        json cert = certificate(sol.residual <= g.tol, sol.residual);
        cert["result"] = to_json(sol);
        return verdict(cert);
    } catch (const InfeasibleSystemError& e) {
        json cert = certificate(false, std::norm(std::log(e.constraint().rhs)));
        cert["error"] = e.what();
        cert["witness"] = derived_constraint_json(e.constraint());
        return print(cert, kFail);
    }
}

int cmd_rank1(const std::string& file) {
    const Hypermatrix h = read_hypermatrix_file(file);
    const auto r = bm_rank1_approx(h);
    json cert = certificate(r.residual <= g.tol, r.residual);
    cert["result"] = tuple_json(r.factors);
    cert["relative_error"] = relative_error(bm_product(r.factors), h);
    return verdict(cert);
}

int cmd_kron_approx(const std::string& file, const std::vector<std::size_t>& blocks) {
    const auto r = kron_factor_approx(read_hypermatrix_file(file), blocks);
    json cert = certificate(r.residual <= g.tol, r.residual);
    json out = json::array();
    for (const auto& f : r.factors) out.push_back(tuple_json(f));
    cert["result"] = json{{"blocks", out}, {"block_residuals", r.block_residuals}};
    return verdict(cert);
}

int cmd_rank_upper(const std::string& file, std::size_t rho) {
    RankOptions opt;
    opt.seed = g.seed;
    opt.certify_tol = std::max(g.tol, opt.certify_tol);
    const auto c = bm_rank_upper(read_hypermatrix_file(file), rho, opt);
    json cert = certificate(c.certified, c.residual);
    cert["tolerance"] = opt.certify_tol;
    cert["rho"] = rho;
    cert["sweeps"] = c.sweeps;
    if (c.certified) cert["result"] = tuple_json(c.factors);
    return verdict(cert);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hypermatrix algebra toolkit: BM products, orthogonalization, spectra and approximations"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--tol", g.tol, "Tolerance for verdicts")->capture_default_str();
    app.add_option("--seed", g.seed, "Seed for randomized internals")->capture_default_str();

    std::function<int()> action;
    std::vector<std::string> files;
    std::string file, background, check_mode;
    std::size_t n = 0, m = 0, k = 1, rho = 1;
    long long times = 1;
    std::vector<std::size_t> blocks;

    auto sub = [&](const char* name, const char* help) { return app.add_subcommand(name, help); };
    auto bind = [&](CLI::App* s, std::function<int()> f) { s->final_callback([&action, f] { action = f; }); };

    auto* product = sub("product", "BM product of operand files (or one {\"tuple\":[...]} file)");
    product->add_option("files", files, "Operand files")->required()->check(CLI::ExistingFile);
    product->add_option("--background", background, "Background hypermatrix for the general product")
        ->check(CLI::ExistingFile);
    bind(product, [&] { return cmd_product(files, background); });

    auto* kron = sub("kron", "Kronecker product of two hypermatrices");
    kron->add_option("files", files)->required()->expected(2)->check(CLI::ExistingFile);
    bind(kron, [&] { return print(to_json(kronecker(read_hypermatrix_file(files[0]), read_hypermatrix_file(files[1]))), kPass); });

    auto* dsum = sub("dsum", "Direct sum of two hypermatrices");
    dsum->add_option("files", files)->required()->expected(2)->check(CLI::ExistingFile);
    bind(dsum, [&] { return print(to_json(direct_sum(read_hypermatrix_file(files[0]), read_hypermatrix_file(files[1]))), kPass); });

    auto* tr = sub("transpose", "Cyclic transpose, applied --times times");
    tr->add_option("file", file)->required()->check(CLI::ExistingFile);
    tr->add_option("--times", times)->capture_default_str();
    bind(tr, [&] { return print(to_json(read_hypermatrix_file(file).transpose(times)), kPass); });

    auto* delta = sub("delta", "Kronecker delta hypermatrix of order m and side n");
    delta->add_option("m", m)->required();
    delta->add_option("n", n)->required();
    bind(delta, [&] { return print(to_json(kron_delta(m, n)), kPass); });

    auto* dftm = sub("dft-matrix", "n x n DFT matrix");
    dftm->add_option("n", n)->required();
    bind(dftm, [&] { return print(to_json(dft_matrix(n)), kPass); });

    auto* dftt = sub("dft-triple", "Third order DFT triple");
    dftt->add_option("n", n)->required();
    bind(dftt, [&] { return cmd_dft_triple(n); });

    auto* dfta = sub("dft-admissible", "Admissibility of n for the third order DFT");
    dfta->add_option("n", n)->required();
    bind(dfta, [&] { return cmd_dft_admissible(n); });

    auto* had = sub("hadamard-build", "Side-2 Hadamard hypermatrix of odd order m, optionally a Kronecker power");
    had->add_option("m", m)->required();
    had->add_option("--power", k, "Kronecker power")->capture_default_str();
    bind(had, [&] { return print(to_json(hadamard_kron_power(hadamard_side2(m), k)), kPass); });

    auto* check = sub("check", "Structural checks");
    auto* grp = check->add_option_group("mode");
    grp->add_flag_callback("--orthogonal", [&] { check_mode = "orthogonal"; });
    grp->add_flag_callback("--uncorrelated", [&] { check_mode = "uncorrelated"; });
    grp->add_flag_callback("--unitary", [&] { check_mode = "unitary"; });
    grp->add_flag_callback("--hadamard", [&] { check_mode = "hadamard"; });
    grp->require_option(1);
    check->add_option("files", files)->required()->check(CLI::ExistingFile);
    bind(check, [&] { return cmd_check(check_mode, files); });

    auto* orth = sub("orthogonalize", "Orthogonal hypermatrix from a generic input");
    orth->add_option("file", file)->required()->check(CLI::ExistingFile);
    bind(orth, [&] { return cmd_orthogonalize(file); });

    auto* unc = sub("uncorrelate", "Uncorrelated tuple from a generic tuple");
    unc->add_option("files", files)->required()->check(CLI::ExistingFile);
    bind(unc, [&] { return cmd_uncorrelate(files); });

    auto* hd = sub("hyperdet", "Side-2 hyperdeterminant");
    hd->add_option("file", file)->required()->check(CLI::ExistingFile);
    bind(hd, [&] { return cmd_hyperdet(file); });

    auto* cp = sub("charpoly222", "Characteristic generators of a 2x2x2 hypermatrix");
    cp->add_option("file", file)->required()->check(CLI::ExistingFile);
    bind(cp, [&] { return cmd_charpoly(file); });

    auto* dec = sub("decompose222", "Spectral decomposition of a 2x2x2 hypermatrix");
    dec->add_option("file", file)->required()->check(CLI::ExistingFile);
    bind(dec, [&] { return cmd_decompose(file); });

    auto* comp = sub("compose-spectral", "Spectral decomposition of a Kronecker/direct-sum tree");
    comp->add_option("file", file, "Tree JSON: {\"leaf\":H} | {\"kron\":[a,b]} | {\"sum\":[a,b]}")
        ->required()
        ->check(CLI::ExistingFile);
    bind(comp, [&] { return cmd_compose(file); });

    auto* z2 = sub("z2-adjacency", "Adjacency hypermatrix of the k-fold product of Z/2Z");
    z2->add_option("k", k)->required();
    bind(z2, [&] { return print(to_json(group_adjacency_z2(k)), kPass); });

    auto* z2d = sub("z2-decompose", "Root search and branch enumeration for the Z/2Z spectral decomposition");
    bind(z2d, [&] { return cmd_z2_decompose(); });

    auto* tf = sub("transform", "Hypermatrix Fourier transform: tuple file(s) followed by the vector file");
    tf->add_option("files", files)->required()->check(CLI::ExistingFile);
    bind(tf, [&] { return cmd_transform(files); });

    auto* ray = sub("rayleigh", "Rayleigh quotient bounds from a JSON problem file");
    ray->add_option("file", file)->required()->check(CLI::ExistingFile);
    bind(ray, [&] { return cmd_rayleigh(file); });

    auto* sm = sub("solve-monomial", "Exact multiplicative elimination of a monomial system");
    sm->add_option("file", file)->required()->check(CLI::ExistingFile);
    bind(sm, [&] { return cmd_monomial(file, false); });

    auto* lls = sub("loglsq", "Logarithmic least squares for a monomial system");
    lls->add_option("file", file)->required()->check(CLI::ExistingFile);
    bind(lls, [&] { return cmd_monomial(file, true); });

    auto* r1 = sub("rank1", "BM-rank-1 logarithmic least-squares approximation");
    r1->add_option("file", file)->required()->check(CLI::ExistingFile);
    bind(r1, [&] { return cmd_rank1(file); });

    auto* ka = sub("kron-approx", "Direct-sum / Kronecker factor approximation");
    ka->add_option("file", file)->required()->check(CLI::ExistingFile);
    ka->add_option("--blocks", blocks, "Block sides, powers of 2")->required()->delimiter(',');
    bind(ka, [&] { return cmd_kron_approx(file, blocks); });

    auto* ru = sub("rank-upper", "Certificate for BM-rank <= rho");
    ru->add_option("file", file)->required()->check(CLI::ExistingFile);
    ru->add_option("--rho", rho)->required();
    bind(ru, [&] { return cmd_rank_upper(file, rho); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    for (auto* s : app.get_subcommands()) g.command = s->get_name();

    try {
        return action();
    } catch (const ConformabilityError& e) {
        return error_out(e.what(), kUsage, json{{"conformability", {{"operand", e.operand()}, {"axis", e.axis()}}}});
    } catch (const ParseError& e) {
        return error_out(e.what(), kUsage);
    } catch (const ShapeError& e) {
        return error_out(e.what(), kUsage);
    } catch (const DomainError& e) {
        return error_out(e.what(), kUsage);
    } catch (const NumericError& e) {
        return error_out(e.what(), kNumeric);
    } catch (const std::out_of_range& e) {
        return error_out(e.what(), kUsage);
    } catch (const json::exception& e) {
        return error_out(e.what(), kUsage);
    } catch (const std::exception& e) {
        return error_out(e.what(), kNumeric);
    }
}
