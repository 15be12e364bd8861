#include "hypermat/bm_ops.hpp"

#include <optional>
#include <string>

#include "hypermat/error.hpp"

namespace hypermat {

namespace {

ConformabilityReport resolve(const Tuple& ops) {
    const std::size_t m = ops.size();
    if (m < 2) throw ShapeError("a BM product needs at least two operands");
    for (std::size_t t = 0; t < m; ++t) {
        if (ops[t].order() != m) {
            throw ConformabilityError(t, 0, "order " + std::to_string(ops[t].order()) +
                                                " but the product has " + std::to_string(m) +
                                                " operands");
        }
    }
    ConformabilityReport rep;
    rep.result_shape.assign(m, 0);
    std::vector<std::optional<std::size_t>> owner(m);
    for (std::size_t t = 0; t < m; ++t) {
        const std::size_t c = contracted_axis(t, m);
        rep.slot_lengths.push_back(ops[t].shape()[c]);
        for (std::size_t a = 0; a < m; ++a) {
            if (a == c) continue;
            const std::size_t len = ops[t].shape()[a];
            if (!owner[a]) {
                owner[a] = t;
                rep.result_shape[a] = len;
            } else if (rep.result_shape[a] != len) {
                throw ConformabilityError(
                    t, a,
                    "length " + std::to_string(len) + " disagrees with operand " +
                        std::to_string(*owner[a]) + " (length " +
                        std::to_string(rep.result_shape[a]) + ")");
            }
        }
    }
    rep.contracted_length = rep.slot_lengths[0];
    for (auto k : rep.slot_lengths) {
        if (k != rep.contracted_length) rep.contracted_length = 0;
    }
    return rep;
}

// Offsets of every operand's entry for result index `idx`, with the
// contracted axis held at zero, plus the stride along the contracted axis.
struct OperandView {
    const Hypermatrix* op;
    std::size_t axis;
    std::size_t stride;
};

std::vector<OperandView> views(const Tuple& ops) {
    std::vector<OperandView> v;
    const std::size_t m = ops.size();
    for (std::size_t t = 0; t < m; ++t) {
        const std::size_t c = contracted_axis(t, m);
        v.push_back({&ops[t], c, ops[t].strides()[c]});
    }
    return v;
}

void base_offsets(const std::vector<OperandView>& v, const Index& idx, std::vector<std::size_t>& base) {
    for (std::size_t t = 0; t < v.size(); ++t) {
        const auto& strides = v[t].op->strides();
        std::size_t off = 0;
        for (std::size_t a = 0; a < idx.size(); ++a) {
            if (a != v[t].axis) off += idx[a] * strides[a];
        }
        base[t] = off;
    }
}

}  // namespace

ConformabilityReport check_conformable(const Tuple& operands) {
    auto rep = resolve(operands);
    for (std::size_t t = 0; t < operands.size(); ++t) {
        if (rep.slot_lengths[t] != rep.slot_lengths[0]) {
            throw ConformabilityError(t, contracted_axis(t, operands.size()),
                                      "contracted length " + std::to_string(rep.slot_lengths[t]) +
                                          " differs from " + std::to_string(rep.slot_lengths[0]));
        }
    }
    return rep;
}

Hypermatrix bm_product(const Tuple& operands) {
    const auto rep = check_conformable(operands);
    const auto v = views(operands);
    const std::size_t k = rep.contracted_length;
    std::vector<std::size_t> base(operands.size());
    return Hypermatrix::generate(rep.result_shape, [&](const Index& idx) {
        base_offsets(v, idx, base);
        cplx sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            cplx p = 1.0;
            for (std::size_t t = 0; t < v.size(); ++t) p *= (*v[t].op)[base[t] + j * v[t].stride];
            sum += p;
        }
        return sum;
    });
}

Hypermatrix general_bm_product(const Tuple& operands, const Hypermatrix& background) {
    const auto rep = resolve(operands);
    const std::size_t m = operands.size();
    if (background.order() != m) {
        throw ShapeError("background has order " + std::to_string(background.order()) +
                         ", expected " + std::to_string(m));
    }
    for (std::size_t t = 0; t < m; ++t) {
        if (background.shape()[t] != rep.slot_lengths[t]) {
            throw ShapeError("background axis " + std::to_string(t) + " has length " +
                             std::to_string(background.shape()[t]) + ", operand " +
                             std::to_string(t) + " contracts length " +
                             std::to_string(rep.slot_lengths[t]));
        }
    }
    // Only nonzero background entries contribute.
    std::vector<std::pair<Index, cplx>> support;
    for (std::size_t lin = 0; lin < background.size(); ++lin) {
        if (background[lin] != cplx(0.0)) support.emplace_back(background.unravel(lin), background[lin]);
    }
    const auto v = views(operands);
    std::vector<std::size_t> base(m);
    return Hypermatrix::generate(rep.result_shape, [&](const Index& idx) {
        base_offsets(v, idx, base);
        cplx sum = 0.0;
        for (const auto& [js, b] : support) {
            cplx p = b;
            for (std::size_t t = 0; t < m; ++t) p *= (*v[t].op)[base[t] + js[t] * v[t].stride];
            sum += p;
        }
        return sum;
    });
}

Hypermatrix outer_product_slot(const Tuple& operands, std::size_t t) {
    const auto rep = check_conformable(operands);
    if (t >= rep.contracted_length) {
        throw ShapeError("slot " + std::to_string(t) + " out of range for contracted length " +
                         std::to_string(rep.contracted_length));
    }
    const auto v = views(operands);
    std::vector<std::size_t> base(operands.size());
    return Hypermatrix::generate(rep.result_shape, [&](const Index& idx) {
        base_offsets(v, idx, base);
        cplx p = 1.0;
        for (std::size_t s = 0; s < v.size(); ++s) p *= (*v[s].op)[base[s] + t * v[s].stride];
        return p;
    });
}

Hypermatrix kron_delta(std::size_t m, std::size_t n) {
    if (m < 1 || n < 1) throw ShapeError("kron_delta needs m >= 1 and n >= 1");
    return Hypermatrix::generate(Shape(m, n), [](const Index& idx) {
        for (auto i : idx) {
            if (i != idx[0]) return cplx(0.0);
        }
        return cplx(1.0);
    });
}

Hypermatrix kron_delta_slot(std::size_t m, std::size_t n, std::size_t t) {
    if (t >= n) throw ShapeError("slot " + std::to_string(t) + " out of range for side " + std::to_string(n));
    return Hypermatrix::generate(Shape(m, n), [t](const Index& idx) {
        for (auto i : idx) {
            if (i != t) return cplx(0.0);
        }
        return cplx(1.0);
    });
}

Hypermatrix kronecker(const Hypermatrix& a, const Hypermatrix& b) {
    if (a.order() != b.order()) {
        throw ShapeError("kronecker: orders " + std::to_string(a.order()) + " and " +
                         std::to_string(b.order()) + " differ");
    }
    const std::size_t m = a.order();
    Shape rs(m);
    for (std::size_t t = 0; t < m; ++t) rs[t] = a.shape()[t] * b.shape()[t];
    Index ia(m), ib(m);
    return Hypermatrix::generate(rs, [&](const Index& idx) {
        for (std::size_t t = 0; t < m; ++t) {
            ia[t] = idx[t] / b.shape()[t];
            ib[t] = idx[t] % b.shape()[t];
        }
        return a(ia) * b(ib);
    });
}

Hypermatrix direct_sum(const Hypermatrix& a, const Hypermatrix& b) {
    if (a.order() != b.order()) throw ShapeError("direct_sum: orders differ");
    if (!a.is_cubic() || !b.is_cubic()) throw ShapeError("direct_sum: operands must be cubic");
    const std::size_t n0 = a.side();
    const std::size_t n = n0 + b.side();
    Index local(a.order());
    return Hypermatrix::generate(Shape(a.order(), n), [&](const Index& idx) {
        bool low = true, high = true;
        for (auto i : idx) {
            low = low && i < n0;
            high = high && i >= n0;
        }
        if (low) return a(idx);
        if (high) {
            for (std::size_t t = 0; t < idx.size(); ++t) local[t] = idx[t] - n0;
            return b(local);
        }
        return cplx(0.0);
    });
}

cplx multilinear_form(const Hypermatrix& a, const Tuple& vectors) {
    const std::size_t m = a.order();
    if (vectors.size() != m) {
        throw ShapeError("multilinear_form: " + std::to_string(vectors.size()) + " vectors for order " +
                         std::to_string(m));
    }
    Tuple ops;
    ops.reserve(m);
    for (std::size_t t = 0; t < m; ++t) {
        const auto& x = vectors[t];
        if (x.order() != m) {
            throw ShapeError("multilinear_form: vector " + std::to_string(t) + " has order " +
                             std::to_string(x.order()));
        }
        for (std::size_t ax = 1; ax < m; ++ax) {
            if (x.shape()[ax] != 1) throw ShapeError("multilinear_form: vector " + std::to_string(t) + " is not (n,1,...,1)");
        }
        if (x.shape()[0] != a.shape()[t]) {
            throw ShapeError("multilinear_form: vector " + std::to_string(t) + " has length " +
                             std::to_string(x.shape()[0]) + ", axis has " + std::to_string(a.shape()[t]));
        }
        // Transposing m-1-t times moves the vector's axis onto the slot contracted by operand t.
        ops.push_back(m >= 2 ? x.transpose(static_cast<long long>(m - 1 - t)) : x);
    }
    if (m == 1) {
        cplx s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * vectors[0][i];
        return s;
    }
    return general_bm_product(ops, a)[0];
}

Tuple cyclic_tuple(const Hypermatrix& q) {
    const std::size_t m = q.order();
    Tuple out;
    for (std::size_t s = 0; s < m; ++s) out.push_back(q.transpose(static_cast<long long>((m - s) % m)));
    return out;
}

Tuple kronecker_tuple(const Tuple& a, const Tuple& b) {
    if (a.size() != b.size()) throw ShapeError("kronecker_tuple: tuple lengths differ");
    Tuple out;
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(kronecker(a[i], b[i]));
    return out;
}

Tuple direct_sum_tuple(const Tuple& a, const Tuple& b) {
    if (a.size() != b.size()) throw ShapeError("direct_sum_tuple: tuple lengths differ");
    Tuple out;
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(direct_sum(a[i], b[i]));
    return out;
}

}  // namespace hypermat
