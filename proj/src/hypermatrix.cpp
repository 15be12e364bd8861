#include "hypermat/hypermatrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hypermat/error.hpp"

namespace hypermat {

namespace {

std::string shape_string(const Shape& s) {
    std::string out = "(";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s[i]);
    }
    return out + ")";
}

}  // namespace

std::size_t shape_volume(const Shape& shape) {
    std::size_t v = 1;
    for (auto n : shape) v *= n;
    return v;
}

bool next_index(Index& idx, const Shape& shape) {
    for (std::size_t a = shape.size(); a-- > 0;) {
        if (++idx[a] < shape[a]) return true;
        idx[a] = 0;
    }
    return false;
}

Hypermatrix::Hypermatrix() : Hypermatrix(Shape{1}, std::vector<cplx>{0.0}) {}

Hypermatrix::Hypermatrix(Shape shape, std::vector<cplx> entries)
    : shape_(std::move(shape)), data_(std::move(entries)) {
    if (shape_.empty()) throw ShapeError("hypermatrix order must be at least 1");
    for (auto n : shape_) {
        if (n == 0) throw ShapeError("shape " + shape_string(shape_) + " has a zero extent");
    }
    if (data_.size() != shape_volume(shape_)) {
        throw ShapeError("shape " + shape_string(shape_) + " needs " +
                         std::to_string(shape_volume(shape_)) + " entries, got " +
                         std::to_string(data_.size()));
    }
    build_strides();
}

void Hypermatrix::build_strides() {
    strides_.assign(shape_.size(), 1);
    for (std::size_t a = shape_.size(); a-- > 1;) strides_[a - 1] = strides_[a] * shape_[a];
}

Hypermatrix Hypermatrix::zeros(const Shape& shape) { return filled(shape, 0.0); }

Hypermatrix Hypermatrix::filled(const Shape& shape, cplx value) {
    return Hypermatrix(shape, std::vector<cplx>(shape_volume(shape), value));
}

Hypermatrix Hypermatrix::generate(const Shape& shape,
                                  const std::function<cplx(const Index&)>& f) {
    std::vector<cplx> data;
    data.reserve(shape_volume(shape));
    Index idx(shape.size(), 0);
    if (!shape.empty() && shape_volume(shape) > 0) {
        do {
            data.push_back(f(idx));
        } while (next_index(idx, shape));
    }
    return Hypermatrix(shape, std::move(data));
}

Hypermatrix Hypermatrix::vector(std::span<const cplx> values, std::size_t order) {
    if (order == 0) throw ShapeError("vector order must be at least 1");
    Shape s(order, 1);
    s[0] = values.size();
    return Hypermatrix(s, std::vector<cplx>(values.begin(), values.end()));
}

Hypermatrix Hypermatrix::vector(std::initializer_list<cplx> values, std::size_t order) {
    return vector(std::span<const cplx>(values.begin(), values.size()), order);
}

Hypermatrix Hypermatrix::matrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows.begin()->size() : 0;
    std::vector<cplx> data;
    for (const auto& row : rows) {
        if (row.size() != c) throw ShapeError("ragged matrix rows");
        data.insert(data.end(), row.begin(), row.end());
    }
    return Hypermatrix({r, c}, std::move(data));
}

Hypermatrix Hypermatrix::from_frontal_slices(
    std::initializer_list<std::initializer_list<std::initializer_list<cplx>>> slices) {
    const std::size_t depth = slices.size();
    if (depth == 0) throw ShapeError("no slices");
    const std::size_t rows = slices.begin()->size();
    const std::size_t cols = rows ? slices.begin()->begin()->size() : 0;
    std::vector<cplx> data(rows * cols * depth);
    std::size_t k = 0;
    for (const auto& sl : slices) {
        if (sl.size() != rows) throw ShapeError("ragged frontal slices");
        std::size_t i = 0;
        for (const auto& row : sl) {
            if (row.size() != cols) throw ShapeError("ragged frontal slices");
            std::size_t j = 0;
            for (const auto& v : row) {
                data[(i * cols + j) * depth + k] = v;
                ++j;
            }
            ++i;
        }
        ++k;
    }
    return Hypermatrix({rows, cols, depth}, std::move(data));
}

std::size_t Hypermatrix::dim(std::size_t axis) const {
    if (axis >= shape_.size()) throw ShapeError("axis " + std::to_string(axis) + " out of range");
    return shape_[axis];
}

bool Hypermatrix::is_cubic() const noexcept {
    return std::all_of(shape_.begin(), shape_.end(), [&](auto n) { return n == shape_[0]; });
}

std::size_t Hypermatrix::side() const {
    if (!is_cubic()) throw ShapeError("hypermatrix of shape " + shape_string(shape_) + " is not cubic");
    return shape_[0];
}

std::size_t Hypermatrix::offset(const Index& idx) const noexcept {
    std::size_t off = 0;
    for (std::size_t a = 0; a < shape_.size(); ++a) off += idx[a] * strides_[a];
    return off;
}

Index Hypermatrix::unravel(std::size_t linear) const {
    Index idx(shape_.size());
    for (std::size_t a = 0; a < shape_.size(); ++a) {
        idx[a] = linear / strides_[a];
        linear %= strides_[a];
    }
    return idx;
}

cplx Hypermatrix::at(const Index& idx) const {
    if (idx.size() != shape_.size()) {
        throw ShapeError("index of length " + std::to_string(idx.size()) + " for order " +
                         std::to_string(shape_.size()));
    }
    for (std::size_t a = 0; a < idx.size(); ++a) {
        if (idx[a] >= shape_[a]) {
            throw ShapeError("index " + std::to_string(idx[a]) + " out of range on axis " +
                             std::to_string(a));
        }
    }
    return data_[offset(idx)];
}

Hypermatrix Hypermatrix::transpose() const {
    const std::size_t m = order();
    if (m < 2) throw ShapeError("transpose needs order at least 2");
    Shape rs(m);
    for (std::size_t a = 0; a < m; ++a) rs[a] = shape_[(a + 1) % m];
    std::vector<cplx> out(data_.size());
    Index src(m, 0);
    std::size_t lin = 0;
    // Iterate the source; source index (a0,...,a_{m-1}) lands at (a1,...,a_{m-1},a0).
    do {
        std::size_t dst = 0, stride = 1;
        for (std::size_t a = m; a-- > 0;) {
            dst += src[(a + 1) % m] * stride;
            stride *= rs[a];
        }
        out[dst] = data_[lin++];
    } while (next_index(src, shape_));
    return Hypermatrix(std::move(rs), std::move(out));
}

Hypermatrix Hypermatrix::transpose(long long k) const {
    const auto m = static_cast<long long>(order());
    if (m < 2) throw ShapeError("transpose needs order at least 2");
    long long r = ((k % m) + m) % m;
    Hypermatrix out = *this;
    for (long long i = 0; i < r; ++i) out = out.transpose();
    return out;
}

Hypermatrix Hypermatrix::slice(std::size_t axis, std::size_t t) const {
    if (axis >= order()) throw ShapeError("slice axis " + std::to_string(axis) + " out of range");
    if (t >= shape_[axis]) {
        throw ShapeError("slice index " + std::to_string(t) + " out of range on axis " +
                         std::to_string(axis));
    }
    Shape rs = shape_;
    rs[axis] = 1;
    return generate(rs, [&](const Index& idx) {
        Index src = idx;
        src[axis] = t;
        return (*this)(src);
    });
}

void Hypermatrix::check_same_shape(const Hypermatrix& other, const char* op) const {
    if (shape_ != other.shape_) {
        throw ShapeError(std::string(op) + ": shape " + shape_string(shape_) + " vs " +
                         shape_string(other.shape_));
    }
}

Hypermatrix Hypermatrix::map(const std::function<cplx(cplx)>& f) const {
    std::vector<cplx> out(data_.size());
    std::transform(data_.begin(), data_.end(), out.begin(), f);
    return Hypermatrix(shape_, std::move(out));
}

Hypermatrix Hypermatrix::conjugate() const {
    return map([](cplx z) { return std::conj(z); });
}

Hypermatrix Hypermatrix::scale(cplx c) const {
    return map([c](cplx z) { return c * z; });
}

Hypermatrix Hypermatrix::add(const Hypermatrix& other) const {
    check_same_shape(other, "add");
    std::vector<cplx> out(data_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = data_[i] + other.data_[i];
    return Hypermatrix(shape_, std::move(out));
}

Hypermatrix Hypermatrix::subtract(const Hypermatrix& other) const {
    check_same_shape(other, "subtract");
    std::vector<cplx> out(data_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = data_[i] - other.data_[i];
    return Hypermatrix(shape_, std::move(out));
}

Hypermatrix Hypermatrix::hadamard(const Hypermatrix& other) const {
    check_same_shape(other, "hadamard");
    std::vector<cplx> out(data_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = data_[i] * other.data_[i];
    return Hypermatrix(shape_, std::move(out));
}

double Hypermatrix::norm_l2() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

double Hypermatrix::max_abs() const {
    double s = 0.0;
    for (const auto& z : data_) s = std::max(s, std::abs(z));
    return s;
}

double Hypermatrix::max_abs_diff(const Hypermatrix& other) const {
    check_same_shape(other, "max_abs_diff");
    double s = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i) s = std::max(s, std::abs(data_[i] - other.data_[i]));
    return s;
}

bool Hypermatrix::approx_equal(const Hypermatrix& other, double tol) const {
    return shape_ == other.shape_ && max_abs_diff(other) <= tol;
}

bool Hypermatrix::is_real(double tol) const {
    return std::all_of(data_.begin(), data_.end(), [tol](cplx z) { return std::abs(z.imag()) <= tol; });
}

Hypermatrix transpose(const Hypermatrix& a) { return a.transpose(); }
Hypermatrix slice(const Hypermatrix& a, std::size_t axis, std::size_t t) { return a.slice(axis, t); }
Hypermatrix hadamard_entrywise(const Hypermatrix& a, const Hypermatrix& b) { return a.hadamard(b); }
Hypermatrix conjugate(const Hypermatrix& a) { return a.conjugate(); }
Hypermatrix scale(const Hypermatrix& a, cplx c) { return a.scale(c); }
Hypermatrix add(const Hypermatrix& a, const Hypermatrix& b) { return a.add(b); }
double norm_l2(const Hypermatrix& a) { return a.norm_l2(); }
double max_abs_diff(const Hypermatrix& a, const Hypermatrix& b) { return a.max_abs_diff(b); }

Hypermatrix concatenate(const std::vector<Hypermatrix>& blocks, std::size_t axis) {
    if (blocks.empty()) throw ShapeError("concatenate: no blocks");
    const Shape& base = blocks.front().shape();
    if (axis >= base.size()) throw ShapeError("concatenate: axis out of range");
    Shape rs = base;
    rs[axis] = 0;
    std::vector<std::size_t> start;
    for (const auto& b : blocks) {
        for (std::size_t a = 0; a < base.size(); ++a) {
            if (a != axis && (b.order() != base.size() || b.shape()[a] != base[a])) {
                throw ShapeError("concatenate: blocks disagree off the stacking axis");
            }
        }
        start.push_back(rs[axis]);
        rs[axis] += b.shape()[axis];
    }
    return Hypermatrix::generate(rs, [&](const Index& idx) {
        std::size_t blk = std::upper_bound(start.begin(), start.end(), idx[axis]) - start.begin() - 1;
        Index local = idx;
        local[axis] -= start[blk];
        return blocks[blk](local);
    });
}

}  // namespace hypermat
