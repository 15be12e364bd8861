#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace hypermat {

using cplx = std::complex<double>;
using Shape = std::vector<std::size_t>;
using Index = std::vector<std::size_t>;

inline constexpr double kDefaultTol = 1e-9;

/// Number of entries addressed by a shape.
std::size_t shape_volume(const Shape& shape);

/// Advance a multi-index in row-major order (last axis fastest).
/// Returns false after wrapping past the final index.
bool next_index(Index& idx, const Shape& shape);

/**
 * Dense hypermatrix with complex entries.
 *
 * Entries are stored row-major with the first index slowest. Instances are
 * immutable: every operation returns a new value. The order is the number of
 * axes and is always at least one; vectors use shape (n,1,...,1).
 */
class Hypermatrix {
public:
    Hypermatrix();
    Hypermatrix(Shape shape, std::vector<cplx> entries);

    static Hypermatrix zeros(const Shape& shape);
    static Hypermatrix filled(const Shape& shape, cplx value);
    static Hypermatrix generate(const Shape& shape, const std::function<cplx(const Index&)>& f);

    /// Column vector of the given order: shape (n,1,...,1).
    static Hypermatrix vector(std::span<const cplx> values, std::size_t order);
    static Hypermatrix vector(std::initializer_list<cplx> values, std::size_t order);

    /// Order-2 hypermatrix from nested rows.
    static Hypermatrix matrix(std::initializer_list<std::initializer_list<cplx>> rows);

    /// Order-3 hypermatrix from its frontal slices A[:,:,k], k = 0,1,...
    static Hypermatrix from_frontal_slices(
        std::initializer_list<std::initializer_list<std::initializer_list<cplx>>> slices);

    std::size_t order() const noexcept { return shape_.size(); }
    const Shape& shape() const noexcept { return shape_; }
    std::size_t dim(std::size_t axis) const;
    std::size_t size() const noexcept { return data_.size(); }
    bool is_cubic() const noexcept;
    /// Common side length; throws ShapeError unless cubic.
    std::size_t side() const;

    const std::vector<cplx>& data() const noexcept { return data_; }
    cplx operator[](std::size_t linear) const noexcept { return data_[linear]; }
    cplx& operator[](std::size_t linear) noexcept { return data_[linear]; }
    cplx operator()(const Index& idx) const noexcept { return data_[offset(idx)]; }
    cplx& operator()(const Index& idx) noexcept { return data_[offset(idx)]; }
    template <typename... I>
    cplx operator()(std::size_t first, I... rest) const noexcept {
        const std::size_t idx[] = {first, static_cast<std::size_t>(rest)...};
        std::size_t off = 0;
        for (std::size_t a = 0; a < sizeof...(rest) + 1; ++a) off += idx[a] * strides_[a];
        return data_[off];
    }
    /// Bounds-checked access.
    cplx at(const Index& idx) const;

    std::size_t offset(const Index& idx) const noexcept;
    Index unravel(std::size_t linear) const;
    const std::vector<std::size_t>& strides() const noexcept { return strides_; }

    /// Cyclic transpose: result[i1,...,im] = A[im,i1,...,i(m-1)].
    Hypermatrix transpose() const;
    /// Transpose applied k times; k is reduced modulo the order.
    Hypermatrix transpose(long long k) const;

    /// Entries with index `t` along `axis`; that axis keeps size one.
    Hypermatrix slice(std::size_t axis, std::size_t t) const;

    Hypermatrix conjugate() const;
    Hypermatrix scale(cplx c) const;
    Hypermatrix add(const Hypermatrix& other) const;
    Hypermatrix subtract(const Hypermatrix& other) const;
    Hypermatrix hadamard(const Hypermatrix& other) const;
    /// Apply f to every entry.
    Hypermatrix map(const std::function<cplx(cplx)>& f) const;

    double norm_l2() const;
    double max_abs() const;
    double max_abs_diff(const Hypermatrix& other) const;
    bool approx_equal(const Hypermatrix& other, double tol = kDefaultTol) const;
    bool is_real(double tol = 0.0) const;

    bool operator==(const Hypermatrix& other) const = default;

private:
    void check_same_shape(const Hypermatrix& other, const char* op) const;
    void build_strides();

    Shape shape_;
    std::vector<std::size_t> strides_;
    std::vector<cplx> data_;
};

Hypermatrix transpose(const Hypermatrix& a);
Hypermatrix slice(const Hypermatrix& a, std::size_t axis, std::size_t t);
Hypermatrix hadamard_entrywise(const Hypermatrix& a, const Hypermatrix& b);
Hypermatrix conjugate(const Hypermatrix& a);
Hypermatrix scale(const Hypermatrix& a, cplx c);
Hypermatrix add(const Hypermatrix& a, const Hypermatrix& b);
double norm_l2(const Hypermatrix& a);
double max_abs_diff(const Hypermatrix& a, const Hypermatrix& b);

/// Stack blocks along `axis`; inverse of slicing every index of that axis.
Hypermatrix concatenate(const std::vector<Hypermatrix>& blocks, std::size_t axis);

inline Hypermatrix operator+(const Hypermatrix& a, const Hypermatrix& b) { return a.add(b); }
inline Hypermatrix operator-(const Hypermatrix& a, const Hypermatrix& b) { return a.subtract(b); }
inline Hypermatrix operator*(cplx c, const Hypermatrix& a) { return a.scale(c); }

}  // namespace hypermat
