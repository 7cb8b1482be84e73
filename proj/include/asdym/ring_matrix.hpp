#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "asdym/errors.hpp"
#include "asdym/ring.hpp"

namespace asdym {

/// Dense matrix over a ring. Entries share one ring instance (and, for jets
/// or nested matrices, one shape). Square matrices are themselves ring
/// elements, which is how noncommutative entries are modelled.
template <RingElement T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<T>> rows)
    {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw ContextMismatch("ragged matrix initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static Matrix identity(std::size_t n, const T& like)
    {
        Matrix m(n, n, ring_traits<T>::zero_like(like));
        for (std::size_t i = 0; i < n; ++i) m(i, i) = ring_traits<T>::one_like(like);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }
    bool empty() const { return data_.empty(); }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    T& at(std::size_t i, std::size_t j)
    {
        check(i, j);
        return (*this)(i, j);
    }
    const T& at(std::size_t i, std::size_t j) const
    {
        check(i, j);
        return (*this)(i, j);
    }

    /// Any entry, used as the shape template for identities.
    const T& sample() const
    {
        if (data_.empty()) throw ContextMismatch("empty matrix has no entry shape");
        return data_.front();
    }

    Matrix submatrix(const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) const
    {
        Matrix m;
        m.rows_ = rs.size();
        m.cols_ = cs.size();
        m.data_.reserve(m.rows_ * m.cols_);
        for (auto i : rs)
            for (auto j : cs) m.data_.push_back(at(i, j));
        return m;
    }

    template <class F>
    auto map(F&& f) const
    {
        using U = std::decay_t<decltype(f(std::declval<const T&>()))>;
        Matrix<U> m(rows_, cols_, f(sample()));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(i, j) = f((*this)(i, j));
        return m;
    }

    void swap_rows(std::size_t a, std::size_t b)
    {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }

    Matrix& operator+=(const Matrix& o)
    {
        same_dims(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] = data_[k] + o.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o)
    {
        same_dims(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] = data_[k] - o.data_[k];
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator-(Matrix a)
    {
        for (auto& x : a.data_) x = -x;
        return a;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        if (a.cols_ != b.rows_) throw ContextMismatch("matrix product dimension mismatch");
        if (a.cols_ == 0) throw ContextMismatch("matrix product over an empty inner dimension");
        Matrix m(a.rows_, b.cols_, ring_traits<T>::zero_like(a.sample()));
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                for (std::size_t j = 0; j < b.cols_; ++j) m(i, j) = m(i, j) + aik * b(k, j);
            }
        return m;
    }
    /// Left scalar action, entrywise s * a_ij.
    friend Matrix scale(const T& s, Matrix a)
    {
        for (auto& x : a.data_) x = s * x;
        return a;
    }
    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    const std::vector<T>& entries() const { return data_; }

private:
    void check(std::size_t i, std::size_t j) const
    {
        if (i >= rows_ || j >= cols_)
            throw IndexOutOfRange("matrix index (" + std::to_string(i) + "," + std::to_string(j) + ") outside " +
                                  std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    void same_dims(const Matrix& o) const
    {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw ContextMismatch("matrix dimension mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

template <RingElement T>
Matrix<T> ring_inverse(const Matrix<T>& a);

template <RingElement T>
struct ring_traits<Matrix<T>> {
    static constexpr bool exact = ring_traits<T>::exact;
    static constexpr bool commutative = false;
    static Matrix<T> zero_like(const Matrix<T>& x)
    {
        return Matrix<T>(x.rows(), x.cols(), ring_traits<T>::zero_like(x.sample()));
    }
    static Matrix<T> one_like(const Matrix<T>& x) { return Matrix<T>::identity(x.rows(), x.sample()); }
    static bool is_zero(const Matrix<T>& x)
    {
        return std::all_of(x.entries().begin(), x.entries().end(),
                           [](const T& e) { return ring_traits<T>::is_zero(e); });
    }
    static std::optional<Matrix<T>> try_inverse(const Matrix<T>& x)
    {
        try {
            return ring_inverse(x);
        } catch (const SingularMatrix&) {
            return std::nullopt;
        }
    }
    static double magnitude(const Matrix<T>& x)
    {
        double m = 0.0;
        for (const auto& e : x.entries()) m = std::max(m, ring_traits<T>::magnitude(e));
        return m;
    }
};

/// Noncommutative Gauss-Jordan elimination. Rows are combined by left
/// multiplication only, so the result is a genuine inverse over any ring
/// whose pivots are units. Exact rings take the first invertible pivot in
/// row order; floating rings take the invertible pivot of largest magnitude.
template <RingElement T>
Matrix<T> ring_inverse(const Matrix<T>& a)
{
    using R = ring_traits<T>;
    if (!a.square() || a.empty()) throw ContextMismatch("ring_inverse needs a non-empty square matrix");
    const std::size_t n = a.rows();
    Matrix<T> w = a;
    Matrix<T> inv = Matrix<T>::identity(n, a.sample());
    std::vector<std::size_t> trace;

    for (std::size_t k = 0; k < n; ++k) {
        std::optional<std::size_t> pivot;
        std::optional<T> pivot_inv;
        if constexpr (R::exact) {
            for (std::size_t r = k; r < n && !pivot; ++r) {
                if (auto p = R::try_inverse(w(r, k))) {
                    pivot = r;
                    pivot_inv = std::move(p);
                }
            }
        } else {
            std::vector<std::size_t> order(n - k);
            std::iota(order.begin(), order.end(), k);
            std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
                return R::magnitude(w(x, k)) > R::magnitude(w(y, k));
            });
            for (auto r : order) {
                if (auto p = R::try_inverse(w(r, k))) {
                    pivot = r;
                    pivot_inv = std::move(p);
                    break;
                }
            }
        }
        if (!pivot)
            throw SingularMatrix("no invertible pivot in column " + std::to_string(k), k, trace);
        trace.push_back(*pivot);
        w.swap_rows(k, *pivot);
        inv.swap_rows(k, *pivot);
        for (std::size_t j = 0; j < n; ++j) {
            w(k, j) = *pivot_inv * w(k, j);
            inv(k, j) = *pivot_inv * inv(k, j);
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            const T f = w(i, k);
            if (R::is_zero(f)) continue;
            for (std::size_t j = 0; j < n; ++j) {
                w(i, j) = w(i, j) - f * w(k, j);
                inv(i, j) = inv(i, j) - f * inv(k, j);
            }
        }
    }
    return inv;
}

/// Every index in [0, n) that is not in `drop`, in increasing order.
inline std::vector<std::size_t> complement(std::size_t n, const std::vector<std::size_t>& drop)
{
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i)
        if (std::find(drop.begin(), drop.end(), i) == drop.end()) keep.push_back(i);
    return keep;
}

}  // namespace asdym
