#pragma once

// Quasideterminants over an arbitrary (possibly noncommutative) ring.
// All row/column indices are 0-based.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "asdym/ring_matrix.hpp"

namespace asdym {

/// |A|_{ij} = ((A^-1)_{ji})^-1.
/// Throws SingularMatrix when A is not invertible and NonInvertibleEntry when
/// (A^-1)_{ji} is not a unit, i.e. this quasideterminant does not exist.
template <RingElement T>
T quasidet(const Matrix<T>& a, std::size_t i, std::size_t j)
{
    if (i >= a.rows() || j >= a.cols()) throw IndexOutOfRange("quasidet index outside matrix");
    const Matrix<T> inv = ring_inverse(a);
    return ring_inverse_or_throw(inv(j, i), "quasideterminant undefined: (A^-1)_ji is not invertible");
}

/// Quasideterminant of the submatrix A[rows, cols] at the entry sitting in
/// row `r` and column `c` of A (both must be kept).
template <RingElement T>
T quasidet_of_sub(const Matrix<T>& a, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols,
                  std::size_t r, std::size_t c)
{
    const auto ri = std::find(rows.begin(), rows.end(), r);
    const auto ci = std::find(cols.begin(), cols.end(), c);
    if (ri == rows.end() || ci == cols.end()) throw IndexOutOfRange("boxed entry removed from submatrix");
    return quasidet(a.submatrix(rows, cols), static_cast<std::size_t>(ri - rows.begin()),
                    static_cast<std::size_t>(ci - cols.begin()));
}

/// Leibniz-formula determinant; commutative rings only, n <= 8.
template <RingElement T>
T leibniz_det(const Matrix<T>& a, const T& like)
{
    static_assert(ring_traits<T>::commutative, "determinant needs a commutative ring");
    if (!a.square()) throw ContextMismatch("determinant of a non-square matrix");
    const std::size_t n = a.rows();
    if (n == 0) return ring_traits<T>::one_like(like);
    if (n > 8) throw ContextMismatch("leibniz_det limited to n <= 8");
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    T total = ring_traits<T>::zero_like(like);
    do {
        // parity by counting inversions
        std::size_t inversions = 0;
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = x + 1; y < n; ++y)
                if (perm[x] > perm[y]) ++inversions;
        T term = a(0, perm[0]);
        for (std::size_t r = 1; r < n; ++r) term = term * a(r, perm[r]);
        total = (inversions % 2 == 0) ? T(total + term) : T(total - term);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

/// (-1)^{i+j} det A / det A^{ij}, the commutative oracle for quasidet.
template <RingElement T>
T quasidet_det_ratio(const Matrix<T>& a, std::size_t i, std::size_t j)
{
    static_assert(ring_traits<T>::commutative, "quasidet_det_ratio needs a commutative ring");
    if (!a.square() || a.empty()) throw ContextMismatch("quasidet_det_ratio needs a square matrix");
    if (i >= a.rows() || j >= a.cols()) throw IndexOutOfRange("quasidet_det_ratio index outside matrix");
    const T& like = a.sample();
    const T det = leibniz_det(a, like);
    const Matrix<T> minor = a.submatrix(complement(a.rows(), {i}), complement(a.cols(), {j}));
    const T det_minor = leibniz_det(minor, like);
    const T ratio = det * ring_inverse_or_throw(det_minor, "division by zero: det A^{ij} vanishes");
    return ((i + j) % 2 == 0) ? ratio : T(-ratio);
}

/// A[R,C] - A[R,C'] A[R',C']^-1 A[R',C], the quasideterminant with a
/// |R| x |C| block in the box. Reduces to quasidet for singletons.
template <RingElement T>
Matrix<T> block_quasidet(const Matrix<T>& a, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols)
{
    if (!a.square()) throw ContextMismatch("block_quasidet needs a square matrix");
    if (rows.size() != cols.size() || rows.empty()) throw ContextMismatch("block_quasidet needs |R| = |C| > 0");
    const auto rc = complement(a.rows(), rows);
    const auto cc = complement(a.cols(), cols);
    Matrix<T> corner = a.submatrix(rows, cols);
    if (rc.empty()) return corner;
    const Matrix<T> inner_inv = ring_inverse(a.submatrix(rc, cc));
    return corner - a.submatrix(rows, cc) * inner_inv * a.submatrix(rc, cols);
}

/// Chooses which two rows and columns play the roles of (f, i) in
///     | A B C |
///     | D f g |
///     | E h i |
/// Everything else forms A, B, C, D, E.
struct CornerPartition {
    std::size_t row_f, row_i, col_f, col_i;

    static CornerPartition last_two(std::size_t n) { return {n - 2, n - 1, n - 2, n - 1}; }
    void validate(std::size_t n) const
    {
        if (n < 2 || row_f == row_i || col_f == col_i || row_f >= n || row_i >= n || col_f >= n || col_i >= n)
            throw ContextMismatch("invalid corner partition");
    }
};

/// LHS - RHS of the QuasiJacobi identity
///   |M|_i = |A C; E i|_i - |A B; E h|_h |A B; D f|_f^-1 |A C; D g|_g.
/// Propagates SingularMatrix / NonInvertibleEntry when an inner
/// quasideterminant is undefined.
template <RingElement T>
T check_quasi_jacobi(const Matrix<T>& m, const CornerPartition& p)
{
    p.validate(m.rows());
    const std::size_t n = m.rows();
    const auto all_but = [n](std::size_t x) { return complement(n, {x}); };

    const T lhs = quasidet(m, p.row_i, p.col_i);
    const T t_i = quasidet_of_sub(m, all_but(p.row_f), all_but(p.col_f), p.row_i, p.col_i);
    const T t_h = quasidet_of_sub(m, all_but(p.row_f), all_but(p.col_i), p.row_i, p.col_f);
    const T t_f = quasidet_of_sub(m, all_but(p.row_i), all_but(p.col_i), p.row_f, p.col_f);
    const T t_g = quasidet_of_sub(m, all_but(p.row_i), all_but(p.col_f), p.row_f, p.col_i);
    const T t_f_inv = ring_inverse_or_throw(t_f, "QuasiJacobi pivot |A B; D f|_f is not invertible");
    return lhs - (t_i - t_h * t_f_inv * t_g);
}

template <RingElement T>
struct HomologicalResiduals {
    T row;
    T col;
};

/// Row and column homological relations:
///   |M|_h = |M|_i |A B C; D f g; 0 0 1|_{(row_i, col_f)}
///   |M|_g = |A B 0; D f 0; E h 1|_{(row_f, col_i)} |M|_i
template <RingElement T>
HomologicalResiduals<T> check_homological(const Matrix<T>& m, const CornerPartition& p)
{
    p.validate(m.rows());
    const std::size_t n = m.rows();
    const T& like = m.sample();
    const T zero = ring_traits<T>::zero_like(like);
    const T one = ring_traits<T>::one_like(like);

    const T box_i = quasidet(m, p.row_i, p.col_i);

    Matrix<T> row_aux = m;
    for (std::size_t j = 0; j < n; ++j) row_aux(p.row_i, j) = (j == p.col_i) ? one : zero;
    Matrix<T> col_aux = m;
    for (std::size_t r = 0; r < n; ++r) col_aux(r, p.col_i) = (r == p.row_i) ? one : zero;

    const T row_lhs = quasidet(m, p.row_i, p.col_f);
    const T row_rhs = box_i * quasidet(row_aux, p.row_i, p.col_f);
    const T col_lhs = quasidet(m, p.row_f, p.col_i);
    const T col_rhs = quasidet(col_aux, p.row_f, p.col_i) * box_i;
    return {row_lhs - row_rhs, col_lhs - col_rhs};
}

}  // namespace asdym
