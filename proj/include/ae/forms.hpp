// Dense multilinear algebra on a small fixed-dimension fiber (dimension 7 for
// the tractor fiber; 5 and 6 appear for tangent-level and orthogonal-subspace
// work).  K-forms are stored on strictly increasing multi-indices; a small
// dense Tensor type backs the non-antisymmetric contraction identities.
//
// Conventions fixed here and relied on throughout:
//   * wedge uses the shuffle convention, so (e^I)(E_I) = 1 and
//     e^I ^ e^J = sign(merge) e^{sorted(I u J)};
//   * hook is (v . a)(w_2..w_k) = a(v, w_2..w_k);
//   * antisymmetrization carries weight 1/k!;
//   * hodge_star(H, vol, a) is defined by b ^ *a = <b,a>_H vol with
//     <e^I, e^J>_H = det(H^{i_a j_b}).
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ae/scalar.hpp"

namespace ae {

// --------------------------------------------------------------------------
// Multi-index utilities (indices are 0-based internally).

inline long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

// Rank of a strictly increasing multi-index within the colex/lex enumeration.
// We use lexicographic enumeration of increasing k-subsets of {0..n-1}.
inline long subset_rank(int n, const std::vector<int>& idx) {
    long r = 0;
    int k = static_cast<int>(idx.size());
    int prev = -1;
    for (int pos = 0; pos < k; ++pos) {
        for (int v = prev + 1; v < idx[pos]; ++v) r += binomial(n - 1 - v, k - 1 - pos);
        prev = idx[pos];
    }
    return r;
}

inline std::vector<int> subset_unrank(int n, int k, long rank) {
    std::vector<int> idx(k);
    int prev = -1;
    for (int pos = 0; pos < k; ++pos) {
        for (int v = prev + 1;; ++v) {
            long c = binomial(n - 1 - v, k - 1 - pos);
            if (rank < c) {
                idx[pos] = v;
                prev = v;
                break;
            }
            rank -= c;
        }
    }
    return idx;
}

// Sorts idx in place; returns +1/-1 for the permutation parity, 0 if a repeat.
inline int sort_with_sign(std::vector<int>& idx) {
    int sign = 1;
    for (size_t i = 1; i < idx.size(); ++i) {
        size_t j = i;
        while (j > 0 && idx[j - 1] > idx[j]) {
            std::swap(idx[j - 1], idx[j]);
            sign = -sign;
            --j;
        }
        if (j > 0 && idx[j - 1] == idx[j]) return 0;
    }
    return sign;
}

// Enumerates all increasing k-subsets of {0..n-1}.
inline std::vector<std::vector<int>> increasing_subsets(int n, int k) {
    std::vector<std::vector<int>> out;
    long c = binomial(n, k);
    out.reserve(c);
    for (long r = 0; r < c; ++r) out.push_back(subset_unrank(n, k, r));
    return out;
}

// --------------------------------------------------------------------------
// Vec / SymMatrix / Matrix over a generic scalar.

template <typename T>
struct Vec {
    std::vector<T> comp;

    Vec() = default;
    explicit Vec(int n) : comp(n, ScalarTraits<T>::zero()) {}
    explicit Vec(std::vector<T> c) : comp(std::move(c)) {}

    int dim() const { return static_cast<int>(comp.size()); }
    const T& operator[](int i) const { return comp[i]; }
    T& operator[](int i) { return comp[i]; }

    // Basis vector E_label with 1-based label, matching the fiber basis names.
    static Vec basis(int n, int label) {
        Vec v(n);
        v[label - 1] = ScalarTraits<T>::one();
        return v;
    }

    bool is_zero() const {
        for (const T& c : comp)
            if (!ScalarTraits<T>::is_zero(c)) return false;
        return true;
    }

    friend Vec operator+(const Vec& x, const Vec& y) {
        Vec r(x.dim());
        for (int i = 0; i < x.dim(); ++i) r[i] = x[i] + y[i];
        return r;
    }
    friend Vec operator-(const Vec& x, const Vec& y) {
        Vec r(x.dim());
        for (int i = 0; i < x.dim(); ++i) r[i] = x[i] - y[i];
        return r;
    }
    friend Vec operator-(const Vec& x) {
        Vec r(x.dim());
        for (int i = 0; i < x.dim(); ++i) r[i] = -x[i];
        return r;
    }
    friend Vec operator*(const T& s, const Vec& x) {
        Vec r(x.dim());
        for (int i = 0; i < x.dim(); ++i) r[i] = s * x[i];
        return r;
    }
    friend bool operator==(const Vec& x, const Vec& y) { return x.comp == y.comp; }
};

template <typename T>
struct Matrix {
    int rows = 0, cols = 0;
    std::vector<T> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, ScalarTraits<T>::zero()) {}

    const T& operator()(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }
    T& operator()(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = ScalarTraits<T>::one();
        return m;
    }

    Matrix transpose() const {
        Matrix m(cols, rows);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m(j, i) = (*this)(i, j);
        return m;
    }

    friend Matrix operator+(const Matrix& x, const Matrix& y) {
        Matrix r(x.rows, x.cols);
        for (size_t i = 0; i < r.data.size(); ++i) r.data[i] = x.data[i] + y.data[i];
        return r;
    }
    friend Matrix operator-(const Matrix& x, const Matrix& y) {
        Matrix r(x.rows, x.cols);
        for (size_t i = 0; i < r.data.size(); ++i) r.data[i] = x.data[i] - y.data[i];
        return r;
    }
    friend Matrix operator-(const Matrix& x) {
        Matrix r(x.rows, x.cols);
        for (size_t i = 0; i < r.data.size(); ++i) r.data[i] = -x.data[i];
        return r;
    }
    friend Matrix operator*(const T& s, const Matrix& x) {
        Matrix r(x.rows, x.cols);
        for (size_t i = 0; i < r.data.size(); ++i) r.data[i] = s * x.data[i];
        return r;
    }
    friend Matrix operator*(const Matrix& x, const Matrix& y) {
        Matrix r(x.rows, y.cols);
        for (int i = 0; i < x.rows; ++i)
            for (int k = 0; k < x.cols; ++k) {
                const T& xv = x(i, k);
                if (ScalarTraits<T>::is_zero(xv)) continue;
                for (int j = 0; j < y.cols; ++j) r(i, j) += xv * y(k, j);
            }
        return r;
    }
    friend Vec<T> operator*(const Matrix& m, const Vec<T>& v) {
        Vec<T> r(m.rows);
        for (int i = 0; i < m.rows; ++i)
            for (int j = 0; j < m.cols; ++j) r[i] += m(i, j) * v[j];
        return r;
    }
    friend bool operator==(const Matrix& x, const Matrix& y) {
        return x.rows == y.rows && x.cols == y.cols && x.data == y.data;
    }

    bool is_zero() const {
        for (const T& c : data)
            if (!ScalarTraits<T>::is_zero(c)) return false;
        return true;
    }
};

// Gaussian elimination rank over an exact field (also used for double with an
// explicit pivot threshold).
template <typename T>
int matrix_rank(Matrix<T> m, double eps = 0.0) {
    int rank = 0;
    auto nonzero = [&](const T& x) {
        if constexpr (ScalarTraits<T>::exact)
            return !ScalarTraits<T>::is_zero(x);
        else
            return std::abs(ScalarTraits<T>::to_double(x)) > eps;
    };
    for (int col = 0; col < m.cols && rank < m.rows; ++col) {
        int piv = -1;
        for (int r = rank; r < m.rows; ++r)
            if (nonzero(m(r, col))) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        for (int j = 0; j < m.cols; ++j) std::swap(m.data[static_cast<size_t>(piv) * m.cols + j],
                                                   m.data[static_cast<size_t>(rank) * m.cols + j]);
        for (int r = 0; r < m.rows; ++r) {
            if (r == rank || !nonzero(m(r, col))) continue;
            T f = m(r, col) / m(rank, col);
            for (int j = 0; j < m.cols; ++j) m(r, j) = m(r, j) - f * m(rank, j);
        }
        ++rank;
    }
    return rank;
}

// Nullspace basis (columns of the returned vectors) of m x over exact scalars.
template <typename T>
std::vector<Vec<T>> nullspace(Matrix<T> m) {
    static_assert(ScalarTraits<T>::exact, "nullspace requires the exact backend");
    int rows = m.rows, cols = m.cols;
    std::vector<int> pivot_col;
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (!ScalarTraits<T>::is_zero(m(r, col))) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        for (int j = 0; j < cols; ++j)
            std::swap(m.data[static_cast<size_t>(piv) * cols + j],
                      m.data[static_cast<size_t>(rank) * cols + j]);
        T inv = ScalarTraits<T>::one() / m(rank, col);
        for (int j = 0; j < cols; ++j) m(rank, j) = inv * m(rank, j);
        for (int r = 0; r < rows; ++r) {
            if (r == rank || ScalarTraits<T>::is_zero(m(r, col))) continue;
            T f = m(r, col);
            for (int j = 0; j < cols; ++j) m(r, j) = m(r, j) - f * m(rank, j);
        }
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivot_col) is_pivot[c] = true;
    std::vector<Vec<T>> basis;
    for (int free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        Vec<T> v(cols);
        v[free] = ScalarTraits<T>::one();
        for (int r = 0; r < rank; ++r) v[pivot_col[r]] = -m(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Signature (p, q) of a symmetric matrix via congruence diagonalization.
// Exact over ExactScalar; for double, |pivot| <= eps counts as zero.
template <typename T>
std::pair<int, int> signature(Matrix<T> m, double eps = 1e-12) {
    int n = m.rows;
    int pos = 0, neg = 0;
    auto sgn = [&](const T& x) {
        if constexpr (ScalarTraits<T>::exact)
            return ScalarTraits<T>::sign(x);
        else {
            double v = ScalarTraits<T>::to_double(x);
            return std::abs(v) <= eps ? 0 : (v > 0 ? 1 : -1);
        }
    };
    for (int k = 0; k < n; ++k) {
        if (sgn(m(k, k)) == 0) {
            // Find a usable pivot: swap in a nonzero diagonal, or mix rows to
            // create one from an off-diagonal entry.
            int dsw = -1, oi = -1, oj = -1;
            for (int i = k; i < n && dsw < 0; ++i)
                if (sgn(m(i, i)) != 0) dsw = i;
            if (dsw < 0) {
                for (int i = k; i < n && oi < 0; ++i)
                    for (int j = i + 1; j < n; ++j)
                        if (sgn(m(i, j)) != 0) {
                            oi = i;
                            oj = j;
                            break;
                        }
                if (oi < 0) break;  // remaining block is zero
                // v_i <- v_i + v_j makes the (i,i) entry 2 m(i,j).
                for (int c = 0; c < n; ++c) m(oi, c) = m(oi, c) + m(oj, c);
                for (int r = 0; r < n; ++r) m(r, oi) = m(r, oi) + m(r, oj);
                dsw = oi;
            }
            if (dsw != k) {
                for (int c = 0; c < n; ++c) std::swap(m(dsw, c), m(k, c));
                for (int r = 0; r < n; ++r) std::swap(m(r, dsw), m(r, k));
            }
        }
        int s = sgn(m(k, k));
        if (s == 0) continue;
        if (s > 0)
            ++pos;
        else
            ++neg;
        for (int r = k + 1; r < n; ++r) {
            if (sgn(m(r, k)) == 0) continue;
            T f = m(r, k) / m(k, k);
            for (int c = 0; c < n; ++c) m(r, c) = m(r, c) - f * m(k, c);
            for (int c = 0; c < n; ++c) m(c, r) = m(c, r) - f * m(c, k);
        }
    }
    return {pos, neg};
}

template <typename T>
Matrix<T> matrix_inverse(const Matrix<T>& m) {
    int n = m.rows;
    Matrix<T> a = m, inv = Matrix<T>::identity(n);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        if constexpr (ScalarTraits<T>::exact) {
            for (int r = col; r < n; ++r)
                if (!ScalarTraits<T>::is_zero(a(r, col))) {
                    piv = r;
                    break;
                }
        } else {
            double best = 0;
            for (int r = col; r < n; ++r) {
                double v = std::abs(ScalarTraits<T>::to_double(a(r, col)));
                if (v > best) {
                    best = v;
                    piv = r;
                }
            }
        }
        if (piv < 0) throw std::domain_error("matrix_inverse: singular matrix");
        for (int j = 0; j < n; ++j) {
            std::swap(a.data[static_cast<size_t>(piv) * n + j], a.data[static_cast<size_t>(col) * n + j]);
            std::swap(inv.data[static_cast<size_t>(piv) * n + j], inv.data[static_cast<size_t>(col) * n + j]);
        }
        T d = ScalarTraits<T>::one() / a(col, col);
        for (int j = 0; j < n; ++j) {
            a(col, j) = d * a(col, j);
            inv(col, j) = d * inv(col, j);
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || ScalarTraits<T>::is_zero(a(r, col))) continue;
            T f = a(r, col);
            for (int j = 0; j < n; ++j) {
                a(r, j) = a(r, j) - f * a(col, j);
                inv(r, j) = inv(r, j) - f * inv(col, j);
            }
        }
    }
    return inv;
}

// --------------------------------------------------------------------------
// KForm: fully antisymmetric degree-k tensor on an n-dimensional fiber.

template <typename T>
struct KForm {
    int n = 7;
    int degree = 0;
    std::vector<T> comp;  // indexed by subset_rank over increasing multi-indices

    KForm() : comp(1, ScalarTraits<T>::zero()) {}
    KForm(int n_, int k) : n(n_), degree(k), comp(binomial(n_, k), ScalarTraits<T>::zero()) {}

    static KForm zero(int n, int k) { return KForm(n, k); }

    // Basis form e^{i1..ik} with 1-based labels.
    static KForm basis(int n, std::initializer_list<int> labels) {
        std::vector<int> idx;
        for (int l : labels) idx.push_back(l - 1);
        int sgn = sort_with_sign(idx);
        KForm f(n, static_cast<int>(idx.size()));
        if (sgn != 0) f.comp[subset_rank(n, idx)] = (sgn > 0) ? ScalarTraits<T>::one() : -ScalarTraits<T>::one();
        return f;
    }

    bool is_zero() const {
        for (const T& c : comp)
            if (!ScalarTraits<T>::is_zero(c)) return false;
        return true;
    }

    // Component with arbitrary (0-based) index tuple; antisymmetry applied.
    T component(std::vector<int> idx) const {
        int sgn = sort_with_sign(idx);
        if (sgn == 0) return ScalarTraits<T>::zero();
        const T& c = comp[subset_rank(n, idx)];
        return sgn > 0 ? c : -c;
    }

    // Coefficient access on increasing 1-based labels.
    T coeff(std::initializer_list<int> labels) const {
        std::vector<int> idx;
        for (int l : labels) idx.push_back(l - 1);
        return component(std::move(idx));
    }
    void set_coeff(std::initializer_list<int> labels, const T& v) {
        std::vector<int> idx;
        for (int l : labels) idx.push_back(l - 1);
        int sgn = sort_with_sign(idx);
        if (sgn == 0) throw std::invalid_argument("KForm: repeated index in set_coeff");
        comp[subset_rank(n, idx)] = sgn > 0 ? v : -v;
    }

    friend KForm operator+(const KForm& x, const KForm& y) {
        require_same(x, y);
        KForm r = x;
        for (size_t i = 0; i < r.comp.size(); ++i) r.comp[i] += y.comp[i];
        return r;
    }
    friend KForm operator-(const KForm& x, const KForm& y) {
        require_same(x, y);
        KForm r = x;
        for (size_t i = 0; i < r.comp.size(); ++i) r.comp[i] -= y.comp[i];
        return r;
    }
    friend KForm operator-(const KForm& x) {
        KForm r = x;
        for (T& c : r.comp) c = -c;
        return r;
    }
    friend KForm operator*(const T& s, const KForm& x) {
        KForm r = x;
        for (T& c : r.comp) c = s * c;
        return r;
    }
    friend bool operator==(const KForm& x, const KForm& y) {
        return x.n == y.n && x.degree == y.degree && x.comp == y.comp;
    }

    KForm& operator+=(const KForm& o) { return *this = *this + o; }
    KForm& operator-=(const KForm& o) { return *this = *this - o; }

    static void require_same(const KForm& x, const KForm& y) {
        if (x.n != y.n || x.degree != y.degree)
            throw std::invalid_argument("KForm: dimension/degree mismatch");
    }
};

template <typename T>
KForm<T> wedge(const KForm<T>& a, const KForm<T>& b) {
    if (a.n != b.n) throw std::invalid_argument("wedge: fiber dimension mismatch");
    if (a.degree + b.degree > a.n)
        return KForm<T>::zero(a.n, 0);  // conventionally zero beyond top degree
    KForm<T> r(a.n, a.degree + b.degree);
    auto as = increasing_subsets(a.n, a.degree);
    auto bs = increasing_subsets(b.n, b.degree);
    for (size_t ia = 0; ia < as.size(); ++ia) {
        if (ScalarTraits<T>::is_zero(a.comp[ia])) continue;
        for (size_t ib = 0; ib < bs.size(); ++ib) {
            if (ScalarTraits<T>::is_zero(b.comp[ib])) continue;
            std::vector<int> merged = as[ia];
            merged.insert(merged.end(), bs[ib].begin(), bs[ib].end());
            int sgn = sort_with_sign(merged);
            if (sgn == 0) continue;
            T term = a.comp[ia] * b.comp[ib];
            long rank = subset_rank(r.n, merged);
            r.comp[rank] += (sgn > 0) ? term : -term;
        }
    }
    return r;
}

template <typename T>
KForm<T> hook(const Vec<T>& v, const KForm<T>& a) {
    if (a.degree < 1) throw std::invalid_argument("hook: degree must be >= 1");
    KForm<T> r(a.n, a.degree - 1);
    auto subsets = increasing_subsets(a.n, a.degree);
    for (size_t s = 0; s < subsets.size(); ++s) {
        if (ScalarTraits<T>::is_zero(a.comp[s])) continue;
        const auto& idx = subsets[s];
        for (int pos = 0; pos < a.degree; ++pos) {
            const T& vc = v[idx[pos]];
            if (ScalarTraits<T>::is_zero(vc)) continue;
            std::vector<int> rest;
            rest.reserve(a.degree - 1);
            for (int q = 0; q < a.degree; ++q)
                if (q != pos) rest.push_back(idx[q]);
            T term = vc * a.comp[s];
            if (pos % 2 != 0) term = -term;
            r.comp[subset_rank(r.n, rest)] += term;
        }
    }
    return r;
}

// --------------------------------------------------------------------------
// Dense Tensor of general (covariant) valence on the same fiber, for the
// contraction identities that are not antisymmetric in all slots.

template <typename T>
struct Tensor {
    int n = 7;
    int rank = 0;
    std::vector<T> data;  // row-major over rank indices, each 0..n-1

    Tensor() : data(1, ScalarTraits<T>::zero()) {}
    Tensor(int n_, int rank_) : n(n_), rank(rank_) {
        size_t size = 1;
        for (int i = 0; i < rank_; ++i) size *= n_;
        data.assign(size, ScalarTraits<T>::zero());
    }

    size_t flat(const std::vector<int>& idx) const {
        size_t f = 0;
        for (int i : idx) f = f * n + i;
        return f;
    }
    const T& at(const std::vector<int>& idx) const { return data[flat(idx)]; }
    T& at(const std::vector<int>& idx) { return data[flat(idx)]; }

    bool is_zero() const {
        for (const T& c : data)
            if (!ScalarTraits<T>::is_zero(c)) return false;
        return true;
    }

    friend Tensor operator+(const Tensor& x, const Tensor& y) {
        Tensor r = x;
        for (size_t i = 0; i < r.data.size(); ++i) r.data[i] += y.data[i];
        return r;
    }
    friend Tensor operator-(const Tensor& x, const Tensor& y) {
        Tensor r = x;
        for (size_t i = 0; i < r.data.size(); ++i) r.data[i] -= y.data[i];
        return r;
    }
    friend Tensor operator*(const T& s, const Tensor& x) {
        Tensor r = x;
        for (T& c : r.data) c = s * c;
        return r;
    }

    // Iterate over all index tuples.
    template <typename F>
    void for_each(F&& f) const {
        std::vector<int> idx(rank, 0);
        for (size_t flat_i = 0; flat_i < data.size(); ++flat_i) {
            f(idx, data[flat_i]);
            for (int p = rank - 1; p >= 0; --p) {
                if (++idx[p] < n) break;
                idx[p] = 0;
            }
        }
    }
};

template <typename T>
Tensor<T> tensor_from_form(const KForm<T>& a) {
    Tensor<T> t(a.n, a.degree);
    std::vector<int> idx(a.degree, 0);
    for (size_t flat_i = 0; flat_i < t.data.size(); ++flat_i) {
        t.data[flat_i] = a.component(idx);
        for (int p = a.degree - 1; p >= 0; --p) {
            if (++idx[p] < a.n) break;
            idx[p] = 0;
        }
    }
    return t;
}

// Full antisymmetrization with weight 1/k!, returned as a KForm.
template <typename T>
KForm<T> antisymmetrize(const Tensor<T>& t) {
    KForm<T> r(t.n, t.rank);
    auto subsets = increasing_subsets(t.n, t.rank);
    T fact = ScalarTraits<T>::one();
    for (int i = 2; i <= t.rank; ++i) fact = ScalarTraits<T>::from_fraction(i, 1) * fact;
    for (size_t s = 0; s < subsets.size(); ++s) {
        std::vector<int> perm = subsets[s];
        T acc = ScalarTraits<T>::zero();
        // Sum over permutations of the increasing representative.
        std::vector<int> p = perm;
        std::sort(p.begin(), p.end());
        do {
            // parity of p relative to sorted order
            std::vector<int> q = p;
            int sgn = sort_with_sign(q);
            T v = t.at(p);
            acc += (sgn > 0) ? v : -v;
        } while (std::next_permutation(p.begin(), p.end()));
        r.comp[s] = acc / fact;
    }
    return r;
}

// --------------------------------------------------------------------------
// Metric operations.

// Inner product of increasing multi-indices: det of the Hinv minor.
template <typename T>
T form_inner_basis(const Matrix<T>& Hinv, const std::vector<int>& I, const std::vector<int>& J) {
    int k = static_cast<int>(I.size());
    if (k == 0) return ScalarTraits<T>::one();
    Matrix<T> m(k, k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) m(a, b) = Hinv(I[a], J[b]);
    // Determinant by elimination (k <= 7).
    T det = ScalarTraits<T>::one();
    for (int col = 0; col < k; ++col) {
        // Pivot on the entry of largest magnitude: for the jet backend a
        // nonzero element can still have vanishing leading part, which would
        // poison the elimination.  If every candidate pivot has vanishing
        // leading part the determinant's leading part vanishes too, and the
        // minor is reported as zero.
        int piv = -1;
        double best = 0.0;
        for (int r = col; r < k; ++r) {
            if (ScalarTraits<T>::is_zero(m(r, col))) continue;
            double mag = std::abs(ScalarTraits<T>::to_double(m(r, col)));
            if (piv < 0 || mag > best) {
                piv = r;
                best = mag;
            }
        }
        if (piv < 0 || best == 0.0) return ScalarTraits<T>::zero();
        if (piv != col) {
            for (int j = 0; j < k; ++j) std::swap(m.data[static_cast<size_t>(piv) * k + j],
                                                  m.data[static_cast<size_t>(col) * k + j]);
            det = -det;
        }
        det *= m(col, col);
        for (int r = col + 1; r < k; ++r) {
            if (ScalarTraits<T>::is_zero(m(r, col))) continue;
            T f = m(r, col) / m(col, col);
            for (int j = col; j < k; ++j) m(r, j) = m(r, j) - f * m(col, j);
        }
    }
    return det;
}

template <typename T>
T form_inner(const Matrix<T>& Hinv, const KForm<T>& a, const KForm<T>& b) {
    KForm<T>::require_same(a, b);
    auto subsets = increasing_subsets(a.n, a.degree);
    T acc = ScalarTraits<T>::zero();
    for (size_t i = 0; i < subsets.size(); ++i) {
        if (ScalarTraits<T>::is_zero(a.comp[i])) continue;
        for (size_t j = 0; j < subsets.size(); ++j) {
            if (ScalarTraits<T>::is_zero(b.comp[j])) continue;
            acc += a.comp[i] * b.comp[j] * form_inner_basis(Hinv, subsets[i], subsets[j]);
        }
    }
    return acc;
}

template <typename T>
Vec<T> raise_covector(const Matrix<T>& Hinv, const KForm<T>& a) {
    if (a.degree != 1) throw std::invalid_argument("raise_covector: degree-1 form expected");
    Vec<T> v(a.n);
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) v[i] += Hinv(i, j) * a.comp[j];
    return v;
}

template <typename T>
KForm<T> lower_vector(const Matrix<T>& H, const Vec<T>& v) {
    KForm<T> a(v.dim(), 1);
    for (int i = 0; i < v.dim(); ++i)
        for (int j = 0; j < v.dim(); ++j) a.comp[i] += H(i, j) * v[j];
    return a;
}

// Hodge star: b ^ *a = <b,a>_H vol for every b of the same degree as a.
template <typename T>
KForm<T> hodge_star(const Matrix<T>& H, const KForm<T>& vol, const KForm<T>& a) {
    int n = a.n;
    if (vol.degree != n || vol.is_zero())
        throw std::invalid_argument("hodge_star: invalid volume form");
    Matrix<T> Hinv = matrix_inverse(H);
    const T& vol_c = vol.comp[0];
    KForm<T> r(n, n - a.degree);
    auto subsets = increasing_subsets(n, a.degree);
    for (size_t i = 0; i < subsets.size(); ++i) {
        const auto& I = subsets[i];
        std::vector<int> compl_idx;
        compl_idx.reserve(n - a.degree);
        {
            std::vector<bool> used(n, false);
            for (int v : I) used[v] = true;
            for (int v = 0; v < n; ++v)
                if (!used[v]) compl_idx.push_back(v);
        }
        // sign of e^I ^ e^{comp(I)} relative to e^{1..n}
        std::vector<int> full = I;
        full.insert(full.end(), compl_idx.begin(), compl_idx.end());
        int sgn = sort_with_sign(full);
        // <e^I, a>_H
        T inner = ScalarTraits<T>::zero();
        auto same = increasing_subsets(n, a.degree);
        for (size_t j = 0; j < same.size(); ++j) {
            if (ScalarTraits<T>::is_zero(a.comp[j])) continue;
            inner += a.comp[j] * form_inner_basis(Hinv, I, same[j]);
        }
        T val = inner * vol_c;
        r.comp[subset_rank(n, compl_idx)] = (sgn > 0) ? val : -val;
    }
    return r;
}

}  // namespace ae
