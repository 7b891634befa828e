#include "diraclab/linalg.hpp"

#include <algorithm>

namespace diraclab {

Mat::Mat(std::size_t rows, std::size_t cols, std::vector<Q> entries)
    : r_(rows), c_(cols), a_(std::move(entries)) {
    if (a_.size() != r_ * c_) throw DimensionError("matrix entry count does not match shape");
}

Mat::Mat(std::initializer_list<std::initializer_list<Q>> rows) {
    r_ = rows.size();
    c_ = r_ ? rows.begin()->size() : 0;
    a_.reserve(r_ * c_);
    for (const auto& row : rows) {
        if (row.size() != c_) throw DimensionError("ragged matrix literal");
        for (const auto& x : row) a_.push_back(x);
    }
}

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Mat Mat::from_columns(std::size_t rows, const std::vector<Vec>& cols) {
    Mat m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != rows) throw DimensionError("column length mismatch");
        for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
}

Mat Mat::from_rows(std::size_t cols, const std::vector<Vec>& rows) {
    Mat m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw DimensionError("row length mismatch");
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Vec Mat::row(std::size_t i) const { return Vec(a_.begin() + i * c_, a_.begin() + (i + 1) * c_); }

Vec Mat::col(std::size_t j) const {
    Vec v(r_);
    for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
    return v;
}

Mat Mat::transpose() const {
    Mat t(c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool Mat::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const Q& x) { return sgn(x) == 0; });
}

Mat Mat::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > r_ || c0 + nc > c_) throw DimensionError("block out of range");
    Mat b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
}

void Mat::set_block(std::size_t r0, std::size_t c0, const Mat& b) {
    if (r0 + b.rows() > r_ || c0 + b.cols() > c_) throw DimensionError("block out of range");
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows()) throw DimensionError("matrix product shape mismatch");
    Mat c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (sgn(a(i, k)) == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
        }
    return c;
}

Vec operator*(const Mat& a, const Vec& v) {
    if (a.cols() != v.size()) throw DimensionError("matrix-vector shape mismatch");
    Vec out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * v[j];
    return out;
}

Mat operator+(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("matrix sum shape mismatch");
    Mat c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

Mat operator-(const Mat& a, const Mat& b) { return a + (-b); }

Mat operator-(const Mat& a) { return Q(-1) * a; }

Mat operator*(const Q& s, const Mat& a) {
    Mat c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
    return c;
}

Vec operator+(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionError("vector sum length mismatch");
    Vec c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}

Vec operator-(const Vec& a, const Vec& b) { return a + (-b); }

Vec operator-(const Vec& a) { return Q(-1) * a; }

Vec operator*(const Q& s, const Vec& a) {
    Vec c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = s * a[i];
    return c;
}

Q dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionError("dot length mismatch");
    Q s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

bool is_zero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](const Q& x) { return sgn(x) == 0; });
}

Vec unit_vec(std::size_t n, std::size_t i) {
    Vec v(n);
    v.at(i) = 1;
    return v;
}

Vec concat(const Vec& a, const Vec& b) {
    Vec c(a);
    c.insert(c.end(), b.begin(), b.end());
    return c;
}

Vec slice(const Vec& v, std::size_t from, std::size_t len) {
    if (from + len > v.size()) throw DimensionError("slice out of range");
    return Vec(v.begin() + from, v.begin() + from + len);
}

Mat hstack(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows()) throw DimensionError("hstack row mismatch");
    Mat c(a.rows(), a.cols() + b.cols());
    c.set_block(0, 0, a);
    c.set_block(0, a.cols(), b);
    return c;
}

Mat vstack(const Mat& a, const Mat& b) {
    if (a.cols() != b.cols()) throw DimensionError("vstack column mismatch");
    Mat c(a.rows() + b.rows(), a.cols());
    c.set_block(0, 0, a);
    c.set_block(a.rows(), 0, b);
    return c;
}

Mat block_diag(const Mat& a, const Mat& b) {
    Mat c(a.rows() + b.rows(), a.cols() + b.cols());
    c.set_block(0, 0, a);
    c.set_block(a.rows(), a.cols(), b);
    return c;
}

std::vector<std::size_t> rref(Mat& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t p = row;
        while (p < m.rows() && sgn(m(p, col)) == 0) ++p;
        if (p == m.rows()) continue;
        if (p != row)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
        Q inv = 1 / m(row, col);
        for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || sgn(m(i, col)) == 0) continue;
            Q f = m(i, col);
            for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

std::size_t rank(const Mat& m) {
    Mat c(m);
    return rref(c).size();
}

Subspace Subspace::full(std::size_t n) {
    Subspace s(n);
    s.b_ = Mat::identity(n);
    return s;
}

std::vector<Vec> Subspace::vectors() const {
    std::vector<Vec> out;
    out.reserve(dim());
    for (std::size_t i = 0; i < dim(); ++i) out.push_back(b_.row(i));
    return out;
}

bool Subspace::contains(const Vec& v) const {
    if (v.size() != n_) throw DimensionError("membership test in wrong ambient space");
    // Reduce v against the echelon basis using its pivots.
    Vec r(v);
    for (std::size_t i = 0; i < b_.rows(); ++i) {
        std::size_t p = 0;
        while (sgn(b_(i, p)) == 0) ++p;
        if (sgn(r[p]) == 0) continue;
        Q f = r[p];
        for (std::size_t j = p; j < n_; ++j) r[j] -= f * b_(i, j);
    }
    return is_zero(r);
}

bool Subspace::contains(const Subspace& s) const {
    if (s.n_ != n_) throw DimensionError("containment test across ambient spaces");
    for (std::size_t i = 0; i < s.dim(); ++i)
        if (!contains(s.b_.row(i))) return false;
    return true;
}

Subspace row_space(const Mat& m) {
    Mat c(m);
    std::size_t k = rref(c).size();
    Subspace s(m.cols());
    s.b_ = c.block(0, 0, k, m.cols());
    return s;
}

Subspace canonicalize(std::size_t n, const std::vector<Vec>& vs) {
    return row_space(Mat::from_rows(n, vs));
}

Subspace column_space(const Mat& m) { return row_space(m.transpose()); }

Subspace sum(const Subspace& a, const Subspace& b) {
    if (a.ambient() != b.ambient()) throw DimensionError("sum across ambient spaces");
    return row_space(vstack(a.basis(), b.basis()));
}

Subspace kernel(const Mat& f) {
    Mat c(f);
    auto piv = rref(c);
    std::vector<bool> is_piv(f.cols(), false);
    for (auto p : piv) is_piv[p] = true;
    std::vector<Vec> vs;
    for (std::size_t free = 0; free < f.cols(); ++free) {
        if (is_piv[free]) continue;
        Vec v(f.cols());
        v[free] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -c(i, free);
        vs.push_back(std::move(v));
    }
    return canonicalize(f.cols(), vs);
}

Subspace annihilator(const Subspace& s) { return kernel(s.basis()); }

Subspace intersect(const Subspace& a, const Subspace& b) {
    if (a.ambient() != b.ambient()) throw DimensionError("intersection across ambient spaces");
    return kernel(vstack(annihilator(a).basis(), annihilator(b).basis()));
}

Subspace image(const Mat& f, const Subspace& s) {
    if (f.cols() != s.ambient()) throw DimensionError("image: map domain mismatch");
    return row_space((f * s.columns()).transpose());
}

Subspace preimage(const Mat& f, const Subspace& s) {
    if (f.rows() != s.ambient()) throw DimensionError("preimage: map codomain mismatch");
    return kernel(annihilator(s).basis() * f);
}

std::size_t quotient_dim(const Subspace& big, const Subspace& small) {
    if (!big.contains(small)) throw std::invalid_argument("quotient of non-nested subspaces");
    return big.dim() - small.dim();
}

std::optional<Vec> solve(const Mat& f, const Vec& b) {
    if (f.rows() != b.size()) throw DimensionError("solve: right-hand side length mismatch");
    Mat aug(f.rows(), f.cols() + 1);
    aug.set_block(0, 0, f);
    for (std::size_t i = 0; i < b.size(); ++i) aug(i, f.cols()) = b[i];
    auto piv = rref(aug);
    if (!piv.empty() && piv.back() == f.cols()) return std::nullopt;
    Vec x(f.cols());
    for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = aug(i, f.cols());
    return x;
}

Mat solve_matrix(const Mat& f, const Mat& b) {
    std::vector<Vec> cols;
    for (std::size_t j = 0; j < b.cols(); ++j) {
        auto x = solve(f, b.col(j));
        if (!x) throw std::domain_error("solve_matrix: inconsistent system");
        cols.push_back(*x);
    }
    return Mat::from_columns(f.cols(), cols);
}

bool is_injective(const Mat& f) { return rank(f) == f.cols(); }
bool is_surjective(const Mat& f) { return rank(f) == f.rows(); }

Mat restrict_form(const Mat& form, const Mat& cols) { return cols.transpose() * form * cols; }

std::string to_string(const Q& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Q parse_scalar(const std::string& s) {
    Q q;
    if (s.empty() || q.set_str(s, 10) != 0) throw std::invalid_argument("bad scalar: " + s);
    if (sgn(q.get_den()) == 0) throw std::invalid_argument("zero denominator: " + s);
    q.canonicalize();
    return q;
}

long RationalRng::integer(long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(eng_);
}

Q RationalRng::scalar(long num_bound, long den_bound) {
    Q q(integer(-num_bound, num_bound), integer(1, den_bound));
    q.canonicalize();
    return q;
}

Q RationalRng::nonzero(long num_bound, long den_bound) {
    for (;;) {
        Q q = scalar(num_bound, den_bound);
        if (sgn(q) != 0) return q;
    }
}

Vec RationalRng::vec(std::size_t n, long num_bound, long den_bound) {
    Vec v(n);
    for (auto& x : v) x = scalar(num_bound, den_bound);
    return v;
}

Mat RationalRng::mat(std::size_t r, std::size_t c, long num_bound, long den_bound) {
    Mat m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = scalar(num_bound, den_bound);
    return m;
}

Mat RationalRng::invertible(std::size_t n) {
    for (;;) {
        Mat m = mat(n, n, 5, 2);
        if (rank(m) == n) return m;
    }
}

Mat RationalRng::antisymmetric(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            m(i, j) = scalar();
            m(j, i) = -m(i, j);
        }
    return m;
}

}  // namespace diraclab
