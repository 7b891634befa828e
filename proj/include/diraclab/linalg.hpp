#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace diraclab {

using Q = mpq_class;
using Vec = std::vector<Q>;

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Dense row-major matrix over Q.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}
    Mat(std::size_t rows, std::size_t cols, std::vector<Q> entries);
    Mat(std::initializer_list<std::initializer_list<Q>> rows);

    static Mat identity(std::size_t n);
    static Mat zero(std::size_t rows, std::size_t cols) { return Mat(rows, cols); }
    static Mat from_columns(std::size_t rows, const std::vector<Vec>& cols);
    static Mat from_rows(std::size_t cols, const std::vector<Vec>& rows);

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    Q& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const Q& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }
    const std::vector<Q>& data() const { return a_; }

    Vec row(std::size_t i) const;
    Vec col(std::size_t j) const;
    Mat transpose() const;
    bool is_zero() const;

    // Copies of sub-blocks.
    Mat block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const Mat& b);

    bool operator==(const Mat& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }
    bool operator!=(const Mat& o) const { return !(*this == o); }

private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<Q> a_;
};

Mat operator*(const Mat& a, const Mat& b);
Vec operator*(const Mat& a, const Vec& v);
Mat operator+(const Mat& a, const Mat& b);
Mat operator-(const Mat& a, const Mat& b);
Mat operator-(const Mat& a);
Mat operator*(const Q& s, const Mat& a);
Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator-(const Vec& a);
Vec operator*(const Q& s, const Vec& a);
Q dot(const Vec& a, const Vec& b);
bool is_zero(const Vec& v);
Vec unit_vec(std::size_t n, std::size_t i);
Vec concat(const Vec& a, const Vec& b);
Vec slice(const Vec& v, std::size_t from, std::size_t len);

Mat hstack(const Mat& a, const Mat& b);
Mat vstack(const Mat& a, const Mat& b);
Mat block_diag(const Mat& a, const Mat& b);

// Reduced row echelon form, in place; returns pivot columns.
std::vector<std::size_t> rref(Mat& m);
std::size_t rank(const Mat& m);

// Linear subspace of Q^n. The basis is stored as the rows of a matrix in
// reduced row echelon form, which is unique for the span, so equality of
// subspaces is equality of these matrices.
class Subspace {
public:
    Subspace() = default;
    explicit Subspace(std::size_t ambient) : n_(ambient), b_(0, ambient) {}

    static Subspace zero(std::size_t n) { return Subspace(n); }
    static Subspace full(std::size_t n);

    std::size_t ambient() const { return n_; }
    std::size_t dim() const { return b_.rows(); }
    const Mat& basis() const { return b_; }
    Vec vector(std::size_t i) const { return b_.row(i); }
    std::vector<Vec> vectors() const;
    // n x dim matrix whose columns are the basis vectors.
    Mat columns() const { return b_.transpose(); }

    bool contains(const Vec& v) const;
    bool contains(const Subspace& s) const;

    bool operator==(const Subspace& o) const { return n_ == o.n_ && b_ == o.b_; }
    bool operator!=(const Subspace& o) const { return !(*this == o); }

    friend Subspace canonicalize(std::size_t n, const std::vector<Vec>& vs);
    friend Subspace row_space(const Mat& m);

private:
    std::size_t n_ = 0;
    Mat b_;
};

Subspace canonicalize(std::size_t n, const std::vector<Vec>& vs);
Subspace row_space(const Mat& m);
Subspace column_space(const Mat& m);
Subspace sum(const Subspace& a, const Subspace& b);
Subspace intersect(const Subspace& a, const Subspace& b);
// Dual space identified with Q^n via the standard pairing.
Subspace annihilator(const Subspace& s);
Subspace image(const Mat& f, const Subspace& s);
Subspace preimage(const Mat& f, const Subspace& s);
Subspace kernel(const Mat& f);
std::size_t quotient_dim(const Subspace& big, const Subspace& small);

// One solution of f x = b, free variables zero, or nothing.
std::optional<Vec> solve(const Mat& f, const Vec& b);
// Solves f X = B column by column; throws if some column is inconsistent.
Mat solve_matrix(const Mat& f, const Mat& b);

bool is_injective(const Mat& f);
bool is_surjective(const Mat& f);

// Gram-style restriction: basis^T * form * basis for a subspace given by columns.
Mat restrict_form(const Mat& form, const Mat& cols);

std::string to_string(const Q& q);
Q parse_scalar(const std::string& s);

// Seeded generator of small rationals for property tests and scenario samples.
class RationalRng {
public:
    explicit RationalRng(std::uint64_t seed) : eng_(seed) {}
    Q scalar(long num_bound = 9, long den_bound = 3);
    Q nonzero(long num_bound = 9, long den_bound = 3);
    Vec vec(std::size_t n, long num_bound = 9, long den_bound = 3);
    Mat mat(std::size_t r, std::size_t c, long num_bound = 9, long den_bound = 3);
    Mat invertible(std::size_t n);
    Mat antisymmetric(std::size_t n);
    long integer(long lo, long hi);
    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

}  // namespace diraclab
