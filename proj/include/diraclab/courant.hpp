#pragma once

#include "diraclab/linalg.hpp"

#include <optional>

namespace diraclab {

// Alternating trilinear form on Q^n, stored densely.
class ThreeForm {
public:
    ThreeForm() = default;
    explicit ThreeForm(std::size_t n) : n_(n), t_(n * n * n) {}

    std::size_t dim() const { return n_; }
    const Q& operator()(std::size_t i, std::size_t j, std::size_t k) const { return t_[(i * n_ + j) * n_ + k]; }
    // Sets the (i,j,k) component and all its signed permutations.
    void set(std::size_t i, std::size_t j, std::size_t k, const Q& value);

    Q eval(const Vec& u, const Vec& v, const Vec& w) const;
    // The 2-form (a, b) -> phi(v, a, b).
    Mat contract(const Vec& v) const;
    ThreeForm pullback(const Mat& f) const;  // f : W -> V, result on W
    bool is_alternating() const;
    bool is_zero() const;

    ThreeForm operator+(const ThreeForm& o) const;
    ThreeForm operator-() const;
    bool operator==(const ThreeForm& o) const { return n_ == o.n_ && t_ == o.t_; }

    const std::vector<Q>& data() const { return t_; }
    static ThreeForm from_data(std::size_t n, std::vector<Q> d);

private:
    std::size_t n_ = 0;
    std::vector<Q> t_;
};

// Lagrangian subspace of V + V* for the pairing (v, a).(w, b) = a(w) + b(v).
// Coordinates: V first (0..n-1), then V* (n..2n-1).
struct DiracFiber {
    std::size_t n = 0;
    Subspace L;

    bool operator==(const DiracFiber& o) const { return n == o.n && L == o.L; }
    bool operator!=(const DiracFiber& o) const { return !(*this == o); }
};

struct NotLagrangian : std::logic_error {
    using std::logic_error::logic_error;
};

Mat pairing_matrix(std::size_t n);
Subspace perp(std::size_t n, const Subspace& s);
bool is_lagrangian(std::size_t n, const Subspace& s);
// Wraps s as a Dirac fiber; throws NotLagrangian otherwise.
DiracFiber make_dirac(std::size_t n, const Subspace& s);

bool is_antisymmetric(const Mat& m);
// Covector i_v w, i.e. a -> w(v, a).
Vec contract(const Mat& form, const Vec& v);
Mat pullback_form(const Mat& f, const Mat& form);

DiracFiber tangent_dirac(std::size_t n);    // V + 0
DiracFiber cotangent_dirac(std::size_t n);  // 0 + V*
DiracFiber graph_two_form(const Mat& omega);
DiracFiber graph_bivector(const Mat& pi);
DiracFiber dirac_sum(const DiracFiber& a, const DiracFiber& b);
DiracFiber gauge(const DiracFiber& l, const Mat& b);
DiracFiber negate(const DiracFiber& l);  // {(v, -a)}
// f : W -> V as a dim V x dim W matrix.
DiracFiber pullback(const Mat& f, const DiracFiber& l);
// f : V -> W surjective.
DiracFiber pushforward(const Mat& f, const DiracFiber& l);
DiracFiber direct_product(const DiracFiber& a, const DiracFiber& b);

Subspace kernel_of(const DiracFiber& l);      // L meet V, as a subspace of V
Subspace cokernel_part(const DiracFiber& l);  // L meet V*, as a subspace of V*
Subspace tangent_range(const DiracFiber& l);  // projection of L to V
bool is_nondegenerate(const DiracFiber& l);
// The 2-form w with L = graph(w), if L meets V* trivially.
std::optional<Mat> as_two_form(const DiracFiber& l);
// The bivector p with L = graph(p), if ker L = 0.
std::optional<Mat> as_bivector(const DiracFiber& l);
// beta-transform {(v + p(a), a)}.
DiracFiber bivector_transform(const DiracFiber& l, const Mat& pi);

// E + ann(E) for a random subspace E, then random gauge and bivector
// transforms, so every kernel dimension occurs.
DiracFiber random_lagrangian(RationalRng& rng, std::size_t n);

}  // namespace diraclab
