#pragma once

#include "diraclab/courant.hpp"
#include "diraclab/report.hpp"

#include <map>

namespace diraclab {

using Monomial = std::vector<unsigned>;

// Polynomial in n variables with rational coefficients; zero terms are never stored.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::size_t nvars) : n_(nvars) {}
    static Poly constant(std::size_t nvars, const Q& c);
    static Poly var(std::size_t nvars, std::size_t i);
    static Poly monomial(const Q& c, Monomial exps);

    std::size_t nvars() const { return n_; }
    const std::map<Monomial, Q>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    unsigned degree() const;

    void add_term(const Monomial& m, const Q& c);
    Poly derivative(std::size_t i) const;
    Q eval(const Vec& x) const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Poly& o) const;
    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    bool operator==(const Poly& o) const { return n_ == o.n_ && terms_ == o.terms_; }

private:
    std::size_t n_ = 0;
    std::map<Monomial, Q> terms_;
};

Poly operator*(const Q& c, const Poly& p);

using VectorField = std::vector<Poly>;

// Differential k-form with polynomial coefficients, keyed by strictly increasing index tuples.
class Form {
public:
    Form() = default;
    Form(std::size_t nvars, std::size_t degree) : n_(nvars), k_(degree) {}

    std::size_t nvars() const { return n_; }
    std::size_t degree() const { return k_; }
    const std::map<std::vector<std::size_t>, Poly>& components() const { return c_; }
    Poly component(const std::vector<std::size_t>& idx) const;
    // Adds coeff * dx_{idx[0]} ^ ... for an arbitrary index order.
    void add(std::vector<std::size_t> idx, const Poly& coeff);
    bool is_zero() const { return c_.empty(); }

    Form operator+(const Form& o) const;
    Form operator-(const Form& o) const;
    Form operator-() const;
    bool operator==(const Form& o) const { return n_ == o.n_ && k_ == o.k_ && c_ == o.c_; }

    // Values at a point: a covector for k = 1, a matrix for k = 2, a ThreeForm for k = 3.
    Vec eval1(const Vec& x) const;
    Mat eval2(const Vec& x) const;
    ThreeForm eval3(const Vec& x) const;

private:
    std::size_t n_ = 0, k_ = 0;
    std::map<std::vector<std::size_t>, Poly> c_;
};

Form function_form(const Poly& f);
Form d(const Form& w);
Form contract(const VectorField& v, const Form& w);
Form wedge(const Form& a, const Form& b);
VectorField lie_bracket(const VectorField& v, const VectorField& w);
// The function v(f).
Poly act(const VectorField& v, const Poly& f);
Vec eval(const VectorField& v, const Vec& x);

struct PolySection {
    VectorField v;
    Form alpha;  // degree 1
};

PolySection dorfman_bracket(const PolySection& a, const PolySection& b, const Form& phi);
// The symmetric pairing alpha(w) + beta(v) as a polynomial.
Poly pairing(const PolySection& a, const PolySection& b);
Vec eval(const PolySection& s, const Vec& x);

struct PolyDiracFrame {
    std::size_t n = 0;
    std::vector<PolySection> sections;
    Form phi;  // degree 3
};

PolyDiracFrame graph_frame(const Form& omega);  // sections (e_i, i_{e_i} omega), phi = -d omega
// Sections (p(dx_i, .), dx_i) for a bivector given by its coefficient matrix.
PolyDiracFrame bivector_frame(const std::vector<std::vector<Poly>>& pi, const Form& phi);

// Rational points with numerators up to 2^16 and small denominators.
std::vector<Vec> sample_points(RationalRng& rng, std::size_t n, std::size_t count);

// Evaluates every ordered bracket of frame sections at every point and tests
// membership in the evaluated span. Rejection is sound; acceptance is a
// sampled certificate only.
Report involutivity_check(const PolyDiracFrame& frame, const std::vector<Vec>& points);

}  // namespace diraclab
