#include "diraclab/courant.hpp"

#include <array>

namespace diraclab {

void ThreeForm::set(std::size_t i, std::size_t j, std::size_t k, const Q& value) {
    std::array<std::size_t, 3> idx{i, j, k};
    const int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
    for (int p = 0; p < 6; ++p) {
        Q v = p < 3 ? value : Q(-value);
        if (i == j || j == k || i == k) v = 0;
        t_[(idx[perms[p][0]] * n_ + idx[perms[p][1]]) * n_ + idx[perms[p][2]]] = v;
    }
}

Q ThreeForm::eval(const Vec& u, const Vec& v, const Vec& w) const {
    if (u.size() != n_ || v.size() != n_ || w.size() != n_) throw DimensionError("3-form argument length");
    Q s = 0;
    for (std::size_t i = 0; i < n_; ++i) {
        if (sgn(u[i]) == 0) continue;
        for (std::size_t j = 0; j < n_; ++j) {
            if (sgn(v[j]) == 0) continue;
            for (std::size_t k = 0; k < n_; ++k) s += (*this)(i, j, k) * u[i] * v[j] * w[k];
        }
    }
    return s;
}

Mat ThreeForm::contract(const Vec& v) const {
    Mat m(n_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
        if (sgn(v[i]) == 0) continue;
        for (std::size_t a = 0; a < n_; ++a)
            for (std::size_t b = 0; b < n_; ++b) m(a, b) += v[i] * (*this)(i, a, b);
    }
    return m;
}

ThreeForm ThreeForm::pullback(const Mat& f) const {
    if (f.rows() != n_) throw DimensionError("3-form pullback: map codomain mismatch");
    std::size_t m = f.cols();
    ThreeForm out(m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b)
            for (std::size_t c = b + 1; c < m; ++c) out.set(a, b, c, eval(f.col(a), f.col(b), f.col(c)));
    return out;
}

bool ThreeForm::is_alternating() const {
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            for (std::size_t k = 0; k < n_; ++k) {
                const Q& x = (*this)(i, j, k);
                if (x != -(*this)(j, i, k) || x != -(*this)(i, k, j)) return false;
            }
    return true;
}

bool ThreeForm::is_zero() const {
    for (const auto& x : t_)
        if (sgn(x) != 0) return false;
    return true;
}

ThreeForm ThreeForm::operator+(const ThreeForm& o) const {
    if (o.n_ != n_) throw DimensionError("3-form sum dimension mismatch");
    ThreeForm r(n_);
    for (std::size_t i = 0; i < t_.size(); ++i) r.t_[i] = t_[i] + o.t_[i];
    return r;
}

ThreeForm ThreeForm::operator-() const {
    ThreeForm r(n_);
    for (std::size_t i = 0; i < t_.size(); ++i) r.t_[i] = -t_[i];
    return r;
}

ThreeForm ThreeForm::from_data(std::size_t n, std::vector<Q> d) {
    if (d.size() != n * n * n) throw DimensionError("3-form data length");
    ThreeForm f(n);
    f.t_ = std::move(d);
    if (!f.is_alternating()) throw std::invalid_argument("3-form data is not alternating");
    return f;
}

Mat pairing_matrix(std::size_t n) {
    Mat p(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        p(i, n + i) = 1;
        p(n + i, i) = 1;
    }
    return p;
}

Subspace perp(std::size_t n, const Subspace& s) {
    if (s.ambient() != 2 * n) throw DimensionError("perp: ambient is not V + V*");
    return annihilator(image(pairing_matrix(n), s));
}

bool is_lagrangian(std::size_t n, const Subspace& s) {
    if (s.ambient() != 2 * n || s.dim() != n) return false;
    Mat b = s.columns();
    return (b.transpose() * pairing_matrix(n) * b).is_zero();
}

DiracFiber make_dirac(std::size_t n, const Subspace& s) {
    if (!is_lagrangian(n, s)) throw NotLagrangian("subspace is not Lagrangian in V + V*");
    return DiracFiber{n, s};
}

bool is_antisymmetric(const Mat& m) { return m.rows() == m.cols() && (m + m.transpose()).is_zero(); }

Vec contract(const Mat& form, const Vec& v) { return form.transpose() * v; }

Mat pullback_form(const Mat& f, const Mat& form) { return f.transpose() * form * f; }

DiracFiber tangent_dirac(std::size_t n) {
    std::vector<Vec> vs;
    for (std::size_t i = 0; i < n; ++i) vs.push_back(unit_vec(2 * n, i));
    return DiracFiber{n, canonicalize(2 * n, vs)};
}

DiracFiber cotangent_dirac(std::size_t n) {
    std::vector<Vec> vs;
    for (std::size_t i = 0; i < n; ++i) vs.push_back(unit_vec(2 * n, n + i));
    return DiracFiber{n, canonicalize(2 * n, vs)};
}

DiracFiber graph_two_form(const Mat& omega) {
    if (!is_antisymmetric(omega)) throw std::invalid_argument("2-form is not antisymmetric");
    std::size_t n = omega.rows();
    std::vector<Vec> vs;
    for (std::size_t i = 0; i < n; ++i) vs.push_back(concat(unit_vec(n, i), contract(omega, unit_vec(n, i))));
    return make_dirac(n, canonicalize(2 * n, vs));
}

DiracFiber graph_bivector(const Mat& pi) {
    if (!is_antisymmetric(pi)) throw std::invalid_argument("bivector is not antisymmetric");
    std::size_t n = pi.rows();
    std::vector<Vec> vs;
    for (std::size_t i = 0; i < n; ++i) vs.push_back(concat(contract(pi, unit_vec(n, i)), unit_vec(n, i)));
    return make_dirac(n, canonicalize(2 * n, vs));
}

DiracFiber dirac_sum(const DiracFiber& a, const DiracFiber& b) {
    if (a.n != b.n) throw DimensionError("Dirac sum across different bases");
    std::size_t n = a.n;
    // Triples (v, a1, a2) with (v, a1) in A and (v, a2) in B.
    Mat p1(2 * n, 3 * n), p2(2 * n, 3 * n), out(2 * n, 3 * n);
    for (std::size_t i = 0; i < n; ++i) {
        p1(i, i) = 1;
        p1(n + i, n + i) = 1;
        p2(i, i) = 1;
        p2(n + i, 2 * n + i) = 1;
        out(i, i) = 1;
        out(n + i, n + i) = 1;
        out(n + i, 2 * n + i) = 1;
    }
    Subspace triples = intersect(preimage(p1, a.L), preimage(p2, b.L));
    return make_dirac(n, image(out, triples));
}

DiracFiber gauge(const DiracFiber& l, const Mat& b) { return dirac_sum(l, graph_two_form(b)); }

DiracFiber negate(const DiracFiber& l) {
    Mat s = Mat::identity(2 * l.n);
    for (std::size_t i = 0; i < l.n; ++i) s(l.n + i, l.n + i) = -1;
    return make_dirac(l.n, image(s, l.L));
}

DiracFiber pullback(const Mat& f, const DiracFiber& l) {
    if (f.rows() != l.n) throw DimensionError("pullback: map codomain is not the Dirac base");
    std::size_t n = l.n, m = f.cols();
    // Pairs (w, a) in W + V* with (f w, a) in L, mapped to (w, f^T a).
    Mat push(2 * n, m + n), out(2 * m, m + n);
    push.set_block(0, 0, f);
    push.set_block(n, m, Mat::identity(n));
    out.set_block(0, 0, Mat::identity(m));
    out.set_block(m, m, f.transpose());
    return make_dirac(m, image(out, preimage(push, l.L)));
}

DiracFiber pushforward(const Mat& f, const DiracFiber& l) {
    if (f.cols() != l.n) throw DimensionError("pushforward: map domain is not the Dirac base");
    if (!is_surjective(f)) throw std::invalid_argument("pushforward along a non-surjective map");
    std::size_t n = l.n, m = f.rows();
    // Pairs (v, b) in V + W* with (v, f^T b) in L, mapped to (f v, b).
    Mat pull(2 * n, n + m), out(2 * m, n + m);
    pull.set_block(0, 0, Mat::identity(n));
    pull.set_block(n, n, f.transpose());
    out.set_block(0, 0, f);
    out.set_block(m, n, Mat::identity(m));
    return make_dirac(m, image(out, preimage(pull, l.L)));
}

DiracFiber direct_product(const DiracFiber& a, const DiracFiber& b) {
    std::size_t n1 = a.n, n2 = b.n, n = n1 + n2;
    // (v1, a1) -> (v1, 0, a1, 0) and (v2, a2) -> (0, v2, 0, a2).
    Mat e1(2 * n, 2 * n1), e2(2 * n, 2 * n2);
    e1.set_block(0, 0, Mat::identity(n1));
    e1.set_block(n, n1, Mat::identity(n1));
    e2.set_block(n1, 0, Mat::identity(n2));
    e2.set_block(n + n1, n2, Mat::identity(n2));
    return make_dirac(n, sum(image(e1, a.L), image(e2, b.L)));
}

Subspace kernel_of(const DiracFiber& l) {
    std::size_t n = l.n;
    Mat incl(2 * n, n);
    incl.set_block(0, 0, Mat::identity(n));
    return preimage(incl, l.L);
}

Subspace cokernel_part(const DiracFiber& l) {
    std::size_t n = l.n;
    Mat incl(2 * n, n);
    incl.set_block(n, 0, Mat::identity(n));
    return preimage(incl, l.L);
}

Subspace tangent_range(const DiracFiber& l) {
    Mat proj(l.n, 2 * l.n);
    proj.set_block(0, 0, Mat::identity(l.n));
    return image(proj, l.L);
}

bool is_nondegenerate(const DiracFiber& l) { return cokernel_part(l).dim() == 0; }

std::optional<Mat> as_two_form(const DiracFiber& l) {
    if (!is_nondegenerate(l)) return std::nullopt;
    std::size_t n = l.n;
    // The echelon basis of a graph is (e_i, i_{e_i} w).
    return l.L.basis().block(0, n, n, n);
}

std::optional<Mat> as_bivector(const DiracFiber& l) {
    std::size_t n = l.n;
    if (kernel_of(l).dim() != 0) return std::nullopt;
    Mat swap(2 * n, 2 * n);
    swap.set_block(0, n, Mat::identity(n));
    swap.set_block(n, 0, Mat::identity(n));
    return image(swap, l.L).basis().block(0, n, n, n);
}

DiracFiber bivector_transform(const DiracFiber& l, const Mat& pi) {
    if (!is_antisymmetric(pi) || pi.rows() != l.n) throw std::invalid_argument("bad bivector");
    std::size_t n = l.n;
    Mat t = Mat::identity(2 * n);
    t.set_block(0, n, pi.transpose());
    return make_dirac(n, image(t, l.L));
}

DiracFiber random_lagrangian(RationalRng& rng, std::size_t n) {
    std::size_t k = rng.integer(0, n);
    std::vector<Vec> vs;
    for (std::size_t i = 0; i < k; ++i) vs.push_back(rng.vec(n, 3, 2));
    Subspace e = canonicalize(n, vs);
    Mat emb_v(2 * n, n), emb_a(2 * n, n);
    emb_v.set_block(0, 0, Mat::identity(n));
    emb_a.set_block(n, 0, Mat::identity(n));
    DiracFiber l = make_dirac(n, sum(image(emb_v, e), image(emb_a, annihilator(e))));
    switch (rng.integer(0, 3)) {
        case 0: break;
        case 1: l = gauge(l, rng.antisymmetric(n)); break;
        case 2: l = bivector_transform(l, rng.antisymmetric(n)); break;
        default: l = bivector_transform(gauge(l, rng.antisymmetric(n)), rng.antisymmetric(n)); break;
    }
    return l;
}

}  // namespace diraclab
