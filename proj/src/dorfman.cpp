#include "diraclab/dorfman.hpp"

#include <algorithm>

namespace diraclab {

Poly Poly::constant(std::size_t nvars, const Q& c) {
    Poly p(nvars);
    p.add_term(Monomial(nvars, 0), c);
    return p;
}

Poly Poly::var(std::size_t nvars, std::size_t i) {
    Monomial m(nvars, 0);
    m.at(i) = 1;
    return monomial(1, m);
}

Poly Poly::monomial(const Q& c, Monomial exps) {
    Poly p(exps.size());
    p.add_term(exps, c);
    return p;
}

unsigned Poly::degree() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) {
        unsigned s = 0;
        for (auto e : m) s += e;
        d = std::max(d, s);
    }
    return d;
}

void Poly::add_term(const Monomial& m, const Q& c) {
    if (m.size() != n_) throw DimensionError("monomial arity");
    if (sgn(c) == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
        return;
    }
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
}

Poly Poly::derivative(std::size_t i) const {
    Poly out(n_);
    for (const auto& [m, c] : terms_) {
        if (m[i] == 0) continue;
        Monomial k = m;
        --k[i];
        out.add_term(k, c * m[i]);
    }
    return out;
}

Q Poly::eval(const Vec& x) const {
    if (x.size() != n_) throw DimensionError("polynomial evaluation arity");
    Q s = 0;
    for (const auto& [m, c] : terms_) {
        Q t = c;
        for (std::size_t i = 0; i < n_; ++i)
            for (unsigned e = 0; e < m[i]; ++e) t *= x[i];
        s += t;
    }
    return s;
}

Poly Poly::operator+(const Poly& o) const {
    if (o.n_ != n_) throw DimensionError("polynomial arity mismatch");
    Poly r(*this);
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator-() const { return Q(-1) * *this; }

Poly Poly::operator*(const Poly& o) const {
    if (o.n_ != n_) throw DimensionError("polynomial arity mismatch");
    Poly r(n_);
    for (const auto& [m1, c1] : terms_)
        for (const auto& [m2, c2] : o.terms_) {
            Monomial m(n_);
            for (std::size_t i = 0; i < n_; ++i) m[i] = m1[i] + m2[i];
            r.add_term(m, c1 * c2);
        }
    return r;
}

Poly operator*(const Q& c, const Poly& p) {
    Poly r(p.nvars());
    for (const auto& [m, x] : p.terms()) r.add_term(m, c * x);
    return r;
}

namespace {

// Sorts idx in place; returns the permutation sign, or 0 on a repeated index.
int sort_sign(std::vector<std::size_t>& idx) {
    int sign = 1;
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j + 1 < idx.size() - i; ++j) {
            if (idx[j] == idx[j + 1]) return 0;
            if (idx[j] > idx[j + 1]) {
                std::swap(idx[j], idx[j + 1]);
                sign = -sign;
            }
        }
    for (std::size_t j = 0; j + 1 < idx.size(); ++j)
        if (idx[j] == idx[j + 1]) return 0;
    return sign;
}

}  // namespace

Poly Form::component(const std::vector<std::size_t>& idx) const {
    auto it = c_.find(idx);
    return it == c_.end() ? Poly(n_) : it->second;
}

void Form::add(std::vector<std::size_t> idx, const Poly& coeff) {
    if (idx.size() != k_) throw DimensionError("form index length");
    for (auto i : idx)
        if (i >= n_) throw DimensionError("form index out of range");
    int s = sort_sign(idx);
    if (s == 0 || coeff.is_zero()) return;
    Poly p = s > 0 ? coeff : -coeff;
    auto it = c_.find(idx);
    if (it == c_.end()) {
        c_.emplace(idx, p);
        return;
    }
    it->second += p;
    if (it->second.is_zero()) c_.erase(it);
}

Form Form::operator+(const Form& o) const {
    if (o.n_ != n_ || o.k_ != k_) throw DimensionError("form shape mismatch");
    Form r(*this);
    for (const auto& [idx, p] : o.c_) r.add(idx, p);
    return r;
}

Form Form::operator-(const Form& o) const { return *this + (-o); }

Form Form::operator-() const {
    Form r(n_, k_);
    for (const auto& [idx, p] : c_) r.add(idx, -p);
    return r;
}

Vec Form::eval1(const Vec& x) const {
    if (k_ != 1) throw DimensionError("eval1 on a form of another degree");
    Vec v(n_);
    for (const auto& [idx, p] : c_) v[idx[0]] = p.eval(x);
    return v;
}

Mat Form::eval2(const Vec& x) const {
    if (k_ != 2) throw DimensionError("eval2 on a form of another degree");
    Mat m(n_, n_);
    for (const auto& [idx, p] : c_) {
        Q v = p.eval(x);
        m(idx[0], idx[1]) = v;
        m(idx[1], idx[0]) = -v;
    }
    return m;
}

ThreeForm Form::eval3(const Vec& x) const {
    if (k_ != 3) throw DimensionError("eval3 on a form of another degree");
    ThreeForm t(n_);
    for (const auto& [idx, p] : c_) t.set(idx[0], idx[1], idx[2], p.eval(x));
    return t;
}

Form function_form(const Poly& f) {
    Form w(f.nvars(), 0);
    w.add({}, f);
    return w;
}

Form d(const Form& w) {
    Form out(w.nvars(), w.degree() + 1);
    for (const auto& [idx, p] : w.components())
        for (std::size_t j = 0; j < w.nvars(); ++j) {
            Poly dp = p.derivative(j);
            if (dp.is_zero()) continue;
            std::vector<std::size_t> k{j};
            k.insert(k.end(), idx.begin(), idx.end());
            out.add(k, dp);
        }
    return out;
}

Form contract(const VectorField& v, const Form& w) {
    if (v.size() != w.nvars()) throw DimensionError("contraction arity");
    if (w.degree() == 0) throw DimensionError("contraction of a function");
    Form out(w.nvars(), w.degree() - 1);
    for (const auto& [idx, p] : w.components())
        for (std::size_t pos = 0; pos < idx.size(); ++pos) {
            std::vector<std::size_t> rest;
            for (std::size_t q = 0; q < idx.size(); ++q)
                if (q != pos) rest.push_back(idx[q]);
            Poly c = v[idx[pos]] * p;
            out.add(rest, pos % 2 ? -c : c);
        }
    return out;
}

Form wedge(const Form& a, const Form& b) {
    if (a.nvars() != b.nvars()) throw DimensionError("wedge arity");
    Form out(a.nvars(), a.degree() + b.degree());
    for (const auto& [i1, p1] : a.components())
        for (const auto& [i2, p2] : b.components()) {
            std::vector<std::size_t> k(i1);
            k.insert(k.end(), i2.begin(), i2.end());
            out.add(k, p1 * p2);
        }
    return out;
}

Poly act(const VectorField& v, const Poly& f) {
    if (v.size() != f.nvars()) throw DimensionError("vector field arity");
    Poly out(f.nvars());
    for (std::size_t j = 0; j < v.size(); ++j) out += v[j] * f.derivative(j);
    return out;
}

VectorField lie_bracket(const VectorField& v, const VectorField& w) {
    if (v.size() != w.size()) throw DimensionError("bracket arity");
    VectorField out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(act(v, w[i]) - act(w, v[i]));
    return out;
}

Vec eval(const VectorField& v, const Vec& x) {
    Vec out;
    for (const auto& p : v) out.push_back(p.eval(x));
    return out;
}

PolySection dorfman_bracket(const PolySection& a, const PolySection& b, const Form& phi) {
    Form lie = contract(a.v, d(b.alpha)) + d(contract(a.v, b.alpha));
    Form twist = contract(b.v, contract(a.v, phi));
    return PolySection{lie_bracket(a.v, b.v), lie - contract(b.v, d(a.alpha)) + twist};
}

Poly pairing(const PolySection& a, const PolySection& b) {
    return contract(b.v, a.alpha).component({}) + contract(a.v, b.alpha).component({});
}

Vec eval(const PolySection& s, const Vec& x) { return concat(eval(s.v, x), s.alpha.eval1(x)); }

PolyDiracFrame graph_frame(const Form& omega) {
    std::size_t n = omega.nvars();
    PolyDiracFrame f{n, {}, -d(omega)};
    for (std::size_t i = 0; i < n; ++i) {
        VectorField e(n, Poly(n));
        e[i] = Poly::constant(n, 1);
        f.sections.push_back(PolySection{e, contract(e, omega)});
    }
    return f;
}

PolyDiracFrame bivector_frame(const std::vector<std::vector<Poly>>& pi, const Form& phi) {
    std::size_t n = pi.size();
    PolyDiracFrame f{n, {}, phi};
    for (std::size_t i = 0; i < n; ++i) {
        VectorField v;
        for (std::size_t j = 0; j < n; ++j) v.push_back(pi[i][j]);
        Form a(n, 1);
        a.add({i}, Poly::constant(n, 1));
        f.sections.push_back(PolySection{v, a});
    }
    return f;
}

std::vector<Vec> sample_points(RationalRng& rng, std::size_t n, std::size_t count) {
    std::vector<Vec> pts;
    for (std::size_t i = 0; i < count; ++i) pts.push_back(rng.vec(n, 1L << 16, 7));
    return pts;
}

Report involutivity_check(const PolyDiracFrame& frame, const std::vector<Vec>& points) {
    if (points.size() < 10) throw std::invalid_argument("involutivity check needs at least 10 sample points");
    std::size_t n = frame.n, k = frame.sections.size();
    Report rep("dorfman");
    Check& lag = rep.check("dorfman.frame_lagrangian", "frame spans a Lagrangian subspace at each point");
    Check& inv = rep.check("dorfman.involutive", "[[s_i, s_j]]_phi lies in span{s_k} at each point");

    std::vector<PolySection> brackets;
    std::vector<std::pair<std::size_t, std::size_t>> labels;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j) continue;
            brackets.push_back(dorfman_bracket(frame.sections[i], frame.sections[j], frame.phi));
            labels.emplace_back(i, j);
        }

    for (const auto& x : points) {
        std::vector<Vec> vs;
        for (const auto& s : frame.sections) vs.push_back(eval(s, x));
        Subspace span = canonicalize(2 * n, vs);
        lag.tick();
        if (!is_lagrangian(n, span)) {
            lag.fail("frame not Lagrangian at x = " + fmt(x) + ", rank " + std::to_string(span.dim()));
            continue;
        }
        for (std::size_t b = 0; b < brackets.size(); ++b) {
            Vec val = eval(brackets[b], x);
            inv.tick();
            if (!span.contains(val))
                inv.fail("pair (" + std::to_string(labels[b].first) + "," + std::to_string(labels[b].second) +
                         ") at x = " + fmt(x) + ": bracket " + fmt(val));
        }
    }
    return rep;
}

}  // namespace diraclab
