#pragma once

// Closed-form fixtures written independently of the scenario builders.

#include "diraclab/groupoid.hpp"

namespace fixtures {

using namespace diraclab;

inline Mat zeros(std::size_t r, std::size_t c) { return Mat(r, c); }

// Pair groupoid V x V of a constant 2-form b. Every sampled point carries the
// same linear data, so one object suffices; arrow 0 is the unit, arrow 1 a
// generic arrow. t = pr1, s = pr2, omega = b + (-b).
inline GroupoidBundle pair_fixture(const Mat& b) {
    std::size_t n = b.rows();
    Mat id = Mat::identity(n);
    GroupoidBundle g;
    g.name = "pair";
    g.objects.push_back(ObjectFiber{n, n, id, b.transpose(), ThreeForm(n)});
    ArrowFiber a;
    a.m = 2 * n;
    a.t_star = hstack(id, zeros(n, n));
    a.s_star = hstack(zeros(n, n), id);
    a.omega = block_diag(b, -b);
    a.Rg = vstack(id, zeros(n, n));
    a.Lg = vstack(zeros(n, n), -id);
    ArrowFiber u = a;
    u.unit = true;
    u.u_star = vstack(id, id);
    g.arrows = {u, a};
    Mat m(2 * n, 4 * n);
    m.set_block(0, 0, id);
    m.set_block(n, 3 * n, id);
    for (std::size_t x : {0, 1})
        for (std::size_t y : {0, 1}) g.pairs.push_back(PairFiber{x, y, (x == 0 && y == 0) ? 0u : 1u, m});
    return g;
}

// T*S^1 = S^1 x R over R with coordinates (theta, xi), omega = dxi ^ dtheta.
inline GroupoidBundle circle_fixture() {
    GroupoidBundle g;
    g.name = "circle";
    g.objects.push_back(ObjectFiber{1, 1, Mat(1, 1), Mat{{-1}}, ThreeForm(1)});
    ArrowFiber a;
    a.m = 2;
    a.s_star = a.t_star = Mat{{0, 1}};
    a.omega = Mat{{0, -1}, {1, 0}};
    a.Rg = a.Lg = Mat{{1}, {0}};
    ArrowFiber u = a;
    u.unit = true;
    u.u_star = Mat{{0}, {1}};
    g.arrows = {u, a};
    Mat m{{1, 0, 1, 0}, {0, 0, 0, 1}};
    g.pairs = {PairFiber{0, 0, 0, m}, PairFiber{1, 0, 1, m}, PairFiber{0, 1, 1, m}, PairFiber{1, 1, 1, m}};
    return g;
}

inline GroupoidBundle trivial_fixture(std::size_t n) {
    GroupoidBundle g;
    g.name = "trivial";
    g.objects.push_back(ObjectFiber{n, 0, Mat(n, 0), Mat(n, 0), ThreeForm(n)});
    ArrowFiber u;
    u.m = n;
    u.s_star = u.t_star = u.u_star = Mat::identity(n);
    u.omega = Mat(n, n);
    u.Lg = u.Rg = Mat(n, 0);
    u.unit = true;
    g.arrows = {u};
    g.pairs = {PairFiber{0, 0, 0, hstack(Mat::identity(n), Mat(n, n))}};
    return g;
}

inline Mat omega_std(std::size_t k) {
    Mat w(2 * k, 2 * k);
    for (std::size_t i = 0; i < k; ++i) {
        w(i, k + i) = 1;
        w(k + i, i) = -1;
    }
    return w;
}

}  // namespace fixtures
