#pragma once

#include "diraclab/courant.hpp"
#include "diraclab/report.hpp"

#include <optional>
#include <string>

namespace diraclab {

// Linear data of a Lie groupoid at an object x: T = T_x G^0 (dim n),
// A = algebroid fiber (dim r), anchor rho : A -> T and sigma : A -> T*.
struct ObjectFiber {
    std::size_t n = 0, r = 0;
    Mat rho;    // n x r
    Mat sigma;  // n x r, zero for groupoids without a 2-form
    ThreeForm phi;
};

// Linear data at an arrow g : src -> tgt with tangent space T_g (dim m).
struct ArrowFiber {
    std::size_t src = 0, tgt = 0, m = 0;
    Mat s_star;  // n_src x m
    Mat t_star;  // n_tgt x m
    Mat omega;   // m x m
    Mat Lg;      // m x r_src, a -> a^L_g
    Mat Rg;      // m x r_tgt, a -> a^R_g
    bool unit = false;
    Mat u_star;  // m x n at a unit arrow: the differential of the unit map
};

// A composable pair (g, h) with s(g) = t(h), and the differential of
// multiplication on T_g x T_h (only its restriction to the fiber product matters).
struct PairFiber {
    std::size_t g = 0, h = 0, gh = 0;
    Mat m_star;  // m_gh x (m_g + m_h)
};

struct GroupoidBundle {
    std::string name;
    std::vector<ObjectFiber> objects;
    std::vector<ArrowFiber> arrows;
    std::vector<PairFiber> pairs;

    // Index of the unit arrow at object x, if sampled.
    std::optional<std::size_t> unit_of(std::size_t x) const;
    // Throws std::invalid_argument on broken indices or inconsistent shapes.
    void validate() const;
};

struct Samples {
    std::size_t objects = 8, arrows = 16, pairs = 8;
    // DIRACLAB_SAMPLES="objects,arrows,pairs" or a single count for all three.
    static Samples from_env();
};

// Basis (as columns) of {(v, w) in T_g x T_h : s_* v = t_* w}.
Mat composable_tangents(const ArrowFiber& g, const ArrowFiber& h);

Report qs_check(const GroupoidBundle& g);
DiracFiber induced_dirac(const ObjectFiber& x);  // im(rho, sigma); throws NotLagrangian

// t*L_tgt = s*L_src + graph(form) at one arrow.
Report compatibility_check(const ArrowFiber& arrow, const DiracFiber& l_src, const DiracFiber& l_tgt,
                           const Mat& form);

// (omega + s*gamma - t*gamma, phi + dgamma), with sigma and the 3-forms updated.
GroupoidBundle gauge_qs(const GroupoidBundle& g, const std::vector<Mat>& gamma,
                        const std::vector<ThreeForm>& dgamma);

// The same groupoid with omega, sigma and phi negated.
GroupoidBundle opposite(const GroupoidBundle& g);
// One object, one unit arrow, all spaces zero.
GroupoidBundle point_groupoid();
ObjectFiber product_object(const ObjectFiber& a, const ObjectFiber& b);
ArrowFiber product_arrow(const ArrowFiber& a, const ArrowFiber& b, std::size_t src, std::size_t tgt);
ThreeForm direct_sum(const ThreeForm& a, const ThreeForm& b);
// All sampled pairs: object (i, j) has index i * |b.objects| + j, arrows and
// composable pairs likewise.
GroupoidBundle product_bundle(const GroupoidBundle& a, const GroupoidBundle& b);

// A groupoid morphism c : C -> G sampled at C's objects and arrows.
struct MorphismFiber {
    std::vector<std::size_t> obj;    // C object -> G object
    std::vector<Mat> c0;             // n_G x n_C
    std::vector<Mat> cA;             // r_G x r_C
    std::vector<std::size_t> arrow;  // C arrow -> G arrow
    std::vector<Mat> c1;             // m_G x m_C
};

MorphismFiber identity_morphism(const GroupoidBundle& g);
Report morphism_check(const GroupoidBundle& c, const GroupoidBundle& g, const MorphismFiber& f);
MorphismFiber compose(const MorphismFiber& second, const MorphismFiber& first);

// theta : f => g for morphisms f, g : H -> G. Per H object x: the G arrow
// theta(x) and the differential of theta at x.
struct NatTransFiber {
    std::vector<std::size_t> arrow;
    std::vector<Mat> theta_star;  // m_G x n_H
};

// theta*omega at each H object.
std::vector<Mat> pullback_by_transformation(const GroupoidBundle& g, const NatTransFiber& t);

// g*w - f*w = t*theta*w - s*theta*w at all H arrows, plus s theta_* = f_*, t theta_* = g_*.
Report nat_trans_form_identity(const GroupoidBundle& h, const GroupoidBundle& g, const MorphismFiber& f,
                               const MorphismFiber& gm, const NatTransFiber& theta);

// Vertical composite (eta * theta)(x) = eta(x) theta(x) using the G pair
// fibers at index pair_of[x]; checks (eta*theta)*w = eta*w + theta*w.
Report vertical_composite_identity(const GroupoidBundle& g, const NatTransFiber& eta, const NatTransFiber& theta,
                                   const std::vector<std::size_t>& pair_of, NatTransFiber* composite = nullptr);

}  // namespace diraclab
