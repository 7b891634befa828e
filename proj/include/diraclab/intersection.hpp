#pragma once

#include "diraclab/coisotropic.hpp"

namespace diraclab {

// A coisotropic datum C -> left x right^-. datum.G is
// product_bundle(left, opposite(right)), so G object k is the pair
// (k / |right.objects|, k % |right.objects|).
struct Correspondence {
    GroupoidBundle left, right;
    CoisotropicDatum datum;
};

Correspondence make_correspondence(GroupoidBundle left, GroupoidBundle right, GroupoidBundle C, MorphismFiber c,
                                   std::vector<DiracFiber> L);

// The two components of c at a C object (or arrow, with c0 replaced by c1
// and cA left empty).
struct Legs {
    std::size_t left = 0, right = 0;
    Mat c_left, c_right;
    Mat a_left, a_right;
};
Legs object_legs(const Correspondence& k, std::size_t x);
Legs arrow_legs(const Correspondence& k, std::size_t h);

struct RankEntry {
    std::string at;
    Subspace R, U, R_ann;
    std::size_t ker_L = 0, range_L = 0;
};

// Per product point: R, U and R° inside TG2 (or TG2 + TG2 for the homotopy
// product), plus the ranks of ker L and of the tangent range of L.
struct RankLedger {
    std::vector<RankEntry> points;
    bool constant() const;
};

struct StrongPoint {
    std::size_t x1 = 0, x2 = 0;
};

struct StrongProductFiber {
    StrongPoint at;
    Mat P;           // columns: basis of T_C inside T1 + T2
    Mat Q;           // columns: basis of A_C inside A1 + A2
    Mat rho;         // dim T_C x dim A_C in these bases
    Mat p1, p2;      // T_C -> T1, T_C -> T2
    Mat q1, q2;      // A_C -> A1, A_C -> A2
    DiracFiber L;    // p1*L1 + p2*L2
    bool transverse = false;  // im cA12 + im cA22 = A_G2
};

struct IntersectionResult {
    Correspondence product;  // toward left of d1 and right of d2
    std::vector<StrongProductFiber> fibers;
    RankLedger ledger;
    Report report;
};

// d1 : C1 -> G1 x G2^-, d2 : C2 -> G2 x G3^- with d1.right and d2.left the
// same bundle. Product points are all (x1, x2) whose G2 indices agree, and
// product arrows all (h1, h2) likewise, capped by the sample counts.
IntersectionResult strong_intersection(const Correspondence& d1, const Correspondence& d2,
                                       const Samples& samples = Samples{});

// 0 -> K1 + K2 -> ker rho_C meet ker c_* -> R° -> 0 at every product point,
// with K_i = ker rho_i meet ker c_i*.
Report strong_exact_sequence(const Correspondence& d1, const Correspondence& d2, const IntersectionResult& r);

// (x1, g, x2) with g : c12(x1) -> c22(x2) an arrow of G2.
struct HomotopyPoint {
    std::size_t x1 = 0, g = 0, x2 = 0;
};

struct HomotopyProductFiber {
    HomotopyPoint at;
    Mat P;             // columns: basis of T_C inside T1 + T_g + T2
    Mat rho;           // dim T_C x (r1 + r2)
    Mat p1, p0, p2;
    DiracFiber L;      // p1*L1 + p2*L2 - p0*graph(omega_g)
};

struct HomotopyResult {
    Correspondence product;
    std::vector<HomotopyProductFiber> fibers;
    RankLedger ledger;
    Report report;
    bool transverse = false;  // every sampled point: im cA12 + im cA22 = A_G2
};

// The product groupoid is sampled at its unit arrows (1, g, 1), one per point,
// so the units of C1, C2 and of G2 at both ends of g must be sampled.
// Throws std::invalid_argument otherwise.
HomotopyResult homotopy_intersection(const Correspondence& d1, const Correspondence& d2,
                                     const std::vector<HomotopyPoint>& points);
// All (x1, g, x2) with matching indices, capped by samples.objects.
std::vector<HomotopyPoint> homotopy_points(const Correspondence& d1, const Correspondence& d2,
                                           const Samples& samples = Samples{});

// L - c*L_G at every object of C, checked for constant rank and as a
// 0-shifted Poisson structure.
struct InducedPoisson {
    std::vector<DiracFiber> L;
    Report report;
};
InducedPoisson induced_poisson(const CoisotropicDatum& d);

// The pointwise part alone, for samples that do not come with a groupoid.
struct PoissonSample {
    Mat c0;
    DiracFiber L, L_G;
};
InducedPoisson induced_poisson(const std::vector<PoissonSample>& samples);

}  // namespace diraclab
