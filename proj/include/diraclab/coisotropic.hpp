#pragma once

#include "diraclab/groupoid.hpp"

namespace diraclab {

// A morphism c : C -> G of fiber bundles together with a Dirac fiber on each C object.
// The background 3-form of L[x] is C.objects[x].phi.
struct CoisotropicDatum {
    GroupoidBundle C, G;
    MorphismFiber c;
    std::vector<DiracFiber> L;
};

// Everything the nondegeneracy map and the chain map see at one C object.
struct CoisoFiber {
    Mat rho_C;    // n_C x r_C
    Mat cA;       // r_G x r_C
    Mat c0;       // n_G x n_C
    Mat rho_G;    // n_G x r_G
    Mat sigma_G;  // n_G x r_G
    DiracFiber L;

    std::size_t n_C() const { return L.n; }
    std::size_t r_C() const { return rho_C.cols(); }
    std::size_t n_G() const { return rho_G.rows(); }
    std::size_t r_G() const { return rho_G.cols(); }
};

CoisoFiber fiber_at(const CoisotropicDatum& d, std::size_t x);

// b -> ((rho_C b, c^T sigma c_A b), c_A b) into L x_c A_G, both sitting in
// T_C + T*_C + A_G.
struct NondegMap {
    Mat map;                // (2 n_C + r_G) x r_C
    Subspace fiber_product; // {((v, a), e) : (v, a) in L, c0 v = rho_G e, a = c0^T sigma_G e}
    bool image_in_L = false;
    bool surjective = false;
    bool injective = false;
};

NondegMap nondeg_map(const CoisoFiber& f);
NondegMap nondeg_map(const CoisotropicDatum& d, std::size_t x);

Report is_coisotropic(const CoisotropicDatum& d);
Report is_strong(const CoisotropicDatum& d);

struct ChainMapResult {
    Report report;
    bool h0_iso = false, h1_iso = false, h2_iso = false;
    bool quasi_iso() const { return h0_iso && h1_iso && h2_iso; }
    NondegMap nondeg;
};

// Builds both rows of the chain map, checks the squares, computes cohomology
// of each row over Q and compares with injectivity/surjectivity of nondeg_map.
ChainMapResult chain_map_check(const CoisoFiber& f);
ChainMapResult chain_map_check(const CoisotropicDatum& d, std::size_t x);

// Random CoisoFiber with the image condition built in. The nondegeneracy map
// is surjective and/or injective depending on the random rank.
CoisoFiber random_coiso_fiber(RationalRng& rng, std::size_t max_dim = 3);

// Sampled orbit: G objects on the orbit, a column basis of T_xO for each
// (which must span im rho), and the G arrows with both ends on the orbit.
struct OrbitSample {
    std::vector<std::size_t> objects;
    std::vector<Mat> tangent;
    std::vector<std::size_t> arrows;
};

// The restricted groupoid G|_O with the inclusion, and L = graph of
// gamma(rho a, rho b) = omega(a, b). Throws std::invalid_argument if the
// tangent basis does not span im rho or gamma is not well defined.
CoisotropicDatum orbit_lagrangian(const GroupoidBundle& g, const OrbitSample& orbit);

Report zero_shifted_poisson_check(const GroupoidBundle& g, const std::vector<DiracFiber>& L);

struct InfinitesimalSample {
    Mat c;  // n_M x n_N
    DiracFiber L_N, L_M;
    ThreeForm psi, phi;
};

// dim of {((v, a), (w, b)) in L_N x L_M : c v = w, a = c^T b}.
std::size_t fiber_product_rank(const InfinitesimalSample& s);
Report infinitesimal_coisotropic_check(const std::vector<InfinitesimalSample>& samples);

}  // namespace diraclab
