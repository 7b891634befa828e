#pragma once

#include "diraclab/coisotropic.hpp"

#include <stdexcept>

namespace diraclab {

// A form or Dirac structure that does not descend: not basic, not constant
// along a fiber, or not factoring through f.
class DescentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// f : H -> G at one H object.
struct WeakMoritaFiber {
    Mat f0;     // n_G x n_H, surjective
    Mat fA;     // r_G x r_H
    Mat rho_H;  // n_H x r_H
    Mat rho_G;  // n_G x r_G
    bool strict = false;
};

WeakMoritaFiber morita_fiber(const GroupoidBundle& H, const GroupoidBundle& G, const MorphismFiber& f,
                             std::size_t x, bool strict = false);

// f0 onto, (rho_H, f_*) onto T_H x_{T_G} A_G, and one-to-one when strict.
Report weak_morita_check(const GroupoidBundle& H, const GroupoidBundle& G, const MorphismFiber& f,
                         bool strict = false);

// b with rho b = v and f_* b = a. Throws std::invalid_argument unless f0 v = rho a.
Vec lift(const WeakMoritaFiber& w, const Vec& v, const Vec& a);

// alpha on every G object with beta = f*alpha. Throws DescentError.
std::vector<Mat> descend_basic_form(const GroupoidBundle& H, const GroupoidBundle& G, const MorphismFiber& f,
                                    const std::vector<Mat>& beta);
std::vector<ThreeForm> descend_basic_form(const GroupoidBundle& H, const GroupoidBundle& G, const MorphismFiber& f,
                                          const std::vector<ThreeForm>& beta);

// (target's omega pulled back along m) at every arrow of m's source.
std::vector<Mat> pulled_back_forms(const GroupoidBundle& target, const MorphismFiber& m);

struct DiracDescent {
    std::vector<DiracFiber> L;    // per G object
    std::vector<ThreeForm> zeta;  // f*zeta = phi
    Report report;
};

// f_*L, given t*L = s*L + graph(forms[j]) at every H arrow j (checked, and a
// failure marks the report hypothesis-violated). Throws DescentError when the
// pushforwards differ over one G object.
DiracDescent descend_dirac(const GroupoidBundle& H, const GroupoidBundle& G, const MorphismFiber& f,
                           const std::vector<DiracFiber>& L, const std::vector<Mat>& forms);

// Chart of the orbit space: orbit point and differential of the quotient map
// at every G object.
struct QuotientChart {
    std::size_t dim = 0;
    std::vector<std::size_t> point;
    std::vector<Mat> pi_star;  // dim x n
};

struct OrbitPoisson {
    std::vector<Mat> bivector;  // per chart point, empty if not Poisson
    Report report;
};

OrbitPoisson orbit_poisson_correspondence(const GroupoidBundle& g, const QuotientChart& chart,
                                          const std::vector<DiracFiber>& L);

// Right splittings tau_g : T_s(g) -> T_g, one per arrow.
struct Connection {
    std::vector<Mat> tau;
};

// tau = u_* at units and any right inverse of s_* elsewhere.
Connection unital_connection(const GroupoidBundle& g);
// Adds R_g Z with random Z at every non-unit arrow.
Connection random_connection(const GroupoidBundle& g, RationalRng& rng);
Report connection_check(const GroupoidBundle& g, const Connection& c);

// sigma-check at arrow j: v -> R_g^{-1}(v - tau s_* v), r_tgt x m.
Mat sigma_check(const ArrowFiber& a, const Mat& tau);
Mat ad_T(const ArrowFiber& a, const Mat& tau);  // n_tgt x n_src
Mat ad_A(const ArrowFiber& a, const Mat& tau);  // r_tgt x r_src
// K(g, h) at pair p, r_tgt(g) x n_src(h). Throws std::invalid_argument on a bad pair index.
Mat basic_curvature(const GroupoidBundle& g, const Connection& c, std::size_t pair);

// Ad_g Ad_h - Ad_gh against K(g, h) on both T and A at every sampled pair, and
// the pairing identity for Ad at every arrow.
Report adjoint_identities(const GroupoidBundle& g, const Connection& c);

// Identities of the chain homotopy theta-dot for theta : f => gm with
// inverse eta : gm => f; pair_of[x] is the pair (theta(x), eta(x)).
Report homotopy_identities(const GroupoidBundle& h, const GroupoidBundle& g, const MorphismFiber& f,
                           const MorphismFiber& gm, const NatTransFiber& theta, const NatTransFiber& eta,
                           const Connection& c, const std::vector<std::size_t>& pair_of);

// K ->(psi_i) C_i ->(c_i) G_i, K ->(gmap) L ->(phi_i) G_i, theta_i : c_i psi_i => phi_i gmap.
struct MoritaEquivalenceDatum {
    GroupoidBundle K, C1, C2, L, G1, G2;
    MorphismFiber psi1, psi2, gmap, phi1, phi2, c1, c2;
    NatTransFiber theta1, theta2;
    std::vector<Mat> gamma;         // per L object
    std::vector<ThreeForm> dgamma;  // per L object, as supplied
    std::vector<Mat> delta;         // per K object; empty means not stored
    bool strict = false;
};

// -gmap*gamma + theta1*omega1 - theta2*omega2 at every K object.
std::vector<Mat> connecting_form(const MoritaEquivalenceDatum& d);

// The Lagrangian span identities on L, the bijectivity of
// l -> (rho l, phi1 l, phi2 l), and the stored connecting form.
Report symplectic_morita_check(const MoritaEquivalenceDatum& d);

// The same equivalence read from C2 to C1, with gamma negated.
MoritaEquivalenceDatum reverse(const MoritaEquivalenceDatum& d);

struct TransferResult {
    std::vector<DiracFiber> L2;  // per C2 object
    std::vector<DiracFiber> L0;  // psi1*L1 + graph(delta) per K object
    Report report;
};

TransferResult transfer(const MoritaEquivalenceDatum& d, const std::vector<DiracFiber>& L1);

// L' = L + graph(beta), beta basic at the sampled arrows, dbeta = 0 as supplied.
Report gauge_equiv_check(const GroupoidBundle& c, const std::vector<DiracFiber>& L,
                         const std::vector<DiracFiber>& Lp, const std::vector<Mat>& beta,
                         const std::vector<ThreeForm>& dbeta);

// Points (k1, c, k2) of K1 x^h_C2 K2, with c an arrow of the shared C2.
struct ChainPoint {
    std::size_t k1 = 0, c = 0, k2 = 0;
};
std::vector<ChainPoint> chain_points(const MoritaEquivalenceDatum& d1, const MoritaEquivalenceDatum& d2);

// The composite connecting form against pr1*delta1 + pr2*delta2 + eta*c2*omega2 + zeta,
// then the composite transfer of L1 against T2(T1(L1)) gauged by the descent of zeta.
Report transfer_composition_check(const MoritaEquivalenceDatum& d1, const MoritaEquivalenceDatum& d2,
                                  const std::vector<DiracFiber>& L1);

}  // namespace diraclab
