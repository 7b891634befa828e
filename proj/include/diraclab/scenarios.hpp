#pragma once

#include "diraclab/dorfman.hpp"
#include "diraclab/intersection.hpp"
#include "diraclab/morita.hpp"

#include <functional>
#include <map>
#include <optional>

namespace diraclab {

// M x M over M = Q^n with omega = pr1*b - pr2*b, sampled at `points` copies
// of the (constant) object data. Throws std::invalid_argument unless b is an
// n x n nondegenerate antisymmetric matrix.
GroupoidBundle build_pair_groupoid(std::size_t n, const Mat& omega_base, std::size_t points = 2);

// sum_i dx_i ^ dy_i on Q^2k, x coordinates first.
Mat standard_symplectic(std::size_t k);

// Rotation (c, s) of the plane with c^2 + s^2 = 1.
struct Rotation {
    Q c, s;
    bool operator==(const Rotation& o) const { return c == o.c && s == o.s; }
};
Rotation half_angle_rotation(const Q& t);  // ((1 - t^2), 2t) / (1 + t^2)
Rotation operator*(const Rotation& a, const Rotation& b);
// e^{i theta} on C^n = Q^2n, (x, y) -> (c x - s y, s x + c y).
Mat rotation_matrix(const Rotation& r, std::size_t n);

// Coordinates of the orbit space near a sampled point and the differential
// of the quotient map there.
struct OrbitChart {
    std::size_t dim = 0;
    std::function<Vec(const Vec&)> point;
    std::function<Mat(const Vec&)> differential;  // dim x n_M
};

// w_j = z_{j+1} / z_1 on C^n, real coordinates (Re w, Im w). For n > 1 both
// maps throw std::domain_error where z_1 = 0.
OrbitChart projective_chart(std::size_t n);

// S^1 acting on C^n by rotation with moment map |z|^2 / 2, as the action
// groupoid of T*S^1 = S^1 x R over R.
struct HamiltonianActionDatum {
    std::size_t n = 0;
    std::vector<Q> levels;          // G object j sits at xi = levels[j]
    std::vector<Rotation> rotations;
    std::vector<Vec> points;        // C object x sits at z = points[x]
    CoisotropicDatum datum;         // G x| M -> G, L on M
    OrbitChart chart;
};

// A rational point with |z|^2 = r2 in Q^dim, or nothing if the search finds none.
std::optional<Vec> sphere_point(const Q& r2, std::size_t dim);

// `orbits` points on the level |z|^2 / 2 = level, each with its images under
// the sampled rotations, plus the origin. Throws std::invalid_argument for a
// negative level or one without rational points.
HamiltonianActionDatum build_circle_hamiltonian(std::size_t n, const Q& level, std::size_t orbits = 8,
                                                std::uint64_t seed = 1);
// The same data at explicit points of C^n.
HamiltonianActionDatum circle_action(std::size_t n, const std::vector<Vec>& points,
                                     const std::vector<Rotation>& rotations);

// Action compatibility and ker mu_* meet ker L = 0, and their agreement with
// is_coisotropic on the projection.
Report hamiltonian_check(const HamiltonianActionDatum& h);

// Isotropy of the level as a 0-dimensional orbit of G. Throws
// std::invalid_argument if the level is not sampled.
CoisotropicDatum level_datum(const HamiltonianActionDatum& h, const Q& level);

struct Reduction {
    std::vector<Vec> chart_points;   // per reduced point
    std::vector<DiracFiber> L;       // per reduced point, empty on failure
    std::vector<DiracFiber> oracle;  // from the level, one orbit point each
    IntersectionResult product;
    Report report;
};

// Reduced form at one level point from the moment map alone: the unique
// Omega with (pi B)^T Omega (pi B) = B^T omega B for a basis B of ker dmu.
// Throws std::invalid_argument when it does not exist.
Mat direct_reduced_form(const Mat& omega, const Mat& dmu, const Mat& pi_star);

// Strong intersection of `level` (a datum over h.datum.G) with the action,
// then transfer to the chart groupoid of the orbit space.
Reduction run_reduction(const HamiltonianActionDatum& h, const CoisotropicDatum& level);

// pi_ij = eps_ijk x_k on Q^3.
PolyDiracFrame build_lie_poisson_so3();
CoisotropicDatum build_orbit_restriction(const GroupoidBundle& g, const OrbitSample& orbit);

// Named scenario with text parameters, as read from a scenario file.
struct ScenarioSpec {
    std::string name;
    std::map<std::string, std::string> params;
    std::uint64_t seed = 1;
    Samples samples;

    // Throw std::invalid_argument on malformed values.
    Q scalar(const std::string& key, const Q& fallback) const;
    std::size_t count(const std::string& key, std::size_t fallback) const;
    std::string text(const std::string& key, const std::string& fallback) const;
};

struct Scenario {
    ScenarioSpec spec;
    std::vector<GroupoidBundle> bundles;
    std::vector<CoisotropicDatum> data;
    std::optional<HamiltonianActionDatum> hamiltonian;
    std::optional<PolyDiracFrame> frame;
    std::vector<Vec> frame_points;
    std::vector<std::string> suites;
};

struct CatalogEntry {
    std::string name;
    std::string summary;
    std::map<std::string, std::string> defaults;
};
const std::vector<CatalogEntry>& scenario_catalog();

// Throws std::invalid_argument on unknown names or parameters out of range.
Scenario build_scenario(const ScenarioSpec& spec);

// One suite of checks, or every suite of the scenario for "all". Throws
// std::invalid_argument for a suite the scenario does not offer.
Report run_suite(const Scenario& s, const std::string& suite);

}  // namespace diraclab
