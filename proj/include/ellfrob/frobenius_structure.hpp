#pragma once

#include "ellfrob/theta_weierstrass.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>

namespace ellfrob {

using Mat3 = Eigen::Matrix3cd;
using Vec3 = Eigen::Vector3cd;
// T[k](i, j): upper index k, lower pair (i, j); indices 0,1,2 stand for t1,t2,t3
using Tensor3 = std::array<Mat3, 3>;

// Flat coordinates (t1, t2, t3 = 2 pi i tau); tau is stored instead of t3.
struct FlatPoint {
    cplx t1;
    cplx t2;
    HalfPlanePoint tau;
    cplx t3() const { return kTwoPiI * tau.tau(); }
};

class ModuliPoint {
public:
    ModuliPoint(cplx s1, cplx s2, HalfPlanePoint tau);
    cplx s1() const { return s1_; }
    cplx s2() const { return s2_; }
    HalfPlanePoint tau() const { return tau_; }

    FlatPoint flat(const SeriesConfig& cfg = {}) const;
    static ModuliPoint from_flat(const FlatPoint& t, const SeriesConfig& cfg = {});

private:
    cplx s1_, s2_;
    HalfPlanePoint tau_;
};

using Triple = std::array<cplx, 3>;

// u_i = s1 + s2^2 e_i, ordered by the critical points 1/2, (1+tau)/2, tau/2
Triple canonical_coordinates(const ModuliPoint& p, const SeriesConfig& cfg = {});

// F(z; s) = s2^2 wp~(z) + s1
cplx unfolding(cplx z, const ModuliPoint& p, const SeriesConfig& cfg = {});
// the same function written as t2^2 (wp~ - E2/12) + t1
cplx unfolding_flat(cplx z, const FlatPoint& t, const SeriesConfig& cfg = {});

// Residue pairing in the raw frame (d/ds1, d/ds2, d/ds3), s3 = 2 pi i tau, as the sum of
// trapezoid contour integrals around the three critical points.
Mat3 residue_pairing(const ModuliPoint& p, const SeriesConfig& cfg = {},
                     std::optional<double> radius = std::nullopt, int nodes = 256);
// The same pairing from a single contour around the pole z = 0. Only the (s1, s2) block agrees
// with residue_pairing: d/ds3 of F is not elliptic in z, so the residue theorem on the torus
// picks up a boundary term for the third row.
Mat3 residue_pairing_at_pole(const ModuliPoint& p, const SeriesConfig& cfg = {},
                             std::optional<double> radius = std::nullopt, int nodes = 256);
Mat3 residue_pairing_closed_form(const ModuliPoint& p, const SeriesConfig& cfg = {});
// d s / d t
Mat3 raw_from_flat_jacobian(const FlatPoint& t, const SeriesConfig& cfg = {});
// pairing pulled back to the flat frame
Mat3 residue_pairing_flat(const ModuliPoint& p, const SeriesConfig& cfg = {});

Mat3 flat_pairing();         // eta on the tangent frame
Mat3 flat_pairing_inverse(); // eta on the cotangent frame

struct FrobeniusTensors {
    Mat3 eta;
    Tensor3 C;     // C[k](i,j) = C^k_{ij}
    Mat3 g;        // g^{ij}
    Tensor3 Gamma; // Gamma[k](i,j) = Gamma^{ij}_k
    cplx potential_value;
};

cplx potential(const FlatPoint& t, const SeriesConfig& cfg = {});
// (dF/dt1, dF/dt2, dF/dt3)
Vec3 potential_gradient(const FlatPoint& t, const SeriesConfig& cfg = {});
// |t1 F_1 + t2 F_2 / 2 - 2F| / max(1, |F|)
double euler_homogeneity_residual(const FlatPoint& t, const SeriesConfig& cfg = {});
// third partial derivatives F_{ijk} of the potential (d/dt3 = (1/2 pi i) d/dtau)
std::array<Mat3, 3> potential_third_derivatives(const FlatPoint& t, const SeriesConfig& cfg = {});
Tensor3 structure_constants_from_potential(const FlatPoint& t, const SeriesConfig& cfg = {});
Mat3 intersection_form(const FlatPoint& t, const SeriesConfig& cfg = {});
Tensor3 christoffel(const FlatPoint& t, const SeriesConfig& cfg = {});
FrobeniusTensors frobenius_tensors(const FlatPoint& t, const SeriesConfig& cfg = {});

// d u_a / d t_k, equal to dF/dt_k at the critical point a
Mat3 canonical_jacobian(const FlatPoint& t, const SeriesConfig& cfg = {});
// flat-frame components of d/dt_i o d/dt_j computed in the algebra of functions on the critical set
Vec3 product_via_critical_values(const FlatPoint& t, int i, int j, const SeriesConfig& cfg = {});
Tensor3 structure_constants_from_critical_values(const FlatPoint& t, const SeriesConfig& cfg = {});
// rebuilt from the Christoffel symbols and the flat pairing
Tensor3 structure_constants_from_christoffel(const FlatPoint& t, const SeriesConfig& cfg = {});
// entry (a, b) of result[c] is the d/du_c component of d/du_a o d/du_b
Tensor3 canonical_products(const FlatPoint& t, const SeriesConfig& cfg = {});

Vec3 multiply(const Tensor3& C, const Vec3& a, const Vec3& b);
double wdvv_residual(const Tensor3& C);
double wdvv_residual(const FlatPoint& t, const SeriesConfig& cfg = {});

struct PrimitiveFormResiduals {
    std::array<double, 3> identities;  // t2t2, t2t3, t3t3 decompositions
    std::array<double, 3> conditions;  // d phi / dz against second t-derivatives of F
    double phi22_vs_zeta;              // phi_22 reproduced from the public zeta~
};
PrimitiveFormResiduals primitive_form_residuals(cplx z, const FlatPoint& t, const SeriesConfig& cfg = {});

cplx discriminant(const FlatPoint& t, const SeriesConfig& cfg = {});
cplx euler_multiplication_det(const FlatPoint& t, const SeriesConfig& cfg = {});

Triple lyashko_looijenga(const ModuliPoint& p, const SeriesConfig& cfg = {});
// max over a best matching of |a_i - b_pi(i)|
double multiset_distance(const Triple& a, const Triple& b);

struct LLInverseOptions {
    int grid = 9;
    int max_iter = 60;
    double damping = 0.5;
    double tol = 1e-13;
};
// Recovers one SL(2,Z) orbit representative: tau in the standard fundamental domain and
// s2 normalised to Re s2 > 0 (or Re s2 = 0, Im s2 > 0).
ModuliPoint ll_inverse(const Triple& u, const SeriesConfig& cfg = {}, const LLInverseOptions& opt = {});

// e_i(tau) for any tau in H via reduction to the fundamental domain
HalfPeriodValues half_periods_any(cplx tau, const SeriesConfig& cfg = {});

// the SL(2,Z) representative of (s1, s2, tau) described above
ModuliPoint canonical_representative(const ModuliPoint& p);

} // namespace ellfrob
