#pragma once

#include "qlambda/units.hpp"

#include <Eigen/Core>

#include <array>
#include <complex>
#include <utility>

namespace qlambda {

using cplx = std::complex<double>;
using Spinor = Eigen::Vector4cd;
using Mat4 = Eigen::Matrix4cd;

/// Dirac-representation gamma matrices gamma^0..gamma^3.
struct GammaSet {
    std::array<Mat4, 4> gamma;

    const Mat4& operator[](int mu) const { return gamma[static_cast<std::size_t>(mu)]; }
};

const GammaSet& gamma_set();

/// gamma^mu a_mu = gamma^0 a^0 - gamma^i a^i.
Mat4 slash(const FourVector& a);
Mat4 slash(const Eigen::Vector4cd& a);

enum class SpinorNorm {
    Box,        // u^dagger u = 1, completeness sum (qslash + m) / (2 E_q)
    Covariant,  // ubar u = 1
};

/// Positive-energy solution u_s(p). Spin labels are 1 and 2 (+z / -z in the
/// rest frame).
struct BiSpinor {
    Spinor components = Spinor::Zero();
    Vec3 momentum = Vec3::Zero();
    int spin = 1;
    double mass = 0.0;

    /// Row vector u^dagger gamma^0.
    Eigen::RowVector4cd bar() const;
};

BiSpinor u_spinor(const Vec3& p, int spin, double m, SpinorNorm norm = SpinorNorm::Box);

/// Rescales to the requested normalization without touching the direction.
BiSpinor normalized(BiSpinor u, SpinorNorm norm);

/// sum_s u_s ubar_s by explicit outer products of box-normalized spinors.
Mat4 spin_sum(const Vec3& p, double m);

/// (gamma . q_on + m) / (2 E_q) with q_on = (E_q, q).
Mat4 spin_sum_closed_form(const Vec3& p, double m);

struct PolarizationVector {
    Eigen::Vector4cd components = Eigen::Vector4cd::Zero();  // contravariant, eps^0 = 0
    Vec3 wavevector = Vec3::Zero();
    int alpha = 1;

    PolarizationVector conj() const;
    Vec3 spatial_real() const { return components.tail<3>().real(); }
};

/// Transverse real pair in Coulomb gauge. The seed is the coordinate axis on
/// which k has the smallest projection (lowest index on ties), Gram-Schmidt
/// against k gives eps_1 and eps_2 = khat x eps_1.
std::pair<PolarizationVector, PolarizationVector> polarization_pair(const Vec3& k);
PolarizationVector polarization(const Vec3& k, int alpha);

/// ubar_b (gamma^nu eps_nu) u_a.
cplx vertex_bilinear(const BiSpinor& ub, const PolarizationVector& eps, const BiSpinor& ua);

/// ubar_b gamma^mu u_a for mu = 0..3.
Eigen::Vector4cd vector_current(const BiSpinor& ub, const BiSpinor& ua);

/// Spinor representation S = cosh(w/2) + sinh(w/2) nhat.alpha of an active
/// boost. Preserves ubar u, not u^dagger u.
Mat4 spinor_boost_matrix(const Boost& v);
BiSpinor boost_spinor(const Boost& v, const BiSpinor& u);

}  // namespace qlambda
