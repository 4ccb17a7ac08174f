#include "qlambda/dirac.hpp"

#include "qlambda/error.hpp"

#include <cmath>

namespace qlambda {

namespace {

using Mat2 = Eigen::Matrix2cd;

const std::array<Mat2, 3>& pauli() {
    static const std::array<Mat2, 3> s = [] {
        const cplx i{0.0, 1.0};
        std::array<Mat2, 3> out;
        out[0] << 0, 1, 1, 0;
        out[1] << 0, -i, i, 0;
        out[2] << 1, 0, 0, -1;
        return out;
    }();
    return s;
}

Mat2 sigma_dot(const Vec3& p) {
    const auto& s = pauli();
    return p.x() * s[0] + p.y() * s[1] + p.z() * s[2];
}

Eigen::Vector2cd basis_spinor(int spin) {
    if (spin != 1 && spin != 2) throw Error(ErrorCode::InvalidArgument, "spin label must be 1 or 2");
    return spin == 1 ? Eigen::Vector2cd(1.0, 0.0) : Eigen::Vector2cd(0.0, 1.0);
}

double norm_factor(double energy, double m, SpinorNorm norm) {
    switch (norm) {
        case SpinorNorm::Box: return std::sqrt((energy + m) / (2.0 * energy));
        case SpinorNorm::Covariant:
            if (!(m > 0.0)) throw Error(ErrorCode::InvalidArgument, "covariant normalization needs m > 0");
            return std::sqrt((energy + m) / (2.0 * m));
    }
    return 1.0;
}

}  // namespace

const GammaSet& gamma_set() {
    static const GammaSet g = [] {
        GammaSet out;
        out.gamma[0] = Mat4::Zero();
        out.gamma[0].diagonal() << 1, 1, -1, -1;
        for (int i = 0; i < 3; ++i) {
            Mat4 m = Mat4::Zero();
            m.topRightCorner<2, 2>() = pauli()[static_cast<std::size_t>(i)];
            m.bottomLeftCorner<2, 2>() = -pauli()[static_cast<std::size_t>(i)];
            out.gamma[static_cast<std::size_t>(i) + 1] = m;
        }
        return out;
    }();
    return g;
}

Mat4 slash(const FourVector& a) {
    const auto& g = gamma_set();
    return a.t * g[0] - a.x * g[1] - a.y * g[2] - a.z * g[3];
}

Mat4 slash(const Eigen::Vector4cd& a) {
    const auto& g = gamma_set();
    return a[0] * g[0] - a[1] * g[1] - a[2] * g[2] - a[3] * g[3];
}

Eigen::RowVector4cd BiSpinor::bar() const { return components.adjoint() * gamma_set()[0]; }

BiSpinor u_spinor(const Vec3& p, int spin, double m, SpinorNorm norm) {
    if (m < 0.0) throw Error(ErrorCode::InvalidArgument, "mass must be non-negative");
    if (m == 0.0 && p.isZero(0.0)) throw Error(ErrorCode::MasslessAtRest, "massless spinor needs p != 0");
    const Eigen::Vector2cd chi = basis_spinor(spin);
    const double energy = on_shell_energy(p, m);
    BiSpinor u;
    u.components.head<2>() = chi;
    u.components.tail<2>() = sigma_dot(p) * chi / (energy + m);
    u.components *= norm_factor(energy, m, norm);
    u.momentum = p;
    u.spin = spin;
    u.mass = m;
    return u;
}

BiSpinor normalized(BiSpinor u, SpinorNorm norm) {
    double current = 0.0;
    switch (norm) {
        case SpinorNorm::Box: current = u.components.squaredNorm(); break;
        case SpinorNorm::Covariant: current = (u.bar() * u.components).value().real(); break;
    }
    if (!(current > 0.0)) throw Error(ErrorCode::InvalidArgument, "spinor cannot be normalized");
    u.components /= std::sqrt(current);
    return u;
}

Mat4 spin_sum(const Vec3& p, double m) {
    Mat4 sum = Mat4::Zero();
    for (int s = 1; s <= 2; ++s) {
        const BiSpinor u = u_spinor(p, s, m);
        sum += u.components * u.bar();
    }
    return sum;
}

Mat4 spin_sum_closed_form(const Vec3& p, double m) {
    const FourVector q = on_shell(p, m);
    return (slash(q) + m * Mat4::Identity()) / (2.0 * q.t);
}

PolarizationVector PolarizationVector::conj() const {
    PolarizationVector out = *this;
    out.components = components.conjugate();
    return out;
}

std::pair<PolarizationVector, PolarizationVector> polarization_pair(const Vec3& k) {
    const double kn = k.norm();
    if (!(kn > 0.0)) throw Error(ErrorCode::ZeroWavevector, "polarization needs k != 0");
    const Vec3 khat = k / kn;
    Eigen::Index axis = 0;
    khat.cwiseAbs().minCoeff(&axis);
    const Vec3 seed = Vec3::Unit(axis);
    const Vec3 e1 = (seed - seed.dot(khat) * khat).normalized();
    const Vec3 e2 = khat.cross(e1);

    auto make = [&](const Vec3& e, int alpha) {
        PolarizationVector eps;
        eps.components << 0.0, e.x(), e.y(), e.z();
        eps.wavevector = k;
        eps.alpha = alpha;
        return eps;
    };
    return {make(e1, 1), make(e2, 2)};
}

PolarizationVector polarization(const Vec3& k, int alpha) {
    if (alpha != 1 && alpha != 2) throw Error(ErrorCode::InvalidArgument, "polarization label must be 1 or 2");
    auto [e1, e2] = polarization_pair(k);
    return alpha == 1 ? e1 : e2;
}

cplx vertex_bilinear(const BiSpinor& ub, const PolarizationVector& eps, const BiSpinor& ua) {
    return (ub.bar() * slash(eps.components) * ua.components).value();
}

Eigen::Vector4cd vector_current(const BiSpinor& ub, const BiSpinor& ua) {
    const auto& g = gamma_set();
    const Eigen::RowVector4cd b = ub.bar();
    Eigen::Vector4cd j;
    for (int mu = 0; mu < 4; ++mu) j[mu] = (b * g[mu] * ua.components).value();
    return j;
}

Mat4 spinor_boost_matrix(const Boost& v) {
    if (v.is_identity()) return Mat4::Identity();
    const Vec3 n = v.beta().normalized();
    const double half = 0.5 * v.rapidity();
    Mat4 alpha_n = Mat4::Zero();
    alpha_n.topRightCorner<2, 2>() = sigma_dot(n);
    alpha_n.bottomLeftCorner<2, 2>() = sigma_dot(n);
    return std::cosh(half) * Mat4::Identity() + std::sinh(half) * alpha_n;
}

BiSpinor boost_spinor(const Boost& v, const BiSpinor& u) {
    BiSpinor out = u;
    out.components = spinor_boost_matrix(v) * u.components;
    out.momentum = boost(v, on_shell(u.momentum, u.mass)).spatial();
    return out;
}

}  // namespace qlambda
