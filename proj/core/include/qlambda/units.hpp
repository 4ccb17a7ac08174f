#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>

namespace qlambda {

using Vec3 = Eigen::Vector3d;

/// Physical constants entering the coupling prefactors. Kinematic quantities
/// (energies, momenta, masses) are always expressed in energy units, i.e.
/// momenta are stored as |p|c and masses as mc^2.
struct Constants {
    double hbar = 1.0;
    double c = 1.0;
    double eps0 = 1.0;
    double e = 0.0;  // filled from alpha when not given explicitly
    double m_e = 1.0;
    double V = 1.0;
    double alpha = 1.0 / 137.035999;

    /// Natural units with e = sqrt(4 pi eps0 hbar c alpha).
    static Constants natural();

    /// Throws InvalidArgument unless every constant is strictly positive.
    void validate() const;
};

/// Reads `key = value` lines (blank lines and `#` comments ignored). Keys not
/// present keep their natural-unit defaults; `e` is derived from `alpha`
/// unless given. Unknown keys are rejected with ParseError.
Constants load_constants(std::istream& in);
Constants load_constants(const std::filesystem::path& path);

/// Contravariant four-vector, metric (+,-,-,-).
struct FourVector {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr FourVector() = default;
    constexpr FourVector(double t_, double x_, double y_, double z_) : t(t_), x(x_), y(y_), z(z_) {}
    FourVector(double t_, const Vec3& p) : t(t_), x(p.x()), y(p.y()), z(p.z()) {}

    Vec3 spatial() const { return {x, y, z}; }
    double operator[](int mu) const { return std::array{t, x, y, z}[static_cast<std::size_t>(mu)]; }

    FourVector& operator+=(const FourVector& o) {
        t += o.t; x += o.x; y += o.y; z += o.z;
        return *this;
    }
    FourVector& operator-=(const FourVector& o) {
        t -= o.t; x -= o.x; y -= o.y; z -= o.z;
        return *this;
    }
    friend FourVector operator+(FourVector a, const FourVector& b) { return a += b; }
    friend FourVector operator-(FourVector a, const FourVector& b) { return a -= b; }
    friend FourVector operator*(double s, const FourVector& a) { return {s * a.t, s * a.x, s * a.y, s * a.z}; }
    friend bool operator==(const FourVector&, const FourVector&) = default;
};

std::ostream& operator<<(std::ostream& os, const FourVector& p);

double minkowski_dot(const FourVector& a, const FourVector& b);

/// sqrt(P.P); SpacelikeVector when P.P < 0.
double invariant_mass(const FourVector& p);

/// Ratio of invariant mass to energy component. Equals 1 exactly when the
/// spatial part vanishes.
double eta(const FourVector& p);

/// Pure Lorentz boost with velocity beta (in units of c).
class Boost {
public:
    Boost() = default;
    explicit Boost(const Vec3& beta);

    static Boost along_x(double beta) { return Boost(Vec3(beta, 0.0, 0.0)); }

    /// Boost into the rest frame of `p` (timelike, positive energy).
    static Boost to_rest_frame(const FourVector& p);

    const Vec3& beta() const { return beta_; }
    double gamma() const { return gamma_; }
    /// Rapidity |atanh(beta)|.
    double rapidity() const;
    bool is_identity() const { return beta_.isZero(0.0); }
    Boost inverse() const { return Boost(-beta_); }

private:
    Vec3 beta_ = Vec3::Zero();
    double gamma_ = 1.0;
};

/// Active boost: a particle at rest acquires velocity beta.
FourVector boost(const Boost& v, const FourVector& p);

double on_shell_energy(const Vec3& p, double m);
FourVector on_shell(const Vec3& p, double m);

struct ComptonKinematics {
    FourVector p, k, p_out, k_out;
};

/// Electron-photon scattering built in the centre-of-mass frame: the photon of
/// energy `photon_energy` moves along +z against the electron, the outgoing
/// photon is rotated by `theta` in the x-z plane. All four momenta are then
/// boosted by `frame`.
ComptonKinematics compton_kinematics(double photon_energy, double theta, const Boost& frame, double m);

/// Same process with the electron at rest before the collision (lab frame),
/// outgoing photon energy from the Compton formula, then boosted by `frame`.
ComptonKinematics compton_lab_kinematics(double photon_energy, double theta, const Boost& frame, double m);

struct MollerKinematics {
    FourVector p1, q1, p2, q2;
};

/// Elastic electron-electron scattering at total CM energy `cm_energy`, beams
/// along z, scattering angle `theta` in the x-z plane, then boosted by
/// `frame`. BelowThreshold unless cm_energy > 2m.
MollerKinematics moller_kinematics(double cm_energy, double theta, const Boost& frame, double m);

}  // namespace qlambda
