#include "qlambda/units.hpp"

#include "qlambda/error.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

namespace qlambda {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double charge_from_alpha(const Constants& k) {
    return std::sqrt(4.0 * std::numbers::pi * k.eps0 * k.hbar * k.c * k.alpha);
}

}  // namespace

Constants Constants::natural() {
    Constants k;
    k.e = charge_from_alpha(k);
    return k;
}

void Constants::validate() const {
    const std::pair<const char*, double> fields[] = {
        {"hbar", hbar}, {"c", c}, {"eps0", eps0}, {"e", e}, {"m_e", m_e}, {"V", V}, {"alpha", alpha}};
    for (const auto& [name, value] : fields) {
        if (!(value > 0.0) || !std::isfinite(value)) {
            throw Error(ErrorCode::InvalidArgument, std::string("constant '") + name + "' must be positive");
        }
    }
}

Constants load_constants(std::istream& in) {
    Constants k;
    std::optional<double> charge;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string text = trim(line.substr(eq + 1));
        double value = 0.0;
        std::istringstream vs(text);
        vs.imbue(std::locale::classic());
        if (!(vs >> value) || !(vs >> std::ws).eof()) {
            throw Error(ErrorCode::ParseError, "key '" + key + "': not a number: '" + text + "'");
        }
        if (key == "hbar") k.hbar = value;
        else if (key == "c") k.c = value;
        else if (key == "eps0") k.eps0 = value;
        else if (key == "e") charge = value;
        else if (key == "m_e") k.m_e = value;
        else if (key == "V") k.V = value;
        else if (key == "alpha") k.alpha = value;
        else throw Error(ErrorCode::ParseError, "unknown key '" + key + "'");
    }
    k.e = charge ? *charge : charge_from_alpha(k);
    k.validate();
    return k;
}

Constants load_constants(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
    return load_constants(in);
}

std::ostream& operator<<(std::ostream& os, const FourVector& p) {
    return os << '(' << p.t << ", " << p.x << ", " << p.y << ", " << p.z << ')';
}

double minkowski_dot(const FourVector& a, const FourVector& b) {
    return a.t * b.t - a.x * b.x - a.y * b.y - a.z * b.z;
}

double invariant_mass(const FourVector& p) {
    const double s = minkowski_dot(p, p);
    if (s < 0.0) {
        std::ostringstream msg;
        msg << "P.P = " << s << " < 0 for P = " << p;
        throw Error(ErrorCode::SpacelikeVector, msg.str());
    }
    return std::sqrt(s);
}

double eta(const FourVector& p) {
    if (!(p.t > 0.0)) {
        std::ostringstream msg;
        msg << "P0 must be positive, got P = " << p;
        throw Error(ErrorCode::NonpositiveEnergy, msg.str());
    }
    if (p.x == 0.0 && p.y == 0.0 && p.z == 0.0) return 1.0;
    return invariant_mass(p) / p.t;
}

Boost::Boost(const Vec3& beta) : beta_(beta) {
    const double b2 = beta.squaredNorm();
    if (!(b2 < 1.0)) {
        throw Error(ErrorCode::SuperluminalBoost, "|beta| = " + std::to_string(std::sqrt(b2)) + " >= 1");
    }
    gamma_ = 1.0 / std::sqrt(1.0 - b2);
}

Boost Boost::to_rest_frame(const FourVector& p) {
    if (!(p.t > 0.0)) throw Error(ErrorCode::NonpositiveEnergy, "rest frame needs positive energy");
    invariant_mass(p);
    return Boost(-p.spatial() / p.t);
}

double Boost::rapidity() const { return std::atanh(beta_.norm()); }

FourVector boost(const Boost& v, const FourVector& p) {
    if (v.is_identity()) return p;
    const Vec3& b = v.beta();
    const double g = v.gamma();
    const Vec3 x = p.spatial();
    const double bx = b.dot(x);
    const double t = g * (p.t + bx);
    const Vec3 xp = x + ((g - 1.0) * bx / b.squaredNorm() + g * p.t) * b;
    return {t, xp};
}

double on_shell_energy(const Vec3& p, double m) { return std::sqrt(p.squaredNorm() + m * m); }

FourVector on_shell(const Vec3& p, double m) { return {on_shell_energy(p, m), p}; }

namespace {

ComptonKinematics boosted(ComptonKinematics k, const Boost& frame) {
    return {boost(frame, k.p), boost(frame, k.k), boost(frame, k.p_out), boost(frame, k.k_out)};
}

void require_positive_photon(double photon_energy) {
    if (!(photon_energy > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "photon energy must be positive");
    }
}

}  // namespace

ComptonKinematics compton_kinematics(double photon_energy, double theta, const Boost& frame, double m) {
    require_positive_photon(photon_energy);
    const Vec3 k3(0.0, 0.0, photon_energy);
    const Vec3 k3_out = photon_energy * Vec3(std::sin(theta), 0.0, std::cos(theta));
    const double ep = on_shell_energy(k3, m);
    ComptonKinematics cm{{ep, Vec3(-k3)}, {photon_energy, k3}, {ep, Vec3(-k3_out)}, {photon_energy, k3_out}};
    return boosted(cm, frame);
}

ComptonKinematics compton_lab_kinematics(double photon_energy, double theta, const Boost& frame, double m) {
    require_positive_photon(photon_energy);
    if (!(m > 0.0)) throw Error(ErrorCode::InvalidArgument, "lab-frame Compton needs a massive target");
    const double e_out = photon_energy / (1.0 + photon_energy / m * (1.0 - std::cos(theta)));
    const FourVector p{m, 0.0, 0.0, 0.0};
    const FourVector k{photon_energy, 0.0, 0.0, photon_energy};
    const FourVector k_out{e_out, e_out * std::sin(theta), 0.0, e_out * std::cos(theta)};
    return boosted({p, k, p + k - k_out, k_out}, frame);
}

MollerKinematics moller_kinematics(double cm_energy, double theta, const Boost& frame, double m) {
    if (!(cm_energy > 2.0 * m)) {
        throw Error(ErrorCode::BelowThreshold,
                    "E_cm = " + std::to_string(cm_energy) + " must exceed 2m = " + std::to_string(2.0 * m));
    }
    const double e = 0.5 * cm_energy;
    const double pz = std::sqrt(e * e - m * m);
    const Vec3 in(0.0, 0.0, pz);
    const Vec3 out = pz * Vec3(std::sin(theta), 0.0, std::cos(theta));
    return {boost(frame, {e, in}), boost(frame, {e, Vec3(-in)}), boost(frame, {e, out}),
            boost(frame, {e, Vec3(-out)})};
}

}  // namespace qlambda
