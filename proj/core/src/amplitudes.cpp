#include "qlambda/amplitudes.hpp"

#include "qlambda/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qlambda {

namespace {

constexpr double kShellTol = 1e-10;
constexpr double kPoleTol = 1e-9;

double scale_of(std::initializer_list<FourVector> vs) {
    double s = 0.0;
    for (const auto& v : vs) s = std::max({s, std::abs(v.t), std::abs(v.x), std::abs(v.y), std::abs(v.z)});
    return s > 0.0 ? s : 1.0;
}

void require_on_shell(const FourVector& p, double m, const char* name, double scale) {
    const double off = minkowski_dot(p, p) - m * m;
    if (std::abs(off) > kShellTol * scale * scale || !(p.t > 0.0)) {
        std::ostringstream msg;
        msg << name << " = " << p << " is off shell (p^2 - m^2 = " << off << ")";
        throw Error(ErrorCode::OffShellInput, msg.str());
    }
}

void require_conserved(const FourVector& in, const FourVector& out, double scale) {
    const FourVector d = in - out;
    const double worst = std::max({std::abs(d.t), std::abs(d.x), std::abs(d.y), std::abs(d.z)});
    if (worst > kShellTol * scale) {
        std::ostringstream msg;
        msg << "four-momentum not conserved, residual " << d;
        throw Error(ErrorCode::OffShellInput, msg.str());
    }
}

void validate(const ComptonKinematics& kin, double m) {
    const double scale = scale_of({kin.p, kin.k, kin.p_out, kin.k_out, FourVector(m, 0, 0, 0)});
    require_on_shell(kin.p, m, "p", scale);
    require_on_shell(kin.k, 0.0, "k", scale);
    require_on_shell(kin.p_out, m, "p'", scale);
    require_on_shell(kin.k_out, 0.0, "k'", scale);
    require_conserved(kin.p + kin.k, kin.p_out + kin.k_out, scale);
}

void validate(const MollerKinematics& kin, double m) {
    const double scale = scale_of({kin.p1, kin.q1, kin.p2, kin.q2});
    require_on_shell(kin.p1, m, "p1", scale);
    require_on_shell(kin.q1, m, "q1", scale);
    require_on_shell(kin.p2, m, "p2", scale);
    require_on_shell(kin.q2, m, "q2", scale);
    require_conserved(kin.p1 + kin.q1, kin.p2 + kin.q2, scale);
}

double resolve_eta(const FourVector& total, const AmplitudeOptions& opt) {
    return opt.eta_override ? *opt.eta_override : eta(total);
}

double resolve_volume(const Constants& k, const AmplitudeOptions& opt) {
    return opt.volume_override ? *opt.volume_override : k.V;
}

void require_denominator(double denom, double scale, const std::string& where) {
    if (std::abs(denom) < kPoleTol * scale) {
        std::ostringstream msg;
        msg << where << ": energy denominator " << denom << " vanishes";
        throw Error(ErrorCode::PoleEncountered, msg.str());
    }
}

cplx sandwich(const BiSpinor& out, const Mat4& m, const BiSpinor& in) {
    return (out.bar() * m * in.components).value();
}

AmplitudeResult combine(const std::string& process, AmplitudeResult a, const AmplitudeResult& b) {
    a.process = process;
    a.parts.insert(a.parts.end(), b.parts.begin(), b.parts.end());
    a.total += b.total;
    a.closed_form += b.closed_form;
    a.textbook += b.textbook;
    a.textbook_ratio = a.textbook != 0.0 ? a.total / a.textbook : cplx{};
    return a;
}

}  // namespace

CouplingFactor coupling_factor(const Constants& k, double eta_value, double energy, double volume) {
    if (!(energy > 0.0)) throw Error(ErrorCode::PoleEncountered, "coupling needs a positive mode energy");
    return {k.e * k.c * k.hbar * eta_value * std::sqrt(1.0 / (volume * k.eps0 * energy)), eta_value, energy, volume};
}

ComptonExternals compton_externals(const ComptonKinematics& kin, const ComptonLabels& labels, double m,
                                   SpinorNorm norm) {
    return {u_spinor(kin.p.spatial(), labels.spin_in, m, norm), u_spinor(kin.p_out.spatial(), labels.spin_out, m, norm),
            polarization(kin.k.spatial(), labels.pol_in), polarization(kin.k_out.spatial(), labels.pol_out)};
}

AmplitudeResult fermion_line_channel(const std::string& label, const FourVector& q, const BiSpinor& u_in,
                                     const BiSpinor& u_out, const PolarizationVector& first,
                                     const PolarizationVector& second, double eta_value, const Constants& k,
                                     const AmplitudeOptions& opt) {
    const double m = u_in.mass;
    const Vec3 q3 = q.spatial();
    const double eq = on_shell_energy(q3, m);
    const double scale = std::max({std::abs(q.t), eq, m});
    const double denom_a = q.t - eq;
    const double denom_b = -(q.t + eq);
    require_denominator(denom_a, scale, label + "a");
    require_denominator(denom_b, scale, label + "b");

    const double c = coupling_factor(k, eta_value, eq, resolve_volume(k, opt)).value;
    AmplitudeResult r;
    r.process = label;
    r.frame = opt.frame;
    r.eta = eta_value;
    for (int s = 1; s <= 2; ++s) {
        const BiSpinor us = u_spinor(q3, s, m, SpinorNorm::Box);
        const cplx in_vertex = c * vertex_bilinear(us, first, u_in);
        const cplx out_vertex = c * vertex_bilinear(u_out, second, us);
        DiagramAmplitude a{label + "a_s" + std::to_string(s), in_vertex, out_vertex, denom_a,
                           in_vertex * out_vertex / denom_a};
        DiagramAmplitude b{label + "b_s" + std::to_string(s), out_vertex, in_vertex, denom_b,
                           out_vertex * in_vertex / denom_b};
        r.total += a.value + b.value;
        r.parts.push_back(std::move(a));
        r.parts.push_back(std::move(b));
    }

    const double virtuality = minkowski_dot(q, q) - m * m;
    const Mat4 eps_in = slash(first.components);
    const Mat4 eps_out = slash(second.components);
    const Mat4 id = Mat4::Identity();
    r.closed_form = c * c * sandwich(u_out, eps_out * (slash(on_shell(q3, m)) + m * id) * eps_in, u_in) / virtuality;
    r.textbook = k.e * k.e * sandwich(u_out, eps_out * (slash(q) + m * id) * eps_in, u_in) / virtuality;
    r.textbook_ratio = r.textbook != 0.0 ? r.total / r.textbook : cplx{};
    return r;
}

AmplitudeResult compton_pair_A(const ComptonKinematics& kin, const ComptonExternals& ext, const Constants& k,
                               const AmplitudeOptions& opt) {
    validate(kin, ext.u_in.mass);
    return fermion_line_channel("M1", kin.p + kin.k, ext.u_in, ext.u_out, ext.eps_in, ext.eps_out.conj(),
                                resolve_eta(kin.p + kin.k, opt), k, opt);
}

AmplitudeResult compton_pair_A(const ComptonKinematics& kin, const ComptonLabels& labels, const Constants& k,
                               const AmplitudeOptions& opt) {
    return compton_pair_A(kin, compton_externals(kin, labels, k.m_e, opt.norm), k, opt);
}

AmplitudeResult compton_pair_B(const ComptonKinematics& kin, const ComptonExternals& ext, const Constants& k,
                               const AmplitudeOptions& opt) {
    validate(kin, ext.u_in.mass);
    return fermion_line_channel("M2", kin.p - kin.k_out, ext.u_in, ext.u_out, ext.eps_out.conj(), ext.eps_in,
                                resolve_eta(kin.p + kin.k, opt), k, opt);
}

AmplitudeResult compton_pair_B(const ComptonKinematics& kin, const ComptonLabels& labels, const Constants& k,
                               const AmplitudeOptions& opt) {
    return compton_pair_B(kin, compton_externals(kin, labels, k.m_e, opt.norm), k, opt);
}

AmplitudeResult compton_total(const ComptonKinematics& kin, const ComptonExternals& ext, const Constants& k,
                              const AmplitudeOptions& opt) {
    return combine("compton", compton_pair_A(kin, ext, k, opt), compton_pair_B(kin, ext, k, opt));
}

AmplitudeResult compton_total(const ComptonKinematics& kin, const ComptonLabels& labels, const Constants& k,
                              const AmplitudeOptions& opt) {
    return compton_total(kin, compton_externals(kin, labels, k.m_e, opt.norm), k, opt);
}

MollerExternals moller_externals(const MollerKinematics& kin, const MollerSpins& spins, double m, SpinorNorm norm) {
    return {u_spinor(kin.p1.spatial(), spins.p1, m, norm), u_spinor(kin.q1.spatial(), spins.q1, m, norm),
            u_spinor(kin.p2.spatial(), spins.p2, m, norm), u_spinor(kin.q2.spatial(), spins.q2, m, norm)};
}

MollerResult moller_total(const MollerKinematics& kin, const MollerExternals& ext, const Constants& k,
                          const AmplitudeOptions& opt) {
    const double m = ext.p1.mass;
    validate(kin, m);
    const FourVector exchange = kin.p1 - kin.p2;
    const Vec3 k3 = exchange.spatial();
    const double ek = k3.norm();
    const double k0 = kin.p1.t - kin.p2.t;
    const double scale = scale_of({kin.p1, kin.q1});
    const double invariant = minkowski_dot(exchange, exchange);
    if (ek <= kPoleTol * scale || std::abs(invariant) <= kPoleTol * kPoleTol * scale * scale) {
        std::ostringstream msg;
        msg << "forward scattering, (p1 - p2)^2 = " << invariant << " for p1 = " << kin.p1 << ", p2 = " << kin.p2;
        throw Error(ErrorCode::ForwardSingularity, msg.str());
    }
    const double denom_a = k0 - ek;
    const double denom_b = (kin.q1.t - kin.q2.t) - ek;
    require_denominator(denom_a, scale, "moller A");
    require_denominator(denom_b, scale, "moller B");

    const double eta_value = resolve_eta(kin.p1 + kin.q1, opt);
    const double c = coupling_factor(k, eta_value, ek, resolve_volume(k, opt)).value;

    MollerResult out;
    out.energy_denominator = k0 * k0 - ek * ek;
    out.invariant_denominator = invariant;
    AmplitudeResult& r = out.amplitude;
    r.process = "moller";
    r.frame = opt.frame;
    r.eta = eta_value;

    const auto [e1, e2] = polarization_pair(k3);
    for (const PolarizationVector& eps : {e1, e2}) {
        // The -k photon of the second ordering occupies the same transverse mode.
        const cplx emit_p = c * vertex_bilinear(ext.p2, eps.conj(), ext.p1);
        const cplx absorb_q = c * vertex_bilinear(ext.q2, eps, ext.q1);
        const cplx emit_q = c * vertex_bilinear(ext.q2, eps.conj(), ext.q1);
        const cplx absorb_p = c * vertex_bilinear(ext.p2, eps, ext.p1);
        const std::string tag = "_pol" + std::to_string(eps.alpha);
        DiagramAmplitude a{"M1" + tag, emit_p, absorb_q, denom_a, emit_p * absorb_q / denom_a, 0.5};
        DiagramAmplitude b{"M2" + tag, emit_q, absorb_p, denom_b, emit_q * absorb_p / denom_b, 0.5};
        const cplx sum = a.weight * a.value + b.weight * b.value;
        const cplx closed = ek * emit_p * absorb_q / (k0 * k0 - ek * ek);
        out.per_polarization[static_cast<std::size_t>(eps.alpha - 1)] = {eps.alpha, sum, closed};
        r.total += sum;
        r.closed_form += closed;
        r.parts.push_back(std::move(a));
        r.parts.push_back(std::move(b));
    }

    const Eigen::Vector4cd jp = vector_current(ext.p2, ext.p1);
    const Eigen::Vector4cd jq = vector_current(ext.q2, ext.q1);
    const cplx contraction = jp[0] * jq[0] - jp[1] * jq[1] - jp[2] * jq[2] - jp[3] * jq[3];
    r.textbook = k.e * k.e * contraction / invariant;
    r.textbook_ratio = r.textbook != 0.0 ? r.total / r.textbook : cplx{};
    return out;
}

MollerResult moller_total(const MollerKinematics& kin, const MollerSpins& spins, const Constants& k,
                          const AmplitudeOptions& opt) {
    return moller_total(kin, moller_externals(kin, spins, k.m_e, opt.norm), k, opt);
}

std::vector<BoostScanRow> boost_scan(const BoostScanConfig& cfg, const Constants& k) {
    if (!(cfg.direction.norm() > 0.0)) throw Error(ErrorCode::InvalidArgument, "boost direction must be non-zero");
    const Vec3 dir = cfg.direction.normalized();
    const double m = k.m_e;

    auto evaluate = [&](const Boost& frame, const AmplitudeOptions& opt) -> cplx {
        if (cfg.process == Process::Compton) {
            const ComptonKinematics cm = compton_kinematics(cfg.energy, cfg.theta, Boost(), m);
            const ComptonExternals ext_cm = compton_externals(cm, cfg.compton, m, cfg.norm);
            const ComptonKinematics kin = compton_kinematics(cfg.energy, cfg.theta, frame, m);
            const ComptonExternals ext{normalized(boost_spinor(frame, ext_cm.u_in), cfg.norm),
                                       normalized(boost_spinor(frame, ext_cm.u_out), cfg.norm),
                                       polarization(kin.k.spatial(), cfg.compton.pol_in),
                                       polarization(kin.k_out.spatial(), cfg.compton.pol_out)};
            return compton_total(kin, ext, k, opt).total;
        }
        const MollerKinematics cm = moller_kinematics(cfg.energy, cfg.theta, Boost(), m);
        const MollerExternals ext_cm = moller_externals(cm, cfg.moller, m, cfg.norm);
        const MollerKinematics kin = moller_kinematics(cfg.energy, cfg.theta, frame, m);
        const MollerExternals ext{normalized(boost_spinor(frame, ext_cm.p1), cfg.norm),
                                  normalized(boost_spinor(frame, ext_cm.q1), cfg.norm),
                                  normalized(boost_spinor(frame, ext_cm.p2), cfg.norm),
                                  normalized(boost_spinor(frame, ext_cm.q2), cfg.norm)};
        return moller_total(kin, ext, k, opt).amplitude.total;
    };

    auto total_momentum = [&](const Boost& frame) {
        if (cfg.process == Process::Compton) {
            const auto kin = compton_kinematics(cfg.energy, cfg.theta, frame, m);
            return kin.p + kin.k;
        }
        const auto kin = moller_kinematics(cfg.energy, cfg.theta, frame, m);
        return kin.p1 + kin.q1;
    };

    std::vector<BoostScanRow> rows;
    rows.reserve(cfg.betas.size());
    double cm_abs = 0.0;
    {
        AmplitudeOptions opt;
        opt.norm = cfg.norm;
        cm_abs = std::abs(evaluate(Boost(), opt));
    }
    for (double beta : cfg.betas) {
        if (!(beta >= 0.0 && beta < 1.0)) {
            throw Error(ErrorCode::SuperluminalBoost, "scan beta must lie in [0, 1)");
        }
        const Boost frame(beta * dir);
        const double dilation = std::sqrt(1.0 - beta * beta);
        AmplitudeOptions opt;
        opt.norm = cfg.norm;
        opt.frame = frame;
        opt.volume_override = k.V * dilation;
        BoostScanRow row;
        row.beta = beta;
        row.eta = eta(total_momentum(frame));
        row.dilation = dilation;
        row.abs_amplitude = std::abs(evaluate(frame, opt));
        row.ratio_to_cm = cm_abs > 0.0 ? row.abs_amplitude / cm_abs : 0.0;
        opt.eta_override = 1.0;
        row.abs_amplitude_unit_eta = std::abs(evaluate(frame, opt));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace qlambda
