#include "qlambda/vacpol.hpp"

#include "qlambda/error.hpp"
#include "qlambda/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>
#include <vector>

namespace qlambda {

namespace {

constexpr double kPi = std::numbers::pi;

struct SphereFrame {
    Vec3 khat;
    Vec3 e1;
    Vec3 e2;
};

SphereFrame sphere_frame(const Vec3& k) {
    const auto [eps1, eps2] = polarization_pair(k);
    return {k.normalized(), eps1.spatial_real(), eps2.spatial_real()};
}

double photon_energy(const Vec3& k, const ShiftOptions& opt) {
    return opt.photon_energy ? *opt.photon_energy : k.norm();
}

void require_below_pair_threshold(const Vec3& k, double m, const ShiftOptions& opt) {
    // min over p of E_p + E_{p+k} is reached at p = -k/2
    const double ek = photon_energy(k, opt);
    const double threshold = std::sqrt(k.squaredNorm() + 4.0 * m * m);
    if (!(ek < threshold)) {
        std::ostringstream msg;
        msg << "photon energy " << ek << " reaches the pair threshold " << threshold;
        throw Error(ErrorCode::RealPairThreshold, msg.str());
    }
}

double sphere_average(double r, const SphereFrame& f, const Vec3& k, const Constants& c, const MomentumGrid& grid,
                      const GaussLegendre& cos_rule, const ShiftOptions& opt) {
    double sum = 0.0;
    for (int i = 0; i < cos_rule.order(); ++i) {
        const double ct = cos_rule.nodes[static_cast<std::size_t>(i)];
        const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        double ring = 0.0;
        for (int j = 0; j < grid.phi_points; ++j) {
            const double phi = 2.0 * kPi * (j + 0.5) / grid.phi_points;
            const Vec3 p = r * (st * std::cos(phi) * f.e1 + st * std::sin(phi) * f.e2 + ct * f.khat);
            ring += shift_density(p, k, c, opt);
        }
        sum += cos_rule.weights[static_cast<std::size_t>(i)] * ring / grid.phi_points;
    }
    return 0.5 * sum;
}

double measure(const Constants& c) { return c.V / std::pow(2.0 * kPi, 3); }

}  // namespace

double pair_eta(const Vec3& p, const Vec3& k, double m) {
    const Vec3 pk = p + k;
    return eta(on_shell(pk, m));
}

cplx pair_coupling(const Vec3& p, const Vec3& k, const PairLabels& labels, const Constants& c, PairVertex vertex,
                   double coupling_scale) {
    if (!(k.norm() > 0.0)) throw Error(ErrorCode::ZeroWavevector, "pair coupling needs k != 0");
    const double m = c.m_e;
    const Vec3 pk = p + k;
    const double pair_energy = on_shell_energy(p, m) + on_shell_energy(pk, m);
    const double prefactor = coupling_factor(c, pair_eta(p, k, m), pair_energy, c.V).value * coupling_scale;
    const BiSpinor u_p = u_spinor(p, labels.spin_p, m);
    const BiSpinor u_pk = u_spinor(pk, labels.spin_pk, m);
    const PolarizationVector eps = polarization(k, labels.alpha);
    switch (vertex) {
        case PairVertex::Creation: return prefactor * vertex_bilinear(u_pk, eps, u_p);
        case PairVertex::Conjugate: return prefactor * vertex_bilinear(u_p, eps.conj(), u_pk);
    }
    return {};
}

PairShiftSample shift_sample(const Vec3& p, const Vec3& k, const Constants& c, const ShiftOptions& opt) {
    if (!(k.norm() > 0.0)) throw Error(ErrorCode::ZeroWavevector, "pair shift needs k != 0");
    const double m = c.m_e;
    const Vec3 pk = p + k;
    const double ep = on_shell_energy(p, m);
    const double epk = on_shell_energy(pk, m);
    const double pair_energy = ep + epk;
    const double ek = photon_energy(k, opt);
    if (!(ek < pair_energy)) {
        std::ostringstream msg;
        msg << "E_k = " << ek << " >= E_p + E_{p+k} = " << pair_energy;
        throw Error(ErrorCode::RealPairThreshold, msg.str());
    }

    PairShiftSample out;
    out.p = p;
    out.k = k;
    out.eta1 = pair_eta(p, k, m);
    const double prefactor = coupling_factor(c, out.eta1, pair_energy, c.V).value * opt.coupling_scale;
    const double pref2 = prefactor * prefactor;

    const std::array<BiSpinor, 2> u_p{u_spinor(p, 1, m), u_spinor(p, 2, m)};
    const std::array<BiSpinor, 2> u_pk{u_spinor(pk, 1, m), u_spinor(pk, 2, m)};
    const auto [eps1, eps2] = polarization_pair(k);

    double creation = 0.0;
    double conjugate = 0.0;
    for (const PolarizationVector& eps : {eps1, eps2}) {
        const PolarizationVector eps_c = eps.conj();
        for (const auto& a : u_p) {
            for (const auto& b : u_pk) {
                creation += std::norm(vertex_bilinear(b, eps, a));
                conjugate += std::norm(vertex_bilinear(a, eps_c, b));
            }
        }
    }
    creation *= 0.5;
    conjugate *= 0.5;
    out.spinor_factor = creation;
    out.shift_density = pref2 * (creation / (ek - pair_energy) - conjugate / (ek + pair_energy));
    return out;
}

double shift_density(const Vec3& p, const Vec3& k, const Constants& c, const ShiftOptions& opt) {
    return shift_sample(p, k, c, opt).shift_density;
}

MomentumGrid MomentumGrid::refined() const {
    MomentumGrid g = *this;
    g.inner_panels *= 2;
    g.panels_per_decade *= 2;
    return g;
}

double angular_average_density(double r, const Vec3& k, const Constants& c, const MomentumGrid& grid,
                               const ShiftOptions& opt) {
    return sphere_average(r, sphere_frame(k), k, c, grid, GaussLegendre(grid.cos_points), opt);
}

double radial_slope(const Vec3& k, double r_lo, double r_hi, int samples, const Constants& c,
                    const MomentumGrid& grid, const ShiftOptions& opt) {
    if (!(r_lo > 0.0 && r_hi > r_lo) || samples < 2) {
        throw Error(ErrorCode::InvalidArgument, "slope fit needs 0 < r_lo < r_hi and >= 2 samples");
    }
    const SphereFrame frame = sphere_frame(k);
    const GaussLegendre cos_rule(grid.cos_points);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double x = std::log(r_lo) + (std::log(r_hi) - std::log(r_lo)) * i / (samples - 1);
        const double y = std::log(std::abs(sphere_average(std::exp(x), frame, k, c, grid, cos_rule, opt)));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = samples;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double tail_integral(const Vec3& k, double cutoff, const Constants& c, const MomentumGrid& grid,
                     const ShiftOptions& opt) {
    if (!(cutoff > 0.0)) throw Error(ErrorCode::InvalidArgument, "cutoff must be positive");
    require_below_pair_threshold(k, c.m_e, opt);
    const SphereFrame frame = sphere_frame(k);
    const GaussLegendre cos_rule(grid.cos_points);
    const GaussLegendre rule(2 * grid.radial_order);
    constexpr int panels = 4;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        sum += rule.integrate(
            [&](double t) {
                const double r = cutoff / t;
                return sphere_average(r, frame, k, c, grid, cos_rule, opt) * cutoff * cutoff * cutoff /
                       (t * t * t * t);
            },
            static_cast<double>(p) / panels, static_cast<double>(p + 1) / panels);
    }
    return measure(c) * 4.0 * kPi * sum;
}

namespace {

struct RadialSum {
    double total = 0.0;
    std::vector<double> cutoffs;
    std::vector<double> partials;
};

RadialSum radial_sum(const Vec3& k, double cutoff, const MomentumGrid& grid, const Constants& c,
                     const ShiftOptions& opt) {
    const double m = c.m_e;
    const SphereFrame frame = sphere_frame(k);
    const GaussLegendre cos_rule(grid.cos_points);
    const GaussLegendre rule(grid.radial_order);
    auto shell = [&](double r) { return 4.0 * kPi * r * r * sphere_average(r, frame, k, c, grid, cos_rule, opt); };

    const double decades = std::log10(cutoff / m);
    const int panels = std::max(1, static_cast<int>(std::ceil(decades * grid.panels_per_decade)));
    const double lo = std::log(m);
    const double width = (std::log(cutoff) - lo) / panels;
    const int total_panels = grid.inner_panels + panels;

    std::vector<double> pieces(static_cast<std::size_t>(total_panels), 0.0);
    auto panel = [&](int i) {
        if (i < grid.inner_panels) {
            return rule.integrate(shell, m * i / grid.inner_panels, m * (i + 1) / grid.inner_panels);
        }
        const int p = i - grid.inner_panels;
        // integrate in u = ln r, dr = r du
        return rule.integrate(
            [&](double u) {
                const double r = std::exp(u);
                return shell(r) * r;
            },
            lo + p * width, lo + (p + 1) * width);
    };
    const int workers = std::clamp(opt.threads, 1, total_panels);
    if (workers == 1) {
        for (int i = 0; i < total_panels; ++i) pieces[static_cast<std::size_t>(i)] = panel(i);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> failures(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (int i = w; i < total_panels; i += workers) pieces[static_cast<std::size_t>(i)] = panel(i);
                } catch (...) {
                    failures[static_cast<std::size_t>(w)] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (const auto& f : failures)
            if (f) std::rethrow_exception(f);
    }

    RadialSum out;
    double acc = 0.0;
    for (int i = 0; i < grid.inner_panels; ++i) acc += pieces[static_cast<std::size_t>(i)];
    out.cutoffs.push_back(m);
    out.partials.push_back(measure(c) * acc);
    for (int p = 0; p < panels; ++p) {
        acc += pieces[static_cast<std::size_t>(grid.inner_panels + p)];
        if ((p + 1) % grid.panels_per_decade == 0 || p + 1 == panels) {
            out.cutoffs.push_back(p + 1 == panels ? cutoff : std::exp(lo + (p + 1) * width));
            out.partials.push_back(measure(c) * acc);
        }
    }
    out.total = measure(c) * acc;
    return out;
}

}  // namespace

ShiftResult total_shift(const Vec3& k, double cutoff, const MomentumGrid& grid, const Constants& c,
                        const ShiftOptions& opt) {
    const double m = c.m_e;
    if (!(m > 0.0)) throw Error(ErrorCode::InvalidArgument, "vacuum polarization needs m_e > 0");
    if (!(k.norm() > 0.0)) throw Error(ErrorCode::ZeroWavevector, "photon momentum must be non-zero");
    if (!(cutoff > 10.0 * std::max(m, k.norm()))) {
        throw Error(ErrorCode::InvalidArgument, "cutoff must exceed 10 max(m, |k|)");
    }
    require_below_pair_threshold(k, m, opt);

    const RadialSum coarse = radial_sum(k, cutoff, grid, c, opt);
    const RadialSum fine = radial_sum(k, cutoff, grid.refined(), c, opt);
    const double change = std::abs(fine.total - coarse.total) / std::abs(fine.total);
    if (!(change <= grid.refinement_tolerance)) {
        std::ostringstream msg;
        msg << "doubling the radial grid changes E'_2 by " << change << " (tolerance "
            << grid.refinement_tolerance << ")";
        throw Error(ErrorCode::GridTooCoarse, msg.str());
    }

    ShiftResult out;
    out.shift = fine.total;
    out.report.cutoffs = coarse.cutoffs;
    out.report.partial_sums = coarse.partials;
    for (double l : coarse.cutoffs) out.report.tail_estimates.push_back(tail_integral(k, l, c, grid, opt));
    out.report.fitted_slope = radial_slope(k, cutoff / 100.0, cutoff, 21, c, grid, opt);
    out.report.refinement_change = change;
    return out;
}

double pair_factor(const MollerKinematics& kin, double shift) {
    const FourVector exchange = kin.p1 - kin.p2;
    const double ek = exchange.spatial().norm();
    if (!(ek > 0.0)) throw Error(ErrorCode::ForwardSingularity, "no momentum transfer");
    const double k0 = kin.p1.t - kin.p2.t;
    const double d = k0 * k0 - ek * ek;
    return shift / ek * (k0 * k0 + ek * ek) / d;
}

CorrectedAmplitude corrected_amplitude(const MollerKinematics& kin, const MollerSpins& spins, double shift,
                                       const Constants& c, const AmplitudeOptions& opt, double guard) {
    const MollerResult moller = moller_total(kin, spins, c, opt);
    double smallest = std::numeric_limits<double>::infinity();
    for (const auto& part : moller.amplitude.parts) smallest = std::min(smallest, std::abs(part.denom));
    if (std::abs(shift) > guard * smallest) {
        std::ostringstream msg;
        msg << "|E'_2| = " << std::abs(shift) << " exceeds " << guard << " x |E1 - E2| = " << guard * smallest;
        throw Error(ErrorCode::CorrectionTooLarge, msg.str());
    }
    CorrectedAmplitude out;
    out.base = moller.amplitude.total;
    for (const auto& part : moller.amplitude.parts) {
        const cplx product = part.omega1 * part.omega2;
        out.correction += part.weight * product * shift / (part.denom * part.denom);
        out.exact += part.weight * product / (part.denom - shift);
    }
    out.factor = pair_factor(kin, shift);
    return out;
}

PairFactorComparison pair_factors(const MollerKinematics& kin, double cutoff, const MomentumGrid& grid,
                                  const Constants& c) {
    const Boost to_cm = Boost::to_rest_frame(kin.p1 + kin.q1);
    const MollerKinematics cm{boost(to_cm, kin.p1), boost(to_cm, kin.q1), boost(to_cm, kin.p2), boost(to_cm, kin.q2)};
    PairFactorComparison out;
    out.shift_here = total_shift((kin.p1 - kin.p2).spatial(), cutoff, grid, c).shift;
    out.shift_cm = total_shift((cm.p1 - cm.p2).spatial(), cutoff, grid, c).shift;
    out.here = pair_factor(kin, out.shift_here);
    out.cm = pair_factor(cm, out.shift_cm);
    return out;
}

cplx corrected_pair_coupling(const Vec3& p, const Vec3& k, const PairLabels& labels, double p_cm, double p_here,
                             const Constants& c, PairVertex vertex) {
    if (!(p_cm * p_here > 0.0)) {
        std::ostringstream msg;
        msg << "P0 = " << p_cm << " and P = " << p_here << " must be non-zero with equal sign";
        throw Error(ErrorCode::SignMismatch, msg.str());
    }
    return pair_coupling(p, k, labels, c, vertex, std::sqrt(p_cm / p_here));
}

}  // namespace qlambda
