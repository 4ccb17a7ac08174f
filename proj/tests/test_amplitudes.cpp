#include "support.hpp"

#include "qlambda/amplitudes.hpp"

#include <doctest.h>

using namespace qlambda;

namespace {

const Constants K = Constants::natural();

ComptonKinematics random_compton(std::mt19937_64& rng, bool boosted) {
    std::uniform_real_distribution<double> energy(0.05, 3.0);
    std::uniform_real_distribution<double> angle(0.05, 3.1);
    const Boost frame = boosted ? Boost(qtest::random_velocity(rng, 0.9)) : Boost();
    return compton_kinematics(energy(rng), angle(rng), frame, K.m_e);
}

ComptonLabels random_labels(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> l(1, 2);
    return {l(rng), l(rng), l(rng), l(rng)};
}

// e^2 ubar' eps'* (qslash + m) eps u / (q^2 - m^2), assembled from raw gamma matrices.
cplx textbook_channel(const FourVector& q, const BiSpinor& in, const BiSpinor& out,
                      const Eigen::Vector4cd& first, const Eigen::Vector4cd& second) {
    const GammaSet& g = gamma_set();
    auto slash_raw = [&](const Eigen::Vector4cd& a) {
        return Mat4(g[0] * a[0] - g[1] * a[1] - g[2] * a[2] - g[3] * a[3]);
    };
    Eigen::Vector4cd qv;
    qv << q.t, q.x, q.y, q.z;
    const double m = in.mass;
    const Mat4 numerator = slash_raw(second) * (slash_raw(qv) + m * Mat4::Identity()) * slash_raw(first);
    const cplx sandwich = (out.components.adjoint() * g[0] * numerator * in.components).value();
    return K.e * K.e * sandwich / (minkowski_dot(q, q) - m * m);
}

}  // namespace

TEST_SUITE("amplitudes") {

TEST_CASE("coupling factor") {
    Constants k = K;
    k.hbar = 2.0;
    k.c = 3.0;
    k.eps0 = 0.5;
    const CouplingFactor f = coupling_factor(k, 0.8, 1.7, 4.0);
    CHECK(f.value == doctest::Approx(k.e * 3.0 * 2.0 * 0.8 * std::sqrt(1.0 / (4.0 * 0.5 * 1.7))).epsilon(1e-15));
    CHECK(f.eta == 0.8);
    CHECK(f.energy == 1.7);
    CHECK(f.volume == 4.0);
    CHECK(qtest::code_of([&] { coupling_factor(k, 1.0, 0.0, 1.0); }) == ErrorCode::PoleEncountered);
}

TEST_CASE("Compton channels equal their propagator closed forms") {
    std::mt19937_64 rng(101);
    for (int i = 0; i < 200; ++i) {
        const bool boosted = i % 2 == 1;
        const ComptonKinematics kin = random_compton(rng, boosted);
        const ComptonLabels labels = random_labels(rng);
        const AmplitudeResult a = compton_pair_A(kin, labels, K);
        const AmplitudeResult b = compton_pair_B(kin, labels, K);
        CHECK(qtest::rel_err(a.total, a.closed_form) < 1e-10);
        CHECK(qtest::rel_err(b.total, b.closed_form) < 1e-10);
        if (!boosted) {
            CHECK(a.eta == 1.0);
            CHECK(b.eta == 1.0);
        } else {
            CHECK(a.eta == doctest::Approx(eta(kin.p + kin.k)).epsilon(1e-15));
        }
        for (const auto& part : a.parts) {
            CHECK(std::abs(part.value * part.denom - part.omega1 * part.omega2) <=
                  1e-14 * std::abs(part.omega1 * part.omega2));
        }
    }
}

TEST_CASE("Compton channel structure") {
    const ComptonKinematics kin = compton_kinematics(0.9, 2.0, Boost(Vec3(0.2, -0.3, 0.1)), K.m_e);
    const ComptonLabels labels{1, 2, 2, 1};
    const AmplitudeResult a = compton_pair_A(kin, labels, K);
    REQUIRE(a.parts.size() == 4);
    CHECK(a.parts[0].name == "M1a_s1");
    CHECK(a.parts[1].name == "M1b_s1");
    CHECK(a.parts[3].name == "M1b_s2");

    const FourVector q = kin.p + kin.k;
    const double eq = on_shell_energy(q.spatial(), K.m_e);
    CHECK(a.parts[0].denom == doctest::Approx(kin.p.t + kin.k.t - eq).epsilon(1e-14));
    CHECK(a.parts[1].denom == doctest::Approx(-(q.t + eq)).epsilon(1e-14));
    CHECK(a.parts[1].denom < 0.0);

    // Crossing (k, eps) -> (-k', eps'*) turns the s-channel line into the u-channel line.
    const ComptonExternals ext = compton_externals(kin, labels, K.m_e);
    const AmplitudeResult crossed = fermion_line_channel("X", kin.p + (-1.0) * kin.k_out, ext.u_in, ext.u_out,
                                                         ext.eps_out.conj(), ext.eps_in, a.eta, K, {});
    const AmplitudeResult b = compton_pair_B(kin, labels, K);
    CHECK(qtest::rel_err(crossed.total, b.total) < 1e-14);

    // The summed total does not depend on how the parts are grouped.
    const AmplitudeResult total = compton_total(kin, labels, K);
    CHECK(total.parts.size() == 8);
    cplx forward = 0.0, backward = 0.0;
    for (const auto& p : total.parts) forward += p.weight * p.value;
    for (auto it = total.parts.rbegin(); it != total.parts.rend(); ++it) backward += it->weight * it->value;
    CHECK(qtest::rel_err(total.total, forward) < 1e-14);
    CHECK(qtest::rel_err(total.total, backward) < 1e-14);
    CHECK(qtest::rel_err(total.total, a.total + b.total) < 1e-15);
    CHECK(qtest::rel_err(total.closed_form, a.closed_form + b.closed_form) < 1e-15);
}

TEST_CASE("Compton textbook form matches an independent assembly") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        const ComptonKinematics kin = random_compton(rng, i % 2 == 1);
        const ComptonLabels labels = random_labels(rng);
        const ComptonExternals ext = compton_externals(kin, labels, K.m_e);
        const cplx expected =
            textbook_channel(kin.p + kin.k, ext.u_in, ext.u_out, ext.eps_in.components,
                             ext.eps_out.components.conjugate()) +
            textbook_channel(kin.p - kin.k_out, ext.u_in, ext.u_out, ext.eps_out.components.conjugate(),
                             ext.eps_in.components);
        const AmplitudeResult r = compton_total(kin, labels, K);
        CHECK(qtest::rel_err(r.textbook, expected) < 1e-12);
        CHECK(qtest::rel_err(r.textbook_ratio, r.total / r.textbook) < 1e-15);
    }
}

TEST_CASE("Compton u-channel is spacelike below the mass shell for backscatter") {
    for (double theta : {2.5, 2.8, 3.1}) {
        const ComptonKinematics kin = compton_kinematics(1.2, theta, Boost(), K.m_e);
        const FourVector q = kin.p - kin.k_out;
        CHECK(minkowski_dot(q, q) < K.m_e * K.m_e);
    }
}

TEST_CASE("eta enters the amplitude squared") {
    const ComptonKinematics kin = compton_kinematics(0.6, 1.3, Boost::along_x(0.5), K.m_e);
    AmplitudeOptions unit;
    unit.eta_override = 1.0;
    const AmplitudeResult plain = compton_total(kin, ComptonLabels{}, K);
    const AmplitudeResult one = compton_total(kin, ComptonLabels{}, K, unit);
    CHECK(qtest::rel_err(plain.total, plain.eta * plain.eta * one.total) < 1e-14);
    CHECK(plain.eta == doctest::Approx(std::sqrt(1.0 - 0.25)).epsilon(1e-12));
}

TEST_CASE("degenerate polarization gives a vanishing amplitude") {
    const ComptonKinematics kin = compton_kinematics(0.6, 1.3, Boost(), K.m_e);
    ComptonExternals ext = compton_externals(kin, ComptonLabels{}, K.m_e);
    ext.eps_in.components.setZero();
    const AmplitudeResult r = compton_total(kin, ext, K);
    CHECK(r.total == cplx(0.0));
    CHECK(r.closed_form == cplx(0.0));
    for (const auto& p : r.parts) CHECK(p.value == cplx(0.0));
}

TEST_CASE("Compton input validation") {
    ComptonKinematics kin = compton_kinematics(0.6, 1.3, Boost(), K.m_e);
    ComptonKinematics broken = kin;
    broken.p_out.t += 1e-3;
    CHECK(qtest::code_of([&] { compton_pair_A(broken, ComptonLabels{}, K); }) == ErrorCode::OffShellInput);
    broken = kin;
    broken.k.t *= 1.01;
    CHECK(qtest::code_of([&] { compton_total(broken, ComptonLabels{}, K); }) == ErrorCode::OffShellInput);

    const ComptonExternals ext = compton_externals(kin, ComptonLabels{}, K.m_e);
    const FourVector resonant = on_shell(Vec3(0.1, 0.2, 0.3), K.m_e);
    CHECK(qtest::code_of([&] {
              fermion_line_channel("R", resonant, ext.u_in, ext.u_out, ext.eps_in, ext.eps_out, 1.0, K, {});
          }) == ErrorCode::PoleEncountered);
}

TEST_CASE("Moller orderings reproduce the photon propagator") {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> ecm(2.2, 6.0);
    std::uniform_real_distribution<double> angle(0.1, 3.0);
    std::uniform_int_distribution<int> spin(1, 2);
    for (int i = 0; i < 200; ++i) {
        const Boost frame = i % 2 ? Boost(qtest::random_velocity(rng, 0.9)) : Boost();
        const MollerKinematics kin = moller_kinematics(ecm(rng), angle(rng), frame, K.m_e);
        const MollerSpins spins{spin(rng), spin(rng), spin(rng), spin(rng)};
        const MollerResult r = moller_total(kin, spins, K);
        for (const auto& term : r.per_polarization) {
            CHECK(qtest::rel_err(term.ordering_sum, term.closed_form) < 1e-10);
        }
        const FourVector exchange = kin.p1 - kin.p2;
        CHECK(std::abs(r.energy_denominator - minkowski_dot(exchange, exchange)) <
              1e-12 * std::max(1.0, exchange.t * exchange.t + exchange.spatial().squaredNorm()));
        CHECK(r.invariant_denominator == minkowski_dot(exchange, exchange));
        CHECK(r.amplitude.parts.size() == 4);

        // Textbook e^2 (ubar2 g^mu u1)(ubar2' g_mu u1') / (p1 - p2)^2 from raw currents.
        const MollerExternals ext = moller_externals(kin, spins, K.m_e);
        const GammaSet& g = gamma_set();
        cplx contraction = 0.0;
        for (int mu = 0; mu < 4; ++mu) {
            const cplx jp = (ext.p2.components.adjoint() * g[0] * g[mu] * ext.p1.components).value();
            const cplx jq = (ext.q2.components.adjoint() * g[0] * g[mu] * ext.q1.components).value();
            contraction += (mu == 0 ? 1.0 : -1.0) * jp * jq;
        }
        CHECK(qtest::rel_err(r.amplitude.textbook, K.e * K.e * contraction / minkowski_dot(exchange, exchange)) <
              1e-12);
    }
}

TEST_CASE("Moller forward behaviour") {
    CHECK(qtest::code_of([] { moller_total(moller_kinematics(3.0, 0.0, Boost(), K.m_e), MollerSpins{}, K); }) ==
          ErrorCode::ForwardSingularity);
    double previous = 0.0;
    for (double theta : {0.8, 0.4, 0.2, 0.1, 0.05, 0.02, 0.01}) {
        const MollerResult r = moller_total(moller_kinematics(3.0, theta, Boost(), K.m_e), MollerSpins{}, K);
        const double size = std::abs(r.amplitude.total);
        CHECK(size > previous);
        previous = size;
    }
    MollerKinematics broken = moller_kinematics(3.0, 1.0, Boost(), K.m_e);
    broken.q2.x += 1e-4;
    CHECK(qtest::code_of([&] { moller_total(broken, MollerSpins{}, K); }) == ErrorCode::OffShellInput);
}

TEST_CASE("boost scan") {
    BoostScanConfig cfg;
    cfg.betas = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    cfg.energy = 0.8;
    cfg.theta = 1.1;
    for (Process process : {Process::Compton, Process::Moller}) {
        cfg.process = process;
        cfg.energy = process == Process::Compton ? 0.8 : 3.0;
        cfg.norm = SpinorNorm::Box;
        const auto box = boost_scan(cfg, K);
        cfg.norm = SpinorNorm::Covariant;
        const auto cov = boost_scan(cfg, K);
        REQUIRE(box.size() == cfg.betas.size());
        CHECK(box[0].ratio_to_cm == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(box[0].eta == 1.0);
        for (std::size_t i = 0; i < box.size(); ++i) {
            const double b = cfg.betas[i];
            CHECK(std::abs(box[i].eta - std::sqrt(1.0 - b * b)) < 1e-12);
            CHECK(box[i].dilation == std::sqrt(1.0 - b * b));
            CHECK(box[i].eta == cov[i].eta);
            CHECK(box[i].abs_amplitude ==
                  doctest::Approx(box[i].eta * box[i].eta * box[i].abs_amplitude_unit_eta).epsilon(1e-12));
            CHECK(std::isfinite(box[i].abs_amplitude));
        }
        CHECK(box[5].abs_amplitude != doctest::Approx(cov[5].abs_amplitude));
    }
    cfg.betas = {1.0};
    CHECK(qtest::code_of([&] { boost_scan(cfg, K); }) == ErrorCode::SuperluminalBoost);
    cfg.betas = {-0.1};
    CHECK(qtest::code_of([&] { boost_scan(cfg, K); }) == ErrorCode::SuperluminalBoost);
}

}  // TEST_SUITE
