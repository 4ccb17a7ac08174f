#include "support.hpp"

#include "qlambda/lambda.hpp"

#include <doctest.h>

#include <limits>

using namespace qlambda;
using cplx = std::complex<double>;

namespace {

CVec basis(int n, int i) {
    CVec v = CVec::Zero(n);
    v[i] = 1.0;
    return v;
}

LevelSystem random_system(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    LevelSystem sys;
    sys.energies = Eigen::VectorXd::Zero(n);
    sys.couplings = CMat::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        sys.energies[j] = 3.0 * u(rng);
        for (int k = 0; k < j; ++k) {
            sys.couplings(j, k) = cplx(u(rng), u(rng));
            sys.couplings(k, j) = std::conj(sys.couplings(j, k));
        }
    }
    return sys;
}

double max_deviation(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

TEST_SUITE("lambda") {

TEST_CASE("level system validation") {
    const LevelSystem lam = LevelSystem::lambda(0.0, 10.0, 0.1, cplx(0.0, 0.2));
    CHECK(lam.size() == 3);
    CHECK(lam.energies[2] == 0.0);
    CHECK(lam.couplings(1, 0) == cplx(0.1));
    CHECK(lam.couplings(2, 1) == cplx(0.0, 0.2));
    CHECK(lam.couplings(1, 2) == cplx(0.0, -0.2));
    CHECK(lam.couplings(2, 0) == cplx(0.0));
    lam.validate();

    LevelSystem bad = lam;
    bad.couplings(0, 1) = 0.3;
    CHECK(qtest::code_of([&] { bad.validate(); }) == ErrorCode::InvalidArgument);
    bad = lam;
    bad.couplings(1, 1) = 0.1;
    CHECK(qtest::code_of([&] { bad.validate(); }) == ErrorCode::InvalidArgument);
    LevelSystem one;
    one.energies = Eigen::VectorXd::Zero(1);
    one.couplings = CMat::Zero(1, 1);
    CHECK(qtest::code_of([&] { one.validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("uncoupled evolution keeps magnitudes") {
    LevelSystem sys;
    sys.energies = Eigen::Vector3d(0.0, 1.3, -2.0);
    sys.couplings = CMat::Zero(3, 3);
    CVec psi0(3);
    psi0 << 0.6, cplx(0.0, 0.8), 0.0;
    const Trajectory tr = evolve(sys, psi0, 50.0, 0.05);
    for (const auto& s : tr.states) {
        for (int i = 0; i < 3; ++i) CHECK(std::abs(std::abs(s[i]) - std::abs(psi0[i])) < 1e-12);
    }
}

TEST_CASE("resonant two-level Rabi oscillation") {
    const double omega = 0.37;
    const LevelSystem sys = LevelSystem::two_level(1.0, 1.0, omega);
    const Trajectory tr = evolve(sys, basis(2, 0), 40.0, 0.01, 1.0, 10);
    const auto p2 = tr.populations(1);
    for (std::size_t i = 0; i < p2.size(); ++i) {
        const double s = std::sin(omega * tr.times[i]);
        CHECK(std::abs(p2[i] - s * s) < 1e-8);
    }
    CHECK(fit_rabi_rate(tr.times, p2) == doctest::Approx(omega).epsilon(1e-8));

    // hbar enters as H / hbar.
    const Trajectory slow = evolve(sys, basis(2, 0), 40.0, 0.01, 2.0, 10);
    const auto q2 = slow.populations(1);
    for (std::size_t i = 0; i < q2.size(); ++i) {
        const double s = std::sin(omega * slow.times[i] / 2.0);
        CHECK(std::abs(q2[i] - s * s) < 1e-8);
    }
}

TEST_CASE("evolution is unitary") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        const LevelSystem sys = random_system(rng, 3);
        CVec psi0 = CVec::Random(3);
        psi0.normalize();
        const Trajectory tr = evolve(sys, psi0, 100.0, 0.01, 1.0, 1000);
        CHECK(std::abs(tr.states.back().norm() - 1.0) < 1e-9);
    }
    const LevelSystem sys = random_system(rng, 4);
    const Trajectory long_run = evolve(sys, basis(4, 2), 1000.0, 0.01, 1.0, 100000);
    CHECK(long_run.times.size() == 2);
    CHECK(std::abs(long_run.states.back().norm() - 1.0) < 1e-9);
}

TEST_CASE("time-dependent stepping reproduces the constant-H propagator") {
    const LevelSystem sys = LevelSystem::lambda(0.0, 2.0, 0.3, 0.2);
    const Trajectory a = evolve(sys, basis(3, 0), 5.0, 0.01);
    const Trajectory b = evolve([&](double) { return sys.hamiltonian(); }, basis(3, 0), 5.0, 0.01);
    CHECK((a.states.back() - b.states.back()).norm() < 1e-12);

    // Rotating-frame Hamiltonian must give the same populations as the lab frame.
    const Trajectory rot = evolve([&](double t) { return interaction_frame(sys, t); }, basis(3, 0), 5.0, 1e-3);
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(std::norm(rot.states.back()[i]) - std::norm(a.states.back()[i])) < 1e-5);
    }
}

TEST_CASE("evolve guards") {
    const LevelSystem sys = LevelSystem::two_level(0.0, 1.0, 0.1);
    CHECK(qtest::code_of([&] { evolve(sys, CVec::Ones(2), 1.0, 0.1); }) == ErrorCode::InvalidArgument);
    CHECK(qtest::code_of([&] { evolve(sys, basis(3, 0), 1.0, 0.1); }) == ErrorCode::InvalidArgument);
    CHECK(qtest::code_of([&] { evolve(sys, basis(2, 0), 1.0, 0.0); }) == ErrorCode::InvalidArgument);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto broken = [&](double t) -> CMat {
        CMat h = sys.hamiltonian();
        if (t > 0.5) h(1, 1) = nan;
        return h;
    };
    CHECK(qtest::code_of([&] { evolve(broken, basis(2, 0), 1.0, 0.1); }) == ErrorCode::StepTooLarge);
}

TEST_CASE("interaction frame") {
    const double de = 10.0;
    const LevelSystem sys = LevelSystem::lambda(0.0, de, cplx(0.1, 0.05), 0.2);
    CHECK((interaction_frame(sys, 0.0) - sys.couplings).norm() == 0.0);
    const double period = interaction_period(sys);
    CHECK(period == doctest::Approx(2.0 * std::numbers::pi / de).epsilon(1e-14));
    CHECK((interaction_frame(sys, period) - sys.couplings).norm() < 1e-12);
    const double t = 0.123;
    CHECK(std::abs(interaction_frame(sys, t)(1, 0) - sys.couplings(1, 0) * std::polar(1.0, de * t)) < 1e-15);
    CHECK(interaction_frame(sys, t).diagonal().isZero(0.0));
    CHECK(interaction_frame(sys, t).isApprox(interaction_frame(sys, t).adjoint(), 1e-15));
}

TEST_CASE("interaction period with several frequencies") {
    LevelSystem ladder;
    ladder.energies = Eigen::Vector3d(0.0, 1.0, 2.5);
    ladder.couplings = CMat::Zero(3, 3);
    ladder.couplings(1, 0) = ladder.couplings(0, 1) = 0.1;
    ladder.couplings(2, 1) = ladder.couplings(1, 2) = 0.1;
    // gaps 1 and 1.5: fundamental 0.5
    CHECK(interaction_period(ladder) == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-12));
    CHECK((interaction_frame(ladder, interaction_period(ladder)) - ladder.couplings).norm() < 1e-12);

    ladder.energies[2] = 1.0 + std::sqrt(2.0);
    CHECK(qtest::code_of([&] { interaction_period(ladder); }) == ErrorCode::IncommensurateFrequencies);

    const LevelSystem degenerate = LevelSystem::two_level(1.0, 1.0, 0.1);
    CHECK(qtest::code_of([&] { interaction_period(degenerate); }) == ErrorCode::DegenerateLevels);
    CHECK(qtest::code_of([&] { magnus_second_order(degenerate); }) == ErrorCode::DegenerateLevels);
}

TEST_CASE("second-order effective Hamiltonian") {
    const EffectiveHamiltonian lam = magnus_second_order(LevelSystem::lambda(0.0, 10.0, 0.1, 0.1));
    CHECK(std::abs(lam.analytic(2, 0) - cplx(-1e-3)) < 1e-15);
    CHECK(std::abs(lam.numeric(2, 0) - cplx(-1e-3)) < 1e-13);
    CHECK(lam.relative_mismatch() < 1e-10);
    CHECK(lam.analytic.isApprox(lam.analytic.adjoint(), 1e-12));
    CHECK((lam.numeric - lam.numeric.adjoint()).norm() < 1e-12 * lam.numeric.norm());

    const EffectiveHamiltonian off = magnus_second_order(LevelSystem::lambda(0.0, 10.0, 0.1, 0.0));
    CHECK(off.analytic(2, 0) == cplx(0.0));
    CHECK(std::abs(off.numeric(2, 0)) < 1e-15);
    CHECK(std::abs(off.analytic(0, 0) - cplx(-1e-3)) < 1e-15);

    const cplx omega(0.2, -0.1);
    const EffectiveHamiltonian two = magnus_second_order(LevelSystem::two_level(1.0, 4.0, omega));
    CHECK(std::abs(two.analytic(0, 0) - std::norm(omega) / (1.0 - 4.0)) < 1e-15);
    CHECK(std::abs(two.analytic(1, 1) + std::norm(omega) / (1.0 - 4.0)) < 1e-15);
    CHECK(two.relative_mismatch() < 1e-10);

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    for (int i = 0; i < 10; ++i) {
        const LevelSystem sys =
            LevelSystem::lambda(0.5, 0.5 + 3.0 + i, cplx(u(rng), u(rng)), cplx(u(rng), u(rng)));
        const EffectiveHamiltonian eh = magnus_second_order(sys, 1.7);
        CHECK(eh.relative_mismatch() < 1e-10);
        CHECK(eh.period == doctest::Approx(2.0 * std::numbers::pi * 1.7 / (3.0 + i)));
    }

    LevelSystem ladder;
    ladder.energies = Eigen::Vector3d(0.0, 1.0, 2.5);
    ladder.couplings = CMat::Zero(3, 3);
    ladder.couplings(1, 0) = 0.1;
    ladder.couplings(0, 1) = 0.1;
    ladder.couplings(2, 1) = cplx(0.0, 0.05);
    ladder.couplings(1, 2) = cplx(0.0, -0.05);
    CHECK(magnus_second_order(ladder).relative_mismatch() < 1e-10);
}

TEST_CASE("effective coupling") {
    CHECK(std::abs(effective_coupling(0.1, 0.1, 0.0, 10.0) - cplx(-1e-3)) < 1e-18);
    CHECK(effective_coupling(0.4, 0.0, 0.0, 1.0) == cplx(0.0));
    const cplx a = effective_coupling(cplx(0.1, 0.2), 0.3, 1.0, 2.5);
    const cplx b = effective_coupling(cplx(0.1, 0.2), 0.3, 2.5, 1.0);
    CHECK(a == -b);
    CHECK(qtest::code_of([] { effective_coupling(0.1, 0.1, 1.0, 1.0); }) == ErrorCode::PoleEncountered);
}

TEST_CASE("four-level elimination") {
    auto four_level = [](double omega) {
        LevelSystem sys;
        sys.energies = Eigen::Vector4d(0.0, 1.0, 0.0, 6.0);
        sys.couplings = CMat::Zero(4, 4);
        sys.couplings(1, 0) = sys.couplings(0, 1) = 0.05;
        sys.couplings(2, 1) = sys.couplings(1, 2) = 0.05;
        sys.couplings(3, 1) = omega;
        sys.couplings(1, 3) = std::conj(omega);
        return sys;
    };

    const LevelSystem untouched = eliminate_pair_level(four_level(0.0));
    CHECK(untouched.size() == 3);
    CHECK(untouched.energies == Eigen::Vector3d(0.0, 1.0, 0.0));

    LevelSystem shifted_case = four_level(0.1);
    shifted_case.energies[3] = shifted_case.energies[1] - 5.0;
    const LevelSystem shifted = eliminate_pair_level(shifted_case);
    CHECK(shifted.energies[1] - 1.0 == doctest::Approx(0.002).epsilon(1e-12));
    CHECK(shifted.couplings(1, 0) == cplx(0.05));
    CHECK(shifted.couplings(2, 1) == cplx(0.05));

    LevelSystem wrong = four_level(0.1);
    wrong.couplings(3, 0) = wrong.couplings(0, 3) = 0.01;
    CHECK(qtest::code_of([&] { eliminate_pair_level(wrong); }) == ErrorCode::InvalidArgument);
    LevelSystem pole = four_level(0.1);
    pole.energies[3] = pole.energies[1];
    CHECK(qtest::code_of([&] { eliminate_pair_level(pole); }) == ErrorCode::PoleEncountered);
    CHECK(qtest::code_of([] { eliminate_pair_level(LevelSystem::lambda(0, 1, 0.1, 0.1)); }) ==
          ErrorCode::InvalidArgument);

    // ODE vs ODE over one decade of Omega / |E2 - E4|.
    auto deviation = [&](double omega) {
        const LevelSystem full = four_level(omega);
        const LevelSystem reduced = eliminate_pair_level(full);
        const double transfer = std::numbers::pi / (2.0 * 0.05 * 0.05);
        const auto pf = evolve(full, basis(4, 0), transfer, 0.5, 1.0, 4).populations(2);
        const auto pr = evolve(reduced, basis(3, 0), transfer, 0.5, 1.0, 4).populations(2);
        return max_deviation(pf, pr);
    };
    const double d1 = deviation(0.5);
    const double d2 = deviation(0.05);
    CHECK(d2 * 5.0 <= d1);
}

TEST_CASE("Rabi fit") {
    std::vector<double> t, p;
    for (int i = 0; i <= 400; ++i) {
        t.push_back(0.05 * i);
        const double s = std::sin(0.3 * t.back());
        p.push_back(s * s);
    }
    CHECK(fit_rabi_rate(t, p) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(qtest::code_of([] { fit_rabi_rate({0.0, 1.0}, {0.0, 0.0}); }) == ErrorCode::InvalidArgument);
    CHECK(qtest::code_of([] { fit_rabi_rate({0.0}, {0.0, 0.0}); }) == ErrorCode::InvalidArgument);
}

}  // TEST_SUITE
