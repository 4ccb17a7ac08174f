#pragma once

#include "qlambda/error.hpp"
#include "qlambda/units.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace qtest {

inline double rel_err(std::complex<double> a, std::complex<double> b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

inline qlambda::Vec3 random_vec(std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(rng), u(rng), u(rng)};
}

inline qlambda::Vec3 random_velocity(std::mt19937_64& rng, double max_speed) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> speed(0.0, max_speed);
    qlambda::Vec3 dir;
    do {
        dir = {u(rng), u(rng), u(rng)};
    } while (dir.norm() < 1e-3 || dir.norm() > 1.0);
    return speed(rng) * dir.normalized();
}

template <class F>
qlambda::ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const qlambda::Error& e) {
        return e.code();
    }
    FAIL("expected qlambda::Error");
    return qlambda::ErrorCode::InvalidArgument;
}

}  // namespace qtest
