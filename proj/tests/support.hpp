#pragma once

#include "hem/einstein.hpp"

#include <random>

namespace hem::testing {

/// Rational in [lo, hi] with denominator up to `den`.
inline Rational random_rational(std::mt19937_64& rng, int lo = 1, int hi = 9, int den = 7) {
    const int q = std::uniform_int_distribution<int>(1, den)(rng);
    return make_rational(std::uniform_int_distribution<int>(lo * q, hi * q)(rng), q);
}

/// Parameters with every L entry, b and d nonzero.
inline SpaceParameters random_params(std::size_t ell, std::mt19937_64& rng) {
    std::vector<Rational> b(ell), d(ell);
    for (auto& v : b) v = random_rational(rng);
    for (auto& v : d) v = random_rational(rng);
    SpaceParameters p(ell, b, d);
    for (std::size_t i = 0; i < ell; ++i)
        for (std::size_t j = i; j < ell; ++j)
            for (std::size_t k = j; k < ell; ++k)
                p.set_L(static_cast<int>(i), static_cast<int>(j), static_cast<int>(k), random_rational(rng));
    return p;
}

inline std::vector<Complex> random_point(std::size_t ell, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.5, 2.0), ph(-3.1, 3.1);
    std::vector<Complex> x;
    for (std::size_t i = 0; i < ell; ++i) x.push_back(std::polar(u(rng), ph(rng)));
    return x;
}

inline std::vector<Rational> random_rational_point(std::size_t ell, std::mt19937_64& rng) {
    std::vector<Rational> x;
    for (std::size_t i = 0; i < ell; ++i) x.push_back(random_rational(rng, 1, 5, 5));
    return x;
}

} // namespace hem::testing
