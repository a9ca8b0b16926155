#include "hem/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace hem {

namespace {

// Outward rounding simulated by relative inflation after each operation.
constexpr double kInflate = 0x1p-40;

struct Iv {
    double lo = 0, hi = 0;
};

Iv widen(double a, double b) {
    constexpr double tiny = std::numeric_limits<double>::denorm_min();
    return {a - kInflate * std::abs(a) - tiny, b + kInflate * std::abs(b) + tiny};
}
Iv operator+(Iv a, Iv b) { return widen(a.lo + b.lo, a.hi + b.hi); }
Iv operator-(Iv a, Iv b) { return widen(a.lo - b.hi, a.hi - b.lo); }
Iv operator*(Iv a, Iv b) {
    const double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return widen(*std::min_element(p, p + 4), *std::max_element(p, p + 4));
}

struct CI {
    Iv re, im;
};

CI point(Complex z) { return {{z.real(), z.real()}, {z.imag(), z.imag()}}; }
CI operator+(const CI& a, const CI& b) { return {a.re + b.re, a.im + b.im}; }
CI operator-(const CI& a, const CI& b) { return {a.re - b.re, a.im - b.im}; }
CI operator*(const CI& a, const CI& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }

CI eval(const ComplexPolynomial& p, const std::vector<CI>& X) {
    CI s = point(0.0);
    for (const auto& [e, c] : p.sorted_terms()) {
        CI m = point(c);
        for (std::size_t j = 0; j < e.size(); ++j)
            for (int k = 0; k < e[j]; ++k) m = m * X[j];
        s = s + m;
    }
    return s;
}

bool strictly_inside(const Iv& a, const Iv& b) { return a.lo > b.lo && a.hi < b.hi; }

struct Cleared {
    std::vector<ComplexPolynomial> f;
    std::vector<std::vector<ComplexPolynomial>> J;
};

Cleared clear(const ComplexSystem& sys) {
    Cleared c;
    for (const auto& g : sys.equations()) {
        auto q = clear_denominators(g).first;
        std::vector<ComplexPolynomial> row;
        for (std::size_t j = 0; j < sys.ell(); ++j) row.push_back(partial_derivative(q, j));
        c.f.push_back(std::move(q));
        c.J.push_back(std::move(row));
    }
    return c;
}

// Krawczyk test on the box x +- r (real and imaginary parts).
bool krawczyk(const Cleared& C, const std::vector<Complex>& x, double r) {
    const std::size_t n = x.size();
    const auto N = static_cast<Eigen::Index>(n);
    std::vector<CI> X(n), xp(n);
    for (std::size_t j = 0; j < n; ++j) {
        xp[j] = point(x[j]);
        X[j] = {widen(x[j].real() - r, x[j].real() + r), widen(x[j].imag() - r, x[j].imag() + r)};
    }
    Eigen::MatrixXcd Jm(N, N);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            Jm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = evaluate(C.J[i][j], x);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(Jm);
    if (!lu.isInvertible()) return false;
    const Eigen::MatrixXcd Y = lu.inverse();
    if (!Y.allFinite()) return false;

    std::vector<CI> fx(n);
    std::vector<std::vector<CI>> JX(n, std::vector<CI>(n));
    for (std::size_t i = 0; i < n; ++i) {
        fx[i] = eval(C.f[i], xp);
        for (std::size_t j = 0; j < n; ++j) JX[i][j] = eval(C.J[i][j], X);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto I = static_cast<Eigen::Index>(i);
        CI Yf = point(0.0);
        for (std::size_t k = 0; k < n; ++k) Yf = Yf + point(Y(I, static_cast<Eigen::Index>(k))) * fx[k];
        CI K = xp[i] - Yf;
        for (std::size_t j = 0; j < n; ++j) {
            CI m = point(i == j ? 1.0 : 0.0);
            for (std::size_t k = 0; k < n; ++k) m = m - point(Y(I, static_cast<Eigen::Index>(k))) * JX[k][j];
            K = K + m * (X[j] - xp[j]);
        }
        if (!strictly_inside(K.re, X[i].re) || !strictly_inside(K.im, X[i].im)) return false;
    }
    return true;
}

bool overlap(const Solution& a, const Solution& b) {
    for (std::size_t j = 0; j < a.coords.size(); ++j) {
        const double r = a.box_radius + b.box_radius;
        if (std::abs(a.coords[j].real() - b.coords[j].real()) > r) return false;
        if (std::abs(a.coords[j].imag() - b.coords[j].imag()) > r) return false;
    }
    return true;
}

Solution certify_with(const Cleared& C, Solution sol, double rmax) {
    sol.certified = false;
    sol.box_radius = 0;
    double scale = 1.0;
    for (const auto& z : sol.coords) scale = std::max(scale, std::abs(z));
    for (double r = std::min(rmax, 1e-6 * scale); r >= 1e-13 * scale; r *= 0.125)
        if (krawczyk(C, sol.coords, r)) {
            sol.certified = true;
            sol.box_radius = r;
            return sol;
        }
    return sol;
}

} // namespace

Solution krawczyk_certify(const ComplexSystem& sys, Solution sol) {
    if (!sys.is_square() || sol.coords.size() != sys.ell()) return sol;
    return certify_with(clear(sys), std::move(sol), std::numeric_limits<double>::infinity());
}

void certify_all(const ComplexSystem& sys, std::vector<Solution>& sols) {
    if (!sys.is_square()) return;
    const Cleared C = clear(sys);
    for (auto& s : sols) s = certify_with(C, std::move(s), std::numeric_limits<double>::infinity());
    for (int round = 0; round < 8; ++round) {
        bool clash = false;
        for (std::size_t a = 0; a < sols.size(); ++a)
            for (std::size_t b = a + 1; b < sols.size(); ++b) {
                if (!sols[a].certified || !sols[b].certified || !overlap(sols[a], sols[b])) continue;
                clash = true;
                sols[a] = certify_with(C, std::move(sols[a]), sols[a].box_radius / 8);
                sols[b] = certify_with(C, std::move(sols[b]), sols[b].box_radius / 8);
            }
        if (!clash) return;
    }
    // boxes that still meet enclose the same root; keep the first
    for (std::size_t a = 0; a < sols.size(); ++a)
        for (std::size_t b = a + 1; b < sols.size(); ++b)
            if (sols[a].certified && sols[b].certified && overlap(sols[a], sols[b])) {
                sols[b].certified = false;
                sols[b].box_radius = 0;
            }
}

namespace {

// First continued-fraction convergent within tol (relative), denominator at most max_den.
std::optional<Rational> snap_rational(double v, double tol, long max_den) {
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double r = v;
    for (int it = 0; it < 64; ++it) {
        const double a = std::floor(r);
        if (std::abs(a) > 1e15) break;
        const long ai = static_cast<long>(a);
        const long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1, q0 = q1, p1 = p2, q1 = q2;
        if (std::abs(static_cast<double>(p1) / static_cast<double>(q1) - v) <= tol * std::max(1.0, std::abs(v)))
            return make_rational(p1, q1);
        const double frac = r - a;
        if (frac < 1e-15) break;
        r = 1.0 / frac;
    }
    return std::nullopt;
}

} // namespace

Solution exact_certify(const RationalSystem& sys, Solution sol) {
    if (!sys.is_square() || sol.coords.size() != sys.ell() || !sol.real) return sol;
    std::vector<Rational> q;
    double radius = 0, scale = 1.0;
    for (const auto& z : sol.coords) {
        if (z.imag() != 0.0) return sol;
        // singular roots are only accurate to a root of machine precision; the exact check below decides
        const auto r = snap_rational(z.real(), 1e-7, 1000000);
        if (!r || is_zero(*r)) return sol;
        q.push_back(*r);
        const double err = std::abs(q.back().get_d() - z.real());
        scale = std::max(scale, std::abs(z.real()));
        radius = std::max(radius, err);
    }
    for (const auto& f : sys.equations())
        if (!is_zero(evaluate_exact(f, q))) return sol;
    sol.certified = true;
    sol.box_radius = radius + 1e-15 * scale;
    return sol;
}

} // namespace hem
