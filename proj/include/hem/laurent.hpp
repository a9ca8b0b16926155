#pragma once

#include "hem/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <set>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hem {

/// Integer exponent vector a, standing for the monomial x^a = x_1^{a_1} ... x_l^{a_l}.
class ExponentVector {
public:
    ExponentVector() = default;
    explicit ExponentVector(std::size_t ell) : entries_(ell, 0) {}
    explicit ExponentVector(std::vector<int> entries) : entries_(std::move(entries)) {}
    ExponentVector(std::initializer_list<int> entries) : entries_(entries) {}

    static ExponentVector unit(std::size_t ell, std::size_t i, int scale = 1) {
        ExponentVector e(ell);
        e[i] = scale;
        return e;
    }

    std::size_t size() const { return entries_.size(); }
    int operator[](std::size_t i) const { return entries_[i]; }
    int& operator[](std::size_t i) { return entries_[i]; }
    const std::vector<int>& entries() const { return entries_; }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    bool is_zero() const {
        return std::all_of(entries_.begin(), entries_.end(), [](int v) { return v == 0; });
    }

    ExponentVector& operator+=(const ExponentVector& o) {
        check_size(o);
        for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
        return *this;
    }
    ExponentVector& operator-=(const ExponentVector& o) {
        check_size(o);
        for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= o.entries_[i];
        return *this;
    }
    friend ExponentVector operator+(ExponentVector a, const ExponentVector& b) { return a += b; }
    friend ExponentVector operator-(ExponentVector a, const ExponentVector& b) { return a -= b; }
    friend ExponentVector operator*(int s, ExponentVector a) {
        for (auto& v : a.entries_) v *= s;
        return a;
    }

    friend auto operator<=>(const ExponentVector&, const ExponentVector&) = default;
    friend bool operator==(const ExponentVector&, const ExponentVector&) = default;

private:
    void check_size(const ExponentVector& o) const {
        if (o.size() != size()) throw std::invalid_argument("exponent vector length mismatch");
    }

    std::vector<int> entries_;
};

struct ExponentHash {
    std::size_t operator()(const ExponentVector& e) const noexcept {
        std::size_t h = 1469598103934665603ULL;
        for (int v : e) {
            h ^= static_cast<std::size_t>(static_cast<unsigned>(v) + 0x9e3779b9U);
            h *= 1099511628211ULL;
        }
        return h;
    }
};

inline int dot(const ExponentVector& a, const ExponentVector& b) {
    int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Sparse Laurent polynomial in ell variables with coefficients of type Scalar
/// (Rational for exact construction, Complex for numerics). Zero coefficients
/// are never stored.
template <class Scalar>
class LaurentPolynomial {
public:
    using Map = std::unordered_map<ExponentVector, Scalar, ExponentHash>;

    LaurentPolynomial() = default;
    explicit LaurentPolynomial(std::size_t ell) : ell_(ell) {}

    static LaurentPolynomial constant(std::size_t ell, const Scalar& c) {
        LaurentPolynomial p(ell);
        p.add_term(ExponentVector(ell), c);
        return p;
    }
    static LaurentPolynomial monomial(const ExponentVector& e, const Scalar& c = Scalar(1)) {
        LaurentPolynomial p(e.size());
        p.add_term(e, c);
        return p;
    }

    std::size_t ell() const { return ell_; }
    std::size_t term_count() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    const Map& terms() const { return terms_; }

    Scalar coefficient(const ExponentVector& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Scalar(0) : it->second;
    }

    /// Adds c x^e, pruning the entry if it cancels to zero.
    void add_term(const ExponentVector& e, const Scalar& c) {
        if (e.size() != ell_) throw std::invalid_argument("exponent length does not match ell");
        if (hem::is_zero(c)) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (hem::is_zero(it->second)) terms_.erase(it);
        }
    }

    /// Terms in lexicographic exponent order.
    std::vector<std::pair<ExponentVector, Scalar>> sorted_terms() const {
        std::vector<std::pair<ExponentVector, Scalar>> out(terms_.begin(), terms_.end());
        std::sort(out.begin(), out.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        return out;
    }

    LaurentPolynomial& operator+=(const LaurentPolynomial& o) {
        check_ell(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    LaurentPolynomial& operator-=(const LaurentPolynomial& o) {
        check_ell(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    LaurentPolynomial& operator*=(const Scalar& s) {
        if (hem::is_zero(s)) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }

    friend LaurentPolynomial operator+(LaurentPolynomial a, const LaurentPolynomial& b) { return a += b; }
    friend LaurentPolynomial operator-(LaurentPolynomial a, const LaurentPolynomial& b) { return a -= b; }
    friend LaurentPolynomial operator*(LaurentPolynomial a, const Scalar& s) { return a *= s; }
    friend LaurentPolynomial operator*(const Scalar& s, LaurentPolynomial a) { return a *= s; }
    friend LaurentPolynomial operator-(LaurentPolynomial a) { return a *= Scalar(-1); }

    friend LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b) {
        a.check_ell(b);
        LaurentPolynomial out(a.ell_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) out.add_term(ea + eb, ca * cb);
        return out;
    }

    /// Multiplies by the monomial x^shift.
    LaurentPolynomial shifted(const ExponentVector& shift) const {
        LaurentPolynomial out(ell_);
        for (const auto& [e, c] : terms_) out.terms_.emplace(e + shift, c);
        return out;
    }

    friend bool operator==(const LaurentPolynomial& a, const LaurentPolynomial& b) {
        return a.ell_ == b.ell_ && a.terms_ == b.terms_;
    }

private:
    void check_ell(const LaurentPolynomial& o) const {
        if (o.ell_ != ell_) throw std::invalid_argument("polynomials live in different rings");
    }

    std::size_t ell_ = 0;
    Map terms_;
};

using RationalPolynomial = LaurentPolynomial<Rational>;
using ComplexPolynomial = LaurentPolynomial<Complex>;

/// Ordered list of Laurent polynomials sharing the same variable count.
template <class Scalar>
class PolynomialSystem {
public:
    PolynomialSystem() = default;
    PolynomialSystem(std::size_t ell, std::vector<LaurentPolynomial<Scalar>> equations)
        : ell_(ell), equations_(std::move(equations)) {
        if (equations_.empty()) throw std::invalid_argument("polynomial system needs at least one equation");
        for (const auto& f : equations_)
            if (f.ell() != ell_) throw std::invalid_argument("equation has wrong variable count");
    }

    std::size_t ell() const { return ell_; }
    std::size_t size() const { return equations_.size(); }
    bool is_square() const { return equations_.size() == ell_; }
    const std::vector<LaurentPolynomial<Scalar>>& equations() const { return equations_; }
    const LaurentPolynomial<Scalar>& operator[](std::size_t i) const { return equations_[i]; }

    friend bool operator==(const PolynomialSystem&, const PolynomialSystem&) = default;

private:
    std::size_t ell_ = 0;
    std::vector<LaurentPolynomial<Scalar>> equations_;
};

using RationalSystem = PolynomialSystem<Rational>;
using ComplexSystem = PolynomialSystem<Complex>;

/// x^a for complex x; throws std::domain_error on a zero base with negative exponent.
inline Complex monomial_value(const ExponentVector& a, std::span<const Complex> x) {
    Complex v(1.0, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int k = a[i];
        if (k == 0) continue;
        if (k < 0 && x[i] == Complex(0.0, 0.0))
            throw std::domain_error("negative exponent at a zero coordinate");
        Complex base = k > 0 ? x[i] : Complex(1.0, 0.0) / x[i];
        int n = k > 0 ? k : -k;
        Complex acc(1.0, 0.0);
        while (n) {
            if (n & 1) acc *= base;
            base *= base;
            n >>= 1;
        }
        v *= acc;
    }
    return v;
}

template <class Scalar>
Complex evaluate(const LaurentPolynomial<Scalar>& p, std::span<const Complex> x) {
    if (x.size() != p.ell()) throw std::invalid_argument("point has wrong dimension");
    Complex s(0.0, 0.0);
    for (const auto& [e, c] : p.terms()) s += to_complex(c) * monomial_value(e, x);
    return s;
}

template <class Scalar>
std::vector<Complex> evaluate(const PolynomialSystem<Scalar>& sys, std::span<const Complex> x) {
    std::vector<Complex> out;
    out.reserve(sys.size());
    for (const auto& f : sys.equations()) out.push_back(evaluate(f, x));
    return out;
}

/// Exact evaluation at a rational point (all coordinates nonzero when needed).
inline Rational evaluate_exact(const RationalPolynomial& p, std::span<const Rational> x) {
    Rational s = 0;
    for (const auto& [e, c] : p.terms()) {
        Rational m = c;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (e[i] < 0 && is_zero(x[i])) throw std::domain_error("negative exponent at a zero coordinate");
            Rational base = e[i] > 0 ? x[i] : Rational(1) / x[i];
            for (int k = 0; k < std::abs(e[i]); ++k) m *= base;
        }
        s += m;
    }
    return s;
}

/// x_i d/dx_i p: every term c x^a maps to a_i c x^a.
template <class Scalar>
LaurentPolynomial<Scalar> toric_derivative(const LaurentPolynomial<Scalar>& p, std::size_t i) {
    if (i >= p.ell()) throw std::out_of_range("toric derivative index");
    LaurentPolynomial<Scalar> out(p.ell());
    for (const auto& [e, c] : p.terms()) out.add_term(e, Scalar(e[i]) * c);
    return out;
}

/// Ordinary partial derivative d/dx_i p.
template <class Scalar>
LaurentPolynomial<Scalar> partial_derivative(const LaurentPolynomial<Scalar>& p, std::size_t i) {
    LaurentPolynomial<Scalar> out(p.ell());
    for (const auto& [e, c] : p.terms()) {
        if (e[i] == 0) continue;
        ExponentVector f = e;
        f[i] -= 1;
        out.add_term(f, Scalar(e[i]) * c);
    }
    return out;
}

template <class Scalar>
std::set<ExponentVector> support(const LaurentPolynomial<Scalar>& p) {
    std::set<ExponentVector> s;
    for (const auto& [e, c] : p.terms()) s.insert(e);
    return s;
}

/// Returns (q, s) with q = x^s p an ordinary polynomial and s minimal.
template <class Scalar>
std::pair<LaurentPolynomial<Scalar>, ExponentVector> clear_denominators(const LaurentPolynomial<Scalar>& p) {
    ExponentVector shift(p.ell());
    for (const auto& [e, c] : p.terms())
        for (std::size_t i = 0; i < e.size(); ++i) shift[i] = std::max(shift[i], -e[i]);
    return {p.shifted(shift), shift};
}

inline ComplexPolynomial to_complex(const RationalPolynomial& p) {
    ComplexPolynomial out(p.ell());
    for (const auto& [e, c] : p.terms()) out.add_term(e, to_complex(c));
    return out;
}

inline ComplexSystem to_complex(const RationalSystem& sys) {
    std::vector<ComplexPolynomial> eqs;
    for (const auto& f : sys.equations()) eqs.push_back(to_complex(f));
    return {sys.ell(), std::move(eqs)};
}

} // namespace hem
