#pragma once

#include <cmath>
#include <complex>

namespace hem::detail {

/// Double-double real: value hi + lo with |lo| <= ulp(hi)/2.
struct DD {
    double hi = 0, lo = 0;

    DD() = default;
    DD(double v) : hi(v), lo(0) {}
    DD(double h, double l) : hi(h), lo(l) {}

    static DD two_sum(double a, double b) {
        const double s = a + b;
        const double bb = s - a;
        return {s, (a - (s - bb)) + (b - bb)};
    }
    static DD quick_two_sum(double a, double b) {
        const double s = a + b;
        return {s, b - (s - a)};
    }
    static DD two_prod(double a, double b) {
        const double p = a * b;
        return {p, std::fma(a, b, -p)};
    }

    friend DD operator+(DD a, DD b) {
        DD s = two_sum(a.hi, b.hi);
        DD t = two_sum(a.lo, b.lo);
        s.lo += t.hi;
        s = quick_two_sum(s.hi, s.lo);
        s.lo += t.lo;
        return quick_two_sum(s.hi, s.lo);
    }
    friend DD operator-(DD a) { return {-a.hi, -a.lo}; }
    friend DD operator-(DD a, DD b) { return a + (-b); }
    friend DD operator*(DD a, DD b) {
        DD p = two_prod(a.hi, b.hi);
        p.lo += a.hi * b.lo + a.lo * b.hi;
        return quick_two_sum(p.hi, p.lo);
    }
    friend DD operator/(DD a, DD b) {
        const double q1 = a.hi / b.hi;
        DD r = a - b * DD(q1);
        const double q2 = r.hi / b.hi;
        r = r - b * DD(q2);
        const double q3 = r.hi / b.hi;
        return quick_two_sum(q1, q2) + DD(q3);
    }
    DD& operator+=(DD b) { return *this = *this + b; }
    DD& operator-=(DD b) { return *this = *this - b; }
    DD& operator*=(DD b) { return *this = *this * b; }
    DD& operator/=(DD b) { return *this = *this / b; }
    friend bool operator<(DD a, DD b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
    friend bool operator>(DD a, DD b) { return b < a; }
    friend bool operator==(DD a, DD b) { return a.hi == b.hi && a.lo == b.lo; }
    explicit operator double() const { return hi + lo; }
};

inline DD sqrt(DD a) {
    if (a.hi <= 0) return DD(0.0);
    const double x = std::sqrt(a.hi);
    const DD x2 = DD::two_prod(x, x);
    return DD::quick_two_sum(x, (a - x2).hi / (2 * x));
}
inline double to_d(double v) { return v; }
inline double to_d(DD v) { return static_cast<double>(v); }

/// Minimal complex number over a real type (std::complex is unspecified for DD).
template <class R>
struct Cx {
    R re{}, im{};

    Cx() = default;
    Cx(R r) : re(r), im(0.0) {}
    Cx(R r, R i) : re(r), im(i) {}
    explicit Cx(std::complex<double> z) : re(z.real()), im(z.imag()) {}

    friend Cx operator+(Cx a, Cx b) { return {a.re + b.re, a.im + b.im}; }
    friend Cx operator-(Cx a, Cx b) { return {a.re - b.re, a.im - b.im}; }
    friend Cx operator-(Cx a) { return {-a.re, -a.im}; }
    friend Cx operator*(Cx a, Cx b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
    friend Cx operator*(R s, Cx a) { return {s * a.re, s * a.im}; }
    friend Cx operator/(Cx a, Cx b) {
        const R den = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
    }
    Cx& operator+=(Cx b) { return *this = *this + b; }
    Cx& operator-=(Cx b) { return *this = *this - b; }
    Cx& operator*=(Cx b) { return *this = *this * b; }

    double abs() const { return std::hypot(to_d(re), to_d(im)); }
    std::complex<double> to_std() const { return {to_d(re), to_d(im)}; }
};

} // namespace hem::detail
