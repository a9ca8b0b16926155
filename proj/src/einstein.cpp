#include "hem/einstein.hpp"

#include <cmath>

namespace hem {

SpaceParameters::SpaceParameters(std::size_t ell, std::vector<Rational> b, std::vector<Rational> d)
    : ell_(ell), b_(std::move(b)), d_(std::move(d)) {
    if (ell_ == 0) throw ParameterError("ell must be positive");
    if (b_.size() != ell_ || d_.size() != ell_) throw ParameterError("b and d must have length ell");
}

Rational SpaceParameters::L(int i, int j, int k) const {
    auto it = L_.find(sorted_triple(i, j, k));
    return it == L_.end() ? Rational(0) : it->second;
}

void SpaceParameters::set_L(int i, int j, int k, const Rational& value) {
    const int n = static_cast<int>(ell_);
    if (i < 0 || j < 0 || k < 0 || i >= n || j >= n || k >= n) throw ParameterError("L index out of range");
    Triple t = sorted_triple(i, j, k);
    if (is_zero(value))
        L_.erase(t);
    else
        L_[t] = value;
}

SpaceParameters SpaceParameters::permuted(const std::vector<int>& perm) const {
    if (perm.size() != ell_) throw ParameterError("permutation has wrong length");
    std::vector<Rational> b(ell_), d(ell_);
    for (std::size_t i = 0; i < ell_; ++i) {
        b[perm[i]] = b_[i];
        d[perm[i]] = d_[i];
    }
    SpaceParameters out(ell_, std::move(b), std::move(d));
    for (const auto& [t, v] : L_) out.set_L(perm[t[0]], perm[t[1]], perm[t[2]], v);
    return out;
}

namespace {

void check_index(const SpaceParameters& p, std::size_t i) {
    if (i >= p.ell()) throw ParameterError("summand index out of range");
}

ExponentVector mono(std::size_t ell, std::initializer_list<std::pair<int, int>> entries) {
    ExponentVector e(ell);
    for (auto [i, v] : entries) e[i] += v;
    return e;
}

} // namespace

RationalPolynomial ricci_component(const SpaceParameters& params, std::size_t i) {
    check_index(params, i);
    const std::size_t ell = params.ell();
    const Rational& di = params.d()[i];
    if (is_zero(di)) throw ParameterError("d_i must be nonzero");
    const int ii = static_cast<int>(i);

    RationalPolynomial r(ell);
    r.add_term(mono(ell, {{ii, -1}}), params.b()[i] / 2);
    const Rational scale = Rational(-1) / (4 * di);
    for (int j = 0; j < static_cast<int>(ell); ++j)
        for (int k = 0; k < static_cast<int>(ell); ++k) {
            Rational L = params.L(ii, j, k);
            if (is_zero(L)) continue;
            // (2 x_k^2 - x_i^2) / (x_i x_j x_k)
            r.add_term(mono(ell, {{k, 1}, {ii, -1}, {j, -1}}), scale * 2 * L);
            r.add_term(mono(ell, {{ii, 1}, {j, -1}, {k, -1}}), -scale * L);
        }
    return r;
}

Rational l_prime(const SpaceParameters& params, std::size_t i) {
    check_index(params, i);
    const int ii = static_cast<int>(i);
    Rational v = params.L(ii, ii, ii) - 2 * params.b()[i] * params.d()[i];
    for (int j = 0; j < static_cast<int>(params.ell()); ++j)
        if (j != ii) v += 2 * params.L(ii, j, j);
    return v;
}

namespace {

// -4 d_i f_i written directly in the L' form, no cancelling terms generated.
RationalPolynomial scaled_equation(const SpaceParameters& params, std::size_t i) {
    const std::size_t ell = params.ell();
    const int n = static_cast<int>(ell);
    const int ii = static_cast<int>(i);
    RationalPolynomial f(ell);
    f.add_term(ExponentVector(ell), 4 * params.d()[i]);
    f.add_term(mono(ell, {{ii, -1}}), l_prime(params, i));
    for (int k = 0; k < n; ++k) {
        if (k == ii) continue;
        f.add_term(mono(ell, {{ii, 1}, {k, -2}}), -params.L(ii, k, k));
        f.add_term(mono(ell, {{k, 1}, {ii, -2}}), 2 * params.L(ii, ii, k));
    }
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            if (j == ii || k == ii) continue;
            Rational L2 = 2 * params.L(ii, j, k);
            if (is_zero(L2)) continue;
            f.add_term(mono(ell, {{k, 1}, {ii, -1}, {j, -1}}), L2);
            f.add_term(mono(ell, {{j, 1}, {ii, -1}, {k, -1}}), L2);
            f.add_term(mono(ell, {{ii, 1}, {j, -1}, {k, -1}}), -L2);
        }
    return f;
}

} // namespace

EinsteinSystem einstein_system(const SpaceParameters& params, SystemForm form) {
    const std::size_t ell = params.ell();
    std::vector<RationalPolynomial> eqs;
    for (std::size_t i = 0; i < ell; ++i) {
        if (is_zero(params.d()[i])) throw ParameterError("d_i must be nonzero");
        if (form == SystemForm::raw) {
            RationalPolynomial f = ricci_component(params, i);
            f.add_term(ExponentVector(ell), Rational(-1));
            eqs.push_back(std::move(f));
        } else {
            eqs.push_back(scaled_equation(params, i));
        }
    }
    return {params, RationalSystem(ell, std::move(eqs)), form};
}

RationalPolynomial scalar_curvature(const SpaceParameters& params) {
    const std::size_t ell = params.ell();
    const int n = static_cast<int>(ell);
    RationalPolynomial s(ell);
    for (int i = 0; i < n; ++i) s.add_term(mono(ell, {{i, -1}}), params.d()[i] * params.b()[i] / 2);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                Rational L = params.L(i, j, k);
                if (!is_zero(L)) s.add_term(mono(ell, {{k, 1}, {i, -1}, {j, -1}}), -L / 4);
            }
    return s;
}

MatrixForm matrix_form(const SpaceParameters& params) {
    const int n = static_cast<int>(params.ell());
    if (n < 2) throw ParameterError("matrix form needs ell >= 2");
    std::vector<Eigen::VectorXi> cols;
    std::vector<Rational> Lvec;
    auto unit = [n](int i) {
        Eigen::VectorXi e = Eigen::VectorXi::Zero(n);
        e[i] = 1;
        return e;
    };
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k) {
            cols.push_back(unit(k) - 2 * unit(i));
            Lvec.push_back(params.L(i, i, k));
            cols.push_back(unit(i) - 2 * unit(k));
            Lvec.push_back(params.L(i, k, k));
        }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                const Rational L2 = 2 * params.L(i, j, k);
                cols.push_back(unit(i) - unit(j) - unit(k));
                Lvec.push_back(L2);
                cols.push_back(unit(j) - unit(i) - unit(k));
                Lvec.push_back(L2);
                cols.push_back(unit(k) - unit(i) - unit(j));
                Lvec.push_back(L2);
            }
    for (int i = 0; i < n; ++i) {
        cols.push_back(-unit(i));
        Lvec.push_back(l_prime(params, static_cast<std::size_t>(i)));
    }
    Eigen::MatrixXi A(n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) A.col(static_cast<Eigen::Index>(c)) = cols[c];
    return {A, Lvec};
}

RationalSystem matrix_form_system(const SpaceParameters& params) {
    const MatrixForm mf = matrix_form(params);
    const std::size_t ell = params.ell();
    std::vector<RationalPolynomial> eqs(ell, RationalPolynomial(ell));
    for (Eigen::Index c = 0; c < mf.A.cols(); ++c) {
        std::vector<int> a(mf.A.col(c).data(), mf.A.col(c).data() + ell);
        ExponentVector e(a);
        for (std::size_t i = 0; i < ell; ++i)
            if (mf.A(static_cast<Eigen::Index>(i), c) != 0)
                eqs[i].add_term(e, mf.A(static_cast<Eigen::Index>(i), c) * mf.Lvec[c]);
    }
    for (std::size_t i = 0; i < ell; ++i) eqs[i].add_term(ExponentVector(ell), -4 * params.d()[i]);
    return {ell, std::move(eqs)};
}

bool critical_equation_check(const SpaceParameters& params, std::span<const Complex> x, double tol) {
    const std::size_t ell = params.ell();
    if (x.size() != ell) throw ParameterError("point has wrong dimension");
    for (const Complex& xi : x)
        if (xi == Complex(0.0, 0.0)) throw std::domain_error("critical equations need x in the torus");
    const MatrixForm mf = matrix_form(params);
    const Eigen::MatrixXd A = mf.A.cast<double>();
    Eigen::VectorXd rhs(ell);
    for (std::size_t i = 0; i < ell; ++i) rhs[i] = 4 * to_double(params.d()[i]);

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    if (cod.rank() < static_cast<Eigen::Index>(ell)) throw ParameterError("matrix form is rank deficient");
    const Eigen::VectorXd u = cod.solve(rhs);
    const double uplus = u.sum();

    const Eigen::Index r = A.cols();
    Eigen::VectorXcd p(r);
    for (Eigen::Index c = 0; c < r; ++c) {
        std::vector<int> a(mf.A.col(c).data(), mf.A.col(c).data() + ell);
        p[c] = to_double(mf.Lvec[c]) / uplus * monomial_value(ExponentVector(a), x);
    }
    const Complex pplus = p.sum();
    const Eigen::VectorXcd lhs = uplus * (A.cast<Complex>() * p);
    const Eigen::VectorXcd rhs2 = pplus * (A * u).cast<Complex>();
    const double scale = std::max({lhs.cwiseAbs().maxCoeff(), rhs2.cwiseAbs().maxCoeff(), 1e-300});
    return (lhs - rhs2).cwiseAbs().maxCoeff() / scale < tol;
}

double volume_invariant(const SpaceParameters& params, std::span<const double> x) {
    if (x.size() != params.ell()) throw ParameterError("point has wrong dimension");
    double v = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0)) throw ParameterError("volume invariant needs a positive vector");
        v *= std::pow(x[i], to_double(params.d()[i]));
    }
    return v;
}

std::vector<Complex> ricci_values(const SpaceParameters& params, std::span<const Complex> x) {
    const int n = static_cast<int>(params.ell());
    if (x.size() != params.ell()) throw ParameterError("point has wrong dimension");
    std::vector<Complex> r(n);
    for (int i = 0; i < n; ++i) {
        Complex s = to_double(params.b()[i]) / (2.0 * x[i]);
        Complex acc(0.0, 0.0);
        for (const auto& [t, v] : params.L_entries()) {
            // enumerate distinct ordered (j,k) with {i,j,k} = t as a multiset
            std::array<int, 3> m = t;
            auto pos = std::find(m.begin(), m.end(), i);
            if (pos == m.end()) continue;
            std::swap(*pos, m[0]);
            const int j = m[1], k = m[2];
            const double L = to_double(v);
            auto term = [&](int a, int c) { return L * (2.0 * x[c] * x[c] - x[i] * x[i]) / (x[i] * x[a] * x[c]); };
            acc += term(j, k);
            if (j != k) acc += term(k, j);
        }
        r[i] = s - acc / (4.0 * to_double(params.d()[i]));
    }
    return r;
}

} // namespace hem
