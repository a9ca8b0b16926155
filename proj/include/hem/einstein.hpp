#pragma once

#include "hem/laurent.hpp"

#include <Eigen/Dense>

#include <array>
#include <map>
#include <stdexcept>
#include <vector>

namespace hem {

class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

using Triple = std::array<int, 3>; // 0-based, sorted ascending

inline Triple sorted_triple(int i, int j, int k) {
    Triple t{i, j, k};
    std::sort(t.begin(), t.end());
    return t;
}

/// The triple (b, d, L) describing the Einstein system of a homogeneous space
/// with ell pairwise inequivalent isotropy summands.
class SpaceParameters {
public:
    SpaceParameters() = default;
    SpaceParameters(std::size_t ell, std::vector<Rational> b, std::vector<Rational> d);

    std::size_t ell() const { return ell_; }
    const std::vector<Rational>& b() const { return b_; }
    const std::vector<Rational>& d() const { return d_; }
    std::vector<Rational>& b() { return b_; }
    std::vector<Rational>& d() { return d_; }

    /// Symmetric accessor: any index order, 0-based.
    Rational L(int i, int j, int k) const;
    void set_L(int i, int j, int k, const Rational& value);

    /// Nonzero entries keyed by sorted 0-based triple.
    const std::map<Triple, Rational>& L_entries() const { return L_; }

    /// Parameters after relabeling summand i as perm[i].
    SpaceParameters permuted(const std::vector<int>& perm) const;

    friend bool operator==(const SpaceParameters&, const SpaceParameters&) = default;

private:
    std::size_t ell_ = 0;
    std::vector<Rational> b_, d_;
    std::map<Triple, Rational> L_;
};

enum class SystemForm { raw, scaled };

struct EinsteinSystem {
    SpaceParameters params;
    RationalSystem equations;
    SystemForm form = SystemForm::scaled;
};

RationalPolynomial ricci_component(const SpaceParameters& params, std::size_t i);
EinsteinSystem einstein_system(const SpaceParameters& params, SystemForm form = SystemForm::scaled);
Rational l_prime(const SpaceParameters& params, std::size_t i);
RationalPolynomial scalar_curvature(const SpaceParameters& params);

struct MatrixForm {
    Eigen::MatrixXi A;
    std::vector<Rational> Lvec;
};

MatrixForm matrix_form(const SpaceParameters& params);

/// Laurent polynomials (A diag(Lvec) x^A)_i - 4 d_i, built column by column.
RationalSystem matrix_form_system(const SpaceParameters& params);

bool critical_equation_check(const SpaceParameters& params, std::span<const Complex> x, double tol);

double volume_invariant(const SpaceParameters& params, std::span<const double> x);

/// Ricci components r_i(x) evaluated numerically.
std::vector<Complex> ricci_values(const SpaceParameters& params, std::span<const Complex> x);

} // namespace hem
