#pragma once

#include "hem/einstein.hpp"
#include "hem/polytope.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hem {

/// (2d1+d2)L122 x1^3 + d1 L'222 x1^2 x2 - d2 L'111 x1 x2^2 - (d1+2d2)L112 x2^3.
RationalPolynomial cubic_l2(const SpaceParameters& params);

/// Determinant of the 6x6 Sylvester matrix in L122, L'222, L'111, L112.
Rational sylvester_l2(const SpaceParameters& params);

/// True when L_iik = 0 for all i != k (the three-summand simplex family).
bool is_wallach_type(const SpaceParameters& params);

/// L123 times three 2x2 and one 3x3 determinant in 4 L123 and L'_iii.
Rational wallach_disc_l3(const SpaceParameters& params);

/// Sum_{i in T} d_i + 2 Sum_{j in S} d_j for each disjoint nonempty (S, T).
struct LinearFactor {
    std::vector<int> S, T;
    Rational value;
};
std::vector<LinearFactor> linear_factor_values(const std::vector<Rational>& d);
bool linear_factors(const std::vector<Rational>& d);

/// Position of the face F_{S,T} relative to the origin in direction a:
/// lower keeps F_{S,T} alone, tie adds the origin, upper keeps the origin alone.
enum class FaceCase { lower, tie, upper };
std::vector<Rational> face_direction(const FaceDescriptor& f, FaceCase c, std::size_t ell);

/// Supports against which facial systems are formed: the simplex family for
/// Wallach-type parameters, the full Einstein support otherwise.
std::vector<PointSet> reference_supports(const SpaceParameters& params);

struct ProbeOptions {
    std::uint64_t seed = 1;
    int starts = 24;
    int iterations = 120;
    double tol = 1e-10;
};

struct ProbeResult {
    bool root_found = false;
    bool identically_zero = false;
    std::vector<Complex> witness;
    double best_residual = 0;
};

/// Restricts each equation to the face of its reference support in direction a
/// and searches (ℂ*)^ell for a common root by damped Newton in log coordinates.
ProbeResult facial_probe(const EinsteinSystem& sys, const std::vector<Rational>& a,
                         const std::vector<PointSet>& reference, const ProbeOptions& opts = {});
ProbeResult facial_probe(const EinsteinSystem& sys, const FaceDescriptor& face, FaceCase c,
                         const ProbeOptions& opts = {});

enum class Verdict { bkk_generic_certified, inconclusive, degenerate };
std::string to_string(Verdict v);

struct NamedFactor {
    std::string name;
    Rational value;
};

struct DiscriminantReport {
    bool linear_factors_nonzero = true;
    std::optional<Rational> special_factor;
    std::vector<NamedFactor> factors;
    Verdict verdict = Verdict::inconclusive;
    int faces_probed = 0;
    std::optional<std::vector<Complex>> witness;
    std::vector<std::string> notes;
};

/// Evaluates every available factor; faces are probed only when a factor
/// vanishes or when factors alone cannot certify.
DiscriminantReport discriminant_report(const SpaceParameters& params, const ProbeOptions& opts = {});

} // namespace hem
