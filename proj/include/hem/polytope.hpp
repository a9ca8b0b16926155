#pragma once

#include "hem/einstein.hpp"
#include "hem/laurent.hpp"

#include <cstdint>
#include <set>
#include <vector>

namespace hem {

using PointSet = std::vector<ExponentVector>;

/// Convex hull of finitely many lattice points. Generators are kept sorted and
/// deduplicated; vertices are extracted on demand.
class LatticePolytope {
public:
    LatticePolytope() = default;
    explicit LatticePolytope(PointSet points);
    explicit LatticePolytope(const std::set<ExponentVector>& points)
        : LatticePolytope(PointSet(points.begin(), points.end())) {}

    const PointSet& points() const { return points_; }
    std::size_t ambient_dim() const { return ambient_; }
    /// Affine dimension, -1 for the empty polytope.
    int dim() const { return dim_; }
    PointSet vertices() const;

    bool contains(const ExponentVector& p) const;

    friend bool operator==(const LatticePolytope& a, const LatticePolytope& b) { return a.points_ == b.points_; }

private:
    PointSet points_;
    std::size_t ambient_ = 0;
    int dim_ = -1;
};

/// Affine dimension of a point set (rank of the difference lattice).
int affine_dim(const PointSet& pts);

// --- Delannoy numbers and the permutohedron ---------------------------------

Integer delannoy(unsigned k);

/// Newton polytope of each equation of the system.
std::vector<LatticePolytope> newton_polytopes(const EinsteinSystem& sys);

/// Supports of the scaled Einstein system with every structure constant nonzero.
std::vector<PointSet> generic_einstein_supports(std::size_t ell);

/// conv(0, e_k - 2 e_j : j != k), the union of the generic supports.
LatticePolytope permutohedron_tilde(std::size_t ell);

struct FaceDescriptor {
    std::vector<int> S, T; // 0-based, sorted
    bool with_origin = false;

    int dim() const { return static_cast<int>(S.size() + T.size()) - 2 + (with_origin ? 1 : 0); }
    friend bool operator==(const FaceDescriptor&, const FaceDescriptor&) = default;
};

/// All faces F_{S,T} of P^ell over disjoint nonempty S, T with S u T != [ell]
/// handled by the caller; every disjoint nonempty pair is returned.
std::vector<FaceDescriptor> faces_ST(std::size_t ell);

/// Points e_s - 2 e_t spanning F_{S,T}, plus the origin when requested.
PointSet face_points(const FaceDescriptor& f, std::size_t ell);

/// Normal a with a_s = 0 on S, a_t = 2 on T, 1 elsewhere; minimized over P^ell exactly on F_{S,T}.
std::vector<Rational> face_normal(const FaceDescriptor& f, std::size_t ell);

/// Terms of p whose exponents minimize <a, .> over the support of p.
RationalPolynomial face_restrict(const RationalPolynomial& p, const std::vector<Rational>& a);
ComplexPolynomial face_restrict(const ComplexPolynomial& p, const std::vector<Rational>& a);

/// Points of pts minimizing <a, .>.
PointSet face_of(const PointSet& pts, const std::vector<Rational>& a);

// --- volumes ------------------------------------------------------------------

/// ell! Vol(P) through a regular triangulation from a seeded random lift.
Integer normalized_volume(const LatticePolytope& poly, std::uint64_t seed = 1);

/// True iff every proper t-face of conv(union) meets at least t+1 of the polytopes.
bool union_volume_criterion(const std::vector<LatticePolytope>& polys);

/// (ell-1)! pVol of the permutohedron of y (y sorted descending).
Rational postnikov_volume(const std::vector<Rational>& y);

/// Permutations of [ell] whose descent set is exactly S (1-based positions).
Integer descent_count(unsigned ell, const std::set<unsigned>& S);

/// Labels m in 1..ell-1 of diagonal segments lying above the lattice path of c.
std::set<unsigned> postnikov_path_set(const std::vector<unsigned>& c);

// --- mixed cells ----------------------------------------------------------------

struct MixedCell {
    /// For support i, indices of the two chosen points.
    std::vector<std::array<int, 2>> pairs;
    /// Inner normal (alpha, 1) of the cell in the lifted sum.
    std::vector<Rational> normal;
    Integer volume;
};

struct MixedSubdivision {
    std::vector<MixedCell> cells;
    std::vector<std::vector<std::int64_t>> lift;
    int retries = 0;
    std::uint64_t seed_used = 0;

    Integer mixed_volume() const;
};

struct MixedCellOptions {
    int lift_bits = 20;
    int max_attempts = 16;
};

class DegenerateLift : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fine mixed cells of the regular mixed subdivision induced by a seeded integer
/// lift. A lift producing a tie is replaced by a reseeded one.
MixedSubdivision mixed_cells(const std::vector<PointSet>& supports, std::uint64_t seed,
                             const MixedCellOptions& opts = {});

/// Same, for one explicit lift; throws DegenerateLift on a tie.
MixedSubdivision mixed_cells_with_lift(const std::vector<PointSet>& supports,
                                       const std::vector<std::vector<std::int64_t>>& lift);

Integer mixed_volume(const std::vector<PointSet>& supports, std::uint64_t seed = 1);
Integer mixed_volume(const std::vector<LatticePolytope>& polys, std::uint64_t seed = 1);

std::vector<PointSet> supports_of(const RationalSystem& sys);

// --- support text format ------------------------------------------------------

std::string format_supports(const std::vector<PointSet>& supports);
std::vector<PointSet> parse_supports(const std::string& text);

} // namespace hem
