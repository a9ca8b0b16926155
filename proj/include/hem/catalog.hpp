#pragma once

#include "hem/einstein.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hem {

using Permutation = std::vector<int>;

/// Expected counts and closed-form solutions attached to a descriptor.
struct KnownFacts {
    std::optional<long> bkk;
    std::optional<long> torus;
    std::optional<long> real;
    std::optional<long> positive;
    std::optional<long> classes;
    bool classes_upper_bound_only = false;
    /// Closed-form positive solutions of the lambda = 1 system.
    std::vector<std::vector<Rational>> positive_solutions;
    std::vector<std::string> solution_names;
};

struct SpaceDescriptor {
    std::string name;
    SpaceParameters params;
    std::vector<std::string> labels;
    std::vector<Permutation> symmetry;
    KnownFacts known;
    /// Solving or bounding is beyond desk scale.
    bool long_running = false;
};

enum class RootType { A, B, C, D };

struct RootSystem {
    RootType type = RootType::A;
    int n = 0;
    /// Vectors in the epsilon basis (length n+1 for type A, n otherwise).
    std::vector<std::vector<int>> positive_roots;
    std::vector<std::string> labels;

    /// Index of +v or -v among the positive roots, or -1.
    int index_of(const std::vector<int>& v) const;
    /// Simple roots as indices into positive_roots.
    std::vector<int> simple_roots() const;
    /// Weyl group generators acting on positive roots modulo sign.
    std::vector<Permutation> weyl_generators() const;
};

RootSystem root_system(RootType type, int n);
char root_type_char(RootType t);

SpaceDescriptor berger_c(int n);
SpaceDescriptor berger_h(int n);
SpaceDescriptor so_mn(int m, int n);

/// Table row 1..15; sizes (k, l, m) for rows 1-3, (l) for rows 4-5, empty otherwise.
SpaceDescriptor generalized_wallach(int row, const std::vector<int>& sizes = {});
SpaceDescriptor ledger_obata(int dim_f);
SpaceDescriptor wallach_type4(int dim_fk, int dim_k);
SpaceDescriptor wallach_type1(const std::vector<Rational>& d = {2, 2, 2});

SpaceDescriptor flag_manifold(RootType type, int n);

/// Predicate true when a positive solution is additive, x_{a+b} = x_a + x_b, over
/// all pairs of positive roots whose sum is a positive root (relative tolerance).
std::function<bool(const std::vector<double>&)> kaehler_einstein_candidate(const SpaceDescriptor& desc, double tol);

/// Pairs (a, b, a+b) of positive-root indices used by the additivity predicate.
std::vector<std::array<int, 3>> additive_root_triples(const RootSystem& rs);

/// Named descriptors offered by `catalog list`.
std::vector<std::string> catalog_names();
SpaceDescriptor lookup_space(const std::string& name);

/// Checks that every symmetry generator leaves (b, d, L) invariant.
bool symmetry_consistent(const SpaceDescriptor& desc);

} // namespace hem
