#pragma once

#include "hem/catalog.hpp"
#include "hem/solver.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace hem {

class GroupTooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// All products of the generators (identity included), sorted. Throws GroupTooLarge past `cap`.
std::vector<Permutation> generate_group(const std::vector<Permutation>& generators, std::size_t ell,
                                        std::size_t cap = 10'000'000);

/// (sigma . x)_i = x_{sigma(i)}.
std::vector<Complex> act(const Permutation& sigma, const std::vector<Complex>& x);

struct IsometryClass {
    Solution representative;
    /// Number of distinct points sigma . x over the group.
    int orbit_size = 0;
    double volume = 0;
    /// Indices into the input list.
    std::vector<std::size_t> members;
};

struct IsometryClassification {
    std::vector<IsometryClass> classes;
    long group_order_used = 0;
    /// Two different orbits came within ten times the matching tolerance.
    bool collision = false;
    bool upper_bound_only = false;
};

/// Orbits of the positive solutions under the group generated by `generators`.
/// When `params` is given, every generator must leave it invariant.
IsometryClassification orbit_partition(const std::vector<Solution>& solutions,
                                       const std::vector<Permutation>& generators, double tol = 1e-6,
                                       const SpaceParameters* params = nullptr);

/// Groups solutions by prod x_i^{d_i} (compared in log scale with relative tolerance).
std::vector<std::vector<std::size_t>> volume_classes(const std::vector<Solution>& solutions,
                                                     const std::vector<Rational>& d, double tol = 1e-6);

/// Classification of the positive members of `solutions` under the descriptor's symmetry.
IsometryClassification classify(const SpaceDescriptor& desc, const std::vector<Solution>& solutions,
                                double tol = 1e-6);

/// class id, orbit size, volume, representative coordinates; five decimals.
std::string classification_tsv(const IsometryClassification& c);

} // namespace hem
