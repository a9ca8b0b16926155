#pragma once

#include "hem/catalog.hpp"
#include "hem/einstein.hpp"
#include "hem/polytope.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace hem {

struct Solution {
    std::vector<Complex> coords;
    double residual = 0;   // max |f_i|
    int cluster_size = 1;
    bool in_torus = false;
    bool real = false;
    bool positive = false;
    bool certified = false;
    double box_radius = 0;
};

enum class Precision { double_, dd };

struct SolveOptions {
    std::uint64_t seed = 20240001;
    double max_step = 0.05;
    double min_step = 1e-14;
    Precision precision = Precision::double_;
    bool certify = true;
    unsigned threads = 1;
    /// Bits of the integer lift used for the start homotopy.
    int lift_bits = 8;
};

struct SolveReport {
    long bkk = 0;
    long tracked = 0;
    long converged = 0;
    long diverged = 0;
    long failed = 0;
    std::vector<Solution> solutions;
    std::uint64_t seed = 0;
    double wall_time = 0;
    int lift_retries = 0;
    long extended_reruns = 0;
};

/// All |det C| solutions of prod_j x_j^{C_ij} = rhs_i in (C*)^n.
std::vector<std::vector<Complex>> solve_binomial(const Eigen::MatrixXi& C, const std::vector<Complex>& rhs);

/// Polyhedral homotopy on random coefficients followed by a coefficient homotopy
/// to the target. The residual reported per solution is max |f_i| of `residual_system`.
SolveReport solve_system(const RationalSystem& target, const SolveOptions& opts = {},
                         const RationalSystem* residual_system = nullptr);

/// Tracks the scaled equations; residuals are reported in the raw form.
SolveReport solve(const EinsteinSystem& sys, const SolveOptions& opts = {});

enum class PathStatus { converged, diverged, failed };

struct TrackOptions {
    double max_step = 0.05;
    double min_step = 1e-14;
    double blowup = 1e14;
};

/// Evaluates a homotopy H(x, t), dH/dx and dH/dt for t in [0, 1].
struct Homotopy {
    std::size_t n = 0;
    virtual ~Homotopy() = default;
    virtual void eval(const std::vector<Complex>& x, double t, std::vector<Complex>& H, Eigen::MatrixXcd& Hx,
                      std::vector<Complex>& Ht) const = 0;
};

struct PathResult {
    PathStatus status = PathStatus::failed;
    std::vector<Complex> endpoint;
    double t_reached = 0;
    int steps = 0;
};

/// Fourth-order predictor with Newton corrector from t = 0 to t = 1.
PathResult track_path(const Homotopy& h, std::vector<Complex> start, const TrackOptions& opts = {});

/// Newton polishing on a Laurent system; returns the final max |f_i|.
double newton_refine(const ComplexSystem& sys, std::vector<Complex>& x, int max_iter = 20, double tol = 1e-14);

/// Krawczyk test on the cleared-denominator system over a box around the solution.
Solution krawczyk_certify(const ComplexSystem& sys, Solution sol);

/// Certifies every solution and shrinks boxes until certified boxes are disjoint.
void certify_all(const ComplexSystem& sys, std::vector<Solution>& sols);

/// Exact check for a real solution: rounds coords to nearby small-denominator
/// rationals and evaluates the rational system exactly. Covers singular roots.
Solution exact_certify(const RationalSystem& sys, Solution sol);

struct PublishedCheck {
    bool is_einstein = false;
    double lambda = 0;
    double residual = 0; // max_i |r_i - mean| / |mean|
};

PublishedCheck verify_published(const SpaceDescriptor& desc, const std::vector<double>& x, double tol);

/// Lexicographic order on (re, im) parts, equal within 1e-9 relative, used to make reports byte-stable.
bool canonical_less(const Solution& a, const Solution& b);

} // namespace hem
