#include "hem/solver.hpp"

#include "numeric.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

namespace hem {

namespace {

using detail::Cx;
using detail::DD;

template <class R>
using CVec = std::vector<Cx<R>>;

template <class R>
R from_dd(const DD& v) {
    if constexpr (std::is_same_v<R, DD>) return v;
    else return v.hi + v.lo;
}

DD dd_of(const Rational& q) {
    const double hi = q.get_d();
    const Rational rest = q - Rational(hi);
    return DD::quick_two_sum(hi, rest.get_d());
}

template <class R>
double mag(const Cx<R>& z) {
    return z.abs();
}

// Gaussian elimination with partial pivoting, A is n x n row-major; b is overwritten.
template <class R>
bool lin_solve(std::vector<Cx<R>> A, std::vector<Cx<R>>& b, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = mag(A[k * n + k]);
        for (std::size_t r = k + 1; r < n; ++r)
            if (mag(A[r * n + k]) > best) best = mag(A[r * n + k]), p = r;
        if (!(best > 0) || !std::isfinite(best)) return false;
        if (p != k) {
            for (std::size_t c = 0; c < n; ++c) std::swap(A[k * n + c], A[p * n + c]);
            std::swap(b[k], b[p]);
        }
        const Cx<R> inv = Cx<R>(R(1.0)) / A[k * n + k];
        for (std::size_t r = k + 1; r < n; ++r) {
            const Cx<R> f = A[r * n + k] * inv;
            if (f.re == R(0.0) && f.im == R(0.0)) continue;
            for (std::size_t c = k; c < n; ++c) A[r * n + c] -= f * A[k * n + c];
            b[r] -= f * b[k];
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        Cx<R> s = b[k];
        for (std::size_t c = k + 1; c < n; ++c) s -= A[k * n + c] * b[c];
        b[k] = s / A[k * n + k];
    }
    return true;
}

// Monomials of one system, shared by both homotopy stages.
struct TermTable {
    std::size_t n = 0;
    std::vector<std::vector<std::vector<int>>> exps; // [equation][term]
    std::vector<std::vector<Cx<DD>>> start, target;
    std::vector<std::vector<double>> power;           // polyhedral stage only
};

template <class R>
struct Workspace {
    CVec<R> H, Hs, Hx; // Hx row-major n x n
};

template <class R>
void monomials_prep(const CVec<R>& x, CVec<R>& inv) {
    inv.resize(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) inv[j] = Cx<R>(R(1.0)) / x[j];
}

template <class R>
Cx<R> monomial(const std::vector<int>& a, const CVec<R>& x, const CVec<R>& inv) {
    Cx<R> m(R(1.0));
    for (std::size_t j = 0; j < a.size(); ++j) {
        int k = a[j];
        const Cx<R>& base = k > 0 ? x[j] : inv[j];
        for (k = k < 0 ? -k : k; k > 0; --k) m *= base;
    }
    return m;
}

// Straight-line coefficient homotopy from the start coefficients to the target.
template <class R>
struct CoefficientHomotopy {
    const TermTable& T;
    void operator()(const CVec<R>& x, R s, Workspace<R>& w) const {
        const std::size_t n = T.n;
        w.H.assign(n, Cx<R>());
        w.Hs.assign(n, Cx<R>());
        w.Hx.assign(n * n, Cx<R>());
        CVec<R> inv;
        monomials_prep(x, inv);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& E = T.exps[i];
            for (std::size_t k = 0; k < E.size(); ++k) {
                const Cx<R> c0(from_dd<R>(T.start[i][k].re), from_dd<R>(T.start[i][k].im));
                const Cx<R> c1(from_dd<R>(T.target[i][k].re), from_dd<R>(T.target[i][k].im));
                const Cx<R> dc = c1 - c0;
                const Cx<R> c = c0 + s * dc;
                const Cx<R> m = monomial(E[k], x, inv);
                const Cx<R> v = c * m;
                w.H[i] += v;
                w.Hs[i] += dc * m;
                for (std::size_t j = 0; j < n; ++j)
                    if (E[k][j] != 0) w.Hx[i * n + j] += R(static_cast<double>(E[k][j])) * (v * inv[j]);
            }
        }
    }
};

// Cell-lifted homotopy sum_a c_a y^a t^{p_a} with t = exp(tau0 (1 - s)).
struct PolyhedralHomotopy {
    const TermTable& T;
    std::vector<std::vector<double>> power;
    double tau0 = 0;
    void operator()(const CVec<double>& y, double s, Workspace<double>& w) const {
        const std::size_t n = T.n;
        w.H.assign(n, Cx<double>());
        w.Hs.assign(n, Cx<double>());
        w.Hx.assign(n * n, Cx<double>());
        CVec<double> inv;
        monomials_prep(y, inv);
        const double tau = tau0 * (1.0 - s);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& E = T.exps[i];
            for (std::size_t k = 0; k < E.size(); ++k) {
                const double wt = std::exp(power[i][k] * tau);
                if (wt == 0.0) continue;
                const Cx<double> c(from_dd<double>(T.start[i][k].re) * wt, from_dd<double>(T.start[i][k].im) * wt);
                const Cx<double> m = monomial(E[k], y, inv);
                const Cx<double> v = c * m;
                w.H[i] += v;
                w.Hs[i] += (-tau0 * power[i][k]) * v;
                for (std::size_t j = 0; j < n; ++j)
                    if (E[k][j] != 0) w.Hx[i * n + j] += static_cast<double>(E[k][j]) * (v * inv[j]);
            }
        }
    }
};

struct GenericHomotopy {
    const Homotopy& h;
    void operator()(const CVec<double>& x, double s, Workspace<double>& w) const {
        const std::size_t n = h.n;
        std::vector<Complex> xs(n), H, Ht;
        for (std::size_t j = 0; j < n; ++j) xs[j] = x[j].to_std();
        Eigen::MatrixXcd Hx;
        h.eval(xs, s, H, Hx, Ht);
        w.H.resize(n);
        w.Hs.resize(n);
        w.Hx.resize(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            w.H[i] = Cx<double>(H[i]);
            w.Hs[i] = Cx<double>(Ht[i]);
            for (std::size_t j = 0; j < n; ++j)
                w.Hx[i * n + j] = Cx<double>(Hx(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        }
    }
};

template <class R>
struct Tracked {
    PathStatus status = PathStatus::failed;
    CVec<R> x;
    double s = 0;
    int steps = 0;
};

constexpr int kMaxSteps = 200000;
constexpr double kEndZone = 1e-8;
constexpr double kEscapeSlope = 0.05;

template <class R>
double rel_change(const CVec<R>& dx, const CVec<R>& x) {
    double e = 0;
    for (std::size_t j = 0; j < x.size(); ++j) e = std::max(e, mag(dx[j]) / std::max(mag(x[j]), 1e-300));
    return e;
}

template <class R>
bool escaped(const CVec<R>& x, double blowup) {
    for (const auto& v : x) {
        const double a = mag(v);
        if (!std::isfinite(a) || a > blowup || a < 1.0 / blowup) return true;
    }
    return false;
}

template <class R>
double log_extent(const CVec<R>& x) {
    double e = 0;
    for (const auto& v : x) e = std::max(e, std::abs(std::log(mag(v))));
    return e;
}

template <class R, class Eval>
class Tracker {
public:
    Tracker(const Eval& ev, std::size_t n, const TrackOptions& o) : ev_(ev), n_(n), o_(o) {
        ctol_ = std::is_same_v<R, DD> ? 1e-20 : 1e-10;
    }

    bool tangent(const CVec<R>& x, R s, CVec<R>& dx) {
        ev_(x, s, w_);
        dx = w_.Hs;
        for (auto& v : dx) v = -v;
        return lin_solve(w_.Hx, dx, n_);
    }

    // Up to `iters` Newton steps at fixed s; true when the update falls below ctol.
    bool correct(CVec<R>& x, R s, int iters, double first_cap) {
        for (int it = 0; it < iters; ++it) {
            ev_(x, s, w_);
            CVec<R> dx = w_.H;
            for (auto& v : dx) v = -v;
            if (!lin_solve(w_.Hx, dx, n_)) return false;
            const double e = rel_change(dx, x);
            if (!std::isfinite(e) || (it == 0 && e > first_cap)) return false;
            for (std::size_t j = 0; j < n_; ++j) x[j] += dx[j];
            if (e < ctol_) return true;
        }
        return false;
    }

    Tracked<R> run(CVec<R> x) {
        Tracked<R> out;
        marks_.clear();
        double s = 0;
        double h = o_.max_step;
        correct(x, R(s), 5, 1.0);
        while (s < 1.0) {
            if (++out.steps > kMaxSteps) return finish(out, x, s);
            h = std::min(h, 1.0 - s);
            CVec<R> k1, k2, k3, k4, xp(n_);
            bool ok = tangent(x, R(s), k1);
            auto axpy = [&](const CVec<R>& k, double a) {
                CVec<R> y = x;
                for (std::size_t j = 0; j < n_; ++j) y[j] += R(a) * k[j];
                return y;
            };
            ok = ok && tangent(axpy(k1, h / 2), R(s + h / 2), k2);
            ok = ok && tangent(axpy(k2, h / 2), R(s + h / 2), k3);
            ok = ok && tangent(axpy(k3, h), R(s + h), k4);
            if (ok) {
                for (std::size_t j = 0; j < n_; ++j)
                    xp[j] = x[j] + R(h / 6) * (k1[j] + R(2.0) * k2[j] + R(2.0) * k3[j] + k4[j]);
                const double snext = (1.0 - s - h) < 1e-15 ? 1.0 : s + h;
                ok = correct(xp, R(snext), 3, 0.05);
                if (ok) {
                    x = std::move(xp);
                    s = snext;
                    mark(x, s);
                    if (escaped(x, o_.blowup)) {
                        out.status = PathStatus::diverged;
                        out.x = x;
                        out.s = s;
                        return out;
                    }
                    h = std::min(1.5 * h, o_.max_step);
                    continue;
                }
            }
            h *= 0.5;
            if (h < o_.min_step) return finish(out, x, s);
        }
        out.status = PathStatus::converged;
        out.x = std::move(x);
        out.s = 1.0;
        return out;
    }

private:
    // log|x_j| recorded once per decade of 1 - s near the end of the path
    void mark(const CVec<R>& x, double s) {
        if (s >= 1.0 || 1.0 - s > 1e-3) return;
        const int decade = static_cast<int>(std::floor(-std::log10(1.0 - s)));
        if (!marks_.empty() && marks_.back().decade >= decade) return;
        Mark m{decade, std::log(1.0 - s), {}};
        for (const auto& v : x) m.logabs.push_back(std::log(mag(v)));
        marks_.push_back(std::move(m));
    }

    // Largest |d log|x_j| / d log(1 - s)| over the final decades; near zero when the
    // path approaches a point of the torus, bounded away from zero when it escapes.
    double valuation() const {
        if (marks_.size() < 3) return 0.0;
        const Mark& b = marks_.back();
        const Mark& a = marks_[marks_.size() - 3];
        double w = 0;
        for (std::size_t j = 0; j < b.logabs.size(); ++j)
            w = std::max(w, std::abs((b.logabs[j] - a.logabs[j]) / (b.logt - a.logt)));
        return w;
    }

    Tracked<R> finish(Tracked<R>& out, CVec<R> x, double s) {
        out.s = s;
        if (s > 1.0 - kEndZone) {
            CVec<R> y = x;
            if (correct(y, R(1.0), 12, 1.0)) {
                out.status = PathStatus::converged;
                out.x = std::move(y);
                out.s = 1.0;
                return out;
            }
            // singular endpoint candidate, settled by the caller's refinement
            out.status = valuation() > kEscapeSlope ? PathStatus::diverged : PathStatus::converged;
            out.x = std::move(x);
            return out;
        }
        // stalled inside the endgame: a clear escape slope still identifies a divergent path
        out.status = marks_.size() >= 3 && valuation() > kEscapeSlope ? PathStatus::diverged : PathStatus::failed;
        out.x = std::move(x);
        return out;
    }

    struct Mark {
        int decade;
        double logt;
        std::vector<double> logabs;
    };
    std::vector<Mark> marks_;

    const Eval& ev_;
    std::size_t n_;
    TrackOptions o_;
    double ctol_;
    Workspace<R> w_;
};

template <class R>
CVec<R> to_cx(const std::vector<Complex>& v) {
    CVec<R> out;
    for (const auto& z : v) out.emplace_back(R(z.real()), R(z.imag()));
    return out;
}

template <class R>
std::vector<Complex> to_std(const CVec<R>& v) {
    std::vector<Complex> out;
    for (const auto& z : v) out.push_back(z.to_std());
    return out;
}

// Max |f_i| divided by the sum of term magnitudes of equation i.
double relative_residual(const ComplexSystem& sys, const std::vector<Complex>& x) {
    double worst = 0;
    for (const auto& f : sys.equations()) {
        Complex v = 0;
        double scale = 0;
        for (const auto& [e, c] : f.terms()) {
            const Complex t = c * monomial_value(e, x);
            v += t;
            scale += std::abs(t);
        }
        worst = std::max(worst, scale > 0 ? std::abs(v) / scale : std::abs(v));
    }
    return worst;
}

double abs_residual(const ComplexSystem& sys, const std::vector<Complex>& x) {
    double worst = 0;
    for (const auto& v : evaluate(sys, x)) worst = std::max(worst, std::abs(v));
    return worst;
}

RationalSystem normalized(const RationalSystem& sys) {
    std::vector<RationalPolynomial> eqs;
    for (const auto& f : sys.equations()) {
        Rational m = 0;
        for (const auto& [e, c] : f.terms()) m = std::max(m, Rational(abs(c)));
        RationalPolynomial g = f;
        if (sgn(m) != 0) g *= Rational(1) / m;
        eqs.push_back(std::move(g));
    }
    return {sys.ell(), std::move(eqs)};
}

double dist_rel(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double d = 0;
    for (std::size_t j = 0; j < a.size(); ++j)
        d = std::max(d, std::abs(a[j] - b[j]) / std::max(1.0, std::abs(a[j])));
    return d;
}

// Gauss-Newton on F(x) = 0, J(x) B lam = 0, h . lam = 1 for a corank guess; the
// augmented system is regular at roots whose Jacobian drops rank by the guess.
bool deflated_refine(const ComplexSystem& sys, std::vector<Complex>& x, double tol) {
    const std::size_t n = sys.ell();
    const auto N = static_cast<Eigen::Index>(n);
    std::vector<std::vector<ComplexPolynomial>> D1(n), D2(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            D1[i].push_back(partial_derivative(sys[i], j));
            for (std::size_t m = 0; m < n; ++m) D2[i * n + j].push_back(partial_derivative(D1[i][j], m));
        }
    auto jac = [&](const std::vector<Complex>& y) {
        Eigen::MatrixXcd J(N, N);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = evaluate(D1[i][j], y);
        return J;
    };
    std::mt19937_64 rng(0x6a09e667f3bcc908ULL);
    std::normal_distribution<double> g;
    for (std::size_t corank = 1; corank < n; ++corank) {
        const auto k = static_cast<Eigen::Index>(n - corank + 1);
        Eigen::MatrixXcd B(N, k);
        Eigen::VectorXcd h(k);
        for (Eigen::Index a = 0; a < N; ++a)
            for (Eigen::Index b = 0; b < k; ++b) B(a, b) = Complex(g(rng), g(rng));
        for (Eigen::Index b = 0; b < k; ++b) h(b) = Complex(g(rng), g(rng));
        std::vector<Complex> y = x;
        Eigen::MatrixXcd M(N + 1, k);
        M.topRows(N) = jac(y) * B;
        M.row(N) = h.transpose();
        Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(N + 1);
        rhs(N) = 1.0;
        Eigen::VectorXcd lam = M.colPivHouseholderQr().solve(rhs);
        for (int it = 0; it < 40; ++it) {
            const Eigen::MatrixXcd J = jac(y);
            const Eigen::VectorXcd v = B * lam;
            Eigen::VectorXcd G(2 * N + 1);
            Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2 * N + 1, N + k);
            for (std::size_t i = 0; i < n; ++i) G(static_cast<Eigen::Index>(i)) = evaluate(sys[i], y);
            G.segment(N, N) = J * v;
            G(2 * N) = (h.transpose() * lam)(0) - 1.0;
            A.block(0, 0, N, N) = J;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t m = 0; m < n; ++m) {
                    Complex acc = 0;
                    for (std::size_t j = 0; j < n; ++j) acc += evaluate(D2[i * n + j][m], y) * v(static_cast<Eigen::Index>(j));
                    A(N + static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)) = acc;
                }
            A.block(N, N, N, k) = J * B;
            A.block(2 * N, N, 1, k) = h.transpose();
            const Eigen::VectorXcd dz = A.colPivHouseholderQr().solve(-G);
            if (!dz.allFinite()) break;
            double step = 0;
            for (std::size_t j = 0; j < n; ++j) {
                y[j] += dz(static_cast<Eigen::Index>(j));
                step = std::max(step, std::abs(dz(static_cast<Eigen::Index>(j))) / std::max(1.0, std::abs(y[j])));
            }
            lam += dz.segment(N, k);
            if (step < 1e-15) break;
        }
        if (relative_residual(sys, y) < tol) {
            x = std::move(y);
            return true;
        }
    }
    return false;
}

double jacobian_condition(const ComplexSystem& sys, const std::vector<Complex>& x) {
    const auto N = static_cast<Eigen::Index>(sys.ell());
    Eigen::MatrixXcd J(N, N);
    for (Eigen::Index i = 0; i < N; ++i)
        for (Eigen::Index j = 0; j < N; ++j)
            J(i, j) = evaluate(partial_derivative(sys[static_cast<std::size_t>(i)], static_cast<std::size_t>(j)), x) *
                      x[static_cast<std::size_t>(j)];
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(J).singularValues();
    return sv(N - 1) > 0 ? sv(0) / sv(N - 1) : std::numeric_limits<double>::infinity();
}

constexpr double kSingularCond = 1e8;
constexpr double kConvergedRelResidual = 1e-10;
constexpr double kClusterTol = 1e-6;
constexpr double kTorusTol = 1e-8;
constexpr double kRealTol = 1e-8;

struct PathOutcome {
    PathStatus status = PathStatus::failed;
    std::vector<Complex> x;
    bool extended = false;
};

} // namespace

PathResult track_path(const Homotopy& h, std::vector<Complex> start, const TrackOptions& opts) {
    GenericHomotopy ev{h};
    Tracker<double, GenericHomotopy> tr(ev, h.n, opts);
    auto r = tr.run(to_cx<double>(start));
    PathResult out;
    out.status = r.status;
    out.endpoint = to_std(r.x);
    out.t_reached = r.s;
    out.steps = r.steps;
    return out;
}

double newton_refine(const ComplexSystem& sys, std::vector<Complex>& x, int max_iter, double tol) {
    const std::size_t n = sys.ell();
    std::vector<std::vector<ComplexPolynomial>> J(sys.size());
    for (std::size_t i = 0; i < sys.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) J[i].push_back(partial_derivative(sys[i], j));
    double res = abs_residual(sys, x);
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXcd f(static_cast<Eigen::Index>(sys.size()));
        Eigen::MatrixXcd A(static_cast<Eigen::Index>(sys.size()), static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < sys.size(); ++i) {
            f(static_cast<Eigen::Index>(i)) = evaluate(sys[i], x);
            for (std::size_t j = 0; j < n; ++j)
                A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = evaluate(J[i][j], x);
        }
        const Eigen::VectorXcd dx = A.colPivHouseholderQr().solve(-f);
        if (!dx.allFinite()) break;
        std::vector<Complex> y = x;
        double step = 0;
        for (std::size_t j = 0; j < n; ++j) {
            y[j] += dx(static_cast<Eigen::Index>(j));
            step = std::max(step, std::abs(dx(static_cast<Eigen::Index>(j))) / std::max(1.0, std::abs(y[j])));
        }
        const double r2 = abs_residual(sys, y);
        if (!(r2 <= res) && it > 0) break;
        x = std::move(y);
        res = r2;
        if (step < tol) break;
    }
    return res;
}

bool canonical_less(const Solution& a, const Solution& b) {
    // parts closer than kOrderTol count as equal so rounding noise cannot flip the order
    constexpr double kOrderTol = 1e-9;
    auto differ = [](double u, double v) { return std::abs(u - v) > kOrderTol * std::max({1.0, std::abs(u), std::abs(v)}); };
    for (std::size_t j = 0; j < std::min(a.coords.size(), b.coords.size()); ++j) {
        if (differ(a.coords[j].real(), b.coords[j].real())) return a.coords[j].real() < b.coords[j].real();
        if (differ(a.coords[j].imag(), b.coords[j].imag())) return a.coords[j].imag() < b.coords[j].imag();
    }
    return a.coords.size() < b.coords.size();
}

SolveReport solve_system(const RationalSystem& target_in, const SolveOptions& opts, const RationalSystem* residual_system) {
    const auto t_start = std::chrono::steady_clock::now();
    if (!target_in.is_square()) throw std::invalid_argument("solve: system is not square");
    const std::size_t n = target_in.ell();
    if (n == 0) throw std::invalid_argument("solve: empty system");
    const RationalSystem target = normalized(target_in);
    const ComplexSystem ctarget = to_complex(target);
    const ComplexSystem cresidual = to_complex(residual_system ? *residual_system : target_in);

    SolveReport rep;
    rep.seed = opts.seed;

    TermTable T;
    T.n = n;
    std::vector<PointSet> supports;
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> angle(0.0, 2 * M_PI);
    for (const auto& f : target.equations()) {
        PointSet P;
        std::vector<std::vector<int>> E;
        std::vector<Cx<DD>> c0, c1;
        for (const auto& [e, c] : f.sorted_terms()) {
            P.push_back(e);
            E.push_back(e.entries());
            const double th = angle(rng);
            c0.emplace_back(DD(std::cos(th)), DD(std::sin(th)));
            c1.emplace_back(dd_of(c), DD(0.0));
        }
        supports.push_back(std::move(P));
        T.exps.push_back(std::move(E));
        T.start.push_back(std::move(c0));
        T.target.push_back(std::move(c1));
    }
    for (const auto& P : supports)
        if (P.empty()) { // an identically zero equation: no isolated solutions to track
            rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
            return rep;
        }

    MixedCellOptions mco;
    mco.lift_bits = opts.lift_bits;
    const MixedSubdivision sub = mixed_cells(supports, opts.seed ^ 0x5bd1e995ULL, mco);
    rep.lift_retries = sub.retries;
    rep.bkk = sub.mixed_volume().get_si();

    // Start points, one per root of each cell's binomial system.
    struct Start {
        std::size_t cell;
        std::vector<Complex> y;
    };
    std::vector<Start> starts;
    std::vector<PolyhedralHomotopy> cell_h;
    for (std::size_t ci = 0; ci < sub.cells.size(); ++ci) {
        const auto& cell = sub.cells[ci];
        Eigen::MatrixXi C(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        std::vector<Complex> rhs(n);
        PolyhedralHomotopy ph{T, {}, 0};
        double pmin = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            const auto [a0, a1] = cell.pairs[i];
            for (std::size_t j = 0; j < n; ++j)
                C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = supports[i][a1][j] - supports[i][a0][j];
            const Complex c0a = T.start[i][a0].to_std(), c1a = T.start[i][a1].to_std();
            rhs[i] = -c0a / c1a;
            // power p_a = <a, alpha> + w_a - (<a0, alpha> + w_a0), exact then rounded
            std::vector<double> pw;
            for (std::size_t k = 0; k < supports[i].size(); ++k) {
                Rational p = Rational(static_cast<long>(sub.lift[i][k] - sub.lift[i][a0]));
                for (std::size_t j = 0; j < n; ++j) p += cell.normal[j] * (supports[i][k][j] - supports[i][a0][j]);
                const double pd = p.get_d();
                pw.push_back(pd);
                if (static_cast<int>(k) != a0 && static_cast<int>(k) != a1) pmin = std::min(pmin, pd);
            }
            ph.power.push_back(std::move(pw));
        }
        ph.tau0 = std::isfinite(pmin) ? std::log(1e-12) / pmin : -1.0;
        cell_h.push_back(std::move(ph));
        for (auto& y : solve_binomial(C, rhs)) starts.push_back({ci, std::move(y)});
    }
    rep.tracked = static_cast<long>(starts.size());

    TrackOptions to;
    to.max_step = opts.max_step;
    to.min_step = opts.min_step;
    CoefficientHomotopy<double> coef_d{T};
    CoefficientHomotopy<DD> coef_dd{T};

    std::vector<PathOutcome> outcomes(starts.size());
    auto run_path = [&](std::size_t k) {
        PathOutcome& po = outcomes[k];
        Tracker<double, PolyhedralHomotopy> t1(cell_h[starts[k].cell], n, to);
        auto r1 = t1.run(to_cx<double>(starts[k].y));
        if (r1.status != PathStatus::converged) {
            po.status = r1.status;
            po.x = to_std(r1.x);
            return;
        }
        Tracker<double, CoefficientHomotopy<double>> t2(coef_d, n, to);
        auto r2 = t2.run(r1.x);
        po.status = r2.status;
        po.x = to_std(r2.x);
        auto good = [&](std::vector<Complex>& x) {
            std::vector<Complex> y = x;
            newton_refine(ctarget, y, 8, 1e-15);
            if (relative_residual(ctarget, y) < kConvergedRelResidual) {
                x = std::move(y);
                if (jacobian_condition(ctarget, x) > kSingularCond) deflated_refine(ctarget, x, kConvergedRelResidual);
                return true;
            }
            return deflated_refine(ctarget, x, kConvergedRelResidual);
        };
        if (po.status == PathStatus::converged && !good(po.x))
            po.status = log_extent(to_cx<double>(po.x)) > std::log(1e6) ? PathStatus::diverged : PathStatus::failed;
        if (po.status == PathStatus::failed && opts.precision == Precision::dd) {
            po.extended = true;
            Tracker<DD, CoefficientHomotopy<DD>> t3(coef_dd, n, to);
            CVec<DD> y0;
            for (const auto& z : r1.x) y0.emplace_back(z.re, z.im);
            auto r3 = t3.run(std::move(y0));
            po.status = r3.status;
            po.x = to_std(r3.x);
            if (po.status == PathStatus::converged && !good(po.x))
                po.status = log_extent(r3.x) > std::log(1e6) ? PathStatus::diverged : PathStatus::failed;
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(starts.size())));
    if (workers <= 1) {
        for (std::size_t k = 0; k < starts.size(); ++k) run_path(k);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t k; (k = next.fetch_add(1)) < starts.size();) run_path(k);
            });
        for (auto& th : pool) th.join();
    }

    for (const auto& po : outcomes) {
        if (po.extended) ++rep.extended_reruns;
        switch (po.status) {
        case PathStatus::converged: ++rep.converged; break;
        case PathStatus::diverged: ++rep.diverged; break;
        case PathStatus::failed: ++rep.failed; break;
        }
        if (po.status != PathStatus::converged) continue;
        bool merged = false;
        for (auto& s : rep.solutions)
            if (dist_rel(s.coords, po.x) < kClusterTol) {
                ++s.cluster_size;
                merged = true;
                break;
            }
        if (merged) continue;
        Solution s;
        s.coords = po.x;
        rep.solutions.push_back(std::move(s));
    }
    for (auto& s : rep.solutions) {
        s.in_torus = std::all_of(s.coords.begin(), s.coords.end(), [](Complex z) { return std::abs(z) > kTorusTol; });
        double im = 0;
        for (const auto& z : s.coords) im = std::max(im, std::abs(z.imag()) / std::max(1.0, std::abs(z)));
        s.real = s.in_torus && im < kRealTol;
        if (s.real)
            for (auto& z : s.coords) z = Complex(z.real(), 0.0);
        s.positive = s.real && std::all_of(s.coords.begin(), s.coords.end(), [](Complex z) { return z.real() > 0; });
        s.residual = abs_residual(cresidual, s.coords);
    }
    std::sort(rep.solutions.begin(), rep.solutions.end(), canonical_less);
    if (opts.certify) {
        certify_all(ctarget, rep.solutions);
        for (auto& s : rep.solutions)
            if (!s.certified && s.cluster_size > 1) s = exact_certify(target, std::move(s));
    }
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rep;
}

SolveReport solve(const EinsteinSystem& sys, const SolveOptions& opts) {
    if (sys.form == SystemForm::scaled) {
        const EinsteinSystem raw = einstein_system(sys.params, SystemForm::raw);
        return solve_system(sys.equations, opts, &raw.equations);
    }
    return solve_system(sys.equations, opts, &sys.equations);
}

PublishedCheck verify_published(const SpaceDescriptor& desc, const std::vector<double>& x, double tol) {
    const std::size_t n = desc.params.ell();
    if (x.size() != n) throw ParameterError("verify_published: coordinate count does not match ell");
    std::vector<Complex> xc;
    for (double v : x) {
        if (!(v > 0)) throw ParameterError("verify_published: coordinates must be positive");
        xc.emplace_back(v, 0.0);
    }
    const auto r = ricci_values(desc.params, xc);
    double mean = 0;
    for (const auto& v : r) mean += v.real();
    mean /= static_cast<double>(n);
    PublishedCheck out;
    out.lambda = mean;
    for (const auto& v : r) out.residual = std::max(out.residual, std::abs(v.real() - mean));
    out.residual = mean != 0 ? out.residual / std::abs(mean) : std::numeric_limits<double>::infinity();
    out.is_einstein = out.residual < tol;
    return out;
}

} // namespace hem
