#include "hem/discriminants.hpp"

#include "exact_linalg.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <set>

namespace hem {

namespace {

Rational det_q(detail::QMatrix m) {
    const std::size_t n = m.size();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && sgn(m[piv][c]) == 0) ++piv;
        if (piv == n) return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (sgn(m[i][c]) == 0) continue;
            Rational f = m[i][c] / m[c][c];
            for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
        }
    }
    return det;
}

void require_ell(const SpaceParameters& p, std::size_t ell, const char* what) {
    if (p.ell() != ell) throw ParameterError(std::string(what) + " needs ell = " + std::to_string(ell));
}

} // namespace

RationalPolynomial cubic_l2(const SpaceParameters& p) {
    require_ell(p, 2, "cubic_l2");
    const auto& d = p.d();
    RationalPolynomial c(2);
    c.add_term({3, 0}, (2 * d[0] + d[1]) * p.L(0, 1, 1));
    c.add_term({2, 1}, d[0] * l_prime(p, 1));
    c.add_term({1, 2}, -d[1] * l_prime(p, 0));
    c.add_term({0, 3}, -(d[0] + 2 * d[1]) * p.L(0, 0, 1));
    return c;
}

Rational sylvester_l2(const SpaceParameters& p) {
    require_ell(p, 2, "sylvester_l2");
    const Rational a = p.L(0, 1, 1), b = l_prime(p, 1), c = l_prime(p, 0), e = p.L(0, 0, 1);
    detail::QMatrix m(6, std::vector<Rational>(6));
    for (int r = 0; r < 3; ++r) {
        m[r][r] = a;
        m[r][r + 1] = b;
        m[r][r + 2] = c;
        m[r][r + 3] = e;
        m[r + 3][r] = 3 * a;
        m[r + 3][r + 1] = 2 * b;
        m[r + 3][r + 2] = c;
    }
    return det_q(std::move(m));
}

bool is_wallach_type(const SpaceParameters& p) {
    if (p.ell() != 3) return false;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            if (i != k && !is_zero(p.L(i, i, k))) return false;
    return true;
}

namespace {

struct WallachFactors {
    Rational L123, det2[3], det3;
};

WallachFactors wallach_factors(const SpaceParameters& p) {
    WallachFactors f;
    f.L123 = p.L(0, 1, 2);
    const Rational q = 4 * f.L123;
    Rational lp[3];
    for (int i = 0; i < 3; ++i) {
        lp[i] = l_prime(p, i);
        f.det2[i] = q * q - lp[i] * lp[i];
    }
    f.det3 = det_q({{q, lp[0], lp[1]}, {lp[0], q, lp[2]}, {lp[1], lp[2], q}});
    return f;
}

} // namespace

Rational wallach_disc_l3(const SpaceParameters& p) {
    require_ell(p, 3, "wallach_disc_l3");
    if (!is_wallach_type(p)) throw ParameterError("wallach_disc_l3 needs L_iik = 0 for i != k");
    const auto f = wallach_factors(p);
    return f.L123 * f.det2[0] * f.det2[1] * f.det2[2] * f.det3;
}

std::vector<LinearFactor> linear_factor_values(const std::vector<Rational>& d) {
    const int n = static_cast<int>(d.size());
    std::vector<LinearFactor> out;
    // base-3 labels: 0 unused, 1 in S, 2 in T
    long total = 1;
    for (int i = 0; i < n; ++i) total *= 3;
    for (long code = 0; code < total; ++code) {
        LinearFactor f;
        long c = code;
        for (int i = 0; i < n; ++i, c /= 3) {
            if (c % 3 == 1) {
                f.S.push_back(i);
                f.value += 2 * d[i];
            } else if (c % 3 == 2) {
                f.T.push_back(i);
                f.value += d[i];
            }
        }
        if (!f.S.empty() && !f.T.empty()) out.push_back(std::move(f));
    }
    return out;
}

bool linear_factors(const std::vector<Rational>& d) {
    if (d.size() < 2) return true;
    const bool all_pos = std::all_of(d.begin(), d.end(), [](const Rational& v) { return sgn(v) > 0; });
    const bool all_neg = std::all_of(d.begin(), d.end(), [](const Rational& v) { return sgn(v) < 0; });
    if (all_pos || all_neg) return true;
    for (const auto& f : linear_factor_values(d))
        if (is_zero(f.value)) return false;
    return true;
}

std::vector<Rational> face_direction(const FaceDescriptor& f, FaceCase c, std::size_t ell) {
    // <a0, e_k - 2 e_j> = -4 on F_{S,T}; shifting by t*1 adds -t since coordinates sum to -1
    auto a = face_normal(f, ell);
    const int shift = c == FaceCase::lower ? 0 : c == FaceCase::tie ? -4 : -5;
    for (auto& v : a) v += shift;
    return a;
}

namespace {

PointSet wallach_simplex_vertices() {
    return {ExponentVector{0, 0, 0}, ExponentVector{1, -1, -1}, ExponentVector{-1, 1, -1}, ExponentVector{-1, -1, 1}};
}

// Inner normal of each facet of a full-dimensional simplex, indexed by the opposite vertex.
std::vector<std::vector<Rational>> simplex_facet_normals(const PointSet& V) {
    const std::size_t n = V.size() - 1;
    std::vector<std::vector<Rational>> normals;
    for (std::size_t w = 0; w < V.size(); ++w) {
        const std::size_t base = w == 0 ? 1 : 0;
        detail::QMatrix m;
        std::vector<Rational> rhs;
        for (std::size_t v = 0; v < V.size(); ++v) {
            if (v == w || v == base) continue;
            std::vector<Rational> row;
            for (std::size_t j = 0; j < n; ++j) row.emplace_back(V[v][j] - V[base][j]);
            m.push_back(std::move(row));
            rhs.emplace_back(0);
        }
        std::vector<Rational> row;
        for (std::size_t j = 0; j < n; ++j) row.emplace_back(V[w][j] - V[base][j]);
        m.push_back(std::move(row));
        rhs.emplace_back(1);
        normals.push_back(*detail::solve(std::move(m), std::move(rhs)));
    }
    return normals;
}

std::vector<std::vector<Rational>> wallach_directions() {
    const auto V = wallach_simplex_vertices();
    const auto N = simplex_facet_normals(V);
    std::vector<std::vector<Rational>> out;
    const unsigned full = (1u << V.size()) - 1;
    for (unsigned face = 1; face < full; ++face) {
        std::vector<Rational> a(3);
        // facets containing the face are those opposite a vertex outside it
        for (std::size_t w = 0; w < V.size(); ++w)
            if (!(face >> w & 1))
                for (int j = 0; j < 3; ++j) a[j] += N[w][j];
        out.push_back(std::move(a));
    }
    return out;
}

} // namespace

std::vector<PointSet> reference_supports(const SpaceParameters& params) {
    if (is_wallach_type(params)) {
        std::vector<PointSet> out;
        for (std::size_t i = 0; i < 3; ++i) {
            PointSet s = wallach_simplex_vertices();
            s.push_back(-1 * ExponentVector::unit(3, i));
            std::sort(s.begin(), s.end());
            out.push_back(std::move(s));
        }
        return out;
    }
    return generic_einstein_supports(params.ell());
}

namespace {

struct FacialSystem {
    std::vector<ComplexPolynomial> eqs;
};

FacialSystem facial_system(const EinsteinSystem& sys, const std::vector<Rational>& a,
                           const std::vector<PointSet>& reference) {
    FacialSystem fs;
    for (std::size_t i = 0; i < sys.equations.size(); ++i) {
        const auto& f = sys.equations[i];
        std::set<ExponentVector> pts(reference.at(i).begin(), reference.at(i).end());
        for (const auto& [e, c] : f.terms()) pts.insert(e);
        const PointSet face = face_of(PointSet(pts.begin(), pts.end()), a);
        const std::set<ExponentVector> keep(face.begin(), face.end());
        ComplexPolynomial g(f.ell());
        for (const auto& [e, c] : f.terms())
            if (keep.count(e)) g.add_term(e, to_complex(c));
        if (!g.is_zero()) fs.eqs.push_back(std::move(g));
    }
    return fs;
}

// Each facial equation divided by its first term, as a function of log coordinates
// restricted to the span of its exponent differences; the torus directions that
// only rescale the equations are quotiented out.
struct QuotientSystem {
    std::vector<std::vector<Complex>> coeff;    // c_t / c_0
    std::vector<std::vector<Eigen::VectorXd>> dir; // B^T (e_t - e_0)
    Eigen::MatrixXd B;                          // ell x k orthonormal basis
};

QuotientSystem quotient(const std::vector<ComplexPolynomial>& eqs, std::size_t ell) {
    QuotientSystem q;
    std::vector<Eigen::VectorXd> diffs;
    std::vector<std::vector<std::pair<ExponentVector, Complex>>> terms;
    for (const auto& f : eqs) {
        terms.push_back(f.sorted_terms());
        const auto& t = terms.back();
        for (std::size_t k = 1; k < t.size(); ++k) {
            Eigen::VectorXd v(ell);
            for (std::size_t j = 0; j < ell; ++j) v(j) = t[k].first[j] - t[0].first[j];
            diffs.push_back(v);
        }
    }
    if (diffs.empty()) {
        q.B.resize(static_cast<Eigen::Index>(ell), 0);
    } else {
        Eigen::MatrixXd D(ell, diffs.size());
        for (std::size_t k = 0; k < diffs.size(); ++k) D.col(k) = diffs[k];
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(D, Eigen::ComputeFullU);
        int rank = 0;
        for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
            if (svd.singularValues()(k) > 1e-9 * svd.singularValues()(0)) ++rank;
        q.B = svd.matrixU().leftCols(rank);
    }
    for (const auto& t : terms) {
        std::vector<Complex> c;
        std::vector<Eigen::VectorXd> d;
        for (const auto& [e, v] : t) {
            c.push_back(v / t[0].second);
            Eigen::VectorXd w(ell);
            for (std::size_t j = 0; j < ell; ++j) w(j) = e[j] - t[0].first[j];
            d.push_back(q.B.transpose() * w);
        }
        q.coeff.push_back(std::move(c));
        q.dir.push_back(std::move(d));
    }
    return q;
}

// Residual vector g(y), its Jacobian, and the worst relative residual |g_i| / sum |terms|.
double quotient_eval(const QuotientSystem& q, const Eigen::VectorXcd& y, Eigen::VectorXcd& G, Eigen::MatrixXcd& J,
                     double& relative) {
    const Eigen::Index m = static_cast<Eigen::Index>(q.coeff.size()), k = y.size();
    G.resize(m);
    J.setZero(m, k);
    relative = 0;
    double norm2 = 0;
    for (Eigen::Index i = 0; i < m; ++i) {
        Complex v(0);
        double scale = 0;
        for (std::size_t t = 0; t < q.coeff[i].size(); ++t) {
            Complex s(0);
            for (Eigen::Index j = 0; j < k; ++j) s += q.dir[i][t](j) * y(j);
            const Complex term = q.coeff[i][t] * std::exp(s);
            v += term;
            scale += std::abs(term);
            for (Eigen::Index j = 0; j < k; ++j) J(i, j) += q.dir[i][t](j) * term;
        }
        G(i) = v;
        norm2 += std::norm(v);
        relative = std::max(relative, std::abs(v) / scale);
    }
    return std::sqrt(norm2);
}

} // namespace

ProbeResult facial_probe(const EinsteinSystem& sys, const std::vector<Rational>& a,
                         const std::vector<PointSet>& reference, const ProbeOptions& opts) {
    const std::size_t n = sys.params.ell();
    ProbeResult res;
    const FacialSystem fs = facial_system(sys, a, reference);
    if (fs.eqs.empty()) {
        res.root_found = res.identically_zero = true;
        res.witness.assign(n, Complex(1.0));
        return res;
    }
    res.best_residual = 1.0;
    for (const auto& f : fs.eqs)
        if (f.term_count() == 1) return res; // a lone monomial never vanishes on the torus
    const QuotientSystem q = quotient(fs.eqs, n);
    const Eigen::Index k = q.B.cols();
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    Eigen::VectorXcd G, Gt;
    Eigen::MatrixXcd J, Jt;
    for (int s = 0; s < opts.starts; ++s) {
        Eigen::VectorXcd y(k);
        for (Eigen::Index j = 0; j < k; ++j) y(j) = Complex(gauss(rng), angle(rng));
        double rel = 0, rel_t = 0;
        double r = quotient_eval(q, y, G, J, rel);
        double mu = 1e-3;
        for (int it = 0; it < opts.iterations && rel > opts.tol; ++it) {
            const Eigen::MatrixXcd H = J.adjoint() * J + mu * Eigen::MatrixXcd::Identity(k, k);
            const Eigen::VectorXcd yt = y + H.ldlt().solve(-J.adjoint() * G);
            if (yt.real().cwiseAbs().maxCoeff() > 60) break;
            const double rt = quotient_eval(q, yt, Gt, Jt, rel_t);
            if (rt < r) {
                y = yt;
                r = rt;
                rel = rel_t;
                G = Gt;
                J = Jt;
                mu = std::max(mu / 3, 1e-12);
            } else {
                mu *= 4;
                if (mu > 1e12) break;
            }
        }
        res.best_residual = std::min(res.best_residual, rel);
        if (rel <= opts.tol && y.real().cwiseAbs().maxCoeff() < 40) {
            res.root_found = true;
            const Eigen::VectorXcd z = q.B.cast<Complex>() * y;
            res.witness.resize(n);
            for (std::size_t j = 0; j < n; ++j) res.witness[j] = std::exp(z(static_cast<Eigen::Index>(j)));
            return res;
        }
    }
    return res;
}

ProbeResult facial_probe(const EinsteinSystem& sys, const FaceDescriptor& face, FaceCase c, const ProbeOptions& opts) {
    const std::size_t ell = sys.params.ell();
    return facial_probe(sys, face_direction(face, c, ell), generic_einstein_supports(ell), opts);
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::bkk_generic_certified: return "bkk_generic_certified";
    case Verdict::inconclusive: return "inconclusive";
    case Verdict::degenerate: return "degenerate";
    }
    return "?";
}

namespace {

constexpr int kMaxProbedFaces = 400;

std::vector<std::vector<Rational>> probe_directions(const SpaceParameters& p) {
    if (is_wallach_type(p)) return wallach_directions();
    const std::size_t ell = p.ell();
    std::vector<std::vector<Rational>> out;
    out.emplace_back(ell, Rational(1));
    for (const auto& f : faces_ST(ell))
        for (FaceCase c : {FaceCase::lower, FaceCase::tie, FaceCase::upper}) out.push_back(face_direction(f, c, ell));
    return out;
}

// Probes until a root turns up; returns the witness if one does.
std::optional<std::vector<Complex>> probe_all(const SpaceParameters& p, const ProbeOptions& opts, DiscriminantReport& rep) {
    if (p.ell() < 2) return std::nullopt;
    const EinsteinSystem sys = einstein_system(p, SystemForm::scaled);
    const auto ref = reference_supports(p);
    auto dirs = probe_directions(p);
    if (dirs.size() > static_cast<std::size_t>(kMaxProbedFaces)) {
        dirs.resize(kMaxProbedFaces);
        rep.notes.push_back("face probing truncated at " + std::to_string(kMaxProbedFaces) + " directions");
    }
    for (std::size_t k = 0; k < dirs.size(); ++k) {
        ProbeOptions o = opts;
        o.seed = opts.seed + 7919 * k;
        ++rep.faces_probed;
        auto r = facial_probe(sys, dirs[k], ref, o);
        if (r.root_found) return r.witness;
    }
    return std::nullopt;
}

} // namespace

DiscriminantReport discriminant_report(const SpaceParameters& p, const ProbeOptions& opts) {
    DiscriminantReport rep;
    const auto& d = p.d();
    rep.linear_factors_nonzero = linear_factors(d);
    bool factors_nonzero = rep.linear_factors_nonzero;
    bool complete = false; // factors alone decide genericity
    auto add = [&](std::string name, Rational v) {
        if (is_zero(v)) factors_nonzero = false;
        rep.factors.push_back({std::move(name), std::move(v)});
    };

    if (p.ell() == 2) {
        add("2d1+d2", 2 * d[0] + d[1]);
        add("d1+2d2", d[0] + 2 * d[1]);
        const Rational s = sylvester_l2(p);
        rep.special_factor = s;
        add("sylvester", s);
        complete = true;
    } else if (is_wallach_type(p)) {
        const auto f = wallach_factors(p);
        add("L123", f.L123);
        for (int i = 0; i < 3; ++i) add("16L123^2-L'" + std::to_string(i + 1) + "^2", f.det2[i]);
        add("det3", f.det3);
        rep.special_factor = f.L123 * f.det2[0] * f.det2[1] * f.det2[2] * f.det3;
        const bool d_pos = std::all_of(d.begin(), d.end(), [](const Rational& v) { return sgn(v) > 0; });
        complete = d_pos;
        if (!d_pos) rep.notes.push_back("simplex criterion needs d > 0");
    } else if (p.ell() == 3) {
        for (auto [i, j, k] : std::vector<Triple>{{0, 0, 1}, {0, 1, 1}, {0, 0, 2}, {0, 2, 2}, {1, 1, 2}, {1, 2, 2}})
            add("L" + std::to_string(i + 1) + std::to_string(j + 1) + std::to_string(k + 1), p.L(i, j, k));
        const Rational L123 = p.L(0, 1, 2);
        add("L123^2-L133L122", L123 * L123 - p.L(0, 2, 2) * p.L(0, 1, 1));
        add("L123^2-L233L112", L123 * L123 - p.L(1, 2, 2) * p.L(0, 0, 1));
        add("L123^2-L113L223", L123 * L123 - p.L(0, 0, 2) * p.L(1, 1, 2));
        rep.notes.push_back("A-discriminant factor not evaluated");
    } else {
        rep.notes.push_back("no principal A-determinant factors available for this ell");
    }

    if (complete && factors_nonzero) {
        rep.verdict = Verdict::bkk_generic_certified;
        return rep;
    }
    auto witness = probe_all(p, opts, rep);
    if (witness) {
        rep.verdict = Verdict::degenerate;
        rep.witness = std::move(witness);
    } else if (complete && p.ell() == 2) {
        // for two summands the Sylvester criterion is an equivalence
        rep.verdict = Verdict::degenerate;
    } else {
        rep.verdict = Verdict::inconclusive;
    }
    return rep;
}

} // namespace hem
