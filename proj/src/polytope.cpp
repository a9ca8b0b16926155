#include "hem/polytope.hpp"

#include "exact_linalg.hpp"
#include "lp.hpp"

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>

namespace hem {

using detail::QMatrix;

int affine_dim(const PointSet& pts) {
    if (pts.empty()) return -1;
    QMatrix m;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        std::vector<Rational> row;
        for (std::size_t j = 0; j < pts[0].size(); ++j) row.emplace_back(pts[i][j] - pts[0][j]);
        m.push_back(std::move(row));
    }
    return detail::rank(std::move(m));
}

LatticePolytope::LatticePolytope(PointSet points) : points_(std::move(points)) {
    std::sort(points_.begin(), points_.end());
    points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
    if (!points_.empty()) {
        ambient_ = points_.front().size();
        for (const auto& p : points_)
            if (p.size() != ambient_) throw std::invalid_argument("points of mixed dimension");
    }
    dim_ = affine_dim(points_);
}

namespace {

// is target in conv(pts)?
bool in_hull(const PointSet& pts, const ExponentVector& target) {
    if (pts.empty()) return false;
    const std::size_t m = pts.size(), n = target.size();
    detail::Simplex<Rational> lp(m, 0, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<Rational> row(m);
        for (std::size_t k = 0; k < m; ++k) row[k] = pts[k][j];
        lp.add_eq(std::move(row), Rational(target[j]));
    }
    lp.add_eq(std::vector<Rational>(m, Rational(1)), Rational(1));
    return lp.maximize(std::vector<Rational>(m, Rational(0))).status == detail::LpStatus::optimal;
}

} // namespace

PointSet LatticePolytope::vertices() const {
    if (points_.size() <= 1) return points_;
    PointSet out;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        PointSet others;
        for (std::size_t k = 0; k < points_.size(); ++k)
            if (k != i) others.push_back(points_[k]);
        if (!in_hull(others, points_[i])) out.push_back(points_[i]);
    }
    return out;
}

bool LatticePolytope::contains(const ExponentVector& p) const { return in_hull(points_, p); }

Integer delannoy(unsigned k) {
    Integer sum = 0;
    for (unsigned j = 0; j <= k; ++j) {
        Integer c;
        mpz_bin_uiui(c.get_mpz_t(), k, j);
        Integer p2;
        mpz_ui_pow_ui(p2.get_mpz_t(), 2, j);
        sum += p2 * c * c;
    }
    return sum;
}

std::vector<PointSet> supports_of(const RationalSystem& sys) {
    std::vector<PointSet> out;
    for (const auto& f : sys.equations()) {
        auto s = support(f);
        out.emplace_back(s.begin(), s.end());
    }
    return out;
}

std::vector<LatticePolytope> newton_polytopes(const EinsteinSystem& sys) {
    std::vector<LatticePolytope> out;
    for (const auto& s : supports_of(sys.equations)) out.emplace_back(s);
    return out;
}

std::vector<PointSet> generic_einstein_supports(std::size_t ell) {
    SpaceParameters p(ell, std::vector<Rational>(ell, Rational(0)), std::vector<Rational>(ell, Rational(1)));
    const int n = static_cast<int>(ell);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = j; k < n; ++k) p.set_L(i, j, k, Rational(1));
    return supports_of(einstein_system(p, SystemForm::scaled).equations);
}

LatticePolytope permutohedron_tilde(std::size_t ell) {
    PointSet pts{ExponentVector(ell)};
    for (std::size_t j = 0; j < ell; ++j)
        for (std::size_t k = 0; k < ell; ++k) {
            if (j == k) continue;
            ExponentVector e(ell);
            e[k] += 1;
            e[j] -= 2;
            pts.push_back(e);
        }
    return LatticePolytope(std::move(pts));
}

std::vector<FaceDescriptor> faces_ST(std::size_t ell) {
    std::vector<FaceDescriptor> out;
    // each index is in S (1), T (2) or neither (0)
    std::size_t count = 1;
    for (std::size_t i = 0; i < ell; ++i) count *= 3;
    for (std::size_t code = 0; code < count; ++code) {
        FaceDescriptor f;
        std::size_t c = code;
        for (std::size_t i = 0; i < ell; ++i, c /= 3) {
            if (c % 3 == 1) f.S.push_back(static_cast<int>(i));
            if (c % 3 == 2) f.T.push_back(static_cast<int>(i));
        }
        if (!f.S.empty() && !f.T.empty()) out.push_back(std::move(f));
    }
    std::sort(out.begin(), out.end(), [](const FaceDescriptor& a, const FaceDescriptor& b) {
        if (a.dim() != b.dim()) return a.dim() < b.dim();
        if (a.S != b.S) return a.S < b.S;
        return a.T < b.T;
    });
    return out;
}

PointSet face_points(const FaceDescriptor& f, std::size_t ell) {
    PointSet pts;
    if (f.with_origin) pts.emplace_back(ell);
    for (int s : f.S)
        for (int t : f.T) {
            ExponentVector e(ell);
            e[s] += 1;
            e[t] -= 2;
            pts.push_back(e);
        }
    return pts;
}

std::vector<Rational> face_normal(const FaceDescriptor& f, std::size_t ell) {
    std::vector<Rational> a(ell, Rational(1));
    for (int s : f.S) a[s] = 0;
    for (int t : f.T) a[t] = 2;
    return a;
}

namespace {

Rational pairing(const std::vector<Rational>& a, const ExponentVector& e) {
    Rational s = 0;
    for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i]) s += a[i] * e[i];
    return s;
}

template <class Scalar>
LaurentPolynomial<Scalar> restrict_impl(const LaurentPolynomial<Scalar>& p, const std::vector<Rational>& a) {
    if (p.is_zero()) return p;
    if (a.size() != p.ell()) throw std::invalid_argument("face direction has wrong length");
    std::optional<Rational> best;
    for (const auto& [e, c] : p.terms()) {
        Rational v = pairing(a, e);
        if (!best || v < *best) best = v;
    }
    LaurentPolynomial<Scalar> out(p.ell());
    for (const auto& [e, c] : p.terms())
        if (pairing(a, e) == *best) out.add_term(e, c);
    return out;
}

} // namespace

RationalPolynomial face_restrict(const RationalPolynomial& p, const std::vector<Rational>& a) {
    return restrict_impl(p, a);
}
ComplexPolynomial face_restrict(const ComplexPolynomial& p, const std::vector<Rational>& a) {
    return restrict_impl(p, a);
}

PointSet face_of(const PointSet& pts, const std::vector<Rational>& a) {
    if (pts.empty()) return {};
    Rational best = pairing(a, pts[0]);
    for (const auto& p : pts) best = std::min(best, pairing(a, p));
    PointSet out;
    for (const auto& p : pts)
        if (pairing(a, p) == best) out.push_back(p);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

// Coordinates onto which pts project injectively (affine-isomorphically).
std::vector<std::size_t> chart(const PointSet& pts) {
    const std::size_t n = pts[0].size();
    std::vector<std::size_t> chosen;
    QMatrix cols;
    int r = 0;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<Rational> col;
        for (std::size_t i = 1; i < pts.size(); ++i) col.emplace_back(pts[i][j] - pts[0][j]);
        QMatrix trial = cols;
        trial.push_back(col);
        int tr = detail::rank(trial);
        if (tr > r) {
            cols = std::move(trial);
            chosen.push_back(j);
            r = tr;
        }
    }
    return chosen;
}

PointSet project(const PointSet& pts, const std::vector<std::size_t>& coords) {
    PointSet out;
    for (const auto& p : pts) {
        std::vector<int> v;
        for (std::size_t c : coords) v.push_back(p[c]);
        out.emplace_back(std::move(v));
    }
    return out;
}

void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& fn) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    if (k > n) return;
    while (true) {
        fn(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

} // namespace

Integer normalized_volume(const LatticePolytope& poly, std::uint64_t seed) {
    const std::size_t n = poly.ambient_dim();
    if (poly.dim() < static_cast<int>(n) || n == 0) return 0;
    const PointSet V = poly.vertices();
    const std::size_t m = V.size();

    for (int attempt = 0; attempt < 16; ++attempt) {
        std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(attempt));
        std::uniform_int_distribution<long> dist(0, (1L << 20) - 1);
        std::vector<long> h(m);
        for (auto& v : h) v = dist(rng);

        Integer total = 0;
        bool degenerate = false;
        for_each_subset(m, n + 1, [&](const std::vector<std::size_t>& s) {
            if (degenerate) return;
            // M rows [1, p_j]
            std::vector<std::vector<long>> M(n + 1, std::vector<long>(n + 1));
            for (std::size_t r = 0; r <= n; ++r) {
                M[r][0] = 1;
                for (std::size_t c = 0; c < n; ++c) M[r][c + 1] = V[s[r]][c];
            }
            const Integer D = detail::det_int(M);
            if (sgn(D) == 0) return;
            // adjugate column sums give D * (affine interpolant of h)
            std::vector<Integer> N(n + 1, Integer(0));
            for (std::size_t r = 0; r <= n; ++r)
                for (std::size_t c = 0; c <= n; ++c) {
                    // cofactor C[r][c], adj[c][r] = C[r][c]; N = adj * h
                    std::vector<std::vector<long>> minor;
                    for (std::size_t rr = 0; rr <= n; ++rr) {
                        if (rr == r) continue;
                        std::vector<long> row;
                        for (std::size_t cc = 0; cc <= n; ++cc)
                            if (cc != c) row.push_back(M[rr][cc]);
                        minor.push_back(std::move(row));
                    }
                    Integer cof = detail::det_int(minor);
                    if ((r + c) % 2) cof = -cof;
                    N[c] += cof * h[s[r]];
                }
            const int sD = sgn(D);
            for (std::size_t q = 0; q < m; ++q) {
                if (std::find(s.begin(), s.end(), q) != s.end()) continue;
                Integer g = N[0];
                for (std::size_t c = 0; c < n; ++c) g += N[c + 1] * V[q][c];
                Integer diff = D * h[q] - g; // sign(D) * (h(q) - interpolant(q)) * |D|
                int sg = sgn(diff) * sD;
                if (sg < 0) return;
                if (sg == 0) {
                    degenerate = true;
                    return;
                }
            }
            total += abs(D);
        });
        if (!degenerate) return total;
    }
    throw DegenerateLift("normalized_volume: no generic lift found");
}

bool union_volume_criterion(const std::vector<LatticePolytope>& polys) {
    PointSet all;
    for (const auto& p : polys) all.insert(all.end(), p.points().begin(), p.points().end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    if (all.size() <= 1) return true;
    const int d = affine_dim(all);
    const PointSet Q = project(all, chart(all));
    const std::size_t m = Q.size();

    // membership of each union point in each polytope's generators
    std::vector<std::vector<bool>> member(polys.size(), std::vector<bool>(m, false));
    for (std::size_t i = 0; i < polys.size(); ++i)
        for (const auto& pt : polys[i].points()) {
            auto it = std::lower_bound(all.begin(), all.end(), pt);
            member[i][static_cast<std::size_t>(it - all.begin())] = true;
        }

    std::set<std::vector<bool>> facets;
    if (d == 1) {
        // endpoints of a segment
        std::size_t lo = 0, hi = 0;
        for (std::size_t q = 1; q < m; ++q) {
            if (Q[q] < Q[lo]) lo = q;
            if (Q[hi] < Q[q]) hi = q;
        }
        std::vector<bool> a(m, false), b(m, false);
        a[lo] = true;
        b[hi] = true;
        facets = {a, b};
    } else {
        for_each_subset(m, static_cast<std::size_t>(d), [&](const std::vector<std::size_t>& s) {
            // normal vector via cofactors of the (d-1) x d difference matrix
            std::vector<std::vector<long>> diff;
            for (std::size_t r = 1; r < s.size(); ++r) {
                std::vector<long> row;
                for (int c = 0; c < d; ++c) row.push_back(Q[s[r]][c] - Q[s[0]][c]);
                diff.push_back(std::move(row));
            }
            std::vector<Integer> nrm(d);
            bool zero = true;
            for (int c = 0; c < d; ++c) {
                std::vector<std::vector<long>> minor;
                for (const auto& row : diff) {
                    std::vector<long> mr;
                    for (int cc = 0; cc < d; ++cc)
                        if (cc != c) mr.push_back(row[cc]);
                    minor.push_back(std::move(mr));
                }
                nrm[c] = detail::det_int(minor);
                if (c % 2) nrm[c] = -nrm[c];
                if (sgn(nrm[c])) zero = false;
            }
            if (zero) return;
            int side = 0;
            std::vector<bool> on(m, false);
            for (std::size_t q = 0; q < m; ++q) {
                Integer v = 0;
                for (int c = 0; c < d; ++c) v += nrm[c] * (Q[q][c] - Q[s[0]][c]);
                int sg = sgn(v);
                if (sg == 0) {
                    on[q] = true;
                } else if (side == 0) {
                    side = sg;
                } else if (sg != side) {
                    return;
                }
            }
            facets.insert(on);
        });
    }

    // all proper faces are intersections of facets
    std::set<std::vector<bool>> faces(facets.begin(), facets.end());
    std::vector<std::vector<bool>> frontier(facets.begin(), facets.end());
    while (!frontier.empty()) {
        std::vector<std::vector<bool>> next;
        for (const auto& f : frontier)
            for (const auto& g : facets) {
                std::vector<bool> h(m);
                bool any = false;
                for (std::size_t q = 0; q < m; ++q) {
                    h[q] = f[q] && g[q];
                    any = any || h[q];
                }
                if (any && faces.insert(h).second) next.push_back(h);
            }
        frontier = std::move(next);
    }

    for (const auto& f : faces) {
        PointSet pts;
        for (std::size_t q = 0; q < m; ++q)
            if (f[q]) pts.push_back(Q[q]);
        const int t = affine_dim(pts);
        int meets = 0;
        for (std::size_t i = 0; i < polys.size(); ++i) {
            for (std::size_t q = 0; q < m; ++q)
                if (f[q] && member[i][q]) {
                    ++meets;
                    break;
                }
        }
        if (meets < t + 1) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

namespace {

Integer multinomial(const std::vector<unsigned>& parts) {
    unsigned total = 0;
    Integer num = 1;
    for (unsigned p : parts) {
        for (unsigned k = 1; k <= p; ++k) {
            ++total;
            num *= total;
            num /= k;
        }
    }
    return num;
}

} // namespace

Integer descent_count(unsigned ell, const std::set<unsigned>& S) {
    for (unsigned s : S)
        if (s < 1 || s + 1 > ell) throw std::invalid_argument("descent position out of range");
    const std::vector<unsigned> v(S.begin(), S.end());
    const std::size_t k = v.size();
    Integer total = 0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        std::vector<unsigned> parts;
        unsigned prev = 0;
        std::size_t bits = 0;
        for (std::size_t i = 0; i < k; ++i)
            if (mask >> i & 1) {
                parts.push_back(v[i] - prev);
                prev = v[i];
                ++bits;
            }
        parts.push_back(ell - prev);
        Integer term = multinomial(parts);
        if ((k - bits) % 2) total -= term;
        else total += term;
    }
    return total;
}

std::set<unsigned> postnikov_path_set(const std::vector<unsigned>& c) {
    std::set<unsigned> I;
    unsigned height = 0;
    for (unsigned m = 1; m < c.size(); ++m) {
        height += c[m - 1];
        if (height <= m - 1) I.insert(m);
    }
    return I;
}

Rational postnikov_volume(const std::vector<Rational>& y) {
    const unsigned ell = static_cast<unsigned>(y.size());
    if (ell == 0) return 0;
    for (unsigned i = 1; i < ell; ++i)
        if (y[i] > y[i - 1]) throw std::invalid_argument("postnikov_volume expects y sorted descending");
    Rational total = 0;
    std::vector<unsigned> c(ell, 0);
    const unsigned target = ell - 1;
    std::function<void(unsigned, unsigned)> rec = [&](unsigned pos, unsigned left) {
        if (pos + 1 == ell) {
            c[pos] = left;
            Rational mono = 1;
            for (unsigned i = 0; i < ell; ++i)
                for (unsigned e = 0; e < c[i]; ++e) mono *= y[i];
            if (is_zero(mono)) return;
            const auto I = postnikov_path_set(c);
            Rational term = Rational(descent_count(ell, I) * multinomial(c)) * mono;
            if (I.size() % 2) total -= term;
            else total += term;
            return;
        }
        for (unsigned v = 0; v <= left; ++v) {
            c[pos] = v;
            rec(pos + 1, left - v);
        }
    };
    rec(0, target);
    return total;
}

// ---------------------------------------------------------------------------

std::string format_supports(const std::vector<PointSet>& supports) {
    std::ostringstream os;
    for (std::size_t b = 0; b < supports.size(); ++b) {
        if (b) os << '\n';
        for (const auto& p : supports[b]) {
            for (std::size_t i = 0; i < p.size(); ++i) os << (i ? " " : "") << p[i];
            os << '\n';
        }
    }
    return os.str();
}

std::vector<PointSet> parse_supports(const std::string& text) {
    std::vector<PointSet> out;
    PointSet cur;
    std::istringstream is(text);
    std::string line;
    std::size_t width = 0;
    auto flush = [&] {
        if (!cur.empty()) out.push_back(std::move(cur));
        cur.clear();
    };
    while (std::getline(is, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            flush();
            continue;
        }
        std::istringstream ls(line);
        std::vector<int> v;
        std::string tok;
        while (ls >> tok) {
            std::size_t used = 0;
            int x = std::stoi(tok, &used);
            if (used != tok.size()) throw std::invalid_argument("malformed exponent: " + tok);
            v.push_back(x);
        }
        if (width == 0) width = v.size();
        if (v.size() != width) throw std::invalid_argument("exponent vectors of unequal length");
        cur.emplace_back(std::move(v));
    }
    flush();
    return out;
}

} // namespace hem
