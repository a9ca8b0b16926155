#include "hem/polytope.hpp"

#include "exact_linalg.hpp"
#include "lp.hpp"

#include <cmath>
#include <random>

namespace hem {

Integer MixedSubdivision::mixed_volume() const {
    Integer s = 0;
    for (const auto& c : cells) s += c.volume;
    return s;
}

namespace {

using Edge = std::array<int, 2>;

constexpr double kLpEps = 1e-10;
constexpr double kMarginTol = 1e-9;

class CellSearch {
public:
    CellSearch(const std::vector<PointSet>& supports, const std::vector<std::vector<std::int64_t>>& lift)
        : A_(supports), w_(lift), n_(supports.size()) {
        std::int64_t maxw = 1;
        for (const auto& l : lift)
            for (auto v : l) maxw = std::max(maxw, v < 0 ? -v : v);
        wscale_ = 1.0 / static_cast<double>(maxw);
    }

    std::vector<MixedCell> run() {
        for (std::size_t i = 0; i < n_; ++i) edges_.push_back(lower_edges(i));
        build_compat();
        chosen_.assign(n_, Edge{-1, -1});
        std::vector<std::vector<int>> cand(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            cand[i].resize(edges_[i].size());
            for (std::size_t x = 0; x < cand[i].size(); ++x) cand[i][x] = static_cast<int>(x);
        }
        std::vector<char> done(n_, 0);
        dfs(0, cand, done);
        std::sort(cells_.begin(), cells_.end(),
                  [](const MixedCell& a, const MixedCell& b) { return a.pairs < b.pairs; });
        return std::move(cells_);
    }

private:
    double wd(std::size_t i, int k) const { return static_cast<double>(w_[i][k]) * wscale_; }

    // Is there alpha with the chosen edges lower in their lifted supports? Solved as
    // the dual of  max s  s.t.  G (alpha, s) <= h,  which has only ell+1 rows.
    bool feasible(const std::vector<std::pair<std::size_t, Edge>>& picks) const {
        const std::size_t nz = n_ + 1;
        std::vector<std::vector<double>> G;
        std::vector<double> h;
        for (const auto& [i, e] : picks) {
            const auto& P = A_[i];
            const auto& a = P[e[0]];
            const auto& b = P[e[1]];
            std::vector<double> row(nz, 0.0);
            for (std::size_t j = 0; j < n_; ++j) row[j] = b[j] - a[j];
            const double r = wd(i, e[0]) - wd(i, e[1]);
            G.push_back(row);
            h.push_back(r);
            for (auto& v : row) v = -v;
            G.push_back(row);
            h.push_back(-r);
            for (int c = 0; c < static_cast<int>(P.size()); ++c) {
                if (c == e[0] || c == e[1]) continue;
                std::vector<double> g(nz, 0.0);
                for (std::size_t j = 0; j < n_; ++j) g[j] = -(P[c][j] - a[j]);
                g[n_] = 1.0;
                G.push_back(std::move(g));
                h.push_back(wd(i, c) - wd(i, e[0]));
            }
        }
        std::vector<double> cap(nz, 0.0);
        cap[n_] = 1.0;
        G.push_back(cap);
        h.push_back(1.0);

        const std::size_t m = G.size();
        detail::Simplex<double> lp(m, 0, kLpEps);
        for (std::size_t j = 0; j < nz; ++j) {
            std::vector<double> row(m);
            for (std::size_t r = 0; r < m; ++r) row[r] = G[r][j];
            lp.add_eq(std::move(row), j == n_ ? 1.0 : 0.0);
        }
        std::vector<double> obj(m);
        for (std::size_t r = 0; r < m; ++r) obj[r] = -h[r];
        auto res = lp.maximize(obj);
        // dual unbounded or infeasible means the primal has no alpha at all
        return res.status == detail::LpStatus::optimal && -res.objective > -kMarginTol;
    }

    std::vector<Edge> lower_edges(std::size_t i) const {
        std::vector<Edge> out;
        const int m = static_cast<int>(A_[i].size());
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b < m; ++b)
                if (feasible({{i, Edge{a, b}}})) out.push_back({a, b});
        return out;
    }

    void build_compat() {
        compat_.assign(n_, std::vector<std::vector<char>>(n_));
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j) {
                auto& tab = compat_[i][j];
                tab.assign(edges_[i].size() * edges_[j].size(), 0);
                for (std::size_t x = 0; x < edges_[i].size(); ++x)
                    for (std::size_t y = 0; y < edges_[j].size(); ++y)
                        tab[x * edges_[j].size() + y] = feasible({{i, edges_[i][x]}, {j, edges_[j][y]}}) ? 1 : 0;
            }
    }

    bool compatible(std::size_t i, int x, std::size_t j, int y) const {
        if (i > j) std::swap(i, j), std::swap(x, y);
        return compat_[i][j][static_cast<std::size_t>(x) * edges_[j].size() + static_cast<std::size_t>(y)] != 0;
    }

    // Fraction-free elimination on the edge directions; exact for the small integer entries here.
    bool independent() const {
        std::vector<std::vector<__int128>> m;
        for (std::size_t i = 0; i < n_; ++i) {
            const auto& e = chosen_[i];
            if (e[0] < 0) continue;
            std::vector<__int128> row(n_);
            for (std::size_t j = 0; j < n_; ++j) row[j] = A_[i][e[1]][j] - A_[i][e[0]][j];
            m.push_back(std::move(row));
        }
        const std::size_t rows = m.size();
        __int128 prev = 1;
        std::size_t r = 0;
        for (std::size_t c = 0; c < n_ && r < rows; ++c) {
            std::size_t piv = r;
            while (piv < rows && m[piv][c] == 0) ++piv;
            if (piv == rows) continue;
            std::swap(m[piv], m[r]);
            for (std::size_t k = r + 1; k < rows; ++k) {
                for (std::size_t j = c + 1; j < n_; ++j) m[k][j] = (m[r][c] * m[k][j] - m[k][c] * m[r][j]) / prev;
                m[k][c] = 0;
            }
            prev = m[r][c];
            ++r;
        }
        return r == rows;
    }

    // Branches on the open support with the fewest candidates; every other open
    // support keeps only the edges compatible with the new pick.
    void dfs(std::size_t depth, const std::vector<std::vector<int>>& cand, std::vector<char>& done) {
        if (depth == n_) {
            leaf();
            return;
        }
        std::size_t i = n_;
        for (std::size_t k = 0; k < n_; ++k)
            if (!done[k] && (i == n_ || cand[k].size() < cand[i].size())) i = k;
        done[i] = 1;
        for (int x : cand[i]) {
            std::vector<std::vector<int>> next(n_);
            bool alive = true;
            for (std::size_t j = 0; j < n_ && alive; ++j) {
                if (done[j]) continue;
                for (int y : cand[j])
                    if (compatible(i, x, j, y)) next[j].push_back(y);
                alive = !next[j].empty();
            }
            if (!alive) continue;
            chosen_[i] = edges_[i][static_cast<std::size_t>(x)];
            if (!independent()) {
                chosen_[i] = Edge{-1, -1};
                continue;
            }
            if (depth >= 2) {
                std::vector<std::pair<std::size_t, Edge>> picks;
                for (std::size_t k = 0; k < n_; ++k)
                    if (chosen_[k][0] >= 0) picks.push_back({k, chosen_[k]});
                if (!feasible(picks)) {
                    chosen_[i] = Edge{-1, -1};
                    continue;
                }
            }
            dfs(depth + 1, next, done);
            chosen_[i] = Edge{-1, -1};
        }
        done[i] = 0;
    }

    void leaf() {
        detail::QMatrix E(n_, std::vector<Rational>(n_));
        std::vector<Rational> rhs(n_);
        std::vector<std::vector<long>> Ez(n_, std::vector<long>(n_));
        for (std::size_t i = 0; i < n_; ++i) {
            const auto& e = chosen_[i];
            for (std::size_t j = 0; j < n_; ++j) {
                Ez[i][j] = A_[i][e[1]][j] - A_[i][e[0]][j];
                E[i][j] = Ez[i][j];
            }
            rhs[i] = Rational(static_cast<long>(w_[i][e[0]] - w_[i][e[1]]));
        }
        auto alpha = detail::solve(E, rhs);
        if (!alpha) return;
        for (std::size_t i = 0; i < n_; ++i) {
            const auto& P = A_[i];
            const auto& e = chosen_[i];
            for (int c = 0; c < static_cast<int>(P.size()); ++c) {
                if (c == e[0] || c == e[1]) continue;
                Rational v = Rational(static_cast<long>(w_[i][c] - w_[i][e[0]]));
                for (std::size_t j = 0; j < n_; ++j) v += (*alpha)[j] * (P[c][j] - P[e[0]][j]);
                const int sg = sgn(v);
                if (sg < 0) return;
                if (sg == 0) throw DegenerateLift("lift is not generic: tie in a mixed cell");
            }
        }
        MixedCell cell;
        cell.pairs.assign(chosen_.begin(), chosen_.end());
        cell.normal = std::move(*alpha);
        cell.volume = abs(detail::det_small(Ez));
        cells_.push_back(std::move(cell));
    }

    const std::vector<PointSet>& A_;
    const std::vector<std::vector<std::int64_t>>& w_;
    std::size_t n_;
    double wscale_ = 1.0;
    std::vector<std::vector<Edge>> edges_;
    std::vector<std::vector<std::vector<char>>> compat_;
    std::vector<Edge> chosen_;
    std::vector<MixedCell> cells_;
};

void validate(const std::vector<PointSet>& supports) {
    const std::size_t n = supports.size();
    for (const auto& P : supports) {
        for (const auto& p : P)
            if (p.size() != n) throw std::invalid_argument("mixed cells need ell supports in dimension ell");
        PointSet s = P;
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw std::invalid_argument("support has repeated points");
    }
}

bool aggregate_full_dimensional(const std::vector<PointSet>& supports) {
    const std::size_t n = supports.size();
    detail::QMatrix m;
    for (const auto& P : supports) {
        if (P.size() < 2) return false;
        for (std::size_t k = 1; k < P.size(); ++k) {
            std::vector<Rational> row;
            for (std::size_t j = 0; j < n; ++j) row.emplace_back(P[k][j] - P[0][j]);
            m.push_back(std::move(row));
        }
    }
    return detail::rank(std::move(m)) == static_cast<int>(n);
}

} // namespace

MixedSubdivision mixed_cells_with_lift(const std::vector<PointSet>& supports,
                                       const std::vector<std::vector<std::int64_t>>& lift) {
    validate(supports);
    MixedSubdivision out;
    out.lift = lift;
    if (supports.empty() || !aggregate_full_dimensional(supports)) return out;
    out.cells = CellSearch(supports, out.lift).run();
    return out;
}

MixedSubdivision mixed_cells(const std::vector<PointSet>& supports, std::uint64_t seed, const MixedCellOptions& opts) {
    validate(supports);
    for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
        const std::uint64_t s = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(attempt);
        std::mt19937_64 rng(s);
        std::uniform_int_distribution<std::int64_t> dist(0, (std::int64_t{1} << opts.lift_bits) - 1);
        std::vector<std::vector<std::int64_t>> lift;
        for (const auto& P : supports) {
            std::vector<std::int64_t> l(P.size());
            for (auto& v : l) v = dist(rng);
            lift.push_back(std::move(l));
        }
        try {
            MixedSubdivision sub = mixed_cells_with_lift(supports, lift);
            sub.retries = attempt;
            sub.seed_used = s;
            return sub;
        } catch (const DegenerateLift&) {
        }
    }
    throw DegenerateLift("mixed_cells: retries exhausted without a generic lift");
}

Integer mixed_volume(const std::vector<PointSet>& supports, std::uint64_t seed) {
    return mixed_cells(supports, seed).mixed_volume();
}

Integer mixed_volume(const std::vector<LatticePolytope>& polys, std::uint64_t seed) {
    std::vector<PointSet> s;
    for (const auto& p : polys) s.push_back(p.points());
    return mixed_volume(s, seed);
}

} // namespace hem
