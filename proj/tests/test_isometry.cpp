#include "hem/catalog.hpp"
#include "hem/isometry.hpp"
#include "hem/solver.hpp"

#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

using namespace hem;

namespace {

Solution point(std::vector<double> x) {
    Solution s;
    s.coords.assign(x.begin(), x.end());
    s.in_torus = s.real = s.positive = true;
    return s;
}

Permutation compose(const Permutation& p, const Permutation& g) {
    Permutation q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q[i] = p[static_cast<std::size_t>(g[i])];
    return q;
}

std::vector<Solution> positives(const SolveReport& r) {
    std::vector<Solution> out;
    for (const auto& s : r.solutions)
        if (s.positive) out.push_back(s);
    return out;
}

double max_dist(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// brute force: a ~ b iff some group element maps a onto b
bool conjugate(const std::vector<Permutation>& group, const Solution& a, const Solution& b, double tol) {
    return std::any_of(group.begin(), group.end(), [&](const auto& g) { return max_dist(act(g, a.coords), b.coords) < tol; });
}

} // namespace

TEST_CASE("generated groups") {
    CHECK(generate_group({{1, 0, 2}, {0, 2, 1}}, 3).size() == 6);
    CHECK(generate_group({{1, 2, 3, 0}}, 4).size() == 4);
    CHECK(generate_group({}, 5).size() == 1);
    CHECK(generate_group({{1, 2, 3, 4, 5, 0}, {1, 0, 2, 3, 4, 5}}, 6).size() == 720);
    CHECK_THROWS_AS(generate_group({{1, 2, 3, 4, 5, 0}, {1, 0, 2, 3, 4, 5}}, 6, 100), GroupTooLarge);
    CHECK_THROWS_AS(generate_group({{0, 0, 1}}, 3), std::invalid_argument);

    const auto g = generate_group(flag_manifold(RootType::A, 3).symmetry, 6);
    CHECK(g.size() == 24);
    const std::set<Permutation> as_set(g.begin(), g.end());
    for (const auto& p : g)
        for (const auto& q : g) CHECK(as_set.count(compose(p, q)) == 1);

    CHECK(generate_group(flag_manifold(RootType::A, 2).symmetry, 3).size() == 6);
    // -1 lies in W(B2) and fixes every root up to sign
    CHECK(generate_group(flag_manifold(RootType::B, 2).symmetry, 4).size() == 4);
}

TEST_CASE("action permutes coordinates") {
    const std::vector<Complex> x{1.0, 2.0, 3.0};
    const auto y = act({2, 0, 1}, x);
    CHECK(y[0] == x[2]);
    CHECK(y[1] == x[0]);
    CHECK(y[2] == x[1]);
    // acting by p then g equals acting by the composite
    const Permutation p{1, 2, 0}, g{0, 2, 1};
    CHECK(act(g, act(p, x)) == act(compose(p, g), x));
}

TEST_CASE("orbit partition on A2") {
    const auto desc = flag_manifold(RootType::A, 2);
    const auto pos = positives(solve(einstein_system(desc.params)));
    REQUIRE(pos.size() == 4);
    const auto c = orbit_partition(pos, desc.symmetry, 1e-6, &desc.params);
    CHECK(c.group_order_used == 6);
    REQUIRE(c.classes.size() == 2);
    std::multiset<int> orbits;
    for (const auto& k : c.classes) orbits.insert(k.orbit_size);
    CHECK(orbits == std::multiset<int>{1, 3});
    CHECK_FALSE(c.collision);

    // the fixed class is the normal metric
    for (const auto& k : c.classes)
        if (k.orbit_size == 1) {
            const auto& x = k.representative.coords;
            CHECK(std::abs(x[0] - x[1]) < 1e-9);
            CHECK(std::abs(x[1] - x[2]) < 1e-9);
        }

    const auto trivial = orbit_partition(pos, {}, 1e-6);
    CHECK(trivial.classes.size() == pos.size());
    CHECK(trivial.group_order_used == 1);

    // a generator that moves the parameters is a programming error
    auto lopsided = desc.params;
    lopsided.d()[0] = 4;
    CHECK_THROWS_AS(orbit_partition(pos, desc.symmetry, 1e-6, &lopsided), std::logic_error);
}

TEST_CASE("representatives are lexicographically minimal") {
    const auto desc = flag_manifold(RootType::A, 3);
    const auto pos = positives(solve(einstein_system(desc.params)));
    const auto c = classify(desc, pos);
    std::size_t covered = 0;
    for (const auto& k : c.classes) {
        covered += k.members.size();
        for (auto m : k.members) {
            const auto& rep = k.representative.coords;
            const auto& x = pos[m].coords;
            bool less_or_equal = true;
            for (std::size_t j = 0; j < x.size(); ++j) {
                if (rep[j].real() != x[j].real()) {
                    less_or_equal = rep[j].real() < x[j].real();
                    break;
                }
            }
            CHECK(less_or_equal);
        }
    }
    CHECK(covered == pos.size());
}

TEST_CASE("class counts for A2, B2, A3") {
    const auto b2 = flag_manifold(RootType::B, 2);
    const auto rb = solve(einstein_system(b2.params));
    CHECK(positives(rb).size() == 6);
    CHECK(classify(b2, rb.solutions).classes.size() == 2);

    const auto a3 = flag_manifold(RootType::A, 3);
    const auto ra = solve(einstein_system(a3.params));
    CHECK(positives(ra).size() == 29);
    const auto c = classify(a3, ra.solutions);
    REQUIRE(c.classes.size() == 4);
    std::multiset<int> orbits;
    for (const auto& k : c.classes) orbits.insert(k.orbit_size);
    CHECK(orbits == std::multiset<int>{1, 4, 12, 12});
    CHECK(std::accumulate(orbits.begin(), orbits.end(), 0) == 29);

    const auto vc = volume_classes(positives(ra), a3.params.d());
    CHECK(vc.size() == 4);
    CHECK_FALSE(c.upper_bound_only);
}

TEST_CASE("orbits agree with brute-force conjugacy") {
    for (const auto& desc : {flag_manifold(RootType::A, 3), flag_manifold(RootType::B, 2)}) {
        const auto pos = positives(solve(einstein_system(desc.params)));
        const auto group = generate_group(desc.symmetry, static_cast<std::size_t>(desc.params.ell()));
        const auto c = orbit_partition(pos, desc.symmetry, 1e-6, &desc.params);
        std::map<std::size_t, std::size_t> cls;
        for (std::size_t k = 0; k < c.classes.size(); ++k)
            for (auto m : c.classes[k].members) cls[m] = k;
        for (std::size_t a = 0; a < pos.size(); ++a)
            for (std::size_t b = 0; b < pos.size(); ++b) CHECK((cls[a] == cls[b]) == conjugate(group, pos[a], pos[b], 1e-6));
        for (const auto& k : c.classes) CHECK(static_cast<long>(group.size()) % k.orbit_size == 0);
    }
}

TEST_CASE("volume classes") {
    // d constant: any permutation keeps the volume
    const std::vector<Rational> d2{2, 2, 2};
    const auto vc = volume_classes({point({1, 2, 3}), point({3, 1, 2}), point({1, 1, 1})}, d2);
    REQUIRE(vc.size() == 2);
    CHECK(vc[0] == std::vector<std::size_t>{0, 1});

    // equal products, not conjugate: volume merges them, orbits keep them apart
    const std::vector<Solution> twins{point({1, 4, 1}), point({2, 2, 1})};
    CHECK(volume_classes(twins, d2).size() == 1);
    const Permutation swap01{1, 0, 2};
    CHECK(orbit_partition(twins, {swap01}).classes.size() == 2);
}

TEST_CASE("classification TSV") {
    IsometryClassification c;
    IsometryClass k;
    k.representative = point({0.25, 0.5, 0.125});
    k.orbit_size = 3;
    k.volume = 0.005487;
    c.classes.push_back(k);
    CHECK(classification_tsv(c) == "class\torbit_size\tvolume\trepresentative\n1\t3\t0.005487\t0.25000 0.50000 0.12500\n");
}

TEST_CASE("property: orbit equivalence on random symmetric points") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.2, 2.0);
    const auto desc = flag_manifold(RootType::A, 3);
    const auto group = generate_group(desc.symmetry, 6);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Solution> pts;
        std::vector<double> base(6);
        for (auto& v : base) v = u(rng);
        const auto seed_pt = point(base);
        // a few images of one point plus unrelated points
        for (int k = 0; k < 4; ++k) {
            Solution s = seed_pt;
            s.coords = act(group[rng() % group.size()], seed_pt.coords);
            pts.push_back(s);
        }
        for (int k = 0; k < 3; ++k) {
            std::vector<double> y(6);
            for (auto& v : y) v = u(rng);
            pts.push_back(point(y));
        }
        const auto c = orbit_partition(pts, desc.symmetry, 1e-9);
        std::map<std::size_t, std::size_t> cls;
        for (std::size_t k = 0; k < c.classes.size(); ++k)
            for (auto m : c.classes[k].members) cls[m] = k;
        REQUIRE(cls.size() == pts.size());
        for (int k = 1; k < 4; ++k) CHECK(cls[0] == cls[static_cast<std::size_t>(k)]);
        for (std::size_t a = 0; a < pts.size(); ++a)
            for (std::size_t b = 0; b < pts.size(); ++b) {
                const bool same = cls[a] == cls[b];
                CHECK(same == conjugate(group, pts[a], pts[b], 1e-9));
                CHECK(same == (cls[b] == cls[a]));
            }
        // volume with d = 2 is constant along orbits
        for (const auto& g : group) {
            const auto y = act(g, seed_pt.coords);
            double vx = 1, vy = 1;
            for (std::size_t i = 0; i < 6; ++i) {
                vx *= std::pow(seed_pt.coords[i].real(), 2);
                vy *= std::pow(y[i].real(), 2);
            }
            CHECK(std::abs(vx - vy) <= 1e-14 * vx);
        }
    }
}
