#include "hem/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace hem {

namespace {

std::vector<Rational> uniform(std::size_t ell, const Rational& v) { return std::vector<Rational>(ell, v); }

std::vector<std::string> index_labels(std::size_t ell) {
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= ell; ++i) out.push_back("m" + std::to_string(i));
    return out;
}

std::vector<Rational> scaled(const Rational& s, std::initializer_list<Rational> v) {
    std::vector<Rational> out;
    for (const auto& x : v) out.push_back(s * x);
    return out;
}

} // namespace

// --- root systems ---------------------------------------------------------------

char root_type_char(RootType t) {
    switch (t) {
    case RootType::A: return 'A';
    case RootType::B: return 'B';
    case RootType::C: return 'C';
    case RootType::D: return 'D';
    }
    return '?';
}

namespace {

std::string root_label(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        const std::string e = "e" + std::to_string(i + 1);
        if (v[i] == 2) s += "2" + e;
        else if (v[i] == 1) s += (s.empty() ? "" : "+") + e;
        else if (v[i] == -1) s += "-" + e;
    }
    return s;
}

} // namespace

RootSystem root_system(RootType type, int n) {
    const int minimal[] = {1, 2, 3, 4};
    if (n < minimal[static_cast<int>(type)]) throw ParameterError("rank out of range for this root type");
    RootSystem rs;
    rs.type = type;
    rs.n = n;
    const int dim = type == RootType::A ? n + 1 : n;
    auto e = [dim](int i) {
        std::vector<int> v(dim, 0);
        v[i] = 1;
        return v;
    };
    auto add = [&](std::vector<int> v) { rs.positive_roots.push_back(std::move(v)); };
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            auto v = e(i);
            v[j] = -1;
            add(v);
        }
    if (type != RootType::A) {
        for (int i = 0; i < dim; ++i)
            for (int j = i + 1; j < dim; ++j) {
                auto v = e(i);
                v[j] = 1;
                add(v);
            }
    }
    if (type == RootType::B)
        for (int k = 0; k < dim; ++k) add(e(k));
    if (type == RootType::C)
        for (int k = 0; k < dim; ++k) {
            auto v = e(k);
            v[k] = 2;
            add(v);
        }
    for (const auto& v : rs.positive_roots) rs.labels.push_back(root_label(v));
    return rs;
}

int RootSystem::index_of(const std::vector<int>& v) const {
    std::vector<int> neg(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) neg[i] = -v[i];
    for (std::size_t r = 0; r < positive_roots.size(); ++r)
        if (positive_roots[r] == v || positive_roots[r] == neg) return static_cast<int>(r);
    return -1;
}

std::vector<int> RootSystem::simple_roots() const {
    std::vector<int> out;
    for (std::size_t a = 0; a < positive_roots.size(); ++a) {
        bool decomposable = false;
        for (std::size_t b = 0; b < positive_roots.size() && !decomposable; ++b)
            for (std::size_t c = 0; c < positive_roots.size() && !decomposable; ++c) {
                std::vector<int> s(positive_roots[b].size());
                for (std::size_t i = 0; i < s.size(); ++i) s[i] = positive_roots[b][i] + positive_roots[c][i];
                decomposable = s == positive_roots[a];
            }
        if (!decomposable) out.push_back(static_cast<int>(a));
    }
    return out;
}

std::vector<Permutation> RootSystem::weyl_generators() const {
    const int dim = static_cast<int>(positive_roots.front().size());
    std::vector<std::function<std::vector<int>(const std::vector<int>&)>> refl;
    const int swaps = type == RootType::A ? n : n - 1;
    for (int i = 0; i < swaps; ++i)
        refl.push_back([i](std::vector<int> v) {
            std::swap(v[i], v[i + 1]);
            return v;
        });
    if (type == RootType::B || type == RootType::C)
        refl.push_back([dim](std::vector<int> v) {
            v[dim - 1] = -v[dim - 1];
            return v;
        });
    if (type == RootType::D)
        refl.push_back([dim](std::vector<int> v) {
            const int a = v[dim - 2], b = v[dim - 1];
            v[dim - 2] = -b;
            v[dim - 1] = -a;
            return v;
        });
    std::vector<Permutation> gens;
    for (const auto& s : refl) {
        Permutation p(positive_roots.size());
        for (std::size_t r = 0; r < positive_roots.size(); ++r) {
            int img = index_of(s(positive_roots[r]));
            if (img < 0) throw std::logic_error("Weyl reflection left the root system");
            p[r] = img;
        }
        gens.push_back(std::move(p));
    }
    return gens;
}

// --- descriptors ------------------------------------------------------------------

SpaceDescriptor berger_c(int n) {
    if (n < 1) throw ParameterError("berger_c needs n >= 1");
    SpaceDescriptor s;
    s.name = "berger-c-" + std::to_string(n);
    s.params = SpaceParameters(2, uniform(2, 4 * n + 4), {Rational(2 * n), Rational(1)});
    s.params.set_L(0, 0, 1, Rational(4 * n + 4));
    s.labels = {"horizontal", "fiber"};
    s.known.positive = 1;
    s.known.positive_solutions = {scaled(Rational(2 * n), {Rational(1), make_rational(2 * n, n + 1)})};
    s.known.solution_names = {"round"};
    return s;
}

SpaceDescriptor berger_h(int n) {
    if (n < 1) throw ParameterError("berger_h needs n >= 1");
    SpaceDescriptor s;
    s.name = "berger-h-" + std::to_string(n);
    s.params = SpaceParameters(4, uniform(4, 8 * n + 16), {Rational(4 * n), Rational(1), Rational(1), Rational(1)});
    s.params.set_L(0, 0, 1, Rational(8 * n));
    s.params.set_L(0, 0, 2, Rational(8 * n));
    s.params.set_L(0, 0, 3, Rational(8 * n));
    s.params.set_L(1, 2, 3, Rational(8));
    s.labels = {"horizontal", "fiber-i", "fiber-j", "fiber-k"};
    s.symmetry = {{0, 2, 1, 3}, {0, 1, 3, 2}};
    s.known.torus = 8;
    s.known.positive = 2;
    const Rational q = make_rational(2, 2 * n + 3);
    s.known.positive_solutions = {
        scaled(Rational(4 * n + 2), {1, 2, 2, 2}),
        scaled(make_rational(8L * n * n + 28L * n + 18, 2 * n + 3), {Rational(1), q, q, q}),
    };
    s.known.solution_names = {"round", "jensen"};
    return s;
}

SpaceDescriptor so_mn(int m, int n) {
    if (m < 3 || n < 3 || (m == 4 && n == 4)) throw ParameterError("so_mn needs m, n >= 3 and (m, n) != (4, 4)");
    const long M = m, N = n;
    SpaceDescriptor s;
    s.name = "so-mn-" + std::to_string(m) + "-" + std::to_string(n);
    const Rational d1 = make_rational((M + 2) * (M - 1) * N * (N - 1), 4);
    const Rational d2 = make_rational(M * (M - 1) * (N + 2) * (N - 1), 4);
    s.params = SpaceParameters(2, uniform(2, Rational(2 * (M * N - 2))), {d1, d2});
    const Rational L111 = make_rational((M - 2) * (M - 1) * (M + 2) * (M + 4) * N * (N - 2) * (N - 1), 8 * M);
    const Rational L112 = make_rational((M - 1) * M * (M + 2) * (N - 2) * (N - 1) * (N + 2), 8);
    s.params.set_L(0, 0, 0, L111);
    s.params.set_L(1, 1, 1, L111);
    s.params.set_L(0, 0, 1, L112);
    s.params.set_L(0, 1, 1, L112);
    s.labels = {"sym2-wedge2", "wedge2-sym2"};
    s.known.bkk = 3;
    s.known.torus = 3;
    return s;
}

namespace {

SpaceDescriptor wallach_from(std::string name, std::vector<Rational> d, const Rational& L123) {
    SpaceDescriptor s;
    s.name = std::move(name);
    s.params = SpaceParameters(3, uniform(3, 1), std::move(d));
    s.params.set_L(0, 1, 2, L123);
    s.labels = index_labels(3);
    s.known.bkk = 4;
    return s;
}

} // namespace

SpaceDescriptor generalized_wallach(int row, const std::vector<int>& sizes) {
    if (row >= 1 && row <= 3) {
        if (sizes.size() != 3) throw ParameterError("rows 1-3 need sizes (k, l, m)");
        const long k = sizes[0], l = sizes[1], m = sizes[2];
        if (!(k >= l && l >= m && m >= 1)) throw ParameterError("rows 1-3 need k >= l >= m >= 1");
        const std::string name = "wallach-row" + std::to_string(row) + "-" + std::to_string(k) + "-" +
                                 std::to_string(l) + "-" + std::to_string(m);
        const long c = row == 1 ? 1 : row == 2 ? 2 : 4;
        std::vector<Rational> d = {Rational(c * k * l), Rational(c * k * m), Rational(c * l * m)};
        Rational L;
        if (row == 1) {
            if (k + l + m - 2 == 0) throw ParameterError("row 1 sizes give a zero denominator");
            L = make_rational(k * l * m, 2 * (k + l + m - 2));
        } else if (row == 2) {
            L = make_rational(k * l * m, k + l + m);
        } else {
            L = make_rational(2 * k * l * m, k + l + m + 1);
        }
        return wallach_from(name, std::move(d), L);
    }
    if (row == 4 || row == 5) {
        if (sizes.size() != 1) throw ParameterError("rows 4-5 need a single size l");
        const long l = sizes[0];
        const std::string name = "wallach-row" + std::to_string(row) + "-l" + std::to_string(l);
        if (row == 4) {
            if (l < 2) throw ParameterError("row 4 needs l >= 2");
            return wallach_from(name, {Rational(l * (l - 1)), Rational(l * (l + 1)), Rational(l * l - 1)},
                                make_rational(l * (l * l - 1), 4));
        }
        if (l < 4) throw ParameterError("row 5 needs l >= 4");
        return wallach_from(name, {Rational(2 * (l - 1)), Rational(2 * (l - 1)), Rational((l - 1) * (l - 2))},
                            make_rational(l - 1, 2));
    }
    struct Row {
        long d1, d2, d3, num, den;
    };
    static const std::map<int, Row> sporadic = {
        {6, {16, 16, 24, 4, 1}},    {7, {16, 16, 16, 8, 3}},    {8, {14, 28, 12, 7, 2}},
        {9, {32, 32, 32, 64, 9}},   {10, {30, 40, 24, 20, 3}},  {11, {35, 35, 35, 175, 18}},
        {12, {64, 64, 48, 64, 5}},  {13, {64, 64, 64, 256, 15}}, {14, {8, 8, 20, 20, 9}},
        {15, {8, 8, 8, 8, 9}},
    };
    auto it = sporadic.find(row);
    if (it == sporadic.end()) throw ParameterError("generalized Wallach row must be 1..15");
    if (!sizes.empty()) throw ParameterError("rows 6-15 take no sizes");
    const Row& r = it->second;
    return wallach_from("wallach-row" + std::to_string(row), {Rational(r.d1), Rational(r.d2), Rational(r.d3)},
                        make_rational(r.num, r.den));
}

SpaceDescriptor ledger_obata(int dim_f) {
    if (dim_f < 1) throw ParameterError("ledger_obata needs dim F >= 1");
    SpaceDescriptor s = wallach_from("ledger-obata-" + std::to_string(dim_f), uniform(3, dim_f), make_rational(dim_f, 4));
    s.known.positive = 1;
    s.known.positive_solutions = {uniform(3, make_rational(3, 8))};
    s.known.solution_names = {"symmetric"};
    return s;
}

SpaceDescriptor wallach_type4(int dim_fk, int dim_k) {
    if (dim_fk < 1 || dim_k < 1) throw ParameterError("wallach_type4 needs positive dimensions");
    return wallach_from("wallach-type4-" + std::to_string(dim_fk) + "-" + std::to_string(dim_k),
                        {Rational(dim_fk), Rational(dim_fk), Rational(dim_k)}, make_rational(dim_fk, 4));
}

SpaceDescriptor wallach_type1(const std::vector<Rational>& d) {
    if (d.size() != 3) throw ParameterError("wallach_type1 needs three dimensions");
    SpaceDescriptor s;
    s.name = "wallach-type1";
    s.params = SpaceParameters(3, uniform(3, 1), d);
    s.labels = index_labels(3);
    s.known.torus = 1;
    s.known.positive = 1;
    s.known.positive_solutions = {uniform(3, make_rational(1, 2))};
    s.known.solution_names = {"product"};
    return s;
}

namespace {

// Families of related root triples, as sign patterns on index slots (i, j, k).
struct RootTemplate {
    int slot;  // epsilon index slot 0 = i, 1 = j, 2 = k
    int coeff; // coefficient on that epsilon
};
using RootSpec = std::vector<RootTemplate>;
struct Family {
    std::array<RootSpec, 3> roots;
    int slots;
    Rational value;
};

std::vector<Family> table_families(RootType t, int n) {
    const RootSpec ei_m_ej{{0, 1}, {1, -1}}, ej_m_ek{{1, 1}, {2, -1}}, ei_m_ek{{0, 1}, {2, -1}};
    const RootSpec ei_p_ej{{0, 1}, {1, 1}}, ej_p_ek{{1, 1}, {2, 1}}, ei_p_ek{{0, 1}, {2, 1}};
    const RootSpec ei{{0, 1}}, ej{{1, 1}}, two_ej{{1, 2}};
    switch (t) {
    case RootType::A: {
        const RootSpec ei_m_ek_a{{0, 1}, {1, -1}}, ek_m_ej_a{{1, 1}, {2, -1}}, ei_m_ej_a{{0, 1}, {2, -1}};
        return {{{ei_m_ek_a, ek_m_ej_a, ei_m_ej_a}, 3, make_rational(1, n + 1)}};
    }
    case RootType::B: {
        const Rational v = make_rational(1, 2 * n - 1);
        return {{{ei_m_ej, ej_m_ek, ei_m_ek}, 3, v},
                {{ei_p_ej, ej_p_ek, ei_m_ek}, 3, v},
                {{ei_m_ej, ei, ej}, 2, v},
                {{ei_p_ej, ei, ej}, 2, v}};
    }
    case RootType::C: {
        const Rational v = make_rational(1, 2 * n + 2);
        return {{{ei_m_ej, ej_m_ek, ei_m_ek}, 3, v},
                {{ei_m_ej, ej_p_ek, ei_p_ek}, 3, v},
                {{ei_m_ej, two_ej, ei_p_ej}, 2, make_rational(1, n + 1)}};
    }
    case RootType::D: {
        const Rational v = make_rational(1, 2 * n - 2);
        return {{{ei_m_ej, ej_m_ek, ei_m_ek}, 3, v}, {{ei_m_ej, ej_p_ek, ei_p_ek}, 3, v}};
    }
    }
    return {};
}

} // namespace

SpaceDescriptor flag_manifold(RootType type, int n) {
    const RootSystem rs = root_system(type, n);
    const std::size_t ell = rs.positive_roots.size();
    const int dim = static_cast<int>(rs.positive_roots.front().size());
    SpaceDescriptor s;
    s.name = std::string("flag-") + root_type_char(type) + std::to_string(n);
    s.params = SpaceParameters(ell, uniform(ell, 1), uniform(ell, 2));
    s.labels = rs.labels;

    // Instantiate each family over all distinct index assignments and all sign changes of epsilon.
    const bool signs = type != RootType::A;
    const int sign_masks = signs ? (1 << dim) : 1;
    for (const Family& fam : table_families(type, n)) {
        std::vector<int> idx(fam.slots);
        std::function<void(int)> assign = [&](int pos) {
            if (pos == fam.slots) {
                for (int mask = 0; mask < sign_masks; ++mask) {
                    std::array<int, 3> found{};
                    bool ok = true;
                    for (int r = 0; r < 3 && ok; ++r) {
                        std::vector<int> v(dim, 0);
                        for (const auto& [slot, coeff] : fam.roots[r]) {
                            const int e = idx[slot];
                            v[e] += (mask >> e & 1) ? -coeff : coeff;
                        }
                        found[r] = rs.index_of(v);
                        ok = found[r] >= 0;
                    }
                    if (ok) s.params.set_L(found[0], found[1], found[2], fam.value);
                }
                return;
            }
            for (int e = 0; e < dim; ++e) {
                if (std::find(idx.begin(), idx.begin() + pos, e) != idx.begin() + pos) continue;
                idx[pos] = e;
                assign(pos + 1);
            }
        };
        assign(0);
    }
    s.symmetry = rs.weyl_generators();

    struct Counts {
        long bkk, torus, real, positive, classes;
    };
    static const std::map<std::string, Counts> published = {
        {"flag-A2", {4, 4, 4, 4, 2}},
        {"flag-A3", {80, 59, 29, 29, 4}},
        {"flag-A4", {9168, 7908, 1596, 396, 12}},
        {"flag-A5", {6603008, 5037448, 191252, 6572, 35}},
        {"flag-B2", {12, 10, 6, 6, 2}},
        {"flag-B3", {5376, 4224, 750, 48, 5}},
        {"flag-C3", {5232, 4512, 728, 64, 4}},
        {"flag-D4", {239744, 150256, 11128, 184, 5}},
    };
    if (auto it = published.find(s.name); it != published.end()) {
        s.known.bkk = it->second.bkk;
        s.known.torus = it->second.torus;
        s.known.real = it->second.real;
        s.known.positive = it->second.positive;
        s.known.classes = it->second.classes;
        s.known.classes_upper_bound_only = type == RootType::D;
    }
    s.long_running = ell > 6;
    return s;
}

std::vector<std::array<int, 3>> additive_root_triples(const RootSystem& rs) {
    std::vector<std::array<int, 3>> out;
    const auto& R = rs.positive_roots;
    for (std::size_t a = 0; a < R.size(); ++a)
        for (std::size_t b = a + 1; b < R.size(); ++b) {
            std::vector<int> s(R[a].size());
            for (std::size_t i = 0; i < s.size(); ++i) s[i] = R[a][i] + R[b][i];
            auto it = std::find(R.begin(), R.end(), s);
            if (it != R.end()) out.push_back({static_cast<int>(a), static_cast<int>(b), static_cast<int>(it - R.begin())});
        }
    return out;
}

namespace {

RootSystem root_system_of(const SpaceDescriptor& desc) {
    if (desc.name.rfind("flag-", 0) != 0 || desc.name.size() < 7)
        throw ParameterError("not a flag manifold descriptor: " + desc.name);
    const char t = desc.name[5];
    const int n = std::stoi(desc.name.substr(6));
    const RootType type = t == 'A' ? RootType::A : t == 'B' ? RootType::B : t == 'C' ? RootType::C : RootType::D;
    return root_system(type, n);
}

} // namespace

std::function<bool(const std::vector<double>&)> kaehler_einstein_candidate(const SpaceDescriptor& desc, double tol) {
    const auto triples = additive_root_triples(root_system_of(desc));
    return [triples, tol](const std::vector<double>& x) {
        double scale = 0;
        for (double v : x) scale = std::max(scale, std::abs(v));
        if (scale == 0) return false;
        for (const auto& [a, b, c] : triples)
            if (std::abs(x[c] - x[a] - x[b]) > tol * scale) return false;
        return true;
    };
}

bool symmetry_consistent(const SpaceDescriptor& desc) {
    for (const auto& p : desc.symmetry) {
        if (p.size() != desc.params.ell()) return false;
        std::vector<int> sorted = p;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i)
            if (sorted[i] != static_cast<int>(i)) return false;
        if (!(desc.params.permuted(p) == desc.params)) return false;
    }
    return true;
}

std::vector<std::string> catalog_names() {
    std::vector<std::string> names;
    for (int n = 1; n <= 5; ++n) names.push_back("berger-c-" + std::to_string(n));
    for (int n = 1; n <= 3; ++n) names.push_back("berger-h-" + std::to_string(n));
    for (const char* s : {"so-mn-3-3", "so-mn-3-4", "so-mn-4-5"}) names.emplace_back(s);
    for (int row = 1; row <= 3; ++row)
        for (const char* sz : {"-2-1-1", "-2-2-1", "-3-2-1"}) names.push_back("wallach-row" + std::to_string(row) + sz);
    for (int l = 2; l <= 4; ++l) names.push_back("wallach-row4-l" + std::to_string(l));
    for (int l = 4; l <= 5; ++l) names.push_back("wallach-row5-l" + std::to_string(l));
    for (int row = 6; row <= 15; ++row) names.push_back("wallach-row" + std::to_string(row));
    for (const char* s : {"ledger-obata-3", "ledger-obata-8", "wallach-type4-2-1", "wallach-type4-6-3", "wallach-type1"})
        names.emplace_back(s);
    for (const char* s : {"flag-A2", "flag-A3", "flag-A4", "flag-A5", "flag-B2", "flag-B3", "flag-C3", "flag-D4"})
        names.emplace_back(s);
    return names;
}

SpaceDescriptor lookup_space(const std::string& name) {
    auto ints_after = [&](std::size_t pos, char sep) {
        std::vector<int> out;
        std::size_t i = pos;
        while (i < name.size()) {
            std::size_t j = name.find(sep, i);
            if (j == std::string::npos) j = name.size();
            std::size_t used = 0;
            const std::string tok = name.substr(i, j - i);
            out.push_back(std::stoi(tok, &used));
            if (used != tok.size()) throw ParameterError("malformed space name: " + name);
            i = j + 1;
        }
        return out;
    };
    auto starts = [&](const char* p) { return name.rfind(p, 0) == 0; };
    try {
        if (starts("berger-c-")) return berger_c(ints_after(9, '-').at(0));
        if (starts("berger-h-")) return berger_h(ints_after(9, '-').at(0));
        if (starts("so-mn-")) {
            auto v = ints_after(6, '-');
            if (v.size() != 2) throw ParameterError("so-mn needs two sizes");
            return so_mn(v[0], v[1]);
        }
        if (starts("ledger-obata-")) return ledger_obata(ints_after(13, '-').at(0));
        if (starts("wallach-type4-")) {
            auto v = ints_after(14, '-');
            if (v.size() != 2) throw ParameterError("wallach-type4 needs two dimensions");
            return wallach_type4(v[0], v[1]);
        }
        if (name == "wallach-type1") return wallach_type1();
        if (starts("wallach-row")) {
            const std::string rest = name.substr(11);
            const std::size_t dash = rest.find('-');
            const int row = std::stoi(rest.substr(0, dash));
            if (dash == std::string::npos) return generalized_wallach(row);
            std::string tail = rest.substr(dash + 1);
            if (!tail.empty() && tail[0] == 'l') return generalized_wallach(row, {std::stoi(tail.substr(1))});
            std::vector<int> sizes;
            std::size_t i = 0;
            while (i <= tail.size()) {
                std::size_t j = tail.find('-', i);
                if (j == std::string::npos) j = tail.size();
                sizes.push_back(std::stoi(tail.substr(i, j - i)));
                i = j + 1;
            }
            return generalized_wallach(row, sizes);
        }
        if (starts("flag-") && name.size() >= 7) {
            const char t = name[5];
            const int n = std::stoi(name.substr(6));
            RootType type;
            switch (t) {
            case 'A': type = RootType::A; break;
            case 'B': type = RootType::B; break;
            case 'C': type = RootType::C; break;
            case 'D': type = RootType::D; break;
            default: throw ParameterError("unknown root type in " + name);
            }
            return flag_manifold(type, n);
        }
    } catch (const std::logic_error& e) {
        if (dynamic_cast<const ParameterError*>(&e)) throw;
        throw ParameterError("malformed space name: " + name);
    }
    throw ParameterError("unknown space: " + name);
}

} // namespace hem
