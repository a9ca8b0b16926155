#include "hem/isometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <set>
#include <sstream>

namespace hem {

namespace {

double distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double d = 0;
    for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]) / std::max(1.0, std::abs(a[j])));
    return d;
}

bool lex_less(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j].real() != b[j].real()) return a[j].real() < b[j].real();
        if (a[j].imag() != b[j].imag()) return a[j].imag() < b[j].imag();
    }
    return false;
}

double log_volume(const std::vector<Complex>& x, const std::vector<Rational>& d) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += to_double(d[i]) * std::log(std::abs(x[i]));
    return s;
}

} // namespace

std::vector<Permutation> generate_group(const std::vector<Permutation>& generators, std::size_t ell, std::size_t cap) {
    Permutation id(ell);
    for (std::size_t i = 0; i < ell; ++i) id[i] = static_cast<int>(i);
    for (const auto& g : generators) {
        Permutation s = g;
        std::sort(s.begin(), s.end());
        if (s != id) throw std::invalid_argument("generator is not a permutation of the summands");
    }
    std::set<Permutation> seen{id};
    std::deque<Permutation> queue{id};
    while (!queue.empty()) {
        const Permutation p = queue.front();
        queue.pop_front();
        for (const auto& g : generators) {
            Permutation q(ell);
            for (std::size_t i = 0; i < ell; ++i) q[i] = p[static_cast<std::size_t>(g[i])];
            if (seen.insert(q).second) {
                if (seen.size() > cap) throw GroupTooLarge("permutation group exceeds the order cap");
                queue.push_back(std::move(q));
            }
        }
    }
    return {seen.begin(), seen.end()};
}

std::vector<Complex> act(const Permutation& sigma, const std::vector<Complex>& x) {
    std::vector<Complex> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[static_cast<std::size_t>(sigma[i])];
    return y;
}

IsometryClassification orbit_partition(const std::vector<Solution>& solutions, const std::vector<Permutation>& generators,
                                       double tol, const SpaceParameters* params) {
    IsometryClassification out;
    if (solutions.empty()) return out;
    const std::size_t ell = solutions.front().coords.size();
    if (params)
        for (const auto& g : generators)
            if (!(params->permuted(g) == *params)) throw std::logic_error("parameters are not invariant under a generator");
    const auto group = generate_group(generators, ell);
    out.group_order_used = static_cast<long>(group.size());

    std::vector<int> label(solutions.size(), -1);
    for (std::size_t a = 0; a < solutions.size(); ++a) {
        if (label[a] >= 0) continue;
        const int id = static_cast<int>(out.classes.size());
        IsometryClass cls;
        std::vector<std::vector<Complex>> images;
        for (const auto& g : group) {
            auto y = act(g, solutions[a].coords);
            if (std::none_of(images.begin(), images.end(), [&](const auto& z) { return distance(z, y) < tol; }))
                images.push_back(std::move(y));
        }
        cls.orbit_size = static_cast<int>(images.size());
        for (std::size_t b = a; b < solutions.size(); ++b) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& y : images) best = std::min(best, distance(y, solutions[b].coords));
            if (best < tol && label[b] < 0) {
                label[b] = id;
                cls.members.push_back(b);
            } else if (best < 10 * tol) {
                out.collision = true;
            }
        }
        std::size_t rep = cls.members.front();
        for (auto m : cls.members)
            if (lex_less(solutions[m].coords, solutions[rep].coords)) rep = m;
        cls.representative = solutions[rep];
        if (params) {
            std::vector<double> xr;
            for (const auto& z : cls.representative.coords) xr.push_back(std::abs(z));
            cls.volume = volume_invariant(*params, xr);
        }
        out.classes.push_back(std::move(cls));
    }
    return out;
}

std::vector<std::vector<std::size_t>> volume_classes(const std::vector<Solution>& solutions, const std::vector<Rational>& d,
                                                     double tol) {
    std::vector<std::vector<std::size_t>> groups;
    std::vector<double> keys;
    for (std::size_t a = 0; a < solutions.size(); ++a) {
        const double v = log_volume(solutions[a].coords, d);
        bool placed = false;
        for (std::size_t g = 0; g < groups.size() && !placed; ++g)
            if (std::abs(v - keys[g]) < tol) {
                groups[g].push_back(a);
                placed = true;
            }
        if (!placed) {
            groups.push_back({a});
            keys.push_back(v);
        }
    }
    return groups;
}

IsometryClassification classify(const SpaceDescriptor& desc, const std::vector<Solution>& solutions, double tol) {
    std::vector<Solution> positive;
    for (const auto& s : solutions)
        if (s.positive) positive.push_back(s);
    auto out = orbit_partition(positive, desc.symmetry, tol, &desc.params);
    out.upper_bound_only = desc.known.classes_upper_bound_only;
    return out;
}

std::string classification_tsv(const IsometryClassification& c) {
    std::ostringstream os;
    os << "class\torbit_size\tvolume\trepresentative\n";
    char buf[64];
    for (std::size_t k = 0; k < c.classes.size(); ++k) {
        const auto& cls = c.classes[k];
        std::snprintf(buf, sizeof buf, "%.5g", cls.volume);
        os << k + 1 << '\t' << cls.orbit_size << '\t' << buf << '\t';
        for (std::size_t j = 0; j < cls.representative.coords.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.5f", cls.representative.coords[j].real());
            os << (j ? " " : "") << buf;
        }
        os << '\n';
    }
    return os.str();
}

} // namespace hem
