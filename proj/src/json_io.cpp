#include "hem/json_io.hpp"

#include <cstdio>

namespace hem {

Json rational_to_json(const Rational& q) {
    return Json{{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}};
}

Rational rational_from_json(const Json& j) {
    if (j.is_object()) {
        auto text = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
        Rational q(Integer(text(j.at("num"))), Integer(text(j.at("den"))));
        if (q.get_den() == 0) throw std::invalid_argument("zero denominator");
        q.canonicalize();
        return q;
    }
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_number()) return parse_rational(j.dump());
    throw std::invalid_argument("expected a rational value");
}

namespace {

template <class Scalar, class F>
Json system_json(const PolynomialSystem<Scalar>& sys, F coeff) {
    Json eqs = Json::array();
    for (const auto& f : sys.equations()) {
        Json terms = Json::array();
        for (const auto& [e, c] : f.sorted_terms()) terms.push_back(Json{{"exp", e.entries()}, {"coeff", coeff(c)}});
        eqs.push_back(Json{{"terms", std::move(terms)}});
    }
    return Json{{"ell", sys.ell()}, {"equations", std::move(eqs)}};
}

template <class Scalar, class F>
PolynomialSystem<Scalar> system_from(const Json& j, F coeff) {
    const std::size_t ell = j.at("ell").get<std::size_t>();
    if (ell == 0) throw std::invalid_argument("ell must be positive");
    std::vector<LaurentPolynomial<Scalar>> eqs;
    for (const auto& eq : j.at("equations")) {
        LaurentPolynomial<Scalar> p(ell);
        for (const auto& t : eq.at("terms")) {
            auto exp = t.at("exp").get<std::vector<int>>();
            if (exp.size() != ell) throw std::invalid_argument("exponent length does not match ell");
            p.add_term(ExponentVector(std::move(exp)), coeff(t.at("coeff")));
        }
        eqs.push_back(std::move(p));
    }
    return {ell, std::move(eqs)};
}

Complex complex_from_json(const Json& c) {
    if (c.is_object() && c.contains("re")) return {c.at("re").get<double>(), c.value("im", 0.0)};
    return to_complex(rational_from_json(c));
}

} // namespace

Json system_to_json(const RationalSystem& sys) { return system_json(sys, rational_to_json); }

Json system_to_json(const ComplexSystem& sys) {
    return system_json(sys, [](const Complex& c) { return Json{{"re", c.real()}, {"im", c.imag()}}; });
}

RationalSystem rational_system_from_json(const Json& j) { return system_from<Rational>(j, rational_from_json); }

ComplexSystem complex_system_from_json(const Json& j) { return system_from<Complex>(j, complex_from_json); }

bool json_system_is_rational(const Json& j) {
    for (const auto& eq : j.at("equations"))
        for (const auto& t : eq.at("terms"))
            if (t.at("coeff").is_object() && t.at("coeff").contains("re")) return false;
    return true;
}

Json params_to_json(const SpaceParameters& p) {
    Json b = Json::array(), d = Json::array(), L = Json::array();
    for (const auto& v : p.b()) b.push_back(rational_to_json(v));
    for (const auto& v : p.d()) d.push_back(rational_to_json(v));
    for (const auto& [t, v] : p.L_entries())
        L.push_back(Json{{"ijk", {t[0] + 1, t[1] + 1, t[2] + 1}}, {"value", rational_to_json(v)}});
    return Json{{"ell", p.ell()}, {"b", std::move(b)}, {"d", std::move(d)}, {"L", std::move(L)}};
}

SpaceParameters params_from_json(const Json& j) {
    const std::size_t ell = j.at("ell").get<std::size_t>();
    std::vector<Rational> b, d;
    for (const auto& v : j.at("b")) b.push_back(rational_from_json(v));
    for (const auto& v : j.at("d")) d.push_back(rational_from_json(v));
    SpaceParameters p(ell, std::move(b), std::move(d));
    if (j.contains("L"))
        for (const auto& e : j.at("L")) {
            auto ijk = e.at("ijk").get<std::vector<int>>();
            if (ijk.size() != 3) throw std::invalid_argument("ijk needs three indices");
            for (int v : ijk)
                if (v < 1 || v > static_cast<int>(ell)) throw std::invalid_argument("ijk index out of range");
            p.set_L(ijk[0] - 1, ijk[1] - 1, ijk[2] - 1, rational_from_json(e.at("value")));
        }
    return p;
}

std::string input_hash(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Json artifact_header(std::uint64_t seed, const std::string& hash) {
    return Json{{"tool", "hem"}, {"version", HEM_VERSION}, {"seed", seed}, {"input_hash", hash}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json solution_to_json(const Solution& s) {
    Json j;
    Json coords = Json::array();
    for (const auto& z : s.coords) coords.push_back(Json::array({z.real(), z.imag()}));
    j["coords"] = std::move(coords);
    j["residual"] = s.residual;
    j["cluster_size"] = s.cluster_size;
    j["in_torus"] = s.in_torus;
    j["real"] = s.real;
    j["positive"] = s.positive;
    j["certified"] = s.certified;
    j["box_radius"] = s.box_radius;
    return j;
}

Solution solution_from_json(const Json& j) {
    Solution s;
    for (const auto& z : j.at("coords")) s.coords.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
    s.residual = j.value("residual", 0.0);
    s.cluster_size = j.value("cluster_size", 1);
    s.in_torus = j.value("in_torus", false);
    s.real = j.value("real", false);
    s.positive = j.value("positive", false);
    s.certified = j.value("certified", false);
    s.box_radius = j.value("box_radius", 0.0);
    return s;
}

Json report_to_json(const SolveReport& r) {
    Json j;
    j["bkk"] = r.bkk;
    j["tracked"] = r.tracked;
    j["converged"] = r.converged;
    j["diverged"] = r.diverged;
    j["failed"] = r.failed;
    j["seed"] = r.seed;
    j["lift_retries"] = r.lift_retries;
    j["extended_reruns"] = r.extended_reruns;
    Json sols = Json::array();
    for (const auto& s : r.solutions) sols.push_back(solution_to_json(s));
    j["solutions"] = std::move(sols);
    return j;
}

SolveReport report_from_json(const Json& j) {
    SolveReport r;
    r.bkk = j.at("bkk").get<long>();
    r.tracked = j.at("tracked").get<long>();
    r.converged = j.at("converged").get<long>();
    r.diverged = j.at("diverged").get<long>();
    r.failed = j.at("failed").get<long>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.lift_retries = j.value("lift_retries", 0);
    r.extended_reruns = j.value("extended_reruns", 0L);
    for (const auto& s : j.at("solutions")) r.solutions.push_back(solution_from_json(s));
    return r;
}

} // namespace hem
