#include "hem/catalog.hpp"
#include "hem/einstein.hpp"
#include "hem/json_io.hpp"
#include "hem/laurent.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace hem;

namespace {

RationalPolynomial mono(std::initializer_list<int> e, const Rational& c = 1) {
    return RationalPolynomial::monomial(ExponentVector(e), c);
}

std::set<ExponentVector> exps(std::initializer_list<std::initializer_list<int>> list) {
    std::set<ExponentVector> s;
    for (auto e : list) s.insert(ExponentVector(e));
    return s;
}

} // namespace

TEST_CASE("exponent vectors compare and hash by value") {
    ExponentVector a{1, -2}, b{1, -2}, c{0, 3};
    CHECK(a == b);
    CHECK(ExponentHash{}(a) == ExponentHash{}(b));
    CHECK(c < a);
    CHECK((a + c) == ExponentVector({1, 1}));
    const ExponentVector wide{1, 2, 3};
    CHECK_THROWS_AS(a + wide, std::invalid_argument);
}

TEST_CASE("zero coefficients are never stored") {
    RationalPolynomial p(2);
    p.add_term({1, 0}, 3);
    p.add_term({1, 0}, -3);
    CHECK(p.is_zero());
    p = mono({1, 0}) - mono({1, 0});
    CHECK(p.term_count() == 0);
    CHECK((mono({0, 1}, 2) * Rational(0)).is_zero());
    CHECK_THROWS_AS(p.add_term(ExponentVector({1, 2, 3}), 1), std::invalid_argument);
}

TEST_CASE("evaluate") {
    const Complex x[] = {2.0, 3.0};
    CHECK(std::abs(evaluate(mono({1, -2}), x) - 2.0 / 9.0) < 1e-15);
    CHECK(evaluate(RationalPolynomial::constant(2, 5), x) == Complex(5.0));
    CHECK(evaluate_exact(mono({1, -2}), std::vector<Rational>{2, 3}) == make_rational(2, 9));

    const Complex z[] = {0.0, 1.0};
    CHECK_THROWS_AS(evaluate(mono({-1, 0}), z), std::domain_error);
    CHECK_NOTHROW(evaluate(mono({1, 0}), z));

    // r_1 of the n = 1 Berger sphere is 1 at its Einstein metric (2, 2)
    const auto p = berger_c(1).params;
    const Complex e[] = {2.0, 2.0};
    CHECK(std::abs(evaluate(ricci_component(p, 0), e) - 1.0) < 1e-14);
    CHECK(std::abs(evaluate(ricci_component(p, 1), e) - 1.0) < 1e-14);
}

TEST_CASE("toric derivative") {
    CHECK(toric_derivative(mono({3, -1}), 0) == mono({3, -1}, 3));
    CHECK(toric_derivative(mono({3, -1}), 1) == mono({3, -1}, -1));
    CHECK(toric_derivative(RationalPolynomial::constant(2, 7), 0).is_zero());
    CHECK_THROWS_AS(toric_derivative(mono({1, 1}), 2), std::out_of_range);

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const auto params = testing::random_params(3, rng);
        const auto scal = scalar_curvature(params);
        for (std::size_t i = 0; i < 3; ++i) {
            const auto lhs = toric_derivative(scal, i);
            const auto rhs = ricci_component(params, i) * Rational(-params.d()[i]);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("clear denominators") {
    const auto p = mono({-1}) - RationalPolynomial::constant(1, 1);
    const auto [q, s] = clear_denominators(p);
    CHECK(q == RationalPolynomial::constant(1, 1) - mono({1}));
    CHECK(s == ExponentVector({1}));

    const auto poly = mono({2, 1}) + mono({0, 3}, 4);
    CHECK(clear_denominators(poly).first == poly);
    CHECK(clear_denominators(poly).second == ExponentVector({0, 0}));

    // the shift of f_1 at ell = 2 is minus the smallest exponent per variable
    std::mt19937_64 rng(5);
    const auto sys = einstein_system(testing::random_params(2, rng), SystemForm::raw);
    ExponentVector lowest{0, 0};
    for (const auto& [e, c] : sys.equations[0].terms())
        for (std::size_t j = 0; j < 2; ++j) lowest[j] = std::min(lowest[j], e[j]);
    CHECK(clear_denominators(sys.equations[0]).second == -1 * lowest);
    CHECK(clear_denominators(sys.equations[0]).second == ExponentVector({2, 2}));
}

TEST_CASE("support") {
    CHECK(support(RationalPolynomial(3)).empty());

    std::mt19937_64 rng(8);
    const auto generic = einstein_system(testing::random_params(2, rng));
    CHECK(support(generic.equations[0]) == exps({{-2, 1}, {1, -2}, {-1, 0}, {0, 0}}));

    const auto w = einstein_system(generalized_wallach(15).params);
    CHECK(support(w.equations[0]) == exps({{0, 0, 0}, {-1, 0, 0}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}));
    for (const auto& f : w.equations.equations()) CHECK(support(f).size() == 5);
}

TEST_CASE("system shape checks") {
    CHECK_THROWS_AS(RationalSystem(2, std::vector<RationalPolynomial>()), std::invalid_argument);
    CHECK_THROWS_AS(RationalSystem(2, std::vector{mono({1, 2, 3})}), std::invalid_argument);
    RationalSystem s(2, {mono({1, 0}), mono({0, 1})});
    CHECK(s.is_square());
    const RationalSystem thin(2, {mono({1, 0})});
    CHECK_FALSE(thin.is_square());
}

TEST_CASE("system json round trip") {
    std::mt19937_64 rng(3);
    const auto sys = einstein_system(testing::random_params(3, rng)).equations;
    const Json j = system_to_json(sys);
    CHECK(json_system_is_rational(j));
    CHECK(rational_system_from_json(j) == sys);
    CHECK(dump(system_to_json(rational_system_from_json(j))) == dump(j));

    const auto cs = to_complex(sys);
    const Json jc = system_to_json(cs);
    CHECK_FALSE(json_system_is_rational(jc));
    CHECK(complex_system_from_json(jc).size() == 3);

    CHECK(rational_from_json(Json("3/4")) == make_rational(3, 4));
    CHECK(parse_rational("-1.25") == make_rational(-5, 4));
}

TEST_CASE("evaluation is linear and multiplicative") {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> ex(-3, 3);
    for (int trial = 0; trial < 30; ++trial) {
        RationalPolynomial p(3), q(3);
        for (int k = 0; k < 4; ++k) {
            p.add_term({ex(rng), ex(rng), ex(rng)}, testing::random_rational(rng, -5, 5));
            q.add_term({ex(rng), ex(rng), ex(rng)}, testing::random_rational(rng, -5, 5));
        }
        const auto x = testing::random_point(3, rng);
        const Complex px = evaluate(p, x), qx = evaluate(q, x);
        const Rational a = testing::random_rational(rng, -3, 3);
        CHECK(std::abs(evaluate(p + q * a, x) - (px + a.get_d() * qx)) < 1e-10 * (1 + std::abs(px) + std::abs(qx)));
        CHECK(std::abs(evaluate(p * q, x) - px * qx) < 1e-10 * (1 + std::abs(px * qx)));
    }
}

TEST_CASE("clear denominators round trips exactly") {
    std::mt19937_64 rng(4);
    const auto sys = einstein_system(testing::random_params(3, rng)).equations;
    for (int trial = 0; trial < 50; ++trial) {
        const auto x = testing::random_rational_point(3, rng);
        for (const auto& f : sys.equations()) {
            const auto [q, s] = clear_denominators(f);
            for (const auto& [e, c] : q.terms())
                for (int v : e) REQUIRE(v >= 0);
            Rational xs = 1;
            for (std::size_t j = 0; j < 3; ++j)
                for (int k = 0; k < s[j]; ++k) xs *= x[j];
            CHECK(evaluate_exact(q, x) == xs * evaluate_exact(f, x));
        }
    }
}

TEST_CASE("toric derivative obeys the Leibniz rule") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> ex(-2, 2);
    for (int trial = 0; trial < 20; ++trial) {
        RationalPolynomial p(2), q(2);
        for (int k = 0; k < 3; ++k) {
            p.add_term({ex(rng), ex(rng)}, testing::random_rational(rng, -4, 4));
            q.add_term({ex(rng), ex(rng)}, testing::random_rational(rng, -4, 4));
        }
        for (std::size_t i = 0; i < 2; ++i)
            CHECK(toric_derivative(p * q, i) == toric_derivative(p, i) * q + p * toric_derivative(q, i));
    }
}
