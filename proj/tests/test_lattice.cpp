#include <doctest.h>

#include <algorithm>
#include <random>

#include "ordtoep/errors.hpp"
#include "ordtoep/lattice.hpp"

using namespace ordtoep;

namespace {

// Independent comparison oracles on dense vectors.
int lex_sign(std::vector<std::int64_t> z) {
    for (auto v : z) {
        if (v) return v > 0 ? 1 : -1;
    }
    return 0;
}

int colex_sign(std::vector<std::int64_t> z) {
    std::reverse(z.begin(), z.end());
    return lex_sign(z);
}

// Sign of sqrt(2) * a + b using integers only.
int sqrt2_sign(std::int64_t a, std::int64_t b) {
    if (a == 0) return b > 0 ? 1 : (b < 0 ? -1 : 0);
    if (a > 0 && b >= 0) return 1;
    if (a < 0 && b <= 0) return -1;
    const std::int64_t lhs = 2 * a * a;
    const std::int64_t rhs = b * b;
    return a > 0 ? (lhs > rhs ? 1 : -1) : (lhs > rhs ? -1 : 1);
}

int sign_of(std::strong_ordering o) { return o < 0 ? -1 : (o > 0 ? 1 : 0); }

LatticePoint random_point(std::mt19937_64& rng, std::size_t dim, int r) {
    std::uniform_int_distribution<int> u(-r, r);
    std::vector<std::int64_t> v(dim);
    for (auto& x : v) x = u(rng);
    return LatticePoint(v);
}

}  // namespace

TEST_CASE("lattice point arithmetic and sparse storage") {
    const LatticePoint a{1, 0, -2};
    const LatticePoint b{0, 3};
    CHECK(a.active_dim() == 3);
    CHECK(b.active_dim() == 2);
    CHECK((a + b) == LatticePoint{1, 3, -2});
    CHECK((a - a).is_zero());
    CHECK(-a == LatticePoint{-1, 0, 2});
    CHECK(a.scaled(3) == LatticePoint{3, 0, -6});
    CHECK(a.sup_norm() == 2);
    CHECK(a[7] == 0);
    CHECK(LatticePoint{0, 0, 0}.is_zero());
    CHECK(LatticePoint{1, 0, 0} == LatticePoint::unit(0));
    CHECK(a.dense(5) == std::vector<std::int64_t>{1, 0, -2, 0, 0});
    CHECK(a.to_string() == "(1,0,-2)");
}

TEST_CASE("lattice point JSON round trip") {
    const LatticePoint p{4, 0, -1};
    nlohmann::json j = p;
    CHECK(j == nlohmann::json::parse("[4,0,-1]"));
    CHECK(j.get<LatticePoint>() == p);
    CHECK_THROWS_AS(nlohmann::json::parse("[1.5]").get<LatticePoint>(), ConfigError);
    CHECK_THROWS_AS(nlohmann::json::parse("{\"a\":1}").get<LatticePoint>(), ConfigError);
}

TEST_CASE("lex order examples") {
    const auto lex2 = OrderSpec::lex(2);
    CHECK(compare(LatticePoint{0, 1}, LatticePoint{0, 0}, lex2) > 0);
    CHECK(compare(LatticePoint{1, -5}, LatticePoint{0, 100}, lex2) > 0);
    CHECK(compare(LatticePoint{-1, 0}, LatticePoint{0, -7}, lex2) < 0);
    CHECK(compare(LatticePoint{2, 2}, LatticePoint{2, 2}, lex2) == 0);
    CHECK(is_positive(LatticePoint{0, 3}, lex2));
    CHECK_FALSE(is_positive(LatticePoint{-1, 9}, lex2));
}

TEST_CASE("colex order examples") {
    const auto c = OrderSpec::colex();
    CHECK(is_positive(LatticePoint{5}, c));
    CHECK_FALSE(is_positive(LatticePoint{5, -1}, c));
    CHECK(is_positive(LatticePoint{-9, 0, 1}, c));
    CHECK(compare(LatticePoint{0, 0, 0, 1}, LatticePoint{100, 100, 100}, c) > 0);
}

TEST_CASE("irrational weight order examples") {
    const auto w = OrderSpec::weight_sqrt(2);
    CHECK(is_positive(LatticePoint{1, 0}, w));
    CHECK(is_positive(LatticePoint{1, -1}, w));
    CHECK_FALSE(is_positive(LatticePoint{-1, 1}, w));
    CHECK(is_positive(LatticePoint{-2, 3}, w));   // 3 > 2 sqrt 2
    CHECK_FALSE(is_positive(LatticePoint{-5, 7}, w));  // 7 < 5 sqrt 2
    CHECK(compare(LatticePoint{0, 0}, LatticePoint{0, 0}, w) == 0);
}

TEST_CASE("orders agree with independent comparison oracles") {
    std::mt19937_64 rng(11);
    const auto lex3 = OrderSpec::lex(3);
    const auto colex = OrderSpec::colex();
    const auto w = OrderSpec::weight_sqrt(2);
    for (int i = 0; i < 2000; ++i) {
        const auto x = random_point(rng, 3, 6);
        const auto y = random_point(rng, 3, 6);
        const auto z = (x - y).dense(3);
        CHECK(sign_of(compare(x, y, lex3)) == lex_sign(z));
        CHECK(sign_of(compare(x, y, colex)) == colex_sign(z));
        const auto x2 = random_point(rng, 2, 1000);
        const auto y2 = random_point(rng, 2, 1000);
        const auto d = x2 - y2;
        CHECK(sign_of(compare(x2, y2, w)) == sqrt2_sign(d[0], d[1]));
    }
}

TEST_CASE("linear order properties: trichotomy, translation invariance, cone closure") {
    std::mt19937_64 rng(5);
    const std::vector<std::pair<OrderSpec, std::size_t>> cases{
        {OrderSpec::lex(1), 1}, {OrderSpec::lex(2), 2}, {OrderSpec::lex(3), 3},
        {OrderSpec::colex(), 4}, {OrderSpec::weight_sqrt(2), 2}, {OrderSpec::weight_sqrt(3), 2}};
    for (const auto& [order, dim] : cases) {
        for (int i = 0; i < 300; ++i) {
            const auto x = random_point(rng, dim, 5);
            const auto y = random_point(rng, dim, 5);
            const auto z = random_point(rng, dim, 5);
            CHECK(compare(x + z, y + z, order) == compare(x, y, order));
            CHECK((compare(x, y, order) == 0) == (x == y));
            CHECK(sign_of(compare(x, y, order)) == -sign_of(compare(y, x, order)));
            if (!x.is_zero()) CHECK(is_positive(x, order) != is_positive(-x, order));
            if (is_positive(x, order) && is_positive(y, order)) CHECK(is_positive(x + y, order));
        }
        CHECK(is_positive(LatticePoint{}, order));
    }
}

TEST_CASE("character index and the X^i subgroup") {
    const auto lex2 = OrderSpec::lex(2);
    CHECK(ind_character(LatticePoint{0, 3}, lex2) == 3);
    CHECK(ind_character(LatticePoint{0, -2}, lex2) == -2);
    CHECK(ind_character(LatticePoint{1, 0}, lex2) == std::nullopt);
    CHECK(ind_character(LatticePoint{}, lex2) == 0);
    const auto colex = OrderSpec::colex();
    CHECK(ind_character(LatticePoint{4, 0, 0}, colex) == 4);
    CHECK(ind_character(LatticePoint{4, 1}, colex) == std::nullopt);
    const auto w = OrderSpec::weight_sqrt(2);
    CHECK(ind_character(LatticePoint{1, 0}, w) == std::nullopt);
    CHECK(ind_character(LatticePoint{0, 1}, w) == std::nullopt);
    CHECK(ind_character(LatticePoint{}, w) == 0);

    auto gen = [](const OrderSpec& o) { return std::get<XiCyclic>(xi_subgroup(o)).generator; };
    CHECK(gen(OrderSpec::lex(1)) == LatticePoint{1});
    CHECK(gen(lex2) == LatticePoint{0, 1});
    CHECK(gen(OrderSpec::lex(3)) == LatticePoint{0, 0, 1});
    CHECK(gen(colex) == LatticePoint{1});
    CHECK(std::holds_alternative<XiTrivial>(xi_subgroup(w)));
    for (const auto& o : {OrderSpec::lex(1), lex2, OrderSpec::lex(4), colex}) {
        CHECK(is_positive(gen(o), o));
        CHECK(ind_character(gen(o), o) == 1);
    }
}

TEST_CASE("brute interval enumeration") {
    const auto lex2 = OrderSpec::lex(2);
    // (1,0) has no finite index; the scan at radius 2 sees exactly these points.
    const auto pts = brute_interval_points(LatticePoint{1, 0}, lex2, 2);
    const std::vector<LatticePoint> expected{{0, 0}, {0, 1}, {0, 2}, {1, -2}, {1, -1}};
    CHECK(pts == expected);
    CHECK(brute_interval_points(LatticePoint{1, 0}, lex2, 3).size() == 7);
    CHECK(brute_interval_points(LatticePoint{1, 0}, lex2, 4).size() == 9);

    CHECK(brute_interval_points(LatticePoint{0, 3}, lex2, 2) ==
          std::vector<LatticePoint>{{0, 0}, {0, 1}, {0, 2}});
    CHECK(brute_interval_points(LatticePoint{}, lex2, 3).empty());
    CHECK_THROWS_AS(brute_interval_points(LatticePoint{0, -1}, lex2, 2), std::invalid_argument);

    // For characters of X^i the stabilized count is the index.
    for (std::int64_t n = 0; n <= 8; ++n) {
        for (const auto& o : {OrderSpec::lex(1), lex2, OrderSpec::lex(3)}) {
            const auto g = std::get<XiCyclic>(xi_subgroup(o)).generator;
            CHECK(brute_interval_points(g.scaled(n), o, n + 2).size() == static_cast<std::size_t>(n));
        }
        CHECK(brute_interval_points(LatticePoint{n}, OrderSpec::colex(), n + 2).size() == static_cast<std::size_t>(n));
    }
}

TEST_CASE("box points and sorting") {
    CHECK(box_points(2, 1).size() == 9);
    CHECK(box_points(3, 2).size() == 125);
    auto pts = box_points(2, 1);
    const auto lex2 = OrderSpec::lex(2);
    sort_by_order(pts, lex2);
    for (std::size_t i = 1; i < pts.size(); ++i) CHECK(compare(pts[i - 1], pts[i], lex2) < 0);
    CHECK(pts.front() == LatticePoint{-1, -1});
    CHECK(enumeration_dim(OrderSpec::colex(), LatticePoint{0, 0, 2}) == 3);
    CHECK(enumeration_dim(OrderSpec::colex(), LatticePoint{}) == 1);
    CHECK(enumeration_dim(lex2, LatticePoint{1}) == 2);
}

TEST_CASE("order specs: construction, JSON and errors") {
    CHECK(order_from_json(nlohmann::json::parse(R"({"family":"lex","d":3})")) == OrderSpec::lex(3));
    CHECK(order_from_json(nlohmann::json::parse(R"({"family":"colex"})")) == OrderSpec::colex());
    CHECK(order_from_json(nlohmann::json::parse(R"({"family":"weight","sqrt":2})")) == OrderSpec::weight_sqrt(2));
    const auto w = OrderSpec::weight(1414213562373LL, 1000000000000LL);
    nlohmann::json j = w;
    CHECK(order_from_json(j) == w);
    nlohmann::json jl = OrderSpec::lex(2);
    CHECK(order_from_json(jl) == OrderSpec::lex(2));

    CHECK_THROWS_AS(OrderSpec::lex(0), ConfigError);
    CHECK_THROWS_AS(OrderSpec::weight(3, 2), ConfigError);
    CHECK_THROWS_AS(OrderSpec::weight(2000000000000LL, 1000000000000LL), ConfigError);
    CHECK_THROWS_AS(OrderSpec::weight_sqrt(4), ConfigError);
    CHECK_THROWS_AS(order_from_json(nlohmann::json::parse(R"({"family":"grlex"})")), ConfigError);
    CHECK_THROWS_AS(order_from_json(nlohmann::json::parse(R"([1])")), ConfigError);

    CHECK(OrderSpec::lex(2).dim() == 2);
    CHECK(OrderSpec::weight_sqrt(2).dim() == 2);
    CHECK(OrderSpec::colex().dim() == std::nullopt);
    CHECK_THROWS_AS(OrderSpec::lex(2).check_point(LatticePoint{0, 0, 1}), DimensionError);
    CHECK_NOTHROW(OrderSpec::colex().check_point(LatticePoint{0, 0, 0, 0, 1}));
}
