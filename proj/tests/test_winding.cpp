#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ordtoep/errors.hpp"
#include "ordtoep/winding.hpp"

using namespace ordtoep;
using std::numbers::pi;

namespace {

std::vector<Complex> circle_power(std::int64_t k, std::size_t n, Complex center = 0.0, double radius = 1.0) {
    std::vector<Complex> v(n);
    for (std::size_t j = 0; j < n; ++j) {
        v[j] = center + radius * std::polar(1.0, 2.0 * pi * static_cast<double>(k) * static_cast<double>(j) / static_cast<double>(n));
    }
    return v;
}

// Monic polynomial with the given roots, as a trigonometric polynomial in t.
TrigPoly from_roots(const std::vector<Complex>& roots) {
    TrigPoly p = TrigPoly::constant(1.0);
    for (const auto& r : roots) p = p * (TrigPoly::monomial(LatticePoint{1}) + TrigPoly::constant(-r));
    return p;
}

NumericalFailure failure_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const NumericalError& e) {
        return e.kind();
    }
    FAIL("no NumericalError thrown");
    return NumericalFailure::OriginTooClose;
}

}  // namespace

TEST_CASE("winding of sampled circles") {
    for (std::int64_t k = -10; k <= 10; ++k) CHECK(winding_number(LoopSamples(circle_power(k, 128))) == k);
    // Circle not enclosing the origin.
    CHECK(winding_number(LoopSamples(circle_power(1, 128, 3.0))) == 0);
    // Circle enclosing the origin off-center.
    CHECK(winding_number(LoopSamples(circle_power(-1, 128, {0.3, -0.2}))) == -1);
}

TEST_CASE("loop sample failure modes") {
    CHECK(failure_of([] { LoopSamples(circle_power(1, 64, 1.0)); }) == NumericalFailure::OriginTooClose);
    CHECK(failure_of([] { LoopSamples({Complex{0.0}}); }) == NumericalFailure::OriginTooClose);
    CHECK(failure_of([] { winding_number(LoopSamples(circle_power(1, 3))); }) == NumericalFailure::StepTooCoarse);
    CHECK(failure_of([] { winding_number(LoopSamples(circle_power(20, 64))); }) == NumericalFailure::StepTooCoarse);
    CHECK_THROWS_AS(LoopSamples({}), std::invalid_argument);
    const LoopSamples ok(circle_power(1, 16, 0.0, 2.0));
    CHECK(ok.min_modulus() == doctest::Approx(2.0));
}

TEST_CASE("coordinate winding refines coarse sampling") {
    const auto fast = SymbolExpr::mono(LatticePoint{300});
    const std::vector<double> base{0.0};
    CHECK(coordinate_winding(fast, 0, base) == 300);
    WindingConfig tight;
    tight.max_samples = 512;
    CHECK(failure_of([&] { coordinate_winding(fast, 0, base, tight); }) == NumericalFailure::StepTooCoarse);
    CHECK_THROWS_AS(coordinate_winding(fast, 1, base), DimensionError);
}

TEST_CASE("argument principle oracle: winding counts roots inside the circle") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> radius(0.1, 1.9);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Complex> roots;
        std::int64_t inside = 0;
        for (int k = 0; k < 5; ++k) {
            double r = radius(rng);
            if (std::abs(r - 1.0) < 0.05) r += 0.1;
            roots.push_back(std::polar(r, angle(rng)));
            inside += r < 1.0;
        }
        const auto phi = SymbolExpr::poly(from_roots(roots));
        CHECK(coordinate_winding(phi, 0, std::vector<double>{0.0}) == inside);
        CHECK(bvk_character(phi, 1) == LatticePoint{inside});
    }
}

TEST_CASE("Bohr-van Kampen character of character times exponential") {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> e(-4, 4);
    std::uniform_real_distribution<double> c(-0.15, 0.15);
    for (int trial = 0; trial < 30; ++trial) {
        const LatticePoint chi{e(rng), e(rng), e(rng)};
        TrigPoly g;
        for (int k = 0; k < 6; ++k) g.add_term(LatticePoint{e(rng), e(rng), e(rng)}, {c(rng), c(rng)});
        const auto phi = SymbolExpr::mono(chi) * SymbolExpr::exp(SymbolExpr::poly(g));
        CHECK(bvk_character(phi, 3) == chi);
        const std::vector<double> base{0.4, 2.0, -1.0};
        CHECK(bvk_character_at(phi, base) == chi);
    }
    CHECK(bvk_character(SymbolExpr::constant({0.0, 2.0}), 2).is_zero());
    CHECK(failure_of([] { bvk_character(SymbolExpr::constant(0.0), 1); }) == NumericalFailure::OriginTooClose);
    CHECK_THROWS_AS(bvk_character_at(SymbolExpr::mono(LatticePoint{0, 1}), std::vector<double>{0.0}), DimensionError);
}

TEST_CASE("character is a homomorphism on products") {
    const auto a = SymbolExpr::mono(LatticePoint{2, -1});
    const auto b = SymbolExpr::shift(SymbolExpr::mono(LatticePoint{0, 1}), 0.5);
    CHECK(bvk_character(a * b, 2) == bvk_character(a, 2) + bvk_character(b, 2));
}
