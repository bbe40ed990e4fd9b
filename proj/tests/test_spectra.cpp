#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ordtoep/parallel.hpp"
#include "ordtoep/spectra.hpp"

using namespace ordtoep;

namespace {

std::size_t count_set(const std::vector<std::uint8_t>& s) {
    std::size_t n = 0;
    for (auto v : s) n += v != 0;
    return n;
}

// Synthetic raster holding pixel rings of given centers and radii (in pixels).
ImageRaster ring_raster(std::size_t res, const std::vector<std::pair<std::pair<double, double>, double>>& rings) {
    ImageRaster r;
    r.resolution = res;
    r.bounds = {0.0, static_cast<double>(res), 0.0, static_cast<double>(res)};
    r.mask.assign(res * res, 0);
    for (std::size_t y = 0; y < res; ++y) {
        for (std::size_t x = 0; x < res; ++x) {
            for (const auto& [c, rad] : rings) {
                const double d = std::hypot(x + 0.5 - c.first, y + 0.5 - c.second);
                if (std::abs(d - rad) <= 1.5) r.mask[y * res + x] = 1;
            }
        }
    }
    return r;
}

}  // namespace

TEST_CASE("image raster of the unit circle") {
    const auto r = image_raster(SymbolExpr::mono(LatticePoint{1}));
    CHECK(r.resolution == 512);
    CHECK(r.bounds.re_min == doctest::Approx(-1.2));
    CHECK(r.bounds.im_max == doctest::Approx(1.2));
    const double h = r.pixel_size();
    for (std::size_t i = 0; i < r.mask.size(); ++i) {
        const double d = std::abs(std::abs(r.pixel_center(i)) - 1.0);
        if (d <= h / std::numbers::sqrt2) CHECK(r.mask[i] == 1);
        if (d >= 2.0 * std::numbers::sqrt2 * h + h) CHECK(r.mask[i] == 0);
    }
    // Row 0 is the top of the picture.
    CHECK(r.pixel_center(0).imag() > 0.0);
    CHECK(r.pixel_center(0).real() < 0.0);
}

TEST_CASE("image raster of constants and shifted circles") {
    const auto blob = image_raster(SymbolExpr::constant(2.0));
    CHECK(count_set(blob.mask) > 0);
    CHECK(holes(blob).empty());
    const double cx = 0.5 * (blob.bounds.re_min + blob.bounds.re_max);
    CHECK(cx == doctest::Approx(2.0));

    const auto ring = image_raster(SymbolExpr::shift(SymbolExpr::mono(LatticePoint{1}), 2.0));
    const auto hs = holes(ring);
    REQUIRE(hs.size() == 1);
    CHECK(std::abs(hs[0].representative - Complex{2.0, 0.0}) < 2.0 * ring.pixel_size());
    CHECK(hs[0].clearance_px > 100.0);
}

TEST_CASE("torus images in two and three variables") {
    // 2 + t1 + 0.5 t2 covers an annulus 0.5 <= |z - 2| <= 1.5.
    TrigPoly p = TrigPoly::constant(2.0) + TrigPoly::monomial(LatticePoint{1, 0}) +
                 TrigPoly::monomial(LatticePoint{0, 1}, 0.5);
    RasterConfig cfg;
    cfg.resolution = 256;
    const auto r = image_raster(SymbolExpr::poly(p), cfg);
    const double h = r.pixel_size();
    for (std::size_t i = 0; i < r.mask.size(); ++i) {
        const double d = std::abs(r.pixel_center(i) - 2.0);
        if (d > 0.5 + h && d < 1.5 - h) CHECK(r.mask[i] == 1);
        if (d < 0.5 - 4.0 * h || d > 1.5 + 4.0 * h) CHECK(r.mask[i] == 0);
    }
    CHECK(holes(r).size() == 1);

    TrigPoly q = TrigPoly::monomial(LatticePoint{1, 0, 0}) + TrigPoly::monomial(LatticePoint{0, 0, 1}, 0.25);
    cfg.grid_per_axis = 24;
    const auto r3 = image_raster(SymbolExpr::poly(q), cfg);
    CHECK(holes(r3).size() == 1);
}

TEST_CASE("holes of synthetic masks") {
    const auto two = ring_raster(96, {{{25.0, 48.0}, 12.0}, {{70.0, 48.0}, 15.0}});
    const auto hs = holes(two);
    REQUIRE(hs.size() == 2);
    // Labels follow raster order of the first pixel: the larger ring reaches higher rows.
    CHECK(hs[0].label == 1);
    CHECK(hs[1].label == 2);
    CHECK(hs[0].pixels.front() < hs[1].pixels.front());
    CHECK(std::abs(hs[0].representative - Complex{70.0, 48.0}) < 1.5);
    CHECK(std::abs(hs[1].representative - Complex{25.0, 48.0}) < 1.5);
    CHECK(hs[0].clearance_px > hs[1].clearance_px);

    const auto labels = label_complement(two.mask, 96);
    CHECK(labels[0] == 0);
    std::size_t on_mask = 0;
    for (auto l : labels) on_mask += l == -1;
    CHECK(on_mask == count_set(two.mask));

    // A disk cut open by the frame belongs to the unbounded component.
    const auto edge = ring_raster(64, {{{0.0, 32.0}, 20.0}});
    CHECK(holes(edge).empty());
}

TEST_CASE("distance transform matches brute force") {
    std::mt19937_64 rng(9);
    const std::size_t res = 40;
    std::vector<std::uint8_t> set(res * res, 0);
    for (int k = 0; k < 15; ++k) set[rng() % set.size()] = 1;
    const auto d2 = squared_distance_transform(set, res);
    for (std::size_t i = 0; i < set.size(); ++i) {
        double best = 1e300;
        for (std::size_t j = 0; j < set.size(); ++j) {
            if (!set[j]) continue;
            const double dx = double(i % res) - double(j % res);
            const double dy = double(i / res) - double(j / res);
            best = std::min(best, dx * dx + dy * dy);
        }
        CHECK(d2[i] == best);
    }
}

TEST_CASE("8-connectivity") {
    const std::size_t res = 8;
    std::vector<std::uint8_t> s(res * res, 0);
    CHECK(connected8(s, res));
    s[0] = 1;
    s[res + 1] = 1;
    CHECK(connected8(s, res));
    s[5 * res + 5] = 1;
    CHECK_FALSE(connected8(s, res));
}

TEST_CASE("point classification") {
    const auto t = SymbolExpr::mono(LatticePoint{1});
    const auto c = classify_point(0.0, t, OrderSpec::lex(1));
    CHECK(c.kind == PointClass::SpectrumNonEssential);
    CHECK(c.index == -1);
    CHECK(classify_point(2.0, t, OrderSpec::lex(1)).kind == PointClass::Resolvent);
    CHECK(classify_point(0.0, SymbolExpr::mono(LatticePoint{1, 0}), OrderSpec::lex(2)).kind == PointClass::Essential);
    CHECK(classify_point(0.0, SymbolExpr::mono(LatticePoint{0, -2}), OrderSpec::lex(2)).index == 2);
    CHECK(classify_point(0.0, SymbolExpr::mono(LatticePoint{1, 0}), OrderSpec::weight_sqrt(2)).kind ==
          PointClass::Essential);
    CHECK(to_string(PointClass::SpectrumNonEssential) == "spectrum_non_essential");
}

TEST_CASE("pictures for characters: disk spectrum, circle or disk essential spectrum") {
    const auto lex2 = OrderSpec::lex(2);
    const auto last = spectral_picture(SymbolExpr::mono(LatticePoint{0, 1}), lex2);
    REQUIRE(last.components.size() == 2);
    CHECK(last.components[0].classification.kind == PointClass::Resolvent);
    CHECK(last.components[1].classification.kind == PointClass::SpectrumNonEssential);
    CHECK(last.components[1].classification.index == -1);

    const auto first = spectral_picture(SymbolExpr::mono(LatticePoint{1, 0}), lex2);
    REQUIRE(first.components.size() == 2);
    CHECK(first.components[1].classification.kind == PointClass::Essential);

    const double h = last.raster.pixel_size();
    for (std::size_t i = 0; i < last.labels.size(); ++i) {
        const double r = std::abs(last.raster.pixel_center(i));
        if (r < 1.0 - 3.0 * h) {
            CHECK(last.in_spectrum(i));
            CHECK_FALSE(last.in_essential_spectrum(i));
            CHECK(first.in_essential_spectrum(i));
        }
        if (r > 1.0 + 3.0 * h) {
            CHECK_FALSE(last.in_spectrum(i));
            CHECK_FALSE(first.in_spectrum(i));
        }
    }
    CHECK(std::abs(last.spectral_radius - 1.0) <= 2.0 * std::numbers::sqrt2 * h);
    CHECK(std::abs(first.essential_spectral_radius - 1.0) <= 2.0 * std::numbers::sqrt2 * h);
    CHECK(connected8(last.spectrum_set(), 512));
    CHECK(connected8(last.essential_set(), 512));
}

TEST_CASE("pictures: shifted circle, winding two, constant") {
    const auto shifted = spectral_picture(SymbolExpr::shift(SymbolExpr::mono(LatticePoint{1}), 2.0), OrderSpec::lex(1));
    REQUIRE(shifted.components.size() == 2);
    CHECK(shifted.components[1].classification.index == -1);
    CHECK(std::abs(shifted.components[1].representative - 2.0) < 0.02);

    const auto twice = spectral_picture(SymbolExpr::mono(LatticePoint{0, 2}), OrderSpec::lex(2));
    REQUIRE(twice.components.size() == 2);
    CHECK(twice.components[1].classification.index == -2);

    const auto k = spectral_picture(SymbolExpr::constant({1.0, 1.0}), OrderSpec::lex(1));
    CHECK(k.components.size() == 1);
    CHECK(k.spectrum_set() == k.essential_set());
    CHECK(std::abs(k.spectral_radius - std::sqrt(2.0)) <= 2.0 * std::numbers::sqrt2 * k.raster.pixel_size());
}

TEST_CASE("tiny holes merge into the essential spectrum with a warning") {
    SpectrumConfig cfg;
    cfg.min_clearance_px = 1e9;
    const auto m = spectral_picture(SymbolExpr::mono(LatticePoint{1}), OrderSpec::lex(1), cfg);
    REQUIRE(m.components.size() == 2);
    CHECK(m.components[1].classification.kind == PointClass::Essential);
    CHECK_FALSE(m.warnings.empty());
}

TEST_CASE("outputs are deterministic and independent of the thread cap") {
    const auto phi = SymbolExpr::shift(SymbolExpr::poly(TrigPoly::monomial(LatticePoint{1, 0}) +
                                                        TrigPoly::monomial(LatticePoint{0, 2}, 0.3)),
                                       {0.1, 0.0});
    SpectrumConfig cfg;
    cfg.raster.resolution = 128;
    cfg.recheck = true;
    const auto a = spectral_picture(phi, OrderSpec::lex(2), cfg);
    const unsigned cap = thread_cap();
    set_thread_cap(1);
    const auto b = spectral_picture(phi, OrderSpec::lex(2), cfg);
    set_thread_cap(cap);
    CHECK(spectral_map_to_json(a).dump() == spectral_map_to_json(b).dump());
    CHECK(spectral_map_to_ppm(a) == spectral_map_to_ppm(b));
}

TEST_CASE("PPM and JSON formats") {
    SpectrumConfig cfg;
    cfg.raster.resolution = 64;
    const auto m = spectral_picture(SymbolExpr::mono(LatticePoint{0, 1}), OrderSpec::lex(2), cfg);
    const auto ppm = spectral_map_to_ppm(m);
    CHECK(ppm.rfind("P3\n64 64\n255\n", 0) == 0);
    std::size_t lines = 0;
    for (char ch : ppm) lines += ch == '\n';
    CHECK(lines == 3 + 64 * 64);
    CHECK(ppm.find("96 160 224\n") != std::string::npos);
    CHECK(ppm.find("32 32 32\n") != std::string::npos);
    CHECK(ppm.find("255 255 255\n") != std::string::npos);

    const auto j = spectral_map_to_json(m);
    CHECK(j["resolution"] == 64);
    CHECK(j["components"].size() == 2);
    CHECK(j["components"][1]["class"] == "spectrum_non_essential");
    CHECK(j["components"][1]["index"] == -1);
    CHECK_FALSE(j["components"][0].contains("index"));
    CHECK(j["components"][0]["representative"].size() == 2);
    CHECK(j.contains("bounds"));
}
