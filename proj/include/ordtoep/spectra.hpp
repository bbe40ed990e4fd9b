#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ordtoep/fredholm.hpp"
#include "ordtoep/symbol.hpp"

namespace ordtoep {

enum class PointClass { Resolvent, SpectrumNonEssential, Essential };

std::string to_string(PointClass c);

struct Classification {
    PointClass kind = PointClass::Essential;
    /// Fredholm index of T_{phi - lambda}; set for SpectrumNonEssential.
    std::optional<std::int64_t> index;
};

/// Square window of the complex plane. Pixel (ix, iy) covers
/// [re_min + ix*h, re_min + (ix+1)*h) x (im_max - (iy+1)*h, im_max - iy*h];
/// row 0 is the top row.
struct Bounds {
    double re_min = 0.0;
    double re_max = 0.0;
    double im_min = 0.0;
    double im_max = 0.0;
};

struct RasterConfig {
    /// Samples per torus axis; 0 picks the default for the symbol dimension.
    std::size_t grid_per_axis = 0;
    std::size_t resolution = 512;
    int fatten_px = 2;
};

struct ImageRaster {
    Bounds bounds;
    std::size_t resolution = 0;
    /// Row-major, 1 where the (dilated) image of phi lies.
    std::vector<std::uint8_t> mask;

    double pixel_size() const { return (bounds.re_max - bounds.re_min) / static_cast<double>(resolution); }
    Complex pixel_center(std::size_t linear) const;
};

/// Rasterizes phi(G): samples the uniform torus grid, fills each grid cell's
/// image (segments for d = 1, convex hulls of cell corners otherwise, with
/// subdivision of large cells for d <= 2) and dilates by a disk of radius
/// fatten_px. Bounds are the square around the samples padded by 10%.
ImageRaster image_raster(const SymbolExpr& phi, const RasterConfig& config = {});

/// Labels of complement pixels: -1 on the mask, 0 on the unbounded
/// component (everything 4-connected to the frame), k >= 1 on the k-th
/// hole in raster order of first pixel.
std::vector<std::int32_t> label_complement(const std::vector<std::uint8_t>& mask, std::size_t resolution);

struct Hole {
    std::int32_t label = 0;
    std::vector<std::size_t> pixels;
    /// Pixel farthest from the mask (lowest index on ties) and its distance in pixels.
    std::size_t representative_pixel = 0;
    double clearance_px = 0.0;
    Complex representative;
};

/// Bounded complement components with their distance-transform representatives.
std::vector<Hole> holes(const ImageRaster& raster);

/// Squared Euclidean distance (in pixels) from each pixel to the nearest set pixel.
std::vector<double> squared_distance_transform(const std::vector<std::uint8_t>& set, std::size_t resolution);

/// Whether the set pixels form one 8-connected component (true when empty).
bool connected8(const std::vector<std::uint8_t>& set, std::size_t resolution);

/// Class of lambda off the image from the Bohr-van Kampen character of phi - lambda.
Classification classify_point(Complex lambda, const SymbolExpr& phi, const OrderSpec& order,
                              const AnalysisConfig& config = {});

struct SpectrumConfig {
    RasterConfig raster{};
    AnalysisConfig analysis{};
    /// Holes whose representative is closer than this to the image are
    /// merged into the essential spectrum.
    double min_clearance_px = 3.0;
    /// Classify three extra points per hole and warn on disagreement.
    bool recheck = false;
};

struct SpectralComponent {
    std::int32_t id = 0;
    Classification classification;
    Complex representative;
    std::size_t pixel_count = 0;
    double clearance_px = 0.0;
};

struct SpectralMap {
    ImageRaster raster;
    std::vector<std::int32_t> labels;
    /// Index 0 is the unbounded component; entry k describes label k.
    std::vector<SpectralComponent> components;
    std::vector<std::string> warnings;
    double sup_norm_estimate = 0.0;
    double spectral_radius = 0.0;
    double essential_spectral_radius = 0.0;

    bool in_spectrum(std::size_t pixel) const;
    bool in_essential_spectrum(std::size_t pixel) const;
    std::vector<std::uint8_t> spectrum_set() const;
    std::vector<std::uint8_t> essential_set() const;
};

/// Spectrum and essential spectrum of T_phi: the image plus the holes whose
/// shifted symbol has a nonzero (resp. index-less) character. The Weyl
/// spectrum coincides with the spectrum.
SpectralMap spectral_picture(const SymbolExpr& phi, const OrderSpec& order, const SpectrumConfig& config = {});

nlohmann::json spectral_map_to_json(const SpectralMap& map);
/// Plain PPM (P3): white resolvent, blue spectrum outside the essential
/// spectrum, dark essential spectrum.
std::string spectral_map_to_ppm(const SpectralMap& map);

}  // namespace ordtoep
