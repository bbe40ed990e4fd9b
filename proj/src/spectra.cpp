#include "ordtoep/spectra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <sstream>

#include "ordtoep/parallel.hpp"

namespace ordtoep {

namespace {

struct P {
    double x;
    double y;
};

double cross(const P& o, const P& a, const P& b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

double dist(const P& a, const P& b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::vector<P> convex_hull(std::vector<P> pts) {
    std::sort(pts.begin(), pts.end(), [](const P& a, const P& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end(), [](const P& a, const P& b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    if (pts.size() < 3) return pts;
    std::vector<P> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i - 1]) <= 0) --k;
        hull[k++] = pts[i - 1];
    }
    hull.resize(k - 1);
    return hull;
}

class Rasterizer {
public:
    Rasterizer(const Bounds& b, std::size_t res)
        : bounds_(b), res_(res), h_((b.re_max - b.re_min) / static_cast<double>(res)), mask_(res * res, 0) {}

    P to_pixel(Complex z) const { return {(z.real() - bounds_.re_min) / h_, (bounds_.im_max - z.imag()) / h_}; }

    void mark(const P& p) {
        const double fx = std::floor(p.x), fy = std::floor(p.y);
        if (fx < 0 || fy < 0 || fx >= static_cast<double>(res_) || fy >= static_cast<double>(res_)) return;
        mask_[static_cast<std::size_t>(fy) * res_ + static_cast<std::size_t>(fx)] = 1;
    }

    void segment(const P& a, const P& b) {
        const auto steps = static_cast<std::size_t>(std::ceil(dist(a, b) / 0.25)) + 1;
        for (std::size_t s = 0; s <= steps; ++s) {
            const double t = static_cast<double>(s) / static_cast<double>(steps);
            mark({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
        }
    }

    void fill(std::vector<P> pts) {
        const auto hull = convex_hull(std::move(pts));
        if (hull.size() == 1) {
            mark(hull[0]);
            return;
        }
        for (std::size_t i = 0; i < hull.size(); ++i) segment(hull[i], hull[(i + 1) % hull.size()]);
        if (hull.size() < 3) return;
        double x0 = hull[0].x, x1 = x0, y0 = hull[0].y, y1 = y0;
        for (const auto& p : hull) {
            x0 = std::min(x0, p.x), x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y), y1 = std::max(y1, p.y);
        }
        const auto lo_x = static_cast<std::int64_t>(std::max(0.0, std::floor(x0)));
        const auto hi_x = static_cast<std::int64_t>(std::min(static_cast<double>(res_) - 1, std::floor(x1)));
        const auto lo_y = static_cast<std::int64_t>(std::max(0.0, std::floor(y0)));
        const auto hi_y = static_cast<std::int64_t>(std::min(static_cast<double>(res_) - 1, std::floor(y1)));
        for (auto iy = lo_y; iy <= hi_y; ++iy) {
            for (auto ix = lo_x; ix <= hi_x; ++ix) {
                const P c{static_cast<double>(ix) + 0.5, static_cast<double>(iy) + 0.5};
                bool inside = true;
                for (std::size_t i = 0; i < hull.size() && inside; ++i) {
                    inside = cross(hull[i], hull[(i + 1) % hull.size()], c) >= 0;
                }
                if (inside) mask_[static_cast<std::size_t>(iy) * res_ + static_cast<std::size_t>(ix)] = 1;
            }
        }
    }

    double pixel() const { return h_; }
    std::vector<std::uint8_t> take() { return std::move(mask_); }

private:
    Bounds bounds_;
    std::size_t res_;
    double h_;
    std::vector<std::uint8_t> mask_;
};

constexpr int kMaxDepth = 4;

void trace_curve(const SymbolExpr& phi, Rasterizer& r, double t0, Complex z0, double t1, Complex z1, int depth) {
    const P a = r.to_pixel(z0), b = r.to_pixel(z1);
    if (dist(a, b) <= 1.0 || depth >= 4 * kMaxDepth) {
        r.segment(a, b);
        return;
    }
    const double tm = 0.5 * (t0 + t1);
    const std::array<double, 1> theta{tm};
    const Complex zm = phi.eval(theta);
    trace_curve(phi, r, t0, z0, tm, zm, depth + 1);
    trace_curve(phi, r, tm, zm, t1, z1, depth + 1);
}

// Corners ordered (u0,v0), (u1,v0), (u0,v1), (u1,v1).
void fill_patch(const SymbolExpr& phi, Rasterizer& r, double u0, double u1, double v0, double v1,
                const std::array<Complex, 4>& z, int depth) {
    std::array<P, 4> p;
    for (std::size_t i = 0; i < 4; ++i) p[i] = r.to_pixel(z[i]);
    double diam = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) diam = std::max(diam, dist(p[i], p[j]));
    }
    if (diam <= 2.0 || depth >= kMaxDepth) {
        r.fill({p.begin(), p.end()});
        return;
    }
    const double um = 0.5 * (u0 + u1), vm = 0.5 * (v0 + v1);
    const std::array<double, 2> center{um, vm};
    const Complex zc = phi.eval(center);
    const Complex bilinear = 0.25 * (z[0] + z[1] + z[2] + z[3]);
    if (std::abs(zc - bilinear) <= 0.5 * r.pixel()) {
        r.fill({p[0], p[1], p[2], p[3], r.to_pixel(zc)});
        return;
    }
    auto at = [&](double u, double v) {
        const std::array<double, 2> th{u, v};
        return phi.eval(th);
    };
    const Complex zb = at(um, v0), zt = at(um, v1), zl = at(u0, vm), zr = at(u1, vm);
    fill_patch(phi, r, u0, um, v0, vm, {z[0], zb, zl, zc}, depth + 1);
    fill_patch(phi, r, um, u1, v0, vm, {zb, z[1], zc, zr}, depth + 1);
    fill_patch(phi, r, u0, um, vm, v1, {zl, zc, z[2], zt}, depth + 1);
    fill_patch(phi, r, um, u1, vm, v1, {zc, zr, zt, z[3]}, depth + 1);
}

Bounds square_bounds(const std::vector<Complex>& values) {
    double re0 = values.front().real(), re1 = re0, im0 = values.front().imag(), im1 = im0;
    for (const auto& v : values) {
        re0 = std::min(re0, v.real()), re1 = std::max(re1, v.real());
        im0 = std::min(im0, v.imag()), im1 = std::max(im1, v.imag());
    }
    const double cx = 0.5 * (re0 + re1), cy = 0.5 * (im0 + im1);
    double side = 1.2 * std::max(re1 - re0, im1 - im0);
    // A (nearly) constant symbol still gets a visible window around its value.
    const double floor_side = 0.2 * std::max(1.0, std::hypot(cx, cy));
    if (side < 1e-6 * floor_side) side = floor_side;
    return {cx - 0.5 * side, cx + 0.5 * side, cy - 0.5 * side, cy + 0.5 * side};
}

void edt_1d(const double* f, std::size_t n, std::size_t stride, double* out, std::vector<std::size_t>& v,
            std::vector<double>& z) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::size_t k = 0;
    v[0] = 0;
    z[0] = -inf;
    z[1] = inf;
    auto val = [&](std::size_t q) { return f[q * stride]; };
    for (std::size_t q = 1; q < n; ++q) {
        if (val(q) == inf) continue;
        if (val(v[k]) == inf) {
            v[k] = q;
            continue;
        }
        double s;
        while (true) {
            const auto vq = static_cast<double>(v[k]);
            s = ((val(q) + static_cast<double>(q * q)) - (val(v[k]) + vq * vq)) / (2.0 * static_cast<double>(q) - 2.0 * vq);
            if (s <= z[k] && k > 0) {
                --k;
            } else {
                break;
            }
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = inf;
    }
    if (val(v[0]) == inf && k == 0) {
        for (std::size_t q = 0; q < n; ++q) out[q * stride] = inf;
        return;
    }
    k = 0;
    for (std::size_t q = 0; q < n; ++q) {
        while (z[k + 1] < static_cast<double>(q)) ++k;
        const double d = static_cast<double>(q) - static_cast<double>(v[k]);
        out[q * stride] = d * d + val(v[k]);
    }
}

std::vector<Hole> collect_holes(const ImageRaster& raster, const std::vector<std::int32_t>& labels,
                                const std::vector<double>& dist2) {
    std::int32_t max_label = 0;
    for (auto l : labels) max_label = std::max(max_label, l);
    std::vector<Hole> out(static_cast<std::size_t>(max_label));
    for (std::size_t k = 0; k < out.size(); ++k) out[k].label = static_cast<std::int32_t>(k + 1);
    std::vector<double> best(out.size(), -1.0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] <= 0) continue;
        const auto k = static_cast<std::size_t>(labels[i] - 1);
        out[k].pixels.push_back(i);
        if (dist2[i] > best[k]) {
            best[k] = dist2[i];
            out[k].representative_pixel = i;
        }
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k].clearance_px = std::sqrt(best[k]);
        out[k].representative = raster.pixel_center(out[k].representative_pixel);
    }
    return out;
}

std::string format_complex(Complex z) {
    std::ostringstream os;
    os.precision(6);
    os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    return os.str();
}

}  // namespace

std::string to_string(PointClass c) {
    switch (c) {
        case PointClass::Resolvent: return "resolvent";
        case PointClass::SpectrumNonEssential: return "spectrum_non_essential";
        case PointClass::Essential: return "essential";
    }
    return "?";
}

Complex ImageRaster::pixel_center(std::size_t linear) const {
    const double h = pixel_size();
    const auto ix = static_cast<double>(linear % resolution);
    const auto iy = static_cast<double>(linear / resolution);
    return {bounds.re_min + (ix + 0.5) * h, bounds.im_max - (iy + 0.5) * h};
}

ImageRaster image_raster(const SymbolExpr& phi, const RasterConfig& config) {
    if (config.resolution < 1) throw std::invalid_argument("raster resolution must be positive");
    const std::size_t dim = std::max<std::size_t>(1, phi.active_dim());
    const std::size_t n = config.grid_per_axis ? config.grid_per_axis : default_grid_per_axis(dim);
    const UniformGrid grid{dim, n};
    const auto values = evaluate_grid(phi, grid);

    ImageRaster out;
    out.bounds = square_bounds(values);
    out.resolution = config.resolution;
    Rasterizer r(out.bounds, config.resolution);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n);

    if (phi.active_dim() == 0) {
        r.mark(r.to_pixel(values.front()));
    } else if (dim == 1) {
        for (std::size_t k = 0; k < n; ++k) {
            trace_curve(phi, r, static_cast<double>(k) * step, values[k], static_cast<double>(k + 1) * step,
                        values[(k + 1) % n], 0);
        }
    } else if (dim == 2) {
        for (std::size_t k1 = 0; k1 < n; ++k1) {
            for (std::size_t k0 = 0; k0 < n; ++k0) {
                const std::size_t a0 = k0, a1 = (k0 + 1) % n, b0 = k1 * n, b1 = ((k1 + 1) % n) * n;
                fill_patch(phi, r, static_cast<double>(k0) * step, static_cast<double>(k0 + 1) * step,
                           static_cast<double>(k1) * step, static_cast<double>(k1 + 1) * step,
                           {values[a0 + b0], values[a1 + b0], values[a0 + b1], values[a1 + b1]}, 0);
            }
        }
    } else {
        std::vector<std::size_t> stride(dim, 1);
        for (std::size_t j = 1; j < dim; ++j) stride[j] = stride[j - 1] * n;
        const std::size_t corners = std::size_t{1} << dim;
        std::vector<P> pts(corners);
        for (std::size_t cell = 0; cell < grid.size(); ++cell) {
            for (std::size_t c = 0; c < corners; ++c) {
                std::size_t idx = 0;
                for (std::size_t j = 0; j < dim; ++j) {
                    const std::size_t k = (cell / stride[j]) % n;
                    idx += (((c >> j) & 1u) ? (k + 1) % n : k) * stride[j];
                }
                pts[c] = r.to_pixel(values[idx]);
            }
            r.fill(pts);
        }
    }

    auto mask = r.take();
    if (config.fatten_px > 0) {
        const auto d2 = squared_distance_transform(mask, config.resolution);
        const double r2 = static_cast<double>(config.fatten_px) * config.fatten_px;
        for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = d2[i] <= r2 ? 1 : 0;
    }
    out.mask = std::move(mask);
    return out;
}

std::vector<double> squared_distance_transform(const std::vector<std::uint8_t>& set, std::size_t res) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> f(set.size()), tmp(set.size());
    for (std::size_t i = 0; i < set.size(); ++i) f[i] = set[i] ? 0.0 : inf;
    std::vector<std::size_t> v(res);
    std::vector<double> z(res + 1);
    for (std::size_t x = 0; x < res; ++x) edt_1d(f.data() + x, res, res, tmp.data() + x, v, z);
    for (std::size_t y = 0; y < res; ++y) edt_1d(tmp.data() + y * res, res, 1, f.data() + y * res, v, z);
    return f;
}

std::vector<std::int32_t> label_complement(const std::vector<std::uint8_t>& mask, std::size_t res) {
    std::vector<std::int32_t> labels(mask.size(), -2);
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i]) labels[i] = -1;
    }
    std::deque<std::size_t> queue;
    auto flood = [&](std::size_t seed, std::int32_t label) {
        labels[seed] = label;
        queue.push_back(seed);
        while (!queue.empty()) {
            const std::size_t i = queue.front();
            queue.pop_front();
            const std::size_t x = i % res, y = i / res;
            auto visit = [&](std::size_t j) {
                if (labels[j] == -2) {
                    labels[j] = label;
                    queue.push_back(j);
                }
            };
            if (x > 0) visit(i - 1);
            if (x + 1 < res) visit(i + 1);
            if (y > 0) visit(i - res);
            if (y + 1 < res) visit(i + res);
        }
    };
    for (std::size_t k = 0; k < res; ++k) {
        for (std::size_t i : {k, (res - 1) * res + k, k * res, k * res + res - 1}) {
            if (labels[i] == -2) flood(i, 0);
        }
    }
    std::int32_t next = 1;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == -2) flood(i, next++);
    }
    return labels;
}

std::vector<Hole> holes(const ImageRaster& raster) {
    const auto labels = label_complement(raster.mask, raster.resolution);
    return collect_holes(raster, labels, squared_distance_transform(raster.mask, raster.resolution));
}

bool connected8(const std::vector<std::uint8_t>& set, std::size_t res) {
    const auto first = std::find(set.begin(), set.end(), std::uint8_t{1});
    if (first == set.end()) return true;
    std::vector<std::uint8_t> seen(set.size(), 0);
    std::vector<std::size_t> stack{static_cast<std::size_t>(first - set.begin())};
    seen[stack.back()] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        const auto x = static_cast<std::int64_t>(i % res), y = static_cast<std::int64_t>(i / res);
        for (std::int64_t dy = -1; dy <= 1; ++dy) {
            for (std::int64_t dx = -1; dx <= 1; ++dx) {
                const auto nx = x + dx, ny = y + dy;
                if (nx < 0 || ny < 0 || nx >= static_cast<std::int64_t>(res) || ny >= static_cast<std::int64_t>(res)) {
                    continue;
                }
                const auto j = static_cast<std::size_t>(ny) * res + static_cast<std::size_t>(nx);
                if (set[j] && !seen[j]) {
                    seen[j] = 1;
                    ++reached;
                    stack.push_back(j);
                }
            }
        }
    }
    return reached == static_cast<std::size_t>(std::count(set.begin(), set.end(), std::uint8_t{1}));
}

Classification classify_point(Complex lambda, const SymbolExpr& phi, const OrderSpec& order,
                              const AnalysisConfig& config) {
    AnalysisConfig cfg = config;
    cfg.composition_witness = false;
    const auto report = analyze(SymbolExpr::shift(phi, -lambda), order, cfg);
    if (!report.character) return {PointClass::Essential, std::nullopt};
    if (report.character->is_zero()) return {PointClass::Resolvent, std::nullopt};
    if (report.in_xi) return {PointClass::SpectrumNonEssential, report.index};
    return {PointClass::Essential, std::nullopt};
}

bool SpectralMap::in_spectrum(std::size_t pixel) const {
    const auto l = labels[pixel];
    return l < 0 || components[static_cast<std::size_t>(l)].classification.kind != PointClass::Resolvent;
}

bool SpectralMap::in_essential_spectrum(std::size_t pixel) const {
    const auto l = labels[pixel];
    return l < 0 || components[static_cast<std::size_t>(l)].classification.kind == PointClass::Essential;
}

std::vector<std::uint8_t> SpectralMap::spectrum_set() const {
    std::vector<std::uint8_t> s(labels.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = in_spectrum(i) ? 1 : 0;
    return s;
}

std::vector<std::uint8_t> SpectralMap::essential_set() const {
    std::vector<std::uint8_t> s(labels.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = in_essential_spectrum(i) ? 1 : 0;
    return s;
}

SpectralMap spectral_picture(const SymbolExpr& phi, const OrderSpec& order, const SpectrumConfig& config) {
    SpectralMap map;
    map.raster = image_raster(phi, config.raster);
    map.labels = label_complement(map.raster.mask, map.raster.resolution);
    const auto dist2 = squared_distance_transform(map.raster.mask, map.raster.resolution);
    const auto hole_list = collect_holes(map.raster, map.labels, dist2);

    SpectralComponent outer;
    outer.id = 0;
    outer.classification = {PointClass::Resolvent, std::nullopt};
    double best = -1.0;
    for (std::size_t i = 0; i < map.labels.size(); ++i) {
        if (map.labels[i] != 0) continue;
        ++outer.pixel_count;
        if (dist2[i] > best) {
            best = dist2[i];
            outer.representative = map.raster.pixel_center(i);
        }
    }
    outer.clearance_px = std::sqrt(std::max(best, 0.0));
    map.components.push_back(outer);

    std::vector<SpectralComponent> hole_components(hole_list.size());
    std::vector<std::string> hole_warnings(hole_list.size());
    parallel_for(
        hole_list.size(),
        [&](std::size_t b, std::size_t e) {
            for (std::size_t k = b; k < e; ++k) {
                const Hole& h = hole_list[k];
                SpectralComponent& c = hole_components[k];
                c.id = h.label;
                c.representative = h.representative;
                c.pixel_count = h.pixels.size();
                c.clearance_px = h.clearance_px;
                if (h.clearance_px < config.min_clearance_px) {
                    c.classification = {PointClass::Essential, std::nullopt};
                    std::ostringstream os;
                    os.precision(3);
                    os << "hole " << h.label << " has clearance " << h.clearance_px
                       << " px; merged into the essential spectrum";
                    hole_warnings[k] = os.str();
                    continue;
                }
                c.classification = classify_point(h.representative, phi, order, config.analysis);
                if (!config.recheck) continue;
                std::vector<std::size_t> candidates;
                for (auto p : h.pixels) {
                    if (p != h.representative_pixel && std::sqrt(dist2[p]) >= config.min_clearance_px) {
                        candidates.push_back(p);
                    }
                }
                for (std::size_t q = 1; q <= 3 && !candidates.empty(); ++q) {
                    const auto p = candidates[(q * candidates.size()) / 4];
                    const auto extra = classify_point(map.raster.pixel_center(p), phi, order, config.analysis);
                    if (extra.kind != c.classification.kind || extra.index != c.classification.index) {
                        hole_warnings[k] += (hole_warnings[k].empty() ? "" : "; ");
                        hole_warnings[k] += "hole " + std::to_string(h.label) + " recheck at " +
                                            format_complex(map.raster.pixel_center(p)) + " disagrees";
                    }
                }
            }
        },
        1);
    for (std::size_t k = 0; k < hole_components.size(); ++k) {
        map.components.push_back(hole_components[k]);
        if (!hole_warnings[k].empty()) map.warnings.push_back(hole_warnings[k]);
    }

    const std::size_t sample_dim = std::max<std::size_t>(1, phi.active_dim());
    map.sup_norm_estimate = sup_norm_estimate(
        phi, config.raster.grid_per_axis ? config.raster.grid_per_axis : default_grid_per_axis(sample_dim));
    for (std::size_t i = 0; i < map.labels.size(); ++i) {
        const double r = std::abs(map.raster.pixel_center(i));
        if (map.in_spectrum(i)) map.spectral_radius = std::max(map.spectral_radius, r);
        if (map.in_essential_spectrum(i)) map.essential_spectral_radius = std::max(map.essential_spectral_radius, r);
    }
    return map;
}

nlohmann::json spectral_map_to_json(const SpectralMap& map) {
    const auto& b = map.raster.bounds;
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : map.components) {
        nlohmann::json j = {{"id", c.id},
                            {"class", to_string(c.classification.kind)},
                            {"representative", {c.representative.real(), c.representative.imag()}},
                            {"pixel_count", c.pixel_count},
                            {"clearance_px", c.clearance_px}};
        if (c.classification.index) j["index"] = *c.classification.index;
        comps.push_back(std::move(j));
    }
    return {{"bounds", {{"re_min", b.re_min}, {"re_max", b.re_max}, {"im_min", b.im_min}, {"im_max", b.im_max}}},
            {"resolution", map.raster.resolution},
            {"image_pixel_count", std::count(map.raster.mask.begin(), map.raster.mask.end(), std::uint8_t{1})},
            {"components", comps},
            {"sup_norm_estimate", map.sup_norm_estimate},
            {"spectral_radius", map.spectral_radius},
            {"essential_spectral_radius", map.essential_spectral_radius},
            {"weyl_spectrum_equals_spectrum", true},
            {"warnings", map.warnings}};
}

std::string spectral_map_to_ppm(const SpectralMap& map) {
    const std::size_t res = map.raster.resolution;
    std::string out = "P3\n" + std::to_string(res) + " " + std::to_string(res) + "\n255\n";
    out.reserve(out.size() + res * res * 12);
    for (std::size_t i = 0; i < res * res; ++i) {
        if (map.in_essential_spectrum(i)) {
            out += "32 32 32\n";
        } else if (map.in_spectrum(i)) {
            out += "96 160 224\n";
        } else {
            out += "255 255 255\n";
        }
    }
    return out;
}

}  // namespace ordtoep
