#include "ordtoep/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ordtoep/errors.hpp"
#include "ordtoep/parallel.hpp"

namespace ordtoep {

namespace {

using Values = std::vector<Complex>;

std::size_t max_dim(const std::vector<SymbolExpr>& args) {
    std::size_t d = 0;
    for (const auto& a : args) d = std::max(d, a.active_dim());
    return d;
}

// e^{2 pi i r / N} for r in [0, N).
std::vector<Complex> root_table(std::size_t n) {
    std::vector<Complex> t(n);
    for (std::size_t r = 0; r < n; ++r) {
        t[r] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n));
    }
    return t;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t n) {
    const std::int64_t r = a % n;
    return r < 0 ? r + n : r;
}

// Phase index of character chi at grid point i: sum_j chi_j k_j mod N.
class PhaseIndexer {
public:
    PhaseIndexer(const UniformGrid& grid, const LatticePoint& chi) : n_(static_cast<std::int64_t>(grid.per_axis)) {
        std::size_t stride = 1;
        std::size_t coord = 0;
        for (const auto& [c, v] : chi.entries()) {
            while (coord < c) {
                stride *= grid.per_axis;
                ++coord;
            }
            terms_.push_back({stride, floor_mod(v, n_)});
        }
    }

    std::size_t operator()(std::size_t linear) const {
        std::int64_t acc = 0;
        const auto per_axis = static_cast<std::size_t>(n_);
        for (const auto& t : terms_) {
            const auto k = static_cast<std::int64_t>((linear / t.stride) % per_axis);
            acc = (acc + t.mult * k) % n_;
        }
        return static_cast<std::size_t>(acc);
    }

private:
    struct Term {
        std::size_t stride;
        std::int64_t mult;
    };
    std::int64_t n_;
    std::vector<Term> terms_;
};

class GridEvaluator {
public:
    explicit GridEvaluator(const UniformGrid& grid) : grid_(grid), roots_(root_table(grid.per_axis)) {}

    Values eval(const SymbolExpr& phi) const {
        return std::visit([&](const auto& node) { return eval_node(node); }, phi.node());
    }

private:
    template <typename F>
    void for_each(std::size_t n, F f) const {
        parallel_for(n, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) f(i);
        });
    }

    Values eval_node(const MonoNode& m) const {
        Values out(grid_.size());
        const PhaseIndexer idx(grid_, m.n);
        for_each(out.size(), [&](std::size_t i) { out[i] = roots_[idx(i)]; });
        return out;
    }

    Values eval_node(const PolyNode& p) const {
        Values out(grid_.size(), Complex{});
        for (const auto& [n, c] : p.poly.terms()) {
            const PhaseIndexer idx(grid_, n);
            for_each(out.size(), [&](std::size_t i) { out[i] += c * roots_[idx(i)]; });
        }
        return out;
    }

    Values eval_node(const ExpNode& e) const {
        Values out = eval(e.arg);
        for_each(out.size(), [&](std::size_t i) { out[i] = std::exp(out[i]); });
        return out;
    }

    Values eval_node(const ProductNode& p) const {
        Values out(grid_.size(), Complex{1.0, 0.0});
        for (const auto& a : p.args) {
            const Values v = eval(a);
            for_each(out.size(), [&](std::size_t i) { out[i] *= v[i]; });
        }
        return out;
    }

    Values eval_node(const SumNode& s) const {
        Values out(grid_.size(), Complex{});
        for (const auto& a : s.args) {
            const Values v = eval(a);
            for_each(out.size(), [&](std::size_t i) { out[i] += v[i]; });
        }
        return out;
    }

    Values eval_node(const ShiftNode& s) const {
        Values out = eval(s.arg);
        for_each(out.size(), [&](std::size_t i) { out[i] += s.lambda; });
        return out;
    }

    UniformGrid grid_;
    std::vector<Complex> roots_;
};

Complex character_value(const LatticePoint& n, std::span<const double> theta) {
    double phase = 0.0;
    for (const auto& [c, v] : n.entries()) phase += static_cast<double>(v) * theta[c];
    return std::polar(1.0, phase);
}

std::size_t symbol_grid_dim(const SymbolExpr& phi) { return std::max<std::size_t>(1, phi.active_dim()); }

Complex complex_from_pair(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ConfigError("complex value must be [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

// ---------------------------------------------------------------------------
// TrigPoly

TrigPoly::TrigPoly(Terms terms) : terms_(std::move(terms)) {
    std::erase_if(terms_, [](const auto& kv) { return kv.second == Complex{}; });
}

TrigPoly TrigPoly::constant(Complex c) { return monomial(LatticePoint{}, c); }

TrigPoly TrigPoly::monomial(const LatticePoint& n, Complex c) {
    TrigPoly p;
    p.add_term(n, c);
    return p;
}

std::size_t TrigPoly::active_dim() const noexcept {
    std::size_t d = 0;
    for (const auto& kv : terms_) d = std::max(d, kv.first.active_dim());
    return d;
}

Complex TrigPoly::coefficient(const LatticePoint& chi) const {
    auto it = terms_.find(chi);
    return it == terms_.end() ? Complex{} : it->second;
}

Complex TrigPoly::eval(std::span<const double> theta) const {
    if (theta.size() < active_dim()) throw DimensionError("too few angles for trigonometric polynomial");
    Complex acc{};
    for (const auto& [n, c] : terms_) acc += c * character_value(n, theta);
    return acc;
}

TrigPoly TrigPoly::conjugate() const {
    TrigPoly out;
    for (const auto& [n, c] : terms_) out.terms_.emplace(-n, std::conj(c));
    return out;
}

bool TrigPoly::supported_in_cone(const OrderSpec& order) const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [&](const auto& kv) { return is_positive(kv.first, order); });
}

double TrigPoly::coefficient_l1() const {
    double s = 0.0;
    for (const auto& kv : terms_) s += std::abs(kv.second);
    return s;
}

void TrigPoly::add_term(const LatticePoint& n, Complex c) {
    auto [it, inserted] = terms_.try_emplace(n, c);
    if (!inserted) it->second += c;
    if (it->second == Complex{}) terms_.erase(it);
}

TrigPoly operator+(const TrigPoly& a, const TrigPoly& b) {
    TrigPoly out = a;
    for (const auto& [n, c] : b.terms_) out.add_term(n, c);
    return out;
}

TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) {
    TrigPoly out;
    for (const auto& [n1, c1] : a.terms_) {
        for (const auto& [n2, c2] : b.terms_) out.add_term(n1 + n2, c1 * c2);
    }
    return out;
}

TrigPoly operator*(Complex s, const TrigPoly& a) {
    TrigPoly out;
    for (const auto& [n, c] : a.terms_) out.add_term(n, s * c);
    return out;
}

TrigPoly riesz_project(const TrigPoly& f, const OrderSpec& order) {
    TrigPoly::Terms kept;
    for (const auto& [n, c] : f.terms()) {
        if (is_positive(n, order)) kept.emplace(n, c);
    }
    return TrigPoly(std::move(kept));
}

// ---------------------------------------------------------------------------
// Grid

std::size_t UniformGrid::size() const {
    std::size_t s = 1;
    for (std::size_t j = 0; j < dim; ++j) s *= per_axis;
    return s;
}

std::vector<double> UniformGrid::angles(std::size_t linear_index) const {
    std::vector<double> theta(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        theta[j] = 2.0 * std::numbers::pi * static_cast<double>(linear_index % per_axis) /
                   static_cast<double>(per_axis);
        linear_index /= per_axis;
    }
    return theta;
}

std::size_t default_grid_per_axis(std::size_t dim) {
    if (dim <= 2) return 512;
    if (dim == 3) return 64;
    if (dim == 4) return 16;
    return 8;
}

// ---------------------------------------------------------------------------
// SymbolExpr

SymbolExpr SymbolExpr::mono(const LatticePoint& n) {
    return SymbolExpr(std::make_shared<const SymbolNode>(MonoNode{n}), n.active_dim());
}

SymbolExpr SymbolExpr::poly(TrigPoly p) {
    const std::size_t d = p.active_dim();
    return SymbolExpr(std::make_shared<const SymbolNode>(PolyNode{std::move(p)}), d);
}

SymbolExpr SymbolExpr::constant(Complex c) { return poly(TrigPoly::constant(c)); }

SymbolExpr SymbolExpr::exp(const SymbolExpr& arg) {
    return SymbolExpr(std::make_shared<const SymbolNode>(ExpNode{arg}), arg.active_dim());
}

SymbolExpr SymbolExpr::product(std::vector<SymbolExpr> args) {
    const std::size_t d = max_dim(args);
    return SymbolExpr(std::make_shared<const SymbolNode>(ProductNode{std::move(args)}), d);
}

SymbolExpr SymbolExpr::sum(std::vector<SymbolExpr> args) {
    const std::size_t d = max_dim(args);
    return SymbolExpr(std::make_shared<const SymbolNode>(SumNode{std::move(args)}), d);
}

SymbolExpr SymbolExpr::shift(const SymbolExpr& arg, Complex lambda) {
    return SymbolExpr(std::make_shared<const SymbolNode>(ShiftNode{arg, lambda}), arg.active_dim());
}

SymbolExpr operator*(const SymbolExpr& a, const SymbolExpr& b) { return SymbolExpr::product({a, b}); }

Complex SymbolExpr::eval(std::span<const double> theta) const {
    if (theta.size() < active_dim_) {
        throw DimensionError("symbol needs " + std::to_string(active_dim_) + " angles, got " +
                             std::to_string(theta.size()));
    }
    return std::visit(
        [&](const auto& n) -> Complex {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, MonoNode>) {
                return character_value(n.n, theta);
            } else if constexpr (std::is_same_v<N, PolyNode>) {
                return n.poly.eval(theta);
            } else if constexpr (std::is_same_v<N, ExpNode>) {
                return std::exp(n.arg.eval(theta));
            } else if constexpr (std::is_same_v<N, ProductNode>) {
                Complex acc{1.0, 0.0};
                for (const auto& a : n.args) acc *= a.eval(theta);
                return acc;
            } else if constexpr (std::is_same_v<N, SumNode>) {
                Complex acc{};
                for (const auto& a : n.args) acc += a.eval(theta);
                return acc;
            } else {
                return n.arg.eval(theta) + n.lambda;
            }
        },
        *node_);
}

std::vector<Complex> evaluate_grid(const SymbolExpr& phi, const UniformGrid& grid) {
    if (grid.dim < phi.active_dim()) throw DimensionError("grid dimension below symbol dimension");
    if (grid.per_axis == 0) throw std::invalid_argument("grid needs at least one point per axis");
    return GridEvaluator(grid).eval(phi);
}

double sup_norm_estimate(const SymbolExpr& phi, std::size_t grid_per_axis) {
    const auto values = evaluate_grid(phi, UniformGrid{symbol_grid_dim(phi), grid_per_axis});
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
}

double min_modulus(const SymbolExpr& phi, std::size_t grid_per_axis) {
    const auto values = evaluate_grid(phi, UniformGrid{symbol_grid_dim(phi), grid_per_axis});
    double m = std::abs(values.front());
    for (const auto& v : values) m = std::min(m, std::abs(v));
    return m;
}

std::vector<Complex> sampled_coefficients(const SymbolExpr& phi, std::span<const LatticePoint> chars,
                                          const UniformGrid& grid) {
    const auto values = evaluate_grid(phi, grid);
    const auto roots = root_table(grid.per_axis);
    std::vector<Complex> out(chars.size());
    parallel_for(
        chars.size(),
        [&](std::size_t b, std::size_t e) {
            for (std::size_t c = b; c < e; ++c) {
                if (chars[c].active_dim() > grid.dim) throw DimensionError("character outside grid dimension");
                const PhaseIndexer idx(grid, -chars[c]);
                Complex acc{};
                for (std::size_t i = 0; i < values.size(); ++i) acc += values[i] * roots[idx(i)];
                out[c] = acc / static_cast<double>(values.size());
            }
        },
        1);
    return out;
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json trig_poly_to_json(const TrigPoly& p) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [n, c] : p.terms()) {
        terms.push_back({{"n", n}, {"re", c.real()}, {"im", c.imag()}});
    }
    return terms;
}

TrigPoly trig_poly_from_json(const nlohmann::json& terms) {
    if (!terms.is_array()) throw ConfigError("poly terms must be an array");
    TrigPoly p;
    for (const auto& t : terms) {
        if (!t.is_object() || !t.contains("n")) throw ConfigError("poly term needs \"n\"");
        const auto n = t["n"].get<LatticePoint>();
        const double re = t.value("re", 0.0);
        const double im = t.value("im", 0.0);
        p.add_term(n, {re, im});
    }
    return p;
}

nlohmann::json symbol_to_json(const SymbolExpr& phi) {
    return std::visit(
        [](const auto& n) -> nlohmann::json {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, MonoNode>) {
                return {{"type", "mono"}, {"n", n.n}};
            } else if constexpr (std::is_same_v<N, PolyNode>) {
                return {{"type", "poly"}, {"terms", trig_poly_to_json(n.poly)}};
            } else if constexpr (std::is_same_v<N, ExpNode>) {
                return {{"type", "exp"}, {"arg", symbol_to_json(n.arg)}};
            } else if constexpr (std::is_same_v<N, ProductNode> || std::is_same_v<N, SumNode>) {
                nlohmann::json args = nlohmann::json::array();
                for (const auto& a : n.args) args.push_back(symbol_to_json(a));
                return {{"type", std::is_same_v<N, ProductNode> ? "product" : "sum"}, {"args", args}};
            } else {
                return {{"type", "shift"},
                        {"arg", symbol_to_json(n.arg)},
                        {"lambda", {n.lambda.real(), n.lambda.imag()}}};
            }
        },
        phi.node());
}

SymbolExpr symbol_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
        throw ConfigError("symbol spec must be an object with a string \"type\"");
    }
    const auto type = j["type"].get<std::string>();
    auto args_of = [&]() {
        if (!j.contains("args") || !j["args"].is_array()) throw ConfigError(type + " needs an \"args\" array");
        std::vector<SymbolExpr> args;
        for (const auto& a : j["args"]) args.push_back(symbol_from_json(a));
        return args;
    };
    auto arg_of = [&]() {
        if (!j.contains("arg")) throw ConfigError(type + " needs an \"arg\"");
        return symbol_from_json(j["arg"]);
    };
    try {
        if (type == "mono") return SymbolExpr::mono(j.at("n").get<LatticePoint>());
        if (type == "poly") return SymbolExpr::poly(trig_poly_from_json(j.at("terms")));
        if (type == "const") return SymbolExpr::constant({j.value("re", 0.0), j.value("im", 0.0)});
        if (type == "exp") return SymbolExpr::exp(arg_of());
        if (type == "product") return SymbolExpr::product(args_of());
        if (type == "sum") return SymbolExpr::sum(args_of());
        if (type == "shift") return SymbolExpr::shift(arg_of(), complex_from_pair(j.at("lambda")));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad symbol spec: ") + e.what());
    }
    throw ConfigError("unknown symbol type \"" + type + "\"");
}

}  // namespace ordtoep
