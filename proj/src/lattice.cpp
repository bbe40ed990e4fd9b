#include "ordtoep/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ordtoep/errors.hpp"

namespace ordtoep {

namespace {

constexpr std::int64_t kMinWeightDenominator = 1'000'000'000'000;

std::vector<LatticePoint::Entry> dense_to_entries(const std::vector<std::int64_t>& dense) {
    std::vector<LatticePoint::Entry> out;
    for (std::size_t i = 0; i < dense.size(); ++i) {
        if (dense[i] != 0) out.emplace_back(i, dense[i]);
    }
    return out;
}

template <typename Op>
LatticePoint combine(const LatticePoint& a, const LatticePoint& b, Op op) {
    std::vector<LatticePoint::Entry> out;
    const auto& ea = a.entries();
    const auto& eb = b.entries();
    std::size_t i = 0, j = 0;
    while (i < ea.size() || j < eb.size()) {
        std::size_t coord;
        std::int64_t va = 0, vb = 0;
        if (j == eb.size() || (i < ea.size() && ea[i].first < eb[j].first)) {
            coord = ea[i].first;
            va = ea[i++].second;
        } else if (i == ea.size() || eb[j].first < ea[i].first) {
            coord = eb[j].first;
            vb = eb[j++].second;
        } else {
            coord = ea[i].first;
            va = ea[i++].second;
            vb = eb[j++].second;
        }
        const std::int64_t v = op(va, vb);
        if (v != 0) out.emplace_back(coord, v);
    }
    return LatticePoint::from_entries(std::move(out));
}

int sign_of(__int128 v) { return (v > 0) - (v < 0); }

std::strong_ordering from_sign(int s) {
    if (s < 0) return std::strong_ordering::less;
    if (s > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

unsigned __int128 isqrt128(unsigned __int128 n) {
    if (n < 2) return n;
    unsigned __int128 x = static_cast<unsigned __int128>(std::sqrt(static_cast<long double>(n)));
    // Newton polish from the floating estimate.
    for (int iter = 0; iter < 8; ++iter) {
        if (x == 0) x = 1;
        x = (x + n / x) / 2;
    }
    while (x * x > n) --x;
    while ((x + 1) * (x + 1) <= n) ++x;
    return x;
}

}  // namespace

LatticePoint::LatticePoint(std::initializer_list<std::int64_t> dense)
    : entries_(dense_to_entries(std::vector<std::int64_t>(dense))) {}

LatticePoint::LatticePoint(const std::vector<std::int64_t>& dense) : entries_(dense_to_entries(dense)) {}

LatticePoint LatticePoint::from_entries(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end());
    LatticePoint p;
    for (const auto& [coord, value] : entries) {
        if (!p.entries_.empty() && p.entries_.back().first == coord) {
            p.entries_.back().second += value;
        } else {
            p.entries_.emplace_back(coord, value);
        }
    }
    std::erase_if(p.entries_, [](const Entry& e) { return e.second == 0; });
    return p;
}

LatticePoint LatticePoint::unit(std::size_t coord, std::int64_t value) {
    return from_entries({{coord, value}});
}

std::int64_t LatticePoint::operator[](std::size_t coord) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), coord,
                               [](const Entry& e, std::size_t c) { return e.first < c; });
    return (it != entries_.end() && it->first == coord) ? it->second : 0;
}

std::size_t LatticePoint::active_dim() const noexcept {
    return entries_.empty() ? 0 : entries_.back().first + 1;
}

std::int64_t LatticePoint::sup_norm() const noexcept {
    std::int64_t m = 0;
    for (const auto& e : entries_) m = std::max(m, e.second < 0 ? -e.second : e.second);
    return m;
}

std::vector<std::int64_t> LatticePoint::dense(std::size_t min_len) const {
    std::vector<std::int64_t> out(std::max(min_len, active_dim()), 0);
    for (const auto& [coord, value] : entries_) out[coord] = value;
    return out;
}

std::string LatticePoint::to_string() const {
    std::ostringstream os;
    os << '(';
    const auto d = dense(1);
    for (std::size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << d[i];
    os << ')';
    return os.str();
}

LatticePoint LatticePoint::operator-() const {
    LatticePoint p = *this;
    for (auto& e : p.entries_) e.second = -e.second;
    return p;
}

LatticePoint operator+(const LatticePoint& a, const LatticePoint& b) {
    return combine(a, b, [](std::int64_t x, std::int64_t y) { return x + y; });
}

LatticePoint operator-(const LatticePoint& a, const LatticePoint& b) {
    return combine(a, b, [](std::int64_t x, std::int64_t y) { return x - y; });
}

LatticePoint& LatticePoint::operator+=(const LatticePoint& other) {
    *this = *this + other;
    return *this;
}

LatticePoint LatticePoint::scaled(std::int64_t k) const {
    if (k == 0) return {};
    LatticePoint p = *this;
    for (auto& e : p.entries_) e.second *= k;
    return p;
}

std::strong_ordering operator<=>(const LatticePoint& a, const LatticePoint& b) {
    return a.entries_ <=> b.entries_;
}

void to_json(nlohmann::json& j, const LatticePoint& p) { j = p.dense(1); }

void from_json(const nlohmann::json& j, LatticePoint& p) {
    if (!j.is_array()) throw ConfigError("lattice point must be an integer array");
    std::vector<std::int64_t> dense;
    for (const auto& v : j) {
        if (!v.is_number_integer()) throw ConfigError("lattice point entries must be integers");
        dense.push_back(v.get<std::int64_t>());
    }
    p = LatticePoint(dense);
}

// ---------------------------------------------------------------------------

OrderSpec OrderSpec::lex(std::size_t dim) {
    if (dim == 0) throw ConfigError("lex order needs dimension >= 1");
    return OrderSpec(LexOrder{dim});
}

OrderSpec OrderSpec::colex() { return OrderSpec(ColexOrder{}); }

OrderSpec OrderSpec::weight(std::int64_t alpha_num, std::int64_t alpha_den) {
    if (alpha_den < kMinWeightDenominator) {
        throw ConfigError("weight order needs alpha_den >= 10^12");
    }
    if (alpha_num % alpha_den == 0) {
        throw ConfigError("weight order approximant must not be an integer");
    }
    return OrderSpec(WeightOrder{alpha_num, alpha_den});
}

OrderSpec OrderSpec::weight_sqrt(std::int64_t radicand) {
    if (radicand <= 0) throw ConfigError("weight_sqrt needs a positive radicand");
    const auto root = isqrt128(static_cast<unsigned __int128>(radicand));
    if (root * root == static_cast<unsigned __int128>(radicand)) {
        throw ConfigError("weight_sqrt radicand is a perfect square");
    }
    const unsigned __int128 q = kMinWeightDenominator;
    const auto p = isqrt128(static_cast<unsigned __int128>(radicand) * q * q);
    return weight(static_cast<std::int64_t>(p), kMinWeightDenominator);
}

std::optional<std::size_t> OrderSpec::dim() const noexcept {
    if (auto* lex = std::get_if<LexOrder>(&family_)) return lex->dim;
    if (std::holds_alternative<WeightOrder>(family_)) return 2;
    return std::nullopt;
}

std::string OrderSpec::name() const {
    if (auto* lex = std::get_if<LexOrder>(&family_)) return "lex(" + std::to_string(lex->dim) + ")";
    if (auto* w = std::get_if<WeightOrder>(&family_)) {
        return "weight(" + std::to_string(w->alpha_num) + "/" + std::to_string(w->alpha_den) + ")";
    }
    return "colex";
}

void OrderSpec::check_point(const LatticePoint& p) const {
    if (auto d = dim(); d && p.active_dim() > *d) {
        throw DimensionError("point " + p.to_string() + " lies outside the lattice of order " + name());
    }
}

void to_json(nlohmann::json& j, const OrderSpec& order) {
    std::visit(
        [&](const auto& f) {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, LexOrder>) {
                j = {{"family", "lex"}, {"d", f.dim}};
            } else if constexpr (std::is_same_v<F, ColexOrder>) {
                j = {{"family", "colex"}};
            } else {
                j = {{"family", "weight"}, {"alpha_num", f.alpha_num}, {"alpha_den", f.alpha_den}};
            }
        },
        order.family());
}

OrderSpec order_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("family") || !j["family"].is_string()) {
        throw ConfigError("order spec must be an object with a string \"family\"");
    }
    const auto family = j["family"].get<std::string>();
    try {
        if (family == "lex") return OrderSpec::lex(j.at("d").get<std::size_t>());
        if (family == "colex") return OrderSpec::colex();
        if (family == "weight") {
            if (j.contains("sqrt")) return OrderSpec::weight_sqrt(j["sqrt"].get<std::int64_t>());
            return OrderSpec::weight(j.at("alpha_num").get<std::int64_t>(),
                                     j.at("alpha_den").get<std::int64_t>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad order spec: ") + e.what());
    }
    throw ConfigError("unsupported order family \"" + family + "\"");
}

std::strong_ordering compare(const LatticePoint& x, const LatticePoint& y, const OrderSpec& order) {
    order.check_point(x);
    order.check_point(y);
    const LatticePoint z = x - y;
    if (z.is_zero()) return std::strong_ordering::equal;
    const auto& e = z.entries();
    return std::visit(
        [&](const auto& f) -> std::strong_ordering {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, LexOrder>) {
                return from_sign(e.front().second > 0 ? 1 : -1);
            } else if constexpr (std::is_same_v<F, ColexOrder>) {
                return from_sign(e.back().second > 0 ? 1 : -1);
            } else {
                const __int128 s = static_cast<__int128>(f.alpha_num) * z[0] +
                                   static_cast<__int128>(f.alpha_den) * z[1];
                if (s != 0) return from_sign(sign_of(s));
                return from_sign(e.front().second > 0 ? 1 : -1);
            }
        },
        order.family());
}

bool is_positive(const LatticePoint& x, const OrderSpec& order) {
    return compare(x, LatticePoint{}, order) != std::strong_ordering::less;
}

std::optional<std::int64_t> ind_character(const LatticePoint& chi, const OrderSpec& order) {
    order.check_point(chi);
    if (chi.is_zero()) return 0;
    return std::visit(
        [&](const auto& f) -> std::optional<std::int64_t> {
            using F = std::decay_t<decltype(f)>;
            const auto& e = chi.entries();
            if constexpr (std::is_same_v<F, LexOrder>) {
                if (e.size() == 1 && e.front().first == f.dim - 1) return e.front().second;
                return std::nullopt;
            } else if constexpr (std::is_same_v<F, ColexOrder>) {
                if (e.size() == 1 && e.front().first == 0) return e.front().second;
                return std::nullopt;
            } else {
                return std::nullopt;
            }
        },
        order.family());
}

XiDescription xi_subgroup(const OrderSpec& order) {
    if (auto* lex = std::get_if<LexOrder>(&order.family())) return XiCyclic{LatticePoint::unit(lex->dim - 1)};
    if (std::holds_alternative<ColexOrder>(order.family())) return XiCyclic{LatticePoint::unit(0)};
    return XiTrivial{};
}

std::size_t enumeration_dim(const OrderSpec& order, const LatticePoint& chi) {
    if (auto d = order.dim()) return *d;
    return std::max<std::size_t>(1, chi.active_dim());
}

std::vector<LatticePoint> box_points(std::size_t dim, std::int64_t radius) {
    std::vector<LatticePoint> out;
    if (radius < 0) return out;
    std::vector<std::int64_t> cur(dim, -radius);
    while (true) {
        out.emplace_back(cur);
        std::size_t k = 0;
        while (k < dim && cur[k] == radius) cur[k++] = -radius;
        if (k == dim) break;
        ++cur[k];
    }
    return out;
}

void sort_by_order(std::vector<LatticePoint>& points, const OrderSpec& order) {
    std::sort(points.begin(), points.end(), [&](const LatticePoint& a, const LatticePoint& b) {
        return compare(a, b, order) == std::strong_ordering::less;
    });
}

std::vector<LatticePoint> brute_interval_points(const LatticePoint& chi, const OrderSpec& order,
                                                std::int64_t box_radius) {
    if (!is_positive(chi, order)) {
        throw std::invalid_argument("brute_interval_points needs a positive character");
    }
    std::vector<LatticePoint> out;
    for (auto& tau : box_points(enumeration_dim(order, chi), box_radius)) {
        if (is_positive(tau, order) && compare(tau, chi, order) == std::strong_ordering::less) {
            out.push_back(std::move(tau));
        }
    }
    sort_by_order(out, order);
    return out;
}

}  // namespace ordtoep
