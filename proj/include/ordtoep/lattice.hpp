#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace ordtoep {

/// Finitely supported integer vector: a character of T^d or T^infinity.
///
/// Stored sparsely as (coordinate, exponent) pairs sorted by coordinate with
/// no zero exponents, so structural equality is group equality.
class LatticePoint {
public:
    using Entry = std::pair<std::size_t, std::int64_t>;

    LatticePoint() = default;
    LatticePoint(std::initializer_list<std::int64_t> dense);
    explicit LatticePoint(const std::vector<std::int64_t>& dense);

    static LatticePoint from_entries(std::vector<Entry> entries);
    static LatticePoint unit(std::size_t coord, std::int64_t value = 1);

    std::int64_t operator[](std::size_t coord) const;
    const std::vector<Entry>& entries() const noexcept { return entries_; }

    bool is_zero() const noexcept { return entries_.empty(); }
    /// One past the highest nonzero coordinate; 0 for the zero point.
    std::size_t active_dim() const noexcept;
    std::int64_t sup_norm() const noexcept;
    std::vector<std::int64_t> dense(std::size_t min_len = 0) const;
    std::string to_string() const;

    LatticePoint operator-() const;
    friend LatticePoint operator+(const LatticePoint& a, const LatticePoint& b);
    friend LatticePoint operator-(const LatticePoint& a, const LatticePoint& b);
    LatticePoint& operator+=(const LatticePoint& other);
    LatticePoint scaled(std::int64_t k) const;

    friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
    /// Structural order for use as a map key. Not a group order.
    friend std::strong_ordering operator<=>(const LatticePoint& a, const LatticePoint& b);

private:
    std::vector<Entry> entries_;
};

void to_json(nlohmann::json& j, const LatticePoint& p);
void from_json(const nlohmann::json& j, LatticePoint& p);

/// Lexicographic order on Z^d: first nonzero coordinate decides.
struct LexOrder {
    std::size_t dim;
    friend bool operator==(const LexOrder&, const LexOrder&) = default;
};

/// Order on finitely supported Z^infinity: the last nonzero coordinate decides.
struct ColexOrder {
    friend bool operator==(const ColexOrder&, const ColexOrder&) = default;
};

/// Archimedean order on Z^2 by the sign of alpha*x0 + x1 with alpha irrational.
///
/// alpha is held as the rational approximant num/den with den >= 10^12, and
/// decisions are made in exact integer arithmetic on num*x0 + den*x1. The
/// approximant agrees with the irrational order for every point whose
/// coordinates are below den in magnitude; ties beyond that range fall back
/// to lexicographic order.
struct WeightOrder {
    std::int64_t alpha_num;
    std::int64_t alpha_den;
    friend bool operator==(const WeightOrder&, const WeightOrder&) = default;
};

class OrderSpec {
public:
    using Family = std::variant<LexOrder, ColexOrder, WeightOrder>;

    static OrderSpec lex(std::size_t dim);
    static OrderSpec colex();
    static OrderSpec weight(std::int64_t alpha_num, std::int64_t alpha_den);
    /// Weight order with alpha = sqrt(radicand), radicand not a perfect square.
    static OrderSpec weight_sqrt(std::int64_t radicand);

    const Family& family() const noexcept { return family_; }
    /// Dimension of the lattice, or nullopt for the unbounded colex family.
    std::optional<std::size_t> dim() const noexcept;
    std::string name() const;

    /// Throws DimensionError when p has support outside the order's lattice.
    void check_point(const LatticePoint& p) const;

    friend bool operator==(const OrderSpec&, const OrderSpec&) = default;

private:
    explicit OrderSpec(Family f) : family_(f) {}
    Family family_;
};

void to_json(nlohmann::json& j, const OrderSpec& order);
/// Throws ConfigError on unknown families or invalid parameters.
OrderSpec order_from_json(const nlohmann::json& j);

std::strong_ordering compare(const LatticePoint& x, const LatticePoint& y, const OrderSpec& order);
/// Membership in the positive cone, identity included.
bool is_positive(const LatticePoint& x, const OrderSpec& order);

/// Character index: #{tau in T : tau < chi} for positive chi, extended to the
/// group by ind(-chi) = -ind(chi). nullopt when chi has no index.
std::optional<std::int64_t> ind_character(const LatticePoint& chi, const OrderSpec& order);

struct XiTrivial {};
struct XiCyclic {
    LatticePoint generator;
};
using XiDescription = std::variant<XiTrivial, XiCyclic>;

/// The subgroup of characters that have an index.
XiDescription xi_subgroup(const OrderSpec& order);

/// Dimension of the box used when enumerating lattice points for this order
/// around chi (colex uses the support of chi, which suffices for points below it).
std::size_t enumeration_dim(const OrderSpec& order, const LatticePoint& chi);

/// All lattice points of the sup-norm box of the given radius and dimension.
std::vector<LatticePoint> box_points(std::size_t dim, std::int64_t radius);

/// Every tau with 0 <= tau < chi and sup-norm at most box_radius, ascending.
std::vector<LatticePoint> brute_interval_points(const LatticePoint& chi, const OrderSpec& order,
                                                std::int64_t box_radius);

/// Sorts points ascending in the given order.
void sort_by_order(std::vector<LatticePoint>& points, const OrderSpec& order);

}  // namespace ordtoep
