#pragma once

// Cyclic coefficient groups: the integers and Z/oZ.

#include <cstdint>
#include <span>
#include <string>

namespace apnv {

namespace checked {
std::int64_t add(std::int64_t a, std::int64_t b);
std::int64_t mul(std::int64_t a, std::int64_t b);
std::int64_t neg(std::int64_t a);
} // namespace checked

class CyclicGroup {
public:
    /// The infinite cyclic group, represented as Z itself.
    static CyclicGroup integers() noexcept { return CyclicGroup(0); }
    /// Z/oZ; `order` must be >= 1.
    static CyclicGroup modulo(std::uint64_t order);

    bool is_finite() const noexcept { return order_ != 0; }
    /// 0 for the infinite group.
    std::uint64_t order() const noexcept { return order_; }

    /// Canonical representative of an integer (residue in 0..o-1 when finite).
    std::int64_t canonical(std::int64_t value) const noexcept;
    std::int64_t add(std::int64_t a, std::int64_t b) const;
    std::int64_t neg(std::int64_t a) const;
    /// z-fold sum for z >= 0, inverse of (-z)a otherwise.
    std::int64_t scale(std::int64_t z, std::int64_t a) const;
    /// Signed representative in (-o/2, o/2] for display; identity on Z.
    std::int64_t signed_repr(std::int64_t a) const noexcept;

    std::string str() const;

    friend bool operator==(const CyclicGroup&, const CyclicGroup&) = default;

private:
    explicit CyclicGroup(std::uint64_t order) noexcept : order_(order) {}
    std::uint64_t order_;
};

/// An element tagged with its group; finite-group values are kept canonical.
class GroupElement {
public:
    GroupElement(CyclicGroup group, std::int64_t value)
        : group_(group), value_(group.canonical(value)) {}

    static GroupElement zero(CyclicGroup group) { return {group, 0}; }

    const CyclicGroup& group() const noexcept { return group_; }
    std::int64_t value() const noexcept { return value_; }
    bool is_zero() const noexcept { return value_ == 0; }

    friend bool operator==(const GroupElement&, const GroupElement&) = default;

private:
    CyclicGroup group_;
    std::int64_t value_;
};

/// Group sum; throws UsageError when the operands live in different groups.
GroupElement g_add(const GroupElement& a, const GroupElement& b);
GroupElement g_neg(const GroupElement& a);
GroupElement scalar_mul(std::int64_t z, const GroupElement& a);

/// Sum over places of nu(p) * gamma(p). Both spans are indexed by the same
/// place list; a length mismatch is a usage error.
GroupElement weighted_coeff_sum(std::span<const std::int64_t> nu,
                                std::span<const GroupElement> gamma, CyclicGroup group);

} // namespace apnv
