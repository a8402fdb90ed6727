#include "apnv/group.hpp"

#include "apnv/error.hpp"

namespace apnv {

namespace checked {

std::int64_t add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw OverflowError("integer overflow in addition");
    return r;
}

std::int64_t mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw OverflowError("integer overflow in multiplication");
    return r;
}

std::int64_t neg(std::int64_t a) { return mul(a, -1); }

} // namespace checked

CyclicGroup CyclicGroup::modulo(std::uint64_t order) {
    if (order == 0)
        throw UsageError("finite cyclic group needs order >= 1");
    if (order > static_cast<std::uint64_t>(INT64_MAX))
        throw UsageError("group order too large");
    return CyclicGroup(order);
}

std::int64_t CyclicGroup::canonical(std::int64_t value) const noexcept {
    if (!is_finite())
        return value;
    const auto o = static_cast<std::int64_t>(order_);
    std::int64_t r = value % o;
    return r < 0 ? r + o : r;
}

std::int64_t CyclicGroup::add(std::int64_t a, std::int64_t b) const {
    if (!is_finite())
        return checked::add(a, b);
    // Both operands canonical, so the unsigned sum cannot overflow.
    const auto s = static_cast<std::uint64_t>(canonical(a)) + static_cast<std::uint64_t>(canonical(b));
    return static_cast<std::int64_t>(s % order_);
}

std::int64_t CyclicGroup::neg(std::int64_t a) const {
    if (!is_finite())
        return checked::neg(a);
    return canonical(-canonical(a));
}

std::int64_t CyclicGroup::scale(std::int64_t z, std::int64_t a) const {
    if (!is_finite())
        return checked::mul(z, a);
    const auto o = static_cast<std::int64_t>(order_);
    const __int128 r = static_cast<__int128>(canonical(z)) * canonical(a);
    return static_cast<std::int64_t>(r % o);
}

std::int64_t CyclicGroup::signed_repr(std::int64_t a) const noexcept {
    if (!is_finite())
        return a;
    const auto o = static_cast<std::int64_t>(order_);
    const std::int64_t c = canonical(a);
    return c > o / 2 ? c - o : c;
}

std::string CyclicGroup::str() const {
    return is_finite() ? "Z mod " + std::to_string(order_) : "Z";
}

namespace {

void require_same(const GroupElement& a, const GroupElement& b) {
    if (!(a.group() == b.group()))
        throw UsageError("group mismatch: " + a.group().str() + " vs " + b.group().str());
}

} // namespace

GroupElement g_add(const GroupElement& a, const GroupElement& b) {
    require_same(a, b);
    return {a.group(), a.group().add(a.value(), b.value())};
}

GroupElement g_neg(const GroupElement& a) { return {a.group(), a.group().neg(a.value())}; }

GroupElement scalar_mul(std::int64_t z, const GroupElement& a) {
    return {a.group(), a.group().scale(z, a.value())};
}

GroupElement weighted_coeff_sum(std::span<const std::int64_t> nu,
                                std::span<const GroupElement> gamma, CyclicGroup group) {
    if (nu.size() != gamma.size())
        throw UsageError("weighted_coeff_sum: place domains differ");
    GroupElement acc = GroupElement::zero(group);
    for (std::size_t i = 0; i < nu.size(); ++i)
        acc = g_add(acc, scalar_mul(nu[i], gamma[i]));
    return acc;
}

} // namespace apnv
