#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace gridp2p {

/** Signed decimal fixed-point value stored as an integer count of 1/Scale units.
 *
 * Used for every quantity whose sums have to balance exactly (energy, money, and
 * unit prices). Conversions from double round half away from zero; arithmetic
 * between values of the same type is exact.
 */
template <typename Tag, std::int64_t Scale>
class FixedPoint {
public:
    static constexpr std::int64_t kScale = Scale;

    constexpr FixedPoint() = default;

    static constexpr FixedPoint from_raw(std::int64_t raw) {
        FixedPoint v;
        v.raw_ = raw;
        return v;
    }

    static FixedPoint from_double(double value) {
        const double scaled = value * static_cast<double>(Scale);
        if (!std::isfinite(scaled) || std::abs(scaled) > 9.0e18) {
            throw std::out_of_range("fixed-point conversion out of range: " + std::to_string(value));
        }
        return from_raw(std::llround(scaled));
    }

    constexpr std::int64_t raw() const { return raw_; }
    constexpr double to_double() const { return static_cast<double>(raw_) / static_cast<double>(Scale); }
    constexpr bool is_zero() const { return raw_ == 0; }

    constexpr FixedPoint operator-() const { return from_raw(-raw_); }
    constexpr FixedPoint& operator+=(FixedPoint o) { raw_ += o.raw_; return *this; }
    constexpr FixedPoint& operator-=(FixedPoint o) { raw_ -= o.raw_; return *this; }
    friend constexpr FixedPoint operator+(FixedPoint l, FixedPoint r) { return l += r; }
    friend constexpr FixedPoint operator-(FixedPoint l, FixedPoint r) { return l -= r; }
    friend constexpr FixedPoint operator*(FixedPoint l, std::int64_t k) { return from_raw(l.raw_ * k); }

    friend constexpr auto operator<=>(FixedPoint, FixedPoint) = default;
    friend constexpr bool operator==(FixedPoint, FixedPoint) = default;

private:
    std::int64_t raw_ = 0;
};

template <typename Tag, std::int64_t Scale>
constexpr FixedPoint<Tag, Scale> abs(FixedPoint<Tag, Scale> v) {
    return v.raw() < 0 ? -v : v;
}

template <typename Tag, std::int64_t Scale>
constexpr FixedPoint<Tag, Scale> min(FixedPoint<Tag, Scale> l, FixedPoint<Tag, Scale> r) {
    return r < l ? r : l;
}

template <typename Tag, std::int64_t Scale>
constexpr FixedPoint<Tag, Scale> max(FixedPoint<Tag, Scale> l, FixedPoint<Tag, Scale> r) {
    return l < r ? r : l;
}

struct EnergyTag {};
struct MoneyTag {};
struct PriceTag {};

/// Energy in kWh, resolution 1e-9 kWh.
using Energy = FixedPoint<EnergyTag, 1'000'000'000>;
/// Money in cents, resolution 1e-6 cents.
using Money = FixedPoint<MoneyTag, 1'000'000>;
/// Unit price in cents/kWh, resolution 1e-6 cents/kWh.
using Price = FixedPoint<PriceTag, 1'000'000>;

inline Energy kwh(double v) { return Energy::from_double(v); }
inline Money cents(double v) { return Money::from_double(v); }
inline Price cents_per_kwh(double v) { return Price::from_double(v); }

/// price * quantity, rounded half away from zero to the money resolution.
inline Money cost_of(Price price, Energy quantity) {
    const __int128 product = static_cast<__int128>(price.raw()) * quantity.raw();
    const __int128 divisor = Energy::kScale;
    __int128 q = product / divisor;
    const __int128 r = product % divisor;
    if (2 * (r < 0 ? -r : r) >= divisor) {
        q += product < 0 ? -1 : 1;
    }
    return Money::from_raw(static_cast<std::int64_t>(q));
}

}  // namespace gridp2p
