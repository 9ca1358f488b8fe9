#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace extcalc {

/// Orientation flavor carried by every form, chain and cochain.
/// Straight (untwisted) objects carry an internal orientation of their
/// submanifolds, twisted ones an external orientation.
enum class Parity { Straight, Twisted };

constexpr Parity operator*(Parity a, Parity b) noexcept {
    return a == b ? Parity::Straight : Parity::Twisted;
}

constexpr Parity flip(Parity p) noexcept {
    return p == Parity::Straight ? Parity::Twisted : Parity::Straight;
}

inline std::string to_string(Parity p) { return p == Parity::Straight ? "straight" : "twisted"; }

inline Parity parse_parity(std::string_view s) {
    if (s == "straight" || s == "untwisted") return Parity::Straight;
    if (s == "twisted") return Parity::Twisted;
    throw std::invalid_argument("unknown parity '" + std::string(s) + "'");
}

}  // namespace extcalc
