#pragma once

// Exact scalars used throughout the library: GMP rationals and integers,
// plus the few conversions needed to move between exact and float modes.

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace extcalc {

using Rational = mpq_class;
using BigInt = mpz_class;

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

inline Rational make_rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Parses "3", "-3/4" or a finite decimal such as "0.125" or "-2.5e-3" exactly.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    size_t start = 0;
    while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
    s = s.substr(start);
    if (s.empty()) throw ParseError("empty number");
    if (s[0] == '+') s = s.substr(1);

    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rational r;
        if (r.set_str(s, 10) != 0 || r.get_den() == 0) throw ParseError("bad rational '" + s + "'");
        r.canonicalize();
        return r;
    }

    std::string mantissa = s;
    long exponent = 0;
    const auto epos = s.find_first_of("eE");
    if (epos != std::string::npos) {
        mantissa = s.substr(0, epos);
        try {
            exponent = std::stol(s.substr(epos + 1));
        } catch (const std::exception&) {
            throw ParseError("bad exponent in '" + s + "'");
        }
    }
    bool negative = false;
    if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
        negative = mantissa[0] == '-';
        mantissa = mantissa.substr(1);
    }
    std::string digits;
    long frac_digits = 0;
    bool seen_point = false;
    for (char c : mantissa) {
        if (c == '.') {
            if (seen_point) throw ParseError("bad number '" + s + "'");
            seen_point = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            if (seen_point) ++frac_digits;
        } else {
            throw ParseError("bad number '" + s + "'");
        }
    }
    if (digits.empty()) throw ParseError("bad number '" + s + "'");
    BigInt num(digits, 10);
    if (negative) num = -num;
    const long shift = exponent - frac_digits;
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    Rational r = shift < 0 ? Rational(num, scale) : Rational(num * scale);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(10); }
inline std::string to_string(const BigInt& z) { return z.get_str(10); }

inline double to_double(const Rational& r) { return r.get_d(); }
inline double to_double(double d) { return d; }

inline int sign(const Rational& r) { return sgn(r); }
inline int sign(double d) { return (d > 0) - (d < 0); }

/// Exact square root when both numerator and denominator are perfect squares.
inline std::optional<Rational> exact_sqrt(const Rational& r) {
    if (r < 0) return std::nullopt;
    const BigInt& num = r.get_num();
    const BigInt& den = r.get_den();
    if (mpz_perfect_square_p(num.get_mpz_t()) == 0 || mpz_perfect_square_p(den.get_mpz_t()) == 0)
        return std::nullopt;
    BigInt sn, sd;
    mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
    Rational out(sn, sd);
    out.canonicalize();
    return out;
}

inline BigInt floor_int(const Rational& r) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

inline long floor_long(const Rational& r) { return floor_int(r).get_si(); }
inline long floor_long(double d) { return static_cast<long>(std::floor(d)); }

/// Scalar-generic helpers so templates can be instantiated with Rational or double.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static Rational from_rational(const Rational& r) { return r; }
    static bool is_zero(const Rational& r, double = 0.0) { return sgn(r) == 0; }
    static std::string str(const Rational& r) { return to_string(r); }
};

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static double from_rational(const Rational& r) { return r.get_d(); }
    static bool is_zero(double d, double tol = 0.0) { return std::abs(d) <= tol; }
    static std::string str(double d) {
        std::ostringstream os;
        os.precision(17);
        os << d;
        return os.str();
    }
};

template <class S>
S scalar_from(const Rational& r) {
    return ScalarTraits<S>::from_rational(r);
}

template <class S>
S scalar_abs(const S& s) {
    if constexpr (std::is_same_v<S, Rational>) {
        return Rational(abs(s));
    } else {
        return std::abs(s);
    }
}

}  // namespace extcalc
