#pragma once

// Randomised exact checks of the algebraic identities of the exterior
// calculus on polynomial forms.

#include "poly_form.hpp"
#include "random.hpp"

#include <functional>
#include <string>
#include <vector>

namespace extcalc {

struct IdentityTally {
    std::string name;
    int checks = 0;
    int failures = 0;
    std::string first_failure;
};

namespace detail {

inline int sign_pow(int e) { return e % 2 == 0 ? 1 : -1; }


}  // namespace detail

/// Each identity is checked `count` times on random forms in dimension <= 5.
inline std::vector<IdentityTally> run_identity_suite(int count = 1000, unsigned long seed = 20240601) {
    random::Rng rng(seed);
    using random::uniform_int;
    std::vector<IdentityTally> out;
    auto run = [&](const std::string& name, const std::function<std::optional<std::string>()>& check) {
        IdentityTally t{name, 0, 0, {}};
        for (int i = 0; i < count; ++i) {
            ++t.checks;
            auto failure = check();
            if (failure) {
                if (t.failures == 0) t.first_failure = *failure;
                ++t.failures;
            }
        }
        out.push_back(std::move(t));
    };

    run("wedge antisymmetry", [&]() -> std::optional<std::string> {
        const int n = uniform_int(rng, 1, 5);
        const int p = uniform_int(rng, 0, n), q = uniform_int(rng, 0, n - p);
        const auto a = random::form(rng, n, p, random::parity(rng));
        const auto b = random::form(rng, n, q, random::parity(rng));
        const auto lhs = wedge(a, b);
        const auto rhs = scale(Rational(detail::sign_pow(p * q)), wedge(b, a));
        if (lhs == rhs) return std::nullopt;
        return "a=" + a.str() + " b=" + b.str();
    });

    run("d d = 0", [&]() -> std::optional<std::string> {
        const int n = uniform_int(rng, 1, 5);
        const int p = uniform_int(rng, 0, n);
        const auto a = random::form(rng, n, p, random::parity(rng), 3);
        if (exterior_derivative(exterior_derivative(a)).is_zero()) return std::nullopt;
        return "a=" + a.str();
    });

    run("Leibniz rule", [&]() -> std::optional<std::string> {
        const int n = uniform_int(rng, 1, 5);
        const int p = uniform_int(rng, 0, n), q = uniform_int(rng, 0, n - p);
        const auto a = random::form(rng, n, p, random::parity(rng));
        const auto b = random::form(rng, n, q, random::parity(rng));
        const auto lhs = exterior_derivative(wedge(a, b));
        const auto rhs = add(wedge(exterior_derivative(a), b),
                             scale(Rational(detail::sign_pow(p)), wedge(a, exterior_derivative(b))));
        if (lhs == rhs) return std::nullopt;
        return "a=" + a.str() + " b=" + b.str();
    });

    run("pullback commutes with d", [&]() -> std::optional<std::string> {
        const int m = uniform_int(rng, 1, 4), n = uniform_int(rng, 1, 4);
        const int p = uniform_int(rng, 0, n);
        const auto w = random::form(rng, n, p, random::parity(rng));
        const auto phi = random::map(rng, m, n);
        if (pullback(phi, exterior_derivative(w)) == exterior_derivative(pullback(phi, w))) return std::nullopt;
        return "w=" + w.str();
    });

    run("interior product antiderivation", [&]() -> std::optional<std::string> {
        const int n = uniform_int(rng, 1, 5);
        const int p = uniform_int(rng, 0, n), q = uniform_int(rng, 0, n - p);
        if (p + q == 0) return std::nullopt;
        const auto a = random::form(rng, n, p, random::parity(rng));
        const auto b = random::form(rng, n, q, random::parity(rng));
        const auto v = random::vector_field(rng, n);
        const auto lhs = interior_product(v, wedge(a, b));
        // Interior products of 0-forms vanish, so their terms are dropped.
        PolyForm rhs(n, p + q - 1, lhs.parity());
        if (p > 0) rhs = add(rhs, wedge(interior_product(v, a), b));
        if (q > 0) rhs = add(rhs, scale(Rational(detail::sign_pow(p)), wedge(a, interior_product(v, b))));
        if (lhs == rhs) return std::nullopt;
        return "a=" + a.str() + " b=" + b.str();
    });

    run("interior product squares to zero", [&]() -> std::optional<std::string> {
        const int n = uniform_int(rng, 2, 5);
        const int p = uniform_int(rng, 2, n);
        const auto a = random::form(rng, n, p, random::parity(rng));
        const auto v = random::vector_field(rng, n);
        if (interior_product(v, interior_product(v, a)).is_zero()) return std::nullopt;
        return "a=" + a.str();
    });

    run("Hodge double dual", [&]() -> std::optional<std::string> {
        const int n = uniform_int(rng, 1, 5);
        const bool lorentzian = n >= 2 && uniform_int(rng, 0, 1) == 1;
        const auto g = random::metric(rng, n, lorentzian);
        const int p = uniform_int(rng, 0, n);
        const auto a = random::form(rng, n, p, random::parity(rng));
        const int expected = detail::sign_pow(p * (n - p)) * g.det_sign();
        if (hodge(hodge(a, g), g) == scale(Rational(expected), a)) return std::nullopt;
        return "a=" + a.str() + " g=" + metric_literal(g);
    });

    return out;
}

}  // namespace extcalc
