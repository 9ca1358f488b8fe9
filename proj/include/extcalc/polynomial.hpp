#pragma once

// Multivariate polynomials with exact rational coefficients, in variables
// x0, x1, ..., x{n-1}.

#include "rational.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace extcalc {

using Monomial = std::vector<int>;  // exponent per variable

class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(int nvars) : nvars_(nvars) {}

    static Polynomial constant(int nvars, const Rational& c) {
        Polynomial p(nvars);
        p.add_term(Monomial(nvars, 0), c);
        return p;
    }

    static Polynomial variable(int nvars, int i, const Rational& c = 1) {
        Polynomial p(nvars);
        Monomial m(nvars, 0);
        m.at(i) = 1;
        p.add_term(m, c);
        return p;
    }

    int nvars() const noexcept { return nvars_; }
    const std::map<Monomial, Rational>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    void add_term(const Monomial& m, const Rational& c) {
        if (static_cast<int>(m.size()) != nvars_) throw std::invalid_argument("monomial arity mismatch");
        if (sgn(c) == 0) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (sgn(it->second) == 0) terms_.erase(it);
        }
    }

    int total_degree() const {
        int d = 0;
        for (const auto& [m, c] : terms_) {
            int s = 0;
            for (int e : m) s += e;
            d = std::max(d, s);
        }
        return d;
    }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && std::all_of(terms_.begin()->first.begin(),
                                                                    terms_.begin()->first.end(),
                                                                    [](int e) { return e == 0; }));
    }

    Rational constant_term() const {
        auto it = terms_.find(Monomial(nvars_, 0));
        return it == terms_.end() ? Rational(0) : it->second;
    }

    Polynomial& operator+=(const Polynomial& o) {
        check(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        check(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    Polynomial& operator*=(const Rational& s) {
        if (sgn(s) == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, c] : terms_) c *= s;
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
    friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }
    Polynomial operator-() const { return *this * Rational(-1); }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.check(b);
        Polynomial out(a.nvars_);
        Monomial m(a.nvars_);
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                for (int i = 0; i < a.nvars_; ++i) m[i] = ma[i] + mb[i];
                out.add_term(m, ca * cb);
            }
        }
        return out;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    Polynomial derivative(int var) const {
        Polynomial out(nvars_);
        for (const auto& [m, c] : terms_) {
            if (m.at(var) == 0) continue;
            Monomial d = m;
            d[var] -= 1;
            out.add_term(d, c * m[var]);
        }
        return out;
    }

    Polynomial pow(int e) const {
        Polynomial out = constant(nvars_, 1);
        for (int i = 0; i < e; ++i) out = out * *this;
        return out;
    }

    /// Substitutes polynomial expressions (all in the same variables) for each variable.
    Polynomial substitute(const std::vector<Polynomial>& images) const {
        if (static_cast<int>(images.size()) != nvars_) throw std::invalid_argument("substitution arity mismatch");
        const int m = images.empty() ? 0 : images.front().nvars();
        Polynomial out(m);
        // Cache powers of each image.
        std::vector<std::vector<Polynomial>> powers(nvars_);
        for (const auto& [mono, c] : terms_) {
            Polynomial term = constant(m, c);
            for (int i = 0; i < nvars_; ++i) {
                const int e = mono[i];
                if (e == 0) continue;
                auto& pw = powers[i];
                if (pw.empty()) pw.push_back(constant(m, 1));
                while (static_cast<int>(pw.size()) <= e) pw.push_back(pw.back() * images[i]);
                term = term * pw[e];
            }
            out += term;
        }
        return out;
    }

    template <class S>
    S evaluate(const std::vector<S>& point) const {
        if (static_cast<int>(point.size()) != nvars_) throw std::invalid_argument("evaluation arity mismatch");
        S total = S(0);
        for (const auto& [m, c] : terms_) {
            S t = scalar_from<S>(c);
            for (int i = 0; i < nvars_; ++i)
                for (int e = 0; e < m[i]; ++e) t *= point[i];
            total += t;
        }
        return total;
    }

    /// e.g. "3/2*x0^2 - x1 + 4"; "0" for the zero polynomial.
    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        // Highest total degree first, then lexicographically.
        std::vector<std::pair<Monomial, Rational>> ordered(terms_.begin(), terms_.end());
        std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
            int da = 0, db = 0;
            for (int e : a.first) da += e;
            for (int e : b.first) db += e;
            if (da != db) return da > db;
            return a.first > b.first;
        });
        for (const auto& [m, c] : ordered) {
            Rational mag = abs(c);
            if (first) {
                if (c < 0) os << "-";
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            first = false;
            bool any_var = false;
            std::ostringstream vars;
            for (int i = 0; i < nvars_; ++i) {
                if (m[i] == 0) continue;
                if (any_var) vars << "*";
                vars << "x" << i;
                if (m[i] > 1) vars << "^" << m[i];
                any_var = true;
            }
            if (!any_var) {
                os << to_string(mag);
            } else if (mag == 1) {
                os << vars.str();
            } else {
                os << to_string(mag) << "*" << vars.str();
            }
        }
        return os.str();
    }

    /// Parses the format produced by str(); terms may appear in any order.
    static Polynomial parse(std::string_view text, int nvars) {
        Polynomial out(nvars);
        std::string s;
        for (char ch : text)
            if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
        if (s.empty()) throw ParseError("empty polynomial");
        size_t pos = 0;
        while (pos < s.size()) {
            int term_sign = 1;
            while (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
                if (s[pos] == '-') term_sign = -term_sign;
                ++pos;
            }
            size_t end = pos;
            while (end < s.size() && s[end] != '+' && s[end] != '-') {
                // allow exponent signs in decimals like 1e-3
                if ((s[end] == 'e' || s[end] == 'E') && end + 1 < s.size() && (s[end + 1] == '-' || s[end + 1] == '+'))
                    end += 2;
                else
                    ++end;
            }
            const std::string term = s.substr(pos, end - pos);
            if (term.empty()) throw ParseError("dangling sign in polynomial '" + std::string(text) + "'");
            Rational coeff = term_sign;
            Monomial mono(nvars, 0);
            size_t fpos = 0;
            while (fpos <= term.size()) {
                size_t star = term.find('*', fpos);
                if (star == std::string::npos) star = term.size();
                const std::string factor = term.substr(fpos, star - fpos);
                if (factor.empty()) throw ParseError("empty factor in '" + term + "'");
                if (factor[0] == 'x') {
                    const auto caret = factor.find('^');
                    int var = 0, e = 1;
                    try {
                        var = std::stoi(factor.substr(1, caret == std::string::npos ? std::string::npos : caret - 1));
                        if (caret != std::string::npos) e = std::stoi(factor.substr(caret + 1));
                    } catch (const std::exception&) {
                        throw ParseError("bad variable '" + factor + "'");
                    }
                    if (var < 0 || var >= nvars || e < 0) throw ParseError("variable out of range '" + factor + "'");
                    mono[var] += e;
                } else {
                    coeff *= parse_rational(factor);
                }
                fpos = star + 1;
            }
            out.add_term(mono, coeff);
            pos = end;
        }
        return out;
    }

private:
    void check(const Polynomial& o) const {
        if (o.nvars_ != nvars_) throw std::invalid_argument("polynomials over different variable counts");
    }

    int nvars_ = 0;
    std::map<Monomial, Rational> terms_;
};

}  // namespace extcalc
