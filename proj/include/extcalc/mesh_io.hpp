#pragma once

// Line-oriented text formats for meshes and cochains.
//
//   # comment
//   dim 2
//   v 0 0
//   v 1 0
//   v 0 1
//   s 0 1 2
//
// Cochain CSV:
//
//   # degree=1 parity=straight
//   simplex_index,value
//   0,1/2

#include "cochain.hpp"
#include "complex.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace extcalc {

namespace detail {

inline std::string strip_comment(const std::string& line) {
    const auto hash = line.find('#');
    std::string s = hash == std::string::npos ? line : line.substr(0, hash);
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline int parse_int(const std::string& tok, int line) {
    try {
        size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size()) throw ParseError("bad integer '" + tok + "'", line);
        return v;
    } catch (const std::logic_error&) {
        throw ParseError("bad integer '" + tok + "'", line);
    }
}

}  // namespace detail

inline SimplicialComplex read_mesh(std::istream& in) {
    std::string raw;
    int line_no = 0;
    std::optional<int> dim;
    std::vector<std::vector<Rational>> coords;
    std::vector<std::vector<int>> tops;
    std::vector<int> top_lines;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = detail::strip_comment(raw);
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string key;
        ss >> key;
        std::vector<std::string> toks;
        for (std::string t; ss >> t;) toks.push_back(t);
        if (key == "dim") {
            if (toks.size() != 1) throw ParseError("expected 'dim n'", line_no);
            if (dim) throw ParseError("duplicate dim header", line_no);
            dim = detail::parse_int(toks[0], line_no);
            if (*dim < 0) throw ParseError("negative dimension", line_no);
        } else if (key == "v") {
            if (toks.empty()) throw ParseError("vertex without coordinates", line_no);
            std::vector<Rational> p;
            for (const auto& t : toks) {
                try {
                    p.push_back(parse_rational(t));
                } catch (const ParseError& e) {
                    throw ParseError(e.what(), line_no);
                }
            }
            if (!coords.empty() && p.size() != coords.front().size())
                throw ParseError("vertex has " + std::to_string(p.size()) + " coordinates, expected " +
                                     std::to_string(coords.front().size()),
                                 line_no);
            coords.push_back(std::move(p));
        } else if (key == "s") {
            if (!dim) throw ParseError("simplex before 'dim' header", line_no);
            if (static_cast<int>(toks.size()) != *dim + 1)
                throw ParseError("simplex needs " + std::to_string(*dim + 1) + " vertex indices", line_no);
            std::vector<int> s;
            for (const auto& t : toks) s.push_back(detail::parse_int(t, line_no));
            tops.push_back(std::move(s));
            top_lines.push_back(line_no);
        } else {
            throw ParseError("unknown record '" + key + "'", line_no);
        }
    }
    if (!dim) throw ParseError("missing 'dim' header", line_no);
    if (tops.empty()) throw ParseError("mesh has no simplices", line_no);
    for (size_t i = 0; i < tops.size(); ++i)
        for (int v : tops[i])
            if (v < 0 || v >= static_cast<int>(coords.size()))
                throw ParseError("vertex index " + std::to_string(v) + " out of range", top_lines[i]);
    try {
        return SimplicialComplex::build(std::move(coords), tops, *dim);
    } catch (const ComplexError& e) {
        throw ParseError(e.what(), line_no);
    }
}

inline SimplicialComplex read_mesh_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open mesh file '" + path + "'");
    return read_mesh(in);
}

inline void write_mesh(std::ostream& out, const SimplicialComplex& K) {
    out << "dim " << K.dim() << "\n";
    for (int v = 0; v < K.count(0); ++v) {
        out << "v";
        for (const auto& x : K.vertex(v)) out << " " << to_string(x);
        out << "\n";
    }
    for (int t = 0; t < K.count(K.dim()); ++t) {
        auto s = K.simplex(K.dim(), t);
        if (K.top_input_sign(t) < 0 && s.size() >= 2) std::swap(s[0], s[1]);
        out << "s";
        for (int v : s) out << " " << v;
        out << "\n";
    }
}

template <class S>
void write_cochain_csv(std::ostream& out, const Cochain<S>& w) {
    out << "# degree=" << w.degree << " parity=" << to_string(w.parity) << "\n";
    out << "simplex_index,value\n";
    for (size_t i = 0; i < w.values.size(); ++i) out << i << "," << ScalarTraits<S>::str(w.values[i]) << "\n";
}

/// Reads a cochain CSV; indices not listed are zero.
inline ExactCochain read_cochain_csv(std::istream& in, const SimplicialComplex& K) {
    std::string raw;
    int line_no = 0;
    std::optional<int> degree;
    Parity parity = Parity::Straight;
    std::vector<std::pair<int, Rational>> entries;
    std::vector<int> entry_lines;
    bool header_seen = false;
    while (std::getline(in, raw)) {
        ++line_no;
        auto b = raw.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        std::string line = raw.substr(b);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line[0] == '#') {
            std::istringstream ss(line.substr(1));
            for (std::string kv; ss >> kv;) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) continue;
                const std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
                if (k == "degree") degree = detail::parse_int(v, line_no);
                else if (k == "parity") {
                    try {
                        parity = parse_parity(v);
                    } catch (const std::exception& e) {
                        throw ParseError(e.what(), line_no);
                    }
                }
            }
            continue;
        }
        if (!header_seen && line.rfind("simplex_index", 0) == 0) {
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ParseError("expected 'index,value'", line_no);
        const int idx = detail::parse_int(line.substr(0, comma), line_no);
        Rational value;
        try {
            value = parse_rational(line.substr(comma + 1));
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
        entries.emplace_back(idx, value);
        entry_lines.push_back(line_no);
    }
    if (!degree) throw ParseError("missing '# degree=... parity=...' header", line_no);
    if (*degree < 0 || *degree > K.dim()) throw ParseError("degree outside mesh dimension", 1);
    ExactCochain w = ExactCochain::zeros(K, *degree, parity);
    for (size_t i = 0; i < entries.size(); ++i) {
        const auto& [idx, v] = entries[i];
        if (idx < 0 || idx >= K.count(*degree))
            throw ParseError("simplex index " + std::to_string(idx) + " out of range", entry_lines[i]);
        w.values[idx] = v;
    }
    return w;
}

}  // namespace extcalc
