// Command-line front end: meshes, cochains, polynomial forms, field scenarios
// and the named demonstrations.
//
// Exit codes: 0 pass, 1 check failure, 2 usage error, 3 input parse error.
// Files are written to $EXTCALC_OUT_DIR (default: current directory).

#include "extcalc/cochain.hpp"
#include "extcalc/cohomology.hpp"
#include "extcalc/dec_hodge.hpp"
#include "extcalc/demos.hpp"
#include "extcalc/maxwell.hpp"
#include "extcalc/mesh_io.hpp"
#include "extcalc/metric.hpp"
#include "extcalc/poly_form.hpp"
#include "extcalc/scenario.hpp"
#include "extcalc/svg.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace extcalc;

namespace {

enum Exit { Pass = 0, CheckFailure = 1, UsageError = 2, InputError = 3 };

struct UsageProblem : std::runtime_error {
    using std::runtime_error::runtime_error;
};

fs::path output_dir() {
    const char* env = std::getenv("EXTCALC_OUT_DIR");
    fs::path dir = (env && *env) ? fs::path(env) : fs::current_path();
    fs::create_directories(dir);
    return dir;
}

std::ofstream open_output(const std::string& name) {
    const fs::path path = output_dir() / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    std::cout << "wrote " << path.string() << "\n";
    return out;
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

ExactCochain load_cochain(const std::string& path, const SimplicialComplex& K) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open cochain file '" + path + "'");
    return read_cochain_csv(in, K);
}

/// Oriented fundamental chain matching the parity of a cochain.
Chain whole_manifold(const SimplicialComplex& K, Parity parity) {
    if (parity == Parity::Twisted) return twisted_fundamental_chain(K);
    const auto o = orientability(K);
    if (!o.orientable) throw NonOrientableError("can only integrate twisted top-forms on a non-orientable manifold");
    return fundamental_chain(K, *o.orientation);
}

int mesh_info(const std::string& path) {
    const auto K = read_mesh_file(path);
    std::cout << "dimension " << K.dim() << "\n";
    std::cout << "embedding dimension " << K.embedding_dim() << "\n";
    for (int k = 0; k <= K.dim(); ++k) std::cout << "simplices[" << k << "] " << K.count(k) << "\n";
    std::cout << "euler characteristic " << euler_characteristic(K) << "\n";
    bool orientable = false;
    try {
        orientable = orientability(K).orientable;
        std::cout << "orientable " << (orientable ? "yes" : "no") << "\n";
    } catch (const std::exception& e) {
        std::cout << "orientable n/a (" << e.what() << ")\n";
    }
    if (K.dim() > 0) {
        const auto bd = boundary(twisted_fundamental_chain(K), K);
        std::cout << "boundary simplices " << bd.coefficients.size() << "\n";
    }
    return Pass;
}

int cohomology(const std::string& path, const std::string& expect) {
    const auto K = read_mesh_file(path);
    const auto rep = betti_numbers(K);
    scenario::Table t;
    t.header = {"degree", "betti", "torsion"};
    for (size_t k = 0; k < rep.betti.size(); ++k) {
        std::string tors;
        for (size_t i = 0; i < rep.torsion[k].size(); ++i) tors += (i ? " " : "") + std::to_string(rep.torsion[k][i]);
        t.rows.push_back({std::to_string(k), std::to_string(rep.betti[k]), tors.empty() ? "-" : tors});
    }
    std::cout << "degree  betti  torsion\n";
    for (const auto& r : t.rows) std::cout << r[0] << "       " << r[1] << "      " << r[2] << "\n";
    std::cout << "orientable " << (rep.orientable ? "yes" : "no") << "\n";
    std::cout << "euler characteristic " << rep.euler << "\n";
    auto out = open_output(stem_of(path) + "_cohomology.csv");
    t.write(out);
    if (expect.empty()) return Pass;
    std::vector<int> want;
    std::stringstream ss(expect);
    for (std::string tok; std::getline(ss, tok, ',');) {
        try {
            want.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw UsageProblem("--expect takes comma-separated integers, got '" + expect + "'");
        }
    }
    const bool ok = want == rep.betti;
    std::cout << (ok ? "PASS" : "FAIL") << " betti numbers match " << expect << "\n";
    return ok ? Pass : CheckFailure;
}

int integrate_cmd(const std::string& mesh, const std::string& cochain, bool over_boundary) {
    const auto K = read_mesh_file(mesh);
    const auto w = load_cochain(cochain, K);
    Rational value;
    if (over_boundary) {
        if (w.degree != K.dim() - 1) throw UsageProblem("--boundary needs a cochain of degree dim - 1");
        value = integrate(w, boundary(whole_manifold(K, w.parity), K), K);
    } else {
        if (w.degree != K.dim()) throw UsageProblem("integration over the manifold needs a top-degree cochain (or use --boundary)");
        value = integrate_over_manifold(w, K);
    }
    std::cout << "integral " << to_string(value) << "\n";
    return Pass;
}

int stokes_check(const std::string& mesh, const std::string& cochain) {
    const auto K = read_mesh_file(mesh);
    const auto w = load_cochain(cochain, K);
    if (w.degree != K.dim() - 1) throw UsageProblem("Stokes check needs a cochain of degree dim - 1");
    const auto M = whole_manifold(K, w.parity);
    const auto pair = stokes_pairing_check(w, M, K);
    std::cout << "<dw, M> " << to_string(pair.lhs) << "\n";
    std::cout << "<w, boundary M> " << to_string(pair.rhs) << "\n";
    auto out = open_output(stem_of(cochain) + "_d.csv");
    write_cochain_csv(out, coboundary(w, K));
    const bool ok = pair.lhs == pair.rhs;
    std::cout << (ok ? "PASS" : "FAIL") << " Stokes\n";
    return ok ? Pass : CheckFailure;
}

int hodge_cmd(const std::string& form_text, const std::string& metric_text, const std::string& mesh, const std::string& cochain) {
    if (!mesh.empty()) {
        const auto K = read_mesh_file(mesh);
        const auto w = convert<double>(load_cochain(cochain, K));
        const auto star = hodge_diagonal(w, K, MetricD::euclidean(K.embedding_dim()));
        auto out = open_output(stem_of(cochain) + "_star.csv");
        out << "# primal_degree=" << star.primal_degree << " degree=" << star.degree << " parity=" << to_string(star.parity) << "\n";
        out << "primal_index,value\n";
        for (size_t i = 0; i < star.values.size(); ++i) out << i << "," << scenario::Table::num(star.values[i]) << "\n";
        return Pass;
    }
    if (form_text.empty()) throw UsageProblem("hodge needs --form or --mesh with --cochain");
    const auto w = PolyForm::parse(form_text);
    const auto g = metric_text.empty() ? Metric::euclidean(w.ambient_dim()) : parse_metric(metric_text);
    const auto star = hodge(w, g);
    const auto back = hodge(star, g);
    const int n = g.dim(), p = w.degree();
    const int expected = ((p * (n - p)) % 2 == 0 ? 1 : -1) * g.det_sign();
    std::cout << "*w  = " << star.str() << "\n";
    std::cout << "**w = " << back.str() << "\n";
    const bool ok = back == scale(Rational(expected), w);
    std::cout << (ok ? "PASS" : "FAIL") << " **w = " << expected << " w\n";
    return ok ? Pass : CheckFailure;
}

int scenario_cmd(const std::string& path, scenario::Kind expected, bool svg) {
    const auto cfg = scenario::parse_config_file(path);
    if (cfg.kind != expected) throw UsageProblem("config '" + path + "' describes a different kind of scenario");
    const auto result = scenario::run(cfg);
    for (const auto& m : result.messages) std::cout << m << "\n";
    {
        auto out = open_output(stem_of(path) + ".csv");
        result.table.write(out);
    }
    if (svg) {
        auto out = open_output(stem_of(path) + ".svg");
        svg::write_slice(out, result.grid, cfg.cells[2] / 2, result.vertex_field, result.edge_field, stem_of(path));
    }
    std::cout << (result.passed ? "PASS" : "FAIL") << "\n";
    return result.passed ? Pass : CheckFailure;
}

int lorentz_cmd(const std::string& q_text, const std::vector<std::string>& velocity, const std::string& field, const std::string& metric_text) {
    const auto q = parse_rational(q_text);
    Vector<Rational> V;
    for (const auto& v : velocity) V.push_back(parse_rational(v));
    const auto g = metric_text.empty() ? Metric::minkowski(static_cast<int>(V.size())) : parse_metric(metric_text);
    const auto F = PolyForm::parse(field);
    if (F.degree() != 2 || F.ambient_dim() != g.dim()) throw UsageProblem("field must be a 2-form on the metric's space");
    const auto f = maxwell::lorentz_force(q, V, maxwell::two_form_matrix(F), g);
    auto show = [](const Vector<Rational>& x) {
        std::string s = "(";
        for (size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + to_string(x[i]);
        return s + ")";
    };
    std::cout << "force covector " << show(f.covector) << "\n";
    std::cout << "force vector   " << show(f.vector) << "\n";
    const Rational gv = g.inner(f.vector, V);
    std::cout << "g(f, V) " << to_string(gv) << "\n";
    const bool ok = gv == 0;
    std::cout << (ok ? "PASS" : "FAIL") << " force is orthogonal to the 4-velocity\n";
    return ok ? Pass : CheckFailure;
}

int demo_cmd(const std::string& id) {
    const auto& table = demos::registry();
    if (id == "list") {
        for (const auto& [name, fn] : table) std::cout << name << "\n";
        return Pass;
    }
    std::vector<std::string> ids;
    if (id == "all") {
        for (const auto& [name, fn] : table) ids.push_back(name);
    } else {
        if (!table.count(id)) throw UsageProblem("unknown demo '" + id + "' (try 'demo list')");
        ids.push_back(id);
    }
    bool all_ok = true;
    for (const auto& name : ids) {
        const auto r = demos::run(name);
        std::cout << "== " << name << "\n";
        for (const auto& line : r.lines) std::cout << line << "\n";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3f", r.seconds);
        std::cout << (r.passed ? "PASS " : "FAIL ") << name << " (" << buf << " s)\n";
        all_ok = all_ok && r.passed;
    }
    return all_ok ? Pass : CheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"extcalc: exterior calculus on meshes, polynomial forms and Yee grids"};
    app.require_subcommand(1);
    std::function<int()> action;

    std::string mesh, cochain, expect, form, metric, config, q = "1", field, demo_id;
    std::vector<std::string> velocity;
    bool over_boundary = false, svg = false;

    auto* info = app.add_subcommand("mesh-info", "counts, Euler characteristic and orientability of a mesh");
    info->add_option("mesh", mesh, "mesh file")->required();
    info->callback([&] { action = [&] { return mesh_info(mesh); }; });

    auto* coh = app.add_subcommand("cohomology", "Betti numbers and torsion of a mesh");
    coh->add_option("mesh", mesh, "mesh file")->required();
    coh->add_option("--expect", expect, "expected Betti numbers, e.g. 1,2,1");
    coh->callback([&] { action = [&] { return cohomology(mesh, expect); }; });

    auto* integ = app.add_subcommand("integrate", "integrate a top cochain over the mesh");
    integ->add_option("mesh", mesh, "mesh file")->required();
    integ->add_option("cochain", cochain, "cochain CSV")->required();
    integ->add_flag("--boundary", over_boundary, "integrate a (dim-1)-cochain over the boundary");
    integ->callback([&] { action = [&] { return integrate_cmd(mesh, cochain, over_boundary); }; });

    auto* stokes = app.add_subcommand("stokes-check", "compare <dw, M> with <w, boundary M>");
    stokes->add_option("mesh", mesh, "mesh file")->required();
    stokes->add_option("cochain", cochain, "(dim-1)-cochain CSV")->required();
    stokes->callback([&] { action = [&] { return stokes_check(mesh, cochain); }; });

    auto* hod = app.add_subcommand("hodge", "Hodge star of a polynomial form or a mesh cochain");
    hod->add_option("--form", form, "form text, e.g. 'n=3 p=1; [0]: x1'");
    hod->add_option("--metric", metric, "metric literal, e.g. diag(-1,1,1,1)");
    hod->add_option("--mesh", mesh, "mesh file (diagonal Hodge star)");
    hod->add_option("--cochain", cochain, "cochain CSV on the mesh");
    hod->callback([&] {
        if (!mesh.empty() && cochain.empty()) throw CLI::ValidationError("--mesh needs --cochain");
        action = [&] { return hodge_cmd(form, metric, mesh, cochain); };
    });

    auto add_scenario = [&](const char* name, const char* help, scenario::Kind kind) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("config", config, "scenario config file")->required();
        sub->add_flag("--svg", svg, "also write a field-slice SVG");
        sub->callback([&, kind] { action = [&, kind] { return scenario_cmd(config, kind, svg); }; });
    };
    add_scenario("maxwell-static-e", "electrostatics with Gauss-law probes", scenario::Kind::StaticE);
    add_scenario("maxwell-static-b", "magnetostatics with Ampere-law probes", scenario::Kind::StaticB);
    add_scenario("maxwell-evolve", "leapfrog time evolution with conservation diagnostics", scenario::Kind::Evolve);

    auto* lor = app.add_subcommand("lorentz", "Lorentz force f = q F(., V)");
    lor->add_option("--charge", q, "charge (rational)");
    lor->add_option("--velocity", velocity, "unit timelike 4-velocity components")->required()->expected(1, 16);
    lor->add_option("--field", field, "2-form text, e.g. 'n=4 p=2; [1,0]: 3'")->required();
    lor->add_option("--metric", metric, "metric literal (default Minkowski)");
    lor->callback([&] { action = [&] { return lorentz_cmd(q, velocity, field, metric); }; });

    auto* dem = app.add_subcommand("demo", "run a named demonstration ('list' or 'all' also accepted)");
    dem->add_option("id", demo_id, "demo id")->required();
    dem->callback([&] { action = [&] { return demo_cmd(demo_id); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return Pass;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return UsageError;
    }

    try {
        return action();
    } catch (const UsageProblem& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return UsageError;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return InputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return CheckFailure;
    }
}
