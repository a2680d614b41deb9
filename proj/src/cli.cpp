#include "kit/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "kit/io.hpp"
#include "kit/states.hpp"

namespace kit {

namespace {

struct Options {
    std::string complex, hopf, curve, curve2, side = "left", op, in, out, graph = "dot";
    std::string element, suite, action, kind = "ophol", report, format = "json";
    std::optional<std::string> word;
    int base = 0;
    int irrep = -1;
    int probes = 4;
    std::vector<int> arrows;
    std::uint64_t seed = 1;
    bool seed_given = false;
    double tol = 0;
    std::uint64_t mem_cap = kDefaultMemCap;
    int threads = 1;
};

struct Outcome {
    json report;
    int code = 0;
    bool raw = false;  // report is plain text in `text`
    std::string text;
};

double tol_or(const Options& o, double fallback) { return o.tol > 0 ? o.tol : fallback; }
std::uint64_t seed_or(const Options& o, std::uint64_t fallback) { return o.seed_given ? o.seed : fallback; }

void need(const std::string& value, const char* flag) {
    if (value.empty()) throw Error("Usage", std::string(flag) + " is required");
}

ArrowPresentation need_complex(const Options& o) {
    need(o.complex, "--complex");
    return load_complex(o.complex);
}

HopfData need_hopf(const Options& o) {
    need(o.hopf, "--hopf");
    return load_hopf(o.hopf);
}

OpCurve load_curve(const ArrowPresentation& p, const Options& o, const std::string& path) {
    if (!path.empty()) return curve_from_json(p, read_json_file(path));
    if (o.word) {
        const OpCurve c = decode(p, CodedCurve{o.base, parse_word(*o.word)});
        if (!is_valid_curve(p, c)) throw Error("BadCurve", "not an opcurve on " + p.name());
        return c;
    }
    throw Error("Usage", "--curve or --word/--base is required");
}

std::pair<int, int> torus_shape(const ArrowPresentation& p) {
    int n = 0, m = 0;
    char x = 0;
    std::istringstream s(p.name().size() > 6 && p.name().rfind("torus-", 0) == 0 ? p.name().substr(6) : "");
    if (!(s >> n >> x >> m) || x != 'x' || n < 2 || m < 2 || p.size() != 4 * n * m)
        throw Error("Usage", "this experiment needs a torus-NxM preset");
    return {n, m};
}

json suite_json(const SuiteReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"residual", c.residual}, {"ok", c.ok}});
    return {{"suite", r.suite}, {"ok", r.ok}, {"residual", r.max_residual}, {"checks", checks}};
}

json experiment_json(const ExperimentReport& r) {
    json items = json::array();
    for (const auto& [name, v] : r.items) items.push_back({{"name", name}, {"residual", v}});
    json j = {{"experiment", r.experiment}, {"residual", r.residual}, {"tolerance", r.tolerance},
              {"ok", r.ok},                 {"dims", r.dims},         {"seed", r.seed},
              {"items", items}};
    if (r.overlaps.size() > 0) {
        json rows = json::array();
        for (Eigen::Index i = 0; i < r.overlaps.rows(); ++i) rows.push_back(vec_to_json(r.overlaps.row(i).transpose()));
        j["overlaps"] = rows;
    }
    return j;
}

// ---------------------------------------------------------------- subcommands

Outcome cmd_validate(const Options& o) {
    need(o.complex, "--complex");
    std::vector<Violation> bad;
    ArrowPresentation p;
    std::string name = o.complex;
    if (std::filesystem::exists(o.complex)) {
        const json j = read_json_file(o.complex);
        try {
            name = j.value("name", name);
            bad = check_presentation(j.at("n_arrows").get<int>(), j.at("t0").get<Perm>(), j.at("t2").get<Perm>());
        } catch (const json::exception& e) {
            throw Error("BadJson", std::string("complex: ") + e.what());
        }
        if (bad.empty()) p = complex_from_json(j);
    } else {
        p = preset(o.complex);
        name = p.name();
    }
    Outcome res;
    json viol = json::array();
    for (const auto& v : bad) viol.push_back({{"axiom", v.axiom}, {"witness", v.witness}});
    res.report = {{"complex", name}, {"valid", bad.empty()}, {"violations", viol}};
    if (bad.empty()) {
        const SurfaceComplex cx = build_complex(p);
        for (const auto& v : check_complex(p, cx)) res.report["violations"].push_back({{"axiom", v.axiom}, {"witness", v.witness}});
        res.report["valid"] = res.report["violations"].empty();
        res.report["n_arrows"] = p.size();
        res.report["cells"] = {cx.count(0), cx.count(1), cx.count(2)};
        res.report["euler"] = euler_characteristic(p);
        res.report["connected"] = is_connected(p);
        if (is_connected(p)) res.report["genus"] = genus(p);
    }
    res.code = res.report["valid"].get<bool>() ? 0 : 1;
    return res;
}

Outcome cmd_transform(const Options& o) {
    need(o.op, "--op");
    need(o.in, "--in");
    const ArrowPresentation p = load_complex(o.in);
    ArrowPresentation q;
    if (o.op == "dual") q = dual(p);
    else if (o.op == "dual-alt") q = dual_alt(p);
    else if (o.op == "mirror") q = mirror(p);
    else if (o.op == "double") q = double_of(p);
    else if (o.op == "dual-double") q = dual_of_double(p);
    else throw Error("Usage", "unknown --op '" + o.op + "'");
    Outcome res;
    if (o.out.empty()) {
        res.report = complex_to_json(q);
        return res;
    }
    write_text_file(o.out, dump_report(complex_to_json(q)));
    const SurfaceComplex cx = build_complex(q);
    res.report = {{"op", o.op},
                  {"input", p.name()},
                  {"output", q.name()},
                  {"out", o.out},
                  {"n_arrows", q.size()},
                  {"cells", {cx.count(0), cx.count(1), cx.count(2)}}};
    return res;
}

Outcome cmd_schreier(const Options& o) {
    const ArrowPresentation p = need_complex(o);
    Outcome res;
    const std::string text = schreier_export(p, o.graph);
    if (o.out.empty()) {
        res.raw = true;
        res.text = text;
        return res;
    }
    write_text_file(o.out, text);
    res.report = {{"complex", p.name()}, {"graph", o.graph}, {"out", o.out}, {"vertices", p.size()}};
    return res;
}

Outcome cmd_curve(const Options& o) {
    const ArrowPresentation p = need_complex(o);
    const OpCurve c = load_curve(p, o, o.curve);
    Outcome res;
    if (o.action == "decode") {
        res.report = op_curve_to_json(c);
        res.report["end"] = curve_end(p, c);
        res.report["closed"] = is_closed(p, c);
    } else if (o.action == "encode") {
        res.report = coded_curve_to_json(encode(p, c));
    } else {
        const RibbonClass rc = classify_ribbon(p, c);
        res.report = {{"kind", ribbon_kind_name(rc.kind)},
                      {"proper", rc.proper},
                      {"closed", is_closed(p, c)},
                      {"simple", is_simple(p, c)},
                      {"length", c.size()}};
    }
    return res;
}

Outcome cmd_homotopy(const Options& o) {
    const ArrowPresentation p = need_complex(o);
    const SurfaceComplex cx = build_complex(p);
    const OpCurve c = load_curve(p, o, o.curve);
    Outcome res;
    if (o.action == "rectify") {
        const RectifyResult r = rectify(p, c);
        json lassos = json::array();
        for (const auto& l : r.lassos)
            lassos.push_back({{"tail", coded_curve_to_json(encode(p, l.tail))},
                              {"loop", coded_curve_to_json(encode(p, l.loop))}});
        const bool ok = verify_rectify(p, c, r);
        res.report = {{"action", "rectify"},
                      {"ribbon", coded_curve_to_json(encode(p, r.ribbon))},
                      {"lassos", lassos},
                      {"verified", ok}};
        res.code = ok ? 0 : 2;
        return res;
    }
    MovePlan plan;
    OpCurve target = trivial_curve(c.start);
    std::optional<std::vector<int>> region;
    if (o.action == "contract") {
        if (o.side != "left" && o.side != "right") throw Error("Usage", "--side must be left or right");
        const Side side = o.side == "left" ? Side::Left : Side::Right;
        plan = contract_disk(p, c, side);
        region = side_region(p, cx, c, side);
    } else {
        need(o.curve2, "--curve2");
        target = curve_from_json(p, read_json_file(o.curve2));
        plan = o.action == "connect" ? connect_homotopy(p, c, target) : annulus_homotopy(p, c, target);
    }
    const ReplayResult rr = verify_homotopy(p, c, target, plan);
    res.report = plan_to_json(plan);
    res.report["action"] = o.action;
    res.report["replay_ok"] = rr.ok;
    res.report["replay_proper"] = rr.proper_throughout;
    bool ok = rr.ok && rr.support == plan.support;
    if (region) {
        res.report["region"] = *region;
        ok = ok && plan.support == *region;
    }
    res.report["verified"] = ok;
    res.code = ok ? 0 : 2;
    return res;
}

Outcome cmd_hopf(const Options& o) {
    const HopfData h = need_hopf(o);
    const double tol = tol_or(o, 1e-10);
    Outcome res;
    auto summary = [&](const HopfReport& r) {
        json checks = json::array();
        for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"residual", c.residual}, {"ok", c.ok}});
        return json{{"ok", r.ok}, {"residual", r.max_residual}, {"tolerance", tol}, {"checks", checks}};
    };
    if (o.action == "validate") {
        const HopfReport r = validate_hopf(h, tol);
        res.report = summary(r);
        res.report["hopf"] = h.label;
        res.report["dim"] = h.dim;
        res.code = r.ok ? 0 : 1;
        return res;
    }
    const QuasiTriangular qt = drinfeld_double(h);
    json doc = hopf_to_json(qt.hopf);
    doc["r_matrix"] = vec_to_json(qt.r_matrix);
    if (o.out.empty()) {
        res.report = doc;
        return res;
    }
    write_text_file(o.out, dump_report(doc));
    const HopfReport r = validate_hopf(qt.hopf, tol);
    res.report = summary(r);
    res.report["hopf"] = h.label;
    res.report["dim"] = qt.hopf.dim;
    res.report["out"] = o.out;
    res.code = r.ok ? 0 : 2;
    return res;
}

Outcome cmd_holonomy(const Options& o) {
    const Model m(need_complex(o), need_hopf(o));
    const ArrowPresentation& p = m.presentation();
    const OpCurve c = load_curve(p, o, o.curve);
    need(o.element, "--element");
    const json ej = read_json_file(o.element);
    const Vec phi = vec_from_json(ej.is_object() ? ej.at("coords") : ej);
    if (phi.size() != m.ddim())
        throw Error("DimMismatch", "element needs " + std::to_string(m.ddim()) + " coordinates");
    if (o.kind != "ophol" && o.kind != "hol") throw Error("Usage", "--kind must be ophol or hol");
    const ModelOperator op = o.kind == "ophol" ? ophol(m, c, phi) : hol(m, c, phi);
    std::vector<int> reg = curve_edges(m, c);
    if (reg.empty()) reg.push_back(0);
    json probes = json::array();
    std::uint64_t dims = 0;
    for (int k = 0; k < o.probes; ++k) {
        const StateVector psi = StateVector::random(m.dim(), reg, o.seed + k, o.mem_cap);
        const StateVector img = apply(op, psi);
        dims = psi.amps.size();
        probes.push_back({{"seed", o.seed + k}, {"norm", img.norm()}, {"overlap", cplx_to_json(inner(psi, img))}});
    }
    const RibbonClass rc = classify_ribbon(p, c);
    Outcome res;
    res.report = {{"kind", o.kind},
                  {"curve", coded_curve_to_json(encode(p, c))},
                  {"ribbon", ribbon_kind_name(rc.kind)},
                  {"proper", rc.proper},
                  {"closed", is_closed(p, c)},
                  {"edges", reg},
                  {"dims", dims},
                  {"seed", o.seed},
                  {"probes", probes}};
    return res;
}

Outcome cmd_vacuum_dim(const Options& o) {
    const Model m(need_complex(o), need_hopf(o));
    const std::uint64_t seed = seed_or(o, 1);
    const double gap = tol_or(o, 1e-6);
    const VacuumBasis vb = vacuum_basis(m, 4, seed, o.mem_cap);
    const int dim = static_cast<int>(vb.vectors.size());
    Outcome res;
    const bool gap_ok = vb.smallest_kept > gap && vb.largest_dropped < gap;
    res.report = {{"complex", m.presentation().name()},
                  {"hopf", m.algebra().label},
                  {"dim", dim},
                  {"edges", m.edge_count()},
                  {"dims", register_dim(m.dim(), m.edge_count(), o.mem_cap)},
                  {"probes_used", vb.probes_used},
                  {"rank_history", vb.rank_history},
                  {"smallest_kept", vb.smallest_kept},
                  {"largest_dropped", vb.largest_dropped},
                  {"gap_ok", gap_ok},
                  {"seed", seed}};
    bool ok = gap_ok;
    if (const auto table = group_table(m.algebra())) {
        try {
            const long flat = flat_field_classes(m.presentation(), *table);
            res.report["flat_field_classes"] = flat;
            ok = ok && flat == dim;
        } catch (const Error& e) {
            if (e.kind() != "MemoryCap") throw;
        }
    }
    res.report["ok"] = ok;
    res.code = ok ? 0 : 2;
    return res;
}

Outcome cmd_verify(const Options& o) {
    const Model m(need_complex(o), need_hopf(o));
    SuiteReport r;
    double tol = 0;
    std::uint64_t seed = 0;
    if (o.suite == "relations") {
        tol = tol_or(o, 1e-10), seed = seed_or(o, 3);
        r = verify_relations(m, tol, seed);
    } else if (o.suite == "loops") {
        tol = tol_or(o, 1e-9), seed = seed_or(o, 5);
        r = verify_loops(m, tol, seed);
    } else if (o.suite == "ribbon") {
        tol = tol_or(o, 1e-9), seed = seed_or(o, 7);
        r = verify_ribbons(m, tol, seed);
    } else {
        tol = tol_or(o, 1e-9), seed = seed_or(o, 9);
        r = verify_gauge(m, tol, seed);
    }
    Outcome res;
    res.report = suite_json(r);
    res.report["complex"] = m.presentation().name();
    res.report["hopf"] = m.algebra().label;
    res.report["tolerance"] = tol;
    res.report["seed"] = seed;
    res.code = r.ok ? 0 : 2;
    return res;
}

Outcome cmd_experiment(const Options& o) {
    const Model m(need_complex(o), need_hopf(o));
    const ArrowPresentation& p = m.presentation();
    const std::uint64_t seed = seed_or(o, 1);
    ExperimentReport r;
    if (o.action == "prop91" || o.action == "contractions") {
        std::vector<int> arrows = o.arrows;
        if (arrows.empty()) {
            arrows.resize(p.size());
            std::iota(arrows.begin(), arrows.end(), 0);
        }
        for (int a : arrows)
            if (a < 0 || a >= p.size()) throw Error("Usage", "arrow out of range");
        r = verify_contractions(m, arrows, seed, tol_or(o, 1e-9));
    } else if (o.action == "invariance") {
        r = invariance_suite(m, seed, tol_or(o, 1e-8));
    } else if (o.action == "charge") {
        const auto [n, mm] = torus_shape(p);
        const ChargeSetup s = charge_setup(p, n, mm);
        r = experiment_charge(m, s.rho, s.gamma, seed, tol_or(o, 1e-8));
    } else {
        const auto [n, mm] = torus_shape(p);
        const OpCurve rho = proper_left_ribbon(p, torus_arrow(n, mm, 0, 0, 0), torus_arrow(n, mm, 1, 1, 0));
        r = experiment_multiplet(m, rho, o.irrep >= 0 ? std::optional<int>(o.irrep) : std::nullopt, seed,
                                 tol_or(o, 1e-8));
    }
    Outcome res;
    res.report = experiment_json(r);
    res.report["complex"] = p.name();
    res.report["hopf"] = m.algebra().label;
    res.code = r.ok ? 0 : 2;
    return res;
}

bool numeric_kind(const std::string& k) {
    return k == "DegenerateSpectrum" || k == "RankUnstable" || k == "EmptyVacuum" || k == "ReplayFailure" ||
           k == "PlanFailure" || k.rfind("Internal", 0) == 0;
}

void write_text(std::ostream& os, const json& j) {
    if (!j.is_object()) {
        os << j.dump() << "\n";
        return;
    }
    for (const auto& [k, v] : j.items()) os << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Arrow presentations and the Hopf-algebraic Kitaev model", "kitaev"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--seed", o.seed, "random seed")->each([&](const std::string&) { o.seed_given = true; });
    app.add_option("--tol", o.tol, "tolerance override")->check(CLI::PositiveNumber);
    app.add_option("--mem-cap", o.mem_cap, "largest state register in amplitudes");
    app.add_option("--threads", o.threads, "worker threads (evaluation is single threaded)");
    app.add_option("--format", o.format, "report format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--report", o.report, "write the report to this file");

    auto complex_opt = [&](CLI::App* s) { s->add_option("--complex", o.complex, "preset name or complex JSON"); };
    auto hopf_opt = [&](CLI::App* s) { s->add_option("--hopf", o.hopf, "preset name or Hopf JSON"); };
    auto curve_opts = [&](CLI::App* s) {
        s->add_option("--curve", o.curve, "curve JSON");
        s->add_option("--word", o.word, "letters such as \"2+ 0-\"");
        s->add_option("--base", o.base, "base arrow of --word");
    };

    auto* validate = app.add_subcommand("validate", "check the axioms of a complex");
    complex_opt(validate);
    auto* transform = app.add_subcommand("transform", "derived presentations");
    transform->add_option("--op", o.op)->required()->check(
        CLI::IsMember({"dual", "dual-alt", "mirror", "double", "dual-double"}));
    transform->add_option("--in", o.in, "preset name or complex JSON")->required();
    transform->add_option("--out", o.out);
    auto* schreier = app.add_subcommand("schreier", "Schreier graph export");
    complex_opt(schreier);
    schreier->add_option("--graph", o.graph)->check(CLI::IsMember({"dot", "graphml"}));
    schreier->add_option("--out", o.out);
    auto* curve = app.add_subcommand("curve", "curve codec and classification");
    curve->add_option("action", o.action)->required()->check(CLI::IsMember({"encode", "decode", "classify"}));
    complex_opt(curve);
    curve_opts(curve);
    auto* homotopy = app.add_subcommand("homotopy", "ribbon homotopy plans");
    homotopy->add_option("action", o.action)->required()->check(
        CLI::IsMember({"contract", "connect", "annulus", "rectify"}));
    complex_opt(homotopy);
    curve_opts(homotopy);
    homotopy->add_option("--curve2", o.curve2, "target curve JSON");
    homotopy->add_option("--side", o.side)->check(CLI::IsMember({"left", "right"}));
    auto* hopf = app.add_subcommand("hopf", "Hopf algebra checks");
    hopf->add_option("action", o.action)->required()->check(CLI::IsMember({"validate", "double"}));
    hopf_opt(hopf);
    hopf->add_option("--out", o.out);
    auto* holonomy = app.add_subcommand("holonomy", "evaluate a holonomy operator on probes");
    complex_opt(holonomy);
    hopf_opt(holonomy);
    curve_opts(holonomy);
    holonomy->add_option("--element", o.element, "coordinates in D(H)*")->required();
    holonomy->add_option("--probe-report", o.report, "write the probe report to this file");
    holonomy->add_option("--kind", o.kind)->check(CLI::IsMember({"ophol", "hol"}));
    holonomy->add_option("--probes", o.probes)->check(CLI::Range(1, 64));
    auto* vacuum = app.add_subcommand("vacuum-dim", "ground space dimension");
    complex_opt(vacuum);
    hopf_opt(vacuum);
    auto* verify = app.add_subcommand("verify", "operator identity suites");
    verify->add_option("--suite", o.suite)->required()->check(
        CLI::IsMember({"relations", "ribbon", "loops", "gauge"}));
    complex_opt(verify);
    hopf_opt(verify);
    auto* experiment = app.add_subcommand("experiment", "state level experiments");
    experiment->add_option("action", o.action)->required()->check(
        CLI::IsMember({"invariance", "charge", "multiplet", "prop91", "contractions"}));
    complex_opt(experiment);
    hopf_opt(experiment);
    experiment->add_option("--arrows", o.arrows, "arrows for the contraction identities")->delimiter(',');
    experiment->add_option("--irrep", o.irrep, "single charge for multiplet");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage: " << e.what() << "\n";
        return 1;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    Outcome res;
    try {
        if (cmd == "validate") res = cmd_validate(o);
        else if (cmd == "transform") res = cmd_transform(o);
        else if (cmd == "schreier") res = cmd_schreier(o);
        else if (cmd == "curve") res = cmd_curve(o);
        else if (cmd == "homotopy") res = cmd_homotopy(o);
        else if (cmd == "hopf") res = cmd_hopf(o);
        else if (cmd == "holonomy") res = cmd_holonomy(o);
        else if (cmd == "vacuum-dim") res = cmd_vacuum_dim(o);
        else if (cmd == "verify") res = cmd_verify(o);
        else res = cmd_experiment(o);
    } catch (const AxiomError& e) {
        json viol = json::array();
        for (const auto& v : e.violations()) viol.push_back({{"axiom", v.axiom}, {"witness", v.witness}});
        res.report = {{"valid", false}, {"violations", viol}, {"error", e.kind()}};
        res.code = 1;
        err << e.what() << "\n";
    } catch (const Error& e) {
        err << e.what() << "\n";
        return numeric_kind(e.kind()) ? 2 : 1;
    } catch (const json::exception& e) {
        err << "BadJson: " << e.what() << "\n";
        return 1;
    }

    try {
        std::string text;
        if (res.raw) {
            text = res.text;
        } else if (o.format == "text") {
            std::ostringstream s;
            write_text(s, res.report);
            text = s.str();
        } else {
            text = dump_report(res.report);
        }
        if (o.report.empty())
            out << text;
        else
            write_text_file(o.report, text);
    } catch (const Error& e) {
        err << e.what() << "\n";
        return 1;
    }
    return res.code;
}

}  // namespace kit
