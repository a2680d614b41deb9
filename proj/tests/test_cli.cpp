#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kit/cli.hpp"
#include "kit/io.hpp"
#include "kit/regions.hpp"

using namespace kit;

namespace {

struct Result {
    int code = 0;
    std::string out, err;
    json report() const { return json::parse(out); }
};

Result call(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    Result r;
    r.code = run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "kitaev_cli_test";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("validate presets and files") {
    const Result r = call({"validate", "--complex", "torus-2x2"});
    CHECK(r.code == 0);
    CHECK(r.report()["valid"] == true);
    CHECK(r.report()["euler"] == 0);
    CHECK(call({"validate", "--complex", "cube"}).report()["euler"] == 2);

    // a swapped entry of t2 breaks the axioms
    json j = complex_to_json(preset("torus-2x2"));
    std::swap(j["t2"][0], j["t2"][1]);
    const std::string path = scratch("bad.json");
    write_text_file(path, j.dump());
    const Result bad = call({"validate", "--complex", path});
    CHECK(bad.code == 1);
    CHECK(bad.report()["valid"] == false);
    CHECK(!bad.report()["violations"].empty());
    CHECK(bad.report()["violations"][0]["axiom"].get<std::string>().size() > 0);
}

TEST_CASE("usage errors") {
    CHECK(call({}).code == 1);
    CHECK(call({"frobnicate"}).code == 1);
    CHECK(call({"validate"}).code == 1);
    CHECK(call({"validate", "--complex", "no-such-preset"}).code == 1);
    CHECK(call({"verify", "--suite", "everything", "--complex", "cube", "--hopf", "z2"}).code == 1);
    CHECK(call({"experiment", "charge", "--complex", "cube", "--hopf", "z2"}).code == 1);
    CHECK(call({"vacuum-dim", "--complex", "cube", "--hopf", "z2", "--tol", "-1"}).code == 1);
    const Result help = call({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("vacuum-dim") != std::string::npos);
}

TEST_CASE("vacuum dimension and numeric failure") {
    const Result r = call({"vacuum-dim", "--complex", "torus-3x3", "--hopf", "z2"});
    CHECK(r.code == 0);
    CHECK(r.report()["dim"] == 4);
    CHECK(r.report()["flat_field_classes"] == 4);
    CHECK(r.report()["seed"] == 1);
    // a gap threshold above the smallest kept singular value is a numeric failure
    CHECK(call({"vacuum-dim", "--complex", "torus-3x3", "--hopf", "z2", "--tol", "0.99"}).code == 2);
    CHECK(call({"vacuum-dim", "--complex", "torus-4x4", "--hopf", "z2"}).code == 1);
}

TEST_CASE("verify suites") {
    const Result r = call({"verify", "--suite", "relations", "--complex", "minimal-sphere", "--hopf", "z2"});
    CHECK(r.code == 0);
    CHECK(r.report()["ok"] == true);
    CHECK(r.report()["residual"].get<double>() < 1e-10);
    for (const char* s : {"loops", "ribbon", "gauge"})
        CHECK(call({"verify", "--suite", s, "--complex", "torus-2x2", "--hopf", "z2"}).code == 0);
}

TEST_CASE("transform writes a valid complex") {
    const std::string path = scratch("dd.json");
    for (const char* op : {"dual", "dual-alt", "mirror", "double", "dual-double"}) {
        CAPTURE(op);
        const Result r = call({"transform", "--op", op, "--in", "cube", "--out", path});
        REQUIRE(r.code == 0);
        const ArrowPresentation q = load_complex(path);
        CHECK(call({"validate", "--complex", path}).code == 0);
        if (std::string(op) == "dual-double") CHECK(build_complex(q).count(2) == build_complex(preset("cube")).total_cells());
    }
    CHECK(call({"transform", "--op", "twist", "--in", "cube"}).code == 1);
}

TEST_CASE("schreier export") {
    const Result dot = call({"schreier", "--complex", "minimal-sphere"});
    CHECK(dot.code == 0);
    CHECK(dot.out.rfind("digraph", 0) == 0);
    const std::string path = scratch("g.graphml");
    CHECK(call({"schreier", "--complex", "minimal-sphere", "--graph", "graphml", "--out", path}).code == 0);
    CHECK(slurp(path).find("graphml") != std::string::npos);
}

TEST_CASE("curve codec") {
    const std::string path = scratch("curve.json");
    write_text_file(path, R"({"base_arrow": 5, "word": "2+ 0- 2+ 0-"})");
    const Result dec = call({"curve", "decode", "--complex", "torus-4x4", "--curve", path});
    REQUIRE(dec.code == 0);
    const std::string raw = scratch("raw.json");
    write_text_file(raw, dec.out);
    const Result enc = call({"curve", "encode", "--complex", "torus-4x4", "--curve", raw});
    CHECK(enc.report()["base_arrow"] == 5);
    CHECK(enc.report()["word"] == "2+ 0- 2+ 0-");
    const Result cls = call({"curve", "classify", "--complex", "torus-4x4", "--word", "2+ 0- 2+ 0-", "--base", "5"});
    CHECK(cls.report()["kind"] == ribbon_kind_name(RibbonKind::Left));
    CHECK(call({"curve", "decode", "--complex", "torus-4x4", "--word", "7x"}).code == 1);
}

TEST_CASE("homotopy plans are replayed") {
    const ArrowPresentation p = preset("torus-4x4");
    const SurfaceComplex cx = build_complex(p);
    const TorusCells t{4, 4, &cx};
    const OpCurve disk = boundary_curves(p, cx, torus_block(t, 1, 1, 2, 2, false)).at(0);
    const std::string path = scratch("disk.json");
    write_text_file(path, op_curve_to_json(disk).dump());
    const Result r = call({"homotopy", "contract", "--complex", "torus-4x4", "--curve", path});
    CHECK(r.code == 0);
    CHECK(r.report()["verified"] == true);
    CHECK(r.report()["proper_throughout"] == true);
    CHECK(r.report()["support"] == r.report()["region"]);
    const MovePlan plan = plan_from_json(r.report());
    CHECK(verify_homotopy(p, disk, trivial_curve(disk.start), plan).ok);

    OpCurve outer, inner;
    for (const auto& b : boundary_curves(p, cx, torus_band(t, 1, true))) {
        if (classify_ribbon(p, b).kind == RibbonKind::Left)
            outer = b;
        else
            inner = inverse(p, b);
    }
    const std::string a = scratch("outer.json"), b = scratch("inner.json");
    write_text_file(a, op_curve_to_json(outer).dump());
    write_text_file(b, op_curve_to_json(inner).dump());
    const Result ann = call({"homotopy", "annulus", "--complex", "torus-4x4", "--curve", a, "--curve2", b});
    CHECK(ann.code == 0);
    CHECK(ann.report()["replay_ok"] == true);

    const Result rect = call({"homotopy", "rectify", "--complex", "torus-4x4", "--word", "2+ 2+ 0- 0- 2- 0+", "--base", "0"});
    CHECK(rect.code == 0);
    CHECK(rect.report()["verified"] == true);
    CHECK(call({"homotopy", "connect", "--complex", "torus-4x4", "--curve", path}).code == 1);
}

TEST_CASE("hopf files") {
    const HopfData s3 = hopf_preset("s3");
    const HopfData back = hopf_from_json(json::parse(hopf_to_json(s3).dump()));
    CHECK(back.dim == 6);
    CHECK((back.antipode - s3.antipode).norm() == 0);
    CHECK((back.haar - s3.haar).norm() < 1e-12);
    CHECK(call({"hopf", "validate", "--hopf", "s3"}).code == 0);
    const std::string path = scratch("dz3.json");
    const Result d = call({"hopf", "double", "--hopf", "z3", "--out", path});
    CHECK(d.code == 0);
    CHECK(d.report()["dim"] == 9);
    CHECK(call({"hopf", "validate", "--hopf", path}).code == 0);
    // a broken antipode fails validation
    json j = hopf_to_json(hopf_preset("z3"));
    j["antipode"][0] = json::array({2.0, 0.0});
    const std::string bad = scratch("bad_hopf.json");
    write_text_file(bad, j.dump());
    CHECK(call({"hopf", "validate", "--hopf", bad}).code == 1);
}

TEST_CASE("holonomy probe report and determinism") {
    const std::string curve = scratch("hc.json"), elem = scratch("elem.json");
    write_text_file(curve, R"({"base_arrow": 0, "word": "2+ 0- 2+"})");
    json coords = json::array();
    for (int i = 0; i < 4; ++i) coords.push_back(json::array({i == 3 ? 1.0 : 0.0, 0.0}));
    write_text_file(elem, json{{"coords", coords}}.dump());
    const std::string r1 = scratch("probe1.json"), r2 = scratch("probe2.json");
    const std::vector<std::string> base{"holonomy", "--complex", "torus-2x2", "--hopf", "z2", "--curve", curve,
                                        "--element", elem, "--seed", "4", "--probe-report"};
    auto args = base;
    args.push_back(r1);
    CHECK(call(args).code == 0);
    args.back() = r2;
    CHECK(call(args).code == 0);
    CHECK(slurp(r1) == slurp(r2));
    const json rep = json::parse(slurp(r1));
    CHECK(rep["seed"] == 4);
    CHECK(rep["probes"].size() == 4);
    // wrong element size
    write_text_file(elem, "[1, 0]");
    CHECK(call({"holonomy", "--complex", "torus-2x2", "--hopf", "z2", "--curve", curve, "--element", elem}).code == 1);
}

TEST_CASE("experiments report residuals") {
    const Result r = call({"experiment", "prop91", "--complex", "torus-2x2", "--hopf", "z2", "--arrows", "0,3"});
    CHECK(r.code == 0);
    CHECK(r.report()["residual"].get<double>() < 1e-9);
    CHECK(r.report()["items"].size() == 16);
    const Result c = call({"experiment", "charge", "--complex", "torus-4x4", "--hopf", "z2"});
    CHECK(c.code == 0);
    CHECK(c.report()["overlaps"].size() == 4);
    const Result again = call({"experiment", "charge", "--complex", "torus-4x4", "--hopf", "z2"});
    CHECK(again.out == c.out);
    const Result text = call({"experiment", "prop91", "--complex", "torus-2x2", "--hopf", "z2", "--arrows", "0",
                              "--format", "text"});
    CHECK(text.out.find("experiment: contractions") != std::string::npos);
}

TEST_CASE("executable exit codes") {
    auto status = [](const std::string& args) {
        const int s = std::system((std::string(KITAEV_BIN) + " " + args + " > /dev/null 2>&1").c_str());
        return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
    };
    CHECK(status("validate --complex torus-2x2") == 0);
    CHECK(status("validate") == 1);
    CHECK(status("vacuum-dim --complex cube --hopf z2") == 0);
    CHECK(status("vacuum-dim --complex torus-2x2 --hopf z2 --tol 0.99") == 2);
}
