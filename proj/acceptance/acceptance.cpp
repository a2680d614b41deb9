#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "kit/cli.hpp"
#include "kit/io.hpp"
#include "kit/regions.hpp"
#include "kit/states.hpp"

using namespace kit;

namespace {

// pinned tolerances and budgets
constexpr double kMutationRate = 0.95;
constexpr int kMutations = 200;
constexpr int kCodecWords = 1000;
constexpr int kRibbonCurves = 1000;
constexpr double kRelationTol = 1e-10;
constexpr double kHolonomyTol = 1e-9;
constexpr double kVacuumGap = 1e-6;
constexpr double kInvarianceTol = 1e-8;
constexpr double kChargeTol = 1e-8;
constexpr int kMinDisks = 5;
constexpr int kRectifyCurves = 100;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

std::string secs(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2fs", x);
    return buf;
}

bool report(int id, const char* title, double budget, const std::function<void(Verdict&)>& body) {
    Verdict v;
    const auto t0 = Clock::now();
    try {
        body(v);
    } catch (const std::exception& e) {
        v.pass = false;
        v.detail << " [exception: " << e.what() << "]";
    }
    const double t = since(t0);
    if (budget > 0 && t >= budget) {
        v.pass = false;
        v.detail << " [over budget " << secs(budget) << "]";
    }
    std::printf("%s criterion %2d %-24s %s%s\n", v.pass ? "PASS" : "FAIL", id, title, secs(t).c_str(),
                v.detail.str().c_str());
    std::fflush(stdout);
    return v.pass;
}

std::vector<std::string> combinatorial_presets() {
    std::vector<std::string> out{"minimal-sphere", "cube"};
    for (int n = 2; n <= 4; ++n)
        for (int m = 2; m <= 4; ++m) out.push_back("torus-" + std::to_string(n) + "x" + std::to_string(m));
    return out;
}

PresentationMap map_by(const ArrowPresentation& src, const ArrowPresentation& dst, const Perm& f) {
    return PresentationMap{src, dst, f};
}

// ---------------------------------------------------------------- 1

void combinatorial(Verdict& v) {
    for (const auto& name : combinatorial_presets()) {
        const ArrowPresentation p = preset(name);
        const bool ok = check_presentation(p.size(), p.perm(0), p.perm(2)).empty() &&
                        check_complex(p, build_complex(p)).empty();
        v.require(ok, name + " axioms");
        const int want = name.rfind("torus", 0) == 0 ? 0 : 2;
        v.require(euler_characteristic(p) == want, name + " euler");
    }
    std::mt19937_64 rng(2024);
    const auto names = combinatorial_presets();
    int named = 0;
    for (int it = 0; it < kMutations; ++it) {
        const ArrowPresentation p = preset(names[it % names.size()]);
        Perm t0 = p.perm(0), t2 = p.perm(2);
        Perm& target = (it / names.size()) % 2 ? t2 : t0;
        std::uniform_int_distribution<int> pick(0, p.size() - 1);
        int i = pick(rng), j = pick(rng);
        while (j == i) j = pick(rng);
        std::swap(target[i], target[j]);
        const auto viol = check_presentation(p.size(), t0, t2);
        bool has_name = false;
        for (const auto& x : viol) has_name = has_name || !x.axiom.empty();
        named += has_name;
    }
    const double rate = static_cast<double>(named) / kMutations;
    v.detail << " presets=" << names.size() << " mutations flagged " << named << "/" << kMutations;
    v.require(rate >= kMutationRate, "mutation rate");
}

// ---------------------------------------------------------------- 2

void transforms(Verdict& v) {
    int checked = 0;
    for (const auto& name : preset_names()) {
        const ArrowPresentation p = preset(name);
        v.require(check_isomorphism(map_by(dual(dual(p)), p, p.perm(1))), name + " dual twice");
        v.require(check_isomorphism(map_by(dual(p), dual_alt(p), p.perm(1))), name + " dual vs alt");
        v.require(check_isomorphism(map_by(dual_alt(p), swapped(p), p.perm(2))), name + " alt vs swapped");
        v.require(check_isomorphism(map_by(inverted(p), mirror(p), p.perm(0))), name + " inverted vs mirror");
        v.require(check_isomorphism(delta_iso(p)), name + " delta");
        v.require(check_isomorphism(mu_iso(p)), name + " mu");
        const ArrowPresentation d = double_of(p);
        bool ok = d.size() == 4 * p.size();
        for (int x = 0; x < d.size(); ++x) {
            const DoubleArrow u = DoubleArrow::unpack(x);
            ok = ok && d.orbit_size(2, x) == 4;
            ok = ok && DoubleArrow::unpack(d.t1(x)) == DoubleArrow{u.base, u.kind, -u.sign};
            if (u.sign < 0) ok = ok && d.t0(d.t0(d.t0(d.t0(x)))) == x;
        }
        v.require(ok, name + " double");
        const ArrowPresentation dd = dual_of_double(p);
        v.require(build_complex(dd).count(2) == build_complex(p).total_cells(), name + " dual of double faces");
        ++checked;
    }
    v.detail << " presets=" << checked;
}

// ---------------------------------------------------------------- 3

std::vector<Letter> random_letters(std::mt19937_64& rng, int len, int mode) {
    std::uniform_int_distribution<int> any(0, 3), coin(0, 1);
    std::vector<Letter> w;
    for (int i = 0; i < len; ++i) {
        if (mode == 0) w.push_back(static_cast<Letter>(any(rng)));
        else if (mode == 1) w.push_back(coin(rng) ? Letter::T2 : Letter::T0inv);
        else w.push_back(coin(rng) ? Letter::T2inv : Letter::T0);
    }
    return w;
}

void codec(Verdict& v) {
    std::mt19937_64 rng(31);
    long trips = 0;
    for (const auto& name : preset_names()) {
        const ArrowPresentation p = preset(name);
        std::uniform_int_distribution<int> len(0, 64), base(0, p.size() - 1);
        for (int it = 0; it < kCodecWords; ++it) {
            const CodedCurve c{base(rng), random_letters(rng, len(rng), 0)};
            const OpCurve curve = decode(p, c);
            const CodedCurve back = encode(p, curve);
            if (!is_valid_curve(p, curve) || back.base != c.base || back.word != c.word ||
                parse_word(word_string(c.word)) != c.word) {
                v.require(false, name + " round trip");
                return;
            }
            ++trips;
        }
    }
    const auto names = preset_names();
    int agree = 0, ribbons = 0;
    for (int it = 0; it < kRibbonCurves; ++it) {
        const ArrowPresentation p = preset(names[it % names.size()]);
        std::uniform_int_distribution<int> len(1, 20), base(0, p.size() - 1), mode(0, 2);
        const OpCurve c = decode(p, CodedCurve{base(rng), random_letters(rng, len(rng), mode(rng))});
        const bool by_word = word_ribbon_kind(encode(p, c).word) != RibbonKind::None;
        agree += by_word == geometric_ribbon(p, c);
        ribbons += by_word;
    }
    v.detail << " round trips=" << trips << " ribbon agreement " << agree << "/" << kRibbonCurves << " (ribbons "
             << ribbons << ")";
    v.require(agree == kRibbonCurves, "ribbon agreement");
}

// ---------------------------------------------------------------- 4, 5

void suite_grid(Verdict& v, const std::vector<std::pair<std::string, std::string>>& grid,
                const std::vector<std::function<SuiteReport(const Model&)>>& suites, double tol) {
    double worst = 0;
    int checks = 0;
    for (const auto& [cx, h] : grid) {
        const Model m(preset(cx), hopf_preset(h));
        for (const auto& run_suite : suites) {
            const SuiteReport r = run_suite(m);
            worst = std::max(worst, r.max_residual);
            checks += static_cast<int>(r.checks.size());
            v.require(r.ok, h + "/" + cx + " " + r.suite);
        }
    }
    v.detail << " checks=" << checks << " max residual " << sci(worst) << " < " << sci(tol);
    v.require(worst < tol, "residual");
}

void relations(Verdict& v) {
    std::vector<std::pair<std::string, std::string>> grid;
    for (const char* h : {"z2", "z3", "s3"})
        for (const char* cx : {"minimal-sphere", "torus-2x2"}) grid.emplace_back(cx, h);
    suite_grid(v, grid, {[](const Model& m) { return verify_relations(m, kRelationTol); }}, kRelationTol);
}

const std::vector<std::function<SuiteReport(const Model&)>> kHolonomySuites{
    [](const Model& m) { return verify_loops(m, kHolonomyTol); },
    [](const Model& m) { return verify_ribbons(m, kHolonomyTol); }};

void holonomy(Verdict& v) {
    const auto t0 = Clock::now();
    suite_grid(v, {{"minimal-sphere", "z2"}, {"cube", "z2"}, {"torus-2x2", "z2"}, {"torus-3x3", "z2"}},
               kHolonomySuites, kHolonomyTol);
    const double tz2 = since(t0);
    v.detail << " (z2 " << secs(tz2) << ");";
    v.require(tz2 < 120.0, "z2 budget");
    suite_grid(v, {{"minimal-sphere", "s3"}, {"torus-2x2", "s3"}}, kHolonomySuites, kHolonomyTol);
}

// ---------------------------------------------------------------- 6

struct Lattice {
    ArrowPresentation p;
    SurfaceComplex cx;
    TorusCells t;
    explicit Lattice(int n) : p(torus(n, n)), cx(build_complex(p)), t{n, n, &cx} {}
};

bool plan_ok(const ArrowPresentation& p, const OpCurve& from, const OpCurve& to, const MovePlan& plan,
             const std::vector<int>& region) {
    const ReplayResult r = verify_homotopy(p, from, to, plan);
    return r.ok && r.proper_throughout && plan.proper_throughout && r.support == region && plan.support == region;
}

int connect_configurations(Verdict& v, const Lattice& L, std::uint64_t seed) {
    const OpCurve target = curve_from_word(L.p, L.t.arrow(0, 1, 0), "2+ 0- 2+ 0- 2+ 0-");
    std::mt19937_64 rng(seed);
    int tested = 0;
    for (int trial = 0; trial < 60 && tested < kMinDisks; ++trial) {
        OpCurve cur = target;
        std::vector<int> swept;
        const int k = std::uniform_int_distribution<int>(1, 6)(rng);
        for (int s = 0; s < k; ++s) {
            std::vector<HomotopyMove> cands;
            for (int pos = 0; pos < static_cast<int>(cur.size()); ++pos) {
                const DoubleArrow u = DoubleArrow::unpack(cur.arrows[pos]);
                if (u.kind != 2 || u.sign < 0) continue;
                const int a = L.p.t1(u.base);
                cands.push_back({MoveKind::LambdaRelax, pos, a, false});
                cands.push_back({MoveKind::KappaContract, pos, a, false});
            }
            std::shuffle(cands.begin(), cands.end(), rng);
            bool moved = false;
            for (const auto& mv : cands) {
                OpCurve next;
                try {
                    next = apply_move(L.p, cur, mv);
                } catch (const Error&) {
                    continue;
                }
                if (!is_proper(L.p, next)) continue;
                const auto sup = move_support(L.cx, mv);
                bool fresh = true;
                for (int x : sup) fresh = fresh && std::find(swept.begin(), swept.end(), x) == swept.end();
                if (!fresh) continue;
                swept.insert(swept.end(), sup.begin(), sup.end());
                cur = next;
                moved = true;
                break;
            }
            if (!moved) break;
        }
        std::sort(swept.begin(), swept.end());
        if (cur == target) continue;
        MovePlan plan;
        try {
            plan = connect_homotopy(L.p, cur, target);
        } catch (const Error&) {
            // swept cells that do not form a disk are not a connect configuration
            if (region_euler(L.cx, swept) != 1) continue;
            throw;
        }
        v.require(plan_ok(L.p, cur, target, plan, swept), "connect plan");
        ++tested;
    }
    return tested;
}

void homotopy(Verdict& v) {
    int disks = 0;
    for (auto [n, w, h] : std::vector<std::array<int, 3>>{{4, 2, 2}, {4, 1, 2}, {5, 3, 3}, {5, 2, 3}, {5, 3, 2}}) {
        const Lattice L(n);
        const auto region = torus_block(L.t, 1, 0, w, h, false);
        const OpCurve rho = boundary_curves(L.p, L.cx, region).at(0);
        v.require(side_region(L.p, L.cx, rho, Side::Left) == region, "audited region");
        v.require(plan_ok(L.p, rho, trivial_curve(rho.start), contract_disk(L.p, rho, Side::Left), region),
                  "contract left");
        ++disks;
    }
    for (auto [n, w, h] : std::vector<std::array<int, 3>>{{4, 2, 2}, {5, 3, 3}, {5, 1, 3}}) {
        const Lattice L(n);
        const auto block = torus_block(L.t, 0, 1, w, h, true);
        const OpCurve rho = boundary_curves(L.p, L.cx, region_complement(L.cx, block)).at(0);
        v.require(plan_ok(L.p, rho, trivial_curve(rho.start), contract_disk(L.p, rho, Side::Right), block),
                  "contract right");
        ++disks;
    }
    int connects = 0;
    connects += connect_configurations(v, Lattice(4), 17);
    connects += connect_configurations(v, Lattice(5), 19);
    int annuli = 0;
    {
        const Lattice L(5);
        for (auto [o, w, ii, iw] : std::vector<std::array<int, 4>>{{1, 3, 2, 1}, {0, 4, 1, 2}}) {
            const auto outer = torus_block(L.t, o, o, w, w, false);
            const auto inner = torus_block(L.t, ii, ii, iw, iw, false);
            const OpCurve r1 = boundary_curves(L.p, L.cx, outer).at(0), r2 = boundary_curves(L.p, L.cx, inner).at(0);
            v.require(plan_ok(L.p, r1, r2, annulus_homotopy(L.p, r1, r2), region_minus(outer, inner)), "annulus");
            ++annuli;
        }
    }
    for (int n : {4, 5}) {
        const Lattice L(n);
        const auto band = torus_band(L.t, 1, true);
        OpCurve r1, r2;
        for (const auto& b : boundary_curves(L.p, L.cx, band)) {
            if (classify_ribbon(L.p, b).kind == RibbonKind::Left) r1 = b;
            else r2 = inverse(L.p, b);
        }
        v.require(plan_ok(L.p, r1, r2, annulus_homotopy(L.p, r1, r2), band), "band annulus");
        ++annuli;
    }
    const ArrowPresentation p = torus(4, 4);
    std::mt19937_64 rng(23);
    int rectified = 0;
    std::uniform_int_distribution<int> letter(0, 3), base(0, p.size() - 1), len(1, 16);
    for (int it = 0; it < kRectifyCurves; ++it) {
        CodedCurve c{base(rng), {}};
        const int l = len(rng);
        for (int k = 0; k < l; ++k) c.word.push_back(static_cast<Letter>(letter(rng)));
        const OpCurve g = decode(p, c);
        rectified += verify_rectify(p, g, rectify(p, g));
    }
    v.detail << " disks=" << disks << " connect=" << connects << " annuli=" << annuli << " rectify=" << rectified
             << "/" << kRectifyCurves;
    v.require(disks >= kMinDisks && connects >= kMinDisks, "configuration count");
    v.require(rectified == kRectifyCurves, "rectify certificates");
}

// ---------------------------------------------------------------- 7

void vacuum(Verdict& v) {
    struct Case {
        const char* cx;
        const char* h;
        int want;
        double budget;
    };
    for (const Case& c : {Case{"cube", "z2", 1, 10.0}, Case{"torus-2x2", "z2", 4, 10.0}, Case{"torus-3x3", "z2", 4, 10.0},
                          Case{"torus-2x2", "z3", 9, 10.0}, Case{"torus-2x2", "s3", 8, 120.0}}) {
        const auto t0 = Clock::now();
        const std::string tag = std::string(c.h) + "/" + c.cx;
        const Model m(preset(c.cx), hopf_preset(c.h));
        const VacuumBasis vb = vacuum_basis(m);
        const int dim = static_cast<int>(vb.vectors.size());
        const long flat = flat_field_classes(m.presentation(), *group_table(m.algebra()));
        const double t = since(t0);
        v.detail << " " << tag << "=" << dim << " (oracle " << flat << ", gap " << sci(vb.smallest_kept) << "/"
                 << sci(vb.largest_dropped) << ", " << secs(t) << ")";
        v.require(dim == c.want, tag + " dimension");
        v.require(flat == c.want, tag + " flat-field oracle");
        v.require(vb.smallest_kept > kVacuumGap && vb.largest_dropped < kVacuumGap, tag + " singular gap");
        v.require(t < c.budget, tag + " budget");
    }
}

// ---------------------------------------------------------------- 8, 9

void invariance(Verdict& v) {
    double worst = 0;
    int items = 0;
    for (auto [cx, h] : std::vector<std::pair<const char*, const char*>>{{"torus-4x4", "z2"}, {"torus-2x2", "s3"}}) {
        const Model m(preset(cx), hopf_preset(h));
        const ExperimentReport r = invariance_suite(m, 1, kInvarianceTol);
        worst = std::max(worst, r.residual);
        items += static_cast<int>(r.items.size());
        v.require(r.ok, std::string(h) + "/" + cx);
    }
    v.detail << " items=" << items << " max residual " << sci(worst) << " < " << sci(kInvarianceTol);
    v.require(worst < kInvarianceTol, "residual");
}

void charge(Verdict& v) {
    {
        const Model m(preset("torus-4x4"), hopf_preset("z2"));
        const ChargeSetup s = charge_setup(m.presentation(), 4, 4);
        const ExperimentReport r = experiment_charge(m, s.rho, s.gamma, 1, kChargeTol);
        v.require(r.overlaps.rows() == 4 && r.overlaps.cols() == 4, "4x4 pattern");
        const double dev = r.overlaps.rows() == 4 ? (r.overlaps - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() : 1.0;
        v.detail << " delta-pattern deviation " << sci(dev) << " residual " << sci(r.residual);
        v.require(dev < kChargeTol && r.ok, "charge detection");
    }
    const Model m(preset("torus-3x3"), hopf_preset("z2"));
    const OpCurve rho = proper_left_ribbon(m.presentation(), torus_arrow(3, 3, 0, 0, 0), torus_arrow(3, 3, 1, 1, 0));
    const ExperimentReport r = experiment_multiplet(m, rho, std::nullopt, 1, kChargeTol);
    v.detail << " multiplet items=" << r.items.size() << " residual " << sci(r.residual);
    v.require(r.ok && r.residual < kChargeTol, "multiplet covariance");
}

// ---------------------------------------------------------------- 10

void determinism(Verdict& v) {
    const std::vector<std::vector<std::string>> runs{
        {"validate", "--complex", "cube"},
        {"vacuum-dim", "--complex", "torus-2x2", "--hopf", "z3", "--seed", "5"},
        {"verify", "--suite", "relations", "--complex", "torus-2x2", "--hopf", "z3", "--seed", "11"},
        {"verify", "--suite", "ribbon", "--complex", "torus-2x2", "--hopf", "z2", "--seed", "12"},
        {"experiment", "prop91", "--complex", "torus-2x2", "--hopf", "s3", "--arrows", "0", "--seed", "13"},
        {"experiment", "invariance", "--complex", "torus-4x4", "--hopf", "z2", "--seed", "14"},
        {"experiment", "charge", "--complex", "torus-4x4", "--hopf", "z2", "--seed", "15"}};
    int same = 0;
    for (const auto& args : runs) {
        std::ostringstream a, b, err;
        const int ca = run(args, a, err), cb = run(args, b, err);
        const bool ok = ca == 0 && cb == 0 && !a.str().empty() && a.str() == b.str();
        same += ok;
        v.require(ok, args[0] + " " + args[1]);
    }
    v.detail << " identical reports " << same << "/" << runs.size();
}

}  // namespace

int main() {
    bool all = true;
    all &= report(1, "combinatorial", 1.0, combinatorial);
    all &= report(2, "transforms", 1.0, transforms);
    all &= report(3, "codec", 5.0, codec);
    all &= report(4, "relations", 30.0, relations);
    all &= report(5, "holonomy", 0, holonomy);
    all &= report(6, "homotopy", 10.0, homotopy);
    all &= report(7, "vacuum dimensions", 0, vacuum);
    all &= report(8, "invariance", 180.0, invariance);
    all &= report(9, "charge", 120.0, charge);
    all &= report(10, "determinism", 0, determinism);
    std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
    return all ? 0 : 1;
}
