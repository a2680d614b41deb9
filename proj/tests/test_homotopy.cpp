#include <random>

#include "doctest.h"
#include "kit/homotopy.hpp"
#include "kit/regions.hpp"

using namespace kit;

namespace {

struct Lattice {
    ArrowPresentation p;
    SurfaceComplex cx;
    TorusCells t;
    Lattice(int n, int m) : p(torus(n, m)), cx(build_complex(p)), t{n, m, &cx} {}
};

OpCurve single_boundary(const Lattice& L, const std::vector<int>& region) {
    auto b = boundary_curves(L.p, L.cx, region);
    REQUIRE(b.size() == 1);
    return b[0];
}

void check_plan(const ArrowPresentation& p, const OpCurve& from, const OpCurve& to, const MovePlan& plan,
                const std::vector<int>& region) {
    auto r = verify_homotopy(p, from, to, plan);
    CHECK(r.ok);
    CHECK(r.proper_throughout);
    CHECK(r.support == region);
    CHECK(plan.support == region);
}

}  // namespace

TEST_CASE("single moves") {
    auto p = torus(3, 3);
    for (int a = 0; a < p.size(); ++a) {
        auto g = face_loop(p, 2, a);
        auto r = apply_move(p, g, {MoveKind::FaceContract, 0, a, false});
        CHECK(r.empty());
        CHECK(r.start == a);
        auto k = kappa(p, a);
        auto kc = apply_move(p, k, {MoveKind::KappaContract, 0, a, false});
        CHECK(kc.arrows == std::vector<int>{darrow(p.t1(a), 0, -1)});
        CHECK(apply_move(p, kc, {MoveKind::KappaRelax, 0, a, false}) == k);
        auto l = lambda(p, a);
        auto lc = apply_move(p, l, {MoveKind::LambdaContract, 0, a, false});
        CHECK(lc.arrows == std::vector<int>{darrow(p.t1(a), 2, 1)});
        CHECK(apply_move(p, lc, {MoveKind::LambdaRelax, 0, a, false}) == l);
        auto ai = inverse(p, face_loop(p, 0, a));
        CHECK(apply_move(p, ai, {MoveKind::VertexContract, 0, a, false}).empty());
        // right ribbon versions
        auto ki = inverse(p, k);
        auto kr = apply_move(p, ki, {MoveKind::KappaContract, 0, a, true});
        CHECK(kr.arrows == std::vector<int>{darrow(p.t1(a), 0, 1)});
        CHECK(classify_ribbon(p, kr).kind == RibbonKind::Right);
    }
    auto g = face_loop(p, 2, 0);
    try {
        apply_move(p, g, {MoveKind::FaceContract, 1, 0, false});
        FAIL("expected mismatch");
    } catch (const Error& e) {
        CHECK(e.kind() == "PatternMismatch");
    }
    auto open = kappa(p, 0);
    try {
        apply_move(p, open, {MoveKind::Circular, 1, 0, false});
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.kind() == "CircularOnOpenCurve");
    }
    auto rot = apply_move(p, g, {MoveKind::Circular, 2, 0, false});
    CHECK(is_closed(p, rot));
    CHECK(rot.size() == g.size());
}

TEST_CASE("face loop contraction") {
    auto p = torus(3, 3);
    auto cx = build_complex(p);
    auto g = face_loop(p, 2, 5);
    auto plan = contract_disk(p, g, Side::Left);
    CHECK(plan.moves.size() == 1);
    CHECK(plan.moves[0].kind == MoveKind::FaceContract);
    check_plan(p, g, trivial_curve(5), plan, {cx.flat(2, cx.cell_of[2][5])});
    auto ai = inverse(p, face_loop(p, 0, 5));
    auto plan2 = contract_disk(p, ai, Side::Right);
    check_plan(p, ai, trivial_curve(5), plan2, {cx.flat(0, cx.cell_of[0][5])});
}

TEST_CASE("open block boundaries contract on the left") {
    for (auto [n, w, h] : std::vector<std::array<int, 3>>{{4, 2, 2}, {4, 1, 2}, {5, 3, 3}, {5, 2, 3}, {5, 3, 2}}) {
        Lattice L(n, n);
        auto region = torus_block(L.t, 1, 0, w, h, false);
        CHECK(region_euler(L.cx, region) == 1);
        auto rho = single_boundary(L, region);
        auto rc = classify_ribbon(L.p, rho);
        REQUIRE(rc.kind == RibbonKind::Left);
        REQUIRE(rc.proper);
        CHECK(side_region(L.p, L.cx, rho, Side::Left) == region);
        auto plan = contract_disk(L.p, rho, Side::Left);
        check_plan(L.p, rho, trivial_curve(rho.start), plan, region);
        // other base points
        auto vs = visited_sites(L.p, rho);
        auto rho2 = rotate_to(L.p, rho, vs[3]);
        auto plan2 = contract_disk(L.p, rho2, Side::Left);
        check_plan(L.p, rho2, trivial_curve(rho2.start), plan2, region);
    }
}

TEST_CASE("closed block boundaries contract on the right") {
    for (auto [n, w, h] : std::vector<std::array<int, 3>>{{4, 2, 2}, {5, 3, 3}, {5, 1, 3}}) {
        Lattice L(n, n);
        auto block = torus_block(L.t, 0, 1, w, h, true);
        CHECK(region_euler(L.cx, block) == 1);
        auto rho = single_boundary(L, region_complement(L.cx, block));
        auto rc = classify_ribbon(L.p, rho);
        REQUIRE(rc.kind == RibbonKind::Left);
        REQUIRE(rc.proper);
        CHECK(side_region(L.p, L.cx, rho, Side::Right) == block);
        auto plan = contract_disk(L.p, rho, Side::Right);
        check_plan(L.p, rho, trivial_curve(rho.start), plan, block);
        try {
            contract_disk(L.p, rho, Side::Left);
            FAIL("expected RegionNotDisk");
        } catch (const Error& e) {
            CHECK(e.kind() == "RegionNotDisk");
        }
    }
}

TEST_CASE("non separating curves") {
    auto p = torus(2, 2);
    auto longitude = curve_from_word(p, 0, "2+ 0- 2+ 0-");
    REQUIRE(is_closed(p, longitude));
    REQUIRE(classify_ribbon(p, longitude).proper);
    try {
        contract_disk(p, longitude, Side::Left);
        FAIL("expected NotSeparating");
    } catch (const Error& e) {
        CHECK(e.kind() == "NotSeparating");
    }
}

TEST_CASE("connect homotopy") {
    Lattice L(4, 4);
    // rho2 along a row; rho1 from random proper relaxations of rho2
    auto rho2 = curve_from_word(L.p, L.t.arrow(0, 1, 0), "2+ 0- 2+ 0- 2+ 0-");
    REQUIRE(classify_ribbon(L.p, rho2).proper);
    CHECK(connect_homotopy(L.p, rho2, rho2).moves.empty());
    std::mt19937 rng(17);
    int tested = 0;
    for (int trial = 0; trial < 40 && tested < 8; ++trial) {
        OpCurve cur = rho2;
        std::vector<int> swept;
        std::uniform_int_distribution<int> steps(1, 6);
        const int k = steps(rng);
        for (int s = 0; s < k; ++s) {
            std::vector<HomotopyMove> cands;
            for (int pos = 0; pos < static_cast<int>(cur.size()); ++pos) {
                auto u = DoubleArrow::unpack(cur.arrows[pos]);
                const int a = L.p.t1(u.base);
                if (u.kind == 2 && u.sign > 0) cands.push_back({MoveKind::LambdaRelax, pos, a, false});
                if (u.kind == 2 && u.sign > 0) cands.push_back({MoveKind::KappaContract, pos, a, false});
            }
            std::shuffle(cands.begin(), cands.end(), rng);
            bool done = false;
            for (auto& m : cands) {
                OpCurve next;
                try {
                    next = apply_move(L.p, cur, m);
                } catch (const Error&) {
                    continue;
                }
                if (!is_proper(L.p, next)) continue;
                auto sup = move_support(L.cx, m);
                bool fresh = true;
                for (int x : sup)
                    if (std::find(swept.begin(), swept.end(), x) != swept.end()) fresh = false;
                if (!fresh) continue;
                swept.insert(swept.end(), sup.begin(), sup.end());
                cur = next;
                done = true;
                break;
            }
            if (!done) break;
        }
        if (cur == rho2) continue;
        std::sort(swept.begin(), swept.end());
        MovePlan plan;
        try {
            plan = connect_homotopy(L.p, cur, rho2);
        } catch (const Error& e) {
            // a generated configuration whose swept set is not a disk is skipped
            if (region_euler(L.cx, swept) != 1) continue;
            FAIL(std::string(e.what()));
        }
        check_plan(L.p, cur, rho2, plan, swept);
        ++tested;
        try {
            connect_homotopy(L.p, rho2, cur);
            FAIL("expected NotABoundary");
        } catch (const Error& e) {
            CHECK(e.kind() == "NotABoundary");
        }
    }
    CHECK(tested >= 5);
}

TEST_CASE("annulus homotopy") {
    {
        Lattice L(5, 5);
        auto outer = torus_block(L.t, 1, 1, 3, 3, false);
        auto inner = torus_block(L.t, 2, 2, 1, 1, false);
        auto ann = region_minus(outer, inner);
        CHECK(region_euler(L.cx, ann) == 0);
        auto rho1 = single_boundary(L, outer);
        auto rho2 = single_boundary(L, inner);
        auto plan = annulus_homotopy(L.p, rho1, rho2);
        check_plan(L.p, rho1, rho2, plan, ann);
    }
    {
        Lattice L(3, 3);
        auto band = torus_band(L.t, 1, true);
        CHECK(region_euler(L.cx, band) == 0);
        auto bs = boundary_curves(L.p, L.cx, band);
        REQUIRE(bs.size() == 2);
        OpCurve rho1, rho2;
        for (auto& b : bs) {
            auto k = classify_ribbon(L.p, b).kind;
            if (k == RibbonKind::Left) rho1 = b;
            else rho2 = inverse(L.p, b);
        }
        REQUIRE(classify_ribbon(L.p, rho1).proper);
        REQUIRE(classify_ribbon(L.p, rho2).kind == RibbonKind::Left);
        auto plan = annulus_homotopy(L.p, rho1, rho2);
        check_plan(L.p, rho1, rho2, plan, band);
    }
}

TEST_CASE("annulus rejections") {
    Lattice L(5, 5);
    auto outer = torus_block(L.t, 0, 0, 4, 4, false);
    auto inner = torus_block(L.t, 1, 1, 2, 2, false);
    auto rho1 = single_boundary(L, outer);
    auto rho2 = single_boundary(L, inner);
    CHECK(region_euler(L.cx, region_minus(outer, inner)) == 0);
    CHECK_NOTHROW(annulus_homotopy(L.p, rho1, rho2));
    // a curve against itself leaves no region between
    try {
        annulus_homotopy(L.p, rho1, rho1);
        FAIL("expected NotAnAnnulus");
    } catch (const Error& e) {
        CHECK(e.kind() == "NotAnAnnulus");
    }
    // swapped roles: the inner curve does not enclose the outer one
    try {
        annulus_homotopy(L.p, rho2, rho1);
        FAIL("expected NotAnAnnulus");
    } catch (const Error& e) {
        CHECK(e.kind() == "NotAnAnnulus");
    }
    // a disk boundary with an unrelated loop elsewhere
    auto far = single_boundary(L, torus_block(L.t, 4, 4, 1, 1, false));
    CHECK_THROWS_AS(annulus_homotopy(L.p, rho2, far), Error);
}

TEST_CASE("rectify") {
    auto p = torus(3, 3);
    auto one = curve_from_word(p, 0, "0+");
    auto r = rectify(p, one);
    CHECK(word_string(encode(p, r.ribbon).word) == "0- 0- 0-");
    CHECK(verify_rectify(p, one, r));
    auto good = curve_from_word(p, 4, "2+ 0- 0- 2+");
    auto rg = rectify(p, good);
    CHECK(rg.ribbon == good);
    CHECK(rg.lassos.empty());
    std::mt19937 rng(23);
    for (int it = 0; it < 100; ++it) {
        std::uniform_int_distribution<int> l(0, 3), base(0, p.size() - 1);
        CodedCurve c{base(rng), {}};
        for (int k = 0; k < 10; ++k) c.word.push_back(static_cast<Letter>(l(rng)));
        auto g = decode(p, c);
        auto res = rectify(p, g);
        CHECK(verify_rectify(p, g, res));
        // a corrupted certificate fails
        if (!res.lassos.empty()) {
            auto bad = res;
            bad.lassos.pop_back();
            CHECK_FALSE(verify_rectify(p, g, bad));
        }
    }
}

TEST_CASE("tree curves") {
    Lattice L(3, 3);
    const auto& p = L.p;
    for (int a = 0; a < p.size(); ++a) {
        auto v = L.cx.flat(0, L.cx.cell_of[0][a]);
        auto tc = tree_curve(p, {v});
        auto amin = L.cx.cells[0][L.cx.cell_of[0][a]].members.front();
        CHECK(tc.curve == inverse(p, face_loop(p, 0, amin)));
        auto f = L.cx.flat(2, L.cx.cell_of[2][a]);
        auto fmin = L.cx.cells[2][L.cx.cell_of[2][a]].members.front();
        CHECK(tree_curve(p, {f}).curve == face_loop(p, 2, fmin));
        // rooted two-element trees give kappa / lambda
        const int x = p.t1(a);
        auto e = L.cx.flat(1, L.cx.cell_of[1][a]);
        CHECK(tree_curve(p, {v, e}, x).curve == kappa(p, a));
        CHECK(tree_curve(p, {f, e}, x).curve == lambda(p, a));
    }
    // path of three vertices
    std::vector<int> path{L.t.vertex(0, 0), L.t.vertex(1, 0), L.t.vertex(2, 0), L.t.hedge(0, 0), L.t.hedge(1, 0)};
    auto tc = tree_curve(p, path);
    auto rc = classify_ribbon(p, tc.curve);
    CHECK(rc.kind == RibbonKind::Left);
    CHECK(rc.proper);
    CHECK(is_closed(p, tc.curve));
    CHECK(side_region(p, L.cx, tc.curve, Side::Right) == std::vector<int>(tc.tree.begin(), tc.tree.end()));
    auto plan = contract_disk(p, tc.curve, Side::Right);
    CHECK(verify_homotopy(p, tc.curve, trivial_curve(tc.curve.start), plan).ok);

    // dual path tree
    std::vector<int> dpath{L.t.face(0, 0), L.t.face(1, 0), L.t.vedge(1, 0)};
    auto dc = tree_curve(p, dpath);
    CHECK(classify_ribbon(p, dc.curve).proper);
    auto dplan = contract_disk(p, dc.curve, Side::Left);
    CHECK(verify_homotopy(p, dc.curve, trivial_curve(dc.curve.start), dplan).ok);

    // rooted tree homotopic to its root curve
    std::vector<int> rooted{L.t.vertex(1, 0), L.t.vertex(2, 0), L.t.hedge(0, 0), L.t.hedge(1, 0)};
    const int root = L.t.arrow(0, 0, 0);  // edge (0,0)-(1,0), outer end at (0,0)
    auto rt = tree_curve(p, rooted, root);
    CHECK(classify_ribbon(p, rt.curve).proper);
    OpCurve root_curve{root, {darrow(root, 0, -1)}};
    CHECK(rt.curve.start == root_curve.start);
    // the tree lies on the left of the root curve
    auto cplan = connect_homotopy(p, root_curve, rt.curve);
    auto cr = verify_homotopy(p, root_curve, rt.curve, cplan);
    CHECK(cr.ok);
    CHECK(cr.proper_throughout);
    CHECK(cr.support == rt.tree);

    CHECK_THROWS_AS(tree_curve(p, {L.t.vertex(0, 0), L.t.vertex(1, 1)}), Error);
    std::vector<int> cycle;
    for (int i = 0; i < 3; ++i) {
        cycle.push_back(L.t.vertex(i, 0));
        cycle.push_back(L.t.hedge(i, 0));
    }
    try {
        tree_curve(p, cycle);
        FAIL("expected NotATree");
    } catch (const Error& e) {
        CHECK(e.kind() == "NotATree");
    }
    try {
        tree_curve(p, rooted, L.t.arrow(1, 0, 0));
        FAIL("expected BadRoot");
    } catch (const Error& e) {
        CHECK(e.kind() == "BadRoot");
    }
}

TEST_CASE("replay failure") {
    Lattice L(4, 4);
    auto region = torus_block(L.t, 0, 0, 2, 2, false);
    auto rho = single_boundary(L, region);
    auto plan = contract_disk(L.p, rho, Side::Left);
    REQUIRE(plan.moves.size() > 1);
    auto bad = plan;
    bad.moves[0].pos += 1;
    try {
        verify_homotopy(L.p, rho, trivial_curve(rho.start), bad);
        FAIL("expected ReplayFailure");
    } catch (const Error& e) {
        CHECK(e.kind() == "ReplayFailure");
    }
    CHECK(verify_homotopy(L.p, rho, rho, MovePlan{}).ok);
}
