#include <random>

#include "doctest.h"
#include "kit/presentation.hpp"

using namespace kit;

namespace {

std::string kind_of(int n, const Perm& t0, const Perm& t2) {
    try {
        new_presentation(n, t0, t2);
    } catch (const Error& e) {
        return e.kind();
    }
    return "";
}

}  // namespace

TEST_CASE("minimal sphere") {
    auto p = minimal_sphere();
    CHECK(p.size() == 4);
    CHECK(p.perm(1) == Perm{1, 0, 3, 2});
    CHECK(p.orbit(0, 0) == std::vector<int>{0, 2});
    auto c = build_complex(p);
    CHECK(c.count(0) == 2);
    CHECK(c.count(1) == 2);
    CHECK(c.count(2) == 2);
    CHECK(euler_characteristic(p) == 2);
    CHECK(is_connected(p));
    CHECK(sites(p).size() == 4);
}

TEST_CASE("invalid presentations") {
    CHECK(kind_of(2, {0, 1}, {0, 1}) == "AP1Violation");
    CHECK(kind_of(2, {0, 0}, {1, 0}) == "NotAPermutation");
    CHECK(kind_of(3, {1, 2, 0}, {1, 2, 0}) != "");
    try {
        new_presentation(2, {0, 1}, {0, 1});
    } catch (const AxiomError& e) {
        CHECK(!e.violations().empty());
        CHECK(e.violations().front().axiom == "AP-1");
    }
}

TEST_CASE("preset counts") {
    auto cube_c = build_complex(cube());
    CHECK(cube_c.count(0) == 8);
    CHECK(cube_c.count(1) == 12);
    CHECK(cube_c.count(2) == 6);
    CHECK(genus(cube()) == 0);

    auto t3 = build_complex(torus(3, 3));
    CHECK(t3.count(0) == 9);
    CHECK(t3.count(1) == 18);
    CHECK(t3.count(2) == 9);
    CHECK(euler_characteristic(torus(3, 3)) == 0);

    auto t2 = torus(2, 2);
    CHECK(t2.size() == 16);
    auto c2 = build_complex(t2);
    CHECK(c2.count(0) == 4);
    CHECK(c2.count(1) == 8);
    CHECK(c2.count(2) == 4);
    CHECK(genus(t2) == 1);
    for (int a = 0; a < 16; ++a) CHECK(t2.orbit_size(2, a) == 4);
    CHECK(sites(t2).size() == 16);
}

TEST_CASE("all presets valid and connected") {
    for (const auto& name : preset_names()) {
        auto p = preset(name);
        CHECK_MESSAGE(is_connected(p), name);
        auto c = build_complex(p);
        CHECK(check_complex(p, c).empty());
        int deg = 0, perim = 0;
        for (auto& v : c.cells[0]) deg += static_cast<int>(v.members.size());
        for (auto& f : c.cells[2]) perim += static_cast<int>(f.members.size());
        CHECK(deg == p.size());
        CHECK(perim == p.size());
        CHECK(2 * c.count(1) == p.size());
    }
    CHECK_THROWS(preset("torus-1x3"));
    CHECK_THROWS(preset("klein"));
}

TEST_CASE("disjoint spheres") {
    auto u = disjoint_union(minimal_sphere(), minimal_sphere());
    CHECK(u.size() == 8);
    CHECK_FALSE(is_connected(u));
    try {
        genus(u);
        FAIL("expected NotConnected");
    } catch (const Error& e) {
        CHECK(e.kind() == "NotConnected");
    }
}

TEST_CASE("permutation identities and sites") {
    for (const auto& name : {"cube", "torus-3x4", "minimal-sphere"}) {
        auto p = preset(name);
        auto c = build_complex(p);
        for (int a = 0; a < p.size(); ++a) {
            CHECK(p.tinv(2, a) == p.t1(p.t0(a)));
            CHECK(p.tinv(0, a) == p.t2(p.t1(a)));
            CHECK(p.t1(a) != a);
            for (int i = 0; i < 3; ++i)
                for (int j = i + 1; j < 3; ++j) {
                    int common = 0;
                    for (int x : p.orbit(i, a))
                        for (int y : p.orbit(j, a)) common += (x == y);
                    CHECK(common == 1);
                }
            auto s = c.site(a);
            CHECK(s.vertex == c.cell_of[0][a]);
            CHECK(s.face == c.cell_of[2][a]);
            // two edges of a site
            std::vector<int> both;
            for (int e : c.cb[0][s.vertex])
                for (int g : c.bd[2][s.face])
                    if (e == g) both.push_back(e);
            std::vector<int> expect{c.cell_of[1][a], c.cell_of[1][p.t0(a)]};
            std::sort(both.begin(), both.end());
            std::sort(expect.begin(), expect.end());
            expect.erase(std::unique(expect.begin(), expect.end()), expect.end());
            CHECK(both == expect);
        }
    }
}

TEST_CASE("flat indexing round trip") {
    auto c = build_complex(cube());
    for (int k = 0; k < c.total_cells(); ++k) {
        auto r = c.unflat(k);
        CHECK(c.flat(r.dim, r.id) == k);
    }
}

TEST_CASE("random mutations are rejected or valid") {
    std::mt19937 rng(7);
    auto base = torus(3, 3);
    int rejected = 0;
    for (int it = 0; it < 200; ++it) {
        Perm t0 = base.perm(0), t2 = base.perm(2);
        std::uniform_int_distribution<int> pick(0, base.size() - 1);
        std::swap(t0[pick(rng)], t0[pick(rng)]);
        if (it % 2) std::swap(t2[pick(rng)], t2[pick(rng)]);
        auto v = check_presentation(base.size(), t0, t2);
        if (!v.empty()) {
            ++rejected;
            CHECK_THROWS_AS(new_presentation(base.size(), t0, t2), AxiomError);
        } else {
            auto p = new_presentation(base.size(), t0, t2);
            CHECK(check_complex(p, build_complex(p)).empty());
        }
    }
    CHECK(rejected > 0);
}
