#include "doctest.h"
#include "kit/transform.hpp"

using namespace kit;

namespace {

std::array<int, 3> counts(const ArrowPresentation& p) {
    auto c = build_complex(p);
    return {c.count(0), c.count(1), c.count(2)};
}

PresentationMap map_by(const ArrowPresentation& src, const ArrowPresentation& dst, const Perm& f) {
    return PresentationMap{src, dst, f};
}

}  // namespace

TEST_CASE("dual counts") {
    CHECK(counts(dual(minimal_sphere())) == std::array<int, 3>{2, 2, 2});
    CHECK(counts(dual(cube())) == std::array<int, 3>{6, 12, 8});
    CHECK(counts(dual(torus(2, 3))) == counts(torus(2, 3)));
}

TEST_CASE("dual identities") {
    for (const auto& name : {"minimal-sphere", "cube", "torus-2x3", "torus-3x3"}) {
        auto p = preset(name);
        auto t1 = p.perm(1);
        CHECK(check_isomorphism(map_by(dual(dual(p)), p, t1)));
        CHECK(check_isomorphism(map_by(dual(p), dual_alt(p), t1)));
        CHECK(check_isomorphism(map_by(dual_alt(p), swapped(p), p.perm(2))));
        CHECK(check_isomorphism(map_by(inverted(p), mirror(p), p.perm(0))));
        CHECK(check_isomorphism(identity_map(mirror(mirror(p)))));
        // mirror twice: the permutations coincide up to T-conjugation
        auto mm = mirror(mirror(p));
        bool any = false;
        for (int i = 0; i < 3 && !any; ++i) {
            Perm id(p.size());
            for (int a = 0; a < p.size(); ++a) id[a] = a;
            any = check_isomorphism(map_by(mm, p, id)) || check_isomorphism(map_by(mm, p, p.perm(i))) ||
                  check_isomorphism(map_by(mm, p, p.inverse_perm(i)));
        }
        CHECK(any);
        CHECK(counts(mirror(p)) == counts(p));
        CHECK(check_isomorphism(identity_map(p)));
    }
}

TEST_CASE("double") {
    auto p = minimal_sphere();
    auto d = double_of(p);
    CHECK(d.size() == 16);
    for (int x = 0; x < 16; ++x) {
        CHECK(d.orbit_size(2, x) == 4);
        auto u = DoubleArrow::unpack(x);
        CHECK(DoubleArrow::unpack(d.t1(x)) == DoubleArrow{u.base, u.kind, -u.sign});
        if (u.sign < 0) CHECK(d.t0(d.t0(d.t0(d.t0(x)))) == x);
    }
    CHECK(build_complex(d).count(2) == 4);
    auto dt = double_of(torus(2, 2));
    CHECK(dt.size() == 64);
    CHECK(euler_characteristic(dt) == 0);
    // T1 of the double is not an automorphism
    CHECK_FALSE(check_isomorphism(map_by(d, d, d.perm(1))));
}

TEST_CASE("dual of double") {
    for (const auto& name : {"minimal-sphere", "cube", "torus-2x2", "torus-3x2"}) {
        auto p = preset(name);
        auto dd = dual_of_double(p);
        for (int x = 0; x < dd.size(); ++x) CHECK(dd.orbit_size(0, x) == 4);
        CHECK(build_complex(dd).count(2) == build_complex(p).total_cells());
        CHECK(check_isomorphism(delta_iso(p)));
        CHECK(check_isomorphism(mu_iso(p)));
        // dual of the double equals the double's dual
        auto viadual = dual(double_of(p));
        Perm id(dd.size());
        for (int x = 0; x < dd.size(); ++x) id[x] = x;
        CHECK(check_isomorphism(map_by(viadual, dd, id)));
    }
}

TEST_CASE("size mismatch") {
    auto p = minimal_sphere();
    try {
        check_isomorphism(map_by(p, cube(), Perm{0, 1, 2, 3}));
        FAIL("expected SizeMismatch");
    } catch (const Error& e) {
        CHECK(e.kind() == "SizeMismatch");
    }
}
