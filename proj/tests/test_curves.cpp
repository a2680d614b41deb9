#include <random>
#include <map>
#include <regex>

#include "doctest.h"
#include "kit/curves.hpp"

using namespace kit;

namespace {

std::vector<Letter> random_word(std::mt19937& rng, int len, int alphabet = 4) {
    std::uniform_int_distribution<int> pick(0, alphabet - 1);
    std::vector<Letter> w;
    for (int i = 0; i < len; ++i) w.push_back(static_cast<Letter>(pick(rng)));
    return w;
}

std::vector<Letter> random_left_word(std::mt19937& rng, int len) {
    std::uniform_int_distribution<int> pick(0, 1);
    std::vector<Letter> w;
    for (int i = 0; i < len; ++i) w.push_back(pick(rng) ? Letter::T2 : Letter::T0inv);
    return w;
}

}  // namespace

TEST_CASE("decode basics") {
    auto p = minimal_sphere();
    auto triv = decode(p, CodedCurve{1, {}});
    CHECK(triv.empty());
    CHECK(triv.start == 1);
    auto g = decode(p, CodedCurve{0, {Letter::T2, Letter::T2}});
    CHECK(g == face_loop(p, 2, 0));
    CHECK(is_closed(p, g));

    auto t = torus(2, 2);
    for (int a = 0; a < t.size(); ++a) {
        auto c = curve_from_word(t, a, "0- 0- 0- 0-");
        CHECK(is_closed(t, c));
        CHECK(is_valid_curve(t, c));
    }
    CHECK_THROWS(parse_word("0+ 3+"));
}

TEST_CASE("codec round trip") {
    std::mt19937 rng(11);
    for (const auto& name : preset_names()) {
        auto p = preset(name);
        const int reps = (name.rfind("torus-5", 0) == 0 || name.rfind("torus-4", 0) == 0) ? 50 : 150;
        for (int it = 0; it < reps; ++it) {
            std::uniform_int_distribution<int> len(0, 64), base(0, p.size() - 1);
            CodedCurve c{base(rng), random_word(rng, len(rng))};
            auto curve = decode(p, c);
            REQUIRE(is_valid_curve(p, curve));
            auto back = encode(p, curve);
            CHECK(back.base == c.base);
            CHECK(back.word == c.word);
            CHECK(parse_word(word_string(c.word)) == c.word);
        }
    }
}

TEST_CASE("face loops and their encodings") {
    for (const auto& name : {"minimal-sphere", "cube", "torus-3x3"}) {
        auto p = preset(name);
        for (int a = 0; a < p.size(); ++a) {
            auto al = face_loop(p, 0, a), be = face_loop(p, 1, a), ga = face_loop(p, 2, a);
            CHECK(static_cast<int>(al.size()) == p.orbit_size(0, a));
            CHECK(be.size() == 4);
            CHECK(static_cast<int>(ga.size()) == p.orbit_size(2, a));
            for (auto* c : {&al, &be, &ga}) {
                CHECK(is_valid_curve(p, *c));
                CHECK(is_closed(p, *c));
            }
            // alpha_a is (T0)^m from T0 a's predecessor site
            auto ea = encode(p, al);
            CHECK(ea.base == a);
            for (auto l : ea.word) CHECK(l == Letter::T0);
            CHECK(word_string(encode(p, be).word) == "0+ 2+ 0+ 2+");

            auto ai = inverse(p, al);
            auto rc = classify_ribbon(p, ai);
            CHECK(rc.kind == RibbonKind::Left);
            CHECK(rc.proper);
            CHECK(classify_ribbon(p, ga).kind == RibbonKind::Left);
            CHECK(classify_ribbon(p, ga).proper);
            CHECK(classify_ribbon(p, be).kind == RibbonKind::None);
            CHECK_FALSE(is_proper(p, be));

            // figure eight: alpha_a^-1 gamma_a
            auto eight = concat(p, ai, ga);
            auto r8 = classify_ribbon(p, eight);
            CHECK(r8.kind == RibbonKind::Left);
            CHECK_FALSE(r8.proper);

            auto k = kappa(p, a), l = lambda(p, a);
            CHECK(is_valid_curve(p, k));
            CHECK(is_valid_curve(p, l));
            CHECK(k.start == p.t1(a));
            CHECK(curve_end(p, k) == p.t2(a));
            CHECK(l.start == p.t1(a));
            CHECK(curve_end(p, l) == p.tinv(0, a));
            CHECK(classify_ribbon(p, k).kind == RibbonKind::Left);
            CHECK(classify_ribbon(p, l).kind == RibbonKind::Left);

            CHECK(reduce(concat(p, al, inverse(p, al))).empty());
        }
    }
}

TEST_CASE("kappa and lambda are proper on lattices") {
    for (const auto& name : {"cube", "torus-3x3"}) {
        auto p = preset(name);
        for (int a = 0; a < p.size(); ++a) {
            CHECK(classify_ribbon(p, kappa(p, a)).proper);
            CHECK(classify_ribbon(p, lambda(p, a)).proper);
        }
    }
}

TEST_CASE("reduce and inverse") {
    std::mt19937 rng(3);
    auto p = torus(3, 4);
    for (int it = 0; it < 300; ++it) {
        std::uniform_int_distribution<int> len(0, 30), base(0, p.size() - 1);
        auto c = decode(p, CodedCurve{base(rng), random_word(rng, len(rng))});
        auto r = reduce(c);
        CHECK(reduce(r) == r);
        CHECK(is_valid_curve(p, r));
        CHECK(curve_end(p, r) == curve_end(p, c));
        auto inv = inverse(p, c);
        CHECK(inv.start == curve_end(p, c));
        CHECK(curve_end(p, inv) == c.start);
        CHECK(reduce(concat(p, c, inv)).empty());
    }
    int d = darrow(5, 2, 1);
    OpCurve back{arrow_source(p, d), {d, flip_arrow(d)}};
    CHECK(reduce(back).empty());
}

TEST_CASE("word and geometric ribbon tests agree") {
    std::mt19937 rng(5);
    for (const auto& name : preset_names()) {
        auto p = preset(name);
        auto cx = build_complex(p);
        for (int it = 0; it < 60; ++it) {
            std::uniform_int_distribution<int> len(1, 20), base(0, p.size() - 1), mode(0, 2);
            std::vector<Letter> w;
            int m = mode(rng);
            if (m == 0) w = random_word(rng, len(rng));
            else w = random_left_word(rng, len(rng));
            if (m == 2)
                for (auto& l : w) l = inverse_letter(l);
            auto c = decode(p, CodedCurve{base(rng), w});
            RibbonClass rc;
            REQUIRE_NOTHROW(rc = classify_ribbon(p, c));
            bool reduced = reduce(c).size() == c.size();
            CHECK((reduced && borderlines_disjoint(p, cx, c)) == (rc.kind != RibbonKind::None));
            if (rc.kind != RibbonKind::None) {
                CHECK(rc.proper == is_simple(p, c));
                auto inv = inverse(p, c);
                auto ri = classify_ribbon(p, inv);
                CHECK(ri.kind == (rc.kind == RibbonKind::Left ? RibbonKind::Right : RibbonKind::Left));
            }
            if (m == 1) CHECK(rc.kind == RibbonKind::Left);
            if (m == 2) CHECK(rc.kind == RibbonKind::Right);
        }
    }
}

TEST_CASE("left ribbons concatenate") {
    std::mt19937 rng(9);
    auto p = torus(4, 4);
    for (int it = 0; it < 100; ++it) {
        std::uniform_int_distribution<int> base(0, p.size() - 1);
        auto a = decode(p, CodedCurve{base(rng), random_left_word(rng, 8)});
        auto b = decode(p, CodedCurve{curve_end(p, a), random_left_word(rng, 8)});
        CHECK(classify_ribbon(p, concat(p, a, b)).kind == RibbonKind::Left);
    }
}

TEST_CASE("embedding table") {
    auto p = cube();
    auto cx = build_complex(p);
    for (int a = 0; a < p.size(); ++a) {
        auto t = embed_E(p, cx, darrow(a, 0, 1));
        CHECK_FALSE(t.c_is_arrow);
        CHECK(t.c == cx.cell_of[0][a]);
        CHECK(t.b == a);
        auto s = embed_E(p, cx, darrow(a, 2, -1));
        CHECK(s.c_is_arrow);
        CHECK(s.c == p.t1(a));
        CHECK(s.b == cx.cell_of[2][a]);
    }
}

TEST_CASE("U sets and separation") {
    auto p = torus(3, 3);
    for (int d = 0; d < 4 * p.size(); ++d) {
        auto u = u_set(p, d);
        CHECK(u.size() == 6);
        CHECK(std::find(u.begin(), u.end(), d) != u.end());
        for (int x : u) {
            auto ux = u_set(p, x);
            CHECK(std::find(ux.begin(), ux.end(), d) != ux.end());
        }
    }
    std::mt19937 rng(1);
    for (int it = 0; it < 100; ++it) {
        std::uniform_int_distribution<int> base(0, p.size() - 1);
        auto c = decode(p, CodedCurve{base(rng), random_left_word(rng, 6)});
        bool self = true;
        for (size_t i = 0; i < c.size(); ++i)
            for (size_t j = i + 1; j < c.size(); ++j)
                if (!u_separated(p, {c.arrows[i]}, {c.arrows[j]})) self = false;
        CHECK(self == is_proper(p, c));
    }
}

TEST_CASE("schreier export") {
    for (auto [name, nodes] : std::vector<std::pair<std::string, int>>{{"minimal-sphere", 4}, {"torus-2x2", 16}}) {
        auto p = preset(name);
        auto dot = schreier_export(p, "dot");
        std::regex edge(R"(s(\d+) -> s(\d+) \[color=(blue|red)\])");
        std::map<std::pair<int, std::string>, int> indeg;
        int count = 0;
        for (auto it = std::sregex_iterator(dot.begin(), dot.end(), edge); it != std::sregex_iterator(); ++it) {
            ++count;
            indeg[{std::stoi((*it)[2]), (*it)[3]}]++;
        }
        CHECK(count == 2 * nodes);
        CHECK(static_cast<int>(indeg.size()) == 2 * nodes);
        for (auto& [k, v] : indeg) CHECK(v == 1);
        auto gml = schreier_export(p, "graphml");
        CHECK(gml.find("<graphml") != std::string::npos);
    }
    try {
        schreier_export(cube(), "svg");
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.kind() == "UnsupportedFormat");
    }
}
