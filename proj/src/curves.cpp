#include "kit/curves.hpp"

#include <map>
#include <set>
#include <sstream>

namespace kit {

const char* letter_token(Letter l) {
    switch (l) {
        case Letter::T0: return "0+";
        case Letter::T0inv: return "0-";
        case Letter::T2: return "2+";
        case Letter::T2inv: return "2-";
    }
    return "?";
}

Letter inverse_letter(Letter l) { return static_cast<Letter>(static_cast<int>(l) ^ 1); }

std::vector<Letter> parse_word(const std::string& s) {
    std::istringstream in(s);
    std::vector<Letter> out;
    std::string tok;
    while (in >> tok) {
        if (tok == "0+") out.push_back(Letter::T0);
        else if (tok == "0-") out.push_back(Letter::T0inv);
        else if (tok == "2+") out.push_back(Letter::T2);
        else if (tok == "2-") out.push_back(Letter::T2inv);
        else throw Error("BadWord", "unknown token '" + tok + "'");
    }
    return out;
}

std::string word_string(const std::vector<Letter>& w) {
    std::string s;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) s += ' ';
        s += letter_token(w[i]);
    }
    return s;
}

int arrow_source(const ArrowPresentation& p, int d) {
    auto u = DoubleArrow::unpack(d);
    if (u.kind == 0) return u.sign > 0 ? p.tinv(0, u.base) : u.base;
    return u.sign > 0 ? u.base : p.t2(u.base);
}

int arrow_target(const ArrowPresentation& p, int d) {
    auto u = DoubleArrow::unpack(d);
    if (u.kind == 0) return u.sign > 0 ? u.base : p.tinv(0, u.base);
    return u.sign > 0 ? p.t2(u.base) : u.base;
}

Letter arrow_label(int d) {
    auto u = DoubleArrow::unpack(d);
    if (u.kind == 0) return u.sign > 0 ? Letter::T0 : Letter::T0inv;
    return u.sign > 0 ? Letter::T2 : Letter::T2inv;
}

int flip_arrow(int d) { return d ^ 1; }

int step_arrow(const ArrowPresentation& p, int site, Letter l) {
    switch (l) {
        case Letter::T0: return darrow(p.t0(site), 0, 1);
        case Letter::T0inv: return darrow(site, 0, -1);
        case Letter::T2: return darrow(site, 2, 1);
        case Letter::T2inv: return darrow(p.tinv(2, site), 2, -1);
    }
    return -1;
}

int curve_end(const ArrowPresentation& p, const OpCurve& c) {
    return c.empty() ? c.start : arrow_target(p, c.arrows.back());
}

std::vector<int> visited_sites(const ArrowPresentation& p, const OpCurve& c) {
    std::vector<int> s{c.start};
    for (int d : c.arrows) s.push_back(arrow_target(p, d));
    return s;
}

bool is_valid_curve(const ArrowPresentation& p, const OpCurve& c) {
    if (c.start < 0 || c.start >= p.size()) return false;
    int at = c.start;
    for (int d : c.arrows) {
        if (d < 0 || d >= 4 * p.size() || arrow_source(p, d) != at) return false;
        at = arrow_target(p, d);
    }
    return true;
}

bool is_closed(const ArrowPresentation& p, const OpCurve& c) { return curve_end(p, c) == c.start; }

OpCurve decode(const ArrowPresentation& p, const CodedCurve& c) {
    if (c.base < 0 || c.base >= p.size()) throw Error("BadArrow", "base arrow out of range");
    OpCurve out{c.base, {}};
    int at = c.base;
    for (Letter l : c.word) {
        int d = step_arrow(p, at, l);
        out.arrows.push_back(d);
        at = arrow_target(p, d);
    }
    return out;
}

CodedCurve encode(const ArrowPresentation&, const OpCurve& c) {
    CodedCurve out{c.start, {}};
    for (int d : c.arrows) out.word.push_back(arrow_label(d));
    return out;
}

OpCurve curve_from_word(const ArrowPresentation& p, int base, const std::string& word) {
    return decode(p, CodedCurve{base, parse_word(word)});
}

OpCurve reduce(const OpCurve& c) {
    OpCurve out{c.start, {}};
    for (int d : c.arrows) {
        if (!out.arrows.empty() && out.arrows.back() == flip_arrow(d)) out.arrows.pop_back();
        else out.arrows.push_back(d);
    }
    return out;
}

OpCurve inverse(const ArrowPresentation& p, const OpCurve& c) {
    OpCurve out{curve_end(p, c), {}};
    for (auto it = c.arrows.rbegin(); it != c.arrows.rend(); ++it) out.arrows.push_back(flip_arrow(*it));
    return out;
}

OpCurve concat(const ArrowPresentation& p, const OpCurve& a, const OpCurve& b) {
    if (curve_end(p, a) != b.start) throw Error("NotComposable", "curves do not meet");
    OpCurve out = a;
    out.arrows.insert(out.arrows.end(), b.arrows.begin(), b.arrows.end());
    return out;
}

OpCurve trivial_curve(int site) { return OpCurve{site, {}}; }

int face_dim(int d) {
    auto u = DoubleArrow::unpack(d);
    if (u.sign < 0) return 1;
    return u.kind;
}

CellRef face_cell(const SurfaceComplex& cx, int d) {
    int dim = face_dim(d);
    return CellRef{dim, cx.cell_of[dim][DoubleArrow::unpack(d).base]};
}

int next_in_face(const ArrowPresentation& p, int d) {
    auto u = DoubleArrow::unpack(d);
    const int a = u.base;
    if (u.kind == 0) return u.sign > 0 ? darrow(p.t0(a), 0, 1) : darrow(p.t1(a), 2, -1);
    return u.sign > 0 ? darrow(p.t2(a), 2, 1) : darrow(a, 0, -1);
}

Turn turn_of(const ArrowPresentation& p, int d, int next) {
    if (next == flip_arrow(d)) return Turn::Back;
    if (next == next_in_face(p, d)) return Turn::Left;
    if (flip_arrow(d) == next_in_face(p, flip_arrow(next))) return Turn::Right;
    return Turn::Straight;
}

CellRef turn_face(const SurfaceComplex& cx, Turn t, int d) {
    return t == Turn::Right ? face_cell(cx, flip_arrow(d)) : face_cell(cx, d);
}

const char* ribbon_kind_name(RibbonKind k) {
    switch (k) {
        case RibbonKind::Left: return "LeftRibbon";
        case RibbonKind::Right: return "RightRibbon";
        case RibbonKind::None: return "NotRibbon";
    }
    return "?";
}

RibbonKind word_ribbon_kind(const std::vector<Letter>& w) {
    bool left = true, right = true;
    for (Letter l : w) {
        if (l == Letter::T0 || l == Letter::T2inv) left = false;
        else right = false;
    }
    // the empty word is both; report it as left
    if (left) return RibbonKind::Left;
    if (right) return RibbonKind::Right;
    return RibbonKind::None;
}

bool geometric_ribbon(const ArrowPresentation& p, const OpCurve& c) {
    for (size_t j = 0; j + 1 < c.size(); ++j) {
        const int d = c.arrows[j], e = c.arrows[j + 1];
        Turn t = turn_of(p, d, e);
        if (t == Turn::Back) return false;
        if (t == Turn::Left && face_dim(d) == 1) return false;
        if (t == Turn::Right && face_dim(flip_arrow(d)) == 1) return false;
    }
    return true;
}

bool is_proper(const ArrowPresentation& p, const OpCurve& c) {
    std::map<int, int> kind_of;
    for (int d : c.arrows) {
        auto u = DoubleArrow::unpack(d);
        if (!kind_of.emplace(u.base, u.kind).second) return false;
    }
    for (auto [b, k] : kind_of) {
        auto it = kind_of.find(p.t1(b));
        if (it != kind_of.end() && it->second != k) return false;
    }
    return true;
}

bool is_simple(const ArrowPresentation& p, const OpCurve& c) {
    auto s = visited_sites(p, c);
    if (c.size() > 0 && s.front() == s.back()) s.pop_back();
    std::set<int> seen(s.begin(), s.end());
    return seen.size() == s.size();
}

RibbonClass classify_ribbon(const ArrowPresentation& p, const OpCurve& c) {
    const RibbonKind by_word = word_ribbon_kind(encode(p, c).word);
    const bool geo = geometric_ribbon(p, c);
    if (geo != (by_word != RibbonKind::None))
        throw Error("InternalRibbonMismatch", "word and geometric ribbon tests disagree");
    return RibbonClass{by_word, by_word != RibbonKind::None && is_proper(p, c)};
}

Triangle embed_E(const ArrowPresentation& p, const SurfaceComplex& cx, int d) {
    auto u = DoubleArrow::unpack(d);
    const int a = u.base;
    if (u.kind == 0) return Triangle{false, cx.cell_of[0][a], true, u.sign > 0 ? a : p.t1(a)};
    return Triangle{true, u.sign > 0 ? a : p.t1(a), false, cx.cell_of[2][a]};
}

bool borderlines_disjoint(const ArrowPresentation& p, const SurfaceComplex& cx, const OpCurve& c) {
    std::vector<Triangle> t;
    for (int d : c.arrows) t.push_back(embed_E(p, cx, d));
    for (size_t j = 0; j < t.size(); ++j) {
        if (!t[j].b_is_arrow) continue;
        const int eb = cx.cell_of[1][t[j].b];
        for (int k : {static_cast<int>(j) - 1, static_cast<int>(j) + 1}) {
            if (k < 0 || k >= static_cast<int>(t.size()) || !t[k].c_is_arrow) continue;
            if (cx.cell_of[1][t[k].c] == eb) return false;
        }
    }
    return true;
}

OpCurve face_loop(const ArrowPresentation& p, int kind, int a) {
    OpCurve out;
    if (kind == 0) {
        out.start = a;
        const int m = p.orbit_size(0, a);
        int b = a;
        for (int k = 0; k < m; ++k) {
            b = p.t0(b);
            out.arrows.push_back(darrow(b, 0, 1));
        }
    } else if (kind == 1) {
        out.start = p.tinv(0, a);
        out.arrows = {darrow(a, 0, 1), darrow(a, 2, 1), darrow(p.t1(a), 0, 1), darrow(p.t1(a), 2, 1)};
    } else if (kind == 2) {
        out.start = a;
        int b = a;
        const int n = p.orbit_size(2, a);
        for (int k = 0; k < n; ++k) {
            out.arrows.push_back(darrow(b, 2, 1));
            b = p.t2(b);
        }
    } else {
        throw Error("BadKind", "face loop kind must be 0, 1 or 2");
    }
    return out;
}

OpCurve kappa(const ArrowPresentation& p, int a) {
    OpCurve out{p.t1(a), {darrow(p.t1(a), 2, 1)}};
    const int m = p.orbit_size(0, a);
    int b = p.tinv(0, a);  // T0^(m-1) a
    for (int k = m - 1; k >= 1; --k) {
        out.arrows.push_back(darrow(b, 0, -1));
        b = p.tinv(0, b);
    }
    out.arrows.push_back(darrow(a, 2, 1));
    return out;
}

OpCurve lambda(const ArrowPresentation& p, int a) {
    OpCurve out{p.t1(a), {darrow(p.t1(a), 0, -1)}};
    const int n = p.orbit_size(2, a);
    int b = p.t2(a);
    for (int k = 1; k < n; ++k) {
        out.arrows.push_back(darrow(b, 2, 1));
        b = p.t2(b);
    }
    out.arrows.push_back(darrow(a, 0, -1));
    return out;
}

std::vector<int> u_set(const ArrowPresentation& p, int d) {
    auto u = DoubleArrow::unpack(d);
    const int other = 2 - u.kind;
    std::vector<int> out;
    for (int s : {1, -1}) {
        out.push_back(darrow(u.base, u.kind, s));
        out.push_back(darrow(u.base, other, s));
        out.push_back(darrow(p.t1(u.base), other, s));
    }
    return out;
}

bool u_separated(const ArrowPresentation& p, const std::vector<int>& a, const std::vector<int>& b) {
    std::set<int> bs(b.begin(), b.end());
    for (int d : a)
        for (int x : u_set(p, d))
            if (bs.count(x)) return false;
    return true;
}

std::string schreier_export(const ArrowPresentation& p, const std::string& format) {
    std::ostringstream o;
    const int n = p.size();
    if (format == "dot") {
        o << "digraph schreier {\n";
        for (int a = 0; a < n; ++a) o << "  s" << a << " [label=\"" << a << "\"];\n";
        for (int a = 0; a < n; ++a) {
            o << "  s" << a << " -> s" << p.t0(a) << " [color=blue];\n";
            o << "  s" << a << " -> s" << p.t2(a) << " [color=red];\n";
        }
        o << "}\n";
    } else if (format == "graphml") {
        o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
          << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
          << "  <key id=\"color\" for=\"edge\" attr.name=\"color\" attr.type=\"string\"/>\n"
          << "  <graph id=\"schreier\" edgedefault=\"directed\">\n";
        for (int a = 0; a < n; ++a) o << "    <node id=\"s" << a << "\"/>\n";
        int id = 0;
        for (int a = 0; a < n; ++a) {
            o << "    <edge id=\"e" << id++ << "\" source=\"s" << a << "\" target=\"s" << p.t0(a)
              << "\"><data key=\"color\">blue</data></edge>\n";
            o << "    <edge id=\"e" << id++ << "\" source=\"s" << a << "\" target=\"s" << p.t2(a)
              << "\"><data key=\"color\">red</data></edge>\n";
        }
        o << "  </graph>\n</graphml>\n";
    } else {
        throw Error("UnsupportedFormat", format);
    }
    return o.str();
}

}  // namespace kit
