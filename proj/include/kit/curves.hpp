#pragma once

#include <string>
#include <vector>

#include "kit/presentation.hpp"
#include "kit/transform.hpp"

namespace kit {

// Curves on the dual of the double. Vertices are sites, identified with arrows
// of the presentation; arrows are packed DoubleArrows.

enum class Letter : int { T0 = 0, T0inv = 1, T2 = 2, T2inv = 3 };

const char* letter_token(Letter l);  // "0+", "0-", "2+", "2-"
Letter inverse_letter(Letter l);
// Whitespace separated tokens; throws Error("BadWord").
std::vector<Letter> parse_word(const std::string& s);
std::string word_string(const std::vector<Letter>& w);

struct CodedCurve {
    int base = 0;
    std::vector<Letter> word;  // first letter is the first step
};

// Opcurve (d_1, ..., d_n) traversed from `start`.
struct OpCurve {
    int start = 0;
    std::vector<int> arrows;

    size_t size() const { return arrows.size(); }
    bool empty() const { return arrows.empty(); }
    bool operator==(const OpCurve& o) const { return start == o.start && arrows == o.arrows; }
};

int arrow_source(const ArrowPresentation& p, int d);
int arrow_target(const ArrowPresentation& p, int d);
Letter arrow_label(int d);
int flip_arrow(int d);  // the opposite arrow
int step_arrow(const ArrowPresentation& p, int site, Letter l);
int curve_end(const ArrowPresentation& p, const OpCurve& c);
std::vector<int> visited_sites(const ArrowPresentation& p, const OpCurve& c);
bool is_valid_curve(const ArrowPresentation& p, const OpCurve& c);
bool is_closed(const ArrowPresentation& p, const OpCurve& c);

OpCurve decode(const ArrowPresentation& p, const CodedCurve& c);
CodedCurve encode(const ArrowPresentation& p, const OpCurve& c);
OpCurve curve_from_word(const ArrowPresentation& p, int base, const std::string& word);

OpCurve reduce(const OpCurve& c);
OpCurve inverse(const ArrowPresentation& p, const OpCurve& c);
// throws Error("NotComposable")
OpCurve concat(const ArrowPresentation& p, const OpCurve& a, const OpCurve& b);
OpCurve trivial_curve(int site);

// The face of the dual of the double on the left of d, as a cell of the complex.
int face_dim(int d);
CellRef face_cell(const SurfaceComplex& cx, int d);
int next_in_face(const ArrowPresentation& p, int d);  // the T2-map of the dual of the double

enum class Turn { Back, Left, Right, Straight };
Turn turn_of(const ArrowPresentation& p, int d, int next);
// the face a left or right turn goes around
CellRef turn_face(const SurfaceComplex& cx, Turn t, int d);

enum class RibbonKind { Left, Right, None };
const char* ribbon_kind_name(RibbonKind k);

struct RibbonClass {
    RibbonKind kind = RibbonKind::None;
    bool proper = false;
};

RibbonKind word_ribbon_kind(const std::vector<Letter>& w);
bool geometric_ribbon(const ArrowPresentation& p, const OpCurve& c);
bool is_proper(const ArrowPresentation& p, const OpCurve& c);
bool is_simple(const ArrowPresentation& p, const OpCurve& c);
// Throws Error("InternalRibbonMismatch") if word and geometric tests disagree.
RibbonClass classify_ribbon(const ArrowPresentation& p, const OpCurve& c);

// Triangle embedding: each side is either a cell (vertex/face) or an arrow.
struct Triangle {
    bool c_is_arrow = false;
    int c = 0;  // arrow, or vertex id
    bool b_is_arrow = false;
    int b = 0;  // arrow, or face id
};
Triangle embed_E(const ArrowPresentation& p, const SurfaceComplex& cx, int d);
// the two borderlines do not cross at any step
bool borderlines_disjoint(const ArrowPresentation& p, const SurfaceComplex& cx, const OpCurve& c);

// kind 0: alpha_a, 1: beta_a, 2: gamma_a
OpCurve face_loop(const ArrowPresentation& p, int kind, int a);
OpCurve kappa(const ArrowPresentation& p, int a);
OpCurve lambda(const ArrowPresentation& p, int a);

// Arrows incident to d on the boundary of its type 1 face (6 arrows).
std::vector<int> u_set(const ArrowPresentation& p, int d);
bool u_separated(const ArrowPresentation& p, const std::vector<int>& a, const std::vector<int>& b);

// "dot" or "graphml"; throws Error("UnsupportedFormat")
std::string schreier_export(const ArrowPresentation& p, const std::string& format);

}  // namespace kit
