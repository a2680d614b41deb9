#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kit/curves.hpp"

namespace kit {

enum class MoveKind {
    VertexContract,
    VertexRelax,
    FaceContract,
    FaceRelax,
    KappaContract,
    KappaRelax,
    LambdaContract,
    LambdaRelax,
    Circular
};

const char* move_kind_name(MoveKind k);
MoveKind parse_move_kind(const std::string& s);  // throws Error("BadMove")

// pos indexes the first arrow of the rewritten subribbon; for Circular the new base.
// right = the move acts on a right ribbon with inverted patterns.
struct HomotopyMove {
    MoveKind kind = MoveKind::VertexContract;
    int pos = 0;
    int arrow = 0;
    bool right = false;
};

struct MovePlan {
    std::vector<HomotopyMove> moves;
    std::vector<int> support;  // flat cell ids, sorted
    bool proper_throughout = true;
};

struct ReplayResult {
    bool ok = false;
    std::vector<int> support;
    bool proper_throughout = true;
    OpCurve final_curve;
};

struct Lasso {
    OpCurve tail;
    OpCurve loop;
};

struct RectifyResult {
    OpCurve ribbon;
    std::vector<Lasso> lassos;
};

struct TreeCurve {
    std::vector<int> tree;  // flat cell ids
    bool rooted = false;
    int root = -1;  // arrow of the root curve
    OpCurve curve;
};

// Pattern the move rewrites and its replacement, anchored at the given arrow.
OpCurve move_pattern(const ArrowPresentation& p, const HomotopyMove& m);
OpCurve move_replacement(const ArrowPresentation& p, const HomotopyMove& m);

// throws PatternMismatch, CircularOnOpenCurve
OpCurve apply_move(const ArrowPresentation& p, const OpCurve& rho, const HomotopyMove& m);
std::vector<int> move_support(const SurfaceComplex& cx, const HomotopyMove& m);

// throws Error("ReplayFailure") naming the failing step
ReplayResult verify_homotopy(const ArrowPresentation& p, const OpCurve& from, const OpCurve& to,
                             const MovePlan& plan);

// Regions are sets of flat cell ids of the complex (= faces of the dual of the double).
// comp[k] is the component of cell k after cutting along the given arrows and their opposites.
std::vector<int> cut_components(const ArrowPresentation& p, const SurfaceComplex& cx,
                                const std::vector<int>& arrows, int* ncomp = nullptr);
int region_euler(const SurfaceComplex& cx, const std::vector<int>& region);
std::vector<int> left_faces(const SurfaceComplex& cx, const OpCurve& c);
std::vector<int> right_faces(const SurfaceComplex& cx, const OpCurve& c);
// Closed boundary opcurves with the region on their left.
std::vector<OpCurve> boundary_curves(const ArrowPresentation& p, const SurfaceComplex& cx,
                                     const std::vector<int>& region);
// The closed curve started at a different visited site.
OpCurve rotate_to(const ArrowPresentation& p, const OpCurve& c, int site);

enum class Side { Left, Right };
// The component on the given side, as sorted flat ids; throws NotSeparating.
std::vector<int> side_region(const ArrowPresentation& p, const SurfaceComplex& cx, const OpCurve& rho,
                             Side side);

// throws NotSeparating, RegionNotDisk, NotARibbon
MovePlan contract_disk(const ArrowPresentation& p, const OpCurve& rho, Side side);
// throws NotABoundary
MovePlan connect_homotopy(const ArrowPresentation& p, const OpCurve& rho1, const OpCurve& rho2);
// throws NotAnAnnulus
MovePlan annulus_homotopy(const ArrowPresentation& p, const OpCurve& rho1, const OpCurve& rho2);

RectifyResult rectify(const ArrowPresentation& p, const OpCurve& gamma);
bool verify_rectify(const ArrowPresentation& p, const OpCurve& gamma, const RectifyResult& r);
bool is_face_loop(const ArrowPresentation& p, const OpCurve& c);

// cells: vertices+edges (tree) or faces+edges (dual tree), flat ids.
// root: arrow x of the root curve (x)0- for trees, (x)2+ for dual trees.
// throws NotATree, BadRoot
TreeCurve tree_curve(const ArrowPresentation& p, const std::vector<int>& cells,
                     std::optional<int> root = std::nullopt);

}  // namespace kit
