#include "kit/homotopy.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <set>

namespace kit {

namespace {

const char* const kMoveNames[] = {"VertexContract", "VertexRelax",    "FaceContract",
                                  "FaceRelax",      "KappaContract",  "KappaRelax",
                                  "LambdaContract", "LambdaRelax",    "Circular"};

OpCurve single(const ArrowPresentation& p, int d) { return OpCurve{arrow_source(p, d), {d}}; }

// inverse T0 map of the dual of the double: rotates out-arrows at a site
int rotate_out(const ArrowPresentation& p, int d) {
    auto u = DoubleArrow::unpack(d);
    const int b = u.base;
    if (u.kind == 0) return u.sign < 0 ? darrow(p.t0(b), 0, 1) : darrow(p.t1(b), 2, -1);
    return u.sign > 0 ? darrow(b, 0, -1) : darrow(p.t2(b), 2, 1);
}

int flat_of(const SurfaceComplex& cx, int dim, int arrow) { return cx.flat(dim, cx.cell_of[dim][arrow]); }

std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

bool matches_at(const OpCurve& c, int pos, const OpCurve& pat) {
    if (pos < 0 || pos + pat.size() > c.size()) return false;
    return std::equal(pat.arrows.begin(), pat.arrows.end(), c.arrows.begin() + pos);
}

// Greedy planner state: the current ribbon and the cells not yet swept.
struct Planner {
    const ArrowPresentation& p;
    const SurfaceComplex& cx;
    OpCurve curve;
    MovePlan plan;
    std::vector<char> rem;

    Planner(const ArrowPresentation& p_, const SurfaceComplex& cx_, OpCurve c, const std::vector<int>& region)
        : p(p_), cx(cx_), curve(std::move(c)), rem(cx_.total_cells(), 0) {
        for (int k : region) rem[k] = 1;
    }

    bool try_move(const HomotopyMove& m) {
        OpCurve next = apply_move(p, curve, m);
        if (!is_proper(p, next)) return false;
        curve = std::move(next);
        plan.moves.push_back(m);
        return true;
    }

    void force(const HomotopyMove& m) {
        curve = apply_move(p, curve, m);
        plan.moves.push_back(m);
    }

    // vertex + edge from the left of the curve to its right
    void kappa_relax_sweep() {
        for (bool changed = true; changed;) {
            changed = false;
            for (int pos = 0; pos < static_cast<int>(curve.size()) && !changed; ++pos) {
                auto u = DoubleArrow::unpack(curve.arrows[pos]);
                if (u.kind != 0 || u.sign > 0) continue;
                const int a = p.t1(u.base);
                const int e = flat_of(cx, 1, a), w = flat_of(cx, 0, a);
                if (!rem[e] || !rem[w]) continue;
                if (try_move({MoveKind::KappaRelax, pos, a, false})) {
                    rem[e] = rem[w] = 0;
                    changed = true;
                }
            }
        }
    }

    // face + edge from the right of the curve to its left
    void lambda_relax_sweep() {
        for (bool changed = true; changed;) {
            changed = false;
            for (int pos = 0; pos < static_cast<int>(curve.size()) && !changed; ++pos) {
                auto u = DoubleArrow::unpack(curve.arrows[pos]);
                if (u.kind != 2 || u.sign < 0) continue;
                const int a = p.t1(u.base);
                const int e = flat_of(cx, 1, a), f = flat_of(cx, 2, a);
                if (!rem[e] || !rem[f]) continue;
                if (try_move({MoveKind::LambdaRelax, pos, a, false})) {
                    rem[e] = rem[f] = 0;
                    changed = true;
                }
            }
        }
    }

    // leaf face + edge from the left to the right
    void lambda_contract_sweep(int root) {
        for (bool changed = true; changed;) {
            changed = false;
            for (int pos = 0; pos < static_cast<int>(curve.size()) && !changed; ++pos) {
                auto u = DoubleArrow::unpack(curve.arrows[pos]);
                if (u.kind != 0 || u.sign > 0) continue;
                const int a = p.t1(u.base);
                const int e = flat_of(cx, 1, a), f = flat_of(cx, 2, a);
                if (!rem[e] || !rem[f] || f == root) continue;
                if (!matches_at(curve, pos, lambda(p, a))) continue;
                if (try_move({MoveKind::LambdaContract, pos, a, false})) {
                    rem[e] = rem[f] = 0;
                    changed = true;
                }
            }
        }
    }

    // leaf vertex + edge from the right to the left
    void kappa_contract_sweep(int root) {
        for (bool changed = true; changed;) {
            changed = false;
            for (int pos = 0; pos < static_cast<int>(curve.size()) && !changed; ++pos) {
                auto u = DoubleArrow::unpack(curve.arrows[pos]);
                if (u.kind != 2 || u.sign < 0) continue;
                const int a = p.t1(u.base);
                const int e = flat_of(cx, 1, a), v = flat_of(cx, 0, a);
                if (!rem[e] || !rem[v] || v == root) continue;
                if (!matches_at(curve, pos, kappa(p, a))) continue;
                if (try_move({MoveKind::KappaContract, pos, a, false})) {
                    rem[e] = rem[v] = 0;
                    changed = true;
                }
            }
        }
    }

    MovePlan finish() {
        std::vector<int> sup;
        for (auto& m : plan.moves) {
            auto s = move_support(cx, m);
            sup.insert(sup.end(), s.begin(), s.end());
        }
        plan.support = sorted_unique(sup);
        plan.proper_throughout = true;
        return plan;
    }
};

void require_proper_left(const ArrowPresentation& p, const OpCurve& c, const char* kind, bool closed) {
    if (!is_valid_curve(p, c)) throw Error(kind, "invalid curve");
    auto rc = classify_ribbon(p, c);
    if (rc.kind != RibbonKind::Left || !rc.proper) throw Error(kind, "expected a proper left ribbon");
    if (closed && !is_closed(p, c)) throw Error(kind, "expected a closed ribbon");
}

std::vector<int> closure(const SurfaceComplex& cx, const std::vector<int>& cells) {
    std::set<int> out(cells.begin(), cells.end());
    for (int k : cells) {
        auto r = cx.unflat(k);
        if (r.dim == 2)
            for (int e : cx.bd[2][r.id]) {
                out.insert(cx.flat(1, e));
                for (int v : cx.bd[1][e]) out.insert(cx.flat(0, v));
            }
        if (r.dim == 1)
            for (int v : cx.bd[1][r.id]) out.insert(cx.flat(0, v));
    }
    return {out.begin(), out.end()};
}

}  // namespace

const char* move_kind_name(MoveKind k) { return kMoveNames[static_cast<int>(k)]; }

MoveKind parse_move_kind(const std::string& s) {
    for (int i = 0; i < 9; ++i)
        if (s == kMoveNames[i]) return static_cast<MoveKind>(i);
    throw Error("BadMove", "unknown move kind '" + s + "'");
}

OpCurve move_pattern(const ArrowPresentation& p, const HomotopyMove& m) {
    const int a = m.arrow;
    OpCurve pat;
    switch (m.kind) {
        case MoveKind::VertexContract: pat = inverse(p, face_loop(p, 0, a)); break;
        case MoveKind::FaceContract: pat = face_loop(p, 2, a); break;
        case MoveKind::KappaContract: pat = kappa(p, a); break;
        case MoveKind::LambdaContract: pat = lambda(p, a); break;
        case MoveKind::VertexRelax:
        case MoveKind::FaceRelax: pat = trivial_curve(a); break;
        case MoveKind::KappaRelax: pat = single(p, darrow(p.t1(a), 0, -1)); break;
        case MoveKind::LambdaRelax: pat = single(p, darrow(p.t1(a), 2, 1)); break;
        case MoveKind::Circular: return OpCurve{};
    }
    return m.right ? inverse(p, pat) : pat;
}

OpCurve move_replacement(const ArrowPresentation& p, const HomotopyMove& m) {
    switch (m.kind) {
        case MoveKind::VertexContract: return move_pattern(p, {MoveKind::VertexRelax, 0, m.arrow, m.right});
        case MoveKind::FaceContract: return move_pattern(p, {MoveKind::FaceRelax, 0, m.arrow, m.right});
        case MoveKind::KappaContract: return move_pattern(p, {MoveKind::KappaRelax, 0, m.arrow, m.right});
        case MoveKind::LambdaContract: return move_pattern(p, {MoveKind::LambdaRelax, 0, m.arrow, m.right});
        case MoveKind::VertexRelax: return move_pattern(p, {MoveKind::VertexContract, 0, m.arrow, m.right});
        case MoveKind::FaceRelax: return move_pattern(p, {MoveKind::FaceContract, 0, m.arrow, m.right});
        case MoveKind::KappaRelax: return move_pattern(p, {MoveKind::KappaContract, 0, m.arrow, m.right});
        case MoveKind::LambdaRelax: return move_pattern(p, {MoveKind::LambdaContract, 0, m.arrow, m.right});
        case MoveKind::Circular: break;
    }
    return OpCurve{};
}

OpCurve apply_move(const ArrowPresentation& p, const OpCurve& rho, const HomotopyMove& m) {
    if (m.kind == MoveKind::Circular) {
        if (!is_closed(p, rho)) throw Error("CircularOnOpenCurve", "circular move needs a closed curve");
        const int n = static_cast<int>(rho.size());
        if (n == 0) return rho;
        if (m.pos < 0 || m.pos >= n) throw Error("PatternMismatch", "circular position out of range");
        OpCurve out{visited_sites(p, rho)[m.pos], {}};
        for (int k = 0; k < n; ++k) out.arrows.push_back(rho.arrows[(m.pos + k) % n]);
        return out;
    }
    if (m.arrow < 0 || m.arrow >= p.size()) throw Error("PatternMismatch", "witness arrow out of range");
    const OpCurve pat = move_pattern(p, m);
    const OpCurve rep = move_replacement(p, m);
    if (m.pos < 0 || m.pos > static_cast<int>(rho.size()) || !matches_at(rho, m.pos, pat) ||
        visited_sites(p, rho)[m.pos] != pat.start)
        throw Error("PatternMismatch", std::string(move_kind_name(m.kind)) + " pattern not found at position " +
                                           std::to_string(m.pos));
    OpCurve out{rho.start, {}};
    out.arrows.assign(rho.arrows.begin(), rho.arrows.begin() + m.pos);
    out.arrows.insert(out.arrows.end(), rep.arrows.begin(), rep.arrows.end());
    out.arrows.insert(out.arrows.end(), rho.arrows.begin() + m.pos + pat.size(), rho.arrows.end());
    return out;
}

std::vector<int> move_support(const SurfaceComplex& cx, const HomotopyMove& m) {
    const int a = m.arrow;
    switch (m.kind) {
        case MoveKind::VertexContract:
        case MoveKind::VertexRelax: return {flat_of(cx, 0, a)};
        case MoveKind::FaceContract:
        case MoveKind::FaceRelax: return {flat_of(cx, 2, a)};
        case MoveKind::KappaContract:
        case MoveKind::KappaRelax: return {flat_of(cx, 0, a), flat_of(cx, 1, a)};
        case MoveKind::LambdaContract:
        case MoveKind::LambdaRelax: return {flat_of(cx, 1, a), flat_of(cx, 2, a)};
        case MoveKind::Circular: break;
    }
    return {};
}

ReplayResult verify_homotopy(const ArrowPresentation& p, const OpCurve& from, const OpCurve& to,
                             const MovePlan& plan) {
    const auto cx = build_complex(p);
    ReplayResult r;
    OpCurve cur = from;
    r.proper_throughout = is_proper(p, cur);
    bool ribbons = true, ends = true;
    const RibbonKind want = classify_ribbon(p, from).kind;
    std::vector<int> sup;
    for (size_t k = 0; k < plan.moves.size(); ++k) {
        const auto& m = plan.moves[k];
        OpCurve next;
        try {
            next = apply_move(p, cur, m);
        } catch (const Error& e) {
            throw Error("ReplayFailure", "step " + std::to_string(k) + ": " + e.what());
        }
        if (m.kind != MoveKind::Circular &&
            (next.start != cur.start || curve_end(p, next) != curve_end(p, cur)))
            ends = false;
        auto rc = classify_ribbon(p, next);
        if (!next.empty() && rc.kind != want) ribbons = false;
        r.proper_throughout = r.proper_throughout && rc.proper;
        auto s = move_support(cx, m);
        sup.insert(sup.end(), s.begin(), s.end());
        cur = std::move(next);
    }
    r.support = sorted_unique(sup);
    r.final_curve = cur;
    r.ok = ribbons && ends && cur == to;
    return r;
}

std::vector<int> cut_components(const ArrowPresentation& p, const SurfaceComplex& cx,
                                const std::vector<int>& arrows, int* ncomp) {
    const int total = cx.total_cells();
    std::vector<int> parent(total);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    std::vector<char> blocked(4 * p.size(), 0);
    for (int d : arrows) blocked[d] = blocked[flip_arrow(d)] = 1;
    for (int d = 0; d < 4 * p.size(); ++d) {
        if (blocked[d]) continue;
        auto x = face_cell(cx, d), y = face_cell(cx, flip_arrow(d));
        parent[find(cx.flat(x.dim, x.id))] = find(cx.flat(y.dim, y.id));
    }
    std::vector<int> comp(total, -1), label(total, -1);
    int n = 0;
    for (int k = 0; k < total; ++k) {
        int r = find(k);
        if (label[r] < 0) label[r] = n++;
        comp[k] = label[r];
    }
    if (ncomp) *ncomp = n;
    return comp;
}

int region_euler(const SurfaceComplex& cx, const std::vector<int>& region) {
    int chi = 0;
    for (int k : region) chi += (cx.unflat(k).dim == 1) ? -1 : 1;
    return chi;
}

std::vector<int> left_faces(const SurfaceComplex& cx, const OpCurve& c) {
    std::vector<int> out;
    for (int d : c.arrows) {
        auto r = face_cell(cx, d);
        out.push_back(cx.flat(r.dim, r.id));
    }
    return sorted_unique(out);
}

std::vector<int> right_faces(const SurfaceComplex& cx, const OpCurve& c) {
    std::vector<int> out;
    for (int d : c.arrows) {
        auto r = face_cell(cx, flip_arrow(d));
        out.push_back(cx.flat(r.dim, r.id));
    }
    return sorted_unique(out);
}

std::vector<OpCurve> boundary_curves(const ArrowPresentation& p, const SurfaceComplex& cx,
                                     const std::vector<int>& region) {
    std::vector<char> in(cx.total_cells(), 0);
    for (int k : region) in[k] = 1;
    auto inside = [&](int d) {
        auto r = face_cell(cx, d);
        return in[cx.flat(r.dim, r.id)] != 0;
    };
    const int nd = 4 * p.size();
    std::vector<char> bnd(nd, 0), used(nd, 0);
    for (int d = 0; d < nd; ++d) bnd[d] = inside(d) && !inside(flip_arrow(d));
    std::vector<OpCurve> out;
    for (int s = 0; s < nd; ++s) {
        if (!bnd[s] || used[s]) continue;
        OpCurve c{arrow_source(p, s), {}};
        int d = s;
        do {
            used[d] = 1;
            c.arrows.push_back(d);
            int x = flip_arrow(d);
            do x = rotate_out(p, x);
            while (!bnd[x]);
            d = x;
        } while (d != s && !used[d]);
        if (d != s) throw Error("InternalBoundary", "boundary trace did not close");
        out.push_back(std::move(c));
    }
    return out;
}

OpCurve rotate_to(const ArrowPresentation& p, const OpCurve& c, int site) {
    if (c.empty() && c.start == site) return c;
    auto vs = visited_sites(p, c);
    for (size_t k = 0; k < c.size(); ++k)
        if (vs[k] == site) return apply_move(p, c, {MoveKind::Circular, static_cast<int>(k), site, false});
    throw Error("NotOnCurve", "site not visited by the curve");
}

std::vector<int> side_region(const ArrowPresentation& p, const SurfaceComplex& cx, const OpCurve& rho,
                             Side side) {
    int ncomp = 0;
    auto comp = cut_components(p, cx, rho.arrows, &ncomp);
    auto lf = left_faces(cx, rho), rf = right_faces(cx, rho);
    std::set<int> lc, rc;
    for (int k : lf) lc.insert(comp[k]);
    for (int k : rf) rc.insert(comp[k]);
    if (ncomp != 2 || lc.size() != 1 || rc.size() != 1 || *lc.begin() == *rc.begin())
        throw Error("NotSeparating", "curve does not cut the faces into a left and a right component");
    const int want = side == Side::Left ? *lc.begin() : *rc.begin();
    std::vector<int> out;
    for (int k = 0; k < cx.total_cells(); ++k)
        if (comp[k] == want) out.push_back(k);
    return out;
}

MovePlan contract_disk(const ArrowPresentation& p, const OpCurve& rho, Side side) {
    require_proper_left(p, rho, "NotARibbon", true);
    const auto cx = build_complex(p);
    auto region = side_region(p, cx, rho, side);
    if (region_euler(cx, region) != 1) throw Error("RegionNotDisk", "region Euler characteristic is not 1");
    Planner pl(p, cx, rho, region);
    const int s = rho.start;
    if (side == Side::Left) {
        const int root = flat_of(cx, 2, s);
        pl.kappa_relax_sweep();
        pl.lambda_contract_sweep(root);
        if (pl.curve == face_loop(p, 2, s)) pl.force({MoveKind::FaceContract, 0, s, false});
    } else {
        const int root = flat_of(cx, 0, s);
        pl.lambda_relax_sweep();
        pl.kappa_contract_sweep(root);
        if (pl.curve == inverse(p, face_loop(p, 0, s))) pl.force({MoveKind::VertexContract, 0, s, false});
    }
    if (!pl.curve.empty()) throw Error("PlanFailure", "greedy contraction did not reach the trivial curve");
    return pl.finish();
}

MovePlan connect_homotopy(const ArrowPresentation& p, const OpCurve& rho1, const OpCurve& rho2) {
    require_proper_left(p, rho1, "NotABoundary", false);
    require_proper_left(p, rho2, "NotABoundary", false);
    if (rho1.start != rho2.start || curve_end(p, rho1) != curve_end(p, rho2))
        throw Error("NotABoundary", "ribbons are not parallel");
    if (rho1 == rho2) return MovePlan{};
    const auto cx = build_complex(p);
    // cut along both ribbons; B collects the components on the left of rho1 and the right of rho2
    std::vector<int> cut = rho1.arrows;
    cut.insert(cut.end(), rho2.arrows.begin(), rho2.arrows.end());
    int ncomp = 0;
    auto comp = cut_components(p, cx, cut, &ncomp);
    const std::set<int> a1(rho1.arrows.begin(), rho1.arrows.end()), a2(rho2.arrows.begin(), rho2.arrows.end());
    auto cell = [&](int d) {
        auto r = face_cell(cx, d);
        return cx.flat(r.dim, r.id);
    };
    std::set<int> inB;
    for (int d : rho1.arrows)
        if (!a2.count(d)) inB.insert(comp[cell(d)]);
    for (int d : rho2.arrows)
        if (!a1.count(d)) inB.insert(comp[cell(flip_arrow(d))]);
    for (int d : rho1.arrows)
        if (inB.count(comp[cell(flip_arrow(d))])) throw Error("NotABoundary", "ribbons do not bound a region");
    for (int d : rho2.arrows)
        if (inB.count(comp[cell(d)])) throw Error("NotABoundary", "ribbons do not bound a region");
    std::vector<std::vector<int>> parts(ncomp);
    std::vector<int> region;
    for (int k = 0; k < cx.total_cells(); ++k)
        if (inB.count(comp[k])) {
            parts[comp[k]].push_back(k);
            region.push_back(k);
        }
    for (int c : inB)
        if (region_euler(cx, closure(cx, parts[c])) != 1)
            throw Error("NotABoundary", "region between the ribbons is not a disk");
    Planner pl(p, cx, rho1, region);
    pl.kappa_relax_sweep();
    pl.lambda_contract_sweep(-1);
    if (!(pl.curve == rho2)) throw Error("NotABoundary", "planner did not reach the target ribbon");
    return pl.finish();
}

MovePlan annulus_homotopy(const ArrowPresentation& p, const OpCurve& rho1, const OpCurve& rho2) {
    require_proper_left(p, rho1, "NotAnAnnulus", true);
    require_proper_left(p, rho2, "NotAnAnnulus", true);
    const auto cx = build_complex(p);
    std::vector<int> cut = rho1.arrows;
    cut.insert(cut.end(), rho2.arrows.begin(), rho2.arrows.end());
    auto comp = cut_components(p, cx, cut);
    auto l1 = left_faces(cx, rho1), r2 = right_faces(cx, rho2);
    const int c = comp[l1.front()];
    for (int k : l1)
        if (comp[k] != c) throw Error("NotAnAnnulus", "left side of the first ribbon is not connected");
    for (int k : r2)
        if (comp[k] != c) throw Error("NotAnAnnulus", "ribbons do not bound a common region");
    for (int k : right_faces(cx, rho1))
        if (comp[k] == c) throw Error("NotAnAnnulus", "region wraps around the first ribbon");
    for (int k : left_faces(cx, rho2))
        if (comp[k] == c) throw Error("NotAnAnnulus", "region wraps around the second ribbon");
    std::vector<int> region;
    for (int k = 0; k < cx.total_cells(); ++k)
        if (comp[k] == c) region.push_back(k);
    if (region_euler(cx, region) != 0) throw Error("NotAnAnnulus", "region Euler characteristic is not 0");
    Planner pl(p, cx, rho1, region);
    pl.kappa_relax_sweep();
    auto vs = visited_sites(p, pl.curve);
    auto it = std::find(vs.begin(), vs.end() - 1, rho2.start);
    if (it == vs.end() - 1) throw Error("NotAnAnnulus", "intermediate cycle misses the target base point");
    const int k = static_cast<int>(it - vs.begin());
    if (k != 0) pl.force({MoveKind::Circular, k, rho2.start, false});
    pl.lambda_contract_sweep(-1);
    if (!(pl.curve == rho2)) throw Error("NotAnAnnulus", "planner did not reach the target ribbon");
    return pl.finish();
}

RectifyResult rectify(const ArrowPresentation& p, const OpCurve& gamma) {
    RectifyResult r;
    r.ribbon = trivial_curve(gamma.start);
    for (int d : gamma.arrows) {
        const int at = curve_end(p, r.ribbon);
        const Letter l = arrow_label(d);
        if (l == Letter::T0inv || l == Letter::T2) {
            r.ribbon.arrows.push_back(d);
            continue;
        }
        std::vector<Letter> h;
        if (l == Letter::T0) h.assign(p.orbit_size(0, at) - 1, Letter::T0inv);
        else h.assign(p.orbit_size(2, at) - 1, Letter::T2);
        const OpCurve good = decode(p, CodedCurve{at, h});
        Lasso lasso{r.ribbon, concat(p, single(p, d), inverse(p, good))};
        r.lassos.push_back(std::move(lasso));
        r.ribbon = concat(p, r.ribbon, good);
    }
    return r;
}

bool is_face_loop(const ArrowPresentation& p, const OpCurve& c) {
    if (c.empty() || !is_closed(p, c)) return false;
    const int x = c.start;
    for (int kind : {0, 1, 2}) {
        const int a = kind == 1 ? p.t0(x) : x;
        auto loop = face_loop(p, kind, a);
        if (c == loop || c == inverse(p, loop)) return true;
    }
    return false;
}

bool verify_rectify(const ArrowPresentation& p, const OpCurve& gamma, const RectifyResult& r) {
    if (word_ribbon_kind(encode(p, r.ribbon).word) != RibbonKind::Left) return false;
    if (r.ribbon.start != gamma.start || curve_end(p, r.ribbon) != curve_end(p, gamma)) return false;
    OpCurve prod = trivial_curve(gamma.start);
    for (const auto& l : r.lassos) {
        if (!is_face_loop(p, l.loop) || l.tail.start != gamma.start) return false;
        prod = concat(p, prod, concat(p, concat(p, l.tail, l.loop), inverse(p, l.tail)));
    }
    return reduce(prod) == reduce(concat(p, gamma, inverse(p, r.ribbon)));
}

TreeCurve tree_curve(const ArrowPresentation& p, const std::vector<int>& cells, std::optional<int> root) {
    const auto cx = build_complex(p);
    std::vector<int> nodes, edges;
    int node_dim = -1;
    for (int k : sorted_unique(cells)) {
        auto r = cx.unflat(k);
        if (r.dim == 1) {
            edges.push_back(r.id);
            continue;
        }
        if (node_dim >= 0 && node_dim != r.dim) throw Error("NotATree", "mixes vertices and faces");
        node_dim = r.dim;
        nodes.push_back(r.id);
    }
    if (node_dim < 0) throw Error("NotATree", "tree has no vertex or face");
    const bool dual = node_dim == 2;
    std::set<int> node_set(nodes.begin(), nodes.end()), edge_set(edges.begin(), edges.end());
    auto ends_of = [&](int e) { return dual ? cx.cb[1][e] : cx.bd[1][e]; };
    const int nd = dual ? 2 : 0;

    int root_edge = -1;
    if (root) {
        const int x = *root;
        if (x < 0 || x >= p.size()) throw Error("BadRoot", "root arrow out of range");
        root_edge = cx.cell_of[1][x];
        if (!edge_set.count(root_edge) || !node_set.count(cx.cell_of[nd][p.t1(x)]) ||
            node_set.count(cx.cell_of[nd][x]))
            throw Error("BadRoot", "root edge must join the tree to a cell outside it");
    }
    for (int e : edges) {
        if (e == root_edge) continue;
        for (int v : ends_of(e))
            if (!node_set.count(v)) throw Error("NotATree", "edge leaves the tree");
    }
    const int expect = root ? 0 : 1;
    if (static_cast<int>(nodes.size()) - static_cast<int>(edges.size()) != expect)
        throw Error("NotATree", "cell counts do not form a tree");

    TreeCurve out;
    out.tree = sorted_unique(cells);
    out.rooted = root.has_value();
    out.root = root.value_or(-1);

    OpCurve curve;
    std::set<int> swept, used_edges;
    std::deque<int> queue;
    if (root) {
        const int x = *root;
        curve = single(p, darrow(x, dual ? 2 : 0, dual ? 1 : -1));
        const int a = p.t1(x);
        curve = apply_move(p, curve, {dual ? MoveKind::LambdaRelax : MoveKind::KappaRelax, 0, a, false});
        swept.insert(cx.cell_of[nd][a]);
        used_edges.insert(root_edge);
        queue.push_back(cx.cell_of[nd][a]);
    } else {
        int best = -1;
        for (int v : nodes)
            for (int a : cx.cells[nd][v].members)
                if (best < 0 || a < best) best = a;
        curve = dual ? face_loop(p, 2, best) : inverse(p, face_loop(p, 0, best));
        swept.insert(cx.cell_of[nd][best]);
        queue.push_back(cx.cell_of[nd][best]);
    }
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int e : edges) {
            if (used_edges.count(e)) continue;
            auto ends = ends_of(e);
            if (std::find(ends.begin(), ends.end(), u) == ends.end()) continue;
            const int w = ends[0] == u ? ends[1] : ends[0];
            if (swept.count(w)) throw Error("NotATree", "tree contains a cycle");
            bool grafted = false;
            for (int pos = 0; pos < static_cast<int>(curve.size()) && !grafted; ++pos) {
                auto du = DoubleArrow::unpack(curve.arrows[pos]);
                const int c = du.base;
                if (dual ? (du.kind != 2 || du.sign < 0) : (du.kind != 0 || du.sign > 0)) continue;
                if (cx.cell_of[1][c] != e || cx.cell_of[nd][c] != u) continue;
                curve = apply_move(p, curve, {dual ? MoveKind::LambdaRelax : MoveKind::KappaRelax, pos, p.t1(c), false});
                grafted = true;
            }
            if (!grafted) throw Error("InternalTree", "no graft position for a tree edge");
            used_edges.insert(e);
            swept.insert(w);
            queue.push_back(w);
        }
    }
    if (swept.size() != nodes.size()) throw Error("NotATree", "tree is not connected");
    out.curve = curve;
    return out;
}

}  // namespace kit
