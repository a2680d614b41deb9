#include "kit/states.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>
#include <regex>
#include <set>
#include <unordered_map>

#include "kit/regions.hpp"

namespace kit {

namespace {

constexpr double kRankCutoff = 1e-6;
constexpr int kMaxProbes = 512;

std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

Vec random_amps(std::uint64_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Vec v(static_cast<Eigen::Index>(n));
    for (std::uint64_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = cplx(g(rng), g(rng));
    return v / v.norm();
}

Vec random_unit(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = cplx(g(rng), g(rng));
    return v / v.norm();
}

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

// D(H)* elements used as coefficients: the full basis
std::vector<Vec> dual_basis(const HopfData& ds) {
    std::vector<Vec> out;
    for (int q = 0; q < ds.dim; ++q) out.push_back(ds.basis(q));
    return out;
}

bool sites_disjoint(const SurfaceComplex& cx, int a, int b) {
    return cx.cell_of[0][a] != cx.cell_of[0][b] && cx.cell_of[2][a] != cx.cell_of[2][b];
}

std::optional<std::pair<int, int>> torus_shape(const ArrowPresentation& p) {
    static const std::regex re("torus-(\\d+)x(\\d+)");
    std::smatch mt;
    if (!std::regex_match(p.name(), mt, re)) return std::nullopt;
    return std::make_pair(std::stoi(mt[1]), std::stoi(mt[2]));
}

}  // namespace

std::uint64_t register_dim(int d, int nedges, std::uint64_t cap) {
    std::uint64_t n = 1;
    for (int k = 0; k < nedges; ++k) {
        n *= static_cast<std::uint64_t>(d);
        if (n > cap)
            throw Error("MemoryCap", std::to_string(d) + "^" + std::to_string(nedges) + " amplitudes exceed the cap of " +
                                         std::to_string(cap));
    }
    return n;
}

StateVector StateVector::zero(int d, std::vector<int> edges, std::uint64_t cap) {
    edges = sorted_unique(std::move(edges));
    const std::uint64_t n = register_dim(d, static_cast<int>(edges.size()), cap);
    return StateVector{d, std::move(edges), Vec::Zero(static_cast<Eigen::Index>(n))};
}

StateVector StateVector::random(int d, std::vector<int> edges, std::uint64_t seed, std::uint64_t cap) {
    edges = sorted_unique(std::move(edges));
    const std::uint64_t n = register_dim(d, static_cast<int>(edges.size()), cap);
    return StateVector{d, std::move(edges), random_amps(n, seed)};
}

StateVector StateVector::basis(int d, std::vector<int> edges, const std::vector<int>& labels) {
    StateVector s = zero(d, std::move(edges));
    s.amps(static_cast<Eigen::Index>(s.index(labels))) = 1.0;
    return s;
}

std::vector<int> StateVector::labels(std::uint64_t index) const {
    std::vector<int> out(edges.size());
    for (size_t k = edges.size(); k-- > 0;) {
        out[k] = static_cast<int>(index % d);
        index /= d;
    }
    return out;
}

std::uint64_t StateVector::index(const std::vector<int>& labels) const {
    if (labels.size() != edges.size()) throw Error("DimMismatch", "label count differs from the register size");
    std::uint64_t idx = 0;
    for (int l : labels) {
        if (l < 0 || l >= d) throw Error("DimMismatch", "label out of range");
        idx = idx * d + l;
    }
    return idx;
}

StateVector apply(const ModelOperator& op, const StateVector& psi) {
    if (op.d != psi.d) throw Error("DimMismatch", "operator and state use different algebras");
    for (int e : op.support())
        if (!std::binary_search(psi.edges.begin(), psi.edges.end(), e))
            throw Error("DimMismatch", "operator acts on edge " + std::to_string(e) + " outside the register");
    return StateVector{psi.d, psi.edges, apply_operator(op, psi.edges, psi.amps)};
}

cplx inner(const StateVector& a, const StateVector& b) {
    if (a.edges != b.edges || a.d != b.d) throw Error("DimMismatch", "states on different registers");
    return a.amps.dot(b.amps);
}

double distance(const StateVector& a, const StateVector& b) {
    if (a.edges != b.edges || a.d != b.d) throw Error("DimMismatch", "states on different registers");
    return (a.amps - b.amps).norm();
}

std::vector<int> all_cells(const SurfaceComplex& cx) {
    std::vector<int> out(cx.total_cells());
    std::iota(out.begin(), out.end(), 0);
    return out;
}

std::vector<int> region_edges(const Model& m, const std::vector<int>& region) {
    const auto& cx = m.complex();
    std::set<int> s;
    for (int k : region) {
        const CellRef c = cx.unflat(k);
        if (c.dim == 1) continue;
        for (int a : cx.cells[c.dim][c.id].members) s.insert(m.edge_of(a));
    }
    return {s.begin(), s.end()};
}

std::vector<int> curve_edges(const Model& m, const OpCurve& c) {
    std::set<int> s;
    for (int d : c.arrows) s.insert(m.edge_of(DoubleArrow::unpack(d).base));
    return {s.begin(), s.end()};
}

std::vector<int> edge_union(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out(a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return sorted_unique(out);
}

StateVector project_region(const Model& m, const std::vector<int>& region, const StateVector& psi) {
    const auto& cx = m.complex();
    StateVector out = psi;
    for (int k : region) {
        const CellRef c = cx.unflat(k);
        if (c.dim == 0) out = apply(vertex_projector(m, c.id), out);
        if (c.dim == 2) out = apply(face_projector(m, c.id), out);
    }
    return out;
}

StateVector partial_vacuum(const Model& m, const std::vector<int>& region, const std::vector<int>& edges,
                           std::uint64_t seed, std::uint64_t cap) {
    StateVector v = project_region(m, region, StateVector::random(m.dim(), edge_union(edges, region_edges(m, region)), seed, cap));
    const double n = v.norm();
    if (n < 1e-12) throw Error("EmptyVacuum", "the region projector annihilates the probe");
    v.amps /= n;
    return v;
}

VacuumBasis vacuum_basis(const Model& m, const std::vector<int>& region, const std::vector<int>& edges, int batch,
                         std::uint64_t seed, std::uint64_t cap) {
    if (batch < 1) throw Error("BadArgument", "probe batch must be positive");
    VacuumBasis out;
    out.region = sorted_unique(region);
    out.edges = edge_union(edges, region_edges(m, region));
    const std::uint64_t n = register_dim(m.dim(), static_cast<int>(out.edges.size()), cap);
    std::vector<Vec> cols;
    Mat gram(0, 0);
    std::mt19937_64 seeds(seed);
    auto rank_of = [&](const Eigen::VectorXd& sv, double top) {
        int r = 0;
        for (int i = 0; i < sv.size(); ++i)
            if (sv(i) > kRankCutoff * top) ++r;
        return r;
    };
    int stable = 0, last = -1;
    while (true) {
        for (int b = 0; b < batch; ++b) {
            StateVector v{m.dim(), out.edges, random_amps(n, seeds())};
            v = project_region(m, out.region, v);
            const double nv = v.norm();
            cols.push_back(nv > 0 ? Vec(v.amps / nv) : v.amps);
            const int k = static_cast<int>(cols.size());
            Mat g(k, k);
            g.topLeftCorner(k - 1, k - 1) = gram;
            for (int i = 0; i < k; ++i) {
                g(i, k - 1) = cols[i].dot(cols[k - 1]);
                g(k - 1, i) = std::conj(g(i, k - 1));
            }
            gram = g;
        }
        Eigen::SelfAdjointEigenSolver<Mat> es(gram);
        Eigen::VectorXd sv = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        const double top = sv.size() ? sv.maxCoeff() : 0.0;
        const int r = top > 0 ? rank_of(sv, top) : 0;
        out.rank_history.push_back(r);
        const int k = static_cast<int>(cols.size());
        stable = (r == last && r < k) ? stable + 1 : 0;
        last = r;
        if (stable >= 2) {
            out.probes_used = k;
            out.smallest_kept = 1.0;
            out.largest_dropped = 0.0;
            for (int i = 0; i < sv.size(); ++i) {
                if (sv(i) > kRankCutoff * top)
                    out.smallest_kept = std::min(out.smallest_kept, sv(i) / top);
                else
                    out.largest_dropped = std::max(out.largest_dropped, sv(i) / top);
            }
            // orthonormal basis of the column span from the kept eigenvectors
            for (int i = 0; i < sv.size(); ++i) {
                if (!(sv(i) > kRankCutoff * top)) continue;
                Vec u = Vec::Zero(static_cast<Eigen::Index>(n));
                for (int j = 0; j < k; ++j) u += es.eigenvectors()(j, i) * cols[j];
                for (const auto& w : out.vectors) u -= w.dot(u) * w;
                out.vectors.push_back(u / u.norm());
            }
            return out;
        }
        if (k >= kMaxProbes) throw Error("RankUnstable", "rank did not stabilize within " + std::to_string(k) + " probes");
    }
}

VacuumBasis vacuum_basis(const Model& m, int batch, std::uint64_t seed, std::uint64_t cap) {
    std::vector<int> edges(m.edge_count());
    std::iota(edges.begin(), edges.end(), 0);
    return vacuum_basis(m, all_cells(m.complex()), edges, batch, seed, cap);
}

std::optional<std::vector<std::vector<int>>> group_table(const HopfData& h) {
    const int d = h.dim;
    std::vector<std::vector<int>> table(d, std::vector<int>(d, -1));
    for (const auto& e : h.mult_nz) {
        if (std::abs(e.v - cplx(1)) > 1e-12 || table[e.a][e.b] != -1) return std::nullopt;
        table[e.a][e.b] = e.c;
    }
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j)
            if (table[i][j] < 0) return std::nullopt;
        if (h.cop_of[i].size() != 1 || h.cop_of[i][0].b != i || h.cop_of[i][0].c != i) return std::nullopt;
    }
    return table;
}

long flat_field_classes(const ArrowPresentation& p, const std::vector<std::vector<int>>& table, std::uint64_t cap) {
    const SurfaceComplex cx = build_complex(p);
    const int g = static_cast<int>(table.size());
    const int ne = cx.count(1);
    const std::uint64_t total = register_dim(g, ne, cap);
    int id = -1;
    for (int x = 0; x < g; ++x) {
        bool ok = true;
        for (int y = 0; y < g; ++y) ok = ok && table[x][y] == y;
        if (ok) id = x;
    }
    std::vector<int> inv(g);
    for (int x = 0; x < g; ++x)
        for (int y = 0; y < g; ++y)
            if (table[x][y] == id) inv[x] = y;
    const std::vector<int> orient = default_orientation(p);
    std::vector<int> src(ne), tgt(ne);
    for (int e = 0; e < ne; ++e) {
        src[e] = cx.cell_of[0][orient[e]];
        tgt[e] = cx.cell_of[0][p.t1(orient[e])];
    }
    // face boundaries as (edge, reversed) in traversal order
    std::vector<std::vector<std::pair<int, bool>>> faces;
    for (int f = 0; f < cx.count(2); ++f) {
        std::vector<std::pair<int, bool>> loop;
        const int a0 = cx.cells[2][f].members[0];
        int a = a0;
        do {
            const int e = cx.cell_of[1][a];
            loop.emplace_back(e, orient[e] != a);
            a = p.t2(a);
        } while (a != a0);
        faces.push_back(loop);
    }
    std::vector<int> cfg(ne);
    auto decode_cfg = [&](std::uint64_t x) {
        for (int e = ne; e-- > 0;) {
            cfg[e] = static_cast<int>(x % g);
            x /= g;
        }
    };
    auto encode_cfg = [&](const std::vector<int>& c) {
        std::uint64_t x = 0;
        for (int e = 0; e < ne; ++e) x = x * g + c[e];
        return x;
    };
    std::unordered_map<std::uint64_t, int> flat;
    std::vector<std::uint64_t> flat_list;
    for (std::uint64_t x = 0; x < total; ++x) {
        decode_cfg(x);
        bool ok = true;
        for (const auto& loop : faces) {
            int h = id;
            for (auto [e, rev] : loop) h = table[h][rev ? inv[cfg[e]] : cfg[e]];
            if (h != id) {
                ok = false;
                break;
            }
        }
        if (ok) {
            flat.emplace(x, static_cast<int>(flat_list.size()));
            flat_list.push_back(x);
        }
    }
    std::vector<int> parent(flat_list.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (size_t i = 0; i < flat_list.size(); ++i)
        for (int v = 0; v < cx.count(0); ++v)
            for (int k = 0; k < g; ++k) {
                decode_cfg(flat_list[i]);
                for (int e = 0; e < ne; ++e) {
                    if (src[e] == v) cfg[e] = table[k][cfg[e]];
                    if (tgt[e] == v) cfg[e] = table[cfg[e]][inv[k]];
                }
                const auto it = flat.find(encode_cfg(cfg));
                if (it == flat.end()) throw Error("InternalGaugeViolation", "gauge move left the flat fields");
                parent[find(static_cast<int>(i))] = find(it->second);
            }
    long classes = 0;
    for (size_t i = 0; i < parent.size(); ++i)
        if (find(static_cast<int>(i)) == static_cast<int>(i)) ++classes;
    return classes;
}

StateVector apply_ophol(const Model& m, const HolonomyAccumulator& acc, const Vec& phi, const StateVector& psi) {
    StateVector out{psi.d, psi.edges, Vec::Zero(psi.amps.size())};
    for (int q = 0; q < phi.size(); ++q) {
        if (std::abs(phi(q)) < 1e-15 || acc.slots[q].is_zero()) continue;
        out.amps += phi(q) * apply(acc.slots[q], psi).amps;
    }
    (void)m;
    return out;
}

void ExperimentReport::add(const std::string& name, double r) {
    items.emplace_back(name, r);
    residual = std::max(residual, r);
}

void ExperimentReport::finish() { ok = residual < tolerance; }

// ---------------------------------------------------------------- contraction identities

ExperimentReport verify_contractions(const Model& m, const std::vector<int>& arrows, std::uint64_t seed, double tol) {
    ExperimentReport rep;
    rep.experiment = "contractions";
    rep.tolerance = tol;
    rep.seed = seed;
    const auto& p = m.presentation();
    const auto& cx = m.complex();
    const auto& ds = m.dual_double();
    const auto phis = dual_basis(ds);
    auto single = [&](int dd) { return OpCurve{arrow_source(p, dd), {dd}}; };
    for (int a : arrows) {
        const int ta = p.t1(a);
        const OpCurve alpha = face_loop(p, 0, a), gamma = face_loop(p, 2, a);
        const OpCurve kappa = move_pattern(p, {MoveKind::KappaContract, 0, a, false});
        const OpCurve lambda = move_pattern(p, {MoveKind::LambdaContract, 0, a, false});
        struct Case {
            std::string name;
            OpCurve lhs;
            std::optional<OpCurve> rhs;  // none: counit times Omega
            bool vertex;
        };
        const std::vector<Case> cases{
            {"vertex-loop", alpha, std::nullopt, true},
            {"vertex-loop-inverse", inverse(p, alpha), std::nullopt, true},
            {"face-loop", gamma, std::nullopt, false},
            {"face-loop-inverse", inverse(p, gamma), std::nullopt, false},
            {"kappa", kappa, single(darrow(ta, 0, -1)), true},
            {"kappa-inverse", inverse(p, kappa), single(darrow(ta, 0, 1)), true},
            {"lambda", lambda, single(darrow(ta, 2, 1)), false},
            {"lambda-inverse", inverse(p, lambda), single(darrow(ta, 2, -1)), false},
        };
        const int v = cx.flat(0, cx.cell_of[0][a]), f = cx.flat(2, cx.cell_of[2][a]);
        for (const auto& c : cases) {
            const std::vector<int> region{c.vertex ? v : f};
            std::vector<int> edges = curve_edges(m, c.lhs);
            if (c.rhs) edges = edge_union(edges, curve_edges(m, *c.rhs));
            const StateVector omega = partial_vacuum(m, region, edges, seed + a);
            rep.dims = std::max<std::uint64_t>(rep.dims, omega.amps.size());
            const HolonomyAccumulator lhs = ophol_slots(m, c.lhs.arrows);
            std::optional<HolonomyAccumulator> rhs;
            if (c.rhs) rhs = ophol_slots(m, c.rhs->arrows);
            double r = 0;
            for (const auto& phi : phis) {
                const StateVector left = apply_ophol(m, lhs, phi, omega);
                StateVector right = omega;
                if (rhs)
                    right = apply_ophol(m, *rhs, phi, omega);
                else
                    right.amps *= ds.eps(phi);
                r = std::max(r, distance(left, right));
            }
            rep.add(c.name + "[" + std::to_string(a) + "]", r);
        }
    }
    rep.finish();
    return rep;
}

// ---------------------------------------------------------------- topological invariance

ExperimentReport experiment_invariance(const Model& m, const OpCurve& rho1, const OpCurve& rho2, const MovePlan& plan,
                                       const std::vector<Vec>& phis, std::uint64_t seed, double tol) {
    const auto& p = m.presentation();
    ReplayResult rr;
    try {
        rr = verify_homotopy(p, rho1, rho2, plan);
    } catch (const Error& e) {
        throw Error("ImproperPlan", e.what());
    }
    if (!rr.ok || !rr.proper_throughout) throw Error("ImproperPlan", "the plan is not a proper ribbon-homotopy");
    const bool free = std::any_of(plan.moves.begin(), plan.moves.end(),
                                  [](const HomotopyMove& mv) { return mv.kind == MoveKind::Circular; });
    if (free) {
        const auto& D = m.double_algebra().hopf;
        for (const auto& phi : phis)
            if ((cocommutative_projection(D, phi) - phi).norm() > 1e-10 * std::max(1.0, phi.norm()))
                throw Error("NotCocommutative", "free homotopies need cocommutative coefficients");
    }
    ExperimentReport rep;
    rep.experiment = "invariance";
    rep.tolerance = tol;
    rep.seed = seed;
    const std::vector<int> edges = edge_union(curve_edges(m, rho1), curve_edges(m, rho2));
    const StateVector omega = partial_vacuum(m, rr.support, edges, seed);
    rep.dims = omega.amps.size();
    const HolonomyAccumulator h1 = ophol_slots(m, rho1.arrows), h2 = ophol_slots(m, rho2.arrows);
    double r = 0;
    for (const auto& phi : phis) r = std::max(r, distance(apply_ophol(m, h1, phi, omega), apply_ophol(m, h2, phi, omega)));
    rep.add("ophol-difference", r);
    rep.finish();
    return rep;
}

ExperimentReport experiment_vacuum_preserved(const Model& m, const OpCurve& gamma, const std::vector<Vec>& psis,
                                             std::uint64_t seed, double tol) {
    ExperimentReport rep;
    rep.experiment = "vacuum-preserved";
    rep.tolerance = tol;
    rep.seed = seed;
    const VacuumBasis vb = vacuum_basis(m, 4, seed);
    std::mt19937_64 rng(seed);
    const Vec coef = random_unit(static_cast<int>(vb.vectors.size()), rng);
    StateVector omega = StateVector::zero(m.dim(), vb.edges);
    for (size_t i = 0; i < vb.vectors.size(); ++i) omega.amps += coef(static_cast<Eigen::Index>(i)) * vb.vectors[i];
    rep.dims = omega.amps.size();
    const HolonomyAccumulator h = ophol_slots(m, gamma.arrows);
    const auto cells = all_cells(m.complex());
    double r = 0;
    for (const auto& psi : psis) {
        const StateVector out = apply_ophol(m, h, psi, omega);
        r = std::max(r, distance(project_region(m, cells, out), out));
    }
    rep.add("projector-invariance", r);
    rep.finish();
    return rep;
}

ExperimentReport invariance_suite(const Model& m, std::uint64_t seed, double tol) {
    ExperimentReport rep;
    rep.experiment = "invariance";
    rep.tolerance = tol;
    rep.seed = seed;
    const auto& p = m.presentation();
    const auto& cx = m.complex();
    const auto& D = m.double_algebra().hopf;
    const auto& ds = m.dual_double();
    std::mt19937_64 rng(seed);
    std::vector<Vec> phis, cocom;
    for (int k = 0; k < 3; ++k) {
        phis.push_back(random_unit(ds.dim, rng));
        Vec c = cocommutative_projection(D, random_unit(ds.dim, rng));
        cocom.push_back(c / c.norm());
    }
    auto merge = [&](const std::string& prefix, const ExperimentReport& sub) {
        rep.dims = std::max(rep.dims, sub.dims);
        for (const auto& [name, r] : sub.items) rep.add(prefix + "/" + name, r);
    };
    std::vector<int> arrows{0, p.t1(0)};
    merge("contraction", verify_contractions(m, arrows, seed, tol));

    const auto shape = torus_shape(p);
    const std::uint64_t full = [&]() -> std::uint64_t {
        try {
            return register_dim(m.dim(), m.edge_count());
        } catch (const Error&) {
            return 0;
        }
    }();
    if (shape) {
        const auto [n, mm] = *shape;
        const TorusCells t{n, mm, &cx};
        // disk contraction of a block boundary, general coefficients
        const int w = (n >= 4 && mm >= 4) ? 2 : 1;
        const auto block = torus_block(t, 1 % n, 1 % mm, w, w, false);
        const OpCurve disk = boundary_curves(p, cx, block).at(0);
        const MovePlan cplan = contract_disk(p, disk, Side::Left);
        merge("disk", experiment_invariance(m, disk, trivial_curve(disk.start), cplan, phis, seed, tol));

        // annulus between the two boundaries of a band, cocommutative coefficients
        const auto band = torus_band(t, 1 % mm, true);
        OpCurve outer, inner;
        for (const auto& b : boundary_curves(p, cx, band)) {
            if (classify_ribbon(p, b).kind == RibbonKind::Left)
                outer = b;
            else
                inner = inverse(p, b);
        }
        const MovePlan aplan = annulus_homotopy(p, outer, inner);
        merge("annulus", experiment_invariance(m, outer, inner, aplan, cocom, seed, tol));

        // proper relaxation of a straight ribbon and the connecting plan back
        if (n >= 4 && mm >= 4) {
            const OpCurve straight = curve_from_word(p, t.arrow(0, 1, 0), "2+ 0- 2+ 0- 2+ 0-");
            OpCurve bent = straight;
            std::vector<int> swept;
            for (int step = 0; step < 2; ++step) {
                bool moved = false;
                for (int pos = 0; pos < static_cast<int>(bent.size()) && !moved; ++pos) {
                    const auto u = DoubleArrow::unpack(bent.arrows[pos]);
                    if (u.kind != 2 || u.sign < 0) continue;
                    for (MoveKind k : {MoveKind::LambdaRelax, MoveKind::KappaContract}) {
                        const HomotopyMove mv{k, pos, p.t1(u.base), false};
                        OpCurve next;
                        try {
                            next = apply_move(p, bent, mv);
                        } catch (const Error&) {
                            continue;
                        }
                        if (!is_proper(p, next)) continue;
                        bool fresh = true;
                        for (int x : move_support(cx, mv)) fresh = fresh && !contains(swept, x);
                        if (!fresh) continue;
                        for (int x : move_support(cx, mv)) swept.push_back(x);
                        bent = next;
                        moved = true;
                        break;
                    }
                }
            }
            const MovePlan plan = connect_homotopy(p, bent, straight);
            merge("connect", experiment_invariance(m, bent, straight, plan, phis, seed, tol));
        }
        if (full > 0) {
            merge("noncontractible", experiment_vacuum_preserved(m, outer, cocom, seed, tol));
            // contractible closed ribbon on the full vacuum
            const VacuumBasis vb = vacuum_basis(m, 4, seed);
            StateVector omega = StateVector::zero(m.dim(), vb.edges);
            const Vec coef = random_unit(static_cast<int>(vb.vectors.size()), rng);
            for (size_t i = 0; i < vb.vectors.size(); ++i) omega.amps += coef(static_cast<Eigen::Index>(i)) * vb.vectors[i];
            const HolonomyAccumulator h = ophol_slots(m, disk.arrows);
            double r = 0;
            for (const auto& psi : cocom) {
                StateVector expect = omega;
                expect.amps *= ds.eps(psi);
                r = std::max(r, distance(apply_ophol(m, h, psi, omega), expect));
            }
            rep.add("contractible-on-vacuum", r);
        }
    }
    rep.finish();
    return rep;
}

// ---------------------------------------------------------------- charges

OpCurve proper_left_ribbon(const ArrowPresentation& p, int from_arrow, int to_arrow, int max_len) {
    // breadth-first over proper prefixes; the first hit is a shortest one
    std::deque<OpCurve> queue{trivial_curve(from_arrow)};
    while (!queue.empty()) {
        OpCurve c = queue.front();
        queue.pop_front();
        if (!c.empty() && curve_end(p, c) == to_arrow) return c;
        if (static_cast<int>(c.size()) >= max_len) continue;
        const int end = c.empty() ? from_arrow : curve_end(p, c);
        for (Letter l : {Letter::T0inv, Letter::T2}) {
            OpCurve next = c;
            next.arrows.push_back(step_arrow(p, end, l));
            if (is_proper(p, next)) queue.push_back(std::move(next));
        }
    }
    throw Error("NoRibbon", "no proper left ribbon within " + std::to_string(max_len) + " steps");
}

ChargeSetup charge_setup(const ArrowPresentation& p, int n, int m) {
    if (n < 4 || m < 4) throw Error("BadArgument", "charge setup needs a torus of size at least 4x4");
    const SurfaceComplex cx = build_complex(p);
    const TorusCells t{n, m, &cx};
    const auto block = torus_block(t, 1, 1, 2, 2, false);
    ChargeSetup s;
    s.gamma = boundary_curves(p, cx, block).at(0);
    s.rho = proper_left_ribbon(p, t.arrow(0, 0, 0), t.arrow(2, 2, 0));
    return s;
}

namespace {

struct DoubleIrreps {
    CentralDecomposition dec;
    std::vector<Irrep> reps;
};

DoubleIrreps double_irreps(const Model& m) {
    DoubleIrreps out;
    out.dec = central_decomposition(m.double_algebra().hopf);
    out.reps = irreducible_reps(m.double_algebra().hopf, out.dec, m.dual_double().haar);
    return out;
}

// matrix element D_r^{ij} as a functional on the double
Vec matrix_element(const Irrep& r, int i, int j) {
    Vec f(static_cast<Eigen::Index>(r.rep.size()));
    for (size_t k = 0; k < r.rep.size(); ++k) f(static_cast<Eigen::Index>(k)) = r.rep[k](i, j);
    return f;
}

}  // namespace

ExperimentReport experiment_charge(const Model& m, const OpCurve& rho, const OpCurve& gamma, std::uint64_t seed,
                                   double tol) {
    const auto& p = m.presentation();
    const auto& cx = m.complex();
    const int s0 = rho.start, s1 = curve_end(p, rho);
    // (i) gamma bounds a disk L
    std::vector<int> L, R;
    std::optional<Side> disk_side;
    for (Side side : {Side::Left, Side::Right}) {
        try {
            contract_disk(p, gamma, side);
            disk_side = side;
            break;
        } catch (const Error&) {
        }
    }
    if (!disk_side) throw Error("HypothesisViolation", "(i) gamma is not properly contractible");
    L = side_region(p, cx, gamma, *disk_side);
    R = side_region(p, cx, gamma, *disk_side == Side::Left ? Side::Right : Side::Left);
    if (!contains(L, cx.flat(0, cx.cell_of[0][s1])) || !contains(L, cx.flat(2, cx.cell_of[2][s1])))
        throw Error("HypothesisViolation", "(ii) the disk does not contain the end site of rho");
    if (!contains(R, cx.flat(0, cx.cell_of[0][s0])) || !contains(R, cx.flat(2, cx.cell_of[2][s0])))
        throw Error("HypothesisViolation", "(iii) the outside does not contain the start site of rho");
    const auto rc = classify_ribbon(p, rho);
    const auto gc = classify_ribbon(p, gamma);
    if (rc.kind != RibbonKind::Left || !rc.proper || gc.kind != RibbonKind::Left || !gc.proper || !is_closed(p, gamma))
        throw Error("HypothesisViolation", "rho must be a proper left ribbon and gamma a closed proper left ribbon");

    ExperimentReport rep;
    rep.experiment = "charge";
    rep.tolerance = tol;
    rep.seed = seed;
    const std::vector<int> edges = edge_union(curve_edges(m, rho), curve_edges(m, gamma));
    const StateVector omega = partial_vacuum(m, L, edges, seed);
    rep.dims = omega.amps.size();
    const DoubleIrreps ir = double_irreps(m);
    const int nr = static_cast<int>(ir.reps.size());
    const HolonomyAccumulator hr = ophol_slots(m, rho.arrows), hg = ophol_slots(m, gamma.arrows);
    // multiplets
    std::vector<std::vector<StateVector>> lambda(nr);
    double min_norm = 1e300;
    for (int r = 0; r < nr; ++r)
        for (int i = 0; i < ir.reps[r].dim; ++i)
            for (int j = 0; j < ir.reps[r].dim; ++j) {
                lambda[r].push_back(apply_ophol(m, hr, matrix_element(ir.reps[r], i, j), omega));
                min_norm = std::min(min_norm, lambda[r].back().norm());
            }
    rep.overlaps = Mat::Zero(nr, nr);
    double res = 0;
    for (int q = 0; q < nr; ++q) {
        const Vec psi = flip_double_to_dual(m.dim(), ir.dec.idempotents[q]);
        for (int r = 0; r < nr; ++r) {
            cplx num = 0;
            double den = 0;
            for (const auto& lam : lambda[r]) {
                const StateVector out = apply_ophol(m, hg, psi, lam);
                num += inner(lam, out);
                den += lam.amps.squaredNorm();
                StateVector expect = lam;
                if (q != r) expect.amps.setZero();
                res = std::max(res, distance(out, expect));
            }
            rep.overlaps(q, r) = den > 0 ? num / den : cplx(0);
        }
    }
    rep.add("delta-pattern", res);
    rep.items.emplace_back("min-multiplet-norm", min_norm);
    rep.finish();
    return rep;
}

ExperimentReport experiment_multiplet(const Model& m, const OpCurve& rho, std::optional<int> irrep, std::uint64_t seed,
                                      double tol) {
    const auto& p = m.presentation();
    const auto& cx = m.complex();
    const auto& D = m.double_algebra().hopf;
    const int a = rho.start, b = curve_end(p, rho);
    const auto rc = classify_ribbon(p, rho);
    if (rc.kind != RibbonKind::Left || !rc.proper) throw Error("HypothesisViolation", "rho must be a proper left ribbon");
    if (!sites_disjoint(cx, a, b)) throw Error("HypothesisViolation", "the end sites of rho must be disjoint");
    ExperimentReport rep;
    rep.experiment = "multiplet";
    rep.tolerance = tol;
    rep.seed = seed;
    const VacuumBasis vb = vacuum_basis(m, 4, seed);
    std::mt19937_64 rng(seed);
    const Vec coef = random_unit(static_cast<int>(vb.vectors.size()), rng);
    StateVector omega = StateVector::zero(m.dim(), vb.edges);
    for (size_t i = 0; i < vb.vectors.size(); ++i) omega.amps += coef(static_cast<Eigen::Index>(i)) * vb.vectors[i];
    rep.dims = omega.amps.size();
    const DoubleIrreps ir = double_irreps(m);
    const HolonomyAccumulator hr = ophol_slots(m, rho.arrows);
    std::vector<int> others;
    for (int c = 0; c < p.size(); ++c)
        if (sites_disjoint(cx, c, a) && sites_disjoint(cx, c, b)) others.push_back(c);
    std::vector<int> which;
    if (irrep) {
        if (*irrep < 0 || *irrep >= static_cast<int>(ir.reps.size())) throw Error("BadArgument", "irrep index out of range");
        which.push_back(*irrep);
    } else {
        which.resize(ir.reps.size());
        std::iota(which.begin(), which.end(), 0);
    }
    std::vector<ModelOperator> da, db;
    for (int k = 0; k < D.dim; ++k) {
        da.push_back(double_embed(m, a, D.basis(k)));
        db.push_back(double_embed(m, b, D.basis(k)));
    }
    for (int r : which) {
        const Irrep& rep_r = ir.reps[r];
        const int n = rep_r.dim;
        std::vector<std::vector<StateVector>> lam(n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) lam[i].push_back(apply_ophol(m, hr, matrix_element(rep_r, i, k), omega));
        double away = 0, target = 0, source = 0;
        for (int x = 0; x < D.dim; ++x) {
            const Vec X = D.basis(x);
            const Mat dx = rep_r.at(X);
            const Mat dsx = rep_r.at(D.S(X));
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k) {
                    StateVector expect_b = StateVector::zero(m.dim(), omega.edges), expect_a = expect_b;
                    for (int j = 0; j < n; ++j) {
                        expect_b.amps += dx(j, k) * lam[i][j].amps;
                        expect_a.amps += dsx(i, j) * lam[j][k].amps;
                    }
                    target = std::max(target, distance(apply(db[x], lam[i][k]), expect_b));
                    source = std::max(source, distance(apply(da[x], lam[i][k]), expect_a));
                }
        }
        for (int c : others) {
            for (int x = 0; x < D.dim; ++x) {
                const ModelOperator dc = double_embed(m, c, D.basis(x));
                const cplx ex = D.eps(D.basis(x));
                for (int i = 0; i < n; ++i)
                    for (int k = 0; k < n; ++k) {
                        StateVector expect = lam[i][k];
                        expect.amps *= ex;
                        away = std::max(away, distance(apply(dc, lam[i][k]), expect));
                    }
            }
        }
        const std::string tag = "[" + std::to_string(r) + "]";
        rep.add("away-from-ends" + tag, away);
        rep.add("target-covariance" + tag, target);
        rep.add("source-covariance" + tag, source);
    }
    rep.finish();
    return rep;
}

}  // namespace kit
