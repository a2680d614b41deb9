#include "kit/presentation.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <regex>
#include <set>

namespace kit {

namespace {

std::string describe(const std::vector<Violation>& v) {
    std::string s;
    for (const auto& x : v) {
        if (!s.empty()) s += "; ";
        s += x.axiom + "[";
        for (size_t i = 0; i < x.witness.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(x.witness[i]);
        }
        s += "]";
    }
    return s;
}

bool is_perm(int n, const Perm& p) {
    if (static_cast<int>(p.size()) != n) return false;
    std::vector<char> seen(n, 0);
    for (int x : p) {
        if (x < 0 || x >= n || seen[x]) return false;
        seen[x] = 1;
    }
    return true;
}

Perm invert(const Perm& p) {
    Perm q(p.size());
    for (size_t i = 0; i < p.size(); ++i) q[p[i]] = static_cast<int>(i);
    return q;
}

// orbit ids for a permutation, numbered by minimal member
std::vector<int> orbit_ids(const Perm& p, int& count) {
    const int n = static_cast<int>(p.size());
    std::vector<int> id(n, -1);
    count = 0;
    for (int a = 0; a < n; ++a) {
        if (id[a] >= 0) continue;
        int b = a;
        do {
            id[b] = count;
            b = p[b];
        } while (b != a);
        ++count;
    }
    return id;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::string first_kind(const std::vector<Violation>& v) {
    if (v.empty()) return "AxiomViolation";
    const std::string& a = v.front().axiom;
    if (a == "PERM") return "NotAPermutation";
    if (a == "AP-1") return "AP1Violation";
    if (a == "AP-2") return "AP2Violation";
    if (a == "AP-3") return "AP3Violation";
    return "AxiomViolation";
}

}  // namespace

AxiomError::AxiomError(std::vector<Violation> v)
    : Error(first_kind(v), describe(v)), v_(std::move(v)) {}

std::vector<int> ArrowPresentation::orbit(int i, int a) const {
    std::vector<int> out;
    int b = a;
    do {
        out.push_back(b);
        b = t_[i][b];
    } while (b != a);
    return out;
}

std::vector<Violation> check_presentation(int n, const Perm& t0, const Perm& t2) {
    std::vector<Violation> out;
    if (!is_perm(n, t0)) out.push_back({"PERM", {0}});
    if (!is_perm(n, t2)) out.push_back({"PERM", {2}});
    if (!out.empty()) return out;
    if (n < 2) {
        out.push_back({"AP-1", {}});
        return out;
    }
    Perm t1(n);
    for (int a = 0; a < n; ++a) t1[a] = t0[t2[a]];

    const Perm* perms[2] = {&t0, &t2};
    const int kinds[2] = {0, 2};
    for (int k = 0; k < 2; ++k) {
        std::vector<char> done(n, 0);
        for (int a = 0; a < n; ++a) {
            if (done[a]) continue;
            int len = 0, b = a;
            do {
                done[b] = 1;
                b = (*perms[k])[b];
                ++len;
            } while (b != a);
            if (len < 2) out.push_back({"AP-1", {a, kinds[k]}});
        }
    }
    for (int a = 0; a < n; ++a)
        if (t1[t1[a]] != a) out.push_back({"AP-2", {a}});

    int nv = 0, nf = 0;
    auto vid = orbit_ids(t0, nv);
    auto fid = orbit_ids(t2, nf);
    std::map<std::pair<int, int>, int> first;
    for (int a = 0; a < n; ++a) {
        auto [it, fresh] = first.emplace(std::make_pair(vid[a], fid[a]), a);
        if (!fresh) out.push_back({"AP-3", {it->second, a}});
    }
    return out;
}

ArrowPresentation new_presentation(int n, const Perm& t0, const Perm& t2, const std::string& name) {
    auto v = check_presentation(n, t0, t2);
    if (!v.empty()) throw AxiomError(std::move(v));
    ArrowPresentation p;
    p.n_ = n;
    p.name_ = name;
    p.t_[0] = t0;
    p.t_[2] = t2;
    p.t_[1].resize(n);
    for (int a = 0; a < n; ++a) p.t_[1][a] = t0[t2[a]];
    for (int i = 0; i < 3; ++i) p.tinv_[i] = invert(p.t_[i]);
    return p;
}

int SurfaceComplex::flat(int dim, int id) const {
    int off = 0;
    for (int d = 0; d < dim; ++d) off += count(d);
    return off + id;
}

CellRef SurfaceComplex::unflat(int k) const {
    for (int d = 0; d < 3; ++d) {
        if (k < count(d)) return {d, k};
        k -= count(d);
    }
    throw Error("BadCell", "flat cell index out of range");
}

SurfaceComplex build_complex(const ArrowPresentation& p) {
    SurfaceComplex c;
    const int n = p.size();
    for (int i = 0; i < 3; ++i) {
        c.cell_of[i].assign(n, -1);
        for (int a = 0; a < n; ++a) {
            if (c.cell_of[i][a] >= 0) continue;
            Cell cell;
            cell.dim = i;
            cell.id = static_cast<int>(c.cells[i].size());
            cell.members = p.orbit(i, a);
            for (int b : cell.members) c.cell_of[i][b] = cell.id;
            c.cells[i].push_back(std::move(cell));
        }
    }
    auto uniq = [](std::vector<int> v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    };
    c.bd[0].assign(c.count(0), {});
    c.cb[2].assign(c.count(2), {});
    c.bd[1].resize(c.count(1));
    c.cb[1].resize(c.count(1));
    for (const auto& e : c.cells[1]) {
        std::vector<int> vs, fs;
        for (int a : e.members) {
            vs.push_back(c.cell_of[0][a]);
            fs.push_back(c.cell_of[2][a]);
        }
        c.bd[1][e.id] = uniq(vs);
        c.cb[1][e.id] = uniq(fs);
    }
    c.bd[2].resize(c.count(2));
    for (const auto& f : c.cells[2]) {
        std::vector<int> es;
        for (int a : f.members) es.push_back(c.cell_of[1][a]);
        c.bd[2][f.id] = uniq(es);
    }
    c.cb[0].resize(c.count(0));
    for (const auto& v : c.cells[0]) {
        std::vector<int> es;
        for (int a : v.members) es.push_back(c.cell_of[1][a]);
        c.cb[0][v.id] = uniq(es);
    }
    c.vertex_orders.resize(c.count(0));
    for (const auto& v : c.cells[0]) {
        const auto& b = v.members;
        const int m = static_cast<int>(b.size());
        for (int k = 0; k < m; ++k)
            c.vertex_orders[v.id].push_back(
                {c.cell_of[1][b[k]], c.cell_of[2][b[(k + m - 1) % m]]});
    }
    c.face_orders.resize(c.count(2));
    for (const auto& f : c.cells[2]) {
        for (int a : f.members)
            c.face_orders[f.id].push_back({c.cell_of[1][a], c.cell_of[0][a]});
    }
    auto bad = check_complex(p, c);
    if (!bad.empty()) throw Error("InternalCSCViolation", describe(bad));
    return c;
}

std::vector<Violation> check_complex(const ArrowPresentation& p, const SurfaceComplex& c) {
    std::vector<Violation> out;
    // CSC-1: boundaries of positive-dimensional cells are non-empty and one dimension lower
    for (int i = 1; i < 3; ++i)
        for (int x = 0; x < c.count(i); ++x) {
            if (c.bd[i][x].empty()) out.push_back({"CSC-1", {i, x}});
            for (int y : c.bd[i][x])
                if (y < 0 || y >= c.count(i - 1)) out.push_back({"CSC-1", {i, x}});
        }
    // CSC-2: Bd and Cb are transposes
    for (int i = 1; i < 3; ++i)
        for (int x = 0; x < c.count(i); ++x)
            for (int y : c.bd[i][x]) {
                const auto& up = c.cb[i - 1][y];
                if (!std::binary_search(up.begin(), up.end(), x)) out.push_back({"CSC-2", {i, x, y}});
            }
    for (int i = 0; i < 2; ++i)
        for (int x = 0; x < c.count(i); ++x)
            for (int y : c.cb[i][x]) {
                const auto& dn = c.bd[i + 1][y];
                if (!std::binary_search(dn.begin(), dn.end(), x)) out.push_back({"CSC-2", {i, x, y}});
            }
    // CSC-3
    for (int e = 0; e < c.count(1); ++e)
        if (c.bd[1][e].size() != 2 || c.cb[1][e].size() != 2) out.push_back({"CSC-3", {e}});
    // CSC-4: vertex neighbourhoods
    for (int v = 0; v < c.count(0); ++v) {
        const auto& ord = c.vertex_orders[v];
        const int m = static_cast<int>(ord.size());
        std::set<int> es, fs;
        for (int k = 0; k < m; ++k) {
            es.insert(ord[k].first);
            fs.insert(ord[k].second);
            std::vector<int> want{ord[k].second, ord[(k + 1) % m].second};
            std::sort(want.begin(), want.end());
            if (c.cb[1][ord[k].first] != want) out.push_back({"CSC-4", {v, k}});
        }
        if (static_cast<int>(es.size()) != m || static_cast<int>(fs.size()) != m ||
            std::vector<int>(es.begin(), es.end()) != c.cb[0][v])
            out.push_back({"CSC-4", {v}});
    }
    // CSC-5: face neighbourhoods
    for (int f = 0; f < c.count(2); ++f) {
        const auto& ord = c.face_orders[f];
        const int n = static_cast<int>(ord.size());
        std::set<int> es, vs;
        for (int k = 0; k < n; ++k) {
            es.insert(ord[k].first);
            vs.insert(ord[k].second);
            std::vector<int> want{ord[k].second, ord[(k + 1) % n].second};
            std::sort(want.begin(), want.end());
            if (c.bd[1][ord[k].first] != want) out.push_back({"CSC-5", {f, k}});
        }
        if (static_cast<int>(es.size()) != n || static_cast<int>(vs.size()) != n ||
            std::vector<int>(es.begin(), es.end()) != c.bd[2][f])
            out.push_back({"CSC-5", {f}});
    }
    // site edges and orientation compatibility
    for (int a = 0; a < p.size(); ++a) {
        const int v = c.cell_of[0][a], f = c.cell_of[2][a];
        std::vector<int> both;
        std::set_intersection(c.cb[0][v].begin(), c.cb[0][v].end(), c.bd[2][f].begin(),
                              c.bd[2][f].end(), std::back_inserter(both));
        std::vector<int> want{c.cell_of[1][a], c.cell_of[1][p.t0(a)]};
        std::sort(want.begin(), want.end());
        if (both != want) out.push_back({"SITE", {a}});

        const auto& vo = c.vertex_orders[v];
        const auto& fo = c.face_orders[f];
        const int m = static_cast<int>(vo.size()), n = static_cast<int>(fo.size());
        int pv = -1, sv = -1, pf = -1, sf = -1;
        for (int k = 0; k < m; ++k)
            if (vo[(k + 1) % m].second == f) {
                pv = vo[k].first;
                sv = vo[(k + 1) % m].first;
            }
        for (int k = 0; k < n; ++k)
            if (fo[k].second == v) {
                pf = fo[(k + n - 1) % n].first;
                sf = fo[k].first;
            }
        if (pv < 0 || pf < 0 || pv != sf || sv != pf) out.push_back({"ORIENT", {a}});
    }
    return out;
}

std::vector<Site> sites(const ArrowPresentation& p) {
    int nv = 0, nf = 0;
    auto vid = orbit_ids(p.perm(0), nv);
    auto fid = orbit_ids(p.perm(2), nf);
    std::vector<Site> out(p.size());
    for (int a = 0; a < p.size(); ++a) out[a] = Site{vid[a], fid[a], a};
    return out;
}

int euler_characteristic(const ArrowPresentation& p) {
    int k[3];
    for (int i = 0; i < 3; ++i) orbit_ids(p.perm(i), k[i]);
    return k[0] - k[1] + k[2];
}

bool is_connected(const ArrowPresentation& p) {
    if (p.size() == 0) return true;
    UnionFind uf(p.size());
    for (int a = 0; a < p.size(); ++a) {
        uf.unite(a, p.t0(a));
        uf.unite(a, p.t2(a));
    }
    const int r = uf.find(0);
    for (int a = 1; a < p.size(); ++a)
        if (uf.find(a) != r) return false;
    return true;
}

int genus(const ArrowPresentation& p) {
    if (!is_connected(p)) throw Error("NotConnected", "genus needs a connected complex");
    const int chi = euler_characteristic(p);
    if (chi % 2 != 0) throw Error("InternalCSCViolation", "odd Euler characteristic");
    return (2 - chi) / 2;
}

ArrowPresentation minimal_sphere() {
    return new_presentation(4, {2, 3, 0, 1}, {3, 2, 1, 0}, "minimal-sphere");
}

int torus_arrow(int n, int m, int i, int j, int d) {
    i = ((i % n) + n) % n;
    j = ((j % m) + m) % m;
    return 4 * (j * n + i) + ((d % 4) + 4) % 4;
}

ArrowPresentation torus(int n, int m) {
    if (n < 2 || m < 2) throw Error("BadPreset", "torus sides must be at least 2");
    static const int dx[4] = {1, 0, -1, 0};
    static const int dy[4] = {0, 1, 0, -1};
    const int size = 4 * n * m;
    Perm t0(size), t2(size);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i)
            for (int d = 0; d < 4; ++d) {
                const int a = torus_arrow(n, m, i, j, d);
                t0[a] = torus_arrow(n, m, i, j, d + 1);
                t2[a] = torus_arrow(n, m, i + dx[d], j + dy[d], d + 1);
            }
    return new_presentation(size, t0, t2, "torus-" + std::to_string(n) + "x" + std::to_string(m));
}

ArrowPresentation from_faces(int n_vertices, const std::vector<std::vector<int>>& faces,
                             const std::string& name) {
    std::map<std::pair<int, int>, int> arrow_of;
    std::vector<std::pair<int, int>> ends;
    Perm t2;
    for (const auto& f : faces) {
        const int k = static_cast<int>(f.size());
        const int base = static_cast<int>(ends.size());
        for (int i = 0; i < k; ++i) {
            const int u = f[i], v = f[(i + 1) % k];
            if (u < 0 || u >= n_vertices || v < 0 || v >= n_vertices)
                throw Error("BadFaces", "vertex index out of range");
            if (!arrow_of.emplace(std::make_pair(u, v), base + i).second)
                throw Error("BadFaces", "directed edge used twice");
            ends.push_back({u, v});
            t2.push_back(base + (i + 1) % k);
        }
    }
    const int n = static_cast<int>(ends.size());
    Perm t2inv = invert(t2), t0(n);
    for (int a = 0; a < n; ++a) {
        const auto [u, v] = ends[t2inv[a]];
        auto it = arrow_of.find({v, u});
        if (it == arrow_of.end()) throw Error("BadFaces", "edge without opposite");
        t0[a] = it->second;
    }
    return new_presentation(n, t0, t2, name);
}

ArrowPresentation cube() {
    // vertex index x + 2y + 4z
    return from_faces(8,
                      {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}},
                      "cube");
}

ArrowPresentation disjoint_union(const ArrowPresentation& a, const ArrowPresentation& b) {
    const int n = a.size(), m = b.size();
    Perm t0(n + m), t2(n + m);
    for (int x = 0; x < n; ++x) {
        t0[x] = a.t0(x);
        t2[x] = a.t2(x);
    }
    for (int x = 0; x < m; ++x) {
        t0[n + x] = n + b.t0(x);
        t2[n + x] = n + b.t2(x);
    }
    return new_presentation(n + m, t0, t2, a.name() + "+" + b.name());
}

ArrowPresentation preset(const std::string& name) {
    if (name == "minimal-sphere") return minimal_sphere();
    if (name == "cube") return cube();
    static const std::regex tor(R"(torus-(\d+)x(\d+))");
    std::smatch m;
    if (std::regex_match(name, m, tor)) return torus(std::stoi(m[1]), std::stoi(m[2]));
    throw Error("UnknownPreset", name);
}

std::vector<std::string> preset_names() {
    std::vector<std::string> out{"minimal-sphere", "cube"};
    for (int n = 2; n <= 5; ++n)
        for (int m = 2; m <= 5; ++m) out.push_back("torus-" + std::to_string(n) + "x" + std::to_string(m));
    return out;
}

}  // namespace kit
