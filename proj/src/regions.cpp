#include "kit/regions.hpp"

#include <algorithm>
#include <set>

namespace kit {

namespace {

int wrap(int x, int n) { return ((x % n) + n) % n; }

}  // namespace

int TorusCells::arrow(int i, int j, int d) const { return torus_arrow(n, m, wrap(i, n), wrap(j, m), d); }
int TorusCells::vertex(int i, int j) const { return cx->flat(0, cx->cell_of[0][arrow(i, j, 0)]); }
int TorusCells::hedge(int i, int j) const { return cx->flat(1, cx->cell_of[1][arrow(i, j, 0)]); }
int TorusCells::vedge(int i, int j) const { return cx->flat(1, cx->cell_of[1][arrow(i, j, 1)]); }
int TorusCells::face(int i, int j) const { return cx->flat(2, cx->cell_of[2][arrow(i, j, 0)]); }

std::vector<int> torus_block(const TorusCells& t, int i0, int j0, int w, int h, bool closed) {
    std::set<int> s;
    const int lo = closed ? 0 : 1;
    for (int x = 0; x < w; ++x)
        for (int y = 0; y < h; ++y) s.insert(t.face(i0 + x, j0 + y));
    for (int x = 0; x < w; ++x)
        for (int y = lo; y <= h - lo; ++y) s.insert(t.hedge(i0 + x, j0 + y));
    for (int x = lo; x <= w - lo; ++x)
        for (int y = 0; y < h; ++y) s.insert(t.vedge(i0 + x, j0 + y));
    for (int x = lo; x <= w - lo; ++x)
        for (int y = lo; y <= h - lo; ++y) s.insert(t.vertex(i0 + x, j0 + y));
    return {s.begin(), s.end()};
}

std::vector<int> torus_band(const TorusCells& t, int j, bool half_closed) {
    std::set<int> s;
    for (int i = 0; i < t.n; ++i) {
        s.insert(t.face(i, j));
        s.insert(t.vedge(i, j));
        if (half_closed) {
            s.insert(t.hedge(i, j + 1));
            s.insert(t.vertex(i, j + 1));
        }
    }
    return {s.begin(), s.end()};
}

std::vector<int> region_minus(const std::vector<int>& a, const std::vector<int>& b) {
    std::set<int> sb(b.begin(), b.end());
    std::vector<int> out;
    for (int x : a)
        if (!sb.count(x)) out.push_back(x);
    return out;
}

std::vector<int> region_complement(const SurfaceComplex& cx, const std::vector<int>& a) {
    std::vector<int> all(cx.total_cells());
    for (int k = 0; k < cx.total_cells(); ++k) all[k] = k;
    return region_minus(all, a);
}

}  // namespace kit
