#pragma once

#include <vector>

#include "kit/presentation.hpp"

namespace kit {

// Flat cell ids on the torus-NxM preset; coordinates wrap.
struct TorusCells {
    int n = 0, m = 0;
    const SurfaceComplex* cx = nullptr;

    int arrow(int i, int j, int d) const;
    int vertex(int i, int j) const;
    int hedge(int i, int j) const;  // (i,j) -> (i+1,j)
    int vedge(int i, int j) const;  // (i,j) -> (i,j+1)
    int face(int i, int j) const;   // lower-left corner (i,j)
};

// Faces of a w x h block plus its interior edges and vertices (open block),
// or with the whole boundary (closed block).
std::vector<int> torus_block(const TorusCells& t, int i0, int j0, int w, int h, bool closed);
// Faces of row j, vertical edges of the row, plus the top line when half_closed.
std::vector<int> torus_band(const TorusCells& t, int j, bool half_closed);

std::vector<int> region_minus(const std::vector<int>& a, const std::vector<int>& b);
std::vector<int> region_complement(const SurfaceComplex& cx, const std::vector<int>& a);

}  // namespace kit
