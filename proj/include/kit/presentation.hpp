#pragma once

#include <array>
#include <string>
#include <vector>

#include "kit/error.hpp"

namespace kit {

using Perm = std::vector<int>;

struct Violation {
    std::string axiom;  // "PERM", "AP-1".."AP-3", "CSC-1".."CSC-5", "ORIENT"
    std::vector<int> witness;
};

class AxiomError : public Error {
public:
    explicit AxiomError(std::vector<Violation> v);
    const std::vector<Violation>& violations() const { return v_; }

private:
    std::vector<Violation> v_;
};

// Arrows are 0..n-1; T0 rotates around the source vertex, T2 around the face.
class ArrowPresentation {
public:
    ArrowPresentation() = default;

    int size() const { return n_; }
    const std::string& name() const { return name_; }
    void set_name(std::string s) { name_ = std::move(s); }

    int t0(int a) const { return t_[0][a]; }
    int t1(int a) const { return t_[1][a]; }
    int t2(int a) const { return t_[2][a]; }
    int t(int i, int a) const { return t_[i][a]; }
    int tinv(int i, int a) const { return tinv_[i][a]; }
    const Perm& perm(int i) const { return t_[i]; }
    const Perm& inverse_perm(int i) const { return tinv_[i]; }

    // a, T_i a, T_i^2 a, ... up to the first repetition
    std::vector<int> orbit(int i, int a) const;
    int orbit_size(int i, int a) const { return static_cast<int>(orbit(i, a).size()); }

    friend ArrowPresentation new_presentation(int n, const Perm& t0, const Perm& t2,
                                              const std::string& name);

private:
    int n_ = 0;
    std::array<Perm, 3> t_;
    std::array<Perm, 3> tinv_;
    std::string name_;
};

// Checks all presentation axioms without throwing.
std::vector<Violation> check_presentation(int n, const Perm& t0, const Perm& t2);

// Validates eagerly; throws AxiomError listing every violation found.
ArrowPresentation new_presentation(int n, const Perm& t0, const Perm& t2,
                                   const std::string& name = "");

struct CellRef {
    int dim = 0;
    int id = 0;
    bool operator==(const CellRef& o) const { return dim == o.dim && id == o.id; }
    bool operator<(const CellRef& o) const { return dim != o.dim ? dim < o.dim : id < o.id; }
};

struct Cell {
    int dim = 0;
    int id = 0;
    std::vector<int> members;  // the orbit, starting at its minimal arrow
};

struct Site {
    int vertex = 0;
    int face = 0;
    int witness = 0;
};

struct SurfaceComplex {
    std::array<std::vector<Cell>, 3> cells;
    std::array<std::vector<int>, 3> cell_of;  // cell_of[i][a] = id of O_i(a)
    // bd[i][c] lists ids of dimension i-1, cb[i][c] lists ids of dimension i+1
    std::array<std::vector<std::vector<int>>, 3> bd;
    std::array<std::vector<std::vector<int>>, 3> cb;
    // vertex_orders[v] = (e_k, f_k) with Cb(e_k) = {f_k, f_k+1}
    std::vector<std::vector<std::pair<int, int>>> vertex_orders;
    // face_orders[f] = (e_k, v_k) with Bd(e_k) = {v_k, v_k+1}
    std::vector<std::vector<std::pair<int, int>>> face_orders;

    int count(int dim) const { return static_cast<int>(cells[dim].size()); }
    int total_cells() const { return count(0) + count(1) + count(2); }
    // flat index: vertices, then edges, then faces
    int flat(int dim, int id) const;
    CellRef unflat(int k) const;
    Site site(int a) const { return Site{cell_of[0][a], cell_of[2][a], a}; }
};

std::vector<Violation> check_complex(const ArrowPresentation& p, const SurfaceComplex& c);

// Throws Error("InternalCSCViolation") if the derived complex fails CSC-1..5.
SurfaceComplex build_complex(const ArrowPresentation& p);

std::vector<Site> sites(const ArrowPresentation& p);

int euler_characteristic(const ArrowPresentation& p);
bool is_connected(const ArrowPresentation& p);
int genus(const ArrowPresentation& p);  // throws Error("NotConnected")

// Presets
ArrowPresentation minimal_sphere();
ArrowPresentation torus(int n, int m);
ArrowPresentation cube();
ArrowPresentation disjoint_union(const ArrowPresentation& a, const ArrowPresentation& b);
// Faces are vertex cycles; every directed edge must occur exactly once.
ArrowPresentation from_faces(int n_vertices, const std::vector<std::vector<int>>& faces,
                             const std::string& name = "");
// "minimal-sphere", "cube", "torus-NxM"
ArrowPresentation preset(const std::string& name);
std::vector<std::string> preset_names();

// Lattice helper for torus presets: arrow at (i,j) pointing d (0=E,1=N,2=W,3=S).
int torus_arrow(int n, int m, int i, int j, int d);

}  // namespace kit
