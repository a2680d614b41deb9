#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "kit/curves.hpp"
#include "kit/hopf.hpp"
#include "kit/presentation.hpp"

namespace kit {

using SpMat = Eigen::SparseMatrix<cplx>;

// Operator on the tensor factors of the listed edges (sorted, first edge most significant).
struct LocalOp {
    std::vector<int> edges;
    SpMat mat;
};

// Sum of local operators; edges outside a term's support act as the identity. No terms means zero.
struct ModelOperator {
    int d = 0;
    std::vector<LocalOp> terms;

    static ModelOperator identity(int d);
    static ModelOperator zero(int d) { return ModelOperator{d, {}}; }
    bool is_zero() const { return terms.empty(); }
    std::vector<int> support() const;
};

ModelOperator edge_operator(int d, int edge, const Mat& m);
ModelOperator operator*(const ModelOperator& a, const ModelOperator& b);
ModelOperator operator+(const ModelOperator& a, const ModelOperator& b);
ModelOperator operator-(const ModelOperator& a, const ModelOperator& b);
ModelOperator operator*(cplx c, const ModelOperator& a);
ModelOperator adjoint(const ModelOperator& a);
// a + b without merging terms into one support (for sums of many distant terms)
ModelOperator append_terms(const ModelOperator& a, const ModelOperator& b);
ModelOperator commutator(const ModelOperator& a, const ModelOperator& b);

// All terms summed into one matrix over `edges`, which must contain the support.
LocalOp compile(const ModelOperator& a, const std::vector<int>& edges);
LocalOp expand(const LocalOp& op, int d, const std::vector<int>& edges);

// out += op in, for a dense vector over the register `reg` (sorted edges containing the support)
void apply_local(const LocalOp& op, int d, const std::vector<int>& reg, const Vec& in, Vec& out);
Vec apply_operator(const ModelOperator& a, const std::vector<int>& reg, const Vec& in);

// Residual of a - b on the probe set: every basis vector of the joint support when its
// dimension is at most 2^14 (max entry of the difference), else 64 seeded random unit vectors.
double op_distance(const ModelOperator& a, const ModelOperator& b, std::uint64_t seed = 1);
double op_norm(const ModelOperator& a, std::uint64_t seed = 1);

// Unevaluated sum of products, for comparisons whose products would not fit in memory.
struct LazyOp {
    int d = 0;
    std::vector<std::pair<cplx, std::vector<ModelOperator>>> terms;  // factors applied right to left
    std::vector<int> support() const;
};
LazyOp lazy(const ModelOperator& a);
LazyOp lazy_product(std::vector<ModelOperator> factors, cplx c = 1.0);
LazyOp operator+(const LazyOp& a, const LazyOp& b);
LazyOp operator-(const LazyOp& a, const LazyOp& b);
// same probe set as op_distance
double lazy_distance(const LazyOp& a, const LazyOp& b, std::uint64_t seed = 1);
double commutator_norm(const ModelOperator& a, const ModelOperator& b, std::uint64_t seed = 1);

// default section of the edge map: the smaller arrow of each edge
std::vector<int> default_orientation(const ArrowPresentation& p);

class Model {
public:
    Model(const ArrowPresentation& p, const HopfData& h, std::vector<int> orientation = {});

    const ArrowPresentation& presentation() const { return p_; }
    const SurfaceComplex& complex() const { return cx_; }
    const HopfData& algebra() const { return h_; }
    const HopfData& dual() const { return hs_; }
    const QuasiTriangular& double_algebra() const { return dd_; }
    const HopfData& dual_double() const { return ds_; }
    int dim() const { return h_.dim; }
    int ddim() const { return h_.dim * h_.dim; }
    int edge_count() const { return cx_.count(1); }
    int edge_of(int a) const { return cx_.cell_of[1][a]; }
    int oriented_arrow(int e) const { return orient_[e]; }
    bool is_oriented(int a) const { return orient_[edge_of(a)] == a; }
    const std::vector<int>& orientation() const { return orient_; }

    // edge-local matrices of P_a(h) and Q_a(phi)
    Mat p_matrix(int a, const Vec& h) const;
    Mat q_matrix(int a, const Vec& phi) const;
    const Mat& antipode_matrix() const { return h_.antipode; }

private:
    ArrowPresentation p_;
    SurfaceComplex cx_;
    HopfData h_, hs_;
    QuasiTriangular dd_;
    HopfData ds_;
    std::vector<int> orient_;
    // basis images: [oriented?][k]
    std::vector<Mat> lp_, lq_, rp_, rq_;
};

ModelOperator op_P(const Model& m, int a, const Vec& h);
ModelOperator op_Q(const Model& m, int a, const Vec& phi);

// (f_1 * ... * f_n)(e_j) for every basis element e_j of the coalgebra, where
// step(k, p) is f_k(e_p); an empty sequence gives counit(e_j) times the identity.
std::vector<ModelOperator> convolution_slots(const Model& m, const HopfData& coalgebra, int steps,
                                             const std::function<ModelOperator(int, int)>& step);
ModelOperator contract_slots(const std::vector<ModelOperator>& slots, const Vec& x);

// G_{a_1..a_m}(h), F_{b_1..b_n}(phi)
ModelOperator gauss_seq(const Model& m, const std::vector<int>& arrows, const Vec& h);
ModelOperator flux_seq(const Model& m, const std::vector<int>& arrows, const Vec& phi);
std::vector<int> gauss_arrows(const ArrowPresentation& p, int a);  // T0 a, ..., T0^m a
std::vector<int> flux_arrows(const ArrowPresentation& p, int a);   // a, ..., T2^(n-1) a
ModelOperator gauss_G(const Model& m, int a, const Vec& h);
ModelOperator flux_F(const Model& m, int a, const Vec& phi);

ModelOperator vertex_projector(const Model& m, int v);
ModelOperator face_projector(const Model& m, int f);
ModelOperator hamiltonian(const Model& m);

// X in D(H) coordinates (xi_i (x) x_j at i*d + j)
ModelOperator double_embed(const Model& m, int a, const Vec& x);
ModelOperator gauge_left(const Model& m, int a, const Vec& x, const ModelOperator& op);
ModelOperator gauge_right(const Model& m, int a, const ModelOperator& op, const Vec& x);
ModelOperator gauge_left_op(const Model& m, int a, const Vec& x, const ModelOperator& op);
ModelOperator gauge_right_op(const Model& m, int a, const ModelOperator& op, const Vec& x);

// Phi in D(H)* coordinates (x_i (x) xi_j at i*d + j)
ModelOperator theta(const Model& m, int a, const Vec& phi);
ModelOperator ophol_step(const Model& m, int darrow, const Vec& phi);
ModelOperator hol_step(const Model& m, int darrow, const Vec& phi);

struct HolonomyAccumulator {
    std::vector<ModelOperator> slots;  // slots[j] = value on the j-th basis element of D(H)*
    ModelOperator at(const Vec& phi) const { return contract_slots(slots, phi); }
};

HolonomyAccumulator ophol_slots(const Model& m, const std::vector<int>& arrows);
HolonomyAccumulator hol_slots(const Model& m, const std::vector<int>& arrows);
ModelOperator ophol(const Model& m, const OpCurve& c, const Vec& phi);
// holonomy of the curve whose reverse is c
ModelOperator hol(const Model& m, const OpCurve& c, const Vec& phi);

// Conjugation by the antipode on every edge; sends P_a(h) to P_{T1 a}(h) and Q_a to Q_{T1 a}.
ModelOperator s_M(const Model& m, const ModelOperator& op);

// Hopf-level helpers on D(H)* and D(H)
Vec dstar_mul(const Model& m, const Vec& x, const Vec& y);
Vec dstar_S(const Model& m, const Vec& x);
Vec d_mul(const Model& m, const Vec& x, const Vec& y);
Vec d_S(const Model& m, const Vec& x);
Vec act_left(const Model& m, const Vec& x, const Vec& phi);   // X -> Phi
Vec act_right(const Model& m, const Vec& phi, const Vec& x);  // Phi <- X
Vec braided_opposite(const Model& m, const Vec& psi, const Vec& phi);  // Psi bullet_R Phi

struct SuiteCheck {
    std::string name;
    double residual = 0;
    bool ok = true;
};

struct SuiteReport {
    std::string suite;
    std::vector<SuiteCheck> checks;
    double max_residual = 0;
    bool ok = true;
    void add(const std::string& name, double residual, double tol);
    void add_flag(const std::string& name, bool pass);
};

// Generator relations, exchange relations, G/F relations and the double embedding.
SuiteReport verify_relations(const Model& m, double tol = 1e-10, std::uint64_t seed = 3);
// Face loops, type 1 loop scalar, theta properties, central conjugation, exchange with R.
SuiteReport verify_loops(const Model& m, double tol = 1e-9, std::uint64_t seed = 5);
// Proper ribbon algebra, elbows, ribbon versus face loop, gauge transformations at the ends,
// braided exchange of closed ribbons on genus one.
SuiteReport verify_ribbons(const Model& m, double tol = 1e-9, std::uint64_t seed = 7);
// Module algebra laws of the gauge actions and invariant subspaces.
SuiteReport verify_gauge(const Model& m, double tol = 1e-9, std::uint64_t seed = 9);

}  // namespace kit
