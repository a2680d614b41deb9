#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kit/homotopy.hpp"
#include "kit/model.hpp"

namespace kit {

constexpr std::uint64_t kDefaultMemCap = std::uint64_t(1) << 24;

// d^n, or MemoryCap when it exceeds the cap
std::uint64_t register_dim(int d, int nedges, std::uint64_t cap = kDefaultMemCap);

// Dense amplitudes over the edges of a register (sorted, first edge most significant). Edges outside the
// register are left implicit; operators supported in the register act on the full space as op (x) id.
struct StateVector {
    int d = 0;
    std::vector<int> edges;
    Vec amps;

    static StateVector zero(int d, std::vector<int> edges, std::uint64_t cap = kDefaultMemCap);
    static StateVector random(int d, std::vector<int> edges, std::uint64_t seed, std::uint64_t cap = kDefaultMemCap);
    static StateVector basis(int d, std::vector<int> edges, const std::vector<int>& labels);
    std::vector<int> labels(std::uint64_t index) const;
    std::uint64_t index(const std::vector<int>& labels) const;
    double norm() const { return amps.norm(); }
};

// throws DimMismatch when the support is not inside the register
StateVector apply(const ModelOperator& op, const StateVector& psi);
cplx inner(const StateVector& a, const StateVector& b);
double distance(const StateVector& a, const StateVector& b);

// flat cell ids of the whole complex
std::vector<int> all_cells(const SurfaceComplex& cx);
// edges touched by A_v and B_f for the vertices and faces of a region (flat ids)
std::vector<int> region_edges(const Model& m, const std::vector<int>& region);
std::vector<int> curve_edges(const Model& m, const OpCurve& c);
std::vector<int> edge_union(const std::vector<int>& a, const std::vector<int>& b);

// product of A_v, B_f over the vertices and faces of the region
StateVector project_region(const Model& m, const std::vector<int>& region, const StateVector& psi);
// normalized image of a seeded random vector under the region projector; throws EmptyVacuum
StateVector partial_vacuum(const Model& m, const std::vector<int>& region, const std::vector<int>& edges,
                           std::uint64_t seed, std::uint64_t cap = kDefaultMemCap);

struct VacuumBasis {
    std::vector<int> region;
    std::vector<int> edges;
    std::vector<Vec> vectors;  // orthonormal
    int probes_used = 0;
    double smallest_kept = 0;     // singular values relative to the largest
    double largest_dropped = 0;
    std::vector<int> rank_history;
};

// Rank of the region projector from projected random probes; probes are added in batches of `batch` until the
// rank is unchanged for two successive batches. throws MemoryCap, RankUnstable
VacuumBasis vacuum_basis(const Model& m, const std::vector<int>& region, const std::vector<int>& edges,
                         int batch = 4, std::uint64_t seed = 1, std::uint64_t cap = kDefaultMemCap);
// full vacuum on all edges
VacuumBasis vacuum_basis(const Model& m, int batch = 4, std::uint64_t seed = 1, std::uint64_t cap = kDefaultMemCap);

// Cayley table when the algebra is a group algebra in its basis
std::optional<std::vector<std::vector<int>>> group_table(const HopfData& h);
// Gauge classes of flat connections, counted by enumeration; orientation as in Model.
long flat_field_classes(const ArrowPresentation& p, const std::vector<std::vector<int>>& table,
                        std::uint64_t cap = std::uint64_t(1) << 26);

// Ophol_c(phi) applied to a state, one basis slot at a time
StateVector apply_ophol(const Model& m, const HolonomyAccumulator& acc, const Vec& phi, const StateVector& psi);

struct ExperimentReport {
    std::string experiment;
    double residual = 0;
    double tolerance = 0;
    bool ok = true;
    std::uint64_t dims = 0;  // amplitudes of the largest register used
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, double>> items;
    Mat overlaps;  // charge detection only

    void add(const std::string& name, double residual);
    void finish();
};

// The contraction identities on partial vacua for the given arrows (all D(H)* basis elements).
ExperimentReport verify_contractions(const Model& m, const std::vector<int>& arrows, std::uint64_t seed = 1,
                               double tol = 1e-9);

// |Ophol_rho1(Phi) Omega - Ophol_rho2(Phi) Omega| for Omega in the partial vacuum of the plan support.
// Plans with circular moves need cocommutative phis. throws ImproperPlan, NotCocommutative
ExperimentReport experiment_invariance(const Model& m, const OpCurve& rho1, const OpCurve& rho2,
                                       const MovePlan& plan, const std::vector<Vec>& phis, std::uint64_t seed = 1,
                                       double tol = 1e-8);

// Closed proper ribbon applied to a full vacuum vector with cocommutative psis stays in the vacuum.
ExperimentReport experiment_vacuum_preserved(const Model& m, const OpCurve& gamma, const std::vector<Vec>& psis,
                                             std::uint64_t seed = 1, double tol = 1e-8);

// Invariance configurations for the model's surface (torus presets get block, band and connect plans).
ExperimentReport invariance_suite(const Model& m, std::uint64_t seed = 1, double tol = 1e-8);

// overlaps(q, r) = <Lambda_r, Ophol_gamma(Psi_q) Lambda_r> / |Lambda_r|^2 over all multiplet entries;
// residual = max |Ophol_gamma(Psi_q) Lambda_r - delta_qr Lambda_r|. throws HypothesisViolation
ExperimentReport experiment_charge(const Model& m, const OpCurve& rho, const OpCurve& gamma, std::uint64_t seed = 1,
                                   double tol = 1e-8);

// Covariance residuals of Lambda_r^{ij} = Ophol_rho(D_r^{ij}) Omega for every irrep r of the double
// (or only `irrep` when given) with Omega a full vacuum vector.
ExperimentReport experiment_multiplet(const Model& m, const OpCurve& rho, std::optional<int> irrep = std::nullopt,
                                      std::uint64_t seed = 1, double tol = 1e-8);

// Standard configurations on torus presets
struct ChargeSetup {
    OpCurve rho, gamma;
};
ChargeSetup charge_setup(const ArrowPresentation& p, int n, int m);
// proper left ribbon between disjoint sites, found by breadth-first search over left words
OpCurve proper_left_ribbon(const ArrowPresentation& p, int from_arrow, int to_arrow, int max_len = 16);

}  // namespace kit
