#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kit/error.hpp"

namespace kit {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

// Nonzero structure constant: (a, b) -> c for products, a -> (b, c) for coproducts.
struct Entry3 {
    int a, b, c;
    cplx v;
};

// Finite dimensional Hopf algebra with a star, by structure constants in a fixed basis e_0..e_{d-1}.
struct HopfData {
    int dim = 0;
    std::string label;
    std::vector<cplx> mult;    // [(i*d + j)*d + k]: coefficient of e_k in e_i e_j
    std::vector<cplx> comult;  // [(k*d + i)*d + j]: coefficient of e_i (x) e_j in D(e_k)
    Vec unit;
    Vec counit;     // counit(e_i)
    Mat antipode;   // column j = S(e_j)
    Mat star;       // column j = e_j^dagger; the star acts antilinearly on coordinates
    Vec haar;

    // rebuilds sparse tables and the inverse antipode; call after editing the tensors
    void index();

    std::vector<Entry3> mult_nz;              // e_a e_b -> v e_c
    std::vector<std::vector<Entry3>> cop_of;  // cop_of[a]: D(e_a) -> v e_b (x) e_c
    Mat antipode_inv;

    Vec basis(int i) const;
    Vec mul(const Vec& x, const Vec& y) const;
    Vec comul(const Vec& x) const;  // index i*d + j
    cplx eps(const Vec& x) const { return counit.cwiseProduct(x).sum(); }
    Vec S(const Vec& x) const { return antipode * x; }
    Vec Sinv(const Vec& x) const { return antipode_inv * x; }
    Vec dagger(const Vec& x) const { return star * x.conjugate(); }
    Mat left_mult(const Vec& x) const;   // y -> x y
    Mat right_mult(const Vec& x) const;  // y -> y x
    // iterated coproduct (D (x) id) D as a sparse list over basis triples
    std::vector<std::pair<std::array<int, 3>, cplx>> comul2(int k) const;
};

struct HopfCheck {
    std::string name;
    double residual = 0;
    bool ok = true;
};

struct HopfReport {
    bool ok = true;
    double max_residual = 0;
    std::vector<HopfCheck> checks;
    std::vector<std::string> failures;
};

HopfReport validate_hopf(const HopfData& h, double tol = 1e-10);

// Cayley table: table[g][h] = index of gh. Throws NotAGroup.
HopfData group_algebra(const std::vector<std::vector<int>>& table, const std::string& label);
std::vector<std::vector<int>> cyclic_group_table(int n);
std::vector<std::vector<int>> symmetric3_table();
// "z2", "z3", "z4", "s3"; throws UnknownPreset
HopfData hopf_preset(const std::string& name);
std::vector<std::string> hopf_preset_names();

// Normalized two-sided integral (counit 1), from the null space of x i = eps(x) i.
Vec compute_haar(const HopfData& h);

HopfData dual_hopf(const HopfData& h);

struct QuasiTriangular {
    HopfData hopf;
    Vec r_matrix;     // element of D (x) D, index X*dim + Y
    Vec drinfeld_u;   // S(R2) R1
};

// Double on H* (x) H, basis xi_i (x) x_j at index i*d + j.
QuasiTriangular drinfeld_double(const HopfData& h);
// Dual of the double on H (x) H*, basis x_i (x) xi_j at index i*d + j, paired diagonally with the double.
HopfData dual_of_double_algebra(const HopfData& h);
// The antipode of the dual of the double in the factorized form (x_i (x) xi_i)^-1 (S^-1 h (x) S* phi)(x_j (x) xi_j).
Mat dual_double_antipode_factorized(const HopfData& h);

cplx pairing(const Vec& phi, const Vec& x);
// X -> Phi and Phi <- X for a functional Phi in dual (given by its Hopf data) and X in the paired algebra
Vec hit_left(const HopfData& dual, const Vec& x, const Vec& phi);
Vec hit_right(const HopfData& dual, const Vec& phi, const Vec& x);

// P(X) = i(1) X S(i(2)) as a matrix on coordinates
Mat central_projection_matrix(const HopfData& d);
Vec central_projection(const HopfData& d, const Vec& x);
// transpose of P under the diagonal pairing: projects onto cocommutative functionals
Vec cocommutative_projection(const HopfData& d, const Vec& phi);
// k (x) psi -> psi (x) k between the dual of the double and the double of an algebra of dimension hdim
Vec flip_dual_to_double(int hdim, const Vec& psi);
Vec flip_double_to_dual(int hdim, const Vec& x);

struct CentralDecomposition {
    std::vector<Vec> idempotents;
    std::vector<int> block_dims;
};

// Minimal central idempotents of a semisimple algebra; throws DegenerateSpectrum after bounded retries.
CentralDecomposition central_decomposition(const HopfData& a, std::uint64_t seed = 7);

struct Irrep {
    int dim = 0;
    std::vector<Mat> rep;  // rep[k] = D(e_k)
    Mat at(const Vec& x) const;
};

// One unitary irrep per central block; unitarity is with respect to (x, y) = omega(x^dagger y).
std::vector<Irrep> irreducible_reps(const HopfData& a, const CentralDecomposition& dec, const Vec& omega,
                                    std::uint64_t seed = 11);

}  // namespace kit
