#include <random>

#include "doctest.h"
#include "kit/hopf.hpp"

using namespace kit;

namespace {

Vec rnd(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = cplx(g(rng), g(rng));
    return v;
}

double diff(const Vec& a, const Vec& b) { return (a - b).cwiseAbs().maxCoeff(); }
double diff(const Mat& a, const Mat& b) { return (a - b).cwiseAbs().maxCoeff(); }

// X in A (x) A as a pair-indexed vector; (x (x) y)
Vec kron(const Vec& x, const Vec& y) {
    Vec out(x.size() * y.size());
    for (int i = 0; i < x.size(); ++i) out.segment(i * y.size(), y.size()) = x(i) * y;
    return out;
}

// product in A^(x)k with k tensor factors
Vec mul_tensor(const HopfData& h, const Vec& x, const Vec& y, int k) {
    if (k == 1) return h.mul(x, y);
    const int d = h.dim;
    const int rest = static_cast<int>(x.size() / d);
    Vec out = Vec::Zero(x.size());
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const Vec xi = x.segment(i * rest, rest), yj = y.segment(j * rest, rest);
            if (xi.cwiseAbs().maxCoeff() < 1e-15 || yj.cwiseAbs().maxCoeff() < 1e-15) continue;
            const Vec head = h.mul(h.basis(i), h.basis(j));
            const Vec tail = mul_tensor(h, xi, yj, k - 1);
            out += kron(head, tail);
        }
    return out;
}

bool is_central(const HopfData& a, const Vec& z, double tol = 1e-9) {
    for (int k = 0; k < a.dim; ++k)
        if (diff(a.mul(a.basis(k), z), a.mul(z, a.basis(k))) > tol) return false;
    return true;
}

}  // namespace

TEST_CASE("presets satisfy the axioms") {
    for (const auto& name : hopf_preset_names()) {
        const HopfData h = hopf_preset(name);
        const auto r = validate_hopf(h, 1e-12);
        CHECK_MESSAGE(r.ok, name);
        CHECK(r.max_residual < 1e-12);
        const auto rd = validate_hopf(dual_hopf(h), 1e-12);
        CHECK_MESSAGE(rd.ok, name);
    }
    CHECK(hopf_preset("z3").dim == 3);
    CHECK(hopf_preset("s3").dim == 6);
    CHECK_THROWS_WITH_AS(hopf_preset("q8"), doctest::Contains("UnknownPreset"), Error);
}

TEST_CASE("group algebra checks") {
    const HopfData z2 = hopf_preset("z2");
    CHECK(diff(z2.haar, Vec::Constant(2, 0.5)) < 1e-15);
    CHECK(diff(compute_haar(z2), z2.haar) < 1e-12);
    std::vector<std::vector<int>> bad = {{0, 1}, {0, 1}};
    CHECK_THROWS_AS(group_algebra(bad, "bad"), Error);
    try {
        group_algebra({{0, 1, 2}, {1, 1, 0}, {2, 0, 1}}, "bad");
        FAIL("expected NotAGroup");
    } catch (const Error& e) {
        CHECK(e.kind() == "NotAGroup");
    }
}

TEST_CASE("corrupted structure fails validation") {
    HopfData h = hopf_preset("z3");
    h.mult[(1 * 3 + 1) * 3 + 2] = 0.0;
    h.mult[(1 * 3 + 1) * 3 + 0] = 1.0;
    h.index();
    auto r = validate_hopf(h);
    CHECK_FALSE(r.ok);
    CHECK(std::find(r.failures.begin(), r.failures.end(), "associativity") != r.failures.end());

    HopfData s = hopf_preset("s3");
    s.antipode = Mat::Identity(6, 6);
    s.index();
    r = validate_hopf(s);
    CHECK_FALSE(r.ok);
    CHECK(std::find(r.failures.begin(), r.failures.end(), "antipode") != r.failures.end());
}

TEST_CASE("dual of the dual") {
    for (const auto& name : hopf_preset_names()) {
        const HopfData h = hopf_preset(name);
        const HopfData dd = dual_hopf(dual_hopf(h));
        CHECK(dd.mult == h.mult);
        CHECK(dd.comult == h.comult);
        CHECK(diff(dd.antipode, h.antipode) < 1e-14);
        CHECK(diff(dd.star, h.star) < 1e-14);
        CHECK(diff(dd.haar, h.haar) < 1e-10);
        const HopfData hs = dual_hopf(h);
        Vec delta_e = Vec::Zero(h.dim);
        delta_e(0) = 1.0;
        CHECK(diff(hs.haar, delta_e) < 1e-10);
    }
}

TEST_CASE("double of Z2") {
    const auto q = drinfeld_double(hopf_preset("z2"));
    const HopfData& D = q.hopf;
    CHECK(D.dim == 4);
    CHECK(validate_hopf(D).ok);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            CHECK(diff(D.mul(D.basis(i), D.basis(j)), D.mul(D.basis(j), D.basis(i))) < 1e-14);
            const Vec c = D.comul(D.basis(i));
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) CHECK(std::abs(c(a * 4 + b) - c(b * 4 + a)) < 1e-14);
        }
    const auto dec = central_decomposition(D);
    CHECK(dec.idempotents.size() == 4);
    for (int d : dec.block_dims) CHECK(d == 1);
}

TEST_CASE("double of S3") {
    const HopfData s3 = hopf_preset("s3");
    const auto q = drinfeld_double(s3);
    const HopfData& D = q.hopf;
    CHECK(D.dim == 36);
    const auto r = validate_hopf(D);
    CHECK(r.ok);
    for (const auto& f : r.failures) MESSAGE(f);

    // haar of the double is iota (x) i
    const HopfData hs = dual_hopf(s3);
    CHECK(diff(D.haar, kron(hs.haar, s3.haar)) < 1e-10);

    const auto dec = central_decomposition(D);
    REQUIRE(dec.idempotents.size() == 8);
    int sum = 0;
    std::vector<int> dims = dec.block_dims;
    for (int d : dims) sum += d * d;
    CHECK(sum == 36);
    std::sort(dims.begin(), dims.end());
    CHECK(dims == std::vector<int>{1, 1, 2, 2, 2, 2, 3, 3});
    CHECK(std::abs(D.eps(dec.idempotents[0]) - 1.0) < 1e-10);

    Vec total = Vec::Zero(36);
    for (size_t i = 0; i < dec.idempotents.size(); ++i) {
        const Vec& e = dec.idempotents[i];
        total += e;
        CHECK(is_central(D, e));
        CHECK(diff(D.dagger(e), e) < 1e-9);
        for (size_t j = 0; j < dec.idempotents.size(); ++j) {
            const Vec p = D.mul(e, dec.idempotents[j]);
            CHECK(diff(p, i == j ? e : Vec(Vec::Zero(36))) < 1e-9);
        }
    }
    CHECK(diff(total, D.unit) < 1e-9);
}

TEST_CASE("group algebra decomposition") {
    const HopfData z3 = hopf_preset("z3");
    const auto dec = central_decomposition(z3);
    CHECK(dec.idempotents.size() == 3);
    const auto s3 = central_decomposition(hopf_preset("s3"));
    std::vector<int> dims = s3.block_dims;
    std::sort(dims.begin(), dims.end());
    CHECK(dims == std::vector<int>{1, 1, 2});
}

TEST_CASE("dual of the double") {
    for (const std::string name : {"z2", "z3", "s3"}) {
        const HopfData h = hopf_preset(name);
        const auto q = drinfeld_double(h);
        const HopfData& D = q.hopf;
        const HopfData Ds = dual_of_double_algebra(h);
        const HopfData ref = dual_hopf(D);
        CHECK_MESSAGE(validate_hopf(Ds).ok, name);
        CHECK(diff(Vec(Eigen::Map<const Vec>(Ds.mult.data(), Ds.mult.size())),
                   Vec(Eigen::Map<const Vec>(ref.mult.data(), ref.mult.size()))) < 1e-12);
        CHECK(diff(Vec(Eigen::Map<const Vec>(Ds.comult.data(), Ds.comult.size())),
                   Vec(Eigen::Map<const Vec>(ref.comult.data(), ref.comult.size()))) < 1e-12);
        CHECK(diff(Ds.unit, ref.unit) < 1e-14);
        CHECK(diff(Ds.counit, ref.counit) < 1e-14);
        CHECK(diff(Ds.antipode, ref.antipode) < 1e-12);
        CHECK(diff(Ds.star, ref.star) < 1e-12);
        CHECK(diff(dual_double_antipode_factorized(h), Ds.antipode) < 1e-10);
        CHECK(diff(Ds.unit, kron(h.unit, h.counit)) < 1e-14);

        // pairing duality on random elements
        std::mt19937_64 rng(5);
        const int n = D.dim;
        for (int t = 0; t < 5; ++t) {
            const Vec phi = rnd(n, rng), x = rnd(n, rng), y = rnd(n, rng);
            CHECK(std::abs(pairing(Ds.comul(phi), kron(x, y)) - pairing(phi, D.mul(x, y))) < 1e-9);
            const Vec psi = rnd(n, rng);
            CHECK(std::abs(pairing(Ds.mul(phi, psi), x) - pairing(kron(phi, psi), D.comul(x))) < 1e-9);
            // hit actions
            CHECK(std::abs(pairing(hit_left(Ds, x, phi), y) - pairing(phi, D.mul(y, x))) < 1e-9);
            CHECK(std::abs(pairing(hit_right(Ds, phi, x), y) - pairing(phi, D.mul(x, y))) < 1e-9);
        }
    }
}

TEST_CASE("R-matrix and Drinfeld element") {
    for (const std::string name : {"z2", "s3"}) {
        const auto q = drinfeld_double(hopf_preset(name));
        const HopfData& D = q.hopf;
        const int n = D.dim;
        const Vec& R = q.r_matrix;
        std::mt19937_64 rng(9);
        for (int t = 0; t < 3; ++t) {
            const Vec x = rnd(n, rng);
            const Vec dx = D.comul(x);
            Vec dop(n * n);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) dop(a * n + b) = dx(b * n + a);
            CHECK(diff(mul_tensor(D, R, dx, 2), mul_tensor(D, dop, R, 2)) < 1e-9);
        }
        // (D (x) id) R = R13 R23
        Vec lhs = Vec::Zero(n * n * n), r13 = Vec::Zero(n * n * n), r23 = Vec::Zero(n * n * n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                const cplx v = R(a * n + b);
                if (std::abs(v) < 1e-15) continue;
                lhs += v * kron(D.comul(D.basis(a)), D.basis(b));
                r13 += v * kron(kron(D.basis(a), D.unit), D.basis(b));
                r23 += v * kron(D.unit, kron(D.basis(a), D.basis(b)));
            }
        CHECK(diff(lhs, mul_tensor(D, r13, r23, 3)) < 1e-9);
        CHECK(diff(D.S(q.drinfeld_u), q.drinfeld_u) < 1e-10);
        CHECK(D.left_mult(q.drinfeld_u).fullPivLu().isInvertible());
    }
}

TEST_CASE("central and cocommutative projections") {
    const HopfData s3 = hopf_preset("s3");
    const auto q = drinfeld_double(s3);
    const HopfData& D = q.hopf;
    const HopfData Ds = dual_of_double_algebra(s3);
    const int n = D.dim;
    const Mat P = central_projection_matrix(D);
    CHECK(diff(central_projection(D, D.unit), D.unit) < 1e-10);
    CHECK(diff(Mat(P * P), P) < 1e-10);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 3; ++t) {
        const Vec x = rnd(n, rng), y = rnd(n, rng), phi = rnd(n, rng);
        const Vec z = central_projection(D, x);
        CHECK(is_central(D, z));
        // transpose under the pairing
        CHECK(std::abs(pairing(cocommutative_projection(D, phi), y) - pairing(phi, central_projection(D, y))) < 1e-9);
        // image is cocommutative: Psi(xy) = Psi(yx)
        const Vec c = cocommutative_projection(D, phi);
        CHECK(std::abs(pairing(c, D.mul(x, y)) - pairing(c, D.mul(y, x))) < 1e-9);
        // flip carries cocommutative functionals in D* to the centre
        const Vec cs = Ds.comul(c);
        Vec cop(n * n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) cop(a * n + b) = cs(b * n + a);
        CHECK(diff(cs, cop) < 1e-9);
        CHECK(is_central(D, flip_dual_to_double(s3.dim, c)));
    }
    CHECK(diff(flip_double_to_dual(6, flip_dual_to_double(6, D.haar)), D.haar) < 1e-15);
}

TEST_CASE("irreducible representations") {
    const HopfData s3 = hopf_preset("s3");
    const auto q = drinfeld_double(s3);
    const HopfData& D = q.hopf;
    const HopfData Ds = dual_of_double_algebra(s3);
    const auto dec = central_decomposition(D);
    const auto reps = irreducible_reps(D, dec, Ds.haar);
    REQUIRE(reps.size() == dec.idempotents.size());
    std::mt19937_64 rng(4);
    for (size_t r = 0; r < reps.size(); ++r) {
        const Irrep& ir = reps[r];
        CHECK(ir.dim == dec.block_dims[r]);
        const Mat id = Mat::Identity(ir.dim, ir.dim);
        CHECK(diff(ir.at(D.unit), id) < 1e-9);
        CHECK(diff(ir.at(dec.idempotents[r]), id) < 1e-9);
        for (size_t s = 0; s < reps.size(); ++s)
            if (s != r) CHECK(ir.at(dec.idempotents[s]).cwiseAbs().maxCoeff() < 1e-9);
        const Vec x = rnd(D.dim, rng), y = rnd(D.dim, rng);
        CHECK(diff(Mat(ir.at(x) * ir.at(y)), ir.at(D.mul(x, y))) < 1e-9);
        CHECK(diff(Mat(ir.at(x).adjoint()), ir.at(D.dagger(x))) < 1e-9);
    }
}
