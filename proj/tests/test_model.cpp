#include <doctest.h>

#include <random>

#include "kit/model.hpp"

using namespace kit;

namespace {

Vec rnd(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = cplx(g(rng), g(rng));
    return v;
}

Mat pauli_x() {
    Mat m = Mat::Zero(2, 2);
    m(0, 1) = m(1, 0) = 1;
    return m;
}

Mat pauli_z() {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = 1;
    m(1, 1) = -1;
    return m;
}

ModelOperator tensor_on(int d, const std::vector<int>& edges, const Mat& m) {
    ModelOperator out = ModelOperator::identity(d);
    for (int e : edges) out = out * edge_operator(d, e, m);
    return out;
}

}  // namespace

TEST_CASE("operator algebra basics") {
    const int d = 2;
    const ModelOperator x0 = edge_operator(d, 0, pauli_x());
    const ModelOperator z0 = edge_operator(d, 0, pauli_z());
    const ModelOperator z3 = edge_operator(d, 3, pauli_z());
    const ModelOperator id = ModelOperator::identity(d);
    CHECK(op_distance(x0 * x0, id) < 1e-14);
    CHECK(op_distance(x0 * z0, cplx(-1.0) * (z0 * x0)) < 1e-14);
    CHECK(op_norm(commutator(x0, z3)) < 1e-14);
    CHECK(op_norm(x0 - x0) < 1e-14);
    CHECK((x0 - x0).is_zero());
    const LocalOp c = compile(x0 * z3, {0, 3});
    CHECK(c.mat.rows() == 4);
    // first edge most significant: X (x) Z
    CHECK(std::abs(c.mat.coeff(2, 0) - cplx(1)) < 1e-14);
    CHECK(std::abs(c.mat.coeff(3, 1) - cplx(-1)) < 1e-14);
    CHECK(op_distance(adjoint(cplx(0, 1) * x0), cplx(0, -1) * x0) < 1e-14);
}

TEST_CASE("apply on a register matches compiled matrices") {
    std::mt19937_64 rng(4);
    const int d = 3;
    Mat a = Mat::Random(3, 3), b = Mat::Random(3, 3);
    const ModelOperator op = edge_operator(d, 1, a) * edge_operator(d, 4, b) + edge_operator(d, 2, a);
    const std::vector<int> reg{1, 2, 4};
    const Vec v = rnd(27, rng);
    const Vec direct = apply_operator(op, reg, v);
    const Vec viaexp = compile(op, reg).mat * v;
    CHECK((direct - viaexp).norm() < 1e-12);
    CHECK_THROWS_AS(apply_operator(op, {1, 2}, rnd(9, rng)), Error);
}

TEST_CASE("probe distance on large supports") {
    const int d = 3;
    std::vector<int> edges{0, 1, 2, 3, 4, 5, 6, 7, 8};
    const ModelOperator a = tensor_on(d, edges, Mat::Identity(3, 3) * 2.0);
    const ModelOperator b = cplx(512.0) * ModelOperator::identity(d);
    CHECK(op_distance(a, b) < 1e-9);
    CHECK(op_distance(a, cplx(511.0) * ModelOperator::identity(d)) > 0.5);
}

TEST_CASE("edge generators and orientation") {
    const Model m(preset("torus-2x2"), hopf_preset("s3"));
    const auto& h = m.algebra();
    for (int a = 0; a < m.presentation().size(); ++a) {
        CHECK(op_distance(op_P(m, a, h.unit), ModelOperator::identity(6)) < 1e-12);
        CHECK(op_distance(op_Q(m, a, m.dual().unit), ModelOperator::identity(6)) < 1e-12);
        // the two arrows of an edge are related by the antipode conjugation
        const int b = m.presentation().t1(a);
        CHECK(op_distance(s_M(m, op_P(m, a, h.basis(1))), op_P(m, b, h.basis(1))) < 1e-12);
        CHECK(op_distance(s_M(m, op_Q(m, a, m.dual().basis(2))), op_Q(m, b, m.dual().basis(2))) < 1e-12);
    }
    CHECK_THROWS_AS(Model(preset("torus-2x2"), hopf_preset("z2"), std::vector<int>{0}), Error);
    CHECK(default_orientation(preset("torus-2x2")).size() == 8);
}

TEST_CASE("toric code stabilizers for Z2") {
    const Model m(preset("torus-2x2"), hopf_preset("z2"));
    const auto& cx = m.complex();
    for (int v = 0; v < cx.count(0); ++v) {
        const ModelOperator av = vertex_projector(m, v);
        const auto sup = av.support();
        CHECK(sup.size() == 4);
        const ModelOperator star = cplx(0.5) * (ModelOperator::identity(2) + tensor_on(2, sup, pauli_x()));
        CHECK(op_distance(av, star) < 1e-12);
    }
    for (int f = 0; f < cx.count(2); ++f) {
        const ModelOperator bf = face_projector(m, f);
        const auto sup = bf.support();
        CHECK(sup.size() == 4);
        const ModelOperator plaq = cplx(0.5) * (ModelOperator::identity(2) + tensor_on(2, sup, pauli_z()));
        CHECK(op_distance(bf, plaq) < 1e-12);
    }
}

TEST_CASE("vertex and face projectors") {
    for (const char* hn : {"z2", "z3", "s3"}) {
        for (const char* pn : {"minimal-sphere", "torus-2x2"}) {
            CAPTURE(hn);
            CAPTURE(pn);
            const Model m(preset(pn), hopf_preset(hn));
            const auto& cx = m.complex();
            std::vector<ModelOperator> av, bf;
            for (int v = 0; v < cx.count(0); ++v) av.push_back(vertex_projector(m, v));
            for (int f = 0; f < cx.count(2); ++f) bf.push_back(face_projector(m, f));
            for (const auto& x : av) {
                CHECK(op_distance(x * x, x) < 1e-10);
                CHECK(op_distance(adjoint(x), x) < 1e-10);
            }
            for (const auto& x : bf) {
                CHECK(op_distance(x * x, x) < 1e-10);
                CHECK(op_distance(adjoint(x), x) < 1e-10);
            }
            // full probing over 6^8 amplitudes is slow, so s3 on the torus checks one row of pairs
            const size_t rows = (m.dim() > 3 && m.edge_count() > 4) ? 1 : av.size();
            for (size_t i = 0; i < rows; ++i) {
                for (const auto& y : bf) CHECK(commutator_norm(av[i], y) < 1e-10);
                for (size_t j = i + 1; j < av.size(); ++j) CHECK(commutator_norm(av[i], av[j]) < 1e-10);
                for (size_t j = i + 1; j < bf.size(); ++j) CHECK(commutator_norm(bf[i], bf[j]) < 1e-10);
            }
            // independent of the arrow chosen in the orbit
            const auto& p = m.presentation();
            for (int a = 0; a < p.size(); ++a) {
                CHECK(op_distance(gauss_G(m, a, m.algebra().haar), av[cx.cell_of[0][a]]) < 1e-10);
                CHECK(op_distance(flux_F(m, a, m.dual().haar), bf[cx.cell_of[2][a]]) < 1e-10);
            }
        }
    }
}

TEST_CASE("Gauss and flux maps are algebra maps") {
    std::mt19937_64 rng(12);
    const Model m(preset("torus-2x2"), hopf_preset("s3"));
    const auto& h = m.algebra();
    const auto& hs = m.dual();
    for (int a : {0, 3, 6}) {
        CHECK(op_distance(gauss_G(m, a, h.unit), ModelOperator::identity(6)) < 1e-12);
        CHECK(op_distance(flux_F(m, a, hs.unit), ModelOperator::identity(6)) < 1e-12);
        const Vec x = rnd(6, rng), y = rnd(6, rng);
        CHECK(op_distance(gauss_G(m, a, x) * gauss_G(m, a, y), gauss_G(m, a, h.mul(x, y))) < 1e-9);
        CHECK(op_distance(flux_F(m, a, x) * flux_F(m, a, y), flux_F(m, a, hs.mul(x, y))) < 1e-9);
    }
}

TEST_CASE("Hamiltonian is self-adjoint and nonnegative on probes") {
    std::mt19937_64 rng(5);
    const Model m(preset("torus-2x2"), hopf_preset("z3"));
    const ModelOperator ham = hamiltonian(m);
    CHECK(op_distance(adjoint(ham), ham) < 1e-9);
    std::vector<int> reg(m.edge_count());
    for (int e = 0; e < m.edge_count(); ++e) reg[e] = e;
    for (int k = 0; k < 4; ++k) {
        const Vec v = rnd(6561, rng);
        const cplx ev = v.dot(apply_operator(ham, reg, v));
        CHECK(std::abs(ev.imag()) < 1e-8 * v.squaredNorm());
        CHECK(ev.real() > -1e-8);
    }
}

TEST_CASE("double embedding") {
    std::mt19937_64 rng(2);
    for (const char* hn : {"z2", "s3"}) {
        const Model m(preset("torus-2x2"), hopf_preset(hn));
        const auto& D = m.double_algebra().hopf;
        const int a = 0;
        CHECK(op_distance(double_embed(m, a, D.unit), ModelOperator::identity(m.dim())) < 1e-10);
        for (int k = 0; k < 2; ++k) {
            const Vec x = rnd(D.dim, rng), y = rnd(D.dim, rng);
            CHECK(op_distance(double_embed(m, a, x) * double_embed(m, a, y), double_embed(m, a, D.mul(x, y))) <
                  1e-8);
            CHECK(op_distance(adjoint(double_embed(m, a, x)), double_embed(m, a, D.dagger(x))) < 1e-8);
        }
    }
}

TEST_CASE("antipode conjugation") {
    std::mt19937_64 rng(8);
    const Model m(preset("torus-2x2"), hopf_preset("s3"));
    const ModelOperator a = op_P(m, 0, rnd(6, rng)) * op_Q(m, 5, rnd(6, rng));
    const ModelOperator b = flux_F(m, 2, rnd(6, rng));
    CHECK(op_distance(s_M(m, s_M(m, a)), a) < 1e-10);
    CHECK(op_distance(s_M(m, a * b), s_M(m, a) * s_M(m, b)) < 1e-9);
}

TEST_CASE("holonomy steps and convolution inverse") {
    std::mt19937_64 rng(3);
    const Model m(preset("torus-2x2"), hopf_preset("s3"));
    const auto& ds = m.dual_double();
    for (int kind : {0, 2})
        for (int sign : {1, -1}) {
            const int d = darrow(1, kind, sign);
            const Vec phi = rnd(ds.dim, rng);
            const OpCurve c{arrow_source(m.presentation(), d), {d, flip_arrow(d)}};
            CHECK(op_distance(ophol(m, c, phi), ds.eps(phi) * ModelOperator::identity(6)) < 1e-9);
            // single arrows: hol and ophol agree through the antipodes
            const OpCurve one{arrow_source(m.presentation(), d), {d}};
            CHECK(op_distance(hol(m, one, phi), s_M(m, ophol(m, one, dstar_S(m, phi)))) < 1e-9);
        }
    // empty curve gives the counit
    const Vec phi = rnd(ds.dim, rng);
    CHECK(op_distance(ophol(m, trivial_curve(0), phi), ds.eps(phi) * ModelOperator::identity(6)) < 1e-12);
}

namespace {

void report_failures(const SuiteReport& r) {
    for (const auto& c : r.checks)
        if (!c.ok) MESSAGE(r.suite << " " << c.name << " residual " << c.residual);
}

}  // namespace

TEST_CASE("verification suites, abelian algebras") {
    for (const char* hn : {"z2", "z3"})
        for (const char* pn : {"minimal-sphere", "torus-2x2"}) {
            CAPTURE(hn);
            CAPTURE(pn);
            const Model m(preset(pn), hopf_preset(hn));
            for (const auto& r : {verify_relations(m), verify_loops(m), verify_ribbons(m), verify_gauge(m)}) {
                report_failures(r);
                CHECK(r.ok);
            }
        }
}

TEST_CASE("verification suites, S3") {
    for (const char* pn : {"minimal-sphere", "torus-2x2"}) {
        CAPTURE(pn);
        const Model m(preset(pn), hopf_preset("s3"));
        for (const auto& r : {verify_relations(m), verify_loops(m), verify_ribbons(m), verify_gauge(m)}) {
            report_failures(r);
            CHECK(r.ok);
        }
    }
}
