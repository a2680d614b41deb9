#include "kit/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace kit {

namespace {

constexpr double kPrune = 1e-13;
constexpr double kMergeDim = 4194304.0;  // 2^22
constexpr double kExactProbeDim = 16384.0;

double ipow(int d, size_t k) { return std::pow(static_cast<double>(d), static_cast<double>(k)); }

std::vector<int> merge_edges(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

SpMat to_sparse(const Mat& m) {
    std::vector<Eigen::Triplet<cplx>> t;
    for (int c = 0; c < m.cols(); ++c)
        for (int r = 0; r < m.rows(); ++r)
            if (std::abs(m(r, c)) > kPrune) t.emplace_back(r, c, m(r, c));
    SpMat s(m.rows(), m.cols());
    s.setFromTriplets(t.begin(), t.end());
    return s;
}

SpMat sparse_identity(int n) {
    SpMat s(n, n);
    s.setIdentity();
    return s;
}

// offsets of every configuration of `sub` inside the register `reg` (both sorted)
std::vector<long> sub_offsets(int d, const std::vector<int>& sub, const std::vector<int>& reg) {
    const int n = static_cast<int>(reg.size());
    std::vector<long> strides;
    for (int e : sub) {
        const auto it = std::lower_bound(reg.begin(), reg.end(), e);
        if (it == reg.end() || *it != e) throw Error("DimMismatch", "operator edge outside the register");
        const int pos = static_cast<int>(it - reg.begin());
        strides.push_back(static_cast<long>(std::llround(ipow(d, n - 1 - pos))));
    }
    const long count = static_cast<long>(std::llround(ipow(d, sub.size())));
    std::vector<long> out(count, 0);
    for (long idx = 0; idx < count; ++idx) {
        long rem = idx, off = 0;
        for (int k = static_cast<int>(sub.size()) - 1; k >= 0; --k) {
            off += (rem % d) * strides[k];
            rem /= d;
        }
        out[idx] = off;
    }
    return out;
}

std::vector<int> complement(const std::vector<int>& reg, const std::vector<int>& sub) {
    std::vector<int> out;
    std::set_difference(reg.begin(), reg.end(), sub.begin(), sub.end(), std::back_inserter(out));
    return out;
}

void prune(SpMat& m) {
    m.prune([](const Eigen::Index&, const Eigen::Index&, const cplx& v) { return std::abs(v) > kPrune; });
}

void normalize(ModelOperator& op) {
    std::vector<LocalOp> kept;
    for (auto& t : op.terms)
        if (t.mat.nonZeros() > 0) kept.push_back(std::move(t));
    op.terms = std::move(kept);
    if (op.terms.size() <= 1) return;
    std::vector<int> all;
    for (const auto& t : op.terms) all = merge_edges(all, t.edges);
    if (ipow(op.d, all.size()) <= kMergeDim) {
        LocalOp one = compile(op, all);
        op.terms.clear();
        if (one.mat.nonZeros() > 0) op.terms.push_back(std::move(one));
        return;
    }
    // merge terms sharing a support only
    std::vector<LocalOp> out;
    for (auto& t : op.terms) {
        auto it = std::find_if(out.begin(), out.end(), [&](const LocalOp& o) { return o.edges == t.edges; });
        if (it == out.end())
            out.push_back(std::move(t));
        else
            it->mat += t.mat;
    }
    for (auto& t : out) prune(t.mat);
    op.terms = std::move(out);
}

Vec random_unit(long n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Vec v(n);
    for (long i = 0; i < n; ++i) v(i) = cplx(g(rng), g(rng));
    return v / v.norm();
}

}  // namespace

// ---------------------------------------------------------------- operators

ModelOperator ModelOperator::identity(int d) {
    ModelOperator op{d, {}};
    op.terms.push_back(LocalOp{{}, sparse_identity(1)});
    return op;
}

std::vector<int> ModelOperator::support() const {
    std::vector<int> out;
    for (const auto& t : terms) out = merge_edges(out, t.edges);
    return out;
}

ModelOperator edge_operator(int d, int edge, const Mat& m) {
    ModelOperator op{d, {}};
    LocalOp t{{edge}, to_sparse(m)};
    if (t.mat.nonZeros() > 0) op.terms.push_back(std::move(t));
    return op;
}

LocalOp expand(const LocalOp& op, int d, const std::vector<int>& edges) {
    if (op.edges == edges) return op;
    const std::vector<long> off = sub_offsets(d, op.edges, edges);
    const std::vector<int> extra = complement(edges, op.edges);
    const std::vector<long> eoff = sub_offsets(d, extra, edges);
    const long n = static_cast<long>(std::llround(ipow(d, edges.size())));
    std::vector<Eigen::Triplet<cplx>> t;
    t.reserve(static_cast<size_t>(op.mat.nonZeros()) * eoff.size());
    for (long y : eoff)
        for (int c = 0; c < op.mat.outerSize(); ++c)
            for (SpMat::InnerIterator it(op.mat, c); it; ++it)
                t.emplace_back(off[it.row()] + y, off[c] + y, it.value());
    LocalOp out{edges, SpMat(n, n)};
    out.mat.setFromTriplets(t.begin(), t.end());
    return out;
}

LocalOp compile(const ModelOperator& a, const std::vector<int>& edges) {
    const long n = static_cast<long>(std::llround(ipow(a.d, edges.size())));
    LocalOp out{edges, SpMat(n, n)};
    for (const auto& t : a.terms) out.mat += expand(t, a.d, edges).mat;
    prune(out.mat);
    return out;
}

ModelOperator operator*(const ModelOperator& a, const ModelOperator& b) {
    ModelOperator out{std::max(a.d, b.d), {}};
    for (const auto& ta : a.terms)
        for (const auto& tb : b.terms) {
            const auto u = merge_edges(ta.edges, tb.edges);
            LocalOp t{u, SpMat()};
            if (ta.edges.empty())
                t.mat = ta.mat.coeff(0, 0) * expand(tb, out.d, u).mat;
            else if (tb.edges.empty())
                t.mat = tb.mat.coeff(0, 0) * expand(ta, out.d, u).mat;
            else
                t.mat = (expand(ta, out.d, u).mat * expand(tb, out.d, u).mat).pruned();
            prune(t.mat);
            out.terms.push_back(std::move(t));
        }
    normalize(out);
    return out;
}

ModelOperator operator+(const ModelOperator& a, const ModelOperator& b) {
    ModelOperator out{std::max(a.d, b.d), a.terms};
    out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
    normalize(out);
    return out;
}

ModelOperator operator*(cplx c, const ModelOperator& a) {
    ModelOperator out = a;
    if (std::abs(c) == 0) return ModelOperator::zero(a.d);
    for (auto& t : out.terms) t.mat *= c;
    return out;
}

ModelOperator operator-(const ModelOperator& a, const ModelOperator& b) { return a + cplx(-1.0) * b; }

ModelOperator append_terms(const ModelOperator& a, const ModelOperator& b) {
    ModelOperator out{std::max(a.d, b.d), a.terms};
    out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
    return out;
}

ModelOperator commutator(const ModelOperator& a, const ModelOperator& b) { return a * b - b * a; }

ModelOperator adjoint(const ModelOperator& a) {
    ModelOperator out{a.d, {}};
    for (const auto& t : a.terms) out.terms.push_back(LocalOp{t.edges, SpMat(t.mat.adjoint())});
    return out;
}

void apply_local(const LocalOp& op, int d, const std::vector<int>& reg, const Vec& in, Vec& out) {
    if (op.edges.empty()) {
        out += op.mat.coeff(0, 0) * in;
        return;
    }
    const std::vector<long> off = sub_offsets(d, op.edges, reg);
    const std::vector<long> outer = sub_offsets(d, complement(reg, op.edges), reg);
    for (long o : outer)
        for (int c = 0; c < op.mat.outerSize(); ++c) {
            const cplx x = in(o + off[c]);
            if (x == cplx(0)) continue;
            for (SpMat::InnerIterator it(op.mat, c); it; ++it) out(o + off[it.row()]) += it.value() * x;
        }
}

Vec apply_operator(const ModelOperator& a, const std::vector<int>& reg, const Vec& in) {
    Vec out = Vec::Zero(in.size());
    for (const auto& t : a.terms) apply_local(t, a.d, reg, in, out);
    return out;
}

double op_distance(const ModelOperator& a, const ModelOperator& b, std::uint64_t seed) {
    const int d = std::max(a.d, b.d);
    const auto u = merge_edges(a.support(), b.support());
    if (ipow(d, u.size()) <= kExactProbeDim) {
        ModelOperator da = a, db = b;
        da.d = db.d = d;
        const SpMat diff = compile(da, u).mat - compile(db, u).mat;
        double m = 0;
        for (int c = 0; c < diff.outerSize(); ++c)
            for (SpMat::InnerIterator it(diff, c); it; ++it) m = std::max(m, std::abs(it.value()));
        return m;
    }
    std::mt19937_64 rng(seed);
    const long n = static_cast<long>(std::llround(ipow(d, u.size())));
    double m = 0;
    for (int k = 0; k < 64; ++k) {
        const Vec v = random_unit(n, rng);
        m = std::max(m, (apply_operator(a, u, v) - apply_operator(b, u, v)).norm());
    }
    return m;
}

std::vector<int> LazyOp::support() const {
    std::vector<int> out;
    for (const auto& t : terms)
        for (const auto& f : t.second) out = merge_edges(out, f.support());
    return out;
}

LazyOp lazy(const ModelOperator& a) { return lazy_product({a}); }

LazyOp lazy_product(std::vector<ModelOperator> factors, cplx c) {
    LazyOp out;
    for (const auto& f : factors) out.d = std::max(out.d, f.d);
    out.terms.emplace_back(c, std::move(factors));
    return out;
}

LazyOp operator+(const LazyOp& a, const LazyOp& b) {
    LazyOp out = a;
    out.d = std::max(a.d, b.d);
    out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
    return out;
}

LazyOp operator-(const LazyOp& a, const LazyOp& b) {
    LazyOp out = a;
    out.d = std::max(a.d, b.d);
    for (auto t : b.terms) {
        t.first = -t.first;
        out.terms.push_back(std::move(t));
    }
    return out;
}

double lazy_distance(const LazyOp& a, const LazyOp& b, std::uint64_t seed) {
    const int d = std::max(a.d, b.d);
    const auto u = merge_edges(a.support(), b.support());
    const LazyOp diff = a - b;
    if (ipow(d, u.size()) <= kExactProbeDim) {
        ModelOperator acc{d, {}};
        for (const auto& t : diff.terms) {
            ModelOperator prod = ModelOperator::identity(d);
            for (const auto& f : t.second) prod = prod * f;
            acc = acc + t.first * prod;
        }
        return op_norm(acc);
    }
    std::mt19937_64 rng(seed);
    const long n = static_cast<long>(std::llround(ipow(d, u.size())));
    double m = 0;
    for (int k = 0; k < 64; ++k) {
        const Vec v = random_unit(n, rng);
        Vec acc = Vec::Zero(n);
        for (const auto& t : diff.terms) {
            Vec w = v;
            for (auto it = t.second.rbegin(); it != t.second.rend(); ++it) w = apply_operator(*it, u, w);
            acc += t.first * w;
        }
        m = std::max(m, acc.norm());
    }
    return m;
}

double commutator_norm(const ModelOperator& a, const ModelOperator& b, std::uint64_t seed) {
    const auto sa = a.support(), sb = b.support();
    std::vector<int> common;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(common));
    if (common.empty()) return 0.0;
    return lazy_distance(lazy_product({a, b}), lazy_product({b, a}), seed);
}

double op_norm(const ModelOperator& a, std::uint64_t seed) { return op_distance(a, ModelOperator::zero(a.d), seed); }

// ---------------------------------------------------------------- model

std::vector<int> default_orientation(const ArrowPresentation& p) {
    const SurfaceComplex cx = build_complex(p);
    std::vector<int> out(cx.count(1));
    for (int e = 0; e < cx.count(1); ++e) out[e] = cx.cells[1][e].members[0];
    return out;
}

Model::Model(const ArrowPresentation& p, const HopfData& h, std::vector<int> orientation)
    : p_(p), cx_(build_complex(p)), h_(h), hs_(dual_hopf(h)), dd_(drinfeld_double(h)),
      ds_(dual_of_double_algebra(h)) {
    if (orientation.empty()) {
        orient_.resize(cx_.count(1));
        for (int e = 0; e < cx_.count(1); ++e) orient_[e] = cx_.cells[1][e].members[0];
    } else {
        if (static_cast<int>(orientation.size()) != cx_.count(1))
            throw Error("BadOrientation", "one arrow per edge expected");
        for (int e = 0; e < cx_.count(1); ++e)
            if (orientation[e] < 0 || orientation[e] >= p_.size() || cx_.cell_of[1][orientation[e]] != e)
                throw Error("BadOrientation", "arrow does not lie on its edge");
        orient_ = std::move(orientation);
    }
    const int d = h_.dim;
    for (int k = 0; k < d; ++k) {
        const Vec ek = h_.basis(k);
        lp_.push_back(h_.left_mult(ek));
        rp_.push_back(h_.right_mult(h_.S(ek)));
        Mat q = Mat::Zero(d, d), r = Mat::Zero(d, d);
        for (int j = 0; j < d; ++j)
            for (const auto& c : h_.cop_of[j]) {
                // x -> x(1) xi_k(x(2))
                if (c.c == k) q(c.b, j) += c.v;
                // x -> S(xi_k)(x(1)) x(2)
                r(c.c, j) += c.v * h_.antipode(k, c.b);
            }
        lq_.push_back(q);
        rq_.push_back(r);
    }
}

Mat Model::p_matrix(int a, const Vec& h) const {
    const bool o = is_oriented(a);
    Mat m = Mat::Zero(dim(), dim());
    for (int k = 0; k < dim(); ++k)
        if (h(k) != cplx(0)) m += h(k) * (o ? lp_[k] : rp_[k]);
    return m;
}

Mat Model::q_matrix(int a, const Vec& phi) const {
    const bool o = is_oriented(a);
    Mat m = Mat::Zero(dim(), dim());
    for (int k = 0; k < dim(); ++k)
        if (phi(k) != cplx(0)) m += phi(k) * (o ? lq_[k] : rq_[k]);
    return m;
}

ModelOperator op_P(const Model& m, int a, const Vec& h) { return edge_operator(m.dim(), m.edge_of(a), m.p_matrix(a, h)); }

ModelOperator op_Q(const Model& m, int a, const Vec& phi) {
    return edge_operator(m.dim(), m.edge_of(a), m.q_matrix(a, phi));
}

std::vector<ModelOperator> convolution_slots(const Model& m, const HopfData& coalgebra, int steps,
                                             const std::function<ModelOperator(int, int)>& step) {
    const int n = coalgebra.dim;
    std::vector<ModelOperator> cur(n, ModelOperator::zero(m.dim()));
    if (steps == 0) {
        for (int j = 0; j < n; ++j)
            if (coalgebra.counit(j) != cplx(0)) cur[j] = coalgebra.counit(j) * ModelOperator::identity(m.dim());
        return cur;
    }
    for (int q = 0; q < n; ++q) cur[q] = step(steps - 1, q);
    for (int k = steps - 2; k >= 0; --k) {
        std::vector<ModelOperator> fk(n, ModelOperator::zero(m.dim()));
        for (int p = 0; p < n; ++p) fk[p] = step(k, p);
        std::vector<ModelOperator> next(n, ModelOperator::zero(m.dim()));
        for (int j = 0; j < n; ++j) {
            ModelOperator acc = ModelOperator::zero(m.dim());
            for (const auto& e : coalgebra.cop_of[j]) {
                if (fk[e.b].is_zero() || cur[e.c].is_zero()) continue;
                const ModelOperator prod = fk[e.b] * cur[e.c];
                for (const auto& t : prod.terms) {
                    acc.terms.push_back(t);
                    acc.terms.back().mat *= e.v;
                }
            }
            next[j] = acc + ModelOperator::zero(m.dim());  // normalizes
        }
        cur = std::move(next);
    }
    return cur;
}

ModelOperator contract_slots(const std::vector<ModelOperator>& slots, const Vec& x) {
    ModelOperator acc{slots.empty() ? 0 : slots[0].d, {}};
    for (size_t j = 0; j < slots.size(); ++j) {
        if (x(j) == cplx(0)) continue;
        for (const auto& t : slots[j].terms) {
            acc.terms.push_back(t);
            acc.terms.back().mat *= x(j);
        }
    }
    return acc + ModelOperator::zero(acc.d);
}

std::vector<int> gauss_arrows(const ArrowPresentation& p, int a) {
    std::vector<int> out;
    const int m = p.orbit_size(0, a);
    int b = a;
    for (int k = 0; k < m; ++k) {
        b = p.t0(b);
        out.push_back(b);
    }
    return out;
}

std::vector<int> flux_arrows(const ArrowPresentation& p, int a) { return p.orbit(2, a); }

ModelOperator gauss_seq(const Model& m, const std::vector<int>& arrows, const Vec& h) {
    const auto slots = convolution_slots(m, m.algebra(), static_cast<int>(arrows.size()), [&](int k, int p) {
        return op_P(m, arrows[k], m.algebra().basis(p));
    });
    return contract_slots(slots, h);
}

ModelOperator flux_seq(const Model& m, const std::vector<int>& arrows, const Vec& phi) {
    const auto slots = convolution_slots(m, m.dual(), static_cast<int>(arrows.size()), [&](int k, int p) {
        return op_Q(m, arrows[k], m.dual().basis(p));
    });
    return contract_slots(slots, phi);
}

ModelOperator gauss_G(const Model& m, int a, const Vec& h) { return gauss_seq(m, gauss_arrows(m.presentation(), a), h); }

ModelOperator flux_F(const Model& m, int a, const Vec& phi) {
    return flux_seq(m, flux_arrows(m.presentation(), a), phi);
}

ModelOperator vertex_projector(const Model& m, int v) {
    return gauss_G(m, m.complex().cells[0][v].members[0], m.algebra().haar);
}

ModelOperator face_projector(const Model& m, int f) {
    return flux_F(m, m.complex().cells[2][f].members[0], m.dual().haar);
}

ModelOperator hamiltonian(const Model& m) {
    const auto& cx = m.complex();
    const double count = cx.count(0) + cx.count(2);
    ModelOperator out = cplx(count) * ModelOperator::identity(m.dim());
    for (int v = 0; v < cx.count(0); ++v) out = append_terms(out, cplx(-1.0) * vertex_projector(m, v));
    for (int f = 0; f < cx.count(2); ++f) out = append_terms(out, cplx(-1.0) * face_projector(m, f));
    return out;
}

namespace {

// D_a on every basis element of D(H)
std::vector<ModelOperator> double_basis_images(const Model& m, int a) {
    const int d = m.dim();
    const auto& p = m.presentation();
    const auto ga = gauss_arrows(p, a);
    const auto fa = flux_arrows(p, a);
    const auto gs = convolution_slots(m, m.algebra(), static_cast<int>(ga.size()),
                                      [&](int k, int q) { return op_P(m, ga[k], m.algebra().basis(q)); });
    const auto fs = convolution_slots(m, m.dual(), static_cast<int>(fa.size()),
                                      [&](int k, int q) { return op_Q(m, fa[k], m.dual().basis(q)); });
    std::vector<ModelOperator> out;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out.push_back(fs[i] * gs[j]);
    return out;
}

ModelOperator combine(const std::vector<ModelOperator>& basis, const Vec& x, int d) {
    ModelOperator acc{d, {}};
    for (size_t p = 0; p < basis.size(); ++p) {
        if (std::abs(x(p)) < kPrune) continue;
        for (const auto& t : basis[p].terms) {
            acc.terms.push_back(t);
            acc.terms.back().mat *= x(p);
        }
    }
    return acc + ModelOperator::zero(d);
}

enum class GaugeKind { Left, Right, LeftOp, RightOp };

ModelOperator gauge(const Model& m, int a, const Vec& x, const ModelOperator& op, GaugeKind kind) {
    const HopfData& D = m.double_algebra().hopf;
    const int n = D.dim;
    const auto basis = double_basis_images(m, a);
    const Vec cx = D.comul(x);
    ModelOperator acc{m.dim(), {}};
    for (int p = 0; p < n; ++p) {
        Vec second = Vec::Zero(n);
        for (int q = 0; q < n; ++q) second(q) = cx(p * n + q);
        if (second.cwiseAbs().maxCoeff() < kPrune) continue;
        const Vec first = D.basis(p);
        ModelOperator lhs{m.dim(), {}}, rhs{m.dim(), {}};
        switch (kind) {
            case GaugeKind::Left:  // D(X1) M D(S X2)
                lhs = combine(basis, first, m.dim());
                rhs = combine(basis, D.S(second), m.dim());
                break;
            case GaugeKind::Right:  // D(S X1) M D(X2)
                lhs = combine(basis, D.S(first), m.dim());
                rhs = combine(basis, second, m.dim());
                break;
            case GaugeKind::LeftOp:  // D(X2) M D(S X1)
                lhs = combine(basis, second, m.dim());
                rhs = combine(basis, D.S(first), m.dim());
                break;
            case GaugeKind::RightOp:  // D(S X2) M D(X1)
                lhs = combine(basis, D.S(second), m.dim());
                rhs = combine(basis, first, m.dim());
                break;
        }
        const ModelOperator t = lhs * op * rhs;
        acc.terms.insert(acc.terms.end(), t.terms.begin(), t.terms.end());
    }
    return acc + ModelOperator::zero(m.dim());
}

}  // namespace

ModelOperator double_embed(const Model& m, int a, const Vec& x) {
    return combine(double_basis_images(m, a), x, m.dim());
}

ModelOperator gauge_left(const Model& m, int a, const Vec& x, const ModelOperator& op) {
    return gauge(m, a, x, op, GaugeKind::Left);
}

ModelOperator gauge_right(const Model& m, int a, const ModelOperator& op, const Vec& x) {
    return gauge(m, a, x, op, GaugeKind::Right);
}

ModelOperator gauge_left_op(const Model& m, int a, const Vec& x, const ModelOperator& op) {
    return gauge(m, a, x, op, GaugeKind::LeftOp);
}

ModelOperator gauge_right_op(const Model& m, int a, const ModelOperator& op, const Vec& x) {
    return gauge(m, a, x, op, GaugeKind::RightOp);
}

ModelOperator theta(const Model& m, int a, const Vec& phi) {
    const int d = m.dim();
    ModelOperator acc{d, {}};
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const cplx c = phi(i * d + j);
            if (std::abs(c) < kPrune) continue;
            const ModelOperator t = op_P(m, a, m.algebra().basis(i)) * op_Q(m, a, m.dual().basis(j));
            for (const auto& x : t.terms) {
                acc.terms.push_back(x);
                acc.terms.back().mat *= c;
            }
        }
    return acc + ModelOperator::zero(d);
}

ModelOperator ophol_step(const Model& m, int darrow_id, const Vec& phi) {
    const auto u = DoubleArrow::unpack(darrow_id);
    const HopfData& h = m.algebra();
    const int d = m.dim();
    if (u.kind == 0) {
        Vec hv = Vec::Zero(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) hv(i) += phi(i * d + j) * h.unit(j);
        if (u.sign < 0) hv = h.S(hv);
        return op_P(m, u.base, hv);
    }
    Vec fv = Vec::Zero(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) fv(j) += phi(i * d + j) * h.counit(i);
    if (u.sign < 0) fv = m.dual().S(fv);
    return op_Q(m, u.base, fv);
}

ModelOperator s_M(const Model& m, const ModelOperator& op) {
    ModelOperator out{op.d, {}};
    const SpMat s1 = to_sparse(m.antipode_matrix());
    for (const auto& t : op.terms) {
        SpMat s = sparse_identity(1);
        for (size_t k = 0; k < t.edges.size(); ++k) {
            // kron(s, s1)
            SpMat next(s.rows() * s1.rows(), s.cols() * s1.cols());
            std::vector<Eigen::Triplet<cplx>> trip;
            for (int c = 0; c < s.outerSize(); ++c)
                for (SpMat::InnerIterator it(s, c); it; ++it)
                    for (int c2 = 0; c2 < s1.outerSize(); ++c2)
                        for (SpMat::InnerIterator it2(s1, c2); it2; ++it2)
                            trip.emplace_back(it.row() * s1.rows() + it2.row(), c * s1.cols() + c2,
                                              it.value() * it2.value());
            next.setFromTriplets(trip.begin(), trip.end());
            s = next;
        }
        SpMat mat = (s * t.mat * s).pruned();
        prune(mat);
        out.terms.push_back(LocalOp{t.edges, mat});
    }
    return out;
}

ModelOperator hol_step(const Model& m, int darrow_id, const Vec& phi) {
    return s_M(m, ophol_step(m, darrow_id, m.dual_double().S(phi)));
}

HolonomyAccumulator ophol_slots(const Model& m, const std::vector<int>& arrows) {
    const HopfData& ds = m.dual_double();
    std::vector<std::vector<ModelOperator>> cache(arrows.size());
    auto step = [&](int k, int p) {
        if (cache[k].empty())
            for (int q = 0; q < ds.dim; ++q) cache[k].push_back(ophol_step(m, arrows[k], ds.basis(q)));
        return cache[k][p];
    };
    return HolonomyAccumulator{convolution_slots(m, ds, static_cast<int>(arrows.size()), step)};
}

HolonomyAccumulator hol_slots(const Model& m, const std::vector<int>& arrows) {
    const HopfData& ds = m.dual_double();
    const int n = static_cast<int>(arrows.size());
    std::vector<std::vector<ModelOperator>> cache(arrows.size());
    // Hol_(d_n ... d_1) = Hol_dn * ... * Hol_d1 with d_1 traversed first
    auto step = [&](int k, int p) {
        if (cache[k].empty())
            for (int q = 0; q < ds.dim; ++q) cache[k].push_back(hol_step(m, arrows[n - 1 - k], ds.basis(q)));
        return cache[k][p];
    };
    return HolonomyAccumulator{convolution_slots(m, ds, n, step)};
}

ModelOperator ophol(const Model& m, const OpCurve& c, const Vec& phi) { return ophol_slots(m, c.arrows).at(phi); }

ModelOperator hol(const Model& m, const OpCurve& c, const Vec& phi) { return hol_slots(m, c.arrows).at(phi); }

// ---------------------------------------------------------------- Hopf helpers

Vec dstar_mul(const Model& m, const Vec& x, const Vec& y) { return m.dual_double().mul(x, y); }
Vec dstar_S(const Model& m, const Vec& x) { return m.dual_double().S(x); }
Vec d_mul(const Model& m, const Vec& x, const Vec& y) { return m.double_algebra().hopf.mul(x, y); }
Vec d_S(const Model& m, const Vec& x) { return m.double_algebra().hopf.S(x); }
Vec act_left(const Model& m, const Vec& x, const Vec& phi) { return hit_left(m.dual_double(), x, phi); }
Vec act_right(const Model& m, const Vec& phi, const Vec& x) { return hit_right(m.dual_double(), phi, x); }

Vec braided_opposite(const Model& m, const Vec& psi, const Vec& phi) {
    const HopfData& D = m.double_algebra().hopf;
    const Vec& r = m.double_algebra().r_matrix;
    const int n = D.dim;
    Vec out = Vec::Zero(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const cplx v = r(a * n + b);
            if (std::abs(v) < kPrune) continue;
            out += v * dstar_mul(m, act_right(m, phi, D.basis(a)), act_right(m, psi, D.basis(b)));
        }
    return out;
}

void SuiteReport::add(const std::string& name, double residual, double tol) {
    const bool pass = std::isfinite(residual) && residual < tol;
    checks.push_back({name, residual, pass});
    max_residual = std::max(max_residual, std::isfinite(residual) ? residual : 1e300);
    ok = ok && pass;
}

void SuiteReport::add_flag(const std::string& name, bool pass) {
    checks.push_back({name, pass ? 0.0 : 1.0, pass});
    ok = ok && pass;
}

}  // namespace kit
