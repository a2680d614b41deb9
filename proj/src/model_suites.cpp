#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "kit/model.hpp"

namespace kit {

namespace {

using Rng = std::mt19937_64;

Vec random_vec(int n, Rng& rng) {
    std::normal_distribution<double> g;
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = cplx(g(rng), g(rng));
    return v / v.norm();
}

// Dense random elements for small algebras, random basis elements otherwise (keeps operators monomial
// for group algebras so large supports stay cheap).
std::vector<Vec> samples(int n, int count, bool dense, Rng& rng) {
    std::vector<Vec> out;
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int k = 0; k < count; ++k) {
        if (dense) {
            out.push_back(random_vec(n, rng));
        } else {
            Vec v = Vec::Zero(n);
            v(pick(rng)) = 1.0;
            out.push_back(v);
        }
    }
    return out;
}

std::vector<int> arrow_sample(const ArrowPresentation& p) {
    std::vector<int> out;
    for (int a : {0, p.t1(0), p.t0(0), p.t2(0), p.tinv(0, 0), p.tinv(2, 0)})
        if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
    return out;
}

std::vector<int> edges_of(const Model& m, const OpCurve& c) {
    std::set<int> s;
    for (int d : c.arrows) s.insert(m.edge_of(DoubleArrow::unpack(d).base));
    return {s.begin(), s.end()};
}

bool intersects(const std::vector<int>& a, const std::vector<int>& b) {
    for (int x : a)
        if (std::find(b.begin(), b.end(), x) != b.end()) return true;
    return false;
}

std::vector<Letter> random_word(int len, bool left, Rng& rng) {
    std::uniform_int_distribution<int> coin(0, 1);
    std::vector<Letter> w;
    for (int k = 0; k < len; ++k) {
        if (left)
            w.push_back(coin(rng) ? Letter::T0inv : Letter::T2);
        else
            w.push_back(coin(rng) ? Letter::T0 : Letter::T2inv);
    }
    return w;
}

OpCurve random_ribbon(const ArrowPresentation& p, int len, bool left, bool proper, Rng& rng) {
    std::uniform_int_distribution<int> base(0, p.size() - 1);
    for (int attempt = 0; attempt < 2000; ++attempt) {
        const OpCurve c = decode(p, CodedCurve{base(rng), random_word(len, left, rng)});
        if (!proper || is_proper(p, c)) return c;
    }
    throw Error("NoRibbon", "no proper ribbon of the requested length");
}

// All basis contributions of a coproduct entry list applied to a vector.
template <class F>
void for_cop(const HopfData& h, const Vec& x, F&& f) {
    for (int i = 0; i < h.dim; ++i) {
        if (x(i) == cplx(0)) continue;
        for (const auto& e : h.cop_of[i]) f(e.b, e.c, x(i) * e.v);
    }
}

template <class F>
void for_cop2(const HopfData& h, const Vec& x, F&& f) {
    for (int i = 0; i < h.dim; ++i) {
        if (x(i) == cplx(0)) continue;
        for (const auto& [idx, v] : h.comul2(i)) f(idx[0], idx[1], idx[2], x(i) * v);
    }
}

// Sum over slots of coefficient * factor-list, as a lazy operator.
struct LazySum {
    LazyOp op;
    void add(cplx c, std::vector<ModelOperator> f) {
        if (std::abs(c) < 1e-15) return;
        op = op + lazy_product(std::move(f), c);
    }
};

double lazy_rel(const LazyOp& lhs, const LazySum& rhs, std::uint64_t seed) {
    return lazy_distance(lhs, rhs.op, seed);
}

class Context {
public:
    explicit Context(const Model& m) : m_(m) {}

    const std::vector<ModelOperator>& G(int a) {
        auto it = g_.find(a);
        if (it != g_.end()) return it->second;
        const auto arr = gauss_arrows(m_.presentation(), a);
        auto slots = convolution_slots(m_, m_.algebra(), static_cast<int>(arr.size()), [&](int k, int q) {
            return op_P(m_, arr[k], m_.algebra().basis(q));
        });
        return g_.emplace(a, std::move(slots)).first->second;
    }

    const std::vector<ModelOperator>& F(int a) {
        auto it = f_.find(a);
        if (it != f_.end()) return it->second;
        const auto arr = flux_arrows(m_.presentation(), a);
        auto slots = convolution_slots(m_, m_.dual(), static_cast<int>(arr.size()), [&](int k, int q) {
            return op_Q(m_, arr[k], m_.dual().basis(q));
        });
        return f_.emplace(a, std::move(slots)).first->second;
    }

    ModelOperator Gv(int a, const Vec& h) { return contract_slots(G(a), h); }
    ModelOperator Fv(int a, const Vec& phi) { return contract_slots(F(a), phi); }

    // D_a on the basis of D(H)
    const std::vector<ModelOperator>& Dbasis(int a) {
        auto it = d_.find(a);
        if (it != d_.end()) return it->second;
        std::vector<ModelOperator> out;
        const int d = m_.dim();
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) out.push_back(F(a)[i] * G(a)[j]);
        return d_.emplace(a, std::move(out)).first->second;
    }

    ModelOperator Dv(int a, const Vec& x) { return contract_slots(Dbasis(a), x); }

    const HolonomyAccumulator& ophol_acc(const OpCurve& c) {
        auto it = hol_.find(c.arrows);
        if (it != hol_.end()) return it->second;
        return hol_.emplace(c.arrows, ophol_slots(m_, c.arrows)).first->second;
    }

    ModelOperator ophol(const OpCurve& c, const Vec& phi) { return ophol_acc(c).at(phi); }

private:
    const Model& m_;
    std::map<int, std::vector<ModelOperator>> g_, f_, d_;
    std::map<std::vector<int>, HolonomyAccumulator> hol_;
};

// Gram-matrix rank of a family of operators under the trace inner product.
int operator_rank(const std::vector<ModelOperator>& ops, double tol) {
    std::vector<int> u;
    for (const auto& o : ops) {
        const auto s = o.support();
        std::vector<int> next;
        std::set_union(u.begin(), u.end(), s.begin(), s.end(), std::back_inserter(next));
        u = next;
    }
    std::vector<SpMat> mats;
    for (const auto& o : ops) mats.push_back(compile(o, u).mat);
    const int n = static_cast<int>(ops.size());
    Mat gram(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const cplx v = mats[i].conjugate().cwiseProduct(mats[j]).sum();
            gram(i, j) = v;
            gram(j, i) = std::conj(v);
        }
    Eigen::SelfAdjointEigenSolver<Mat> es(gram);
    const double top = es.eigenvalues().cwiseAbs().maxCoeff();
    int rank = 0;
    for (int i = 0; i < n; ++i)
        if (std::abs(es.eigenvalues()(i)) > tol * top) ++rank;
    return rank;
}

// residual of the best approximation of `op` inside span(basis), relative to the trace norm of op
double span_residual(const ModelOperator& op, const std::vector<ModelOperator>& basis) {
    std::vector<int> u = op.support();
    for (const auto& b : basis) {
        const auto s = b.support();
        std::vector<int> next;
        std::set_union(u.begin(), u.end(), s.begin(), s.end(), std::back_inserter(next));
        u = next;
    }
    const SpMat target = compile(op, u).mat;
    std::vector<SpMat> mats;
    for (const auto& b : basis) mats.push_back(compile(b, u).mat);
    const int n = static_cast<int>(basis.size());
    Mat gram(n, n);
    Vec rhs(n);
    for (int i = 0; i < n; ++i) {
        rhs(i) = mats[i].conjugate().cwiseProduct(target).sum();
        for (int j = 0; j < n; ++j) gram(i, j) = mats[i].conjugate().cwiseProduct(mats[j]).sum();
    }
    const Vec coef = gram.completeOrthogonalDecomposition().solve(rhs);
    SpMat res = target;
    for (int i = 0; i < n; ++i) res -= coef(i) * mats[i];
    const double tn = std::sqrt(std::abs(target.conjugate().cwiseProduct(target).sum()));
    const double rn = std::sqrt(std::abs(res.conjugate().cwiseProduct(res).sum()));
    return tn > 0 ? rn / tn : rn;
}

std::string tag(const std::string& name, int a) { return name + "[" + std::to_string(a) + "]"; }

}  // namespace

// ---------------------------------------------------------------- relations

SuiteReport verify_relations(const Model& m, double tol, std::uint64_t seed) {
    SuiteReport rep;
    rep.suite = "relations";
    Rng rng(seed);
    Context ctx(m);
    const auto& p = m.presentation();
    const auto& H = m.algebra();
    const auto& Hs = m.dual();
    const int d = m.dim();
    auto x = [&](int i) { return H.basis(i); };
    auto xi = [&](int j) { return Hs.basis(j); };
    auto P = [&](int a, const Vec& h) { return op_P(m, a, h); };
    auto Q = [&](int a, const Vec& f) { return op_Q(m, a, f); };
    // phi -> h and friends
    auto lh = [&](const Vec& f, const Vec& h) { return hit_left(H, f, h); };    // h(1) f(h(2))
    auto rh = [&](const Vec& h, const Vec& f) { return hit_right(H, h, f); };   // f(h(1)) h(2)
    auto lf = [&](const Vec& h, const Vec& f) { return hit_left(Hs, h, f); };   // f(1) f(2)(h)
    auto rf = [&](const Vec& f, const Vec& h) { return hit_right(Hs, f, h); };  // f(1)(h) f(2)
    const ModelOperator one = ModelOperator::identity(d);
    const bool dense_algebra = d <= 3;

    for (int a : arrow_sample(p)) {
        const int ta = p.t1(a);
        const int t2a = p.t2(a);
        const int t0i = p.tinv(0, a);
        const int t0a = p.t0(a);
        // a vertex or face whose boundary repeats an edge breaks the hypotheses of the F/G relations
        auto distinct_edges = [&](const std::vector<int>& arr) {
            std::set<int> s;
            for (int b : arr) s.insert(m.edge_of(b));
            return s.size() == arr.size();
        };
        const bool gen_v = distinct_edges(gauss_arrows(p, a));
        const bool gen_f = distinct_edges(flux_arrows(p, a));
        const bool gen_f2 = distinct_edges(flux_arrows(p, t2a));
        const bool gen_fi = distinct_edges(flux_arrows(p, t0i));
        double r_palg = 0, r_qalg = 0, r_qp = 0, r_pbar = 0, r_qbar = 0, r_pp = 0, r_qq = 0, r_qpinv = 0,
               r_qpbar = 0, r_qpbarinv = 0;
        r_palg = std::max(r_palg, op_distance(P(a, H.unit), one));
        r_qalg = std::max(r_qalg, op_distance(Q(a, Hs.unit), one));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                r_palg = std::max(r_palg, op_distance(P(a, x(i)) * P(a, x(j)), P(a, H.mul(x(i), x(j)))));
                r_qalg = std::max(r_qalg, op_distance(Q(a, xi(i)) * Q(a, xi(j)), Q(a, Hs.mul(xi(i), xi(j)))));
                r_pp = std::max(r_pp, op_norm(commutator(P(ta, x(j)), P(a, x(i)))));
                r_qq = std::max(r_qq, op_norm(commutator(Q(ta, xi(j)), Q(a, xi(i)))));
                // Q(phi) P(h) = P(phi1 -> h) Q(phi2)
                {
                    ModelOperator rhs = ModelOperator::zero(d);
                    for_cop(Hs, xi(j), [&](int b, int c, cplx v) { rhs = rhs + v * (P(a, lh(xi(b), x(i))) * Q(a, xi(c))); });
                    r_qp = std::max(r_qp, op_distance(Q(a, xi(j)) * P(a, x(i)), rhs));
                }
                // P(h) Q(phi) = Q(phi <- S(h2)) P(h1)
                {
                    ModelOperator rhs = ModelOperator::zero(d);
                    for_cop(H, x(i), [&](int b, int c, cplx v) { rhs = rhs + v * (Q(a, rf(xi(j), H.S(x(c)))) * P(a, x(b))); });
                    r_qpinv = std::max(r_qpinv, op_distance(P(a, x(i)) * Q(a, xi(j)), rhs));
                }
                // Q_a(phi) P_T1a(h) = P_T1a(h <- S(phi2)) Q_a(phi1)
                {
                    ModelOperator rhs = ModelOperator::zero(d);
                    for_cop(Hs, xi(j), [&](int b, int c, cplx v) { rhs = rhs + v * (P(ta, rh(x(i), Hs.S(xi(c)))) * Q(a, xi(b))); });
                    r_qpbar = std::max(r_qpbar, op_distance(Q(a, xi(j)) * P(ta, x(i)), rhs));
                }
                // P_T1a(h) Q_a(phi) = Q_a(h1 -> phi) P_T1a(h2)
                {
                    ModelOperator rhs = ModelOperator::zero(d);
                    for_cop(H, x(i), [&](int b, int c, cplx v) { rhs = rhs + v * (Q(a, lf(x(b), xi(j))) * P(ta, x(c))); });
                    r_qpbarinv = std::max(r_qpbarinv, op_distance(P(ta, x(i)) * Q(a, xi(j)), rhs));
                }
            }
        for (int i = 0; i < d; ++i) {
            // P_T1a(h) = P_a(x_l S(h) x_k) Q_a(S(xi_k) xi_l)
            ModelOperator pb = ModelOperator::zero(d), qb = ModelOperator::zero(d);
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    pb = pb + P(a, H.mul(H.mul(x(l), H.S(x(i))), x(k))) * Q(a, Hs.mul(Hs.S(xi(k)), xi(l)));
                    qb = qb + P(a, H.mul(x(l), H.S(x(k)))) * Q(a, Hs.mul(Hs.mul(xi(k), Hs.S(xi(i))), xi(l)));
                }
            r_pbar = std::max(r_pbar, op_distance(P(ta, x(i)), pb));
            r_qbar = std::max(r_qbar, op_distance(Q(ta, xi(i)), qb));
        }
        rep.add(tag("P-algebra", a), r_palg, tol);
        rep.add(tag("Q-algebra", a), r_qalg, tol);
        rep.add(tag("QP-exchange", a), r_qp, tol);
        rep.add(tag("P-opposite", a), r_pbar, tol);
        rep.add(tag("Q-opposite", a), r_qbar, tol);
        rep.add(tag("P-opposite-commute", a), r_pp, tol);
        rep.add(tag("Q-opposite-commute", a), r_qq, tol);
        rep.add(tag("PQ-exchange", a), r_qpinv, tol);
        rep.add(tag("QP-opposite-exchange", a), r_qpbar, tol);
        rep.add(tag("PQ-opposite-exchange", a), r_qpbarinv, tol);

        // Gauss and flux exchange relations
        double r_qg = 0, r_fq = 0, r_gt2q = 0, r_qft2 = 0, r_fpt0 = 0, r_gpt0 = 0, r_pf = 0, r_pg = 0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const Vec h = x(i), f = xi(j), k = x(j), psi = xi(i);
                const Vec kk = x(i), ff = xi(j);
                if (gen_v) {
                    // G_a(k) Q_a(phi) = Q_a(phi <- S(k2)) G_a(k1)
                    ModelOperator rhs = ModelOperator::zero(d);
                    for_cop(H, kk, [&](int b, int c, cplx v) { rhs = rhs + v * (Q(a, rf(ff, H.S(x(c)))) * ctx.G(a)[b]); });
                    r_qg = std::max(r_qg, op_distance(ctx.Gv(a, kk) * Q(a, ff), rhs));
                    // P_a(h) G_a(k) = G_a(k1) P_a(S(k2) h k3)
                    ModelOperator rhs2 = ModelOperator::zero(d);
                    for_cop2(H, k, [&](int b, int c, int e, cplx v) {
                        rhs2 = rhs2 + v * (ctx.G(a)[b] * P(a, H.mul(H.mul(H.S(x(c)), h), x(e))));
                    });
                    r_pg = std::max(r_pg, op_distance(P(a, h) * ctx.Gv(a, k), rhs2));
                    // G_{T0^-1 a}(k) P_a(h) = P_a(k1 h S(k2)) G_{T0^-1 a}(k3)
                    ModelOperator rhs3 = ModelOperator::zero(d);
                    for_cop2(H, k, [&](int b, int c, int e, cplx v) {
                        rhs3 = rhs3 + v * (P(a, H.mul(H.mul(x(b), h), H.S(x(c)))) * ctx.G(t0i)[e]);
                    });
                    r_gpt0 = std::max(r_gpt0, op_distance(ctx.Gv(t0i, k) * P(a, h), rhs3));
                    // Q_a(phi) G_{T2a}(k) = G_{T2a}(k2) Q_a(S(k1) -> phi)
                    ModelOperator rhs4 = ModelOperator::zero(d);
                    for_cop(H, kk, [&](int b, int c, cplx v) { rhs4 = rhs4 + v * (ctx.G(t2a)[c] * Q(a, lf(H.S(x(b)), ff))); });
                    r_gt2q = std::max(r_gt2q, op_distance(Q(a, ff) * ctx.Gv(t2a, kk), rhs4));
                }
                if (gen_f) {
                    // F_a(psi) Q_a(phi) = Q_a(psi1 phi S(psi2)) F_a(psi3)
                    ModelOperator rhs = ModelOperator::zero(d);
                    for_cop2(Hs, psi, [&](int b, int c, int e, cplx v) {
                        rhs = rhs + v * (Q(a, Hs.mul(Hs.mul(xi(b), f), Hs.S(xi(c)))) * ctx.F(a)[e]);
                    });
                    r_fq = std::max(r_fq, op_distance(ctx.Fv(a, psi) * Q(a, f), rhs));
                    // P_a(h) F_a(psi) = F_a(psi2) P_a(S(psi1) -> h)
                    ModelOperator rhs2 = ModelOperator::zero(d);
                    for_cop(Hs, psi, [&](int b, int c, cplx v) { rhs2 = rhs2 + v * (ctx.F(a)[c] * P(a, lh(Hs.S(xi(b)), x(j)))); });
                    r_pf = std::max(r_pf, op_distance(P(a, x(j)) * ctx.Fv(a, psi), rhs2));
                }
                if (gen_f2) {
                    // Q_a(phi) F_{T2a}(psi) = F_{T2a}(psi1) Q_a(S(psi2) phi psi3)
                    ModelOperator rhs = ModelOperator::zero(d);
                    for_cop2(Hs, psi, [&](int b, int c, int e, cplx v) {
                        rhs = rhs + v * (ctx.F(t2a)[b] * Q(a, Hs.mul(Hs.mul(Hs.S(xi(c)), f), xi(e))));
                    });
                    r_qft2 = std::max(r_qft2, op_distance(Q(a, f) * ctx.Fv(t2a, psi), rhs));
                }
                if (gen_fi) {
                    // F_{T0^-1 a}(psi) P_a(h) = P_a(h <- S(psi2)) F_{T0^-1 a}(psi1)
                    ModelOperator rhs = ModelOperator::zero(d);
                    for_cop(Hs, psi, [&](int b, int c, cplx v) {
                        rhs = rhs + v * (P(a, rh(x(j), Hs.S(xi(c)))) * ctx.F(t0i)[b]);
                    });
                    r_fpt0 = std::max(r_fpt0, op_distance(ctx.Fv(t0i, psi) * P(a, x(j)), rhs));
                }
            }
        if (gen_v) {
            rep.add(tag("GQ-exchange", a), r_qg, tol);
            rep.add(tag("PG-exchange", a), r_pg, tol);
            rep.add(tag("G-before-P-exchange", a), r_gpt0, tol);
            rep.add(tag("QG-next-face-exchange", a), r_gt2q, tol);
        }
        if (gen_f) {
            rep.add(tag("FQ-exchange", a), r_fq, tol);
            rep.add(tag("PF-exchange", a), r_pf, tol);
        }
        if (gen_f2) rep.add(tag("QF-next-face-exchange", a), r_qft2, tol);
        if (gen_fi) rep.add(tag("F-before-P-exchange", a), r_fpt0, tol);

        // base point rotation by convolution conjugation
        double r_rot_g = 0, r_rot_f = 0;
        for (int i = 0; i < d; ++i) {
            ModelOperator rg = ModelOperator::zero(d), rfl = ModelOperator::zero(d);
            for_cop2(H, x(i), [&](int b, int c, int e, cplx v) {
                rg = rg + v * (P(t0a, H.S(x(b))) * ctx.G(a)[c] * P(t0a, x(e)));
            });
            for_cop2(Hs, xi(i), [&](int b, int c, int e, cplx v) {
                rfl = rfl + v * (Q(a, Hs.S(xi(b))) * ctx.F(a)[c] * Q(a, xi(e)));
            });
            r_rot_g = std::max(r_rot_g, op_distance(ctx.Gv(t0a, x(i)), rg));
            r_rot_f = std::max(r_rot_f, op_distance(ctx.Fv(t2a, xi(i)), rfl));
        }
        rep.add(tag("G-rotate", a), r_rot_g, tol);
        rep.add(tag("F-rotate", a), r_rot_f, tol);

        // the double inside the operator algebra
        if (gen_v && gen_f) {
            double r_gg = 0, r_ff = 0, r_gf = 0;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    r_gg = std::max(r_gg, op_distance(ctx.G(a)[i] * ctx.G(a)[j], ctx.Gv(a, H.mul(x(i), x(j)))));
                    r_ff = std::max(r_ff, op_distance(ctx.F(a)[i] * ctx.F(a)[j], ctx.Fv(a, Hs.mul(xi(i), xi(j)))));
                }
            // G(h) F(psi) = F(psi2) G(h2) psi3(h1) psi1(S(h3)); the mixed support is large, so big
            // algebras use a few random basis pairs
            std::vector<std::pair<int, int>> pairs;
            std::uniform_int_distribution<int> pick(0, d - 1);
            if (dense_algebra)
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j) pairs.emplace_back(i, j);
            else
                for (int k = 0; k < 4; ++k) pairs.emplace_back(pick(rng), pick(rng));
            for (auto [i, j] : pairs) {
                ModelOperator rhs = ModelOperator::zero(d);
                for (const auto& [hi, hv] : H.comul2(i))
                    for (const auto& [fi, fv] : Hs.comul2(j)) {
                        const cplx c =
                            hv * fv * Hs.basis(fi[2]).dot(x(hi[0])) * pairing(xi(fi[0]), H.S(x(hi[2])));
                        if (std::abs(c) < 1e-15) continue;
                        rhs = rhs + c * (ctx.F(a)[fi[1]] * ctx.G(a)[hi[1]]);
                    }
                r_gf = std::max(r_gf, op_distance(ctx.G(a)[i] * ctx.F(a)[j], rhs));
            }
            rep.add(tag("G-multiplicative", a), r_gg, tol);
            rep.add(tag("F-multiplicative", a), r_ff, tol);
            rep.add(tag("GF-exchange", a), r_gf, tol);
            const auto& D = m.double_algebra().hopf;
            double r_hom = op_distance(ctx.Dv(a, D.unit), one);
            const auto xs = samples(D.dim, 4, dense_algebra, rng);
            for (int k = 0; k < 4; k += 2)
                r_hom = std::max(r_hom, op_distance(ctx.Dv(a, xs[k]) * ctx.Dv(a, xs[k + 1]), ctx.Dv(a, D.mul(xs[k], xs[k + 1]))));
            rep.add(tag("double-homomorphism", a), r_hom, tol);
            const int rank = operator_rank(ctx.Dbasis(a), 1e-9);
            rep.add_flag(tag("double-injective-rank-" + std::to_string(rank), a), rank == D.dim);
        }
    }
    return rep;
}

// ---------------------------------------------------------------- loops

SuiteReport verify_loops(const Model& m, double tol, std::uint64_t seed) {
    SuiteReport rep;
    rep.suite = "loops";
    Rng rng(seed);
    Context ctx(m);
    const auto& p = m.presentation();
    const auto& H = m.algebra();
    const auto& D = m.double_algebra().hopf;
    const auto& Ds = m.dual_double();
    const int d = m.dim();
    const int n = Ds.dim;
    const bool dense = d <= 3;
    const ModelOperator one = ModelOperator::identity(d);
    const auto phis = samples(n, 3, dense, rng);

    // R1 S_D(R2) = S_D(u)
    {
        const Vec& r = m.double_algebra().r_matrix;
        Vec acc = Vec::Zero(n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (std::abs(r(a * n + b)) > 1e-15) acc += r(a * n + b) * D.mul(D.basis(a), D.S(D.basis(b)));
        rep.add("R1-S-R2-equals-S-u", (acc - D.S(m.double_algebra().drinfeld_u)).cwiseAbs().maxCoeff(), tol);
    }
    const Vec su = D.S(m.double_algebra().drinfeld_u);

    for (int a : arrow_sample(p)) {
        double r_alpha = 0, r_gamma = 0, r_beta = 0;
        const OpCurve al = face_loop(p, 0, a), be = face_loop(p, 1, a), ga = face_loop(p, 2, a);
        for (int q = 0; q < n; ++q) {
            const Vec e = Ds.basis(q);
            const int i = q / d, j = q % d;
            r_alpha = std::max(r_alpha, op_distance(ctx.ophol(al, e), H.unit(j) * ctx.G(a)[i]));
            r_gamma = std::max(r_gamma, op_distance(ctx.ophol(ga, e), H.counit(i) * ctx.F(a)[j]));
            r_beta = std::max(r_beta, op_distance(ctx.ophol(be, e), pairing(e, su) * one));
        }
        rep.add(tag("vertex-loop-is-gauss", a), r_alpha, tol);
        rep.add(tag("face-loop-is-flux", a), r_gamma, tol);
        rep.add(tag("edge-loop-scalar", a), r_beta, tol);

        // theta properties
        double t1 = 0, t2 = 0, t3 = 0, t4 = 0, t5 = 0;
        const OpCurve elbow{p.tinv(0, a), {darrow(a, 0, 1), darrow(a, 2, 1)}};
        for (const auto& f : phis) {
            t1 = std::max(t1, op_distance(theta(m, a, f), ctx.ophol(elbow, f)));
            t2 = std::max(t2, op_distance(theta(m, p.t1(a), f), s_M(m, theta(m, a, f))));
            t4 = std::max(t4, op_distance(s_M(m, theta(m, a, f)), theta(m, a, Ds.S(f))));
            for (const auto& g : phis) {
                t5 = std::max(t5, op_distance(theta(m, a, f) * theta(m, a, g), theta(m, a, braided_opposite(m, g, f))));
                for (int b = 0; b < p.size(); ++b)
                    if (m.edge_of(b) != m.edge_of(a) && (b == p.t0(a) || b == p.t2(a)))
                        t3 = std::max(t3, commutator_norm(theta(m, a, f), theta(m, b, g)));
            }
        }
        rep.add(tag("theta-is-elbow-holonomy", a), t1, tol);
        rep.add(tag("theta-opposite-arrow", a), t2, tol);
        rep.add(tag("theta-distinct-edges-commute", a), t3, tol);
        rep.add(tag("theta-antipode", a), t4, tol);
        rep.add(tag("theta-braided-opposite", a), t5, tol);

        // exchange relations with the R-matrix
        const Vec& r = m.double_algebra().r_matrix;
        const OpCurve c0m{a, {darrow(a, 0, -1)}};
        const OpCurve c2p{a, {darrow(a, 2, 1)}};
        const OpCurve c2pt{p.t1(a), {darrow(p.t1(a), 2, 1)}};
        double e1 = 0, e2 = 0;
        for (const auto& f : phis)
            for (const auto& g : phis) {
                ModelOperator rhs1 = ModelOperator::zero(d), rhs2 = ModelOperator::zero(d);
                for (int x = 0; x < n; ++x)
                    for (int y = 0; y < n; ++y) {
                        const cplx v = r(x * n + y);
                        if (std::abs(v) < 1e-15) continue;
                        rhs1 = rhs1 + v * (ctx.ophol(c2p, act_right(m, f, D.basis(x))) *
                                           ctx.ophol(c0m, act_right(m, g, D.basis(y))));
                        rhs2 = rhs2 + v * (ctx.ophol(c0m, act_left(m, D.basis(y), f)) *
                                           ctx.ophol(c2pt, act_left(m, D.basis(x), g)));
                    }
                e1 = std::max(e1, op_distance(ctx.ophol(c0m, g) * ctx.ophol(c2p, f), rhs1));
                e2 = std::max(e2, op_distance(ctx.ophol(c2pt, g) * ctx.ophol(c0m, f), rhs2));
            }
        rep.add(tag("R-exchange-1", a), e1, tol);
        rep.add(tag("R-exchange-2", a), e2, tol);

        // convolution inverse of single steps
        double inv = 0;
        for (int kind : {0, 2})
            for (int sign : {1, -1}) {
                const int dd = darrow(a, kind, sign);
                const OpCurve back{arrow_source(p, dd), {dd, flip_arrow(dd)}};
                for (const auto& f : phis) inv = std::max(inv, op_distance(ctx.ophol(back, f), Ds.eps(f) * one));
            }
        rep.add(tag("step-inverse", a), inv, tol);
    }

    // central loop conjugated by arbitrary curves
    {
        double res = 0;
        for (int k = 0; k < 3; ++k) {
            std::uniform_int_distribution<int> pick(0, p.size() - 1);
            const int a = pick(rng);
            const OpCurve zeta = face_loop(p, 1, a);
            std::vector<Letter> w;
            std::uniform_int_distribution<int> letter(0, 3);
            for (int s = 0; s < 3; ++s) w.push_back(static_cast<Letter>(letter(rng)));
            const OpCurve alpha = reduce(decode(p, CodedCurve{zeta.start, w}));
            const OpCurve conj = concat(p, concat(p, inverse(p, alpha), zeta), alpha);
            for (const auto& f : phis) res = std::max(res, op_distance(ctx.ophol(conj, f), pairing(f, su) * one));
        }
        rep.add("central-loop-conjugation", res, tol);
    }

    // holonomy versus opholonomy on proper curves; S_M is an involutive automorphism
    {
        double res = 0, inv = 0, hom = 0;
        for (int k = 0; k < 3; ++k) {
            const OpCurve c = random_ribbon(p, 2 + k, k % 2 == 0, true, rng);
            for (const auto& f : phis) {
                const ModelOperator o = ctx.ophol(c, Ds.S(f));
                res = std::max(res, op_distance(hol(m, c, f), s_M(m, o)));
                inv = std::max(inv, op_distance(s_M(m, s_M(m, o)), o));
            }
            const ModelOperator x = ctx.ophol(c, phis[0]), y = ctx.ophol(c, phis[1]);
            hom = std::max(hom, op_distance(s_M(m, x * y), s_M(m, x) * s_M(m, y)));
        }
        rep.add("hol-equals-antipode-conjugated-ophol", res, tol);
        rep.add("antipode-conjugation-involutive", inv, tol);
        rep.add("antipode-conjugation-multiplicative", hom, tol);
    }
    return rep;
}

// ---------------------------------------------------------------- ribbons

SuiteReport verify_ribbons(const Model& m, double tol, std::uint64_t seed) {
    SuiteReport rep;
    rep.suite = "ribbons";
    Rng rng(seed);
    Context ctx(m);
    const auto& p = m.presentation();
    const auto& cx = m.complex();
    const auto& D = m.double_algebra().hopf;
    const auto& Ds = m.dual_double();
    const int d = m.dim();
    const int n = Ds.dim;
    const bool dense = d <= 3;
    const auto phis = samples(n, 2, dense, rng);
    const Vec cocom = cocommutative_projection(D, random_vec(n, rng));
    std::uniform_int_distribution<int> pick(0, p.size() - 1);

    // U-separated curves commute
    {
        double res = 0;
        int found = 0;
        for (int attempt = 0; attempt < 400 && found < 4; ++attempt) {
            std::uniform_int_distribution<int> len(1, 3), letter(0, 3);
            auto rc = [&]() {
                std::vector<Letter> w;
                const int l = len(rng);
                for (int s = 0; s < l; ++s) w.push_back(static_cast<Letter>(letter(rng)));
                return reduce(decode(p, CodedCurve{pick(rng), w}));
            };
            const OpCurve c1 = rc(), c2 = rc();
            if (c1.empty() || c2.empty() || !u_separated(p, c1.arrows, c2.arrows)) continue;
            if (!intersects(edges_of(m, c1), edges_of(m, c2))) continue;
            ++found;
            res = std::max(res, commutator_norm(ctx.ophol(c1, phis[0]), ctx.ophol(c2, phis[1])));
        }
        rep.add("U-separated-commute", res, tol);
        rep.add_flag("U-separated-configurations-found", found > 0);
    }

    // proper ribbons: multiplication, inverse, cyclic permutation
    {
        double mul = 0, inv = 0, cyc = 0;
        for (int k = 0; k < 4; ++k) {
            const bool left = k % 2 == 0;
            const OpCurve c = random_ribbon(p, 2 + k / 2, left, true, rng);
            const ModelOperator x = ctx.ophol(c, phis[0]), y = ctx.ophol(c, phis[1]);
            const Vec prod = left ? Ds.mul(phis[0], phis[1]) : Ds.mul(phis[1], phis[0]);
            mul = std::max(mul, op_distance(x * y, ctx.ophol(c, prod)));
            inv = std::max(inv, op_distance(ctx.ophol(inverse(p, c), phis[0]), ctx.ophol(c, Ds.S(phis[0]))));
        }
        for (int a : arrow_sample(p))
            for (int kind : {0, 2}) {
                const OpCurve c = face_loop(p, kind, a);
                if (!is_proper(p, c)) continue;
                OpCurve rot{curve_end(p, OpCurve{c.start, {c.arrows[0]}}), {}};
                rot.arrows.assign(c.arrows.begin() + 1, c.arrows.end());
                rot.arrows.push_back(c.arrows[0]);
                cyc = std::max(cyc, op_distance(ctx.ophol(rot, cocom), ctx.ophol(c, cocom)));
            }
        rep.add("proper-multiply", mul, tol);
        rep.add("proper-inverse", inv, tol);
        rep.add("proper-cyclic", cyc, tol);
    }

    // opposite pairs of elbows, with inverses
    {
        double r1 = 0, r2 = 0;
        for (int a : arrow_sample(p)) {
            const int t2i = p.tinv(2, a), t0 = p.t0(a);
            const OpCurve e1{p.tinv(0, a), {darrow(a, 0, 1), darrow(a, 2, 1)}};
            const OpCurve e2{t2i, {darrow(t2i, 2, 1), darrow(t0, 0, 1)}};
            const OpCurve e3{t2i, {darrow(t2i, 2, 1), darrow(a, 2, 1)}};
            const OpCurve e4{p.tinv(0, a), {darrow(a, 0, 1), darrow(t0, 0, 1)}};
            for (int mask = 0; mask < 4; ++mask) {
                const OpCurve x1 = (mask & 1) ? inverse(p, e1) : e1, x2 = (mask & 2) ? inverse(p, e2) : e2;
                const OpCurve x3 = (mask & 1) ? inverse(p, e3) : e3, x4 = (mask & 2) ? inverse(p, e4) : e4;
                r1 = std::max(r1, commutator_norm(ctx.ophol(x1, phis[0]), ctx.ophol(x2, phis[1])));
                r2 = std::max(r2, commutator_norm(ctx.ophol(x3, phis[0]), ctx.ophol(x4, phis[1])));
            }
        }
        rep.add("elbows-PQ-QP", r1, tol);
        rep.add("elbows-QQ-PP", r2, tol);
    }

    // ribbons versus face loops (cases A and B)
    {
        double ra = 0, rb = 0;
        int na = 0, nb = 0, collars = 0;
        std::vector<OpCurve> ribbons;
        // explicit collars of a type 2 loop (left) and a type 0 loop (right)
        for (int k = 0; k < 2; ++k) {
            const int base = pick(rng);
            ribbons.push_back(decode(p, CodedCurve{base, {Letter::T0inv, Letter::T2, Letter::T2, Letter::T0inv}}));
            ribbons.push_back(decode(p, CodedCurve{base, {Letter::T2inv, Letter::T0, Letter::T0, Letter::T2inv}}));
            ribbons.push_back(decode(p, CodedCurve{base, {Letter::T2, Letter::T0inv, Letter::T0inv, Letter::T2}}));
        }
        for (int k = 0; k < 4; ++k) ribbons.push_back(random_ribbon(p, 3 + k, k % 2 == 0, false, rng));
        // collars (loop sharing an arrow with the ribbon) and crossings get separate budgets
        const int cap = dense ? 6 : 2;
        int na_collar = 0, nb_collar = 0;
        for (const auto& rho : ribbons) {
            const auto rs = visited_sites(p, rho);
            const int s0 = rs.front(), s1 = rs.back();
            for (int kind : {0, 2})
                for (int base = 0; base < p.size(); ++base) {
                    const OpCurve lam = face_loop(p, kind, base);
                    const auto ls = visited_sites(p, lam);
                    auto on_lam = [&](int s) { return std::find(ls.begin(), ls.end(), s) != ls.end(); };
                    if (on_lam(s0) || on_lam(s1)) continue;
                    bool touches = false;
                    for (int s : rs) touches = touches || on_lam(s);
                    if (!touches) continue;
                    bool collar = false;
                    for (int x : rho.arrows)
                        collar = collar || std::find(lam.arrows.begin(), lam.arrows.end(), x) != lam.arrows.end();
                    const bool base_on_rho = std::find(rs.begin(), rs.end(), lam.start) != rs.end();
                    int& ca = collar ? na_collar : na;
                    if (ca < cap) {
                        ++ca;
                        ra = std::max(ra, commutator_norm(ctx.ophol(rho, phis[0]), ctx.ophol(lam, cocom)));
                    }
                    int& cb = collar ? nb_collar : nb;
                    if (!base_on_rho && cb < cap) {
                        ++cb;
                        rb = std::max(rb, commutator_norm(ctx.ophol(rho, phis[0]), ctx.ophol(lam, phis[1])));
                    }
                }
        }
        collars = na_collar + nb_collar;
        rep.add("ribbon-loop-commute-cocommutative", ra, tol);
        rep.add("ribbon-loop-commute-base-off-ribbon", rb, tol);
        rep.add_flag("ribbon-loop-configurations-found", na + na_collar > 0 && nb + nb_collar > 0 && collars > 0);
    }

    // gauge transformations at the ends of proper ribbons with disjoint end sites
    {
        double src = 0, tgt = 0, srcr = 0, tgtr = 0;
        int found = 0;
        const auto xs = samples(D.dim, 2, dense, rng);
        for (int attempt = 0; attempt < 200 && found < 2; ++attempt) {
            const OpCurve lr = random_ribbon(p, 2 + attempt % 2, true, true, rng);
            const int a = lr.start, b = curve_end(p, lr);
            if (cx.cell_of[0][a] == cx.cell_of[0][b] || cx.cell_of[2][a] == cx.cell_of[2][b]) continue;
            ++found;
            const OpCurve rr = inverse(p, lr);  // proper right ribbon from s(b) to s(a)
            for (const auto& x : xs) {
                const ModelOperator o = ctx.ophol(lr, phis[0]);
                src = std::max(src, op_distance(gauge_right(m, a, o, x), ctx.ophol(lr, act_right(m, phis[0], x))));
                tgt = std::max(tgt, op_distance(gauge_left(m, b, x, o), ctx.ophol(lr, act_left(m, x, phis[0]))));
                const ModelOperator orr = ctx.ophol(rr, phis[1]);
                srcr = std::max(srcr, op_distance(gauge_right_op(m, b, orr, x), ctx.ophol(rr, act_right(m, phis[1], x))));
                tgtr = std::max(tgtr, op_distance(gauge_left_op(m, a, x, orr), ctx.ophol(rr, act_left(m, x, phis[1]))));
            }
        }
        if (found > 0) {
            rep.add("left-ribbon-source-gauge", src, tol);
            rep.add("left-ribbon-target-gauge", tgt, tol);
            rep.add("right-ribbon-source-gauge", srcr, tol);
            rep.add("right-ribbon-target-gauge", tgtr, tol);
        }
    }

    // ribbon operators commute with vertex and face projectors away from their ends
    {
        double res = 0;
        for (int k = 0; k < 2; ++k) {
            const OpCurve c = random_ribbon(p, 3, k == 0, false, rng);
            const auto rs = visited_sites(p, c);
            const std::set<int> vs{cx.cell_of[0][rs.front()], cx.cell_of[0][rs.back()]};
            const std::set<int> fs{cx.cell_of[2][rs.front()], cx.cell_of[2][rs.back()]};
            const ModelOperator o = ctx.ophol(c, phis[k]);
            int budget = dense ? 1000 : 2;
            for (int v = 0; v < cx.count(0) && budget > 0; ++v)
                if (!vs.count(v) && intersects(o.support(), vertex_projector(m, v).support())) {
                    res = std::max(res, commutator_norm(o, vertex_projector(m, v)));
                    --budget;
                }
            budget = dense ? 1000 : 2;
            for (int f = 0; f < cx.count(2) && budget > 0; ++f)
                if (!fs.count(f) && intersects(o.support(), face_projector(m, f).support())) {
                    res = std::max(res, commutator_norm(o, face_projector(m, f)));
                    --budget;
                }
        }
        rep.add("ribbon-commutes-with-projectors-away-from-ends", res, tol);
    }

    // braided exchange of two closed ribbons through one site (genus at least one)
    if (is_connected(p) && genus(p) >= 1) {
        const auto found = [&]() -> std::pair<OpCurve, OpCurve> {
            for (int a = 0; a < p.size(); ++a) {
                std::vector<OpCurve> deltas, rhos;
                const int t2i = p.tinv(2, a), t0 = p.t0(a);
                const int max_len = 10;
                for (int len = 2; len <= max_len; ++len)
                    for (long mask = 0; mask < (1L << (len - 2)); ++mask) {
                        for (int kind = 0; kind < 2; ++kind) {
                            std::vector<Letter> w;
                            w.push_back(kind == 0 ? Letter::T0inv : Letter::T2);
                            for (int s = 0; s < len - 2; ++s) w.push_back((mask >> s) & 1 ? Letter::T2 : Letter::T0inv);
                            w.push_back(kind == 0 ? Letter::T2 : Letter::T0inv);
                            const OpCurve c = decode(p, CodedCurve{a, w});
                            if (curve_end(p, c) != a || !is_proper(p, c)) continue;
                            if (kind == 0 && c.arrows.back() == darrow(t2i, 2, 1)) deltas.push_back(c);
                            if (kind == 1 && c.arrows.back() == darrow(t0, 0, -1)) rhos.push_back(c);
                        }
                    }
                for (const auto& de : deltas)
                    for (const auto& ro : rhos) {
                        const std::vector<int> dmid(de.arrows.begin() + 1, de.arrows.end() - 1);
                        const std::vector<int> rmid(ro.arrows.begin() + 1, ro.arrows.end() - 1);
                        if (!u_separated(p, dmid, ro.arrows) || !u_separated(p, rmid, de.arrows)) continue;
                        auto sd = visited_sites(p, de), sr = visited_sites(p, ro);
                        std::set<int> a1(sd.begin(), sd.end()), common;
                        for (int s : sr)
                            if (a1.count(s)) common.insert(s);
                        if (common == std::set<int>{a}) return {de, ro};
                    }
            }
            return {};
        }();
        rep.add_flag("closed-ribbon-pair-found", !found.first.empty());
        if (!found.first.empty()) {
            const OpCurve& de = found.first;
            const OpCurve& ro = found.second;
            const Vec& r = m.double_algebra().r_matrix;
            std::vector<std::pair<int, int>> rnz;
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y)
                    if (std::abs(r(x * n + y)) > 1e-15) rnz.emplace_back(x, y);
            double res = 0;
            const auto& rho_acc = ctx.ophol_acc(ro);
            const auto& delta_acc = ctx.ophol_acc(de);
            for (int k = 0; k < (dense ? 2 : 1); ++k) {
                const Vec& psi = phis[k];
                const Vec& phi = phis[(k + 1) % phis.size()];
                // coefficient tensor of Phi' (x) Psi' over the basis
                Mat coef = Mat::Zero(n, n);
                for (auto [x1, y1] : rnz)
                    for (auto [x2, y2] : rnz) {
                        const cplx v = r(x1 * n + y1) * r(x2 * n + y2);
                        const Vec u = act_left(m, D.basis(y2), act_right(m, phi, D.basis(x1)));
                        const Vec w = act_left(m, D.basis(x2), act_right(m, psi, D.basis(y1)));
                        coef += v * u * w.transpose();
                    }
                LazySum rhs;
                for (int q = 0; q < n; ++q) {
                    const Vec row = coef.row(q).transpose();
                    if (row.cwiseAbs().maxCoeff() < 1e-14) continue;
                    rhs.add(1.0, {rho_acc.slots[q], delta_acc.at(row)});
                }
                res = std::max(res, lazy_rel(lazy_product({delta_acc.at(psi), rho_acc.at(phi)}), rhs, seed + k));
            }
            rep.add("closed-ribbons-braided-exchange", res, tol);
        }
    }
    return rep;
}

// ---------------------------------------------------------------- gauge

SuiteReport verify_gauge(const Model& m, double tol, std::uint64_t seed) {
    SuiteReport rep;
    rep.suite = "gauge";
    Rng rng(seed);
    Context ctx(m);
    const auto& p = m.presentation();
    const auto& H = m.algebra();
    const auto& Hs = m.dual();
    const auto& D = m.double_algebra().hopf;
    const int d = m.dim();
    const bool dense = d <= 3;
    const auto xs = samples(D.dim, 2, dense, rng);

    const int a = 0;
    // operators near the site of a
    const ModelOperator mop = op_P(m, a, random_vec(d, rng)) * op_Q(m, p.t2(a), random_vec(d, rng));
    const ModelOperator nop = op_Q(m, a, random_vec(d, rng)) + op_P(m, p.t0(a), random_vec(d, rng));
    double unit = 0, assoc = 0, alg = 0;
    using GaugeL = ModelOperator (*)(const Model&, int, const Vec&, const ModelOperator&);
    using GaugeR = ModelOperator (*)(const Model&, int, const ModelOperator&, const Vec&);
    const std::pair<const char*, GaugeL> lefts[] = {{"left", gauge_left}, {"left-op", gauge_left_op}};
    const std::pair<const char*, GaugeR> rights[] = {{"right", gauge_right}, {"right-op", gauge_right_op}};
    for (const auto& [name, act] : lefts) {
        unit = op_distance(act(m, a, D.unit, mop), mop);
        assoc = op_distance(act(m, a, D.mul(xs[0], xs[1]), mop), act(m, a, xs[0], act(m, a, xs[1], mop)));
        // module algebra: X -> (MN) = (X1 -> M)(X2 -> N), with the opposite product for the op actions
        const bool op = std::string(name) == "left-op";
        const Vec cx = D.comul(xs[0]);
        ModelOperator rhs = ModelOperator::zero(d);
        for (int i = 0; i < D.dim; ++i)
            for (int j = 0; j < D.dim; ++j) {
                const cplx c = cx(i * D.dim + j);
                if (std::abs(c) < 1e-15) continue;
                rhs = rhs + c * (op ? act(m, a, D.basis(j), mop) * act(m, a, D.basis(i), nop)
                                    : act(m, a, D.basis(i), mop) * act(m, a, D.basis(j), nop));
            }
        alg = op_distance(act(m, a, xs[0], mop * nop), rhs);
        rep.add(std::string(name) + "-unit", unit, tol);
        rep.add(std::string(name) + "-associative", assoc, tol);
        rep.add(std::string(name) + "-module-algebra", alg, tol);
    }
    for (const auto& [name, act] : rights) {
        unit = op_distance(act(m, a, mop, D.unit), mop);
        assoc = op_distance(act(m, a, mop, D.mul(xs[0], xs[1])), act(m, a, act(m, a, mop, xs[0]), xs[1]));
        const bool op = std::string(name) == "right-op";
        const Vec cx = D.comul(xs[0]);
        ModelOperator rhs = ModelOperator::zero(d);
        for (int i = 0; i < D.dim; ++i)
            for (int j = 0; j < D.dim; ++j) {
                const cplx c = cx(i * D.dim + j);
                if (std::abs(c) < 1e-15) continue;
                rhs = rhs + c * (op ? act(m, a, mop, D.basis(j)) * act(m, a, nop, D.basis(i))
                                    : act(m, a, mop, D.basis(i)) * act(m, a, nop, D.basis(j)));
            }
        alg = op_distance(act(m, a, mop * nop, xs[0]), rhs);
        rep.add(std::string(name) + "-unit", unit, tol);
        rep.add(std::string(name) + "-associative", assoc, tol);
        rep.add(std::string(name) + "-module-algebra", alg, tol);
    }

    // invariant subspaces
    for (int b : arrow_sample(p)) {
        std::vector<ModelOperator> pb, qb;
        for (int i = 0; i < d; ++i) {
            pb.push_back(op_P(m, b, H.basis(i)));
            qb.push_back(op_Q(m, b, Hs.basis(i)));
        }
        double rp = 0, rq = 0;
        for (const auto& x : xs) {
            const Vec h = random_vec(d, rng), f = random_vec(d, rng);
            rp = std::max(rp, span_residual(gauge_left(m, p.tinv(0, b), x, op_P(m, b, h)), pb));
            rp = std::max(rp, span_residual(gauge_right(m, b, op_P(m, b, h), x), pb));
            rq = std::max(rq, span_residual(gauge_left_op(m, b, x, op_Q(m, b, f)), qb));
            rq = std::max(rq, span_residual(gauge_right_op(m, p.t2(b), op_Q(m, b, f), x), qb));
        }
        rep.add(tag("P-invariant-subspace", b), rp, tol);
        rep.add(tag("Q-invariant-subspace", b), rq, tol);
    }
    return rep;
}

}  // namespace kit
