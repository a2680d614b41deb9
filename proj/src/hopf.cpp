#include "kit/hopf.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace kit {

namespace {

constexpr double kZero = 1e-14;

Mat null_space(const Mat& m, double tol = 1e-9) {
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const int n = static_cast<int>(m.cols());
    const double scale = std::max(1.0, s.size() ? s(0) : 0.0);
    int rank = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > tol * scale) ++rank;
    return svd.matrixV().rightCols(n - rank);
}

// Orthonormal basis of the column space.
Mat range_basis(const Mat& m, double tol = 1e-9) {
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    const double scale = std::max(1.0, s.size() ? s(0) : 0.0);
    int rank = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > tol * scale) ++rank;
    return svd.matrixU().leftCols(rank);
}

Vec random_vec(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = cplx(g(rng), g(rng));
    return v;
}

double max_abs(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }
double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// element of A (x) A from a coordinate pair
Vec kron(const Vec& x, const Vec& y) {
    Vec out(x.size() * y.size());
    for (int i = 0; i < x.size(); ++i) out.segment(i * y.size(), y.size()) = x(i) * y;
    return out;
}

// product in A (x) A
Vec mul2(const HopfData& h, const Vec& x, const Vec& y) {
    const int d = h.dim;
    Vec out = Vec::Zero(d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const cplx xv = x(i * d + j);
            if (std::abs(xv) < kZero) continue;
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    const cplx yv = y(k * d + l);
                    if (std::abs(yv) < kZero) continue;
                    out += xv * yv * kron(h.mul(h.basis(i), h.basis(k)), h.mul(h.basis(j), h.basis(l)));
                }
        }
    return out;
}

}  // namespace

void HopfData::index() {
    const int d = dim;
    mult_nz.clear();
    cop_of.assign(d, {});
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                const cplx m = mult[(i * d + j) * d + k];
                if (std::abs(m) > kZero) mult_nz.push_back({i, j, k, m});
                const cplx c = comult[(i * d + j) * d + k];
                if (std::abs(c) > kZero) cop_of[i].push_back({i, j, k, c});
            }
    antipode_inv = antipode.inverse();
}

Vec HopfData::basis(int i) const {
    Vec v = Vec::Zero(dim);
    v(i) = 1.0;
    return v;
}

Vec HopfData::mul(const Vec& x, const Vec& y) const {
    Vec out = Vec::Zero(dim);
    for (const auto& e : mult_nz) out(e.c) += e.v * x(e.a) * y(e.b);
    return out;
}

Vec HopfData::comul(const Vec& x) const {
    Vec out = Vec::Zero(dim * dim);
    for (int a = 0; a < dim; ++a) {
        if (std::abs(x(a)) < kZero) continue;
        for (const auto& e : cop_of[a]) out(e.b * dim + e.c) += e.v * x(a);
    }
    return out;
}

Mat HopfData::left_mult(const Vec& x) const {
    Mat m = Mat::Zero(dim, dim);
    for (const auto& e : mult_nz) m(e.c, e.b) += e.v * x(e.a);
    return m;
}

Mat HopfData::right_mult(const Vec& x) const {
    Mat m = Mat::Zero(dim, dim);
    for (const auto& e : mult_nz) m(e.c, e.a) += e.v * x(e.b);
    return m;
}

std::vector<std::pair<std::array<int, 3>, cplx>> HopfData::comul2(int k) const {
    std::vector<std::pair<std::array<int, 3>, cplx>> out;
    for (const auto& e : cop_of[k])
        for (const auto& f : cop_of[e.b]) out.push_back({{f.b, f.c, e.c}, e.v * f.v});
    return out;
}

Mat Irrep::at(const Vec& x) const {
    Mat m = Mat::Zero(dim, dim);
    for (int k = 0; k < x.size(); ++k)
        if (std::abs(x(k)) > kZero) m += x(k) * rep[k];
    return m;
}

HopfReport validate_hopf(const HopfData& h, double tol) {
    HopfReport r;
    const int d = h.dim;
    auto add = [&](const std::string& name, double res) {
        HopfCheck c{name, res, res < tol};
        r.checks.push_back(c);
        r.max_residual = std::max(r.max_residual, res);
        if (!c.ok) {
            r.ok = false;
            r.failures.push_back(name);
        }
    };
    std::vector<Vec> e(d);
    for (int i = 0; i < d; ++i) e[i] = h.basis(i);

    double assoc = 0, unit = 0, coassoc = 0, counit = 0, bialg = 0, eps_mult = 0, anti = 0, s2 = 0;
    double star_anti = 0, star_inv = 0, star_cop = 0, haar = 0;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            const Vec ij = h.mul(e[i], e[j]);
            for (int k = 0; k < d; ++k)
                assoc = std::max(assoc, max_abs(Vec(h.mul(ij, e[k]) - h.mul(e[i], h.mul(e[j], e[k])))));
            bialg = std::max(bialg, max_abs(Vec(h.comul(ij) - mul2(h, h.comul(e[i]), h.comul(e[j])))));
            eps_mult = std::max(eps_mult, std::abs(h.eps(ij) - h.eps(e[i]) * h.eps(e[j])));
            star_anti = std::max(star_anti, max_abs(Vec(h.dagger(ij) - h.mul(h.dagger(e[j]), h.dagger(e[i])))));
        }
        unit = std::max(unit, max_abs(Vec(h.mul(h.unit, e[i]) - e[i])));
        unit = std::max(unit, max_abs(Vec(h.mul(e[i], h.unit) - e[i])));

        // coassociativity and counit on D(e_i)
        Vec left = Vec::Zero(d * d * d), right = Vec::Zero(d * d * d);
        Vec cl = Vec::Zero(d), cr = Vec::Zero(d);
        Vec sl = Vec::Zero(d), sr = Vec::Zero(d);
        for (const auto& c : h.cop_of[i]) {
            const Vec db = h.comul(e[c.b]), dc = h.comul(e[c.c]);
            left += c.v * kron(db, e[c.c]);
            right += c.v * kron(e[c.b], dc);
            cl += c.v * h.eps(e[c.b]) * e[c.c];
            cr += c.v * h.eps(e[c.c]) * e[c.b];
            sl += c.v * h.mul(h.S(e[c.b]), e[c.c]);
            sr += c.v * h.mul(e[c.b], h.S(e[c.c]));
        }
        coassoc = std::max(coassoc, max_abs(Vec(left - right)));
        counit = std::max({counit, max_abs(Vec(cl - e[i])), max_abs(Vec(cr - e[i]))});
        const Vec target = h.eps(e[i]) * h.unit;
        anti = std::max({anti, max_abs(Vec(sl - target)), max_abs(Vec(sr - target))});

        star_inv = std::max(star_inv, max_abs(Vec(h.dagger(h.dagger(e[i])) - e[i])));
        // D(x^dagger) = (dagger (x) dagger) D(x)
        Vec dd = Vec::Zero(d * d);
        for (const auto& c : h.cop_of[i]) dd += std::conj(c.v) * kron(h.dagger(e[c.b]), h.dagger(e[c.c]));
        star_cop = std::max(star_cop, max_abs(Vec(h.comul(h.dagger(e[i])) - dd)));

        haar = std::max(haar, max_abs(Vec(h.mul(e[i], h.haar) - h.eps(e[i]) * h.haar)));
        haar = std::max(haar, max_abs(Vec(h.mul(h.haar, e[i]) - h.eps(e[i]) * h.haar)));
    }
    s2 = max_abs(Mat(h.antipode * h.antipode - Mat::Identity(d, d)));
    counit = std::max(counit, std::abs(h.eps(h.unit) - 1.0));
    bialg = std::max(bialg, max_abs(Vec(h.comul(h.unit) - kron(h.unit, h.unit))));
    haar = std::max({haar, std::abs(h.eps(h.haar) - 1.0), max_abs(Vec(h.dagger(h.haar) - h.haar))});

    add("associativity", assoc);
    add("unit", unit);
    add("coassociativity", coassoc);
    add("counit", counit);
    add("bialgebra", std::max(bialg, eps_mult));
    add("antipode", anti);
    add("antipode-involutive", s2);
    add("star-antimultiplicative", star_anti);
    add("star-involutive", star_inv);
    add("star-comultiplicative", star_cop);
    add("haar", haar);
    return r;
}

HopfData group_algebra(const std::vector<std::vector<int>>& table, const std::string& label) {
    const int n = static_cast<int>(table.size());
    if (n == 0) throw Error("NotAGroup", "empty table");
    for (const auto& row : table) {
        if (static_cast<int>(row.size()) != n) throw Error("NotAGroup", "table is not square");
        for (int x : row)
            if (x < 0 || x >= n) throw Error("NotAGroup", "product out of range");
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (table[table[a][b]][c] != table[a][table[b][c]]) throw Error("NotAGroup", "not associative");
    int id = -1;
    for (int a = 0; a < n && id < 0; ++a) {
        bool ok = true;
        for (int b = 0; b < n; ++b) ok = ok && table[a][b] == b && table[b][a] == b;
        if (ok) id = a;
    }
    if (id < 0) throw Error("NotAGroup", "no identity");
    std::vector<int> inv(n, -1);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (table[a][b] == id && table[b][a] == id) inv[a] = b;
    for (int a = 0; a < n; ++a)
        if (inv[a] < 0) throw Error("NotAGroup", "element without inverse");

    HopfData h;
    h.dim = n;
    h.label = label;
    h.mult.assign(n * n * n, 0.0);
    h.comult.assign(n * n * n, 0.0);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) h.mult[(a * n + b) * n + table[a][b]] = 1.0;
        h.comult[(a * n + a) * n + a] = 1.0;
    }
    h.unit = Vec::Zero(n);
    h.unit(id) = 1.0;
    h.counit = Vec::Ones(n);
    h.antipode = Mat::Zero(n, n);
    for (int a = 0; a < n; ++a) h.antipode(inv[a], a) = 1.0;
    h.star = h.antipode;
    h.haar = Vec::Constant(n, 1.0 / n);
    h.index();
    return h;
}

std::vector<std::vector<int>> cyclic_group_table(int n) {
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    return t;
}

std::vector<std::vector<int>> symmetric3_table() {
    std::vector<std::array<int, 3>> perms;
    std::array<int, 3> p{0, 1, 2};
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    const int n = static_cast<int>(perms.size());
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            std::array<int, 3> c{};
            for (int x = 0; x < 3; ++x) c[x] = perms[a][perms[b][x]];  // (ab)(x) = a(b(x))
            t[a][b] = static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin());
        }
    return t;
}

HopfData hopf_preset(const std::string& name) {
    if (name == "z2") return group_algebra(cyclic_group_table(2), name);
    if (name == "z3") return group_algebra(cyclic_group_table(3), name);
    if (name == "z4") return group_algebra(cyclic_group_table(4), name);
    if (name == "s3") return group_algebra(symmetric3_table(), name);
    throw Error("UnknownPreset", "unknown Hopf preset '" + name + "'");
}

std::vector<std::string> hopf_preset_names() { return {"z2", "z3", "z4", "s3"}; }

Vec compute_haar(const HopfData& h) {
    const int d = h.dim;
    Mat stack(2 * d * d, d);
    for (int k = 0; k < d; ++k) {
        const Vec ek = h.basis(k);
        const cplx ep = h.eps(ek);
        stack.block(2 * k * d, 0, d, d) = h.left_mult(ek) - ep * Mat::Identity(d, d);
        stack.block((2 * k + 1) * d, 0, d, d) = h.right_mult(ek) - ep * Mat::Identity(d, d);
    }
    const Mat ns = null_space(stack);
    for (int c = 0; c < ns.cols(); ++c) {
        const cplx e = h.eps(ns.col(c));
        if (std::abs(e) > 1e-8) return ns.col(c) / e;
    }
    throw Error("NoHaarIntegral", "no normalized integral for " + h.label);
}

HopfData dual_hopf(const HopfData& h) {
    const int d = h.dim;
    HopfData s;
    s.dim = d;
    s.label = h.label + "*";
    s.mult.assign(d * d * d, 0.0);
    s.comult.assign(d * d * d, 0.0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                s.mult[(i * d + j) * d + k] = h.comult[(k * d + i) * d + j];
                s.comult[(k * d + i) * d + j] = h.mult[(i * d + j) * d + k];
            }
    s.unit = h.counit;
    s.counit = h.unit;
    s.antipode = h.antipode.transpose();
    s.star = (h.star.conjugate() * h.antipode).transpose();
    s.index();
    s.haar = compute_haar(s);
    return s;
}

QuasiTriangular drinfeld_double(const HopfData& h) {
    const int d = h.dim, n = d * d;
    const HopfData hs = dual_hopf(h);
    auto at = [d](int i, int j) { return i * d + j; };

    // (eps (x) x_b)(xi_c (x) 1) = sum mid[b][c](q, t) xi_q (x) x_t
    std::vector<std::vector<Mat>> mid(d, std::vector<Mat>(d, Mat::Zero(d, d)));
    for (int c = 0; c < d; ++c) {
        const auto dc = hs.comul2(c);
        for (int b = 0; b < d; ++b) {
            const auto db = h.comul2(b);
            for (const auto& [pqr, cv] : dc)
                for (const auto& [stu, bv] : db) {
                    if (pqr[2] != stu[0]) continue;
                    const cplx s = h.antipode_inv(pqr[0], stu[2]);
                    if (std::abs(s) < kZero) continue;
                    mid[b][c](pqr[1], stu[1]) += cv * bv * s;
                }
        }
    }
    HopfData D;
    D.dim = n;
    D.label = "D(" + h.label + ")";
    D.mult.assign(static_cast<size_t>(n) * n * n, 0.0);
    D.comult.assign(static_cast<size_t>(n) * n * n, 0.0);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c)
                for (int e = 0; e < d; ++e) {
                    const int x = at(a, b), y = at(c, e);
                    const Mat& m = mid[b][c];
                    for (int q = 0; q < d; ++q)
                        for (int t = 0; t < d; ++t) {
                            if (std::abs(m(q, t)) < kZero) continue;
                            const Vec l = hs.mul(hs.basis(a), hs.basis(q));
                            const Vec r = h.mul(h.basis(t), h.basis(e));
                            for (int i = 0; i < d; ++i) {
                                if (std::abs(l(i)) < kZero) continue;
                                for (int j = 0; j < d; ++j)
                                    if (std::abs(r(j)) > kZero)
                                        D.mult[(static_cast<size_t>(x) * n + y) * n + at(i, j)] += m(q, t) * l(i) * r(j);
                            }
                        }
                }
    // D(xi_c (x) x_e) = (xi_c(2) (x) x_e(1)) (x) (xi_c(1) (x) x_e(2))
    for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e)
            for (const auto& f : hs.cop_of[c])
                for (const auto& g : h.cop_of[e])
                    D.comult[(static_cast<size_t>(at(c, e)) * n + at(f.c, g.b)) * n + at(f.b, g.c)] += f.v * g.v;
    D.unit = kron(h.counit, h.unit);
    D.counit = kron(h.unit, h.counit);
    // S(phi (x) h) = S^-1(phi(2)) (x) S(h(2)) phi(1)(h(3)) phi(3)(S^-1 h(1))
    D.antipode = Mat::Zero(n, n);
    for (int c = 0; c < d; ++c) {
        const auto dc = hs.comul2(c);
        for (int e = 0; e < d; ++e) {
            const auto de = h.comul2(e);
            Vec col = Vec::Zero(n);
            for (const auto& [pqr, cv] : dc)
                for (const auto& [stu, ev] : de) {
                    if (pqr[0] != stu[2]) continue;
                    const cplx s = h.antipode_inv(pqr[2], stu[0]);
                    if (std::abs(s) < kZero) continue;
                    col += cv * ev * s * kron(hs.Sinv(hs.basis(pqr[1])), h.S(h.basis(stu[1])));
                }
            D.antipode.col(at(c, e)) = col;
        }
    }
    D.index();
    // (psi (x) g)^dagger = (eps (x) g^dagger)(psi^dagger (x) 1)
    D.star = Mat::Zero(n, n);
    for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e)
            D.star.col(at(c, e)) = D.mul(kron(h.counit, h.dagger(h.basis(e))), kron(hs.dagger(hs.basis(c)), h.unit));
    D.haar = compute_haar(D);

    QuasiTriangular q;
    q.r_matrix = Vec::Zero(n * n);
    q.drinfeld_u = Vec::Zero(n);
    for (int i = 0; i < d; ++i) {
        const Vec r1 = kron(h.counit, h.basis(i));
        const Vec r2 = kron(hs.basis(i), h.unit);
        q.r_matrix += kron(r1, r2);
        q.drinfeld_u += D.mul(D.S(r2), r1);
    }
    q.hopf = std::move(D);
    return q;
}

HopfData dual_of_double_algebra(const HopfData& h) {
    const int d = h.dim, n = d * d;
    const HopfData hs = dual_hopf(h);
    auto at = [d](int i, int j) { return i * d + j; };
    HopfData D;
    D.dim = n;
    D.label = "D(" + h.label + ")*";
    D.mult.assign(static_cast<size_t>(n) * n * n, 0.0);
    D.comult.assign(static_cast<size_t>(n) * n * n, 0.0);
    // (x_a (x) xi_b)(x_c (x) xi_e) = x_c x_a (x) xi_b xi_e
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c)
                for (int e = 0; e < d; ++e) {
                    const Vec l = h.mul(h.basis(c), h.basis(a));
                    const Vec r = hs.mul(hs.basis(b), hs.basis(e));
                    for (int i = 0; i < d; ++i)
                        for (int j = 0; j < d; ++j)
                            D.mult[(static_cast<size_t>(at(a, b)) * n + at(c, e)) * n + at(i, j)] += l(i) * r(j);
                }
    // D(h (x) phi) = (h(1) (x) xi_i phi(1) xi_j) (x) (S^-1(x_j) h(2) x_i (x) phi(2))
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (const auto& f : h.cop_of[a])
                for (const auto& g : hs.cop_of[b])
                    for (int i = 0; i < d; ++i)
                        for (int j = 0; j < d; ++j) {
                            const Vec left = hs.mul(hs.mul(hs.basis(i), hs.basis(g.b)), hs.basis(j));
                            const Vec right = h.mul(h.mul(h.Sinv(h.basis(j)), h.basis(f.c)), h.basis(i));
                            for (int y = 0; y < d; ++y) {
                                if (std::abs(left(y)) < kZero) continue;
                                for (int z = 0; z < d; ++z) {
                                    if (std::abs(right(z)) < kZero) continue;
                                    D.comult[(static_cast<size_t>(at(a, b)) * n + at(f.b, y)) * n + at(z, g.c)] +=
                                        f.v * g.v * left(y) * right(z);
                                }
                            }
                        }
    D.unit = kron(h.unit, h.counit);
    D.counit = kron(h.counit, h.unit);
    // S(h (x) phi) = x_j S^-1(h) S^-1(x_i) (x) xi_i S*(phi) xi_j
    D.antipode = Mat::Zero(n, n);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            Vec col = Vec::Zero(n);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    const Vec l = h.mul(h.mul(h.basis(j), h.Sinv(h.basis(a))), h.Sinv(h.basis(i)));
                    const Vec r = hs.mul(hs.mul(hs.basis(i), hs.S(hs.basis(b))), hs.basis(j));
                    col += kron(l, r);
                }
            D.antipode.col(at(a, b)) = col;
        }
    D.star = Mat::Zero(n, n);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) D.star.col(at(a, b)) = kron(h.dagger(h.basis(a)), hs.dagger(hs.basis(b)));
    D.index();
    D.haar = compute_haar(D);
    return D;
}

Mat dual_double_antipode_factorized(const HopfData& h) {
    const int d = h.dim, n = d * d;
    const HopfData D = dual_of_double_algebra(h);
    const HopfData hs = dual_hopf(h);
    Vec w = Vec::Zero(n);
    for (int i = 0; i < d; ++i) w += kron(h.basis(i), hs.basis(i));
    // inverse of w in the algebra by solving L_w y = 1
    const Vec winv = D.left_mult(w).fullPivLu().solve(D.unit);
    Mat out(n, n);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            out.col(a * d + b) = D.mul(D.mul(winv, kron(h.Sinv(h.basis(a)), hs.S(hs.basis(b)))), w);
    return out;
}

cplx pairing(const Vec& phi, const Vec& x) { return phi.cwiseProduct(x).sum(); }

Vec hit_left(const HopfData& dual, const Vec& x, const Vec& phi) {
    const int n = dual.dim;
    const Vec c = dual.comul(phi);
    Vec out = Vec::Zero(n);
    for (int i = 0; i < n; ++i) out(i) = c.segment(i * n, n).cwiseProduct(x).sum();
    return out;
}

Vec hit_right(const HopfData& dual, const Vec& phi, const Vec& x) {
    const int n = dual.dim;
    const Vec c = dual.comul(phi);
    Vec out = Vec::Zero(n);
    for (int i = 0; i < n; ++i) out += x(i) * c.segment(i * n, n);
    return out;
}

Mat central_projection_matrix(const HopfData& d) {
    const int n = d.dim;
    const Vec ci = d.comul(d.haar);
    Mat p = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const cplx v = ci(i * n + j);
            if (std::abs(v) < kZero) continue;
            p += v * d.left_mult(d.basis(i)) * d.right_mult(d.S(d.basis(j)));
        }
    return p;
}

Vec central_projection(const HopfData& d, const Vec& x) { return central_projection_matrix(d) * x; }

Vec cocommutative_projection(const HopfData& d, const Vec& phi) {
    return central_projection_matrix(d).transpose() * phi;
}

Vec flip_dual_to_double(int hdim, const Vec& psi) {
    Vec out(psi.size());
    for (int i = 0; i < hdim; ++i)
        for (int j = 0; j < hdim; ++j) out(j * hdim + i) = psi(i * hdim + j);
    return out;
}

Vec flip_double_to_dual(int hdim, const Vec& x) { return flip_dual_to_double(hdim, x); }

CentralDecomposition central_decomposition(const HopfData& a, std::uint64_t seed) {
    const int n = a.dim;
    Mat stack(n * n, n);
    for (int k = 0; k < n; ++k) {
        const Vec ek = a.basis(k);
        stack.block(k * n, 0, n, n) = a.left_mult(ek) - a.right_mult(ek);
    }
    const Mat z = null_space(stack);
    const int r = static_cast<int>(z.cols());
    const Mat zpinv = z.adjoint();  // orthonormal columns
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 10; ++attempt) {
        Vec c = z * random_vec(r, rng);
        c = c + a.dagger(c);
        const Mat lz = zpinv * a.left_mult(c) * z;
        Eigen::ComplexEigenSolver<Mat> es(lz);
        const Vec ev = es.eigenvalues();
        double gap = 1e300;
        for (int i = 0; i < r; ++i)
            for (int j = i + 1; j < r; ++j) gap = std::min(gap, std::abs(ev(i) - ev(j)));
        if (r > 1 && gap < 1e-6) continue;
        CentralDecomposition out;
        for (int i = 0; i < r; ++i) {
            Vec v = z * es.eigenvectors().col(i);
            const Vec v2 = a.mul(v, v);
            int k = 0;
            v.cwiseAbs().maxCoeff(&k);
            v = v * (v(k) / v2(k));
            out.idempotents.push_back(v);
            const double tr = a.left_mult(v).trace().real();
            out.block_dims.push_back(static_cast<int>(std::lround(std::sqrt(std::max(tr, 0.0)))));
        }
        // trivial block first, then by block dimension, then by coordinates
        std::vector<int> order(r);
        for (int i = 0; i < r; ++i) order[i] = i;
        auto key = [&](int i) {
            const Vec& e = out.idempotents[i];
            std::vector<double> k{std::abs(a.eps(e) - 1.0) < 1e-8 ? 0.0 : 1.0, double(out.block_dims[i])};
            for (int j = 0; j < n; ++j) {
                k.push_back(std::round(-e(j).real() * 1e8));
                k.push_back(std::round(-e(j).imag() * 1e8));
            }
            return k;
        };
        std::sort(order.begin(), order.end(), [&](int x, int y) { return key(x) < key(y); });
        CentralDecomposition sorted;
        for (int i : order) {
            sorted.idempotents.push_back(out.idempotents[i]);
            sorted.block_dims.push_back(out.block_dims[i]);
        }
        return sorted;
    }
    throw Error("DegenerateSpectrum", "random central element kept a repeated eigenvalue");
}

std::vector<Irrep> irreducible_reps(const HopfData& a, const CentralDecomposition& dec, const Vec& omega,
                                    std::uint64_t seed) {
    const int n = a.dim;
    std::mt19937_64 rng(seed);
    auto inner = [&](const Vec& x, const Vec& y) { return pairing(omega, a.mul(a.dagger(x), y)); };
    std::vector<Irrep> out;
    for (size_t r = 0; r < dec.idempotents.size(); ++r) {
        const Vec& e = dec.idempotents[r];
        const int m = dec.block_dims[r];
        Vec p = e;
        if (m > 1) {
            const Mat block = range_basis(a.right_mult(e));
            for (int attempt = 0;; ++attempt) {
                if (attempt == 10) throw Error("DegenerateSpectrum", "no generic element in a block");
                Vec w = random_vec(n, rng);
                const Vec y = a.mul(w + a.dagger(w), e);
                const Mat ly = block.adjoint() * a.left_mult(y) * block;
                Eigen::ComplexEigenSolver<Mat> es(ly);
                std::vector<cplx> vals;
                for (int i = 0; i < es.eigenvalues().size(); ++i) {
                    const cplx v = es.eigenvalues()(i);
                    bool seen = false;
                    for (const cplx& u : vals) seen = seen || std::abs(u - v) < 1e-6;
                    if (!seen) vals.push_back(v);
                }
                if (static_cast<int>(vals.size()) != m) continue;
                std::sort(vals.begin(), vals.end(),
                          [](const cplx& x, const cplx& z) { return x.real() < z.real(); });
                p = e;
                for (size_t k = 1; k < vals.size(); ++k) p = a.mul(p, (y - vals[k] * e) / (vals[0] - vals[k]));
                break;
            }
        }
        // minimal left ideal A p with an orthonormal basis for the omega inner product
        const Mat span = range_basis(a.right_mult(p));
        Mat gram(span.cols(), span.cols());
        for (int i = 0; i < span.cols(); ++i)
            for (int j = 0; j < span.cols(); ++j) gram(i, j) = inner(span.col(i), span.col(j));
        Eigen::SelfAdjointEigenSolver<Mat> ges(gram);
        const Mat basis =
            span * ges.eigenvectors() * ges.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal();
        Irrep ir;
        ir.dim = static_cast<int>(basis.cols());
        for (int k = 0; k < n; ++k) {
            Mat dk(ir.dim, ir.dim);
            for (int i = 0; i < ir.dim; ++i)
                for (int j = 0; j < ir.dim; ++j) dk(i, j) = inner(basis.col(i), a.mul(a.basis(k), basis.col(j)));
            ir.rep.push_back(dk);
        }
        out.push_back(std::move(ir));
    }
    return out;
}

}  // namespace kit
