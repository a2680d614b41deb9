#include "kit/transform.hpp"

namespace kit {

namespace {

Perm compose(const Perm& f, const Perm& g) {  // f after g
    Perm h(g.size());
    for (size_t a = 0; a < g.size(); ++a) h[a] = f[g[a]];
    return h;
}

std::string tag(const ArrowPresentation& p, const char* op) {
    return std::string(op) + "(" + p.name() + ")";
}

}  // namespace

ArrowPresentation dual(const ArrowPresentation& p) {
    const Perm t0t2 = compose(p.perm(0), p.perm(2));
    return new_presentation(p.size(), compose(t0t2, p.inverse_perm(0)), p.perm(0), tag(p, "dual"));
}

ArrowPresentation dual_alt(const ArrowPresentation& p) {
    const Perm t0t2 = compose(p.perm(0), p.perm(2));
    return new_presentation(p.size(), p.perm(2), compose(p.inverse_perm(2), t0t2), tag(p, "dual-alt"));
}

ArrowPresentation mirror(const ArrowPresentation& p) {
    const Perm x = compose(p.perm(0), p.inverse_perm(2));
    return new_presentation(p.size(), p.inverse_perm(0), compose(x, p.inverse_perm(0)), tag(p, "mirror"));
}

ArrowPresentation swapped(const ArrowPresentation& p) {
    return new_presentation(p.size(), p.perm(2), p.perm(0), tag(p, "swap"));
}

ArrowPresentation inverted(const ArrowPresentation& p) {
    return new_presentation(p.size(), p.inverse_perm(0), p.inverse_perm(2), tag(p, "inverse"));
}

ArrowPresentation double_of(const ArrowPresentation& p) {
    const int n = p.size();
    Perm t0(4 * n), t2(4 * n);
    for (int a = 0; a < n; ++a) {
        t0[darrow(a, 0, 1)] = darrow(p.t0(a), 0, 1);
        t0[darrow(a, 0, -1)] = darrow(p.t1(a), 2, -1);
        t0[darrow(a, 2, 1)] = darrow(p.t2(a), 2, 1);
        t0[darrow(a, 2, -1)] = darrow(a, 0, -1);

        t2[darrow(a, 0, 1)] = darrow(a, 2, -1);
        t2[darrow(a, 0, -1)] = darrow(p.tinv(0, a), 0, 1);
        t2[darrow(a, 2, 1)] = darrow(p.t1(a), 0, -1);
        t2[darrow(a, 2, -1)] = darrow(p.tinv(2, a), 2, 1);
    }
    return new_presentation(4 * n, t0, t2, tag(p, "double"));
}

ArrowPresentation dual_of_double(const ArrowPresentation& p) {
    const int n = p.size();
    Perm t0(4 * n), t2(4 * n);
    for (int a = 0; a < n; ++a) {
        t0[darrow(a, 0, 1)] = darrow(p.tinv(0, a), 0, -1);
        t0[darrow(a, 0, -1)] = darrow(a, 2, 1);
        t0[darrow(a, 2, 1)] = darrow(p.tinv(2, a), 2, -1);
        t0[darrow(a, 2, -1)] = darrow(p.t1(a), 0, 1);

        t2[darrow(a, 0, 1)] = darrow(p.t0(a), 0, 1);
        t2[darrow(a, 0, -1)] = darrow(p.t1(a), 2, -1);
        t2[darrow(a, 2, 1)] = darrow(p.t2(a), 2, 1);
        t2[darrow(a, 2, -1)] = darrow(a, 0, -1);
    }
    return new_presentation(4 * n, t0, t2, tag(p, "dual-double"));
}

bool check_isomorphism(const PresentationMap& m) {
    const int n = m.source.size();
    if (static_cast<int>(m.f.size()) != n || m.target.size() != n)
        throw Error("SizeMismatch", "map and presentations differ in size");
    std::vector<char> hit(n, 0);
    for (int x : m.f) {
        if (x < 0 || x >= n || hit[x]) return false;
        hit[x] = 1;
    }
    for (int a = 0; a < n; ++a) {
        if (m.f[m.source.t0(a)] != m.target.t0(m.f[a])) return false;
        if (m.f[m.source.t2(a)] != m.target.t2(m.f[a])) return false;
    }
    return true;
}

PresentationMap identity_map(const ArrowPresentation& p) {
    PresentationMap m{p, p, std::vector<int>(p.size())};
    for (int a = 0; a < p.size(); ++a) m.f[a] = a;
    return m;
}

PresentationMap power_map(const ArrowPresentation& p, int i, const ArrowPresentation& src,
                          const ArrowPresentation& dst) {
    PresentationMap m{src, dst, p.perm(i)};
    return m;
}

PresentationMap delta_iso(const ArrowPresentation& p) {
    const int n = p.size();
    PresentationMap m{dual_of_double(p), dual_of_double(dual(p)), std::vector<int>(4 * n)};
    for (int a = 0; a < n; ++a)
        for (int s : {1, -1}) {
            m.f[darrow(a, 0, s)] = darrow(a, 2, s);
            m.f[darrow(a, 2, s)] = darrow(p.t1(a), 0, s);
        }
    return m;
}

PresentationMap mu_iso(const ArrowPresentation& p) {
    const int n = p.size();
    PresentationMap m{dual_of_double(mirror(p)), mirror(dual_of_double(p)), std::vector<int>(4 * n)};
    for (int a = 0; a < n; ++a)
        for (int s : {1, -1}) {
            m.f[darrow(a, 0, s)] = darrow(a, 0, -s);
            m.f[darrow(a, 2, s)] = darrow(p.t1(a), 2, -s);
        }
    return m;
}

}  // namespace kit
