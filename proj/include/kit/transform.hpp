#pragma once

#include <vector>

#include "kit/presentation.hpp"

namespace kit {

// Arrows of the double: a_i^s packed as 4a + 2[i=2] + [s=-].
struct DoubleArrow {
    int base = 0;
    int kind = 0;  // 0 or 2
    int sign = 1;  // +1 or -1

    int pack() const { return 4 * base + (kind == 2 ? 2 : 0) + (sign < 0 ? 1 : 0); }
    static DoubleArrow unpack(int d) { return {d / 4, (d & 2) ? 2 : 0, (d & 1) ? -1 : 1}; }
    bool operator==(const DoubleArrow& o) const {
        return base == o.base && kind == o.kind && sign == o.sign;
    }
};

inline int darrow(int a, int kind, int sign) { return DoubleArrow{a, kind, sign}.pack(); }

struct PresentationMap {
    ArrowPresentation source;
    ArrowPresentation target;
    std::vector<int> f;
};

ArrowPresentation dual(const ArrowPresentation& p);
ArrowPresentation dual_alt(const ArrowPresentation& p);
ArrowPresentation mirror(const ArrowPresentation& p);
ArrowPresentation swapped(const ArrowPresentation& p);       // <A, T2, T0>
ArrowPresentation inverted(const ArrowPresentation& p);      // <A, T0^-1, T2^-1>
ArrowPresentation double_of(const ArrowPresentation& p);
ArrowPresentation dual_of_double(const ArrowPresentation& p);

// Throws Error("SizeMismatch") when f, source and target sizes disagree.
bool check_isomorphism(const PresentationMap& m);

PresentationMap identity_map(const ArrowPresentation& p);
// map a -> T_i a between two presentations on the same arrow set
PresentationMap power_map(const ArrowPresentation& p, int i, const ArrowPresentation& src,
                          const ArrowPresentation& dst);
PresentationMap delta_iso(const ArrowPresentation& p);
PresentationMap mu_iso(const ArrowPresentation& p);

}  // namespace kit
