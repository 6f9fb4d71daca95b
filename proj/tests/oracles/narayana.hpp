// Independent combinatorial oracle for M-P moments:
//   moment_m(y) = sum_{k=1}^{m} N(m,k) y^{k-1},  N(m,k) = C(m,k) C(m,k-1) / m
// (Narayana numbers).  Exact in double for the small m used in tests.
#pragma once

#include <cstdint>

namespace oracle {

inline double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return r;
}

inline double narayana(int m, int k) { return binom(m, k) * binom(m, k - 1) / double(m); }

inline double mp_moment_narayana(int m, double y) {
    if (m == 0) return 1.0;
    double acc = 0.0;
    double ypow = 1.0;
    for (int k = 1; k <= m; ++k) {
        acc += narayana(m, k) * ypow;
        ypow *= y;
    }
    return acc;
}

}  // namespace oracle
