#pragma once

// Brute-force reference computations shared by tests and the acceptance binary.

#include <cstdlib>
#include <numeric>
#include <vector>

namespace oracle {

// count of primitive reduced positive definite forms of discriminant D by a plain triple loop
inline int reduced_form_count(long D) {
    int h = 0;
    long lim = -D;
    for (long a = 1; a <= lim; ++a)
        for (long c = a; c <= lim; ++c)
            for (long b = -a; b <= a; ++b) {
                if (b * b - 4 * a * c != D) continue;
                if (b == -a) continue;
                if (a == c && b < 0) continue;
                if (std::gcd(std::gcd(a, std::labs(b)), c) != 1) continue;
                ++h;
            }
    return h;
}

inline bool is_fundamental(long D) {
    auto sqf = [](long m) {
        m = std::labs(m);
        for (long q = 2; q * q <= m; ++q)
            if (m % (q * q) == 0) return false;
        return true;
    };
    long r = ((D % 4) + 4) % 4;
    if (r == 1) return sqf(D);
    if (r == 0) {
        long m = D / 4;
        long s = ((m % 4) + 4) % 4;
        return (s == 2 || s == 3) && sqf(m);
    }
    return false;
}

inline long d_of(long D) { return D % 4 == 0 ? D / 4 : D; }

}  // namespace oracle
