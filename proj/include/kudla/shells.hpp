#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace kudla {

// Q(u, v) = A u^2 + B u v + C v^2, positive definite
struct QuadForm2 {
    long A, B, C;
    long disc() const { return B * B - 4 * A * C; }
};

enum class Kernel { automatic, scalar, avx2 };

bool avx2_available();
Kernel resolve_kernel(Kernel k);

// out[i] = Q(u0 + i, v) for i < len
void shell_row_scalar(const QuadForm2& f, long v, long u0, long len, int64_t* out);
void shell_row_avx2(const QuadForm2& f, long v, long u0, long len, int64_t* out);

// r[n] = #{(u, v) : Q(u, v) = n} for 0 <= n <= X
std::vector<long> shell_counts(const QuadForm2& f, long X, Kernel k = Kernel::automatic);

// vectors grouped by value, 0 <= n <= X, in increasing (v, u) order within a shell
std::vector<std::vector<std::pair<long, long>>> shell_vectors(const QuadForm2& f, long X,
                                                             Kernel k = Kernel::automatic);

}  // namespace kudla
