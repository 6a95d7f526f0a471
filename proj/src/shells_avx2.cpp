#include <immintrin.h>

#include "kudla/shells.hpp"

namespace kudla {

// Four lanes advanced by exact second differences:
// Q(u + 4) - Q(u) = 8 A u + 16 A + 4 B v, and that step grows by 32 A.
void shell_row_avx2(const QuadForm2& f, long v, long u0, long len, int64_t* out) {
    int64_t q0[4], d0[4];
    for (int i = 0; i < 4; ++i) {
        int64_t u = u0 + i;
        q0[i] = f.A * u * u + f.B * u * v + f.C * v * v;
        d0[i] = 8 * f.A * u + 16 * f.A + 4 * f.B * v;
    }
    __m256i q = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(q0));
    __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(d0));
    __m256i dd = _mm256_set1_epi64x(32 * f.A);
    long i = 0;
    for (; i + 4 <= len; i += 4) {
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), q);
        q = _mm256_add_epi64(q, d);
        d = _mm256_add_epi64(d, dd);
    }
    if (i < len) {
        int64_t tail[4];
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(tail), q);
        for (long j = 0; i + j < len; ++j) out[i + j] = tail[j];
    }
}

}  // namespace kudla
