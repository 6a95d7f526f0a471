#include "kudla/shells.hpp"

#include <cmath>
#include <stdexcept>

namespace kudla {

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Kernel resolve_kernel(Kernel k) {
    if (k == Kernel::automatic) return avx2_available() ? Kernel::avx2 : Kernel::scalar;
    if (k == Kernel::avx2 && !avx2_available()) throw std::runtime_error("AVX2 kernel requested but unsupported");
    return k;
}

void shell_row_scalar(const QuadForm2& f, long v, long u0, long len, int64_t* out) {
    for (long i = 0; i < len; ++i) {
        int64_t u = u0 + i;
        out[i] = f.A * u * u + f.B * u * v + f.C * v * v;
    }
}

namespace {

template <class Visit>
void for_each_row(const QuadForm2& f, long X, Kernel k, Visit visit) {
    if (f.A <= 0 || f.disc() >= 0) throw std::invalid_argument("form must be positive definite");
    k = resolve_kernel(k);
    double disc = static_cast<double>(-f.disc());
    long vmax = static_cast<long>(std::sqrt(4.0 * f.A * X / disc)) + 1;
    std::vector<int64_t> buf;
    for (long v = -vmax; v <= vmax; ++v) {
        // A u^2 + B v u + C v^2 - X <= 0
        double b = static_cast<double>(f.B) * v;
        double c = static_cast<double>(f.C) * v * v - X;
        double dd = b * b - 4.0 * f.A * c;
        if (dd < 0) continue;
        double s = std::sqrt(dd);
        long lo = static_cast<long>(std::floor((-b - s) / (2.0 * f.A))) - 1;
        long hi = static_cast<long>(std::ceil((-b + s) / (2.0 * f.A))) + 1;
        long len = hi - lo + 1;
        buf.resize(len);
        if (k == Kernel::avx2)
            shell_row_avx2(f, v, lo, len, buf.data());
        else
            shell_row_scalar(f, v, lo, len, buf.data());
        for (long i = 0; i < len; ++i)
            if (buf[i] <= X) visit(lo + i, v, buf[i]);
    }
}

}  // namespace

std::vector<long> shell_counts(const QuadForm2& f, long X, Kernel k) {
    std::vector<long> r(X + 1, 0);
    for_each_row(f, X, k, [&](long, long, int64_t q) { ++r[q]; });
    return r;
}

std::vector<std::vector<std::pair<long, long>>> shell_vectors(const QuadForm2& f, long X, Kernel k) {
    std::vector<std::vector<std::pair<long, long>>> r(X + 1);
    for_each_row(f, X, k, [&](long u, long v, int64_t q) { r[q].emplace_back(u, v); });
    return r;
}

}  // namespace kudla
