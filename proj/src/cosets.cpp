#include "kudla/cosets.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <tuple>

namespace kudla {

namespace {

// x a + y b = gcd(a, b) >= 0
long ext_gcd(long a, long b, long& x, long& y) {
    long x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        long q = a / b;
        std::tie(a, b) = std::make_pair(b, a - q * b);
        std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
        std::tie(y0, y1) = std::make_pair(y1, y0 - q * y1);
    }
    if (a < 0) {
        a = -a;
        x0 = -x0;
        y0 = -y0;
    }
    x = x0;
    y = y0;
    return a;
}

long floordiv(long a, long b) {
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

long sigma1(long n) {
    long s = 0;
    for (long d = 1; d <= n; ++d)
        if (n % d == 0) s += d;
    return s;
}

using Key = std::pair<Mat2, Mat2>;  // (H, u mod M)

Key key_of(const Mat2& X, long M) {
    auto rh = row_hermite(X);
    return {rh.H, rh.u.mod(M)};
}

}  // namespace

Mat2 Mat2::mod(long M) const { return {kudla::mod(a, M), kudla::mod(b, M), kudla::mod(c, M), kudla::mod(d, M)}; }

bool Mat2::operator<(const Mat2& o) const {
    return std::tie(a, b, c, d) < std::tie(o.a, o.b, o.c, o.d);
}

RowHermite row_hermite(const Mat2& X) {
    long det = X.det();
    if (det <= 0) throw std::invalid_argument("row_hermite needs a positive determinant");
    long s, t;
    long g = ext_gcd(X.a, X.c, s, t);
    // V X = (g *; 0 det/g) with V = (s t; -c/g a/g)
    Mat2 V{s, t, -X.c / g, X.a / g};
    Mat2 H = V * X;
    long k = floordiv(H.b, H.d);
    Mat2 Tk{1, -k, 0, 1};
    V = Tk * V;
    H = Tk * H;
    // u = V^{-1}
    return {V.adj(), H};
}

Mat2 lift_sl2(const Mat2& g0, long M) {
    Mat2 g = g0.mod(M);
    if (mod(g.det(), M) != 1 % M) throw std::invalid_argument("not in SL2(Z/M)");
    if (M == 1) return {};
    long c = g.c == 0 ? M : g.c;
    long d = g.d;
    while (std::gcd(c, d) != 1) d += M;
    long a0, b0;
    ext_gcd(d, c, a0, b0);  // a0 d + b0 c = 1, so (a0, -b0; c, d) has determinant 1
    b0 = -b0;
    long x, y;
    ext_gcd(c, d, x, y);  // x c + y d = 1
    long da = g.a - a0, db = g.b - b0;
    long t = mod(da * x + db * y, M);
    Mat2 r{a0 + t * c, b0 + t * d, c, d};
    if (r.det() != 1 || !(r.mod(M) == g)) throw std::logic_error("SL2 lift failed");
    return r;
}

CosetCertificate coset_identity_check(long n, long p, long r, long D, long budget) {
    if (n < 1) throw std::invalid_argument("n must be positive");
    long M = std::labs(D);
    for (long i = 0; i < r; ++i) M *= p;
    long need = M * M * M * M * sigma1(n);
    if (need > budget) throw EnumerationBudget("coset enumeration exceeds the budget", need);

    CosetCertificate cert;
    cert.n = n;
    cert.M = M;
    cert.index = M;
    long q = 0;
    for (long x = 2; x <= n; ++x)
        if (n % x == 0) {
            q = x;
            break;
        }
    bool prime = n > 1 && is_prime(n);
    if (n == 1)
        cert.expected = M;
    else if (prime)
        cert.expected = (M % q == 0 ? q : q + 1) * M;
    else
        cert.expected = -1;

    // SL2(Z/M)
    std::vector<Mat2> sl2;
    for (long a = 0; a < M; ++a)
        for (long b = 0; b < M; ++b)
            for (long c = 0; c < M; ++c)
                for (long d = 0; d < M; ++d)
                    if (mod(a * d - b * c, M) == 1 % M) sl2.push_back({a, b, c, d});

    // side A: M2(Z)^{det=-n} / SL2(Z) has representatives (a 0; c e), a e = -n, a > 0, 0 <= c < |e|
    std::set<Key> A;
    std::map<Mat2, long> residues;
    long total = 0;
    for (long a = 1; a <= n; ++a) {
        if (n % a != 0) continue;
        long e = -n / a;
        for (long c = 0; c < -e; ++c) {
            Mat2 Lw{a, 0, c, e};
            auto rh0 = row_hermite(Lw.flip());  // gamma'' = g^{-1} Lw'' for gamma = Lw g
            for (const Mat2& g : sl2) {
                Mat2 gm = (Lw * g).mod(M);
                if (gm.c != 0 || gm.d != 1 % M) continue;
                ++total;
                residues[gm]++;
                Mat2 u = (g.adj() * rh0.u).mod(M);
                if (!A.insert({rh0.H, u}).second) ++cert.duplicates;
            }
        }
    }
    cert.side_a = static_cast<long>(A.size());
    cert.parts = static_cast<long>(residues.size());
    long sum = 0;
    bool inT = true;
    for (const auto& [h, cnt] : residues) {
        sum += cnt;
        inT = inT && h.c == 0 && h.d == 1 % M;
    }
    cert.decomposition = inT && sum == total && cert.parts <= M * M;

    // side B: closure of diag(1, n) under Gamma_1(M) on both sides, up to Gamma(M) on the left
    std::vector<Mat2> gens{{1, 1, 0, 1}, {1, -1, 0, 1}};
    for (long k = -2; k <= 2; ++k) {
        if (k == 0) continue;
        long c = k * M;
        for (long d = 1 - 2 * M; d <= 1 + 2 * M; d += M) {
            if (std::gcd(c, d) != 1) continue;
            long x, y;
            ext_gcd(d, c, x, y);  // x d + y c = 1
            Mat2 g{x, -y, c, d};
            // a = x is 1 mod M automatically
            gens.push_back(g);
            gens.push_back(g.adj());
        }
    }
    Mat2 Tm{1, 1, 0, 1};
    std::set<Key> B;
    std::deque<Mat2> todo;
    auto visit = [&](const Mat2& X) {
        Key k = key_of(X, M);
        if (B.insert(k).second) todo.push_back(lift_sl2(k.second, M) * k.first);
    };
    visit({1, 0, 0, n});
    while (!todo.empty()) {
        Mat2 X = todo.front();
        todo.pop_front();
        visit(Tm * X);
        for (const Mat2& g : gens) visit(X * g);
    }
    cert.side_b = static_cast<long>(B.size());
    cert.sets_equal = A == B;
    cert.b_in_a = std::includes(A.begin(), A.end(), B.begin(), B.end());
    if (cert.expected < 0) cert.expected = cert.side_b;
    return cert;
}

bool in_gamma1(const Mat2& g, long N) {
    return g.det() == 1 && mod(g.c, N) == 0 && mod(g.a, N) == 1 % N && mod(g.d, N) == 1 % N;
}

std::vector<Mat2> gamma1_coset_reps(long N) {
    // Gamma_1(N) g depends only on the bottom row of g mod N
    std::vector<Mat2> reps;
    for (long c0 = 0; c0 < N; ++c0)
        for (long d0 = 0; d0 < N; ++d0) {
            if (std::gcd(std::gcd(c0, d0), N) != 1) continue;
            Mat2 best;
            long bestn = -1;
            for (long c = c0 - 2 * N; c <= c0 + 2 * N; c += N)
                for (long d = d0 - 2 * N; d <= d0 + 2 * N; d += N) {
                    if (std::gcd(c, d) != 1) continue;
                    long nn = c * c + d * d;
                    if (bestn >= 0 && nn >= bestn) continue;
                    long x, y;
                    ext_gcd(d, c, x, y);
                    best = {x, -y, c, d};
                    bestn = nn;
                }
            reps.push_back(best);
        }
    return reps;
}

CBall slash_eval(const QExp<CBall>& g, long k, const Mat2& gamma, const CBall& tau, double max_tail) {
    CBall j = CBall(gamma.c) * tau + CBall(gamma.d);
    CBall gt = (CBall(gamma.a) * tau + CBall(gamma.b)) / j;
    return eval_cm(g, gt, max_tail) / j.pow(k);
}

CBall trace_eval(const QExp<CBall>& g, long k, long N, const CBall& tau, double max_tail) {
    CBall s(0);
    for (const Mat2& m : gamma1_coset_reps(N)) s += slash_eval(g, k, m, tau, max_tail);
    return s;
}

}  // namespace kudla
