#include "cmhecke/primes.hpp"

#include "cmhecke/errors.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>

namespace cmhecke {

std::size_t PrimeTable::count() const
{
    return primes_1mod4.size() + primes_3mod4.size() + (limit >= 2 ? 1 : 0);
}

PrimeTable sieve(std::uint64_t limit, std::uint64_t cap)
{
    if (limit > cap) throw capacity_error("sieve: limit exceeds configured cap");
    PrimeTable table;
    table.limit = limit;
    if (limit < 3) return table;

    std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(limit)));
    while (root * root > limit) --root;
    while ((root + 1) * (root + 1) <= limit) ++root;

    std::vector<char> small(root + 1, 1);
    std::vector<std::uint64_t> base;
    for (std::uint64_t i = 2; i <= root; ++i) {
        if (!small[i]) continue;
        base.push_back(i);
        for (std::uint64_t j = i * i; j <= root; j += i) small[j] = 0;
    }

    constexpr std::uint64_t kSegment = 1 << 18;
    std::vector<char> seg(kSegment);
    for (std::uint64_t lo = 3; lo <= limit; lo += kSegment) {
        const std::uint64_t hi = std::min(limit, lo + kSegment - 1);
        std::fill(seg.begin(), seg.begin() + static_cast<std::ptrdiff_t>(hi - lo + 1), 1);
        for (std::uint64_t p : base) {
            if (p * p > hi) break;
            std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
            for (std::uint64_t j = start; j <= hi; j += p) seg[j - lo] = 0;
        }
        for (std::uint64_t n = lo; n <= hi; ++n) {
            if (!seg[n - lo]) continue;
            if (n % 4 == 1)
                table.primes_1mod4.push_back(n);
            else if (n % 4 == 3)
                table.primes_3mod4.push_back(n);
        }
    }
    return table;
}

namespace {

constexpr char kCacheMagic[8] = {'C', 'M', 'H', 'P', 'R', 'I', 'M', 'E'};
constexpr std::uint32_t kCacheVersion = 1;

void put_u64(std::ostream& os, std::uint64_t v)
{
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

void put_u32(std::ostream& os, std::uint32_t v)
{
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 4);
}

bool get_u64(std::istream& is, std::uint64_t& v)
{
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) return false;
    v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return true;
}

bool get_u32(std::istream& is, std::uint32_t& v)
{
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4)) return false;
    v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return true;
}

PrimeTable truncate(const PrimeTable& t, std::uint64_t limit)
{
    PrimeTable out;
    out.limit = limit;
    for (auto p : t.primes_1mod4)
        if (p <= limit) out.primes_1mod4.push_back(p);
    for (auto p : t.primes_3mod4)
        if (p <= limit) out.primes_3mod4.push_back(p);
    return out;
}

}  // namespace

void save_prime_cache(const std::string& path, const PrimeTable& table)
{
    std::vector<std::uint64_t> all;
    all.reserve(table.count());
    if (table.limit >= 2) all.push_back(2);
    std::merge(table.primes_1mod4.begin(), table.primes_1mod4.end(), table.primes_3mod4.begin(),
               table.primes_3mod4.end(), std::back_inserter(all));

    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw capacity_error("prime cache: cannot open " + path + " for writing");
    os.write(kCacheMagic, 8);
    put_u32(os, kCacheVersion);
    put_u32(os, 0);
    put_u64(os, table.limit);
    put_u64(os, all.size());
    std::uint64_t prev = 0;
    for (auto p : all) {
        put_u64(os, p - prev);
        prev = p;
    }
    if (!os) throw capacity_error("prime cache: write failed for " + path);
}

std::optional<PrimeTable> load_prime_cache(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) return std::nullopt;
    char magic[8];
    if (!is.read(magic, 8) || std::memcmp(magic, kCacheMagic, 8) != 0) return std::nullopt;
    std::uint32_t version = 0, reserved = 0;
    std::uint64_t limit = 0, count = 0;
    if (!get_u32(is, version) || !get_u32(is, reserved) || !get_u64(is, limit) || !get_u64(is, count))
        return std::nullopt;
    if (version != kCacheVersion) return std::nullopt;
    PrimeTable t;
    t.limit = limit;
    std::uint64_t p = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
        std::uint64_t delta = 0;
        if (!get_u64(is, delta)) return std::nullopt;
        p += delta;
        if (p > limit) return std::nullopt;
        if (p % 4 == 1)
            t.primes_1mod4.push_back(p);
        else if (p % 4 == 3)
            t.primes_3mod4.push_back(p);
    }
    return t;
}

PrimeTable sieve_cached(std::uint64_t limit)
{
    const char* path = std::getenv("CMHECKE_PRIME_CACHE");
    if (path == nullptr || *path == '\0') return sieve(limit);
    if (auto cached = load_prime_cache(path); cached && cached->limit >= limit) return truncate(*cached, limit);
    PrimeTable t = sieve(limit);
    try {
        save_prime_cache(path, t);
    } catch (const capacity_error&) {
        // cache is optional
    }
    return t;
}

double psi_k(double t, std::int64_t k, const PrimeTable& table)
{
    if (t > static_cast<double>(table.limit)) throw capacity_error("psi_k: t beyond sieve limit");
    const bool k_odd = (k % 2) != 0;
    double sum = 0.0, comp = 0.0;
    for (std::uint64_t p : table.primes_3mod4) {
        const double dp = static_cast<double>(p);
        if (dp > t) break;
        const double lp = std::log(dp);
        double pn = dp;
        for (int n = 1; pn <= t; ++n, pn *= dp) {
            const double term = (k_odd && (n % 2 == 1)) ? -lp : lp;
            const double y = term - comp;
            const double s = sum + y;
            comp = (s - sum) - y;
            sum = s;
        }
    }
    return k_odd ? -sum : sum;
}

namespace {

using quad = __float128;

// f(x) = (log x)^n / x; f^(k)(x) = sum_i c[k][i] (log x)^i / x^{k+1}.
std::vector<std::vector<quad>> derivative_coeffs(int n, int kmax)
{
    std::vector<std::vector<quad>> c(kmax + 1, std::vector<quad>(n + 1, 0));
    c[0][n] = 1;
    for (int k = 0; k < kmax; ++k)
        for (int i = 0; i <= n; ++i) {
            quad v = -static_cast<quad>(k + 1) * c[k][i];
            if (i + 1 <= n) v += static_cast<quad>(i + 1) * c[k][i + 1];
            c[k + 1][i] = v;
        }
    return c;
}

// Corrections through B_20. A small N keeps the partial sums (~ (log N)^{n+1}) far from
// the float128 cancellation floor; the high order keeps the remainder negligible.
constexpr int kEulerMaclaurinOrder = 10;
const quad kBernoulli[kEulerMaclaurinOrder + 1] = {
    0,
    (quad)1 / 6,
    -(quad)1 / 30,
    (quad)1 / 42,
    -(quad)1 / 30,
    (quad)5 / 66,
    -(quad)691 / 2730,
    (quad)7 / 6,
    -(quad)3617 / 510,
    (quad)43867 / 798,
    -(quad)174611 / 330,
};

quad zeta_even(int s)
{
    quad z = 0;
    for (int k = 200; k >= 1; --k) z += powq(static_cast<quad>(k), -s);
    return z;
}

quad factorial_q(int n)
{
    quad r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

struct Tail {
    quad value;
    quad bound;
};

// Contribution of j >= J for g(j) = f(q j + a), x0 = qJ + a, minus (log x0)^{n+1}/(q(n+1)).
Tail euler_maclaurin_tail(int n, quad x0, int q, const std::vector<std::vector<quad>>& c)
{
    const quad L = logq(x0);
    auto fderiv = [&](int k) {
        quad s = 0, Lp = 1;
        for (int i = 0; i <= n; ++i) {
            s += c[k][i] * Lp;
            Lp *= L;
        }
        return s / powq(x0, k + 1);
    };
    quad v = -powq(L, n + 1) / (static_cast<quad>(q) * (n + 1)) + fderiv(0) / 2;
    for (int r = 1; r <= kEulerMaclaurinOrder; ++r)
        v -= kBernoulli[r] / factorial_q(2 * r) * powq(static_cast<quad>(q), 2 * r - 1) * fderiv(2 * r - 1);

    // |R| <= 2 zeta(2R)/(2 pi)^{2R} * q^{2R-1} * int_{x0}^inf |f^{(2R)}|
    const int s = 2 * kEulerMaclaurinOrder;
    quad integral = 0;
    for (int i = 0; i <= n; ++i) {
        if (c[s][i] == 0) continue;
        // int_{x0}^inf (log x)^i x^{-(s+1)} dx = x0^{-s} sum_l i!/l! L^l / s^{i-l+1}
        quad acc = 0;
        for (int l = 0; l <= i; ++l)
            acc += factorial_q(i) / factorial_q(l) * powq(L, l) / powq(static_cast<quad>(s), i - l + 1);
        integral += fabsq(c[s][i]) * acc / powq(x0, s);
    }
    const quad bound = 2 * zeta_even(s) / powq(2 * M_PIq, s) * powq(static_cast<quad>(q), s - 1) * integral;
    return {v, bound};
}

}  // namespace

EulerConstantsTable compute_euler_constants(int J, std::uint64_t N)
{
    if (J < 0 || J > kMaxStieltjesIndex) throw invalid_input("compute_euler_constants: J out of range");
    if (N < 64 || N % 8 != 0) throw invalid_input("compute_euler_constants: N must be a multiple of 8, >= 64");
    constexpr int q = 4;
    const std::uint64_t cut[2] = {N / 2, N};

    // sums[c][a][n]: class a (index 1..4) direct sums at cut c; total[c][n]: all m <= cut-1
    std::vector<std::vector<std::vector<quad>>> sums(2, std::vector<std::vector<quad>>(q + 1, std::vector<quad>(J + 1, 0)));
    std::vector<std::vector<quad>> total(2, std::vector<quad>(J + 1, 0));
    // Kahan-compensated running sums; the partial sums reach ~1e22 for n = 20.
    std::vector<std::vector<quad>> run_class(q + 1, std::vector<quad>(J + 1, 0));
    std::vector<std::vector<quad>> comp_class(q + 1, std::vector<quad>(J + 1, 0));
    std::vector<quad> run_total(J + 1, 0), comp_total(J + 1, 0);
    auto kahan = [](quad& sum, quad& comp, quad v) {
        const quad y = v - comp;
        const quad t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    };

    for (std::uint64_t m = 1; m <= N; ++m) {
        const quad L = logq(static_cast<quad>(m));
        const int a = static_cast<int>((m - 1) % q) + 1;
        quad term = 1 / static_cast<quad>(m);
        for (int n = 0; n <= J; ++n) {
            kahan(run_class[a][n], comp_class[a][n], term);
            kahan(run_total[n], comp_total[n], term);
            term *= L;
        }
        for (int c = 0; c < 2; ++c) {
            // class a with J_a = cut/q terms ends at m = cut - q + a
            if (m + q > cut[c] && m <= cut[c]) sums[c][a] = run_class[a];
            if (m + 1 == cut[c]) total[c] = run_total;
        }
    }

    EulerConstantsTable t;
    t.J = J;
    t.N = N;
    t.gamma.assign(J + 1, 0);
    t.gamma_a4.assign(J + 1, {0, 0, 0, 0, 0});
    t.gamma_chi4.assign(J + 1, 0);
    t.remainder_bound.assign(J + 1, 0);
    t.stability.assign(J + 1, 0);
    t.rounding_scale.assign(J + 1, 0);

    for (int n = 0; n <= J; ++n) {
        const auto c = derivative_coeffs(n, 2 * kEulerMaclaurinOrder);
        quad value[2][q + 1];
        quad gamma_n[2];
        quad worst_bound = 0;
        for (int cc = 0; cc < 2; ++cc) {
            for (int a = 1; a <= q; ++a) {
                const quad x0 = static_cast<quad>(cut[cc]) + a;  // q * (cut/q) + a
                Tail tail = euler_maclaurin_tail(n, x0, q, c);
                value[cc][a] = sums[cc][a][n] + tail.value;
                if (cc == 1) worst_bound = fmaxq(worst_bound, tail.bound);
            }
            Tail tail = euler_maclaurin_tail(n, static_cast<quad>(cut[cc]), 1, c);
            gamma_n[cc] = total[cc][n] + tail.value;
            if (cc == 1) worst_bound = fmaxq(worst_bound, tail.bound);
        }
        quad stab = fabsq(gamma_n[1] - gamma_n[0]);
        for (int a = 1; a <= q; ++a) {
            t.gamma_a4[n][a] = static_cast<double>(value[1][a]);
            stab = fmaxq(stab, fabsq(value[1][a] - value[0][a]));
        }
        t.gamma[n] = static_cast<double>(gamma_n[1]);
        t.gamma_chi4[n] = static_cast<double>(value[1][1] - value[1][3]);
        t.remainder_bound[n] = static_cast<double>(worst_bound);
        t.stability[n] = static_cast<double>(stab);
        t.rounding_scale[n] = static_cast<double>(FLT128_EPSILON * powq(logq(static_cast<quad>(N)), n + 1));
    }
    return t;
}

const EulerConstantsTable& euler_constants()
{
    static const EulerConstantsTable table = compute_euler_constants(kMaxStieltjesIndex, kEulerMaclaurinCutoff);
    return table;
}

double stieltjes_gamma(int n)
{
    if (n < 0 || n > kMaxStieltjesIndex) throw invalid_input("stieltjes_gamma: n out of range");
    return euler_constants().gamma[n];
}

double gen_euler_gamma(int n, int a, int q)
{
    if (q != 4) throw invalid_input("gen_euler_gamma: only q = 4 is supported");
    if (a < 1 || a > 4) throw invalid_input("gen_euler_gamma: residue must lie in 1..4");
    if (n < 0 || n > kMaxStieltjesIndex) throw invalid_input("gen_euler_gamma: n out of range");
    return euler_constants().gamma_a4[n][a];
}

}  // namespace cmhecke
