#pragma once

#include "cmhecke/errors.hpp"
#include "cmhecke/primes.hpp"
#include "cmhecke/zi.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

namespace cmhecke {

struct Interval {
    double center = 0.0;
    double radius = 0.0;
    double lo() const { return center - radius; }
    double hi() const { return center + radius; }
};

// Li_{-j}(z) = P_j(z) / (1 - z)^{j+1}; coeffs[i] multiplies z^i.
struct PolyFraction {
    int j = 0;
    std::vector<i128> coeffs;
};

inline constexpr int kMaxPolylogOrder = 30;
PolyFraction polylog_numerator(int j);
double polylog_neg(int j, double z);
long double polylog_neg_ld(int j, long double z);

// Partial exponential Bell polynomial B_{n,k}(x_1, ..., x_{n-k+1}); xs[0] is x_1.
template <class T>
T bell_partial(int n, int k, const std::vector<T>& xs)
{
    if (n < 0 || k < 0 || k > n) throw invalid_input("bell_partial: need 0 <= k <= n");
    if (n == 0) return T(1);
    if (k == 0) return T(0);
    if (static_cast<int>(xs.size()) < n - k + 1) throw invalid_input("bell_partial: too few arguments");
    // binom[a][b] for a < n
    std::vector<std::vector<long long>> binom(n, std::vector<long long>(n, 0));
    for (int a = 0; a < n; ++a) {
        binom[a][0] = 1;
        for (int b = 1; b <= a; ++b) binom[a][b] = binom[a - 1][b - 1] + (b <= a - 1 ? binom[a - 1][b] : 0);
    }
    std::vector<std::vector<T>> B(n + 1, std::vector<T>(k + 1, T(0)));
    B[0][0] = T(1);
    for (int m = 1; m <= n; ++m) {
        for (int kk = 1; kk <= std::min(m, k); ++kk) {
            T s(0);
            for (int i = 1; i <= m - kk + 1; ++i) {
                if (B[m - i][kk - 1] == T(0)) continue;
                s += T(binom[m - 1][i - 1]) * xs[i - 1] * B[m - i][kk - 1];
            }
            B[m][kk] = s;
        }
    }
    return B[n][k];
}

inline constexpr int kMaxConstantsIndex = 10;

double log_deriv_zeta_part(int j);  // (f'/f)^{(j)}(1), f(s) = (s-1) zeta(s)
double log_deriv_L4(int j);         // (L'/L)^{(j)}(1, chi_4)
double b_term(int j);               // (-1)^j / j! * (difference of the two above)
double a_term(int j);               // dyadic part of c_j(1, 0)

struct TailedSum {
    double value = 0.0;       // truncated sum over p <= cutoff
    double tail_bound = 0.0;  // bound for the omitted p > cutoff (non-negative terms)
    std::uint64_t cutoff = 0;
    Interval as_interval() const { return {value + 0.5 * tail_bound, 0.5 * tail_bound}; }
};

// T_j[x] = 2^{j+1}/j! sum_{p = 3 mod 4, p <= x} (log p)^{j+1} Li_{-j}(p^{-2}).
TailedSum zeta43_logderiv(int j, std::uint64_t x, const PrimeTable& table);

double c_ram(int j, int alpha);
double c_inert_d(int j, int alpha, std::int64_t d);
Interval c_inert_closed(int j, int alpha, const PrimeTable& table, std::uint64_t x);
double c_inert_integral(int j, int alpha, double T, const PrimeTable& table);
Interval c_total(int j, std::int64_t d, int alpha, const PrimeTable& table, std::uint64_t x);

// (m-1)! sum_{j even <= m-1} c_j phi_hat^{(j)}(0) / j!; c[j] and fhat_derivs[j] indexed by j.
Interval big_C_m(int m, const std::vector<Interval>& c, const std::vector<double>& fhat_derivs);

struct ConstantsReport {
    std::int64_t d = 1;
    int alpha = 8;
    int J = 0;
    std::uint64_t x = 0;
    std::vector<double> ram, inert_d;
    std::vector<Interval> inert, total;
    std::vector<TailedSum> T;
    std::vector<double> A, B, zeta_part, L4_part;
    std::vector<Interval> C;  // C[m-1] = C_m, present only with test-function data
};

ConstantsReport constants_report(std::int64_t d, int alpha, int J, std::uint64_t x, const PrimeTable& table,
                                 const std::optional<std::vector<double>>& fhat_derivs = std::nullopt);

}  // namespace cmhecke
