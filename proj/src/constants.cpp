#include "cmhecke/constants.hpp"

#include "cmhecke/hecke.hpp"

#include <cmath>
#include <numbers>

namespace cmhecke {

namespace {

double factorial(int n)
{
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

int norm_alpha(int alpha)
{
    const int a = static_cast<int>(mod_pos(alpha, 8));
    return a == 0 ? 8 : a;
}

void require_j(int j, const char* where)
{
    if (j < 0 || j > kMaxConstantsIndex) throw invalid_input(std::string(where) + ": j out of range");
}

}  // namespace

PolyFraction polylog_numerator(int j)
{
    if (j < 0 || j > kMaxPolylogOrder) throw invalid_input("polylog_numerator: order out of range");
    std::vector<i128> c = {0, 1};  // P_0 = z
    for (int s = 0; s < j; ++s) {
        std::vector<i128> next(c.size() + 1, 0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            i128 v = 0, t = 0;
            if (i + 1 < c.size() && __builtin_mul_overflow(static_cast<i128>(i + 1), c[i + 1], &v))
                throw capacity_error("polylog_numerator: coefficient overflow");
            if (__builtin_mul_overflow(static_cast<i128>(s + 1) - static_cast<i128>(i), c[i], &t) ||
                __builtin_add_overflow(v, t, &v))
                throw capacity_error("polylog_numerator: coefficient overflow");
            next[i + 1] = v;
        }
        while (next.size() > 1 && next.back() == 0) next.pop_back();
        c = std::move(next);
    }
    return {j, c};
}

long double polylog_neg_ld(int j, long double z)
{
    if (!(std::fabs(z) < 1.0L)) throw invalid_input("polylog_neg: |z| must be < 1");
    static std::vector<PolyFraction> cache = [] {
        std::vector<PolyFraction> v;
        for (int i = 0; i <= kMaxPolylogOrder; ++i) v.push_back(polylog_numerator(i));
        return v;
    }();
    if (j < 0 || j > kMaxPolylogOrder) throw invalid_input("polylog_neg: order out of range");
    const auto& c = cache[static_cast<std::size_t>(j)].coeffs;
    long double p = 0.0L;
    for (std::size_t i = c.size(); i-- > 0;) p = p * z + static_cast<long double>(c[i]);
    return p / std::pow(1.0L - z, static_cast<long double>(j + 1));
}

double polylog_neg(int j, double z) { return static_cast<double>(polylog_neg_ld(j, z)); }

double log_deriv_zeta_part(int j)
{
    require_j(j, "log_deriv_zeta_part");
    const auto& E = euler_constants();
    std::vector<double> xs(static_cast<std::size_t>(j + 1));
    for (int l = 1; l <= j + 1; ++l) xs[l - 1] = l * ((l - 1) % 2 == 0 ? 1.0 : -1.0) * E.gamma[l - 1];
    double s = 0.0;
    for (int k = 1; k <= j + 1; ++k)
        s += ((k + 1) % 2 == 0 ? 1.0 : -1.0) * factorial(k - 1) * bell_partial(j + 1, k, xs);
    return s;
}

double log_deriv_L4(int j)
{
    require_j(j, "log_deriv_L4");
    const auto& E = euler_constants();
    std::vector<double> xs(static_cast<std::size_t>(j + 1));
    for (int l = 1; l <= j + 1; ++l) xs[l - 1] = (l % 2 == 0 ? 1.0 : -1.0) * E.gamma_chi4[l];
    const double L1 = std::numbers::pi / 4.0;
    double s = 0.0;
    for (int k = 1; k <= j + 1; ++k)
        s += ((k + 1) % 2 == 0 ? 1.0 : -1.0) * factorial(k - 1) * std::pow(L1, -k) * bell_partial(j + 1, k, xs);
    return s;
}

double b_term(int j)
{
    return (j % 2 == 0 ? 1.0 : -1.0) / factorial(j) * (log_deriv_zeta_part(j) - log_deriv_L4(j));
}

double a_term(int j)
{
    require_j(j, "a_term");
    const double l2 = std::numbers::ln2;
    double a = std::pow(l2, j + 1) / factorial(j) * polylog_neg(j, 0.5) -
               2.0 / factorial(j) * std::pow(l2 / 2.0, j + 1) * polylog_neg(j, 1.0 / std::numbers::sqrt2);
    if (j == 0) a -= std::log(2.0 * std::numbers::pi);
    return a;
}

TailedSum zeta43_logderiv(int j, std::uint64_t x, const PrimeTable& table)
{
    require_j(j, "zeta43_logderiv");
    if (x > table.limit) throw capacity_error("zeta43_logderiv: cutoff beyond sieve limit");
    const double lx = std::log(static_cast<double>(x));
    if (!(2.0 * lx > j + 1)) throw invalid_input("zeta43_logderiv: cutoff too small for the tail bound");
    const double pref = std::pow(2.0, j + 1) / factorial(j);
    long double s = 0.0L;
    for (std::uint64_t p : table.primes_3mod4) {
        if (p > x) break;
        const long double lp = std::log(static_cast<long double>(p));
        const long double pp = static_cast<long double>(p);
        s += std::pow(lp, static_cast<long double>(j + 1)) * polylog_neg_ld(j, 1.0L / (pp * pp));
    }
    TailedSum out;
    out.cutoff = x;
    out.value = pref * static_cast<double>(s);
    const double xd = static_cast<double>(x);
    double r = std::pow(lx, j + 1) / (xd * xd);
    for (int k = 0; k <= j + 1; ++k) r += std::pow(lx, k) / xd * factorial(j + 1) / factorial(k);
    out.tail_bound = pref * r;
    return out;
}

double c_ram(int j, int alpha)
{
    require_j(j, "c_ram");
    const int a = norm_alpha(alpha);
    if (a % 4 != 0) return 0.0;
    const double z = (a == 8 ? 1.0 : -1.0) / std::numbers::sqrt2;
    return -2.0 / factorial(j) * std::pow(std::numbers::ln2 / 2.0, j + 1) * polylog_neg(j, z);
}

double c_inert_d(int j, int alpha, std::int64_t d)
{
    require_j(j, "c_inert_d");
    require_odd_squarefree(d, "c_inert_d");
    const int a = norm_alpha(alpha);
    if (a % 4 == 0) return 0.0;
    const double sign = a % 2 == 0 ? 1.0 : -1.0;
    std::int64_t m = d < 0 ? -d : d;
    double s = 0.0;
    for (std::int64_t p = 3; p <= m; p += 2) {
        if (m % p != 0) continue;
        m /= p;
        if (p % 4 != 3) continue;
        const double lp = std::log(static_cast<double>(p));
        s += std::pow(lp, j + 1) * polylog_neg(j, sign / static_cast<double>(p));
    }
    return 2.0 / factorial(j) * s;
}

Interval c_inert_closed(int j, int alpha, const PrimeTable& table, std::uint64_t x)
{
    require_j(j, "c_inert_closed");
    const int a = norm_alpha(alpha);
    const double sign = a % 2 == 0 ? 1.0 : -1.0;
    const double dyadic = std::pow(std::numbers::ln2, j + 1) / factorial(j) * polylog_neg(j, 0.5);
    const Interval T = zeta43_logderiv(j, x, table).as_interval();
    return {sign * (b_term(j) + dyadic) - T.center, T.radius};
}

namespace {

// Polynomial helpers in u = log t; p[i] multiplies u^i.
using Poly = std::vector<double>;

Poly weight_poly(int j)
{
    if (j == 0) return {1.0};
    Poly w(static_cast<std::size_t>(j + 1), 0.0);
    w[j - 1] = 1.0 / factorial(j - 1);
    w[j] = -1.0 / factorial(j);
    return w;
}

double eval(const Poly& p, double u)
{
    double s = 0.0;
    for (std::size_t i = p.size(); i-- > 0;) s = s * u + p[i];
    return s;
}

// antiderivative of e^{-u} W(u): -e^{-u} (W + W' + W'' + ...)
double exp_antideriv(const Poly& w, double u)
{
    Poly acc = w, d = w;
    while (d.size() > 1) {
        Poly nd(d.size() - 1);
        for (std::size_t i = 1; i < d.size(); ++i) nd[i - 1] = static_cast<double>(i) * d[i];
        for (std::size_t i = 0; i < nd.size(); ++i) acc[i] += nd[i];
        d = std::move(nd);
    }
    return -std::exp(-u) * eval(acc, u);
}

double poly_antideriv(const Poly& w, double u)
{
    double s = 0.0;
    for (std::size_t i = w.size(); i-- > 0;) s = s * u + w[i] / static_cast<double>(i + 1);
    return s * u;
}

}  // namespace

double c_inert_integral(int j, int alpha, double T, const PrimeTable& table)
{
    require_j(j, "c_inert_integral");
    if (T < 1.0) throw invalid_input("c_inert_integral: T must be >= 1");
    if (T > static_cast<double>(table.limit)) throw capacity_error("c_inert_integral: T beyond sieve limit");
    const int a = norm_alpha(alpha);
    const bool odd = a % 2 != 0;

    struct Jump {
        double t;
        double dpsi;
    };
    std::vector<Jump> jumps;
    for (std::uint64_t p : table.primes_3mod4) {
        const double dp = static_cast<double>(p);
        if (dp > T) break;
        const double lp = std::log(dp);
        double pn = dp;
        for (int n = 1; pn <= T; ++n, pn *= dp) {
            // (-1)^k (-1)^{kn} log p
            const double s = (odd && n % 2 == 0) ? -1.0 : 1.0;
            jumps.push_back({pn, s * lp});
        }
    }
    std::sort(jumps.begin(), jumps.end(), [](const Jump& x, const Jump& y) { return x.t < y.t; });

    const Poly w = weight_poly(j);
    const double uT = std::log(T);
    double integral = 0.0, psi = 0.0;
    double lower = 0.0;  // u of the current interval start
    for (const Jump& jp : jumps) {
        const double u = std::log(jp.t);
        if (psi != 0.0) integral += psi * (exp_antideriv(w, u) - exp_antideriv(w, lower));
        psi += jp.dpsi;
        lower = u;
    }
    if (psi != 0.0) integral += psi * (exp_antideriv(w, uT) - exp_antideriv(w, lower));
    integral -= 0.5 * (poly_antideriv(w, uT) - poly_antideriv(w, 0.0));

    const double sign = odd ? -1.0 : 1.0;
    if (j == 0) return -sign * (1.0 + 2.0 * integral);
    return 2.0 * sign * integral;
}

Interval c_total(int j, std::int64_t d, int alpha, const PrimeTable& table, std::uint64_t x)
{
    const Interval inert = c_inert_closed(j, alpha, table, x);
    double c = c_ram(j, alpha) + c_inert_d(j, alpha, d) + inert.center;
    if (j == 0) c -= std::log(2.0 * std::numbers::pi);
    return {c, inert.radius};
}

Interval big_C_m(int m, const std::vector<Interval>& c, const std::vector<double>& fhat_derivs)
{
    if (m < 1) throw invalid_input("big_C_m: m must be positive");
    if (static_cast<int>(c.size()) < m || static_cast<int>(fhat_derivs.size()) < m)
        throw invalid_input("big_C_m: missing constants or derivative data");
    Interval out;
    for (int j = 0; j <= m - 1; j += 2) {
        const double w = fhat_derivs[j] / factorial(j);
        out.center += c[j].center * w;
        out.radius += c[j].radius * std::fabs(w);
    }
    out.center *= factorial(m - 1);
    out.radius *= factorial(m - 1);
    return out;
}

ConstantsReport constants_report(std::int64_t d, int alpha, int J, std::uint64_t x, const PrimeTable& table,
                                 const std::optional<std::vector<double>>& fhat_derivs)
{
    require_odd_squarefree(d, "constants_report");
    if (J < 0 || J > kMaxConstantsIndex) throw invalid_input("constants_report: J out of range");
    ConstantsReport r;
    r.d = d;
    r.alpha = norm_alpha(alpha);
    r.J = J;
    r.x = x;
    for (int j = 0; j <= J; ++j) {
        r.ram.push_back(c_ram(j, alpha));
        r.inert_d.push_back(c_inert_d(j, alpha, d));
        r.inert.push_back(c_inert_closed(j, alpha, table, x));
        r.total.push_back(c_total(j, d, alpha, table, x));
        r.T.push_back(zeta43_logderiv(j, x, table));
        r.A.push_back(a_term(j));
        r.B.push_back(b_term(j));
        r.zeta_part.push_back(log_deriv_zeta_part(j));
        r.L4_part.push_back(log_deriv_L4(j));
    }
    if (fhat_derivs)
        for (int m = 1; m <= J; ++m) r.C.push_back(big_C_m(m, r.total, *fhat_derivs));
    return r;
}

}  // namespace cmhecke
