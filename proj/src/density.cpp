#include "cmhecke/density.hpp"

#include "cmhecke/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

namespace cmhecke {

namespace {

double factorial(int n)
{
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

double binom(int n, int k)
{
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

int norm_alpha(int alpha)
{
    const int a = static_cast<int>(mod_pos(alpha, 8));
    return a == 0 ? 8 : a;
}

// Fixed-shape pairwise sum: result depends only on the input order.
double pairwise_sum(const double* v, std::size_t n)
{
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

}  // namespace

TestFunction TestFunction::fejer(double nu)
{
    if (!(nu > 0.0 && nu < 1.0)) throw invalid_input("TestFunction: support radius must lie in (0, 1)");
    return TestFunction(TestFamily::Fejer, nu, 0);
}

TestFunction TestFunction::polybump(double nu, int m)
{
    if (!(nu > 0.0 && nu < 1.0)) throw invalid_input("TestFunction: support radius must lie in (0, 1)");
    if (m < 1 || m > 40) throw invalid_input("TestFunction: polybump exponent must lie in 1..40");
    return TestFunction(TestFamily::PolyBump, nu, m);
}

TestFunction TestFunction::scaled(double c) const
{
    TestFunction f = *this;
    f.scale_ *= c;
    return f;
}

std::string TestFunction::describe() const
{
    std::ostringstream os;
    os.precision(17);
    if (family_ == TestFamily::Fejer)
        os << "fejer(nu=" << nu_ << ")";
    else
        os << "polybump(nu=" << nu_ << ",m=" << m_ << ")";
    if (scale_ != 1.0) os << "*" << scale_;
    return os.str();
}

double TestFunction::fhat(double t) const
{
    const double a = std::fabs(t);
    if (a >= nu_) return 0.0;
    if (family_ == TestFamily::Fejer) return scale_ * (nu_ - a) / (nu_ * nu_);
    const double u = t / nu_;
    return scale_ * std::pow(1.0 - u * u, m_);
}

double TestFunction::fhat_deriv0(int j) const
{
    if (j < 0) throw invalid_input("fhat_deriv0: negative order");
    if (j % 2 == 1) return 0.0;
    if (family_ == TestFamily::Fejer) {
        if (j == 0) return scale_ / nu_;
        throw invalid_input("fhat_deriv0: Fejer transform is not differentiable at 0");
    }
    const int i = j / 2;
    if (i > m_) return 0.0;
    return scale_ * (i % 2 == 0 ? 1.0 : -1.0) * factorial(j) * binom(m_, i) * std::pow(nu_, -j);
}

std::vector<double> TestFunction::fhat_derivs(int count) const
{
    std::vector<double> out(static_cast<std::size_t>(count > 0 ? count : 0), 0.0);
    for (int j = 0; j < count; ++j) out[j] = fhat_deriv0(j);
    return out;
}

double TestFunction::fhat_integral() const
{
    if (family_ == TestFamily::Fejer) return scale_;
    // int_{-1}^{1} (1 - u^2)^m du = 2^{2m+1} (m!)^2 / (2m+1)!
    return scale_ * nu_ * std::pow(2.0, 2 * m_ + 1) * factorial(m_) * factorial(m_) / factorial(2 * m_ + 1);
}

double TestFunction::phi(double tau) const
{
    const double w = 2.0 * std::numbers::pi * tau;
    const int panels = std::max(1, static_cast<int>(std::ceil(2.0 * nu_ * std::fabs(tau))));
    const double h = nu_ / panels;
    auto integrand = [&](double t) { return fhat(t) * std::cos(w * t); };
    double s = 0.0;
    for (int i = 0; i < panels; ++i)
        s += boost::math::quadrature::gauss<double, 20>::integrate(integrand, i * h, (i + 1) * h);
    return 2.0 * s;
}

std::complex<double> digamma(std::complex<double> z)
{
    if (!(z.real() > 0.0)) throw invalid_input("digamma: argument must have positive real part");
    std::complex<double> shift = 0.0;
    while (z.real() < 12.0 || std::abs(z) < 12.0) {
        shift -= 1.0 / z;
        z += 1.0;
    }
    static constexpr double b2n[8] = {1.0 / 6,   -1.0 / 30,       1.0 / 42, -1.0 / 30,
                                      5.0 / 66,  -691.0 / 2730,   7.0 / 6,  -3617.0 / 510};
    const std::complex<double> iz2 = 1.0 / (z * z);
    std::complex<double> series = 0.0, pw = iz2;
    for (int n = 1; n <= 8; ++n) {
        series += b2n[n - 1] / (2.0 * n) * pw;
        pw *= iz2;
    }
    return shift + std::log(z) - 0.5 / z - series;
}

double log_kM(std::int64_t d, std::int64_t k)
{
    return std::log(static_cast<double>(k) * analytic_M(d, k));
}

double u_gamma(std::int64_t d, std::int64_t k, const TestFunction& f)
{
    if (k < 1) throw invalid_input("u_gamma: k must be positive");
    const double N = static_cast<double>(conductor(d, k).norm);
    const double L = std::log(static_cast<double>(k) * static_cast<double>(k) * N);
    const double a = 0.5 * static_cast<double>(k + 1);
    const double f0 = f.fhat(0.0);

    // Re psi(a + iy) - psi(a) = int_0^inf e^{-at} (1 - cos yt) / (1 - e^{-t}) dt, then
    // integrate against phi(tau) in tau: the cosine becomes phi_hat(t / L).
    const double cut = f.nu() * L;
    auto h = [&](double t) {
        if (t <= 0.0) return f.family() == TestFamily::Fejer ? f.scale() / (L * f.nu() * f.nu()) : 0.0;
        return std::exp(-a * t) * (f0 - f.fhat(t / L)) / (-std::expm1(-t));
    };
    double inner = 0.0;
    double lo = 0.0;
    for (double hi = std::min(cut, 0.5 / a);; hi = std::min(cut, 2.0 * hi)) {
        inner += boost::math::quadrature::gauss<double, 30>::integrate(h, lo, hi);
        lo = hi;
        if (hi >= cut || a * hi > 800.0) break;
    }
    // beyond the support: f0 * sum_n e^{-(a+n) cut} / (a+n)
    double tail = 0.0;
    for (int n = 0; n < 100000; ++n) {
        const double term = std::exp(-(a + n) * cut) / (a + n);
        tail += term;
        if (term < 1e-18 * (tail + 1e-300)) break;
    }
    inner += f0 * tail;

    const double psi_a = digamma({a, 0.0}).real();
    return ((std::log(N) - 2.0 * std::log(std::numbers::pi) + 2.0 * psi_a) * f0 + 2.0 * inner) / L;
}

double u_gamma_direct(std::int64_t d, std::int64_t k, const TestFunction& f)
{
    if (k < 1) throw invalid_input("u_gamma_direct: k must be positive");
    const double N = static_cast<double>(conductor(d, k).norm);
    const double L = std::log(static_cast<double>(k) * static_cast<double>(k) * N);
    const double a = 0.5 * static_cast<double>(k + 1);
    const double c0 = std::log(N) - 2.0 * std::log(std::numbers::pi);
    auto integrand = [&](double tau) {
        const double g = c0 + 2.0 * digamma({a, 2.0 * std::numbers::pi * tau / L}).real();
        return g * f.phi(tau);
    };
    const double width = 0.5 / f.nu();
    double total = 0.0;
    int quiet = 0;
    for (int i = 0; i < 4000 && quiet < 8; ++i) {
        const double piece =
            boost::math::quadrature::gauss<double, 20>::integrate(integrand, i * width, (i + 1) * width);
        total += piece;
        quiet = std::fabs(piece) < 1e-13 * std::fabs(total) ? quiet + 1 : 0;
    }
    return 2.0 * total / L;
}

double u_ram(std::int64_t d, std::int64_t k, const TestFunction& f)
{
    if (k < 1) throw invalid_input("u_ram: k must be positive");
    if (k % 4 != 0) return 0.0;
    const double L = log_kM(d, k);
    const double l2 = std::numbers::ln2;
    double s = 0.0;
    for (int n = 1;; ++n) {
        const double t = n * l2 / (2.0 * L);
        if (t >= f.nu()) break;
        const double sign = ((k / 4) * n) % 2 == 0 ? 1.0 : -1.0;
        s += sign * l2 * std::pow(2.0, -0.5 * n) * f.fhat(t);
    }
    return -s / L;
}

double u_inert(std::int64_t d, std::int64_t k, const TestFunction& f, const PrimeTable& table)
{
    if (k < 1) throw invalid_input("u_inert: k must be positive");
    const double L = log_kM(d, k);
    const double X = std::exp(f.nu() * L);
    if (X >= static_cast<double>(table.limit)) throw capacity_error("u_inert: sieve does not cover (kM)^nu");
    const bool skip_d = k % 4 != 0;
    double s = 0.0, comp = 0.0;
    for (std::uint64_t up : table.primes_3mod4) {
        const double p = static_cast<double>(up);
        if (p > X) break;
        if (skip_d && d % static_cast<std::int64_t>(up) == 0) continue;
        const double lp = std::log(p);
        double pn = p;
        for (int n = 1; pn <= X; ++n, pn *= p) {
            const double sign = (k % 2 != 0 && n % 2 != 0) ? -1.0 : 1.0;
            const double y = 2.0 * sign * lp / pn * f.fhat(n * lp / L) - comp;
            const double t = s + y;
            comp = (t - s) - y;
            s = t;
        }
    }
    return -s / L;
}

double u_split(std::int64_t d, std::int64_t k, const TestFunction& f, const AngleTable& angles)
{
    if (k < 1) throw invalid_input("u_split: k must be positive");
    if (angles.d != d) throw invalid_input("u_split: angle table built for a different d");
    const double L = log_kM(d, k);
    const double X = std::exp(2.0 * f.nu() * L);
    if (X >= static_cast<double>(angles.limit)) throw capacity_error("u_split: angle table does not cover (kM)^{2nu}");
    const bool ramified_allowed = k % 4 == 0;
    double s = 0.0, comp = 0.0;
    for (const AngleEntry& e : angles.entries) {
        const double p = static_cast<double>(e.p);
        if (p > X) break;
        if (e.divides_d && !ramified_allowed) continue;
        const double lp = std::log(p);
        double pn = p;
        for (int n = 1; pn <= X; ++n, pn *= p) {
            const double y = 2.0 * std::cos(static_cast<double>(k) * n * e.theta) * lp / std::sqrt(pn) *
                                 f.fhat(n * lp / (2.0 * L)) -
                             comp;
            const double t = s + y;
            comp = (t - s) - y;
            s = t;
        }
    }
    return -s / L;
}

double one_level(std::int64_t d, std::int64_t k, const TestFunction& f, const PrimeTable& table,
                 const AngleTable& angles)
{
    return u_gamma(d, k, f) + u_ram(d, k, f) + u_inert(d, k, f, table) + u_split(d, k, f, angles);
}

double dirichlet_kernel_8(std::int64_t K, int alpha, double x)
{
    const int a = norm_alpha(alpha);
    if (K < a) return 0.0;
    const std::int64_t last = (K - a) / 8;  // number of terms - 1
    const double s4 = std::sin(4.0 * x);
    if (std::fabs(s4) < 1e-6) {
        double s = 0.0;
        for (std::int64_t l = 0; l <= last; ++l) s += 2.0 * std::cos(static_cast<double>(8 * l + a) * x);
        return s;
    }
    return (std::sin(static_cast<double>(8 * last + a + 4) * x) - std::sin((a - 4) * x)) / s4;
}

DensityTables make_density_tables(std::int64_t d, std::int64_t Kmax, double nu, std::uint64_t constants_x)
{
    require_odd_squarefree(d, "make_density_tables");
    if (Kmax < 1) throw invalid_input("make_density_tables: Kmax must be positive");
    const double Mmax = 4.0 * static_cast<double>(d < 0 ? -d : d);
    const double X = std::pow(static_cast<double>(Kmax) * Mmax, 2.0 * nu);
    if (X > 1e9) throw capacity_error("make_density_tables: (K M)^{2 nu} exceeds the sieve cap");
    const auto angle_limit = static_cast<std::uint64_t>(X) + 2;
    DensityTables t;
    t.d = d;
    t.constants_x = constants_x;
    t.primes = sieve_cached(std::max(angle_limit, constants_x));
    t.angles = build_angle_table(d, t.primes, angle_limit);
    return t;
}

namespace {

// -(8/K)-free kernel-mode split sum: sum over k = alpha mod 8, k <= K of u_split(d, k).
double split_sum_kernel(std::int64_t d, int alpha, std::int64_t K, const TestFunction& f, const AngleTable& angles)
{
    const std::int64_t count = K >= alpha ? (K - alpha) / 8 + 1 : 0;
    if (count == 0) return 0.0;
    const double M = analytic_M(d, alpha);
    const double X = std::pow(static_cast<double>(K) * M, 2.0 * f.nu());
    if (X >= static_cast<double>(angles.limit)) throw capacity_error("averaged_density: angle table too small");
    const bool ramified_allowed = alpha % 4 == 0;

    std::vector<double> Lk(static_cast<std::size_t>(count));
    for (std::int64_t l = 0; l < count; ++l) Lk[l] = std::log(static_cast<double>(alpha + 8 * l) * M);

    double total = 0.0;
    std::vector<double> w(static_cast<std::size_t>(count));
    for (const AngleEntry& e : angles.entries) {
        const double p = static_cast<double>(e.p);
        if (p > X) break;
        if (e.divides_d && !ramified_allowed) continue;
        const double lp = std::log(p);
        double pn = p;
        for (int n = 1; pn <= X; ++n, pn *= p) {
            const double c = 0.5 * n * lp;
            // first index where the weight can be nonzero
            std::int64_t l1 = 0;
            const double kthr = std::exp(c / f.nu()) / M;
            if (kthr > alpha) l1 = std::max<std::int64_t>(0, static_cast<std::int64_t>((kthr - alpha) / 8.0) - 1);
            if (l1 >= count) continue;
            for (std::int64_t l = l1; l < count; ++l) w[l] = f.fhat(c / Lk[l]) / Lk[l];
            const double x = n * e.theta;
            // sum_{l >= l1} a_l w_l with a_l = A_l - A_{l-1}, A_l = D_{k_l}(x)
            const std::int64_t kl1 = alpha + 8 * l1;
            double s = dirichlet_kernel_8(alpha + 8 * (count - 1), alpha, x) * w[count - 1] -
                       dirichlet_kernel_8(kl1 - 8, alpha, x) * w[l1];
            for (std::int64_t l = l1; l + 1 < count; ++l)
                s -= dirichlet_kernel_8(alpha + 8 * l, alpha, x) * (w[l + 1] - w[l]);
            total -= lp / std::sqrt(pn) * s;
        }
    }
    return total;
}

}  // namespace

Prediction prediction_detail(std::int64_t d, int alpha, std::int64_t K, const TestFunction& f, int J,
                             const PrimeTable& table, std::uint64_t x)
{
    require_odd_squarefree(d, "prediction");
    if (K < 1) throw invalid_input("prediction: K must be positive");
    if (J < 0 || J > kMaxConstantsIndex + 1) throw invalid_input("prediction: J out of range");
    const int a = norm_alpha(alpha);
    Prediction p;
    const double half = 0.5 * f.fhat_integral();
    p.main_term = f.fhat(0.0) + (a % 2 == 0 ? -half : half);
    p.value = p.main_term;
    if (J == 0) return p;
    std::vector<Interval> c;
    for (int j = 0; j < J; ++j) c.push_back(j % 2 == 0 ? c_total(j, d, a, table, x) : Interval{});
    const std::vector<double> derivs = f.fhat_derivs(J);
    const double L = std::log(static_cast<double>(K) * analytic_M(d, a));
    for (int m = 1; m <= J; ++m) {
        const Interval Cm = big_C_m(m, c, derivs);
        const double Lm = std::pow(L, m);
        p.lower_order.push_back(Cm.center / Lm);
        p.radius += Cm.radius / Lm;
        p.value += Cm.center / Lm;
    }
    return p;
}

double prediction(std::int64_t d, int alpha, std::int64_t K, const TestFunction& f, int J, const PrimeTable& table,
                  std::uint64_t x)
{
    return prediction_detail(d, alpha, K, f, J, table, x).value;
}

DensityReport averaged_density(std::int64_t d, int alpha, std::int64_t K, const TestFunction& f, DensityMode mode,
                               int J, const DensityTables& tables, unsigned threads)
{
    require_odd_squarefree(d, "averaged_density");
    if (tables.d != d) throw invalid_input("averaged_density: tables built for a different d");
    if (K < 1) throw invalid_input("averaged_density: K must be positive");
    const int a = norm_alpha(alpha);
    DensityReport r;
    r.d = d;
    r.alpha = a;
    r.K = K;
    r.J = J;
    r.mode = mode;
    r.count = K >= a ? (K - a) / 8 + 1 : 0;

    const auto n = static_cast<std::size_t>(r.count);
    std::vector<double> g(n), ram(n), inert(n), split(n);
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const std::int64_t k = a + 8 * static_cast<std::int64_t>(i);
            g[i] = u_gamma(d, k, f);
            ram[i] = u_ram(d, k, f);
            inert[i] = u_inert(d, k, f, tables.primes);
            if (mode == DensityMode::Exact) split[i] = u_split(d, k, f, tables.angles);
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        work(0, n);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t b = std::min(n, t * chunk), e = std::min(n, b + chunk);
            pool.emplace_back(work, b, e);
        }
        for (auto& th : pool) th.join();
    }

    const double norm = 8.0 / static_cast<double>(K);
    r.gamma_avg = norm * pairwise_sum(g);
    r.ram_avg = norm * pairwise_sum(ram);
    r.inert_avg = norm * pairwise_sum(inert);
    r.split_term = norm * (mode == DensityMode::Exact ? pairwise_sum(split)
                                                      : split_sum_kernel(d, a, K, f, tables.angles));
    r.measured = r.gamma_avg + r.ram_avg + r.inert_avg + r.split_term;

    const Prediction p = prediction_detail(d, a, K, f, J, tables.primes, tables.constants_x);
    r.main_term = p.main_term;
    r.lower_order = p.lower_order;
    r.lower_order_radius = p.radius;
    r.prediction = p.value;
    r.prediction_by_J.push_back(p.main_term);
    for (double v : p.lower_order) r.prediction_by_J.push_back(r.prediction_by_J.back() + v);
    r.residual = r.measured - r.prediction;
    return r;
}

double katz_sarnak_density(SymmetryGroup G, const TestFunction& f)
{
    // eta = 1 on (-1, 1) contains the support, so int eta phi_hat = int phi_hat = phi(0).
    const double f0 = f.fhat(0.0);
    const double eta_int = f.fhat_integral();
    const double one_int = f.fhat_integral();
    switch (G) {
        case SymmetryGroup::U: return f0;
        case SymmetryGroup::Sp: return f0 - 0.5 * eta_int;
        case SymmetryGroup::SOeven: return f0 + 0.5 * eta_int;
        case SymmetryGroup::SOodd: return f0 + one_int - 0.5 * eta_int;
    }
    throw invalid_input("katz_sarnak_density: unknown group");
}

double nonvanishing_lower_bound(NonvanishingCase c, double nu)
{
    if (!(nu > 0.0 && nu < 1.0)) throw invalid_input("nonvanishing_lower_bound: nu must lie in (0, 1)");
    return nonvanishing_formula(c, nu);
}

}  // namespace cmhecke
