#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cmhecke/density.hpp"
#include "cmhecke/errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace cmhecke;
using boost::multiprecision::cpp_rational;

namespace {

const double kPi = std::numbers::pi;

double inert_loop(std::int64_t k, const TestFunction& f, const PrimeTable& t, double L, std::uint64_t skip = 0)
{
    const double X = std::exp(f.nu() * L);
    double s = 0.0;
    for (std::uint64_t p : t.primes_3mod4) {
        if (static_cast<double>(p) > X) break;
        if (p == skip) continue;
        const double lp = std::log(static_cast<double>(p));
        for (int n = 1; std::pow(static_cast<double>(p), n) <= X; ++n) {
            const double sign = (k * n) % 2 == 0 ? 1.0 : -1.0;
            s += 2.0 * sign * lp / std::pow(static_cast<double>(p), n) * f.fhat(n * lp / L);
        }
    }
    return -s / L;
}

}  // namespace

TEST_CASE("test functions")
{
    CHECK_THROWS_AS(TestFunction::fejer(0.0), invalid_input);
    CHECK_THROWS_AS(TestFunction::fejer(1.0), invalid_input);
    CHECK_THROWS_AS(TestFunction::polybump(0.5, 0), invalid_input);

    const TestFunction fe = TestFunction::fejer(0.6), pb = TestFunction::polybump(0.4, 4);
    for (const TestFunction& f : {fe, pb}) {
        CHECK(f.fhat(f.nu()) == 0.0);
        CHECK(f.fhat(-f.nu() - 1e-9) == 0.0);
        CHECK(f.fhat(3.0) == 0.0);
        for (double t : {0.01, 0.1, 0.3, 0.39}) CHECK(f.fhat(t) == f.fhat(-t));
        CHECK(f.fhat_deriv0(1) == 0.0);
        CHECK(f.fhat_deriv0(3) == 0.0);
        CHECK(f.phi(0.0) == doctest::Approx(f.fhat_integral()).epsilon(1e-13));
    }
    CHECK(fe.fhat(0.0) == doctest::Approx(1.0 / 0.6));
    CHECK(fe.fhat_integral() == 1.0);
    CHECK_THROWS_AS(fe.fhat_deriv0(2), invalid_input);

    // polybump derivatives: (-1)^j (2j)! binom(m, j) nu^{-2j}
    CHECK(pb.fhat_deriv0(0) == 1.0);
    CHECK(pb.fhat_deriv0(2) == doctest::Approx(-2.0 * 4 / 0.16).epsilon(1e-14));
    CHECK(pb.fhat_deriv0(4) == doctest::Approx(24.0 * 6 / std::pow(0.4, 4)).epsilon(1e-14));
    CHECK(pb.fhat_deriv0(10) == 0.0);
    const double h = 1e-3;
    const double fd2 = (pb.fhat(h) - 2 * pb.fhat(0) + pb.fhat(-h)) / (h * h);
    CHECK(fd2 == doctest::Approx(pb.fhat_deriv0(2)).epsilon(1e-4));

    // integral of the bump by quadrature of fhat
    double q = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) q += pb.fhat(-0.4 + (i + 0.5) * 0.8 / n) * 0.8 / n;
    CHECK(pb.fhat_integral() == doctest::Approx(q).epsilon(1e-9));

    // Fejer kernel in position space
    for (double tau : {0.0, 0.3, 1.0, 2.7, 10.25, 40.0}) {
        const double x = kPi * 0.6 * tau;
        const double expect = tau == 0.0 ? 1.0 : std::pow(std::sin(x) / x, 2);
        CHECK(std::fabs(fe.phi(tau) - expect) < 1e-12);
    }

    const TestFunction s = pb.scaled(2.5);
    CHECK(s.fhat(0.1) == doctest::Approx(2.5 * pb.fhat(0.1)));
    CHECK(s.fhat_integral() == doctest::Approx(2.5 * pb.fhat_integral()));
}

TEST_CASE("digamma")
{
    const double g = 0.57721566490153286;
    CHECK(digamma({1.0, 0.0}).real() == doctest::Approx(-g).epsilon(1e-14));
    CHECK(digamma({0.5, 0.0}).real() == doctest::Approx(-g - 2 * std::numbers::ln2).epsilon(1e-14));
    for (double y : {0.1, 1.0, 3.7, 25.0, 400.0}) {
        const std::complex<double> z(1.0, y);
        CHECK(digamma(z).imag() == doctest::Approx(-0.5 / y + 0.5 * kPi / std::tanh(kPi * y)).epsilon(1e-12));
        const std::complex<double> w(2.3, y);
        const std::complex<double> rec = digamma(w + 1.0) - digamma(w) - 1.0 / w;
        CHECK(std::abs(rec) < 1e-13);
    }
    CHECK_THROWS_AS(digamma({-1.0, 0.0}), invalid_input);
}

TEST_CASE("gamma term against direct quadrature")
{
    const TestFunction f = TestFunction::polybump(0.4, 4);
    for (auto [d, k] : {std::pair<std::int64_t, std::int64_t>{1, 1}, {1, 8}, {1, 100}, {-3, 3}}) {
        CHECK(std::fabs(u_gamma(d, k, f) - u_gamma_direct(d, k, f)) < 1e-10);
    }
    const TestFunction g = TestFunction::polybump(0.9, 3);
    CHECK(std::fabs(u_gamma(5, 2, g) - u_gamma_direct(5, 2, g)) < 1e-10);
}

TEST_CASE("gamma term asymptotics")
{
    const TestFunction f = TestFunction::polybump(0.4, 4);
    const double L1000 = log_kM(1, 1000);
    CHECK(std::fabs(u_gamma(1, 1000, f) - (1.0 - std::log(2 * kPi) / L1000)) < 2e-3);
    for (std::int64_t k : {1, 2, 3, 4, 8, 16, 64, 256}) {
        const double L = log_kM(1, k);
        CHECK(std::fabs(u_gamma(1, k, f) - (1.0 - std::log(2 * kPi) / L)) <= 2.0 / (static_cast<double>(k) * L));
    }
    for (std::int64_t k : {1, 5, 12}) CHECK(u_gamma(3, k, f.scaled(3.0)) == doctest::Approx(3.0 * u_gamma(3, k, f)));
    CHECK_THROWS_AS(u_gamma(1, 0, f), invalid_input);
}

TEST_CASE("dyadic prime term")
{
    CHECK(u_ram(1, 3, TestFunction::polybump(0.9, 2)) == 0.0);
    CHECK(u_ram(1, 4, TestFunction::polybump(0.2, 2)) == 0.0);
    const TestFunction f = TestFunction::polybump(0.9, 2);
    for (std::int64_t k : {8, 12, 64}) {
        const double L = log_kM(1, k);
        double s = 0.0;
        for (int n = 1; n < 200; ++n) {
            const double sign = ((k / 4) * n) % 2 == 0 ? 1.0 : -1.0;
            s += sign * std::numbers::ln2 / std::pow(2.0, 0.5 * n) * f.fhat(n * std::numbers::ln2 / (2 * L));
        }
        CHECK(std::fabs(u_ram(1, k, f) + s / L) < 1e-14);
    }
}

TEST_CASE("inert prime term")
{
    const PrimeTable t = sieve(200000);
    CHECK(u_inert(1, 1, TestFunction::polybump(0.3, 2), t) == 0.0);

    const TestFunction f = TestFunction::polybump(0.8, 2);
    for (std::int64_t k : {2, 50, 333}) CHECK(std::fabs(u_inert(1, k, f, t) - inert_loop(k, f, t, log_kM(1, k))) < 1e-14);

    // p = 3 divides the conductor for odd k
    for (std::int64_t k : {1, 7, 99}) {
        const double L = log_kM(3, k);
        CHECK(std::fabs(u_inert(3, k, f, t) - inert_loop(k, f, t, L, 3)) < 1e-14);
        CHECK(u_inert(3, k, f, t) != doctest::Approx(inert_loop(k, f, t, L)));
    }
    CHECK_THROWS_AS(u_inert(1, 10000000, TestFunction::polybump(0.9, 2), t), capacity_error);
}

TEST_CASE("split prime term")
{
    const PrimeTable t = sieve(200000);
    const AngleTable full = build_angle_table(1, t);
    CHECK(u_split(1, 1, TestFunction::polybump(0.3, 2), full) == 0.0);

    const TestFunction f = TestFunction::polybump(0.9, 2);
    AngleTable one;
    one.d = 1;
    one.limit = 13;
    one.entries = {full.entries.front()};
    REQUIRE(one.entries[0].p == 5);
    const double L = log_kM(1, 4);
    const double th = one.entries[0].theta;
    const double expect = -2.0 * std::cos(4 * th) * std::log(5.0) / std::sqrt(5.0) * f.fhat(std::log(5.0) / (2 * L)) / L;
    CHECK(std::fabs(u_split(1, 4, f, one) - expect) < 1e-15);

    CHECK_THROWS_AS(u_split(3, 4, f, full), invalid_input);
    CHECK_THROWS_AS(u_split(1, 4000, f, one), capacity_error);
}

TEST_CASE("sums only see the support")
{
    const TestFunction f = TestFunction::polybump(0.5, 3);
    const PrimeTable small = sieve(20000), big = sieve(40000);
    const AngleTable as = build_angle_table(3, small), ab = build_angle_table(3, big);
    for (std::int64_t k : {1, 2, 4, 77, 100}) {
        CHECK(u_inert(3, k, f, small) == u_inert(3, k, f, big));
        CHECK(u_split(3, k, f, as) == u_split(3, k, f, ab));
    }
}

TEST_CASE("mod 8 Dirichlet kernel")
{
    CHECK(dirichlet_kernel_8(100, 3, 0.0) == doctest::Approx(2.0 * 13));
    CHECK(dirichlet_kernel_8(2, 3, 0.4) == 0.0);
    auto direct = [](std::int64_t K, int a, double x) {
        double s = 0.0;
        for (std::int64_t k = a; k <= K; k += 8) s += 2.0 * std::cos(static_cast<double>(k) * x);
        return s;
    };
    CHECK(std::fabs(dirichlet_kernel_8(100, 3, 0.7) - direct(100, 3, 0.7)) < 1e-9);
    CHECK(std::fabs(dirichlet_kernel_8(1000, 8, kPi / 4) - direct(1000, 8, kPi / 4)) < 1e-9);

    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> ux(0.0, 2 * kPi);
    for (int i = 0; i < 200; ++i) {
        const double x = ux(rng);
        const int a = 1 + static_cast<int>(rng() % 8);
        const std::int64_t K = 1 + static_cast<std::int64_t>(rng() % 1000);
        CHECK(std::fabs(dirichlet_kernel_8(K, a, x) - direct(K, a, x)) < 1e-9);
        if (std::fabs(std::sin(4 * x)) > 1e-3)
            CHECK(std::fabs(dirichlet_kernel_8(K, a, x)) <= 2.0 / std::fabs(std::sin(4 * x)) + 2.0);
    }
}

TEST_CASE("averaged density")
{
    const TestFunction f = TestFunction::polybump(0.4, 4);
    const DensityTables t1 = make_density_tables(1, 2048, 0.4);
    for (int a : {1, 8}) {
        const DensityReport r = averaged_density(1, a, 8, f, DensityMode::Exact, 0, t1);
        CHECK(r.count == 1);
        CHECK(r.measured == doctest::Approx(one_level(1, a, f, t1.primes, t1.angles)).epsilon(1e-14));
    }

    for (std::int64_t d : {1, 3}) {
        const DensityTables t = make_density_tables(d, 1024, 0.4);
        for (int a : {1, 2, 5, 8}) {
            for (std::int64_t K : {512, 1024}) {
                const DensityReport ex = averaged_density(d, a, K, f, DensityMode::Exact, 3, t);
                const DensityReport ke = averaged_density(d, a, K, f, DensityMode::Kernel, 3, t);
                CHECK(std::fabs(ex.split_term - ke.split_term) <= 1e-6);
                CHECK(ex.measured == doctest::Approx(ex.gamma_avg + ex.ram_avg + ex.inert_avg + ex.split_term));
                CHECK(ex.residual == doctest::Approx(ex.measured - ex.prediction));
                CHECK(ex.prediction_by_J.size() == 4);
                CHECK(ex.prediction_by_J.back() == doctest::Approx(ex.prediction));
            }
        }
    }

    // threads do not change the result
    const DensityReport a1 = averaged_density(1, 8, 2048, f, DensityMode::Exact, 0, t1, 1);
    const DensityReport a4 = averaged_density(1, 8, 2048, f, DensityMode::Exact, 0, t1, 4);
    CHECK(a1.measured == a4.measured);
    CHECK_THROWS_AS(averaged_density(3, 8, 1024, f, DensityMode::Exact, 0, t1), invalid_input);
    CHECK_THROWS_AS(averaged_density(1, 8, 1 << 16, f, DensityMode::Kernel, 0, t1), capacity_error);
}

TEST_CASE("split term is small on average")
{
    // |split| <= K^{nu - 1} log(K)^3, far below the single-k size
    const TestFunction f = TestFunction::polybump(0.4, 4);
    for (std::int64_t d : {1, 3}) {
        const DensityTables t = make_density_tables(d, 16384, 0.4);
        for (int a : {1, 8}) {
            for (std::int64_t K = 1024; K <= 16384; K *= 2) {
                const double s = std::fabs(averaged_density(d, a, K, f, DensityMode::Kernel, 0, t).split_term);
                const double Kd = static_cast<double>(K);
                CHECK(s <= std::pow(Kd, -0.6) * std::pow(std::log(Kd), 3));
                CHECK(s <= 1e-3);
            }
        }
    }
}

TEST_CASE("main term parity")
{
    const TestFunction f = TestFunction::polybump(0.9, 2);
    for (std::int64_t d : {1, 3}) {
        const DensityTables t = make_density_tables(d, 1024, 0.9);
        for (int a = 1; a <= 8; ++a) {
            const DensityReport r = averaged_density(d, a, 1024, f, DensityMode::Kernel, 0, t);
            if (a % 2 == 0)
                CHECK(r.measured < f.fhat(0.0));
            else
                CHECK(r.measured > f.fhat(0.0));
        }
    }
}

TEST_CASE("prediction main terms")
{
    const PrimeTable t = sieve(1'000'000);
    const TestFunction f = TestFunction::polybump(0.4, 4);
    const double I = f.fhat_integral();
    CHECK(prediction(1, 8, 1024, f, 0, t, 1'000'000) == doctest::Approx(1.0 - 0.5 * I));
    CHECK(prediction(1, 1, 1024, f, 0, t, 1'000'000) == doctest::Approx(1.0 + 0.5 * I));
    CHECK(prediction(7, 3, 99, f, 0, t, 1'000'000) - prediction(7, 2, 99, f, 0, t, 1'000'000) ==
          doctest::Approx(I));

    const Prediction p = prediction_detail(1, 8, 4096, f, 3, t, 1'000'000);
    const double L = std::log(4096.0);
    const double c0 = c_total(0, 1, 8, t, 1'000'000).center, c2 = c_total(2, 1, 8, t, 1'000'000).center;
    CHECK(p.lower_order[0] == doctest::Approx(c0 / L));
    CHECK(p.lower_order[1] == doctest::Approx(c0 / (L * L)));
    CHECK(p.lower_order[2] == doctest::Approx(2.0 * (c0 - 25.0 * c2) / (L * L * L)));
    CHECK_THROWS_AS(prediction(1, 8, 1024, TestFunction::fejer(0.5), 3, t, 1'000'000), invalid_input);
}

TEST_CASE("Katz-Sarnak densities")
{
    const TestFunction f = TestFunction::polybump(0.7, 3);
    const double f0 = f.fhat(0.0), I = f.fhat_integral();
    CHECK(katz_sarnak_density(SymmetryGroup::U, f) == f0);
    CHECK(katz_sarnak_density(SymmetryGroup::Sp, f) == doctest::Approx(f0 - 0.5 * I));
    CHECK(katz_sarnak_density(SymmetryGroup::SOeven, f) == doctest::Approx(f0 + 0.5 * I));
    // with support inside (-1, 1) the two orthogonal types agree: phi(0) - int eta phi_hat = 0
    const double diff = katz_sarnak_density(SymmetryGroup::SOodd, f) - katz_sarnak_density(SymmetryGroup::SOeven, f);
    CHECK(std::fabs(diff - (f.phi(0.0) - I)) < 1e-12);
    CHECK(std::fabs(diff) < 1e-12);
}

TEST_CASE("non-vanishing bounds")
{
    CHECK(nonvanishing_formula(NonvanishingCase::Even, cpp_rational(1)) == cpp_rational(3, 4));
    CHECK(nonvanishing_formula(NonvanishingCase::OddPlus, cpp_rational(1)) == cpp_rational(1, 4));
    CHECK(nonvanishing_formula(NonvanishingCase::OddMinus, cpp_rational(1)) == cpp_rational(3, 4));

    const cpp_rational nu(999, 1000);
    CHECK(nonvanishing_formula(NonvanishingCase::Even, nu) == cpp_rational(2995, 3996));
    CHECK(nonvanishing_formula(NonvanishingCase::OddPlus, nu) == cpp_rational(997, 3996));
    CHECK(nonvanishing_formula(NonvanishingCase::OddMinus, nu) == cpp_rational(2995, 3996));
    CHECK(nonvanishing_lower_bound(NonvanishingCase::Even, 0.999) ==
          doctest::Approx(static_cast<double>(nonvanishing_formula(NonvanishingCase::Even, nu))).epsilon(1e-15));

    for (NonvanishingCase c : {NonvanishingCase::Even, NonvanishingCase::OddPlus, NonvanishingCase::OddMinus}) {
        const double lim = static_cast<double>(nonvanishing_formula(c, cpp_rational(1)));
        double prev = 1e300;
        for (double eps : {1e-1, 1e-2, 1e-3, 1e-6}) {
            const double gap = std::fabs(nonvanishing_lower_bound(c, 1.0 - eps) - lim);
            CHECK(gap < prev);
            CHECK(gap <= eps);
            prev = gap;
        }
    }
    CHECK_THROWS_AS(nonvanishing_lower_bound(NonvanishingCase::Even, 1.0), invalid_input);
}
