#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cmhecke/errors.hpp"
#include "cmhecke/hecke.hpp"

#include <cmath>
#include <numbers>

using namespace cmhecke;

namespace {

std::vector<std::int64_t> odd_squarefree_upto(std::int64_t bound)
{
    std::vector<std::int64_t> out;
    for (std::int64_t d = -bound; d <= bound; ++d)
        if (is_odd_squarefree(d)) out.push_back(d);
    return out;
}

double dist_2pi(double x)
{
    const double t = 2.0 * std::numbers::pi;
    double r = std::fmod(x, t);
    if (r < 0) r += t;
    return std::min(r, t - r);
}

}  // namespace

TEST_CASE("odd square-free validation")
{
    CHECK(is_odd_squarefree(1));
    CHECK(is_odd_squarefree(-15));
    CHECK_FALSE(is_odd_squarefree(9));
    CHECK_FALSE(is_odd_squarefree(6));
    CHECK_FALSE(is_odd_squarefree(0));
    CHECK_THROWS_AS(conductor(2, 1), invalid_input);
    CHECK_THROWS_AS(conductor(-45, 1), invalid_input);
}

TEST_CASE("conductors")
{
    Conductor c = conductor(1, 1);
    CHECK(c.generator == GaussianInt(2, 2));
    CHECK(c.norm == 8);
    c = conductor(3, 2);
    CHECK(c.generator == GaussianInt(6));
    CHECK(c.norm == 36);
    c = conductor(-5, 8);
    CHECK(c.generator == GaussianInt(1));
    CHECK(c.norm == 1);

    for (std::int64_t d : odd_squarefree_upto(31)) {
        for (std::int64_t k = 1; k <= 16; ++k) {
            const HeckeCharacter h = make_character(d, k);
            const std::int64_t d2 = d * d;
            const std::int64_t expect = k % 4 == 0 ? 1 : k % 4 == 2 ? 4 * d2 : mod_pos(d, 4) == 1 ? 8 * d2 : 16 * d2;
            CHECK(h.conductor_norm == expect);
            CHECK(static_cast<std::int64_t>(norm(h.conductor_generator)) == expect);
            CHECK(h.M * h.M == doctest::Approx(static_cast<double>(expect)).epsilon(1e-15));
            CHECK(h.alpha == (k - 1) % 8 + 1);
        }
    }
}

TEST_CASE("finite part")
{
    for (int a = -9; a <= 9; ++a) {
        for (int b = -9; b <= 9; ++b) {
            const GaussianInt x(a, b);
            if (norm(x) % 2 == 0) {
                CHECK(xi_fin(1, x) == FourthRoot::Zero);
                continue;
            }
            CHECK(xi_fin(1, x) == char_two_plus_two_i(x));
        }
    }
    CHECK(xi_fin(5, GaussianInt(3)) ==
          conj(quartic_symbol_odd(GaussianInt(3), 5)) * char_two_plus_two_i(GaussianInt(3)) * char_two(GaussianInt(3)));
    CHECK(xi_fin(3, GaussianInt(3)) == FourthRoot::Zero);

    // xi_fin(x) * x/|x| depends only on the ideal (x)
    for (std::int64_t d : odd_squarefree_upto(15)) {
        for (int a = -7; a <= 7; ++a) {
            for (int b = -7; b <= 7; ++b) {
                const GaussianInt x(a, b);
                const FourthRoot v = xi_fin(d, x);
                if (v == FourthRoot::Zero) continue;
                for (int e = 1; e < 4; ++e) {
                    const FourthRoot u = fourth_root_from_exponent(e);
                    CHECK(xi_fin(d, to_gaussian(u) * x) * u == v);
                }
            }
        }
    }
}

TEST_CASE("split prime records")
{
    const SplitPrimeRecord r = split_prime_record(1, 5);
    CHECK(r.bold_pi == GaussianInt(-1, 2));
    CHECK(r.chi_p_d == FourthRoot::One);
    CHECK(2.0 * std::cos(r.theta) == doctest::Approx(-2.0 / std::sqrt(5.0)).epsilon(1e-14));
    CHECK(r.z == GaussianInt(-1, 2));

    const SplitPrimeRecord r13 = split_prime_record(1, 13);
    CHECK(norm(r13.z) == 13);
    CHECK(r13.z.im >= 0);
    CHECK(r13.z.im % 2 == 0);
    CHECK(is_primary(r13.z));

    CHECK_THROWS_AS(split_prime_record(1, 7), invalid_input);
    CHECK_THROWS_AS(split_prime_record(5, 5), invalid_input);

    // the conjugate prime carries the conjugate value
    for (std::int64_t d : {1, 3, -7, 15}) {
        for (std::int64_t p : {5, 13, 17, 29, 37, 41, 53}) {
            if (d % p == 0) continue;
            const SplitPrimeRecord s = split_prime_record(d, p);
            const GaussianInt xi = xi_lattice_point(s);
            const GaussianInt bar = conj(s.bold_pi);
            const FourthRoot chi_bar = quartic_symbol_prime(GaussianInt(d), bar);
            CHECK(to_gaussian(conj(chi_bar)) * bar == conj(xi));
        }
    }
}

TEST_CASE("traces of powers")
{
    const SplitPrimeRecord r = split_prime_record(1, 5);
    CHECK(xi_k_trace(r, 0) == doctest::Approx(2.0));
    CHECK(xi_k_trace(r, 1) == doctest::Approx(2.0 * std::cos(r.theta)));
    const GaussianInt z4 = r.z * r.z * r.z * r.z;
    CHECK(xi_k_trace(r, 4) == doctest::Approx(2.0 * static_cast<double>(z4.re) / 25.0).epsilon(1e-13));

    for (std::int64_t d : {1, 3, 5, -7}) {
        for (std::int64_t p = 5; p < 400; p += 4) {
            if (!is_prime_u64(static_cast<std::uint64_t>(p)) || d % p == 0) continue;
            const SplitPrimeRecord s = split_prime_record(d, p);
            GaussianInt w(1);
            for (std::int64_t k = 1; k <= 12; ++k) {
                w = w * s.z;
                const double exact = 2.0 * static_cast<double>(w.re) / std::pow(static_cast<double>(p), 0.5 * k);
                CHECK(std::fabs(xi_k_trace(s, k) - exact) < 1e-12);
            }
        }
    }
}

TEST_CASE("a_p examples")
{
    CHECK(a_p_hecke(1, 5) == -2);
    CHECK(a_p_count(1, 5) == -2);
    CHECK(a_p_hecke(1, 7) == 0);
    CHECK(a_p_count(1, 3) == 0);
    CHECK(a_p_hecke(3, 13) == a_p_count(3, 13));
    CHECK_THROWS_AS(a_p_hecke(3, 3), invalid_input);
    CHECK_THROWS_AS(a_p_count(1, 10007), capacity_error);
}

TEST_CASE("a_p identity pins down all conventions")
{
    std::vector<std::int64_t> primes;
    for (std::int64_t p = 3; p < 2000; p += 2)
        if (is_prime_u64(static_cast<std::uint64_t>(p))) primes.push_back(p);
    for (std::int64_t d : odd_squarefree_upto(15)) {
        for (std::int64_t p : primes) {
            if (d % p == 0) continue;
            const std::int64_t ap = a_p_hecke(d, p);
            CHECK(ap == a_p_count(d, p));
            CHECK(static_cast<double>(ap * ap) <= 4.0 * static_cast<double>(p));
            if (p % 4 == 3) CHECK(ap == 0);
        }
    }
}

TEST_CASE("angles stay off the lines through multiples of pi/4")
{
    const PrimeTable table = sieve(100000);
    for (std::int64_t d : {1, 3}) {
        const AngleTable at = build_angle_table(d, table);
        CHECK(at.entries.size() == table.primes_1mod4.size());
        for (const AngleEntry& e : at.entries) {
            if (e.divides_d) continue;
            const SplitPrimeRecord s = split_prime_record(d, e.p);
            CHECK(s.theta == e.theta);
            const i128 a = s.z.re, b = s.z.im;
            CHECK((a != 0 && b != 0 && a != b && a != -b));
            const double sp = std::sqrt(static_cast<double>(e.p));
            const double err = std::hypot(sp * std::cos(e.theta) - static_cast<double>(a),
                                          sp * std::sin(e.theta) - static_cast<double>(b));
            CHECK(err < 1e-6);
            for (int n = 1; n <= 20; ++n) {
                const double bound = 2.0 * std::pow(static_cast<double>(e.p), -0.5 * n);
                if (bound < 1e-300) break;
                CHECK(dist_2pi(8.0 * n * e.theta) >= bound);
            }
        }
    }
}
