#include "cmhecke/hecke.hpp"

#include "cmhecke/errors.hpp"

#include <cmath>
#include <numbers>

namespace cmhecke {

bool is_odd_squarefree(std::int64_t d)
{
    if (d == 0 || d % 2 == 0) return false;
    std::int64_t m = d < 0 ? -d : d;
    for (std::int64_t p = 3; p * p <= m; p += 2) {
        if (m % p != 0) continue;
        m /= p;
        if (m % p == 0) return false;
    }
    return true;
}

void require_odd_squarefree(std::int64_t d, const char* where)
{
    if (!is_odd_squarefree(d)) throw invalid_input(std::string(where) + ": d must be odd and square-free");
}

Conductor conductor(std::int64_t d, std::int64_t k)
{
    require_odd_squarefree(d, "conductor");
    if (k < 1) throw invalid_input("conductor: k must be positive");
    const std::int64_t d2 = d * d;
    if (k % 4 == 0) return {GaussianInt{1}, 1};
    if (k % 4 == 2) return {GaussianInt{2 * d}, 4 * d2};
    if (mod_pos(d, 4) == 1) return {GaussianInt{2 * d, 2 * d}, 8 * d2};
    return {GaussianInt{4 * d}, 16 * d2};
}

double analytic_M(std::int64_t d, std::int64_t k)
{
    return std::sqrt(static_cast<double>(conductor(d, k).norm));
}

HeckeCharacter make_character(std::int64_t d, std::int64_t k)
{
    const Conductor c = conductor(d, k);
    HeckeCharacter h;
    h.d = d;
    h.k = k;
    h.alpha = static_cast<int>((k - 1) % 8) + 1;
    h.conductor_generator = c.generator;
    h.conductor_norm = c.norm;
    h.M = std::sqrt(static_cast<double>(c.norm));
    return h;
}

FourthRoot xi_fin(std::int64_t d, const OddModulus& dmod, const GaussianInt& x)
{
    const FourthRoot chi_bar = conj(quartic_symbol_odd(x, dmod));
    switch (mod_pos(d, 8)) {
        case 1: return chi_bar * char_two_plus_two_i(x);
        case 3: return chi_bar * char_two(x) * conj(char_four(x));
        case 5: return chi_bar * char_two_plus_two_i(x) * char_two(x);
        case 7: return chi_bar * conj(char_four(x));
        default: break;
    }
    throw invalid_input("xi_fin: d must be odd");
}

FourthRoot xi_fin(std::int64_t d, const GaussianInt& x)
{
    require_odd_squarefree(d, "xi_fin");
    return xi_fin(d, factor_odd(d), x);
}

namespace {

void require_split_prime(std::int64_t p, const char* where)
{
    if (p <= 0 || p % 4 != 1 || !is_prime_u64(static_cast<std::uint64_t>(p)))
        throw invalid_input(std::string(where) + ": p must be a prime = 1 mod 4");
}

// Primary generator of a prime over p, normalized to positive imaginary part.
GaussianInt upper_primary(std::int64_t p)
{
    GaussianInt pi = primary_generator(split_rational_prime(p));
    return pi.im < 0 ? conj(pi) : pi;
}

double fold_angle(const GaussianInt& w)
{
    const double t = std::atan2(static_cast<double>(w.im), static_cast<double>(w.re));
    return t < 0 ? -t : t;
}

}  // namespace

SplitPrimeRecord split_prime_record(std::int64_t d, std::int64_t p)
{
    require_split_prime(p, "split_prime_record");
    if (d == 0 || d % p == 0) throw invalid_input("split_prime_record: p divides d");

    SplitPrimeRecord rec;
    rec.p = p;
    rec.bold_pi = upper_primary(p);
    rec.chi_p_d = quartic_symbol_prime(GaussianInt{d}, rec.bold_pi);
    const GaussianInt w = xi_lattice_point(rec);
    rec.theta = fold_angle(w);

    const double r = std::sqrt(static_cast<double>(p));
    const double x = r * std::cos(rec.theta), y = r * std::sin(rec.theta);
    const double xr = std::round(x), yr = std::round(y);
    if (std::hypot(x - xr, y - yr) >= 1e-6) throw consistency_error("split_prime_record: angle is off the lattice");
    rec.z = GaussianInt{static_cast<i128>(xr), static_cast<i128>(yr)};
    if (norm(rec.z) != p || !(rec.z == w || rec.z == conj(w)))
        throw consistency_error("split_prime_record: lattice point disagrees with exact value");
    return rec;
}

GaussianInt xi_lattice_point(const SplitPrimeRecord& rec)
{
    return rec.bold_pi * to_gaussian(conj(rec.chi_p_d));
}

double xi_k_trace(const SplitPrimeRecord& rec, std::int64_t k)
{
    return 2.0 * std::cos(static_cast<double>(k) * rec.theta);
}

std::int64_t a_p_hecke(std::int64_t d, std::int64_t p)
{
    if (p < 3 || !is_prime_u64(static_cast<std::uint64_t>(p))) throw invalid_input("a_p_hecke: p must be an odd prime");
    if (d == 0 || d % p == 0) throw invalid_input("a_p_hecke: p divides 2d");
    if (p % 4 == 3) return 0;
    const GaussianInt pi = upper_primary(p);
    const GaussianInt w = pi * to_gaussian(conj(quartic_symbol_prime(GaussianInt{d}, pi)));
    return static_cast<std::int64_t>(2 * w.re);
}

std::int64_t a_p_count(std::int64_t d, std::int64_t p, std::int64_t cutoff)
{
    if (p < 3 || !is_prime_u64(static_cast<std::uint64_t>(p))) throw invalid_input("a_p_count: p must be an odd prime");
    if (d == 0 || d % p == 0) throw invalid_input("a_p_count: p divides 2d");
    if (p > cutoff) throw capacity_error("a_p_count: p beyond point-count cutoff");
    std::vector<std::int64_t> roots(static_cast<std::size_t>(p), 0);
    for (std::int64_t y = 0; y < p; ++y) ++roots[static_cast<std::size_t>(y * y % p)];
    const std::int64_t dm = mod_pos(d, p);
    std::int64_t affine = 0;
    for (std::int64_t x = 0; x < p; ++x) {
        const std::int64_t rhs = mod_pos((x * x % p) * x - dm * x, p);
        affine += roots[static_cast<std::size_t>(rhs)];
    }
    return p + 1 - (affine + 1);
}

AngleTable build_angle_table(std::int64_t d, const PrimeTable& primes, std::uint64_t limit)
{
    if (d == 0) throw invalid_input("build_angle_table: d must be nonzero");
    if (limit == 0) limit = primes.limit;
    if (limit > primes.limit) throw capacity_error("build_angle_table: limit beyond sieve");
    AngleTable t;
    t.d = d;
    t.limit = limit;
    for (std::uint64_t up : primes.primes_1mod4) {
        if (up > limit) break;
        const auto p = static_cast<std::int64_t>(up);
        if (d % p == 0)
            t.entries.push_back({p, fold_angle(upper_primary(p)), true});
        else
            t.entries.push_back({p, split_prime_record(d, p).theta, false});
    }
    return t;
}

}  // namespace cmhecke
