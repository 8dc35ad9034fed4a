#include "cmhecke/zi.hpp"

#include "cmhecke/errors.hpp"

#include <algorithm>
#include <array>
#include <climits>
#include <numeric>

namespace cmhecke {

namespace {

i128 add_checked(i128 a, i128 b)
{
    i128 r;
    if (__builtin_add_overflow(a, b, &r)) throw capacity_error("gaussian integer overflow (add)");
    return r;
}

i128 sub_checked(i128 a, i128 b)
{
    i128 r;
    if (__builtin_sub_overflow(a, b, &r)) throw capacity_error("gaussian integer overflow (sub)");
    return r;
}

i128 mul_checked(i128 a, i128 b)
{
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw capacity_error("gaussian integer overflow (mul)");
    return r;
}

i128 floor_div(i128 a, i128 b)
{
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

bool divisible_by_four(const GaussianInt& z) { return z.re % 4 == 0 && z.im % 4 == 0; }

constexpr std::array<FourthRoot, 4> kUnits = {FourthRoot::One, FourthRoot::I, FourthRoot::MinusOne,
                                             FourthRoot::MinusI};

}  // namespace

GaussianInt operator+(const GaussianInt& a, const GaussianInt& b)
{
    return {add_checked(a.re, b.re), add_checked(a.im, b.im)};
}

GaussianInt operator-(const GaussianInt& a, const GaussianInt& b)
{
    return {sub_checked(a.re, b.re), sub_checked(a.im, b.im)};
}

GaussianInt operator-(const GaussianInt& a) { return GaussianInt{0, 0} - a; }

GaussianInt operator*(const GaussianInt& a, const GaussianInt& b)
{
    return {sub_checked(mul_checked(a.re, b.re), mul_checked(a.im, b.im)),
            add_checked(mul_checked(a.re, b.im), mul_checked(a.im, b.re))};
}

GaussianInt conj(const GaussianInt& z) { return {z.re, sub_checked(0, z.im)}; }

i128 norm(const GaussianInt& z) { return add_checked(mul_checked(z.re, z.re), mul_checked(z.im, z.im)); }

GaussianInt euclid_quo(const GaussianInt& a, const GaussianInt& b)
{
    if (b.is_zero()) throw division_error("euclid_rem: division by zero");
    const i128 n = norm(b);
    const GaussianInt num = a * conj(b);
    const i128 half = n / 2;
    return {floor_div(add_checked(num.re, half), n), floor_div(add_checked(num.im, half), n)};
}

GaussianInt euclid_rem(const GaussianInt& a, const GaussianInt& b) { return a - euclid_quo(a, b) * b; }

bool divides(const GaussianInt& b, const GaussianInt& a)
{
    if (b.is_zero()) return a.is_zero();
    const i128 n = norm(b);
    const GaussianInt num = a * conj(b);
    return num.re % n == 0 && num.im % n == 0;
}

GaussianInt gcd(GaussianInt a, GaussianInt b)
{
    while (!b.is_zero()) {
        GaussianInt r = euclid_rem(a, b);
        a = b;
        b = r;
    }
    return a;
}

GaussianInt powmod(GaussianInt a, std::uint64_t e, const GaussianInt& m)
{
    GaussianInt result = euclid_rem(GaussianInt{1}, m);
    a = euclid_rem(a, m);
    while (e > 0) {
        if (e & 1) result = euclid_rem(result * a, m);
        e >>= 1;
        if (e > 0) a = euclid_rem(a * a, m);
    }
    return result;
}

bool is_primary(const GaussianInt& z) { return divides(GaussianInt{2, 2}, z - GaussianInt{1}); }

GaussianInt primary_generator(const GaussianInt& z)
{
    if (z.is_zero() || norm(z) % 2 == 0) throw invalid_input("primary_generator: norm must be odd");
    GaussianInt w = z;
    for (int s = 0; s < 4; ++s) {
        if (is_primary(w)) return w;
        w = w * GaussianInt{0, 1};
    }
    throw consistency_error("primary_generator: no primary associate");
}

std::string to_string(i128 v)
{
    if (v == 0) return "0";
    const bool neg = v < 0;
    std::string s;
    // careful with the most negative value: work with negative remainders
    while (v != 0) {
        int digit = static_cast<int>(v % 10);
        s.push_back(static_cast<char>('0' + (digit < 0 ? -digit : digit)));
        v /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

std::string to_string(const GaussianInt& z)
{
    if (z.im == 0) return to_string(z.re);
    std::string s;
    if (z.re != 0) s = to_string(z.re);
    if (z.im > 0 && z.re != 0) s += "+";
    if (z.im == -1)
        s += "-";
    else if (z.im != 1)
        s += to_string(z.im);
    s += "i";
    return s;
}

FourthRoot fourth_root_from_exponent(std::int64_t e)
{
    return static_cast<FourthRoot>(((e % 4) + 4) % 4);
}

FourthRoot operator*(FourthRoot a, FourthRoot b)
{
    if (a == FourthRoot::Zero || b == FourthRoot::Zero) return FourthRoot::Zero;
    return fourth_root_from_exponent(static_cast<int>(a) + static_cast<int>(b));
}

FourthRoot conj(FourthRoot a)
{
    if (a == FourthRoot::Zero) return a;
    return fourth_root_from_exponent(-static_cast<int>(a));
}

FourthRoot pow(FourthRoot a, std::int64_t e)
{
    if (a == FourthRoot::Zero) return e == 0 ? FourthRoot::One : FourthRoot::Zero;
    return fourth_root_from_exponent(static_cast<std::int64_t>(static_cast<int>(a)) * (e % 4));
}

GaussianInt to_gaussian(FourthRoot a)
{
    switch (a) {
        case FourthRoot::One: return {1, 0};
        case FourthRoot::I: return {0, 1};
        case FourthRoot::MinusOne: return {-1, 0};
        case FourthRoot::MinusI: return {0, -1};
        case FourthRoot::Zero: break;
    }
    return {0, 0};
}

std::complex<double> to_complex(FourthRoot a)
{
    GaussianInt g = to_gaussian(a);
    return {static_cast<double>(g.re), static_cast<double>(g.im)};
}

FourthRoot unit_of(const GaussianInt& u)
{
    for (FourthRoot r : kUnits)
        if (to_gaussian(r) == u) return r;
    return FourthRoot::Zero;
}

const char* to_string(FourthRoot a)
{
    switch (a) {
        case FourthRoot::One: return "1";
        case FourthRoot::I: return "i";
        case FourthRoot::MinusOne: return "-1";
        case FourthRoot::MinusI: return "-i";
        case FourthRoot::Zero: return "0";
    }
    return "?";
}

FourthRoot quartic_symbol_prime(const GaussianInt& a, const GaussianInt& pi)
{
    if (pi.is_zero()) throw invalid_input("quartic_symbol_prime: zero modulus");
    const i128 n = norm(pi);
    if (n % 2 == 0) throw invalid_input("quartic_symbol_prime: modulus divides 2");
    if (n % 4 != 1) throw invalid_input("quartic_symbol_prime: modulus is not a Gaussian prime");
    if (divides(pi, a)) return FourthRoot::Zero;
    const GaussianInt r = powmod(a, static_cast<std::uint64_t>((n - 1) / 4), pi);
    for (FourthRoot u : kUnits)
        if (divides(pi, r - to_gaussian(u))) return u;
    throw invalid_input("quartic_symbol_prime: modulus is not a Gaussian prime");
}

OddModulus factor_odd(std::int64_t beta)
{
    if (beta == 0 || beta % 2 == 0) throw invalid_input("factor_odd: modulus must be odd");
    OddModulus out;
    std::int64_t m = beta < 0 ? -beta : beta;
    if (m > 1'000'000'000'000LL) throw capacity_error("factor_odd: modulus above trial-division cutoff");
    out.value = m;
    auto push = [&](std::int64_t p) {
        if (p % 4 == 3) {
            out.primes.emplace_back(p);
        } else {
            GaussianInt pi = split_rational_prime(p);
            out.primes.push_back(pi);
            out.primes.push_back(conj(pi));
        }
    };
    for (std::int64_t p = 3; p * p <= m; p += 2) {
        while (m % p == 0) {
            push(p);
            m /= p;
        }
    }
    if (m > 1) push(m);
    return out;
}

FourthRoot quartic_symbol_odd(const GaussianInt& a, const OddModulus& beta)
{
    FourthRoot r = FourthRoot::One;
    for (const auto& pi : beta.primes) {
        r = r * quartic_symbol_prime(a, pi);
        if (r == FourthRoot::Zero) break;
    }
    return r;
}

FourthRoot quartic_symbol_odd(const GaussianInt& a, std::int64_t beta)
{
    return quartic_symbol_odd(a, factor_odd(beta));
}

FourthRoot char_two(const GaussianInt& z)
{
    const bool re_odd = z.re % 2 != 0;
    const bool im_odd = z.im % 2 != 0;
    if (re_odd == im_odd) return FourthRoot::Zero;
    return re_odd ? FourthRoot::One : FourthRoot::MinusOne;
}

FourthRoot char_two_plus_two_i(const GaussianInt& z)
{
    if (norm(z) % 2 == 0) return FourthRoot::Zero;
    for (FourthRoot u : kUnits)
        if (divides(GaussianInt{2, 2}, z - to_gaussian(u))) return conj(u);
    throw consistency_error("char_two_plus_two_i: odd element not congruent to a unit");
}

FourthRoot char_four(const GaussianInt& z)
{
    if (norm(z) % 2 == 0) return FourthRoot::Zero;
    const GaussianInt w{3, 2};
    const GaussianInt i{0, 1};
    struct Row {
        GaussianInt rep;
        FourthRoot value;
    };
    const std::array<Row, 8> table = {{
        {GaussianInt{1}, FourthRoot::One},
        {-w, FourthRoot::One},
        {GaussianInt{-1}, FourthRoot::MinusOne},
        {w, FourthRoot::MinusOne},
        {i, FourthRoot::I},
        {-(i * w), FourthRoot::I},
        {-i, FourthRoot::MinusI},
        {i * w, FourthRoot::MinusI},
    }};
    for (const auto& row : table)
        if (divisible_by_four(z - row.rep)) return row.value;
    throw consistency_error("char_four: odd element outside the residue table");
}

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m)
{
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

bool is_prime_u64(std::uint64_t n)
{
    if (n < 2) return false;
    static constexpr std::uint64_t small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (std::uint64_t p : small) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : small) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

GaussianInt split_rational_prime(std::int64_t p)
{
    if (p <= 0 || p % 4 != 1) throw invalid_input("split_rational_prime: p must be 1 mod 4");
    if (!is_prime_u64(static_cast<std::uint64_t>(p))) throw invalid_input("split_rational_prime: p is not prime");
    const auto up = static_cast<std::uint64_t>(p);
    for (std::uint64_t n = 2;; ++n) {
        if (!is_prime_u64(n)) continue;
        const std::uint64_t x = powmod_u64(n, (up - 1) / 4, up);
        if (mulmod_u64(x, x, up) != up - 1) continue;
        GaussianInt g = gcd(GaussianInt{p}, GaussianInt{static_cast<i128>(x), 1});
        if (norm(g) != p) throw consistency_error("split_rational_prime: gcd has wrong norm");
        return g;
    }
}

ResidueBox residue_box(const GaussianInt& m)
{
    if (m.is_zero()) throw division_error("residue_box: zero modulus");
    const i128 n = norm(m);
    if (n > static_cast<i128>(INT64_MAX)) throw capacity_error("residue_box: modulus too large");
    // smallest positive imaginary part in m Z[i] is gcd(re, im); the real period is then N / gcd
    const auto a = static_cast<std::int64_t>(m.re < 0 ? -m.re : m.re);
    const auto b = static_cast<std::int64_t>(m.im < 0 ? -m.im : m.im);
    ResidueBox box;
    box.height = std::gcd(a, b);
    box.width = static_cast<std::int64_t>(n) / box.height;
    return box;
}

}  // namespace cmhecke
