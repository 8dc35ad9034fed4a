#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace cmhecke {

using i128 = __int128;

struct GaussianInt {
    i128 re = 0;
    i128 im = 0;

    constexpr GaussianInt() = default;
    constexpr GaussianInt(i128 r, i128 i = 0) : re(r), im(i) {}

    bool is_zero() const { return re == 0 && im == 0; }
    friend bool operator==(const GaussianInt&, const GaussianInt&) = default;
};

// Checked arithmetic; overflow throws capacity_error.
GaussianInt operator+(const GaussianInt& a, const GaussianInt& b);
GaussianInt operator-(const GaussianInt& a, const GaussianInt& b);
GaussianInt operator-(const GaussianInt& a);
GaussianInt operator*(const GaussianInt& a, const GaussianInt& b);

GaussianInt conj(const GaussianInt& z);
i128 norm(const GaussianInt& z);

// Remainder for the nearest-integer quotient; norm(r) <= norm(b)/2.
GaussianInt euclid_rem(const GaussianInt& a, const GaussianInt& b);
GaussianInt euclid_quo(const GaussianInt& a, const GaussianInt& b);
bool divides(const GaussianInt& b, const GaussianInt& a);
GaussianInt gcd(GaussianInt a, GaussianInt b);

// a^e mod m, residues kept reduced by euclid_rem.
GaussianInt powmod(GaussianInt a, std::uint64_t e, const GaussianInt& m);

// Unique associate congruent to 1 mod (2+2i). Requires odd norm.
GaussianInt primary_generator(const GaussianInt& z);
bool is_primary(const GaussianInt& z);

// Complete residue system [0, width) x [0, height) for Z[i] / (m).
struct ResidueBox {
    std::int64_t width = 1;
    std::int64_t height = 1;
};
ResidueBox residue_box(const GaussianInt& m);

std::string to_string(const GaussianInt& z);
std::string to_string(i128 v);

// {1, i, -1, -i} encoded as exponents of i, plus Zero.
enum class FourthRoot : std::uint8_t { One = 0, I = 1, MinusOne = 2, MinusI = 3, Zero = 4 };

FourthRoot operator*(FourthRoot a, FourthRoot b);
FourthRoot conj(FourthRoot a);
FourthRoot pow(FourthRoot a, std::int64_t e);
FourthRoot fourth_root_from_exponent(std::int64_t e);
GaussianInt to_gaussian(FourthRoot a);
std::complex<double> to_complex(FourthRoot a);
// Inverse of to_gaussian on units; non-units give Zero.
FourthRoot unit_of(const GaussianInt& u);
const char* to_string(FourthRoot a);

// Quartic residue symbol (a/pi)_4 for a Gaussian prime pi of odd norm.
FourthRoot quartic_symbol_prime(const GaussianInt& a, const GaussianInt& pi);

// Gaussian prime factorization of an odd rational integer.
struct OddModulus {
    std::int64_t value = 1;               // |beta|
    std::vector<GaussianInt> primes;      // with multiplicity
};
OddModulus factor_odd(std::int64_t beta);

FourthRoot quartic_symbol_odd(const GaussianInt& a, const OddModulus& beta);
FourthRoot quartic_symbol_odd(const GaussianInt& a, std::int64_t beta);

FourthRoot char_two(const GaussianInt& z);
FourthRoot char_two_plus_two_i(const GaussianInt& z);
FourthRoot char_four(const GaussianInt& z);

// Gaussian prime of norm p for a rational prime p = 1 mod 4.
GaussianInt split_rational_prime(std::int64_t p);

// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

}  // namespace cmhecke
