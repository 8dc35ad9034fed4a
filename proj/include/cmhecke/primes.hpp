#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cmhecke {

struct PrimeTable {
    std::uint64_t limit = 0;
    std::vector<std::uint64_t> primes_1mod4;
    std::vector<std::uint64_t> primes_3mod4;

    std::size_t count() const;  // includes 2 when limit >= 2
};

inline constexpr std::uint64_t kDefaultSieveCap = 1'000'000'000ULL;

PrimeTable sieve(std::uint64_t limit, std::uint64_t cap = kDefaultSieveCap);

// Prime cache file: see README for the byte layout.
void save_prime_cache(const std::string& path, const PrimeTable& table);
std::optional<PrimeTable> load_prime_cache(const std::string& path);
// Sieve, consulting the cache named by CMHECKE_PRIME_CACHE when set.
PrimeTable sieve_cached(std::uint64_t limit);

// (-1)^k * sum over p^n <= t, p = 3 mod 4, of (-1)^{kn} log p.
double psi_k(double t, std::int64_t k, const PrimeTable& table);

struct EulerConstantsTable {
    int J = 0;
    std::uint64_t N = 0;                         // Euler-Maclaurin cutoff
    std::vector<double> gamma;                   // Stieltjes constants
    std::vector<std::array<double, 5>> gamma_a4; // [n][a], a in 1..4
    std::vector<double> gamma_chi4;
    std::vector<double> remainder_bound;         // Euler-Maclaurin remainder, worst over classes
    std::vector<double> stability;               // |value(N) - value(N/2)|, worst over classes
    std::vector<double> rounding_scale;          // eps_quad * (log N)^{n+1}: cancellation floor
};

inline constexpr int kMaxStieltjesIndex = 20;
inline constexpr std::uint64_t kEulerMaclaurinCutoff = 20'000;

EulerConstantsTable compute_euler_constants(int J, std::uint64_t N);
// Shared table, J = 20, N = kEulerMaclaurinCutoff; computed on first use.
const EulerConstantsTable& euler_constants();

double stieltjes_gamma(int n);
double gen_euler_gamma(int n, int a, int q = 4);

}  // namespace cmhecke
