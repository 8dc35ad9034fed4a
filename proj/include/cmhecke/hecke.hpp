#pragma once

#include "cmhecke/primes.hpp"
#include "cmhecke/zi.hpp"

#include <cstdint>
#include <vector>

namespace cmhecke {

bool is_odd_squarefree(std::int64_t d);
void require_odd_squarefree(std::int64_t d, const char* where);

// Residue in [0, m).
inline std::int64_t mod_pos(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

struct Conductor {
    GaussianInt generator;
    std::int64_t norm = 1;
};

Conductor conductor(std::int64_t d, std::int64_t k);

struct HeckeCharacter {
    std::int64_t d = 1;
    std::int64_t k = 1;
    int alpha = 1;  // k mod 8 in 1..8
    GaussianInt conductor_generator;
    std::int64_t conductor_norm = 1;
    double M = 1.0;  // sqrt(conductor_norm)
};

HeckeCharacter make_character(std::int64_t d, std::int64_t k);
// M_{d,k} depends on k only through its class mod 4.
double analytic_M(std::int64_t d, std::int64_t k);

// Finite part of xi_d; Zero when x shares a factor with the conductor.
FourthRoot xi_fin(std::int64_t d, const GaussianInt& x);
FourthRoot xi_fin(std::int64_t d, const OddModulus& dmod, const GaussianInt& x);

struct SplitPrimeRecord {
    std::int64_t p = 0;
    GaussianInt bold_pi;
    FourthRoot chi_p_d = FourthRoot::One;
    double theta = 0.0;  // in (0, pi)
    GaussianInt z;       // sqrt(p) e^{i theta}
};

SplitPrimeRecord split_prime_record(std::int64_t d, std::int64_t p);
// xi_d at the prime over p conjugate to the one stored in rec, as an exact lattice point.
GaussianInt xi_lattice_point(const SplitPrimeRecord& rec);
double xi_k_trace(const SplitPrimeRecord& rec, std::int64_t k);

std::int64_t a_p_hecke(std::int64_t d, std::int64_t p);
inline constexpr std::int64_t kPointCountCutoff = 10'000;
std::int64_t a_p_count(std::int64_t d, std::int64_t p, std::int64_t cutoff = kPointCountCutoff);

struct AngleEntry {
    std::int64_t p = 0;
    double theta = 0.0;
    // p | d: xi_d vanishes at the primes over p; theta is then the argument
    // of the Gaussian prime itself, used only when 4 | k.
    bool divides_d = false;
};

struct AngleTable {
    std::int64_t d = 1;
    std::uint64_t limit = 0;
    std::vector<AngleEntry> entries;  // ascending p
};

// Entries for p <= limit (default: the whole table).
AngleTable build_angle_table(std::int64_t d, const PrimeTable& primes, std::uint64_t limit = 0);

}  // namespace cmhecke
