#pragma once

#include "cmhecke/constants.hpp"
#include "cmhecke/errors.hpp"
#include "cmhecke/hecke.hpp"
#include "cmhecke/primes.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace cmhecke {

enum class TestFamily { Fejer, PolyBump };

// Even test function given through its Fourier transform, supported in [-nu, nu].
class TestFunction {
public:
    static TestFunction fejer(double nu);
    static TestFunction polybump(double nu, int m);
    TestFunction scaled(double c) const;

    TestFamily family() const { return family_; }
    double nu() const { return nu_; }
    int m() const { return m_; }
    double scale() const { return scale_; }
    std::string describe() const;

    double fhat(double t) const;
    // Derivative at 0; Fejer has a kink there, so only j = 0 (and odd j) are defined.
    double fhat_deriv0(int j) const;
    std::vector<double> fhat_derivs(int count) const;  // entries 0..count-1
    double fhat_integral() const;                      // int phi_hat = phi(0)
    double phi(double tau) const;                      // cosine transform by quadrature

private:
    TestFunction(TestFamily f, double nu, int m) : family_(f), nu_(nu), m_(m) {}
    TestFamily family_;
    double nu_;
    int m_;
    double scale_ = 1.0;
};

std::complex<double> digamma(std::complex<double> z);

// log(k M_{d,k})
double log_kM(std::int64_t d, std::int64_t k);

double u_gamma(std::int64_t d, std::int64_t k, const TestFunction& f);
// Same quantity by direct quadrature over tau (slower; used as an oracle).
double u_gamma_direct(std::int64_t d, std::int64_t k, const TestFunction& f);
double u_ram(std::int64_t d, std::int64_t k, const TestFunction& f);
double u_inert(std::int64_t d, std::int64_t k, const TestFunction& f, const PrimeTable& table);
double u_split(std::int64_t d, std::int64_t k, const TestFunction& f, const AngleTable& angles);
double one_level(std::int64_t d, std::int64_t k, const TestFunction& f, const PrimeTable& table,
                 const AngleTable& angles);

// Sum of 2 cos(kx) over k <= K, k = alpha mod 8.
double dirichlet_kernel_8(std::int64_t K, int alpha, double x);

enum class DensityMode { Exact, Kernel };

// Prime and angle tables for one d, sized for K <= Kmax, plus the constants cutoff.
struct DensityTables {
    std::int64_t d = 1;
    PrimeTable primes;
    AngleTable angles;
    std::uint64_t constants_x = 1'000'000;
};

inline constexpr std::uint64_t kConstantsCutoff = 1'000'000;
DensityTables make_density_tables(std::int64_t d, std::int64_t Kmax, double nu,
                                  std::uint64_t constants_x = kConstantsCutoff);

struct DensityReport {
    std::int64_t d = 1;
    int alpha = 8;
    std::int64_t K = 0;
    int J = 0;
    DensityMode mode = DensityMode::Exact;
    std::int64_t count = 0;  // number of k <= K with k = alpha mod 8
    double gamma_avg = 0.0, ram_avg = 0.0, inert_avg = 0.0, split_term = 0.0;
    double measured = 0.0;
    double main_term = 0.0;
    std::vector<double> lower_order;     // C_m / log(K M)^m, m = 1..J
    std::vector<double> prediction_by_J; // J' = 0..J
    double lower_order_radius = 0.0;     // from the constants' tail intervals
    double prediction = 0.0;
    double residual = 0.0;               // measured - prediction
};

DensityReport averaged_density(std::int64_t d, int alpha, std::int64_t K, const TestFunction& f, DensityMode mode,
                               int J, const DensityTables& tables, unsigned threads = 1);

struct Prediction {
    double main_term = 0.0;
    std::vector<double> lower_order;  // m = 1..J
    double radius = 0.0;
    double value = 0.0;
};

Prediction prediction_detail(std::int64_t d, int alpha, std::int64_t K, const TestFunction& f, int J,
                             const PrimeTable& table, std::uint64_t x);
double prediction(std::int64_t d, int alpha, std::int64_t K, const TestFunction& f, int J,
                  const PrimeTable& table, std::uint64_t x);

enum class SymmetryGroup { U, Sp, SOeven, SOodd };
double katz_sarnak_density(SymmetryGroup G, const TestFunction& f);

enum class NonvanishingCase { Even, OddPlus, OddMinus };

// The bound as an expression in nu; any field type (double, exact rationals).
template <class T>
T nonvanishing_formula(NonvanishingCase c, const T& nu)
{
    const T one(1), half = T(1) / T(2), quarter = T(1) / T(4);
    switch (c) {
        case NonvanishingCase::Even: return one - half * (one / nu - half);
        case NonvanishingCase::OddPlus: return one - half * (one / nu + half);
        case NonvanishingCase::OddMinus: return one - (half / nu - quarter);
    }
    throw invalid_input("nonvanishing_formula: unknown case");
}

double nonvanishing_lower_bound(NonvanishingCase c, double nu);

}  // namespace cmhecke
