#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace cmhecke {

enum class RootNumberMethod { ClosedForm, GaussSum };

struct RootNumberResult {
    int w = 1;
    RootNumberMethod method = RootNumberMethod::ClosedForm;
    double residual = 0.0;          // |raw - w|, Gauss sum only
    std::complex<double> raw{1.0, 0.0};
};

int root_number_closed(std::int64_t d, std::int64_t k);

inline constexpr std::int64_t kGaussOracleCutoff = 99;
inline constexpr std::int64_t kGaussOracleMaxK = 64;
RootNumberResult root_number_gauss(std::int64_t d, std::int64_t k, std::int64_t cutoff = kGaussOracleCutoff);

// Classes alpha in {1,3,5,7} with root number -1.
std::vector<int> s_minus(std::int64_t d);
std::vector<int> s_plus(std::int64_t d);

struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Fraction&, const Fraction&) = default;
};

Fraction negative_fraction(std::int64_t d, std::int64_t K);

}  // namespace cmhecke
