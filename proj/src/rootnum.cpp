#include "cmhecke/rootnum.hpp"

#include "cmhecke/errors.hpp"
#include "cmhecke/hecke.hpp"
#include "cmhecke/zi.hpp"

#include <cmath>
#include <numeric>
#include <numbers>

namespace cmhecke {

int root_number_closed(std::int64_t d, std::int64_t k)
{
    require_odd_squarefree(d, "root_number_closed");
    if (k < 1) throw invalid_input("root_number_closed: k must be positive");
    if (k % 2 == 0) return 1;
    const int s = d > 0 ? 1 : -1;
    if (mod_pos(d, 4) == 1) {
        const std::int64_t d16 = mod_pos(d, 16);
        const bool low_k = mod_pos(k, 8) == 1 || mod_pos(k, 8) == 3;
        const bool flip = (d16 == 5 || d16 == 9);
        const int base = flip ? -s : s;
        return low_k ? base : -base;
    }
    const bool k1 = mod_pos(k, 4) == 1;
    if (mod_pos(d, 8) == 3) return k1 ? s : -s;
    return k1 ? -s : s;
}

namespace {

struct KahanComplex {
    std::complex<double> sum{0.0, 0.0};
    std::complex<double> comp{0.0, 0.0};
    void add(std::complex<double> v)
    {
        const std::complex<double> y = v - comp;
        const std::complex<double> t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

FourthRoot eta(std::int64_t d, std::int64_t k, const GaussianInt& x)
{
    if (k % 4 == 2) return char_two(x);
    switch (mod_pos(d, 8)) {
        case 1: return pow(char_two_plus_two_i(x), k);
        case 5: return pow(char_two_plus_two_i(x), k) * char_two(x);
        case 3: return pow(conj(char_four(x)), k) * char_two(x);
        case 7: return pow(conj(char_four(x)), k);
        default: break;
    }
    throw invalid_input("eta: d must be odd");
}

std::int64_t to_i64(i128 v) { return static_cast<std::int64_t>(v); }

}  // namespace

RootNumberResult root_number_gauss(std::int64_t d, std::int64_t k, std::int64_t cutoff)
{
    require_odd_squarefree(d, "root_number_gauss");
    if ((d < 0 ? -d : d) > cutoff) throw capacity_error("root_number_gauss: |d| above oracle cutoff");
    if (k < 1 || k > kGaussOracleMaxK) throw capacity_error("root_number_gauss: k outside oracle range");

    RootNumberResult res;
    res.method = RootNumberMethod::GaussSum;
    if (k % 4 == 0) return res;

    const std::int64_t ad = d < 0 ? -d : d;
    GaussianInt g;
    if (k % 4 == 2)
        g = GaussianInt{2};
    else
        g = mod_pos(d, 4) == 1 ? GaussianInt{2, 2} : GaussianInt{4};
    const GaussianInt f = g * GaussianInt{d};
    const GaussianInt gamma = g * GaussianInt{2 * ad};
    const std::int64_t nf = to_i64(norm(f));
    const std::int64_t ngamma = to_i64(norm(gamma));

    const ResidueBox box = residue_box(f);
    const std::int64_t A = box.width, B = box.height;

    const OddModulus dmod = factor_odd(d);
    KahanComplex acc;
    for (std::int64_t v = 0; v < B; ++v) {
        for (std::int64_t u = 0; u < A; ++u) {
            const GaussianInt x{u, v};
            const FourthRoot e = eta(d, k, x);
            if (e == FourthRoot::Zero) continue;
            const FourthRoot chi = quartic_symbol_odd(x, dmod);
            if (chi == FourthRoot::Zero) continue;
            const FourthRoot val = pow(conj(chi), k) * e;
            // tr(x / gamma) = 2 Re(x conj(gamma)) / N(gamma), reduced mod 1 exactly
            const std::int64_t t = mod_pos(to_i64(2 * (x * conj(gamma)).re), ngamma);
            const double phase = 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(ngamma);
            acc.add(to_complex(val) * std::polar(1.0, phase));
        }
    }

    const double arg_gamma = std::atan2(static_cast<double>(gamma.im), static_cast<double>(gamma.re));
    const std::complex<double> pref = std::polar(1.0, -0.5 * std::numbers::pi * static_cast<double>(k) +
                                                          static_cast<double>(k) * arg_gamma) /
                                      std::sqrt(static_cast<double>(nf));
    res.raw = pref * acc.sum;
    res.w = res.raw.real() >= 0 ? 1 : -1;
    res.residual = std::abs(res.raw - std::complex<double>(res.w, 0.0));
    if (res.residual > 1e-6) throw consistency_error("root_number_gauss: Gauss sum is not a sign");
    return res;
}

std::vector<int> s_minus(std::int64_t d)
{
    require_odd_squarefree(d, "s_minus");
    const bool pos = d > 0;
    if (mod_pos(d, 4) == 1) {
        const std::int64_t d16 = mod_pos(d, 16);
        if (d16 == 1 || d16 == 13) return pos ? std::vector<int>{5, 7} : std::vector<int>{1, 3};
        return pos ? std::vector<int>{1, 3} : std::vector<int>{5, 7};
    }
    if (mod_pos(d, 8) == 3) return pos ? std::vector<int>{3, 7} : std::vector<int>{1, 5};
    return pos ? std::vector<int>{1, 5} : std::vector<int>{3, 7};
}

std::vector<int> s_plus(std::int64_t d)
{
    const std::vector<int> minus = s_minus(d);
    std::vector<int> out;
    for (int a : {1, 3, 5, 7})
        if (minus[0] != a && minus[1] != a) out.push_back(a);
    return out;
}

Fraction negative_fraction(std::int64_t d, std::int64_t K)
{
    if (K < 1) throw invalid_input("negative_fraction: K must be positive");
    int pattern[8];
    for (int r = 0; r < 8; ++r) pattern[r] = root_number_closed(d, r + 1);
    std::int64_t neg_per_period = 0;
    for (int r = 0; r < 8; ++r) neg_per_period += pattern[r] < 0;
    std::int64_t count = (K / 8) * neg_per_period;
    for (std::int64_t r = 0; r < K % 8; ++r) count += pattern[r] < 0;
    const std::int64_t g = std::gcd(count, K);
    return {count / g, K / g};
}

}  // namespace cmhecke
