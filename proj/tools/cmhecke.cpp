// Command-line front end: root numbers, constants, densities, invariant suites.
#include "cmhecke/constants.hpp"
#include "cmhecke/density.hpp"
#include "cmhecke/errors.hpp"
#include "cmhecke/hecke.hpp"
#include "cmhecke/primes.hpp"
#include "cmhecke/rootnum.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>
#include <json.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

using namespace cmhecke;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kSchema = "cmhecke/1";

enum Exit { kOk = 0, kInvariantFailure = 2, kConfigError = 3 };

std::string num(double v) { return fmt::format("{:.17g}", v); }

struct Output {
    std::string path;
    std::string format = "json";

    void write(const std::string& text) const
    {
        if (path.empty() || path == "-") {
            std::cout << text;
            return;
        }
        std::ofstream os(path, std::ios::trunc);
        if (!os) throw capacity_error("cannot open output file " + path);
        os << text;
    }
};

json envelope(const std::string& command, json config)
{
    json j;
    j["schema"] = kSchema;
    j["command"] = command;
    j["config"] = std::move(config);
    return j;
}

std::string csv_header(const std::string& command, const json& config)
{
    std::string s = fmt::format("# schema={}\n# command={}\n", kSchema, command);
    for (const auto& [k, v] : config.items()) s += fmt::format("# {}={}\n", k, v.is_string() ? v.get<std::string>() : v.dump());
    return s;
}

json interval_json(const Interval& i) { return {{"center", i.center}, {"radius", i.radius}}; }

TestFunction parse_family(const std::string& family, double nu)
{
    if (family == "fejer") return TestFunction::fejer(nu);
    const std::string prefix = "polybump:";
    if (family.rfind(prefix, 0) == 0) {
        int m = 0;
        try {
            m = std::stoi(family.substr(prefix.size()));
        } catch (const std::exception&) {
            throw invalid_input("family: expected polybump:<m>");
        }
        return TestFunction::polybump(nu, m);
    }
    throw invalid_input("family: expected 'fejer' or 'polybump:<m>'");
}

NonvanishingCase parse_case(const std::string& c)
{
    if (c == "even") return NonvanishingCase::Even;
    if (c == "odd_plus" || c == "odd-plus") return NonvanishingCase::OddPlus;
    if (c == "odd_minus" || c == "odd-minus") return NonvanishingCase::OddMinus;
    throw invalid_input("case: expected even, odd_plus or odd_minus");
}

// ---- root-number / avg-sign

struct RootArgs {
    std::int64_t d = 1, k = 0, kmax = 0;
    bool oracle = false;
};

int cmd_root_number(const RootArgs& a, const Output& out)
{
    require_odd_squarefree(a.d, "root-number");
    if ((a.k > 0) == (a.kmax > 0)) throw invalid_input("root-number: give exactly one of --k, --kmax");
    const std::int64_t lo = a.k > 0 ? a.k : 1, hi = a.k > 0 ? a.k : a.kmax;
    json cfg = {{"d", a.d}, {"k_min", lo}, {"k_max", hi}, {"oracle", a.oracle}};
    bool all_agree = true;
    json rows = json::array();
    std::string csv = "k,alpha,w_closed" + std::string(a.oracle ? ",w_gauss,residual,agree\n" : "\n");
    for (std::int64_t k = lo; k <= hi; ++k) {
        const int w = root_number_closed(a.d, k);
        json row = {{"k", k}, {"alpha", (k - 1) % 8 + 1}, {"w_closed", w}};
        std::string line = fmt::format("{},{},{}", k, (k - 1) % 8 + 1, w);
        if (a.oracle) {
            const RootNumberResult g = root_number_gauss(a.d, k);
            row["w_gauss"] = g.w;
            row["residual"] = g.residual;
            row["agree"] = g.w == w;
            all_agree = all_agree && g.w == w;
            line += fmt::format(",{},{},{}", g.w, num(g.residual), g.w == w ? 1 : 0);
        }
        rows.push_back(row);
        csv += line + "\n";
    }
    if (out.format == "csv") {
        out.write(csv_header("root-number", cfg) + csv);
    } else {
        json j = envelope("root-number", cfg);
        j["rows"] = rows;
        if (a.oracle) j["all_agree"] = all_agree;
        out.write(j.dump(2) + "\n");
    }
    return all_agree ? kOk : kInvariantFailure;
}

int cmd_avg_sign(std::int64_t d, std::int64_t K, const Output& out)
{
    const Fraction f = negative_fraction(d, K);
    json cfg = {{"d", d}, {"K", K}};
    if (out.format == "csv") {
        out.write(csv_header("avg-sign", cfg) + "num,den,value\n" + fmt::format("{},{},{}\n", f.num, f.den, num(f.value())));
    } else {
        json j = envelope("avg-sign", cfg);
        j["negative_fraction"] = {{"num", f.num}, {"den", f.den}, {"value", f.value()}};
        j["s_minus"] = s_minus(d);
        out.write(j.dump(2) + "\n");
    }
    return kOk;
}

// ---- constants

struct ConstArgs {
    std::int64_t d = 1;
    int alpha = 8, J = 3;
    std::uint64_t x = kConstantsCutoff;
    std::string family;
    double nu = 0.4;
};

int cmd_constants(const ConstArgs& a, const Output& out)
{
    const PrimeTable t = sieve_cached(a.x);
    std::optional<std::vector<double>> derivs;
    json cfg = {{"d", a.d}, {"alpha", a.alpha}, {"J", a.J}, {"x", a.x}};
    if (!a.family.empty()) {
        const TestFunction f = parse_family(a.family, a.nu);
        derivs = f.fhat_derivs(std::max(a.J, 1));
        cfg["test_function"] = f.describe();
    }
    const ConstantsReport r = constants_report(a.d, a.alpha, a.J, a.x, t, derivs);
    const EulerConstantsTable& E = euler_constants();

    if (out.format == "csv") {
        std::string s = csv_header("constants", cfg) +
                        "j,c_ram,c_inert_d,c_inert,c_inert_radius,c_total,c_total_radius,T,T_tail,A,B\n";
        for (int j = 0; j <= a.J; ++j)
            s += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", j, num(r.ram[j]), num(r.inert_d[j]),
                             num(r.inert[j].center), num(r.inert[j].radius), num(r.total[j].center),
                             num(r.total[j].radius), num(r.T[j].value), num(r.T[j].tail_bound), num(r.A[j]),
                             num(r.B[j]));
        out.write(s);
        return kOk;
    }
    json j = envelope("constants", cfg);
    j["stieltjes"] = {{"euler_maclaurin_N", E.N}, {"J", E.J}};
    json per = json::array();
    for (int i = 0; i <= a.J; ++i) {
        per.push_back({{"j", i},
                       {"c_ram", r.ram[i]},
                       {"c_inert_d", r.inert_d[i]},
                       {"c_inert", interval_json(r.inert[i])},
                       {"c_total", interval_json(r.total[i])},
                       {"T", {{"value", r.T[i].value}, {"tail_bound", r.T[i].tail_bound}, {"cutoff", r.T[i].cutoff}}},
                       {"A", r.A[i]},
                       {"B", r.B[i]},
                       {"zeta_logderiv", r.zeta_part[i]},
                       {"L4_logderiv", r.L4_part[i]},
                       {"stieltjes_remainder_bound", E.remainder_bound[std::min<std::size_t>(i + 1, E.J)]},
                       {"stieltjes_stability", E.stability[std::min<std::size_t>(i + 1, E.J)]}});
    }
    j["constants"] = per;
    if (!r.C.empty()) {
        json C = json::array();
        for (std::size_t m = 0; m < r.C.size(); ++m)
            C.push_back({{"m", m + 1}, {"C", interval_json(r.C[m])}});
        j["C_m"] = C;
    }
    out.write(j.dump(2) + "\n");
    return kOk;
}

// ---- density

struct DensityArgs {
    std::int64_t d = 1;
    int alpha = 8, J = 3;
    std::vector<std::int64_t> K;
    double nu = 0.4;
    std::string family = "polybump:4";
    std::string mode = "exact";
    std::uint64_t x = kConstantsCutoff;
    unsigned threads = 1;
};

int cmd_density(const DensityArgs& a, const Output& out)
{
    if (a.K.empty()) throw invalid_input("density: --K needs at least one value");
    const TestFunction f = parse_family(a.family, a.nu);
    if (a.mode != "exact" && a.mode != "kernel") throw invalid_input("density: --mode must be exact or kernel");
    const DensityMode mode = a.mode == "exact" ? DensityMode::Exact : DensityMode::Kernel;
    const std::int64_t Kmax = *std::max_element(a.K.begin(), a.K.end());
    const DensityTables t = make_density_tables(a.d, Kmax, a.nu, a.x);

    // thread count does not affect results, so it is not part of the echoed config
    json cfg = {{"d", a.d}, {"alpha", a.alpha}, {"K", a.K}, {"J", a.J}, {"nu", a.nu},
                {"test_function", f.describe()}, {"mode", a.mode}, {"x", a.x}};
    std::vector<DensityReport> reps;
    for (std::int64_t K : a.K) reps.push_back(averaged_density(a.d, a.alpha, K, f, mode, a.J, t, a.threads));

    if (out.format == "csv") {
        std::string s = csv_header("density", cfg) + "K,measured";
        for (int j = 0; j <= a.J; ++j) s += fmt::format(",prediction_J{}", j);
        s += ",residual,split_term\n";
        for (const DensityReport& r : reps) {
            s += fmt::format("{},{}", r.K, num(r.measured));
            for (double v : r.prediction_by_J) s += "," + num(v);
            s += fmt::format(",{},{}\n", num(r.residual), num(r.split_term));
        }
        out.write(s);
        return kOk;
    }
    json j = envelope("density", cfg);
    json rows = json::array();
    for (const DensityReport& r : reps) {
        rows.push_back({{"K", r.K},
                        {"count", r.count},
                        {"measured", r.measured},
                        {"gamma", r.gamma_avg},
                        {"ram", r.ram_avg},
                        {"inert", r.inert_avg},
                        {"split_term", r.split_term},
                        {"main_term", r.main_term},
                        {"lower_order", r.lower_order},
                        {"lower_order_radius", r.lower_order_radius},
                        {"prediction_by_J", r.prediction_by_J},
                        {"prediction", r.prediction},
                        {"residual", r.residual}});
    }
    j["rows"] = rows;
    out.write(j.dump(2) + "\n");
    return kOk;
}

int cmd_nonvanishing(const std::string& c, double nu, const Output& out)
{
    const double v = nonvanishing_lower_bound(parse_case(c), nu);
    json cfg = {{"case", c}, {"nu", nu}};
    if (out.format == "csv") {
        out.write(csv_header("nonvanishing", cfg) + "bound\n" + num(v) + "\n");
    } else {
        json j = envelope("nonvanishing", cfg);
        j["bound"] = v;
        out.write(j.dump(2) + "\n");
    }
    return kOk;
}

int cmd_angles(std::int64_t d, std::uint64_t pmax, const Output& out)
{
    const PrimeTable t = sieve_cached(pmax);
    const AngleTable at = build_angle_table(d, t, pmax);
    json cfg = {{"d", d}, {"pmax", pmax}};
    std::string s = csv_header("angles", cfg) + "p,theta,z_re,z_im,a_p\n";
    for (const AngleEntry& e : at.entries) {
        if (e.divides_d) continue;
        const SplitPrimeRecord r = split_prime_record(d, e.p);
        s += fmt::format("{},{},{},{},{}\n", e.p, num(e.theta), to_string(r.z.re), to_string(r.z.im),
                         a_p_hecke(d, e.p));
    }
    out.write(s);
    return kOk;
}

// ---- verify

struct VerifyArgs {
    std::string suite;
    std::int64_t dmax = 15, pmax = 2000, kmax = 16;
    int nmax = 20;
    int count = 500;
};

struct SuiteResult {
    long checked = 0, failed = 0;
    std::string detail;
};

SuiteResult suite_ap(const VerifyArgs& a)
{
    SuiteResult r;
    for (std::int64_t d = -a.dmax; d <= a.dmax; ++d) {
        if (!is_odd_squarefree(d)) continue;
        for (std::int64_t p = 3; p <= a.pmax; p += 2) {
            if (!is_prime_u64(static_cast<std::uint64_t>(p)) || d % p == 0) continue;
            ++r.checked;
            if (a_p_hecke(d, p) != a_p_count(d, p)) ++r.failed;
        }
    }
    return r;
}

SuiteResult suite_angles(const VerifyArgs& a)
{
    SuiteResult r;
    const PrimeTable t = sieve_cached(static_cast<std::uint64_t>(a.pmax));
    const double two_pi = 2.0 * std::numbers::pi;
    double worst = 0.0;
    for (std::int64_t d : {1, 3}) {
        for (const AngleEntry& e : build_angle_table(d, t, static_cast<std::uint64_t>(a.pmax)).entries) {
            if (e.divides_d) continue;
            const SplitPrimeRecord s = split_prime_record(d, e.p);
            const double sp = std::sqrt(static_cast<double>(e.p));
            const double snap = std::hypot(sp * std::cos(e.theta) - static_cast<double>(s.z.re),
                                           sp * std::sin(e.theta) - static_cast<double>(s.z.im));
            worst = std::max(worst, snap);
            ++r.checked;
            if (snap >= 1e-6) ++r.failed;
            for (int n = 1; n <= a.nmax; ++n) {
                double m = std::fmod(8.0 * n * e.theta, two_pi);
                m = std::min(m, two_pi - m);
                ++r.checked;
                if (m < 2.0 * std::pow(static_cast<double>(e.p), -0.5 * n)) ++r.failed;
            }
        }
    }
    r.detail = fmt::format("max snap error {:.3g}", worst);
    return r;
}

SuiteResult suite_gamma()
{
    SuiteResult r;
    const EulerConstantsTable& E = euler_constants();
    const std::pair<double, double> table[] = {{E.gamma_a4[1][1], -0.154621845705},
                                               {E.gamma_a4[2][3], 0.058305123277},
                                               {E.gamma_chi4[1], -0.19290131679},
                                               {E.gamma_chi4[3], -0.0948828592}};
    double worst = 0.0;
    for (auto [v, t] : table) {
        ++r.checked;
        worst = std::max(worst, std::fabs(v - t));
        if (std::fabs(v - t) > 1e-8) ++r.failed;
    }
    for (int n = 0; n <= 6; ++n) {
        double s = 0.0;
        for (int a = 1; a <= 4; ++a) s += E.gamma_a4[n][a];
        ++r.checked;
        if (std::fabs(s - E.gamma[n]) > 1e-8) ++r.failed;
    }
    r.detail = fmt::format("max table deviation {:.3g}", worst);
    return r;
}

SuiteResult suite_rootnum(const VerifyArgs& a)
{
    SuiteResult r;
    double worst = 0.0;
    for (std::int64_t d = -a.dmax; d <= a.dmax; ++d) {
        if (!is_odd_squarefree(d)) continue;
        for (std::int64_t k = 1; k <= a.kmax; ++k) {
            const RootNumberResult g = root_number_gauss(d, k);
            worst = std::max(worst, g.residual);
            ++r.checked;
            if (g.w != root_number_closed(d, k) || g.residual > 1e-9) ++r.failed;
        }
    }
    r.detail = fmt::format("max residual {:.3g}", worst);
    return r;
}

SuiteResult suite_reciprocity(const VerifyArgs& a)
{
    SuiteResult r;
    std::mt19937_64 rng(12345);
    auto random_prime = [&]() {
        std::uniform_int_distribution<std::int64_t> pick(3, 10000);
        for (;;) {
            const std::int64_t p = pick(rng);
            if (!is_prime_u64(static_cast<std::uint64_t>(p))) continue;
            if (p % 4 == 3) {
                if (p * p > 10000) continue;
                return primary_generator(GaussianInt(p));
            }
            GaussianInt pi = split_rational_prime(p);
            if (rng() & 1) pi = conj(pi);
            return primary_generator(pi);
        }
    };
    while (r.checked < a.count) {
        const GaussianInt x = random_prime(), y = random_prime();
        if (norm(gcd(x, y)) != 1) continue;
        const i128 e = ((norm(x) - 1) / 4) * ((norm(y) - 1) / 4);
        const FourthRoot sign = e % 2 == 0 ? FourthRoot::One : FourthRoot::MinusOne;
        ++r.checked;
        if (quartic_symbol_prime(x, y) != quartic_symbol_prime(y, x) * sign) ++r.failed;
    }
    return r;
}

SuiteResult suite_polylog()
{
    SuiteResult r;
    const long double s2 = std::sqrt(2.0L);
    double worst = 0.0;
    for (int j = 0; j <= 10; ++j) {
        for (long double z : {0.5L, -0.5L, 1 / s2, -1 / s2, 1.0L / 9}) {
            __float128 s = 0, zn = 1;
            for (int n = 1; n <= 6000; ++n) {
                zn *= static_cast<__float128>(z);
                __float128 nj = 1;
                for (int i = 0; i < j; ++i) nj *= n;
                s += nj * zn;
            }
            const double b = static_cast<double>(s);
            const double rel = std::fabs(static_cast<double>(polylog_neg_ld(j, z)) - b) / std::max(1.0, std::fabs(b));
            worst = std::max(worst, rel);
            ++r.checked;
            if (rel > 1e-12) ++r.failed;
        }
    }
    r.detail = fmt::format("max relative deviation from converged series {:.3g}", worst);
    return r;
}

SuiteResult suite_bell()
{
    using boost::multiprecision::cpp_rational;
    SuiteResult r;
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> num_d(-30, 30), den_d(1, 13);
    std::vector<cpp_rational> xs;
    for (int i = 0; i < 8; ++i) xs.emplace_back(num_d(rng), den_d(rng));
    auto fact = [](int m) {
        cpp_rational f = 1;
        for (int i = 2; i <= m; ++i) f *= i;
        return f;
    };
    for (int n = 1; n <= 8; ++n) {
        for (int k = 1; k <= n; ++k) {
            cpp_rational total = 0;
            std::vector<int> js(static_cast<std::size_t>(n + 1), 0);
            std::function<void(int, int, int)> rec = [&](int i, int lk, int ln) {
                if (i > n) {
                    if (lk != 0 || ln != 0) return;
                    cpp_rational term = fact(n);
                    for (int q = 1; q <= n; ++q) {
                        for (int b = 0; b < js[q]; ++b) term *= xs[q - 1] / fact(q);
                        term /= fact(js[q]);
                    }
                    total += term;
                    return;
                }
                for (int m = 0; m <= lk && m * i <= ln; ++m) {
                    js[i] = m;
                    rec(i + 1, lk - m, ln - m * i);
                }
                js[i] = 0;
            };
            rec(1, k, n);
            ++r.checked;
            if (bell_partial<cpp_rational>(n, k, xs) != total) ++r.failed;
        }
    }
    return r;
}

int cmd_verify(const VerifyArgs& a, const Output& out)
{
    SuiteResult r;
    json cfg = {{"suite", a.suite}};
    if (a.suite == "ap") {
        if (a.pmax > kPointCountCutoff) throw capacity_error("verify ap: --pmax above the point-count cutoff");
        cfg["dmax"] = a.dmax;
        cfg["pmax"] = a.pmax;
        r = suite_ap(a);
    } else if (a.suite == "angles") {
        cfg["pmax"] = a.pmax;
        cfg["nmax"] = a.nmax;
        r = suite_angles(a);
    } else if (a.suite == "gamma") {
        r = suite_gamma();
    } else if (a.suite == "rootnum") {
        cfg["dmax"] = a.dmax;
        cfg["kmax"] = a.kmax;
        r = suite_rootnum(a);
    } else if (a.suite == "reciprocity") {
        cfg["count"] = a.count;
        r = suite_reciprocity(a);
    } else if (a.suite == "polylog") {
        r = suite_polylog();
    } else if (a.suite == "bell") {
        r = suite_bell();
    } else {
        throw invalid_input("verify: unknown suite '" + a.suite + "'");
    }
    const bool ok = r.failed == 0;
    if (out.format == "csv") {
        out.write(csv_header("verify", cfg) + "checked,failed,status\n" +
                  fmt::format("{},{},{}\n", r.checked, r.failed, ok ? "pass" : "fail"));
    } else {
        json j = envelope("verify", cfg);
        j["checked"] = r.checked;
        j["failed"] = r.failed;
        j["status"] = ok ? "pass" : "fail";
        if (!r.detail.empty()) j["detail"] = r.detail;
        out.write(j.dump(2) + "\n");
    }
    return ok ? kOk : kInvariantFailure;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hecke characters of the curves y^2 = x^3 - dx: root numbers, constants, one-level densities"};
    app.require_subcommand(1);
    Output out;
    auto add_output = [&out](CLI::App* c, const std::string& def) {
        out.format = def;
        c->add_option("--format", out.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
        c->add_option("-o,--output", out.path, "Output file (default stdout)");
    };
    std::function<int()> run;

    RootArgs ra;
    auto* rn = app.add_subcommand("root-number", "Root numbers W(xi_{d,k})");
    rn->add_option("--d", ra.d, "Odd square-free d")->required();
    rn->add_option("--k", ra.k, "Single k");
    rn->add_option("--kmax", ra.kmax, "All k in 1..kmax");
    rn->add_flag("--oracle", ra.oracle, "Add the Gauss-sum oracle column");
    rn->callback([&] { run = [&] { return cmd_root_number(ra, out); }; });

    std::int64_t as_d = 1, as_K = 10000;
    auto* as = app.add_subcommand("avg-sign", "Fraction of k <= K with root number -1");
    as->add_option("--d", as_d)->required();
    as->add_option("--K", as_K)->required();
    as->callback([&] { run = [&] { return cmd_avg_sign(as_d, as_K, out); }; });

    ConstArgs ca;
    auto* cs = app.add_subcommand("constants", "Lower-order constants c_j(d, alpha) and C_m");
    cs->add_option("--d", ca.d)->required();
    cs->add_option("--alpha", ca.alpha)->required();
    cs->add_option("--J", ca.J, "Largest index j")->capture_default_str();
    cs->add_option("--x", ca.x, "Prime cutoff for the p = 3 mod 4 sums")->capture_default_str();
    cs->add_option("--family", ca.family, "Test function for C_m: fejer | polybump:<m>");
    cs->add_option("--nu", ca.nu, "Support radius of the test function")->capture_default_str();
    cs->callback([&] { run = [&] { return cmd_constants(ca, out); }; });

    DensityArgs da;
    auto* dn = app.add_subcommand("density", "k-averaged one-level density against the prediction");
    dn->add_option("--d", da.d)->required();
    dn->add_option("--alpha", da.alpha)->required();
    dn->add_option("--K", da.K, "Comma-separated cutoffs")->required()->delimiter(',');
    dn->add_option("--nu", da.nu)->capture_default_str();
    dn->add_option("--family", da.family)->capture_default_str();
    dn->add_option("--J", da.J)->capture_default_str();
    dn->add_option("--mode", da.mode)->capture_default_str();
    dn->add_option("--x", da.x, "Prime cutoff for the constants")->capture_default_str();
    dn->add_option("--threads", da.threads)->capture_default_str();
    dn->callback([&] { run = [&] { return cmd_density(da, out); }; });

    std::string nv_case;
    double nv_nu = 0.999;
    auto* nv = app.add_subcommand("nonvanishing", "Lower bound for the proportion of non-vanishing");
    nv->add_option("--case", nv_case)->required();
    nv->add_option("--nu", nv_nu)->capture_default_str();
    nv->callback([&] { run = [&] { return cmd_nonvanishing(nv_case, nv_nu, out); }; });

    std::int64_t an_d = 1;
    std::uint64_t an_pmax = 1000;
    auto* an = app.add_subcommand("angles", "Split-prime angles as CSV");
    an->add_option("--d", an_d)->required();
    an->add_option("--pmax", an_pmax)->capture_default_str();
    an->callback([&] { run = [&] { return cmd_angles(an_d, an_pmax, out); }; });

    VerifyArgs va;
    auto* vf = app.add_subcommand("verify", "Run an invariant suite");
    vf->add_option("--suite", va.suite)
        ->required()
        ->check(CLI::IsMember({"ap", "angles", "gamma", "rootnum", "reciprocity", "polylog", "bell"}));
    vf->add_option("--dmax", va.dmax)->capture_default_str();
    vf->add_option("--pmax", va.pmax)->capture_default_str();
    vf->add_option("--kmax", va.kmax)->capture_default_str();
    vf->add_option("--nmax", va.nmax)->capture_default_str();
    vf->add_option("--count", va.count)->capture_default_str();
    vf->callback([&] { run = [&] { return cmd_verify(va, out); }; });

    add_output(rn, "json");
    add_output(as, "json");
    add_output(cs, "json");
    add_output(dn, "csv");
    add_output(nv, "json");
    add_output(an, "csv");
    add_output(vf, "json");
    // every subcommand shares one Output; its default format is set by the last add_output
    for (auto* c : {rn, as, cs, nv, vf}) c->preparse_callback([&](std::size_t) { out.format = "json"; });
    for (auto* c : {dn, an}) c->preparse_callback([&](std::size_t) { out.format = "csv"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }
    try {
        return run();
    } catch (const invalid_input& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const capacity_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const consistency_error& e) {
        std::cerr << "internal inconsistency: " << e.what() << "\n";
        return kInvariantFailure;
    }
}
