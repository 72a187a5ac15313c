#include "omcool/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "omcool/errors.hpp"

namespace omcool {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kOptimumTolerance = 1e-4;  // relative, in C_OM
constexpr int kBracketSamples = 17;

bool per_point_failure(const Error& e)
{
    return exit_code(e.kind()) >= 2;
}

double temperature_ratio(const SystemSpec& spec, double n_eff)
{
    const double T = spec.mode_a.bath_temperature;
    if (!(T > 0.0)) return kNaN;
    return effective_temperature(std::max(0.0, n_eff), spec.mode_a.omega) / T;
}

void push_point(SweepResult& out, double value, double C_OM, const SystemSpec& spec, Fidelity fidelity,
                const GridOptions& grid)
{
    out.values.push_back(value);
    out.C_OM.push_back(C_OM);
    try {
        const auto p = evaluate_cooling(spec, fidelity, grid);
        out.n_eff.push_back(p.n_eff);
        out.T_ratio.push_back(p.T_ratio);
        out.linewidths.push_back(p.linewidth);
        out.validity_flags.push_back(p.flags);
        out.errors.emplace_back(std::nullopt);
    } catch (const Error& e) {
        if (!per_point_failure(e)) throw;
        out.n_eff.push_back(kNaN);
        out.T_ratio.push_back(kNaN);
        out.linewidths.push_back(kNaN);
        out.validity_flags.push_back(regime_flags(spec, optical_damping(spec)));
        out.errors.emplace_back(std::string(kind_name(e.kind())) + ": " + e.what());
    }
}

}  // namespace

CoolingPoint evaluate_cooling(const SystemSpec& spec, Fidelity fidelity, const GridOptions& grid)
{
    const auto baths = bath_occupations(spec);
    const double Gamma = optical_damping(spec);
    CoolingPoint p;
    if (fidelity == Fidelity::rwa) {
        const auto occ = n_eff_detuned(spec, Gamma, baths.nbar_a, baths.nbar_b);
        p.n_eff = occ.n_eff;
        p.flags = occ.flags;
        p.linewidth = mode_a_response(spec.mode_a.omega, spec, Gamma).gamma_a_prime;
    } else {
        const auto model = build_full_system(spec, baths);
        require_stable(model);
        const auto spectrum = position_spectrum(model, "a", grid);
        p.n_eff = spectrum.n_eff;
        p.flags = regime_flags(spec, Gamma);
        p.linewidth = dominant_resonance(model, "a").fwhm;
    }
    p.T_ratio = temperature_ratio(spec, p.n_eff);
    return p;
}

SystemSpec at_cooperativity(const SystemSpec& spec, double C_OM)
{
    if (!(C_OM >= 0.0)) throw Error(ErrorKind::domain, "C_OM must be >= 0");
    if (!(spec.mode_b.gamma > 0.0)) throw Error(ErrorKind::domain, "C_OM needs gamma_b > 0");
    return with_optical_damping(spec, C_OM * spec.mode_b.gamma);
}

SweepResult sweep_cooperativity(const SystemSpec& spec, const std::vector<double>& C_OM_values,
                                Fidelity fidelity, const GridOptions& grid)
{
    for (std::size_t i = 0; i < C_OM_values.size(); ++i) {
        if (!(C_OM_values[i] >= 0.0)) throw Error(ErrorKind::domain, "C_OM values must be >= 0");
        if (i > 0 && C_OM_values[i] < C_OM_values[i - 1]) {
            throw Error(ErrorKind::domain, "C_OM values must be sorted");
        }
    }
    SweepResult out;
    out.axis = "C_OM";
    for (double c : C_OM_values) push_point(out, c, c, at_cooperativity(spec, c), fidelity, grid);
    return out;
}

Optimum find_optimum(const SystemSpec& spec, double C_OM_lo, double C_OM_hi, Fidelity fidelity,
                     const GridOptions& grid)
{
    if (!(C_OM_lo > 0.0) || !(C_OM_hi > C_OM_lo)) {
        throw Error(ErrorKind::domain, "find_optimum: need 0 < lo < hi");
    }
    auto objective = [&](double log_c) {
        return evaluate_cooling(at_cooperativity(spec, std::exp(log_c)), fidelity, grid).n_eff;
    };

    const double u_lo = std::log(C_OM_lo);
    const double u_hi = std::log(C_OM_hi);
    std::vector<double> u(kBracketSamples);
    std::vector<double> f(kBracketSamples);
    for (int i = 0; i < kBracketSamples; ++i) {
        u[i] = u_lo + (u_hi - u_lo) * i / (kBracketSamples - 1);
        f[i] = objective(u[i]);
    }
    const auto k = static_cast<int>(std::min_element(f.begin(), f.end()) - f.begin());
    if (k == 0 || k == kBracketSamples - 1 || !(f[k] < f[k - 1]) || !(f[k] < f[k + 1])) {
        throw Error(ErrorKind::no_minimum, "no interior minimum of n_eff in C_OM bracket [" +
                                               std::to_string(C_OM_lo) + ", " + std::to_string(C_OM_hi) + "]");
    }

    // Golden-section search on [u[k-1], u[k+1]].
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = u[k - 1];
    double b = u[k + 1];
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    while (b - a > kOptimumTolerance) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = objective(d);
        }
    }
    Optimum opt;
    opt.C_OM_star = std::exp(0.5 * (a + b));
    opt.n_eff_star = objective(0.5 * (a + b));
    const double nbar = bath_occupations(spec).nbar_a;
    opt.n_ratio = nbar > 0.0 ? opt.n_eff_star / nbar : kNaN;
    return opt;
}

SweepResult sweep_detuning(const SystemSpec& spec, const std::vector<double>& deltas, Fidelity fidelity,
                           DetuningMode mode, double C_OM, const GridOptions& grid, double optimize_lo,
                           double optimize_hi)
{
    SweepResult out;
    out.axis = "detuning";
    for (double delta : deltas) {
        if (!(delta >= 0.0)) throw Error(ErrorKind::domain, "detuning values must be >= 0");
        SystemSpec shifted = spec;
        shifted.mode_b.omega = spec.mode_a.omega + delta;
        shifted.cavity = CavityDrive::from_alpha(spec.cavity.kappa,
                                                 spec.cavity.detuning - (shifted.mode_b.omega - spec.mode_b.omega),
                                                 spec.cavity.g0, spec.cavity.alpha, spec.cavity.bath_temperature);
        if (mode == DetuningMode::fixed_cooperativity) {
            push_point(out, delta, C_OM, at_cooperativity(shifted, C_OM), fidelity, grid);
            continue;
        }
        try {
            const auto opt = find_optimum(shifted, optimize_lo, optimize_hi, fidelity, grid);
            push_point(out, delta, opt.C_OM_star, at_cooperativity(shifted, opt.C_OM_star), fidelity, grid);
        } catch (const Error& e) {
            if (!per_point_failure(e)) throw;
            out.values.push_back(delta);
            out.C_OM.push_back(kNaN);
            out.n_eff.push_back(kNaN);
            out.T_ratio.push_back(kNaN);
            out.linewidths.push_back(kNaN);
            out.validity_flags.push_back(regime_flags(shifted, optical_damping(shifted)));
            out.errors.emplace_back(std::string(kind_name(e.kind())) + ": " + e.what());
        }
    }
    return out;
}

std::vector<double> log_spaced(double lo, double hi, int per_decade)
{
    if (!(lo > 0.0) || !(hi >= lo) || per_decade < 1) {
        throw Error(ErrorKind::domain, "log_spaced: need 0 < lo <= hi and per_decade >= 1");
    }
    const double decades = std::log10(hi / lo);
    const auto n = static_cast<int>(std::lround(decades * per_decade));
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) out.push_back(lo * std::pow(10.0, static_cast<double>(i) / per_decade));
    if (n > 0) out.back() = hi;
    return out;
}

std::vector<double> default_cooperativity_axis() { return log_spaced(1e-2, 1e3, 60); }

}  // namespace omcool
