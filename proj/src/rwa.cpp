#include "omcool/rwa.hpp"

#include <cmath>
#include <limits>

#include "omcool/errors.hpp"
#include "omcool/units.hpp"

namespace omcool {

namespace {

constexpr cdouble I{0.0, 1.0};
constexpr double kRegimeMargin = 10.0;

}  // namespace

bool RegimeFlags::all() const
{
    return near_degenerate && sideband_resolved && damping_hierarchy && strong_ab_coupling &&
           weak_coupling;
}

std::uint32_t RegimeFlags::bitmask() const
{
    return (near_degenerate ? 1u : 0u) | (sideband_resolved ? 2u : 0u) |
           (damping_hierarchy ? 4u : 0u) | (strong_ab_coupling ? 8u : 0u) |
           (weak_coupling ? 16u : 0u);
}

std::vector<std::string> RegimeFlags::violated() const
{
    std::vector<std::string> out;
    if (!near_degenerate) out.emplace_back("near_degenerate");
    if (!sideband_resolved) out.emplace_back("sideband_resolved");
    if (!damping_hierarchy) out.emplace_back("damping_hierarchy");
    if (!strong_ab_coupling) out.emplace_back("strong_ab_coupling");
    if (!weak_coupling) out.emplace_back("weak_coupling");
    return out;
}

RegimeFlags regime_flags(const SystemSpec& spec, double Gamma)
{
    const double gb_total = spec.mode_b.gamma + Gamma;
    const double C_ab = ab_cooperativity(spec);
    const double wa = spec.mode_a.omega;

    RegimeFlags f;
    f.near_degenerate = kRegimeMargin * std::abs(spec.mode_b.omega - wa) < gb_total;
    f.sideband_resolved = spec.cavity.kappa > kRegimeMargin * gb_total;
    f.damping_hierarchy = gb_total > kRegimeMargin * C_ab * spec.mode_a.gamma;
    f.strong_ab_coupling = C_ab > kRegimeMargin;
    f.weak_coupling = kRegimeMargin * spec.lambda < wa && kRegimeMargin * spec.cavity.coupling() < wa;
    return f;
}

double optical_damping(double alpha_g0, double kappa)
{
    if (!(kappa > 0.0)) throw Error(ErrorKind::domain, "optical_damping: kappa must be > 0");
    return 4.0 * alpha_g0 * alpha_g0 / kappa;
}

double optical_damping(const SystemSpec& spec)
{
    return optical_damping(spec.cavity.coupling(), spec.cavity.kappa);
}

cdouble chi_b(double omega, const SystemSpec& spec, double Gamma)
{
    return 1.0 / (-I * (omega - spec.mode_b.omega) + 0.5 * (spec.mode_b.gamma + Gamma));
}

cdouble chi_a(double omega, const SystemSpec& spec, double Gamma)
{
    const double lam2 = spec.lambda * spec.lambda;
    return 1.0 / (-I * (omega - spec.mode_a.omega) + 0.5 * spec.mode_a.gamma +
                  chi_b(omega, spec, Gamma) * lam2);
}

ModeAResponse mode_a_response(double omega, const SystemSpec& spec, double Gamma)
{
    const double lam2 = spec.lambda * spec.lambda;
    const double dw = omega - spec.mode_b.omega;
    const double width = spec.mode_b.gamma + Gamma;
    const double denom = dw * dw + 0.25 * width * width;
    if (lam2 == 0.0) return {spec.mode_a.omega, spec.mode_a.gamma};
    return {spec.mode_a.omega + lam2 * dw / denom, spec.mode_a.gamma + lam2 * width / denom};
}

double induced_damping(double lambda, double gamma_b, double Gamma)
{
    const double total = gamma_b + Gamma;
    if (!(total > 0.0)) {
        throw Error(ErrorKind::domain, "induced_damping: gamma_b + Gamma must be > 0");
    }
    return 4.0 * lambda * lambda / total;
}

double ab_cooperativity(double lambda, double gamma_a, double gamma_b)
{
    const double denom = gamma_a * gamma_b;
    if (denom == 0.0) return lambda == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return 4.0 * lambda * lambda / denom;
}

double ab_cooperativity(const SystemSpec& spec)
{
    return ab_cooperativity(spec.lambda, spec.mode_a.gamma, spec.mode_b.gamma);
}

namespace {

ClosedFormOccupation weighted_occupation(const SystemSpec& spec, double Gamma, double Gamma_a,
                                         double nbar_a, double nbar_b)
{
    const double ga = spec.mode_a.gamma;
    const double gb = spec.mode_b.gamma;
    const double total = ga + Gamma_a;
    if (!(total > 0.0)) {
        throw Error(ErrorKind::domain, "n_eff: mode a has zero total damping");
    }
    ClosedFormOccupation out;
    out.n_eff = (ga * nbar_a + Gamma_a * (gb / (Gamma + gb)) * nbar_b) / total;
    out.flags = regime_flags(spec, Gamma);
    return out;
}

}  // namespace

ClosedFormOccupation n_eff_closed_form(const SystemSpec& spec, double Gamma, double nbar_a,
                                       double nbar_b)
{
    const double Gamma_a = induced_damping(spec.lambda, spec.mode_b.gamma, Gamma);
    return weighted_occupation(spec, Gamma, Gamma_a, nbar_a, nbar_b);
}

ClosedFormOccupation n_eff_closed_form(const SystemSpec& spec, double Gamma, double nbar)
{
    return n_eff_closed_form(spec, Gamma, nbar, nbar);
}

ClosedFormOccupation n_eff_detuned(const SystemSpec& spec, double Gamma, double nbar_a,
                                   double nbar_b)
{
    if (!(spec.mode_b.gamma + Gamma > 0.0)) {
        throw Error(ErrorKind::domain, "n_eff: gamma_b + Gamma must be > 0");
    }
    const auto response = mode_a_response(spec.mode_a.omega, spec, Gamma);
    return weighted_occupation(spec, Gamma, response.gamma_a_prime - spec.mode_a.gamma, nbar_a,
                               nbar_b);
}

double optimal_cooperativity(double C_ab)
{
    if (!(C_ab >= 0.0)) throw Error(ErrorKind::domain, "optimal_cooperativity: C_ab must be >= 0");
    return std::sqrt(1.0 + C_ab);
}

double cooling_limit_ratio(double C_ab)
{
    if (!(C_ab >= 0.0)) throw Error(ErrorKind::domain, "cooling_limit_ratio: C_ab must be >= 0");
    return 2.0 / (1.0 + std::sqrt(1.0 + C_ab));
}

double narrowed_linewidth(double gamma_a, double C_ab)
{
    return gamma_a * optimal_cooperativity(C_ab);
}

CoolingSummary cooling_summary(const SystemSpec& spec, double Gamma)
{
    const auto baths = bath_occupations(spec);
    CoolingSummary s;
    s.Gamma = Gamma;
    s.Gamma_a = induced_damping(spec.lambda, spec.mode_b.gamma, Gamma);
    s.C_ab = ab_cooperativity(spec);
    s.C_OM = spec.mode_b.gamma > 0.0 ? Gamma / spec.mode_b.gamma
                                     : std::numeric_limits<double>::infinity();
    s.n_eff = n_eff_closed_form(spec, Gamma, baths.nbar_a, baths.nbar_b).n_eff;
    s.linewidth_a = spec.mode_a.gamma + s.Gamma_a;
    s.omega_a_pulled = mode_a_response(spec.mode_a.omega, spec, Gamma).omega_a_pulled;
    s.flags = regime_flags(spec, Gamma);
    return s;
}

ForceNoise force_noise_psd(const SystemSpec& spec, double Gamma, double temperature)
{
    if (!(temperature > 0.0)) throw Error(ErrorKind::domain, "force_noise_psd: temperature must be > 0");
    const double ga = spec.mode_a.gamma;
    const double gb = spec.mode_b.gamma;
    const double total_b = gb + Gamma;
    if (!(total_b > 0.0)) throw Error(ErrorKind::domain, "force_noise_psd: gamma_b + Gamma must be > 0");

    // m [ga + 4 lam^2 gb / (gb + Gamma)^2] kB T, which is the bracketed form
    // 1 + C_ab / (1 + C_OM)^2 times m ga kB T.
    const double effective_rate = ga + 4.0 * spec.lambda * spec.lambda * gb / (total_b * total_b);
    ForceNoise out;
    out.S_FF = spec.mass_a * effective_rate * kBoltzmann * temperature;
    out.factor = ga > 0.0 ? effective_rate / ga : std::numeric_limits<double>::infinity();
    out.classical = thermal_occupation(spec.mode_a.omega, temperature) > 10.0;
    return out;
}

}  // namespace omcool
