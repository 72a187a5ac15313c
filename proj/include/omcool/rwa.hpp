#pragma once

// Closed-form results of the rotating-wave treatment with the cavity
// adiabatically eliminated into an optical damping Gamma on mode b.

#include <cstdint>
#include <string>
#include <vector>

#include "omcool/model.hpp"

namespace omcool {

// Validity of the closed forms, each tested with a factor-of-10 margin.
struct RegimeFlags {
    bool near_degenerate = false;    // |wb - wa| * 10 < gb + Gamma
    bool sideband_resolved = false;  // kappa > 10 (gb + Gamma)
    bool damping_hierarchy = false;  // (gb + Gamma) / ga > 10 C_ab
    bool strong_ab_coupling = false; // C_ab > 10
    bool weak_coupling = false;      // lambda, |alpha g0| < w_a / 10

    bool all() const;
    // bit 0..4 in declaration order
    std::uint32_t bitmask() const;
    std::vector<std::string> violated() const;
};

RegimeFlags regime_flags(const SystemSpec& spec, double Gamma);

struct CoolingSummary {
    double Gamma = 0.0;          // optical damping of b, rad/s
    double Gamma_a = 0.0;        // induced damping of a, rad/s
    double C_ab = 0.0;
    double C_OM = 0.0;
    double n_eff = 0.0;
    double linewidth_a = 0.0;    // gamma_a + Gamma_a, rad/s
    double omega_a_pulled = 0.0; // rad/s, evaluated at w = w_a
    RegimeFlags flags;
};

double optical_damping(double alpha_g0, double kappa);
// Gamma of the spec's stored drive.
double optical_damping(const SystemSpec& spec);

cdouble chi_b(double omega, const SystemSpec& spec, double Gamma);
cdouble chi_a(double omega, const SystemSpec& spec, double Gamma);

struct ModeAResponse {
    double omega_a_pulled = 0.0;
    double gamma_a_prime = 0.0;
};

ModeAResponse mode_a_response(double omega, const SystemSpec& spec, double Gamma);

double induced_damping(double lambda, double gamma_b, double Gamma);

double ab_cooperativity(double lambda, double gamma_a, double gamma_b);
double ab_cooperativity(const SystemSpec& spec);

struct ClosedFormOccupation {
    double n_eff = 0.0;
    RegimeFlags flags;
};

// Weighted bath average for degenerate modes. Reported n_eff follows
// n_eff + 1/2 = <(a + a^dag)^2> / 2.
ClosedFormOccupation n_eff_closed_form(const SystemSpec& spec, double Gamma, double nbar_a,
                                       double nbar_b);
ClosedFormOccupation n_eff_closed_form(const SystemSpec& spec, double Gamma, double nbar);

// Same weighting with the induced damping taken from the detuned response of
// mode a at w = w_a. Reduces to n_eff_closed_form when w_a == w_b.
ClosedFormOccupation n_eff_detuned(const SystemSpec& spec, double Gamma, double nbar_a,
                                   double nbar_b);

double optimal_cooperativity(double C_ab);
double cooling_limit_ratio(double C_ab);
// gamma_a * sqrt(1 + C_ab): linewidth of a at the optimum.
double narrowed_linewidth(double gamma_a, double C_ab);

CoolingSummary cooling_summary(const SystemSpec& spec, double Gamma);

struct ForceNoise {
    double S_FF = 0.0;       // one-sided, N^2/Hz
    double factor = 0.0;     // 1 + C_ab / (1 + C_OM)^2
    bool classical = false;  // nbar(w_a, T) > 10
};

ForceNoise force_noise_psd(const SystemSpec& spec, double Gamma, double temperature);

}  // namespace omcool
