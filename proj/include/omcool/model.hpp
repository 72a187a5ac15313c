#pragma once

// Physical data model of the pumped three-mode system (two mechanical modes
// plus one optical cavity) and its linearised Langevin equations.
//
// Operator bases
//   rotating-wave model : (c, a, b)
//   full model          : (a, a_dag, b, b_dag, c, c_dag)
//
// Both models are written as  d/dt x = A x + B x_in  with diagonal input
// correlations; in the frequency domain x(w) = (-i w I - A)^-1 B x_in(w).

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace omcool {

using cdouble = std::complex<double>;

struct MechanicalMode {
    double omega = 0.0;             // rad/s
    double gamma = 0.0;             // energy damping rate, rad/s
    double bath_temperature = 0.0;  // K

    // omega / gamma; +inf for an undamped mode.
    double quality_factor() const;
    void validate(std::string_view name) const;

    bool operator==(const MechanicalMode&) const = default;
};

struct CavityDrive {
    double kappa = 0.0;      // energy decay rate, rad/s
    double detuning = 0.0;   // pump minus cavity frequency, rad/s
    double g0 = 0.0;         // vacuum optomechanical coupling, rad/s
    cdouble pump{0.0, 0.0};  // pump strength E, rad/s
    cdouble alpha{0.0, 0.0}; // intracavity amplitude
    double bath_temperature = 0.0;

    // Derives alpha from the pump; alpha is otherwise stored as given.
    static CavityDrive from_pump(double kappa, double detuning, double g0, cdouble pump,
                                 double bath_temperature = 0.0);

    // Drive specified through alpha directly; the pump is back-computed so
    // that the alpha/pump consistency relation holds.
    static CavityDrive from_alpha(double kappa, double detuning, double g0, cdouble alpha,
                                  double bath_temperature = 0.0);

    // Enhanced coupling |alpha g0|.
    double coupling() const;
    void validate() const;

    bool operator==(const CavityDrive&) const = default;
};

struct SystemSpec {
    MechanicalMode mode_a;
    MechanicalMode mode_b;
    CavityDrive cavity;
    double lambda = 0.0;   // a-b coupling, rad/s
    double mass_a = 1e-15; // effective mass of mode a, kg

    void validate() const;

    bool operator==(const SystemSpec&) const = default;
};

// Mean bath occupations at the carrier frequencies.
struct ThermalBathSpec {
    double nbar_a = 0.0;
    double nbar_b = 0.0;
    double nbar_c = 0.0;
};

// n_a at omega_a; n_b at omega_a when both baths share a temperature and at
// omega_b otherwise; n_c from the cavity bath temperature at |detuning|.
ThermalBathSpec bath_occupations(const SystemSpec& spec);

enum class Fidelity { rwa, full };

std::string_view fidelity_name(Fidelity f);
Fidelity parse_fidelity(std::string_view text);

struct DriftModel {
    Fidelity fidelity = Fidelity::rwa;
    Eigen::MatrixXcd drift;        // A, rad/s
    Eigen::MatrixXd noise_input;   // B, sqrt(rad/s); one column per input channel
    // <v_j(w) v_j(w')^dag> / delta(w - w') per input channel.
    Eigen::VectorXd correlations;
    // Same channel's weight in the time-reversed correlator. For the
    // rotating-wave model this is nbar (vs nbar + 1); for the full model it is
    // the conjugate partner's entry.
    Eigen::VectorXd conjugate_correlations;
    std::vector<std::string> labels;
    // Index of the Hermitian-conjugate partner of each basis operator, or -1.
    std::vector<int> partner;

    int dimension() const { return static_cast<int>(drift.rows()); }
    std::optional<int> index_of(std::string_view label) const;
    // Index of a label, throwing a domain error when absent.
    int require_index(std::string_view label) const;
};

double thermal_occupation(double omega, double temperature);
double effective_temperature(double n_eff, double omega);
cdouble intracavity_amplitude(cdouble pump, double detuning, double kappa);

DriftModel build_rwa_system(const SystemSpec& spec, const ThermalBathSpec& baths);
DriftModel build_rwa_system(const SystemSpec& spec);
DriftModel build_full_system(const SystemSpec& spec, const ThermalBathSpec& baths);
DriftModel build_full_system(const SystemSpec& spec);
DriftModel build_system(const SystemSpec& spec, Fidelity fidelity);

std::vector<cdouble> stability_eigenvalues(const DriftModel& model);

struct StabilityReport {
    std::vector<cdouble> eigenvalues;
    double max_real_part = 0.0;
    bool stable = false;
};

StabilityReport check_stability(const DriftModel& model);

// Throws ErrorKind::unstable_system naming the offending eigenvalue.
void require_stable(const DriftModel& model);

// Copy of spec with alpha rescaled so that 4|alpha g0|^2 / kappa == optical_damping.
// Keeps the phase of alpha (real positive when alpha was zero).
SystemSpec with_optical_damping(const SystemSpec& spec, double optical_damping);

}  // namespace omcool
