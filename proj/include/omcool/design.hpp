#pragma once

// Maps a two-arm beam resonator (two quarter-wave cantilevers joined by a
// support region) onto the coupled-mode model: the symmetric mode a is
// thermoelastically damped, the antisymmetric mode b loses energy through the
// clamp, and the arm asymmetry couples them.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "omcool/model.hpp"

namespace omcool {

struct BeamGeometry {
    double L_left = 0.0;   // m
    double L_right = 0.0;  // m
    double h = 0.0;        // thickness in the vibration direction, m
    double w = 0.0;        // support width, m

    double nominal_length() const { return 0.5 * (L_left + L_right); }
    // |L_L - L_R| / (L_L + L_R)
    double asymmetry() const;
    void validate() const;

    bool operator==(const BeamGeometry&) const = default;
};

struct Material {
    std::string name;
    double youngs_modulus = 0.0;     // Pa
    double density = 0.0;            // kg/m^3
    double tec = 0.0;                // thermal expansion coefficient, 1/K
    double heat_capacity_vol = 0.0;  // J/(m^3 K)

    void validate() const;
};

// E = 250 GPa, rho = 3100 kg/m^3, alpha = 2.2e-6 /K, C_p = 2.2e6 J/(m^3 K)
Material silicon_nitride();

using MaterialDatabase = std::map<std::string, Material>;

// Sections "[material.<name>]" with keys youngs_modulus, density, tec,
// heat_capacity_vol. Throws ErrorKind::config on malformed input.
MaterialDatabase parse_material_database(const std::string& text);
MaterialDatabase load_material_database(const std::filesystem::path& path);
// Materials shipped in data/materials.ini, falling back to silicon nitride.
MaterialDatabase default_material_database();

struct NormalModes {
    double omega0 = 0.0;
    double epsilon = 0.0;
    double lambda = 0.0;
};

NormalModes normal_mode_map(double omega_L, double omega_R);
// Inverse of normal_mode_map: (omega0 (1 + eps), omega0 (1 - eps)).
std::pair<double, double> arm_frequencies(double omega0, double epsilon);

struct FrequencyEstimate {
    double omega = 0.0;          // rad/s
    bool slender = true;         // L / h >= 10
};

// Euler-Bernoulli clamped-free fundamental, 1.875^2 (h / L^2) sqrt(E / 12 rho).
FrequencyEstimate cantilever_frequency(double L, double h, const Material& material);

// Calibration reproducing Q = 1.102e6 / 140 at L / h = 20 / 0.3.
double default_clamping_calibration();
double clamping_Q(double L, double h, double calibration = default_clamping_calibration());

double clamping_gamma_quasimode(double J, double rho_dos);

// 6.546 mm at 1 MHz, scaled as omega^-1/2.
double ted_critical_width(double omega);
// C_p / (E alpha^2 T f), f = 5 (h/h0)^2. Throws out_of_regime for h > h0 / 10.
double ted_quality_factor(const Material& material, double temperature, double h, double omega);

struct LossBudget {
    double omega0 = 0.0;
    double gamma_clamp = 0.0;
    double gamma_ted = 0.0;
    double Q_clamp = 0.0;
    double Q_ted = 0.0;
    double lambda = 0.0;
};

struct DesignResult {
    SystemSpec system;
    LossBudget losses;
    double epsilon = 0.0;
    double C_ab = 0.0;
    bool slender = true;
    std::vector<std::string> warnings;
};

DesignResult design_to_system(const BeamGeometry& geometry, const Material& material, double temperature,
                              const CavityDrive& cavity, double clamping_calibration = default_clamping_calibration(),
                              double mass_a = 1e-15);

}  // namespace omcool
