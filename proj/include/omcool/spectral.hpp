#pragma once

// Frequency-domain solution of a DriftModel: susceptibility matrices,
// fluctuation spectra, integrated occupations and line fits.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "omcool/model.hpp"

namespace omcool {

// One pole of the drift matrix seen as a spectral line.
struct Resonance {
    double center = 0.0;  // rad/s
    double fwhm = 0.0;    // rad/s
};

struct GridOptions {
    double points_per_linewidth = 20.0;
    double core_linewidths = 5.0;     // uniform spacing within +- this many FWHM
    double span_linewidths = 50.0;    // minimum coverage around every center
    double growth = 1.03;             // geometric spacing ratio outside the core
    double outer_linewidths = 2000.0; // grid extends to max(4 |center|, |center| + this * fwhm)

    bool operator==(const GridOptions&) const = default;
};

// Lines of the model's spectra: one per eigenvalue mu, centered at -Im(mu)
// with FWHM -2 Re(mu). The rotating-wave model also gets the mirrored lines
// at -center, which carry its time-reversed (nbar) correlator.
std::vector<Resonance> model_resonances(const DriftModel& model);

// Line of the eigenmode with the largest weight on the labelled operator.
Resonance dominant_resonance(const DriftModel& model, std::string_view label);

class FrequencyGrid {
public:
    FrequencyGrid() = default;
    // Points must be strictly increasing.
    FrequencyGrid(std::vector<double> points, std::vector<Resonance> anchors = {});

    static FrequencyGrid around(std::span<const Resonance> resonances, const GridOptions& options = {});
    static FrequencyGrid for_model(const DriftModel& model, const GridOptions& options = {});

    // Grid with the midpoint of every interval inserted (spacing halved).
    FrequencyGrid refined() const;

    // Throws insufficient_coverage when a resonance is not spanned by
    // span_linewidths, or its core is sampled more coarsely than requested.
    void check_covers(std::span<const Resonance> resonances, const GridOptions& options = {}) const;

    const std::vector<double>& points() const { return points_; }
    const std::vector<Resonance>& anchors() const { return anchors_; }
    std::size_t size() const { return points_.size(); }

private:
    std::vector<double> points_;
    std::vector<Resonance> anchors_;
};

// (-i w I - A)^-1 by LU. Throws singular_matrix (naming the eigenvalue
// nearest to -i w) when the solve fails or its normwise residual exceeds 1e-10.
Eigen::MatrixXcd susceptibility_matrix(const DriftModel& model, double omega);

// ||(-i w I - A) X - I||_F / (||-i w I - A||_F ||X||_F)
double susceptibility_residual(const DriftModel& model, double omega, const Eigen::MatrixXcd& chi);

struct OccupationIntegral {
    double n_eff = 0.0;             // (1/2pi) int S dw / 2 - 1/2
    double integral = 0.0;          // int S dw including the tail estimate
    double quadrature_error = 0.0;  // relative, from the half-density subgrid
    double tail_fraction = 0.0;     // tail estimate / integral
};

// Trapezoidal integral of a position spectrum with 1/w^2 tails added beyond
// the grid ends. Throws insufficient_coverage when the tails exceed 1%.
OccupationIntegral integrate_occupation(std::span<const double> omega, std::span<const double> values,
                                        std::span<const Resonance> anchors, double omega_center);
OccupationIntegral integrate_occupation(const FrequencyGrid& grid, std::span<const double> values,
                                        double omega_center);

struct LorentzFit {
    double center = 0.0;     // rad/s
    double fwhm = 0.0;       // rad/s
    double area = 0.0;       // amplitude * pi * fwhm / 2
    double amplitude = 0.0;  // peak height above baseline
    double baseline = 0.0;
    double rms_residual = 0.0;  // relative to amplitude
};

struct FitWindow {
    double lo = 0.0;
    double hi = 0.0;
};

// Least-squares fit of A (w/2)^2 / ((x - x0)^2 + (w/2)^2) + baseline to the
// samples inside the window. Throws fit_failure when the window holds no
// peak or more than one, or the rms residual exceeds 5% of the peak.
LorentzFit fit_lorentzian(std::span<const double> omega, std::span<const double> values, FitWindow window);

struct SpectrumResult {
    FrequencyGrid grid;
    std::vector<double> values;  // S_xx(w), 1/(rad/s)
    double n_eff = 0.0;
    double T_eff = 0.0;          // K
    double quadrature_error = 0.0;
    double tail_fraction = 0.0;
    std::size_t clipped = 0;     // negative roundoff values set to zero
    std::optional<LorentzFit> fit;
};

// S_xx for x = s + s^dag, s the selected mode. Requires a stable model and a
// grid that covers the model's resonances.
SpectrumResult position_spectrum(const DriftModel& model, std::string_view select, const FrequencyGrid& grid,
                                 const GridOptions& options = {});
SpectrumResult position_spectrum(const DriftModel& model, std::string_view select,
                                 const GridOptions& options = {});

struct ForceSpectrum {
    std::vector<double> omega;
    std::vector<double> S_FF;         // N^2/Hz
    double S_FF_at_resonance = 0.0;   // at w = w_a
    double bare_value = 0.0;          // (hbar m w_a / 2) gamma_a (2 nbar_a + 1)
    double factor_at_resonance = 0.0; // S_FF(w_a) / bare_value
};

// Effective Langevin force on mode a: every input channel's contribution to
// a divided by a's own response, weighted by the channel correlators and
// scaled by hbar m w_a / 2.
ForceSpectrum force_spectrum_numeric(const DriftModel& model, const SystemSpec& spec,
                                     std::span<const double> omega);

}  // namespace omcool
