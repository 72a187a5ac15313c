#include "omcool/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "omcool/errors.hpp"
#include "omcool/units.hpp"

namespace omcool {

namespace {

constexpr cdouble I{0.0, 1.0};

void require(bool condition, ErrorKind kind, const std::string& message)
{
    if (!condition) throw Error(kind, message);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

double MechanicalMode::quality_factor() const
{
    if (gamma == 0.0) return std::numeric_limits<double>::infinity();
    return omega / gamma;
}

void MechanicalMode::validate(std::string_view name) const
{
    const std::string n(name);
    require(finite(omega) && omega > 0.0, ErrorKind::domain, n + ": omega must be > 0");
    require(finite(gamma) && gamma >= 0.0, ErrorKind::domain, n + ": gamma must be >= 0");
    require(finite(bath_temperature) && bath_temperature >= 0.0, ErrorKind::domain,
            n + ": bath temperature must be >= 0");
}

CavityDrive CavityDrive::from_pump(double kappa, double detuning, double g0, cdouble pump,
                                   double bath_temperature)
{
    CavityDrive d;
    d.kappa = kappa;
    d.detuning = detuning;
    d.g0 = g0;
    d.pump = pump;
    d.alpha = intracavity_amplitude(pump, detuning, kappa);
    d.bath_temperature = bath_temperature;
    return d;
}

CavityDrive CavityDrive::from_alpha(double kappa, double detuning, double g0, cdouble alpha,
                                    double bath_temperature)
{
    CavityDrive d;
    d.kappa = kappa;
    d.detuning = detuning;
    d.g0 = g0;
    d.alpha = alpha;
    d.pump = alpha * (I * detuning - 0.5 * kappa);
    d.bath_temperature = bath_temperature;
    return d;
}

double CavityDrive::coupling() const { return std::abs(alpha) * g0; }

void CavityDrive::validate() const
{
    require(finite(kappa) && kappa > 0.0, ErrorKind::domain, "cavity: kappa must be > 0");
    require(finite(detuning), ErrorKind::domain, "cavity: detuning must be finite");
    require(finite(g0) && g0 >= 0.0, ErrorKind::domain, "cavity: g0 must be >= 0");
    require(finite(alpha.real()) && finite(alpha.imag()), ErrorKind::domain,
            "cavity: alpha must be finite");
    require(finite(bath_temperature) && bath_temperature >= 0.0, ErrorKind::domain,
            "cavity: bath temperature must be >= 0");
    const cdouble expected = intracavity_amplitude(pump, detuning, kappa);
    const double scale = std::max(std::abs(alpha), std::abs(expected));
    require(std::abs(alpha - expected) <= 1e-9 * scale, ErrorKind::domain,
            "cavity: alpha inconsistent with pump / (i detuning - kappa/2)");
}

void SystemSpec::validate() const
{
    mode_a.validate("mode_a");
    mode_b.validate("mode_b");
    cavity.validate();
    require(finite(lambda) && lambda >= 0.0, ErrorKind::domain, "lambda must be >= 0");
    require(finite(mass_a) && mass_a > 0.0, ErrorKind::domain, "mass_a must be > 0");
}

ThermalBathSpec bath_occupations(const SystemSpec& spec)
{
    ThermalBathSpec baths;
    const double wa = spec.mode_a.omega;
    baths.nbar_a = thermal_occupation(wa, spec.mode_a.bath_temperature);
    if (spec.mode_a.bath_temperature == spec.mode_b.bath_temperature) {
        baths.nbar_b = baths.nbar_a;
    } else {
        baths.nbar_b = thermal_occupation(spec.mode_b.omega, spec.mode_b.bath_temperature);
    }
    if (spec.cavity.bath_temperature > 0.0 && spec.cavity.detuning != 0.0) {
        baths.nbar_c = thermal_occupation(std::abs(spec.cavity.detuning),
                                          spec.cavity.bath_temperature);
    }
    return baths;
}

std::string_view fidelity_name(Fidelity f) { return f == Fidelity::rwa ? "rwa" : "full"; }

Fidelity parse_fidelity(std::string_view text)
{
    if (text == "rwa") return Fidelity::rwa;
    if (text == "full") return Fidelity::full;
    throw Error(ErrorKind::domain, "fidelity must be 'rwa' or 'full', got '" + std::string(text) + "'");
}

std::optional<int> DriftModel::index_of(std::string_view label) const
{
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == label) return static_cast<int>(i);
    }
    return std::nullopt;
}

int DriftModel::require_index(std::string_view label) const
{
    auto idx = index_of(label);
    if (!idx) throw Error(ErrorKind::domain, "mode label '" + std::string(label) + "' not in model basis");
    return *idx;
}

double thermal_occupation(double omega, double temperature)
{
    require(omega > 0.0 && finite(omega), ErrorKind::domain, "thermal_occupation: omega must be > 0");
    require(temperature >= 0.0, ErrorKind::domain, "thermal_occupation: temperature must be >= 0");
    if (temperature == 0.0) return 0.0;
    const double x = kHbar * omega / (kBoltzmann * temperature);
    if (x < 1e-8) return 1.0 / x - 0.5 + x / 12.0;
    return 1.0 / std::expm1(x);
}

double effective_temperature(double n_eff, double omega)
{
    require(n_eff >= 0.0, ErrorKind::domain, "effective_temperature: n_eff must be >= 0");
    require(omega > 0.0, ErrorKind::domain, "effective_temperature: omega must be > 0");
    if (n_eff == 0.0) return 0.0;
    return kHbar * omega / (kBoltzmann * std::log1p(1.0 / n_eff));
}

cdouble intracavity_amplitude(cdouble pump, double detuning, double kappa)
{
    require(kappa > 0.0, ErrorKind::domain, "intracavity_amplitude: kappa must be > 0");
    return pump / (I * detuning - 0.5 * kappa);
}

DriftModel build_rwa_system(const SystemSpec& spec, const ThermalBathSpec& baths)
{
    const auto& a = spec.mode_a;
    const auto& b = spec.mode_b;
    const auto& cav = spec.cavity;
    const cdouble G = cav.alpha * cav.g0;
    const double lam = spec.lambda;

    DriftModel m;
    m.fidelity = Fidelity::rwa;
    m.labels = {"c", "a", "b"};
    m.partner = {-1, -1, -1};

    m.drift = Eigen::MatrixXcd::Zero(3, 3);
    m.drift(0, 0) = I * cav.detuning - 0.5 * cav.kappa;
    m.drift(0, 2) = I * G;
    m.drift(1, 1) = -I * a.omega - 0.5 * a.gamma;
    m.drift(1, 2) = -I * lam;
    m.drift(2, 0) = I * std::conj(G);
    m.drift(2, 1) = -I * lam;
    m.drift(2, 2) = -I * b.omega - 0.5 * b.gamma;

    m.noise_input = Eigen::MatrixXd::Zero(3, 3);
    m.noise_input(0, 0) = std::sqrt(cav.kappa);
    m.noise_input(1, 1) = std::sqrt(a.gamma);
    m.noise_input(2, 2) = std::sqrt(b.gamma);

    m.conjugate_correlations = Eigen::Vector3d(baths.nbar_c, baths.nbar_a, baths.nbar_b);
    m.correlations = m.conjugate_correlations.array() + 1.0;
    return m;
}

DriftModel build_rwa_system(const SystemSpec& spec)
{
    return build_rwa_system(spec, bath_occupations(spec));
}

DriftModel build_full_system(const SystemSpec& spec, const ThermalBathSpec& baths)
{
    const auto& a = spec.mode_a;
    const auto& b = spec.mode_b;
    const auto& cav = spec.cavity;
    const cdouble G = cav.alpha * cav.g0;
    const cdouble Gc = std::conj(G);
    const double lam = spec.lambda;

    enum { A = 0, Ad, Bm, Bd, C, Cd };

    DriftModel m;
    m.fidelity = Fidelity::full;
    m.labels = {"a", "a_dag", "b", "b_dag", "c", "c_dag"};
    m.partner = {Ad, A, Bd, Bm, Cd, C};

    // H = -D c'c + wa a'a + wb b'b + lam (a + a')(b + b') - g0 (b + b')(alpha* c + alpha c')
    Eigen::MatrixXcd& d = m.drift;
    d = Eigen::MatrixXcd::Zero(6, 6);
    d(A, A) = -I * a.omega - 0.5 * a.gamma;
    d(A, Bm) = -I * lam;
    d(A, Bd) = -I * lam;

    d(Bm, Bm) = -I * b.omega - 0.5 * b.gamma;
    d(Bm, A) = -I * lam;
    d(Bm, Ad) = -I * lam;
    d(Bm, C) = I * Gc;
    d(Bm, Cd) = I * G;

    d(C, C) = I * cav.detuning - 0.5 * cav.kappa;
    d(C, Bm) = I * G;
    d(C, Bd) = I * G;

    // Conjugate rows: A(p(i), p(j)) = conj(A(i, j)).
    for (int i : {A, Bm, C}) {
        for (int j = 0; j < 6; ++j) {
            d(m.partner[i], m.partner[j]) = std::conj(d(i, j));
        }
    }

    m.noise_input = Eigen::MatrixXd::Zero(6, 6);
    const double rates[3] = {a.gamma, b.gamma, cav.kappa};
    const double nbar[3] = {baths.nbar_a, baths.nbar_b, baths.nbar_c};
    m.correlations.resize(6);
    m.conjugate_correlations.resize(6);
    for (int k = 0; k < 3; ++k) {
        const int op = 2 * k;
        const int dag = op + 1;
        m.noise_input(op, op) = std::sqrt(rates[k]);
        m.noise_input(dag, dag) = std::sqrt(rates[k]);
        m.correlations(op) = nbar[k] + 1.0;
        m.correlations(dag) = nbar[k];
        m.conjugate_correlations(op) = nbar[k];
        m.conjugate_correlations(dag) = nbar[k] + 1.0;
    }
    return m;
}

DriftModel build_full_system(const SystemSpec& spec)
{
    return build_full_system(spec, bath_occupations(spec));
}

DriftModel build_system(const SystemSpec& spec, Fidelity fidelity)
{
    return fidelity == Fidelity::rwa ? build_rwa_system(spec) : build_full_system(spec);
}

std::vector<cdouble> stability_eigenvalues(const DriftModel& model)
{
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(model.drift, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::eigensolver, "drift matrix eigenvalue iteration did not converge");
    }
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

StabilityReport check_stability(const DriftModel& model)
{
    StabilityReport report;
    report.eigenvalues = stability_eigenvalues(model);
    report.max_real_part = -std::numeric_limits<double>::infinity();
    for (const auto& ev : report.eigenvalues) {
        report.max_real_part = std::max(report.max_real_part, ev.real());
    }
    report.stable = report.max_real_part < 0.0;
    return report;
}

void require_stable(const DriftModel& model)
{
    const auto report = check_stability(model);
    if (report.stable) return;
    for (const auto& ev : report.eigenvalues) {
        if (ev.real() >= 0.0) {
            std::ostringstream os;
            os.precision(10);
            os << "drift eigenvalue (" << ev.real() << ", " << ev.imag()
               << ") rad/s has non-negative real part";
            throw Error(ErrorKind::unstable_system, os.str());
        }
    }
}

SystemSpec with_optical_damping(const SystemSpec& spec, double optical_damping)
{
    require(optical_damping >= 0.0 && finite(optical_damping), ErrorKind::domain,
            "optical damping must be >= 0");
    SystemSpec out = spec;
    auto& cav = out.cavity;
    if (optical_damping == 0.0) {
        out.cavity = CavityDrive::from_alpha(cav.kappa, cav.detuning, cav.g0, 0.0, cav.bath_temperature);
        return out;
    }
    require(cav.g0 > 0.0, ErrorKind::domain, "cannot set optical damping with g0 = 0");
    const double magnitude = std::sqrt(optical_damping * cav.kappa) / (2.0 * cav.g0);
    const double phase = std::abs(cav.alpha) > 0.0 ? std::arg(cav.alpha) : 0.0;
    out.cavity = CavityDrive::from_alpha(cav.kappa, cav.detuning, cav.g0, std::polar(magnitude, phase),
                                         cav.bath_temperature);
    return out;
}

}  // namespace omcool
