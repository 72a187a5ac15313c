#include "omcool/design.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ini.hpp"
#include "omcool/errors.hpp"
#include "omcool/rwa.hpp"
#include "omcool/units.hpp"

#ifndef OMCOOL_DATA_DIR
#define OMCOOL_DATA_DIR "data"
#endif

namespace omcool {

namespace {

constexpr double kBeamMode = 1.875;            // first root of 1 + cos x cosh x = 0
constexpr double kTedWidthAt1MHz = 6.546e-3;   // m
constexpr double kTedReferenceOmega = kTwoPi * 1.0e6;
constexpr double kTedAsymptoteLimit = 0.1;     // h / h0 below which f -> 5 (h/h0)^2 holds

// Clamping-loss datapoint of the reference two-arm beam.
constexpr double kRefOmega0Hz = 1.102e6;
constexpr double kRefGammaBHz = 140.0;          // gamma_b / 2 = 70 Hz
constexpr double kRefLength = 20e-6;
constexpr double kRefThickness = 0.3e-6;

void require_positive(double v, const std::string& what)
{
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::domain, what + " must be > 0");
}

}  // namespace

double BeamGeometry::asymmetry() const { return std::abs(L_left - L_right) / (L_left + L_right); }

void BeamGeometry::validate() const
{
    require_positive(L_left, "L_left");
    require_positive(L_right, "L_right");
    require_positive(h, "h");
    require_positive(w, "w");
}

void Material::validate() const
{
    require_positive(youngs_modulus, name + ": youngs_modulus");
    require_positive(density, name + ": density");
    require_positive(tec, name + ": tec");
    require_positive(heat_capacity_vol, name + ": heat_capacity_vol");
}

Material silicon_nitride()
{
    return {"silicon_nitride", 250e9, 3100.0, 2.2e-6, 2.2e6};
}

MaterialDatabase parse_material_database(const std::string& text)
{
    const auto tree = ini::parse(text);
    const std::vector<std::string> keys = {"youngs_modulus", "density", "tec", "heat_capacity_vol"};
    MaterialDatabase db;
    for (const auto& [section, body] : tree) {
        const std::string prefix = "material.";
        if (section.rfind(prefix, 0) != 0 || body.empty()) {
            throw Error(ErrorKind::config, "material database: unexpected entry '" + section + "'");
        }
        Material m;
        m.name = section.substr(prefix.size());
        for (const auto& [key, value] : body) {
            const std::string field = section + "." + key;
            const double v = ini::to_double(value.data(), field);
            if (key == "youngs_modulus") m.youngs_modulus = v;
            else if (key == "density") m.density = v;
            else if (key == "tec") m.tec = v;
            else if (key == "heat_capacity_vol") m.heat_capacity_vol = v;
            else {
                std::string msg = "material database: unknown key '" + field + "'";
                const auto hint = ini::suggest(key, keys);
                if (!hint.empty()) msg += " (did you mean '" + hint + "'?)";
                throw Error(ErrorKind::config, msg);
            }
        }
        try {
            m.validate();
        } catch (const Error& e) {
            throw Error(ErrorKind::config, std::string("material database: ") + e.what());
        }
        db[m.name] = m;
    }
    return db;
}

MaterialDatabase load_material_database(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::config, "cannot open material database " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_material_database(ss.str());
}

MaterialDatabase default_material_database()
{
    const std::filesystem::path shipped = std::filesystem::path(OMCOOL_DATA_DIR) / "materials.ini";
    if (std::filesystem::exists(shipped)) return load_material_database(shipped);
    return {{"silicon_nitride", silicon_nitride()}};
}

NormalModes normal_mode_map(double omega_L, double omega_R)
{
    require_positive(omega_L, "omega_L");
    require_positive(omega_R, "omega_R");
    NormalModes m;
    m.omega0 = 0.5 * (omega_L + omega_R);
    m.epsilon = std::abs(omega_L - omega_R) / (omega_L + omega_R);
    m.lambda = m.epsilon * m.omega0;
    return m;
}

std::pair<double, double> arm_frequencies(double omega0, double epsilon)
{
    return {omega0 * (1.0 + epsilon), omega0 * (1.0 - epsilon)};
}

FrequencyEstimate cantilever_frequency(double L, double h, const Material& material)
{
    require_positive(L, "L");
    require_positive(h, "h");
    material.validate();
    FrequencyEstimate est;
    est.omega = kBeamMode * kBeamMode * (h / (L * L)) *
                std::sqrt(material.youngs_modulus / (12.0 * material.density));
    est.slender = L / h >= 10.0;
    return est;
}

double default_clamping_calibration()
{
    const double q = kRefOmega0Hz / kRefGammaBHz;
    const double aspect = kRefLength / kRefThickness;
    return q / (aspect * aspect);
}

double clamping_Q(double L, double h, double calibration)
{
    require_positive(L, "L");
    require_positive(h, "h");
    require_positive(calibration, "clamping calibration");
    const double aspect = L / h;
    return calibration * aspect * aspect;
}

double clamping_gamma_quasimode(double J, double rho_dos)
{
    if (!(J >= 0.0) || !(rho_dos >= 0.0)) {
        throw Error(ErrorKind::domain, "clamping_gamma_quasimode: J and rho must be >= 0");
    }
    return J * J * rho_dos;
}

double ted_critical_width(double omega)
{
    require_positive(omega, "omega");
    return kTedWidthAt1MHz * std::sqrt(kTedReferenceOmega / omega);
}

double ted_quality_factor(const Material& material, double temperature, double h, double omega)
{
    material.validate();
    require_positive(h, "h");
    if (!(temperature >= 0.0)) throw Error(ErrorKind::domain, "temperature must be >= 0");
    const double h0 = ted_critical_width(omega);
    if (h > kTedAsymptoteLimit * h0) {
        std::ostringstream os;
        os << "beam width h = " << h << " m exceeds h0/10 (h0 = " << h0
           << " m); small-width thermoelastic asymptote does not apply";
        throw Error(ErrorKind::out_of_regime, os.str());
    }
    if (temperature == 0.0) return std::numeric_limits<double>::infinity();
    const double ratio = h / h0;
    const double f = 5.0 * ratio * ratio;
    return material.heat_capacity_vol /
           (material.youngs_modulus * material.tec * material.tec * temperature * f);
}

DesignResult design_to_system(const BeamGeometry& geometry, const Material& material, double temperature,
                              const CavityDrive& cavity, double clamping_calibration, double mass_a)
{
    geometry.validate();
    material.validate();
    const double L0 = geometry.nominal_length();
    const auto est = cantilever_frequency(L0, geometry.h, material);
    const double omega0 = est.omega;

    DesignResult out;
    out.slender = est.slender;
    out.epsilon = geometry.asymmetry();

    LossBudget& loss = out.losses;
    loss.omega0 = omega0;
    loss.lambda = out.epsilon * omega0;
    loss.Q_clamp = clamping_Q(L0, geometry.h, clamping_calibration);
    loss.gamma_clamp = omega0 / loss.Q_clamp;
    loss.Q_ted = ted_quality_factor(material, temperature, geometry.h, omega0);
    loss.gamma_ted = std::isinf(loss.Q_ted) ? 0.0 : omega0 / loss.Q_ted;

    SystemSpec& s = out.system;
    s.mode_a = {omega0, loss.gamma_ted, temperature};
    s.mode_b = {omega0, loss.gamma_clamp, temperature};
    s.cavity = cavity;
    s.lambda = loss.lambda;
    s.mass_a = mass_a;
    s.validate();
    out.C_ab = ab_cooperativity(s);

    if (loss.lambda == 0.0) out.warnings.emplace_back("no export channel: epsilon = 0 gives lambda = 0");
    if (loss.gamma_ted > loss.gamma_clamp || (loss.lambda > 0.0 && loss.gamma_ted > loss.lambda)) {
        out.warnings.emplace_back("mode-a not weakly damped: gamma_a exceeds lambda or gamma_b");
    }
    if (!est.slender) out.warnings.emplace_back("beam not slender (L/h < 10): frequency estimate unreliable");
    return out;
}

}  // namespace omcool
