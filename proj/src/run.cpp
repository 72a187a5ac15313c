#include "omcool/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "ini.hpp"
#include "omcool/design.hpp"
#include "omcool/errors.hpp"
#include "omcool/rwa.hpp"
#include "omcool/spectral.hpp"
#include "omcool/sweep.hpp"

namespace omcool {

namespace {

using nlohmann::ordered_json;

// Table of doubles with an optional trailing text column.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::string text_column;               // empty when absent
    std::vector<std::string> text_values;  // one per row when present
};

std::string format_value(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string quote_csv(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string render_csv(const Table& t)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    if (!t.text_column.empty()) os << "," << t.text_column;
    os << "\n";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_value(row[i]);
        if (!t.text_column.empty()) os << "," << quote_csv(t.text_values[r]);
        os << "\n";
    }
    return os.str();
}

// JSON has no NaN or infinity; those become null.
ordered_json number(double v)
{
    if (!std::isfinite(v)) return nullptr;
    return v;
}

ordered_json table_json(const Table& t)
{
    ordered_json cols = ordered_json::array();
    for (const auto& c : t.columns) cols.push_back(c);
    if (!t.text_column.empty()) cols.push_back(t.text_column);
    ordered_json rows = ordered_json::array();
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        ordered_json row = ordered_json::array();
        for (double v : t.rows[r]) row.push_back(number(v));
        if (!t.text_column.empty()) {
            if (t.text_values[r].empty()) row.push_back(nullptr);
            else row.push_back(t.text_values[r]);
        }
        rows.push_back(std::move(row));
    }
    return {{"columns", cols}, {"rows", rows}};
}

ordered_json flags_json(const RegimeFlags& f)
{
    ordered_json j;
    j["near_degenerate"] = f.near_degenerate;
    j["sideband_resolved"] = f.sideband_resolved;
    j["damping_hierarchy"] = f.damping_hierarchy;
    j["strong_ab_coupling"] = f.strong_ab_coupling;
    j["weak_coupling"] = f.weak_coupling;
    j["bitmask"] = f.bitmask();
    j["violated"] = f.violated();
    return j;
}

const SystemSpec& require_system(const RunConfig& c)
{
    if (!c.has_system) throw Error(ErrorKind::config, "task needs [mode_a] [mode_b] [cavity] [coupling]");
    return c.system;
}

double cooperativity_of(const SystemSpec& s)
{
    const double Gamma = optical_damping(s);
    if (Gamma == 0.0) return 0.0;
    return s.mode_b.gamma > 0.0 ? Gamma / s.mode_b.gamma : std::numeric_limits<double>::infinity();
}

struct TaskOutput {
    Table table;
    ordered_json results;
};

TaskOutput run_spectrum(const RunConfig& c)
{
    const SystemSpec& s = require_system(c);
    const DriftModel model = build_system(s, c.fidelity);
    const SpectrumResult spec = position_spectrum(model, c.spectrum.mode, c.grid);

    // Reference peak of the same mode without optical damping.
    const SystemSpec bare = with_optical_damping(s, 0.0);
    const SpectrumResult ref = position_spectrum(build_system(bare, c.fidelity), c.spectrum.mode, c.grid);
    const double ref_peak = *std::max_element(ref.values.begin(), ref.values.end());

    TaskOutput out;
    out.table.columns = {"omega_rad_s", "Sxx_per_rad_s", "Sxx_rescaled_dimless"};
    const auto& w = spec.grid.points();
    for (std::size_t i = 0; i < w.size(); ++i) {
        out.table.rows.push_back({w[i], spec.values[i], ref_peak > 0.0 ? spec.values[i] / ref_peak : 0.0});
    }

    const Resonance line = dominant_resonance(model, c.spectrum.mode);
    auto& r = out.results;
    r["mode"] = c.spectrum.mode;
    r["n_eff"] = number(spec.n_eff);
    r["T_eff_K"] = number(spec.T_eff);
    r["C_OM"] = number(cooperativity_of(s));
    r["C_ab"] = number(ab_cooperativity(s));
    r["line_center_rad_s"] = number(line.center);
    r["line_fwhm_rad_s"] = number(line.fwhm);
    r["quadrature_error"] = number(spec.quadrature_error);
    r["tail_fraction"] = number(spec.tail_fraction);
    r["clipped_points"] = spec.clipped;
    r["grid_points"] = w.size();
    r["reference_peak_per_rad_s"] = number(ref_peak);

    if (c.spectrum.fit) {
        const double half = c.spectrum.fit_halfwidth.value_or(10.0 * line.fwhm);
        const LorentzFit fit = fit_lorentzian(w, spec.values, {line.center - half, line.center + half});
        r["fit"] = {{"center_rad_s", number(fit.center)},
                    {"fwhm_rad_s", number(fit.fwhm)},
                    {"area", number(fit.area)},
                    {"amplitude_per_rad_s", number(fit.amplitude)},
                    {"baseline_per_rad_s", number(fit.baseline)},
                    {"rms_residual", number(fit.rms_residual)}};
    }
    out.results["flags"] = flags_json(regime_flags(s, optical_damping(s)));
    return out;
}

void fill_sweep_table(TaskOutput& out, const SweepResult& sw, bool detuning)
{
    out.table.columns = {};
    if (detuning) out.table.columns.push_back("detuning_rad_s");
    for (const char* col : {"C_OM_dimless", "n_eff_quanta", "T_ratio_dimless", "linewidth_rad_s", "flags_bitmask"}) {
        out.table.columns.push_back(col);
    }
    out.table.text_column = "error";
    for (std::size_t i = 0; i < sw.size(); ++i) {
        std::vector<double> row;
        if (detuning) row.push_back(sw.values[i]);
        row.insert(row.end(), {sw.C_OM[i], sw.n_eff[i], sw.T_ratio[i], sw.linewidths[i],
                               static_cast<double>(sw.validity_flags[i].bitmask())});
        out.table.rows.push_back(std::move(row));
        out.table.text_values.push_back(sw.errors[i].value_or(""));
    }
}

TaskOutput run_sweep(const RunConfig& c)
{
    const SystemSpec& s = require_system(c);
    const double nbar_a = bath_occupations(s).nbar_a;
    TaskOutput out;
    auto& r = out.results;
    r["axis"] = c.sweep.axis == SweepTask::Axis::c_om ? "C_OM" : "detuning";
    r["C_ab"] = number(ab_cooperativity(s));
    r["nbar_a"] = number(nbar_a);

    SweepResult sw;
    if (c.sweep.axis == SweepTask::Axis::c_om) {
        const auto axis = c.sweep.c_om_values.empty()
                              ? log_spaced(c.sweep.c_om_min, c.sweep.c_om_max, c.sweep.points_per_decade)
                              : c.sweep.c_om_values;
        sw = sweep_cooperativity(s, axis, c.fidelity, c.grid);
        fill_sweep_table(out, sw, false);
    } else {
        const auto mode = c.sweep.optimize ? DetuningMode::optimize : DetuningMode::fixed_cooperativity;
        sw = sweep_detuning(s, c.sweep.detunings, c.fidelity, mode, c.sweep.c_om, c.grid, c.sweep.c_om_min,
                            c.sweep.c_om_max);
        r["mode"] = c.sweep.optimize ? "optimize" : "fixed_cooperativity";
        fill_sweep_table(out, sw, true);
    }

    // Best sampled point, refined by golden section on the C_OM axis.
    std::size_t best = sw.size();
    for (std::size_t i = 0; i < sw.size(); ++i) {
        if (std::isfinite(sw.n_eff[i]) && (best == sw.size() || sw.n_eff[i] < sw.n_eff[best])) best = i;
    }
    std::size_t failed = 0;
    for (const auto& e : sw.errors) failed += e.has_value();
    r["points"] = sw.size();
    r["failed_points"] = failed;
    if (best < sw.size()) {
        r["n_eff_min"] = number(sw.n_eff[best]);
        r["n_ratio_min"] = nbar_a > 0.0 ? number(sw.n_eff[best] / nbar_a) : ordered_json(nullptr);
        r["T_ratio_min"] = number(sw.T_ratio[best]);
        r["argmin_value"] = number(sw.values[best]);
        r["flags"] = flags_json(sw.validity_flags[best]);
    }
    if (c.sweep.axis == SweepTask::Axis::c_om && sw.size() >= 3) {
        const double lo = std::max(sw.values.front(), sw.values[1] * 1e-3);
        const double hi = sw.values.back();
        try {
            const Optimum opt = find_optimum(s, lo, hi, c.fidelity, c.grid);
            r["C_OM_star"] = number(opt.C_OM_star);
            r["n_eff_star"] = number(opt.n_eff_star);
            r["n_ratio_star"] = number(opt.n_ratio);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::no_minimum) throw;
            r["C_OM_star"] = nullptr;
        }
        r["C_OM_star_closed_form"] = number(optimal_cooperativity(ab_cooperativity(s)));
    }
    return out;
}

TaskOutput run_optimize(const RunConfig& c)
{
    const SystemSpec& s = require_system(c);
    const Optimum opt = find_optimum(s, c.optimize.c_om_min, c.optimize.c_om_max, c.fidelity, c.grid);
    const double C_ab = ab_cooperativity(s);
    const SystemSpec at = at_cooperativity(s, opt.C_OM_star);
    const CoolingPoint point = evaluate_cooling(at, c.fidelity, c.grid);

    TaskOutput out;
    out.table.columns = {"C_OM_star_dimless", "n_eff_star_quanta", "n_ratio_dimless", "T_ratio_dimless",
                         "linewidth_rad_s", "C_OM_closed_form_dimless", "n_ratio_closed_form_dimless"};
    out.table.rows.push_back({opt.C_OM_star, opt.n_eff_star, opt.n_ratio, point.T_ratio, point.linewidth,
                              optimal_cooperativity(C_ab), cooling_limit_ratio(C_ab)});
    auto& r = out.results;
    r["C_ab"] = number(C_ab);
    r["C_OM_star"] = number(opt.C_OM_star);
    r["n_eff_star"] = number(opt.n_eff_star);
    r["n_ratio"] = number(opt.n_ratio);
    r["T_ratio"] = number(point.T_ratio);
    r["linewidth_rad_s"] = number(point.linewidth);
    r["C_OM_star_closed_form"] = number(optimal_cooperativity(C_ab));
    r["n_ratio_closed_form"] = number(cooling_limit_ratio(C_ab));
    r["flags"] = flags_json(point.flags);
    return out;
}

Material lookup_material(const RunConfig& c)
{
    MaterialDatabase db = default_material_database();
    if (!c.design.material_file.empty()) {
        for (auto& [name, m] : load_material_database(c.base_dir / c.design.material_file)) db[name] = m;
    }
    const auto it = db.find(c.design.material);
    if (it == db.end()) {
        std::vector<std::string> names;
        for (const auto& [name, m] : db) names.push_back(name);
        std::string msg = "design.material: unknown material '" + c.design.material + "'";
        const auto hint = ini::suggest(c.design.material, names);
        if (!hint.empty()) msg += " (did you mean '" + hint + "'?)";
        throw Error(ErrorKind::config, msg);
    }
    return it->second;
}

TaskOutput run_design(const RunConfig& c)
{
    const Material material = lookup_material(c);
    const auto& d = c.design;
    CavityDrive cavity = CavityDrive::from_alpha(d.kappa, 0.0, 0.0, 0.0);
    DesignResult res = design_to_system(d.geometry, material, d.temperature, cavity, d.clamping_calibration);
    const double omega0 = res.losses.omega0;

    TaskOutput out;
    out.table.columns = {"omega0_rad_s", "epsilon_dimless", "lambda_rad_s", "gamma_a_rad_s", "gamma_b_rad_s",
                         "Q_clamp_dimless", "Q_ted_dimless", "C_ab_dimless"};
    out.table.rows.push_back({omega0, res.epsilon, res.losses.lambda, res.losses.gamma_ted,
                              res.losses.gamma_clamp, res.losses.Q_clamp, res.losses.Q_ted, res.C_ab});
    auto& r = out.results;
    r["material"] = material.name;
    r["omega0_rad_s"] = number(omega0);
    r["f0_Hz"] = number(omega0 / kTwoPi);
    r["epsilon"] = number(res.epsilon);
    r["lambda_rad_s"] = number(res.losses.lambda);
    r["gamma_a_rad_s"] = number(res.losses.gamma_ted);
    r["gamma_b_rad_s"] = number(res.losses.gamma_clamp);
    r["Q_clamp"] = number(res.losses.Q_clamp);
    r["Q_ted"] = number(res.losses.Q_ted);
    r["C_ab"] = number(res.C_ab);
    if (std::isfinite(res.C_ab)) {
        r["C_OM_star_closed_form"] = number(optimal_cooperativity(res.C_ab));
        r["n_ratio_closed_form"] = number(cooling_limit_ratio(res.C_ab));
    }
    r["slender"] = res.slender;
    r["warnings"] = res.warnings;
    return out;
}

TaskOutput run_sense(const RunConfig& c)
{
    const SystemSpec& s = require_system(c);
    const double C_ab = ab_cooperativity(s);
    const double C_OM = c.sense.c_om.value_or(optimal_cooperativity(C_ab));
    const SystemSpec at = at_cooperativity(s, C_OM);
    const DriftModel model = build_system(at, c.fidelity);
    require_stable(model);

    const Resonance line = dominant_resonance(model, "a");
    const double wa = s.mode_a.omega;
    const double half = c.sense.span_linewidths * line.fwhm;
    std::vector<double> omega(static_cast<std::size_t>(c.sense.points));
    for (std::size_t i = 0; i < omega.size(); ++i) {
        omega[i] = wa - half + 2.0 * half * static_cast<double>(i) / static_cast<double>(omega.size() - 1);
    }
    const ForceSpectrum fs = force_spectrum_numeric(model, at, omega);
    const ForceNoise closed = force_noise_psd(at, optical_damping(at), s.mode_a.bath_temperature);
    const double conventional = 1.0 + C_ab;

    TaskOutput out;
    out.table.columns = {"omega_rad_s", "S_FF_N2_per_Hz", "factor_dimless"};
    for (std::size_t i = 0; i < omega.size(); ++i) {
        out.table.rows.push_back({omega[i], fs.S_FF[i], fs.bare_value > 0.0 ? fs.S_FF[i] / fs.bare_value : 0.0});
    }
    auto& r = out.results;
    r["C_ab"] = number(C_ab);
    r["C_OM"] = number(C_OM);
    r["S_FF_at_resonance_N2_per_Hz"] = number(fs.S_FF_at_resonance);
    r["bare_S_FF_N2_per_Hz"] = number(fs.bare_value);
    r["factor_at_resonance"] = number(fs.factor_at_resonance);
    r["factor_closed_form"] = number(closed.factor);
    r["factor_conventional"] = number(conventional);
    r["improvement_over_conventional"] = number(conventional / fs.factor_at_resonance);
    r["classical"] = closed.classical;
    r["flags"] = flags_json(regime_flags(at, optical_damping(at)));
    return out;
}

}  // namespace

RunArtifacts run(const RunConfig& config)
{
    TaskOutput task;
    switch (config.task) {
    case Task::spectrum: task = run_spectrum(config); break;
    case Task::sweep: task = run_sweep(config); break;
    case Task::optimize: task = run_optimize(config); break;
    case Task::design: task = run_design(config); break;
    case Task::sense: task = run_sense(config); break;
    }

    ordered_json summary;
    summary["tool"] = kToolName;
    summary["version"] = kToolVersion;
    summary["task"] = std::string(task_name(config.task));
    summary["fidelity"] = std::string(fidelity_name(config.fidelity));
    summary["results"] = task.results;
    summary["config"] = to_ini(config);

    RunArtifacts out;
    out.csv = render_csv(task.table);
    out.summary_json = summary.dump(2) + "\n";
    ordered_json doc = summary;
    doc["table"] = table_json(task.table);
    out.json = doc.dump(2) + "\n";
    return out;
}

std::string error_json(const std::string& kind, const std::string& message, int exit_code)
{
    ordered_json j;
    j["error"] = {{"kind", kind}, {"message", message}, {"exit_code", exit_code}};
    return j.dump() + "\n";
}

}  // namespace omcool
