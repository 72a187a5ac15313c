#include "omcool/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "ini.hpp"
#include "omcool/errors.hpp"
#include "omcool/rwa.hpp"

namespace omcool {

namespace {

using Tree = ini::Tree;

const std::map<std::string, std::vector<std::string>>& schema()
{
    static const std::map<std::string, std::vector<std::string>> s = {
        {"", {"task", "fidelity", "units"}},
        {"mode_a", {"frequency", "gamma", "temperature", "mass"}},
        {"mode_b", {"frequency", "gamma", "temperature"}},
        {"cavity", {"kappa", "detuning", "g0", "alpha", "alpha_im", "pump_re", "pump_im", "c_om", "temperature"}},
        {"coupling", {"lambda", "c_ab"}},
        {"grid", {"points_per_linewidth", "core_linewidths", "span_linewidths", "growth", "outer_linewidths"}},
        {"spectrum", {"mode", "fit", "fit_halfwidth"}},
        {"sweep", {"axis", "c_om_min", "c_om_max", "points_per_decade", "c_om_values", "detunings", "c_om",
                   "optimize"}},
        {"optimize", {"c_om_min", "c_om_max"}},
        {"design", {"l_left", "l_right", "h", "w", "temperature", "material", "material_file",
                    "clamping_calibration", "kappa"}},
        {"sense", {"c_om", "span_linewidths", "points"}},
        {"output", {"path", "format"}},
    };
    return s;
}

std::vector<std::string> section_names()
{
    std::vector<std::string> out;
    for (const auto& [name, keys] : schema()) {
        if (!name.empty()) out.push_back(name);
    }
    return out;
}

[[noreturn]] void fail(const std::string& message) { throw Error(ErrorKind::config, message); }

std::string unknown_message(const std::string& what, const std::string& shown, const std::string& name,
                            const std::vector<std::string>& known)
{
    std::string msg = "unknown " + what + " '" + shown + "'";
    const auto hint = ini::suggest(name, known);
    if (!hint.empty()) msg += " (did you mean '" + hint + "'?)";
    return msg;
}

// View of one section with typed accessors and unit conversion.
class Section {
public:
    Section(std::string name, const Tree* tree, double freq_scale)
        : name_(std::move(name)), tree_(tree), freq_scale_(freq_scale) {}

    const std::string& name() const { return name_; }
    bool present() const { return tree_ != nullptr; }
    bool has(const std::string& key) const { return tree_ && tree_->find(key) != tree_->not_found(); }

    std::string field(const std::string& key) const { return name_.empty() ? key : name_ + "." + key; }

    std::optional<std::string> text(const std::string& key) const
    {
        if (!has(key)) return std::nullopt;
        return tree_->get<std::string>(key);
    }

    std::optional<double> number(const std::string& key) const
    {
        auto t = text(key);
        if (!t) return std::nullopt;
        const double v = ini::to_double(*t, field(key));
        if (!std::isfinite(v)) fail(field(key) + ": value must be finite");
        return v;
    }

    std::optional<double> frequency(const std::string& key) const
    {
        auto v = number(key);
        if (!v) return std::nullopt;
        return *v * freq_scale_;
    }

    double require_frequency(const std::string& key) const
    {
        auto v = frequency(key);
        if (!v) fail("missing required key '" + field(key) + "'");
        return *v;
    }

    std::optional<std::vector<double>> list(const std::string& key, double scale) const
    {
        auto t = text(key);
        if (!t) return std::nullopt;
        auto values = ini::to_double_list(*t, field(key));
        for (auto& v : values) v *= scale;
        return values;
    }

private:
    std::string name_;
    const Tree* tree_;
    double freq_scale_;
};

void check_nonneg(double v, const std::string& field, const std::string& what)
{
    if (!(v >= 0.0)) fail(field + ": " + what + " must be >= 0");
}

void check_positive(double v, const std::string& field, const std::string& what)
{
    if (!(v > 0.0)) fail(field + ": " + what + " must be > 0");
}

MechanicalMode parse_mode(const Section& s, bool with_mass, double* mass)
{
    MechanicalMode m;
    m.omega = s.require_frequency("frequency");
    check_positive(m.omega, s.field("frequency"), "frequency");
    m.gamma = s.require_frequency("gamma");
    check_nonneg(m.gamma, s.field("gamma"), "gamma");
    m.bath_temperature = s.number("temperature").value_or(300.0);
    check_nonneg(m.bath_temperature, s.field("temperature"), "temperature");
    if (with_mass) {
        *mass = s.number("mass").value_or(1e-15);
        check_positive(*mass, s.field("mass"), "mass");
    }
    return m;
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_list(const std::vector<double>& values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += format_double(values[i]);
    }
    return out;
}

}  // namespace

std::string_view task_name(Task t)
{
    switch (t) {
    case Task::spectrum: return "spectrum";
    case Task::sweep: return "sweep";
    case Task::optimize: return "optimize";
    case Task::design: return "design";
    case Task::sense: return "sense";
    }
    return "spectrum";
}

std::optional<Task> parse_task(std::string_view text)
{
    for (Task t : {Task::spectrum, Task::sweep, Task::optimize, Task::design, Task::sense}) {
        if (task_name(t) == text) return t;
    }
    return std::nullopt;
}

RunConfig parse_config(const std::string& text, std::optional<Task> task_override,
                       const std::filesystem::path& base_dir)
{
    const Tree tree = ini::parse(text);
    const auto& known = schema();

    // Split into top-level keys and sections; reject anything unknown.
    std::map<std::string, const Tree*> sections;
    Tree top;
    for (const auto& [name, child] : tree) {
        const bool is_section = !child.empty() || (child.data().empty() && known.count(name) && !name.empty());
        if (is_section) {
            if (!known.count(name) || name.empty()) fail(unknown_message("section", "[" + name + "]", name, section_names()));
            const auto& allowed = known.at(name);
            for (const auto& [key, value] : child) {
                if (!value.empty()) fail("nested keys are not supported in [" + name + "]");
                if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
                    fail(unknown_message("key", name + "." + key, key, allowed));
                }
            }
            sections[name] = &child;
        } else {
            const auto& allowed = known.at("");
            if (std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
                fail(unknown_message("key", name, name, allowed));
            }
            top.put(name, child.data());
        }
    }

    RunConfig cfg;
    cfg.base_dir = base_dir;

    const Section root("", &top, 1.0);
    std::optional<Task> file_task;
    if (auto t = root.text("task")) {
        file_task = parse_task(*t);
        if (!file_task) fail("task: unknown task '" + *t + "'");
    }
    if (task_override && file_task && *task_override != *file_task) {
        fail("task: config says '" + std::string(task_name(*file_task)) + "' but command is '" +
             std::string(task_name(*task_override)) + "'");
    }
    if (task_override) cfg.task = *task_override;
    else if (file_task) cfg.task = *file_task;
    else fail("task: no task given in config or on the command line");

    if (auto f = root.text("fidelity")) {
        if (*f == "rwa") cfg.fidelity = Fidelity::rwa;
        else if (*f == "full") cfg.fidelity = Fidelity::full;
        else fail("fidelity: must be 'rwa' or 'full'");
    }
    double scale = kTwoPi;
    if (auto u = root.text("units")) {
        if (*u == "hz") scale = kTwoPi;
        else if (*u == "rad_s") scale = 1.0;
        else fail("units: must be 'hz' or 'rad_s'");
    }

    auto section = [&](const std::string& name) {
        auto it = sections.find(name);
        return Section(name, it == sections.end() ? nullptr : it->second, scale);
    };

    // System
    const Section mode_a = section("mode_a");
    const Section mode_b = section("mode_b");
    const Section cavity = section("cavity");
    const Section coupling = section("coupling");
    const bool any_system = mode_a.present() || mode_b.present() || cavity.present() || coupling.present();
    if (cfg.task != Task::design || any_system) {
        for (const auto* s : {&mode_a, &mode_b, &cavity, &coupling}) {
            if (!s->present()) fail("missing section [" + s->name() + "]");
        }
        SystemSpec& sys = cfg.system;
        sys.mode_a = parse_mode(mode_a, true, &sys.mass_a);
        sys.mode_b = parse_mode(mode_b, false, nullptr);

        const double kappa = cavity.require_frequency("kappa");
        check_positive(kappa, "cavity.kappa", "kappa");
        const double detuning = cavity.frequency("detuning").value_or(-sys.mode_b.omega);
        const double g0 = cavity.frequency("g0").value_or(scale);
        check_nonneg(g0, "cavity.g0", "g0");
        const double cav_T = cavity.number("temperature").value_or(0.0);
        check_nonneg(cav_T, "cavity.temperature", "temperature");

        const bool by_alpha = cavity.has("alpha") || cavity.has("alpha_im");
        const bool by_pump = cavity.has("pump_re") || cavity.has("pump_im");
        const bool by_c_om = cavity.has("c_om");
        if (int(by_alpha) + int(by_pump) + int(by_c_om) > 1) {
            fail("cavity: give at most one of alpha, pump_re/pump_im, c_om");
        }
        if (by_pump) {
            const cdouble pump(cavity.frequency("pump_re").value_or(0.0), cavity.frequency("pump_im").value_or(0.0));
            sys.cavity = CavityDrive::from_pump(kappa, detuning, g0, pump, cav_T);
            cfg.drive_input = DriveInput::pump;
        } else {
            const cdouble alpha(cavity.number("alpha").value_or(0.0), cavity.number("alpha_im").value_or(0.0));
            sys.cavity = CavityDrive::from_alpha(kappa, detuning, g0, alpha, cav_T);
        }

        const bool by_lambda = coupling.has("lambda");
        const bool by_c_ab = coupling.has("c_ab");
        if (by_lambda == by_c_ab) fail("coupling: give exactly one of lambda, c_ab");
        if (by_lambda) {
            sys.lambda = *coupling.frequency("lambda");
            check_nonneg(sys.lambda, "coupling.lambda", "lambda");
        } else {
            const double c_ab = *coupling.number("c_ab");
            check_nonneg(c_ab, "coupling.c_ab", "c_ab");
            sys.lambda = 0.5 * std::sqrt(c_ab * sys.mode_a.gamma * sys.mode_b.gamma);
        }

        if (by_c_om) {
            const double c_om = *cavity.number("c_om");
            check_nonneg(c_om, "cavity.c_om", "c_om");
            if (c_om > 0.0) {
                check_positive(g0, "cavity.g0", "g0 (needed for c_om)");
                check_positive(sys.mode_b.gamma, "mode_b.gamma", "gamma (needed for c_om)");
            }
            sys = with_optical_damping(sys, c_om * sys.mode_b.gamma);
        }
        try {
            sys.validate();
        } catch (const Error& e) {
            fail(e.what());
        }
        cfg.has_system = true;
    }

    // Grid
    const Section grid = section("grid");
    auto& g = cfg.grid;
    g.points_per_linewidth = grid.number("points_per_linewidth").value_or(g.points_per_linewidth);
    g.core_linewidths = grid.number("core_linewidths").value_or(g.core_linewidths);
    g.span_linewidths = grid.number("span_linewidths").value_or(g.span_linewidths);
    g.growth = grid.number("growth").value_or(g.growth);
    g.outer_linewidths = grid.number("outer_linewidths").value_or(g.outer_linewidths);
    check_positive(g.points_per_linewidth, "grid.points_per_linewidth", "points_per_linewidth");
    check_positive(g.core_linewidths, "grid.core_linewidths", "core_linewidths");
    check_positive(g.span_linewidths, "grid.span_linewidths", "span_linewidths");
    if (!(g.growth > 1.0)) fail("grid.growth: growth must be > 1");
    if (!(g.outer_linewidths >= g.span_linewidths)) fail("grid.outer_linewidths: must be >= span_linewidths");

    // Spectrum
    const Section spectrum = section("spectrum");
    if (auto m = spectrum.text("mode")) {
        if (*m != "a" && *m != "b" && *m != "c") fail("spectrum.mode: must be a, b or c");
        cfg.spectrum.mode = *m;
    }
    if (auto f = spectrum.text("fit")) cfg.spectrum.fit = ini::to_bool(*f, "spectrum.fit");
    cfg.spectrum.fit_halfwidth = spectrum.frequency("fit_halfwidth");
    if (cfg.spectrum.fit_halfwidth) check_positive(*cfg.spectrum.fit_halfwidth, "spectrum.fit_halfwidth", "fit_halfwidth");

    // Sweep
    const Section sweep = section("sweep");
    auto& sw = cfg.sweep;
    if (auto a = sweep.text("axis")) {
        if (*a == "c_om") sw.axis = SweepTask::Axis::c_om;
        else if (*a == "detuning") sw.axis = SweepTask::Axis::detuning;
        else fail("sweep.axis: must be 'c_om' or 'detuning'");
    }
    sw.c_om_min = sweep.number("c_om_min").value_or(sw.c_om_min);
    sw.c_om_max = sweep.number("c_om_max").value_or(sw.c_om_max);
    if (auto p = sweep.text("points_per_decade")) sw.points_per_decade = static_cast<int>(ini::to_long(*p, "sweep.points_per_decade"));
    sw.c_om_values = sweep.list("c_om_values", 1.0).value_or(std::vector<double>{});
    sw.detunings = sweep.list("detunings", scale).value_or(std::vector<double>{});
    sw.c_om = sweep.number("c_om").value_or(sw.c_om);
    if (auto o = sweep.text("optimize")) sw.optimize = ini::to_bool(*o, "sweep.optimize");
    check_positive(sw.c_om_min, "sweep.c_om_min", "c_om_min");
    if (!(sw.c_om_max > sw.c_om_min)) fail("sweep.c_om_max: must exceed c_om_min");
    if (sw.points_per_decade < 1) fail("sweep.points_per_decade: must be >= 1");
    check_nonneg(sw.c_om, "sweep.c_om", "c_om");
    for (std::size_t i = 0; i < sw.c_om_values.size(); ++i) {
        check_nonneg(sw.c_om_values[i], "sweep.c_om_values", "c_om");
        if (i && sw.c_om_values[i] < sw.c_om_values[i - 1]) fail("sweep.c_om_values: must be sorted");
    }
    for (double d : sw.detunings) check_nonneg(d, "sweep.detunings", "detuning");
    if (cfg.task == Task::sweep && sw.axis == SweepTask::Axis::detuning && sw.detunings.empty()) {
        fail("sweep.detunings: required when axis = detuning");
    }

    // Optimize
    const Section optimize = section("optimize");
    cfg.optimize.c_om_min = optimize.number("c_om_min").value_or(cfg.optimize.c_om_min);
    cfg.optimize.c_om_max = optimize.number("c_om_max").value_or(cfg.optimize.c_om_max);
    check_positive(cfg.optimize.c_om_min, "optimize.c_om_min", "c_om_min");
    if (!(cfg.optimize.c_om_max > cfg.optimize.c_om_min)) fail("optimize.c_om_max: must exceed c_om_min");

    // Design
    const Section design = section("design");
    auto& d = cfg.design;
    d.geometry.L_left = design.number("l_left").value_or(d.geometry.L_left);
    d.geometry.L_right = design.number("l_right").value_or(d.geometry.L_right);
    d.geometry.h = design.number("h").value_or(d.geometry.h);
    d.geometry.w = design.number("w").value_or(d.geometry.w);
    d.temperature = design.number("temperature").value_or(d.temperature);
    d.material = design.text("material").value_or(d.material);
    d.material_file = design.text("material_file").value_or("");
    d.clamping_calibration = design.number("clamping_calibration").value_or(d.clamping_calibration);
    d.kappa = design.frequency("kappa").value_or(d.kappa);
    check_positive(d.geometry.L_left, "design.l_left", "l_left");
    check_positive(d.geometry.L_right, "design.l_right", "l_right");
    check_positive(d.geometry.h, "design.h", "h");
    check_positive(d.geometry.w, "design.w", "w");
    check_nonneg(d.temperature, "design.temperature", "temperature");
    check_positive(d.clamping_calibration, "design.clamping_calibration", "clamping_calibration");
    check_positive(d.kappa, "design.kappa", "kappa");
    if (!d.material_file.empty()) {
        const auto path = base_dir / d.material_file;
        if (!std::filesystem::exists(path)) fail("design.material_file: file not found: " + path.string());
    }

    // Sense
    const Section sense = section("sense");
    cfg.sense.c_om = sense.number("c_om");
    if (cfg.sense.c_om) check_nonneg(*cfg.sense.c_om, "sense.c_om", "c_om");
    cfg.sense.span_linewidths = sense.number("span_linewidths").value_or(cfg.sense.span_linewidths);
    check_positive(cfg.sense.span_linewidths, "sense.span_linewidths", "span_linewidths");
    if (auto p = sense.text("points")) cfg.sense.points = static_cast<int>(ini::to_long(*p, "sense.points"));
    if (cfg.sense.points < 3) fail("sense.points: must be >= 3");

    // Output
    const Section output = section("output");
    cfg.output_path = output.text("path").value_or("");
    if (auto f = output.text("format")) {
        if (*f == "csv") cfg.format = OutputFormat::csv;
        else if (*f == "json") cfg.format = OutputFormat::json;
        else fail("output.format: must be 'csv' or 'json'");
    }
    return cfg;
}

std::string to_ini(const RunConfig& c)
{
    std::ostringstream os;
    auto kv = [&os](const std::string& k, const std::string& v) { os << k << " = " << v << "\n"; };
    auto num = [&](const std::string& k, double v) { kv(k, format_double(v)); };

    kv("task", std::string(task_name(c.task)));
    kv("fidelity", std::string(fidelity_name(c.fidelity)));
    kv("units", "rad_s");

    if (c.has_system) {
        const auto& s = c.system;
        os << "\n[mode_a]\n";
        num("frequency", s.mode_a.omega);
        num("gamma", s.mode_a.gamma);
        num("temperature", s.mode_a.bath_temperature);
        num("mass", s.mass_a);
        os << "\n[mode_b]\n";
        num("frequency", s.mode_b.omega);
        num("gamma", s.mode_b.gamma);
        num("temperature", s.mode_b.bath_temperature);
        os << "\n[cavity]\n";
        num("kappa", s.cavity.kappa);
        num("detuning", s.cavity.detuning);
        num("g0", s.cavity.g0);
        if (c.drive_input == DriveInput::pump) {
            num("pump_re", s.cavity.pump.real());
            num("pump_im", s.cavity.pump.imag());
        } else {
            num("alpha", s.cavity.alpha.real());
            num("alpha_im", s.cavity.alpha.imag());
        }
        num("temperature", s.cavity.bath_temperature);
        os << "\n[coupling]\n";
        num("lambda", s.lambda);
    }

    os << "\n[grid]\n";
    num("points_per_linewidth", c.grid.points_per_linewidth);
    num("core_linewidths", c.grid.core_linewidths);
    num("span_linewidths", c.grid.span_linewidths);
    num("growth", c.grid.growth);
    num("outer_linewidths", c.grid.outer_linewidths);

    os << "\n[spectrum]\n";
    kv("mode", c.spectrum.mode);
    kv("fit", c.spectrum.fit ? "true" : "false");
    if (c.spectrum.fit_halfwidth) num("fit_halfwidth", *c.spectrum.fit_halfwidth);

    os << "\n[sweep]\n";
    kv("axis", c.sweep.axis == SweepTask::Axis::c_om ? "c_om" : "detuning");
    num("c_om_min", c.sweep.c_om_min);
    num("c_om_max", c.sweep.c_om_max);
    kv("points_per_decade", std::to_string(c.sweep.points_per_decade));
    if (!c.sweep.c_om_values.empty()) kv("c_om_values", format_list(c.sweep.c_om_values));
    if (!c.sweep.detunings.empty()) kv("detunings", format_list(c.sweep.detunings));
    num("c_om", c.sweep.c_om);
    kv("optimize", c.sweep.optimize ? "true" : "false");

    os << "\n[optimize]\n";
    num("c_om_min", c.optimize.c_om_min);
    num("c_om_max", c.optimize.c_om_max);

    os << "\n[design]\n";
    num("l_left", c.design.geometry.L_left);
    num("l_right", c.design.geometry.L_right);
    num("h", c.design.geometry.h);
    num("w", c.design.geometry.w);
    num("temperature", c.design.temperature);
    kv("material", c.design.material);
    if (!c.design.material_file.empty()) kv("material_file", c.design.material_file);
    num("clamping_calibration", c.design.clamping_calibration);
    num("kappa", c.design.kappa);

    os << "\n[sense]\n";
    if (c.sense.c_om) num("c_om", *c.sense.c_om);
    num("span_linewidths", c.sense.span_linewidths);
    kv("points", std::to_string(c.sense.points));

    os << "\n[output]\n";
    if (!c.output_path.empty()) kv("path", c.output_path);
    kv("format", c.format == OutputFormat::csv ? "csv" : "json");
    return os.str();
}

}  // namespace omcool
