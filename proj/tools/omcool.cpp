// Command line front end: omcool <task> --config FILE [--out PATH] [--format csv|json] [--fidelity rwa|full]

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "omcool/config.hpp"
#include "omcool/errors.hpp"
#include "omcool/run.hpp"

namespace {

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw omcool::Error(omcool::ErrorKind::config, "cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw omcool::Error(omcool::ErrorKind::config, "cannot write " + path);
    out << text;
    if (!out) throw omcool::Error(omcool::ErrorKind::config, "write failed for " + path);
}

struct Options {
    std::string config;
    std::string out;
    std::string format;
    std::string fidelity;
};

int execute(omcool::Task task, const Options& opt)
{
    using namespace omcool;
    const std::filesystem::path path(opt.config);
    RunConfig cfg = parse_config(read_file(path), task, path.parent_path());
    if (!opt.fidelity.empty()) cfg.fidelity = parse_fidelity(opt.fidelity);
    if (!opt.format.empty()) cfg.format = opt.format == "json" ? OutputFormat::json : OutputFormat::csv;
    if (!opt.out.empty()) cfg.output_path = opt.out;

    const RunArtifacts art = run(cfg);
    if (cfg.format == OutputFormat::json) {
        if (cfg.output_path.empty()) std::cout << art.json;
        else write_file(cfg.output_path, art.json);
    } else if (cfg.output_path.empty()) {
        std::cout << art.csv;
        std::cerr << art.summary_json;
    } else {
        write_file(cfg.output_path, art.csv);
        write_file(cfg.output_path + ".summary.json", art.summary_json);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Mode-coupling cooling calculator"};
    app.set_version_flag("--version", std::string(omcool::kToolVersion));
    app.require_subcommand(1);

    const std::pair<omcool::Task, const char*> tasks[] = {
        {omcool::Task::spectrum, "position spectrum of one mode and its integrated occupation"},
        {omcool::Task::sweep, "occupation of mode a across C_OM or the a-b detuning"},
        {omcool::Task::optimize, "optimal C_OM and the occupation reached there"},
        {omcool::Task::design, "map a two-arm beam geometry onto mode parameters"},
        {omcool::Task::sense, "force-noise spectrum of mode a"},
    };

    Options opt;
    omcool::Task chosen = omcool::Task::spectrum;
    for (const auto& [t, about] : tasks) {
        auto* sub = app.add_subcommand(std::string(omcool::task_name(t)), about);
        sub->add_option("--config", opt.config, "configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out, "output path (stdout when absent)");
        sub->add_option("--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--fidelity", opt.fidelity, "rwa or full")->check(CLI::IsMember({"rwa", "full"}));
        sub->callback([&chosen, t] { chosen = t; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        if (code == 0) return 0;
        std::cerr << omcool::error_json("usage_error", e.what(), 1);
        return 1;
    }

    try {
        return execute(chosen, opt);
    } catch (const omcool::Error& e) {
        const int code = omcool::exit_code(e.kind());
        std::cerr << omcool::error_json(std::string(omcool::kind_name(e.kind())), e.what(), code);
        return code;
    } catch (const std::exception& e) {
        std::cerr << omcool::error_json("numerical_failure", e.what(), 3);
        return 3;
    }
}
