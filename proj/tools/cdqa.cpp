// cdqa: command-line front end for annealing runs, TTS sweeps, spectra and
// self-validation.
//
// Exit codes: 0 success, 1 validation check failed, 2 configuration error,
// 3 numerical failure.

#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "cdqa/cli/config.hpp"
#include "cdqa/cli/records.hpp"
#include "cdqa/cli/runner.hpp"
#include "cdqa/cli/spectrum.hpp"
#include "cdqa/cli/sweep.hpp"
#include "cdqa/cli/validate.hpp"

namespace {

constexpr int kExitChecksFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonOptions {
    std::string config;
    std::string out;
    std::string format = "csv";
    int jobs = 1;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool needs_config) {
    auto* c = cmd->add_option("--config", opt.config, "JSON run configuration");
    if (needs_config) c->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", opt.out, "write results here instead of standard output");
    cmd->add_option("--format", opt.format, "output encoding")->check(CLI::IsMember({"csv", "json"}));
}

cdqa::cli::Format format_of(const CommonOptions& opt) {
    return opt.format == "json" ? cdqa::cli::Format::Json : cdqa::cli::Format::Csv;
}

/// Standard output unless --out was given.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path.empty()) return;
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw cdqa::cli::ConfigError("cannot open output file '" + path + "'", 0);
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

int report_failures(const std::vector<cdqa::cli::Record>& records) {
    int code = 0;
    for (const auto& r : records) {
        if (!r.error) continue;
        std::cerr << "cdqa: " << to_string(r.protocol) << " N=" << r.N << " tau=" << cdqa::cli::format_number(r.tau)
                  << ": " << *r.error << '\n';
        code = kExitNumerical;
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum annealing with variational counter-diabatic driving"};
    app.require_subcommand(1);

    CommonOptions run_opt, sweep_opt, spectrum_opt, validate_opt;
    auto* run = app.add_subcommand("run", "one record per (protocol, N, tau) cell");
    add_common(run, run_opt, true);
    run->add_option("--jobs", run_opt.jobs, "cells evaluated in parallel")->check(CLI::PositiveNumber);

    auto* sweep = app.add_subcommand("sweep", "TTS curves with short- and long-time minima");
    add_common(sweep, sweep_opt, true);
    sweep->add_option("--jobs", sweep_opt.jobs, "cells evaluated in parallel")->check(CLI::PositiveNumber);

    auto* spectrum = app.add_subcommand("spectrum", "instantaneous spectrum and occupations of one run");
    add_common(spectrum, spectrum_opt, true);

    auto* validate = app.add_subcommand("validate", "oracle-backed consistency checks");
    validate->add_option("--out", validate_opt.out, "write the report here instead of standard output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run || *sweep) {
            const auto& opt = *run ? run_opt : sweep_opt;
            const auto cfg = cdqa::cli::load_config(opt.config);
            Sink sink(opt.out);
            const auto records = cdqa::cli::run_grid(cfg, opt.jobs);
            if (*run) {
                cdqa::cli::write_header(sink.stream(), format_of(opt));
                for (const auto& r : records) cdqa::cli::write_record(sink.stream(), r, cfg.outputs, format_of(opt));
            } else {
                cdqa::cli::write_sweep(sink.stream(), records, cfg.outputs, format_of(opt));
            }
            sink.stream().flush();
            return report_failures(records);
        }
        if (*spectrum) {
            const auto cfg = cdqa::cli::load_config(spectrum_opt.config);
            Sink sink(spectrum_opt.out);
            const auto rec = cdqa::cli::run_spectrum(cfg);
            cdqa::cli::write_spectrum(sink.stream(), rec, format_of(spectrum_opt));
            sink.stream().flush();
            return report_failures({rec});
        }
        Sink sink(validate_opt.out);
        const auto checks = cdqa::cli::run_validation();
        cdqa::cli::write_report(sink.stream(), checks);
        return cdqa::cli::all_passed(checks) ? 0 : kExitChecksFailed;
    } catch (const cdqa::cli::ConfigError& e) {
        std::cerr << "cdqa: config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const cdqa::DomainError& e) {
        std::cerr << "cdqa: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "cdqa: numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}
