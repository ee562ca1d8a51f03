#pragma once

// Instantaneous spectrum and eigenstate occupations along a single run.

#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "cdqa/cli/config.hpp"
#include "cdqa/cli/records.hpp"
#include "cdqa/cli/runner.hpp"

namespace cdqa::cli {

inline constexpr int kDefaultSpectrumSamples = 21;

inline constexpr const char* kSpectrumHeader = "t_over_tau,index,eigenvalue,occupation";

/// Runs the configuration's single cell with occupations recorded.
inline Record run_spectrum(const RunConfig& cfg) {
    const auto cells = expand_cells(cfg);
    if (cells.size() != 1)
        throw ConfigError("spectrum needs exactly one protocol, one N and one tau; the config spans " +
                              std::to_string(cells.size()) + " cells",
                          0);
    const int samples = cfg.outputs.spectrum_samples > 0 ? cfg.outputs.spectrum_samples : kDefaultSpectrumSamples;
    return run_cell(cfg, cells.front(), samples);
}

inline void write_spectrum(std::ostream& os, const Record& rec, Format format) {
    if (!rec.result.occupations) return;
    if (format == Format::Csv) os << kSpectrumHeader << '\n';
    for (const auto& sample : *rec.result.occupations) {
        const double s = sample.t / rec.tau;
        for (Eigen::Index n = 0; n < sample.eigenvalues.size(); ++n) {
            if (format == Format::Csv) {
                os << format_number(s) << ',' << n << ',' << format_number(sample.eigenvalues[n]) << ','
                   << format_number(sample.probabilities[n]) << '\n';
            } else {
                nlohmann::ordered_json j;
                j["t_over_tau"] = s;
                j["index"] = n;
                j["eigenvalue"] = sample.eigenvalues[n];
                j["occupation"] = sample.probabilities[n];
                os << j.dump() << '\n';
            }
        }
    }
}

}  // namespace cdqa::cli
