#pragma once

// Result records and their CSV / JSON-lines encodings.

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <tuple>

#include <json.hpp>

#include "cdqa/metrics.hpp"
#include "cdqa/model.hpp"
#include "cdqa/cli/config.hpp"

namespace cdqa::cli {

enum class Format { Csv, Json };

inline constexpr const char* kRecordHeader =
    "protocol,frame,N,tau,gamma_init,fidelity,residual_energy,tts,norm_drift,steps";

/// One (protocol, N, τ) cell. `error` is set when the cell failed.
struct Record {
    Protocol protocol = Protocol::TraditionalQA;
    Frame frame = Frame::Lab;
    int N = 0;  // 1 for Landau–Zener
    double tau = 0.0;
    double gamma_init = 0.0;
    RunResult result;
    std::optional<std::string> error;

    auto key() const { return std::make_tuple(static_cast<int>(protocol), N, tau); }
};

/// Shortest round-trip decimal with 17 significant digits.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// JSON has no infinity; it is written as the string "inf".
inline nlohmann::json json_number(double v) {
    if (std::isfinite(v)) return v;
    return format_number(v);
}

inline void write_header(std::ostream& os, Format format) {
    if (format == Format::Csv) os << kRecordHeader << '\n';
}

inline void write_record(std::ostream& os, const Record& r, const OutputSelection& sel, Format format) {
    const bool failed = r.error.has_value();
    if (format == Format::Csv) {
        auto field = [&](bool enabled, double v) -> std::string {
            if (failed) return "FAILED";
            return enabled ? format_number(v) : "";
        };
        os << to_string(r.protocol) << ',' << to_string(r.frame) << ',' << r.N << ',' << format_number(r.tau)
           << ',' << format_number(r.gamma_init) << ',' << field(sel.fidelity, r.result.fidelity) << ','
           << field(sel.residual, r.result.residual_energy) << ',' << field(sel.tts, r.result.tts) << ','
           << format_number(r.result.diagnostics.norm_drift) << ',' << r.result.diagnostics.steps << '\n';
        return;
    }
    nlohmann::ordered_json j;
    j["protocol"] = to_string(r.protocol);
    j["frame"] = to_string(r.frame);
    j["N"] = r.N;
    j["tau"] = r.tau;
    j["gamma_init"] = r.gamma_init;
    if (failed) {
        j["status"] = "failed";
        j["error"] = *r.error;
    } else {
        if (sel.fidelity) j["fidelity"] = json_number(r.result.fidelity);
        if (sel.residual) j["residual_energy"] = json_number(r.result.residual_energy);
        if (sel.tts) j["tts"] = json_number(r.result.tts);
    }
    j["norm_drift"] = json_number(r.result.diagnostics.norm_drift);
    j["steps"] = r.result.diagnostics.steps;
    if (r.result.diagnostics.convergence_delta)
        j["convergence_delta"] = json_number(*r.result.diagnostics.convergence_delta);
    os << j.dump() << '\n';
}

}  // namespace cdqa::cli
