#pragma once

// Time-to-solution tables: the TTS(τ) curve per (protocol, N), its global
// minimum over the short-time region and a local minimum in the long-time
// region.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cdqa/cli/records.hpp"

namespace cdqa::cli {

inline constexpr double kShortTimeMax = 1.0;
inline constexpr double kLongTimeMin = 10.0;
/// Below this fidelity TTS is dominated by the fidelity's absolute error.
inline constexpr double kPrecisionFidelity = 1e-8;

struct CurvePoint {
    double tau = 0.0;
    double tts = 0.0;
    double fidelity = 0.0;
    bool failed = false;
    bool precision_warning = false;
};

struct Minimum {
    double tau = 0.0;
    double tts = std::numeric_limits<double>::infinity();
    bool boundary = false;  ///< attained at an edge of the searched τ range
};

struct SweepSeries {
    Protocol protocol;
    int N;
    std::vector<CurvePoint> curve;  // ascending τ
    std::optional<Minimum> short_time;
    std::optional<Minimum> long_time;  // unset when the region has no interior local minimum
};

/// Global minimum of the usable points with τ ≤ kShortTimeMax.
inline std::optional<Minimum> short_time_minimum(const std::vector<CurvePoint>& curve) {
    std::vector<const CurvePoint*> region;
    for (const auto& p : curve)
        if (p.tau <= kShortTimeMax && !p.failed) region.push_back(&p);
    if (region.empty()) return std::nullopt;
    std::size_t best = 0;
    for (std::size_t i = 1; i < region.size(); ++i)
        if (region[i]->tts < region[best]->tts) best = i;
    if (!std::isfinite(region[best]->tts)) return std::nullopt;
    return Minimum{region[best]->tau, region[best]->tts, best == 0 || best + 1 == region.size()};
}

/// Lowest strict local minimum of TTS(τ) among points with τ ≥ kLongTimeMin,
/// neighbours taken along the full curve.
inline std::optional<Minimum> long_time_local_minimum(const std::vector<CurvePoint>& curve) {
    std::optional<Minimum> best;
    for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
        const auto& p = curve[i];
        if (p.tau < kLongTimeMin || p.failed || !std::isfinite(p.tts)) continue;
        if (curve[i - 1].failed || curve[i + 1].failed) continue;
        if (p.tts < curve[i - 1].tts && p.tts <= curve[i + 1].tts && (!best || p.tts < best->tts))
            best = Minimum{p.tau, p.tts, false};
    }
    return best;
}

/// Groups sorted records into per-(protocol, N) series.
inline std::vector<SweepSeries> build_series(const std::vector<Record>& records) {
    std::map<std::pair<int, int>, SweepSeries> groups;
    for (const auto& r : records) {
        auto [it, inserted] = groups.try_emplace({static_cast<int>(r.protocol), r.N}, SweepSeries{r.protocol, r.N, {}, {}, {}});
        CurvePoint p;
        p.tau = r.tau;
        p.failed = r.error.has_value();
        p.tts = p.failed ? std::numeric_limits<double>::quiet_NaN() : r.result.tts;
        p.fidelity = r.result.fidelity;
        p.precision_warning = !p.failed && r.result.fidelity < kPrecisionFidelity;
        it->second.curve.push_back(p);
    }
    std::vector<SweepSeries> out;
    for (auto& [key, s] : groups) {
        std::sort(s.curve.begin(), s.curve.end(), [](const CurvePoint& a, const CurvePoint& b) { return a.tau < b.tau; });
        s.short_time = short_time_minimum(s.curve);
        s.long_time = long_time_local_minimum(s.curve);
        out.push_back(std::move(s));
    }
    return out;
}

inline void write_sweep(std::ostream& os, const std::vector<Record>& records, const OutputSelection& sel,
                        Format format) {
    const auto series = build_series(records);
    if (format == Format::Csv) {
        os << "# tts_curve\n" << kRecordHeader << ",precision_warning\n";
        for (const auto& r : records) {
            std::ostringstream line;
            write_record(line, r, sel, format);
            std::string text = line.str();
            text.pop_back();
            const bool warn = !r.error && r.result.fidelity < kPrecisionFidelity;
            os << text << ',' << (warn ? 1 : 0) << '\n';
        }
        os << "\n# short_time_minimum\nprotocol,N,tau,tts,boundary\n";
        for (const auto& s : series) {
            if (!s.short_time) continue;
            os << to_string(s.protocol) << ',' << s.N << ',' << format_number(s.short_time->tau) << ','
               << format_number(s.short_time->tts) << ',' << (s.short_time->boundary ? 1 : 0) << '\n';
        }
        os << "\n# long_time_minimum\nprotocol,N,tau,tts\n";
        for (const auto& s : series) {
            if (!s.long_time) continue;
            os << to_string(s.protocol) << ',' << s.N << ',' << format_number(s.long_time->tau) << ','
               << format_number(s.long_time->tts) << '\n';
        }
        return;
    }
    for (const auto& r : records) {
        std::ostringstream line;
        write_record(line, r, sel, format);
        auto j = nlohmann::ordered_json::parse(line.str());
        j["table"] = "tts_curve";
        j["precision_warning"] = !r.error && r.result.fidelity < kPrecisionFidelity;
        os << j.dump() << '\n';
    }
    for (const auto& s : series) {
        for (const auto& [name, m] : {std::pair{"short_time_minimum", s.short_time},
                                      std::pair{"long_time_minimum", s.long_time}}) {
            if (!m) continue;
            nlohmann::ordered_json j;
            j["table"] = name;
            j["protocol"] = to_string(s.protocol);
            j["N"] = s.N;
            j["tau"] = m->tau;
            j["tts"] = json_number(m->tts);
            if (std::string(name) == "short_time_minimum") j["boundary"] = m->boundary;
            os << j.dump() << '\n';
        }
    }
}

}  // namespace cdqa::cli
