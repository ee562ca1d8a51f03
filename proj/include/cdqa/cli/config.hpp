#pragma once

// JSON run configuration.
//
//   {
//     "model": {"pspin": {"N": 20}}            or {"lz": {"h": 0.1}},
//     "protocol": "qa" | ["qa", "cd1", "cd2"],
//     "frame": "lab" | "rotated",
//     "tau": 300 | [0.1, 1, 10] | {"min": 0.1, "max": 1e5, "points": 25},
//     "gamma_init": 0.1,
//     "p_r": 0.99,
//     "integrator": {"method": "rk4" | "expm", "steps": "auto" | 4000,
//                    "norm_tolerance": 1e-6, "convergence_check": false},
//     "outputs": {"fidelity": true, "residual": true, "tts": true,
//                 "spectrum": {"samples": 11}}
//   }
//
// "N" may also be a list of sizes. Unknown keys are rejected.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cdqa/dynamics.hpp"
#include "cdqa/model.hpp"

namespace cdqa::cli {

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& message, int line)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line(line) {}
    int line;
};

struct OutputSelection {
    bool fidelity = true;
    bool residual = true;
    bool tts = true;
    int spectrum_samples = 0;
};

enum class ModelKind { PSpin, LandauZener };

struct RunConfig {
    ModelKind model_kind = ModelKind::PSpin;
    std::vector<int> sizes{4};  // p-spin N values
    double h = 0.1;             // Landau–Zener field
    std::vector<Protocol> protocols{Protocol::TraditionalQA};
    Frame frame = Frame::Lab;
    std::vector<double> taus{1.0};
    double gamma_init = 0.1;
    double p_r = kDefaultSuccessProbability;
    IntegratorConfig integrator;
    OutputSelection outputs;

    std::vector<ModelSpec> models() const {
        std::vector<ModelSpec> m;
        if (model_kind == ModelKind::LandauZener) {
            m.push_back(LandauZenerModel{h});
        } else {
            for (int n : sizes) m.push_back(PSpinModel{n});
        }
        return m;
    }
};

/// n points spaced evenly in log τ, both ends included.
inline std::vector<double> log_grid(double lo, double hi, int points) {
    if (!(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("log grid needs 0 < min <= max");
    if (points < 1) throw std::invalid_argument("log grid needs at least one point");
    std::vector<double> g(points);
    if (points == 1) {
        g[0] = lo;
        return g;
    }
    const double a = std::log10(lo), b = std::log10(hi);
    for (int i = 0; i < points; ++i) g[i] = std::pow(10.0, a + (b - a) * i / (points - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

namespace detail {

using nlohmann::json;

/// Resolves a key path to a source line by scanning for each quoted key in
/// turn after the previous match.
class LineLocator {
public:
    explicit LineLocator(std::string text) : text_(std::move(text)) {}

    int line_of(const std::vector<std::string>& path) const {
        std::size_t pos = 0;
        bool found = false;
        for (const auto& key : path) {
            const auto at = text_.find('"' + key + '"', pos);
            if (at == std::string::npos) break;
            pos = at;
            found = true;
        }
        return found ? line_at(pos) : 0;
    }

    int line_at(std::size_t offset) const {
        offset = std::min(offset, text_.size());
        return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<long>(offset), '\n'));
    }

private:
    std::string text_;
};

class Reader {
public:
    explicit Reader(const LineLocator& loc) : loc_(loc) {}

    [[noreturn]] void fail(const std::vector<std::string>& path, const std::string& message) const {
        std::string dotted;
        for (const auto& p : path) dotted += (dotted.empty() ? "" : ".") + p;
        throw ConfigError(dotted.empty() ? message : dotted + ": " + message, loc_.line_of(path));
    }

    void only_keys(const json& obj, const std::vector<std::string>& path,
                   std::initializer_list<const char*> allowed) const {
        if (!obj.is_object()) fail(path, "expected an object");
        for (const auto& [key, value] : obj.items()) {
            if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
                auto p = path;
                p.push_back(key);
                fail(p, "unknown key");
            }
        }
    }

    double number(const json& v, const std::vector<std::string>& path) const {
        if (!v.is_number()) fail(path, "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(path, "expected a finite number");
        return d;
    }

    double positive(const json& v, const std::vector<std::string>& path) const {
        const double d = number(v, path);
        if (!(d > 0.0)) fail(path, "must be positive");
        return d;
    }

    long integer(const json& v, const std::vector<std::string>& path) const {
        if (!v.is_number_integer()) fail(path, "expected an integer");
        return v.get<long>();
    }

    bool boolean(const json& v, const std::vector<std::string>& path) const {
        if (!v.is_boolean()) fail(path, "expected true or false");
        return v.get<bool>();
    }

    std::string string(const json& v, const std::vector<std::string>& path) const {
        if (!v.is_string()) fail(path, "expected a string");
        return v.get<std::string>();
    }

private:
    const LineLocator& loc_;
};

inline Protocol parse_protocol(const std::string& s, const Reader& r, const std::vector<std::string>& path) {
    if (s == "qa") return Protocol::TraditionalQA;
    if (s == "cd1") return Protocol::SingleParamCD;
    if (s == "cd2") return Protocol::TwoParamCD;
    r.fail(path, "unknown protocol '" + s + "' (expected qa, cd1 or cd2)");
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
    using detail::json;
    const detail::LineLocator loc(text);
    const detail::Reader r(loc);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what(), loc.line_at(e.byte > 0 ? e.byte - 1 : 0));
    }
    r.only_keys(doc, {}, {"model", "protocol", "frame", "tau", "gamma_init", "p_r", "integrator", "outputs"});

    RunConfig cfg;
    if (!doc.contains("model")) r.fail({}, "missing required key 'model'");
    const json& model = doc["model"];
    r.only_keys(model, {"model"}, {"pspin", "lz"});
    if (model.size() != 1) r.fail({"model"}, "expected exactly one of 'pspin' or 'lz'");
    if (model.contains("pspin")) {
        const json& p = model["pspin"];
        r.only_keys(p, {"model", "pspin"}, {"N"});
        if (!p.contains("N")) r.fail({"model", "pspin"}, "missing required key 'N'");
        cfg.sizes.clear();
        const std::vector<std::string> path{"model", "pspin", "N"};
        auto add = [&](const json& v) {
            const long n = r.integer(v, path);
            if (n < 2 || n > 10000) r.fail(path, "N must lie in [2, 10000]");
            cfg.sizes.push_back(static_cast<int>(n));
        };
        if (p["N"].is_array()) {
            if (p["N"].empty()) r.fail(path, "list must not be empty");
            for (const auto& v : p["N"]) add(v);
        } else {
            add(p["N"]);
        }
    } else {
        cfg.model_kind = ModelKind::LandauZener;
        const json& lz = model["lz"];
        r.only_keys(lz, {"model", "lz"}, {"h"});
        if (lz.contains("h")) cfg.h = r.number(lz["h"], {"model", "lz", "h"});
        // The exact single-parameter case needs γ of order one relative to h.
        cfg.gamma_init = 1.0;
    }

    if (doc.contains("protocol")) {
        cfg.protocols.clear();
        const std::vector<std::string> path{"protocol"};
        if (doc["protocol"].is_array()) {
            if (doc["protocol"].empty()) r.fail(path, "list must not be empty");
            for (const auto& v : doc["protocol"])
                cfg.protocols.push_back(detail::parse_protocol(r.string(v, path), r, path));
        } else {
            cfg.protocols.push_back(detail::parse_protocol(r.string(doc["protocol"], path), r, path));
        }
    }

    if (doc.contains("frame")) {
        const auto f = r.string(doc["frame"], {"frame"});
        if (f == "lab") cfg.frame = Frame::Lab;
        else if (f == "rotated") cfg.frame = Frame::Rotated;
        else r.fail({"frame"}, "unknown frame '" + f + "' (expected lab or rotated)");
    }

    if (doc.contains("tau")) {
        const json& t = doc["tau"];
        const std::vector<std::string> path{"tau"};
        cfg.taus.clear();
        if (t.is_number()) {
            cfg.taus.push_back(r.positive(t, path));
        } else if (t.is_array()) {
            if (t.empty()) r.fail(path, "list must not be empty");
            for (const auto& v : t) cfg.taus.push_back(r.positive(v, path));
        } else if (t.is_object()) {
            r.only_keys(t, path, {"min", "max", "points"});
            for (const char* k : {"min", "max", "points"})
                if (!t.contains(k)) r.fail(path, std::string("missing required key '") + k + "'");
            const double lo = r.positive(t["min"], {"tau", "min"});
            const double hi = r.positive(t["max"], {"tau", "max"});
            const long points = r.integer(t["points"], {"tau", "points"});
            if (hi < lo) r.fail({"tau", "max"}, "must not be below min");
            if (points < 1) r.fail({"tau", "points"}, "must be at least 1");
            cfg.taus = log_grid(lo, hi, static_cast<int>(points));
        } else {
            r.fail(path, "expected a number, a list, or {min, max, points}");
        }
    }

    if (doc.contains("gamma_init")) cfg.gamma_init = r.number(doc["gamma_init"], {"gamma_init"});
    if (doc.contains("p_r")) {
        cfg.p_r = r.number(doc["p_r"], {"p_r"});
        if (!(cfg.p_r > 0.0 && cfg.p_r < 1.0)) r.fail({"p_r"}, "must lie strictly between 0 and 1");
    }

    cfg.integrator.method = IntegrationMethod::PiecewiseExponential;
    if (doc.contains("integrator")) {
        const json& in = doc["integrator"];
        r.only_keys(in, {"integrator"}, {"method", "steps", "norm_tolerance", "convergence_check"});
        if (in.contains("method")) {
            const auto m = r.string(in["method"], {"integrator", "method"});
            if (m == "rk4") cfg.integrator.method = IntegrationMethod::FixedStepRK4;
            else if (m == "expm") cfg.integrator.method = IntegrationMethod::PiecewiseExponential;
            else r.fail({"integrator", "method"}, "unknown method '" + m + "' (expected rk4 or expm)");
        }
        if (in.contains("steps")) {
            const json& s = in["steps"];
            if (s.is_string()) {
                if (s.get<std::string>() != "auto") r.fail({"integrator", "steps"}, "expected \"auto\" or an integer");
            } else {
                const long n = r.integer(s, {"integrator", "steps"});
                if (n < 100) r.fail({"integrator", "steps"}, "must be at least 100");
                cfg.integrator.steps = n;
            }
        }
        if (in.contains("norm_tolerance"))
            cfg.integrator.norm_tolerance = r.positive(in["norm_tolerance"], {"integrator", "norm_tolerance"});
        if (in.contains("convergence_check"))
            cfg.integrator.convergence_check = r.boolean(in["convergence_check"], {"integrator", "convergence_check"});
    }

    if (doc.contains("outputs")) {
        const json& out = doc["outputs"];
        r.only_keys(out, {"outputs"}, {"fidelity", "residual", "tts", "spectrum"});
        if (out.contains("fidelity")) cfg.outputs.fidelity = r.boolean(out["fidelity"], {"outputs", "fidelity"});
        if (out.contains("residual")) cfg.outputs.residual = r.boolean(out["residual"], {"outputs", "residual"});
        if (out.contains("tts")) cfg.outputs.tts = r.boolean(out["tts"], {"outputs", "tts"});
        if (out.contains("spectrum")) {
            const json& sp = out["spectrum"];
            r.only_keys(sp, {"outputs", "spectrum"}, {"samples"});
            if (sp.contains("samples")) {
                const long n = r.integer(sp["samples"], {"outputs", "spectrum", "samples"});
                if (n < 2) r.fail({"outputs", "spectrum", "samples"}, "must be at least 2");
                cfg.outputs.spectrum_samples = static_cast<int>(n);
            }
        }
    }

    // Each protocol's schedule must be admissible before any cell runs.
    for (const auto& model : cfg.models())
        for (Protocol p : cfg.protocols) {
            const ScheduleSpec spec{cfg.taus.front(), default_gamma_mode(p, model), cfg.gamma_init};
            try {
                ProtocolSpec{p, cfg.frame, model}.validate(spec);
            } catch (const DomainError& e) {
                r.fail({"gamma_init"}, e.what());
            }
        }
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'", 0);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace cdqa::cli
