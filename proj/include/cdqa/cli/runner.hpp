#pragma once

// Executes the (protocol, N, τ) grid of a configuration on a worker pool.

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "cdqa/dynamics.hpp"
#include "cdqa/cli/config.hpp"
#include "cdqa/cli/records.hpp"

namespace cdqa::cli {

struct Cell {
    Protocol protocol;
    ModelSpec model;
    double tau;
};

inline std::vector<Cell> expand_cells(const RunConfig& cfg) {
    std::vector<Cell> cells;
    for (Protocol p : cfg.protocols)
        for (const auto& m : cfg.models())
            for (double tau : cfg.taus) cells.push_back({p, m, tau});
    return cells;
}

inline int model_size(const ModelSpec& m) {
    if (const auto* p = std::get_if<PSpinModel>(&m)) return p->N;
    return 1;
}

/// Runs one cell. Numerical failures are captured in the record; schedule
/// or protocol errors propagate.
inline Record run_cell(const RunConfig& cfg, const Cell& cell, int spectrum_samples = 0) {
    const ProtocolSpec protocol{cell.protocol, cfg.frame, cell.model};
    const ScheduleSpec spec{cell.tau, default_gamma_mode(cell.protocol, cell.model), cfg.gamma_init};
    Record rec;
    rec.protocol = cell.protocol;
    rec.frame = protocol.effective_frame();
    rec.N = model_size(cell.model);
    rec.tau = cell.tau;
    rec.gamma_init = cfg.gamma_init;
    RunOptions options;
    options.success_probability = cfg.p_r;
    options.spectrum_samples = spectrum_samples;
    try {
        rec.result = run_protocol(spec, protocol, cfg.integrator, options);
    } catch (const IntegrationError& e) {
        rec.error = e.what();
        rec.result.diagnostics.steps = e.diagnostics.steps;
        rec.result.diagnostics.norm_drift = e.diagnostics.norm_drift;
        rec.result.diagnostics.convergence_delta = e.diagnostics.convergence_delta;
    }
    return rec;
}

/// All cells of the grid, sorted by (protocol, N, τ) whatever the number of
/// workers.
inline std::vector<Record> run_grid(const RunConfig& cfg, int jobs = 1) {
    const auto cells = expand_cells(cfg);
    std::vector<Record> records(cells.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::atomic<bool> stop{false};
    auto worker = [&] {
        for (std::size_t i; !stop && (i = next++) < cells.size();) {
            try {
                records[i] = run_cell(cfg, cells[i]);
            } catch (...) {
                stop = true;
                const std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    std::stable_sort(records.begin(), records.end(),
                     [](const Record& a, const Record& b) { return a.key() < b.key(); });
    return records;
}

inline bool any_failed(const std::vector<Record>& records) {
    return std::any_of(records.begin(), records.end(), [](const Record& r) { return r.error.has_value(); });
}

}  // namespace cdqa::cli
