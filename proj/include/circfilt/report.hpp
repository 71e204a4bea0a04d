#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "circfilt/experiments.hpp"

namespace circfilt {

/// circular: t,filter,r_mean,r_hat,n_runs; linear: t,filter,sigma2_mean,mse,n_runs.
void write_summary_csv(std::ostream& out, std::span<const std::string> header, const RunSummary& summary);

/// One row per (value, filter) at the final time: parameter,value,filter,r_mean,r_hat,n_runs.
void write_sweep_csv(std::ostream& out, std::span<const std::string> header, const SweepResult& sweep);

/// filter,median_seconds,samples (samples separated by ';').
void write_timing_csv(std::ostream& out, std::span<const std::string> header, const TimingReport& timing);

/// t,phi then <label>_mu,<label>_r (or _sigma2) per filter.
void write_trace_csv(std::ostream& out, std::span<const std::string> header, const RunSummary& summary,
                     const RunTrace& trace);

/// Line plot of r̄_t (solid) and r̂_t (dashed) per filter; linear summaries plot σ² and MSE.
void write_summary_svg(std::ostream& out, const RunSummary& summary, const std::string& title);

/// Final-time r̄ and r̂ against the swept value (log axis when all values are positive).
void write_sweep_svg(std::ostream& out, const SweepResult& sweep, const std::string& title);

/// Opens `path` for writing, creating parent directories. Throws IoError.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace circfilt
