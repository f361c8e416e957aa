#pragma once

#include "bbtf/diagnostics.hpp"
#include "bbtf/errors.hpp"
#include "bbtf/geweke.hpp"
#include "bbtf/simulation.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace bbtf {

inline constexpr const char *kVersion = "0.1.0";

// Shortest text that parses back to the same double (17 significant digits
// at most). NaN is written as "nan".
std::string format_double(double v);
// Strict: the whole field must be a finite or "nan"/"inf" number.
double parse_double(std::string_view text);

// Reads a CSV with header "x,y". Non-numeric or NaN fields throw ParseError,
// unsorted or duplicate x throw OrderingError, a missing file IoError.
Dataset read_dataset_csv(const std::filesystem::path &path);
void write_dataset_csv(const std::filesystem::path &path, const Dataset &data);

struct SummaryTable {
  std::vector<double> x, y, mean, lo, hi, ess;
};

// Columns x, y, mean, lo, hi, ess.
void write_summary_csv(const std::filesystem::path &path, const Dataset &data,
                       const PosteriorSummary &summary);
SummaryTable read_summary_csv(const std::filesystem::path &path);

// One row per retained draw: draw, sigma2, then tau2 / gamma2 / rho2 when
// recorded, then theta_1..theta_n.
void write_draws_csv(const std::filesystem::path &path,
                     const PosteriorDraws &draws);

// 64-bit FNV-1a of the file's bytes, as 16 hex digits.
std::string file_checksum(const std::filesystem::path &path);

// Keys follow the fit flags, so a manifest can be passed back as --config;
// version, input-fnv1a, retained and seconds are informational.
using Manifest = std::map<std::string, std::string>;
Manifest fit_manifest(const FitConfig &config, const std::string &input,
                      const std::string &checksum, const PosteriorDraws &draws);
void write_manifest(const std::filesystem::path &path, const Manifest &manifest);
Manifest read_manifest(const std::filesystem::path &path);

// method, rmse_mean, rmse_sd, al, cp; rmse_sd is empty when it is undefined.
void write_metrics_csv(const std::filesystem::path &path,
                       const std::vector<MethodResult> &results);
// method, rep, ok, rmse, al, cp, feasible_fraction, max_violation, error
void write_replications_csv(const std::filesystem::path &path,
                            const std::vector<MethodResult> &results);
void write_bench_csv(const std::filesystem::path &path,
                     const std::vector<BenchRow> &rows);
void write_trace_csv(const std::filesystem::path &path, const TraceExport &trace);
void write_eta_csv(const std::filesystem::path &path,
                   const std::vector<EtaRun> &runs);
void write_geweke_csv(const std::filesystem::path &path,
                      const GewekeReport &report);

} // namespace bbtf
