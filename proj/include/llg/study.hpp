#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "llg/manufactured.hpp"

namespace llg {

enum class StudyKind { Temporal, Spatial, Coupled3D, NormPreservation, StabilityProbe };

/// A batch of runs over a refinement list.
///   Temporal:         fixed h (fixed_n nodes), levels are k values
///   Spatial:          fixed k = T / fixed_steps, levels are h values
///   Coupled3D:        levels are h values, k = T / round(T / h^2)
///   NormPreservation: dim 1 sweeps k at fixed_n; dim 3 pairs k = h^2 like
///                     Coupled3D; runs unforced from the reference initial
///                     data and reports the worst norm deviation
///   StabilityProbe:   like Temporal (intended for the explicit scheme),
///                     additionally reports the per-run norm deviation
struct StudyConfig {
    StudyKind study = StudyKind::Temporal;
    SchemeKind scheme = SchemeKind::FractionalGS;
    int dim = 1;
    double alpha = 0.01;
    double final_time = 0.1;
    int fixed_n = 2001;        // nodes per axis where the study fixes h
    int fixed_steps = 100000;  // step count where the study fixes k
    std::vector<double> levels;
    double picard_tol = 1e-12;
    int picard_max = 200;
    HelmholtzOptions helmholtz{};
    std::string output_path;   // CSV destination; empty means stdout
    bool allow_large = false;  // lift the 3D per-axis resolution guard
};

struct StudyRow {
    double k = 0.0;
    double h = 0.0;
    int n_steps = 0;
    std::optional<NormTriple> errors;
    std::optional<double> norm_deviation;
    double seconds = 0.0;
};

struct OrderFit {
    double linf = 0.0;
    double l2 = 0.0;
    double h1 = 0.0;
};

struct ConvergenceReport {
    StudyConfig config;
    std::vector<StudyRow> rows;
    std::optional<OrderFit> order_vs_k;
    std::optional<OrderFit> order_vs_h;
};

/// Least-squares slope of log(error) against log(step). Rejects fewer than
/// two points and non-positive entries.
double estimate_order(std::span<const std::pair<double, double>> points);

/// Runs every refinement level and fits orders where the study defines them.
/// Rows may run concurrently (LLG_WORKERS); results do not depend on the
/// worker count. A failing run aborts the study with the row identified.
ConvergenceReport run_study(const StudyConfig& cfg);

/// Deterministic CSV serialization: header row, one data row per refinement,
/// trailing order row(s) when present, 17-significant-digit numbers,
/// newline-terminated.
std::string csv_string(const ConvergenceReport& report);

/// csv_string written to a file; failures raise IoError with the path.
void write_csv(const ConvergenceReport& report, const std::filesystem::path& path);

/// Parses one refinement-list token: a decimal, "a/b", or "T/b" with the
/// study's final time substituted for T.
double parse_level_token(const std::string& token, double final_time);

/// Comma-separated refinement list.
std::vector<double> parse_levels(const std::string& text, double final_time);

}  // namespace llg
