#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "drls/guarantees.hpp"
#include "drls/io.hpp"
#include "drls/leverage.hpp"
#include "drls/select.hpp"

namespace drls {

/// Everything one invocation needs. Defaults mirror the standard experiment
/// shape: 1000 random projections, sigma_sq grid {1e-3, 1, 1e3}.
struct RunConfig {
    std::string input_path;
    TableFormat format = TableFormat::Csv;
    bool center = true;
    std::size_t k = 3;
    double epsilon = 0.1;
    std::uint64_t seed = 0;
    std::vector<std::string> commands;
    std::string output_dir = ".";
    std::size_t num_projections = 1000;
    std::size_t monte_carlo_trials = 10000;
    std::vector<double> sigma_sq_list = {1e-3, 1.0, 1e3};
    double oversample = 4.0;
    std::size_t random_trials = 100;
    bool allow_out_of_range = false;
};

struct RiskRow {
    double sigma_sq = 0.0;
    double risk_a = 0.0;
    double risk_c = 0.0;
    double ratio = 0.0;
    double bound = 0.0;
    bool passed = false;
    bool in_range = true;
};

struct CompareRandomSummary {
    std::size_t drls_columns = 0;
    double mean_random_columns = 0.0;
    std::size_t runs = 0;
    std::size_t two_sided_passes = 0;
    double oversample = 0.0;
};

struct PipelineReport {
    RunConfig config;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::string> column_names;

    bool has_scores = false;
    bool has_selection = false;
    bool has_verify = false;
    bool has_regress = false;
    bool has_compare = false;

    LeverageScores ridge;
    LeverageScores subspace;
    LeverageScores classical;
    std::vector<double> sorted_ridge;
    ScoreSumSplit sum_split;
    std::optional<PowerLawFit> fit;

    SelectionResult selection;

    std::vector<GuaranteeReport> checks;
    std::vector<double> pcp_ratios;
    double mean_sigma_sq_ratio = 0.0;   // ave(sigma_C^2 / sigma_A^2)
    double tail_ratio = 0.0;            // ‖C_tail‖_F² / ‖A_tail‖_F²
    double mean_sigmabar_ratio = 0.0;   // ave((sigma_A²+λ₂A) / (sigma_C²+λ₂C))

    std::vector<RiskRow> risk_table;
    std::vector<GuaranteeReport> risk_checks;
    double mc_sigma_sq = 1.0;
    double mc_risk = 0.0;
    double mc_std_error = 0.0;
    double mc_closed = 0.0;
    bool mc_within_3se = false;

    CompareRandomSummary compare;

    /// True when every requested check passed; out-of-range checks count as
    /// passing only when allow_out_of_range is set.
    bool all_requested_passed(bool allow_out_of_range) const;
};

PipelineReport run_pipeline(const RunConfig& config);
PipelineReport run_pipeline(const RunConfig& config, const LoadedMatrix& input);

/// Deterministic structured-text rendering; identical configs and input bytes
/// produce identical output bytes.
std::string report_to_text(const PipelineReport& report);

/// Writes one delimited data file per available figure series into output_dir;
/// returns the paths written. Sections missing from the report are skipped.
std::vector<std::string> emit_plot_data(const PipelineReport& report,
                                        const std::string& output_dir);

}  // namespace drls
