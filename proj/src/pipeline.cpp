#include "drls/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "drls/errors.hpp"
#include "drls/kernels.hpp"
#include "drls/regression.hpp"
#include "drls/rng.hpp"
#include "drls/svd.hpp"

namespace drls {

namespace {

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

bool wants(const RunConfig& cfg, const std::string& name) {
    return std::find(cfg.commands.begin(), cfg.commands.end(), name) != cfg.commands.end();
}

template <typename Fn>
void stage(const char* name, Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        throw Error(std::string(name) + ": " + e.what());
    }
}

bool check_ok(const GuaranteeReport& r, bool allow_out_of_range) {
    if (r.passed) return true;
    return !r.in_theorem_range && allow_out_of_range;
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    for (const auto& l : lines) out << l << '\n';
}

}  // namespace

bool PipelineReport::all_requested_passed(bool allow_out_of_range) const {
    if (has_verify) {
        for (const auto& c : checks) {
            if (!check_ok(c, allow_out_of_range)) return false;
        }
    }
    if (has_regress) {
        for (const auto& c : risk_checks) {
            if (!check_ok(c, allow_out_of_range)) return false;
        }
        if (!mc_within_3se) return false;
    }
    if (has_compare) {
        if (compare.runs == 0) return false;
        const double rate =
            static_cast<double>(compare.two_sided_passes) / static_cast<double>(compare.runs);
        if (rate < 0.95) return false;
    }
    return true;
}

PipelineReport run_pipeline(const RunConfig& config, const LoadedMatrix& input) {
    PipelineReport rep;
    rep.config = config;
    rep.rows = input.matrix.rows();
    rep.cols = input.matrix.cols();
    rep.column_names = input.column_names;

    const DenseMatrix& a = input.matrix;
    rep.has_scores = wants(config, "scores");
    rep.has_selection = wants(config, "select");
    rep.has_verify = wants(config, "verify");
    rep.has_regress = wants(config, "regress");
    rep.has_compare = wants(config, "compare-random");

    const bool need_scores = rep.has_scores || rep.has_selection || rep.has_verify ||
                             rep.has_regress || rep.has_compare;
    const bool need_selection =
        rep.has_selection || rep.has_verify || rep.has_regress || rep.has_compare;
    if (!need_scores) return rep;

    SvdFactors f;
    stage("scores", [&] {
        a.require_finite("input matrix");
        f = svd(a);
        rep.ridge = ridge_leverage_scores(f, config.k);
        rep.subspace = subspace_leverage_scores(f, config.k);
        rep.classical = classical_leverage_scores(f);
        rep.sum_split = ridge_score_sum_split(f, config.k);
        rep.sorted_ridge = rep.ridge.scores;
        std::sort(rep.sorted_ridge.begin(), rep.sorted_ridge.end(), std::greater<double>());
        std::size_t hi = std::min<std::size_t>(rep.sorted_ridge.size(), 1000);
        while (hi > 0 && !(rep.sorted_ridge[hi - 1] > 0.0)) --hi;
        if (hi >= 2) rep.fit = fit_power_law_sorted(rep.sorted_ridge, IndexRange{1, hi});
    });

    if (!need_selection) return rep;
    stage("select", [&] { rep.selection = drls_select(a, rep.ridge, config.k, config.epsilon); });

    if (rep.has_verify) {
        stage("verify", [&] {
            rep.checks.push_back(check_spectral(a, rep.selection));
            rep.checks.push_back(check_css(a, rep.selection));
            rep.checks.push_back(check_pcp(a, rep.selection, config.num_projections, config.seed,
                                           &rep.pcp_ratios));
            rep.checks.push_back(check_kernel(a, rep.selection));
            rep.checks.push_back(check_two_sided(a, rep.selection.c, config.k, config.epsilon));

            const SvdFactors fc = svd(rep.selection.c);
            const double lambda_a = ridge_lambda2(f, config.k);
            const double lambda_c = ridge_lambda2(
                fc, std::min<std::size_t>(config.k, fc.singular_values.size()));
            const std::size_t r_cmp =
                std::min<std::size_t>(f.numerical_rank, fc.singular_values.size());
            double mean_sig = 0.0, mean_bar = 0.0;
            for (std::size_t i = 0; i < r_cmp; ++i) {
                const double sa2 = f.singular_values[i] * f.singular_values[i];
                const double sc2 = fc.singular_values[i] * fc.singular_values[i];
                mean_sig += sc2 / sa2;
                mean_bar += (sa2 + lambda_a) / (sc2 + lambda_c);
            }
            rep.mean_sigma_sq_ratio = r_cmp > 0 ? mean_sig / static_cast<double>(r_cmp) : 0.0;
            rep.mean_sigmabar_ratio = r_cmp > 0 ? mean_bar / static_cast<double>(r_cmp) : 0.0;
            const double tail_a = static_cast<double>(config.k) * lambda_a;
            const double tail_c = static_cast<double>(config.k) * lambda_c;
            rep.tail_ratio = tail_a > 0.0 ? tail_c / tail_a : (tail_c > 0.0 ? -1.0 : 1.0);
        });
    }

    if (rep.has_regress) {
        stage("regress", [&] {
            auto eng = rng::substream(config.seed, 0xA11CE);
            const std::vector<double> x_star = rng::gaussian_vector(eng, a.cols());
            for (double s : config.sigma_sq_list) {
                GuaranteeReport rc = check_risk_bound(a, rep.selection, x_star, s);
                RiskRow row;
                row.sigma_sq = s;
                row.risk_a = rc.detail("risk_a");
                row.risk_c = rc.detail("risk_c");
                row.ratio = rc.detail("ratio");
                row.bound = rc.bound_value;
                row.passed = rc.passed;
                row.in_range = rc.in_theorem_range;
                rep.risk_table.push_back(row);
                rep.risk_checks.push_back(std::move(rc));
            }
            rep.mc_sigma_sq = config.sigma_sq_list.empty() ? 1.0 : config.sigma_sq_list.front();
            for (double s : config.sigma_sq_list) {
                if (s == 1.0) rep.mc_sigma_sq = 1.0;
            }
            const RiskReport mc = risk_monte_carlo(a, x_star, rep.mc_sigma_sq, config.k,
                                                   config.monte_carlo_trials, config.seed);
            const RiskReport cf = risk_closed_form(a, x_star, rep.mc_sigma_sq, config.k);
            rep.mc_risk = mc.risk;
            rep.mc_std_error = mc.std_error;
            rep.mc_closed = cf.risk;
            rep.mc_within_3se =
                std::fabs(mc.risk - cf.risk) <= 3.0 * mc.std_error + 1e-12 * (1.0 + cf.risk);
        });
    }

    if (rep.has_compare) {
        stage("compare-random", [&] {
            rep.compare.drls_columns = rep.selection.theta.size();
            rep.compare.oversample = config.oversample;
            rep.compare.runs = config.random_trials;
            double total_cols = 0.0;
            std::size_t passes = 0;
            for (std::size_t t = 0; t < config.random_trials; ++t) {
                const std::uint64_t s =
                    rng::splitmix64(rng::splitmix64(config.seed) ^ (0xBADC0DEULL + t));
                const WeightedSelection ws =
                    randomized_rls_sample(a, config.k, config.epsilon, config.oversample, s);
                total_cols += static_cast<double>(ws.indices.size());
                const GuaranteeReport ts =
                    check_two_sided(a, ws.c_weighted, config.k, config.epsilon);
                if (ts.passed) ++passes;
            }
            rep.compare.mean_random_columns =
                config.random_trials > 0 ? total_cols / static_cast<double>(config.random_trials)
                                         : 0.0;
            rep.compare.two_sided_passes = passes;
        });
    }
    return rep;
}

PipelineReport run_pipeline(const RunConfig& config) {
    LoadedMatrix input;
    stage("ingest", [&] { input = ingest_matrix(config.input_path, config.format, config.center); });
    return run_pipeline(config, input);
}

std::string report_to_text(const PipelineReport& rep) {
    std::string out;
    auto line = [&](const std::string& s) {
        out += s;
        out += '\n';
    };

    line("# drls report");
    line("[config]");
    line("input=" + (rep.config.input_path.empty() ? "-" : rep.config.input_path));
    line("format=" + std::string(rep.config.format == TableFormat::Csv ? "csv" : "tsv"));
    line("rows=" + std::to_string(rep.rows));
    line("cols=" + std::to_string(rep.cols));
    line("k=" + std::to_string(rep.config.k));
    line("epsilon=" + num(rep.config.epsilon));
    line("seed=" + std::to_string(rep.config.seed));
    line("center=" + std::string(rep.config.center ? "true" : "false"));
    line("projections=" + std::to_string(rep.config.num_projections));
    line("trials=" + std::to_string(rep.config.monte_carlo_trials));
    {
        std::string s = "sigma_sq=";
        for (std::size_t i = 0; i < rep.config.sigma_sq_list.size(); ++i) {
            if (i > 0) s += ",";
            s += num(rep.config.sigma_sq_list[i]);
        }
        line(s);
    }
    {
        std::string s = "commands=";
        for (std::size_t i = 0; i < rep.config.commands.size(); ++i) {
            if (i > 0) s += ",";
            s += rep.config.commands[i];
        }
        line(s);
    }

    if (rep.has_scores) {
        line("");
        line("[scores]");
        line("ridge_k=" + std::to_string(rep.ridge.k));
        line("lambda2=" + num(rep.ridge.lambda2));
        if (rep.ridge.lambda2 == 0.0) {
            line("note=lambda2 is zero (k equals the numerical rank); ridge scores reduce to "
                 "classical scores");
        }
        line("t_bar=" + num(rep.ridge.total));
        line("sum_head=" + num(rep.sum_split.head));
        line("sum_tail=" + num(rep.sum_split.tail));
        line("subspace_total=" + num(rep.subspace.total));
        line("classical_total=" + num(rep.classical.total));
        {
            std::string s = "top_scores=";
            const std::size_t top = std::min<std::size_t>(10, rep.sorted_ridge.size());
            for (std::size_t i = 0; i < top; ++i) {
                if (i > 0) s += ",";
                s += num(rep.sorted_ridge[i]);
            }
            line(s);
        }
        if (rep.fit) {
            line("power_law_a=" + num(rep.fit->decay_power));
            line("power_law_b=" + num(rep.fit->scale));
            line("power_law_range=" + std::to_string(rep.fit->fit_range.lo) + ".." +
                 std::to_string(rep.fit->fit_range.hi));
            line("power_law_residual=" + num(rep.fit->residual_norm));
            if (rep.fit->decay_power <= 1.0) {
                line("note=fitted decay power at or below 1; the power-law column bound does not "
                     "apply");
            }
        } else {
            line("power_law_fit=unavailable");
        }
    }

    if (rep.has_selection) {
        line("");
        line("[selection]");
        line("theta_size=" + std::to_string(rep.selection.theta.size()));
        line("threshold=" + num(rep.selection.threshold));
        line("residual=" + num(rep.selection.residual));
        line("epsilon=" + num(rep.selection.epsilon));
        line("tie_at_threshold=" + std::string(rep.selection.tie_at_threshold ? "true" : "false"));
        {
            std::string s = "theta=";
            for (std::size_t i = 0; i < rep.selection.theta.size(); ++i) {
                if (i > 0) s += ",";
                s += std::to_string(rep.selection.theta[i]);
            }
            line(s);
        }
    }

    if (rep.has_verify) {
        line("");
        line("[verify]");
        for (const auto& c : rep.checks) {
            std::string s = std::string(guarantee_name(c.guarantee)) + ": " +
                            (c.passed ? "pass" : "FAIL") + " margin=" + num(c.margin) +
                            " tol=" + num(c.tolerance);
            if (!c.in_theorem_range) s += " (outside proven epsilon range)";
            line(s);
            for (const auto& [k, v] : c.details) {
                line("  " + k + "=" + num(v));
            }
        }
        line("mean_sigma_sq_ratio=" + num(rep.mean_sigma_sq_ratio));
        line("tail_ratio=" + num(rep.tail_ratio));
        line("mean_sigmabar_ratio=" + num(rep.mean_sigmabar_ratio));
    }

    if (rep.has_regress) {
        line("");
        line("[regress]");
        for (const auto& row : rep.risk_table) {
            std::string s = "sigma_sq=" + num(row.sigma_sq) + " risk_a=" + num(row.risk_a) +
                            " risk_c=" + num(row.risk_c) + " ratio=" + num(row.ratio) +
                            " bound=" + num(row.bound) + " " + (row.passed ? "pass" : "FAIL");
            if (!row.in_range) s += " (outside proven epsilon range)";
            line(s);
        }
        line("mc_sigma_sq=" + num(rep.mc_sigma_sq));
        line("mc_risk=" + num(rep.mc_risk));
        line("mc_std_error=" + num(rep.mc_std_error));
        line("mc_closed_form=" + num(rep.mc_closed));
        line("mc_within_3se=" + std::string(rep.mc_within_3se ? "true" : "false"));
    }

    if (rep.has_compare) {
        line("");
        line("[compare-random]");
        line("drls_columns=" + std::to_string(rep.compare.drls_columns));
        line("oversample=" + num(rep.compare.oversample));
        line("runs=" + std::to_string(rep.compare.runs));
        line("mean_random_columns=" + num(rep.compare.mean_random_columns));
        line("two_sided_passes=" + std::to_string(rep.compare.two_sided_passes));
    }
    return out;
}

std::vector<std::string> emit_plot_data(const PipelineReport& rep, const std::string& output_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(output_dir);
    std::vector<std::string> written;

    if (rep.has_scores && !rep.sorted_ridge.empty()) {
        {
            std::vector<std::string> lines{"# columns_kept epsilon_tilde"};
            double kept = 0.0;
            for (std::size_t j = 0; j < rep.sorted_ridge.size(); ++j) {
                kept += rep.sorted_ridge[j];
                const double eps_tilde = std::max(0.0, rep.ridge.total - kept);
                lines.push_back(std::to_string(j + 1) + " " + num(eps_tilde));
            }
            const std::string path = output_dir + "/columns_vs_error.dat";
            write_lines(path, lines);
            written.push_back(path);
        }
        if (rep.fit) {
            std::vector<std::string> lines{"# index score fitted"};
            for (std::size_t i = 1; i <= rep.sorted_ridge.size(); ++i) {
                const double fitted =
                    rep.fit->scale * std::pow(static_cast<double>(i), -rep.fit->decay_power);
                lines.push_back(std::to_string(i) + " " + num(rep.sorted_ridge[i - 1]) + " " +
                                num(fitted));
            }
            const std::string path = output_dir + "/power_law.dat";
            write_lines(path, lines);
            written.push_back(path);
        }
        {
            std::vector<std::string> lines{"# classical ridge"};
            for (std::size_t i = 0; i < rep.classical.scores.size(); ++i) {
                lines.push_back(num(rep.classical.scores[i]) + " " + num(rep.ridge.scores[i]));
            }
            const std::string path = output_dir + "/classical_vs_ridge.dat";
            write_lines(path, lines);
            written.push_back(path);
        }
    }

    if (rep.has_verify && !rep.pcp_ratios.empty()) {
        constexpr std::size_t bins = 40;
        const double lo = 1.0 - kPcpAlpha * rep.config.epsilon;
        const double hi = 1.0;
        const double width = (hi - lo) / static_cast<double>(bins);
        std::vector<std::size_t> count(bins, 0);
        for (double rt : rep.pcp_ratios) {
            double pos = (rt - lo) / width;
            auto b = pos < 0.0 ? 0 : static_cast<std::size_t>(pos);
            if (b >= bins) b = bins - 1;
            ++count[b];
        }
        std::vector<std::string> lines{"# bin_left bin_right count"};
        for (std::size_t b = 0; b < bins; ++b) {
            lines.push_back(num(lo + width * static_cast<double>(b)) + " " +
                            num(lo + width * static_cast<double>(b + 1)) + " " +
                            std::to_string(count[b]));
        }
        const std::string path = output_dir + "/pcp_ratios.dat";
        write_lines(path, lines);
        written.push_back(path);
    }
    return written;
}

}  // namespace drls
