#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "lossforge/gof.hpp"
#include "lossforge/inference.hpp"
#include "lossforge/simlab.hpp"

namespace lossforge {

// Reports preserve insertion order so identical runs serialize to identical
// bytes.
using ordered_json = nlohmann::ordered_json;

// Common header: schema version, tool version, seed; the wall-clock
// timestamp is omitted when deterministic is set so reruns are
// byte-identical.
ordered_json metadata_json(std::uint64_t seed, bool deterministic);

ordered_json fit_to_json(const FitResult& fit);
ordered_json gof_to_json(const GofReport& rep);
ordered_json backtest_to_json(const std::vector<VarBacktestRow>& rows);
ordered_json rankings_to_json(const std::vector<ModelRanking>& rows);
ordered_json sim_report_to_json(const SimReport& rep);

// Serializes with a trailing newline; path "-" or "" writes to stdout.
void write_json(const ordered_json& j, const std::string& path);

// Pareto QQ data grouped by a binning column (rounded to the nearest bin
// width): per group, points (ln y_(i), -ln(1 - i/(n_g+1))).
struct ParetoQqGroup {
  std::string label;
  Eigen::VectorXd log_losses;       // sorted ascending
  Eigen::VectorXd neg_log_survival;
};
std::vector<ParetoQqGroup> pareto_qq_groups(const Eigen::VectorXd& losses,
                                            const Eigen::VectorXd& bin_values,
                                            double bin_width);
ordered_json pareto_qq_to_json(const std::vector<ParetoQqGroup>& groups);

}  // namespace lossforge
