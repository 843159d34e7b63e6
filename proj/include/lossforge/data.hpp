#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace lossforge {

// A loaded loss dataset: strictly positive losses plus optional covariate
// columns (aligned row-for-row with the losses).
struct LossSample {
  Eigen::VectorXd losses;
  Eigen::MatrixXd covariates;  // n x k; k == 0 when no covariates loaded
  std::vector<std::string> covariate_names;
  std::string source_path;

  Eigen::Index n() const { return losses.size(); }

  bool has_column(const std::string& name) const;
  // Throws ConfigError for an unknown name.
  Eigen::VectorXd column(const std::string& name) const;

  // Throws unless losses are positive/finite and covariates are finite and
  // consistent with the names.
  void validate() const;
};

// Outcome of CSV ingestion, for reporting.
struct IngestReport {
  std::size_t n_parsed = 0;             // rows kept
  std::vector<long> rejected_lines;     // 1-based file line numbers
};

// Reads a CSV with a header row.  Keeps rows where the loss column parses
// to a finite positive number and every requested covariate parses to a
// finite number; rejects (and records) the rest.  Throws ConfigError for a
// missing column name and IngestionError if the file is unreadable, fewer
// than one row survives, or more than 20% of data rows are rejected.
LossSample ingest_csv(const std::string& path, const std::string& loss_column,
                      const std::vector<std::string>& covariate_columns,
                      IngestReport* report = nullptr);

}  // namespace lossforge
