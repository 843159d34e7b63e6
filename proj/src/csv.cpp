#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lossforge/data.hpp"
#include "lossforge/errors.hpp"

namespace lossforge {

bool LossSample::has_column(const std::string& name) const {
  return std::find(covariate_names.begin(), covariate_names.end(), name) !=
         covariate_names.end();
}

Eigen::VectorXd LossSample::column(const std::string& name) const {
  const auto it =
      std::find(covariate_names.begin(), covariate_names.end(), name);
  if (it == covariate_names.end()) {
    throw ConfigError("unknown covariate column '" + name + "'");
  }
  return covariates.col(it - covariate_names.begin());
}

void LossSample::validate() const {
  if (losses.size() == 0) throw DomainError("LossSample is empty");
  for (Eigen::Index i = 0; i < losses.size(); ++i) {
    if (!std::isfinite(losses[i]) || losses[i] <= 0.0) {
      throw DomainError("LossSample requires positive finite losses (row " +
                        std::to_string(i) + ")");
    }
  }
  if (covariates.cols() !=
      static_cast<Eigen::Index>(covariate_names.size())) {
    throw DomainError("LossSample covariate names/columns mismatch");
  }
  if (covariates.cols() > 0 && covariates.rows() != losses.size()) {
    throw DomainError("LossSample covariate rows do not match losses");
  }
  if (covariates.size() > 0 && !covariates.allFinite()) {
    throw DomainError("LossSample covariates must be finite");
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

// Strict numeric parse: the whole token must be consumed.
bool parse_number(const std::string& tok, double& out) {
  if (tok.empty()) return false;
  const char* begin = tok.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + tok.size() && std::isfinite(out);
}

}  // namespace

LossSample ingest_csv(const std::string& path, const std::string& loss_column,
                      const std::vector<std::string>& covariate_columns,
                      IngestReport* report) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) {
    throw IngestionError("'" + path + "' is empty");
  }
  const std::vector<std::string> header = split_csv_line(line);

  auto column_index = [&](const std::string& name) -> std::size_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw ConfigError("column '" + name + "' not found in '" + path + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  };

  const std::size_t loss_idx = column_index(loss_column);
  std::vector<std::size_t> cov_idx;
  cov_idx.reserve(covariate_columns.size());
  for (const std::string& c : covariate_columns) {
    cov_idx.push_back(column_index(c));
  }

  std::vector<double> losses;
  std::vector<std::vector<double>> covs(covariate_columns.size());
  std::vector<long> rejected;
  long line_no = 1;
  long n_data_rows = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++n_data_rows;
    const std::vector<std::string> fields = split_csv_line(line);

    double loss = 0.0;
    bool ok = loss_idx < fields.size() &&
              parse_number(fields[loss_idx], loss) && loss > 0.0;
    std::vector<double> row(cov_idx.size());
    for (std::size_t j = 0; ok && j < cov_idx.size(); ++j) {
      ok = cov_idx[j] < fields.size() &&
           parse_number(fields[cov_idx[j]], row[j]);
    }
    if (!ok) {
      rejected.push_back(line_no);
      continue;
    }
    losses.push_back(loss);
    for (std::size_t j = 0; j < cov_idx.size(); ++j) covs[j].push_back(row[j]);
  }

  if (report != nullptr) {
    report->n_parsed = losses.size();
    report->rejected_lines = rejected;
  }
  if (losses.empty()) {
    throw IngestionError("'" + path + "' has no usable rows");
  }
  if (n_data_rows > 0 &&
      static_cast<double>(rejected.size()) > 0.2 * n_data_rows) {
    throw IngestionError("'" + path + "': " + std::to_string(rejected.size()) +
                         " of " + std::to_string(n_data_rows) +
                         " rows rejected (more than 20%)");
  }

  LossSample s;
  s.source_path = path;
  s.losses = Eigen::Map<Eigen::VectorXd>(losses.data(),
                                         static_cast<Eigen::Index>(losses.size()));
  s.covariate_names = covariate_columns;
  s.covariates.resize(losses.size(), covariate_columns.size());
  for (std::size_t j = 0; j < covs.size(); ++j) {
    s.covariates.col(j) = Eigen::Map<Eigen::VectorXd>(
        covs[j].data(), static_cast<Eigen::Index>(covs[j].size()));
  }
  s.validate();
  return s;
}

}  // namespace lossforge
