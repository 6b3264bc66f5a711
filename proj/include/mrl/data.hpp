#ifndef MRL_DATA_HPP
#define MRL_DATA_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mrl {

enum class Group { C, T };

// One subject: survival time (caller-defined unit, never rescaled
// internally), right-censoring flag, optional real covariate, optional
// group label.
struct Observation {
  double time = 0.0;
  bool censored = false;
  std::optional<double> covariate;
  std::optional<Group> group;
};

struct ValidationIssue {
  std::size_t row;
  std::string message;
};

// Validated dataset plus per-group bookkeeping.  Covariate presence is
// all-or-none across rows; group labels are restricted to {C, T}.
struct Dataset {
  std::vector<Observation> rows;
  bool has_covariate = false;
  bool has_group = false;
  std::size_t n_group(Group g) const;
  std::size_t n_censored(Group g) const;
  std::size_t n_censored_total() const;
  // Row indices per group (all rows in C when ungrouped).
  std::vector<std::size_t> group_rows(Group g) const;
};

struct ValidationReport {
  bool ok = false;
  std::vector<ValidationIssue> errors;
  std::vector<ValidationIssue> warnings;  // e.g. exact duplicate event times
  Dataset dataset;                        // valid only when ok
};

ValidationReport validate_dataset(const std::vector<Observation>& rows);

// Dataset CSV: header `time,status,covariate,group`; status 0 = observed,
// 1 = right-censored; covariate and group columns optional.
std::vector<Observation> read_dataset_csv(const std::string& path);
void write_dataset_csv(const std::string& path, const Dataset& data);

// Content digest of the canonical CSV serialization; embedded in chain
// meta so comparisons can check that chains share the same data.
std::uint64_t dataset_hash(const Dataset& data);

}  // namespace mrl

#endif
