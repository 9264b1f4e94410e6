#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gesera/error.hpp"
#include "gesera/scoring.hpp"

namespace gesera {

/// Average fractional ranks, 1-based: tied values share the mean of the
/// positions they occupy.
std::vector<double> fractional_ranks(std::span<const double> values);

/// Sample Pearson product-moment correlation. Requires equal sizes >= 2 and
/// non-constant inputs ("zero variance" otherwise).
double pearson(std::span<const double> x, std::span<const double> y);

/// Pearson over fractional ranks.
double spearman(std::span<const double> x, std::span<const double> y);

/// (C - D) / sqrt((n0 - n1)(n0 - n2)) by exact pair enumeration.
double kendall_tau_b(std::span<const double> x, std::span<const double> y);

struct SystemScoreVector {
  std::string metric_name;
  std::map<std::string, double> entries;  // system_id -> mean score
};

/// Per-system mean over that system's topic rows for one metric. Systems
/// missing some topics still get a mean; the missing (topic, system) pairs
/// are reported through warnings.
SystemScoreVector aggregate_to_system(const ScoreTable& table, const std::string& metric,
                                      Warnings* warnings = nullptr);

/// CSV with header system_id,score.
SystemScoreVector load_manual_scores(const std::filesystem::path& path,
                                     const std::string& name);

struct CorrelationResult {
  double pearson = 0.0;
  double spearman = 0.0;
  double kendall_tau_b = 0.0;
  std::size_t n_systems = 0;
};

/// Joins on exact system_id (sorted) and correlates the shared systems.
CorrelationResult correlate(const SystemScoreVector& automatic,
                            const SystemScoreVector& manual);

}  // namespace gesera
