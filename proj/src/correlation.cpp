#include "gesera/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "csv.hpp"

namespace gesera {

namespace {

void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(fmt::format("correlation inputs differ in length ({} vs {})", x.size(),
                            y.size()));
  }
  if (x.size() < 2) {
    throw Error("correlation needs at least 2 observations");
  }
}

double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double clamp_unit(double r) { return std::clamp(r, -1.0, 1.0); }

}  // namespace

std::vector<double> fractional_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) {
      ++j;
    }
    // Positions i..j-1 (0-based) share rank mean((i+1)..j).
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      ranks[order[k]] = rank;
    }
    i = j;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error("zero variance");
  }
  return clamp_unit(sxy / std::sqrt(sxx * syy));
}

double spearman(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const auto rx = fractional_ranks(x);
  const auto ry = fractional_ranks(y);
  return pearson(rx, ry);
}

double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const std::size_t n = x.size();
  long long concordant = 0;
  long long discordant = 0;
  long long ties_x = 0;
  long long ties_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool tx = x[i] == x[j];
      const bool ty = y[i] == y[j];
      ties_x += tx ? 1 : 0;
      ties_y += ty ? 1 : 0;
      if (tx || ty) {
        continue;
      }
      if ((x[i] < x[j]) == (y[i] < y[j])) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const auto n0 = static_cast<long long>(n * (n - 1) / 2);
  if (ties_x == n0 || ties_y == n0) {
    throw Error("Kendall tau-b is undefined: all pairs are tied");
  }
  const double denom =
      std::sqrt(static_cast<double>(n0 - ties_x) * static_cast<double>(n0 - ties_y));
  return clamp_unit(static_cast<double>(concordant - discordant) / denom);
}

SystemScoreVector aggregate_to_system(const ScoreTable& table, const std::string& metric,
                                      Warnings* warnings) {
  std::map<std::string, std::pair<double, std::size_t>> sums;
  std::map<std::string, std::set<std::string>> topics_of;
  std::set<std::string> all_topics;
  for (const auto& row : table.rows) {
    if (row.metric != metric) {
      continue;
    }
    auto& [sum, count] = sums[row.system_id];
    sum += row.score;
    ++count;
    topics_of[row.system_id].insert(row.topic_id);
    all_topics.insert(row.topic_id);
  }
  if (sums.empty()) {
    throw Error(fmt::format("metric {} does not appear in the score table", metric));
  }
  SystemScoreVector out;
  out.metric_name = metric;
  for (const auto& [system, acc] : sums) {
    out.entries[system] = acc.first / static_cast<double>(acc.second);
    if (warnings != nullptr && topics_of[system].size() != all_topics.size()) {
      std::vector<std::string> absent;
      std::set_difference(all_topics.begin(), all_topics.end(), topics_of[system].begin(),
                          topics_of[system].end(), std::back_inserter(absent));
      for (const auto& topic : absent) {
        warnings->push_back(fmt::format("{}: no score for (topic {}, system {})", metric, topic,
                                        system));
      }
    }
  }
  return out;
}

SystemScoreVector load_manual_scores(const std::filesystem::path& path,
                                     const std::string& name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(fmt::format("cannot open manual score file {}", path.string()));
  }
  SystemScoreVector out;
  out.metric_name = name;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = csv::split(line);
    if (line_no == 1) {
      if (fields.size() != 2 || fields[0] != "system_id" || fields[1] != "score") {
        throw Error(fmt::format("{}: expected header system_id,score", path.string()));
      }
      continue;
    }
    if (fields.size() == 1 && fields[0].empty()) {
      continue;
    }
    if (fields.size() != 2) {
      throw Error(fmt::format("{}: line {}: expected 2 fields", path.string(), line_no));
    }
    char* end = nullptr;
    const double score = std::strtod(fields[1].c_str(), &end);
    if (end == fields[1].c_str() || *end != '\0' || !std::isfinite(score)) {
      throw Error(fmt::format("{}: line {}: bad score '{}'", path.string(), line_no, fields[1]));
    }
    if (!out.entries.emplace(fields[0], score).second) {
      throw Error(fmt::format("{}: line {}: duplicate system {}", path.string(), line_no,
                              fields[0]));
    }
  }
  return out;
}

CorrelationResult correlate(const SystemScoreVector& automatic,
                            const SystemScoreVector& manual) {
  std::vector<double> a;
  std::vector<double> m;
  for (const auto& [system, score] : automatic.entries) {
    auto it = manual.entries.find(system);
    if (it != manual.entries.end()) {
      a.push_back(score);
      m.push_back(it->second);
    }
  }
  if (a.size() < 2) {
    auto keys = [](const SystemScoreVector& v) {
      std::vector<std::string> ids;
      for (const auto& [id, _] : v.entries) {
        ids.push_back(id);
      }
      return fmt::format("{{{}}}", fmt::join(ids, ", "));
    };
    throw Error(fmt::format("fewer than 2 shared systems between {} {} and {} {}",
                            automatic.metric_name, keys(automatic), manual.metric_name,
                            keys(manual)));
  }
  CorrelationResult r;
  r.n_systems = a.size();
  r.pearson = pearson(a, m);
  r.spearman = spearman(a, m);
  r.kendall_tau_b = kendall_tau_b(a, m);
  return r;
}

}  // namespace gesera
