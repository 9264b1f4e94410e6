#include "gesera/tac_import.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace gesera {

namespace {

std::vector<std::filesystem::path> sorted_files(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(fmt::format("{} is not a directory", dir.string()));
  }
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file()) {
      files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

void import_dir(const std::filesystem::path& dir, SummaryKind kind,
                std::vector<SummaryRecord>& out) {
  for (const auto& file : sorted_files(dir)) {
    const auto name = file.filename().string();
    const auto first_dot = name.find('.');
    const auto last_dot = name.rfind('.');
    if (first_dot == std::string::npos || first_dot == 0 || last_dot + 1 == name.size()) {
      throw Error(fmt::format("cannot read topic and system from file name {}", name));
    }
    std::ifstream in(file, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    out.push_back({name.substr(0, first_dot), name.substr(last_dot + 1), kind, buffer.str()});
  }
}

}  // namespace

std::vector<SummaryRecord> import_tac_summaries(const std::filesystem::path& peers_dir,
                                                const std::filesystem::path& models_dir) {
  std::vector<SummaryRecord> records;
  import_dir(peers_dir, SummaryKind::Candidate, records);
  import_dir(models_dir, SummaryKind::Reference, records);
  check_unique_summaries(records);
  return records;
}

SystemScoreVector import_manual_table(const std::filesystem::path& path,
                                      const ManualTableLayout& layout,
                                      const std::string& name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(fmt::format("cannot open manual score table {}", path.string()));
  }
  ScoreTable table;
  std::string line;
  const auto needed =
      std::max({layout.topic_column, layout.system_column, layout.score_column}) + 1;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') {
      continue;
    }
    std::istringstream fields_in(line);
    std::vector<std::string> fields;
    for (std::string f; fields_in >> f;) {
      fields.push_back(std::move(f));
    }
    if (fields.size() < needed) {
      continue;
    }
    const auto& raw = fields[layout.score_column];
    char* end = nullptr;
    const double score = std::strtod(raw.c_str(), &end);
    if (end == raw.c_str() || *end != '\0') {
      continue;
    }
    table.rows.push_back(
        {fields[layout.topic_column], fields[layout.system_column], name, score});
  }
  if (table.rows.empty()) {
    throw Error(fmt::format("{} holds no numeric scores in column {}", path.string(),
                            layout.score_column));
  }
  return aggregate_to_system(table, name);
}

}  // namespace gesera
