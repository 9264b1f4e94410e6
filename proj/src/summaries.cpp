#include "gesera/summaries.hpp"

#include <fstream>
#include <set>
#include <tuple>

#include <fmt/format.h>
#include <json.hpp>

#include "gesera/error.hpp"

namespace gesera {

std::string_view to_string(SummaryKind kind) {
  return kind == SummaryKind::Candidate ? "candidate" : "reference";
}

SummaryKind parse_summary_kind(std::string_view name) {
  if (name == "candidate") {
    return SummaryKind::Candidate;
  }
  if (name == "reference") {
    return SummaryKind::Reference;
  }
  throw Error(fmt::format("unknown summary kind '{}' (expected candidate or reference)", name));
}

void check_unique_summaries(const std::vector<SummaryRecord>& records) {
  std::set<std::tuple<std::string_view, std::string_view, SummaryKind>> seen;
  for (const auto& r : records) {
    if (!seen.emplace(r.topic_id, r.system_id, r.kind).second) {
      throw Error(fmt::format("duplicate {} summary for topic {} system {}", to_string(r.kind),
                              r.topic_id, r.system_id));
    }
  }
}

std::vector<SummaryRecord> load_summaries(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(fmt::format("cannot open summary file {}", path.string()));
  }
  std::vector<SummaryRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(fmt::format("{}: line {}: malformed record: {}", path.string(), line_no,
                              e.what()));
    }
    auto field = [&](const char* name) {
      auto it = j.find(name);
      if (!j.is_object() || it == j.end() || !it->is_string()) {
        throw Error(fmt::format("{}: line {}: missing field {}", path.string(), line_no, name));
      }
      return it->get<std::string>();
    };
    SummaryRecord r;
    r.topic_id = field("topic_id");
    r.system_id = field("system_id");
    try {
      r.kind = parse_summary_kind(field("kind"));
    } catch (const Error& e) {
      throw Error(fmt::format("{}: line {}: {}", path.string(), line_no, e.what()));
    }
    r.text = field("text");
    records.push_back(std::move(r));
  }
  check_unique_summaries(records);
  return records;
}

void write_summaries(const std::vector<SummaryRecord>& records,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(fmt::format("cannot write summary file {}", path.string()));
  }
  for (const auto& r : records) {
    nlohmann::json j = {{"topic_id", r.topic_id},
                        {"system_id", r.system_id},
                        {"kind", std::string(to_string(r.kind))},
                        {"text", r.text}};
    out << j.dump() << '\n';
  }
}

}  // namespace gesera
