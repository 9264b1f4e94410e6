#include "gesera/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace gesera {

namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string_view trim_newline(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

std::string read_string_field(const nlohmann::json& record, const char* name,
                              std::size_t line_no, bool required) {
  auto it = record.find(name);
  if (it == record.end() || it->is_null()) {
    if (required) {
      throw Error(fmt::format("line {}: missing field {}", line_no, name));
    }
    return {};
  }
  if (!it->is_string()) {
    throw Error(fmt::format("line {}: field {} must be a string", line_no, name));
  }
  return it->get<std::string>();
}

DocumentCollection load_jsonl(const std::filesystem::path& path, Warnings* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(fmt::format("cannot open corpus file {}", path.string()));
  }
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) {
      continue;
    }
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(fmt::format("line {}: malformed record: {}", line_no, e.what()));
    }
    if (!record.is_object()) {
      throw Error(fmt::format("line {}: record is not an object", line_no));
    }
    Document doc;
    doc.id = read_string_field(record, "id", line_no, true);
    doc.title = read_string_field(record, "title", line_no, false);
    doc.body = read_string_field(record, "body", line_no, true);
    if (doc.id.empty()) {
      throw Error(fmt::format("line {}: empty id", line_no));
    }
    if (is_blank(doc.body)) {
      throw Error(fmt::format("line {}: empty body", line_no));
    }
    docs.push_back(std::move(doc));
  }
  if (docs.empty() && warnings != nullptr) {
    warnings->push_back(fmt::format("corpus {} contains no documents", path.string()));
  }
  return DocumentCollection(std::move(docs), path.string());
}

DocumentCollection load_text_dir(const std::filesystem::path& dir, Warnings* warnings) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(fmt::format("corpus directory {} does not exist", dir.string()));
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::vector<Document> docs;
  docs.reserve(files.size());
  for (const auto& file : files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
      throw Error(fmt::format("cannot open {}", file.string()));
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string content = buffer.str();

    Document doc;
    doc.id = file.stem().string();
    // First line is a title only when a blank line follows it.
    auto first_end = content.find('\n');
    if (first_end != std::string::npos) {
      auto second_end = content.find('\n', first_end + 1);
      std::string_view second = std::string_view(content).substr(
          first_end + 1, second_end == std::string::npos ? std::string::npos
                                                         : second_end - first_end - 1);
      if (second_end != std::string::npos && is_blank(second)) {
        doc.title = std::string(trim_newline(std::string_view(content).substr(0, first_end)));
        doc.body = content.substr(second_end + 1);
      } else {
        doc.body = std::move(content);
      }
    } else {
      doc.body = std::move(content);
    }
    if (is_blank(doc.body)) {
      throw Error(fmt::format("{}: empty body", file.string()));
    }
    docs.push_back(std::move(doc));
  }
  if (docs.empty() && warnings != nullptr) {
    warnings->push_back(fmt::format("corpus directory {} contains no .txt files", dir.string()));
  }
  return DocumentCollection(std::move(docs), dir.string());
}

}  // namespace

DocumentCollection::DocumentCollection(std::vector<Document> documents,
                                       std::string source_label)
    : documents_(std::move(documents)), source_label_(std::move(source_label)) {
  by_id_.reserve(documents_.size());
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    const auto& doc = documents_[i];
    if (is_blank(doc.body)) {
      throw Error(fmt::format("document {} has an empty body", doc.id));
    }
    if (!by_id_.emplace(doc.id, i).second) {
      throw Error(fmt::format("duplicate document id {}", doc.id));
    }
  }
}

const Document* DocumentCollection::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &documents_[it->second];
}

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "jsonl") {
    return CorpusFormat::Jsonl;
  }
  if (name == "dir" || name == "dir_of_text") {
    return CorpusFormat::DirOfText;
  }
  throw Error(fmt::format("unknown corpus format '{}' (expected jsonl or dir)", name));
}

DocumentCollection load_corpus(const std::filesystem::path& path, CorpusFormat format,
                               Warnings* warnings) {
  switch (format) {
    case CorpusFormat::Jsonl:
      return load_jsonl(path, warnings);
    case CorpusFormat::DirOfText:
      return load_text_dir(path, warnings);
  }
  throw Error("unknown corpus format");
}

void write_corpus(const DocumentCollection& collection, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(fmt::format("cannot write corpus file {}", path.string()));
  }
  for (const auto& doc : collection) {
    nlohmann::json record = {{"id", doc.id}, {"title", doc.title}, {"body", doc.body}};
    out << record.dump() << '\n';
  }
}

DocumentCollection sample_subset(const DocumentCollection& collection, const SubsetSpec& spec) {
  const std::size_t n = collection.size();
  if (spec.size > n) {
    throw Error(fmt::format("subset size {} exceeds collection size {}", spec.size, n));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 engine(spec.seed);
  for (std::size_t i = 0; i < spec.size; ++i) {
    auto j = i + static_cast<std::size_t>(bounded_draw(engine, n - i));
    std::swap(order[i], order[j]);
  }
  std::vector<Document> picked;
  picked.reserve(spec.size);
  for (std::size_t i = 0; i < spec.size; ++i) {
    picked.push_back(collection[order[i]]);
  }
  return DocumentCollection(
      std::move(picked),
      fmt::format("{}[{}@{}]", collection.source_label(), spec.size, spec.seed));
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace gesera
