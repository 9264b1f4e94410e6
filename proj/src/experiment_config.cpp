#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "gesera/experiments.hpp"

namespace gesera {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(std::string_view value, char sep) {
  std::vector<std::string> items;
  std::size_t start = 0;
  for (;;) {
    auto end = value.find(sep, start);
    items.emplace_back(trim(value.substr(start, end == std::string_view::npos
                                                    ? std::string_view::npos
                                                    : end - start)));
    if (end == std::string_view::npos) {
      break;
    }
    start = end + 1;
  }
  return items;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  text = trim(text);
  if constexpr (std::is_floating_point_v<T>) {
    std::string buf(text);
    char* end = nullptr;
    out = static_cast<T>(std::strtod(buf.c_str(), &end));
    return !buf.empty() && end == buf.c_str() + buf.size();
  } else {
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size() && !text.empty();
  }
}

std::vector<std::string> normalize_subset(std::vector<std::string> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

}  // namespace

std::string subset_label(const std::vector<std::string>& subset) {
  return fmt::format("{}", fmt::join(subset, "+"));
}

std::vector<EvalConfig> ExperimentConfig::eval_configs() const {
  std::vector<EvalConfig> out;
  for (auto strategy : strategies) {
    for (auto variant : variants) {
      for (auto cutoff : cutoffs) {
        out.push_back({strategy, variant, cutoff});
      }
    }
  }
  return out;
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream out;
  out << "corpus=" << corpus.string() << '\n'
      << "corpus_format=" << (corpus_format == CorpusFormat::Jsonl ? "jsonl" : "dir") << '\n'
      << "subset_sizes=" << fmt::format("{}", fmt::join(subset_sizes, ",")) << '\n'
      << "seed=" << seed << '\n'
      << "queries=" << queries.string() << '\n';
  for (const auto& [method, path] : manual_scores) {
    out << "manual." << method << '=' << path.string() << '\n';
  }
  for (const auto& [label, methods] : subset_manual_scores) {
    for (const auto& [method, path] : methods) {
      out << "manual." << method << '@' << label << '=' << path.string() << '\n';
    }
  }
  std::vector<std::string> names;
  for (auto s : strategies) {
    names.emplace_back(to_string(s));
  }
  out << "strategies=" << fmt::format("{}", fmt::join(names, ",")) << '\n';
  names.clear();
  for (auto v : variants) {
    names.emplace_back(to_string(v));
  }
  out << "variants=" << fmt::format("{}", fmt::join(names, ",")) << '\n'
      << "cutoffs=" << fmt::format("{}", fmt::join(cutoffs, ",")) << '\n';
  names.clear();
  for (const auto& subset : annotator_subsets) {
    names.push_back(subset_label(subset));
  }
  out << "annotator_subsets=" << fmt::format("{}", fmt::join(names, ";")) << '\n'
      << "k1=" << fmt::format("{}", index_params.k1) << '\n'
      << "b=" << fmt::format("{}", index_params.b) << '\n'
      << "title_boost=" << fmt::format("{}", index_params.boost(Field::Title)) << '\n'
      << "body_boost=" << fmt::format("{}", index_params.boost(Field::Body)) << '\n'
      << "tagger=" << (tagger == TaggerKind::Heuristic ? "heuristic" : "pretagged") << '\n'
      << "lexicon=" << (lexicon ? lexicon->string() : "") << '\n'
      << "stopwords=" << (stopwords ? stopwords->string() : "") << '\n';
  return out.str();
}

ExperimentConfig parse_experiment_config(std::string_view text,
                                         const std::filesystem::path& base_dir) {
  ExperimentConfig config;
  std::vector<std::string> errors;
  std::set<std::string> seen;
  // method -> (label -> path) before labels are checked against subsets
  std::vector<std::tuple<std::string, std::vector<std::string>, std::filesystem::path,
                         std::size_t>>
      pending_subset_manuals;

  auto resolve = [&](std::string_view value) {
    std::filesystem::path p{std::string(value)};
    return p.is_relative() ? base_dir / p : p;
  };

  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') {
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back(fmt::format("line {}: expected key = value", line_no));
      continue;
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    auto fail = [&](std::string_view what) {
      errors.push_back(fmt::format("line {}: {}: {}", line_no, key, what));
    };
    if (!seen.insert(key).second) {
      fail("duplicate key");
      continue;
    }
    if (value.empty()) {
      fail("empty value");
      continue;
    }

    try {
      if (key == "corpus") {
        config.corpus = resolve(value);
      } else if (key == "corpus_format") {
        config.corpus_format = parse_corpus_format(value);
      } else if (key == "queries") {
        config.queries = resolve(value);
      } else if (key == "output_dir") {
        config.output_dir = resolve(value);
      } else if (key == "seed") {
        if (!parse_number(value, config.seed)) {
          fail("not an unsigned integer");
        }
      } else if (key == "subset_sizes" || key == "cutoffs") {
        auto& target = key == "cutoffs" ? config.cutoffs : config.subset_sizes;
        target.clear();
        for (const auto& item : split_list(value, ',')) {
          std::size_t n = 0;
          if (!parse_number(item, n) || n == 0) {
            fail(fmt::format("'{}' is not a positive integer", item));
          } else {
            target.push_back(n);
          }
        }
      } else if (key == "strategies") {
        config.strategies.clear();
        for (const auto& item : split_list(value, ',')) {
          config.strategies.push_back(parse_strategy(item));
        }
      } else if (key == "variants") {
        config.variants.clear();
        for (const auto& item : split_list(value, ',')) {
          config.variants.push_back(parse_variant(item));
        }
      } else if (key == "annotator_subsets") {
        for (const auto& group : split_list(value, ';')) {
          auto ids = split_list(group, '+');
          if (std::any_of(ids.begin(), ids.end(), [](const auto& s) { return s.empty(); })) {
            fail(fmt::format("empty annotator subset or id in '{}'", group));
            continue;
          }
          config.annotator_subsets.push_back(normalize_subset(std::move(ids)));
        }
      } else if (key == "k1" || key == "b" || key == "title_boost" || key == "body_boost") {
        double v = 0.0;
        if (!parse_number(value, v)) {
          fail("not a number");
        } else if (key == "k1") {
          config.index_params.k1 = v;
        } else if (key == "b") {
          config.index_params.b = v;
        } else if (key == "title_boost") {
          config.index_params.boosts[0] = v;
        } else {
          config.index_params.boosts[1] = v;
        }
      } else if (key == "tagger") {
        if (value == "heuristic") {
          config.tagger = TaggerKind::Heuristic;
        } else if (value == "pretagged") {
          config.tagger = TaggerKind::Pretagged;
        } else {
          fail("expected heuristic or pretagged");
        }
      } else if (key == "lexicon") {
        config.lexicon = resolve(value);
      } else if (key == "stopwords") {
        config.stopwords = resolve(value);
      } else if (key.starts_with("manual.")) {
        std::string method = key.substr(7);
        auto at = method.find('@');
        if (at == std::string::npos) {
          if (method.empty()) {
            fail("missing manual method name");
          } else {
            config.manual_scores[method] = resolve(value);
          }
        } else {
          auto ids = split_list(std::string_view(method).substr(at + 1), '+');
          method.resize(at);
          if (method.empty() || std::any_of(ids.begin(), ids.end(),
                                            [](const auto& s) { return s.empty(); })) {
            fail("expected manual.<method>@<id>+<id>...");
          } else {
            pending_subset_manuals.emplace_back(method, normalize_subset(std::move(ids)),
                                                resolve(value), line_no);
          }
        }
      } else {
        fail("unknown key");
      }
    } catch (const Error& e) {
      fail(e.what());
    }
  }

  for (auto& [method, ids, path, at_line] : pending_subset_manuals) {
    if (std::find(config.annotator_subsets.begin(), config.annotator_subsets.end(), ids) ==
        config.annotator_subsets.end()) {
      errors.push_back(fmt::format("line {}: manual.{}@{} names a subset not listed in "
                                   "annotator_subsets",
                                   at_line, method, subset_label(ids)));
      continue;
    }
    config.subset_manual_scores[subset_label(ids)][method] = path;
  }

  // Semantic checks.
  auto require_path = [&](const std::filesystem::path& p, std::string_view key) {
    if (p.empty()) {
      errors.push_back(fmt::format("{} is required", key));
    } else if (!std::filesystem::exists(p)) {
      errors.push_back(fmt::format("{}: {} does not exist", key, p.string()));
    }
  };
  require_path(config.corpus, "corpus");
  require_path(config.queries, "queries");
  if (config.subset_sizes.empty()) {
    errors.emplace_back("subset_sizes is required");
  }
  if (config.manual_scores.empty() && config.subset_manual_scores.empty()) {
    errors.emplace_back("at least one manual.<method> score file is required");
  }
  for (const auto& [method, path] : config.manual_scores) {
    require_path(path, "manual." + method);
  }
  for (const auto& [label, methods] : config.subset_manual_scores) {
    for (const auto& [method, path] : methods) {
      require_path(path, fmt::format("manual.{}@{}", method, label));
    }
  }
  if (config.lexicon) {
    require_path(*config.lexicon, "lexicon");
  }
  if (config.stopwords) {
    require_path(*config.stopwords, "stopwords");
  }
  if (config.strategies.empty() || config.variants.empty() || config.cutoffs.empty()) {
    errors.emplace_back("strategies, variants and cutoffs must be non-empty");
  }
  try {
    config.index_params.validate();
  } catch (const Error& e) {
    errors.emplace_back(e.what());
  }

  if (!errors.empty()) {
    throw Error(fmt::format("invalid experiment config:\n  {}", fmt::join(errors, "\n  ")));
  }
  return config;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(fmt::format("cannot open config file {}", path.string()));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_config(buffer.str(), path.parent_path());
}

}  // namespace gesera
