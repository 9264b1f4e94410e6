#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "gesera/correlation.hpp"
#include "gesera/summaries.hpp"

namespace gesera {

/// Converts summaries laid out with the usual ROUGE/TAC file naming, where a
/// file called "<topic>.<...>.<id>" holds one summary. Files in peers_dir
/// become candidates (system_id = last dot-separated field) and files in
/// models_dir become references (system_id = annotator id, same rule).
/// Topic id is the first dot-separated field with any "-A"/"-B" document-set
/// suffix kept. Files are read in sorted name order.
std::vector<SummaryRecord> import_tac_summaries(const std::filesystem::path& peers_dir,
                                                const std::filesystem::path& models_dir);

struct ManualTableLayout {
  std::size_t topic_column = 0;   // 0-based, whitespace separated
  std::size_t system_column = 1;
  std::size_t score_column = 2;
};

/// Reads a whitespace-separated per-(topic, system) manual score table and
/// averages each system's scores over topics. Lines starting with '#' and
/// lines whose score column is not numeric are skipped.
SystemScoreVector import_manual_table(const std::filesystem::path& path,
                                      const ManualTableLayout& layout,
                                      const std::string& name);

}  // namespace gesera
