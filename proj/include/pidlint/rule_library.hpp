#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "pidlint/builtin_rules.hpp"
#include "pidlint/error.hpp"
#include "pidlint/ingest.hpp"

namespace pidlint {

inline constexpr const char* kRuleSuffix = ".rule.json";

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

struct RuleLoadFailure {
  std::filesystem::path file;
  std::string reason;
};

struct RuleLibrary {
  std::vector<RuleGraph> rules;  // sorted by (order, id)
  std::vector<RuleLoadFailure> failures;
};

inline void sort_rules(std::vector<RuleGraph>& rules) {
  std::stable_sort(rules.begin(), rules.end(), [](const RuleGraph& a, const RuleGraph& b) {
    return std::tie(a.meta.order, a.meta.id) < std::tie(b.meta.order, b.meta.id);
  });
}

// Loads every `*.rule.json` in `dir` (non-recursive). Files that fail to parse
// or duplicate an earlier id are reported in `failures` and skipped.
inline RuleLibrary load_rule_directory(const std::filesystem::path& dir,
                                       const Taxonomy& taxonomy = *builtin_taxonomy()) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error("not a rules directory: '" + dir.string() + "'");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.size() > std::string(kRuleSuffix).size() &&
        name.ends_with(kRuleSuffix)) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  RuleLibrary lib;
  std::set<std::string> ids;
  for (const auto& f : files) {
    try {
      RuleGraph rule = load_rule(read_file(f), taxonomy);
      if (!ids.insert(rule.meta.id).second) {
        lib.failures.push_back({f, "duplicate rule id '" + rule.meta.id + "'"});
        continue;
      }
      lib.rules.push_back(std::move(rule));
    } catch (const Error& e) {
      lib.failures.push_back({f, e.what()});
    }
  }
  sort_rules(lib.rules);
  return lib;
}

inline std::string rule_file_name(const RuleGraph& rule) {
  return "rule-" + rule.meta.id + kRuleSuffix;
}

}  // namespace pidlint
