// Writes the built-in rules as JSON rule files, one per rule.
#include <filesystem>
#include <iostream>

#include "pidlint/builtin_rules.hpp"
#include "pidlint/ingest.hpp"
#include "pidlint/rule_library.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: export-rules DIR\n";
    return 2;
  }
  std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);
  for (const auto& rule : pidlint::builtin_rules()) {
    auto path = dir / pidlint::rule_file_name(rule);
    pidlint::write_file(path, pidlint::serialize_rule(rule));
    std::cout << path.string() << "\n";
  }
  return 0;
}
