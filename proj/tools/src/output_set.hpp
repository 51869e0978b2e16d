#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace carenet::cli {

/// Files produced by a command, held in memory until the command has
/// finished so that a failed run leaves nothing behind.
class OutputSet {
 public:
  void add(std::filesystem::path relative, std::string content);

  /// Writes every file under `dir` via temporary names and renames them into
  /// place. On failure, removes whatever it created and throws
  /// std::runtime_error.
  void commit(const std::filesystem::path& dir) const;

  std::size_t size() const { return files_.size(); }

 private:
  std::vector<std::pair<std::filesystem::path, std::string>> files_;
};

}  // namespace carenet::cli
