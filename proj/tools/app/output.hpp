#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace ramsey::app {

/// %.17g, so a value round-trips exactly and equal runs give equal bytes.
std::string format_number(double x);

/// Files are held in memory until commit(), which writes each to a temporary name and
/// renames only after every write succeeded.
class StagedOutput {
 public:
  explicit StagedOutput(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void add(std::string name, std::string content);
  /// Throws std::runtime_error naming the file on an I/O failure; temporaries are removed.
  void commit() const;
  const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace ramsey::app
