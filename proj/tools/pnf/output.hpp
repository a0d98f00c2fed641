#pragma once

#include "pnflab/verdict.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace pnf::cli {

// Git blob hash: SHA-1 of "blob <size>\0" followed by the content.
std::string git_blob_sha1(const std::string& content);

// Collects a run's artifacts in memory and commits them once: every file is written to a
// temporary sibling and renamed into place, the manifest last.
class RunOutput {
 public:
  RunOutput(std::string command, std::map<std::string, std::string> config);

  void add_file(const std::string& name, std::string content);
  void add_verdicts(const std::vector<VerdictReport>& rows);
  const std::vector<VerdictReport>& verdicts() const { return verdicts_; }
  std::vector<std::string> failed_ids() const;

  // Writes verdicts.csv, the collected files and manifest.json under dir.
  void commit(const std::filesystem::path& dir, int exit_status) const;
  std::string manifest(int exit_status) const;

 private:
  std::string command_;
  std::map<std::string, std::string> config_;
  std::vector<std::pair<std::string, std::string>> files_;
  std::vector<VerdictReport> verdicts_;
};

}  // namespace pnf::cli
