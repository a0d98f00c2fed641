#include "output.hpp"

#include "grammar.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <fstream>
#include <sstream>

namespace pnf::cli {

namespace {

std::string sha1_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha1(), nullptr) != 1) {
    throw Error(ErrorKind::Config, "SHA-1 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    os << content;
    os.flush();
    if (!os) throw Error(ErrorKind::Config, "cannot write '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::string verdict_text(const std::vector<VerdictReport>& rows) {
  std::ostringstream os;
  write_verdict_csv(os, rows);
  return os.str();
}

}  // namespace

std::string git_blob_sha1(const std::string& content) {
  std::string blob = "blob " + std::to_string(content.size());
  blob += '\0';
  blob += content;
  return sha1_hex(blob);
}

RunOutput::RunOutput(std::string command, std::map<std::string, std::string> config)
    : command_(std::move(command)), config_(std::move(config)) {}

void RunOutput::add_file(const std::string& name, std::string content) {
  files_.emplace_back(name, std::move(content));
}

void RunOutput::add_verdicts(const std::vector<VerdictReport>& rows) {
  verdicts_.insert(verdicts_.end(), rows.begin(), rows.end());
}

std::vector<std::string> RunOutput::failed_ids() const {
  std::vector<std::string> ids;
  for (const auto& v : verdicts_)
    if (!v.pass) ids.push_back(v.id);
  return ids;
}

std::string RunOutput::manifest(int exit_status) const {
  nlohmann::ordered_json m;
  m["tool"] = "pnf";
  m["command"] = command_;
  m["config"] = config_;
  // The output directory does not affect any result, so it stays out of the hash.
  auto hashed = config_;
  hashed.erase("out");
  const std::string canon = canonical_config(hashed);
  m["config_text"] = canon;
  m["config_sha1"] = git_blob_sha1(canon);
  m["seed"] = config_.count("seed") ? config_.at("seed") : "";
  m["tol_scale"] = config_.count("tol-scale") ? config_.at("tol-scale") : "";
  nlohmann::ordered_json files = nlohmann::ordered_json::object();
  files["verdicts.csv"] = git_blob_sha1(verdict_text(verdicts_));
  for (const auto& [name, content] : files_) files[name] = git_blob_sha1(content);
  m["files"] = files;
  nlohmann::ordered_json tol = nlohmann::ordered_json::array();
  for (const auto& v : verdicts_) {
    tol.push_back({{"id", v.id}, {"tol", v.tol}, {"pass", v.pass}, {"note", v.note}});
  }
  m["verdicts"] = tol;
  m["failed"] = failed_ids();
  m["exit_status"] = exit_status;
  return m.dump(2) + "\n";
}

void RunOutput::commit(const std::filesystem::path& dir, int exit_status) const {
  std::filesystem::create_directories(dir);
  write_atomic(dir / "verdicts.csv", verdict_text(verdicts_));
  for (const auto& [name, content] : files_) write_atomic(dir / name, content);
  write_atomic(dir / "manifest.json", manifest(exit_status));
}

}  // namespace pnf::cli
