#include "creutz/io/bundle.hpp"

#include <ctime>
#include <fstream>

#include <openssl/evp.h>

#include "creutz/error.hpp"
#include "creutz/version.hpp"

namespace creutz::io {

using nlohmann::json;

void ResultBundle::add_csv(std::string name, std::string content, std::vector<std::string> columns) {
  files.push_back({std::move(name), std::move(content), std::move(columns)});
}

void ResultBundle::add_file(std::string name, std::string content) {
  files.push_back({std::move(name), std::move(content), {}});
}

const BundleFile* ResultBundle::find(const std::string& name) const {
  for (const auto& f : files)
    if (f.name == name) return &f;
  return nullptr;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

json ResultBundle::metadata() const {
  json list = json::array();
  auto entry = [](const std::string& name, const std::string& content,
                  const std::vector<std::string>& columns) {
    json e = {{"name", name}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}};
    if (!columns.empty()) e["columns"] = columns;
    return e;
  };
  for (const auto& f : files) list.push_back(entry(f.name, f.content, f.columns));
  if (!config.is_null())
    list.push_back(entry("config.resolved.json", dump_json(config), {}));
  return {
      {"tool", kToolName},
      {"version", kVersion},
      {"command", command},
      {"config", config},
      {"results", results},
      {"warnings", warnings},
      {"files", list},
      {"run_log", "run.log"},
  };
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

std::string utc(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void write_bundle(const ResultBundle& bundle, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  for (const auto& f : bundle.files) write_file(dir / f.name, f.content);
  if (!bundle.config.is_null()) write_file(dir / "config.resolved.json", dump_json(bundle.config));
  write_file(dir / "metadata.json", dump_json(bundle.metadata()));

  std::string log;
  log += "tool " + std::string(kToolName) + " " + kVersion + "\n";
  log += "command " + bundle.command + "\n";
  log += "started " + utc(bundle.started) + "\n";
  log += "finished " + utc(std::chrono::system_clock::now()) + "\n";
  for (const auto& w : bundle.warnings) log += "warning " + w + "\n";
  for (const auto& f : bundle.files) log += "wrote " + f.name + "\n";
  write_file(dir / "run.log", log);
}

}  // namespace creutz::io
