#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace creutz::io {

struct BundleFile {
  std::string name;
  std::string content;
  std::vector<std::string> columns;  // CSV header, empty for other formats
};

// Everything a command produces, held in memory until write_bundle.
struct ResultBundle {
  std::string command;
  nlohmann::json config;                     // resolved snapshot, null when unused
  nlohmann::json results = nlohmann::json::object();
  std::vector<std::string> warnings;
  std::vector<BundleFile> files;
  std::chrono::system_clock::time_point started = std::chrono::system_clock::now();

  void add_csv(std::string name, std::string content, std::vector<std::string> columns);
  void add_file(std::string name, std::string content);
  const BundleFile* find(const std::string& name) const;

  /// Sidecar listing every emitted file with its SHA-256. Contains no
  /// timestamps, so identical runs give identical bytes.
  nlohmann::json metadata() const;
};

std::string sha256_hex(const std::string& data);

/// Pretty JSON with a trailing newline.
std::string dump_json(const nlohmann::json& j);

/// Writes the files, config.resolved.json, metadata.json and run.log (the
/// only file with wall-clock times) into `dir`, creating it if needed.
void write_bundle(const ResultBundle& bundle, const std::filesystem::path& dir);

}  // namespace creutz::io
