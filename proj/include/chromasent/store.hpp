#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace chromasent {

using Json = nlohmann::json;

inline constexpr int kStoreSchemaVersion = 1;

/// One self-describing line of a stage file.
struct StageRecord {
  std::string stage;
  std::string key;
  Json payload;
  int schema = kStoreSchemaVersion;
};

/// Exclusive advisory lock on `<stage>.lock` for the lifetime of the object.
class StageLock {
 public:
  explicit StageLock(const std::filesystem::path& lock_path);
  ~StageLock();
  StageLock(const StageLock&) = delete;
  StageLock& operator=(const StageLock&) = delete;
  StageLock(StageLock&& other) noexcept;
  StageLock& operator=(StageLock&&) = delete;

 private:
  int fd_ = -1;
};

/// Writes a complete stage to a temporary file and renames it into place on commit.
/// An uncommitted writer removes its temporary file.
class StageWriter {
 public:
  StageWriter(std::filesystem::path final_path, std::string stage, StageLock lock);
  ~StageWriter();
  StageWriter(StageWriter&&) noexcept = default;
  StageWriter(const StageWriter&) = delete;

  void add(const std::string& key, const Json& payload);
  /// Atomically replaces the stage file; `fingerprint`, when non-empty, is recorded
  /// alongside so a later run can tell whether the stage is current.
  void commit(const std::string& fingerprint = {});
  std::size_t size() const noexcept { return count_; }

 private:
  std::filesystem::path final_path_;
  std::filesystem::path temp_path_;
  std::string stage_;
  StageLock lock_;
  std::ofstream out_;
  std::size_t count_ = 0;
  bool committed_ = false;
};

/// Directory of line-delimited `<stage>.ndjson` record files.
class Store {
 public:
  /// Creates the directory when missing. Throws StoreError when it cannot be used.
  explicit Store(std::filesystem::path dir);

  const std::filesystem::path& dir() const noexcept { return dir_; }
  std::filesystem::path stage_path(const std::string& stage) const;

  /// Appends one record to the stage file.
  void put_record(const std::string& stage, const std::string& key, const Json& payload);

  /// All records in file order; empty when the stage does not exist.
  /// Throws StoreError on a schema-version mismatch or a corrupt line.
  std::vector<StageRecord> get_records(const std::string& stage) const;

  /// Last payload per key.
  std::map<std::string, Json> latest_by_key(const std::string& stage) const;

  bool has_stage(const std::string& stage) const;
  StageWriter begin_stage(const std::string& stage);

  /// Fingerprint recorded by the last commit of the stage, if any.
  std::optional<std::string> stage_fingerprint(const std::string& stage) const;

 private:
  std::filesystem::path dir_;
};

/// Serialized line for a record (no trailing newline).
std::string encode_record(const StageRecord& r);
/// Throws StoreError on malformed input or a schema-version mismatch.
StageRecord decode_record(const std::string& line);

}  // namespace chromasent
