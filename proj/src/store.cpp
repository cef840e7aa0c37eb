#include "chromasent/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <system_error>

#include "chromasent/error.hpp"

namespace chromasent {

namespace fs = std::filesystem;

StageLock::StageLock(const fs::path& lock_path) {
  fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw StoreError("cannot open lock " + lock_path.string() + ": " + std::strerror(errno));
  }
  if (::flock(fd_, LOCK_EX) != 0) {
    const int err = errno;
    ::close(fd_);
    throw StoreError("cannot lock " + lock_path.string() + ": " + std::strerror(err));
  }
}

StageLock::~StageLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

StageLock::StageLock(StageLock&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }

std::string encode_record(const StageRecord& r) {
  Json j;
  j["schema"] = r.schema;
  j["stage"] = r.stage;
  j["key"] = r.key;
  j["payload"] = r.payload;
  return j.dump();
}

StageRecord decode_record(const std::string& line) {
  Json j = Json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw StoreError("corrupt store record: " + line.substr(0, 80));
  if (!j.contains("schema") || !j["schema"].is_number_integer()) {
    throw StoreError("store record without schema version");
  }
  StageRecord r;
  r.schema = j["schema"].get<int>();
  if (r.schema != kStoreSchemaVersion) {
    throw StoreError("store schema version " + std::to_string(r.schema) + " does not match " +
                     std::to_string(kStoreSchemaVersion));
  }
  if (!j.contains("stage") || !j["stage"].is_string() || !j.contains("key") || !j["key"].is_string()) {
    throw StoreError("store record without stage/key");
  }
  r.stage = j["stage"].get<std::string>();
  r.key = j["key"].get<std::string>();
  r.payload = j.contains("payload") ? j["payload"] : Json();
  return r;
}

StageWriter::StageWriter(fs::path final_path, std::string stage, StageLock lock)
    : final_path_(std::move(final_path)), stage_(std::move(stage)), lock_(std::move(lock)) {
  temp_path_ = final_path_;
  temp_path_ += ".tmp";
  out_.open(temp_path_, std::ios::binary | std::ios::trunc);
  if (!out_) throw StoreError("cannot write " + temp_path_.string());
}

StageWriter::~StageWriter() {
  if (!committed_ && !temp_path_.empty()) {
    out_.close();
    std::error_code ec;
    fs::remove(temp_path_, ec);
  }
}

void StageWriter::add(const std::string& key, const Json& payload) {
  out_ << encode_record({stage_, key, payload, kStoreSchemaVersion}) << '\n';
  if (!out_) throw StoreError("write failed for " + temp_path_.string());
  ++count_;
}

void StageWriter::commit(const std::string& fingerprint) {
  out_.flush();
  out_.close();
  if (!out_) throw StoreError("write failed for " + temp_path_.string());

  fs::path fp_path = final_path_;
  fp_path.replace_extension(".fingerprint");
  std::error_code ec;
  fs::remove(fp_path, ec);

  fs::rename(temp_path_, final_path_, ec);
  if (ec) throw StoreError("cannot commit " + final_path_.string() + ": " + ec.message());
  committed_ = true;

  if (!fingerprint.empty()) {
    fs::path fp_tmp = fp_path;
    fp_tmp += ".tmp";
    {
      std::ofstream f(fp_tmp, std::ios::binary | std::ios::trunc);
      f << fingerprint;
      if (!f) throw StoreError("cannot write " + fp_tmp.string());
    }
    fs::rename(fp_tmp, fp_path, ec);
    if (ec) throw StoreError("cannot commit " + fp_path.string() + ": " + ec.message());
  }
}

Store::Store(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec || !fs::is_directory(dir_)) {
    throw StoreError("cannot use store directory " + dir_.string() +
                     (ec ? ": " + ec.message() : std::string()));
  }
  // Probe writability up front so failures surface before any stage runs.
  const fs::path probe = dir_ / ".write-probe";
  {
    std::ofstream f(probe);
    if (!f) throw StoreError("store directory is not writable: " + dir_.string());
  }
  fs::remove(probe, ec);
}

fs::path Store::stage_path(const std::string& stage) const { return dir_ / (stage + ".ndjson"); }

void Store::put_record(const std::string& stage, const std::string& key, const Json& payload) {
  StageLock lock(dir_ / (stage + ".lock"));
  std::ofstream out(stage_path(stage), std::ios::binary | std::ios::app);
  if (!out) throw StoreError("cannot append to " + stage_path(stage).string());
  out << encode_record({stage, key, payload, kStoreSchemaVersion}) << '\n';
  if (!out) throw StoreError("write failed for " + stage_path(stage).string());
}

std::vector<StageRecord> Store::get_records(const std::string& stage) const {
  std::vector<StageRecord> out;
  std::ifstream in(stage_path(stage), std::ios::binary);
  if (!in) return out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(decode_record(line));
  }
  return out;
}

std::map<std::string, Json> Store::latest_by_key(const std::string& stage) const {
  std::map<std::string, Json> out;
  for (auto& r : get_records(stage)) out[r.key] = std::move(r.payload);
  return out;
}

bool Store::has_stage(const std::string& stage) const { return fs::exists(stage_path(stage)); }

StageWriter Store::begin_stage(const std::string& stage) {
  StageLock lock(dir_ / (stage + ".lock"));
  return StageWriter(stage_path(stage), stage, std::move(lock));
}

std::optional<std::string> Store::stage_fingerprint(const std::string& stage) const {
  fs::path p = stage_path(stage);
  p.replace_extension(".fingerprint");
  std::ifstream in(p, std::ios::binary);
  if (!in || !has_stage(stage)) return std::nullopt;
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return s;
}

}  // namespace chromasent
