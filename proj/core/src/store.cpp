#include "steer/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include "steer/canonical_json.hpp"
#include "steer/error.hpp"

namespace steer {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void io_fail(const std::string& what, const fs::path& path) {
  throw Error(ErrorCode::IoError, what + " '" + path.string() + "': " + std::strerror(errno));
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail("cannot open", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void fsync_path(const fs::path& path, int flags) {
  const int fd = ::open(path.c_str(), flags);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

void write_all(int fd, std::string_view bytes, const fs::path& path) {
  while (!bytes.empty()) {
    const ssize_t n = ::write(fd, bytes.data(), bytes.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      io_fail("write failed for", path);
    }
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
}

/// Write to a temporary sibling, fsync, then rename over `path`.
void write_file_atomic(const fs::path& path, std::string_view bytes) {
  static std::atomic<unsigned> counter{0};
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) io_fail("cannot create", tmp);
  write_all(fd, bytes, tmp);
  ::fsync(fd);
  ::close(fd);
  if (::rename(tmp.c_str(), path.c_str()) != 0) io_fail("cannot rename into", path);
  fsync_path(path.parent_path(), O_RDONLY | O_DIRECTORY);
}

}  // namespace

ProjectLock::ProjectLock(const fs::path& lock_file, int timeout_ms) {
  fd_ = ::open(lock_file.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) io_fail("cannot open lock file", lock_file);
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
  while (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
    if (errno != EWOULDBLOCK && errno != EINTR) {
      ::close(fd_);
      io_fail("flock failed on", lock_file);
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      ::close(fd_);
      fd_ = -1;
      throw Error(ErrorCode::StoreLocked, "project is locked by another writer");
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
}

ProjectLock::ProjectLock(ProjectLock&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }

ProjectLock::~ProjectLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

ProjectStore::ProjectStore(fs::path dir, std::string project_id)
    : dir_(std::move(dir)), project_id_(std::move(project_id)) {
  std::error_code ec;
  for (const char* sub : {"snapshots", "models", "bundles"}) fs::create_directories(dir_ / sub, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create project directory '" + dir_.string() + "'");
}

std::string ProjectStore::put_object(const char* kind, const std::string& bytes) const {
  const std::string id = sha256_hex(bytes);
  const fs::path path = dir_ / kind / (id + ".json");
  if (!fs::exists(path)) write_file_atomic(path, bytes);
  return id;
}

std::string ProjectStore::read_object(const char* kind, const std::string& id) const {
  const fs::path path = dir_ / kind / (id + ".json");
  if (!fs::exists(path)) {
    throw Error(ErrorCode::DanglingReference, std::string(kind) + " object '" + id + "' does not exist");
  }
  std::string bytes = read_file(path);
  if (sha256_hex(bytes) != id) {
    throw Error(ErrorCode::CorruptObject, std::string(kind) + " object '" + id + "' fails its digest check",
                {{"kind", kind}, {"id", id}});
  }
  return bytes;
}

std::string ProjectStore::put_snapshot(const Dataset& ds) const {
  return put_object("snapshots", ds.canonical_bytes());
}

Dataset ProjectStore::get_snapshot(const std::string& id) const {
  return Dataset::from_json(json::parse(read_object("snapshots", id)));
}

std::string ProjectStore::put_model(const ModelArtifact& model) const {
  return put_object("models", model.canonical_bytes());
}

ModelArtifact ProjectStore::get_model(const std::string& id) const {
  return ModelArtifact::from_json(json::parse(read_object("models", id)));
}

std::string ProjectStore::put_bundle(const ExplanationBundle& bundle) const {
  return put_object("bundles", bundle.canonical_bytes());
}

std::string ProjectStore::get_bundle_bytes(const std::string& id) const {
  return read_object("bundles", id);
}

bool ProjectStore::has_snapshot(const std::string& id) const {
  return fs::exists(dir_ / "snapshots" / (id + ".json"));
}
bool ProjectStore::has_model(const std::string& id) const {
  return fs::exists(dir_ / "models" / (id + ".json"));
}
bool ProjectStore::has_bundle(const std::string& id) const {
  return fs::exists(dir_ / "bundles" / (id + ".json"));
}

void ProjectStore::append_version(const SessionVersion& version) const {
  auto dangling = [&](const char* what, const std::string& id) {
    throw Error(ErrorCode::DanglingReference,
                std::string("version record references missing ") + what + " '" + id + "'",
                {{"kind", what}, {"id", id}});
  };
  if (!has_snapshot(version.dataset_snapshot_id)) dangling("snapshot", version.dataset_snapshot_id);
  if (!has_model(version.model_id)) dangling("model", version.model_id);
  if (!has_bundle(version.bundle_id)) dangling("bundle", version.bundle_id);

  const fs::path path = dir_ / "journal.jsonl";
  const int fd = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (fd < 0) io_fail("cannot open journal", path);

  // Cut a torn final line so the new record starts on a fresh line.
  const off_t size = ::lseek(fd, 0, SEEK_END);
  if (size > 0) {
    char last = '\n';
    if (::pread(fd, &last, 1, size - 1) == 1 && last != '\n') {
      const std::string existing = read_file(path);
      const auto cut = existing.rfind('\n');
      const off_t keep = cut == std::string::npos ? 0 : static_cast<off_t>(cut + 1);
      if (::ftruncate(fd, keep) != 0) {
        ::close(fd);
        io_fail("cannot truncate torn journal", path);
      }
    }
  }
  ::lseek(fd, 0, SEEK_END);
  const std::string line = canonical_dump(version.to_record()) + "\n";
  write_all(fd, line, path);
  ::fsync(fd);
  ::close(fd);
}

SteeringSession ProjectStore::load_session() const {
  SteeringSession session;
  session.project_id = project_id_;
  session.hyperparameters = hyperparameters();

  const fs::path path = dir_ / "journal.jsonl";
  const std::string text = fs::exists(path) ? read_file(path) : std::string();
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    const auto end = text.find('\n', start);
    if (end == std::string::npos) break;  // uncommitted tail
    ++line_no;
    const std::string_view line(text.data() + start, end - start);
    start = end + 1;
    SessionVersion v;
    try {
      v = SessionVersion::from_record(json::parse(line));
    } catch (const std::exception& e) {
      throw Error(ErrorCode::JournalParseError, "journal line " + std::to_string(line_no) + ": " + e.what(),
                  {{"line", line_no}});
    }
    const bool ordered = session.versions.empty() || v.version_id > session.versions.back().version_id;
    const bool parent_ok = v.parent ? session.find(*v.parent) != nullptr : session.versions.empty();
    if (!ordered || !parent_ok) {
      throw Error(ErrorCode::JournalParseError,
                  "journal line " + std::to_string(line_no) + " breaks version ordering", {{"line", line_no}});
    }
    session.versions.push_back(std::move(v));
  }
  if (session.versions.empty()) {
    throw Error(ErrorCode::JournalParseError, "journal holds no committed versions");
  }
  session.active_version = session.versions.back().version_id;
  return session;
}

std::string ProjectStore::journal_bytes() const {
  const fs::path path = dir_ / "journal.jsonl";
  return fs::exists(path) ? read_file(path) : std::string();
}

void ProjectStore::write_metadata(const Hyperparameters& hp, const SchemaDocument& schema,
                                  std::string_view source_csv) const {
  write_file_atomic(dir_ / "source.csv", source_csv);
  const json meta = {{"v", 1}, {"hyperparameters", hp.to_json()}, {"schema", schema.to_json()}};
  write_file_atomic(dir_ / "project.json", canonical_dump(meta));
}

Hyperparameters ProjectStore::hyperparameters() const {
  return Hyperparameters::from_json(json::parse(read_file(dir_ / "project.json")).at("hyperparameters"));
}

SchemaDocument ProjectStore::schema() const {
  return SchemaDocument::from_json(json::parse(read_file(dir_ / "project.json")).at("schema"));
}

std::string ProjectStore::source_csv() const { return read_file(dir_ / "source.csv"); }

ProjectLock ProjectStore::lock(int timeout_ms) const { return ProjectLock(dir_ / ".lock", timeout_ms); }

Store::Store(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(projects_dir(), ec);
  fs::create_directories(root_ / "staging", ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create store root '" + root_.string() + "'");
}

std::vector<std::string> Store::list_projects() const {
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(projects_dir())) {
    if (entry.is_directory()) ids.push_back(entry.path().filename().string());
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

bool Store::has_project(const std::string& project_id) const {
  if (project_id.empty() || project_id.find('/') != std::string::npos || project_id.front() == '.') return false;
  return fs::exists(projects_dir() / project_id / "journal.jsonl");
}

ProjectStore Store::open_project(const std::string& project_id) const {
  if (!has_project(project_id)) {
    throw Error(ErrorCode::UnknownProject, "no project '" + project_id + "'", {{"project_id", project_id}});
  }
  return ProjectStore(projects_dir() / project_id, project_id);
}

ProjectStore Store::stage_project() const {
  static std::atomic<unsigned> counter{0};
  const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  const std::string name = "s" + std::to_string(::getpid()) + "-" + std::to_string(stamp) + "-" +
                           std::to_string(counter++);
  return ProjectStore(root_ / "staging" / name, "");
}

std::string Store::publish(const ProjectStore& staged) const {
  ProjectLock guard(projects_dir() / ".lock");
  unsigned next = 1;
  for (const auto& id : list_projects()) {
    if (id.size() == 5 && id[0] == 'p') {
      try {
        next = std::max(next, static_cast<unsigned>(std::stoul(id.substr(1))) + 1);
      } catch (const std::exception&) {
      }
    }
  }
  char buf[16];
  std::snprintf(buf, sizeof buf, "p%04u", next);
  const std::string id = buf;
  std::error_code ec;
  fs::rename(staged.dir(), projects_dir() / id, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot publish project: " + ec.message());
  fsync_path(projects_dir(), O_RDONLY | O_DIRECTORY);
  return id;
}

void Store::discard(const ProjectStore& staged) const noexcept {
  std::error_code ec;
  fs::remove_all(staged.dir(), ec);
}

}  // namespace steer
