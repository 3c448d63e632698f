#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "steer/bundle.hpp"
#include "steer/dataset.hpp"
#include "steer/forest.hpp"
#include "steer/version_log.hpp"

namespace steer {

/// Exclusive advisory lock (flock) on a project directory. Blocks for up to
/// `timeout_ms`, then throws StoreLocked.
class ProjectLock {
 public:
  explicit ProjectLock(const std::filesystem::path& lock_file, int timeout_ms = 30000);
  ~ProjectLock();
  ProjectLock(ProjectLock&& other) noexcept;
  ProjectLock& operator=(ProjectLock&&) = delete;
  ProjectLock(const ProjectLock&) = delete;
  ProjectLock& operator=(const ProjectLock&) = delete;

 private:
  int fd_ = -1;
};

/// On-disk state of one project:
///
///   <dir>/project.json         hyperparameters + schema document
///   <dir>/source.csv           the CSV the project was created from
///   <dir>/snapshots/<id>.json  datasets, id = sha256 of the file bytes
///   <dir>/models/<id>.json     model artifacts, same addressing
///   <dir>/bundles/<id>.json    explanation bundles, same addressing
///   <dir>/journal.jsonl        one version record per line
///   <dir>/.lock                writer lock
class ProjectStore {
 public:
  ProjectStore(std::filesystem::path dir, std::string project_id);

  const std::string& project_id() const noexcept { return project_id_; }
  const std::filesystem::path& dir() const noexcept { return dir_; }

  std::string put_snapshot(const Dataset& ds) const;
  /// Throws CorruptObject when the file no longer hashes to `id`.
  Dataset get_snapshot(const std::string& id) const;

  std::string put_model(const ModelArtifact& model) const;
  ModelArtifact get_model(const std::string& id) const;

  std::string put_bundle(const ExplanationBundle& bundle) const;
  /// Verified canonical bytes of a stored bundle.
  std::string get_bundle_bytes(const std::string& id) const;

  bool has_snapshot(const std::string& id) const;
  bool has_model(const std::string& id) const;
  bool has_bundle(const std::string& id) const;

  /// Appends one journal line and fsyncs. Every referenced object must
  /// already be stored (DanglingReference otherwise). A torn trailing line
  /// left by an earlier crash is cut off first.
  void append_version(const SessionVersion& version) const;

  /// Replays the journal. A final line without its newline is an
  /// uncommitted write and is ignored; any other unparseable line throws
  /// JournalParseError.
  SteeringSession load_session() const;

  std::string journal_bytes() const;

  void write_metadata(const Hyperparameters& hp, const SchemaDocument& schema,
                      std::string_view source_csv) const;
  Hyperparameters hyperparameters() const;
  SchemaDocument schema() const;
  std::string source_csv() const;

  ProjectLock lock(int timeout_ms = 30000) const;

 private:
  std::string put_object(const char* kind, const std::string& bytes) const;
  std::string read_object(const char* kind, const std::string& id) const;

  std::filesystem::path dir_;
  std::string project_id_;
};

/// Root of all projects: <root>/projects/<project_id>/.
class Store {
 public:
  explicit Store(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }

  std::vector<std::string> list_projects() const;
  bool has_project(const std::string& project_id) const;
  /// Throws UnknownProject.
  ProjectStore open_project(const std::string& project_id) const;

  /// A scratch project directory. Nothing in it is visible until publish().
  ProjectStore stage_project() const;
  /// Moves a staged project into place under the next free id ("p0001", ...).
  std::string publish(const ProjectStore& staged) const;
  /// Deletes a staged project that will not be published.
  void discard(const ProjectStore& staged) const noexcept;

 private:
  std::filesystem::path projects_dir() const { return root_ / "projects"; }

  std::filesystem::path root_;
};

}  // namespace steer
