#include "scq/service/task_store.hpp"

#include <cstring>
#include <utility>

#include <sqlite3.h>

namespace scq::service {

namespace {

constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS tasks (
  seq              INTEGER PRIMARY KEY AUTOINCREMENT,
  id               TEXT NOT NULL UNIQUE,
  source           TEXT NOT NULL,
  shots            INTEGER NOT NULL,
  backend          TEXT NOT NULL,
  apply_correction INTEGER NOT NULL,
  seed             INTEGER NOT NULL,
  status           TEXT NOT NULL,
  submitted_at     INTEGER NOT NULL,
  started_at       INTEGER,
  finished_at      INTEGER,
  lease_owner      TEXT,
  lease_expires    INTEGER,
  error            TEXT
);
CREATE INDEX IF NOT EXISTS tasks_by_status ON tasks (status, seq);
CREATE TABLE IF NOT EXISTS results (
  id       TEXT PRIMARY KEY,
  document TEXT NOT NULL
);
)sql";

constexpr const char* kColumns =
    "id, source, shots, backend, apply_correction, seed, status, submitted_at, started_at, "
    "finished_at, lease_owner, lease_expires, error";

std::string result_ref(const std::string& id) { return "results/" + id; }

/// Prepared statement with positional binding.
class Statement {
public:
  Statement(sqlite3* db, const char* sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) {
      throw StoreError(std::string("sqlite prepare: ") + sqlite3_errmsg(db));
    }
  }
  ~Statement() { sqlite3_finalize(stmt_); }
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;

  Statement& bind(int i, const std::string& s) {
    check(sqlite3_bind_text(stmt_, i, s.data(), static_cast<int>(s.size()), SQLITE_TRANSIENT));
    return *this;
  }
  Statement& bind(int i, std::int64_t v) {
    check(sqlite3_bind_int64(stmt_, i, v));
    return *this;
  }
  Statement& bind(int i, std::string_view s) { return bind(i, std::string(s)); }
  template <typename T>
  Statement& bind(int i, const std::optional<T>& v) {
    if (v) return bind(i, *v);
    check(sqlite3_bind_null(stmt_, i));
    return *this;
  }

  /// True while a row is available.
  bool step() {
    const int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    throw StoreError(std::string("sqlite step: ") + sqlite3_errmsg(db_));
  }

  std::string text(int col) const {
    const auto* p = sqlite3_column_text(stmt_, col);
    return p ? std::string(reinterpret_cast<const char*>(p),
                           static_cast<std::size_t>(sqlite3_column_bytes(stmt_, col)))
             : std::string();
  }
  std::int64_t integer(int col) const { return sqlite3_column_int64(stmt_, col); }
  bool null(int col) const { return sqlite3_column_type(stmt_, col) == SQLITE_NULL; }
  std::optional<std::int64_t> opt_integer(int col) const {
    return null(col) ? std::nullopt : std::optional(integer(col));
  }
  std::optional<std::string> opt_text(int col) const {
    return null(col) ? std::nullopt : std::optional(text(col));
  }

private:
  void check(int rc) {
    if (rc != SQLITE_OK) throw StoreError(std::string("sqlite bind: ") + sqlite3_errmsg(db_));
  }
  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

void exec(sqlite3* db, const char* sql) {
  char* err = nullptr;
  if (sqlite3_exec(db, sql, nullptr, nullptr, &err) != SQLITE_OK) {
    std::string msg = err ? err : "unknown error";
    sqlite3_free(err);
    throw StoreError("sqlite: " + msg);
  }
}

/// BEGIN IMMEDIATE … COMMIT, rolled back unless committed.
class Transaction {
public:
  explicit Transaction(sqlite3* db) : db_(db) { exec(db_, "BEGIN IMMEDIATE"); }
  ~Transaction() {
    if (!done_) sqlite3_exec(db_, "ROLLBACK", nullptr, nullptr, nullptr);
  }
  void commit() {
    exec(db_, "COMMIT");
    done_ = true;
  }

private:
  sqlite3* db_;
  bool done_ = false;
};

TaskRecord read_task(const Statement& s) {
  TaskRecord t;
  t.id = s.text(0);
  t.source = s.text(1);
  t.shots = static_cast<std::uint64_t>(s.integer(2));
  t.backend = parse_backend(s.text(3)).value_or(Backend::Calibrated);
  t.apply_correction = s.integer(4) != 0;
  t.seed = static_cast<std::uint64_t>(s.integer(5));
  t.status = parse_status(s.text(6)).value_or(TaskStatus::Failed);
  t.submitted_at = s.integer(7);
  t.started_at = s.opt_integer(8);
  t.finished_at = s.opt_integer(9);
  t.lease_owner = s.opt_text(10);
  t.lease_expires = s.opt_integer(11);
  t.error = s.opt_text(12);
  if (t.status == TaskStatus::Done) t.result_ref = result_ref(t.id);
  return t;
}

std::optional<TaskRecord> select_task(sqlite3* db, const std::string& id) {
  const std::string sql = std::string("SELECT ") + kColumns + " FROM tasks WHERE id = ?";
  Statement s(db, sql.c_str());
  s.bind(1, id);
  if (!s.step()) return std::nullopt;
  return read_task(s);
}

int requeue_locked(sqlite3* db, Millis now) {
  Statement s(db,
              "UPDATE tasks SET status = 'queued', started_at = NULL, lease_owner = NULL, "
              "lease_expires = NULL WHERE status = 'running' AND lease_expires < ?");
  s.bind(1, now);
  s.step();
  return sqlite3_changes(db);
}

}  // namespace

TaskStore::TaskStore(const std::filesystem::path& path) {
  const std::string name = path.string();
  if (sqlite3_open_v2(name.c_str(), &db_, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_NOMUTEX,
                      nullptr) != SQLITE_OK) {
    std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
    sqlite3_close(db_);
    throw StoreError("cannot open task store " + name + ": " + msg);
  }
  try {
    sqlite3_busy_timeout(db_, 5000);
    if (name != ":memory:") exec(db_, "PRAGMA journal_mode = WAL");
    exec(db_, "PRAGMA synchronous = FULL");
    exec(db_, kSchema);
  } catch (...) {
    sqlite3_close(db_);
    throw;
  }
}

TaskStore::~TaskStore() { sqlite3_close(db_); }

void TaskStore::insert(const TaskRecord& t) {
  std::lock_guard lock(mutex_);
  const std::string sql = std::string("INSERT INTO tasks (") + kColumns +
                          ") VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)";
  Statement s(db_, sql.c_str());
  s.bind(1, t.id)
      .bind(2, t.source)
      .bind(3, static_cast<std::int64_t>(t.shots))
      .bind(4, to_string(t.backend))
      .bind(5, std::int64_t{t.apply_correction})
      .bind(6, static_cast<std::int64_t>(t.seed))
      .bind(7, to_string(t.status))
      .bind(8, t.submitted_at)
      .bind(9, t.started_at)
      .bind(10, t.finished_at)
      .bind(11, t.lease_owner)
      .bind(12, t.lease_expires)
      .bind(13, t.error);
  s.step();
}

std::optional<TaskRecord> TaskStore::get(const std::string& id) const {
  std::lock_guard lock(mutex_);
  return select_task(db_, id);
}

int TaskStore::requeue_expired(Millis now) {
  std::lock_guard lock(mutex_);
  return requeue_locked(db_, now);
}

std::optional<TaskRecord> TaskStore::claim_next(const std::string& agent, Millis now, Millis lease) {
  std::lock_guard lock(mutex_);
  Transaction tx(db_);
  requeue_locked(db_, now);
  std::string id;
  {
    Statement s(db_, "SELECT id FROM tasks WHERE status = 'queued' ORDER BY seq LIMIT 1");
    if (!s.step()) {
      tx.commit();
      return std::nullopt;
    }
    id = s.text(0);
  }
  Statement u(db_,
              "UPDATE tasks SET status = 'running', started_at = ?, lease_owner = ?, lease_expires = ? "
              "WHERE id = ? AND status = 'queued'");
  u.bind(1, now).bind(2, agent).bind(3, now + lease).bind(4, id);
  u.step();
  auto task = select_task(db_, id);
  tx.commit();
  return task;
}

ReportOutcome TaskStore::finish(const std::string& id, const std::string& agent, Millis now,
                                const std::optional<std::string>& result,
                                const std::optional<std::string>& error) {
  if (result.has_value() == error.has_value()) {
    throw std::invalid_argument("a report carries either a result or an error");
  }
  std::lock_guard lock(mutex_);
  Transaction tx(db_);
  const auto task = select_task(db_, id);
  if (!task) return ReportOutcome::NotFound;
  if (task->lease_owner != agent) return ReportOutcome::LeaseMismatch;

  if (task->status == TaskStatus::Done || task->status == TaskStatus::Failed) {
    // A retried report is fine as long as it says the same thing.
    if (result && task->status == TaskStatus::Done) {
      Statement s(db_, "SELECT document FROM results WHERE id = ?");
      s.bind(1, id);
      if (s.step() && s.text(0) == *result) return ReportOutcome::Duplicate;
    }
    if (error && task->status == TaskStatus::Failed && task->error == error) return ReportOutcome::Duplicate;
    return ReportOutcome::LeaseMismatch;
  }
  if (task->status != TaskStatus::Running) return ReportOutcome::LeaseMismatch;

  if (result) {
    Statement r(db_, "INSERT OR REPLACE INTO results (id, document) VALUES (?, ?)");
    r.bind(1, id).bind(2, *result);
    r.step();
  }
  Statement u(db_, "UPDATE tasks SET status = ?, finished_at = ?, lease_expires = NULL, error = ? WHERE id = ?");
  u.bind(1, to_string(result ? TaskStatus::Done : TaskStatus::Failed)).bind(2, now).bind(3, error).bind(4, id);
  u.step();
  tx.commit();
  return ReportOutcome::Accepted;
}

std::optional<std::string> TaskStore::result(const std::string& id) const {
  std::lock_guard lock(mutex_);
  Statement s(db_, "SELECT document FROM results WHERE id = ?");
  s.bind(1, id);
  if (!s.step()) return std::nullopt;
  return s.text(0);
}

std::size_t TaskStore::count(TaskStatus status) const {
  std::lock_guard lock(mutex_);
  Statement s(db_, "SELECT COUNT(*) FROM tasks WHERE status = ?");
  s.bind(1, to_string(status));
  s.step();
  return static_cast<std::size_t>(s.integer(0));
}

}  // namespace scq::service
