#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <vector>

#include "cteg/cteg.hpp"

namespace cteg {

/// One row of the append-only node table. `parent_id` is empty exactly for
/// the session root.
struct NodeRecord {
  ActionId node_id;
  SessionId session_id;
  std::optional<ActionId> parent_id;
  Timestamp timestamp;
  EventType event_type;
  Payload payload;

  friend bool operator==(const NodeRecord&, const NodeRecord&) = default;
};

struct StoreOptions {
  std::size_t max_payload_bytes = std::size_t{1} << 20;
  std::shared_ptr<IdGenerator> ids;  // random if null
};

/// Append-only session registry plus node table. There are no update or
/// delete operations. Appends from distinct sessions may run concurrently;
/// loads observe a consistent prefix.
class Store {
 public:
  virtual ~Store() = default;

  virtual SessionId register_session() = 0;

  /// Validates against what is already stored: registered session, parent
  /// present in the same session with a strictly smaller timestamp, fresh
  /// node id, single root, payload size. Throws StoreError.
  virtual void append_node(const NodeRecord& rec) = 0;

  /// Pointer resolution over the session's rows. Throws StoreError for an
  /// unknown or empty session and CorruptionError if the rows do not form a
  /// valid CTEG.
  virtual Cteg load_session(SessionId id) const = 0;

  virtual std::vector<SessionId> sessions() const = 0;
};

namespace detail {

// Registry, rows and the incremental index shared by both store kinds.
class StoreState {
 public:
  explicit StoreState(StoreOptions options);

  SessionId fresh_session_id();
  void check_append(const NodeRecord& rec) const;
  void add_session(SessionId id);
  void add_record(NodeRecord rec);
  std::vector<NodeRecord> records_of(SessionId id) const;
  std::vector<SessionId> sessions() const;
  bool registered(SessionId id) const { return registry_.count(id) != 0; }

 private:
  struct SessionIndex {
    std::map<ActionId, Timestamp> times;
    bool has_root = false;
  };

  StoreOptions options_;
  std::vector<SessionId> registry_order_;
  std::set<SessionId> registry_;
  std::vector<NodeRecord> records_;
  std::map<SessionId, SessionIndex> index_;
};

}  // namespace detail

class MemoryStore : public Store {
 public:
  explicit MemoryStore(StoreOptions options = {});

  SessionId register_session() override;
  void append_node(const NodeRecord& rec) override;
  Cteg load_session(SessionId id) const override;
  std::vector<SessionId> sessions() const override;

 private:
  mutable std::mutex mutex_;
  detail::StoreState state_;
};

/// Single-file append log. Layout: the 10-byte magic `CTEGSTORE1`, then
/// records framed as u32 little-endian body length followed by the body.
/// Body kind 1 registers a session (16-byte id). Body kind 2 is a node row:
/// node id, session id, u8 has-parent, parent id (if present), i64 timestamp,
/// u32 type length + bytes, u32 payload length + bytes. Integers are
/// little-endian. A torn trailing record is dropped on open.
class FileStore : public Store {
 public:
  /// Creates the file if missing. Throws StoreError on I/O failure and
  /// ParseError on a bad magic header or malformed complete record.
  static std::unique_ptr<FileStore> open(const std::filesystem::path& path, StoreOptions options = {});

  SessionId register_session() override;
  void append_node(const NodeRecord& rec) override;
  Cteg load_session(SessionId id) const override;
  std::vector<SessionId> sessions() const override;

 private:
  FileStore(std::filesystem::path path, StoreOptions options);
  void write_body(const std::vector<std::uint8_t>& body);

  std::filesystem::path path_;
  mutable std::mutex mutex_;
  detail::StoreState state_;
  std::ofstream out_;
};

/// Rebuilds a CTEG from rows by pointer resolution. Throws CorruptionError.
Cteg reconstruct(const std::vector<NodeRecord>& rows);

/// Registers a fresh session and appends every node of `c` parent-first.
SessionId write_trace(Store& store, const Cteg& c);

}  // namespace cteg
