#include "cteg/store.hpp"

#include <cstring>
#include <iterator>

#include "cteg/errors.hpp"

namespace cteg {

namespace {

constexpr char kMagic[] = "CTEGSTORE1";
constexpr std::size_t kMagicSize = sizeof(kMagic) - 1;
constexpr std::uint8_t kSessionRecord = 1;
constexpr std::uint8_t kNodeRecord = 2;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_i64(std::vector<std::uint8_t>& out, std::int64_t v) {
  auto u = static_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
}

template <typename Id>
void put_id(std::vector<std::uint8_t>& out, const Id& id) {
  out.insert(out.end(), id.bytes().begin(), id.bytes().end());
}

class Reader {
 public:
  Reader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

  bool done() const { return pos_ == size_; }

  std::uint8_t u8() { return take(1)[0]; }
  std::uint32_t u32() {
    const auto* p = take(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{p[i]} << (8 * i);
    return v;
  }
  std::int64_t i64() {
    const auto* p = take(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{p[i]} << (8 * i);
    return static_cast<std::int64_t>(v);
  }
  template <typename Id>
  Id id() {
    typename Id::Bytes b{};
    std::memcpy(b.data(), take(16), 16);
    return Id(b);
  }
  std::vector<std::uint8_t> bytes(std::size_t n) {
    const auto* p = take(n);
    return {p, p + n};
  }

 private:
  const std::uint8_t* take(std::size_t n) {
    if (size_ - pos_ < n) throw ParseError("store record truncated");
    const auto* p = data_ + pos_;
    pos_ += n;
    return p;
  }

  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

std::vector<std::uint8_t> encode_session(SessionId id) {
  std::vector<std::uint8_t> body{kSessionRecord};
  put_id(body, id);
  return body;
}

std::vector<std::uint8_t> encode_node(const NodeRecord& rec) {
  std::vector<std::uint8_t> body{kNodeRecord};
  put_id(body, rec.node_id);
  put_id(body, rec.session_id);
  body.push_back(rec.parent_id ? 1 : 0);
  if (rec.parent_id) put_id(body, *rec.parent_id);
  put_i64(body, rec.timestamp.micros);
  const auto& name = rec.event_type.name();
  put_u32(body, static_cast<std::uint32_t>(name.size()));
  body.insert(body.end(), name.begin(), name.end());
  put_u32(body, static_cast<std::uint32_t>(rec.payload.size()));
  body.insert(body.end(), rec.payload.begin(), rec.payload.end());
  return body;
}

}  // namespace

namespace detail {

StoreState::StoreState(StoreOptions options) : options_(std::move(options)) {
  if (!options_.ids) options_.ids = std::make_shared<IdGenerator>();
}

SessionId StoreState::fresh_session_id() {
  SessionId id = options_.ids->next_session();
  while (registry_.count(id)) id = options_.ids->next_session();
  return id;
}

void StoreState::check_append(const NodeRecord& rec) const {
  auto it = index_.find(rec.session_id);
  if (!registry_.count(rec.session_id) || it == index_.end()) {
    throw StoreError("unknown session " + rec.session_id.to_hex());
  }
  const SessionIndex& idx = it->second;
  if (idx.times.count(rec.node_id)) {
    throw StoreError("duplicate node " + rec.node_id.to_hex() + " in session " + rec.session_id.to_hex());
  }
  if (rec.payload.size() > options_.max_payload_bytes) {
    throw StoreError("payload of " + std::to_string(rec.payload.size()) + " bytes exceeds the cap of " +
                     std::to_string(options_.max_payload_bytes));
  }
  if (!rec.parent_id) {
    if (idx.has_root) throw StoreError("session " + rec.session_id.to_hex() + " already has a root");
    return;
  }
  auto parent = idx.times.find(*rec.parent_id);
  if (parent == idx.times.end()) {
    throw StoreError("unknown parent " + rec.parent_id->to_hex() + " for node " + rec.node_id.to_hex());
  }
  if (!(parent->second < rec.timestamp)) {
    throw StoreError("node " + rec.node_id.to_hex() + " has t=" + std::to_string(rec.timestamp.micros) +
                     " not after its parent's t=" + std::to_string(parent->second.micros));
  }
}

void StoreState::add_session(SessionId id) {
  if (registry_.insert(id).second) {
    registry_order_.push_back(id);
    index_[id];
  }
}

void StoreState::add_record(NodeRecord rec) {
  add_session(rec.session_id);
  SessionIndex& idx = index_[rec.session_id];
  idx.times.emplace(rec.node_id, rec.timestamp);
  if (!rec.parent_id) idx.has_root = true;
  records_.push_back(std::move(rec));
}

std::vector<NodeRecord> StoreState::records_of(SessionId id) const {
  if (!registry_.count(id)) throw StoreError("unknown session " + id.to_hex());
  std::vector<NodeRecord> out;
  for (const auto& r : records_) {
    if (r.session_id == id) out.push_back(r);
  }
  return out;
}

std::vector<SessionId> StoreState::sessions() const { return registry_order_; }

}  // namespace detail

Cteg reconstruct(const std::vector<NodeRecord>& rows) {
  if (rows.empty()) throw StoreError("session has no nodes");
  TypedTemporalGraph g;
  std::optional<ActionId> root;
  for (const auto& r : rows) {
    if (g.contains(r.node_id)) throw CorruptionError("node " + r.node_id.to_hex() + " stored twice");
    g.add_node(r.node_id, r.timestamp, r.event_type, r.payload);
    if (!r.parent_id) {
      if (root) throw CorruptionError("session has more than one root");
      root = r.node_id;
    }
  }
  if (!root) throw CorruptionError("session has no root");
  for (const auto& r : rows) {
    if (!r.parent_id) continue;
    if (!g.contains(*r.parent_id) || *r.parent_id == r.node_id) {
      throw CorruptionError("node " + r.node_id.to_hex() + " points at missing parent " + r.parent_id->to_hex());
    }
    g.add_edge(*r.parent_id, r.node_id);
  }
  Diagnostics diag = validate_cteg(g, *root);
  if (!diag.ok()) throw CorruptionError("stored session is not a valid CTEG:\n" + diag.to_string());
  return Cteg::make(std::move(g), *root);
}

SessionId write_trace(Store& store, const Cteg& c) {
  SessionId id = store.register_session();
  for (ActionId n : temporal_projection(c)) {
    const auto& attrs = c.graph().node(n);
    store.append_node(NodeRecord{n, id, c.parent(n), attrs.time, attrs.type, attrs.payload});
  }
  return id;
}

MemoryStore::MemoryStore(StoreOptions options) : state_(std::move(options)) {}

SessionId MemoryStore::register_session() {
  std::lock_guard lock(mutex_);
  SessionId id = state_.fresh_session_id();
  state_.add_session(id);
  return id;
}

void MemoryStore::append_node(const NodeRecord& rec) {
  std::lock_guard lock(mutex_);
  state_.check_append(rec);
  state_.add_record(rec);
}

Cteg MemoryStore::load_session(SessionId id) const {
  std::vector<NodeRecord> rows;
  {
    std::lock_guard lock(mutex_);
    rows = state_.records_of(id);
  }
  return reconstruct(rows);
}

std::vector<SessionId> MemoryStore::sessions() const {
  std::lock_guard lock(mutex_);
  return state_.sessions();
}

FileStore::FileStore(std::filesystem::path path, StoreOptions options)
    : path_(std::move(path)), state_(std::move(options)) {}

std::unique_ptr<FileStore> FileStore::open(const std::filesystem::path& path, StoreOptions options) {
  std::unique_ptr<FileStore> store(new FileStore(path, std::move(options)));

  std::vector<std::uint8_t> data;
  if (std::filesystem::exists(path)) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StoreError("cannot read " + path.string());
    data.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }

  if (data.empty()) {
    std::ofstream init(path, std::ios::binary | std::ios::trunc);
    init.write(kMagic, kMagicSize);
    if (!init) throw StoreError("cannot create " + path.string());
  } else {
    if (data.size() < kMagicSize || std::memcmp(data.data(), kMagic, kMagicSize) != 0) {
      throw ParseError(path.string() + " is not a CTEG store (bad magic)");
    }
    std::size_t pos = kMagicSize;
    while (pos < data.size()) {
      if (data.size() - pos < 4) break;  // torn length prefix
      Reader len(data.data() + pos, 4);
      std::uint32_t body_len = len.u32();
      if (data.size() - pos - 4 < body_len) break;  // torn body
      Reader body(data.data() + pos + 4, body_len);
      std::uint8_t kind = body.u8();
      if (kind == kSessionRecord) {
        store->state_.add_session(body.id<SessionId>());
      } else if (kind == kNodeRecord) {
        auto node_id = body.id<ActionId>();
        auto session_id = body.id<SessionId>();
        std::optional<ActionId> parent;
        if (body.u8()) parent = body.id<ActionId>();
        Timestamp ts{body.i64()};
        auto type_bytes = body.bytes(body.u32());
        if (type_bytes.empty()) throw ParseError("store record has an empty event type");
        auto payload = body.bytes(body.u32());
        store->state_.add_record(NodeRecord{node_id, session_id, parent, ts,
                                            EventType(std::string(type_bytes.begin(), type_bytes.end())),
                                            std::move(payload)});
      } else {
        throw ParseError("unknown store record kind " + std::to_string(kind));
      }
      if (!body.done()) throw ParseError("store record has trailing bytes");
      pos += 4 + body_len;
    }
    if (pos != data.size()) std::filesystem::resize_file(path, pos);
  }

  store->out_.open(path, std::ios::binary | std::ios::app);
  if (!store->out_) throw StoreError("cannot open " + path.string() + " for appending");
  return store;
}

void FileStore::write_body(const std::vector<std::uint8_t>& body) {
  std::vector<std::uint8_t> frame;
  put_u32(frame, static_cast<std::uint32_t>(body.size()));
  frame.insert(frame.end(), body.begin(), body.end());
  out_.write(reinterpret_cast<const char*>(frame.data()), static_cast<std::streamsize>(frame.size()));
  out_.flush();
  if (!out_) throw StoreError("write to " + path_.string() + " failed");
}

SessionId FileStore::register_session() {
  std::lock_guard lock(mutex_);
  SessionId id = state_.fresh_session_id();
  write_body(encode_session(id));
  state_.add_session(id);
  return id;
}

void FileStore::append_node(const NodeRecord& rec) {
  std::lock_guard lock(mutex_);
  state_.check_append(rec);
  write_body(encode_node(rec));
  state_.add_record(rec);
}

Cteg FileStore::load_session(SessionId id) const {
  std::vector<NodeRecord> rows;
  {
    std::lock_guard lock(mutex_);
    rows = state_.records_of(id);
  }
  return reconstruct(rows);
}

std::vector<SessionId> FileStore::sessions() const {
  std::lock_guard lock(mutex_);
  return state_.sessions();
}

}  // namespace cteg
