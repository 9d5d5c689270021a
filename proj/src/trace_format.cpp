#include "cteg/trace_format.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <sstream>
#include <vector>

#include "cteg/errors.hpp"

namespace cteg {

namespace {

constexpr std::string_view kHeader = "cteg/1 ";

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

bool is_base64_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '+' ||
         c == '/';
}

template <typename Id>
Id parse_id(std::string_view text, std::size_t line) {
  try {
    return Id::from_hex(text);
  } catch (const std::invalid_argument&) {
    throw ParseError("line " + std::to_string(line) + ": malformed id '" + std::string(text) + "'");
  }
}

}  // namespace

std::string base64_encode(const Payload& data) {
  if (data.empty()) return {};
  std::string out(4 * ((data.size() + 2) / 3), '\0');
  int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), data.data(),
                          static_cast<int>(data.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

Payload base64_decode(std::string_view text) {
  if (text.empty()) return {};
  if (text.size() % 4 != 0) throw ParseError("base64 length is not a multiple of 4");
  std::size_t pad = 0;
  while (pad < 2 && text[text.size() - 1 - pad] == '=') ++pad;
  for (std::size_t i = 0; i < text.size() - pad; ++i) {
    if (!is_base64_char(text[i])) throw ParseError("invalid base64 character");
  }
  Payload out(text.size() / 4 * 3);
  int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                          static_cast<int>(text.size()));
  if (n < 0) throw ParseError("invalid base64 payload");
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

std::string export_trace(const Cteg& c, SessionId session) {
  std::ostringstream os;
  os << kHeader << session.to_hex() << '\n';
  for (ActionId n : temporal_projection(c)) {
    const auto& attrs = c.graph().node(n);
    auto parent = c.parent(n);
    os << n.to_hex() << '\t' << (parent ? parent->to_hex() : "-") << '\t' << attrs.time.micros << '\t'
       << attrs.type.name() << '\t' << base64_encode(attrs.payload) << '\n';
  }
  return os.str();
}

ParsedTrace parse_trace(std::string_view text) {
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines.front().substr(0, kHeader.size()) != kHeader) {
    throw ParseError("line 1: expected header 'cteg/1 <session_id>'");
  }
  ParsedTrace out;
  out.session = parse_id<SessionId>(lines.front().substr(kHeader.size()), 1);

  std::vector<std::pair<ActionId, ActionId>> parent_links;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    auto fields = split(lines[i], '\t');
    if (fields.size() != 5) {
      throw ParseError("line " + std::to_string(lineno) + ": expected 5 tab-separated fields, got " +
                       std::to_string(fields.size()));
    }
    ActionId id = parse_id<ActionId>(fields[0], lineno);
    std::int64_t micros = 0;
    auto [ptr, ec] = std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(), micros);
    if (ec != std::errc() || ptr != fields[2].data() + fields[2].size()) {
      throw ParseError("line " + std::to_string(lineno) + ": malformed timestamp '" +
                       std::string(fields[2]) + "'");
    }
    if (fields[3].empty()) throw ParseError("line " + std::to_string(lineno) + ": empty event type");
    Payload payload;
    try {
      payload = base64_decode(fields[4]);
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
    if (out.graph.contains(id)) {
      throw ParseError("line " + std::to_string(lineno) + ": duplicate node " + id.to_hex());
    }
    out.graph.add_node(id, Timestamp{micros}, EventType(std::string(fields[3])), std::move(payload));
    if (fields[1] == "-") {
      if (!out.root) out.root = id;
    } else {
      parent_links.emplace_back(parse_id<ActionId>(fields[1], lineno), id);
    }
  }
  for (const auto& [parent, child] : parent_links) {
    if (!out.graph.contains(parent)) {
      throw ParseError("node " + child.to_hex() + " references unknown parent " + parent.to_hex());
    }
    if (parent == child) {
      throw ParseError("node " + child.to_hex() + " is its own parent");
    }
    out.graph.add_edge(parent, child);
  }
  return out;
}

std::pair<Cteg, SessionId> import_trace(std::string_view text) {
  ParsedTrace parsed = parse_trace(text);
  if (!parsed.root) throw InvalidCtegError("trace has no parentless root node");
  return {Cteg::make(std::move(parsed.graph), *parsed.root), parsed.session};
}

std::string canonical_graph_text(const TypedTemporalGraph& g) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [id, attrs] : g.nodes()) {
    os << (first ? "" : ",") << id.to_hex() << '@' << attrs.time.micros << ':' << attrs.type.name();
    first = false;
  }
  os << ';';
  first = true;
  for (const auto& [from, to] : g.edges()) {
    os << (first ? "" : ",") << from.to_hex() << '>' << to.to_hex();
    first = false;
  }
  return os.str();
}

}  // namespace cteg
