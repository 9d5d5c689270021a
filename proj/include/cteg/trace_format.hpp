#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "cteg/cteg.hpp"

// Canonical line-delimited trace format:
//
//   cteg/1 <session_id>
//   <node_id>\t<parent_id or "-">\t<timestamp_micros>\t<event_type>\t<base64(payload)>
//   ...
//
// Ids are 32 lowercase hex digits, nodes appear in temporal projection order
// and every line ends in '\n'. Equal CTEGs export to equal bytes.

namespace cteg {

std::string base64_encode(const Payload& data);
/// Throws ParseError on malformed input.
Payload base64_decode(std::string_view text);

std::string export_trace(const Cteg& c, SessionId session);

/// Parsed but unvalidated trace. `root` is the first parentless node, if any.
struct ParsedTrace {
  SessionId session;
  TypedTemporalGraph graph;
  std::optional<ActionId> root;
};

/// Syntax only: throws ParseError on malformed lines, duplicate nodes or
/// dangling parent references. No causal or temporal checks.
ParsedTrace parse_trace(std::string_view text);

/// parse_trace followed by validation. Throws InvalidCtegError when the
/// parsed graph is not a CTEG.
std::pair<Cteg, SessionId> import_trace(std::string_view text);

/// Order-independent text form of any typed temporal graph:
/// nodes sorted by id as `id@t:type`, then `;`, then edges `a>b` sorted.
std::string canonical_graph_text(const TypedTemporalGraph& g);

}  // namespace cteg
