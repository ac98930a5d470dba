#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace irrtor {

/// Autonomous System Number. Canonical textual form is "AS" + asplain decimal.
using Asn = uint32_t;

/// Parses "AS65001", "as65001", bare "65001" and asdot "AS1.2".
/// Returns nullopt for anything else (including overflow).
std::optional<Asn> parse_asn(std::string_view text);

std::string asn_text(Asn asn);

/// Calendar timestamp packed as yyyymmddHHMMSS so that numeric order is
/// chronological order. Good enough for "which object is newer".
using Timestamp = uint64_t;

/// Accepts ISO 8601 ("2021-04-23", "2021-04-23T15:31:59Z") and compact
/// "20210423" forms.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// Scans whitespace-separated tokens for the first parseable date
/// (used for legacy "changed: user@host 20210423" lines).
std::optional<Timestamp> find_timestamp(std::string_view text);

std::string timestamp_text(Timestamp ts);

enum class Relation : uint8_t { P2P, P2C, C2P, S2S };

constexpr Relation reverse(Relation r) {
  switch (r) {
    case Relation::P2C: return Relation::C2P;
    case Relation::C2P: return Relation::P2C;
    default: return r;  // P2P and S2S are self-dual
  }
}

std::string_view relation_name(Relation r);
std::optional<Relation> relation_from_name(std::string_view name);

/// as-rel style code: -1 = P2C (left side is the provider), 0 = P2P,
/// 2 = S2S. C2P has no code; links are oriented provider-first on output.
int relation_code(Relation r);
std::optional<Relation> relation_from_code(int code);

enum class Heuristic : uint8_t { ImportExport, Remarks, Sets };

std::string_view heuristic_name(Heuristic h);

/// Unordered AS pair packed min-major, so a LinkKey identifies a link
/// regardless of direction.
using LinkKey = uint64_t;

constexpr LinkKey link_key(Asn a, Asn b) {
  const Asn lo = a < b ? a : b;
  const Asn hi = a < b ? b : a;
  return (static_cast<LinkKey>(lo) << 32) | hi;
}

constexpr Asn link_lo(LinkKey k) { return static_cast<Asn>(k >> 32); }
constexpr Asn link_hi(LinkKey k) { return static_cast<Asn>(k & 0xffffffffu); }

/// Directed pair key, for reverse-observation lookups.
constexpr uint64_t directed_key(Asn from, Asn to) {
  return (static_cast<uint64_t>(from) << 32) | to;
}

/// One directed classification produced by a heuristic. `relation` is the
/// role of `from_asn` relative to `to_asn` (P2C: from is the provider).
/// `entity_id` identifies the filtering granularity: the observing ASN for
/// import/export, "AS<n>#<block>" for remark blocks, the set name for sets.
struct ToRObservation {
  Asn from_asn = 0;
  Asn to_asn = 0;
  Relation relation = Relation::P2P;
  Heuristic heuristic = Heuristic::ImportExport;
  std::string entity_id;

  bool operator==(const ToRObservation&) const = default;
};

/// Deterministic observation order, independent of how the corpus was walked.
void sort_canonical(std::vector<ToRObservation>& observations);

}  // namespace irrtor
