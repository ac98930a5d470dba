#include "irrtor/types.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace irrtor {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

std::optional<uint64_t> to_u64(std::string_view s) {
  uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

bool valid_ymd(uint64_t y, uint64_t m, uint64_t d) {
  return y >= 1970 && y <= 9999 && m >= 1 && m <= 12 && d >= 1 && d <= 31;
}

}  // namespace

std::optional<Asn> parse_asn(std::string_view text) {
  if (text.size() >= 2 && (text[0] == 'A' || text[0] == 'a') &&
      (text[1] == 'S' || text[1] == 's')) {
    text.remove_prefix(2);
  }
  if (text.empty()) return std::nullopt;
  const size_t dot = text.find('.');
  if (dot != std::string_view::npos) {
    // asdot: high.low, both 16-bit
    const auto hi = to_u64(text.substr(0, dot));
    const auto lo = to_u64(text.substr(dot + 1));
    if (!hi || !lo || *hi > 0xffff || *lo > 0xffff) return std::nullopt;
    return static_cast<Asn>((*hi << 16) | *lo);
  }
  if (!all_digits(text)) return std::nullopt;
  const auto v = to_u64(text);
  if (!v || *v > 0xffffffffull) return std::nullopt;
  return static_cast<Asn>(*v);
}

std::string asn_text(Asn asn) { return "AS" + std::to_string(asn); }

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  // Compact yyyymmdd
  if (text.size() == 8 && all_digits(text)) {
    const uint64_t v = *to_u64(text);
    const uint64_t y = v / 10000, m = (v / 100) % 100, d = v % 100;
    if (!valid_ymd(y, m, d)) return std::nullopt;
    return v * 1000000ull;
  }
  // ISO 8601: yyyy-mm-dd[Thh:mm:ss[Z]]
  if (text.size() >= 10 && text[4] == '-' && text[7] == '-') {
    const auto y = to_u64(text.substr(0, 4));
    const auto m = to_u64(text.substr(5, 2));
    const auto d = to_u64(text.substr(8, 2));
    if (!y || !m || !d || !valid_ymd(*y, *m, *d)) return std::nullopt;
    uint64_t hms = 0;
    if (text.size() >= 19 && (text[10] == 'T' || text[10] == ' ') &&
        text[13] == ':' && text[16] == ':') {
      const auto hh = to_u64(text.substr(11, 2));
      const auto mm = to_u64(text.substr(14, 2));
      const auto ss = to_u64(text.substr(17, 2));
      if (hh && mm && ss && *hh < 24 && *mm < 60 && *ss < 61)
        hms = *hh * 10000 + *mm * 100 + *ss;
    }
    return (*y * 10000 + *m * 100 + *d) * 1000000ull + hms;
  }
  return std::nullopt;
}

std::optional<Timestamp> find_timestamp(std::string_view text) {
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) {
      if (auto ts = parse_timestamp(text.substr(i, j - i))) return ts;
    }
    i = j;
  }
  return std::nullopt;
}

std::string timestamp_text(Timestamp ts) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%014llu", static_cast<unsigned long long>(ts));
  return buf;
}

std::string_view relation_name(Relation r) {
  switch (r) {
    case Relation::P2P: return "P2P";
    case Relation::P2C: return "P2C";
    case Relation::C2P: return "C2P";
    case Relation::S2S: return "S2S";
  }
  return "?";
}

std::optional<Relation> relation_from_name(std::string_view name) {
  std::string up;
  up.reserve(name.size());
  for (char c : name) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (up == "P2P") return Relation::P2P;
  if (up == "P2C") return Relation::P2C;
  if (up == "C2P") return Relation::C2P;
  if (up == "S2S") return Relation::S2S;
  return std::nullopt;
}

int relation_code(Relation r) {
  switch (r) {
    case Relation::P2C: return -1;
    case Relation::P2P: return 0;
    case Relation::S2S: return 2;
    case Relation::C2P: return -1;  // callers orient provider-first before encoding
  }
  return 0;
}

std::optional<Relation> relation_from_code(int code) {
  switch (code) {
    case -1: return Relation::P2C;
    case 0: return Relation::P2P;
    case 2: return Relation::S2S;
    default: return std::nullopt;
  }
}

std::string_view heuristic_name(Heuristic h) {
  switch (h) {
    case Heuristic::ImportExport: return "import-export";
    case Heuristic::Remarks: return "remarks";
    case Heuristic::Sets: return "sets";
  }
  return "?";
}

void sort_canonical(std::vector<ToRObservation>& observations) {
  std::sort(observations.begin(), observations.end(),
            [](const ToRObservation& a, const ToRObservation& b) {
              if (a.from_asn != b.from_asn) return a.from_asn < b.from_asn;
              if (a.to_asn != b.to_asn) return a.to_asn < b.to_asn;
              if (a.heuristic != b.heuristic) return a.heuristic < b.heuristic;
              if (a.entity_id != b.entity_id) return a.entity_id < b.entity_id;
              return a.relation < b.relation;
            });
}

}  // namespace irrtor
