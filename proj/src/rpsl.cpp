#include "irrtor/rpsl.hpp"

#include <algorithm>
#include <cctype>

#include "irrtor/corpus_io.hpp"

namespace irrtor {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string to_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

std::string to_upper(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  return out;
}

// Replaces bytes that do not form valid UTF-8 with '?'. Returns the number
// of replaced bytes. ASCII-only lines take the early exit.
size_t sanitize_utf8(std::string& s) {
  bool ascii = true;
  for (unsigned char c : s) {
    if (c >= 0x80) { ascii = false; break; }
  }
  if (ascii) return 0;
  size_t replaced = 0;
  size_t i = 0;
  while (i < s.size()) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    size_t len = 0;
    if (c < 0x80) len = 1;
    else if ((c & 0xe0) == 0xc0) len = 2;
    else if ((c & 0xf0) == 0xe0) len = 3;
    else if ((c & 0xf8) == 0xf0) len = 4;
    if (len == 0 || i + len > s.size()) {
      s[i] = '?';
      ++replaced;
      ++i;
      continue;
    }
    bool ok = true;
    for (size_t k = 1; k < len; ++k) {
      if ((static_cast<unsigned char>(s[i + k]) & 0xc0) != 0x80) { ok = false; break; }
    }
    if (!ok) {
      s[i] = '?';
      ++replaced;
      ++i;
    } else {
      i += len;
    }
  }
  return replaced;
}

bool valid_attr_key(std::string_view key) {
  if (key.empty() || !std::isalpha(static_cast<unsigned char>(key.front()))) return false;
  return std::all_of(key.begin(), key.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '-' || c == '_';
  });
}

bool is_name_token(std::string_view tok) {
  if (tok.empty() || !std::isalpha(static_cast<unsigned char>(tok.front()))) return false;
  return std::all_of(tok.begin(), tok.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '-' || c == '_' || c == ':';
  });
}

std::vector<std::string_view> split_tokens(std::string_view s) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (std::isspace(static_cast<unsigned char>(s[i])) || s[i] == ',')) ++i;
    size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != ',') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  }
  return true;
}

// RPSL operator / structure markers that put an expression outside the
// simple subset.
bool is_operator_token(std::string_view tok) {
  static constexpr std::string_view kOps[] = {"AND", "OR", "NOT", "EXCEPT", "REFINE"};
  for (auto op : kOps) {
    if (iequals(tok, op)) return true;
  }
  return tok.find_first_of("{}()<>^;=") != std::string_view::npos;
}

std::optional<std::string> email_domain(std::string_view value) {
  for (auto tok : split_tokens(value)) {
    const size_t at = tok.rfind('@');
    if (at != std::string_view::npos && at + 1 < tok.size()) {
      std::string_view dom = tok.substr(at + 1);
      while (!dom.empty() && (dom.back() == '>' || dom.back() == '.' || dom.back() == ',')) {
        dom.remove_suffix(1);
      }
      if (!dom.empty()) return to_lower(dom);
    }
  }
  return std::nullopt;
}

}  // namespace

std::string_view direction_name(Direction d) {
  return d == Direction::Import ? "import" : "export";
}

void ParseStats::merge(const ParseStats& other) {
  blocks += other.blocks;
  autnums += other.autnums;
  assets += other.assets;
  skipped_no_attribute += other.skipped_no_attribute;
  skipped_other_class += other.skipped_other_class;
  skipped_bad_key += other.skipped_bad_key;
  unparsed_policies += other.unparsed_policies;
  malformed_lines += other.malformed_lines;
  replaced_bytes += other.replaced_bytes;
}

ObjectSplitter::ObjectSplitter(std::function<void(RawBlock&&)> sink, ParseStats& stats)
    : sink_(std::move(sink)), stats_(stats) {}

void ObjectSplitter::push_line(std::string_view line) {
  std::string work(line);
  if (!work.empty() && work.back() == '\r') work.pop_back();
  stats_.replaced_bytes += sanitize_utf8(work);
  // '#' starts a comment that runs to end of line
  if (const size_t hash = work.find('#'); hash != std::string::npos) {
    work.resize(hash);
  }
  const std::string_view trimmed = trim(work);
  if (trimmed.empty()) {
    flush();
    return;
  }
  const bool continuation = work[0] == ' ' || work[0] == '\t' || work[0] == '+';
  if (!in_block_) {
    in_block_ = true;
    block_bad_ = false;
    if (continuation) {
      // block opens with a dangling continuation: no attribute to join
      block_bad_ = true;
      return;
    }
  }
  if (block_bad_) return;
  if (continuation) {
    if (block_.attrs.empty()) {
      block_bad_ = true;
      return;
    }
    std::string_view rest = trimmed;
    if (!rest.empty() && rest.front() == '+') rest = trim(rest.substr(1));
    if (!rest.empty()) {
      std::string& value = block_.attrs.back().value;
      if (!value.empty()) value.push_back(' ');
      value.append(rest);
    }
    return;
  }
  const size_t colon = work.find(':');
  std::string_view key = colon == std::string::npos ? std::string_view{} : trim(std::string_view(work).substr(0, colon));
  if (colon == std::string::npos || !valid_attr_key(key)) {
    if (block_.attrs.empty()) {
      block_bad_ = true;  // first line is not "attribute: value"
    } else {
      ++stats_.malformed_lines;
    }
    return;
  }
  RawAttribute attr;
  attr.key = to_lower(key);
  attr.value = std::string(trim(std::string_view(work).substr(colon + 1)));
  block_.attrs.push_back(std::move(attr));
}

void ObjectSplitter::flush() {
  if (!in_block_) return;
  in_block_ = false;
  ++stats_.blocks;
  if (block_bad_ || block_.attrs.empty()) {
    ++stats_.skipped_no_attribute;
    block_ = RawBlock{};
    block_bad_ = false;
    return;
  }
  RawBlock out;
  std::swap(out, block_);
  sink_(std::move(out));
}

void ObjectSplitter::finish() { flush(); }

std::vector<RawBlock> split_objects(std::string_view text, ParseStats& stats) {
  std::vector<RawBlock> blocks;
  ObjectSplitter splitter([&](RawBlock&& b) { blocks.push_back(std::move(b)); }, stats);
  size_t start = 0;
  while (start <= text.size()) {
    if (start == text.size()) {
      if (!text.empty()) break;
      break;
    }
    size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    splitter.push_line(text.substr(start, nl - start));
    start = nl + 1;
  }
  splitter.finish();
  return blocks;
}

std::optional<std::vector<PolicyRule>> parse_policy_line(Direction direction,
                                                         std::string_view value,
                                                         int ord) {
  const auto tokens = split_tokens(value);
  if (tokens.empty()) return std::nullopt;
  const std::string_view peering_kw = direction == Direction::Import ? "from" : "to";
  const std::string_view action_kw = direction == Direction::Import ? "accept" : "announce";

  // protocol / afi qualifiers may precede the peering keyword
  size_t i = 0;
  while (i < tokens.size() && !iequals(tokens[i], peering_kw)) ++i;
  if (i + 1 >= tokens.size()) return std::nullopt;
  ++i;  // past from/to

  const auto peer = parse_asn(tokens[i]);
  if (!peer) return std::nullopt;
  ++i;
  // anything between the peer and accept/announce (router IPs, "at",
  // actions, a second peer) is outside the subset
  if (i >= tokens.size() || !iequals(tokens[i], action_kw)) return std::nullopt;
  ++i;

  if (i >= tokens.size()) return std::nullopt;  // empty target list

  PolicyRule rule;
  rule.ord = ord;
  rule.direction = direction;
  rule.peer = *peer;

  const size_t target_count = tokens.size() - i;
  for (; i < tokens.size(); ++i) {
    const std::string_view tok = tokens[i];
    if (is_operator_token(tok)) return std::nullopt;
    if (iequals(tok, "ANY") || iequals(tok, "AS-ANY")) {
      if (target_count != 1) return std::nullopt;  // ANY inside a list is ambiguous
      rule.any = true;
      return std::vector<PolicyRule>{std::move(rule)};
    }
    if (auto asn = parse_asn(tok)) {
      rule.asn_targets.push_back(*asn);
    } else if (is_name_token(tok)) {
      rule.name_targets.push_back(to_upper(tok));
    } else {
      return std::nullopt;
    }
  }
  return std::vector<PolicyRule>{std::move(rule)};
}

std::optional<AutNumObject> parse_autnum(const RawBlock& block,
                                         std::string_view registry,
                                         ParseStats& stats) {
  AutNumObject obj;
  obj.registry = std::string(registry);
  const auto asn = parse_asn(block.attrs.front().value);
  if (!asn) {
    ++stats.skipped_bad_key;
    return std::nullopt;
  }
  obj.asn = *asn;

  std::optional<Timestamp> last_modified_attr;
  std::optional<Timestamp> latest_changed;

  for (int ord = 0; ord < static_cast<int>(block.attrs.size()); ++ord) {
    const RawAttribute& attr = block.attrs[ord];
    const std::string& key = attr.key;
    if (key == "as-name") {
      if (obj.as_name.empty()) obj.as_name = attr.value;
      obj.admin_fields["as-name"].push_back(attr.value);
    } else if (key == "import" || key == "export" || key == "mp-import" ||
               key == "mp-export") {
      const Direction dir = (key == "import" || key == "mp-import")
                                ? Direction::Import
                                : Direction::Export;
      if (auto rules = parse_policy_line(dir, attr.value, ord)) {
        for (auto& r : *rules) obj.policies.push_back(std::move(r));
      } else {
        obj.unparsed_policies.push_back({ord, dir, attr.value});
        ++stats.unparsed_policies;
      }
    } else if (key == "remarks") {
      obj.remarks.push_back({ord, attr.value});
    } else if (key == "last-modified") {
      if (auto ts = parse_timestamp(trim(attr.value))) {
        if (!last_modified_attr || *ts > *last_modified_attr) last_modified_attr = ts;
      }
    } else if (key == "changed") {
      if (auto dom = email_domain(attr.value)) {
        obj.admin_fields["changed-domain"].push_back(*dom);
      }
      if (auto ts = find_timestamp(attr.value)) {
        if (!latest_changed || *ts > *latest_changed) latest_changed = ts;
      }
    } else if (key == "org") {
      obj.admin_fields["org"].push_back(attr.value);
    } else if (key == "mnt-by") {
      obj.admin_fields["mnt-by"].push_back(attr.value);
    } else if (key == "admin-c" || key == "admin") {
      obj.admin_fields["admin"].push_back(attr.value);
    } else if (key == "tech-c" || key == "tech") {
      obj.admin_fields["tech"].push_back(attr.value);
    } else if (key == "notify") {
      obj.admin_fields["notify"].push_back(attr.value);
    }
  }
  // prefer last-modified; legacy registries only have changed dates
  obj.last_modified = last_modified_attr ? last_modified_attr : latest_changed;
  ++stats.autnums;
  return obj;
}

std::optional<AsSetObject> parse_asset(const RawBlock& block,
                                       std::string_view registry,
                                       ParseStats& stats) {
  AsSetObject obj;
  obj.registry = std::string(registry);
  const std::string_view name = trim(block.attrs.front().value);
  if (name.empty() || !is_name_token(name)) {
    ++stats.skipped_bad_key;
    return std::nullopt;
  }
  obj.name = to_upper(name);

  std::optional<Timestamp> last_modified_attr;
  std::optional<Timestamp> latest_changed;

  for (const RawAttribute& attr : block.attrs) {
    const std::string& key = attr.key;
    if (key == "members" || key == "mp-members") {
      for (auto tok : split_tokens(attr.value)) {
        if (auto asn = parse_asn(tok)) {
          obj.members.push_back(asn_text(*asn));
        } else if (is_name_token(tok)) {
          obj.members.push_back(to_upper(tok));
        }
        // set expressions (operators etc.) are out of scope; skip token
      }
    } else if (key == "mnt-by") {
      for (auto tok : split_tokens(attr.value)) obj.mnt_by.emplace_back(tok);
    } else if (key == "last-modified") {
      if (auto ts = parse_timestamp(trim(attr.value))) {
        if (!last_modified_attr || *ts > *last_modified_attr) last_modified_attr = ts;
      }
    } else if (key == "changed") {
      if (auto ts = find_timestamp(attr.value)) {
        if (!latest_changed || *ts > *latest_changed) latest_changed = ts;
      }
    }
  }
  obj.last_modified = last_modified_attr ? last_modified_attr : latest_changed;
  ++stats.assets;
  return obj;
}

void parse_dump(std::string_view text, std::string_view registry,
                std::vector<AutNumObject>& autnums,
                std::vector<AsSetObject>& assets, ParseStats& stats) {
  ObjectSplitter splitter(
      [&](RawBlock&& block) {
        const std::string& cls = block.attrs.front().key;
        if (cls == "aut-num") {
          if (auto obj = parse_autnum(block, registry, stats)) {
            autnums.push_back(std::move(*obj));
          }
        } else if (cls == "as-set") {
          if (auto obj = parse_asset(block, registry, stats)) {
            assets.push_back(std::move(*obj));
          }
        } else {
          ++stats.skipped_other_class;
        }
      },
      stats);
  size_t start = 0;
  while (start < text.size()) {
    size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    splitter.push_line(text.substr(start, nl - start));
    start = nl + 1;
  }
  splitter.finish();
}

namespace {

// dated beats undated; later date wins; then greater registry; then greater
// serialized content so the outcome never depends on input order
template <typename T>
bool replaces_impl(const T& candidate, const T& incumbent) {
  const bool cd = candidate.last_modified.has_value();
  const bool id = incumbent.last_modified.has_value();
  if (cd != id) return cd;
  if (cd && *candidate.last_modified != *incumbent.last_modified) {
    return *candidate.last_modified > *incumbent.last_modified;
  }
  if (candidate.registry != incumbent.registry) {
    return candidate.registry > incumbent.registry;
  }
  return encode_record(candidate) > encode_record(incumbent);
}

}  // namespace

bool replaces(const AutNumObject& candidate, const AutNumObject& incumbent) {
  return replaces_impl(candidate, incumbent);
}

bool replaces(const AsSetObject& candidate, const AsSetObject& incumbent) {
  return replaces_impl(candidate, incumbent);
}

void merge_into(Corpus& corpus, AutNumObject&& obj) {
  auto [it, inserted] = corpus.autnums.try_emplace(obj.asn, std::move(obj));
  if (!inserted && replaces(obj, it->second)) it->second = std::move(obj);
}

void merge_into(Corpus& corpus, AsSetObject&& obj) {
  auto [it, inserted] = corpus.assets.try_emplace(obj.name, std::move(obj));
  if (!inserted && replaces(obj, it->second)) it->second = std::move(obj);
}

void merge_into(Corpus& corpus, Corpus&& other) {
  for (auto& [asn, obj] : other.autnums) merge_into(corpus, std::move(obj));
  for (auto& [name, obj] : other.assets) merge_into(corpus, std::move(obj));
}

Corpus dedupe_latest(std::vector<AutNumObject>&& autnums,
                     std::vector<AsSetObject>&& assets) {
  Corpus corpus;
  for (auto& obj : autnums) merge_into(corpus, std::move(obj));
  for (auto& obj : assets) merge_into(corpus, std::move(obj));
  return corpus;
}

}  // namespace irrtor
