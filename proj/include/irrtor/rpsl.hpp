#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "irrtor/types.hpp"

namespace irrtor {

enum class Direction : uint8_t { Import, Export };

std::string_view direction_name(Direction d);

/// One import/export policy in the simple subset we mine. `ord` is the
/// attribute's position within its object; remark-block segmentation relies
/// on policies and remarks sharing one index space.
struct PolicyRule {
  int ord = 0;
  Direction direction = Direction::Import;
  Asn peer = 0;
  bool any = false;                        // targets are the ANY marker
  std::vector<Asn> asn_targets;            // empty unless specific ASNs listed
  std::vector<std::string> name_targets;   // set / AS-name references, upper-cased

  bool operator==(const PolicyRule&) const = default;
};

/// Policy attribute outside the supported grammar, kept for diagnostics.
struct UnparsedPolicy {
  int ord = 0;
  Direction direction = Direction::Import;
  std::string raw;

  bool operator==(const UnparsedPolicy&) const = default;
};

struct RemarkLine {
  int ord = 0;
  std::string text;

  bool operator==(const RemarkLine&) const = default;
};

struct AutNumObject {
  Asn asn = 0;
  std::string as_name;
  std::string registry;
  std::optional<Timestamp> last_modified;
  std::vector<PolicyRule> policies;             // source order
  std::vector<UnparsedPolicy> unparsed_policies;
  std::vector<RemarkLine> remarks;
  // field name -> raw values, for {changed-domain, org, mnt-by, admin, tech,
  // notify, as-name}. "changed" is reduced to the email domain.
  std::map<std::string, std::vector<std::string>> admin_fields;

  bool operator==(const AutNumObject&) const = default;
};

struct AsSetObject {
  std::string name;  // upper-cased
  std::string registry;
  std::optional<Timestamp> last_modified;
  // ASN members stored canonical ("AS1"), set/name members upper-cased.
  std::vector<std::string> members;
  std::vector<std::string> mnt_by;

  bool operator==(const AsSetObject&) const = default;
};

/// Deduped view of all registries: exactly one object per key, the one with
/// the latest last_modified across all inputs.
struct Corpus {
  std::map<Asn, AutNumObject> autnums;
  std::map<std::string, AsSetObject> assets;

  bool operator==(const Corpus&) const = default;
};

struct ParseStats {
  size_t blocks = 0;
  size_t autnums = 0;
  size_t assets = 0;
  size_t skipped_no_attribute = 0;   // block with no "attribute: value" first line
  size_t skipped_other_class = 0;    // route:, person:, ... not mined
  size_t skipped_bad_key = 0;        // e.g. "aut-num: banana"
  size_t unparsed_policies = 0;
  size_t malformed_lines = 0;        // junk lines inside a block
  size_t replaced_bytes = 0;         // invalid UTF-8 bytes replaced with '?'

  void merge(const ParseStats& other);
};

struct RawAttribute {
  std::string key;    // lower-cased
  std::string value;  // continuation-joined, comment-stripped, trimmed
};

struct RawBlock {
  std::vector<RawAttribute> attrs;
};

/// Incremental object splitter: push physical lines, blocks come out.
/// Blocks are maximal runs of non-blank lines; continuation lines (leading
/// whitespace or '+') join their attribute line; '#' comments are stripped;
/// invalid UTF-8 bytes are replaced, never fatal.
class ObjectSplitter {
 public:
  ObjectSplitter(std::function<void(RawBlock&&)> sink, ParseStats& stats);
  void push_line(std::string_view line);
  void finish();

 private:
  void flush();

  std::function<void(RawBlock&&)> sink_;
  ParseStats& stats_;
  RawBlock block_;
  bool block_bad_ = false;
  bool in_block_ = false;
};

std::vector<RawBlock> split_objects(std::string_view text, ParseStats& stats);

/// Parses one import/export attribute value. Returns the expanded rules, or
/// nullopt when the expression is outside the simple subset (the caller keeps
/// the raw text). `ord` is stamped on every rule.
std::optional<std::vector<PolicyRule>> parse_policy_line(Direction direction,
                                                         std::string_view value,
                                                         int ord = 0);

std::optional<AutNumObject> parse_autnum(const RawBlock& block,
                                         std::string_view registry,
                                         ParseStats& stats);

std::optional<AsSetObject> parse_asset(const RawBlock& block,
                                       std::string_view registry,
                                       ParseStats& stats);

/// Splits and parses one registry dump held in memory.
void parse_dump(std::string_view text, std::string_view registry,
                std::vector<AutNumObject>& autnums,
                std::vector<AsSetObject>& assets, ParseStats& stats);

/// True when `candidate` should replace `incumbent` under the dedup order:
/// dated beats undated, later date beats earlier, then lexicographically
/// greater registry, then greater serialized content (full determinism).
bool replaces(const AutNumObject& candidate, const AutNumObject& incumbent);
bool replaces(const AsSetObject& candidate, const AsSetObject& incumbent);

void merge_into(Corpus& corpus, AutNumObject&& obj);
void merge_into(Corpus& corpus, AsSetObject&& obj);
void merge_into(Corpus& corpus, Corpus&& other);

Corpus dedupe_latest(std::vector<AutNumObject>&& autnums,
                     std::vector<AsSetObject>&& assets);

}  // namespace irrtor
