#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "discocat/matrix.hpp"

namespace discocat {

/// Ordered entity and relation tokens with reverse lookup. Ordinals are
/// contiguous from 0 in insertion order; a token may not be both an entity
/// and a relation.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> entities,
             std::vector<std::string> relations);

  /// Returns the ordinal of `token`, inserting it if new.
  std::size_t add_entity(std::string_view token);
  std::size_t add_relation(std::string_view token);

  std::optional<std::size_t> find_entity(std::string_view token) const;
  std::optional<std::size_t> find_relation(std::string_view token) const;

  /// Throw VocabularyError when the token is unknown.
  std::size_t entity(std::string_view token) const;
  std::size_t relation(std::string_view token) const;

  const std::vector<std::string>& entities() const noexcept {
    return entities_;
  }
  const std::vector<std::string>& relations() const noexcept {
    return relations_;
  }
  std::size_t num_entities() const noexcept { return entities_.size(); }
  std::size_t num_relations() const noexcept { return relations_.size(); }

  const std::string& entity_name(std::size_t i) const;
  const std::string& relation_name(std::size_t i) const;

 private:
  std::vector<std::string> entities_;
  std::vector<std::string> relations_;
  std::unordered_map<std::string, std::size_t> entity_index_;
  std::unordered_map<std::string, std::size_t> relation_index_;
};

struct Triple {
  std::size_t s = 0;
  std::size_t v = 0;
  std::size_t o = 0;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept;
};

struct PairHash {
  std::size_t operator()(
      const std::pair<std::size_t, std::size_t>& p) const noexcept;
};

/// Deduplicated triple set with lookup indices by (s,v), (v,o) and v.
///
/// Triples keep their first-insertion order, which is the order used by
/// every accumulation over a relation.
class KnowledgeGraph {
 public:
  /// Returns false when the triple was already present.
  bool insert(const Triple& t);

  bool contains(const Triple& t) const { return set_.count(t) != 0; }

  const std::vector<Triple>& triples() const noexcept { return triples_; }
  std::size_t size() const noexcept { return triples_.size(); }

  /// Objects o with (s, v, o) stored, in insertion order.
  const std::vector<std::size_t>& objects(std::size_t s, std::size_t v) const;
  /// Subjects s with (s, v, o) stored, in insertion order.
  const std::vector<std::size_t>& subjects(std::size_t v, std::size_t o) const;
  /// Positions into triples() of every triple with relation v.
  const std::vector<std::size_t>& with_relation(std::size_t v) const;

 private:
  std::vector<Triple> triples_;
  std::unordered_set<Triple, TripleHash> set_;
  std::unordered_map<std::pair<std::size_t, std::size_t>,
                     std::vector<std::size_t>, PairHash>
      by_sv_;
  std::unordered_map<std::pair<std::size_t, std::size_t>,
                     std::vector<std::size_t>, PairHash>
      by_vo_;
  std::unordered_map<std::size_t, std::vector<std::size_t>> by_v_;
};

struct LoadedGraph {
  Vocabulary vocab;
  KnowledgeGraph kg;
};

/// Reads `subject<TAB>verb<TAB>object` lines. A line holding a single token
/// declares an entity without asserting any triple. `#` lines are comments
/// and blank lines are skipped. Vocabulary order is first appearance.
LoadedGraph parse_kg(std::istream& in);
LoadedGraph parse_kg_text(std::string_view text);
LoadedGraph load_kg(const std::filesystem::path& path);

/// Writes the graph back in the file format: every entity declared in
/// ordinal order, then one triple per line.
void write_kg(std::ostream& out, const Vocabulary& vocab,
              const KnowledgeGraph& kg);

/// The effect <K| : |E| (x) |R| (x) |E| -> 1. Test oracle; dense.
Matrix kg_effect(const KnowledgeGraph& kg, const Vocabulary& vocab,
                 Semiring s, std::size_t budget = kDefaultBudget);

/// <K|t> by hash lookup.
Scalar kg_contains(const KnowledgeGraph& kg, const Triple& t, Semiring s);

/// |s> (x) |v> (x) |o>.
Matrix triple_state(const Triple& t, const Vocabulary& vocab, Semiring s);

}  // namespace discocat
