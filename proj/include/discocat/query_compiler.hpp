#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "discocat/knowledge_base.hpp"
#include "discocat/questions.hpp"
#include "discocat/resolution.hpp"
#include "discocat/semantics.hpp"

namespace discocat {

struct EntityTerm {
  std::size_t entity = 0;
  friend bool operator==(const EntityTerm&, const EntityTerm&) = default;
};

struct VarTerm {
  std::size_t id = 0;
  friend bool operator==(const VarTerm&, const VarTerm&) = default;
};

using Term = std::variant<EntityTerm, VarTerm>;

struct TriplePattern {
  Term subject;
  std::size_t relation = 0;
  Term object;
  friend bool operator==(const TriplePattern&, const TriplePattern&) = default;
};

/// Conjunction of triple patterns, in sentence order.
struct BasicGraphPattern {
  std::vector<TriplePattern> patterns;

  /// One more than the largest variable id used.
  std::size_t num_vars() const;
  friend bool operator==(const BasicGraphPattern&,
                         const BasicGraphPattern&) = default;
};

struct QueryForm {
  enum class Kind { kAsk, kSelectAll, kSelect };
  Kind kind = Kind::kAsk;
  std::vector<std::size_t> vars;  // kSelect only

  friend bool operator==(const QueryForm&, const QueryForm&) = default;
};

struct CompiledQuery {
  BasicGraphPattern bgp;
  QueryForm form;
  /// Variable id of each pronoun slot (discourses only).
  std::vector<std::size_t> slot_vars;
};

/// One pattern per sentence plus one per relative clause; coreferent slots
/// share a variable. Pronoun-free discourses compile to ASK, the rest to
/// SELECT *.
CompiledQuery compile_discourse(const Discourse& d,
                                const DrsConstraints& constraints);

CompiledQuery compile_question(const Question& q);

inline constexpr std::string_view kDefaultPrefix = "http://example.org/kb#";

/// SPARQL 1.1 text: a PREFIX line, the query head, one two-space-indented
/// pattern per line and a closing brace. LF line endings.
std::string emit_sparql(const BasicGraphPattern& bgp, const QueryForm& form,
                        const Vocabulary& vocab,
                        std::string_view prefix = kDefaultPrefix);

/// Token rendered as a prefixed-name local part, escaping as needed.
std::string sparql_local_name(std::string_view token);

struct Bindings {
  std::vector<std::size_t> variables;
  /// Sorted, duplicate-free; entries are entity ordinals per variable.
  std::vector<std::vector<std::size_t>> rows;

  /// ASK result: one empty row when true, none when false.
  bool truth() const { return !rows.empty(); }
};

/// Reference evaluator: left-to-right index join over the stored triples.
Bindings evaluate_bgp(const BasicGraphPattern& bgp, const QueryForm& form,
                      const KnowledgeGraph& kg);

}  // namespace discocat
