#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "discocat/semantics.hpp"

namespace discocat {

/// Assignment of an entity to each pronoun slot.
struct MatchingFunction {
  std::vector<std::size_t> assignment;

  std::size_t size() const noexcept { return assignment.size(); }
  std::size_t operator()(std::size_t slot) const { return assignment.at(slot); }

  friend bool operator==(const MatchingFunction&,
                         const MatchingFunction&) = default;
  friend auto operator<=>(const MatchingFunction&,
                          const MatchingFunction&) = default;
};

/// The admissible matchings D(d): a partition of the slots into coreference
/// classes, each optionally restricted to a candidate set of entities.
///
/// Classes are ordered by their smallest slot. Candidate restrictions stack:
/// a class may only take entities allowed by every restriction placed on any
/// of its members.
class DrsConstraints {
 public:
  /// Every slot in its own class, every entity allowed.
  explicit DrsConstraints(std::size_t k = 0);

  /// Puts all of `slots` in one class.
  void corefer(const std::vector<std::size_t>& slots);
  /// Restricts the class containing `slot` to `entities`.
  void restrict_candidates(std::size_t slot, std::vector<std::size_t> entities);

  std::size_t k() const noexcept { return class_of_.size(); }
  std::vector<std::vector<std::size_t>> classes() const;
  /// Index into classes() of the class holding `slot`.
  std::size_t class_of(std::size_t slot) const;
  /// Sorted candidates of class `c` over an |E|-entity vocabulary. May be
  /// empty.
  std::vector<std::size_t> candidates(std::size_t c,
                                      std::size_t num_entities) const;

 private:
  void renumber();

  std::vector<std::size_t> class_of_;  // slot -> class index
  std::vector<std::optional<std::vector<std::size_t>>> restrictions_;  // slot
};

/// Lines `corefer: s1 s2 ...` and `candidates: slot e1 e2 ...`. Slots are
/// pronoun indices; entities are vocabulary tokens.
DrsConstraints parse_constraints(std::istream& in, std::size_t k,
                                 const Vocabulary& vocab);
DrsConstraints load_constraints(const std::filesystem::path& path,
                                std::size_t k, const Vocabulary& vocab);

/// Calls `visit` on every admissible matching in lexicographic order of the
/// class entities (class 0 most significant). Throws InvalidArgument when a
/// class has no candidates.
void for_each_matching(const DrsConstraints& constraints,
                       std::size_t num_entities,
                       const std::function<void(const MatchingFunction&)>& visit);

std::vector<MatchingFunction> enumerate_matchings(
    const DrsConstraints& constraints, std::size_t num_entities,
    std::size_t budget = kDefaultBudget);

/// A(d, mu): per-sentence scalars with pronouns bound to E|mu(slot)>,
/// multiplied in sentence order.
Scalar resolution_scalar(const Discourse& d, const MatchingFunction& mu,
                         const EncodingMatrix& enc, const VerbMatrix& verbs);

struct ScoredMatching {
  MatchingFunction matching;
  Scalar score = 0.0;
};

/// Every admissible matching with its score, in enumeration order.
std::vector<ScoredMatching> score_matchings(const Discourse& d,
                                            const DrsConstraints& constraints,
                                            const EncodingMatrix& enc,
                                            const VerbMatrix& verbs,
                                            std::size_t budget = kDefaultBudget);

struct Resolution {
  MatchingFunction best;
  Scalar score = 0.0;
  /// Filled only when requested.
  std::vector<ScoredMatching> scored;
};

/// argmax of A(d, mu) over the admissible matchings; ties go to the first
/// matching in enumeration order.
///
/// Sentences touching one class become per-class score tables and sentences
/// touching two classes join those classes into a component, so the search
/// costs the sum over components rather than the product over classes.
Resolution resolve_argmax(const Discourse& d, const DrsConstraints& constraints,
                          const EncodingMatrix& enc, const VerbMatrix& verbs,
                          bool include_scored = false,
                          std::size_t budget = kDefaultBudget);

/// A spider used by the matching process: entity `entity` of the store is
/// copied to `outputs` wires (0 outputs discards it).
struct SpiderUse {
  std::size_t entity = 0;
  std::size_t outputs = 0;
};

struct MatchingProcessTrace {
  Scalar value = 0.0;
  std::vector<SpiderUse> spiders;
  std::size_t swaps = 0;
};

/// Evaluates d(!mu)(!E) structurally: each stored entity is copied by a
/// delta^{1,i} onto the i slots that reference it (or discarded by
/// delta^{1,0}), the copies are routed to slot order with symmetries, and
/// the discourse effect is applied. Materializes |E|^k.
MatchingProcessTrace matching_process_trace(const Discourse& d,
                                            const MatchingFunction& mu,
                                            const EncodingMatrix& enc,
                                            const VerbMatrix& verbs,
                                            std::size_t budget = kDefaultBudget);

Scalar matching_process_eval(const Discourse& d, const MatchingFunction& mu,
                             const EncodingMatrix& enc, const VerbMatrix& verbs,
                             std::size_t budget = kDefaultBudget);

/// The entity store !E = (x)_e |e> : 1 -> |E|^{|E|}.
Matrix entity_store(std::size_t num_entities, Semiring s,
                    std::size_t budget = kDefaultBudget);

/// The matching process !mu : |E|^{|E|} -> |E|^k built from copy/discard
/// spiders followed by symmetries.
Matrix matching_process(const MatchingFunction& mu, std::size_t num_entities,
                        Semiring s, std::size_t budget = kDefaultBudget);

/// Largest vocabulary for which dense_theorem_check materializes !E.
inline constexpr std::size_t kDenseStoreMaxEntities = 4;

/// (A(d, mu), d . !mu . !E) with the store and process fully materialized.
std::pair<Scalar, Scalar> dense_theorem_check(const Discourse& d,
                                              const MatchingFunction& mu,
                                              const EncodingMatrix& enc,
                                              const VerbMatrix& verbs);

}  // namespace discocat
