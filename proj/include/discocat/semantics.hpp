#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "discocat/encoding.hpp"
#include "discocat/knowledge_base.hpp"
#include "discocat/matrix.hpp"

namespace discocat {

struct NounPhrase;

struct EntityRef {
  std::size_t entity = 0;
};

/// An anaphoric position. Slots count pronouns in reading order across the
/// whole discourse.
struct PronounRef {
  std::size_t slot = 0;
  std::string token;
};

/// "head that verb complement": the head entity restricted to those that
/// stand in `verb` to the complement.
struct Restricted {
  std::size_t head = 0;
  std::size_t verb = 0;
  std::shared_ptr<const NounPhrase> complement;
};

struct NounPhrase {
  std::variant<EntityRef, PronounRef, Restricted> node;

  bool is_pronoun() const {
    return std::holds_alternative<PronounRef>(node);
  }
  bool pronoun_free() const;
};

NounPhrase entity_np(std::size_t e);
NounPhrase pronoun_np(std::size_t slot, std::string token = "it");
NounPhrase restricted_np(std::size_t head, std::size_t verb,
                         NounPhrase complement);

struct AtomicSentence {
  NounPhrase subject;
  std::size_t verb = 0;
  NounPhrase object;

  /// Number of open wires on each side: 1 for a pronoun, 0 otherwise.
  std::size_t subject_arity() const { return subject.is_pronoun() ? 1 : 0; }
  std::size_t object_arity() const { return object.is_pronoun() ? 1 : 0; }
  std::size_t arity() const { return subject_arity() + object_arity(); }
};

/// A list of atomic sentences. `pronouns[slot]` is the surface token of each
/// anaphoric position.
struct Discourse {
  std::vector<AtomicSentence> sentences;
  std::vector<std::string> pronouns;

  std::size_t k() const noexcept { return pronouns.size(); }
};

/// Maps inflected verb forms onto relation tokens, e.g. love -> loves.
class LemmaMap {
 public:
  void add(std::string surface, std::string relation);
  /// The relation token for `surface`, or `surface` itself when unmapped.
  std::string_view resolve(std::string_view surface) const;
  bool empty() const noexcept { return map_.empty(); }

 private:
  std::map<std::string, std::string, std::less<>> map_;
};

/// `surface<TAB>relation` lines, `#` comments allowed.
LemmaMap parse_lemmas(std::istream& in);
LemmaMap load_lemmas(const std::filesystem::path& path);

struct GrammarOptions {
  /// Maximum relative-clause nesting; "boys that tell jokes" is depth 1.
  std::size_t max_relative_depth = 1;
  const LemmaMap* lemmas = nullptr;
};

bool is_pronoun_token(std::string_view token);

/// Splits text into grammar tokens. A trailing "." or "?" glued to a word is
/// split off as its own token.
std::vector<std::string> tokenize(std::string_view text);

/// discourse := sentence+ ; sentence := NP verb NP "." ;
/// NP := ENTITY | PRONOUN | ENTITY "that" verb NP.
Discourse parse_discourse(std::string_view text, const Vocabulary& vocab,
                          const GrammarOptions& options = {});

/// Pronoun-free phrase as a noun-space state 1 -> n. A relative clause is
/// the coordinate-wise product of the head vector with the verb applied to
/// the complement.
Matrix noun_vector(const NounPhrase& np, const EncodingMatrix& enc,
                   const VerbMatrix& verbs);

/// Same as noun_vector, as raw coordinates.
std::vector<Scalar> noun_coordinates(const NounPhrase& np,
                                     const EncodingMatrix& enc,
                                     const VerbMatrix& verbs);

/// sum_i sub_i sum_j block_ij obj_j for an n x n verb block. This is the
/// single contraction every sentence score reduces to.
Scalar contract_sentence(Semiring s, std::span<const Scalar> subject,
                         std::span<const Scalar> verb_block,
                         std::span<const Scalar> object);

/// Effect |E|^{a+b} -> 1; the subject wire precedes the object wire.
Matrix sentence_effect(const AtomicSentence& sentence,
                       const EncodingMatrix& enc, const VerbMatrix& verbs,
                       std::size_t budget = kDefaultBudget);

/// Tensor of sentence effects, |E|^k -> 1 with wires in slot order.
Matrix discourse_effect(const Discourse& d, const EncodingMatrix& enc,
                        const VerbMatrix& verbs,
                        std::size_t budget = kDefaultBudget);

/// Scalar meaning of a pronoun-free sentence.
Scalar eval_sentence(const AtomicSentence& sentence, const EncodingMatrix& enc,
                     const VerbMatrix& verbs);

/// Semiring product of the sentence scalars of a pronoun-free discourse.
Scalar eval_discourse(const Discourse& d, const EncodingMatrix& enc,
                      const VerbMatrix& verbs);

}  // namespace discocat
