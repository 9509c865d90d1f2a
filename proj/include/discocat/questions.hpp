#pragma once

#include <cstddef>
#include <string_view>
#include <variant>
#include <vector>

#include "discocat/semantics.hpp"

namespace discocat {

/// "who VERB NP ?" — the answer fills the subject.
struct SubjectWho {
  std::size_t verb = 0;
  NounPhrase object;
};

/// "who does NP VERB ?" — the answer fills the object.
struct ObjectWhom {
  NounPhrase subject;
  std::size_t verb = 0;
};

/// "who VERB whom ?" — both positions open, subject wire first.
struct WhoWhom {
  std::size_t verb = 0;
};

struct Question {
  std::variant<SubjectWho, ObjectWhom, WhoWhom> form;

  bool two_variable() const { return std::holds_alternative<WhoWhom>(form); }
};

/// Accepts exactly `who VERB NP ?`, `who does NP VERB ?` and
/// `who VERB whom ?`. Embedded noun phrases must be pronoun-free.
Question parse_question(std::string_view text, const Vocabulary& vocab,
                        const GrammarOptions& options = {});

/// True when the text looks like a question (ends in "?").
bool looks_like_question(std::string_view text);

/// |E| -> 1 for single-variable questions, |E| (x) |E| -> 1 for WhoWhom.
Matrix question_effect(const Question& q, const EncodingMatrix& enc,
                       const VerbMatrix& verbs,
                       std::size_t budget = kDefaultBudget);

/// The object question drawn with "does" as a cap:
/// (cup (x) cup (x) cup)(E|s> (x) R|v> (x) cap (x) E), materialized densely.
/// Equal to question_effect(ObjectWhom) by the snake equations.
Matrix object_question_via_cap(const ObjectWhom& q, const EncodingMatrix& enc,
                               const VerbMatrix& verbs,
                               std::size_t budget = kDefaultBudget);

struct RankedAnswer {
  std::size_t entity = 0;
  Scalar score = 0.0;

  friend bool operator==(const RankedAnswer&, const RankedAnswer&) = default;
};

/// Every entity, by descending score; ties keep vocabulary order.
std::vector<RankedAnswer> rank_answers(const Question& q,
                                       const EncodingMatrix& enc,
                                       const VerbMatrix& verbs);

/// Truth value of a pronoun-free sentence (or k = 0 discourse).
Scalar ask(std::string_view sentence_text, const Vocabulary& vocab,
           const EncodingMatrix& enc, const VerbMatrix& verbs,
           const GrammarOptions& options = {});

}  // namespace discocat
