#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "discocat/semantics.hpp"

namespace discocat::detail {

// Recursive-descent reader over tokenize() output, shared by the discourse
// and question grammars.
class GrammarReader {
 public:
  GrammarReader(std::string_view text, const Vocabulary& vocab,
                const GrammarOptions& options);

  bool done() const { return pos_ >= tokens_.size(); }
  const std::string& peek() const;
  bool peek_is(std::string_view token) const;
  std::string next();
  void expect(std::string_view token);

  // Relation ordinal of the next token, through the lemma map.
  std::size_t read_verb();
  // NP; pronouns take the next slot and are recorded in `pronouns`.
  NounPhrase read_noun_phrase(std::vector<std::string>& pronouns);
  // NP that may not contain a pronoun.
  NounPhrase read_closed_noun_phrase();

  [[noreturn]] void fail(const std::string& what) const;

 private:
  NounPhrase read_np(std::vector<std::string>* pronouns, std::size_t depth);

  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
  const Vocabulary& vocab_;
  GrammarOptions options_;
};

}  // namespace discocat::detail
