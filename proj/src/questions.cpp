#include "discocat/questions.hpp"

#include <algorithm>
#include <numeric>

#include "discocat/error.hpp"
#include "grammar.hpp"

namespace discocat {

Question parse_question(std::string_view text, const Vocabulary& vocab,
                        const GrammarOptions& options) {
  detail::GrammarReader reader(text, vocab, options);
  Question q;
  reader.expect("who");
  if (reader.peek_is("does")) {
    reader.next();
    NounPhrase subject = reader.read_closed_noun_phrase();
    const std::size_t verb = reader.read_verb();
    q.form = ObjectWhom{std::move(subject), verb};
  } else {
    const std::size_t verb = reader.read_verb();
    if (reader.peek_is("whom")) {
      reader.next();
      q.form = WhoWhom{verb};
    } else {
      q.form = SubjectWho{verb, reader.read_closed_noun_phrase()};
    }
  }
  reader.expect("?");
  if (!reader.done()) reader.fail("unexpected trailing input");
  return q;
}

bool looks_like_question(std::string_view text) {
  const auto tokens = tokenize(text);
  return !tokens.empty() && tokens.back() == "?";
}

Matrix question_effect(const Question& q, const EncodingMatrix& enc,
                       const VerbMatrix& verbs, std::size_t budget) {
  const Semiring s = enc.semiring();
  const std::size_t ne = enc.num_entities();
  std::vector<Scalar> entries;
  Shape dom{ne};
  if (const auto* sw = std::get_if<SubjectWho>(&q.form)) {
    const auto obj = noun_coordinates(sw->object, enc, verbs);
    auto block = verbs.block(sw->verb);
    for (std::size_t a = 0; a < ne; ++a) {
      entries.push_back(contract_sentence(s, enc.column(a), block, obj));
    }
  } else if (const auto* ow = std::get_if<ObjectWhom>(&q.form)) {
    // Snake-rewritten form: the answer feeds the object wire directly.
    const auto sub = noun_coordinates(ow->subject, enc, verbs);
    auto block = verbs.block(ow->verb);
    for (std::size_t a = 0; a < ne; ++a) {
      entries.push_back(contract_sentence(s, sub, block, enc.column(a)));
    }
  } else {
    const auto& ww = std::get<WhoWhom>(q.form);
    dom = {ne, ne};
    checked_product(dom, budget);
    auto block = verbs.block(ww.verb);
    for (std::size_t a = 0; a < ne; ++a) {
      for (std::size_t b = 0; b < ne; ++b) {
        entries.push_back(
            contract_sentence(s, enc.column(a), block, enc.column(b)));
      }
    }
  }
  return Matrix(s, std::move(dom), {}, std::move(entries));
}

Matrix object_question_via_cap(const ObjectWhom& q, const EncodingMatrix& enc,
                               const VerbMatrix& verbs, std::size_t budget) {
  const Semiring s = enc.semiring();
  const std::size_t n = enc.dim();
  const Matrix words[] = {noun_vector(q.subject, enc, verbs),
                          verbs.encode(q.verb), cap(n, s), enc.matrix()};
  const Matrix layout = tensor_all(words, budget);
  const Matrix cups[] = {cup(n, s), cup(n, s), cup(n, s)};
  const Matrix grammar = tensor_all(cups, budget);
  return compose(layout, grammar, budget);
}

std::vector<RankedAnswer> rank_answers(const Question& q,
                                       const EncodingMatrix& enc,
                                       const VerbMatrix& verbs) {
  if (q.two_variable()) {
    throw InvalidArgument(
        "rank_answers: two-variable questions have no single ranking");
  }
  const Matrix eff = question_effect(q, enc, verbs);
  std::vector<RankedAnswer> out;
  out.reserve(eff.cols());
  for (std::size_t e = 0; e < eff.cols(); ++e) out.push_back({e, eff.at(0, e)});
  std::stable_sort(out.begin(), out.end(),
                   [](const RankedAnswer& a, const RankedAnswer& b) {
                     return a.score > b.score;
                   });
  return out;
}

Scalar ask(std::string_view sentence_text, const Vocabulary& vocab,
           const EncodingMatrix& enc, const VerbMatrix& verbs,
           const GrammarOptions& options) {
  const Discourse d = parse_discourse(sentence_text, vocab, options);
  if (d.k() != 0) {
    throw InvalidArgument("ask: sentence contains the pronoun '" +
                          d.pronouns.front() + "'");
  }
  return eval_discourse(d, enc, verbs);
}

}  // namespace discocat
