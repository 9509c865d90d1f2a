#include "discocat/semantics.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <istream>

#include "discocat/error.hpp"
#include "grammar.hpp"
#include "text_util.hpp"

namespace discocat {

namespace {

constexpr std::array<std::string_view, 7> kPronouns = {
    "he", "him", "she", "her", "they", "them", "it"};

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

void require_compatible(const EncodingMatrix& enc, const VerbMatrix& verbs) {
  if (enc.semiring() != verbs.semiring()) {
    throw SemiringMismatch("encoding and verb matrix use different semirings");
  }
  if (enc.dim() != verbs.dim()) {
    throw DimensionMismatch("encoding dimension " + std::to_string(enc.dim()) +
                            " differs from verb space dimension " +
                            std::to_string(verbs.dim()));
  }
}

}  // namespace

bool NounPhrase::pronoun_free() const {
  if (is_pronoun()) return false;
  if (const auto* r = std::get_if<Restricted>(&node)) {
    return r->complement->pronoun_free();
  }
  return true;
}

NounPhrase entity_np(std::size_t e) { return NounPhrase{EntityRef{e}}; }

NounPhrase pronoun_np(std::size_t slot, std::string token) {
  return NounPhrase{PronounRef{slot, std::move(token)}};
}

NounPhrase restricted_np(std::size_t head, std::size_t verb,
                         NounPhrase complement) {
  return NounPhrase{Restricted{
      head, verb, std::make_shared<const NounPhrase>(std::move(complement))}};
}

void LemmaMap::add(std::string surface, std::string relation) {
  map_.insert_or_assign(std::move(surface), std::move(relation));
}

std::string_view LemmaMap::resolve(std::string_view surface) const {
  auto it = map_.find(surface);
  return it == map_.end() ? surface : std::string_view(it->second);
}

LemmaMap parse_lemmas(std::istream& in) {
  LemmaMap out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    detail::strip_cr(line);
    if (detail::is_blank_or_comment(line)) continue;
    const auto fields = detail::split(line, '\t');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw ParseError("expected 'surface<TAB>relation'", lineno);
    }
    out.add(fields[0], fields[1]);
  }
  return out;
}

LemmaMap load_lemmas(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open lemma file '" + path.string() + "'");
  return parse_lemmas(in);
}

bool is_pronoun_token(std::string_view token) {
  const std::string lower = lowercase(token);
  for (auto p : kPronouns) {
    if (lower == p) return true;
  }
  return false;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (auto& word : detail::split_whitespace(text)) {
    if (word.size() > 1 && (word.back() == '.' || word.back() == '?')) {
      std::string punct(1, word.back());
      word.pop_back();
      out.push_back(std::move(word));
      out.push_back(std::move(punct));
    } else {
      out.push_back(std::move(word));
    }
  }
  return out;
}

namespace detail {

GrammarReader::GrammarReader(std::string_view text, const Vocabulary& vocab,
                             const GrammarOptions& options)
    : tokens_(tokenize(text)), vocab_(vocab), options_(options) {}

const std::string& GrammarReader::peek() const {
  if (done()) fail("unexpected end of input");
  return tokens_[pos_];
}

bool GrammarReader::peek_is(std::string_view token) const {
  return !done() && tokens_[pos_] == token;
}

std::string GrammarReader::next() {
  std::string t = peek();
  ++pos_;
  return t;
}

void GrammarReader::expect(std::string_view token) {
  if (!peek_is(token)) fail("expected '" + std::string(token) + "'");
  ++pos_;
}

void GrammarReader::fail(const std::string& what) const {
  std::string where = done() ? "at end of input"
                             : "at token " + std::to_string(pos_ + 1) + " ('" +
                                   tokens_[pos_] + "')";
  throw ParseError(what + " " + where);
}

std::size_t GrammarReader::read_verb() {
  const std::string& surface = peek();
  const std::string_view lemma =
      options_.lemmas ? options_.lemmas->resolve(surface) : surface;
  if (auto v = vocab_.find_relation(lemma)) {
    ++pos_;
    return *v;
  }
  const std::string where =
      "token " + std::to_string(pos_ + 1) + " ('" + surface + "')";
  if (vocab_.find_entity(surface) || is_pronoun_token(surface) ||
      surface == "." || surface == "?" || surface == "that") {
    throw ParseError("expected a verb at " + where);
  }
  throw VocabularyError("unknown verb at " + where);
}

NounPhrase GrammarReader::read_noun_phrase(std::vector<std::string>& pronouns) {
  return read_np(&pronouns, 0);
}

NounPhrase GrammarReader::read_closed_noun_phrase() {
  return read_np(nullptr, 0);
}

NounPhrase GrammarReader::read_np(std::vector<std::string>* pronouns,
                                  std::size_t depth) {
  const std::string& token = peek();
  if (is_pronoun_token(token)) {
    if (pronouns == nullptr) {
      fail(depth == 0 ? "pronoun not allowed here"
                      : "pronoun not allowed inside a relative clause");
    }
    if (pos_ + 1 < tokens_.size() && tokens_[pos_ + 1] == "that") {
      fail("a relative clause cannot restrict a pronoun");
    }
    NounPhrase np = pronoun_np(pronouns->size(), token);
    pronouns->push_back(token);
    ++pos_;
    return np;
  }
  const auto e = vocab_.find_entity(token);
  if (!e) {
    if (vocab_.find_relation(token) || token == "." || token == "?" ||
        token == "that") {
      fail("expected a noun phrase");
    }
    throw VocabularyError("unknown entity at token " + std::to_string(pos_ + 1) +
                          " ('" + token + "')");
  }
  ++pos_;
  if (!peek_is("that")) return entity_np(*e);
  if (depth + 1 > options_.max_relative_depth) {
    fail("relative clause nesting deeper than " +
         std::to_string(options_.max_relative_depth));
  }
  ++pos_;
  const std::size_t verb = read_verb();
  NounPhrase complement = read_np(nullptr, depth + 1);
  return restricted_np(*e, verb, std::move(complement));
}

}  // namespace detail

Discourse parse_discourse(std::string_view text, const Vocabulary& vocab,
                          const GrammarOptions& options) {
  detail::GrammarReader reader(text, vocab, options);
  Discourse d;
  if (reader.done()) throw ParseError("empty discourse");
  while (!reader.done()) {
    AtomicSentence s;
    s.subject = reader.read_noun_phrase(d.pronouns);
    s.verb = reader.read_verb();
    s.object = reader.read_noun_phrase(d.pronouns);
    reader.expect(".");
    d.sentences.push_back(std::move(s));
  }
  return d;
}

Scalar contract_sentence(Semiring s, std::span<const Scalar> subject,
                         std::span<const Scalar> verb_block,
                         std::span<const Scalar> object) {
  const std::size_t n = subject.size();
  Scalar total = zero(s);
  for (std::size_t i = 0; i < n; ++i) {
    if (subject[i] == 0.0) continue;
    Scalar row = zero(s);
    for (std::size_t j = 0; j < n; ++j) {
      row = add(s, row, mul(s, verb_block[i * n + j], object[j]));
    }
    total = add(s, total, mul(s, subject[i], row));
  }
  return total;
}

std::vector<Scalar> noun_coordinates(const NounPhrase& np,
                                     const EncodingMatrix& enc,
                                     const VerbMatrix& verbs) {
  if (const auto* e = std::get_if<EntityRef>(&np.node)) {
    auto col = enc.column(e->entity);
    return {col.begin(), col.end()};
  }
  if (np.is_pronoun()) {
    throw InvalidArgument("noun_vector: pronoun '" +
                          std::get<PronounRef>(np.node).token +
                          "' has no fixed meaning");
  }
  require_compatible(enc, verbs);
  const auto& r = std::get<Restricted>(np.node);
  const Semiring s = enc.semiring();
  const std::size_t n = enc.dim();
  const std::vector<Scalar> complement =
      noun_coordinates(*r.complement, enc, verbs);
  auto head = enc.column(r.head);
  auto block = verbs.block(r.verb);
  std::vector<Scalar> out(n, zero(s));
  for (std::size_t i = 0; i < n; ++i) {
    Scalar y = zero(s);
    for (std::size_t j = 0; j < n; ++j) {
      y = add(s, y, mul(s, block[i * n + j], complement[j]));
    }
    out[i] = mul(s, head[i], y);
  }
  return out;
}

Matrix noun_vector(const NounPhrase& np, const EncodingMatrix& enc,
                   const VerbMatrix& verbs) {
  return state(noun_coordinates(np, enc, verbs), enc.semiring());
}

Matrix sentence_effect(const AtomicSentence& sentence,
                       const EncodingMatrix& enc, const VerbMatrix& verbs,
                       std::size_t budget) {
  require_compatible(enc, verbs);
  const Semiring s = enc.semiring();
  const std::size_t ne = enc.num_entities();
  auto block = verbs.block(sentence.verb);

  // Each open position ranges over the columns of E; a closed one is fixed.
  auto choices = [&](const NounPhrase& np) {
    std::vector<std::vector<Scalar>> out;
    if (np.is_pronoun()) {
      for (std::size_t e = 0; e < ne; ++e) {
        auto col = enc.column(e);
        out.emplace_back(col.begin(), col.end());
      }
    } else {
      out.push_back(noun_coordinates(np, enc, verbs));
    }
    return out;
  };
  const auto subjects = choices(sentence.subject);
  const auto objects = choices(sentence.object);

  Shape dom(sentence.arity(), ne);
  checked_product(dom, budget);
  std::vector<Scalar> entries;
  entries.reserve(subjects.size() * objects.size());
  for (const auto& sub : subjects) {
    for (const auto& obj : objects) {
      entries.push_back(contract_sentence(s, sub, block, obj));
    }
  }
  return Matrix(s, std::move(dom), {}, std::move(entries));
}

Matrix discourse_effect(const Discourse& d, const EncodingMatrix& enc,
                        const VerbMatrix& verbs, std::size_t budget) {
  checked_product(Shape(d.k(), enc.num_entities()), budget);
  Matrix acc = scalar(one(enc.semiring()), enc.semiring());
  for (const auto& sentence : d.sentences) {
    acc = tensor(acc, sentence_effect(sentence, enc, verbs, budget), budget);
  }
  return acc;
}

Scalar eval_sentence(const AtomicSentence& sentence, const EncodingMatrix& enc,
                     const VerbMatrix& verbs) {
  if (!sentence.subject.pronoun_free() || !sentence.object.pronoun_free()) {
    throw InvalidArgument("eval_sentence: sentence contains a pronoun");
  }
  require_compatible(enc, verbs);
  const auto sub = noun_coordinates(sentence.subject, enc, verbs);
  const auto obj = noun_coordinates(sentence.object, enc, verbs);
  return contract_sentence(enc.semiring(), sub, verbs.block(sentence.verb),
                           obj);
}

Scalar eval_discourse(const Discourse& d, const EncodingMatrix& enc,
                      const VerbMatrix& verbs) {
  const Semiring s = enc.semiring();
  Scalar acc = one(s);
  for (const auto& sentence : d.sentences) {
    acc = mul(s, acc, eval_sentence(sentence, enc, verbs));
  }
  return acc;
}

}  // namespace discocat
