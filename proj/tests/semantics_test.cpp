#include <gtest/gtest.h>

#include <sstream>

#include "discocat/error.hpp"
#include "discocat/semantics.hpp"
#include "support.hpp"

namespace discocat {
namespace {

using testing::data_path;
using testing::Rng;

struct World {
  LoadedGraph graph;
  EncodingMatrix enc;
  VerbMatrix verbs;
};

World identity_world(LoadedGraph g, Semiring s) {
  EncodingMatrix enc = identity_encoding(g.vocab, s);
  VerbMatrix verbs = build_verb_matrix(enc, g.kg, g.vocab);
  return {std::move(g), std::move(enc), std::move(verbs)};
}

World random_world(Rng& rng, std::size_t ne, std::size_t nr, std::size_t n,
                   Semiring s) {
  LoadedGraph g = testing::random_graph(rng, ne, nr);
  EncodingMatrix enc = testing::random_encoding(rng, ne, n, s);
  VerbMatrix verbs = build_verb_matrix(enc, g.kg, g.vocab);
  return {std::move(g), std::move(enc), std::move(verbs)};
}

std::vector<Scalar> entries_of(const Matrix& m) {
  return {m.entries().begin(), m.entries().end()};
}

TEST(Tokenize, SplitsPunctuation) {
  EXPECT_EQ(tokenize("Spinoza influenced him. He  discovered calculus."),
            (std::vector<std::string>{"Spinoza", "influenced", "him", ".",
                                      "He", "discovered", "calculus", "."}));
  EXPECT_EQ(tokenize("who loves bob?"),
            (std::vector<std::string>{"who", "loves", "bob", "?"}));
}

TEST(Parse, PhilosophersDiscourse) {
  const LoadedGraph g = load_kg(data_path("philosophers.tsv"));
  const Discourse d =
      parse_discourse("spinoza influenced him . he discovered calculus .", g.vocab);
  ASSERT_EQ(d.sentences.size(), 2u);
  EXPECT_EQ(d.k(), 2u);
  EXPECT_EQ(d.pronouns, (std::vector<std::string>{"him", "he"}));
  EXPECT_EQ(std::get<PronounRef>(d.sentences[0].object.node).slot, 0u);
  EXPECT_EQ(std::get<PronounRef>(d.sentences[1].subject.node).slot, 1u);
  EXPECT_EQ(d.sentences[0].arity(), 1u);
}

TEST(Parse, PronounFreeAndRelative) {
  const LoadedGraph g = load_kg(data_path("toy.tsv"));
  const auto& v = g.vocab;
  EXPECT_EQ(parse_discourse("alice loves bob .", v).k(), 0u);
  const Discourse d = parse_discourse("alice loves boys that tell jokes .", v);
  ASSERT_EQ(d.sentences.size(), 1u);
  const auto& r = std::get<Restricted>(d.sentences[0].object.node);
  EXPECT_EQ(r.head, v.entity("boys"));
  EXPECT_EQ(r.verb, v.relation("tell"));
  EXPECT_EQ(std::get<EntityRef>(r.complement->node).entity, v.entity("jokes"));
}

TEST(Parse, Errors) {
  const LoadedGraph g = load_kg(data_path("toy.tsv"));
  const auto& v = g.vocab;
  EXPECT_THROW(parse_discourse("alice loves carol .", v), VocabularyError);
  EXPECT_THROW(parse_discourse("alice hates bob .", v), VocabularyError);
  EXPECT_THROW(parse_discourse("alice loves bob", v), ParseError);
  EXPECT_THROW(parse_discourse("alice bob loves .", v), ParseError);
  EXPECT_THROW(parse_discourse("", v), ParseError);
  EXPECT_THROW(parse_discourse("he that tell jokes loves bob .", v), ParseError);
  EXPECT_THROW(parse_discourse("alice loves boys that tell it .", v),
               ParseError);
  EXPECT_THROW(
      parse_discourse("alice loves boys that tell bob that tell jokes .", v),
      ParseError);
  GrammarOptions deep;
  deep.max_relative_depth = 2;
  EXPECT_NO_THROW(parse_discourse(
      "alice loves boys that tell bob that tell jokes .", v, deep));
}

TEST(Parse, Lemmas) {
  const LoadedGraph g = load_kg(data_path("toy.tsv"));
  const LemmaMap lemmas = load_lemmas(data_path("toy_lemmas.tsv"));
  GrammarOptions options;
  options.lemmas = &lemmas;
  const Discourse d = parse_discourse("alice love boys that tells jokes .",
                                      g.vocab, options);
  EXPECT_EQ(d.sentences[0].verb, g.vocab.relation("loves"));
}

TEST(NounVector, AllMenAreMortal) {
  const World w = identity_world(load_kg(data_path("men.tsv")), Semiring::kReal);
  const auto& v = w.graph.vocab;
  const NounPhrase men = entity_np(v.entity("men"));
  const NounPhrase phrase = restricted_np(v.entity("men"), v.relation("are"),
                                          entity_np(v.entity("mortal")));
  EXPECT_EQ(noun_vector(men, w.enc, w.verbs), w.enc.encode(v.entity("men")));
  EXPECT_EQ(noun_vector(phrase, w.enc, w.verbs), w.enc.encode(v.entity("men")));

  Vocabulary bare = v;
  const World empty = identity_world({bare, KnowledgeGraph{}}, Semiring::kReal);
  EXPECT_EQ(noun_vector(phrase, empty.enc, empty.verbs),
            state(std::vector<Scalar>(2, 0.0), Semiring::kReal));
}

TEST(NounVector, PronounRejected) {
  const World w = identity_world(load_kg(data_path("men.tsv")), Semiring::kReal);
  EXPECT_THROW(noun_vector(pronoun_np(0), w.enc, w.verbs), InvalidArgument);
}

TEST(NounVector, MatchesThatSpiderDiagram) {
  Rng rng(41);
  for (Semiring s : {Semiring::kBoolean, Semiring::kReal, Semiring::kFuzzy}) {
    for (int trial = 0; trial < 40; ++trial) {
      const World w = random_world(rng, 4, 2, testing::uniform_index(rng, 1, 3), s);
      const NounPhrase np = restricted_np(
          testing::uniform_index(rng, 0, 3), testing::uniform_index(rng, 0, 1),
          entity_np(testing::uniform_index(rng, 0, 3)));
      EXPECT_TRUE(noun_vector(np, w.enc, w.verbs)
                      .approx_equal(testing::diagram_noun(np, w.enc, w.verbs),
                                    1e-12));
    }
  }
}

TEST(NounVector, RelativeClauseIntersects) {
  Rng rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    const World w = identity_world(testing::random_graph(rng, 5, 2), Semiring::kReal);
    for (std::size_t h = 0; h < 5; ++h) {
      const NounPhrase np =
          restricted_np(h, testing::uniform_index(rng, 0, 1),
                        entity_np(testing::uniform_index(rng, 0, 4)));
      const auto restricted = noun_coordinates(np, w.enc, w.verbs);
      const auto head = noun_coordinates(entity_np(h), w.enc, w.verbs);
      for (std::size_t i = 0; i < head.size(); ++i) {
        EXPECT_LE(restricted[i], head[i]);
      }
    }
  }
}

TEST(Sentence, MembershipReduction) {
  Rng rng(43);
  for (Semiring s : {Semiring::kBoolean, Semiring::kReal}) {
    for (int trial = 0; trial < 20; ++trial) {
      const World w = identity_world(testing::random_graph(rng, 6, 3), s);
      for (std::size_t a = 0; a < 6; ++a) {
        for (std::size_t r = 0; r < 3; ++r) {
          for (std::size_t b = 0; b < 6; ++b) {
            const AtomicSentence st{entity_np(a), r, entity_np(b)};
            EXPECT_EQ(eval_sentence(st, w.enc, w.verbs),
                      kg_contains(w.graph.kg, {a, r, b}, s));
          }
        }
      }
    }
  }
}

TEST(Sentence, ToyExamples) {
  const World w = identity_world(load_kg(data_path("toy.tsv")), Semiring::kReal);
  const auto& v = w.graph.vocab;
  const Discourse yes = parse_discourse("alice loves bob .", v);
  const Discourse no = parse_discourse("bob loves alice .", v);
  EXPECT_EQ(eval_sentence(yes.sentences[0], w.enc, w.verbs), 1.0);
  EXPECT_EQ(eval_sentence(no.sentences[0], w.enc, w.verbs), 0.0);
  EXPECT_THROW(eval_sentence(parse_discourse("alice loves him .", v).sentences[0],
                             w.enc, w.verbs),
               InvalidArgument);
}

TEST(Sentence, AnaphoricEffectIsMembership) {
  const World w =
      identity_world(load_kg(data_path("philosophers.tsv")), Semiring::kBoolean);
  const auto& v = w.graph.vocab;
  const Discourse d = parse_discourse("spinoza influenced him .", v);
  const Matrix eff = sentence_effect(d.sentences[0], w.enc, w.verbs);
  ASSERT_EQ(eff.dom(), (Shape{5}));
  for (std::size_t e = 0; e < 5; ++e) {
    EXPECT_EQ(eff.at(0, e),
              kg_contains(w.graph.kg,
                          {v.entity("spinoza"), v.relation("influenced"), e},
                          Semiring::kBoolean));
  }
  EXPECT_EQ(discourse_effect(d, w.enc, w.verbs), eff);
}

TEST(Sentence, MatchesDenseDiagram) {
  Rng rng(44);
  for (Semiring s : {Semiring::kBoolean, Semiring::kReal, Semiring::kFuzzy}) {
    for (int trial = 0; trial < 40; ++trial) {
      const World w = random_world(rng, testing::uniform_index(rng, 1, 4), 2,
                                   testing::uniform_index(rng, 1, 3), s);
      const Discourse d = parse_discourse(
          testing::random_discourse_text(rng, w.graph.vocab, 1, 2, 0.4),
          w.graph.vocab);
      const AtomicSentence& st = d.sentences[0];
      const Matrix eff = sentence_effect(st, w.enc, w.verbs);
      const Matrix oracle = testing::diagram_sentence(st, w.enc, w.verbs);
      EXPECT_TRUE(entries_of(eff).size() == entries_of(oracle).size());
      EXPECT_TRUE(eff.reshaped(oracle.dom(), oracle.cod())
                      .approx_equal(oracle, 1e-12));
    }
  }
}

// Wires: alice, loves_s, loves_o, boys, that_a, that_mid, that_b, tell_s,
// tell_o, jokes. Inner cups close the relative clause and leave alice,
// loves_s, loves_o, that_mid for the outer sentence cups.
Matrix example_two_diagram(const World& w) {
  const Semiring s = w.enc.semiring();
  const std::size_t n = w.enc.dim();
  const auto& v = w.graph.vocab;
  const Matrix clause[] = {w.enc.encode(v.entity("boys")), spider(0, 3, n, s),
                           w.verbs.encode(v.relation("tell")),
                           w.enc.encode(v.entity("jokes"))};
  const Matrix clause_wiring[] = {cup(n, s), identity(n, s), cup(n, s), cup(n, s)};
  const Matrix np = compose(tensor_all(clause), tensor_all(clause_wiring));
  const Matrix words[] = {w.enc.encode(v.entity("alice")),
                          w.verbs.encode(v.relation("loves")), np};
  return compose(tensor_all(words), tensor(cup(n, s), cup(n, s)));
}

TEST(Sentence, AliceLovesBoysThatTellJokes) {
  Rng rng(45);
  const LoadedGraph toy = load_kg(data_path("toy.tsv"));
  for (Semiring s : {Semiring::kBoolean, Semiring::kReal, Semiring::kFuzzy}) {
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = testing::uniform_index(rng, 1, 3);
      EncodingMatrix enc = testing::random_encoding(rng, 4, n, s);
      VerbMatrix verbs = build_verb_matrix(enc, toy.kg, toy.vocab);
      const World w{toy, std::move(enc), std::move(verbs)};
      const Discourse d =
          parse_discourse("alice loves boys that tell jokes .", w.graph.vocab);
      const Scalar value = eval_discourse(d, w.enc, w.verbs);
      EXPECT_TRUE(testing::close(s, value,
                                 scalar_value(example_two_diagram(w)), 1e-12));
    }
  }
  const World crisp = identity_world(toy, Semiring::kBoolean);
  const Discourse d =
      parse_discourse("alice loves boys that tell jokes .", crisp.graph.vocab);
  EXPECT_EQ(eval_discourse(d, crisp.enc, crisp.verbs), 1.0);
  EXPECT_EQ(scalar_value(example_two_diagram(crisp)), 1.0);
}

TEST(Discourse, FactorizesOverSentences) {
  Rng rng(46);
  for (int trial = 0; trial < 30; ++trial) {
    const World w = random_world(rng, 4, 2, 3, Semiring::kReal);
    const Discourse d = parse_discourse(
        testing::random_discourse_text(rng, w.graph.vocab, 3, 0), w.graph.vocab);
    Scalar product = 1.0;
    for (const auto& st : d.sentences) product *= eval_sentence(st, w.enc, w.verbs);
    EXPECT_EQ(eval_discourse(d, w.enc, w.verbs), product);
    EXPECT_EQ(scalar_value(discourse_effect(d, w.enc, w.verbs)), product);
  }
}

// Pronouns replaced textually by entity names, in reading order.
std::string substitute(const std::string& text, const std::vector<std::size_t>& mu,
                       const Vocabulary& vocab) {
  std::string out;
  std::size_t slot = 0;
  for (const auto& tok : tokenize(text)) {
    if (!out.empty()) out += ' ';
    out += is_pronoun_token(tok) ? vocab.entity_name(mu[slot++]) : tok;
  }
  return out;
}

TEST(Discourse, AnaphoricClosure) {
  Rng rng(47);
  for (Semiring s : {Semiring::kBoolean, Semiring::kReal}) {
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t ne = testing::uniform_index(rng, 1, 4);
      const World w = random_world(rng, ne, 2, 2, s);
      const std::string text =
          testing::random_discourse_text(rng, w.graph.vocab, 2, 3);
      const Discourse d = parse_discourse(text, w.graph.vocab);
      const Matrix eff = discourse_effect(d, w.enc, w.verbs);
      for (const auto& mu : testing::brute_matchings(DrsConstraints(d.k()), ne)) {
        const Discourse closed =
            parse_discourse(substitute(text, mu, w.graph.vocab), w.graph.vocab);
        EXPECT_EQ(testing::dense_plug(eff, mu, ne),
                  eval_discourse(closed, w.enc, w.verbs))
            << text;
      }
    }
  }
}

TEST(Discourse, PhilosophersEffectEntries) {
  const World w =
      identity_world(load_kg(data_path("philosophers.tsv")), Semiring::kReal);
  const auto& v = w.graph.vocab;
  const Discourse d =
      parse_discourse("spinoza influenced him . he discovered calculus .", v);
  const Matrix eff = discourse_effect(d, w.enc, w.verbs);
  ASSERT_EQ(eff.dom(), (Shape{5, 5}));
  const std::size_t spinoza = v.entity("spinoza");
  const std::size_t calculus = v.entity("calculus");
  for (std::size_t x = 0; x < 5; ++x) {
    for (std::size_t y = 0; y < 5; ++y) {
      const Scalar expected =
          kg_contains(w.graph.kg, {spinoza, v.relation("influenced"), x},
                      Semiring::kReal) *
          kg_contains(w.graph.kg, {y, v.relation("discovered"), calculus},
                      Semiring::kReal);
      EXPECT_EQ(eff.at(0, x * 5 + y), expected);
    }
  }
}

}  // namespace
}  // namespace discocat
