#include <gtest/gtest.h>

#include <algorithm>

#include "discocat/error.hpp"
#include "discocat/questions.hpp"
#include "support.hpp"

namespace discocat {
namespace {

using testing::data_path;
using testing::Rng;

struct Fixture {
  LoadedGraph graph;
  EncodingMatrix enc;
  VerbMatrix verbs;

  static Fixture identity(LoadedGraph g, Semiring s) {
    EncodingMatrix enc = identity_encoding(g.vocab, s);
    VerbMatrix verbs = build_verb_matrix(enc, g.kg, g.vocab);
    return {std::move(g), std::move(enc), std::move(verbs)};
  }
};

TEST(ParseQuestion, Forms) {
  const LoadedGraph g = parse_kg_text("alice\tloves\tbob\n");
  const auto& v = g.vocab;
  const Question s = parse_question("who loves bob ?", v);
  ASSERT_TRUE(std::holds_alternative<SubjectWho>(s.form));
  EXPECT_EQ(std::get<EntityRef>(std::get<SubjectWho>(s.form).object.node).entity,
            v.entity("bob"));
  const Question o = parse_question("who does alice loves?", v);
  ASSERT_TRUE(std::holds_alternative<ObjectWhom>(o.form));
  const Question w = parse_question("who loves whom ?", v);
  EXPECT_TRUE(w.two_variable());
  EXPECT_THROW(parse_question("who loves bob", v), ParseError);
  EXPECT_THROW(parse_question("what loves bob ?", v), ParseError);
  EXPECT_THROW(parse_question("who loves him ?", v), ParseError);
  EXPECT_TRUE(looks_like_question("who loves bob?"));
  EXPECT_FALSE(looks_like_question("alice loves bob ."));
}

TEST(QuestionEffect, IdentityEncodingIsMembership) {
  const Fixture f =
      Fixture::identity(parse_kg_text("alice\tloves\tbob\n"), Semiring::kBoolean);
  const auto& v = f.graph.vocab;
  const std::size_t alice = v.entity("alice");
  const std::size_t bob = v.entity("bob");
  const std::size_t loves = v.relation("loves");

  const Matrix subj =
      question_effect({SubjectWho{loves, entity_np(bob)}}, f.enc, f.verbs);
  EXPECT_EQ(subj.at(0, alice), 1.0);
  EXPECT_EQ(subj.at(0, bob), 0.0);
  const Matrix obj =
      question_effect({ObjectWhom{entity_np(alice), loves}}, f.enc, f.verbs);
  EXPECT_EQ(obj.at(0, bob), 1.0);
  EXPECT_EQ(obj.at(0, alice), 0.0);
  const Matrix both = question_effect({WhoWhom{loves}}, f.enc, f.verbs);
  ASSERT_EQ(both.dom(), (Shape{2, 2}));
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      EXPECT_EQ(both.at(0, a * 2 + b),
                f.graph.kg.contains({a, loves, b}) ? 1.0 : 0.0);
    }
  }
}

TEST(QuestionEffect, AllVariantsMatchMembership) {
  Rng rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    const Fixture f =
        Fixture::identity(testing::random_graph(rng, 5, 2), Semiring::kReal);
    const auto& kg = f.graph.kg;
    for (std::size_t v = 0; v < 2; ++v) {
      for (std::size_t x = 0; x < 5; ++x) {
        const Matrix subj = question_effect({SubjectWho{v, entity_np(x)}}, f.enc, f.verbs);
        const Matrix obj = question_effect({ObjectWhom{entity_np(x), v}}, f.enc, f.verbs);
        for (std::size_t a = 0; a < 5; ++a) {
          EXPECT_EQ(subj.at(0, a), kg_contains(kg, {a, v, x}, Semiring::kReal));
          EXPECT_EQ(obj.at(0, a), kg_contains(kg, {x, v, a}, Semiring::kReal));
        }
      }
    }
  }
}

TEST(QuestionEffect, CapRewriteInvariance) {
  Rng rng(52);
  for (Semiring s : {Semiring::kBoolean, Semiring::kReal, Semiring::kFuzzy}) {
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t ne = testing::uniform_index(rng, 1, 4);
      const std::size_t n = testing::uniform_index(rng, 1, 3);
      const LoadedGraph g = testing::random_graph(rng, ne, 2);
      const EncodingMatrix enc = testing::random_encoding(rng, ne, n, s);
      const VerbMatrix verbs = build_verb_matrix(enc, g.kg, g.vocab);
      const ObjectWhom q{entity_np(testing::uniform_index(rng, 0, ne - 1)),
                         testing::uniform_index(rng, 0, 1)};
      const Matrix direct = question_effect({q}, enc, verbs);
      const Matrix via_cap = object_question_via_cap(q, enc, verbs);
      EXPECT_TRUE(direct.approx_equal(via_cap, 1e-12));
    }
  }
}

TEST(Rank, BooleanToy) {
  const Fixture f =
      Fixture::identity(load_kg(data_path("toy.tsv")), Semiring::kBoolean);
  const auto& v = f.graph.vocab;
  const auto ranking = rank_answers(parse_question("who loves bob ?", v), f.enc, f.verbs);
  ASSERT_EQ(ranking.size(), v.num_entities());
  EXPECT_EQ(ranking[0], (RankedAnswer{v.entity("alice"), 1.0}));
  for (std::size_t i = 1; i < ranking.size(); ++i) EXPECT_EQ(ranking[i].score, 0.0);
}

TEST(Rank, RealValuedOrder) {
  const LoadedGraph g = load_kg(data_path("rank2.tsv"));
  const EncodingMatrix enc =
      load_embeddings(data_path("rank2_embeddings.tsv"), g.vocab);
  const VerbMatrix verbs = build_verb_matrix(enc, g.kg, g.vocab);
  // score(c) = <E c, E y> <E x, E x> with E x = (1, 0), E y = (0.25, 0.5).
  const auto ranking =
      rank_answers(parse_question("who r x ?", g.vocab), enc, verbs);
  ASSERT_EQ(ranking.size(), 2u);
  EXPECT_EQ(ranking[0], (RankedAnswer{g.vocab.entity("y"), 0.3125}));
  EXPECT_EQ(ranking[1], (RankedAnswer{g.vocab.entity("x"), 0.25}));
}

TEST(Rank, TiesKeepVocabularyOrder) {
  const Fixture f =
      Fixture::identity(load_kg(data_path("toy.tsv")), Semiring::kReal);
  const auto& v = f.graph.vocab;
  const auto ranking =
      rank_answers(parse_question("who tell alice ?", v), f.enc, f.verbs);
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    EXPECT_EQ(ranking[i].entity, i);
    EXPECT_EQ(ranking[i].score, 0.0);
  }
  EXPECT_THROW(rank_answers(parse_question("who loves whom ?", v), f.enc, f.verbs),
               InvalidArgument);
}

TEST(Rank, PermutationMatchingEffect) {
  Rng rng(53);
  for (Semiring s : {Semiring::kBoolean, Semiring::kReal, Semiring::kFuzzy}) {
    for (int trial = 0; trial < 20; ++trial) {
      const LoadedGraph g = testing::random_graph(rng, 5, 2);
      const EncodingMatrix enc = testing::random_encoding(rng, 5, 3, s);
      const VerbMatrix verbs = build_verb_matrix(enc, g.kg, g.vocab);
      const Question q{SubjectWho{1, entity_np(2)}};
      const Matrix eff = question_effect(q, enc, verbs);
      const auto ranking = rank_answers(q, enc, verbs);
      std::vector<bool> seen(5, false);
      for (std::size_t i = 0; i < ranking.size(); ++i) {
        seen[ranking[i].entity] = true;
        EXPECT_EQ(ranking[i].score, eff.at(0, ranking[i].entity));
        if (i) {
          EXPECT_GE(ranking[i - 1].score, ranking[i].score);
          if (ranking[i - 1].score == ranking[i].score) {
            EXPECT_LT(ranking[i - 1].entity, ranking[i].entity);
          }
        }
      }
      EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }));
    }
  }
}

TEST(Ask, Membership) {
  const Fixture f =
      Fixture::identity(load_kg(data_path("toy.tsv")), Semiring::kBoolean);
  const auto& v = f.graph.vocab;
  EXPECT_EQ(ask("alice loves bob .", v, f.enc, f.verbs), 1.0);
  EXPECT_EQ(ask("bob loves alice .", v, f.enc, f.verbs), 0.0);
  EXPECT_EQ(ask("alice loves boys that tell jokes .", v, f.enc, f.verbs), 1.0);
  EXPECT_THROW(ask("alice loves him .", v, f.enc, f.verbs), InvalidArgument);
}

}  // namespace
}  // namespace discocat
