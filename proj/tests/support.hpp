#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "discocat/discocat.hpp"

namespace discocat::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(DISCOCAT_TEST_DATA_DIR) / name;
}

using Rng = std::mt19937_64;

inline std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) {
  return std::bernoulli_distribution(p)(rng);
}

/// Valid scalar for the semiring; about a fifth of draws are zero so that
/// sparse paths get exercised.
inline Scalar random_scalar(Semiring s, Rng& rng) {
  if (s == Semiring::kBoolean) return coin(rng) ? 1.0 : 0.0;
  if (coin(rng, 0.2)) return 0.0;
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline Matrix random_matrix(Semiring s, Shape dom, Shape cod, Rng& rng) {
  const std::size_t count = shape_product(dom) * shape_product(cod);
  std::vector<Scalar> e(count);
  for (auto& x : e) x = random_scalar(s, rng);
  return Matrix(s, std::move(dom), std::move(cod), std::move(e));
}

/// Exact for Boolean and fuzzy, relative tolerance for reals.
inline bool close(Semiring s, Scalar a, Scalar b, double rel_tol) {
  return scalars_equal(s, a, b, rel_tol);
}

/// Vocabulary e0..e{ne-1}, r0..r{nr-1} with each possible triple present
/// with probability `density`.
inline LoadedGraph random_graph(Rng& rng, std::size_t ne, std::size_t nr,
                                double density = 0.3) {
  LoadedGraph g;
  for (std::size_t i = 0; i < ne; ++i) g.vocab.add_entity("e" + std::to_string(i));
  for (std::size_t i = 0; i < nr; ++i) g.vocab.add_relation("r" + std::to_string(i));
  for (std::size_t s = 0; s < ne; ++s) {
    for (std::size_t v = 0; v < nr; ++v) {
      for (std::size_t o = 0; o < ne; ++o) {
        if (coin(rng, density)) g.kg.insert({s, v, o});
      }
    }
  }
  return g;
}

inline EncodingMatrix random_encoding(Rng& rng, std::size_t ne, std::size_t n,
                                      Semiring s) {
  return EncodingMatrix(random_matrix(s, {ne}, {n}, rng));
}

/// Random discourse text over a random_graph vocabulary: `sentences`
/// sentences, at most `max_pronouns` pronouns, occasional relative clauses.
inline std::string random_discourse_text(Rng& rng, const Vocabulary& vocab,
                                         std::size_t sentences,
                                         std::size_t max_pronouns,
                                         double relative_p = 0.2) {
  static const char* kPronouns[] = {"he", "him", "she", "her", "it",
                                    "they", "them"};
  std::size_t used = 0;
  auto entity = [&] {
    return vocab.entity_name(uniform_index(rng, 0, vocab.num_entities() - 1));
  };
  auto relation = [&] {
    return vocab.relation_name(
        uniform_index(rng, 0, vocab.num_relations() - 1));
  };
  auto np = [&] {
    if (used < max_pronouns && coin(rng, 0.5)) {
      ++used;
      return std::string(kPronouns[uniform_index(rng, 0, 6)]);
    }
    if (coin(rng, relative_p)) {
      return entity() + " that " + relation() + " " + entity();
    }
    return entity();
  };
  std::string text;
  for (std::size_t i = 0; i < sentences; ++i) {
    if (!text.empty()) text += ' ';
    const std::string subject = np();
    const std::string verb = relation();
    text += subject + " " + verb + " " + np() + " .";
  }
  return text;
}

/// Random partition of the k slots.
inline DrsConstraints random_constraints(Rng& rng, std::size_t k) {
  DrsConstraints c(k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      if (coin(rng, 0.3)) c.corefer({a, b});
    }
  }
  return c;
}

// --- Independent oracles -------------------------------------------------

/// g . f by the textbook triple loop over at().
inline Matrix naive_compose(const Matrix& f, const Matrix& g) {
  const Semiring s = f.semiring();
  std::vector<Scalar> out(g.rows() * f.cols(), zero(s));
  for (std::size_t r = 0; r < g.rows(); ++r) {
    for (std::size_t c = 0; c < f.cols(); ++c) {
      Scalar acc = zero(s);
      for (std::size_t k = 0; k < f.rows(); ++k) {
        acc = add(s, acc, mul(s, g.at(r, k), f.at(k, c)));
      }
      out[r * f.cols() + c] = acc;
    }
  }
  return Matrix(s, {f.cols()}, {g.rows()}, std::move(out));
}

/// Noun phrase drawn as a diagram: "that" is the three-legged spider state
/// and every contraction is a cup.
inline Matrix diagram_noun(const NounPhrase& np, const EncodingMatrix& enc,
                           const VerbMatrix& verbs) {
  const Semiring s = enc.semiring();
  const std::size_t n = enc.dim();
  if (const auto* e = std::get_if<EntityRef>(&np.node)) {
    return enc.encode(e->entity);
  }
  const auto& r = std::get<Restricted>(np.node);
  const Matrix c = diagram_noun(*r.complement, enc, verbs);
  const Matrix y =
      compose(tensor(verbs.encode(r.verb), c), tensor(identity(n, s), cup(n, s)));
  const Matrix parts[] = {enc.encode(r.head), spider(0, 3, n, s), y};
  const Matrix wiring[] = {cup(n, s), identity(n, s), cup(n, s)};
  return compose(tensor_all(parts), tensor_all(wiring));
}

/// G (sub (x) R|v> (x) obj) with G = cup (x) cup; an open side is E itself.
inline Matrix diagram_sentence(const AtomicSentence& st,
                               const EncodingMatrix& enc,
                               const VerbMatrix& verbs) {
  const Semiring s = enc.semiring();
  const std::size_t n = enc.dim();
  auto side = [&](const NounPhrase& np) {
    return np.is_pronoun() ? enc.matrix() : diagram_noun(np, enc, verbs);
  };
  const Matrix parts[] = {side(st.subject), verbs.encode(st.verb),
                          side(st.object)};
  return compose(tensor_all(parts), tensor(cup(n, s), cup(n, s)));
}

/// d applied to one-hot entity states in every slot, via the dense effect.
inline Scalar dense_plug(const Matrix& effect, const std::vector<std::size_t>& mu,
                         std::size_t ne) {
  const Semiring s = effect.semiring();
  Matrix st = scalar(one(s), s);
  for (std::size_t e : mu) st = tensor(st, one_hot_state(e, ne, s));
  return scalar_value(compose(st, effect));
}

/// All of E^k admissible under `c`, odometer with slot 0 most significant,
/// filtered by class constancy and candidate membership.
inline std::vector<std::vector<std::size_t>> brute_matchings(
    const DrsConstraints& c, std::size_t ne) {
  const std::size_t k = c.k();
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> mu(k, 0);
  while (true) {
    bool ok = true;
    for (std::size_t a = 0; a < k && ok; ++a) {
      const auto cands = c.candidates(c.class_of(a), ne);
      ok = std::find(cands.begin(), cands.end(), mu[a]) != cands.end();
      for (std::size_t b = a + 1; b < k && ok; ++b) {
        if (c.class_of(a) == c.class_of(b)) ok = mu[a] == mu[b];
      }
    }
    if (ok) out.push_back(mu);
    std::size_t i = k;
    while (i > 0 && ++mu[i - 1] == ne) mu[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

}  // namespace discocat::testing
