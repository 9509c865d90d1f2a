#include "discocat/knowledge_base.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "discocat/error.hpp"
#include "text_util.hpp"

namespace discocat {

namespace {

const std::vector<std::size_t>& empty_list() {
  static const std::vector<std::size_t> kEmpty;
  return kEmpty;
}

std::size_t mix(std::size_t h, std::size_t x) {
  return h ^ (x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> entities,
                       std::vector<std::string> relations) {
  for (const auto& e : entities) {
    if (find_entity(e)) throw VocabularyError("duplicate entity '" + e + "'");
    add_entity(e);
  }
  for (const auto& r : relations) {
    if (find_relation(r)) {
      throw VocabularyError("duplicate relation '" + r + "'");
    }
    add_relation(r);
  }
}

std::size_t Vocabulary::add_entity(std::string_view token) {
  if (token.empty()) throw VocabularyError("empty entity token");
  if (auto i = find_entity(token)) return *i;
  if (find_relation(token)) {
    throw VocabularyError("token '" + std::string(token) +
                          "' is used both as a relation and as an entity");
  }
  entities_.emplace_back(token);
  entity_index_.emplace(std::string(token), entities_.size() - 1);
  return entities_.size() - 1;
}

std::size_t Vocabulary::add_relation(std::string_view token) {
  if (token.empty()) throw VocabularyError("empty relation token");
  if (auto i = find_relation(token)) return *i;
  if (find_entity(token)) {
    throw VocabularyError("token '" + std::string(token) +
                          "' is used both as an entity and as a relation");
  }
  relations_.emplace_back(token);
  relation_index_.emplace(std::string(token), relations_.size() - 1);
  return relations_.size() - 1;
}

std::optional<std::size_t> Vocabulary::find_entity(
    std::string_view token) const {
  auto it = entity_index_.find(std::string(token));
  if (it == entity_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Vocabulary::find_relation(
    std::string_view token) const {
  auto it = relation_index_.find(std::string(token));
  if (it == relation_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Vocabulary::entity(std::string_view token) const {
  if (auto i = find_entity(token)) return *i;
  throw VocabularyError("unknown entity '" + std::string(token) + "'");
}

std::size_t Vocabulary::relation(std::string_view token) const {
  if (auto i = find_relation(token)) return *i;
  throw VocabularyError("unknown relation '" + std::string(token) + "'");
}

const std::string& Vocabulary::entity_name(std::size_t i) const {
  if (i >= entities_.size()) {
    throw IndexOutOfRange("entity ordinal " + std::to_string(i) +
                          " out of range");
  }
  return entities_[i];
}

const std::string& Vocabulary::relation_name(std::size_t i) const {
  if (i >= relations_.size()) {
    throw IndexOutOfRange("relation ordinal " + std::to_string(i) +
                          " out of range");
  }
  return relations_[i];
}

std::size_t TripleHash::operator()(const Triple& t) const noexcept {
  return mix(mix(std::hash<std::size_t>{}(t.s), t.v), t.o);
}

std::size_t PairHash::operator()(
    const std::pair<std::size_t, std::size_t>& p) const noexcept {
  return mix(std::hash<std::size_t>{}(p.first), p.second);
}

bool KnowledgeGraph::insert(const Triple& t) {
  if (!set_.insert(t).second) return false;
  triples_.push_back(t);
  by_sv_[{t.s, t.v}].push_back(t.o);
  by_vo_[{t.v, t.o}].push_back(t.s);
  by_v_[t.v].push_back(triples_.size() - 1);
  return true;
}

const std::vector<std::size_t>& KnowledgeGraph::objects(std::size_t s,
                                                        std::size_t v) const {
  auto it = by_sv_.find({s, v});
  return it == by_sv_.end() ? empty_list() : it->second;
}

const std::vector<std::size_t>& KnowledgeGraph::subjects(std::size_t v,
                                                         std::size_t o) const {
  auto it = by_vo_.find({v, o});
  return it == by_vo_.end() ? empty_list() : it->second;
}

const std::vector<std::size_t>& KnowledgeGraph::with_relation(
    std::size_t v) const {
  auto it = by_v_.find(v);
  return it == by_v_.end() ? empty_list() : it->second;
}

LoadedGraph parse_kg(std::istream& in) {
  LoadedGraph out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    detail::strip_cr(line);
    if (detail::is_blank_or_comment(line)) continue;
    const auto fields = detail::split(line, '\t');
    if (fields.size() == 1) {
      // A lone token declares an entity that may occur in no triple.
      const std::string token(detail::trim(fields[0]));
      if (detail::has_space(token)) {
        throw ParseError("tokens must be whitespace-free", lineno);
      }
      try {
        out.vocab.add_entity(token);
      } catch (const VocabularyError& e) {
        throw ParseError(e.what(), lineno);
      }
      continue;
    }
    if (fields.size() != 3) {
      throw ParseError("expected 3 tab-separated fields, found " +
                           std::to_string(fields.size()),
                       lineno);
    }
    if (fields[0].empty() && fields[2].empty()) {
      // A blank subject and object declare a relation.
      if (fields[1].empty() || detail::has_space(fields[1])) {
        throw ParseError("tokens must be non-empty and whitespace-free",
                         lineno);
      }
      try {
        out.vocab.add_relation(fields[1]);
      } catch (const VocabularyError& e) {
        throw ParseError(e.what(), lineno);
      }
      continue;
    }
    for (const auto& f : fields) {
      if (f.empty() || detail::has_space(f)) {
        throw ParseError("tokens must be non-empty and whitespace-free",
                         lineno);
      }
    }
    try {
      Triple t;
      t.s = out.vocab.add_entity(fields[0]);
      t.v = out.vocab.add_relation(fields[1]);
      t.o = out.vocab.add_entity(fields[2]);
      out.kg.insert(t);
    } catch (const VocabularyError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return out;
}

LoadedGraph parse_kg_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_kg(in);
}

LoadedGraph load_kg(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open knowledge graph '" + path.string() + "'");
  return parse_kg(in);
}

void write_kg(std::ostream& out, const Vocabulary& vocab,
              const KnowledgeGraph& kg) {
  for (const auto& e : vocab.entities()) out << e << '\n';
  for (const auto& r : vocab.relations()) out << '\t' << r << "\t\n";
  for (const Triple& t : kg.triples()) {
    out << vocab.entity_name(t.s) << '\t' << vocab.relation_name(t.v) << '\t'
        << vocab.entity_name(t.o) << '\n';
  }
}

Matrix kg_effect(const KnowledgeGraph& kg, const Vocabulary& vocab,
                 Semiring s, std::size_t budget) {
  const std::size_t ne = vocab.num_entities();
  const std::size_t nr = vocab.num_relations();
  Shape dom{ne, nr, ne};
  checked_product(dom, budget);
  std::vector<Scalar> e(shape_product(dom), zero(s));
  for (const Triple& t : kg.triples()) {
    e[(t.s * nr + t.v) * ne + t.o] = one(s);
  }
  return Matrix(s, std::move(dom), {}, std::move(e));
}

Scalar kg_contains(const KnowledgeGraph& kg, const Triple& t, Semiring s) {
  return kg.contains(t) ? one(s) : zero(s);
}

Matrix triple_state(const Triple& t, const Vocabulary& vocab, Semiring s) {
  const std::size_t ne = vocab.num_entities();
  const std::size_t nr = vocab.num_relations();
  const Matrix parts[] = {one_hot_state(t.s, ne, s), one_hot_state(t.v, nr, s),
                          one_hot_state(t.o, ne, s)};
  return tensor_all(parts);
}

}  // namespace discocat
