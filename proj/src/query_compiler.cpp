#include "discocat/query_compiler.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <optional>
#include <string_view>

#include "discocat/error.hpp"

namespace discocat {

std::size_t BasicGraphPattern::num_vars() const {
  std::size_t n = 0;
  for (const auto& p : patterns) {
    for (const Term* t : {&p.subject, &p.object}) {
      if (const auto* v = std::get_if<VarTerm>(t)) n = std::max(n, v->id + 1);
    }
  }
  return n;
}

namespace {

// Head term of a pronoun-free phrase; relative clauses append their patterns.
Term closed_term(const NounPhrase& np, std::vector<TriplePattern>& extra) {
  if (const auto* e = std::get_if<EntityRef>(&np.node)) {
    return EntityTerm{e->entity};
  }
  const auto& r = std::get<Restricted>(np.node);
  std::vector<TriplePattern> nested;
  Term complement = closed_term(*r.complement, nested);
  extra.push_back({EntityTerm{r.head}, r.verb, complement});
  extra.insert(extra.end(), nested.begin(), nested.end());
  return EntityTerm{r.head};
}

}  // namespace

CompiledQuery compile_discourse(const Discourse& d,
                                const DrsConstraints& constraints) {
  if (constraints.k() != d.k()) {
    throw InvalidArgument("constraints cover " +
                          std::to_string(constraints.k()) +
                          " slots but the discourse has " +
                          std::to_string(d.k()) + " pronouns");
  }
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  const std::size_t num_classes = constraints.classes().size();
  std::vector<std::size_t> class_var(num_classes, kUnset);
  std::size_t next_var = 0;

  CompiledQuery out;
  out.slot_vars.assign(d.k(), kUnset);
  auto term_of = [&](const NounPhrase& np, std::vector<TriplePattern>& extra) {
    if (const auto* p = std::get_if<PronounRef>(&np.node)) {
      const std::size_t c = constraints.class_of(p->slot);
      if (class_var[c] == kUnset) class_var[c] = next_var++;
      out.slot_vars[p->slot] = class_var[c];
      return Term{VarTerm{class_var[c]}};
    }
    return closed_term(np, extra);
  };
  for (const auto& s : d.sentences) {
    std::vector<TriplePattern> extra;
    Term subject = term_of(s.subject, extra);
    Term object = term_of(s.object, extra);
    out.bgp.patterns.push_back({subject, s.verb, object});
    out.bgp.patterns.insert(out.bgp.patterns.end(), extra.begin(), extra.end());
  }
  out.form.kind =
      d.k() == 0 ? QueryForm::Kind::kAsk : QueryForm::Kind::kSelectAll;
  return out;
}

CompiledQuery compile_question(const Question& q) {
  CompiledQuery out;
  std::vector<TriplePattern> extra;
  out.form.kind = QueryForm::Kind::kSelect;
  if (const auto* sw = std::get_if<SubjectWho>(&q.form)) {
    Term object = closed_term(sw->object, extra);
    out.bgp.patterns.push_back({VarTerm{0}, sw->verb, object});
    out.form.vars = {0};
  } else if (const auto* ow = std::get_if<ObjectWhom>(&q.form)) {
    Term subject = closed_term(ow->subject, extra);
    out.bgp.patterns.push_back({subject, ow->verb, VarTerm{0}});
    out.form.vars = {0};
  } else {
    const auto& ww = std::get<WhoWhom>(q.form);
    out.bgp.patterns.push_back({VarTerm{0}, ww.verb, VarTerm{1}});
    out.form.vars = {0, 1};
  }
  out.bgp.patterns.insert(out.bgp.patterns.end(), extra.begin(), extra.end());
  return out;
}

std::string sparql_local_name(std::string_view token) {
  static constexpr std::string_view kEscapable = "~.-!$&'()*+,;=/?#@%_";
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (std::size_t i = 0; i < token.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(token[i]);
    const bool first = i == 0;
    const bool last = i + 1 == token.size();
    if (std::isalnum(c) || c >= 0x80 || c == '_' || c == ':' ||
        (c == '-' && !first) || (c == '.' && !first && !last)) {
      out += static_cast<char>(c);
    } else if (kEscapable.find(static_cast<char>(c)) != std::string_view::npos) {
      out += '\\';
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

std::string emit_sparql(const BasicGraphPattern& bgp, const QueryForm& form,
                        const Vocabulary& vocab, std::string_view prefix) {
  if (prefix.empty()) throw InvalidArgument("empty prefix IRI");
  for (char ch : prefix) {
    const unsigned char c = static_cast<unsigned char>(ch);
    if (c <= 0x20 || std::string_view("<>\"{}|^`\\").find(ch) !=
                         std::string_view::npos) {
      throw InvalidArgument("invalid character in prefix IRI '" +
                            std::string(prefix) + "'");
    }
  }
  auto render = [&](const Term& t) {
    if (const auto* v = std::get_if<VarTerm>(&t)) {
      return "?v" + std::to_string(v->id);
    }
    return ":" + sparql_local_name(
                     vocab.entity_name(std::get<EntityTerm>(t).entity));
  };

  std::string out = "PREFIX : <" + std::string(prefix) + ">\n";
  switch (form.kind) {
    case QueryForm::Kind::kAsk:
      out += "ASK WHERE {\n";
      break;
    case QueryForm::Kind::kSelectAll:
      out += "SELECT * WHERE {\n";
      break;
    case QueryForm::Kind::kSelect:
      out += "SELECT";
      for (std::size_t v : form.vars) out += " ?v" + std::to_string(v);
      out += " WHERE {\n";
      break;
  }
  for (const auto& p : bgp.patterns) {
    out += "  " + render(p.subject) + " :" +
           sparql_local_name(vocab.relation_name(p.relation)) + " " +
           render(p.object) + " .\n";
  }
  out += "}\n";
  return out;
}

Bindings evaluate_bgp(const BasicGraphPattern& bgp, const QueryForm& form,
                      const KnowledgeGraph& kg) {
  constexpr std::size_t kFree = std::numeric_limits<std::size_t>::max();
  const std::size_t nv = bgp.num_vars();
  using Row = std::vector<std::size_t>;
  std::vector<Row> rows{Row(nv, kFree)};

  auto value = [](const Term& t, const Row& row) -> std::size_t {
    if (const auto* e = std::get_if<EntityTerm>(&t)) return e->entity;
    return row[std::get<VarTerm>(t).id];
  };
  auto var_of = [](const Term& t) -> std::optional<std::size_t> {
    if (const auto* v = std::get_if<VarTerm>(&t)) return v->id;
    return std::nullopt;
  };

  for (const auto& p : bgp.patterns) {
    std::vector<Row> next;
    for (const Row& row : rows) {
      const std::size_t s = value(p.subject, row);
      const std::size_t o = value(p.object, row);
      if (s != kFree && o != kFree) {
        if (kg.contains({s, p.relation, o})) next.push_back(row);
      } else if (s != kFree) {
        for (std::size_t obj : kg.objects(s, p.relation)) {
          Row r = row;
          r[*var_of(p.object)] = obj;
          next.push_back(std::move(r));
        }
      } else if (o != kFree) {
        for (std::size_t sub : kg.subjects(p.relation, o)) {
          Row r = row;
          r[*var_of(p.subject)] = sub;
          next.push_back(std::move(r));
        }
      } else {
        const std::size_t vs = *var_of(p.subject);
        const std::size_t vo = *var_of(p.object);
        for (std::size_t pos : kg.with_relation(p.relation)) {
          const Triple& t = kg.triples()[pos];
          if (vs == vo && t.s != t.o) continue;
          Row r = row;
          r[vs] = t.s;
          r[vo] = t.o;
          next.push_back(std::move(r));
        }
      }
    }
    rows = std::move(next);
  }

  Bindings out;
  switch (form.kind) {
    case QueryForm::Kind::kAsk:
      break;
    case QueryForm::Kind::kSelectAll:
      for (std::size_t v = 0; v < nv; ++v) out.variables.push_back(v);
      break;
    case QueryForm::Kind::kSelect:
      for (std::size_t v : form.vars) {
        if (v >= nv) {
          throw InvalidArgument("SELECT variable ?v" + std::to_string(v) +
                                " does not occur in the pattern");
        }
      }
      out.variables = form.vars;
      break;
  }
  for (const Row& row : rows) {
    Row projected;
    for (std::size_t v : out.variables) projected.push_back(row[v]);
    out.rows.push_back(std::move(projected));
  }
  std::sort(out.rows.begin(), out.rows.end());
  out.rows.erase(std::unique(out.rows.begin(), out.rows.end()), out.rows.end());
  return out;
}

}  // namespace discocat
