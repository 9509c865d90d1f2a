#include "discocat/resolution.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <set>

#include "discocat/error.hpp"
#include "text_util.hpp"

namespace discocat {

// --- Constraints ---------------------------------------------------------

DrsConstraints::DrsConstraints(std::size_t k)
    : class_of_(k), restrictions_(k) {
  std::iota(class_of_.begin(), class_of_.end(), std::size_t{0});
}

void DrsConstraints::renumber() {
  std::vector<std::size_t> relabel(class_of_.size(),
                                   std::numeric_limits<std::size_t>::max());
  std::size_t next = 0;
  for (std::size_t& c : class_of_) {
    if (relabel[c] == std::numeric_limits<std::size_t>::max()) {
      relabel[c] = next++;
    }
    c = relabel[c];
  }
}

void DrsConstraints::corefer(const std::vector<std::size_t>& slots) {
  if (slots.empty()) return;
  for (std::size_t s : slots) {
    if (s >= k()) {
      throw InvalidArgument("corefer: slot " + std::to_string(s) +
                            " out of range (discourse has " +
                            std::to_string(k()) + " pronouns)");
    }
  }
  const std::size_t target = class_of_[slots.front()];
  std::set<std::size_t> merged;
  for (std::size_t s : slots) merged.insert(class_of_[s]);
  for (std::size_t& c : class_of_) {
    if (merged.count(c)) c = target;
  }
  renumber();
}

void DrsConstraints::restrict_candidates(std::size_t slot,
                                         std::vector<std::size_t> entities) {
  if (slot >= k()) {
    throw InvalidArgument("candidates: slot " + std::to_string(slot) +
                          " out of range (discourse has " +
                          std::to_string(k()) + " pronouns)");
  }
  std::sort(entities.begin(), entities.end());
  entities.erase(std::unique(entities.begin(), entities.end()), entities.end());
  auto& r = restrictions_[slot];
  if (!r) {
    r = std::move(entities);
    return;
  }
  std::vector<std::size_t> both;
  std::set_intersection(r->begin(), r->end(), entities.begin(), entities.end(),
                        std::back_inserter(both));
  r = std::move(both);
}

std::vector<std::vector<std::size_t>> DrsConstraints::classes() const {
  std::size_t count = 0;
  for (std::size_t c : class_of_) count = std::max(count, c + 1);
  std::vector<std::vector<std::size_t>> out(count);
  for (std::size_t s = 0; s < class_of_.size(); ++s) {
    out[class_of_[s]].push_back(s);
  }
  return out;
}

std::size_t DrsConstraints::class_of(std::size_t slot) const {
  if (slot >= k()) {
    throw IndexOutOfRange("slot " + std::to_string(slot) + " out of range");
  }
  return class_of_[slot];
}

std::vector<std::size_t> DrsConstraints::candidates(
    std::size_t c, std::size_t num_entities) const {
  std::vector<std::size_t> out(num_entities);
  std::iota(out.begin(), out.end(), std::size_t{0});
  for (std::size_t s = 0; s < class_of_.size(); ++s) {
    if (class_of_[s] != c || !restrictions_[s]) continue;
    std::vector<std::size_t> both;
    std::set_intersection(out.begin(), out.end(), restrictions_[s]->begin(),
                          restrictions_[s]->end(), std::back_inserter(both));
    out = std::move(both);
  }
  return out;
}

DrsConstraints parse_constraints(std::istream& in, std::size_t k,
                                 const Vocabulary& vocab) {
  DrsConstraints out(k);
  std::string line;
  std::size_t lineno = 0;
  auto parse_slot = [&](const std::string& tok) {
    std::size_t pos = 0;
    std::size_t value = 0;
    try {
      value = std::stoul(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != tok.size() || tok.empty() || tok.front() == '-') {
      throw ParseError("malformed slot '" + tok + "'", lineno);
    }
    if (value >= k) {
      throw ParseError("unknown slot " + tok + " (discourse has " +
                           std::to_string(k) + " pronouns)",
                       lineno);
    }
    return value;
  };
  while (std::getline(in, line)) {
    ++lineno;
    detail::strip_cr(line);
    if (detail::is_blank_or_comment(line)) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) {
      throw ParseError("expected 'corefer:' or 'candidates:'", lineno);
    }
    const std::string key(detail::trim(std::string_view(line).substr(0, colon)));
    const auto args = detail::split_whitespace(line.substr(colon + 1));
    if (key == "corefer") {
      if (args.empty()) throw ParseError("corefer needs slots", lineno);
      std::vector<std::size_t> slots;
      for (const auto& a : args) slots.push_back(parse_slot(a));
      out.corefer(slots);
    } else if (key == "candidates") {
      if (args.empty()) throw ParseError("candidates needs a slot", lineno);
      const std::size_t slot = parse_slot(args.front());
      std::vector<std::size_t> entities;
      for (std::size_t i = 1; i < args.size(); ++i) {
        auto e = vocab.find_entity(args[i]);
        if (!e) throw ParseError("unknown entity '" + args[i] + "'", lineno);
        entities.push_back(*e);
      }
      out.restrict_candidates(slot, std::move(entities));
    } else {
      throw ParseError("unknown directive '" + key + "'", lineno);
    }
  }
  return out;
}

DrsConstraints load_constraints(const std::filesystem::path& path,
                                std::size_t k, const Vocabulary& vocab) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open constraints '" + path.string() + "'");
  }
  return parse_constraints(in, k, vocab);
}

// --- Enumeration ---------------------------------------------------------

namespace {

std::vector<std::vector<std::size_t>> class_candidates(
    const DrsConstraints& constraints, std::size_t num_entities) {
  const auto classes = constraints.classes();
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    out.push_back(constraints.candidates(c, num_entities));
    if (out.back().empty()) {
      throw InvalidArgument("empty candidate set for the class of slot " +
                            std::to_string(classes[c].front()));
    }
  }
  return out;
}

}  // namespace

void for_each_matching(
    const DrsConstraints& constraints, std::size_t num_entities,
    const std::function<void(const MatchingFunction&)>& visit) {
  const auto classes = constraints.classes();
  const auto cands = class_candidates(constraints, num_entities);
  std::vector<std::size_t> idx(classes.size(), 0);
  MatchingFunction mu{std::vector<std::size_t>(constraints.k())};
  while (true) {
    for (std::size_t c = 0; c < classes.size(); ++c) {
      for (std::size_t s : classes[c]) mu.assignment[s] = cands[c][idx[c]];
    }
    visit(mu);
    // Odometer with the last class least significant.
    std::size_t c = classes.size();
    while (c > 0) {
      --c;
      if (++idx[c] < cands[c].size()) break;
      idx[c] = 0;
      if (c == 0) return;
    }
    if (classes.empty()) return;
  }
}

std::vector<MatchingFunction> enumerate_matchings(
    const DrsConstraints& constraints, std::size_t num_entities,
    std::size_t budget) {
  std::size_t total = 1;
  for (const auto& c : class_candidates(constraints, num_entities)) {
    if (total > budget / c.size()) {
      throw BudgetExceeded(std::numeric_limits<std::size_t>::max(), budget);
    }
    total *= c.size();
  }
  std::vector<MatchingFunction> out;
  out.reserve(total);
  for_each_matching(constraints, num_entities,
                    [&](const MatchingFunction& mu) { out.push_back(mu); });
  return out;
}

// --- Scoring -------------------------------------------------------------

namespace {

// Sentence with its closed sides already reduced to noun-space coordinates.
struct PreparedSentence {
  const AtomicSentence* sentence;
  std::span<const Scalar> block;
  std::vector<Scalar> subject;  // empty when anaphoric
  std::vector<Scalar> object;   // empty when anaphoric
  std::optional<std::size_t> subject_slot;
  std::optional<std::size_t> object_slot;
};

std::vector<PreparedSentence> prepare(const Discourse& d,
                                      const EncodingMatrix& enc,
                                      const VerbMatrix& verbs) {
  std::vector<PreparedSentence> out;
  for (const auto& s : d.sentences) {
    PreparedSentence p{&s, verbs.block(s.verb), {}, {}, {}, {}};
    if (const auto* pr = std::get_if<PronounRef>(&s.subject.node)) {
      p.subject_slot = pr->slot;
    } else {
      p.subject = noun_coordinates(s.subject, enc, verbs);
    }
    if (const auto* pr = std::get_if<PronounRef>(&s.object.node)) {
      p.object_slot = pr->slot;
    } else {
      p.object = noun_coordinates(s.object, enc, verbs);
    }
    out.push_back(std::move(p));
  }
  return out;
}

// Score of one prepared sentence with slots bound through `bind`.
template <typename Bind>
Scalar bound_score(const PreparedSentence& p, const EncodingMatrix& enc,
                   Bind&& bind) {
  std::span<const Scalar> sub =
      p.subject_slot ? enc.column(bind(*p.subject_slot)) : p.subject;
  std::span<const Scalar> obj =
      p.object_slot ? enc.column(bind(*p.object_slot)) : p.object;
  return contract_sentence(enc.semiring(), sub, p.block, obj);
}

void check_length(const Discourse& d, const MatchingFunction& mu,
                  std::size_t num_entities) {
  if (mu.size() != d.k()) {
    throw InvalidArgument("matching assigns " + std::to_string(mu.size()) +
                          " slots but the discourse has " +
                          std::to_string(d.k()) + " pronouns");
  }
  for (std::size_t e : mu.assignment) {
    if (e >= num_entities) {
      throw IndexOutOfRange("matching uses entity ordinal " +
                            std::to_string(e) + " out of range");
    }
  }
}

}  // namespace

Scalar resolution_scalar(const Discourse& d, const MatchingFunction& mu,
                         const EncodingMatrix& enc, const VerbMatrix& verbs) {
  check_length(d, mu, enc.num_entities());
  const Semiring s = enc.semiring();
  Scalar acc = one(s);
  for (const auto& p : prepare(d, enc, verbs)) {
    acc = mul(s, acc, bound_score(p, enc, [&](std::size_t slot) {
                return mu.assignment[slot];
              }));
  }
  return acc;
}

std::vector<ScoredMatching> score_matchings(const Discourse& d,
                                            const DrsConstraints& constraints,
                                            const EncodingMatrix& enc,
                                            const VerbMatrix& verbs,
                                            std::size_t budget) {
  if (constraints.k() != d.k()) {
    throw InvalidArgument("constraints cover " +
                          std::to_string(constraints.k()) +
                          " slots but the discourse has " +
                          std::to_string(d.k()) + " pronouns");
  }
  const auto prepared = prepare(d, enc, verbs);
  const Semiring s = enc.semiring();
  std::vector<ScoredMatching> out;
  for (const auto& mu : enumerate_matchings(constraints, enc.num_entities(),
                                            budget)) {
    Scalar acc = one(s);
    for (const auto& p : prepared) {
      acc = mul(s, acc, bound_score(p, enc, [&](std::size_t slot) {
                  return mu.assignment[slot];
                }));
    }
    out.push_back({mu, acc});
  }
  return out;
}

namespace {

struct BinaryFactor {
  std::size_t first;   // class index
  std::size_t second;  // class index, > first
  std::vector<Scalar> table;  // [i * |cands[second]| + j]
};

// Classes that share a sentence, searched jointly.
struct Component {
  std::vector<std::size_t> classes;       // ascending
  std::vector<std::size_t> binary;        // indices into factors
};

class FactoredSearch {
 public:
  FactoredSearch(const Discourse& d, const DrsConstraints& constraints,
                 const EncodingMatrix& enc, const VerbMatrix& verbs,
                 std::size_t budget)
      : s_(enc.semiring()), budget_(budget) {
    const auto classes = constraints.classes();
    cands_ = class_candidates(constraints, enc.num_entities());
    unary_.resize(classes.size());
    for (std::size_t c = 0; c < classes.size(); ++c) {
      unary_[c].assign(cands_[c].size(), one(s_));
    }
    constant_ = one(s_);

    for (const auto& p : prepare(d, enc, verbs)) {
      std::vector<std::size_t> touched;
      if (p.subject_slot) touched.push_back(constraints.class_of(*p.subject_slot));
      if (p.object_slot) touched.push_back(constraints.class_of(*p.object_slot));
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

      if (touched.empty()) {
        constant_ = mul(s_, constant_,
                        bound_score(p, enc, [](std::size_t) { return std::size_t{0}; }));
      } else if (touched.size() == 1) {
        const std::size_t c = touched.front();
        for (std::size_t i = 0; i < cands_[c].size(); ++i) {
          const std::size_t e = cands_[c][i];
          unary_[c][i] = mul(s_, unary_[c][i],
                             bound_score(p, enc, [e](std::size_t) { return e; }));
        }
      } else {
        BinaryFactor f{touched[0], touched[1], {}};
        const auto& ca = cands_[f.first];
        const auto& cb = cands_[f.second];
        if (ca.size() > budget_ / cb.size()) {
          throw BudgetExceeded(std::numeric_limits<std::size_t>::max(), budget_);
        }
        f.table.reserve(ca.size() * cb.size());
        for (std::size_t ea : ca) {
          for (std::size_t eb : cb) {
            f.table.push_back(bound_score(p, enc, [&](std::size_t slot) {
              return constraints.class_of(slot) == f.first ? ea : eb;
            }));
          }
        }
        factors_.push_back(std::move(f));
      }
    }
    build_components(classes.size());
  }

  // Lexicographically first maximizer, as class-candidate indices.
  std::vector<std::size_t> solve() {
    const std::size_t m = cands_.size();
    std::vector<std::optional<std::size_t>> fixed(m);
    std::vector<Scalar> best(components_.size());
    for (std::size_t i = 0; i < components_.size(); ++i) {
      best[i] = component_max(i, fixed);
    }
    const Scalar target = total(best);
    for (std::size_t c = 0; c < m; ++c) {
      const std::size_t comp = component_of_[c];
      std::vector<Scalar> trial = best;
      bool found = false;
      for (std::size_t i = 0; i < cands_[c].size(); ++i) {
        fixed[c] = i;
        trial[comp] = component_max(comp, fixed);
        if (total(trial) == target) {
          found = true;
          break;
        }
      }
      if (!found) throw Error("resolve_argmax: inconsistent factor maxima");
    }
    std::vector<std::size_t> out(m);
    for (std::size_t c = 0; c < m; ++c) out[c] = *fixed[c];
    return out;
  }

  const std::vector<std::vector<std::size_t>>& candidates() const {
    return cands_;
  }

 private:
  void build_components(std::size_t m) {
    std::vector<std::size_t> parent(m);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& f : factors_) parent[find(f.second)] = find(f.first);
    component_of_.assign(m, 0);
    std::vector<std::size_t> root_to_comp(m, std::numeric_limits<std::size_t>::max());
    for (std::size_t c = 0; c < m; ++c) {
      const std::size_t r = find(c);
      if (root_to_comp[r] == std::numeric_limits<std::size_t>::max()) {
        root_to_comp[r] = components_.size();
        components_.push_back({});
      }
      component_of_[c] = root_to_comp[r];
      components_[component_of_[c]].classes.push_back(c);
    }
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      components_[component_of_[factors_[i].first]].binary.push_back(i);
    }
  }

  Scalar total(const std::vector<Scalar>& comp_values) const {
    Scalar acc = constant_;
    for (Scalar v : comp_values) acc = mul(s_, acc, v);
    return acc;
  }

  // Max over assignments of the component's free classes; fixed classes keep
  // their index.
  Scalar component_max(std::size_t comp,
                       const std::vector<std::optional<std::size_t>>& fixed) {
    const auto& classes = components_[comp].classes;
    std::vector<std::size_t> free;
    std::size_t space = 1;
    for (std::size_t c : classes) {
      if (fixed[c]) continue;
      free.push_back(c);
      if (space > budget_ / cands_[c].size()) {
        throw BudgetExceeded(std::numeric_limits<std::size_t>::max(), budget_);
      }
      space *= cands_[c].size();
    }
    std::vector<std::size_t> assign(cands_.size(), 0);
    for (std::size_t c : classes) {
      if (fixed[c]) assign[c] = *fixed[c];
    }
    Scalar best = zero(s_);
    bool first = true;
    while (true) {
      Scalar v = one(s_);
      for (std::size_t c : classes) v = mul(s_, v, unary_[c][assign[c]]);
      for (std::size_t fi : components_[comp].binary) {
        const auto& f = factors_[fi];
        v = mul(s_, v,
                f.table[assign[f.first] * cands_[f.second].size() +
                        assign[f.second]]);
      }
      if (first || v > best) best = v;
      first = false;
      std::size_t i = free.size();
      bool carry = true;
      while (carry && i > 0) {
        --i;
        if (++assign[free[i]] < cands_[free[i]].size()) {
          carry = false;
        } else {
          assign[free[i]] = 0;
        }
      }
      if (carry) break;
    }
    return best;
  }

  Semiring s_;
  std::size_t budget_;
  Scalar constant_;
  std::vector<std::vector<std::size_t>> cands_;
  std::vector<std::vector<Scalar>> unary_;
  std::vector<BinaryFactor> factors_;
  std::vector<Component> components_;
  std::vector<std::size_t> component_of_;
};

}  // namespace

Resolution resolve_argmax(const Discourse& d, const DrsConstraints& constraints,
                          const EncodingMatrix& enc, const VerbMatrix& verbs,
                          bool include_scored, std::size_t budget) {
  if (constraints.k() != d.k()) {
    throw InvalidArgument("constraints cover " +
                          std::to_string(constraints.k()) +
                          " slots but the discourse has " +
                          std::to_string(d.k()) + " pronouns");
  }
  FactoredSearch search(d, constraints, enc, verbs, budget);
  const auto choice = search.solve();
  const auto classes = constraints.classes();
  Resolution out;
  out.best.assignment.assign(d.k(), 0);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (std::size_t slot : classes[c]) {
      out.best.assignment[slot] = search.candidates()[c][choice[c]];
    }
  }
  out.score = resolution_scalar(d, out.best, enc, verbs);
  if (include_scored) {
    out.scored = score_matchings(d, constraints, enc, verbs, budget);
  }
  return out;
}

// --- Entity store and matching process ------------------------------------

namespace {

// Wire order produced by copying each store entry in entity order.
std::vector<std::size_t> copy_order(const MatchingFunction& mu,
                                    std::size_t num_entities) {
  std::vector<std::size_t> order;
  for (std::size_t e = 0; e < num_entities; ++e) {
    for (std::size_t slot = 0; slot < mu.size(); ++slot) {
      if (mu.assignment[slot] == e) order.push_back(slot);
    }
  }
  return order;
}

std::size_t references(const MatchingFunction& mu, std::size_t e) {
  return static_cast<std::size_t>(
      std::count(mu.assignment.begin(), mu.assignment.end(), e));
}

// Symmetry on wire p and p+1 of a k-wire |E| bundle.
Matrix adjacent_swap(std::size_t p, std::size_t k, std::size_t ne, Semiring s,
                     std::size_t budget) {
  Matrix m = swap(ne, ne, s, budget);
  if (p > 0) m = tensor(identity(Shape(p, ne), s, budget), m, budget);
  if (p + 2 < k) {
    m = tensor(m, identity(Shape(k - p - 2, ne), s, budget), budget);
  }
  return m;
}

// Bubble-sorts `order` to slot order, applying one symmetry per exchange.
// `apply` receives each symmetry in sequence.
template <typename Apply>
std::size_t route_to_slots(std::vector<std::size_t> order, std::size_t ne,
                           Semiring s, std::size_t budget, Apply&& apply) {
  std::size_t swaps = 0;
  const std::size_t k = order.size();
  for (std::size_t pass = 0; pass < k; ++pass) {
    for (std::size_t p = 0; p + 1 < k; ++p) {
      if (order[p] > order[p + 1]) {
        std::swap(order[p], order[p + 1]);
        apply(adjacent_swap(p, k, ne, s, budget));
        ++swaps;
      }
    }
  }
  return swaps;
}

}  // namespace

MatchingProcessTrace matching_process_trace(const Discourse& d,
                                            const MatchingFunction& mu,
                                            const EncodingMatrix& enc,
                                            const VerbMatrix& verbs,
                                            std::size_t budget) {
  const std::size_t ne = enc.num_entities();
  const Semiring s = enc.semiring();
  check_length(d, mu, ne);
  checked_product(Shape(d.k(), ne), budget);

  MatchingProcessTrace trace;
  Matrix fed = scalar(one(s), s);
  for (std::size_t e = 0; e < ne; ++e) {
    const std::size_t outputs = references(mu, e);
    trace.spiders.push_back({e, outputs});
    const Matrix copies =
        compose(one_hot_state(e, ne, s), spider(1, outputs, ne, s, budget),
                budget);
    fed = tensor(fed, copies, budget);
  }
  trace.swaps = route_to_slots(copy_order(mu, ne), ne, s, budget,
                               [&](const Matrix& sym) {
                                 fed = compose(fed, sym, budget);
                               });
  trace.value = scalar_value(
      compose(fed, discourse_effect(d, enc, verbs, budget), budget));
  return trace;
}

Scalar matching_process_eval(const Discourse& d, const MatchingFunction& mu,
                             const EncodingMatrix& enc, const VerbMatrix& verbs,
                             std::size_t budget) {
  return matching_process_trace(d, mu, enc, verbs, budget).value;
}

Matrix entity_store(std::size_t num_entities, Semiring s, std::size_t budget) {
  Matrix store = scalar(one(s), s);
  for (std::size_t e = 0; e < num_entities; ++e) {
    store = tensor(store, one_hot_state(e, num_entities, s), budget);
  }
  return store;
}

Matrix matching_process(const MatchingFunction& mu, std::size_t num_entities,
                        Semiring s, std::size_t budget) {
  for (std::size_t e : mu.assignment) {
    if (e >= num_entities) {
      throw IndexOutOfRange("matching uses entity ordinal " +
                            std::to_string(e) + " out of range");
    }
  }
  Matrix process = scalar(one(s), s);
  for (std::size_t e = 0; e < num_entities; ++e) {
    process = tensor(
        process, spider(1, references(mu, e), num_entities, s, budget), budget);
  }
  route_to_slots(copy_order(mu, num_entities), num_entities, s, budget,
                 [&](const Matrix& sym) {
                   process = compose(process, sym, budget);
                 });
  return process;
}

std::pair<Scalar, Scalar> dense_theorem_check(const Discourse& d,
                                              const MatchingFunction& mu,
                                              const EncodingMatrix& enc,
                                              const VerbMatrix& verbs) {
  const std::size_t ne = enc.num_entities();
  if (ne > kDenseStoreMaxEntities) {
    std::size_t required = 1;
    for (std::size_t i = 0; i < ne; ++i) {
      required = required > std::numeric_limits<std::size_t>::max() / ne
                     ? std::numeric_limits<std::size_t>::max()
                     : required * ne;
    }
    throw BudgetExceeded(required, shape_product(Shape(kDenseStoreMaxEntities,
                                                       kDenseStoreMaxEntities)));
  }
  const Semiring s = enc.semiring();
  const Scalar sparse = resolution_scalar(d, mu, enc, verbs);
  const Matrix chain[] = {entity_store(ne, s), matching_process(mu, ne, s),
                          discourse_effect(d, enc, verbs)};
  return {sparse, scalar_value(compose_all(chain))};
}

}  // namespace discocat
