#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "discocat/discocat.hpp"

namespace py = pybind11;
using namespace discocat;

namespace {

Semiring semiring_from(const std::string& name) {
  const auto s = parse_semiring(name);
  if (!s) throw InvalidArgument("unknown semiring '" + name + "'");
  return *s;
}

EncodingMatrix make_encoding(const Vocabulary& vocab,
                             const std::optional<std::filesystem::path>& embeddings,
                             const std::string& semiring, bool normalize) {
  EncodingMatrix enc = embeddings ? load_embeddings(*embeddings, vocab)
                                  : identity_encoding(vocab, semiring_from(semiring));
  return normalize ? normalize_l1(enc).encoding : enc;
}

/// A loaded graph together with its encoding and verb matrix.
class Model {
 public:
  Model(LoadedGraph graph, std::optional<std::filesystem::path> embeddings,
        const std::string& semiring, bool normalize)
      : graph_(std::move(graph)),
        enc_(make_encoding(graph_.vocab, embeddings, semiring, normalize)),
        verbs_(build_verb_matrix(enc_, graph_.kg, graph_.vocab)) {}

  const Vocabulary& vocab() const { return graph_.vocab; }

  Scalar ask(const std::string& text) const {
    return discocat::ask(text, graph_.vocab, enc_, verbs_);
  }

  std::vector<std::pair<std::string, Scalar>> rank(const std::string& text) const {
    std::vector<std::pair<std::string, Scalar>> out;
    for (const auto& a :
         rank_answers(parse_question(text, graph_.vocab), enc_, verbs_)) {
      out.emplace_back(graph_.vocab.entity_name(a.entity), a.score);
    }
    return out;
  }

  std::pair<std::vector<std::string>, Scalar> resolve(
      const std::string& text,
      const std::vector<std::vector<std::size_t>>& corefer,
      const std::map<std::size_t, std::vector<std::string>>& candidates) const {
    const Discourse d = parse_discourse(text, graph_.vocab);
    const Resolution r = resolve_argmax(d, constraints(d, corefer, candidates),
                                        enc_, verbs_);
    std::vector<std::string> names;
    for (std::size_t e : r.best.assignment) {
      names.push_back(graph_.vocab.entity_name(e));
    }
    return {std::move(names), r.score};
  }

  std::string sparql(const std::string& text,
                     const std::vector<std::vector<std::size_t>>& corefer,
                     const std::string& prefix) const {
    CompiledQuery q;
    if (looks_like_question(text)) {
      q = compile_question(parse_question(text, graph_.vocab));
    } else {
      const Discourse d = parse_discourse(text, graph_.vocab);
      q = compile_discourse(d, constraints(d, corefer, {}));
    }
    return emit_sparql(q.bgp, q.form, graph_.vocab, prefix);
  }

  Scalar similarity(const std::string& a, const std::string& b) const {
    return discocat::similarity(enc_, graph_.vocab.entity(a), graph_.vocab.entity(b));
  }

 private:
  DrsConstraints constraints(
      const Discourse& d, const std::vector<std::vector<std::size_t>>& corefer,
      const std::map<std::size_t, std::vector<std::string>>& candidates) const {
    DrsConstraints c(d.k());
    for (const auto& cls : corefer) c.corefer(cls);
    for (const auto& [slot, names] : candidates) {
      std::vector<std::size_t> ids;
      for (const auto& n : names) ids.push_back(graph_.vocab.entity(n));
      c.restrict_candidates(slot, std::move(ids));
    }
    return c;
  }

  LoadedGraph graph_;
  EncodingMatrix enc_;
  VerbMatrix verbs_;
};

}  // namespace

PYBIND11_MODULE(_discocat, m) {
  m.doc() = "Compositional question answering and anaphora resolution over knowledge graphs";

  const auto& base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", base);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", base);

  py::class_<Model>(m, "Model")
      .def(py::init([](const std::filesystem::path& kg,
                       std::optional<std::filesystem::path> embeddings,
                       const std::string& semiring, bool normalize) {
             return Model(load_kg(kg), std::move(embeddings), semiring, normalize);
           }),
           py::arg("kg"), py::arg("embeddings") = std::nullopt,
           py::arg("semiring") = "real", py::arg("normalize") = false)
      .def_static(
          "from_text",
          [](const std::string& text, const std::string& semiring) {
            return Model(parse_kg_text(text), std::nullopt, semiring, false);
          },
          py::arg("text"), py::arg("semiring") = "real",
          "Identity-encoded model from knowledge-graph TSV text.")
      .def_property_readonly("entities",
                             [](const Model& s) { return s.vocab().entities(); })
      .def_property_readonly("relations",
                             [](const Model& s) { return s.vocab().relations(); })
      .def("ask", &Model::ask, py::arg("sentence"))
      .def("rank", &Model::rank, py::arg("question"))
      .def("resolve", &Model::resolve, py::arg("text"),
           py::arg("corefer") = std::vector<std::vector<std::size_t>>{},
           py::arg("candidates") = std::map<std::size_t, std::vector<std::string>>{},
           "Best pronoun assignment (entity names by slot) and its score.")
      .def("sparql", &Model::sparql, py::arg("text"),
           py::arg("corefer") = std::vector<std::vector<std::size_t>>{},
           py::arg("prefix") = std::string(kDefaultPrefix))
      .def("similarity", &Model::similarity, py::arg("a"), py::arg("b"));
}
