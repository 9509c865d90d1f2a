#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "discocat/discocat.hpp"

namespace discocat::cli {

namespace {

using json = nlohmann::json;

// Everything a command needs, loaded after flag parsing.
struct Session {
  LoadedGraph graph;
  std::optional<EncodingMatrix> enc;
  std::optional<VerbMatrix> verbs;
  LemmaMap lemmas;
  GrammarOptions grammar;
};

Session open_session(const RunConfig& config, std::ostream& err) {
  Session s;
  s.graph = load_kg(config.kg_path);
  EncodingMatrix enc =
      config.embeddings_path
          ? load_embeddings(*config.embeddings_path, s.graph.vocab,
                            config.semiring)
          : identity_encoding(s.graph.vocab, config.semiring);
  if (config.normalize) {
    NormalizedEncoding normalized = normalize_l1(enc);
    for (std::size_t e : normalized.zero_columns) {
      err << "warning: entity '" << s.graph.vocab.entity_name(e)
          << "' has an all-zero encoding; left unnormalized\n";
    }
    enc = std::move(normalized.encoding);
  }
  s.verbs = build_verb_matrix(enc, s.graph.kg, s.graph.vocab);
  s.enc = std::move(enc);
  if (config.lemma_path) s.lemmas = load_lemmas(*config.lemma_path);
  s.grammar.lemmas = &s.lemmas;
  return s;
}

DrsConstraints constraints_for(const RunConfig& config, std::size_t k,
                               const Vocabulary& vocab) {
  return config.constraints_path
             ? load_constraints(*config.constraints_path, k, vocab)
             : DrsConstraints(k);
}

std::string read_text(const std::vector<std::string>& operands,
                      std::istream& in) {
  if (operands.size() == 1 && operands.front() == "-") {
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
  }
  std::string text;
  for (const auto& op : operands) {
    if (!text.empty()) text += ' ';
    text += op;
  }
  return text;
}

int cmd_ask(const RunConfig& config, const std::string& text,
            std::ostream& out, std::ostream& err) {
  Session s = open_session(config, err);
  const Scalar value = ask(text, s.graph.vocab, *s.enc, *s.verbs, s.grammar);
  if (config.json) {
    json j;
    j["score"] = value;
    if (config.semiring == Semiring::kBoolean) j["truth"] = value != 0.0;
    out << j.dump() << '\n';
  } else if (config.semiring == Semiring::kBoolean) {
    out << (value != 0.0 ? "true" : "false") << '\n';
  } else {
    out << format_scalar(value) << '\n';
  }
  return kExitOk;
}

int cmd_rank(const RunConfig& config, const std::string& text,
             std::ostream& out, std::ostream& err) {
  Session s = open_session(config, err);
  const Question q = parse_question(text, s.graph.vocab, s.grammar);
  if (q.two_variable()) {
    err << "error: rank needs a single-variable question; use emit-sparql "
           "for 'who VERB whom ?'\n";
    return kExitUsage;
  }
  const auto ranking = rank_answers(q, *s.enc, *s.verbs);
  if (config.json) {
    json rows = json::array();
    for (const auto& a : ranking) {
      rows.push_back({{"entity", s.graph.vocab.entity_name(a.entity)},
                      {"score", a.score}});
    }
    out << rows.dump() << '\n';
    return kExitOk;
  }
  for (const auto& a : ranking) {
    out << s.graph.vocab.entity_name(a.entity) << '\t'
        << format_scalar(a.score) << '\n';
  }
  return kExitOk;
}

int cmd_resolve(const RunConfig& config, const std::string& text,
                std::ostream& out, std::ostream& err) {
  Session s = open_session(config, err);
  const Vocabulary& vocab = s.graph.vocab;
  const Discourse d = parse_discourse(text, vocab, s.grammar);
  const DrsConstraints constraints = constraints_for(config, d.k(), vocab);

  if (config.all) {
    const auto scored = score_matchings(d, constraints, *s.enc, *s.verbs);
    if (config.json) {
      json rows = json::array();
      for (const auto& m : scored) {
        json names = json::array();
        for (std::size_t e : m.matching.assignment) {
          names.push_back(vocab.entity_name(e));
        }
        rows.push_back({{"assignment", names}, {"score", m.score}});
      }
      out << json{{"matchings", rows}}.dump() << '\n';
      return kExitOk;
    }
    for (const auto& m : scored) {
      for (std::size_t e : m.matching.assignment) {
        out << vocab.entity_name(e) << '\t';
      }
      out << format_scalar(m.score) << '\n';
    }
    return kExitOk;
  }

  const Resolution r = resolve_argmax(d, constraints, *s.enc, *s.verbs);
  const auto classes = constraints.classes();
  if (config.json) {
    json rows = json::array();
    for (const auto& cls : classes) {
      json pronouns = json::array();
      for (std::size_t slot : cls) pronouns.push_back(d.pronouns[slot]);
      rows.push_back({{"class_slot", cls.front()},
                      {"entity", vocab.entity_name(r.best(cls.front()))},
                      {"pronouns", pronouns}});
    }
    out << json{{"classes", rows}, {"score", r.score}}.dump() << '\n';
    return kExitOk;
  }
  for (const auto& cls : classes) {
    out << cls.front() << '\t' << vocab.entity_name(r.best(cls.front()))
        << '\t';
    for (std::size_t i = 0; i < cls.size(); ++i) {
      if (i) out << ',';
      out << d.pronouns[cls[i]];
    }
    out << '\n';
  }
  out << "score\t" << format_scalar(r.score) << '\n';
  return kExitOk;
}

int cmd_emit_sparql(const RunConfig& config, const std::string& text,
                    std::ostream& out, std::ostream& err) {
  Session s = open_session(config, err);
  const Vocabulary& vocab = s.graph.vocab;
  CompiledQuery compiled;
  if (looks_like_question(text)) {
    compiled = compile_question(parse_question(text, vocab, s.grammar));
  } else {
    const Discourse d = parse_discourse(text, vocab, s.grammar);
    compiled = compile_discourse(d, constraints_for(config, d.k(), vocab));
  }
  const std::string query =
      emit_sparql(compiled.bgp, compiled.form, vocab, config.prefix);
  if (config.json) {
    out << json{{"query", query}}.dump() << '\n';
  } else {
    out << query;
  }
  return kExitOk;
}

int cmd_similarity(const RunConfig& config, const std::string& first,
                   const std::string& second, std::ostream& out,
                   std::ostream& err) {
  Session s = open_session(config, err);
  const Scalar value =
      similarity(*s.enc, s.graph.vocab.entity(first),
                 s.graph.vocab.entity(second));
  if (config.json) {
    out << json{{"score", value}}.dump() << '\n';
  } else {
    out << format_scalar(value) << '\n';
  }
  return kExitOk;
}

}  // namespace

std::string format_scalar(Scalar value) {
  char buf[64];
  for (int digits = 1; digits <= 6; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, value);
    if (std::strtod(buf, nullptr) == value) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err) {
  RunConfig config;
  config.prefix = std::string(kDefaultPrefix);
  std::string semiring_name = "real";

  CLI::App app{"Compositional distributional semantics over knowledge graphs",
               "discocat"};
  app.require_subcommand(1);
  app.add_option("--kg", config.kg_path, "Knowledge graph (TSV triples)")
      ->required();
  app.add_option("--embeddings", config.embeddings_path,
                 "Entity embeddings; identity encoding when absent");
  app.add_option("--semiring", semiring_name, "boolean | real | fuzzy")
      ->check(CLI::IsMember({"boolean", "real", "fuzzy"}));
  app.add_option("--lemmas", config.lemma_path, "surface<TAB>relation file");
  app.add_option("--constraints", config.constraints_path,
                 "Coreference constraints for resolve / emit-sparql");
  app.add_flag("--normalize", config.normalize, "L1-normalize embeddings");
  app.add_option("--prefix", config.prefix, "Prefix IRI for emitted SPARQL");
  app.add_flag("--all", config.all, "resolve: print every scored matching");
  app.add_flag("--json", config.json, "JSON output at full precision");

  std::vector<std::string> text;
  std::vector<std::string> entities;
  auto* ask_cmd = app.add_subcommand("ask", "Truth value of a sentence");
  auto* rank_cmd = app.add_subcommand("rank", "Rank answers to a question");
  auto* resolve_cmd =
      app.add_subcommand("resolve", "Resolve the pronouns of a discourse");
  auto* emit_cmd = app.add_subcommand(
      "emit-sparql", "Compile a discourse or question to SPARQL");
  auto* sim_cmd =
      app.add_subcommand("similarity", "Inner product of two entity vectors");
  for (auto* sub : {ask_cmd, rank_cmd, resolve_cmd, emit_cmd}) {
    sub->fallthrough();
    sub->add_option("text", text, "Text, or - for standard input")
        ->required();
  }
  sim_cmd->fallthrough();
  sim_cmd->add_option("entities", entities, "Two entity tokens")
      ->required()
      ->expected(2);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  config.semiring = *parse_semiring(semiring_name);

  try {
    if (*sim_cmd) {
      return cmd_similarity(config, entities[0], entities[1], out, err);
    }
    const std::string body = read_text(text, in);
    if (*ask_cmd) return cmd_ask(config, body, out, err);
    if (*rank_cmd) return cmd_rank(config, body, out, err);
    if (*resolve_cmd) return cmd_resolve(config, body, out, err);
    return cmd_emit_sparql(config, body, out, err);
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitBudget;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitBudget;
  }
}

}  // namespace discocat::cli
