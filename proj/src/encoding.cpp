#include "discocat/encoding.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <optional>

#include "discocat/error.hpp"
#include "text_util.hpp"

namespace discocat {

namespace {

std::optional<double> parse_double(std::string_view s) {
  s = detail::trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

}  // namespace

EncodingMatrix::EncodingMatrix(Matrix matrix) : matrix_(std::move(matrix)) {
  const std::size_t n = matrix_.rows();
  const std::size_t ne = matrix_.cols();
  columns_.resize(n * ne);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < ne; ++c) columns_[c * n + r] = matrix_.at(r, c);
  }
}

std::span<const Scalar> EncodingMatrix::column(std::size_t e) const {
  if (e >= num_entities()) {
    throw IndexOutOfRange("entity ordinal " + std::to_string(e) +
                          " out of range for encoding");
  }
  return std::span<const Scalar>(columns_).subspan(e * dim(), dim());
}

Matrix EncodingMatrix::encode(std::size_t e) const {
  auto col = column(e);
  return state(std::vector<Scalar>(col.begin(), col.end()), semiring());
}

VerbMatrix::VerbMatrix(Matrix matrix) : matrix_(std::move(matrix)), dim_(0) {
  const std::size_t rows = matrix_.rows();
  while (dim_ * dim_ < rows) ++dim_;
  if (dim_ * dim_ != rows) {
    throw DimensionMismatch("verb matrix rows " + std::to_string(rows) +
                            " are not a square n*n");
  }
  matrix_ = matrix_.reshaped({matrix_.cols()}, {dim_, dim_});
  const std::size_t nr = matrix_.cols();
  blocks_.resize(rows * nr);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t v = 0; v < nr; ++v) blocks_[v * rows + r] = matrix_.at(r, v);
  }
}

std::span<const Scalar> VerbMatrix::block(std::size_t v) const {
  if (v >= num_relations()) {
    throw IndexOutOfRange("relation ordinal " + std::to_string(v) +
                          " out of range for verb matrix");
  }
  return std::span<const Scalar>(blocks_).subspan(v * dim_ * dim_,
                                                  dim_ * dim_);
}

Matrix VerbMatrix::encode(std::size_t v) const {
  auto b = block(v);
  return Matrix(semiring(), {}, {dim_, dim_},
                std::vector<Scalar>(b.begin(), b.end()));
}

EncodingMatrix parse_embeddings(std::istream& in, const Vocabulary& vocab,
                                Semiring s) {
  const std::size_t ne = vocab.num_entities();
  std::vector<std::optional<std::vector<Scalar>>> rows(ne);
  std::optional<std::size_t> dim;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    detail::strip_cr(line);
    if (detail::is_blank_or_comment(line)) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError("expected 'entity<TAB>c1,...,cn'", lineno);
    }
    const std::string name(detail::trim(std::string_view(line).substr(0, tab)));
    const auto e = vocab.find_entity(name);
    if (!e) throw ParseError("unknown entity '" + name + "'", lineno);
    if (rows[*e]) throw ParseError("duplicate entity '" + name + "'", lineno);

    std::vector<Scalar> values;
    for (const auto& field : detail::split(line.substr(tab + 1), ',')) {
      auto x = parse_double(field);
      if (!x) {
        throw ParseError("malformed component '" + field + "'", lineno);
      }
      if (!is_valid(s, *x)) {
        throw ParseError("component " + field + " is not valid in the " +
                             std::string(to_string(s)) + " semiring",
                         lineno);
      }
      values.push_back(*x);
    }
    if (!dim) {
      dim = values.size();
    } else if (*dim != values.size()) {
      throw ParseError("ragged row: expected " + std::to_string(*dim) +
                           " components, found " +
                           std::to_string(values.size()),
                       lineno);
    }
    rows[*e] = std::move(values);
  }
  for (std::size_t e = 0; e < ne; ++e) {
    if (!rows[e]) {
      throw ParseError("missing embedding for entity '" +
                       vocab.entity_name(e) + "'");
    }
  }
  if (!dim || *dim == 0) throw ParseError("embeddings file has no components");

  std::vector<Scalar> entries(*dim * ne);
  for (std::size_t e = 0; e < ne; ++e) {
    for (std::size_t i = 0; i < *dim; ++i) entries[i * ne + e] = (*rows[e])[i];
  }
  return EncodingMatrix(Matrix(s, {ne}, {*dim}, std::move(entries)));
}

EncodingMatrix load_embeddings(const std::filesystem::path& path,
                               const Vocabulary& vocab, Semiring s) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open embeddings '" + path.string() + "'");
  return parse_embeddings(in, vocab, s);
}

EncodingMatrix identity_encoding(const Vocabulary& vocab, Semiring s) {
  const std::size_t ne = vocab.num_entities();
  if (ne == 0) throw InvalidArgument("identity encoding of an empty vocabulary");
  return EncodingMatrix(identity(ne, s));
}

VerbMatrix build_verb_matrix(const EncodingMatrix& enc,
                             const KnowledgeGraph& kg,
                             const Vocabulary& vocab) {
  const Semiring s = enc.semiring();
  const std::size_t n = enc.dim();
  const std::size_t nr = vocab.num_relations();
  if (enc.num_entities() != vocab.num_entities()) {
    throw DimensionMismatch("encoding covers " +
                            std::to_string(enc.num_entities()) +
                            " entities, vocabulary has " +
                            std::to_string(vocab.num_entities()));
  }
  Matrix shell(s, {nr}, {n, n});
  std::vector<Scalar> entries(shell.entries().begin(), shell.entries().end());
  for (std::size_t v = 0; v < nr; ++v) {
    for (std::size_t pos : kg.with_relation(v)) {
      const Triple& t = kg.triples()[pos];
      auto sub = enc.column(t.s);
      auto obj = enc.column(t.o);
      for (std::size_t i = 0; i < n; ++i) {
        if (sub[i] == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) {
          Scalar& acc = entries[(i * n + j) * nr + v];
          acc = add(s, acc, mul(s, sub[i], obj[j]));
        }
      }
    }
  }
  return VerbMatrix(Matrix(s, {nr}, {n, n}, std::move(entries)));
}

Scalar similarity(const EncodingMatrix& enc, std::size_t e1, std::size_t e2) {
  return scalar_value(compose(enc.encode(e2), transpose(enc.encode(e1))));
}

NormalizedEncoding normalize_l1(const EncodingMatrix& enc) {
  if (enc.semiring() != Semiring::kReal) {
    throw SemiringMismatch("normalize_l1 requires the nonneg-real semiring");
  }
  const std::size_t n = enc.dim();
  const std::size_t ne = enc.num_entities();
  std::vector<Scalar> entries(enc.matrix().entries().begin(),
                              enc.matrix().entries().end());
  std::vector<std::size_t> zero_columns;
  for (std::size_t e = 0; e < ne; ++e) {
    Scalar total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += entries[i * ne + e];
    if (total == 0.0) {
      zero_columns.push_back(e);
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) entries[i * ne + e] /= total;
  }
  return {EncodingMatrix(Matrix(Semiring::kReal, {ne}, {n}, std::move(entries))),
          std::move(zero_columns)};
}

}  // namespace discocat
