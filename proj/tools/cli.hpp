#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "discocat/semiring.hpp"

namespace discocat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBudget = 3;

struct RunConfig {
  std::string kg_path;
  std::optional<std::string> embeddings_path;  // absent: identity encoding
  Semiring semiring = Semiring::kReal;
  std::optional<std::string> lemma_path;
  std::optional<std::string> constraints_path;
  bool normalize = false;
  std::string prefix;
  bool all = false;
  bool json = false;
};

/// Shortest decimal that round-trips, capped at 6 significant digits.
std::string format_scalar(Scalar value);

/// Runs one command line. `args` excludes the program name. Output goes to
/// `out`, diagnostics to `err`; `in` backs the "-" text operand.
int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err);

}  // namespace discocat::cli
