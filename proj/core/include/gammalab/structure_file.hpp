#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gammalab/exact.hpp"
#include "gammalab/free_module.hpp"
#include "gammalab/tensor_hom.hpp"

namespace gammalab {

// What is wrong with a structure file, pinned to a 1-based line and column.
// Limit marks a declaration that asked for more than the configured bounds
// allow; it maps to an "unavailable" outcome, the other kinds to structural
// errors.
enum class DiagnosticKind { Parse, DanglingReference, DimensionMismatch, Limit };

std::string to_string(DiagnosticKind k);

class StructureError : public std::runtime_error {
 public:
  StructureError(DiagnosticKind kind, int line, int column, const std::string& message);
  DiagnosticKind kind() const noexcept { return kind_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  DiagnosticKind kind_;
  int line_;
  int column_;
  std::string message_;  // bare message, location() renders the prefix
};

// One directive line, kept textually.  Names were resolved against the
// declarations (and the names promised by earlier `as` clauses) while
// parsing; execution resolves them again against the live environment.
struct Directive {
  int line = 0;
  std::string verb;
  std::vector<std::string> args;
};

// A declaration in normalized textual form, for canonical re-emission.
struct DeclRecord {
  std::string header;              // e.g. "monoid bool {"
  std::vector<std::string> lines;  // body lines, already indented
};

struct StructureFile {
  std::string name;  // display name, usually the file's basename
  std::map<std::string, FiniteCommMonoid> monoids;
  std::map<std::string, SemiringPtr> semirings;
  std::map<std::string, ModulePtr> modules;
  std::map<std::string, ModuleMorphism> morphisms;
  std::map<std::string, Conflation> conflations;
  std::vector<DeclRecord> declarations;  // file order
  std::vector<Directive> directives;
};

struct RunLimits {
  std::uint64_t max_carrier = 16;
  std::uint64_t max_tensor_classes = 4096;
  std::uint64_t max_hom_enumeration = std::uint64_t(1) << 20;
};

// Parses declarations and directives.  Shape problems are caught here: every
// name must be declared before it is referenced, every table must match the
// size its carriers dictate, every entry must be in range.  Law violations
// are not parse errors; they are what check directives are for, so a module
// with a broken axiom parses fine and fails its check.  Throws
// StructureError on the first problem.
StructureFile parse_structure_file(const std::string& text, const std::string& display_name,
                                   const RunLimits& limits = {});

// The canonical serialization of the parsed object graph: the same grammar,
// normalized byte-for-byte (fixed key order, indentation, and table layout),
// so canonicalization is idempotent and the output is itself a valid input.
std::string canonical_structure_file(const StructureFile& file);

enum class Verdict { Pass, Fail, Unavailable, Error };

std::string to_string(Verdict v);

struct DirectiveResult {
  int line = 0;
  std::string verb;
  std::vector<std::string> args;
  Verdict verdict = Verdict::Pass;
  // Unavailable: "bound-exceeded" (a construction was truncated) or "limit"
  // (an enumeration exceeded its cap).  Error: what went wrong.
  std::string reason;
  ValidationReport report;  // witnesses, notes and instance counts from the engine
  std::vector<std::pair<std::string, std::string>> details;  // small named facts
};

struct RunResult {
  std::vector<DirectiveResult> directives;
  int pass = 0;
  int fail = 0;
  int unavailable = 0;
  int error = 0;

  // 3 when any directive errored, else 1 when any failed, else 2 when any
  // came out unavailable, else 0.
  int exit_code() const;
};

struct RunOptions {
  RunLimits limits;
  int threads = 1;
  bool fail_fast = false;  // stop after the first directive that does not pass
};

// Executes the directives in file order.  Engine limits surface as
// unavailable verdicts, law violations as fail verdicts with witnesses, and
// misuse (an argument out of range, a name whose producing directive threw)
// as error verdicts; nothing stops the run unless fail_fast is set.
RunResult run_checks(const StructureFile& file, const RunOptions& opts = {});

// Static reference text for the command line.
const std::vector<std::pair<std::string, std::string>>& directive_help();
std::string format_reference();

}  // namespace gammalab
