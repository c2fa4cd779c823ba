#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gammalab {

// Carrier elements are indices into a finite enumeration.
using Elem = int;
using Word = std::vector<Elem>;

// Requested work exceeds a configured bound.  Callers map this to an
// "unavailable" outcome, never to a pass or a fail.
class LimitError : public std::runtime_error {
 public:
  LimitError(const std::string& what, std::uint64_t requested, std::uint64_t bound);
  std::uint64_t requested() const noexcept { return requested_; }
  std::uint64_t bound() const noexcept { return bound_; }

 private:
  std::uint64_t requested_;
  std::uint64_t bound_;
};

// A law violation pinned to a concrete tuple of elements.  `at` uses a
// law-specific layout; `detail` renders it for humans.
struct Witness {
  std::string law;
  Word at;
  std::string detail;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Witness> failures;   // first witness per violated law
  std::vector<std::string> notes;  // coverage notes and informational findings
  std::uint64_t instances = 0;     // law instances examined

  void fail(Witness w);
  void note(std::string s);
  void merge(const ValidationReport& other);
  bool law_failed(const std::string& law_prefix) const;
  const Witness* witness_for(const std::string& law_prefix) const;
  std::string summary() const;
};

struct ScanOptions {
  bool fail_fast = false;  // stop after the first violated law
  int threads = 1;
  // Instance budget for the deep coherence scan; exceeding it degrades the
  // scan to the shallow family and records a coverage note.
  std::uint64_t coherence_budget = std::uint64_t(1) << 24;
};

// Smallest index in [0,total) where pred returns false, or nullopt when all
// hold.  pred must be pure; the result is deterministic for every thread
// count.
std::optional<std::uint64_t> first_failure(std::uint64_t total,
                                           const std::function<bool(std::uint64_t)>& pred,
                                           const ScanOptions& opts);

std::uint64_t ipow(std::uint64_t base, int exp);

// Fixed-radix digit packing for dense tables.  digits[0] is most significant.
void decode_mixed(std::uint64_t index, int radix, int digits, Word& out);
std::uint64_t encode_mixed(const Word& digits, int radix);

std::string render_word(const Word& w);

}  // namespace gammalab
