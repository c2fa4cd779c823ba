#include "gammalab/common.hpp"

#include <atomic>
#include <sstream>
#include <thread>

namespace gammalab {

namespace {

std::string limit_message(const std::string& what, std::uint64_t requested, std::uint64_t bound) {
  std::ostringstream os;
  os << what << " (requested " << requested << ", bound " << bound << ")";
  return os.str();
}

}  // namespace

LimitError::LimitError(const std::string& what, std::uint64_t requested, std::uint64_t bound)
    : std::runtime_error(limit_message(what, requested, bound)),
      requested_(requested),
      bound_(bound) {}

void ValidationReport::fail(Witness w) {
  ok = false;
  failures.push_back(std::move(w));
}

void ValidationReport::note(std::string s) { notes.push_back(std::move(s)); }

void ValidationReport::merge(const ValidationReport& other) {
  ok = ok && other.ok;
  failures.insert(failures.end(), other.failures.begin(), other.failures.end());
  notes.insert(notes.end(), other.notes.begin(), other.notes.end());
  instances += other.instances;
}

bool ValidationReport::law_failed(const std::string& law_prefix) const {
  return witness_for(law_prefix) != nullptr;
}

const Witness* ValidationReport::witness_for(const std::string& law_prefix) const {
  for (const Witness& w : failures) {
    if (w.law.compare(0, law_prefix.size(), law_prefix) == 0) return &w;
  }
  return nullptr;
}

std::string ValidationReport::summary() const {
  if (ok) return "ok";
  std::ostringstream os;
  os << failures.size() << " law(s) violated:";
  for (const Witness& w : failures) os << " " << w.law;
  return os.str();
}

std::optional<std::uint64_t> first_failure(std::uint64_t total,
                                           const std::function<bool(std::uint64_t)>& pred,
                                           const ScanOptions& opts) {
  const int threads = std::max(1, opts.threads);
  if (threads == 1 || total < 4096) {
    for (std::uint64_t i = 0; i < total; ++i) {
      if (!pred(i)) return i;
    }
    return std::nullopt;
  }

  // Chunks are claimed in increasing order; `best` only ever holds verified
  // failing indices, so skipping chunks at or past it cannot lose the minimum.
  std::atomic<std::uint64_t> best{total};
  std::atomic<std::uint64_t> next{0};
  const std::uint64_t chunk = 4096;
  auto worker = [&]() {
    for (;;) {
      const std::uint64_t lo = next.fetch_add(chunk);
      if (lo >= total || lo >= best.load(std::memory_order_relaxed)) return;
      const std::uint64_t hi = std::min(total, lo + chunk);
      for (std::uint64_t i = lo; i < hi; ++i) {
        if (i >= best.load(std::memory_order_relaxed)) break;
        if (!pred(i)) {
          std::uint64_t cur = best.load();
          while (i < cur && !best.compare_exchange_weak(cur, i)) {
          }
          break;
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  const std::uint64_t found = best.load();
  if (found < total) return found;
  return std::nullopt;
}

std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

void decode_mixed(std::uint64_t index, int radix, int digits, Word& out) {
  out.assign(std::size_t(digits), 0);
  for (int i = digits - 1; i >= 0; --i) {
    out[std::size_t(i)] = Elem(index % std::uint64_t(radix));
    index /= std::uint64_t(radix);
  }
}

std::uint64_t encode_mixed(const Word& digits, int radix) {
  std::uint64_t acc = 0;
  for (Elem d : digits) acc = acc * std::uint64_t(radix) + std::uint64_t(d);
  return acc;
}

std::string render_word(const Word& w) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) os << ",";
    os << w[i];
  }
  os << ")";
  return os.str();
}

}  // namespace gammalab
