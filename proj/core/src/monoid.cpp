#include "gammalab/monoid.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "gammalab/detail/union_find.hpp"

namespace gammalab {

FiniteCommMonoid FiniteCommMonoid::from_rows(const std::vector<std::vector<Elem>>& rows, Elem zero) {
  FiniteCommMonoid m;
  m.size = int(rows.size());
  m.zero = zero;
  m.table.reserve(std::size_t(m.size) * std::size_t(m.size));
  for (const auto& row : rows) {
    if (int(row.size()) != m.size) throw std::invalid_argument("addition table is not square");
    m.table.insert(m.table.end(), row.begin(), row.end());
  }
  return m;
}

bool FiniteCommMonoid::complete() const {
  return std::none_of(table.begin(), table.end(), [](Elem e) { return e < 0; });
}

bool FiniteCommMonoid::idempotent() const {
  for (Elem a = 0; a < size; ++a) {
    if (!defined(a, a) || add(a, a) != a) return false;
  }
  return true;
}

std::string FiniteCommMonoid::label(Elem a) const {
  if (a >= 0 && std::size_t(a) < labels.size()) return labels[std::size_t(a)];
  std::ostringstream os;
  os << a;
  return os.str();
}

FiniteCommMonoid boolean_or_monoid() {
  FiniteCommMonoid m = FiniteCommMonoid::from_rows({{0, 1}, {1, 1}}, 0);
  m.labels = {"0", "1"};
  return m;
}

FiniteCommMonoid cyclic_monoid(int k) {
  if (k < 1) throw std::invalid_argument("cyclic_monoid needs k >= 1");
  FiniteCommMonoid m;
  m.size = k;
  m.zero = 0;
  m.table.resize(std::size_t(k) * std::size_t(k));
  for (Elem a = 0; a < k; ++a) {
    for (Elem b = 0; b < k; ++b) m.table[std::size_t(a) * std::size_t(k) + std::size_t(b)] = (a + b) % k;
  }
  return m;
}

FiniteCommMonoid max_chain_monoid(int k) {
  if (k < 1) throw std::invalid_argument("max_chain_monoid needs k >= 1");
  FiniteCommMonoid m;
  m.size = k;
  m.zero = 0;
  m.table.resize(std::size_t(k) * std::size_t(k));
  for (Elem a = 0; a < k; ++a) {
    for (Elem b = 0; b < k; ++b)
      m.table[std::size_t(a) * std::size_t(k) + std::size_t(b)] = a > b ? a : b;
  }
  return m;
}

FiniteCommMonoid product_monoid(const FiniteCommMonoid& a, const FiniteCommMonoid& b) {
  FiniteCommMonoid m;
  m.size = a.size * b.size;
  m.zero = a.zero * b.size + b.zero;
  m.table.assign(std::size_t(m.size) * std::size_t(m.size), -1);
  for (Elem x = 0; x < m.size; ++x) {
    for (Elem y = 0; y < m.size; ++y) {
      const Elem xa = x / b.size, xb = x % b.size;
      const Elem ya = y / b.size, yb = y % b.size;
      if (a.defined(xa, ya) && b.defined(xb, yb)) {
        m.table[std::size_t(x) * std::size_t(m.size) + std::size_t(y)] =
            a.add(xa, ya) * b.size + b.add(xb, yb);
      }
    }
  }
  m.labels.reserve(std::size_t(m.size));
  for (Elem x = 0; x < m.size; ++x) {
    m.labels.push_back("(" + a.label(x / b.size) + "," + b.label(x % b.size) + ")");
  }
  return m;
}

ValidationReport validate_comm_monoid(const FiniteCommMonoid& m, const ScanOptions& opts) {
  ValidationReport report;
  const int n = m.size;

  if (n <= 0 || m.table.size() != std::size_t(n) * std::size_t(n) || m.zero < 0 || m.zero >= n ||
      (!m.labels.empty() && int(m.labels.size()) != n)) {
    report.fail({"shape", {}, "carrier size, table dimensions, or zero index are inconsistent"});
    return report;
  }

  for (std::size_t i = 0; i < m.table.size(); ++i) {
    ++report.instances;
    const Elem e = m.table[i];
    if (e < -1 || e >= n) {
      report.fail({"entry-range", {Elem(i / std::size_t(n)), Elem(i % std::size_t(n))},
                   "table entry " + std::to_string(e) + " outside carrier"});
      return report;
    }
  }

  std::uint64_t undefined = std::uint64_t(std::count(m.table.begin(), m.table.end(), Elem(-1)));
  if (undefined > 0) {
    report.note("partial addition: " + std::to_string(undefined) + " undefined cell(s)");
  }

  for (Elem a = 0; a < n && !(opts.fail_fast && !report.ok); ++a) {
    ++report.instances;
    if (!m.defined(a, m.zero) || m.add(a, m.zero) != a) {
      report.fail({"zero-identity", {a},
                   m.label(a) + " + " + m.label(m.zero) + " != " + m.label(a)});
      break;
    }
  }

  if (!(opts.fail_fast && !report.ok)) {
    for (Elem a = 0; a < n; ++a) {
      bool done = false;
      for (Elem b = a + 1; b < n; ++b) {
        ++report.instances;
        if (m.add(a, b) != m.add(b, a)) {
          report.fail({"commutativity", {a, b},
                       m.label(a) + " + " + m.label(b) + " disagrees with the transpose"});
          done = true;
          break;
        }
      }
      if (done) break;
    }
  }

  if (!(opts.fail_fast && !report.ok)) {
    const std::uint64_t total = std::uint64_t(n) * std::uint64_t(n) * std::uint64_t(n);
    auto holds = [&m, n](std::uint64_t idx) {
      const Elem a = Elem(idx / (std::uint64_t(n) * std::uint64_t(n)));
      const Elem b = Elem((idx / std::uint64_t(n)) % std::uint64_t(n));
      const Elem c = Elem(idx % std::uint64_t(n));
      if (!m.defined(a, b) || !m.defined(b, c)) return true;
      const Elem ab = m.add(a, b), bc = m.add(b, c);
      if (!m.defined(ab, c) || !m.defined(a, bc)) return true;
      return m.add(ab, c) == m.add(a, bc);
    };
    report.instances += total;
    if (auto bad = first_failure(total, holds, opts)) {
      const Elem a = Elem(*bad / (std::uint64_t(n) * std::uint64_t(n)));
      const Elem b = Elem((*bad / std::uint64_t(n)) % std::uint64_t(n));
      const Elem c = Elem(*bad % std::uint64_t(n));
      report.fail({"associativity", {a, b, c},
                   "(" + m.label(a) + "+" + m.label(b) + ")+" + m.label(c) + " != " + m.label(a) +
                       "+(" + m.label(b) + "+" + m.label(c) + ")"});
    }
  }

  return report;
}

CongruenceRelation congruence_closure(const FiniteCommMonoid& m,
                                      const std::vector<std::pair<Elem, Elem>>& pairs) {
  const int n = m.size;
  detail::UnionFind uf(n);

  std::vector<std::pair<Elem, Elem>> pending = pairs;
  bool merged_since_scan = false;
  for (;;) {
    for (const auto& [a, b] : pending) merged_since_scan = uf.unite(a, b) || merged_since_scan;
    pending.clear();
    if (!merged_since_scan) break;
    merged_since_scan = false;

    // Defined cells with equal argument classes must agree: collisions in the
    // canonicalized cell map turn into fresh merges until a fixpoint.
    std::unordered_map<std::uint64_t, Elem> cells;
    cells.reserve(std::size_t(n) * std::size_t(n) / 2 + 1);
    for (Elem a = 0; a < n; ++a) {
      for (Elem b = a; b < n; ++b) {
        if (!m.defined(a, b)) continue;
        Elem ra = uf.find(a), rb = uf.find(b);
        if (ra > rb) std::swap(ra, rb);
        const std::uint64_t key = std::uint64_t(ra) * std::uint64_t(n) + std::uint64_t(rb);
        auto [it, fresh] = cells.try_emplace(key, m.add(a, b));
        if (!fresh && uf.find(it->second) != uf.find(m.add(a, b))) {
          pending.emplace_back(it->second, m.add(a, b));
        }
      }
    }
    if (pending.empty()) break;
  }

  CongruenceRelation rel;
  rel.universe = n;
  rel.class_of.assign(std::size_t(n), -1);
  for (Elem a = 0; a < n; ++a) {
    const Elem root = uf.find(a);
    if (rel.class_of[std::size_t(root)] < 0) {
      rel.class_of[std::size_t(root)] = rel.classes++;
      rel.representative.push_back(root);
    }
    rel.class_of[std::size_t(a)] = rel.class_of[std::size_t(root)];
  }
  return rel;
}

FiniteCommMonoid quotient_monoid(const FiniteCommMonoid& m, const CongruenceRelation& cong,
                                 QuotientStats* stats) {
  const int q = cong.classes;
  FiniteCommMonoid out;
  out.size = q;
  out.zero = cong.class_of[std::size_t(m.zero)];
  out.table.assign(std::size_t(q) * std::size_t(q), -1);
  std::vector<bool> saw_defined(std::size_t(q) * std::size_t(q), false);
  std::vector<bool> saw_undefined(std::size_t(q) * std::size_t(q), false);

  for (Elem a = 0; a < m.size; ++a) {
    for (Elem b = 0; b < m.size; ++b) {
      const std::size_t cell =
          std::size_t(cong.class_of[std::size_t(a)]) * std::size_t(q) + std::size_t(cong.class_of[std::size_t(b)]);
      if (!m.defined(a, b)) {
        saw_undefined[cell] = true;
        continue;
      }
      saw_defined[cell] = true;
      const Elem r = cong.class_of[std::size_t(m.add(a, b))];
      if (out.table[cell] < 0) {
        out.table[cell] = r;
      } else if (out.table[cell] != r) {
        throw std::logic_error("quotient_monoid: relation is not a congruence");
      }
    }
  }

  if (stats) {
    stats->undefined_cells = 0;
    stats->mixed_cells = 0;
    for (std::size_t cell = 0; cell < saw_defined.size(); ++cell) {
      if (!saw_defined[cell]) ++stats->undefined_cells;
      else if (saw_undefined[cell]) ++stats->mixed_cells;
    }
  }

  out.labels.reserve(std::size_t(q));
  for (int c = 0; c < q; ++c) out.labels.push_back("[" + m.label(cong.representative[std::size_t(c)]) + "]");
  return out;
}

std::string to_string(BuildStatus s) {
  return s == BuildStatus::Complete ? "complete" : "bound-exceeded";
}

PresentedQuotient presented_quotient(const FiniteCommMonoid& universe,
                                     const std::vector<std::pair<Elem, Elem>>& relations,
                                     bool universe_truncated) {
  PresentedQuotient pq;
  pq.congruence = congruence_closure(universe, relations);
  pq.quotient = quotient_monoid(universe, pq.congruence, &pq.stats);
  const bool total = pq.quotient.complete();
  pq.status = (universe_truncated || !total) ? BuildStatus::BoundExceeded : BuildStatus::Complete;
  pq.log.push_back("universe " + std::to_string(universe.size) + ", classes " +
                   std::to_string(pq.congruence.classes));
  if (universe_truncated) pq.log.push_back("universe truncated at its bound");
  if (pq.stats.undefined_cells > 0) {
    pq.log.push_back("quotient addition undefined on " + std::to_string(pq.stats.undefined_cells) +
                     " class pair(s)");
  }
  if (pq.stats.mixed_cells > 0) {
    pq.log.push_back("quotient addition partial on member pairs for " +
                     std::to_string(pq.stats.mixed_cells) + " class pair(s)");
  }
  return pq;
}

Elem TermUniverse::generator(int i) const {
  std::vector<int> want(std::size_t(generators), 0);
  want[std::size_t(i)] = 1;
  for (std::size_t e = 0; e < degrees.size(); ++e) {
    if (degrees[e] == want) return Elem(e);
  }
  throw std::logic_error("term universe is missing a generator");
}

TermUniverse bounded_term_universe(int generators, int bound, bool idempotent,
                                   std::uint64_t max_elements) {
  if (generators < 0 || bound < 0) throw std::invalid_argument("bounded_term_universe: negative shape");

  std::uint64_t count;
  if (idempotent) {
    if (generators >= 63) throw LimitError("term universe generators", std::uint64_t(generators), 62);
    count = std::uint64_t(1) << generators;
  } else {
    // C(generators + bound, bound), with overflow guarded by the cap.
    count = 1;
    for (int i = 1; i <= generators; ++i) {
      count = count * std::uint64_t(bound + i) / std::uint64_t(i);
      if (count > max_elements) break;
    }
  }
  if (count > max_elements) throw LimitError("term universe size", count, max_elements);

  TermUniverse u;
  u.generators = generators;
  u.bound = bound;
  u.idempotent = idempotent;

  // Enumerate degree vectors within the degree budget, then order by total
  // degree and lexicographic tie-break so the empty term lands at index 0.
  std::vector<std::vector<int>> vecs;
  std::vector<int> cur(std::size_t(generators), 0);
  const std::function<void(int, int)> emit = [&](int pos, int budget) {
    if (pos == generators) {
      vecs.push_back(cur);
      return;
    }
    const int cap = idempotent ? std::min(1, budget) : budget;
    for (int d = 0; d <= cap; ++d) {
      cur[std::size_t(pos)] = d;
      emit(pos + 1, idempotent ? budget : budget - d);
    }
    cur[std::size_t(pos)] = 0;
  };
  emit(0, idempotent ? 1 : bound);
  std::sort(vecs.begin(), vecs.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
    const int sa = std::accumulate(a.begin(), a.end(), 0);
    const int sb = std::accumulate(b.begin(), b.end(), 0);
    if (sa != sb) return sa < sb;
    return a < b;
  });

  u.degrees = vecs;
  std::map<std::vector<int>, Elem> index;
  for (std::size_t e = 0; e < vecs.size(); ++e) index[vecs[e]] = Elem(e);

  const int n = int(vecs.size());
  u.monoid.size = n;
  u.monoid.zero = 0;
  u.monoid.table.assign(std::size_t(n) * std::size_t(n), -1);
  for (Elem a = 0; a < n; ++a) {
    for (Elem b = 0; b < n; ++b) {
      std::vector<int> sum(std::size_t(generators), 0);
      for (int i = 0; i < generators; ++i) {
        sum[std::size_t(i)] = idempotent ? (vecs[std::size_t(a)][std::size_t(i)] | vecs[std::size_t(b)][std::size_t(i)])
                                         : (vecs[std::size_t(a)][std::size_t(i)] + vecs[std::size_t(b)][std::size_t(i)]);
      }
      auto it = index.find(sum);
      if (it != index.end()) {
        u.monoid.table[std::size_t(a) * std::size_t(n) + std::size_t(b)] = it->second;
      } else {
        u.truncated = true;
      }
    }
  }

  u.monoid.labels.reserve(std::size_t(n));
  for (const auto& v : vecs) {
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < generators; ++i) {
      for (int r = 0; r < v[std::size_t(i)]; ++r) {
        if (!first) os << "+";
        os << "g" << i;
        first = false;
      }
    }
    if (first) os << "0";
    u.monoid.labels.push_back(os.str());
  }
  return u;
}

}  // namespace gammalab
