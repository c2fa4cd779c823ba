#include "gammalab/free_module.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace gammalab {

namespace {

// Contract the all-ring window [p, p+n-1] through the parent product.
void contract_at(const GammaSemiring& S, FreeTerm& t, int p) {
  const int n = S.arity;
  Word args(t.letters.begin() + p, t.letters.begin() + p + n);
  Word ps(t.params.begin() + p, t.params.begin() + p + n - 1);
  const Elem v = S.mu(args, ps);
  t.letters.erase(t.letters.begin() + p + 1, t.letters.begin() + p + n);
  t.letters[std::size_t(p)] = v;
  t.params.erase(t.params.begin() + p, t.params.begin() + p + n - 1);
  if (t.gpos > p) t.gpos -= n - 1;
}

// Leftmost-window contraction to a fixpoint: the canonical normal form.
void normalize_greedy(const GammaSemiring& S, FreeTerm& t) {
  const int n = S.arity;
  for (;;) {
    const int len = int(t.letters.size());
    int pure = -1;
    for (int p = 0; p + n <= len; ++p) {
      if (t.gpos >= p && t.gpos <= p + n - 1) continue;
      pure = p;
      break;
    }
    if (pure < 0) return;
    contract_at(S, t, pure);
  }
}

// A word with a zero ring letter is the zero element of every module: each
// complete evaluation path consumes the letter either through the parent
// product (absorbing) or as a ring argument of the action (absorbing), and
// the module zero absorbs from there on.
bool is_zero_term(const GammaSemiring& S, const FreeTerm& t) {
  for (int i = 0; i < int(t.letters.size()); ++i) {
    if (i != t.gpos && t.letters[std::size_t(i)] == S.T.zero) return true;
  }
  return false;
}

// Unnormalized wrap: the term becomes slot `slot` of a fresh product window.
FreeTerm wrap_raw(const GammaSemiring&, int slot, const FreeTerm& t, const Word& targs,
                  const Word& params) {
  FreeTerm w;
  w.gen = t.gen;
  w.gpos = t.gpos + slot - 1;
  w.letters.clear();
  w.letters.insert(w.letters.end(), targs.begin(), targs.begin() + (slot - 1));
  w.letters.insert(w.letters.end(), t.letters.begin(), t.letters.end());
  w.letters.insert(w.letters.end(), targs.begin() + (slot - 1), targs.end());
  w.params.insert(w.params.end(), params.begin(), params.begin() + (slot - 1));
  w.params.insert(w.params.end(), t.params.begin(), t.params.end());
  w.params.insert(w.params.end(), params.begin() + (slot - 1), params.end());
  return w;
}

std::string term_key(const FreeTerm& t) {
  std::ostringstream os;
  os << t.gen << "@" << t.gpos << "|";
  for (int i = 0; i < int(t.letters.size()); ++i) {
    os << (i == t.gpos ? Elem(-1) : t.letters[std::size_t(i)]) << ",";
  }
  os << "|";
  for (Elem p : t.params) os << p << ",";
  return os.str();
}

// Every complete contraction outcome of a word, one per maximal chain of
// window choices.  Words stay short (at most one wrap above a normal form),
// so the recursion is tiny.
void all_normal_forms(const GammaSemiring& S, const FreeTerm& t, std::vector<FreeTerm>& out) {
  const int n = S.arity;
  const int len = int(t.letters.size());
  bool branched = false;
  for (int p = 0; p + n <= len; ++p) {
    if (t.gpos >= p && t.gpos <= p + n - 1) continue;
    FreeTerm u = t;
    contract_at(S, u, p);
    all_normal_forms(S, u, out);
    branched = true;
  }
  if (!branched) out.push_back(t);
}

// Evaluate a term word in a concrete module by following one legal complete
// path: contract ring windows first, then apply the action once only the
// generator window is left.  The module's path-agreement law makes the choice
// of path irrelevant.
Elem eval_term(const GammaSemiring& S, const PositionalModule& M, int slot, FreeTerm t,
               Elem seed) {
  const int n = S.arity;
  Elem mval = seed;
  for (;;) {
    const int len = int(t.letters.size());
    if (len == 1) return mval;
    int pure = -1;
    for (int p = 0; p + n <= len; ++p) {
      if (t.gpos >= p && t.gpos <= p + n - 1) continue;
      pure = p;
      break;
    }
    if (pure >= 0) {
      contract_at(S, t, pure);
      continue;
    }
    const int start = t.gpos - (slot - 1);
    if (start < 0 || start + n - 1 >= len) {
      throw std::logic_error("free term word has no legal evaluation step");
    }
    Word targs, params;
    targs.reserve(std::size_t(n - 1));
    params.reserve(std::size_t(n - 1));
    for (int i = start; i < start + n; ++i) {
      if (i != t.gpos) targs.push_back(t.letters[std::size_t(i)]);
    }
    for (int i = start; i < start + n - 1; ++i) params.push_back(t.params[std::size_t(i)]);
    mval = M.act(0, targs, mval, params);
    t.letters.erase(t.letters.begin() + start + 1, t.letters.begin() + start + n);
    t.letters[std::size_t(start)] = -1;
    t.params.erase(t.params.begin() + start, t.params.begin() + start + n - 1);
    t.gpos = start;
  }
}

}  // namespace

std::string render_free_term(const GammaSemiring& S, int slot, const FreeTerm& t,
                             const std::vector<std::string>& generators) {
  const int n = S.arity;
  const int len = int(t.letters.size());
  std::string gname = "<";
  gname += (t.gen >= 0 && t.gen < int(generators.size())) ? generators[std::size_t(t.gen)] : "?";
  gname += ">";
  if (len == 1) return gname;

  const bool tower = (len - 1) % (n - 1) == 0 && t.gpos == (slot - 1) * ((len - 1) / (n - 1));
  if (!tower) {
    // Not a balanced wrap tower; spell the word out flat.
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < len; ++i) {
      if (i) os << " ";
      if (i == t.gpos) os << gname;
      else os << S.T.label(t.letters[std::size_t(i)]);
    }
    os << ";";
    for (int i = 0; i + 1 < len; ++i) os << (i ? "," : " ") << S.Gamma.label(t.params[std::size_t(i)]);
    os << ")";
    return os.str();
  }

  const std::function<std::string(int, int)> go = [&](int lo, int hi) -> std::string {
    if (lo == hi) return gname;
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < slot - 1; ++i) os << S.T.label(t.letters[std::size_t(lo + i)]) << ",";
    os << go(lo + slot - 1, hi - (n - slot));
    for (int i = 0; i < n - slot; ++i) {
      os << "," << S.T.label(t.letters[std::size_t(hi - (n - slot) + 1 + i)]);
    }
    os << ";";
    bool first = true;
    for (int i = 0; i < slot - 1; ++i) {
      if (!first) os << ",";
      os << S.Gamma.label(t.params[std::size_t(lo + i)]);
      first = false;
    }
    for (int i = 0; i < n - slot; ++i) {
      if (!first) os << ",";
      os << S.Gamma.label(t.params[std::size_t(hi - (n - slot) + i)]);
      first = false;
    }
    os << "]";
    return os.str();
  };
  return go(0, len - 1);
}

FreeModuleBounded free_module(const std::vector<std::string>& generators, SemiringPtr parent,
                              int slot, int depth, int sum_bound, std::uint64_t max_universe) {
  if (!parent) throw std::invalid_argument("free_module: parent is null");
  const GammaSemiring& S = *parent;
  const int n = S.arity;
  if (slot < 1 || slot > n) throw std::invalid_argument("free_module: slot out of range");
  if (depth < 1) throw std::invalid_argument("free_module: depth counts term height, at least 1");
  if (sum_bound < 2) throw std::invalid_argument("free_module: sum bound must be at least 2");

  FreeModuleBounded F;
  F.generators = generators;
  F.slot = slot;
  F.depth = depth;

  // --- normal-form primitives, breadth-first in wrap count --------------------
  std::map<std::string, int> seen;
  const auto intern = [&](const FreeTerm& t) {
    const auto [it, fresh] = seen.emplace(term_key(t), int(F.primitives.size()));
    if (fresh) {
      if (std::uint64_t(F.primitives.size()) >= max_universe) {
        throw LimitError("free module primitive count", std::uint64_t(F.primitives.size()) + 1,
                         max_universe);
      }
      F.primitives.push_back(t);
    }
    return std::pair<int, bool>(it->second, fresh);
  };

  std::vector<int> frontier;
  for (int g = 0; g < int(generators.size()); ++g) {
    FreeTerm bare;
    bare.gen = g;
    bare.gpos = 0;
    bare.letters = {-1};
    bare.params.clear();
    frontier.push_back(intern(bare).first);
  }

  const std::uint64_t tpow = ipow(std::uint64_t(S.tsize()), n - 1);
  const std::uint64_t gpow = ipow(std::uint64_t(S.gsize()), n - 1);
  const std::uint64_t contexts = tpow * gpow;
  Word ta(std::size_t(n - 1), 0), pa(std::size_t(n - 1), 0);

  for (int level = 2; level <= depth; ++level) {
    std::vector<int> next;
    for (int p : frontier) {
      const FreeTerm base = F.primitives[std::size_t(p)];  // copy: the vector grows
      for (std::uint64_t c = 0; c < contexts; ++c) {
        decode_mixed(c / gpow, S.tsize(), n - 1, ta);
        decode_mixed(c % gpow, S.gsize(), n - 1, pa);
        FreeTerm w = wrap_raw(S, slot, base, ta, pa);
        normalize_greedy(S, w);
        if (is_zero_term(S, w)) continue;
        const auto [id, fresh] = intern(w);
        if (fresh) next.push_back(id);
      }
    }
    frontier = std::move(next);
  }
  const int prims = int(F.primitives.size());

  // --- bounded formal-sum universe, demoting the bound to fit the cap ---------
  int bound = sum_bound;
  for (;;) {
    try {
      F.universe = bounded_term_universe(prims, bound, false, max_universe);
      break;
    } catch (const LimitError&) {
      if (bound <= 2) throw;
      --bound;
    }
  }
  F.sum_bound = bound;
  F.log.push_back("primitive terms: " + std::to_string(prims) + " at depth " +
                  std::to_string(depth));
  if (bound < sum_bound) {
    F.log.push_back("sum bound demoted to " + std::to_string(bound) +
                    " to fit the universe cap of " + std::to_string(max_universe));
  }

  // Relabel the universe with rendered terms so quotient labels read well.
  const int usize = F.universe.monoid.size;
  for (Elem e = 0; e < usize; ++e) {
    const std::vector<int>& deg = F.universe.degrees[std::size_t(e)];
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < prims; ++i) {
      if (deg[std::size_t(i)] == 0) continue;
      if (!first) os << " + ";
      if (deg[std::size_t(i)] > 1) os << deg[std::size_t(i)] << "*";
      os << render_free_term(S, slot, F.primitives[std::size_t(i)], generators);
      first = false;
    }
    if (first) os << "0";
    F.universe.monoid.labels[std::size_t(e)] = os.str();
  }

  std::map<std::vector<int>, Elem> dindex;
  for (std::size_t e = 0; e < F.universe.degrees.size(); ++e) {
    dindex[F.universe.degrees[e]] = Elem(e);
  }

  // --- wrap images and the context action on the whole universe ---------------
  // img[c][p]: primitive index of the normalized wrap, -2 when it normalizes
  // to zero, -1 when it leaves the bounded primitive set.
  std::vector<std::vector<int>> img(std::size_t(contexts), std::vector<int>(std::size_t(prims), -1));
  std::uint64_t out_of_scope = 0;
  for (std::uint64_t c = 0; c < contexts; ++c) {
    decode_mixed(c / gpow, S.tsize(), n - 1, ta);
    decode_mixed(c % gpow, S.gsize(), n - 1, pa);
    for (int p = 0; p < prims; ++p) {
      FreeTerm w = wrap_raw(S, slot, F.primitives[std::size_t(p)], ta, pa);
      normalize_greedy(S, w);
      if (is_zero_term(S, w)) {
        img[std::size_t(c)][std::size_t(p)] = -2;
        continue;
      }
      const auto it = seen.find(term_key(w));
      if (it == seen.end()) ++out_of_scope;
      else img[std::size_t(c)][std::size_t(p)] = it->second;
    }
  }

  // actE[c][u]: the universe element the context sends u to, -1 when some
  // member wrap escapes the primitive set.  Always lands inside the universe
  // otherwise: wrapping cannot raise the total degree.
  std::vector<std::vector<Elem>> actE(std::size_t(contexts), std::vector<Elem>(std::size_t(usize), -1));
  {
    std::vector<int> deg2(std::size_t(prims), 0);
    for (std::uint64_t c = 0; c < contexts; ++c) {
      for (Elem u = 0; u < usize; ++u) {
        const std::vector<int>& deg = F.universe.degrees[std::size_t(u)];
        std::fill(deg2.begin(), deg2.end(), 0);
        bool ok = true;
        for (int p = 0; p < prims; ++p) {
          if (deg[std::size_t(p)] == 0) continue;
          const int ip = img[std::size_t(c)][std::size_t(p)];
          if (ip == -1) {
            ok = false;
            break;
          }
          if (ip >= 0) deg2[std::size_t(ip)] += deg[std::size_t(p)];
        }
        if (!ok) continue;
        const auto it = dindex.find(deg2);
        if (it == dindex.end()) throw std::logic_error("wrapped sum left the term universe");
        actE[std::size_t(c)][std::size_t(u)] = it->second;
      }
    }
  }

  // --- relations the module laws force on formal sums -------------------------
  std::vector<Elem> single(std::size_t(prims), 0);
  for (int p = 0; p < prims; ++p) single[std::size_t(p)] = F.universe.generator(p);
  const auto wrap_elem = [&](int p, std::uint64_t c) -> Elem {
    const int ip = img[std::size_t(c)][std::size_t(p)];
    if (ip == -2) return 0;
    if (ip == -1) return -1;
    return single[std::size_t(ip)];
  };

  std::vector<std::pair<Elem, Elem>> rels;
  const bool collapse = S.T.idempotent() && S.Gamma.idempotent();
  if (collapse) {
    for (int p = 0; p < prims; ++p) {
      const Elem e = single[std::size_t(p)];
      const Elem ee = F.universe.monoid.add(e, e);
      if (ee >= 0 && ee != e) rels.push_back({e, ee});
    }
    F.log.push_back("collapsing x+x = x (both parent additions are idempotent)");
  }

  for (int p = 0; p < prims; ++p) {
    for (std::uint64_t c = 0; c < contexts; ++c) {
      decode_mixed(c / gpow, S.tsize(), n - 1, ta);
      decode_mixed(c % gpow, S.gsize(), n - 1, pa);

      // Additivity in each ring coordinate.
      for (int r = 0; r < n - 1; ++r) {
        Word tb = ta;
        for (Elem y = ta[std::size_t(r)]; y < S.tsize(); ++y) {
          tb[std::size_t(r)] = S.T.add(ta[std::size_t(r)], y);
          const std::uint64_t cs = encode_mixed(tb, S.tsize()) * gpow + (c % gpow);
          tb[std::size_t(r)] = y;
          const std::uint64_t cy = encode_mixed(tb, S.tsize()) * gpow + (c % gpow);
          const Elem lhs = wrap_elem(p, cs);
          const Elem ex = wrap_elem(p, c);
          const Elem ey = wrap_elem(p, cy);
          if (lhs < 0 || ex < 0 || ey < 0) {
            ++out_of_scope;
            continue;
          }
          const Elem sum = F.universe.monoid.add(ex, ey);
          if (sum < 0) {
            ++out_of_scope;
            continue;
          }
          if (lhs != sum) rels.push_back({lhs, sum});
        }
      }

      // Additivity in each parameter coordinate.
      for (int r = 0; r < n - 1; ++r) {
        Word pb = pa;
        for (Elem y = pa[std::size_t(r)]; y < S.gsize(); ++y) {
          pb[std::size_t(r)] = S.Gamma.add(pa[std::size_t(r)], y);
          const std::uint64_t cs = (c / gpow) * gpow + encode_mixed(pb, S.gsize());
          pb[std::size_t(r)] = y;
          const std::uint64_t cy = (c / gpow) * gpow + encode_mixed(pb, S.gsize());
          const Elem lhs = wrap_elem(p, cs);
          const Elem ex = wrap_elem(p, c);
          const Elem ey = wrap_elem(p, cy);
          if (lhs < 0 || ex < 0 || ey < 0) {
            ++out_of_scope;
            continue;
          }
          const Elem sum = F.universe.monoid.add(ex, ey);
          if (sum < 0) {
            ++out_of_scope;
            continue;
          }
          if (lhs != sum) rels.push_back({lhs, sum});
        }
      }

      // Agreement of every contraction order of the wrapped word.
      bool zero_ctx = false;
      for (Elem x : ta) zero_ctx = zero_ctx || x == S.T.zero;
      if (zero_ctx) continue;  // every path lands on zero
      FreeTerm w = wrap_raw(S, slot, F.primitives[std::size_t(p)], ta, pa);
      std::vector<FreeTerm> outs;
      all_normal_forms(S, w, outs);
      if (outs.size() <= 1) continue;
      Elem base_e = -1;
      for (const FreeTerm& o : outs) {
        Elem e;
        if (is_zero_term(S, o)) {
          e = 0;
        } else {
          const auto it = seen.find(term_key(o));
          if (it == seen.end()) {
            ++out_of_scope;
            continue;
          }
          e = single[std::size_t(it->second)];
        }
        if (base_e < 0) base_e = e;
        else if (e != base_e) rels.push_back({base_e, e});
      }
    }
  }

  // --- close under action compatibility: related elements act alike -----------
  CongruenceRelation cong = congruence_closure(F.universe.monoid, rels);
  int rounds = 0;
  for (;;) {
    bool grew = false;
    std::vector<Elem> anchor;
    for (std::uint64_t c = 0; c < contexts; ++c) {
      anchor.assign(std::size_t(cong.classes), -1);
      for (Elem u = 0; u < usize; ++u) {
        const Elem a = actE[std::size_t(c)][std::size_t(u)];
        if (a < 0) continue;
        const Elem k = cong.class_of[std::size_t(u)];
        if (anchor[std::size_t(k)] < 0) {
          anchor[std::size_t(k)] = a;
        } else if (cong.class_of[std::size_t(a)] !=
                   cong.class_of[std::size_t(anchor[std::size_t(k)])]) {
          rels.push_back({a, anchor[std::size_t(k)]});
          grew = true;
        }
      }
    }
    if (!grew) break;
    cong = congruence_closure(F.universe.monoid, rels);
    ++rounds;
  }
  if (rounds > 0) {
    F.log.push_back("action compatibility closed after " + std::to_string(rounds) +
                    " extra round(s)");
  }

  PresentedQuotient pq = presented_quotient(F.universe.monoid, rels, F.universe.truncated);
  F.congruence = pq.congruence;
  F.status = pq.status;
  F.stats = pq.stats;
  F.log.push_back("relations: " + std::to_string(rels.size()));
  if (out_of_scope > 0) {
    F.log.push_back(std::to_string(out_of_scope) +
                    " law instance(s) fell outside the bounded universe and were skipped");
  }
  for (const std::string& line : pq.log) F.log.push_back(line);

  // --- assemble the module -----------------------------------------------------
  auto M = std::make_shared<PositionalModule>();
  M->parent = parent;
  M->carrier = pq.quotient;
  const int q = pq.quotient.size;
  ActionSlot act;
  act.slot = slot;
  act.table.assign(std::size_t(tpow) * std::size_t(q) * std::size_t(gpow), -1);
  for (std::uint64_t ti = 0; ti < tpow; ++ti) {
    for (std::uint64_t gi = 0; gi < gpow; ++gi) {
      const std::uint64_t c = ti * gpow + gi;
      for (Elem u = 0; u < usize; ++u) {
        const Elem a = actE[std::size_t(c)][std::size_t(u)];
        if (a < 0) continue;
        const Elem k = pq.congruence.class_of[std::size_t(u)];
        const Elem v = pq.congruence.class_of[std::size_t(a)];
        const std::size_t cell = (std::size_t(ti) * std::size_t(q) + std::size_t(k)) * std::size_t(gpow) + std::size_t(gi);
        if (act.table[cell] == -1) act.table[cell] = v;
        else if (act.table[cell] != v) throw std::logic_error("free module action escaped its congruence");
      }
    }
  }
  M->actions = {act};
  {
    std::ostringstream os;
    os << "free({";
    for (std::size_t i = 0; i < generators.size(); ++i) os << (i ? "," : "") << generators[i];
    os << "}; slot " << slot << ", depth " << depth << ")";
    M->provenance = os.str();
  }
  F.module = M;

  F.insertion.reserve(generators.size());
  for (int g = 0; g < int(generators.size()); ++g) {
    F.insertion.push_back(pq.congruence.class_of[std::size_t(single[std::size_t(g)])]);
  }
  return F;
}

ModuleMorphism extend_morphism(const FreeModuleBounded& F, const std::vector<Elem>& phi,
                               ModulePtr target) {
  if (!F.module || !target) throw std::invalid_argument("extend_morphism: missing module");
  const GammaSemiring& S = *F.module->parent;
  if (!same_parent(S, *target->parent)) {
    throw std::invalid_argument("extend_morphism: target lives over a different parent");
  }
  if (target->actions.size() != 1 || target->actions[0].slot != F.slot) {
    throw std::invalid_argument("extend_morphism: target action does not sit at the free slot");
  }
  if (phi.size() != F.generators.size()) {
    throw std::invalid_argument("extend_morphism: one value per generator required");
  }
  for (Elem v : phi) {
    if (v < 0 || v >= target->msize()) {
      throw std::invalid_argument("extend_morphism: generator value out of range");
    }
  }

  const int prims = int(F.primitives.size());
  std::vector<Elem> pval(std::size_t(prims), 0);
  for (int p = 0; p < prims; ++p) {
    const FreeTerm& t = F.primitives[std::size_t(p)];
    pval[std::size_t(p)] = eval_term(S, *target, F.slot, t, phi[std::size_t(t.gen)]);
  }

  std::vector<Elem> map(std::size_t(F.module->msize()), -1);
  for (Elem u = 0; u < F.universe.monoid.size; ++u) {
    const std::vector<int>& deg = F.universe.degrees[std::size_t(u)];
    Elem acc = target->carrier.zero;
    bool ok = true;
    for (int p = 0; p < prims && ok; ++p) {
      for (int r = 0; r < deg[std::size_t(p)]; ++r) {
        acc = target->carrier.add(acc, pval[std::size_t(p)]);
        if (acc < 0) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) continue;  // the target sum is undefined; another member pins the class
    const Elem k = F.congruence.class_of[std::size_t(u)];
    if (map[std::size_t(k)] == -1) map[std::size_t(k)] = acc;
    else if (map[std::size_t(k)] != acc) throw std::logic_error("free module classes disagree in the target");
  }
  for (Elem k = 0; k < F.module->msize(); ++k) {
    if (map[std::size_t(k)] < 0) throw std::logic_error("free module class has no evaluable member");
  }
  return table_morphism(F.module, target, std::move(map));
}

ValidationReport check_representability(const FreeModuleBounded& F, ModulePtr target,
                                        const ScanOptions& opts, std::uint64_t max_maps) {
  ValidationReport report;
  if (!F.module || !target) throw std::invalid_argument("check_representability: missing module");
  const int tsize = target->msize();
  const int gens = int(F.generators.size());

  std::uint64_t maps_total = 1;
  for (int i = 0; i < gens; ++i) {
    maps_total *= std::uint64_t(tsize);
    if (maps_total > max_maps) {
      throw LimitError("generator assignment count", maps_total, max_maps);
    }
  }

  // Surjectivity: every assignment extends to a validated morphism that
  // restricts back to it.  Witness layout: at = the assignment word.
  Word phi(std::size_t(gens), 0);
  for (std::uint64_t a = 0; a < maps_total; ++a) {
    decode_mixed(a, tsize, gens, phi);
    const ModuleMorphism f = extend_morphism(F, phi, target);
    const ValidationReport vr = validate_morphism(f, opts);
    report.instances += vr.instances + 1;
    if (!vr.ok) {
      report.fail({"extend/validate", phi,
                   "assignment " + render_word(phi) + " does not extend to a morphism: " +
                       vr.failures.front().law});
      if (opts.fail_fast) return report;
      continue;
    }
    for (int i = 0; i < gens; ++i) {
      if (f.map[std::size_t(F.insertion[std::size_t(i)])] != phi[std::size_t(i)]) {
        report.fail({"extend/restriction", phi,
                     "extension of " + render_word(phi) + " restricts to a different assignment"});
        break;
      }
    }
    if (!report.ok && opts.fail_fast) return report;
  }
  report.note("generator assignments extended and validated: " + std::to_string(maps_total));

  // Injectivity: each class is reachable from zero and the insertions under
  // defined additions and defined actions, so a morphism is pinned by its
  // generator values.  Witness layout: at = {an unreached class}.
  const FiniteCommMonoid& Q = F.module->carrier;
  const ActionSlot& act = F.module->actions[0];
  const GammaSemiring& S = *F.module->parent;
  const std::uint64_t tpow = ipow(std::uint64_t(S.tsize()), S.arity - 1);
  const std::uint64_t gpow = ipow(std::uint64_t(S.gsize()), S.arity - 1);
  std::vector<char> reached(std::size_t(Q.size), 0);
  reached[std::size_t(Q.zero)] = 1;
  for (Elem e : F.insertion) reached[std::size_t(e)] = 1;
  for (bool grew = true; grew;) {
    grew = false;
    for (Elem x = 0; x < Q.size; ++x) {
      if (!reached[std::size_t(x)]) continue;
      for (Elem y = 0; y < Q.size; ++y) {
        if (!reached[std::size_t(y)]) continue;
        const Elem s = Q.add(x, y);
        if (s >= 0 && !reached[std::size_t(s)]) {
          reached[std::size_t(s)] = 1;
          grew = true;
        }
      }
      for (std::uint64_t ti = 0; ti < tpow; ++ti) {
        for (std::uint64_t gi = 0; gi < gpow; ++gi) {
          const Elem v = act.table[(std::size_t(ti) * std::size_t(Q.size) + std::size_t(x)) * std::size_t(gpow) + std::size_t(gi)];
          if (v >= 0 && !reached[std::size_t(v)]) {
            reached[std::size_t(v)] = 1;
            grew = true;
          }
        }
      }
    }
  }
  report.instances += std::uint64_t(Q.size);
  bool generated = true;
  for (Elem x = 0; x < Q.size; ++x) {
    if (!reached[std::size_t(x)]) {
      generated = false;
      report.fail({"generation", {x}, "class " + Q.label(x) + " is not generated from the insertions"});
      break;
    }
  }
  if (generated) report.note("every class is generated from zero and the insertions");

  // Exact hom-set size when brute force is affordable.  Witness layout:
  // at = {enumerated count, assignment count}.
  std::uint64_t hom_total = 1;
  bool hom_over = false;
  for (int i = 0; i < F.module->msize(); ++i) {
    hom_total *= std::uint64_t(tsize);
    if (hom_total > max_maps) {
      hom_over = true;
      break;
    }
  }
  if (!hom_over) {
    const auto homs = enumerate_morphisms(F.module, target, max_maps);
    report.instances += hom_total;
    if (std::uint64_t(homs.size()) != maps_total) {
      report.fail({"hom-count", {Elem(homs.size()), Elem(maps_total)},
                   "hom-set has " + std::to_string(homs.size()) + " morphisms but " +
                       std::to_string(maps_total) + " assignments"});
    } else {
      report.note("enumerated hom-set size matches the assignment count");
    }
  } else {
    report.note("hom-set enumeration skipped: the map space exceeds the bound");
  }
  return report;
}

}  // namespace gammalab
