#include "oracle.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace gammalab::oracle {

Partition normalize_partition(const std::vector<Elem>& class_of) {
  Partition out(class_of.size(), -1);
  std::unordered_map<Elem, Elem> rename;
  Elem next = 0;
  for (std::size_t i = 0; i < class_of.size(); ++i) {
    auto [it, fresh] = rename.try_emplace(class_of[i], next);
    if (fresh) ++next;
    out[i] = it->second;
  }
  return out;
}

Partition partition_of(const CongruenceRelation& rel) {
  return normalize_partition(rel.class_of);
}

bool is_congruence(const FiniteCommMonoid& m, const Partition& p) {
  const int n = m.size;
  for (Elem a = 0; a < n; ++a) {
    for (Elem b = 0; b < n; ++b) {
      if (!m.defined(a, b)) continue;
      for (Elem c = 0; c < n; ++c) {
        for (Elem d = 0; d < n; ++d) {
          if (!m.defined(c, d)) continue;
          if (p[std::size_t(a)] == p[std::size_t(c)] && p[std::size_t(b)] == p[std::size_t(d)] &&
              p[std::size_t(m.add(a, b))] != p[std::size_t(m.add(c, d))]) {
            return false;
          }
        }
      }
    }
  }
  return true;
}

Partition naive_congruence(const FiniteCommMonoid& m,
                           const std::vector<std::pair<Elem, Elem>>& pairs) {
  const int n = m.size;
  std::vector<std::vector<bool>> rel(std::size_t(n), std::vector<bool>(std::size_t(n), false));
  for (Elem a = 0; a < n; ++a) rel[std::size_t(a)][std::size_t(a)] = true;
  for (const auto& [a, b] : pairs) {
    rel[std::size_t(a)][std::size_t(b)] = true;
    rel[std::size_t(b)][std::size_t(a)] = true;
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (Elem k = 0; k < n; ++k) {
      for (Elem i = 0; i < n; ++i) {
        if (!rel[std::size_t(i)][std::size_t(k)]) continue;
        for (Elem j = 0; j < n; ++j) {
          if (rel[std::size_t(k)][std::size_t(j)] && !rel[std::size_t(i)][std::size_t(j)]) {
            rel[std::size_t(i)][std::size_t(j)] = true;
            rel[std::size_t(j)][std::size_t(i)] = true;
            changed = true;
          }
        }
      }
    }
    for (Elem a = 0; a < n; ++a) {
      for (Elem b = 0; b < n; ++b) {
        if (!m.defined(a, b)) continue;
        for (Elem c = 0; c < n; ++c) {
          if (!rel[std::size_t(a)][std::size_t(c)]) continue;
          for (Elem d = 0; d < n; ++d) {
            if (!m.defined(c, d) || !rel[std::size_t(b)][std::size_t(d)]) continue;
            const Elem x = m.add(a, b), y = m.add(c, d);
            if (!rel[std::size_t(x)][std::size_t(y)]) {
              rel[std::size_t(x)][std::size_t(y)] = true;
              rel[std::size_t(y)][std::size_t(x)] = true;
              changed = true;
            }
          }
        }
      }
    }
  }

  Partition p(std::size_t(n), -1);
  Elem next = 0;
  for (Elem a = 0; a < n; ++a) {
    if (p[std::size_t(a)] >= 0) continue;
    for (Elem b = a; b < n; ++b) {
      if (rel[std::size_t(a)][std::size_t(b)]) p[std::size_t(b)] = next;
    }
    ++next;
  }
  return p;
}

Partition finest_congruence_by_enumeration(const FiniteCommMonoid& m,
                                           const std::vector<std::pair<Elem, Elem>>& pairs) {
  const int n = m.size;
  if (n > 12) throw std::invalid_argument("partition enumeration is for tiny carriers");

  std::vector<std::vector<bool>> meet(std::size_t(n), std::vector<bool>(std::size_t(n), true));
  bool found_any = false;

  // Restricted growth strings enumerate every set partition exactly once.
  std::vector<Elem> rgs(std::size_t(n), 0);
  for (;;) {
    bool admissible = true;
    for (const auto& [a, b] : pairs) {
      if (rgs[std::size_t(a)] != rgs[std::size_t(b)]) {
        admissible = false;
        break;
      }
    }
    if (admissible && is_congruence(m, rgs)) {
      found_any = true;
      for (Elem a = 0; a < n; ++a) {
        for (Elem b = 0; b < n; ++b) {
          if (rgs[std::size_t(a)] != rgs[std::size_t(b)]) meet[std::size_t(a)][std::size_t(b)] = false;
        }
      }
    }

    // Next restricted growth string: rgs[i] may rise to 1 + max(prefix).
    int i = n - 1;
    for (; i > 0; --i) {
      Elem maxPrefix = 0;
      for (int k = 0; k < i; ++k) maxPrefix = std::max(maxPrefix, rgs[std::size_t(k)]);
      if (rgs[std::size_t(i)] <= maxPrefix) {
        ++rgs[std::size_t(i)];
        std::fill(rgs.begin() + i + 1, rgs.end(), 0);
        break;
      }
    }
    if (i == 0) break;
  }

  if (!found_any) throw std::logic_error("no congruence contains the pairs (impossible)");

  Partition p(std::size_t(n), -1);
  Elem next = 0;
  for (Elem a = 0; a < n; ++a) {
    if (p[std::size_t(a)] >= 0) continue;
    for (Elem b = a; b < n; ++b) {
      if (meet[std::size_t(a)][std::size_t(b)]) p[std::size_t(b)] = next;
    }
    ++next;
  }
  return p;
}

namespace {

Elem mu3(const GammaSemiring& S, Elem a, Elem b, Elem c, Elem g1, Elem g2) {
  const std::uint64_t t = std::uint64_t(S.T.size);
  const std::uint64_t g = std::uint64_t(S.Gamma.size);
  return S.mu_table[std::size_t((((std::uint64_t(a) * t + std::uint64_t(b)) * t + std::uint64_t(c)) * g +
                                 std::uint64_t(g1)) * g + std::uint64_t(g2))];
}

}  // namespace

TernaryAxiomVerdicts naive_ternary_axioms(const GammaSemiring& S) {
  if (S.arity != 3) throw std::invalid_argument("naive_ternary_axioms expects arity 3");
  TernaryAxiomVerdicts v;
  const int t = S.T.size;
  const int g = S.Gamma.size;
  const auto& T = S.T;

  for (Elem x = 0; x < t; ++x)
    for (Elem y = 0; y < t; ++y)
      for (Elem b = 0; b < t; ++b)
        for (Elem c = 0; c < t; ++c)
          for (Elem g1 = 0; g1 < g; ++g1)
            for (Elem g2 = 0; g2 < g; ++g2) {
              if (mu3(S, T.add(x, y), b, c, g1, g2) != T.add(mu3(S, x, b, c, g1, g2), mu3(S, y, b, c, g1, g2)))
                v.a1 = false;
              if (mu3(S, b, T.add(x, y), c, g1, g2) != T.add(mu3(S, b, x, c, g1, g2), mu3(S, b, y, c, g1, g2)))
                v.a1 = false;
              if (mu3(S, b, c, T.add(x, y), g1, g2) != T.add(mu3(S, b, c, x, g1, g2), mu3(S, b, c, y, g1, g2)))
                v.a1 = false;
            }

  for (Elem b = 0; b < t; ++b)
    for (Elem c = 0; c < t; ++c)
      for (Elem g1 = 0; g1 < g; ++g1)
        for (Elem g2 = 0; g2 < g; ++g2) {
          if (mu3(S, T.zero, b, c, g1, g2) != T.zero) v.a2 = false;
          if (mu3(S, b, T.zero, c, g1, g2) != T.zero) v.a2 = false;
          if (mu3(S, b, c, T.zero, g1, g2) != T.zero) v.a2 = false;
        }

  for (Elem w1 = 0; w1 < t; ++w1)
    for (Elem w2 = 0; w2 < t; ++w2)
      for (Elem w3 = 0; w3 < t; ++w3)
        for (Elem w4 = 0; w4 < t; ++w4)
          for (Elem w5 = 0; w5 < t; ++w5)
            for (Elem g1 = 0; g1 < g; ++g1)
              for (Elem g2 = 0; g2 < g; ++g2)
                for (Elem g3 = 0; g3 < g; ++g3)
                  for (Elem g4 = 0; g4 < g; ++g4) {
                    const Elem left = mu3(S, mu3(S, w1, w2, w3, g1, g2), w4, w5, g3, g4);
                    const Elem mid = mu3(S, w1, mu3(S, w2, w3, w4, g2, g3), w5, g1, g4);
                    const Elem right = mu3(S, w1, w2, mu3(S, w3, w4, w5, g3, g4), g1, g2);
                    if (left != mid || left != right) v.a3 = false;
                  }

  return v;
}

std::optional<Word> naive_ternary_asymmetry(const GammaSemiring& S) {
  if (S.arity != 3) throw std::invalid_argument("naive_ternary_asymmetry expects arity 3");
  const int t = S.T.size;
  const int g = S.Gamma.size;
  for (Elem a = 0; a < t; ++a)
    for (Elem b = 0; b < t; ++b)
      for (Elem c = 0; c < t; ++c)
        for (Elem g1 = 0; g1 < g; ++g1)
          for (Elem g2 = 0; g2 < g; ++g2) {
            if (mu3(S, a, b, c, g1, g2) != mu3(S, b, a, c, g1, g2))
              return Word{a, b, c, g1, g2, 0, 1};
            if (mu3(S, a, b, c, g1, g2) != mu3(S, c, b, a, g1, g2))
              return Word{a, b, c, g1, g2, 0, 2};
            if (mu3(S, a, b, c, g1, g2) != mu3(S, a, c, b, g1, g2))
              return Word{a, b, c, g1, g2, 1, 2};
          }
  return std::nullopt;
}

std::vector<std::vector<bool>> naive_prime_spectrum(const GammaSemiring& S) {
  const int t = S.T.size;
  const int n = S.arity;
  const int g = S.Gamma.size;
  if (t > 20) throw std::invalid_argument("naive_prime_spectrum is for tiny carriers");

  std::vector<std::vector<bool>> primes;
  for (std::uint64_t mask = 0; mask + 1 < (std::uint64_t(1) << t); ++mask) {  // proper subsets only
    auto in = [&](Elem a) { return ((mask >> a) & 1) != 0; };
    if (!in(S.T.zero)) continue;

    bool ideal = true;
    for (Elem a = 0; a < t && ideal; ++a)
      for (Elem b = 0; b < t && ideal; ++b)
        if (in(a) && in(b) && !in(S.T.add(a, b))) ideal = false;

    Word args(std::size_t(n), 0), params(std::size_t(n - 1), 0);
    const std::uint64_t acount = ipow(std::uint64_t(t), n);
    const std::uint64_t gcount = ipow(std::uint64_t(g), n - 1);
    for (std::uint64_t ai = 0; ai < acount && ideal; ++ai) {
      decode_mixed(ai, t, n, args);
      bool any = false;
      for (Elem a : args) any = any || in(a);
      if (!any) continue;
      for (std::uint64_t gi = 0; gi < gcount && ideal; ++gi) {
        decode_mixed(gi, g, n - 1, params);
        if (!in(S.mu(args, params))) ideal = false;
      }
    }
    if (!ideal) continue;

    // Contrapositive primality: all arguments outside force the product outside.
    bool prime = true;
    const std::uint64_t gcount2 = ipow(std::uint64_t(g), n - 1);
    for (std::uint64_t ai = 0; ai < ipow(std::uint64_t(t), n) && prime; ++ai) {
      decode_mixed(ai, t, n, args);
      bool all_out = true;
      for (Elem a : args) all_out = all_out && !in(a);
      if (!all_out) continue;
      for (std::uint64_t gi = 0; gi < gcount2 && prime; ++gi) {
        decode_mixed(gi, g, n - 1, params);
        if (in(S.mu(args, params))) prime = false;
      }
    }
    if (!prime) continue;

    std::vector<bool> p(std::size_t(t), false);
    for (Elem a = 0; a < t; ++a) p[std::size_t(a)] = in(a);
    primes.push_back(std::move(p));
  }
  return primes;
}

namespace {

// Raw action lookup with explicit index arithmetic (mu3 above covers the
// parent product).
Elem act3(const PositionalModule& M, int action, Elem x1, Elem x2, Elem m, Elem g1, Elem g2) {
  const std::uint64_t t = std::uint64_t(M.parent->tsize()), g = std::uint64_t(M.parent->gsize());
  const std::uint64_t ms = std::uint64_t(M.msize());
  return M.actions[std::size_t(action)]
      .table[std::size_t((((std::uint64_t(x1) * t + x2) * ms + m) * g + g1) * g + g2)];
}

// Every complete evaluation of the module word, by fresh recursion: any
// window of three adjacent letters may contract, through mu when it holds
// ring letters only and through the action when the module letter sits at
// relative slot `slot`.
void all_word_values(const PositionalModule& M, int action, int slot,
                     const std::vector<Elem>& letters, int mpos, Elem mval,
                     const std::vector<Elem>& params, std::vector<Elem>& out) {
  const int L = int(letters.size());
  if (L == 1) {
    out.push_back(mval);
    return;
  }
  for (int p = 0; p + 3 <= L; ++p) {
    Elem next_mval = mval;
    int next_mpos = mpos;
    Elem letter = 0;
    if (mpos >= p && mpos <= p + 2) {
      if (mpos - p + 1 != slot) continue;
      std::vector<Elem> ring;
      for (int i = 0; i < 3; ++i) {
        if (p + i != mpos) ring.push_back(letters[std::size_t(p + i)]);
      }
      next_mval = act3(M, action, ring[0], ring[1], mval, params[std::size_t(p)],
                       params[std::size_t(p + 1)]);
      next_mpos = p;
    } else {
      letter = mu3(*M.parent, letters[std::size_t(p)], letters[std::size_t(p + 1)],
                   letters[std::size_t(p + 2)], params[std::size_t(p)], params[std::size_t(p + 1)]);
      if (mpos > p) next_mpos = mpos - 2;
    }
    std::vector<Elem> nl(letters.begin(), letters.begin() + p);
    nl.push_back(letter);
    nl.insert(nl.end(), letters.begin() + p + 3, letters.end());
    std::vector<Elem> np(params.begin(), params.begin() + p);
    np.insert(np.end(), params.begin() + p + 2, params.end());
    all_word_values(M, action, slot, nl, next_mpos, next_mval, np, out);
  }
}

bool words_coherent(const PositionalModule& M, int action, int slot, int L) {
  const Elem t = M.parent->tsize(), g = M.parent->gsize(), ms = M.msize();
  for (int mpos = 0; mpos < L; ++mpos) {
    std::vector<Elem> letters(std::size_t(L), 0), params(std::size_t(L - 1), 0);
    Elem mval = 0;
    // odometer over (ring letters, module value, params)
    for (;;) {
      std::vector<Elem> vals;
      all_word_values(M, action, slot, letters, mpos, mval, params, vals);
      for (std::size_t i = 1; i < vals.size(); ++i) {
        if (vals[i] != vals[0]) return false;
      }
      int d = 0;
      for (d = 0; d < L - 1; ++d) {
        if (++params[std::size_t(d)] < g) break;
        params[std::size_t(d)] = 0;
      }
      if (d < L - 1) continue;
      if (++mval < ms) continue;
      mval = 0;
      for (d = 0; d < L; ++d) {
        if (d == mpos) continue;
        if (++letters[std::size_t(d)] < t) break;
        letters[std::size_t(d)] = 0;
      }
      if (d == L) break;
    }
  }
  return true;
}

}  // namespace

std::vector<Elem> module_word_values(const PositionalModule& M, int action,
                                     const std::vector<Elem>& letters, int mpos, Elem mval,
                                     const std::vector<Elem>& params) {
  std::vector<Elem> out;
  all_word_values(M, action, M.actions[std::size_t(action)].slot, letters, mpos, mval, params, out);
  return out;
}

ModuleAxiomVerdicts naive_module_axioms(const PositionalModule& M, int action) {
  if (M.parent->arity != 3) throw std::invalid_argument("ternary parents only");
  if (!M.total()) throw std::invalid_argument("total modules only");
  const FiniteCommMonoid& T = M.parent->T;
  const FiniteCommMonoid& G = M.parent->Gamma;
  const FiniteCommMonoid& C = M.carrier;
  const int slot = M.actions[std::size_t(action)].slot;
  ModuleAxiomVerdicts v;

  for (Elem x1 = 0; x1 < T.size; ++x1)
    for (Elem x2 = 0; x2 < T.size; ++x2)
      for (Elem g1 = 0; g1 < G.size; ++g1)
        for (Elem g2 = 0; g2 < G.size; ++g2) {
          for (Elem a = 0; a < C.size; ++a)
            for (Elem b = 0; b < C.size; ++b)
              if (act3(M, action, x1, x2, C.add(a, b), g1, g2) !=
                  C.add(act3(M, action, x1, x2, a, g1, g2), act3(M, action, x1, x2, b, g1, g2)))
                v.m1 = false;
          for (Elem m = 0; m < C.size; ++m) {
            for (Elem y = 0; y < T.size; ++y) {
              if (act3(M, action, T.add(x1, y), x2, m, g1, g2) !=
                  C.add(act3(M, action, x1, x2, m, g1, g2), act3(M, action, y, x2, m, g1, g2)))
                v.m1 = false;
              if (act3(M, action, x1, T.add(x2, y), m, g1, g2) !=
                  C.add(act3(M, action, x1, x2, m, g1, g2), act3(M, action, x1, y, m, g1, g2)))
                v.m1 = false;
            }
            for (Elem h = 0; h < G.size; ++h) {
              if (act3(M, action, x1, x2, m, G.add(g1, h), g2) !=
                  C.add(act3(M, action, x1, x2, m, g1, g2), act3(M, action, x1, x2, m, h, g2)))
                v.m4 = false;
              if (act3(M, action, x1, x2, m, g1, G.add(g2, h)) !=
                  C.add(act3(M, action, x1, x2, m, g1, g2), act3(M, action, x1, x2, m, g1, h)))
                v.m4 = false;
            }
            if (act3(M, action, T.zero, x2, m, g1, g2) != C.zero) v.m3 = false;
            if (act3(M, action, x1, T.zero, m, g1, g2) != C.zero) v.m3 = false;
          }
          if (act3(M, action, x1, x2, C.zero, g1, g2) != C.zero) v.m3 = false;
        }

  v.m2 = words_coherent(M, action, slot, 5) && words_coherent(M, action, slot, 7);
  return v;
}

Partition naive_tensor_partition(const std::vector<ModulePtr>& factors,
                                 const FiniteCommMonoid& terms,
                                 const std::vector<std::vector<int>>& degrees) {
  const std::size_t nf = factors.size();
  const int gens = int(degrees.front().size());

  // Locate terms by their degree vector; generators are the unit vectors.
  std::map<std::vector<int>, Elem> by_degree;
  for (Elem t = 0; t < terms.size; ++t) by_degree[degrees[std::size_t(t)]] = t;
  const auto term_at = [&](const std::vector<int>& d) {
    const auto it = by_degree.find(d);
    return it == by_degree.end() ? Elem(-1) : it->second;
  };
  const Elem zero_term = term_at(std::vector<int>(std::size_t(gens), 0));
  std::vector<Elem> gen_term(std::size_t(gens), -1);
  for (int g = 0; g < gens; ++g) {
    std::vector<int> d(std::size_t(gens), 0);
    d[std::size_t(g)] = 1;
    gen_term[std::size_t(g)] = term_at(d);
  }

  const auto decode = [&](int g) {
    std::vector<Elem> coords(nf, 0);
    for (std::size_t i = nf; i-- > 0;) {
      coords[i] = Elem(g % factors[i]->msize());
      g /= factors[i]->msize();
    }
    return coords;
  };
  const auto encode = [&](const std::vector<Elem>& coords) {
    int g = 0;
    for (std::size_t i = 0; i < nf; ++i) g = g * factors[i]->msize() + int(coords[i]);
    return g;
  };

  std::vector<std::pair<Elem, Elem>> pairs;
  for (int g = 0; g < gens; ++g) {
    const auto coords = decode(g);
    for (std::size_t i = 0; i < nf; ++i) {
      if (coords[i] == factors[i]->carrier.zero) {
        pairs.push_back({gen_term[std::size_t(g)], zero_term});
        break;
      }
    }
  }
  for (int g = 0; g < gens; ++g) {
    const auto coords = decode(g);
    for (std::size_t c = 0; c < nf; ++c) {
      for (Elem m2 = 0; m2 < factors[c]->msize(); ++m2) {
        const Elem s = factors[c]->carrier.add(coords[c], m2);
        if (s < 0) continue;
        auto sum_deg = degrees[std::size_t(gen_term[std::size_t(g)])];
        auto two = decode(g);
        two[c] = m2;
        for (std::size_t i = 0; i < sum_deg.size(); ++i) {
          sum_deg[i] += degrees[std::size_t(gen_term[std::size_t(encode(two))])][i];
        }
        auto one = decode(g);
        one[c] = s;
        const Elem lhs = gen_term[std::size_t(encode(one))];
        const Elem rhs = term_at(sum_deg);
        if (rhs < 0) continue;
        pairs.push_back({lhs, rhs});
      }
    }
  }
  const GammaSemiring& S = *factors[0]->parent;
  const int n = S.arity;
  std::vector<Elem> u(std::size_t(n - 1), 0), al(std::size_t(n - 1), 0);
  for (std::size_t p = 0; p + 1 < nf; ++p) {
    const int la = int(factors[p]->actions.size()) - 1;
    for (;;) {  // all ring contexts u over T
      for (;;) {  // all parameter words over Gamma
        std::vector<Elem> left_args(u.begin() + 1, u.end());
        left_args.push_back(u[0]);
        for (int g = 0; g < gens; ++g) {
          const auto coords = decode(g);
          const Elem lv = factors[p]->act(la, left_args, coords[p], al);
          const Elem rv = factors[p + 1]->act(0, u, coords[p + 1], al);
          if (lv < 0 || rv < 0) continue;
          auto cl = coords;
          cl[p] = lv;
          auto cr = coords;
          cr[p + 1] = rv;
          pairs.push_back({gen_term[std::size_t(encode(cl))], gen_term[std::size_t(encode(cr))]});
        }
        std::size_t i = 0;
        while (i < al.size() && ++al[i] == S.gsize()) al[i++] = 0;
        if (i == al.size()) break;
      }
      std::size_t i = 0;
      while (i < u.size() && ++u[i] == S.tsize()) u[i++] = 0;
      if (i == u.size()) break;
    }
  }
  return naive_congruence(terms, pairs);
}

}  // namespace gammalab::oracle
