#include "gammalab/module.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>

namespace gammalab {

namespace {

// Most-significant-first packing, identical to encode_mixed but reading from
// a raw buffer (the coherence scan is the hot path and avoids Word copies).
std::uint64_t encode_ptr(const Elem* d, int len, int radix) {
  std::uint64_t v = 0;
  for (int i = 0; i < len; ++i) v = v * std::uint64_t(radix) + std::uint64_t(d[i]);
  return v;
}

bool monoid_equal(const FiniteCommMonoid& a, const FiniteCommMonoid& b) {
  return a.size == b.size && a.zero == b.zero && a.table == b.table;
}

void check_slots(const GammaSemiring& S, const std::vector<int>& slots) {
  if (slots.empty() || slots.size() > 2) {
    throw std::invalid_argument("a module carries one or two actions");
  }
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i] < 1 || slots[i] > S.arity) throw std::invalid_argument("action slot out of range");
    if (i > 0 && slots[i] <= slots[i - 1]) throw std::invalid_argument("action slots must increase");
  }
}

// Table of mu with the module element inserted at `slot`, laid out in
// act_index order.
std::vector<Elem> regular_action_table(const GammaSemiring& S, int slot) {
  const int n = S.arity;
  const std::uint64_t tpow = ipow(std::uint64_t(S.tsize()), n - 1);
  const std::uint64_t gpow = ipow(std::uint64_t(S.gsize()), n - 1);
  std::vector<Elem> table;
  table.reserve(std::size_t(tpow * std::uint64_t(S.tsize()) * gpow));
  Word targs, params, args(std::size_t(n), 0);
  for (std::uint64_t ti = 0; ti < tpow; ++ti) {
    decode_mixed(ti, S.tsize(), n - 1, targs);
    for (Elem m = 0; m < S.tsize(); ++m) {
      int k = 0;
      for (int i = 0; i < n; ++i) args[std::size_t(i)] = (i == slot - 1) ? m : targs[std::size_t(k++)];
      for (std::uint64_t gi = 0; gi < gpow; ++gi) {
        decode_mixed(gi, S.gsize(), n - 1, params);
        table.push_back(S.mu(args, params));
      }
    }
  }
  return table;
}

std::string join_labels(const FiniteCommMonoid& m, const Word& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ",";
    s += m.label(w[i]);
  }
  return s;
}

std::string render_act(const PositionalModule& M, int action, const Word& targs,
                       const std::string& mid, const Word& params) {
  std::ostringstream os;
  os << "act[" << M.actions[std::size_t(action)].slot << "](" << join_labels(M.parent->T, targs)
     << "; " << mid << "; " << join_labels(M.parent->Gamma, params) << ")";
  return os.str();
}

// --- coherence machinery -----------------------------------------------------
//
// A module word is a row of L letters (one is the module letter, the rest are
// ring letters) with L-1 parameters at the adjacent-letter boundaries.  A
// contraction step replaces n adjacent letters, consuming the n-1 parameters
// between them; the window evaluates through mu when it holds ring letters
// only, and through the action when it holds the module letter at relative
// slot `j` (any other relative position makes the step illegal).

// Every legal sequence of window starts contracting an L-letter word with the
// module letter at position mpos down to a single letter.
void collect_shapes(int len, int mpos, int n, int j, std::vector<int>& cur,
                    std::vector<std::vector<int>>& out) {
  if (len == 1) {
    out.push_back(cur);
    return;
  }
  for (int p = 0; p + n <= len; ++p) {
    int next_mpos = mpos;
    if (mpos >= p && mpos <= p + n - 1) {
      if (mpos - p + 1 != j) continue;
      next_mpos = p;
    } else if (mpos > p) {
      next_mpos = mpos - (n - 1);
    }
    cur.push_back(p);
    collect_shapes(len - (n - 1), next_mpos, n, j, cur, out);
    cur.pop_back();
  }
}

constexpr int kMaxCoherenceWord = 32;

// Runs one contraction order over concrete values; -1 when an undefined
// action cell is touched.  letters[mpos] is ignored (the module letter's
// value travels in mval).
Elem eval_shape(const PositionalModule& M, int action, const std::vector<int>& starts,
                const Elem* letters_in, int L, int mpos, Elem mval, const Elem* params_in) {
  std::array<Elem, kMaxCoherenceWord> letters{};
  std::array<Elem, kMaxCoherenceWord> params{};
  std::copy(letters_in, letters_in + L, letters.begin());
  std::copy(params_in, params_in + (L - 1), params.begin());
  const GammaSemiring& S = *M.parent;
  const int n = S.arity;
  const int tsize = S.tsize(), msize = M.msize();
  const std::uint64_t gpow = ipow(std::uint64_t(S.gsize()), n - 1);
  const std::vector<Elem>& act_table = M.actions[std::size_t(action)].table;
  int len = L;
  for (int p : starts) {
    const std::uint64_t gcode = encode_ptr(&params[std::size_t(p)], n - 1, S.gsize());
    Elem result = 0;
    if (mpos >= p && mpos <= p + n - 1) {
      std::uint64_t tcode = 0;
      for (int i = 0; i < n; ++i) {
        if (p + i != mpos) tcode = tcode * std::uint64_t(tsize) + std::uint64_t(letters[std::size_t(p + i)]);
      }
      mval = act_table[std::size_t((tcode * std::uint64_t(msize) + std::uint64_t(mval)) * gpow + gcode)];
      if (mval < 0) return -1;
      mpos = p;
    } else {
      std::uint64_t tcode = 0;
      for (int i = 0; i < n; ++i) tcode = tcode * std::uint64_t(tsize) + std::uint64_t(letters[std::size_t(p + i)]);
      result = S.mu_table[std::size_t(tcode * gpow + gcode)];
      if (mpos > p) mpos -= n - 1;
    }
    letters[std::size_t(p)] = result;
    for (int i = p + 1; i + (n - 1) < len; ++i) letters[std::size_t(i)] = letters[std::size_t(i + n - 1)];
    for (int i = p; i + (n - 1) < len - 1; ++i) params[std::size_t(i)] = params[std::size_t(i + n - 1)];
    len -= n - 1;
  }
  return mval;
}

// Symbolic rendering of one contraction order: letters w0.., module letter m,
// parameters g0.. — e.g. "[w0,[w1,m,w3;g1,g2],w4;g0,g3]".
std::string render_shape(const std::vector<int>& starts, int L, int mpos, int n) {
  std::vector<std::string> ls(std::size_t(L), "");
  std::vector<std::string> ps(std::size_t(L - 1), "");
  for (int i = 0; i < L; ++i) ls[std::size_t(i)] = (i == mpos) ? "m" : "w" + std::to_string(i);
  for (int i = 0; i + 1 < L; ++i) ps[std::size_t(i)] = "g" + std::to_string(i);
  for (int p : starts) {
    std::string s = "[";
    for (int i = 0; i < n; ++i) {
      if (i) s += ",";
      s += ls[std::size_t(p + i)];
    }
    s += ";";
    for (int i = 0; i + 1 < n; ++i) {
      if (i) s += ",";
      s += ps[std::size_t(p + i)];
    }
    s += "]";
    ls.erase(ls.begin() + p + 1, ls.begin() + p + n);
    ls[std::size_t(p)] = s;
    ps.erase(ps.begin() + p, ps.begin() + p + (n - 1));
  }
  return ls[0];
}

struct CoherenceFamily {
  int length = 0;
  std::vector<std::pair<int, std::vector<std::vector<int>>>> positions;  // (t, legal shapes >= 2)
  std::uint64_t instances = 0;  // (shapes-1) * assignments, summed over positions
};

CoherenceFamily coherence_family(const PositionalModule& M, int slot, int length) {
  const int n = M.parent->arity;
  CoherenceFamily fam;
  fam.length = length;
  const std::uint64_t assignments = ipow(std::uint64_t(M.parent->tsize()), length - 1) *
                                    std::uint64_t(M.msize()) *
                                    ipow(std::uint64_t(M.parent->gsize()), length - 1);
  for (int t = 0; t < length; ++t) {
    std::vector<std::vector<int>> shapes;
    std::vector<int> cur;
    collect_shapes(length, t, n, slot, cur, shapes);
    if (shapes.size() < 2) continue;
    fam.instances += std::uint64_t(shapes.size() - 1) * assignments;
    fam.positions.emplace_back(t, std::move(shapes));
  }
  return fam;
}

}  // namespace

// --- PositionalModule ---------------------------------------------------------

std::uint64_t PositionalModule::act_cells() const {
  const int n = parent->arity;
  return ipow(std::uint64_t(parent->tsize()), n - 1) * std::uint64_t(carrier.size) *
         ipow(std::uint64_t(parent->gsize()), n - 1);
}

std::uint64_t PositionalModule::act_index(const Word& targs, Elem m, const Word& params) const {
  const int n = parent->arity;
  return (encode_mixed(targs, parent->tsize()) * std::uint64_t(carrier.size) + std::uint64_t(m)) *
             ipow(std::uint64_t(parent->gsize()), n - 1) +
         encode_mixed(params, parent->gsize());
}

Elem PositionalModule::act(int action, const Word& targs, Elem m, const Word& params) const {
  return actions[std::size_t(action)].table[std::size_t(act_index(targs, m, params))];
}

bool PositionalModule::total() const {
  if (!carrier.complete()) return false;
  for (const auto& a : actions) {
    for (Elem v : a.table) {
      if (v < 0) return false;
    }
  }
  return true;
}

// --- builders -----------------------------------------------------------------

ModulePtr regular_module(SemiringPtr S, int slot) {
  check_slots(*S, {slot});
  auto M = std::make_shared<PositionalModule>();
  M->parent = S;
  M->carrier = S->T;
  ActionSlot a;
  a.slot = slot;
  a.table = regular_action_table(*S, slot);
  M->actions.push_back(std::move(a));
  M->provenance = "regular(slot=" + std::to_string(slot) + ")/" + S->provenance;
  return M;
}

ModulePtr regular_bimodule(SemiringPtr S, int left_slot, int right_slot) {
  if (right_slot < 0) right_slot = S->arity;
  check_slots(*S, {left_slot, right_slot});
  auto M = std::make_shared<PositionalModule>();
  M->parent = S;
  M->carrier = S->T;
  for (int slot : {left_slot, right_slot}) {
    ActionSlot a;
    a.slot = slot;
    a.table = regular_action_table(*S, slot);
    M->actions.push_back(std::move(a));
  }
  M->provenance = "regular(slots=" + std::to_string(left_slot) + "," + std::to_string(right_slot) +
                  ")/" + S->provenance;
  return M;
}

ModulePtr zero_module(SemiringPtr S, std::vector<int> slots) {
  check_slots(*S, slots);
  FiniteCommMonoid one;
  one.size = 1;
  one.zero = 0;
  one.table = {0};
  one.labels = {"0"};
  return null_action_module(std::move(S), std::move(one), std::move(slots));
}

ModulePtr null_action_module(SemiringPtr S, FiniteCommMonoid carrier, std::vector<int> slots) {
  check_slots(*S, slots);
  auto M = std::make_shared<PositionalModule>();
  M->parent = std::move(S);
  M->carrier = std::move(carrier);
  const std::uint64_t cells = ipow(std::uint64_t(M->parent->tsize()), M->parent->arity - 1) *
                              std::uint64_t(M->carrier.size) *
                              ipow(std::uint64_t(M->parent->gsize()), M->parent->arity - 1);
  for (int slot : slots) {
    ActionSlot a;
    a.slot = slot;
    a.table.assign(std::size_t(cells), M->carrier.zero);
    M->actions.push_back(std::move(a));
  }
  M->provenance = "null-action(|M|=" + std::to_string(M->carrier.size) + ")";
  return M;
}

ModulePtr table_module(SemiringPtr S, FiniteCommMonoid carrier, std::vector<ActionSlot> actions,
                       std::string provenance) {
  std::vector<int> slots;
  for (const auto& a : actions) slots.push_back(a.slot);
  check_slots(*S, slots);
  auto M = std::make_shared<PositionalModule>();
  M->parent = std::move(S);
  M->carrier = std::move(carrier);
  M->actions = std::move(actions);
  M->provenance = std::move(provenance);
  for (const auto& a : M->actions) {
    if (a.table.size() != M->act_cells()) {
      throw std::invalid_argument("action table size does not match the carrier dimensions");
    }
  }
  return M;
}

// --- validation ---------------------------------------------------------------

namespace {

// Laws for one action; every law name is prefixed with "" / "left/" /
// "right/" depending on how many actions the module carries.
void validate_action(const PositionalModule& M, int action, const std::string& prefix,
                     ValidationReport& report, const ScanOptions& opts) {
  const GammaSemiring& S = *M.parent;
  const int n = S.arity;
  const int tsize = S.tsize(), gsize = S.gsize(), msize = M.msize();
  const std::uint64_t tpow = ipow(std::uint64_t(tsize), n - 1);
  const std::uint64_t opow = n >= 2 ? ipow(std::uint64_t(tsize), n - 2) : 1;
  const std::uint64_t gpow = ipow(std::uint64_t(gsize), n - 1);
  const std::uint64_t gopow = n >= 2 ? ipow(std::uint64_t(gsize), n - 2) : 1;
  const FiniteCommMonoid& mc = M.carrier;

  // M1/module, witness [targs.., x, y, params..]:
  // act(targs, x+y, params) = act(targs, x, params) + act(targs, y, params).
  {
    const std::uint64_t total = tpow * gpow * std::uint64_t(msize) * std::uint64_t(msize);
    report.instances += total;
    auto split = [&](std::uint64_t idx, Word& targs, Word& params, Elem& x, Elem& y) {
      y = Elem(idx % std::uint64_t(msize));
      idx /= std::uint64_t(msize);
      x = Elem(idx % std::uint64_t(msize));
      idx /= std::uint64_t(msize);
      decode_mixed(idx % gpow, gsize, n - 1, params);
      decode_mixed(idx / gpow, tsize, n - 1, targs);
    };
    auto bad = first_failure(
        total,
        [&](std::uint64_t idx) {
          Word targs, params;
          Elem x, y;
          split(idx, targs, params, x, y);
          const Elem sum = mc.add(x, y);
          if (sum < 0) return true;
          const Elem lhs = M.act(action, targs, sum, params);
          const Elem ax = M.act(action, targs, x, params);
          const Elem ay = M.act(action, targs, y, params);
          if (lhs < 0 || ax < 0 || ay < 0) return true;
          const Elem rhs = mc.add(ax, ay);
          if (rhs < 0) return true;
          return lhs == rhs;
        },
        opts);
    if (bad) {
      Word targs, params;
      Elem x, y;
      split(*bad, targs, params, x, y);
      Word at = targs;
      at.push_back(x);
      at.push_back(y);
      at.insert(at.end(), params.begin(), params.end());
      report.fail({prefix + "M1/module", at,
                   render_act(M, action, targs, mc.label(x) + "+" + mc.label(y), params) +
                       " is not the sum of the two summand actions"});
      if (opts.fail_fast) return;
    }
  }

  // M1/ring, witness [r, targs.. (slot r = x+y), x, y, m, params..]:
  // additivity in ring slot r.
  for (int r = 0; r < n - 1; ++r) {
    const std::uint64_t total =
        opow * std::uint64_t(tsize) * std::uint64_t(tsize) * std::uint64_t(msize) * gpow;
    report.instances += total;
    auto split = [&](std::uint64_t idx, Word& targs, Word& params, Elem& x, Elem& y, Elem& m) {
      decode_mixed(idx % gpow, gsize, n - 1, params);
      idx /= gpow;
      m = Elem(idx % std::uint64_t(msize));
      idx /= std::uint64_t(msize);
      y = Elem(idx % std::uint64_t(tsize));
      idx /= std::uint64_t(tsize);
      x = Elem(idx % std::uint64_t(tsize));
      idx /= std::uint64_t(tsize);
      Word others;
      decode_mixed(idx, tsize, n - 2, others);
      targs.assign(std::size_t(n - 1), 0);
      int k = 0;
      for (int i = 0; i < n - 1; ++i) {
        if (i != r) targs[std::size_t(i)] = others[std::size_t(k++)];
      }
    };
    auto bad = first_failure(
        total,
        [&](std::uint64_t idx) {
          Word targs, params;
          Elem x, y, m;
          split(idx, targs, params, x, y, m);
          const Elem sum = S.T.add(x, y);
          if (sum < 0) return true;
          targs[std::size_t(r)] = sum;
          const Elem lhs = M.act(action, targs, m, params);
          targs[std::size_t(r)] = x;
          const Elem ax = M.act(action, targs, m, params);
          targs[std::size_t(r)] = y;
          const Elem ay = M.act(action, targs, m, params);
          if (lhs < 0 || ax < 0 || ay < 0) return true;
          const Elem rhs = mc.add(ax, ay);
          if (rhs < 0) return true;
          return lhs == rhs;
        },
        opts);
    if (bad) {
      Word targs, params;
      Elem x, y, m;
      split(*bad, targs, params, x, y, m);
      targs[std::size_t(r)] = S.T.add(x, y);
      Word at;
      at.push_back(r);
      at.insert(at.end(), targs.begin(), targs.end());
      at.push_back(x);
      at.push_back(y);
      at.push_back(m);
      at.insert(at.end(), params.begin(), params.end());
      report.fail({prefix + "M1/ring", at,
                   "ring slot " + std::to_string(r + 1) + " of " +
                       render_act(M, action, targs, mc.label(m), params) +
                       " is not additive at " + S.T.label(x) + "+" + S.T.label(y)});
      if (opts.fail_fast) return;
      break;
    }
  }

  // M3/module, witness [targs.., params..]: act(targs, 0, params) = 0.
  {
    const std::uint64_t total = tpow * gpow;
    report.instances += total;
    auto bad = first_failure(
        total,
        [&](std::uint64_t idx) {
          Word targs, params;
          decode_mixed(idx % gpow, gsize, n - 1, params);
          decode_mixed(idx / gpow, tsize, n - 1, targs);
          const Elem v = M.act(action, targs, mc.zero, params);
          return v < 0 || v == mc.zero;
        },
        opts);
    if (bad) {
      Word targs, params;
      decode_mixed(*bad % gpow, gsize, n - 1, params);
      decode_mixed(*bad / gpow, tsize, n - 1, targs);
      Word at = targs;
      at.insert(at.end(), params.begin(), params.end());
      report.fail({prefix + "M3/module", at,
                   render_act(M, action, targs, "0", params) + " is nonzero"});
      if (opts.fail_fast) return;
    }
  }

  // M3/ring, witness [r, targs.. (slot r = 0), m, params..]:
  // a zero ring argument absorbs.
  for (int r = 0; r < n - 1; ++r) {
    const std::uint64_t total = opow * std::uint64_t(msize) * gpow;
    report.instances += total;
    auto split = [&](std::uint64_t idx, Word& targs, Word& params, Elem& m) {
      decode_mixed(idx % gpow, gsize, n - 1, params);
      idx /= gpow;
      m = Elem(idx % std::uint64_t(msize));
      Word others;
      decode_mixed(idx / std::uint64_t(msize), tsize, n - 2, others);
      targs.assign(std::size_t(n - 1), 0);
      int k = 0;
      for (int i = 0; i < n - 1; ++i) {
        if (i != r) targs[std::size_t(i)] = others[std::size_t(k++)];
      }
      targs[std::size_t(r)] = S.T.zero;
    };
    auto bad = first_failure(
        total,
        [&](std::uint64_t idx) {
          Word targs, params;
          Elem m;
          split(idx, targs, params, m);
          const Elem v = M.act(action, targs, m, params);
          return v < 0 || v == mc.zero;
        },
        opts);
    if (bad) {
      Word targs, params;
      Elem m;
      split(*bad, targs, params, m);
      Word at;
      at.push_back(r);
      at.insert(at.end(), targs.begin(), targs.end());
      at.push_back(m);
      at.insert(at.end(), params.begin(), params.end());
      report.fail({prefix + "M3/ring", at,
                   render_act(M, action, targs, mc.label(m), params) +
                       " is nonzero despite the zero ring argument in slot " + std::to_string(r + 1)});
      if (opts.fail_fast) return;
      break;
    }
  }

  // M4, witness [c, targs.., m, alpha, beta, params.. (slot c = alpha+beta)]:
  // additivity in parameter coordinate c.
  for (int c = 0; c < n - 1; ++c) {
    const std::uint64_t total =
        tpow * std::uint64_t(msize) * gopow * std::uint64_t(gsize) * std::uint64_t(gsize);
    report.instances += total;
    auto split = [&](std::uint64_t idx, Word& targs, Word& params, Elem& m, Elem& alpha,
                     Elem& beta) {
      beta = Elem(idx % std::uint64_t(gsize));
      idx /= std::uint64_t(gsize);
      alpha = Elem(idx % std::uint64_t(gsize));
      idx /= std::uint64_t(gsize);
      Word others;
      decode_mixed(idx % gopow, gsize, n - 2, others);
      idx /= gopow;
      m = Elem(idx % std::uint64_t(msize));
      decode_mixed(idx / std::uint64_t(msize), tsize, n - 1, targs);
      params.assign(std::size_t(n - 1), 0);
      int k = 0;
      for (int i = 0; i < n - 1; ++i) {
        if (i != c) params[std::size_t(i)] = others[std::size_t(k++)];
      }
    };
    auto bad = first_failure(
        total,
        [&](std::uint64_t idx) {
          Word targs, params;
          Elem m, alpha, beta;
          split(idx, targs, params, m, alpha, beta);
          const Elem sum = S.Gamma.add(alpha, beta);
          if (sum < 0) return true;
          params[std::size_t(c)] = sum;
          const Elem lhs = M.act(action, targs, m, params);
          params[std::size_t(c)] = alpha;
          const Elem aa = M.act(action, targs, m, params);
          params[std::size_t(c)] = beta;
          const Elem ab = M.act(action, targs, m, params);
          if (lhs < 0 || aa < 0 || ab < 0) return true;
          const Elem rhs = mc.add(aa, ab);
          if (rhs < 0) return true;
          return lhs == rhs;
        },
        opts);
    if (bad) {
      Word targs, params;
      Elem m, alpha, beta;
      split(*bad, targs, params, m, alpha, beta);
      params[std::size_t(c)] = S.Gamma.add(alpha, beta);
      Word at;
      at.push_back(c);
      at.insert(at.end(), targs.begin(), targs.end());
      at.push_back(m);
      at.push_back(alpha);
      at.push_back(beta);
      at.insert(at.end(), params.begin(), params.end());
      report.fail({prefix + "M4", at,
                   "parameter slot " + std::to_string(c + 1) + " of " +
                       render_act(M, action, targs, mc.label(m), params) + " is not additive at " +
                       S.Gamma.label(alpha) + "+" + S.Gamma.label(beta)});
      if (opts.fail_fast) return;
      break;
    }
  }

  // M2, witness [L, t, ring letters.., m, params..]: all complete evaluations
  // of every flattened module word agree.  The shallow family (length 2n-1)
  // always runs; the deep family (length 3n-2) is the first informative one
  // for interior slots and runs when it fits the coherence budget.
  {
    const int slot = M.actions[std::size_t(action)].slot;
    const CoherenceFamily shallow = coherence_family(M, slot, 2 * n - 1);
    const CoherenceFamily deep = coherence_family(M, slot, 3 * n - 2);
    const bool run_deep = deep.instances <= opts.coherence_budget;
    {
      std::ostringstream os;
      os << prefix << "M2: length-" << shallow.length << " family: " << shallow.positions.size()
         << " constrained positions, " << shallow.instances << " instances; length-" << deep.length
         << " family: " << deep.positions.size() << " positions, " << deep.instances
         << " instances"
         << (run_deep ? ""
                      : " — skipped, over the coherence budget of " +
                            std::to_string(opts.coherence_budget));
      report.note(os.str());
    }
    for (const CoherenceFamily* fam : {&shallow, &deep}) {
      if (fam == &deep && !run_deep) continue;
      const int L = fam->length;
      if (L > kMaxCoherenceWord) {
        throw LimitError("coherence word length", std::uint64_t(L), kMaxCoherenceWord);
      }
      const std::uint64_t rpow = ipow(std::uint64_t(tsize), L - 1);
      const std::uint64_t ppow = ipow(std::uint64_t(gsize), L - 1);
      bool failed = false;
      for (const auto& [t, shapes] : fam->positions) {
        const std::uint64_t assignments = rpow * std::uint64_t(msize) * ppow;
        report.instances += std::uint64_t(shapes.size() - 1) * assignments;
        auto values = [&](std::uint64_t idx, std::vector<Elem>& out, Word* letters_out,
                          Elem* m_out, Word* params_out) {
          std::array<Elem, kMaxCoherenceWord> letters{};
          std::array<Elem, kMaxCoherenceWord> params{};
          std::uint64_t rest = idx;
          for (int i = L - 2; i >= 0; --i) {
            params[std::size_t(i)] = Elem(rest % std::uint64_t(gsize));
            rest /= std::uint64_t(gsize);
          }
          const Elem m = Elem(rest % std::uint64_t(msize));
          rest /= std::uint64_t(msize);
          for (int i = L - 1; i >= 0; --i) {
            if (i == t) continue;
            letters[std::size_t(i)] = Elem(rest % std::uint64_t(tsize));
            rest /= std::uint64_t(tsize);
          }
          out.clear();
          for (const auto& shape : shapes) {
            out.push_back(eval_shape(M, action, shape, letters.data(), L, t, m, params.data()));
          }
          if (letters_out) {
            letters_out->assign(letters.begin(), letters.begin() + L);
            *m_out = m;
            params_out->assign(params.begin(), params.begin() + (L - 1));
          }
        };
        auto bad = first_failure(
            assignments,
            [&](std::uint64_t idx) {
              std::vector<Elem> vals;
              values(idx, vals, nullptr, nullptr, nullptr);
              Elem ref = -1;
              for (Elem v : vals) {
                if (v < 0) continue;
                if (ref < 0) ref = v;
                if (v != ref) return false;
              }
              return true;
            },
            opts);
        if (bad) {
          std::vector<Elem> vals;
          Word letters, params;
          Elem m = 0;
          values(*bad, vals, &letters, &m, &params);
          Word at;
          at.push_back(L);
          at.push_back(t);
          for (int i = 0; i < L; ++i) {
            if (i != t) at.push_back(letters[std::size_t(i)]);
          }
          at.push_back(m);
          at.insert(at.end(), params.begin(), params.end());
          std::ostringstream os;
          os << "module word of length " << L << ", module letter at position " << t
             << ", letters ";
          for (int i = 0; i < L; ++i) {
            if (i) os << ",";
            os << (i == t ? "m=" + mc.label(m) : S.T.label(letters[std::size_t(i)]));
          }
          os << ", parameters " << join_labels(S.Gamma, params) << ": ";
          for (std::size_t s = 0; s < shapes.size(); ++s) {
            if (s) os << " vs ";
            os << render_shape(shapes[s], L, t, n) << " = "
               << (vals[s] < 0 ? std::string("(undefined)") : mc.label(vals[s]));
          }
          report.fail({prefix + "M2", at, os.str()});
          failed = true;
          break;
        }
      }
      if (failed) break;
    }
  }
}

}  // namespace

ValidationReport validate_module(const PositionalModule& M, const ScanOptions& opts) {
  if (!M.parent) throw std::invalid_argument("module without a parent semiring");
  ValidationReport report;
  const int n = M.parent->arity;

  if (M.actions.empty() || M.actions.size() > 2) {
    report.fail({"shape/actions", {Elem(M.actions.size())}, "a module carries one or two actions"});
    return report;
  }
  for (std::size_t i = 0; i < M.actions.size(); ++i) {
    const int slot = M.actions[i].slot;
    if (slot < 1 || slot > n || (i > 0 && slot <= M.actions[i - 1].slot)) {
      report.fail({"shape/actions", {slot}, "action slots must be increasing and within 1..arity"});
      return report;
    }
    if (M.actions[i].table.size() != M.act_cells()) {
      report.fail({"shape/table",
                   {Elem(i)},
                   "action table has " + std::to_string(M.actions[i].table.size()) +
                       " cells, expected " + std::to_string(M.act_cells())});
      return report;
    }
    for (Elem v : M.actions[i].table) {
      if (v < -1 || v >= M.carrier.size) {
        report.fail({"shape/range", {Elem(i), v}, "action value outside the carrier"});
        return report;
      }
    }
  }
  {
    ValidationReport carrier = validate_comm_monoid(M.carrier, opts);
    for (auto& w : carrier.failures) {
      w.law = "carrier/" + w.law;
      report.fail(std::move(w));
    }
    report.instances += carrier.instances;
    if (!report.ok) return report;
  }
  if (!M.total()) {
    report.note("partial structure: law instances touching undefined cells are skipped");
  }

  for (std::size_t a = 0; a < M.actions.size(); ++a) {
    const std::string prefix = M.actions.size() == 1 ? "" : (a == 0 ? "left/" : "right/");
    validate_action(M, int(a), prefix, report, opts);
    if (opts.fail_fast && !report.ok) return report;
  }
  return report;
}

ValidationReport validate_bimodule(const BiModule& M, const ScanOptions& opts) {
  ValidationReport report;
  if (M.actions.size() != 2) {
    report.fail({"shape/actions", {Elem(M.actions.size())}, "a bimodule carries exactly two actions"});
    return report;
  }
  report.merge(validate_module(M, opts));
  if (opts.fail_fast && !report.ok) return report;

  // compat, witness [a_targs.., a_params.., b_targs.., b_params.., m]:
  // left(a; right(b; m; beta); alpha) = right(b; left(a; m; alpha); beta).
  const GammaSemiring& S = *M.parent;
  const int n = S.arity;
  const std::uint64_t tpow = ipow(std::uint64_t(S.tsize()), n - 1);
  const std::uint64_t gpow = ipow(std::uint64_t(S.gsize()), n - 1);
  const std::uint64_t total = tpow * tpow * gpow * gpow * std::uint64_t(M.msize());
  report.instances += total;
  auto split = [&](std::uint64_t idx, Word& at_, Word& ap, Word& bt, Word& bp, Elem& m) {
    m = Elem(idx % std::uint64_t(M.msize()));
    idx /= std::uint64_t(M.msize());
    decode_mixed(idx % gpow, S.gsize(), n - 1, bp);
    idx /= gpow;
    decode_mixed(idx % gpow, S.gsize(), n - 1, ap);
    idx /= gpow;
    decode_mixed(idx % tpow, S.tsize(), n - 1, bt);
    decode_mixed(idx / tpow, S.tsize(), n - 1, at_);
  };
  auto bad = first_failure(
      total,
      [&](std::uint64_t idx) {
        Word at_, ap, bt, bp;
        Elem m;
        split(idx, at_, ap, bt, bp, m);
        const Elem rm = M.act(1, bt, m, bp);
        const Elem lm = M.act(0, at_, m, ap);
        if (rm < 0 || lm < 0) return true;
        const Elem lhs = M.act(0, at_, rm, ap);
        const Elem rhs = M.act(1, bt, lm, bp);
        if (lhs < 0 || rhs < 0) return true;
        return lhs == rhs;
      },
      opts);
  if (bad) {
    Word at_, ap, bt, bp;
    Elem m;
    split(*bad, at_, ap, bt, bp, m);
    Word at = at_;
    at.insert(at.end(), ap.begin(), ap.end());
    at.insert(at.end(), bt.begin(), bt.end());
    at.insert(at.end(), bp.begin(), bp.end());
    at.push_back(m);
    report.fail({"compat", at,
                 "left-then-right disagrees with right-then-left: " +
                     render_act(M, 0, at_, render_act(M, 1, bt, M.carrier.label(m), bp), ap) +
                     " != " + render_act(M, 1, bt, render_act(M, 0, at_, M.carrier.label(m), ap), bp)});
  }
  return report;
}

// --- morphisms ----------------------------------------------------------------

bool same_parent(const GammaSemiring& a, const GammaSemiring& b) {
  return a.arity == b.arity && monoid_equal(a.T, b.T) && monoid_equal(a.Gamma, b.Gamma) &&
         a.mu_table == b.mu_table;
}

bool same_module(const PositionalModule& a, const PositionalModule& b) {
  if (&a == &b) return true;
  if (!monoid_equal(a.carrier, b.carrier) || a.actions.size() != b.actions.size()) return false;
  for (std::size_t i = 0; i < a.actions.size(); ++i) {
    if (a.actions[i].slot != b.actions[i].slot || a.actions[i].table != b.actions[i].table) {
      return false;
    }
  }
  return same_parent(*a.parent, *b.parent);
}

ModuleMorphism identity_morphism(ModulePtr M) {
  std::vector<Elem> map(std::size_t(M->msize()));
  std::iota(map.begin(), map.end(), 0);
  return {M, M, std::move(map)};
}

ModuleMorphism zero_morphism(ModulePtr src, ModulePtr dst) {
  return {src, dst, std::vector<Elem>(std::size_t(src->msize()), dst->carrier.zero)};
}

ModuleMorphism table_morphism(ModulePtr src, ModulePtr dst, std::vector<Elem> map) {
  if (map.size() != std::size_t(src->msize())) {
    throw std::invalid_argument("morphism table size does not match the source carrier");
  }
  return {std::move(src), std::move(dst), std::move(map)};
}

ModuleMorphism compose(const ModuleMorphism& g, const ModuleMorphism& f) {
  if (f.target.get() != g.source.get() && !same_module(*f.target, *g.source)) {
    throw std::invalid_argument("composition endpoints do not match");
  }
  std::vector<Elem> map(f.map.size());
  for (std::size_t i = 0; i < f.map.size(); ++i) map[i] = g.map[std::size_t(f.map[i])];
  return {f.source, g.target, std::move(map)};
}

std::optional<ModuleMorphism> add_morphisms(const ModuleMorphism& f, const ModuleMorphism& g) {
  if (f.map.size() != g.map.size() ||
      (f.target.get() != g.target.get() && !same_module(*f.target, *g.target))) {
    throw std::invalid_argument("morphism sum endpoints do not match");
  }
  std::vector<Elem> map(f.map.size());
  for (std::size_t i = 0; i < f.map.size(); ++i) {
    const Elem s = f.target->carrier.add(f.map[i], g.map[i]);
    if (s < 0) return std::nullopt;
    map[i] = s;
  }
  return ModuleMorphism{f.source, f.target, std::move(map)};
}

bool same_map(const ModuleMorphism& f, const ModuleMorphism& g) { return f.map == g.map; }

bool is_zero_morphism(const ModuleMorphism& f) {
  for (Elem v : f.map) {
    if (v != f.target->carrier.zero) return false;
  }
  return true;
}

namespace {

// Weak-form morphism test used by the enumerator; instances touching an
// undefined cell on either side are skipped.
bool morphism_ok(const PositionalModule& src, const PositionalModule& dst,
                 const std::vector<Elem>& map) {
  if (map[std::size_t(src.carrier.zero)] != dst.carrier.zero) return false;
  for (Elem x = 0; x < src.msize(); ++x) {
    for (Elem y = x; y < src.msize(); ++y) {
      const Elem s = src.carrier.add(x, y);
      if (s < 0) continue;
      const Elem t = dst.carrier.add(map[std::size_t(x)], map[std::size_t(y)]);
      if (t < 0) continue;
      if (map[std::size_t(s)] != t) return false;
    }
  }
  const GammaSemiring& S = *src.parent;
  const int n = S.arity;
  const std::uint64_t tpow = ipow(std::uint64_t(S.tsize()), n - 1);
  const std::uint64_t gpow = ipow(std::uint64_t(S.gsize()), n - 1);
  Word targs, params;
  for (std::size_t a = 0; a < src.actions.size(); ++a) {
    for (std::uint64_t ti = 0; ti < tpow; ++ti) {
      decode_mixed(ti, S.tsize(), n - 1, targs);
      for (Elem m = 0; m < src.msize(); ++m) {
        for (std::uint64_t gi = 0; gi < gpow; ++gi) {
          decode_mixed(gi, S.gsize(), n - 1, params);
          const Elem v = src.act(int(a), targs, m, params);
          const Elem w = dst.act(int(a), targs, map[std::size_t(m)], params);
          if (v < 0 || w < 0) continue;
          if (map[std::size_t(v)] != w) return false;
        }
      }
    }
  }
  return true;
}

}  // namespace

ValidationReport validate_morphism(const ModuleMorphism& f, const ScanOptions& opts) {
  ValidationReport report;
  if (!f.source || !f.target) throw std::invalid_argument("morphism without endpoints");
  const PositionalModule& src = *f.source;
  const PositionalModule& dst = *f.target;
  if (f.map.size() != std::size_t(src.msize())) {
    report.fail({"shape/map", {Elem(f.map.size())}, "value table size does not match the source"});
    return report;
  }
  for (Elem v : f.map) {
    if (v < 0 || v >= dst.msize()) {
      report.fail({"shape/map", {v}, "value outside the target carrier"});
      return report;
    }
  }
  if (!same_parent(*src.parent, *dst.parent)) {
    report.fail({"shape/parent", {}, "source and target live over different parents"});
    return report;
  }
  if (src.actions.size() != dst.actions.size()) {
    report.fail({"shape/slots", {}, "source and target carry different action counts"});
    return report;
  }
  for (std::size_t a = 0; a < src.actions.size(); ++a) {
    if (src.actions[a].slot != dst.actions[a].slot) {
      report.fail({"shape/slots",
                   {Elem(a), src.actions[a].slot, dst.actions[a].slot},
                   "paired actions sit at different slots"});
      return report;
    }
  }
  if (!src.total() || !dst.total()) {
    report.note("partial structure: law instances touching undefined cells are skipped");
  }

  if (f.map[std::size_t(src.carrier.zero)] != dst.carrier.zero) {
    report.fail({"zero",
                 {src.carrier.zero},
                 "zero maps to " + dst.carrier.label(f.map[std::size_t(src.carrier.zero)])});
    if (opts.fail_fast) return report;
  }
  ++report.instances;

  // additive, witness [x, y]: f(x+y) = f(x) + f(y).
  {
    const std::uint64_t total = std::uint64_t(src.msize()) * std::uint64_t(src.msize());
    report.instances += total;
    auto bad = first_failure(
        total,
        [&](std::uint64_t idx) {
          const Elem x = Elem(idx / std::uint64_t(src.msize()));
          const Elem y = Elem(idx % std::uint64_t(src.msize()));
          const Elem s = src.carrier.add(x, y);
          if (s < 0) return true;
          const Elem t = dst.carrier.add(f.map[std::size_t(x)], f.map[std::size_t(y)]);
          if (t < 0) return true;
          return f.map[std::size_t(s)] == t;
        },
        opts);
    if (bad) {
      const Elem x = Elem(*bad / std::uint64_t(src.msize()));
      const Elem y = Elem(*bad % std::uint64_t(src.msize()));
      report.fail({"additive",
                   {x, y},
                   "f(" + src.carrier.label(x) + "+" + src.carrier.label(y) +
                       ") differs from f(" + src.carrier.label(x) + ")+f(" + src.carrier.label(y) +
                       ")"});
      if (opts.fail_fast) return report;
    }
  }

  // action, witness [targs.., m, params..]: f(act(targs, m, params)) =
  // act(targs, f(m), params), per paired action.
  const GammaSemiring& S = *src.parent;
  const int n = S.arity;
  const std::uint64_t tpow = ipow(std::uint64_t(S.tsize()), n - 1);
  const std::uint64_t gpow = ipow(std::uint64_t(S.gsize()), n - 1);
  for (std::size_t a = 0; a < src.actions.size(); ++a) {
    const std::string prefix = src.actions.size() == 1 ? "" : (a == 0 ? "left/" : "right/");
    const std::uint64_t total = tpow * std::uint64_t(src.msize()) * gpow;
    report.instances += total;
    auto split = [&](std::uint64_t idx, Word& targs, Word& params, Elem& m) {
      decode_mixed(idx % gpow, S.gsize(), n - 1, params);
      idx /= gpow;
      m = Elem(idx % std::uint64_t(src.msize()));
      decode_mixed(idx / std::uint64_t(src.msize()), S.tsize(), n - 1, targs);
    };
    auto bad = first_failure(
        total,
        [&](std::uint64_t idx) {
          Word targs, params;
          Elem m;
          split(idx, targs, params, m);
          const Elem v = src.act(int(a), targs, m, params);
          const Elem w = dst.act(int(a), targs, f.map[std::size_t(m)], params);
          if (v < 0 || w < 0) return true;
          return f.map[std::size_t(v)] == w;
        },
        opts);
    if (bad) {
      Word targs, params;
      Elem m;
      split(*bad, targs, params, m);
      Word at = targs;
      at.push_back(m);
      at.insert(at.end(), params.begin(), params.end());
      report.fail({prefix + "action", at,
                   "f does not intertwine " +
                       render_act(src, int(a), targs, src.carrier.label(m), params)});
      if (opts.fail_fast) return report;
    }
  }
  return report;
}

std::vector<ModuleMorphism> enumerate_morphisms(ModulePtr src, ModulePtr dst,
                                                std::uint64_t max_maps) {
  const std::uint64_t total = ipow(std::uint64_t(dst->msize()), src->msize());
  if (total > max_maps) throw LimitError("morphism enumeration", total, max_maps);
  std::vector<ModuleMorphism> out;
  Word map;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    decode_mixed(idx, dst->msize(), src->msize(), map);
    if (morphism_ok(*src, *dst, map)) out.push_back({src, dst, map});
  }
  return out;
}

// --- kernels, cokernels, biproducts --------------------------------------------

KernelResult kernel(const ModuleMorphism& f) {
  const PositionalModule& src = *f.source;
  const PositionalModule& dst = *f.target;
  std::vector<Elem> members;
  std::vector<Elem> index_of(std::size_t(src.msize()), -1);
  for (Elem m = 0; m < src.msize(); ++m) {
    if (f.map[std::size_t(m)] == dst.carrier.zero) {
      index_of[std::size_t(m)] = Elem(members.size());
      members.push_back(m);
    }
  }
  if (index_of[std::size_t(src.carrier.zero)] < 0) {
    throw std::logic_error("kernel: the source zero does not map to zero");
  }

  auto K = std::make_shared<PositionalModule>();
  K->parent = src.parent;
  K->provenance = "kernel";
  FiniteCommMonoid& c = K->carrier;
  c.size = int(members.size());
  c.zero = index_of[std::size_t(src.carrier.zero)];
  c.table.assign(members.size() * members.size(), -1);
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = 0; j < members.size(); ++j) {
      const Elem s = src.carrier.add(members[i], members[j]);
      if (s < 0) continue;
      if (index_of[std::size_t(s)] < 0) {
        throw std::logic_error("kernel: addition escapes the preimage of zero");
      }
      c.table[i * members.size() + j] = index_of[std::size_t(s)];
    }
  }
  c.labels.reserve(members.size());
  for (Elem m : members) c.labels.push_back(src.carrier.label(m));

  const GammaSemiring& S = *src.parent;
  const int n = S.arity;
  const std::uint64_t tpow = ipow(std::uint64_t(S.tsize()), n - 1);
  const std::uint64_t gpow = ipow(std::uint64_t(S.gsize()), n - 1);
  Word targs, params;
  for (const ActionSlot& a : src.actions) {
    ActionSlot ka;
    ka.slot = a.slot;
    ka.table.reserve(std::size_t(tpow * members.size() * gpow));
    for (std::uint64_t ti = 0; ti < tpow; ++ti) {
      decode_mixed(ti, S.tsize(), n - 1, targs);
      for (Elem m : members) {
        for (std::uint64_t gi = 0; gi < gpow; ++gi) {
          decode_mixed(gi, S.gsize(), n - 1, params);
          const Elem v = src.act(int(&a - src.actions.data()), targs, m, params);
          if (v < 0) {
            ka.table.push_back(-1);
            continue;
          }
          if (index_of[std::size_t(v)] < 0) {
            throw std::logic_error("kernel: action escapes the preimage of zero");
          }
          ka.table.push_back(index_of[std::size_t(v)]);
        }
      }
    }
    K->actions.push_back(std::move(ka));
  }
  ModuleMorphism inclusion{K, f.source, members};
  return {std::move(K), std::move(inclusion)};
}

CokernelResult cokernel(const ModuleMorphism& f) {
  const PositionalModule& dst = *f.target;
  std::vector<std::pair<Elem, Elem>> pairs;
  pairs.reserve(f.map.size());
  for (Elem v : f.map) pairs.emplace_back(v, dst.carrier.zero);

  CokernelResult out;
  out.congruence = congruence_closure(dst.carrier, pairs);
  const CongruenceRelation& cong = out.congruence;

  auto Q = std::make_shared<PositionalModule>();
  Q->parent = dst.parent;
  Q->provenance = "cokernel";
  Q->carrier = quotient_monoid(dst.carrier, cong, &out.stats);

  // Induced action: evaluate on every representative of a class; mixed
  // verdicts are a mathematical obstruction, not an exception.
  const GammaSemiring& S = *dst.parent;
  const int n = S.arity;
  const std::uint64_t tpow = ipow(std::uint64_t(S.tsize()), n - 1);
  const std::uint64_t gpow = ipow(std::uint64_t(S.gsize()), n - 1);
  std::vector<std::vector<Elem>> members(std::size_t(cong.classes));
  for (Elem m = 0; m < dst.msize(); ++m) {
    members[std::size_t(cong.class_of[std::size_t(m)])].push_back(m);
  }
  Word targs, params;
  for (std::size_t a = 0; a < dst.actions.size(); ++a) {
    ActionSlot qa;
    qa.slot = dst.actions[a].slot;
    qa.table.reserve(std::size_t(tpow * std::uint64_t(cong.classes) * gpow));
    for (std::uint64_t ti = 0; ti < tpow; ++ti) {
      decode_mixed(ti, S.tsize(), n - 1, targs);
      for (int cls = 0; cls < cong.classes; ++cls) {
        for (std::uint64_t gi = 0; gi < gpow; ++gi) {
          decode_mixed(gi, S.gsize(), n - 1, params);
          ++out.action_check.instances;
          Elem value = -1;
          Elem chosen = -1;
          for (Elem m : members[std::size_t(cls)]) {
            const Elem v = dst.act(int(a), targs, m, params);
            if (v < 0) continue;
            const Elem vc = cong.class_of[std::size_t(v)];
            if (value < 0) {
              value = vc;
              chosen = m;
            } else if (value != vc && out.action_check.ok) {
              Word at = targs;
              at.push_back(chosen);
              at.push_back(m);
              at.insert(at.end(), params.begin(), params.end());
              out.action_check.fail(
                  {"action-classes", at,
                   "representatives " + dst.carrier.label(chosen) + " and " +
                       dst.carrier.label(m) + " of the same class act to different classes under " +
                       render_act(dst, int(a), targs, "-", params)});
            }
          }
          qa.table.push_back(value);
        }
      }
    }
    Q->actions.push_back(std::move(qa));
  }

  // The naive coset relation (x ~ y iff x + i = y + i' for image elements
  // i, i') is compared against the congruence; on commutative monoids it can
  // be strictly finer, which is why the closure is the construction of record.
  if (dst.carrier.complete()) {
    std::vector<Elem> image;
    {
      std::vector<bool> seen(std::size_t(dst.msize()), false);
      for (Elem v : f.map) {
        if (!seen[std::size_t(v)]) {
          seen[std::size_t(v)] = true;
          image.push_back(v);
        }
      }
    }
    bool same = true;
    for (Elem x = 0; x < dst.msize() && same; ++x) {
      for (Elem y = x + 1; y < dst.msize() && same; ++y) {
        bool coset = false;
        for (Elem i1 : image) {
          for (Elem i2 : image) {
            if (dst.carrier.add(x, i1) == dst.carrier.add(y, i2)) {
              coset = true;
              break;
            }
          }
          if (coset) break;
        }
        if (coset != (cong.class_of[std::size_t(x)] == cong.class_of[std::size_t(y)])) same = false;
      }
    }
    out.log.push_back(same ? "coset relation coincides with the congruence"
                           : "coset relation is strictly finer than the congruence; the "
                             "congruence quotient is used");
  }
  out.log.push_back("classes: " + std::to_string(cong.classes));

  out.projection = ModuleMorphism{f.target, Q, cong.class_of};
  out.module = std::move(Q);
  return out;
}

BiproductResult biproduct(ModulePtr M, ModulePtr N) {
  if (!same_parent(*M->parent, *N->parent)) {
    throw std::invalid_argument("biproduct factors live over different parents");
  }
  if (M->actions.size() != N->actions.size()) {
    throw std::invalid_argument("biproduct factors carry different action counts");
  }
  for (std::size_t a = 0; a < M->actions.size(); ++a) {
    if (M->actions[a].slot != N->actions[a].slot) {
      throw std::invalid_argument("biproduct factors act at different slots");
    }
  }

  auto P = std::make_shared<PositionalModule>();
  P->parent = M->parent;
  P->carrier = product_monoid(M->carrier, N->carrier);
  P->provenance = "biproduct";
  const GammaSemiring& S = *M->parent;
  const int n = S.arity;
  const std::uint64_t tpow = ipow(std::uint64_t(S.tsize()), n - 1);
  const std::uint64_t gpow = ipow(std::uint64_t(S.gsize()), n - 1);
  const int nsize = N->msize();
  Word targs, params;
  for (std::size_t a = 0; a < M->actions.size(); ++a) {
    ActionSlot pa;
    pa.slot = M->actions[a].slot;
    pa.table.reserve(std::size_t(tpow * std::uint64_t(P->carrier.size) * gpow));
    for (std::uint64_t ti = 0; ti < tpow; ++ti) {
      decode_mixed(ti, S.tsize(), n - 1, targs);
      for (Elem p = 0; p < P->carrier.size; ++p) {
        for (std::uint64_t gi = 0; gi < gpow; ++gi) {
          decode_mixed(gi, S.gsize(), n - 1, params);
          const Elem vm = M->act(int(a), targs, p / nsize, params);
          const Elem vn = N->act(int(a), targs, p % nsize, params);
          pa.table.push_back(vm < 0 || vn < 0 ? -1 : vm * nsize + vn);
        }
      }
    }
    P->actions.push_back(std::move(pa));
  }

  BiproductResult out;
  out.module = P;
  std::vector<Elem> i1(std::size_t(M->msize())), i2(std::size_t(N->msize()));
  std::vector<Elem> p1(std::size_t(P->carrier.size)), p2(std::size_t(P->carrier.size));
  for (Elem m = 0; m < M->msize(); ++m) i1[std::size_t(m)] = m * nsize + N->carrier.zero;
  for (Elem x = 0; x < N->msize(); ++x) i2[std::size_t(x)] = M->carrier.zero * nsize + x;
  for (Elem p = 0; p < P->carrier.size; ++p) {
    p1[std::size_t(p)] = p / nsize;
    p2[std::size_t(p)] = p % nsize;
  }
  out.inject_first = {M, P, std::move(i1)};
  out.inject_second = {N, P, std::move(i2)};
  out.project_first = {P, M, std::move(p1)};
  out.project_second = {P, N, std::move(p2)};
  return out;
}

ValidationReport check_biproduct(const BiproductResult& B, const ScanOptions& opts) {
  ValidationReport report;
  const struct {
    const char* name;
    const ModuleMorphism* f;
  } maps[] = {{"i1/", &B.inject_first},
              {"i2/", &B.inject_second},
              {"p1/", &B.project_first},
              {"p2/", &B.project_second}};
  for (const auto& entry : maps) {
    ValidationReport r = validate_morphism(*entry.f, opts);
    for (auto& w : r.failures) {
      w.law = entry.name + w.law;
      report.fail(std::move(w));
    }
    report.instances += r.instances;
  }
  if (!report.ok && opts.fail_fast) return report;

  auto expect = [&](const char* law, const ModuleMorphism& got, const std::vector<Elem>& want) {
    ++report.instances;
    if (got.map != want) {
      report.fail({law, {}, "composite differs from the expected map"});
    }
  };
  expect("identity/p1i1", compose(B.project_first, B.inject_first),
         identity_morphism(B.inject_first.source).map);
  expect("identity/p2i2", compose(B.project_second, B.inject_second),
         identity_morphism(B.inject_second.source).map);
  expect("identity/p2i1", compose(B.project_second, B.inject_first),
         zero_morphism(B.inject_first.source, B.project_second.target).map);
  expect("identity/p1i2", compose(B.project_first, B.inject_second),
         zero_morphism(B.inject_second.source, B.project_first.target).map);
  auto split = add_morphisms(compose(B.inject_first, B.project_first),
                             compose(B.inject_second, B.project_second));
  ++report.instances;
  if (!split || split->map != identity_morphism(B.module).map) {
    report.fail({"identity/split", {}, "i1 p1 + i2 p2 is not the identity"});
  }
  return report;
}

// --- universal properties -------------------------------------------------------

ValidationReport check_kernel_universal(const ModuleMorphism& f, const KernelResult& k,
                                        const std::vector<ModulePtr>& probes,
                                        std::uint64_t max_maps) {
  ValidationReport report;
  {
    ValidationReport r = validate_morphism(k.inclusion);
    for (auto& w : r.failures) {
      w.law = "inclusion/" + w.law;
      report.fail(std::move(w));
    }
    report.instances += r.instances;
    ++report.instances;
    if (!is_zero_morphism(compose(f, k.inclusion))) {
      report.fail({"inclusion/zero-composite", {}, "f composed with the inclusion is nonzero"});
    }
  }
  std::uint64_t cones = 0;
  for (std::size_t pi = 0; pi < probes.size(); ++pi) {
    const ModulePtr& W = probes[pi];
    const auto into_src = enumerate_morphisms(W, f.source, max_maps);
    const auto into_ker = enumerate_morphisms(W, k.module, max_maps);
    for (const ModuleMorphism& g : into_src) {
      if (!is_zero_morphism(compose(f, g))) continue;
      ++cones;
      ++report.instances;
      std::uint64_t count = 0;
      for (const ModuleMorphism& h : into_ker) {
        if (compose(k.inclusion, h).map == g.map) ++count;
      }
      if (count != 1) {
        Word at;
        at.push_back(Elem(pi));
        at.insert(at.end(), g.map.begin(), g.map.end());
        report.fail({"kernel-up", at,
                     "test map from probe " + std::to_string(pi) + " admits " +
                         std::to_string(count) + " factorizations through the kernel"});
      }
    }
  }
  report.note("kernel universal property: " + std::to_string(cones) + " test maps across " +
              std::to_string(probes.size()) + " probes");
  return report;
}

ValidationReport check_cokernel_universal(const ModuleMorphism& f, const CokernelResult& c,
                                          const std::vector<ModulePtr>& probes,
                                          std::uint64_t max_maps) {
  ValidationReport report;
  {
    ValidationReport r = validate_morphism(c.projection);
    for (auto& w : r.failures) {
      w.law = "projection/" + w.law;
      report.fail(std::move(w));
    }
    report.instances += r.instances;
    ++report.instances;
    if (!is_zero_morphism(compose(c.projection, f))) {
      report.fail({"projection/zero-composite", {}, "the projection composed with f is nonzero"});
    }
  }
  std::uint64_t cones = 0;
  for (std::size_t pi = 0; pi < probes.size(); ++pi) {
    const ModulePtr& W = probes[pi];
    const auto from_dst = enumerate_morphisms(f.target, W, max_maps);
    const auto from_q = enumerate_morphisms(c.module, W, max_maps);
    for (const ModuleMorphism& g : from_dst) {
      if (!is_zero_morphism(compose(g, f))) continue;
      ++cones;
      ++report.instances;
      std::uint64_t count = 0;
      for (const ModuleMorphism& u : from_q) {
        if (compose(u, c.projection).map == g.map) ++count;
      }
      if (count != 1) {
        Word at;
        at.push_back(Elem(pi));
        at.insert(at.end(), g.map.begin(), g.map.end());
        report.fail({"cokernel-up", at,
                     "test map into probe " + std::to_string(pi) + " admits " +
                         std::to_string(count) + " factorizations through the projection"});
      }
    }
  }
  report.note("cokernel universal property: " + std::to_string(cones) + " test maps across " +
              std::to_string(probes.size()) + " probes");
  return report;
}

}  // namespace gammalab
