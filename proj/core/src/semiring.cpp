#include "gammalab/semiring.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

#include "gammalab/detail/union_find.hpp"

namespace gammalab {

namespace {

void merge_prefixed(ValidationReport& into, const ValidationReport& sub, const std::string& prefix) {
  into.ok = into.ok && sub.ok;
  for (Witness w : sub.failures) {
    w.law = prefix + w.law;
    into.failures.push_back(std::move(w));
  }
  for (const std::string& n : sub.notes) into.notes.push_back(prefix + n);
  into.instances += sub.instances;
}

std::string render_call(const GammaSemiring& S, const Word& args, const Word& params) {
  std::ostringstream os;
  os << "mu(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) os << ",";
    os << S.T.label(args[i]);
  }
  os << ";";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) os << ",";
    os << S.Gamma.label(params[i]);
  }
  os << ")";
  return os.str();
}

}  // namespace

Elem two_level_eval(const GammaSemiring& S, const Word& w, const Word& g, int window_start) {
  const int n = S.arity;
  thread_local Word inner_args, inner_params, outer_args, outer_params;
  inner_args.assign(w.begin() + window_start, w.begin() + window_start + n);
  inner_params.assign(g.begin() + window_start, g.begin() + window_start + n - 1);
  const Elem inner = S.mu(inner_args, inner_params);

  outer_args.clear();
  outer_params.clear();
  for (int i = 0; i < window_start; ++i) outer_args.push_back(w[std::size_t(i)]);
  outer_args.push_back(inner);
  for (int i = window_start + n; i < 2 * n - 1; ++i) outer_args.push_back(w[std::size_t(i)]);
  for (int i = 0; i < window_start; ++i) outer_params.push_back(g[std::size_t(i)]);
  for (int i = window_start + n - 1; i < 2 * (n - 1); ++i) outer_params.push_back(g[std::size_t(i)]);
  return S.mu(outer_args, outer_params);
}

ValidationReport validate_gamma_semiring(const GammaSemiring& S, const ScanOptions& opts) {
  ValidationReport report;
  const int n = S.arity;
  const int t = S.T.size;
  const int gs = S.Gamma.size;

  if (n < 2) {
    report.fail({"shape", {}, "arity must be at least 2"});
    return report;
  }
  merge_prefixed(report, validate_comm_monoid(S.T, opts), "T/");
  merge_prefixed(report, validate_comm_monoid(S.Gamma, opts), "Gamma/");
  if (!report.ok) return report;
  if (!S.T.complete() || !S.Gamma.complete()) {
    report.fail({"shape", {}, "carriers of a product structure must have total addition"});
    return report;
  }
  if (S.mu_table.size() != S.table_cells()) {
    report.fail({"shape", {}, "product table has the wrong number of cells"});
    return report;
  }
  for (Elem e : S.mu_table) {
    if (e < 0 || e >= t) {
      report.fail({"shape", {}, "product table entry outside the T carrier"});
      return report;
    }
  }

  const std::uint64_t gpow = ipow(std::uint64_t(gs), n - 1);
  const std::uint64_t tpow_rest = ipow(std::uint64_t(t), n - 1);

  // A1: additivity in each T-slot.
  for (int slot = 0; slot < n && !(opts.fail_fast && !report.ok); ++slot) {
    const std::uint64_t total = tpow_rest * std::uint64_t(t) * std::uint64_t(t) * gpow;
    auto decode = [&](std::uint64_t idx, Word& others, Elem& x, Elem& y, Word& params) {
      decode_mixed(idx % gpow, gs, n - 1, params);
      idx /= gpow;
      y = Elem(idx % std::uint64_t(t));
      idx /= std::uint64_t(t);
      x = Elem(idx % std::uint64_t(t));
      idx /= std::uint64_t(t);
      decode_mixed(idx, t, n - 1, others);
    };
    auto assemble = [&](const Word& others, Elem at_slot, Word& args) {
      args.clear();
      for (int i = 0; i < n; ++i) {
        if (i == slot) args.push_back(at_slot);
        else args.push_back(others[std::size_t(i < slot ? i : i - 1)]);
      }
    };
    auto holds = [&](std::uint64_t idx) {
      thread_local Word others, params, args;
      Elem x, y;
      decode(idx, others, x, y, params);
      assemble(others, S.T.add(x, y), args);
      const Elem lhs = S.mu(args, params);
      assemble(others, x, args);
      const Elem r1 = S.mu(args, params);
      assemble(others, y, args);
      const Elem r2 = S.mu(args, params);
      return lhs == S.T.add(r1, r2);
    };
    report.instances += total;
    if (auto bad = first_failure(total, holds, opts)) {
      Word others, params, args;
      Elem x, y;
      decode(*bad, others, x, y, params);
      assemble(others, S.T.add(x, y), args);
      Word at = args;
      at.insert(at.end(), params.begin(), params.end());
      at.push_back(Elem(slot));
      at.push_back(x);
      at.push_back(y);
      report.fail({"A1/slot-" + std::to_string(slot + 1), at,
                   "additivity fails at slot " + std::to_string(slot + 1) + " splitting " +
                       S.T.label(S.T.add(x, y)) + " as " + S.T.label(x) + "+" + S.T.label(y) +
                       " in " + render_call(S, args, params)});
    }
  }

  // A2: the additive zero of T absorbs in every slot.
  for (int slot = 0; slot < n && !(opts.fail_fast && !report.ok); ++slot) {
    const std::uint64_t total = tpow_rest * gpow;
    auto holds = [&](std::uint64_t idx) {
      thread_local Word others, params, args;
      decode_mixed(idx % gpow, gs, n - 1, params);
      decode_mixed(idx / gpow, t, n - 1, others);
      args.clear();
      for (int i = 0; i < n; ++i) {
        if (i == slot) args.push_back(S.T.zero);
        else args.push_back(others[std::size_t(i < slot ? i : i - 1)]);
      }
      return S.mu(args, params) == S.T.zero;
    };
    report.instances += total;
    if (auto bad = first_failure(total, holds, opts)) {
      Word others, params, args;
      decode_mixed(*bad % gpow, gs, n - 1, params);
      decode_mixed(*bad / gpow, t, n - 1, others);
      args.clear();
      for (int i = 0; i < n; ++i) {
        if (i == slot) args.push_back(S.T.zero);
        else args.push_back(others[std::size_t(i < slot ? i : i - 1)]);
      }
      Word at = args;
      at.insert(at.end(), params.begin(), params.end());
      at.push_back(Elem(slot));
      report.fail({"A2/slot-" + std::to_string(slot + 1), at,
                   render_call(S, args, params) + " != " + S.T.label(S.T.zero)});
    }
  }

  // A3: all window placements of a nested application agree on flattened
  // (2n-1)-argument words.
  if (!(opts.fail_fast && !report.ok)) {
    const std::uint64_t words = ipow(std::uint64_t(t), 2 * n - 1);
    const std::uint64_t parms = ipow(std::uint64_t(gs), 2 * (n - 1));
    const std::uint64_t total = std::uint64_t(n - 1) * words * parms;
    auto holds = [&](std::uint64_t idx) {
      thread_local Word w, g;
      decode_mixed(idx % parms, gs, 2 * (n - 1), g);
      idx /= parms;
      decode_mixed(idx % words, t, 2 * n - 1, w);
      const int p = int(idx / words) + 1;
      return two_level_eval(S, w, g, 0) == two_level_eval(S, w, g, p);
    };
    report.instances += total;
    if (auto bad = first_failure(total, holds, opts)) {
      Word w, g;
      std::uint64_t idx = *bad;
      decode_mixed(idx % parms, gs, 2 * (n - 1), g);
      idx /= parms;
      decode_mixed(idx % words, t, 2 * n - 1, w);
      const int p = int(idx / words) + 1;
      Word at = w;
      at.insert(at.end(), g.begin(), g.end());
      at.push_back(Elem(p));
      report.fail({"A3", at,
                   "window at offset 0 and window at offset " + std::to_string(p) +
                       " evaluate differently over the word " + render_word(w) +
                       " with parameters " + render_word(g)});
    }
  }

  return report;
}

std::optional<Witness> find_asymmetry_witness(const GammaSemiring& S) {
  const int n = S.arity;
  const std::uint64_t gpow = ipow(std::uint64_t(S.Gamma.size), n - 1);
  const std::uint64_t tpow = ipow(std::uint64_t(S.T.size), n);
  Word args, params, swapped;
  for (std::uint64_t ai = 0; ai < tpow; ++ai) {
    decode_mixed(ai, S.T.size, n, args);
    for (std::uint64_t gi = 0; gi < gpow; ++gi) {
      decode_mixed(gi, S.Gamma.size, n - 1, params);
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          swapped = args;
          std::swap(swapped[std::size_t(i)], swapped[std::size_t(j)]);
          if (S.mu(args, params) != S.mu(swapped, params)) {
            Word at = args;
            at.insert(at.end(), params.begin(), params.end());
            at.push_back(Elem(i));
            at.push_back(Elem(j));
            return Witness{"asymmetry", at,
                           "swapping arguments " + std::to_string(i + 1) + " and " +
                               std::to_string(j + 1) + " changes " + render_call(S, args, params) +
                               " from " + S.T.label(S.mu(args, params)) + " to " +
                               S.T.label(S.mu(swapped, params))};
          }
        }
      }
    }
  }
  return std::nullopt;
}

ValidationReport validate_homomorphism(const GammaSemiring& from, const GammaSemiring& to,
                                       const SemiringHom& h, const ScanOptions& opts) {
  ValidationReport report;
  if (from.arity != to.arity) {
    report.fail({"shape", {}, "arities differ"});
    return report;
  }
  if (int(h.t_map.size()) != from.T.size || int(h.gamma_map.size()) != from.Gamma.size) {
    report.fail({"shape", {}, "map sizes do not match the source carriers"});
    return report;
  }
  for (Elem e : h.t_map) {
    if (e < 0 || e >= to.T.size) {
      report.fail({"shape", {}, "T-map value outside the target carrier"});
      return report;
    }
  }
  for (Elem e : h.gamma_map) {
    if (e < 0 || e >= to.Gamma.size) {
      report.fail({"shape", {}, "Gamma-map value outside the target carrier"});
      return report;
    }
  }

  auto check_additive = [&](const FiniteCommMonoid& src, const FiniteCommMonoid& dst,
                            const std::vector<Elem>& f, const std::string& which) {
    if (f[std::size_t(src.zero)] != dst.zero) {
      report.fail({"zero-" + which, {src.zero}, "zero is not preserved"});
      if (opts.fail_fast) return;
    }
    for (Elem a = 0; a < src.size; ++a) {
      for (Elem b = a; b < src.size; ++b) {
        ++report.instances;
        if (f[std::size_t(src.add(a, b))] != dst.add(f[std::size_t(a)], f[std::size_t(b)])) {
          report.fail({"additive-" + which, {a, b},
                       "image of " + src.label(a) + "+" + src.label(b) +
                           " differs from the sum of images"});
          return;
        }
      }
    }
  };
  check_additive(from.T, to.T, h.t_map, "T");
  if (opts.fail_fast && !report.ok) return report;
  check_additive(from.Gamma, to.Gamma, h.gamma_map, "Gamma");
  if (opts.fail_fast && !report.ok) return report;

  const int n = from.arity;
  const std::uint64_t gpow = ipow(std::uint64_t(from.Gamma.size), n - 1);
  const std::uint64_t total = ipow(std::uint64_t(from.T.size), n) * gpow;
  auto holds = [&](std::uint64_t idx) {
    thread_local Word args, params, im_args, im_params;
    decode_mixed(idx % gpow, from.Gamma.size, n - 1, params);
    decode_mixed(idx / gpow, from.T.size, n, args);
    im_args.clear();
    im_params.clear();
    for (Elem a : args) im_args.push_back(h.t_map[std::size_t(a)]);
    for (Elem g : params) im_params.push_back(h.gamma_map[std::size_t(g)]);
    return h.t_map[std::size_t(from.mu(args, params))] == to.mu(im_args, im_params);
  };
  report.instances += total;
  if (auto bad = first_failure(total, holds, opts)) {
    Word args, params;
    decode_mixed(*bad % gpow, from.Gamma.size, n - 1, params);
    decode_mixed(*bad / gpow, from.T.size, n, args);
    Word at = args;
    at.insert(at.end(), params.begin(), params.end());
    report.fail({"product-compat", at,
                 "image of " + render_call(from, args, params) +
                     " differs from the product of images"});
  }
  return report;
}

// --- named instances and realizations ---------------------------------------

BaseSemiring base_boolean() {
  BaseSemiring b;
  b.add = boolean_or_monoid();
  b.mul_table = {0, 0, 0, 1};
  b.one = 1;
  b.name = "boolean";
  return b;
}

BaseSemiring base_z2() {
  BaseSemiring b;
  b.add = cyclic_monoid(2);
  b.add.labels = {"0", "1"};
  b.mul_table = {0, 0, 0, 1};
  b.one = 1;
  b.name = "z2";
  return b;
}

BaseSemiring base_trunc_tropical(int k) {
  if (k < 0) throw std::invalid_argument("trunc-tropical needs k >= 0");
  BaseSemiring b;
  const int n = k + 2;  // 0..k plus infinity at the last index
  const Elem inf = Elem(k + 1);
  b.add.size = n;
  b.add.zero = inf;
  b.add.table.resize(std::size_t(n) * std::size_t(n));
  b.mul_table.resize(std::size_t(n) * std::size_t(n));
  for (Elem a = 0; a < n; ++a) {
    for (Elem x = 0; x < n; ++x) {
      const std::size_t cell = std::size_t(a) * std::size_t(n) + std::size_t(x);
      b.add.table[cell] = (a == inf) ? x : (x == inf) ? a : std::min(a, x);
      b.mul_table[cell] = (a == inf || x == inf || a + x > k) ? inf : a + x;
    }
  }
  b.one = 0;
  b.add.labels.reserve(std::size_t(n));
  for (int v = 0; v <= k; ++v) b.add.labels.push_back(std::to_string(v));
  b.add.labels.push_back("inf");
  b.name = "trunc-tropical(" + std::to_string(k) + ")";
  return b;
}

ValidationReport validate_base_semiring(const BaseSemiring& b) {
  ValidationReport report;
  merge_prefixed(report, validate_comm_monoid(b.add), "add/");
  const int n = b.add.size;
  if (int(b.mul_table.size()) != n * n || b.one < 0 || b.one >= n) {
    report.fail({"shape", {}, "multiplication table or unit is inconsistent"});
    return report;
  }
  for (Elem a = 0; a < n && report.ok; ++a) {
    if (b.mul(a, b.one) != a || b.mul(b.one, a) != a) {
      report.fail({"mul-unit", {a}, "unit fails at " + b.add.label(a)});
    }
    if (b.mul(a, b.add.zero) != b.add.zero || b.mul(b.add.zero, a) != b.add.zero) {
      report.fail({"mul-zero", {a}, "zero fails to absorb at " + b.add.label(a)});
    }
  }
  for (Elem a = 0; a < n && report.ok; ++a) {
    for (Elem x = 0; x < n && report.ok; ++x) {
      if (b.mul(a, x) != b.mul(x, a)) report.fail({"mul-comm", {a, x}, "multiplication is not commutative"});
      for (Elem y = 0; y < n && report.ok; ++y) {
        ++report.instances;
        if (b.mul(b.mul(a, x), y) != b.mul(a, b.mul(x, y))) {
          report.fail({"mul-assoc", {a, x, y}, "multiplication is not associative"});
        }
        if (b.mul(a, b.add.add(x, y)) != b.add.add(b.mul(a, x), b.mul(a, y))) {
          report.fail({"distributivity", {a, x, y}, "left distributivity fails"});
        }
      }
    }
  }
  return report;
}

namespace {

struct MatrixSpace {
  const BaseSemiring* base;
  int dim;
  std::vector<Word> digits;  // matrix index -> row-major entries

  Word matmul(const Word& a, const Word& b) const {
    Word c(std::size_t(dim * dim), base->add.zero);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        Elem acc = base->add.zero;
        for (int k = 0; k < dim; ++k) {
          acc = base->add.add(acc,
                              base->mul(a[std::size_t(i * dim + k)], b[std::size_t(k * dim + j)]));
        }
        c[std::size_t(i * dim + j)] = acc;
      }
    }
    return c;
  }

  Word scalar(Elem g) const {
    Word s(std::size_t(dim * dim), base->add.zero);
    for (int i = 0; i < dim; ++i) s[std::size_t(i * dim + i)] = g;
    return s;
  }

  std::string label(const Word& m) const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < dim; ++i) {
      if (i) os << ";";
      for (int j = 0; j < dim; ++j) {
        if (j) os << ",";
        os << base->add.label(m[std::size_t(i * dim + j)]);
      }
    }
    os << "]";
    return os.str();
  }
};

constexpr std::uint64_t kMaxTableCells = std::uint64_t(1) << 26;

}  // namespace

GammaSemiring build_matrix_realization(const BaseSemiring& base, int dim, int arity,
                                       bool gamma_inner, std::uint64_t max_carrier) {
  if (dim < 1 || arity < 2) throw std::invalid_argument("matrix realization needs dim >= 1, arity >= 2");
  const int s = base.add.size;
  const int cells = dim * dim;

  std::uint64_t tsize = 1;
  for (int i = 0; i < cells; ++i) {
    tsize *= std::uint64_t(s);
    if (tsize > max_carrier) throw LimitError("matrix carrier size", ipow(std::uint64_t(s), cells), max_carrier);
  }
  const std::uint64_t table_cells =
      ipow(tsize, arity) * ipow(std::uint64_t(s), arity - 1);
  if (table_cells > kMaxTableCells) {
    throw LimitError("realization table cells", table_cells, kMaxTableCells);
  }

  MatrixSpace ms{&base, dim, {}};
  ms.digits.resize(std::size_t(tsize));
  for (std::uint64_t m = 0; m < tsize; ++m) decode_mixed(m, s, cells, ms.digits[std::size_t(m)]);

  GammaSemiring S;
  S.arity = arity;
  S.Gamma = base.add;
  S.T.size = int(tsize);
  S.T.zero = Elem(encode_mixed(ms.scalar(base.add.zero), s));
  S.T.table.resize(std::size_t(tsize) * std::size_t(tsize));
  for (std::uint64_t a = 0; a < tsize; ++a) {
    for (std::uint64_t b = 0; b < tsize; ++b) {
      Word sum(std::size_t(cells), 0);
      for (int i = 0; i < cells; ++i) {
        sum[std::size_t(i)] =
            base.add.add(ms.digits[std::size_t(a)][std::size_t(i)], ms.digits[std::size_t(b)][std::size_t(i)]);
      }
      S.T.table[std::size_t(a) * std::size_t(tsize) + std::size_t(b)] = Elem(encode_mixed(sum, s));
    }
  }
  S.T.labels.reserve(std::size_t(tsize));
  for (std::uint64_t m = 0; m < tsize; ++m) S.T.labels.push_back(ms.label(ms.digits[std::size_t(m)]));

  S.mu_table.resize(std::size_t(table_cells));
  const std::uint64_t gpow = ipow(std::uint64_t(s), arity - 1);
  Word args, params;
  for (std::uint64_t ai = 0; ai < ipow(tsize, arity); ++ai) {
    decode_mixed(ai, int(tsize), arity, args);
    for (std::uint64_t gi = 0; gi < gpow; ++gi) {
      decode_mixed(gi, s, arity - 1, params);
      // Factor order: leading scalar (g1 A1 A2 g2 A3 ...) by default, or
      // scalars strictly between matrix factors (A1 g1 A2 g2 A3 ...).
      Word acc;
      if (gamma_inner) {
        acc = ms.digits[std::size_t(args[0])];
        for (int i = 1; i < arity; ++i) {
          acc = ms.matmul(acc, ms.scalar(params[std::size_t(i - 1)]));
          acc = ms.matmul(acc, ms.digits[std::size_t(args[std::size_t(i)])]);
        }
      } else {
        acc = ms.matmul(ms.scalar(params[0]), ms.digits[std::size_t(args[0])]);
        acc = ms.matmul(acc, ms.digits[std::size_t(args[1])]);
        for (int i = 2; i < arity; ++i) {
          acc = ms.matmul(acc, ms.scalar(params[std::size_t(i - 1)]));
          acc = ms.matmul(acc, ms.digits[std::size_t(args[std::size_t(i)])]);
        }
      }
      S.mu_table[std::size_t(ai * gpow + gi)] = Elem(encode_mixed(acc, s));
    }
  }

  std::ostringstream prov;
  prov << "matrix(" << base.name << ",dim=" << dim << ",arity=" << arity
       << (gamma_inner ? ",gamma-inner" : "") << ")";
  S.provenance = prov.str();
  return S;
}

GammaSemiring build_endomorphism_realization(const FiniteCommMonoid& V,
                                             const std::vector<std::vector<Elem>>& gamma_maps,
                                             std::uint64_t max_maps, std::uint64_t max_carrier) {
  if (!V.complete()) throw std::invalid_argument("endomorphism realization needs a total carrier");
  const int v = V.size;
  std::uint64_t total_maps = 1;
  for (int i = 0; i < v; ++i) {
    total_maps *= std::uint64_t(v);
    if (total_maps > max_maps) throw LimitError("self-map enumeration", ipow(std::uint64_t(v), v), max_maps);
  }

  auto additive = [&](const std::vector<Elem>& f) {
    if (f[std::size_t(V.zero)] != V.zero) return false;
    for (Elem a = 0; a < v; ++a) {
      for (Elem b = a; b < v; ++b) {
        if (f[std::size_t(V.add(a, b))] != V.add(f[std::size_t(a)], f[std::size_t(b)])) return false;
      }
    }
    return true;
  };

  std::vector<std::vector<Elem>> endos;
  std::vector<Elem> f(std::size_t(v), 0);
  for (std::uint64_t idx = 0; idx < total_maps; ++idx) {
    std::uint64_t rest = idx;
    for (int i = v - 1; i >= 0; --i) {
      f[std::size_t(i)] = Elem(rest % std::uint64_t(v));
      rest /= std::uint64_t(v);
    }
    if (additive(f)) endos.push_back(f);
  }
  if (std::uint64_t(endos.size()) > max_carrier) {
    throw LimitError("endomorphism carrier size", std::uint64_t(endos.size()), max_carrier);
  }
  std::sort(endos.begin(), endos.end());

  std::map<std::vector<Elem>, Elem> index;
  for (std::size_t i = 0; i < endos.size(); ++i) index[endos[i]] = Elem(i);

  auto pointwise_add = [&](const std::vector<Elem>& a, const std::vector<Elem>& b) {
    std::vector<Elem> c(std::size_t(v), 0);
    for (int i = 0; i < v; ++i) c[std::size_t(i)] = V.add(a[std::size_t(i)], b[std::size_t(i)]);
    return c;
  };

  for (const auto& g : gamma_maps) {
    if (int(g.size()) != v) throw std::invalid_argument("parameter map has the wrong domain size");
    for (Elem e : g) {
      if (e < 0 || e >= v) throw std::invalid_argument("parameter map value outside the carrier");
    }
    if (!additive(g)) {
      throw std::invalid_argument("parameter map is not additive or does not preserve zero");
    }
  }

  // Gamma: closure of the given maps and the zero map under pointwise sum.
  const std::vector<Elem> zero_map(std::size_t(v), V.zero);
  std::map<std::vector<Elem>, Elem> gamma_seen;
  std::vector<std::vector<Elem>> gammas{zero_map};
  gamma_seen[zero_map] = 0;
  for (const auto& g : gamma_maps) {
    if (!gamma_seen.count(g)) {
      gamma_seen[g] = Elem(gammas.size());
      gammas.push_back(g);
    }
  }
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      auto s = pointwise_add(gammas[i], gammas[j]);
      if (!gamma_seen.count(s)) {
        gamma_seen[s] = Elem(gammas.size());
        gammas.push_back(s);
      }
    }
  }
  std::sort(gammas.begin(), gammas.end());
  gamma_seen.clear();
  for (std::size_t i = 0; i < gammas.size(); ++i) gamma_seen[gammas[i]] = Elem(i);

  GammaSemiring S;
  S.arity = 3;
  const int tn = int(endos.size());
  const int gn = int(gammas.size());

  auto build_monoid = [&](const std::vector<std::vector<Elem>>& maps,
                          std::map<std::vector<Elem>, Elem>& idx) {
    FiniteCommMonoid m;
    m.size = int(maps.size());
    m.zero = idx.at(zero_map);
    m.table.resize(maps.size() * maps.size());
    for (std::size_t a = 0; a < maps.size(); ++a) {
      for (std::size_t b = 0; b < maps.size(); ++b) {
        auto s = pointwise_add(maps[a], maps[b]);
        auto it = idx.find(s);
        if (it == idx.end()) throw std::logic_error("additive closure is not closed");
        m.table[a * maps.size() + b] = it->second;
      }
    }
    for (const auto& mp : maps) {
      std::ostringstream os;
      os << "<";
      for (int i = 0; i < v; ++i) {
        if (i) os << ",";
        os << V.label(mp[std::size_t(i)]);
      }
      os << ">";
      m.labels.push_back(os.str());
    }
    return m;
  };
  S.T = build_monoid(endos, index);
  S.Gamma = build_monoid(gammas, gamma_seen);

  auto compose = [&](const std::vector<Elem>& outer, const std::vector<Elem>& inner) {
    std::vector<Elem> c(std::size_t(v), 0);
    for (int i = 0; i < v; ++i) c[std::size_t(i)] = outer[std::size_t(inner[std::size_t(i)])];
    return c;
  };

  const int n = S.arity;
  const std::uint64_t gpow = ipow(std::uint64_t(gn), n - 1);
  S.mu_table.resize(ipow(std::uint64_t(tn), n) * gpow);
  Word args, params;
  for (std::uint64_t ai = 0; ai < ipow(std::uint64_t(tn), n); ++ai) {
    decode_mixed(ai, tn, n, args);
    for (std::uint64_t gi = 0; gi < gpow; ++gi) {
      decode_mixed(gi, gn, n - 1, params);
      // f1 . g1 . f2 . g2 ... fn, composed right to left.
      std::vector<Elem> acc = endos[std::size_t(args[std::size_t(n - 1)])];
      for (int i = n - 2; i >= 0; --i) {
        acc = compose(gammas[std::size_t(params[std::size_t(i)])], acc);
        acc = compose(endos[std::size_t(args[std::size_t(i)])], acc);
      }
      auto it = index.find(acc);
      if (it == index.end()) throw std::logic_error("composition left the endomorphism carrier");
      S.mu_table[std::size_t(ai * gpow + gi)] = it->second;
    }
  }
  S.provenance = "endo(|V|=" + std::to_string(v) + ")";
  return S;
}

GammaSemiring b3_semiring() {
  GammaSemiring S;
  S.T = boolean_or_monoid();
  S.Gamma = boolean_or_monoid();
  S.arity = 3;
  S.mu_table.resize(32);
  Word args, params;
  for (std::uint64_t ai = 0; ai < 8; ++ai) {
    decode_mixed(ai, 2, 3, args);
    for (std::uint64_t gi = 0; gi < 4; ++gi) {
      decode_mixed(gi, 2, 2, params);
      S.mu_table[std::size_t(ai * 4 + gi)] =
          args[0] & args[1] & args[2] & params[0] & params[1];
    }
  }
  S.provenance = "b3";
  return S;
}

GammaSemiring b3_trivial_gamma_semiring() {
  GammaSemiring S;
  S.T = boolean_or_monoid();
  S.Gamma = cyclic_monoid(1);
  S.Gamma.labels = {"0"};
  S.arity = 3;
  S.mu_table.resize(8);
  Word args;
  for (std::uint64_t ai = 0; ai < 8; ++ai) {
    decode_mixed(ai, 2, 3, args);
    S.mu_table[std::size_t(ai)] = args[0] & args[1] & args[2];
  }
  S.provenance = "b3-trivial-gamma";
  return S;
}

// --- ideals ------------------------------------------------------------------

std::vector<Elem> GammaIdeal::elements() const {
  std::vector<Elem> out;
  for (std::size_t i = 0; i < member.size(); ++i) {
    if (member[i]) out.push_back(Elem(i));
  }
  return out;
}

ValidationReport check_gamma_ideal(const GammaSemiring& S, const GammaIdeal& I) {
  ValidationReport report;
  const int t = S.T.size;
  if (int(I.member.size()) != t) {
    report.fail({"shape", {}, "ideal membership vector does not match the carrier"});
    return report;
  }
  if (!I.contains(S.T.zero)) {
    report.fail({"ideal-zero", {S.T.zero}, "the additive zero is missing"});
  }
  for (Elem a = 0; a < t && report.ok; ++a) {
    if (!I.contains(a)) continue;
    for (Elem b = 0; b < t; ++b) {
      ++report.instances;
      if (I.contains(b) && !I.contains(S.T.add(a, b))) {
        report.fail({"ideal-add", {a, b},
                     S.T.label(a) + "+" + S.T.label(b) + " leaves the ideal"});
        break;
      }
    }
  }
  if (report.ok) {
    const int n = S.arity;
    const std::uint64_t gpow = ipow(std::uint64_t(S.Gamma.size), n - 1);
    Word args, params;
    for (std::uint64_t ai = 0; ai < ipow(std::uint64_t(t), n) && report.ok; ++ai) {
      decode_mixed(ai, t, n, args);
      bool any = false;
      for (Elem a : args) any = any || I.contains(a);
      if (!any) continue;
      for (std::uint64_t gi = 0; gi < gpow; ++gi) {
        ++report.instances;
        decode_mixed(gi, S.Gamma.size, n - 1, params);
        if (!I.contains(S.mu(args, params))) {
          Word at = args;
          at.insert(at.end(), params.begin(), params.end());
          report.fail({"ideal-absorb", at,
                       render_call(S, args, params) + " escapes the ideal"});
          break;
        }
      }
    }
  }
  return report;
}

bool is_gamma_ideal(const GammaSemiring& S, const GammaIdeal& I) {
  return check_gamma_ideal(S, I).ok;
}

std::vector<GammaIdeal> enumerate_ideals(const GammaSemiring& S, std::uint64_t max_carrier) {
  const int t = S.T.size;
  if (std::uint64_t(t) > max_carrier) {
    throw LimitError("ideal enumeration carrier", std::uint64_t(t), max_carrier);
  }

  // Pre-decode the argument tuple of every product cell once.
  const int n = S.arity;
  const std::uint64_t gpow = ipow(std::uint64_t(S.Gamma.size), n - 1);
  const std::uint64_t acount = ipow(std::uint64_t(t), n);
  std::vector<Elem> arg_dec(std::size_t(acount) * std::size_t(n));
  Word args;
  for (std::uint64_t ai = 0; ai < acount; ++ai) {
    decode_mixed(ai, t, n, args);
    for (int i = 0; i < n; ++i) arg_dec[std::size_t(ai) * std::size_t(n) + std::size_t(i)] = args[std::size_t(i)];
  }

  std::vector<GammaIdeal> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << t); ++mask) {
    if (!((mask >> S.T.zero) & 1)) continue;
    auto in = [&](Elem a) { return ((mask >> a) & 1) != 0; };
    bool ok = true;
    for (Elem a = 0; a < t && ok; ++a) {
      if (!in(a)) continue;
      for (Elem b = a; b < t; ++b) {
        if (in(b) && !in(S.T.add(a, b))) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) continue;
    for (std::uint64_t ai = 0; ai < acount && ok; ++ai) {
      bool any = false;
      for (int i = 0; i < n; ++i) any = any || in(arg_dec[std::size_t(ai) * std::size_t(n) + std::size_t(i)]);
      if (!any) continue;
      for (std::uint64_t gi = 0; gi < gpow; ++gi) {
        if (!in(S.mu_table[std::size_t(ai * gpow + gi)])) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) continue;
    GammaIdeal ideal;
    ideal.member.resize(std::size_t(t));
    for (Elem a = 0; a < t; ++a) ideal.member[std::size_t(a)] = in(a);
    out.push_back(std::move(ideal));
  }
  return out;
}

std::vector<GammaIdeal> prime_spectrum(const GammaSemiring& S, std::uint64_t max_carrier) {
  const int t = S.T.size;
  const int n = S.arity;
  const std::uint64_t gpow = ipow(std::uint64_t(S.Gamma.size), n - 1);
  std::vector<GammaIdeal> primes;
  Word args;
  for (const GammaIdeal& I : enumerate_ideals(S, max_carrier)) {
    bool proper = false;
    for (Elem a = 0; a < t; ++a) proper = proper || !I.contains(a);
    if (!proper) continue;
    bool prime = true;
    for (std::uint64_t ai = 0; ai < ipow(std::uint64_t(t), n) && prime; ++ai) {
      decode_mixed(ai, t, n, args);
      bool any = false;
      for (Elem a : args) any = any || I.contains(a);
      if (any) continue;  // the implication can only fail with all args outside
      for (std::uint64_t gi = 0; gi < gpow; ++gi) {
        if (I.contains(S.mu_table[std::size_t(ai * gpow + gi)])) {
          prime = false;
          break;
        }
      }
    }
    if (prime) primes.push_back(I);
  }
  return primes;
}

QuotientSemiring quotient_semiring(const GammaSemiring& S, const GammaIdeal& I) {
  {
    const auto why = check_gamma_ideal(S, I);
    if (!why.ok) throw std::invalid_argument("quotient_semiring: not an ideal: " + why.summary());
  }

  const int t = S.T.size;
  const int n = S.arity;
  const std::uint64_t gpow = ipow(std::uint64_t(S.Gamma.size), n - 1);
  const std::uint64_t acount = ipow(std::uint64_t(t), n);

  detail::UnionFind uf(t);
  std::vector<std::pair<Elem, Elem>> pending;
  for (Elem a = 0; a < t; ++a) {
    if (I.contains(a)) pending.emplace_back(a, S.T.zero);
  }

  Word args, canon;
  bool merged = false;
  for (;;) {
    for (const auto& [a, b] : pending) merged = uf.unite(a, b) || merged;
    pending.clear();
    if (!merged) break;
    merged = false;

    std::unordered_map<std::uint64_t, Elem> add_cells;
    for (Elem a = 0; a < t; ++a) {
      for (Elem b = a; b < t; ++b) {
        Elem ra = uf.find(a), rb = uf.find(b);
        if (ra > rb) std::swap(ra, rb);
        const std::uint64_t key = std::uint64_t(ra) * std::uint64_t(t) + std::uint64_t(rb);
        auto [it, fresh] = add_cells.try_emplace(key, S.T.add(a, b));
        if (!fresh && uf.find(it->second) != uf.find(S.T.add(a, b))) {
          pending.emplace_back(it->second, S.T.add(a, b));
        }
      }
    }
    std::unordered_map<std::uint64_t, Elem> mu_cells;
    for (std::uint64_t ai = 0; ai < acount; ++ai) {
      decode_mixed(ai, t, n, args);
      canon.clear();
      for (Elem a : args) canon.push_back(uf.find(a));
      const std::uint64_t canon_args = encode_mixed(canon, t);
      for (std::uint64_t gi = 0; gi < gpow; ++gi) {
        const Elem r = S.mu_table[std::size_t(ai * gpow + gi)];
        const std::uint64_t key = canon_args * gpow + gi;
        auto [it, fresh] = mu_cells.try_emplace(key, r);
        if (!fresh && uf.find(it->second) != uf.find(r)) {
          pending.emplace_back(it->second, r);
        }
      }
    }
    if (pending.empty()) break;
  }

  CongruenceRelation rel;
  rel.universe = t;
  rel.class_of.assign(std::size_t(t), -1);
  std::vector<Elem> root_class(std::size_t(t), -1);
  for (Elem a = 0; a < t; ++a) {
    const Elem root = uf.find(a);
    if (root_class[std::size_t(root)] < 0) {
      root_class[std::size_t(root)] = rel.classes++;
      rel.representative.push_back(root);
    }
    rel.class_of[std::size_t(a)] = root_class[std::size_t(root)];
  }

  QuotientSemiring out;
  out.congruence = rel;
  out.semiring.arity = n;
  out.semiring.Gamma = S.Gamma;
  out.semiring.T = quotient_monoid(S.T, rel);
  const int q = rel.classes;
  out.semiring.mu_table.assign(ipow(std::uint64_t(q), n) * gpow, -1);
  for (std::uint64_t ai = 0; ai < acount; ++ai) {
    decode_mixed(ai, t, n, args);
    canon.clear();
    for (Elem a : args) canon.push_back(rel.class_of[std::size_t(a)]);
    const std::uint64_t qai = encode_mixed(canon, q);
    for (std::uint64_t gi = 0; gi < gpow; ++gi) {
      const Elem r = rel.class_of[std::size_t(S.mu_table[std::size_t(ai * gpow + gi)])];
      Elem& cell = out.semiring.mu_table[std::size_t(qai * gpow + gi)];
      if (cell < 0) cell = r;
      else if (cell != r) throw std::logic_error("quotient_semiring: product is not class-invariant");
    }
  }
  out.semiring.provenance = S.provenance + "/ideal-quotient";
  return out;
}

}  // namespace gammalab
