#include "gammalab/exact.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <utility>

namespace gammalab {

namespace {

void merge_as(ValidationReport& out, const ValidationReport& sub, const std::string& prefix) {
  out.ok = out.ok && sub.ok;
  for (const Witness& w : sub.failures) out.failures.push_back({prefix + w.law, w.at, w.detail});
  for (const std::string& n : sub.notes) out.notes.push_back(prefix + n);
  out.instances += sub.instances;
}

std::vector<int> action_slots(const PositionalModule& M) {
  std::vector<int> slots;
  slots.reserve(M.actions.size());
  for (const ActionSlot& a : M.actions) slots.push_back(a.slot);
  return slots;
}

// Quotient of M by an additive congruence on its carrier.  The induced action
// on a class is the common class of the defined representative results; mixed
// verdicts are mathematical obstructions recorded in action_check, never
// exceptions.
ModulePtr quotient_by(const PositionalModule& M, const CongruenceRelation& cong,
                      QuotientStats* stats, ValidationReport& action_check,
                      std::string provenance) {
  auto Q = std::make_shared<PositionalModule>();
  Q->parent = M.parent;
  Q->provenance = std::move(provenance);
  Q->carrier = quotient_monoid(M.carrier, cong, stats);

  const GammaSemiring& S = *M.parent;
  const int n = S.arity;
  const std::uint64_t tpow = ipow(std::uint64_t(S.tsize()), n - 1);
  const std::uint64_t gpow = ipow(std::uint64_t(S.gsize()), n - 1);
  std::vector<std::vector<Elem>> members(std::size_t(cong.classes));
  for (Elem m = 0; m < M.msize(); ++m) {
    members[std::size_t(cong.class_of[std::size_t(m)])].push_back(m);
  }
  Word targs, params;
  for (std::size_t a = 0; a < M.actions.size(); ++a) {
    ActionSlot qa;
    qa.slot = M.actions[a].slot;
    qa.table.reserve(std::size_t(tpow * std::uint64_t(cong.classes) * gpow));
    for (std::uint64_t ti = 0; ti < tpow; ++ti) {
      decode_mixed(ti, S.tsize(), n - 1, targs);
      for (int cls = 0; cls < cong.classes; ++cls) {
        for (std::uint64_t gi = 0; gi < gpow; ++gi) {
          decode_mixed(gi, S.gsize(), n - 1, params);
          ++action_check.instances;
          Elem value = -1;
          Elem chosen = -1;
          for (Elem m : members[std::size_t(cls)]) {
            const Elem v = M.act(int(a), targs, m, params);
            if (v < 0) continue;
            const Elem vc = cong.class_of[std::size_t(v)];
            if (value < 0) {
              value = vc;
              chosen = m;
            } else if (value != vc && action_check.ok) {
              Word at = targs;
              at.push_back(chosen);
              at.push_back(m);
              at.insert(at.end(), params.begin(), params.end());
              action_check.fail(
                  {"action-classes", at,
                   "representatives " + M.carrier.label(chosen) + " and " + M.carrier.label(m) +
                       " of the same class act to different classes"});
            }
          }
          qa.table.push_back(value);
        }
      }
    }
    Q->actions.push_back(std::move(qa));
  }
  return Q;
}

bool composable(const ModuleMorphism& first, const ModuleMorphism& second) {
  return first.target && second.source &&
         (first.target.get() == second.source.get() || same_module(*first.target, *second.source));
}

std::string first_problem(const ValidationReport& r) {
  if (r.failures.empty()) return "unspecified";
  return r.failures.front().law + " (" + r.failures.front().detail + ")";
}

}  // namespace

ValidationReport check_conflation(const Conflation& c, const ScanOptions& opts) {
  ValidationReport report;
  const ModuleMorphism& i = c.inflation;
  const ModuleMorphism& p = c.deflation;
  if (!i.source || !i.target || !p.source || !p.target) {
    report.fail({"shape/morphism", {}, "a conflation needs two complete morphisms"});
    return report;
  }
  if (!composable(i, p)) {
    report.fail({"shape/composable", {}, "the inflation target and the deflation source differ"});
    return report;
  }
  merge_as(report, validate_morphism(i, opts), "inflation/");
  merge_as(report, validate_morphism(p, opts), "deflation/");
  if (!report.ok) return report;

  const PositionalModule& A = *i.source;
  const PositionalModule& B = *i.target;
  const PositionalModule& C = *p.target;

  const ModuleMorphism pi = compose(p, i);
  for (Elem a = 0; a < A.msize(); ++a) {
    ++report.instances;
    if (pi(a) != C.carrier.zero) {
      report.fail({"compose-zero",
                   {a},
                   "p(i(" + A.carrier.label(a) + ")) = " + C.carrier.label(pi(a)) + ", not zero"});
      return report;
    }
  }

  // The preimage of zero under p must be exactly the image of i, with i
  // injective; together these say i is a kernel of p.
  std::vector<Elem> preimage(std::size_t(B.msize()), -1);
  for (Elem a = 0; a < A.msize(); ++a) {
    ++report.instances;
    const Elem b = i(a);
    if (preimage[std::size_t(b)] >= 0) {
      report.fail({"kernel-image",
                   {preimage[std::size_t(b)], a},
                   "i identifies " + A.carrier.label(preimage[std::size_t(b)]) + " and " +
                       A.carrier.label(a)});
      return report;
    }
    preimage[std::size_t(b)] = a;
  }
  for (Elem b = 0; b < B.msize(); ++b) {
    ++report.instances;
    const bool in_ker = p(b) == C.carrier.zero;
    const bool in_img = preimage[std::size_t(b)] >= 0;
    if (in_ker != in_img) {
      report.fail({"kernel-image",
                   {b},
                   in_ker ? B.carrier.label(b) + " maps to zero under p but is not in the image of i"
                          : B.carrier.label(b) + " is in the image of i but p sends it to " +
                                C.carrier.label(p(b))});
      return report;
    }
  }

  // p is a cokernel of i exactly when the comparison class -> common p-value
  // is a well-defined bijective morphism (in particular the class count must
  // equal |C|).
  CokernelResult ck = cokernel(i);
  if (!ck.action_check.ok) {
    merge_as(report, ck.action_check, "cokernel-iso/");
    return report;
  }
  std::vector<Elem> cmp(std::size_t(ck.congruence.classes), -1);
  for (Elem b = 0; b < B.msize(); ++b) {
    ++report.instances;
    const Elem cls = ck.congruence.class_of[std::size_t(b)];
    if (cmp[std::size_t(cls)] < 0) {
      cmp[std::size_t(cls)] = p(b);
    } else if (cmp[std::size_t(cls)] != p(b)) {
      const Elem r = ck.congruence.representative[std::size_t(cls)];
      report.fail({"cokernel-iso",
                   {r, b},
                   "the image congruence identifies " + B.carrier.label(r) + " and " +
                       B.carrier.label(b) + " but p separates them"});
      return report;
    }
  }
  if (ck.congruence.classes != C.msize()) {
    report.fail({"cokernel-iso",
                 {},
                 "the image congruence has " + std::to_string(ck.congruence.classes) +
                     " classes but the conflation target has " + std::to_string(C.msize()) +
                     " elements"});
    return report;
  }
  std::vector<Elem> back(std::size_t(C.msize()), -1);
  for (int cls = 0; cls < ck.congruence.classes; ++cls) {
    const Elem v = cmp[std::size_t(cls)];
    if (back[std::size_t(v)] >= 0) {
      report.fail({"cokernel-iso",
                   {Elem(cls), back[std::size_t(v)]},
                   "two classes share the comparison value " + C.carrier.label(v)});
      return report;
    }
    back[std::size_t(v)] = Elem(cls);
  }
  merge_as(report, validate_morphism(table_morphism(ck.module, p.target, cmp), opts),
           "cokernel-iso/");
  if (!report.ok) return report;
  merge_as(report, validate_morphism(table_morphism(p.target, ck.module, back), opts),
           "cokernel-iso/inverse/");
  if (!report.ok) return report;

  report.note("image congruence classes: " + std::to_string(ck.congruence.classes) +
              " (equal to the conflation target size)");
  return report;
}

ConflationResult make_conflation(const ModuleMorphism& i, const ModuleMorphism& p,
                                 const ScanOptions& opts) {
  ConflationResult out;
  out.conflation = Conflation{i, p};
  out.report = check_conflation(out.conflation, opts);
  return out;
}

ConflationResult split_conflation(ModulePtr A, ModulePtr B, const ScanOptions& opts) {
  BiproductResult bp = biproduct(std::move(A), std::move(B));
  return make_conflation(bp.inject_first, bp.project_second, opts);
}

AdmissibilityVerdict certify_inflation(const ModuleMorphism& i, const ScanOptions& opts) {
  AdmissibilityVerdict out;
  ValidationReport iv = validate_morphism(i, opts);
  if (!iv.ok) {
    out.conflation = Conflation{i, ModuleMorphism{}};
    merge_as(out.report, iv, "inflation/");
    return out;
  }
  CokernelResult ck = cokernel(i);
  out.conflation = Conflation{i, ck.projection};
  out.report = check_conflation(out.conflation, opts);
  if (!ck.action_check.ok) merge_as(out.report, ck.action_check, "cokernel/");
  out.admissible = out.report.ok;
  return out;
}

AdmissibilityVerdict certify_deflation(const ModuleMorphism& p, const ScanOptions& opts) {
  AdmissibilityVerdict out;
  ValidationReport pv = validate_morphism(p, opts);
  if (!pv.ok) {
    out.conflation = Conflation{ModuleMorphism{}, p};
    merge_as(out.report, pv, "deflation/");
    return out;
  }
  KernelResult k = kernel(p);
  out.conflation = Conflation{k.inclusion, p};
  out.report = check_conflation(out.conflation, opts);
  out.admissible = out.report.ok;
  return out;
}

std::optional<ModuleMorphism> find_isomorphism(ModulePtr src, ModulePtr dst,
                                               std::uint64_t max_nodes) {
  const PositionalModule& Ms = *src;
  const PositionalModule& Md = *dst;
  if (!same_parent(*Ms.parent, *Md.parent)) return std::nullopt;
  if (Ms.msize() != Md.msize()) return std::nullopt;
  if (Ms.actions.size() != Md.actions.size()) return std::nullopt;
  for (std::size_t a = 0; a < Ms.actions.size(); ++a) {
    if (Ms.actions[a].slot != Md.actions[a].slot) return std::nullopt;
  }

  const Elem n = Ms.msize();
  std::vector<Elem> map(std::size_t(n), -1);
  std::vector<Elem> inv(std::size_t(n), -1);
  map[std::size_t(Ms.carrier.zero)] = Md.carrier.zero;
  inv[std::size_t(Md.carrier.zero)] = Ms.carrier.zero;

  std::vector<Elem> order;
  for (Elem m = 0; m < n; ++m) {
    if (m != Ms.carrier.zero) order.push_back(m);
  }

  // Definedness patterns and values must agree over the assigned part; a sum
  // whose image is already claimed by a different element can never be matched.
  auto additive_ok = [&]() {
    for (Elem a = 0; a < n; ++a) {
      if (map[std::size_t(a)] < 0) continue;
      for (Elem b = a; b < n; ++b) {
        if (map[std::size_t(b)] < 0) continue;
        const Elem s = Ms.carrier.add(a, b);
        const Elem t = Md.carrier.add(map[std::size_t(a)], map[std::size_t(b)]);
        if ((s < 0) != (t < 0)) return false;
        if (s < 0) continue;
        if (map[std::size_t(s)] >= 0) {
          if (map[std::size_t(s)] != t) return false;
        } else if (inv[std::size_t(t)] >= 0) {
          return false;
        }
      }
    }
    return true;
  };

  std::uint64_t nodes = 0;
  std::optional<ModuleMorphism> found;
  std::function<bool(std::size_t)> go = [&](std::size_t k) -> bool {
    if (++nodes > max_nodes) throw LimitError("isomorphism search", nodes, max_nodes);
    if (k == order.size()) {
      ModuleMorphism fwd = table_morphism(src, dst, map);
      if (!validate_morphism(fwd).ok) return false;
      if (!validate_morphism(table_morphism(dst, src, inv)).ok) return false;
      found = std::move(fwd);
      return true;
    }
    const Elem m = order[k];
    for (Elem v = 0; v < n; ++v) {
      if (inv[std::size_t(v)] >= 0) continue;
      map[std::size_t(m)] = v;
      inv[std::size_t(v)] = m;
      if (additive_ok() && go(k + 1)) return true;
      map[std::size_t(m)] = -1;
      inv[std::size_t(v)] = -1;
    }
    return false;
  };
  go(0);
  return found;
}

PushoutResult pushout(const ModuleMorphism& i, const ModuleMorphism& f) {
  if (!i.source || !f.source ||
      (i.source.get() != f.source.get() && !same_module(*i.source, *f.source))) {
    throw std::invalid_argument("pushout needs the inflation and the morphism to share their source");
  }
  PushoutResult out;
  BiproductResult D = biproduct(f.target, i.target);  // index = a' * |B| + b
  const int bsz = i.target->msize();
  const Elem az = f.target->carrier.zero;
  const Elem bz = i.target->carrier.zero;

  std::vector<std::pair<Elem, Elem>> pairs;
  pairs.reserve(std::size_t(i.source->msize()));
  for (Elem a = 0; a < i.source->msize(); ++a) {
    pairs.emplace_back(Elem(f(a) * bsz + bz), Elem(az * bsz + i(a)));
  }
  out.congruence = congruence_closure(D.module->carrier, pairs);
  out.module = quotient_by(*D.module, out.congruence, &out.stats, out.action_check, "pushout");

  std::vector<Elem> prime_map(std::size_t(f.target->msize()));
  for (Elem a2 = 0; a2 < f.target->msize(); ++a2) {
    prime_map[std::size_t(a2)] = out.congruence.class_of[std::size_t(a2 * bsz + bz)];
  }
  std::vector<Elem> b_map(std::size_t(bsz), -1);
  for (Elem b = 0; b < bsz; ++b) {
    b_map[std::size_t(b)] = out.congruence.class_of[std::size_t(az * bsz + b)];
  }
  out.from_prime = table_morphism(f.target, out.module, std::move(prime_map));
  out.from_b = table_morphism(i.target, out.module, std::move(b_map));

  for (Elem a = 0; a < i.source->msize(); ++a) {
    if (out.from_prime(f(a)) != out.from_b(i(a))) {
      throw std::logic_error("pushout: the defining square does not commute");
    }
  }

  out.log.push_back("classes: " + std::to_string(out.congruence.classes));
  if (out.stats.undefined_cells || out.stats.mixed_cells) {
    out.log.push_back("partial quotient carrier: " + std::to_string(out.stats.undefined_cells) +
                      " undefined and " + std::to_string(out.stats.mixed_cells) +
                      " mixed class pairs");
  }
  if (out.action_check.ok) {
    out.inflation_verdict = certify_inflation(out.from_prime);
  } else {
    out.inflation_verdict.conflation = Conflation{out.from_prime, ModuleMorphism{}};
    out.inflation_verdict.report = out.action_check;
    out.log.push_back("inflation verdict skipped: the induced actions are not representative independent");
  }
  return out;
}

PullbackResult pullback(const ModuleMorphism& p, const ModuleMorphism& g) {
  if (!p.target || !g.target ||
      (p.target.get() != g.target.get() && !same_module(*p.target, *g.target))) {
    throw std::invalid_argument("pullback needs the deflation and the morphism to share their target");
  }
  PullbackResult out;
  BiproductResult D = biproduct(p.source, g.source);  // index = b * |C'| + c'
  const int csz = g.source->msize();

  std::vector<Elem> index_of(std::size_t(D.module->msize()), -1);
  for (Elem b = 0; b < p.source->msize(); ++b) {
    for (Elem c = 0; c < csz; ++c) {
      if (p(b) == g(c)) {
        index_of[std::size_t(b * csz + c)] = Elem(out.members.size());
        out.members.push_back(b * csz + c);
      }
    }
  }

  const PositionalModule& Dm = *D.module;
  FiniteCommMonoid sub;
  sub.size = int(out.members.size());
  const Elem zidx = Elem(p.source->carrier.zero * csz + g.source->carrier.zero);
  sub.zero = index_of[std::size_t(zidx)];
  if (sub.zero < 0) throw std::logic_error("pullback: zero left the fibre product");
  sub.table.assign(out.members.size() * out.members.size(), -1);
  for (std::size_t x = 0; x < out.members.size(); ++x) {
    for (std::size_t y = 0; y < out.members.size(); ++y) {
      const Elem s = Dm.carrier.add(out.members[x], out.members[y]);
      if (s < 0) continue;
      if (index_of[std::size_t(s)] < 0) {
        throw std::logic_error("pullback: addition escapes the fibre product");
      }
      sub.table[x * out.members.size() + y] = index_of[std::size_t(s)];
    }
  }
  sub.labels.reserve(out.members.size());
  for (Elem m : out.members) sub.labels.push_back(Dm.carrier.label(m));

  const GammaSemiring& S = *p.source->parent;
  const int n = S.arity;
  const std::uint64_t tpow = ipow(std::uint64_t(S.tsize()), n - 1);
  const std::uint64_t gpow = ipow(std::uint64_t(S.gsize()), n - 1);
  std::vector<ActionSlot> actions;
  Word targs, params;
  for (std::size_t a = 0; a < Dm.actions.size(); ++a) {
    ActionSlot sa;
    sa.slot = Dm.actions[a].slot;
    sa.table.reserve(std::size_t(tpow * out.members.size() * gpow));
    for (std::uint64_t ti = 0; ti < tpow; ++ti) {
      decode_mixed(ti, S.tsize(), n - 1, targs);
      for (Elem m : out.members) {
        for (std::uint64_t gi = 0; gi < gpow; ++gi) {
          decode_mixed(gi, S.gsize(), n - 1, params);
          const Elem v = Dm.act(int(a), targs, m, params);
          if (v < 0) {
            sa.table.push_back(-1);
            continue;
          }
          if (index_of[std::size_t(v)] < 0) {
            throw std::logic_error("pullback: an action escapes the fibre product");
          }
          sa.table.push_back(index_of[std::size_t(v)]);
        }
      }
    }
    actions.push_back(std::move(sa));
  }
  out.module = table_module(p.source->parent, std::move(sub), std::move(actions), "pullback");

  std::vector<Elem> bmap(out.members.size()), cmap(out.members.size());
  for (std::size_t k = 0; k < out.members.size(); ++k) {
    bmap[k] = out.members[k] / csz;
    cmap[k] = out.members[k] % csz;
  }
  out.to_b = table_morphism(out.module, p.source, std::move(bmap));
  out.to_prime = table_morphism(out.module, g.source, std::move(cmap));

  out.log.push_back("members: " + std::to_string(out.members.size()) + " of " +
                    std::to_string(Dm.msize()) + " biproduct elements");
  out.deflation_verdict = certify_deflation(out.to_prime);
  return out;
}

ValidationReport check_pushout_universal(const PushoutResult& po, const ModuleMorphism& i,
                                         const ModuleMorphism& f,
                                         const std::vector<ModulePtr>& probes,
                                         std::uint64_t max_maps) {
  ValidationReport report;
  std::uint64_t cocones = 0;
  for (std::size_t w = 0; w < probes.size(); ++w) {
    const ModulePtr& W = probes[w];
    const auto homA = enumerate_morphisms(f.target, W, max_maps);
    const auto homB = enumerate_morphisms(i.target, W, max_maps);
    const auto homQ = enumerate_morphisms(po.module, W, max_maps);
    for (std::size_t ui = 0; ui < homA.size(); ++ui) {
      const ModuleMorphism uf = compose(homA[ui], f);
      for (std::size_t vi = 0; vi < homB.size(); ++vi) {
        if (!same_map(uf, compose(homB[vi], i))) continue;
        ++cocones;
        ++report.instances;
        int count = 0;
        for (const ModuleMorphism& cand : homQ) {
          if (same_map(compose(cand, po.from_prime), homA[ui]) &&
              same_map(compose(cand, po.from_b), homB[vi])) {
            ++count;
          }
        }
        if (count != 1) {
          report.fail({"pushout-universal",
                       {Elem(w), Elem(ui), Elem(vi), Elem(count)},
                       "cocone #" + std::to_string(ui) + "/#" + std::to_string(vi) +
                           " over probe #" + std::to_string(w) + " admits " +
                           std::to_string(count) + " factorisations instead of one"});
          return report;
        }
      }
    }
  }
  report.note("commuting cocones checked: " + std::to_string(cocones) + " over " +
              std::to_string(probes.size()) + " probes");
  return report;
}

ValidationReport check_pullback_universal(const PullbackResult& pb, const ModuleMorphism& p,
                                          const ModuleMorphism& g,
                                          const std::vector<ModulePtr>& probes,
                                          std::uint64_t max_maps) {
  ValidationReport report;
  std::uint64_t cones = 0;
  for (std::size_t w = 0; w < probes.size(); ++w) {
    const ModulePtr& W = probes[w];
    const auto homB = enumerate_morphisms(W, p.source, max_maps);
    const auto homC = enumerate_morphisms(W, g.source, max_maps);
    const auto homQ = enumerate_morphisms(W, pb.module, max_maps);
    for (std::size_t ui = 0; ui < homB.size(); ++ui) {
      const ModuleMorphism pu = compose(p, homB[ui]);
      for (std::size_t vi = 0; vi < homC.size(); ++vi) {
        if (!same_map(pu, compose(g, homC[vi]))) continue;
        ++cones;
        ++report.instances;
        int count = 0;
        for (const ModuleMorphism& cand : homQ) {
          if (same_map(compose(pb.to_b, cand), homB[ui]) &&
              same_map(compose(pb.to_prime, cand), homC[vi])) {
            ++count;
          }
        }
        if (count != 1) {
          report.fail({"pullback-universal",
                       {Elem(w), Elem(ui), Elem(vi), Elem(count)},
                       "cone #" + std::to_string(ui) + "/#" + std::to_string(vi) +
                           " over probe #" + std::to_string(w) + " admits " +
                           std::to_string(count) + " factorisations instead of one"});
          return report;
        }
      }
    }
  }
  report.note("commuting cones checked: " + std::to_string(cones) + " over " +
              std::to_string(probes.size()) + " probes");
  return report;
}

QuillenReport check_quillen_instance(const std::vector<Conflation>& conflations,
                                     const std::vector<ModuleMorphism>& morphisms,
                                     const ScanOptions& opts) {
  QuillenReport qr;

  std::vector<ModulePtr> mods;
  auto add_mod = [&](const ModulePtr& M) {
    if (!M) return;
    for (const ModulePtr& x : mods) {
      if (x.get() == M.get() || same_module(*x, *M)) return;
    }
    mods.push_back(M);
  };
  for (const Conflation& c : conflations) {
    add_mod(c.inflation.source);
    add_mod(c.inflation.target);
    add_mod(c.deflation.target);
  }

  for (std::size_t mi = 0; mi < mods.size(); ++mi) {
    const ModulePtr& M = mods[mi];
    ModulePtr Z = zero_module(M->parent, action_slots(*M));
    const ConflationResult onto =
        make_conflation(zero_morphism(Z, M), identity_morphism(M), opts);
    const ConflationResult from =
        make_conflation(identity_morphism(M), zero_morphism(M, Z), opts);
    qr.identities_checked += 2;
    qr.report.instances += onto.report.instances + from.report.instances;
    if (!onto.report.ok) {
      qr.report.fail({"E1",
                      {Elem(mi)},
                      "the identity conflation onto endpoint module #" + std::to_string(mi) +
                          " failed at " + first_problem(onto.report)});
      if (opts.fail_fast) return qr;
    }
    if (!from.report.ok) {
      qr.report.fail({"E1",
                      {Elem(mi)},
                      "the identity conflation out of endpoint module #" + std::to_string(mi) +
                          " failed at " + first_problem(from.report)});
      if (opts.fail_fast) return qr;
    }
  }

  for (std::size_t ci = 0; ci < conflations.size(); ++ci) {
    for (std::size_t cj = 0; cj < conflations.size(); ++cj) {
      if (composable(conflations[ci].inflation, conflations[cj].inflation)) {
        const AdmissibilityVerdict v =
            certify_inflation(compose(conflations[cj].inflation, conflations[ci].inflation), opts);
        ++qr.inflation_compositions;
        qr.report.instances += v.report.instances;
        if (!v.admissible) {
          qr.report.fail({"E2/inflations",
                          {Elem(ci), Elem(cj)},
                          "composing inflations #" + std::to_string(ci) + " then #" +
                              std::to_string(cj) + " is not an inflation: " +
                              first_problem(v.report)});
          if (opts.fail_fast) return qr;
        }
      }
      if (composable(conflations[ci].deflation, conflations[cj].deflation)) {
        const AdmissibilityVerdict v =
            certify_deflation(compose(conflations[cj].deflation, conflations[ci].deflation), opts);
        ++qr.deflation_compositions;
        qr.report.instances += v.report.instances;
        if (!v.admissible) {
          qr.report.fail({"E2/deflations",
                          {Elem(ci), Elem(cj)},
                          "composing deflations #" + std::to_string(ci) + " then #" +
                              std::to_string(cj) + " is not a deflation: " +
                              first_problem(v.report)});
          if (opts.fail_fast) return qr;
        }
      }
    }
  }

  for (std::size_t ci = 0; ci < conflations.size(); ++ci) {
    for (std::size_t fk = 0; fk < morphisms.size(); ++fk) {
      const ModuleMorphism& f = morphisms[fk];
      if (f.source &&
          (f.source.get() == conflations[ci].inflation.source.get() ||
           same_module(*f.source, *conflations[ci].inflation.source))) {
        const PushoutResult po = pushout(conflations[ci].inflation, f);
        ++qr.pushouts_checked;
        qr.report.instances += po.inflation_verdict.report.instances;
        if (!po.action_check.ok) {
          qr.report.fail({"E3/pushout",
                          {Elem(ci), Elem(fk)},
                          "pushing out inflation #" + std::to_string(ci) + " along morphism #" +
                              std::to_string(fk) + " obstructed the induced actions"});
          if (opts.fail_fast) return qr;
        } else if (!po.inflation_verdict.admissible) {
          qr.report.fail({"E3/pushout",
                          {Elem(ci), Elem(fk)},
                          "the pushout of inflation #" + std::to_string(ci) + " along morphism #" +
                              std::to_string(fk) + " is not an inflation: " +
                              first_problem(po.inflation_verdict.report)});
          if (opts.fail_fast) return qr;
        }
      }
      if (f.target &&
          (f.target.get() == conflations[ci].deflation.target.get() ||
           same_module(*f.target, *conflations[ci].deflation.target))) {
        const PullbackResult pb = pullback(conflations[ci].deflation, f);
        ++qr.pullbacks_checked;
        qr.report.instances += pb.deflation_verdict.report.instances;
        if (!pb.deflation_verdict.admissible) {
          qr.report.fail({"E3/pullback",
                          {Elem(ci), Elem(fk)},
                          "the pullback of deflation #" + std::to_string(ci) + " along morphism #" +
                              std::to_string(fk) + " is not a deflation: " +
                              first_problem(pb.deflation_verdict.report)});
          if (opts.fail_fast) return qr;
        }
      }
    }
  }

  qr.log.push_back("endpoint modules: " + std::to_string(mods.size()));
  qr.log.push_back("identity conflations certified: " + std::to_string(qr.identities_checked));
  qr.log.push_back("inflation compositions: " + std::to_string(qr.inflation_compositions) +
                   ", deflation compositions: " + std::to_string(qr.deflation_compositions));
  qr.log.push_back("pushouts: " + std::to_string(qr.pushouts_checked) +
                   ", pullbacks: " + std::to_string(qr.pullbacks_checked));
  return qr;
}

}  // namespace gammalab
