#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "achieve/assertions.hpp"
#include "achieve/error.hpp"

namespace achieve {

namespace {

// Predicates an assertion reads: extensions, closures, aggregate sources,
// and atom tests, at any nesting depth.

void collectPredsF(const AFormula& f, std::set<Sig>& out);

void collectPredsE(const AExpr& e, std::set<Sig>& out) {
    switch (e.kind) {
    case AExpr::Kind::Extension:
        out.insert(Sig{e.name, e.arity});
        break;
    case AExpr::Kind::Closure:
        out.insert(Sig{e.name, 2});
        break;
    case AExpr::Kind::Agg:
        out.insert(Sig{e.name, e.arity});
        break;
    default:
        break;
    }
    for (const AExpr& k : e.kids) collectPredsE(k, out);
    for (const AExpr& k : e.pattern) collectPredsE(k, out);
    if (e.body) collectPredsF(*e.body, out);
}

void collectPredsF(const AFormula& f, std::set<Sig>& out) {
    if (f.kind == AFormula::Kind::AtomRef)
        out.insert(Sig{f.pred, static_cast<int>(f.exprs.size())});
    for (const AFormula& k : f.kids) collectPredsF(k, out);
    for (const AExpr& e : f.exprs) collectPredsE(e, out);
    if (f.domain) collectPredsE(*f.domain, out);
}

void flattenConjuncts(const AFormula& f, std::vector<const AFormula*>& out) {
    if (f.kind == AFormula::Kind::And) {
        for (const AFormula& k : f.kids) flattenConjuncts(k, out);
    } else if (f.kind != AFormula::Kind::True) {
        out.push_back(&f);
    }
}

// Bounds on the size of one predicate's extension, tightened by cardinality
// conjuncts and capped by the pool.
struct SizeBounds {
    std::int64_t lower = 0;
    std::int64_t upper = INT64_MAX;
};

struct SearchState {
    std::map<Sig, std::vector<Atom>> decided;  // sorted atoms per settled predicate
    std::map<Sig, std::vector<Atom>> pools;    // candidate atoms per open predicate
    std::map<Sig, SizeBounds> bounds;
    std::vector<bool> consumed;  // per conjunct
};

class SatSearch {
public:
    SatSearch(const std::vector<const AFormula*>& conjuncts, const InputInstance& instance,
              const std::vector<Term>& universe, const InputSpec& spec,
              const EnumerationBudget& budget)
        : conjuncts_(conjuncts),
          instance_(instance),
          universe_(universe),
          spec_(spec),
          budget_(budget) {
        if (budget.timeoutSeconds > 0)
            deadline_ = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(budget.timeoutSeconds));
    }

    void run(SearchState state, const std::function<bool(const Interpretation&)>& yield) {
        yield_ = &yield;
        decideNext(std::move(state));
    }

    std::size_t candidates() const { return candidates_; }
    std::size_t satisfying() const { return satisfying_; }

private:
    EvalContext context(const SearchState& s, Interpretation& scratch) const {
        std::vector<Atom> atoms;
        for (const auto& [sig, decided] : s.decided)
            atoms.insert(atoms.end(), decided.begin(), decided.end());
        scratch = Interpretation(std::move(atoms));
        return EvalContext{&instance_, &scratch, &universe_, &spec_};
    }

    bool ready(const AExpr& e, const SearchState& s) const {
        std::set<Sig> used;
        collectPredsE(e, used);
        for (const Sig& sig : used)
            if (s.pools.count(sig)) return false;
        return true;
    }

    bool ready(const AFormula& f, const SearchState& s) const {
        std::set<Sig> used;
        collectPredsF(f, used);
        for (const Sig& sig : used)
            if (s.pools.count(sig)) return false;
        return true;
    }

    // The open predicate named by an extension expression, if any.
    std::optional<Sig> openExtension(const AExpr& e, const SearchState& s) const {
        if (e.kind != AExpr::Kind::Extension) return std::nullopt;
        Sig sig{e.name, e.arity};
        if (!s.pools.count(sig)) return std::nullopt;
        return sig;
    }

    std::vector<Atom> atomsOf(const Sig& sig, const TermSet& elems) const {
        std::vector<Atom> out;
        out.reserve(elems.size());
        for (const Term& t : elems) {
            if (sig.arity == 1) {
                out.emplace_back(sig.name, std::vector<Term>{t});
                continue;
            }
            if (t.kind() != Term::Kind::Tuple ||
                static_cast<int>(t.args().size()) != sig.arity)
                throw EvalError("extension of " + sig.str() + " pinned to non-" +
                                std::to_string(sig.arity) + "-tuple " + t.str());
            out.emplace_back(sig.name, t.args());
        }
        return out;
    }

    // Pins p/k = E whenever E only reads settled predicates. Repeats until
    // nothing more settles, since one pin may unlock the next.
    void pinPass(SearchState& s) {
        bool progress = true;
        while (progress) {
            progress = false;
            for (std::size_t i = 0; i < conjuncts_.size(); ++i) {
                if (s.consumed[i]) continue;
                const AFormula& f = *conjuncts_[i];
                if (f.kind != AFormula::Kind::Cmp || f.cmp != CmpOp::Eq) continue;
                for (int side = 0; side < 2; ++side) {
                    auto sig = openExtension(f.exprs[side], s);
                    if (!sig || !ready(f.exprs[1 - side], s)) continue;
                    Interpretation scratch;
                    Value v = evalAssertionExpr(f.exprs[1 - side], context(s, scratch));
                    auto* set = std::get_if<TermSet>(&v);
                    if (!set)
                        throw EvalError("extension " + sig->str() +
                                        " equated with a non-set value");
                    s.decided[*sig] = atomsOf(*sig, *set);
                    s.pools.erase(*sig);
                    s.bounds.erase(*sig);
                    s.consumed[i] = true;
                    progress = true;
                    break;
                }
            }
        }
    }

    // Subset conjuncts shrink a pool; pointwise foralls filter it atom by
    // atom; cardinality conjuncts turn into size bounds. All three leave
    // nothing to re-check later, so the conjunct is consumed.
    void narrowPass(SearchState& s) {
        for (std::size_t i = 0; i < conjuncts_.size(); ++i) {
            if (s.consumed[i]) continue;
            const AFormula& f = *conjuncts_[i];

            if (f.kind == AFormula::Kind::Cmp && (f.cmp == CmpOp::Le || f.cmp == CmpOp::Ge)) {
                int small = f.cmp == CmpOp::Le ? 0 : 1;
                auto sig = openExtension(f.exprs[small], s);
                if (sig && ready(f.exprs[1 - small], s)) {
                    Interpretation scratch;
                    Value v = evalAssertionExpr(f.exprs[1 - small], context(s, scratch));
                    if (auto* set = std::get_if<TermSet>(&v)) {
                        std::vector<Atom> keep = atomsOf(*sig, *set);
                        std::vector<Atom>& pool = s.pools[*sig];
                        std::vector<Atom> next;
                        for (const Atom& a : pool)
                            if (std::binary_search(keep.begin(), keep.end(), a))
                                next.push_back(a);
                        pool = std::move(next);
                        s.consumed[i] = true;
                        continue;
                    }
                }
            }

            if (f.kind == AFormula::Kind::Quant && f.q == AFormula::QKind::Forall &&
                f.domain && ready(f.kids[0], s)) {
                auto sig = openExtension(*f.domain, s);
                if (sig) {
                    std::vector<Atom>& pool = s.pools[*sig];
                    std::vector<Atom> next;
                    Interpretation scratch;
                    EvalContext ctx = context(s, scratch);
                    for (const Atom& a : pool)
                        if (holdsFor(f, a, ctx)) next.push_back(a);
                    pool = std::move(next);
                    s.consumed[i] = true;
                    continue;
                }
            }

            if (f.kind == AFormula::Kind::Cmp) {
                for (int side = 0; side < 2; ++side) {
                    const AExpr& lhs = f.exprs[side];
                    if (lhs.kind != AExpr::Kind::Card) continue;
                    auto sig = openExtension(lhs.kids[0], s);
                    if (!sig || !ready(f.exprs[1 - side], s)) continue;
                    Interpretation scratch;
                    Value v = evalAssertionExpr(f.exprs[1 - side], context(s, scratch));
                    auto* t = std::get_if<Term>(&v);
                    if (!t || t->kind() != Term::Kind::Integer) continue;
                    std::int64_t m = t->value();
                    CmpOp op = f.cmp;
                    if (side == 1) {  // m OP |p/k| reads as |p/k| OP' m
                        op = op == CmpOp::Le ? CmpOp::Ge
                             : op == CmpOp::Ge ? CmpOp::Le
                             : op == CmpOp::Lt ? CmpOp::Gt
                             : op == CmpOp::Gt ? CmpOp::Lt
                                               : op;
                    }
                    SizeBounds& b = s.bounds[*sig];
                    switch (op) {
                    case CmpOp::Eq:
                        b.lower = std::max(b.lower, m);
                        b.upper = std::min(b.upper, m);
                        break;
                    case CmpOp::Le: b.upper = std::min(b.upper, m); break;
                    case CmpOp::Lt: b.upper = std::min(b.upper, m - 1); break;
                    case CmpOp::Ge: b.lower = std::max(b.lower, m); break;
                    case CmpOp::Gt: b.lower = std::max(b.lower, m + 1); break;
                    case CmpOp::Ne: continue;  // stays a residual filter
                    }
                    s.consumed[i] = true;
                    break;
                }
            }
        }
    }

    // One pool atom against a pointwise forall body.
    bool holdsFor(const AFormula& f, const Atom& a, const EvalContext& ctx) const {
        if (f.vars.size() == 1) {
            Term whole = a.arity() == 1 ? a.args()[0] : Term::tuple(a.args());
            return evalAssertionWith(f.kids[0], f.vars, {whole}, ctx);
        }
        if (static_cast<int>(f.vars.size()) != a.arity())
            throw EvalError("cannot destructure " + a.str() + " into " +
                            std::to_string(f.vars.size()) + " variables");
        return evalAssertionWith(f.kids[0], f.vars, a.args(), ctx);
    }

    void decideNext(SearchState s) {
        if (stopped_) return;
        pinPass(s);
        narrowPass(s);
        if (s.pools.empty()) {
            leaf(s);
            return;
        }

        // Enumerate the open predicate with the smallest pool, preferring
        // ones no pending equality could still pin.
        std::optional<Sig> best;
        bool bestPinnable = true;
        std::size_t bestSize = 0;
        for (const auto& [sig, pool] : s.pools) {
            bool pinnable = false;
            for (std::size_t i = 0; i < conjuncts_.size(); ++i) {
                if (s.consumed[i]) continue;
                const AFormula& f = *conjuncts_[i];
                if (f.kind != AFormula::Kind::Cmp || f.cmp != CmpOp::Eq) continue;
                for (int side = 0; side < 2; ++side) {
                    auto target = openExtension(f.exprs[side], s);
                    if (target && *target == sig) pinnable = true;
                }
            }
            bool better = !best || (bestPinnable && !pinnable) ||
                          (bestPinnable == pinnable && pool.size() < bestSize);
            if (better) {
                best = sig;
                bestPinnable = pinnable;
                bestSize = pool.size();
            }
        }

        Sig sig = *best;
        std::vector<Atom> pool = s.pools.at(sig);
        SizeBounds b;
        if (auto it = s.bounds.find(sig); it != s.bounds.end()) b = it->second;
        s.pools.erase(sig);
        s.bounds.erase(sig);

        std::vector<Atom> chosen;
        subsetDfs(s, sig, pool, b, 0, chosen);
    }

    void subsetDfs(const SearchState& s, const Sig& sig, const std::vector<Atom>& pool,
                   const SizeBounds& b, std::size_t idx, std::vector<Atom>& chosen) {
        if (stopped_) return;
        if ((++visits_ & 0xfff) == 0 && deadline_ &&
            std::chrono::steady_clock::now() > *deadline_)
            throw BudgetExceeded("satisfying-interpretation search timed out",
                                 candidates_, satisfying_);
        auto taken = static_cast<std::int64_t>(chosen.size());
        auto rest = static_cast<std::int64_t>(pool.size() - idx);
        if (taken > b.upper || taken + rest < b.lower) return;
        if (idx == pool.size()) {
            SearchState next = s;
            next.decided[sig] = chosen;
            decideNext(std::move(next));
            return;
        }
        chosen.push_back(pool[idx]);
        subsetDfs(s, sig, pool, b, idx + 1, chosen);
        chosen.pop_back();
        subsetDfs(s, sig, pool, b, idx + 1, chosen);
    }

    void leaf(const SearchState& s) {
        if (++candidates_ > budget_.maxCandidates)
            throw BudgetExceeded("satisfying-interpretation search examined too many candidates",
                                 candidates_, satisfying_);
        std::vector<Atom> atoms = instance_.facts;
        for (const auto& [sig, decided] : s.decided)
            atoms.insert(atoms.end(), decided.begin(), decided.end());
        Interpretation candidate(std::move(atoms));
        EvalContext ctx{&instance_, &candidate, &universe_, &spec_};
        for (std::size_t i = 0; i < conjuncts_.size(); ++i)
            if (!s.consumed[i] && !evalAssertion(*conjuncts_[i], ctx)) return;
        if (++satisfying_ > budget_.maxModels)
            throw BudgetExceeded("satisfying-interpretation search found too many interpretations",
                                 candidates_, satisfying_);
        if (!(*yield_)(candidate)) stopped_ = true;
    }

    const std::vector<const AFormula*>& conjuncts_;
    const InputInstance& instance_;
    const std::vector<Term>& universe_;
    const InputSpec& spec_;
    const EnumerationBudget& budget_;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    const std::function<bool(const Interpretation&)>* yield_ = nullptr;
    bool stopped_ = false;
    std::size_t candidates_ = 0;
    std::size_t satisfying_ = 0;
    std::uint64_t visits_ = 0;
};

}  // namespace

void enumerateSatisfying(const Assertion& a, const InputInstance& instance,
                         const std::set<Sig>& predicateSet, const std::vector<Term>& universe,
                         const InputSpec& spec, const EnumerationBudget& budget,
                         const std::function<bool(const Interpretation&)>& yield,
                         SatisfyStats* stats) {
    std::vector<const AFormula*> conjuncts;
    flattenConjuncts(a, conjuncts);

    SearchState state;
    state.consumed.assign(conjuncts.size(), false);
    for (const Sig& sig : predicateSet) {
        if (spec.isInput(sig)) continue;
        // Cap the raw tuple pool; propagation may still shrink it, but a
        // pool this size cannot be enumerated anyway.
        double raw = 1;
        for (int i = 0; i < sig.arity; ++i) raw *= static_cast<double>(universe.size());
        if (raw > 1'000'000)
            throw BudgetExceeded("candidate pool for " + sig.str() +
                                     " is too large to enumerate",
                                 0, 0);
        std::vector<Atom> pool;
        if (sig.arity == 0 || !universe.empty()) {
            std::vector<std::size_t> pick(sig.arity, 0);
            while (true) {
                std::vector<Term> args;
                args.reserve(sig.arity);
                for (std::size_t p : pick) args.push_back(universe[p]);
                pool.emplace_back(sig.name, std::move(args));
                int pos = sig.arity - 1;
                while (pos >= 0 && ++pick[pos] == universe.size()) pick[pos--] = 0;
                if (pos < 0) break;
            }
        }
        std::sort(pool.begin(), pool.end());
        state.pools[sig] = std::move(pool);
    }

    SatSearch search(conjuncts, instance, universe, spec, budget);
    try {
        search.run(std::move(state), yield);
    } catch (BudgetExceeded&) {
        if (stats) {
            stats->candidates = search.candidates();
            stats->satisfying = search.satisfying();
        }
        throw;
    }
    if (stats) {
        stats->candidates = search.candidates();
        stats->satisfying = search.satisfying();
    }
}

std::vector<Interpretation> enumerateSatisfying(const Assertion& a,
                                                const InputInstance& instance,
                                                const std::set<Sig>& predicateSet,
                                                const std::vector<Term>& universe,
                                                const InputSpec& spec,
                                                const EnumerationBudget& budget,
                                                SatisfyStats* stats) {
    std::vector<Interpretation> out;
    enumerateSatisfying(
        a, instance, predicateSet, universe, spec, budget,
        [&out](const Interpretation& i) {
            out.push_back(i);
            return true;
        },
        stats);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace achieve
