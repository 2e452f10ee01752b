#include "achieve/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>

#include "achieve/error.hpp"

namespace achieve {

namespace {

Atom complementAtom(const Atom& a) {
    return Atom("__c_" + a.pred(), a.args());
}

bool isInternalAtom(const Atom& a) {
    return a.pred().rfind("__", 0) == 0;
}

int atomId(const std::vector<Atom>& sorted, const Atom& a) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), a);
    if (it == sorted.end() || *it != a) return -1;
    return static_cast<int>(it - sorted.begin());
}

class Deadline {
public:
    explicit Deadline(double seconds) {
        if (seconds > 0)
            at_ = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(seconds));
    }
    bool expired() const {
        return at_ && std::chrono::steady_clock::now() > *at_;
    }

private:
    std::optional<std::chrono::steady_clock::time_point> at_;
};

}  // namespace

GroundProgram translateChoices(const GroundProgram& gp) {
    GroundProgram out;
    out.cardConstraints = gp.cardConstraints;
    for (const GroundRule& r : gp.rules) {
        if (!r.choice) {
            out.rules.push_back(r);
            continue;
        }
        const GroundChoice& ch = *r.choice;
        for (const Atom& a : ch.elements) {
            GroundRule pick;
            pick.sourceIndex = r.sourceIndex;
            pick.aggSources = r.aggSources;
            pick.head = a;
            pick.body = r.body;
            pick.body.push_back({true, complementAtom(a)});
            std::sort(pick.body.begin(), pick.body.end());

            GroundRule drop;
            drop.sourceIndex = r.sourceIndex;
            drop.aggSources = r.aggSources;
            drop.head = complementAtom(a);
            drop.body = r.body;
            drop.body.push_back({true, a});
            std::sort(drop.body.begin(), drop.body.end());

            out.rules.push_back(std::move(pick));
            out.rules.push_back(std::move(drop));
        }
        if (ch.lower > 0 || ch.upper)
            out.cardConstraints.push_back({ch.lower, ch.upper, ch.elements, r.body});
    }
    return out;
}

GroundProgram reduct(const GroundProgram& gp, const Interpretation& interp) {
    GroundProgram out;
    for (const GroundRule& r : gp.rules) {
        if (r.choice) throw Error("reduct requires a choice-free program");
        if (!r.head) continue;  // constraints are checked against the model directly
        bool blocked = false;
        GroundRule keep;
        keep.sourceIndex = r.sourceIndex;
        keep.head = r.head;
        keep.aggSources = r.aggSources;
        for (const GroundLiteral& l : r.body) {
            if (!l.negative) {
                keep.body.push_back(l);
            } else if (interp.contains(l.atom)) {
                blocked = true;
                break;
            }
        }
        if (!blocked) out.rules.push_back(std::move(keep));
    }
    return out;
}

Interpretation minimalModel(const GroundProgram& gp) {
    std::set<Atom> atomSet = gp.allAtoms();
    std::vector<Atom> atoms(atomSet.begin(), atomSet.end());
    struct IRule {
        int head;
        int unsat;
    };
    std::vector<IRule> rules;
    std::vector<std::vector<int>> watchers(atoms.size());
    for (const GroundRule& r : gp.rules) {
        if (r.choice || !r.head) throw Error("minimal models are defined for definite rules");
        IRule ir{atomId(atoms, *r.head), 0};
        for (const GroundLiteral& l : r.body) {
            if (l.negative) throw Error("minimal models are defined for negation-free programs");
            watchers[atomId(atoms, l.atom)].push_back(static_cast<int>(rules.size()));
            ++ir.unsat;
        }
        rules.push_back(ir);
    }
    std::vector<char> derived(atoms.size(), 0);
    std::vector<int> queue;
    for (const IRule& r : rules)
        if (r.unsat == 0 && !derived[r.head]) {
            derived[r.head] = 1;
            queue.push_back(r.head);
        }
    while (!queue.empty()) {
        int a = queue.back();
        queue.pop_back();
        for (int ri : watchers[a])
            if (--rules[ri].unsat == 0 && !derived[rules[ri].head]) {
                derived[rules[ri].head] = 1;
                queue.push_back(rules[ri].head);
            }
    }
    std::vector<Atom> out;
    for (std::size_t i = 0; i < atoms.size(); ++i)
        if (derived[i]) out.push_back(atoms[i]);
    return Interpretation(std::move(out));
}

// ---------------------------------------------------------------------------

struct StableChecker::Impl {
    std::vector<Atom> atoms;  // sorted; ids index into it
    std::vector<char> internal;

    struct DRule {
        int head;
        std::vector<int> pos, neg;
    };
    std::vector<DRule> rules;
    std::vector<std::vector<int>> watchers;  // positive premise atom -> rule indices

    struct Constraint {
        std::vector<int> pos, neg;
    };
    std::vector<Constraint> constraints;

    struct Card {
        std::int64_t lower;
        std::optional<std::int64_t> upper;
        std::vector<int> members;
        std::vector<int> bodyPos, bodyNeg;
    };
    std::vector<Card> cards;

    explicit Impl(const GroundProgram& raw) {
        GroundProgram gp = translateChoices(raw);
        std::set<Atom> atomSet = gp.allAtoms();
        atoms.assign(atomSet.begin(), atomSet.end());
        internal.resize(atoms.size());
        for (std::size_t i = 0; i < atoms.size(); ++i) internal[i] = isInternalAtom(atoms[i]);
        watchers.resize(atoms.size());

        for (const GroundRule& r : gp.rules) {
            if (r.head) {
                DRule dr;
                dr.head = atomId(atoms, *r.head);
                for (const GroundLiteral& l : r.body)
                    (l.negative ? dr.neg : dr.pos).push_back(atomId(atoms, l.atom));
                for (int p : dr.pos) watchers[p].push_back(static_cast<int>(rules.size()));
                rules.push_back(std::move(dr));
            } else {
                Constraint c;
                for (const GroundLiteral& l : r.body)
                    (l.negative ? c.neg : c.pos).push_back(atomId(atoms, l.atom));
                constraints.push_back(std::move(c));
            }
        }
        for (const CardConstraint& cc : gp.cardConstraints) {
            Card c;
            c.lower = cc.lower;
            c.upper = cc.upper;
            for (const Atom& a : cc.atoms) c.members.push_back(atomId(atoms, a));
            for (const GroundLiteral& l : cc.body)
                (l.negative ? c.bodyNeg : c.bodyPos).push_back(atomId(atoms, l.atom));
            cards.push_back(std::move(c));
        }
    }

    bool stable(const Interpretation& interp) const {
        std::vector<char> in(atoms.size(), 0);
        for (const Atom& a : interp) {
            int i = atomId(atoms, a);
            if (i < 0) return false;  // no rule can ever derive it
            in[i] = 1;
        }
        // Settle the internal complement atoms the choice translation
        // introduced. Their bodies mention ordinary atoms only, so one pass
        // suffices; callers never pass __c_ atoms themselves.
        for (const DRule& r : rules) {
            if (!internal[r.head] || in[r.head]) continue;
            bool fires = true;
            for (int p : r.pos)
                if (!in[p]) {
                    fires = false;
                    break;
                }
            if (fires)
                for (int n : r.neg)
                    if (in[n]) {
                        fires = false;
                        break;
                    }
            if (fires) in[r.head] = 1;
        }

        // Least model of the reduct, by unsatisfied-premise counting.
        std::vector<int> unsat(rules.size(), 0);
        std::vector<char> derived(atoms.size(), 0);
        std::vector<int> queue;
        for (std::size_t ri = 0; ri < rules.size(); ++ri) {
            const DRule& r = rules[ri];
            bool blocked = false;
            for (int n : r.neg)
                if (in[n]) {
                    blocked = true;
                    break;
                }
            if (blocked) {
                unsat[ri] = -1;
                continue;
            }
            unsat[ri] = static_cast<int>(r.pos.size());
            if (unsat[ri] == 0 && !derived[r.head]) {
                derived[r.head] = 1;
                queue.push_back(r.head);
            }
        }
        while (!queue.empty()) {
            int a = queue.back();
            queue.pop_back();
            for (int ri : watchers[a])
                if (unsat[ri] > 0 && --unsat[ri] == 0 && !derived[rules[ri].head]) {
                    derived[rules[ri].head] = 1;
                    queue.push_back(rules[ri].head);
                }
        }
        for (std::size_t i = 0; i < atoms.size(); ++i)
            if (derived[i] != in[i]) return false;

        for (const Constraint& c : constraints) {
            bool violated = true;
            for (int p : c.pos)
                if (!in[p]) {
                    violated = false;
                    break;
                }
            if (violated)
                for (int n : c.neg)
                    if (in[n]) {
                        violated = false;
                        break;
                    }
            if (violated) return false;
        }
        for (const Card& c : cards) {
            bool applies = true;
            for (int p : c.bodyPos)
                if (!in[p]) {
                    applies = false;
                    break;
                }
            if (applies)
                for (int n : c.bodyNeg)
                    if (in[n]) {
                        applies = false;
                        break;
                    }
            if (!applies) continue;
            std::int64_t count = 0;
            for (int m : c.members) count += in[m];
            if (count < c.lower || (c.upper && count > *c.upper)) return false;
        }
        return true;
    }
};

StableChecker::StableChecker(const GroundProgram& gp) : impl_(std::make_unique<Impl>(gp)) {}
StableChecker::~StableChecker() = default;
StableChecker::StableChecker(StableChecker&&) noexcept = default;
StableChecker& StableChecker::operator=(StableChecker&&) noexcept = default;

bool StableChecker::isStable(const Interpretation& interp) const {
    return impl_->stable(interp);
}

bool isStable(const GroundProgram& gp, const Interpretation& interp) {
    return StableChecker(gp).isStable(interp);
}

// ---------------------------------------------------------------------------
// Enumeration. Branch on the decision atoms (choice elements plus atoms in
// negative cycles), close everything else stratum by stratum, and verify
// each completed assignment with the stability checker. Distinct decision
// assignments yield distinct candidates, so no deduplication is needed.

namespace {

struct SearchSpace {
    std::vector<Atom> atoms;         // every atom, sorted
    std::vector<int> decisions;      // atom ids, ascending
    std::vector<int> decisionIndex;  // atom id -> position in decisions, or -1

    struct CRule {
        int head;
        std::vector<int> pos, neg;
    };
    // Closure plan for non-decision heads, grouped by the head's dependency
    // component, callees first. Negative literals inside a stratum cannot
    // occur: such a cycle would have made its atoms decisions.
    std::vector<std::vector<CRule>> strata;

    struct ChoiceGroup {
        std::int64_t lower = 0;
        std::optional<std::int64_t> upper;
        std::vector<int> members;  // decision positions
    };
    std::vector<ChoiceGroup> groups;         // only groups safe to prune on
    std::vector<std::vector<int>> groupsOf;  // decision position -> group ids

    struct EarlyConstraint {
        std::vector<int> pos, neg;  // decision positions
    };
    std::vector<EarlyConstraint> early;
    std::vector<std::vector<int>> earlyOf;  // decision position -> constraint ids
};

SearchSpace buildSpace(const GroundProgram& gp) {
    SearchSpace s;
    std::set<Atom> atomSet = gp.allAtoms();
    s.atoms.assign(atomSet.begin(), atomSet.end());
    const int n = static_cast<int>(s.atoms.size());

    struct Edge {
        int from, to;
        bool negative;
    };
    std::vector<Edge> edges;
    std::set<int> decisionSet;
    for (const GroundRule& r : gp.rules) {
        if (r.choice) {
            for (const Atom& a : r.choice->elements) decisionSet.insert(atomId(s.atoms, a));
            continue;
        }
        if (!r.head) continue;
        int h = atomId(s.atoms, *r.head);
        for (const GroundLiteral& l : r.body)
            edges.push_back({h, atomId(s.atoms, l.atom), l.negative});
    }

    // Tarjan components over the derivation graph, numbered callees first.
    std::vector<std::vector<int>> adj(n);
    for (const Edge& e : edges) adj[e.from].push_back(e.to);
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<int> stack;
    std::vector<char> onStack(n, 0);
    int counter = 0, comps = 0;
    std::function<void(int)> visit = [&](int v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        onStack[v] = 1;
        for (int w : adj[v]) {
            if (index[w] < 0) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (onStack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            for (;;) {
                int w = stack.back();
                stack.pop_back();
                onStack[w] = 0;
                comp[w] = comps;
                if (w == v) break;
            }
            ++comps;
        }
    };
    for (int v = 0; v < n; ++v)
        if (index[v] < 0) visit(v);

    for (const Edge& e : edges)
        if (e.negative && comp[e.from] == comp[e.to])
            for (int v = 0; v < n; ++v)
                if (comp[v] == comp[e.from]) decisionSet.insert(v);

    s.decisions.assign(decisionSet.begin(), decisionSet.end());
    s.decisionIndex.assign(n, -1);
    for (std::size_t i = 0; i < s.decisions.size(); ++i)
        s.decisionIndex[s.decisions[i]] = static_cast<int>(i);

    s.strata.resize(comps);
    for (const GroundRule& r : gp.rules) {
        if (r.choice || !r.head) continue;
        int h = atomId(s.atoms, *r.head);
        if (s.decisionIndex[h] >= 0) continue;
        SearchSpace::CRule cr;
        cr.head = h;
        for (const GroundLiteral& l : r.body)
            (l.negative ? cr.neg : cr.pos).push_back(atomId(s.atoms, l.atom));
        s.strata[comp[h]].push_back(std::move(cr));
    }

    // Cardinality pruning is sound only when the choice body certainly holds
    // in every candidate; require every body literal to be a positive fact.
    std::set<int> factHeads;
    for (const GroundRule& r : gp.rules)
        if (r.head && !r.choice && r.body.empty()) factHeads.insert(atomId(s.atoms, *r.head));

    s.groupsOf.resize(s.decisions.size());
    for (const GroundRule& r : gp.rules) {
        if (!r.choice) continue;
        const GroundChoice& ch = *r.choice;
        if (ch.lower <= 0 && !ch.upper) continue;
        bool certain = true;
        for (const GroundLiteral& l : r.body)
            if (l.negative || !factHeads.count(atomId(s.atoms, l.atom))) {
                certain = false;
                break;
            }
        if (!certain) continue;
        SearchSpace::ChoiceGroup g;
        g.lower = ch.lower;
        g.upper = ch.upper;
        for (const Atom& a : ch.elements)
            g.members.push_back(s.decisionIndex[atomId(s.atoms, a)]);
        int gi = static_cast<int>(s.groups.size());
        for (int m : g.members) s.groupsOf[m].push_back(gi);
        s.groups.push_back(std::move(g));
    }

    // Constraints mentioning decision atoms only can prune mid-search, once
    // their last atom is assigned.
    s.earlyOf.resize(s.decisions.size());
    for (const GroundRule& r : gp.rules) {
        if (r.head || r.choice) continue;
        SearchSpace::EarlyConstraint ec;
        bool allDecision = !r.body.empty();
        for (const GroundLiteral& l : r.body) {
            int d = s.decisionIndex[atomId(s.atoms, l.atom)];
            if (d < 0) {
                allDecision = false;
                break;
            }
            (l.negative ? ec.neg : ec.pos).push_back(d);
        }
        if (!allDecision) continue;
        int ci = static_cast<int>(s.early.size());
        for (int d : ec.pos) s.earlyOf[d].push_back(ci);
        for (int d : ec.neg) s.earlyOf[d].push_back(ci);
        s.early.push_back(std::move(ec));
    }
    return s;
}

class Enumerator {
public:
    Enumerator(const GroundProgram& gp, const EnumerationBudget& budget,
               const std::function<bool(const Interpretation&)>& yield)
        : space_(buildSpace(gp)),
          checker_(gp),
          budget_(budget),
          deadline_(budget.timeoutSeconds),
          yield_(yield) {
        assign_.assign(space_.decisions.size(), -1);
        groupTrue_.assign(space_.groups.size(), 0);
        groupDecided_.assign(space_.groups.size(), 0);
        earlyUndecided_.reserve(space_.early.size());
        for (const auto& ec : space_.early)
            earlyUndecided_.push_back(static_cast<int>(ec.pos.size() + ec.neg.size()));
        value_.assign(space_.atoms.size(), 0);
    }

    void run() {
        for (const auto& g : space_.groups)
            if (static_cast<std::int64_t>(g.members.size()) < g.lower)
                return;  // the bound can never be met, so no model exists
        dfs(0);
    }

private:
    void dfs(std::size_t depth) {
        if ((++visits_ & 0xfff) == 0 && deadline_.expired())
            throw BudgetExceeded("timeout while enumerating models", candidates_, models_);
        if (depth == space_.decisions.size()) {
            leaf();
            return;
        }
        for (int v : {1, 0}) {
            assign_[depth] = static_cast<signed char>(v);
            if (propagate(depth, v)) dfs(depth + 1);
            retract(depth, v);
            if (stopped_) break;
        }
        assign_[depth] = -1;
    }

    // Updates the counters for one assignment; false means the branch is dead.
    // Counters are updated unconditionally so retract() stays symmetric.
    bool propagate(std::size_t d, int v) {
        bool alive = true;
        for (int gi : space_.groupsOf[d]) {
            const auto& g = space_.groups[gi];
            ++groupDecided_[gi];
            groupTrue_[gi] += v;
            if (!alive) continue;
            if (g.upper && groupTrue_[gi] > *g.upper) alive = false;
            std::int64_t reachable =
                groupTrue_[gi] + static_cast<std::int64_t>(g.members.size()) - groupDecided_[gi];
            if (reachable < g.lower) alive = false;
        }
        for (int ci : space_.earlyOf[d]) {
            if (--earlyUndecided_[ci] != 0 || !alive) continue;
            const auto& ec = space_.early[ci];
            bool violated = true;
            for (int p : ec.pos)
                if (assign_[p] != 1) {
                    violated = false;
                    break;
                }
            if (violated)
                for (int ng : ec.neg)
                    if (assign_[ng] != 0) {
                        violated = false;
                        break;
                    }
            if (violated) alive = false;
        }
        return alive;
    }

    void retract(std::size_t d, int v) {
        for (int gi : space_.groupsOf[d]) {
            --groupDecided_[gi];
            groupTrue_[gi] -= v;
        }
        for (int ci : space_.earlyOf[d]) ++earlyUndecided_[ci];
    }

    void leaf() {
        if (++candidates_ > budget_.maxCandidates)
            throw BudgetExceeded("candidate limit exceeded while enumerating models",
                                 candidates_, models_);
        std::fill(value_.begin(), value_.end(), 0);
        for (std::size_t i = 0; i < space_.decisions.size(); ++i)
            value_[space_.decisions[i]] = assign_[i] == 1;
        for (const auto& stratum : space_.strata) {
            bool changed = true;
            while (changed) {
                changed = false;
                for (const auto& r : stratum) {
                    if (value_[r.head]) continue;
                    bool fires = true;
                    for (int p : r.pos)
                        if (!value_[p]) {
                            fires = false;
                            break;
                        }
                    if (fires)
                        for (int ng : r.neg)
                            if (value_[ng]) {
                                fires = false;
                                break;
                            }
                    if (fires) {
                        value_[r.head] = 1;
                        changed = true;
                    }
                }
            }
        }
        std::vector<Atom> atoms;
        for (std::size_t i = 0; i < value_.size(); ++i)
            if (value_[i]) atoms.push_back(space_.atoms[i]);
        Interpretation interp(std::move(atoms));
        if (!checker_.isStable(interp)) return;
        if (++models_ > budget_.maxModels)
            throw BudgetExceeded("model limit exceeded while enumerating models",
                                 candidates_, models_);
        if (!yield_(interp)) stopped_ = true;
    }

    SearchSpace space_;
    StableChecker checker_;
    EnumerationBudget budget_;
    Deadline deadline_;
    const std::function<bool(const Interpretation&)>& yield_;

    std::vector<signed char> assign_;
    std::vector<std::int64_t> groupTrue_, groupDecided_;
    std::vector<int> earlyUndecided_;
    std::vector<char> value_;
    std::size_t candidates_ = 0, models_ = 0, visits_ = 0;
    bool stopped_ = false;
};

}  // namespace

void enumerateStableModels(const GroundProgram& gp, const EnumerationBudget& budget,
                           const std::function<bool(const Interpretation&)>& yield) {
    Enumerator e(gp, budget, yield);
    e.run();
}

std::vector<Interpretation> enumerateStableModels(const GroundProgram& gp,
                                                  const EnumerationBudget& budget) {
    std::vector<Interpretation> models;
    enumerateStableModels(gp, budget, [&](const Interpretation& m) {
        models.push_back(m);
        return true;
    });
    std::sort(models.begin(), models.end());
    return models;
}

std::vector<Interpretation> enumerateBruteForce(const GroundProgram& gp,
                                                const EnumerationBudget& budget) {
    StableChecker checker(gp);
    std::set<Atom> headSet = gp.headAtoms();
    std::vector<Atom> heads(headSet.begin(), headSet.end());
    if (heads.size() >= 62)
        throw BudgetExceeded("too many head atoms for exhaustive enumeration", 0, 0);
    Deadline deadline(budget.timeoutSeconds);

    std::vector<Interpretation> models;
    const std::uint64_t total = std::uint64_t{1} << heads.size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        if (mask + 1 > budget.maxCandidates)
            throw BudgetExceeded("candidate limit exceeded in exhaustive enumeration",
                                 mask + 1, models.size());
        if ((mask & 0x3ff) == 0 && deadline.expired())
            throw BudgetExceeded("timeout in exhaustive enumeration", mask + 1, models.size());
        std::vector<Atom> chosen;
        for (std::size_t i = 0; i < heads.size(); ++i)
            if (mask & (std::uint64_t{1} << i)) chosen.push_back(heads[i]);
        Interpretation interp(std::move(chosen));
        if (checker.isStable(interp)) {
            models.push_back(std::move(interp));
            if (models.size() > budget.maxModels)
                throw BudgetExceeded("model limit exceeded in exhaustive enumeration",
                                     mask + 1, models.size());
        }
    }
    std::sort(models.begin(), models.end());
    return models;
}

}  // namespace achieve
