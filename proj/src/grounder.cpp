#include "achieve/grounder.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "achieve/error.hpp"

namespace achieve {

namespace {

using Env = std::map<std::string, Term>;

// ---------------------------------------------------------------------------
// Substitution

Term substPlaceholders(const Term& t, const std::map<std::string, Term>& bindings) {
    switch (t.kind()) {
    case Term::Kind::Integer:
    case Term::Kind::Variable:
        return t;
    case Term::Kind::Symbol: {
        auto it = bindings.find(t.name());
        return it == bindings.end() ? t : it->second;
    }
    default: {
        std::vector<Term> args;
        args.reserve(t.args().size());
        for (const Term& a : t.args()) args.push_back(substPlaceholders(a, bindings));
        switch (t.kind()) {
        case Term::Kind::Tuple: return Term::tuple(std::move(args));
        case Term::Kind::Arith: return Term::arith(t.op(), std::move(args));
        case Term::Kind::Interval: return Term::interval(args[0], args[1]);
        default: return Term::pool(std::move(args));
        }
    }
    }
}

Atom substAtomPlaceholders(const Atom& a, const std::map<std::string, Term>& bindings) {
    std::vector<Term> args;
    args.reserve(a.args().size());
    for (const Term& t : a.args()) args.push_back(substPlaceholders(t, bindings));
    return Atom(a.pred(), std::move(args));
}

Rule substRulePlaceholders(Rule r, const std::map<std::string, Term>& b) {
    if (b.empty()) return r;
    auto fixLits = [&](std::vector<BodyLiteral>& lits) {
        for (BodyLiteral& l : lits) {
            switch (l.kind) {
            case BodyLiteral::Kind::Pos:
            case BodyLiteral::Kind::Neg:
                l.atom = substAtomPlaceholders(l.atom, b);
                break;
            case BodyLiteral::Kind::Cmp:
                l.cmp.lhs = substPlaceholders(l.cmp.lhs, b);
                l.cmp.rhs = substPlaceholders(l.cmp.rhs, b);
                break;
            case BodyLiteral::Kind::Agg:
                l.agg.elem = substPlaceholders(l.agg.elem, b);
                for (Atom& p : l.agg.pattern) p = substAtomPlaceholders(p, b);
                break;
            }
        }
    };
    if (r.head.kind == Head::Kind::Atom) {
        r.head.atom = substAtomPlaceholders(r.head.atom, b);
    } else if (r.head.kind == Head::Kind::Choice) {
        if (r.head.lower) r.head.lower = substPlaceholders(*r.head.lower, b);
        if (r.head.upper) r.head.upper = substPlaceholders(*r.head.upper, b);
        for (ChoiceElement& e : r.head.elements) {
            e.atom = substAtomPlaceholders(e.atom, b);
            fixLits(e.condition);
        }
    }
    fixLits(r.body);
    return r;
}

// Variables to their bindings; unbound variables are left alone, so the
// result may need evalGroundTerm.
Term instTerm(const Term& t, const Env& env) {
    switch (t.kind()) {
    case Term::Kind::Integer:
    case Term::Kind::Symbol:
        return t;
    case Term::Kind::Variable: {
        auto it = env.find(t.name());
        return it == env.end() ? t : it->second;
    }
    default: {
        std::vector<Term> args;
        args.reserve(t.args().size());
        for (const Term& a : t.args()) args.push_back(instTerm(a, env));
        switch (t.kind()) {
        case Term::Kind::Tuple: return Term::tuple(std::move(args));
        case Term::Kind::Arith: return Term::arith(t.op(), std::move(args));
        case Term::Kind::Interval: return Term::interval(args[0], args[1]);
        default: return Term::pool(std::move(args));
        }
    }
    }
}

Atom groundAtom(const Atom& a, const Env& env) {
    std::vector<Term> args;
    args.reserve(a.args().size());
    for (const Term& t : a.args()) args.push_back(evalGroundTerm(instTerm(t, env)));
    return Atom(a.pred(), std::move(args));
}

// ---------------------------------------------------------------------------
// Matching

void undoTrail(Env& env, std::vector<std::string>& trail, std::size_t mark) {
    while (trail.size() > mark) {
        env.erase(trail.back());
        trail.pop_back();
    }
}

bool matchTerm(const Term& pat, const Term& val, Env& env, std::vector<std::string>& trail) {
    switch (pat.kind()) {
    case Term::Kind::Variable: {
        auto it = env.find(pat.name());
        if (it != env.end()) return it->second == val;
        env.emplace(pat.name(), val);
        trail.push_back(pat.name());
        return true;
    }
    case Term::Kind::Integer:
    case Term::Kind::Symbol:
        return pat == val;
    case Term::Kind::Tuple: {
        if (val.kind() != Term::Kind::Tuple || val.args().size() != pat.args().size())
            return false;
        for (std::size_t i = 0; i < pat.args().size(); ++i)
            if (!matchTerm(pat.args()[i], val.args()[i], env, trail)) return false;
        return true;
    }
    case Term::Kind::Arith: {
        std::set<std::string> vars;
        pat.collectVariables(vars);
        for (const std::string& v : vars)
            if (!env.count(v))
                throw GroundingError("arithmetic in a matched position must be fully bound: " +
                                     pat.str());
        return evalGroundTerm(instTerm(pat, env)) == val;
    }
    default:
        throw GroundingError("intervals and pools cannot appear in matched positions: " +
                             pat.str());
    }
}

bool matchAtom(const Atom& pat, const Atom& val, Env& env, std::vector<std::string>& trail) {
    for (std::size_t i = 0; i < pat.args().size(); ++i)
        if (!matchTerm(pat.args()[i], val.args()[i], env, trail)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Extension store

class Store {
public:
    explicit Store(std::size_t maxAtoms) : maxAtoms_(maxAtoms) {}

    bool add(const Atom& a) {
        if (!all_.insert(a).second) return false;
        if (all_.size() > maxAtoms_)
            throw GroundingError("ground atom limit exceeded (" + std::to_string(maxAtoms_) +
                                 "); the program is likely not finitely groundable");
        ext_[a.sig()].push_back(a);
        return true;
    }

    bool contains(const Atom& a) const { return all_.count(a) != 0; }

    const std::vector<Atom>& extension(const Sig& s) const {
        static const std::vector<Atom> empty;
        auto it = ext_.find(s);
        return it == ext_.end() ? empty : it->second;
    }

    void sortExtensions() {
        for (auto& [sig, atoms] : ext_) std::sort(atoms.begin(), atoms.end());
    }

private:
    std::size_t maxAtoms_;
    std::map<Sig, std::vector<Atom>> ext_;
    std::set<Atom> all_;
};

// ---------------------------------------------------------------------------
// Predicate dependencies. Components are deterministic when no member is
// opened by a choice, no negation or aggregate cycles back into the
// component, and everything below is deterministic. Deterministic
// extensions are computed exactly; the rest get a possibility closure.

struct DepInfo {
    std::map<Sig, int> comp;
    std::vector<bool> det;
    std::vector<std::vector<Sig>> members;  // callees-first component order

    bool isDet(const Sig& s) const {
        auto it = comp.find(s);
        return it == comp.end() ? true : det[it->second];
    }
};

struct DepEdge {
    Sig from, to;
    bool negative = false;
    bool aggregate = false;
};

DepInfo classify(const Program& p, const InputSpec& input) {
    std::set<Sig> sigs;
    std::vector<DepEdge> edges;
    std::set<Sig> choiceGenerated;

    for (const Sig& s : input.predicates) sigs.insert(s);
    for (const Rule& r : p.rules) {
        std::vector<Sig> heads;
        if (r.head.kind == Head::Kind::Atom) {
            heads.push_back(r.head.atom.sig());
        } else if (r.head.kind == Head::Kind::Choice) {
            for (const ChoiceElement& e : r.head.elements) {
                heads.push_back(e.atom.sig());
                choiceGenerated.insert(e.atom.sig());
            }
        }
        for (const Sig& h : heads) sigs.insert(h);

        auto dep = [&](const Sig& to, bool negative, bool aggregate) {
            sigs.insert(to);
            // Constraints restrict, they define nothing: no edges.
            for (const Sig& h : heads) edges.push_back({h, to, negative, aggregate});
        };
        auto scanLits = [&](const std::vector<BodyLiteral>& lits) {
            for (const BodyLiteral& l : lits) {
                switch (l.kind) {
                case BodyLiteral::Kind::Pos: dep(l.atom.sig(), false, false); break;
                case BodyLiteral::Kind::Neg: dep(l.atom.sig(), true, false); break;
                case BodyLiteral::Kind::Agg:
                    for (const Atom& a : l.agg.pattern) dep(a.sig(), false, true);
                    break;
                case BodyLiteral::Kind::Cmp: break;
                }
            }
        };
        scanLits(r.body);
        if (r.head.kind == Head::Kind::Choice)
            for (const ChoiceElement& e : r.head.elements) scanLits(e.condition);
    }

    // Tarjan; components come out callees-first.
    std::map<Sig, std::vector<std::pair<Sig, const DepEdge*>>> adj;
    for (const DepEdge& e : edges) adj[e.from].push_back({e.to, &e});

    DepInfo info;
    std::map<Sig, int> index, low;
    std::vector<Sig> stack;
    std::set<Sig> onStack;
    int counter = 0;

    std::function<void(const Sig&)> visit = [&](const Sig& v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        onStack.insert(v);
        for (const auto& [w, e] : adj[v]) {
            if (!index.count(w)) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (onStack.count(w)) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<Sig> comp;
            for (;;) {
                Sig w = stack.back();
                stack.pop_back();
                onStack.erase(w);
                comp.push_back(w);
                info.comp[w] = static_cast<int>(info.members.size());
                if (w == v) break;
            }
            info.members.push_back(std::move(comp));
        }
    };
    for (const Sig& s : sigs)
        if (!index.count(s)) visit(s);

    info.det.assign(info.members.size(), true);
    for (std::size_t c = 0; c < info.members.size(); ++c)
        for (const Sig& s : info.members[c])
            if (choiceGenerated.count(s)) info.det[c] = false;
    for (const DepEdge& e : edges) {
        if (info.comp[e.from] != info.comp[e.to]) continue;
        if (e.aggregate)
            throw UnsupportedAggregateError("aggregate over " + e.to.str() +
                                            " is recursive with " + e.from.str());
        if (e.negative) info.det[info.comp[e.from]] = false;
    }
    // Members are callees-first, so one pass propagates non-determinism up.
    for (std::size_t c = 0; c < info.members.size(); ++c)
        for (const DepEdge& e : edges)
            if (info.comp[e.from] == static_cast<int>(c) && !info.det[info.comp[e.to]])
                info.det[c] = false;
    return info;
}

// ---------------------------------------------------------------------------
// Body solving. Enumerates instantiations of a literal list over a store,
// evaluating comparisons and aggregates on the way. Negative literals are
// evaluated (deterministic phases), ignored (possibility closure), or kept
// as ground literals (emission).

enum class NegMode { Evaluate, Ignore, Keep };

struct Solution {
    Env* env;
    std::vector<GroundLiteral> kept;  // emission: the ground body
    std::set<Sig> aggSources;
    bool dead = false;  // a comparison was statically false (kept runs only)
};

class BodySolver {
public:
    BodySolver(const Store& store, const DepInfo& deps, NegMode neg, bool keepDead)
        : store_(store), deps_(deps), neg_(neg), keepDead_(keepDead) {}

    void solve(const std::vector<BodyLiteral>& lits, Env& env,
               const std::function<void(Solution&)>& emit) {
        std::vector<const BodyLiteral*> rest;
        rest.reserve(lits.size());
        for (const BodyLiteral& l : lits) rest.push_back(&l);
        Solution sol;
        sol.env = &env;
        std::vector<std::string> trail;
        step(rest, env, trail, sol, emit);
    }

private:
    bool evaluable(const Term& t, const Env& env) const {
        std::set<std::string> vars;
        t.collectVariables(vars);
        for (const std::string& v : vars)
            if (!env.count(v)) return false;
        return true;
    }

    // Picks the next literal: a decided comparison or groundable negative
    // first (cheap filters), then a positive join, aggregates once no
    // positive atom remains.
    int pick(const std::vector<const BodyLiteral*>& rest, const Env& env) const {
        int firstPos = -1;
        bool havePos = false;
        for (std::size_t i = 0; i < rest.size(); ++i)
            if (rest[i]->kind == BodyLiteral::Kind::Pos) {
                havePos = true;
                if (firstPos < 0) firstPos = static_cast<int>(i);
            }
        for (std::size_t i = 0; i < rest.size(); ++i) {
            const BodyLiteral& l = *rest[i];
            if (l.kind == BodyLiteral::Kind::Cmp) {
                bool lhs = evaluable(l.cmp.lhs, env), rhs = evaluable(l.cmp.rhs, env);
                if (lhs && rhs) return static_cast<int>(i);
                if (l.cmp.op == CmpOp::Eq &&
                    ((lhs && l.cmp.rhs.kind() == Term::Kind::Variable) ||
                     (rhs && l.cmp.lhs.kind() == Term::Kind::Variable)))
                    return static_cast<int>(i);
            } else if (l.kind == BodyLiteral::Kind::Neg) {
                if (evaluableAtom(l.atom, env)) return static_cast<int>(i);
            } else if (l.kind == BodyLiteral::Kind::Agg && !havePos) {
                return static_cast<int>(i);
            }
        }
        return firstPos;
    }

    bool evaluableAtom(const Atom& a, const Env& env) const {
        for (const Term& t : a.args())
            if (!evaluable(t, env)) return false;
        return true;
    }

    void step(std::vector<const BodyLiteral*> rest, Env& env, std::vector<std::string>& trail,
              Solution& sol, const std::function<void(Solution&)>& emit) {
        if (rest.empty()) {
            emit(sol);
            return;
        }
        int at = pick(rest, env);
        if (at < 0)
            throw GroundingError("unsolvable body literal order; this should have been "
                                 "rejected as unsafe");
        const BodyLiteral lit = *rest[at];
        rest.erase(rest.begin() + at);

        switch (lit.kind) {
        case BodyLiteral::Kind::Cmp: {
            bool lhs = evaluable(lit.cmp.lhs, env);
            if (lhs && evaluable(lit.cmp.rhs, env)) {
                Term a = evalGroundTerm(instTerm(lit.cmp.lhs, env));
                Term b = evalGroundTerm(instTerm(lit.cmp.rhs, env));
                bool ok = evalCmp(lit.cmp.op, a.compare(b));
                if (ok) {
                    step(std::move(rest), env, trail, sol, emit);
                } else if (keepDead_) {
                    bool wasDead = sol.dead;
                    sol.dead = true;
                    step(std::move(rest), env, trail, sol, emit);
                    sol.dead = wasDead;
                }
                return;
            }
            // Binding equality: X = <evaluated>.
            const Term& var = lhs ? lit.cmp.rhs : lit.cmp.lhs;
            const Term& val = lhs ? lit.cmp.lhs : lit.cmp.rhs;
            std::size_t mark = trail.size();
            env.emplace(var.name(), evalGroundTerm(instTerm(val, env)));
            trail.push_back(var.name());
            step(std::move(rest), env, trail, sol, emit);
            undoTrail(env, trail, mark);
            return;
        }
        case BodyLiteral::Kind::Neg: {
            Atom ground = groundAtom(lit.atom, env);
            switch (neg_) {
            case NegMode::Evaluate:
                if (store_.contains(ground)) return;  // always-true atom kills the body
                break;
            case NegMode::Ignore:
                break;
            case NegMode::Keep:
                sol.kept.push_back({true, std::move(ground)});
                break;
            }
            step(std::move(rest), env, trail, sol, emit);
            if (neg_ == NegMode::Keep) sol.kept.pop_back();
            return;
        }
        case BodyLiteral::Kind::Agg: {
            std::optional<Term> value = evalAggregate(lit.agg, env, sol.aggSources);
            if (!value) return;  // max over nothing: no instance
            auto it = env.find(lit.agg.var);
            if (it != env.end()) {
                if (it->second == *value) step(std::move(rest), env, trail, sol, emit);
                return;
            }
            std::size_t mark = trail.size();
            env.emplace(lit.agg.var, *value);
            trail.push_back(lit.agg.var);
            step(std::move(rest), env, trail, sol, emit);
            undoTrail(env, trail, mark);
            return;
        }
        case BodyLiteral::Kind::Pos: {
            const std::vector<Atom>& ext = store_.extension(lit.atom.sig());
            std::size_t n = ext.size();  // additions during the loop wait a round
            for (std::size_t i = 0; i < n; ++i) {
                Atom candidate = ext[i];
                std::size_t mark = trail.size();
                if (matchAtom(lit.atom, candidate, env, trail)) {
                    if (neg_ == NegMode::Keep) sol.kept.push_back({false, candidate});
                    step(rest, env, trail, sol, emit);
                    if (neg_ == NegMode::Keep) sol.kept.pop_back();
                }
                undoTrail(env, trail, mark);
            }
            return;
        }
        }
    }

    // Aggregates fold over the distinct witness tuples of the pattern
    // conjunction, one contribution per tuple of matched atoms.
    std::optional<Term> evalAggregate(const AggregateAssign& agg, const Env& outer,
                                      std::set<Sig>& sources) {
        for (const Atom& a : agg.pattern) {
            if (!deps_.isDet(a.sig()))
                throw UnsupportedAggregateError("aggregate over non-deterministic predicate " +
                                                a.sig().str());
            sources.insert(a.sig());
        }
        std::vector<Term> values;
        Env env = outer;
        std::vector<std::string> trail;
        std::function<void(std::size_t)> walk = [&](std::size_t i) {
            if (i == agg.pattern.size()) {
                if (agg.fun != AggFun::Count)
                    values.push_back(evalGroundTerm(instTerm(agg.elem, env)));
                else
                    values.push_back(Term::integer(0));
                return;
            }
            for (const Atom& cand : store_.extension(agg.pattern[i].sig())) {
                std::size_t mark = trail.size();
                if (matchAtom(agg.pattern[i], cand, env, trail)) walk(i + 1);
                undoTrail(env, trail, mark);
            }
        };
        walk(0);

        switch (agg.fun) {
        case AggFun::Count:
            return Term::integer(static_cast<std::int64_t>(values.size()));
        case AggFun::Sum: {
            std::int64_t total = 0;
            for (const Term& v : values) {
                if (v.kind() != Term::Kind::Integer)
                    throw GroundingError("sum over non-integer value " + v.str());
                total = checkedAdd(total, v.value());
            }
            return Term::integer(total);
        }
        case AggFun::Max: {
            if (values.empty()) return std::nullopt;
            return *std::max_element(values.begin(), values.end());
        }
        }
        return std::nullopt;
    }

    const Store& store_;
    const DepInfo& deps_;
    NegMode neg_;
    bool keepDead_;
};

// ---------------------------------------------------------------------------
// Head expansion: substitute, then expand intervals and pools through an
// odometer over the argument positions.

std::vector<Atom> expandHeadAtom(const Atom& head, const Env& env) {
    std::vector<std::vector<Term>> cols;
    for (const Term& arg : head.args()) {
        std::vector<Term> col;
        expandGroundTerm(instTerm(arg, env), col);
        if (col.empty()) return {};
        cols.push_back(std::move(col));
    }
    std::vector<Atom> out;
    std::vector<std::size_t> pick(cols.size(), 0);
    for (;;) {
        std::vector<Term> args;
        args.reserve(cols.size());
        for (std::size_t i = 0; i < cols.size(); ++i) args.push_back(cols[i][pick[i]]);
        out.push_back(Atom(head.pred(), std::move(args)));
        std::size_t i = 0;
        for (; i < cols.size(); ++i) {
            if (++pick[i] < cols[i].size()) break;
            pick[i] = 0;
        }
        if (i == cols.size()) break;
    }
    return out;
}

std::int64_t evalBound(const Term& t, const Env& env) {
    Term v = evalGroundTerm(instTerm(t, env));
    if (v.kind() != Term::Kind::Integer)
        throw GroundingError("choice bound is not an integer: " + v.str());
    return v.value();
}

}  // namespace

// ---------------------------------------------------------------------------

GroundProgram ground(const PrefixView& view, const InputInstance& instance,
                     const GrounderOptions& opts) {
    const Program& full = view.program();
    DepInfo deps = classify(full, full.input);

    std::vector<Rule> rules;
    rules.reserve(view.length());
    for (const Rule& r : view) rules.push_back(substRulePlaceholders(r, instance.bindings));

    Store store(opts.maxAtoms);
    for (const Atom& fact : instance.facts) store.add(fact);

    // Exact extensions for deterministic predicates, callees-first.
    for (std::size_t c = 0; c < deps.members.size(); ++c) {
        if (!deps.det[c]) continue;
        std::vector<const Rule*> defs;
        for (const Rule& r : rules)
            if (r.head.kind == Head::Kind::Atom &&
                deps.comp.at(r.head.atom.sig()) == static_cast<int>(c))
                defs.push_back(&r);
        if (defs.empty()) continue;
        BodySolver solver(store, deps, NegMode::Evaluate, false);
        bool changed = true;
        while (changed) {
            changed = false;
            for (const Rule* r : defs) {
                Env env;
                solver.solve(r->body, env, [&](Solution& sol) {
                    for (const Atom& a : expandHeadAtom(r->head.atom, *sol.env))
                        changed |= store.add(a);
                });
            }
        }
    }

    // Possibility closure for everything else, negation ignored.
    {
        BodySolver solver(store, deps, NegMode::Ignore, false);
        bool changed = true;
        while (changed) {
            changed = false;
            for (const Rule& r : rules) {
                if (r.head.kind == Head::Kind::Atom) {
                    if (deps.isDet(r.head.atom.sig())) continue;
                    Env env;
                    solver.solve(r.body, env, [&](Solution& sol) {
                        for (const Atom& a : expandHeadAtom(r.head.atom, *sol.env))
                            changed |= store.add(a);
                    });
                } else if (r.head.kind == Head::Kind::Choice) {
                    Env env;
                    solver.solve(r.body, env, [&](Solution& sol) {
                        for (const ChoiceElement& e : r.head.elements) {
                            for (const BodyLiteral& c : e.condition)
                                if (c.kind == BodyLiteral::Kind::Pos &&
                                    !deps.isDet(c.atom.sig()))
                                    throw GroundingError(
                                        "choice condition over non-deterministic predicate " +
                                        c.atom.sig().str());
                            BodySolver cond(store, deps, NegMode::Evaluate, false);
                            cond.solve(e.condition, *sol.env, [&](Solution& csol) {
                                for (const Atom& a : expandHeadAtom(e.atom, *csol.env))
                                    changed |= store.add(a);
                            });
                        }
                    });
                }
            }
        }
    }

    store.sortExtensions();

    // Emission: instantiate every rule of the prefix over the closed store.
    GroundProgram out;
    for (const Atom& fact : instance.facts) out.rules.push_back({0, fact, {}, {}, {}});

    BodySolver emitter(store, deps, NegMode::Keep, opts.keepFalseComparisonRules);
    for (const Rule& r : rules) {
        Env env;
        emitter.solve(r.body, env, [&](Solution& sol) {
            std::vector<GroundLiteral> body = sol.kept;
            if (sol.dead) body.push_back({false, Atom("__false", {})});
            std::sort(body.begin(), body.end());
            body.erase(std::unique(body.begin(), body.end()), body.end());

            GroundRule gr;
            gr.sourceIndex = r.index;
            gr.body = std::move(body);
            gr.aggSources = sol.aggSources;
            switch (r.head.kind) {
            case Head::Kind::None:
                out.rules.push_back(std::move(gr));
                break;
            case Head::Kind::Atom:
                for (const Atom& a : expandHeadAtom(r.head.atom, *sol.env)) {
                    GroundRule copy = gr;
                    copy.head = a;
                    out.rules.push_back(std::move(copy));
                }
                break;
            case Head::Kind::Choice: {
                GroundChoice choice;
                choice.lower = r.head.lower ? evalBound(*r.head.lower, *sol.env) : 0;
                if (r.head.upper) choice.upper = evalBound(*r.head.upper, *sol.env);
                BodySolver cond(store, deps, NegMode::Evaluate, false);
                for (const ChoiceElement& e : r.head.elements) {
                    cond.solve(e.condition, *sol.env, [&](Solution& csol) {
                        for (const Atom& a : expandHeadAtom(e.atom, *csol.env))
                            choice.elements.push_back(a);
                    });
                }
                std::sort(choice.elements.begin(), choice.elements.end());
                choice.elements.erase(
                    std::unique(choice.elements.begin(), choice.elements.end()),
                    choice.elements.end());
                gr.choice = std::move(choice);
                out.rules.push_back(std::move(gr));
                break;
            }
            }
        });
    }

    std::stable_sort(out.rules.begin(), out.rules.end());
    out.rules.erase(std::unique(out.rules.begin(), out.rules.end(),
                                [](const GroundRule& a, const GroundRule& b) {
                                    return a.compare(b) == 0;
                                }),
                    out.rules.end());
    return out;
}

std::vector<Term> herbrandTerms(const Program& p, const InputInstance& instance) {
    std::set<Term> acc;
    std::function<void(const Term&)> addPrecomputed = [&](const Term& t) {
        acc.insert(t);
        if (t.kind() == Term::Kind::Tuple)
            for (const Term& a : t.args()) addPrecomputed(a);
    };
    std::function<void(const Term&)> addTerm = [&](const Term& t) {
        if (!t.hasVariables()) {
            std::vector<Term> expanded;
            expandGroundTerm(t, expanded);
            for (const Term& e : expanded) addPrecomputed(e);
        } else if (t.kind() != Term::Kind::Variable) {
            for (const Term& a : t.args()) addTerm(a);
        }
    };
    auto addAtom = [&](const Atom& a) {
        for (const Term& t : a.args()) addTerm(substPlaceholders(t, instance.bindings));
    };
    auto addLits = [&](const std::vector<BodyLiteral>& lits) {
        for (const BodyLiteral& l : lits) {
            switch (l.kind) {
            case BodyLiteral::Kind::Pos:
            case BodyLiteral::Kind::Neg:
                addAtom(l.atom);
                break;
            case BodyLiteral::Kind::Agg:
                for (const Atom& a : l.agg.pattern) addAtom(a);
                break;
            case BodyLiteral::Kind::Cmp:
                break;
            }
        }
    };
    for (const Rule& r : p.rules) {
        if (r.head.kind == Head::Kind::Atom) {
            addAtom(r.head.atom);
        } else if (r.head.kind == Head::Kind::Choice) {
            for (const ChoiceElement& e : r.head.elements) {
                addAtom(e.atom);
                addLits(e.condition);
            }
        }
        addLits(r.body);
    }
    for (const Atom& a : instance.facts)
        for (const Term& t : a.args()) addPrecomputed(t);
    for (const auto& [name, value] : instance.bindings) addPrecomputed(value);
    return std::vector<Term>(acc.begin(), acc.end());
}

// ---------------------------------------------------------------------------
// Printing and ordering

std::string GroundLiteral::str() const {
    return negative ? "not " + atom.str() : atom.str();
}

int GroundChoice::compare(const GroundChoice& o) const {
    if (lower != o.lower) return lower < o.lower ? -1 : 1;
    if (upper.has_value() != o.upper.has_value()) return upper ? 1 : -1;
    if (upper && *upper != *o.upper) return *upper < *o.upper ? -1 : 1;
    if (elements.size() != o.elements.size()) return elements.size() < o.elements.size() ? -1 : 1;
    for (std::size_t i = 0; i < elements.size(); ++i)
        if (int c = elements[i].compare(o.elements[i])) return c;
    return 0;
}

std::string GroundChoice::str() const {
    std::ostringstream os;
    if (lower != 0) os << lower << " ";
    if (elements.empty()) {
        os << "{ }";
    } else {
        os << "{ ";
        for (std::size_t i = 0; i < elements.size(); ++i) {
            if (i) os << "; ";
            os << elements[i].str();
        }
        os << " }";
    }
    if (upper) os << " " << *upper;
    return os.str();
}

int GroundRule::compare(const GroundRule& o) const {
    if (sourceIndex != o.sourceIndex) return sourceIndex < o.sourceIndex ? -1 : 1;
    if (head.has_value() != o.head.has_value()) return head ? -1 : 1;
    if (head)
        if (int c = head->compare(*o.head)) return c;
    if (choice.has_value() != o.choice.has_value()) return choice ? -1 : 1;
    if (choice)
        if (int c = choice->compare(*o.choice)) return c;
    if (body.size() != o.body.size()) return body.size() < o.body.size() ? -1 : 1;
    for (std::size_t i = 0; i < body.size(); ++i)
        if (int c = body[i].compare(o.body[i])) return c;
    return 0;
}

std::string GroundRule::str() const {
    std::ostringstream os;
    if (head)
        os << head->str();
    else if (choice)
        os << choice->str();
    if (!body.empty() || (!head && !choice)) {
        if (head || choice) os << " ";
        os << ":- ";
        for (std::size_t i = 0; i < body.size(); ++i) {
            if (i) os << ", ";
            os << body[i].str();
        }
    }
    os << ".";
    return os.str();
}

std::string CardConstraint::str() const {
    std::ostringstream os;
    os << ":- not " << lower << " { ";
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (i) os << "; ";
        os << atoms[i].str();
    }
    os << " }";
    if (upper) os << " " << *upper;
    for (const GroundLiteral& l : body) os << ", " << l.str();
    os << ".";
    return os.str();
}

std::set<Atom> GroundProgram::headAtoms() const {
    std::set<Atom> out;
    for (const GroundRule& r : rules) {
        if (r.head) out.insert(*r.head);
        if (r.choice)
            for (const Atom& a : r.choice->elements) out.insert(a);
    }
    return out;
}

std::set<Atom> GroundProgram::allAtoms() const {
    std::set<Atom> out = headAtoms();
    for (const GroundRule& r : rules)
        for (const GroundLiteral& l : r.body) out.insert(l.atom);
    for (const CardConstraint& c : cardConstraints)
        for (const Atom& a : c.atoms) out.insert(a);
    return out;
}

std::string GroundProgram::str() const {
    std::ostringstream os;
    for (const GroundRule& r : rules) os << r.str() << "\n";
    for (const CardConstraint& c : cardConstraints) os << c.str() << "\n";
    return os.str();
}

}  // namespace achieve
