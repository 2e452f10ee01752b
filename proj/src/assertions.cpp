#include "achieve/assertions.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <string>

#include "achieve/error.hpp"

namespace achieve {

namespace {

using Env = std::map<std::string, Term>;

// Free metavariables of an expression or formula, given the names already
// bound. Comprehensions and aggregates bind their own variables per the same
// rules the parser's validator applies, so a subexpression that can solve
// for a name does not propagate it as a requirement.

void freeVarsF(const AFormula& f, const std::set<std::string>& bound,
               std::set<std::string>& out);

void freeVarsE(const AExpr& e, const std::set<std::string>& bound,
               std::set<std::string>& out) {
    switch (e.kind) {
    case AExpr::Kind::Var:
        if (e.name != "_" && !bound.count(e.name)) out.insert(e.name);
        return;
    case AExpr::Kind::Comprehension: {
        std::set<std::string> b = bound;
        collectExprVars(e.kids[0], b);
        collectLocalVars(*e.body, b);
        freeVarsF(*e.body, b, out);
        return;
    }
    case AExpr::Kind::Agg: {
        std::set<std::string> b = bound;
        for (const AExpr& p : e.pattern) collectExprVars(p, b);
        for (const AExpr& k : e.kids) freeVarsE(k, b, out);
        return;
    }
    default:
        for (const AExpr& k : e.kids) freeVarsE(k, bound, out);
        return;
    }
}

void freeVarsF(const AFormula& f, const std::set<std::string>& bound,
               std::set<std::string>& out) {
    if (f.kind == AFormula::Kind::Quant) {
        if (f.domain) freeVarsE(*f.domain, bound, out);
        std::set<std::string> b = bound;
        b.insert(f.vars.begin(), f.vars.end());
        freeVarsF(f.kids[0], b, out);
        return;
    }
    for (const AFormula& k : f.kids) freeVarsF(k, bound, out);
    for (const AExpr& e : f.exprs) freeVarsE(e, bound, out);
}

std::set<std::string> keysOf(const Env& env) {
    std::set<std::string> out;
    for (const auto& [k, v] : env) out.insert(k);
    return out;
}

bool setCmp(CmpOp op, const TermSet& a, const TermSet& b) {
    auto subset = [](const TermSet& x, const TermSet& y) {
        return std::includes(y.begin(), y.end(), x.begin(), x.end());
    };
    switch (op) {
    case CmpOp::Eq: return a == b;
    case CmpOp::Ne: return a != b;
    case CmpOp::Le: return subset(a, b);
    case CmpOp::Lt: return a != b && subset(a, b);
    case CmpOp::Ge: return subset(b, a);
    case CmpOp::Gt: return a != b && subset(b, a);
    }
    return false;
}

class Evaluator {
public:
    explicit Evaluator(const EvalContext& ctx) : ctx_(ctx) {}

    bool formula(const AFormula& f, const Env& env) const {
        switch (f.kind) {
        case AFormula::Kind::True:
            return true;
        case AFormula::Kind::False:
            return false;
        case AFormula::Kind::And:
            for (const AFormula& k : f.kids)
                if (!formula(k, env)) return false;
            return true;
        case AFormula::Kind::Or:
            for (const AFormula& k : f.kids)
                if (formula(k, env)) return true;
            return false;
        case AFormula::Kind::Not:
            return !formula(f.kids[0], env);
        case AFormula::Kind::Cmp: {
            Value lhs = expr(f.exprs[0], env);
            Value rhs = expr(f.exprs[1], env);
            if (lhs.index() != rhs.index())
                throw EvalError("cannot compare a term with a set: " + f.str());
            if (auto* l = std::get_if<Term>(&lhs))
                return evalCmp(f.cmp, l->compare(std::get<Term>(rhs)));
            return setCmp(f.cmp, std::get<TermSet>(lhs), std::get<TermSet>(rhs));
        }
        case AFormula::Kind::AtomRef: {
            // Matched rather than evaluated so wildcard arguments act as
            // "some atom fits", e.g. not e(X,_).
            bool found = false;
            forAtoms(f.pred, static_cast<int>(f.exprs.size()), [&](const Atom& a) {
                if (found) return;
                Env local = env;
                found = matchPattern(f.exprs, a.args(), local);
            });
            return found;
        }
        case AFormula::Kind::Member: {
            Term el = scalar(f.exprs[0], env, "membership candidate");
            Value set = expr(f.exprs[1], env);
            auto* s = std::get_if<TermSet>(&set);
            if (!s)
                throw EvalError("membership needs a set on the right: " + f.exprs[1].str());
            return s->count(el) != 0;
        }
        case AFormula::Kind::Quant:
            return quant(f, env);
        }
        throw EvalError("bad formula kind");
    }

    Value expr(const AExpr& e, const Env& env) const {
        switch (e.kind) {
        case AExpr::Kind::Int:
            return Term::integer(e.intVal);
        case AExpr::Kind::Const: {
            if (ctx_.spec && ctx_.spec->isPlaceholder(e.name)) {
                const Term* b = ctx_.instance ? ctx_.instance->binding(e.name) : nullptr;
                if (!b) throw EvalError("placeholder '" + e.name + "' is unbound");
                return *b;
            }
            return Term::symbol(e.name);
        }
        case AExpr::Kind::Var: {
            if (e.name == "_") throw EvalError("wildcard outside a pattern");
            auto it = env.find(e.name);
            if (it == env.end())
                throw EvalError("unbound metavariable '" + e.name + "'");
            return it->second;
        }
        case AExpr::Kind::Tuple: {
            std::vector<Term> elems;
            elems.reserve(e.kids.size());
            for (const AExpr& k : e.kids) elems.push_back(scalar(k, env, "tuple component"));
            return Term::tuple(std::move(elems));
        }
        case AExpr::Kind::Arith:
            return arith(e, env);
        case AExpr::Kind::Card: {
            Value v = expr(e.kids[0], env);
            if (auto* s = std::get_if<TermSet>(&v))
                return Term::integer(static_cast<std::int64_t>(s->size()));
            const Term& t = std::get<Term>(v);
            if (t.kind() != Term::Kind::Integer)
                throw EvalError("|.| needs a set or an integer: " + t.str());
            if (t.value() == INT64_MIN) throw EvalError("integer overflow in |.|");
            return Term::integer(t.value() < 0 ? -t.value() : t.value());
        }
        case AExpr::Kind::Agg:
            return aggregate(e, env);
        case AExpr::Kind::Range: {
            std::int64_t lo = intOf(e.kids[0], env, "range bound");
            std::int64_t hi = intOf(e.kids[1], env, "range bound");
            TermSet out;
            if (lo <= hi) {
                if (hi - lo >= 1'000'000) throw EvalError("range too large in assertion");
                for (std::int64_t v = lo; v <= hi; ++v) out.insert(Term::integer(v));
            }
            return out;
        }
        case AExpr::Kind::FiniteSet: {
            TermSet out;
            for (const AExpr& k : e.kids) out.insert(scalar(k, env, "set element"));
            return out;
        }
        case AExpr::Kind::Comprehension:
            return comprehension(e, env);
        case AExpr::Kind::Closure:
            return transitiveClosure(extension(e.name, 2));
        case AExpr::Kind::Extension:
            return extension(e.name, e.arity);
        }
        throw EvalError("bad expression kind");
    }

    TermSet extension(const std::string& pred, int arity) const {
        TermSet out;
        forAtoms(pred, arity, [&](const Atom& a) {
            out.insert(arity == 1 ? a.args()[0] : Term::tuple(a.args()));
        });
        return out;
    }

private:
    bool isInputPred(const Sig& s) const { return ctx_.spec && ctx_.spec->isInput(s); }

    template <class F>
    void forAtoms(const std::string& pred, int arity, F&& fn) const {
        if (isInputPred(Sig{pred, arity})) {
            if (!ctx_.instance) return;
            for (const Atom& a : ctx_.instance->facts)
                if (a.arity() == arity && a.pred() == pred) fn(a);
            return;
        }
        if (!ctx_.model) return;
        for (const Atom& a : *ctx_.model)
            if (a.arity() == arity && a.pred() == pred) fn(a);
    }

    Term scalar(const AExpr& e, const Env& env, const char* what) const {
        Value v = expr(e, env);
        if (auto* t = std::get_if<Term>(&v)) return *t;
        throw EvalError(std::string(what) + " must denote a single term: " + e.str());
    }

    std::int64_t intOf(const AExpr& e, const Env& env, const char* what) const {
        Term t = scalar(e, env, what);
        if (t.kind() != Term::Kind::Integer)
            throw EvalError(std::string(what) + " must be an integer: " + t.str());
        return t.value();
    }

    Value arith(const AExpr& e, const Env& env) const {
        try {
            if (e.op == ArithOp::Abs) {
                std::int64_t v = intOf(e.kids[0], env, "operand of |.|");
                if (v == INT64_MIN) throw EvalError("integer overflow in |.|");
                return Term::integer(v < 0 ? -v : v);
            }
            std::int64_t a = intOf(e.kids[0], env, "arithmetic operand");
            std::int64_t b = intOf(e.kids[1], env, "arithmetic operand");
            switch (e.op) {
            case ArithOp::Add: return Term::integer(checkedAdd(a, b));
            case ArithOp::Sub: return Term::integer(checkedSub(a, b));
            case ArithOp::Mul: return Term::integer(checkedMul(a, b));
            case ArithOp::Div:
                if (b == 0) throw EvalError("division by zero in assertion");
                if (a == INT64_MIN && b == -1)
                    throw EvalError("integer overflow in division");
                return Term::integer(a / b);
            case ArithOp::Abs: break;
            }
        } catch (const GroundingError& g) {
            throw EvalError(g.what());
        }
        throw EvalError("bad arithmetic operator");
    }

    // One fold per distinct source atom that matches the pattern; pattern
    // variables not already bound are local to the aggregate.
    Value aggregate(const AExpr& e, const Env& env) const {
        std::int64_t matches = 0;
        std::vector<std::int64_t> picked;
        forAtoms(e.name, e.arity, [&](const Atom& a) {
            Env local = env;
            if (!matchPattern(e.pattern, a.args(), local)) return;
            ++matches;
            if (e.agg == AggFun::Count) return;
            Term t = scalar(e.kids[0], local, "aggregate element");
            if (t.kind() != Term::Kind::Integer)
                throw EvalError("aggregate over non-integer value " + t.str());
            picked.push_back(t.value());
        });
        switch (e.agg) {
        case AggFun::Count:
            return Term::integer(matches);
        case AggFun::Sum: {
            std::int64_t s = 0;
            try {
                for (std::int64_t v : picked) s = checkedAdd(s, v);
            } catch (const GroundingError& g) {
                throw EvalError(g.what());
            }
            return Term::integer(s);
        }
        case AggFun::Max:
            if (picked.empty()) throw EvalError("max over an empty selection");
            return Term::integer(*std::max_element(picked.begin(), picked.end()));
        }
        throw EvalError("bad aggregate function");
    }

    bool matchTermPattern(const AExpr& p, const Term& v, Env& env) const {
        if (p.kind == AExpr::Kind::Var) {
            if (p.name == "_") return true;
            auto it = env.find(p.name);
            if (it != env.end()) return it->second == v;
            env.emplace(p.name, v);
            return true;
        }
        if (p.kind == AExpr::Kind::Tuple) {
            if (v.kind() != Term::Kind::Tuple || v.args().size() != p.kids.size()) return false;
            for (std::size_t i = 0; i < p.kids.size(); ++i)
                if (!matchTermPattern(p.kids[i], v.args()[i], env)) return false;
            return true;
        }
        Value val = expr(p, env);
        const Term* t = std::get_if<Term>(&val);
        if (!t) throw EvalError("set expression in a pattern position: " + p.str());
        return *t == v;
    }

    bool matchPattern(const std::vector<AExpr>& pat, const std::vector<Term>& args,
                      Env& env) const {
        if (pat.size() != args.size()) return false;
        for (std::size_t i = 0; i < pat.size(); ++i)
            if (!matchTermPattern(pat[i], args[i], env)) return false;
        return true;
    }

    bool quant(const AFormula& f, const Env& env) const {
        std::int64_t hits = 0;
        bool all = true;
        // Returns true when the outcome is already decided.
        auto consider = [&](const Env& bound) {
            if (formula(f.kids[0], bound))
                ++hits;
            else
                all = false;
            switch (f.q) {
            case AFormula::QKind::Forall: return !all;
            case AFormula::QKind::Exists: return hits > 0;
            case AFormula::QKind::ExistsUnique: return hits > 1;
            }
            return false;
        };

        if (f.domain) {
            Value v = expr(*f.domain, env);
            auto* s = std::get_if<TermSet>(&v);
            if (!s)
                throw EvalError("quantifier domain must be a set: " + f.domain->str());
            for (const Term& el : *s) {
                Env local = env;
                if (f.vars.size() == 1) {
                    local[f.vars[0]] = el;
                } else {
                    if (el.kind() != Term::Kind::Tuple ||
                        el.args().size() != f.vars.size())
                        throw EvalError("cannot destructure " + el.str() + " into " +
                                        std::to_string(f.vars.size()) + " variables");
                    for (std::size_t i = 0; i < f.vars.size(); ++i)
                        local[f.vars[i]] = el.args()[i];
                }
                if (consider(local)) break;
            }
        } else {
            if (!ctx_.universe)
                throw EvalError("no term universe for quantifier: " + f.str());
            bool done = false;
            std::function<void(std::size_t, const Env&)> rec = [&](std::size_t idx,
                                                                   const Env& cur) {
                if (done) return;
                if (idx == f.vars.size()) {
                    done = consider(cur);
                    return;
                }
                for (const Term& u : *ctx_.universe) {
                    Env next = cur;
                    next[f.vars[idx]] = u;
                    rec(idx + 1, next);
                    if (done) return;
                }
            };
            rec(0, env);
        }

        switch (f.q) {
        case AFormula::QKind::Forall: return all;
        case AFormula::QKind::Exists: return hits > 0;
        case AFormula::QKind::ExistsUnique: return hits == 1;
        }
        return false;
    }

    // ------------------------------------------------------------------
    // Comprehension solving: conjuncts are consumed in written order, each
    // by the first applicable move. Closed conjuncts filter; atom and
    // membership conjuncts enumerate and bind; an equality with one bare
    // unbound side pins it. Anything else is an orientation error.

    bool exprClosed(const AExpr& e, const Env& env) const {
        std::set<std::string> free;
        freeVarsE(e, keysOf(env), free);
        return free.empty();
    }

    bool formulaClosed(const AFormula& f, const Env& env) const {
        std::set<std::string> free;
        freeVarsF(f, keysOf(env), free);
        return free.empty();
    }

    bool patternReady(const AExpr& p, const Env& env) const {
        if (p.kind == AExpr::Kind::Var) return true;
        if (p.kind == AExpr::Kind::Tuple) {
            for (const AExpr& k : p.kids)
                if (!patternReady(k, env)) return false;
            return true;
        }
        return exprClosed(p, env);
    }

    TermSet comprehension(const AExpr& e, const Env& env) const {
        std::vector<const AFormula*> conjuncts;
        std::function<void(const AFormula&)> flatten = [&](const AFormula& f) {
            if (f.kind == AFormula::Kind::And) {
                for (const AFormula& k : f.kids) flatten(k);
            } else if (f.kind != AFormula::Kind::True) {
                conjuncts.push_back(&f);
            }
        };
        flatten(*e.body);
        TermSet out;
        solve(conjuncts, env, e.kids[0], out);
        return out;
    }

    void solve(const std::vector<const AFormula*>& pending, const Env& env,
               const AExpr& head, TermSet& out) const {
        for (std::size_t i = 0; i < pending.size(); ++i) {
            const AFormula& f = *pending[i];
            std::vector<const AFormula*> rest;
            rest.reserve(pending.size() - 1);
            for (std::size_t j = 0; j < pending.size(); ++j)
                if (j != i) rest.push_back(pending[j]);

            if (formulaClosed(f, env)) {
                if (formula(f, env)) solve(rest, env, head, out);
                return;
            }
            if (f.kind == AFormula::Kind::AtomRef) {
                bool ready = true;
                for (const AExpr& a : f.exprs)
                    if (!patternReady(a, env)) ready = false;
                if (!ready) continue;
                forAtoms(f.pred, static_cast<int>(f.exprs.size()), [&](const Atom& a) {
                    Env local = env;
                    if (matchPattern(f.exprs, a.args(), local)) solve(rest, local, head, out);
                });
                return;
            }
            if (f.kind == AFormula::Kind::Member && exprClosed(f.exprs[1], env) &&
                patternReady(f.exprs[0], env)) {
                Value v = expr(f.exprs[1], env);
                auto* s = std::get_if<TermSet>(&v);
                if (!s)
                    throw EvalError("membership needs a set on the right: " +
                                    f.exprs[1].str());
                for (const Term& el : *s) {
                    Env local = env;
                    if (matchTermPattern(f.exprs[0], el, local)) solve(rest, local, head, out);
                }
                return;
            }
            if (f.kind == AFormula::Kind::Cmp && f.cmp == CmpOp::Eq) {
                auto bindable = [&](const AExpr& side) {
                    return side.kind == AExpr::Kind::Var && side.name != "_" &&
                           !env.count(side.name);
                };
                const AExpr* var = nullptr;
                const AExpr* val = nullptr;
                if (bindable(f.exprs[0]) && exprClosed(f.exprs[1], env)) {
                    var = &f.exprs[0];
                    val = &f.exprs[1];
                } else if (bindable(f.exprs[1]) && exprClosed(f.exprs[0], env)) {
                    var = &f.exprs[1];
                    val = &f.exprs[0];
                }
                if (var) {
                    Env local = env;
                    local.emplace(var->name, scalar(*val, env, "pinned value"));
                    solve(rest, local, head, out);
                    return;
                }
            }
        }
        if (!pending.empty())
            throw EvalError("cannot solve comprehension conjunct: " +
                            pending.front()->str());
        out.insert(scalar(head, env, "comprehension element"));
    }

    const EvalContext& ctx_;
};

}  // namespace

bool evalAssertion(const Assertion& a, const EvalContext& ctx) {
    return Evaluator(ctx).formula(a, {});
}

Value evalAssertionExpr(const AExpr& e, const EvalContext& ctx) {
    return Evaluator(ctx).expr(e, {});
}

bool evalAssertionWith(const AFormula& f, const std::vector<std::string>& vars,
                       const std::vector<Term>& values, const EvalContext& ctx) {
    if (vars.size() != values.size())
        throw EvalError("binding arity mismatch in assertion evaluation");
    Env env;
    for (std::size_t i = 0; i < vars.size(); ++i) env[vars[i]] = values[i];
    return Evaluator(ctx).formula(f, env);
}

TermSet transitiveClosure(const TermSet& pairs) {
    std::map<Term, std::set<Term>> succ;
    for (const Term& p : pairs) {
        if (p.kind() != Term::Kind::Tuple || p.args().size() != 2)
            throw EvalError("closure needs a binary relation, got " + p.str());
        succ[p.args()[0]].insert(p.args()[1]);
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& [from, tos] : succ) {
            std::set<Term> add;
            for (const Term& mid : tos) {
                auto it = succ.find(mid);
                if (it == succ.end()) continue;
                for (const Term& to : it->second)
                    if (!tos.count(to)) add.insert(to);
            }
            if (!add.empty()) {
                tos.insert(add.begin(), add.end());
                changed = true;
            }
        }
    }
    TermSet out;
    for (const auto& [from, tos] : succ)
        for (const Term& to : tos) out.insert(Term::tuple({from, to}));
    return out;
}

std::vector<std::string> validateInput(const InputInstance& instance, const InputSpec& spec) {
    std::vector<std::string> out;
    for (const Atom& f : instance.facts) {
        if (!spec.isInput(f.sig()))
            out.push_back("fact " + f.str() + " uses undeclared input predicate " +
                          f.sig().str());
        for (const Term& t : f.args())
            if (!t.precomputed()) {
                out.push_back("fact " + f.str() + " is not ground");
                break;
            }
    }
    for (const auto& [name, term] : instance.bindings)
        if (!spec.isPlaceholder(name))
            out.push_back("binding '" + name + "' is not a declared placeholder");

    std::vector<Term> universe;
    for (const Atom& f : instance.facts)
        for (const Term& t : f.args()) universe.push_back(t);
    for (const auto& [name, term] : instance.bindings) universe.push_back(term);
    std::sort(universe.begin(), universe.end());
    universe.erase(std::unique(universe.begin(), universe.end()), universe.end());

    for (const auto& ph : spec.placeholders) {
        const Term* b = instance.binding(ph.name);
        if (!b) {
            out.push_back("placeholder '" + ph.name + "' is unbound");
            continue;
        }
        if (!ph.condition) continue;
        EvalContext ctx{&instance, nullptr, &universe, &spec};
        try {
            if (!evalAssertion(*ph.condition, ctx))
                out.push_back(ph.conditionText + " fails");
        } catch (const Error& e) {
            out.push_back(ph.conditionText + ": " + e.what());
        }
    }
    return out;
}

}  // namespace achieve
