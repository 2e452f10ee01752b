// Rule and instance parsing plus the static checks that make later stages
// total: rule safety, annotation placement, predicate/arity resolution and
// metavariable scoping inside assertions.

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "achieve/parser.hpp"
#include "lexer.hpp"

namespace achieve {

namespace {

using detail::Cursor;
using detail::Tok;
using detail::Token;

CmpOp negateCmp(CmpOp op) {
    switch (op) {
    case CmpOp::Eq: return CmpOp::Ne;
    case CmpOp::Ne: return CmpOp::Eq;
    case CmpOp::Lt: return CmpOp::Ge;
    case CmpOp::Le: return CmpOp::Gt;
    case CmpOp::Gt: return CmpOp::Le;
    case CmpOp::Ge: return CmpOp::Lt;
    }
    return CmpOp::Eq;
}

// Variables a term binds when it sits in a matched argument position: plain
// variables, recursively through tuples. Variables under arithmetic,
// intervals or pools never bind.
void bindingVars(const Term& t, std::set<std::string>& out) {
    if (t.kind() == Term::Kind::Variable) {
        out.insert(t.name());
    } else if (t.kind() == Term::Kind::Tuple) {
        for (const Term& a : t.args()) bindingVars(a, out);
    }
}

void bindingVars(const Atom& a, std::set<std::string>& out) {
    for (const Term& t : a.args()) bindingVars(t, out);
}

bool allVarsIn(const Term& t, const std::set<std::string>& bound, std::string& missing) {
    std::set<std::string> vs;
    t.collectVariables(vs);
    for (const auto& v : vs)
        if (!bound.count(v)) {
            missing = v;
            return false;
        }
    return true;
}

bool allVarsIn(const Atom& a, const std::set<std::string>& bound, std::string& missing) {
    std::set<std::string> vs;
    a.collectVariables(vs);
    for (const auto& v : vs)
        if (!bound.count(v)) {
            missing = v;
            return false;
        }
    return true;
}

class RuleParser {
public:
    explicit RuleParser(Cursor& c) : c_(c) {}

    Rule parseRule(int index) {
        Rule r;
        r.index = index;
        r.span = c_.span();
        std::optional<Comparison> negCmp;
        if (!c_.acceptPunct(":-")) {
            r.head = parseHead(negCmp);
            if (c_.acceptPunct(".")) {
                finish(r, negCmp);
                return r;
            }
            c_.expectPunct(":-", "or '.' after rule head");
        }
        r.body.push_back(parseBodyLiteral());
        while (c_.acceptPunct(",")) r.body.push_back(parseBodyLiteral());
        c_.expectPunct(".", "at end of rule");
        finish(r, negCmp);
        return r;
    }

    Atom parseAtom() {
        if (c_.peek().type != Tok::Ident) c_.fail("expected predicate name");
        std::string pred = c_.next().text;
        if (pred.rfind("__", 0) == 0)
            c_.fail("names starting with '__' are reserved");
        if (pred == "not") c_.fail("'not' cannot be used as a predicate name");
        std::vector<Term> args;
        if (c_.acceptPunct("(")) {
            do {
                args.push_back(parseArgTerm());
            } while (c_.acceptPunct(","));
            c_.expectPunct(")", "after atom arguments");
        }
        return Atom(std::move(pred), std::move(args));
    }

    // Argument-position term: alternatives (";") of optional intervals ("..").
    Term parseArgTerm() {
        std::vector<Term> alts;
        alts.push_back(parseIntervalTerm());
        while (c_.acceptPunct(";")) alts.push_back(parseIntervalTerm());
        if (alts.size() == 1) return std::move(alts[0]);
        return Term::pool(std::move(alts));
    }

    Term parseIntervalTerm() {
        Term lo = parseAdditive();
        if (!c_.acceptPunct("..")) return lo;
        return Term::interval(std::move(lo), parseAdditive());
    }

    Term parseAdditive() {
        Term t = parseMult();
        while (c_.isPunct("+") || c_.isPunct("-")) {
            ArithOp op = c_.next().text == "+" ? ArithOp::Add : ArithOp::Sub;
            t = Term::arith(op, {std::move(t), parseMult()});
        }
        return t;
    }

    bool atTermStart() const {
        const Token& t = c_.peek();
        return t.type == Tok::Int || t.type == Tok::Ident || t.type == Tok::UIdent ||
               c_.isPunct("(") || c_.isPunct("|") || c_.isPunct("-");
    }

private:
    Term parseMult() {
        Term t = parseUnary();
        while (c_.isPunct("*") || c_.isPunct("/")) {
            ArithOp op = c_.next().text == "*" ? ArithOp::Mul : ArithOp::Div;
            t = Term::arith(op, {std::move(t), parseUnary()});
        }
        return t;
    }

    Term parseUnary() {
        if (c_.acceptPunct("-")) {
            Term t = parseUnary();
            if (t.kind() == Term::Kind::Integer) return Term::integer(-t.value());
            return Term::arith(ArithOp::Sub, {Term::integer(0), std::move(t)});
        }
        return parsePrimary();
    }

    Term parsePrimary() {
        const Token& t = c_.peek();
        if (t.type == Tok::Int) return Term::integer(c_.next().ival);
        if (t.type == Tok::Ident) {
            if (c_.isPunct("(", 1))
                c_.fail("function terms are not supported");
            return Term::symbol(c_.next().text);
        }
        if (t.type == Tok::UIdent) {
            std::string name = c_.next().text;
            if (name == "_") return Term::variable("_Anon" + std::to_string(++fresh_));
            if (name.rfind("__", 0) == 0)
                c_.fail("names starting with '__' are reserved");
            return Term::variable(std::move(name));
        }
        if (c_.acceptPunct("(")) {
            std::vector<Term> elems;
            elems.push_back(parseArgTerm());
            while (c_.acceptPunct(",")) elems.push_back(parseArgTerm());
            c_.expectPunct(")", "to close term");
            if (elems.size() == 1) return std::move(elems[0]);
            return Term::tuple(std::move(elems));
        }
        if (c_.acceptPunct("|")) {
            Term inner = parseAdditive();
            c_.expectPunct("|", "to close |...|");
            return Term::arith(ArithOp::Abs, {std::move(inner)});
        }
        c_.fail("expected term");
    }

    Head parseHead(std::optional<Comparison>& negCmp) {
        Head h;
        if (c_.isPunct("{")) return parseChoice(std::nullopt);
        if (c_.peek().type == Tok::Ident && c_.isPunct("(", 1)) {
            h.kind = Head::Kind::Atom;
            h.atom = parseAtom();
            return h;
        }
        Term t = parseAdditive();
        if (c_.isPunct("{")) return parseChoice(std::move(t));
        CmpOp op;
        if (c_.peek().type == Tok::Punct && detail::cmpOpFromText(c_.peek().text, op)) {
            // A comparison head stands for the constraint that its negation
            // cannot hold alongside the body.
            c_.next();
            Term rhs = parseAdditive();
            negCmp = Comparison{std::move(t), negateCmp(op), std::move(rhs)};
            h.kind = Head::Kind::None;
            return h;
        }
        if (t.kind() == Term::Kind::Symbol) {
            h.kind = Head::Kind::Atom;
            h.atom = Atom(t.name(), {});
            return h;
        }
        c_.fail("expected rule head");
    }

    Head parseChoice(std::optional<Term> lower) {
        Head h;
        h.kind = Head::Kind::Choice;
        h.lower = std::move(lower);
        c_.expectPunct("{", "to open choice");
        if (!c_.acceptPunct("}")) {
            do {
                ChoiceElement e;
                e.atom = parseAtom();
                if (c_.acceptPunct(":")) {
                    e.condition.push_back(parseConditionLiteral());
                    while (c_.acceptPunct(",")) e.condition.push_back(parseConditionLiteral());
                }
                h.elements.push_back(std::move(e));
            } while (c_.acceptPunct(";"));
            c_.expectPunct("}", "to close choice");
        }
        if (atTermStart()) h.upper = parseAdditive();
        return h;
    }

    BodyLiteral parseConditionLiteral() {
        if (c_.isIdent("not"))
            c_.fail("choice conditions admit atoms and comparisons only");
        BodyLiteral lit = parseBodyLiteral();
        if (lit.kind == BodyLiteral::Kind::Agg)
            c_.fail("choice conditions admit atoms and comparisons only");
        return lit;
    }

    BodyLiteral parseBodyLiteral() {
        if (c_.acceptIdent("not")) return BodyLiteral::neg(parseAtom());
        if (c_.peek().type == Tok::UIdent && c_.isPunct("=", 1) &&
            c_.peek(2).type == Tok::Punct && c_.peek(2).text[0] == '#')
            return parseAggregate();
        if (c_.peek().type == Tok::Punct && c_.peek().text[0] == '#')
            c_.fail("unexpected directive");
        if (c_.peek().type == Tok::Ident && c_.isPunct("(", 1))
            return BodyLiteral::pos(parseAtom());
        Term lhs = parseIntervalTerm();
        CmpOp op;
        if (c_.peek().type == Tok::Punct && detail::cmpOpFromText(c_.peek().text, op)) {
            c_.next();
            Term rhs = parseIntervalTerm();
            return BodyLiteral::comparison({std::move(lhs), op, std::move(rhs)});
        }
        if (lhs.kind() == Term::Kind::Symbol)
            return BodyLiteral::pos(Atom(lhs.name(), {}));
        c_.fail("expected body literal");
    }

    BodyLiteral parseAggregate() {
        AggregateAssign agg;
        agg.var = c_.next().text;
        c_.next();
        std::string fun = c_.next().text;
        if (fun == "#sum") agg.fun = AggFun::Sum;
        else if (fun == "#max") agg.fun = AggFun::Max;
        else if (fun == "#count") agg.fun = AggFun::Count;
        else c_.fail("unknown aggregate '" + fun + "'");
        c_.expectPunct("{", "to open aggregate");
        if (agg.fun == AggFun::Count) {
            agg.elem = Term::integer(1);
        } else {
            agg.elem = parseAdditive();
            c_.expectPunct(":", "between aggregate term and pattern");
        }
        agg.pattern.push_back(parseAtom());
        while (c_.acceptPunct(",")) agg.pattern.push_back(parseAtom());
        c_.expectPunct("}", "to close aggregate");
        return BodyLiteral::aggregate(std::move(agg));
    }

    void finish(Rule& r, std::optional<Comparison>& negCmp) {
        if (negCmp) {
            r.head.kind = Head::Kind::None;
            r.body.push_back(BodyLiteral::comparison(std::move(*negCmp)));
        }
        checkSafety(r);
    }

    // Every variable in the rule must be bound: by an argument position of a
    // positive body atom, by an "=" comparison whose other side is already
    // evaluable, or by an aggregate assignment. Choice elements may bind
    // their own variables through the element condition; aggregate patterns
    // bind variables local to the aggregate.
    void checkSafety(const Rule& r) const {
        std::set<std::string> bound;
        for (const BodyLiteral& lit : r.body) {
            if (lit.kind == BodyLiteral::Kind::Pos) bindingVars(lit.atom, bound);
            if (lit.kind == BodyLiteral::Kind::Agg) bound.insert(lit.agg.var);
        }
        propagateEq(r.body, bound);

        std::string missing;
        auto unsafe = [&]() -> bool {
            for (const BodyLiteral& lit : r.body) {
                switch (lit.kind) {
                case BodyLiteral::Kind::Pos:
                case BodyLiteral::Kind::Neg:
                    if (!allVarsIn(lit.atom, bound, missing)) return true;
                    break;
                case BodyLiteral::Kind::Cmp:
                    if (!allVarsIn(lit.cmp.lhs, bound, missing) ||
                        !allVarsIn(lit.cmp.rhs, bound, missing))
                        return true;
                    break;
                case BodyLiteral::Kind::Agg: {
                    std::set<std::string> local = bound;
                    for (const Atom& p : lit.agg.pattern) bindingVars(p, local);
                    if (!allVarsIn(lit.agg.elem, local, missing)) return true;
                    // Non-binding positions of the pattern must be evaluable
                    // from the enclosing rule.
                    for (const Atom& p : lit.agg.pattern)
                        for (const Term& a : p.args())
                            if (!checkPatternArg(a, bound, missing)) return true;
                    break;
                }
                }
            }
            if (r.head.kind == Head::Kind::Atom) {
                if (!allVarsIn(r.head.atom, bound, missing)) return true;
            } else if (r.head.kind == Head::Kind::Choice) {
                if (r.head.lower && !allVarsIn(*r.head.lower, bound, missing)) return true;
                if (r.head.upper && !allVarsIn(*r.head.upper, bound, missing)) return true;
                for (const ChoiceElement& e : r.head.elements) {
                    std::set<std::string> local = bound;
                    for (const BodyLiteral& lit : e.condition)
                        if (lit.kind == BodyLiteral::Kind::Pos) bindingVars(lit.atom, local);
                    propagateEq(e.condition, local);
                    if (!allVarsIn(e.atom, local, missing)) return true;
                    for (const BodyLiteral& lit : e.condition) {
                        if (lit.kind == BodyLiteral::Kind::Pos &&
                            !allVarsIn(lit.atom, local, missing))
                            return true;
                        if (lit.kind == BodyLiteral::Kind::Cmp &&
                            (!allVarsIn(lit.cmp.lhs, local, missing) ||
                             !allVarsIn(lit.cmp.rhs, local, missing)))
                            return true;
                    }
                }
            }
            return false;
        };
        if (unsafe())
            throw ParseError("unsafe variable '" + missing + "' in rule: " + r.str(), r.span);
    }

    static void propagateEq(const std::vector<BodyLiteral>& lits, std::set<std::string>& bound) {
        std::string ignore;
        bool changed = true;
        while (changed) {
            changed = false;
            for (const BodyLiteral& lit : lits) {
                if (lit.kind != BodyLiteral::Kind::Cmp || lit.cmp.op != CmpOp::Eq) continue;
                const Term& l = lit.cmp.lhs;
                const Term& r = lit.cmp.rhs;
                if (l.kind() == Term::Kind::Variable && !bound.count(l.name()) &&
                    allVarsIn(r, bound, ignore)) {
                    bound.insert(l.name());
                    changed = true;
                } else if (r.kind() == Term::Kind::Variable && !bound.count(r.name()) &&
                           allVarsIn(l, bound, ignore)) {
                    bound.insert(r.name());
                    changed = true;
                }
            }
        }
    }

    static bool checkPatternArg(const Term& t, const std::set<std::string>& bound,
                                std::string& missing) {
        switch (t.kind()) {
        case Term::Kind::Variable:
        case Term::Kind::Integer:
        case Term::Kind::Symbol:
            return true;
        case Term::Kind::Tuple: {
            for (const Term& a : t.args())
                if (!checkPatternArg(a, bound, missing)) return false;
            return true;
        }
        default:
            return allVarsIn(t, bound, missing);
        }
    }

    Cursor& c_;
    int fresh_ = 0;
};

// ---------------------------------------------------------------------------
// Assertion validation against a program's predicate signatures.

class AsnValidator {
public:
    AsnValidator(const std::set<Sig>& sigs, const SourceSpan& span)
        : sigs_(sigs), span_(span) {}

    void formula(const AFormula& f, const std::set<std::string>& env) {
        switch (f.kind) {
        case AFormula::Kind::True:
        case AFormula::Kind::False:
            break;
        case AFormula::Kind::And:
        case AFormula::Kind::Or:
        case AFormula::Kind::Not:
            for (const AFormula& k : f.kids) formula(k, env);
            break;
        case AFormula::Kind::Quant: {
            if (f.domain) expr(*f.domain, env, false);
            std::set<std::string> env2 = env;
            env2.insert(f.vars.begin(), f.vars.end());
            formula(f.kids[0], env2);
            break;
        }
        case AFormula::Kind::Cmp:
        case AFormula::Kind::Member:
            expr(f.exprs[0], env, false);
            expr(f.exprs[1], env, false);
            break;
        case AFormula::Kind::AtomRef:
            requireSig(f.pred, static_cast<int>(f.exprs.size()));
            for (const AExpr& a : f.exprs) expr(a, env, false);
            break;
        }
    }

    void expr(const AExpr& e, const std::set<std::string>& env, bool inPattern) {
        switch (e.kind) {
        case AExpr::Kind::Int:
        case AExpr::Kind::Const:
            break;
        case AExpr::Kind::Var:
            if (e.name == "_") {
                if (!inPattern)
                    fail("'_' is only allowed in aggregate patterns");
            } else if (!env.count(e.name) && !inPattern) {
                fail("unbound metavariable '" + e.name + "'");
            }
            break;
        case AExpr::Kind::Tuple:
            for (const AExpr& k : e.kids) expr(k, env, inPattern);
            break;
        case AExpr::Kind::Arith:
            // Binders never sit under arithmetic.
            for (const AExpr& k : e.kids) expr(k, env, false);
            break;
        case AExpr::Kind::Card:
        case AExpr::Kind::Range:
        case AExpr::Kind::FiniteSet:
            for (const AExpr& k : e.kids) expr(k, env, false);
            break;
        case AExpr::Kind::Agg: {
            requireSig(e.name, e.arity);
            std::set<std::string> env2 = env;
            for (const AExpr& p : e.pattern) {
                expr(p, env, true);
                collectExprVars(p, env2);
            }
            if (!e.kids.empty()) expr(e.kids[0], env2, false);
            break;
        }
        case AExpr::Kind::Comprehension: {
            std::set<std::string> env2 = env;
            collectExprVars(e.kids[0], env2);
            collectLocalVars(*e.body, env2);
            expr(e.kids[0], env2, false);
            formula(*e.body, env2);
            break;
        }
        case AExpr::Kind::Closure:
        case AExpr::Kind::Extension:
            requireSig(e.name, e.arity);
            break;
        }
    }

private:
    void requireSig(const std::string& name, int arity) {
        if (!sigs_.count(Sig{name, arity}))
            fail("unknown predicate " + name + "/" + std::to_string(arity));
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError(msg, span_);
    }

    const std::set<Sig>& sigs_;
    const SourceSpan& span_;
};

// ---------------------------------------------------------------------------
// Annotation payloads.

struct AnnBlock {
    enum class Kind { Input, Achieved, Reconstructed } kind;
    std::string payload;  // text after the keyword, trailing '.' included
    SourceSpan span;
};

AnnBlock classifyAnnotation(const std::string& text, const SourceSpan& span) {
    auto strip = [](std::string s) {
        std::size_t a = s.find_first_not_of(" \t");
        return a == std::string::npos ? std::string() : s.substr(a);
    };
    if (text.rfind("input:", 0) == 0)
        return {AnnBlock::Kind::Input, strip(text.substr(6)), span};
    if (text.rfind("achieved:", 0) == 0)
        return {AnnBlock::Kind::Achieved, strip(text.substr(9)), span};
    std::string t = text;
    if (!t.empty() && t.back() == '.') t.pop_back();
    while (!t.empty() && (t.back() == ' ' || t.back() == '\t')) t.pop_back();
    if (t == "reconstructed") return {AnnBlock::Kind::Reconstructed, "", span};
    throw ParseError("unknown annotation '%@ " + text + "'", span);
}

bool payloadComplete(const std::string& s) {
    for (auto it = s.rbegin(); it != s.rend(); ++it) {
        if (*it == ' ' || *it == '\t') continue;
        return *it == '.';
    }
    return false;
}

std::string stripDot(std::string s) {
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
    return s;
}

Assertion parsePayloadAssertion(const std::string& payload, const SourceSpan& span) {
    Cursor c(detail::lex(payload, span.file), span.file);
    Assertion a = detail::parseAssertionTokens(c);
    c.acceptPunct(".");
    if (!c.atEnd())
        throw ParseError("trailing input after assertion: '" + payload + "'", span);
    return a;
}

void parseInputDecl(InputSpec& spec, const std::string& payload, const SourceSpan& span) {
    Cursor c(detail::lex(payload, span.file), span.file);
    if (c.acceptIdent("const")) {
        if (c.peek().type != Tok::Ident)
            throw ParseError("expected placeholder name after 'const'", span);
        InputSpec::Placeholder p;
        p.name = c.next().text;
        if (spec.isPlaceholder(p.name))
            throw ParseError("duplicate placeholder '" + p.name + "'", span);
        if (c.acceptPunct(":")) {
            p.condition = detail::parseAssertionTokens(c);
            p.conditionText = p.condition->str();
        }
        c.acceptPunct(".");
        if (!c.atEnd())
            throw ParseError("trailing input in declaration: '" + payload + "'", span);
        spec.placeholders.push_back(std::move(p));
        return;
    }
    if (c.peek().type != Tok::Ident)
        throw ParseError("expected 'p/k' or 'const name' in input declaration", span);
    std::string name = c.next().text;
    if (!c.acceptPunct("/") || c.peek().type != Tok::Int)
        throw ParseError("expected 'p/k' or 'const name' in input declaration", span);
    int arity = static_cast<int>(c.next().ival);
    c.acceptPunct(".");
    if (!c.atEnd())
        throw ParseError("trailing input in declaration: '" + payload + "'", span);
    spec.predicates.insert(Sig{std::move(name), arity});
}

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string stemOf(const std::string& path) {
    std::size_t slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    std::size_t dot = base.find_last_of('.');
    return dot == std::string::npos || dot == 0 ? base : base.substr(0, dot);
}

} // namespace

Program parseProgram(const std::string& text, const std::string& name) {
    Cursor c(detail::lex(text, name), name);
    RuleParser rp(c);
    Program p;
    p.name = name;

    bool reconstructedPending = false;
    SourceSpan reconstructedSpan;
    while (!c.atEnd()) {
        if (c.peek().type == Tok::Annotation) {
            SourceSpan span = c.span();
            AnnBlock block = classifyAnnotation(c.next().text, span);
            if (block.kind == AnnBlock::Kind::Reconstructed) {
                reconstructedPending = true;
                reconstructedSpan = span;
                continue;
            }
            while (!payloadComplete(block.payload)) {
                if (c.peek().type != Tok::Annotation)
                    throw ParseError("annotation does not end with '.'", span);
                const std::string& cont = c.peek().text;
                if (cont.rfind("input:", 0) == 0 || cont.rfind("achieved:", 0) == 0)
                    throw ParseError("annotation does not end with '.'", span);
                block.payload += " " + c.next().text;
            }
            if (block.kind == AnnBlock::Kind::Input) {
                if (!p.rules.empty())
                    throw ParseError("input declarations must precede all rules", span);
                if (reconstructedPending)
                    throw ParseError("'%@ reconstructed' must precede an achieved annotation",
                                     reconstructedSpan);
                parseInputDecl(p.input, block.payload, span);
            } else {
                if (p.rules.empty())
                    throw ParseError("achieved annotation before any rule", span);
                int idx = static_cast<int>(p.rules.size());
                RecordEntry entry;
                entry.assertion = parsePayloadAssertion(block.payload, span);
                entry.text = stripDot(block.payload);
                entry.reconstructed = reconstructedPending;
                entry.span = span;
                reconstructedPending = false;
                if (const RecordEntry* old = p.record.find(idx)) {
                    RecordEntry merged;
                    merged.assertion =
                        AFormula::conj({old->assertion, std::move(entry.assertion)});
                    merged.text = "(" + old->text + ") and (" + entry.text + ")";
                    merged.reconstructed = old->reconstructed || entry.reconstructed;
                    merged.span = old->span;
                    p.record.set(idx, std::move(merged));
                } else {
                    p.record.set(idx, std::move(entry));
                }
            }
            continue;
        }
        if (c.peek().type == Tok::Punct && c.peek().text == "#const")
            c.fail("#const belongs in instance files; declare '%@ input: const name'");
        p.rules.push_back(rp.parseRule(static_cast<int>(p.rules.size()) + 1));
    }
    if (reconstructedPending)
        throw ParseError("'%@ reconstructed' must precede an achieved annotation",
                         reconstructedSpan);

    std::set<Sig> sigs = preds(PrefixView(p, p.size()));
    for (const auto& [idx, entry] : p.record.entries()) {
        AsnValidator v(sigs, entry.span);
        v.formula(entry.assertion, {});
    }
    for (const auto& ph : p.input.placeholders) {
        if (!ph.condition) continue;
        SourceSpan span{name, 0, 0};
        AsnValidator v(sigs, span);
        v.formula(*ph.condition, {});
    }
    return p;
}

Program parseProgramFile(const std::string& path) {
    Program p = parseProgram(readFile(path), path);
    p.name = stemOf(path);
    return p;
}

InputInstance parseInstance(const std::string& text, const InputSpec& spec,
                            const std::string& name) {
    Cursor c(detail::lex(text, name), name);
    RuleParser rp(c);
    InputInstance inst;
    inst.name = name;
    std::vector<Atom> facts;
    while (!c.atEnd()) {
        if (c.peek().type == Tok::Annotation)
            throw ParseError("annotations are not allowed in instance files", c.span());
        if (c.isPunct("#const")) {
            SourceSpan span = c.span();
            c.next();
            if (c.peek().type != Tok::Ident)
                throw ParseError("expected placeholder name after #const", span);
            std::string pname = c.next().text;
            c.expectPunct("=", "in #const binding");
            Term t = rp.parseArgTerm();
            c.expectPunct(".", "after #const binding");
            if (t.hasVariables())
                throw InputError(name + ": #const " + pname + " must be ground");
            if (!spec.isPlaceholder(pname))
                throw InputError(name + ": unknown placeholder '" + pname + "'");
            if (inst.bindings.count(pname))
                throw InputError(name + ": duplicate #const binding for '" + pname + "'");
            std::vector<Term> vals;
            expandGroundTerm(t, vals);
            if (vals.size() != 1)
                throw InputError(name + ": #const " + pname + " must be a single value");
            inst.bindings.emplace(pname, std::move(vals[0]));
            continue;
        }
        SourceSpan span = c.span();
        Atom a = rp.parseAtom();
        c.expectPunct(".", "after fact");
        if (a.hasVariables())
            throw InputError(name + ": instance facts must be ground: " + a.str());
        if (!spec.isInput(a.sig()))
            throw InputError(name + ": fact over undeclared input predicate " +
                             a.sig().str() + " (line " + std::to_string(span.line) + ")");
        std::vector<std::vector<Term>> cols;
        bool emptyCol = false;
        for (const Term& arg : a.args()) {
            cols.emplace_back();
            expandGroundTerm(arg, cols.back());
            emptyCol = emptyCol || cols.back().empty();
        }
        if (emptyCol) continue;  // an empty interval yields no facts
        std::vector<std::size_t> pick(cols.size(), 0);
        while (true) {
            std::vector<Term> args;
            args.reserve(cols.size());
            for (std::size_t i = 0; i < cols.size(); ++i) args.push_back(cols[i][pick[i]]);
            facts.emplace_back(a.pred(), std::move(args));
            std::size_t i = cols.size();
            while (i > 0 && ++pick[i - 1] == cols[i - 1].size()) pick[--i] = 0;
            if (i == 0) break;
        }
    }
    for (const auto& ph : spec.placeholders)
        if (!inst.bindings.count(ph.name))
            throw InputError(name + ": missing #const binding for placeholder '" +
                             ph.name + "'");
    std::sort(facts.begin(), facts.end());
    facts.erase(std::unique(facts.begin(), facts.end()), facts.end());
    inst.facts = std::move(facts);
    return inst;
}

InputInstance parseInstanceFile(const std::string& path, const InputSpec& spec) {
    InputInstance inst = parseInstance(readFile(path), spec, path);
    inst.name = stemOf(path);
    return inst;
}

} // namespace achieve
