// Recursive-descent parser for the assertion language used in %@ achieved
// annotations and placeholder conditions.
//
// Precedence, loosest first: or, and, not/quantifier, comparison/membership.
// Expressions are integer arithmetic over terms plus set forms: {lo..hi},
// {e1,...,ek}, { e : condition }, p/k, closure(p/2), |S|, sum/max/count{...}.
//
// "name/INT" in an expression always denotes the extension of a predicate,
// never division; divide a constant by an integer as "(c)/k" if ever needed.

#include <memory>
#include <string>
#include <vector>

#include "achieve/assertion.hpp"
#include "achieve/error.hpp"
#include "lexer.hpp"

namespace achieve::detail {

namespace {

class AsnParser {
public:
    explicit AsnParser(Cursor& c) : c_(c) {}

    AFormula orF() {
        AFormula f = andF();
        if (!c_.isIdent("or")) return f;
        AFormula out;
        out.kind = AFormula::Kind::Or;
        out.kids.push_back(std::move(f));
        while (c_.acceptIdent("or")) out.kids.push_back(andF());
        return out;
    }

private:
    AFormula andF() {
        AFormula f = unaryF();
        if (!c_.isIdent("and")) return f;
        AFormula out;
        out.kind = AFormula::Kind::And;
        out.kids.push_back(std::move(f));
        while (c_.acceptIdent("and")) out.kids.push_back(unaryF());
        return out;
    }

    AFormula unaryF() {
        if (c_.acceptIdent("not")) {
            AFormula out;
            out.kind = AFormula::Kind::Not;
            out.kids.push_back(unaryF());
            return out;
        }
        if (c_.isIdent("forall") || c_.isIdent("exists")) return quant();
        return primF();
    }

    AFormula quant() {
        AFormula out;
        out.kind = AFormula::Kind::Quant;
        if (c_.acceptIdent("forall")) {
            out.q = AFormula::QKind::Forall;
        } else {
            c_.next();
            out.q = c_.acceptPunct("!") ? AFormula::QKind::ExistsUnique
                                        : AFormula::QKind::Exists;
        }
        if (c_.acceptPunct("(")) {
            do {
                out.vars.push_back(quantVar());
            } while (c_.acceptPunct(","));
            c_.expectPunct(")", "after quantified variables");
        } else {
            out.vars.push_back(quantVar());
        }
        if (c_.acceptIdent("in")) out.domain = expr();
        c_.expectPunct(":", "before quantifier body");
        out.kids.push_back(orF());
        return out;
    }

    std::string quantVar() {
        if (c_.peek().type != Tok::UIdent || c_.peek().text == "_")
            c_.fail("expected quantified variable");
        return c_.next().text;
    }

    AFormula primF() {
        if (c_.acceptIdent("true")) {
            AFormula f;
            f.kind = AFormula::Kind::True;
            return f;
        }
        if (c_.acceptIdent("false")) {
            AFormula f;
            f.kind = AFormula::Kind::False;
            return f;
        }
        // "(" may open a parenthesized formula or a tuple/parenthesized
        // expression operand; try the formula reading first and back off if
        // it fails or turns out to be compared against something.
        if (c_.isPunct("(")) {
            std::size_t mark = c_.save();
            try {
                c_.next();
                AFormula f = orF();
                c_.expectPunct(")", "to close formula");
                CmpOp op;
                bool operand = c_.isIdent("in") ||
                               (c_.peek().type == Tok::Punct &&
                                (cmpOpFromText(c_.peek().text, op) ||
                                 c_.peek().text == "+" || c_.peek().text == "-" ||
                                 c_.peek().text == "*" || c_.peek().text == "/"));
                if (!operand) return f;
            } catch (const ParseError&) {
            }
            c_.restore(mark);
        }
        // Predicate atom: lowercase name directly followed by "(". closure(...)
        // is reserved for the transitive-closure expression.
        if (c_.peek().type == Tok::Ident && c_.isPunct("(", 1) &&
            c_.peek().text != "closure") {
            AFormula f;
            f.kind = AFormula::Kind::AtomRef;
            f.pred = c_.next().text;
            c_.next();
            if (!c_.acceptPunct(")")) {
                do {
                    f.exprs.push_back(expr());
                } while (c_.acceptPunct(","));
                c_.expectPunct(")", "after atom arguments");
            }
            return f;
        }
        AExpr lhs = expr();
        CmpOp op;
        if (c_.peek().type == Tok::Punct && cmpOpFromText(c_.peek().text, op)) {
            c_.next();
            AFormula f;
            f.kind = AFormula::Kind::Cmp;
            f.cmp = op;
            f.exprs.push_back(std::move(lhs));
            f.exprs.push_back(expr());
            return f;
        }
        if (c_.acceptIdent("in")) {
            AFormula f;
            f.kind = AFormula::Kind::Member;
            f.exprs.push_back(std::move(lhs));
            f.exprs.push_back(expr());
            return f;
        }
        if (lhs.kind == AExpr::Kind::Const) {
            AFormula f;
            f.kind = AFormula::Kind::AtomRef;
            f.pred = lhs.name;
            return f;
        }
        c_.fail("expected formula");
    }

    AExpr expr() {
        AExpr e = mulE();
        while (c_.isPunct("+") || c_.isPunct("-")) {
            ArithOp op = c_.next().text == "+" ? ArithOp::Add : ArithOp::Sub;
            e = arith(op, std::move(e), mulE());
        }
        return e;
    }

    AExpr mulE() {
        AExpr e = unaryE();
        while (c_.isPunct("*") || c_.isPunct("/")) {
            ArithOp op = c_.next().text == "*" ? ArithOp::Mul : ArithOp::Div;
            e = arith(op, std::move(e), unaryE());
        }
        return e;
    }

    AExpr unaryE() {
        if (c_.acceptPunct("-")) {
            AExpr e = unaryE();
            if (e.kind == AExpr::Kind::Int) {
                e.intVal = -e.intVal;
                return e;
            }
            AExpr zero;
            zero.kind = AExpr::Kind::Int;
            return arith(ArithOp::Sub, std::move(zero), std::move(e));
        }
        return primE();
    }

    static AExpr arith(ArithOp op, AExpr a, AExpr b) {
        AExpr e;
        e.kind = AExpr::Kind::Arith;
        e.op = op;
        e.kids.push_back(std::move(a));
        e.kids.push_back(std::move(b));
        return e;
    }

    AExpr primE() {
        const Token& t = c_.peek();
        if (t.type == Tok::Int) {
            AExpr e;
            e.kind = AExpr::Kind::Int;
            e.intVal = c_.next().ival;
            return e;
        }
        if (t.type == Tok::UIdent) {
            AExpr e;
            e.kind = AExpr::Kind::Var;
            e.name = c_.next().text;
            return e;
        }
        if (t.type == Tok::Ident) {
            if (t.text == "closure" && c_.isPunct("(", 1)) return closureE();
            if ((t.text == "sum" || t.text == "max" || t.text == "count") &&
                c_.isPunct("{", 1))
                return aggE();
            if (c_.isPunct("/", 1) && c_.peek(2).type == Tok::Int) {
                AExpr e;
                e.kind = AExpr::Kind::Extension;
                e.name = c_.next().text;
                c_.next();
                e.arity = static_cast<int>(c_.next().ival);
                return e;
            }
            if (c_.isPunct("(", 1))
                c_.fail("predicate atom is not a value; use p/k for an extension");
            AExpr e;
            e.kind = AExpr::Kind::Const;
            e.name = c_.next().text;
            return e;
        }
        if (c_.acceptPunct("(")) {
            AExpr e = expr();
            if (c_.acceptPunct(",")) {
                AExpr tup;
                tup.kind = AExpr::Kind::Tuple;
                tup.kids.push_back(std::move(e));
                do {
                    tup.kids.push_back(expr());
                } while (c_.acceptPunct(","));
                e = std::move(tup);
            }
            c_.expectPunct(")", "to close expression");
            return e;
        }
        if (c_.acceptPunct("{")) return setE();
        if (c_.acceptPunct("|")) {
            AExpr e;
            e.kind = AExpr::Kind::Card;
            e.kids.push_back(expr());
            c_.expectPunct("|", "to close |...|");
            return e;
        }
        c_.fail("expected expression");
    }

    AExpr closureE() {
        c_.next();
        c_.next();
        AExpr e;
        e.kind = AExpr::Kind::Closure;
        if (c_.peek().type != Tok::Ident) c_.fail("expected predicate name");
        e.name = c_.next().text;
        c_.expectPunct("/", "in closure(p/2)");
        if (c_.peek().type != Tok::Int || c_.peek().ival != 2)
            c_.fail("closure applies to binary predicates only");
        c_.next();
        e.arity = 2;
        c_.expectPunct(")", "after closure argument");
        return e;
    }

    AExpr aggE() {
        AExpr e;
        e.kind = AExpr::Kind::Agg;
        std::string fun = c_.next().text;
        e.agg = fun == "sum" ? AggFun::Sum : fun == "max" ? AggFun::Max : AggFun::Count;
        c_.next();
        if (e.agg != AggFun::Count) {
            e.kids.push_back(expr());
            c_.expectPunct(":", "between aggregate term and source atom");
        }
        if (c_.peek().type != Tok::Ident) c_.fail("expected aggregate source predicate");
        e.name = c_.next().text;
        if (c_.acceptPunct("(")) {
            do {
                e.pattern.push_back(expr());
            } while (c_.acceptPunct(","));
            c_.expectPunct(")", "after aggregate pattern");
        }
        e.arity = static_cast<int>(e.pattern.size());
        c_.expectPunct("}", "to close aggregate");
        return e;
    }

    // {}, {lo..hi}, {e1,...,ek} or { e : condition }.
    AExpr setE() {
        AExpr e;
        if (c_.acceptPunct("}")) {
            e.kind = AExpr::Kind::FiniteSet;
            return e;
        }
        AExpr first = expr();
        if (c_.acceptPunct("..")) {
            e.kind = AExpr::Kind::Range;
            e.kids.push_back(std::move(first));
            e.kids.push_back(expr());
            c_.expectPunct("}", "to close range");
            return e;
        }
        if (c_.acceptPunct(":")) {
            e.kind = AExpr::Kind::Comprehension;
            e.kids.push_back(std::move(first));
            e.body = std::make_shared<AFormula>(orF());
            c_.expectPunct("}", "to close comprehension");
            return e;
        }
        e.kind = AExpr::Kind::FiniteSet;
        e.kids.push_back(std::move(first));
        while (c_.acceptPunct(",")) e.kids.push_back(expr());
        c_.expectPunct("}", "to close set");
        return e;
    }

    Cursor& c_;
};

} // namespace

Assertion parseAssertionTokens(Cursor& c) {
    AsnParser p(c);
    return p.orF();
}

} // namespace achieve::detail

namespace achieve {

Assertion parseAssertion(const std::string& text) {
    detail::Cursor c(detail::lex(text, "<assertion>"), "<assertion>");
    Assertion a = detail::parseAssertionTokens(c);
    c.acceptPunct(".");
    if (!c.atEnd()) c.fail("trailing input after assertion");
    return a;
}

} // namespace achieve
