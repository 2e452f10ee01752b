#include "achieve/assertion.hpp"

#include <sstream>

namespace achieve {

const char* cmpToken(CmpOp op) {
    switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
    }
    return "?";
}

bool evalCmp(CmpOp op, int threeWay) {
    switch (op) {
    case CmpOp::Eq: return threeWay == 0;
    case CmpOp::Ne: return threeWay != 0;
    case CmpOp::Lt: return threeWay < 0;
    case CmpOp::Le: return threeWay <= 0;
    case CmpOp::Gt: return threeWay > 0;
    case CmpOp::Ge: return threeWay >= 0;
    }
    return false;
}

namespace {

const char* aggName(AggFun f) {
    switch (f) {
    case AggFun::Sum: return "sum";
    case AggFun::Max: return "max";
    case AggFun::Count: return "count";
    }
    return "?";
}

void printExpr(std::ostream& os, const AExpr& e);
void printFormula(std::ostream& os, const AFormula& f, bool parenCompound);

void printExprList(std::ostream& os, const std::vector<AExpr>& es, const char* sep) {
    for (std::size_t i = 0; i < es.size(); ++i) {
        if (i) os << sep;
        printExpr(os, es[i]);
    }
}

void printExpr(std::ostream& os, const AExpr& e) {
    switch (e.kind) {
    case AExpr::Kind::Int: os << e.intVal; break;
    case AExpr::Kind::Const:
    case AExpr::Kind::Var: os << e.name; break;
    case AExpr::Kind::Tuple:
        os << "(";
        printExprList(os, e.kids, ",");
        os << ")";
        break;
    case AExpr::Kind::Arith:
        if (e.op == ArithOp::Abs) {
            os << "|";
            printExpr(os, e.kids[0]);
            os << "|";
        } else {
            const char* t = e.op == ArithOp::Add ? "+" : e.op == ArithOp::Sub ? "-"
                          : e.op == ArithOp::Mul ? "*" : "/";
            auto side = [&](const AExpr& k) {
                bool wrap = k.kind == AExpr::Kind::Arith && k.op != ArithOp::Abs;
                if (wrap) os << "(";
                printExpr(os, k);
                if (wrap) os << ")";
            };
            side(e.kids[0]);
            os << t;
            side(e.kids[1]);
        }
        break;
    case AExpr::Kind::Card:
        os << "|";
        printExpr(os, e.kids[0]);
        os << "|";
        break;
    case AExpr::Kind::Agg:
        os << aggName(e.agg) << "{";
        if (e.agg != AggFun::Count) {
            printExpr(os, e.kids[0]);
            os << " : ";
        }
        os << e.name << "(";
        printExprList(os, e.pattern, ",");
        os << ")}";
        break;
    case AExpr::Kind::Range:
        os << "{";
        printExpr(os, e.kids[0]);
        os << "..";
        printExpr(os, e.kids[1]);
        os << "}";
        break;
    case AExpr::Kind::FiniteSet:
        os << "{";
        printExprList(os, e.kids, ",");
        os << "}";
        break;
    case AExpr::Kind::Comprehension:
        os << "{ ";
        printExpr(os, e.kids[0]);
        os << " : ";
        printFormula(os, *e.body, false);
        os << " }";
        break;
    case AExpr::Kind::Closure:
        os << "closure(" << e.name << "/" << e.arity << ")";
        break;
    case AExpr::Kind::Extension:
        os << e.name << "/" << e.arity;
        break;
    }
}

void printFormula(std::ostream& os, const AFormula& f, bool parenCompound) {
    switch (f.kind) {
    case AFormula::Kind::True: os << "true"; break;
    case AFormula::Kind::False: os << "false"; break;
    case AFormula::Kind::And:
    case AFormula::Kind::Or: {
        const char* sep = f.kind == AFormula::Kind::And ? " and " : " or ";
        if (parenCompound) os << "(";
        for (std::size_t i = 0; i < f.kids.size(); ++i) {
            if (i) os << sep;
            bool childParen = f.kids[i].kind == AFormula::Kind::And ||
                              f.kids[i].kind == AFormula::Kind::Or ||
                              f.kids[i].kind == AFormula::Kind::Quant;
            printFormula(os, f.kids[i], childParen);
        }
        if (parenCompound) os << ")";
        break;
    }
    case AFormula::Kind::Not:
        os << "not ";
        printFormula(os, f.kids[0], true);
        break;
    case AFormula::Kind::Quant: {
        if (parenCompound) os << "(";
        os << (f.q == AFormula::QKind::Forall ? "forall"
               : f.q == AFormula::QKind::Exists ? "exists" : "exists!");
        os << " ";
        if (f.vars.size() == 1) {
            os << f.vars[0];
        } else {
            os << "(";
            for (std::size_t i = 0; i < f.vars.size(); ++i) {
                if (i) os << ",";
                os << f.vars[i];
            }
            os << ")";
        }
        if (f.domain) {
            os << " in ";
            printExpr(os, *f.domain);
        }
        os << ": ";
        printFormula(os, f.kids[0], false);
        if (parenCompound) os << ")";
        break;
    }
    case AFormula::Kind::Cmp:
        printExpr(os, f.exprs[0]);
        os << " " << cmpToken(f.cmp) << " ";
        printExpr(os, f.exprs[1]);
        break;
    case AFormula::Kind::AtomRef:
        os << f.pred;
        if (!f.exprs.empty()) {
            os << "(";
            printExprList(os, f.exprs, ",");
            os << ")";
        }
        break;
    case AFormula::Kind::Member:
        printExpr(os, f.exprs[0]);
        os << " in ";
        printExpr(os, f.exprs[1]);
        break;
    }
}

} // namespace

std::string AExpr::str() const {
    std::ostringstream os;
    printExpr(os, *this);
    return os.str();
}

std::string AFormula::str() const {
    std::ostringstream os;
    printFormula(os, *this, false);
    return os.str();
}

AFormula AFormula::conj(std::vector<AFormula> kids) {
    if (kids.empty()) return trueF();
    if (kids.size() == 1) return std::move(kids[0]);
    AFormula f;
    f.kind = Kind::And;
    f.kids = std::move(kids);
    return f;
}

void collectExprVars(const AExpr& e, std::set<std::string>& out) {
    if (e.kind == AExpr::Kind::Var && e.name != "_") out.insert(e.name);
    for (const AExpr& k : e.kids) collectExprVars(k, out);
    for (const AExpr& k : e.pattern) collectExprVars(k, out);
}

void collectLocalVars(const AFormula& f, std::set<std::string>& out) {
    switch (f.kind) {
    case AFormula::Kind::And:
    case AFormula::Kind::Or:
    case AFormula::Kind::Not:
        for (const AFormula& k : f.kids) collectLocalVars(k, out);
        break;
    case AFormula::Kind::AtomRef:
        for (const AExpr& a : f.exprs) collectExprVars(a, out);
        break;
    case AFormula::Kind::Member:
        collectExprVars(f.exprs[0], out);
        break;
    case AFormula::Kind::Cmp:
        if (f.cmp == CmpOp::Eq) {
            if (f.exprs[0].kind == AExpr::Kind::Var) out.insert(f.exprs[0].name);
            if (f.exprs[1].kind == AExpr::Kind::Var) out.insert(f.exprs[1].name);
        }
        break;
    default:
        break;
    }
}

} // namespace achieve
