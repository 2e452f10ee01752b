#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "achieve/term.hpp"

namespace achieve {

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };
enum class AggFun { Sum, Max, Count };

const char* cmpToken(CmpOp op);
bool evalCmp(CmpOp op, int threeWay);

struct AFormula;

// Assertion-language expression. Evaluates to a single precomputed term or
// to a finite set of precomputed terms (sets of k-tuples are sets of tuple
// terms). Which one is determined by the node kind.
struct AExpr {
    enum class Kind {
        Int,            // integer literal
        Const,          // lowercase name: placeholder if declared, else a symbol
        Var,            // metavariable bound by a quantifier, comprehension or pattern
        Tuple,          // (e1,...,ek)
        Arith,          // op over kids; Abs is unary
        Card,           // |S| for a set expression S
        Agg,            // sum/max/count { e : p(a1,...,ak) }, kids[0] = e
        Range,          // {lo..hi}, kids = [lo, hi]
        FiniteSet,      // {e1,...,ek}
        Comprehension,  // { e : F }, kids[0] = e; binds the free variables of e
        Closure,        // closure(p/2): transitive closure of a binary extension
        Extension       // p/k: the extension of p in the model (or instance)
    };

    Kind kind = Kind::Int;
    std::int64_t intVal = 0;
    std::string name;   // Const, Var; Extension/Closure/Agg predicate name
    int arity = 0;      // Extension, Closure
    ArithOp op = ArithOp::Add;
    AggFun agg = AggFun::Count;
    std::vector<AExpr> kids;
    std::vector<AExpr> pattern;             // Agg: argument pattern of the source atom
    std::shared_ptr<AFormula> body;         // Comprehension condition

    std::string str() const;
};

struct AFormula {
    enum class Kind { True, False, And, Or, Not, Quant, Cmp, AtomRef, Member };
    enum class QKind { Forall, Exists, ExistsUnique };

    Kind kind = Kind::True;
    std::vector<AFormula> kids;             // And/Or children; Not/Quant body at kids[0]
    QKind q = QKind::Forall;
    std::vector<std::string> vars;          // Quant: one var, or a destructuring tuple
    std::optional<AExpr> domain;            // Quant: absent means the term universe
    CmpOp cmp = CmpOp::Eq;
    std::vector<AExpr> exprs;               // Cmp: [lhs, rhs]; AtomRef: args; Member: [elem, set]
    std::string pred;                       // AtomRef predicate

    std::string str() const;

    static AFormula trueF() { return {}; }
    static AFormula conj(std::vector<AFormula> kids);
};

using Assertion = AFormula;

// Metavariables an expression mentions anywhere; "_" is excluded.
void collectExprVars(const AExpr& e, std::set<std::string>& out);

// Variables a comprehension body can bind on its own: argument variables of
// atom conjuncts, elements of membership tests, and bare variables pinned by
// an equality. The validator admits them and the evaluator solves for them;
// anything else must come from the head or an enclosing binder.
void collectLocalVars(const AFormula& f, std::set<std::string>& out);

} // namespace achieve
