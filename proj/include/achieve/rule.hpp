#pragma once

#include <optional>
#include <string>
#include <vector>

#include "achieve/assertion.hpp"
#include "achieve/atom.hpp"
#include "achieve/error.hpp"

namespace achieve {

struct Comparison {
    Term lhs;
    CmpOp op = CmpOp::Eq;
    Term rhs;
};

// N = #sum{ e : p(pattern) }. The pattern is a conjunction of atoms; pattern
// variables not bound elsewhere in the rule are local to the aggregate.
struct AggregateAssign {
    std::string var;
    AggFun fun = AggFun::Count;
    Term elem;
    std::vector<Atom> pattern;
};

struct BodyLiteral {
    enum class Kind { Pos, Neg, Cmp, Agg };
    Kind kind = Kind::Pos;
    Atom atom;            // Pos, Neg
    Comparison cmp;       // Cmp
    AggregateAssign agg;  // Agg

    static BodyLiteral pos(Atom a) { return {Kind::Pos, std::move(a), {}, {}}; }
    static BodyLiteral neg(Atom a) { return {Kind::Neg, std::move(a), {}, {}}; }
    static BodyLiteral comparison(Comparison c) { return {Kind::Cmp, {}, std::move(c), {}}; }
    static BodyLiteral aggregate(AggregateAssign a) { return {Kind::Agg, {}, {}, std::move(a)}; }

    std::string str() const;
};

// Condition literals are atoms and comparisons only.
struct ChoiceElement {
    Atom atom;
    std::vector<BodyLiteral> condition;
};

struct Head {
    enum class Kind { Atom, Choice, None };
    Kind kind = Kind::None;
    Atom atom;                                  // Atom
    std::optional<Term> lower, upper;           // Choice bounds, absent = unbounded
    std::vector<ChoiceElement> elements;        // Choice
};

struct Rule {
    int index = 0;  // 1-based position in the program
    Head head;
    std::vector<BodyLiteral> body;
    SourceSpan span;

    bool isConstraint() const { return head.kind == Head::Kind::None; }
    bool isChoice() const { return head.kind == Head::Kind::Choice; }
    bool isFact() const { return head.kind == Head::Kind::Atom && body.empty(); }

    std::string str() const;
};

} // namespace achieve
