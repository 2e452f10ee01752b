#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace achieve {

enum class ArithOp { Add, Sub, Mul, Div, Abs };

// First-order terms. Integer/Symbol/Tuple are the precomputed subset that may
// appear in ground atoms; Variable/Arith/Interval/Pool occur only in rule and
// assertion syntax and are eliminated by grounding.
class Term {
public:
    enum class Kind { Integer, Symbol, Tuple, Variable, Arith, Interval, Pool };

    Term() : kind_(Kind::Tuple) {}

    static Term integer(std::int64_t v);
    static Term symbol(std::string name);
    static Term tuple(std::vector<Term> elems);
    static Term variable(std::string name);
    static Term arith(ArithOp op, std::vector<Term> operands);
    static Term interval(Term lo, Term hi);
    static Term pool(std::vector<Term> alternatives);

    Kind kind() const { return kind_; }
    std::int64_t value() const { return int_; }
    const std::string& name() const { return name_; }
    ArithOp op() const { return op_; }
    const std::vector<Term>& args() const { return args_; }

    // No variables, arithmetic, intervals or pools anywhere in the term.
    bool precomputed() const;
    bool hasVariables() const;
    void collectVariables(std::set<std::string>& out) const;

    // Total order: kind rank, then content. Precomputed terms sort
    // integers < symbols < tuples, giving the canonical model order.
    int compare(const Term& other) const;
    bool operator==(const Term& o) const { return compare(o) == 0; }
    bool operator!=(const Term& o) const { return compare(o) != 0; }
    bool operator<(const Term& o) const { return compare(o) < 0; }

    std::string str() const;

private:
    Kind kind_;
    std::int64_t int_ = 0;
    std::string name_;
    ArithOp op_ = ArithOp::Add;
    std::vector<Term> args_;
};

std::ostream& operator<<(std::ostream& os, const Term& t);

// Evaluates a variable-free term to its precomputed form. Arithmetic is
// 64-bit with overflow detection; intervals and pools are rejected here
// (they denote sets, not single terms). Throws GroundingError.
Term evalGroundTerm(const Term& t);

// All precomputed instances a variable-free term denotes: intervals expand
// to their integer range, pools to their alternatives, tuples to the
// product of their components. Result order is deterministic.
void expandGroundTerm(const Term& t, std::vector<Term>& out);

std::int64_t checkedAdd(std::int64_t a, std::int64_t b);
std::int64_t checkedSub(std::int64_t a, std::int64_t b);
std::int64_t checkedMul(std::int64_t a, std::int64_t b);

} // namespace achieve
