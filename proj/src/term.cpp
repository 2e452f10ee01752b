#include "achieve/term.hpp"

#include <ostream>
#include <sstream>

#include "achieve/error.hpp"

namespace achieve {

Term Term::integer(std::int64_t v) {
    Term t;
    t.kind_ = Kind::Integer;
    t.int_ = v;
    return t;
}

Term Term::symbol(std::string name) {
    Term t;
    t.kind_ = Kind::Symbol;
    t.name_ = std::move(name);
    return t;
}

Term Term::tuple(std::vector<Term> elems) {
    Term t;
    t.kind_ = Kind::Tuple;
    t.args_ = std::move(elems);
    return t;
}

Term Term::variable(std::string name) {
    Term t;
    t.kind_ = Kind::Variable;
    t.name_ = std::move(name);
    return t;
}

Term Term::arith(ArithOp op, std::vector<Term> operands) {
    Term t;
    t.kind_ = Kind::Arith;
    t.op_ = op;
    t.args_ = std::move(operands);
    return t;
}

Term Term::interval(Term lo, Term hi) {
    Term t;
    t.kind_ = Kind::Interval;
    t.args_.push_back(std::move(lo));
    t.args_.push_back(std::move(hi));
    return t;
}

Term Term::pool(std::vector<Term> alternatives) {
    Term t;
    t.kind_ = Kind::Pool;
    t.args_ = std::move(alternatives);
    return t;
}

bool Term::precomputed() const {
    switch (kind_) {
    case Kind::Integer:
    case Kind::Symbol:
        return true;
    case Kind::Tuple:
        for (const Term& a : args_)
            if (!a.precomputed()) return false;
        return true;
    default:
        return false;
    }
}

bool Term::hasVariables() const {
    if (kind_ == Kind::Variable) return true;
    for (const Term& a : args_)
        if (a.hasVariables()) return true;
    return false;
}

void Term::collectVariables(std::set<std::string>& out) const {
    if (kind_ == Kind::Variable) {
        out.insert(name_);
        return;
    }
    for (const Term& a : args_) a.collectVariables(out);
}

int Term::compare(const Term& other) const {
    if (kind_ != other.kind_)
        return static_cast<int>(kind_) < static_cast<int>(other.kind_) ? -1 : 1;
    switch (kind_) {
    case Kind::Integer:
        if (int_ != other.int_) return int_ < other.int_ ? -1 : 1;
        return 0;
    case Kind::Symbol:
    case Kind::Variable:
        return name_.compare(other.name_);
    case Kind::Arith:
        if (op_ != other.op_)
            return static_cast<int>(op_) < static_cast<int>(other.op_) ? -1 : 1;
        break;
    default:
        break;
    }
    if (args_.size() != other.args_.size())
        return args_.size() < other.args_.size() ? -1 : 1;
    for (std::size_t i = 0; i < args_.size(); ++i) {
        int c = args_[i].compare(other.args_[i]);
        if (c != 0) return c;
    }
    return 0;
}

namespace {

const char* opToken(ArithOp op) {
    switch (op) {
    case ArithOp::Add: return "+";
    case ArithOp::Sub: return "-";
    case ArithOp::Mul: return "*";
    case ArithOp::Div: return "/";
    case ArithOp::Abs: return "|";
    }
    return "?";
}

void print(std::ostream& os, const Term& t) {
    switch (t.kind()) {
    case Term::Kind::Integer:
        os << t.value();
        break;
    case Term::Kind::Symbol:
    case Term::Kind::Variable:
        os << t.name();
        break;
    case Term::Kind::Tuple: {
        os << "(";
        bool first = true;
        for (const Term& a : t.args()) {
            if (!first) os << ",";
            first = false;
            print(os, a);
        }
        os << ")";
        break;
    }
    case Term::Kind::Arith:
        if (t.op() == ArithOp::Abs) {
            os << "|";
            print(os, t.args()[0]);
            os << "|";
        } else {
            // Parenthesize nested operations; precedence is not reconstructed.
            auto side = [&](const Term& a) {
                bool wrap = a.kind() == Term::Kind::Arith && a.op() != ArithOp::Abs;
                if (wrap) os << "(";
                print(os, a);
                if (wrap) os << ")";
            };
            side(t.args()[0]);
            os << opToken(t.op());
            side(t.args()[1]);
        }
        break;
    case Term::Kind::Interval:
        print(os, t.args()[0]);
        os << "..";
        print(os, t.args()[1]);
        break;
    case Term::Kind::Pool: {
        bool first = true;
        for (const Term& a : t.args()) {
            if (!first) os << ";";
            first = false;
            print(os, a);
        }
        break;
    }
    }
}

} // namespace

std::string Term::str() const {
    std::ostringstream os;
    print(os, *this);
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Term& t) {
    print(os, t);
    return os;
}

std::int64_t checkedAdd(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw GroundingError("integer overflow in " + std::to_string(a) + " + " + std::to_string(b));
    return r;
}

std::int64_t checkedSub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r))
        throw GroundingError("integer overflow in " + std::to_string(a) + " - " + std::to_string(b));
    return r;
}

std::int64_t checkedMul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw GroundingError("integer overflow in " + std::to_string(a) + " * " + std::to_string(b));
    return r;
}

Term evalGroundTerm(const Term& t) {
    switch (t.kind()) {
    case Term::Kind::Integer:
    case Term::Kind::Symbol:
        return t;
    case Term::Kind::Tuple: {
        std::vector<Term> elems;
        elems.reserve(t.args().size());
        for (const Term& a : t.args()) elems.push_back(evalGroundTerm(a));
        return Term::tuple(std::move(elems));
    }
    case Term::Kind::Variable:
        throw GroundingError("unbound variable " + t.name() + " in term evaluation");
    case Term::Kind::Arith: {
        if (t.op() == ArithOp::Abs) {
            Term a = evalGroundTerm(t.args()[0]);
            if (a.kind() != Term::Kind::Integer)
                throw GroundingError("arithmetic on non-integer term " + a.str());
            std::int64_t v = a.value();
            if (v == INT64_MIN) throw GroundingError("integer overflow in |" + a.str() + "|");
            return Term::integer(v < 0 ? -v : v);
        }
        Term a = evalGroundTerm(t.args()[0]);
        Term b = evalGroundTerm(t.args()[1]);
        if (a.kind() != Term::Kind::Integer || b.kind() != Term::Kind::Integer)
            throw GroundingError("arithmetic on non-integer terms " + a.str() + ", " + b.str());
        switch (t.op()) {
        case ArithOp::Add: return Term::integer(checkedAdd(a.value(), b.value()));
        case ArithOp::Sub: return Term::integer(checkedSub(a.value(), b.value()));
        case ArithOp::Mul: return Term::integer(checkedMul(a.value(), b.value()));
        case ArithOp::Div:
            if (b.value() == 0) throw GroundingError("division by zero");
            if (a.value() == INT64_MIN && b.value() == -1)
                throw GroundingError("integer overflow in division");
            return Term::integer(a.value() / b.value());
        default:
            break;
        }
        throw GroundingError("bad arithmetic operator");
    }
    case Term::Kind::Interval:
    case Term::Kind::Pool:
        throw GroundingError("set-valued term " + t.str() + " where a single value is required");
    }
    throw GroundingError("bad term kind");
}

void expandGroundTerm(const Term& t, std::vector<Term>& out) {
    switch (t.kind()) {
    case Term::Kind::Interval: {
        Term lo = evalGroundTerm(t.args()[0]);
        Term hi = evalGroundTerm(t.args()[1]);
        if (lo.kind() != Term::Kind::Integer || hi.kind() != Term::Kind::Integer)
            throw GroundingError("interval with non-integer bound: " + t.str());
        for (std::int64_t v = lo.value(); v <= hi.value(); ++v) {
            out.push_back(Term::integer(v));
            if (v == INT64_MAX) break;
        }
        return;
    }
    case Term::Kind::Pool:
        for (const Term& alt : t.args()) expandGroundTerm(alt, out);
        return;
    case Term::Kind::Tuple: {
        std::vector<std::vector<Term>> parts(t.args().size());
        for (std::size_t i = 0; i < t.args().size(); ++i)
            expandGroundTerm(t.args()[i], parts[i]);
        std::vector<Term> current(t.args().size());
        // Product of component expansions, leftmost index slowest.
        std::vector<std::size_t> idx(t.args().size(), 0);
        while (true) {
            bool done = false;
            for (std::size_t i = 0; i < parts.size(); ++i) {
                if (parts[i].empty()) { done = true; break; }
                current[i] = parts[i][idx[i]];
            }
            if (done) return;
            out.push_back(Term::tuple(current));
            std::size_t i = parts.size();
            while (i > 0) {
                --i;
                if (++idx[i] < parts[i].size()) break;
                idx[i] = 0;
                if (i == 0) return;
            }
            if (parts.empty()) return;
        }
    }
    default:
        out.push_back(evalGroundTerm(t));
        return;
    }
}

} // namespace achieve
