#include "achieve/rule.hpp"

#include <sstream>

namespace achieve {

namespace {

const char* aggToken(AggFun f) {
    switch (f) {
    case AggFun::Sum: return "#sum";
    case AggFun::Max: return "#max";
    case AggFun::Count: return "#count";
    }
    return "?";
}

void printBody(std::ostream& os, const std::vector<BodyLiteral>& body) {
    for (std::size_t i = 0; i < body.size(); ++i) {
        if (i) os << ", ";
        os << body[i].str();
    }
}

} // namespace

std::string BodyLiteral::str() const {
    std::ostringstream os;
    switch (kind) {
    case Kind::Pos: os << atom; break;
    case Kind::Neg: os << "not " << atom; break;
    case Kind::Cmp: os << cmp.lhs << " " << cmpToken(cmp.op) << " " << cmp.rhs; break;
    case Kind::Agg:
        os << agg.var << " = " << aggToken(agg.fun) << "{" << agg.elem << " : ";
        for (std::size_t i = 0; i < agg.pattern.size(); ++i) {
            if (i) os << ", ";
            os << agg.pattern[i];
        }
        os << "}";
        break;
    }
    return os.str();
}

std::string Rule::str() const {
    std::ostringstream os;
    switch (head.kind) {
    case Head::Kind::Atom:
        os << head.atom;
        break;
    case Head::Kind::Choice: {
        if (head.lower) os << *head.lower << " ";
        os << "{";
        for (std::size_t i = 0; i < head.elements.size(); ++i) {
            if (i) os << "; ";
            os << head.elements[i].atom;
            if (!head.elements[i].condition.empty()) {
                os << " : ";
                printBody(os, head.elements[i].condition);
            }
        }
        os << "}";
        if (head.upper) os << " " << *head.upper;
        break;
    }
    case Head::Kind::None:
        break;
    }
    if (!body.empty()) {
        if (head.kind != Head::Kind::None) os << " ";
        os << ":- ";
        printBody(os, body);
    } else if (head.kind == Head::Kind::None) {
        os << ":- ";
    }
    os << ".";
    return os.str();
}

} // namespace achieve
