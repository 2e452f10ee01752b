#include "achieve/program.hpp"

#include <sstream>

namespace achieve {

PrefixView prefix(const Program& p, int k) {
    if (k < 0 || k > p.size())
        throw RangeError("prefix index " + std::to_string(k) + " out of range 0.." +
                         std::to_string(p.size()));
    return PrefixView(p, k);
}

namespace {

void collectSigs(const std::vector<BodyLiteral>& lits, std::set<Sig>& out) {
    for (const BodyLiteral& l : lits) {
        switch (l.kind) {
        case BodyLiteral::Kind::Pos:
        case BodyLiteral::Kind::Neg:
            out.insert(l.atom.sig());
            break;
        case BodyLiteral::Kind::Agg:
            for (const Atom& a : l.agg.pattern) out.insert(a.sig());
            break;
        case BodyLiteral::Kind::Cmp:
            break;
        }
    }
}

} // namespace

std::set<Sig> preds(const PrefixView& view) {
    std::set<Sig> out;
    for (const Rule& r : view) {
        if (r.head.kind == Head::Kind::Atom) out.insert(r.head.atom.sig());
        if (r.head.kind == Head::Kind::Choice) {
            for (const ChoiceElement& e : r.head.elements) {
                out.insert(e.atom.sig());
                collectSigs(e.condition, out);
            }
        }
        collectSigs(r.body, out);
    }
    for (const Sig& s : view.program().input.predicates) out.insert(s);
    return out;
}

Assertion aStar(const Record& record, int k) {
    std::vector<AFormula> parts;
    for (const auto& [index, entry] : record.entries()) {
        if (index > k) break;
        parts.push_back(entry.assertion);
    }
    return AFormula::conj(std::move(parts));
}

std::string aStarText(const Record& record, int k) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [index, entry] : record.entries()) {
        if (index > k) break;
        if (!first) os << " and ";
        first = false;
        bool wrap = record.entries().size() > 1;
        os << (wrap ? "(" : "") << entry.text << (wrap ? ")" : "");
    }
    if (first) return "true";
    return os.str();
}

std::string Program::str() const {
    std::ostringstream os;
    for (const Sig& s : input.predicates) os << "%@ input: " << s.str() << ".\n";
    for (const auto& p : input.placeholders) {
        os << "%@ input: const " << p.name;
        if (!p.conditionText.empty()) os << " : " << p.conditionText;
        os << ".\n";
    }
    if (!input.empty()) os << "\n";
    for (const Rule& r : rules) {
        os << r.str() << "\n";
        if (const RecordEntry* e = record.find(r.index)) {
            if (e->reconstructed) os << "%@ reconstructed\n";
            os << "%@ achieved: " << e->text << ".\n";
        }
    }
    return os.str();
}

} // namespace achieve
