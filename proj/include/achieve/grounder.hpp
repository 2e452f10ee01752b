#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "achieve/input.hpp"
#include "achieve/program.hpp"

namespace achieve {

struct GroundLiteral {
    bool negative = false;
    Atom atom;

    int compare(const GroundLiteral& o) const {
        if (negative != o.negative) return negative ? 1 : -1;
        return atom.compare(o.atom);
    }
    bool operator==(const GroundLiteral& o) const { return compare(o) == 0; }
    bool operator<(const GroundLiteral& o) const { return compare(o) < 0; }

    std::string str() const;
};

// l { a1; ...; am } u with conditions already resolved. A missing upper
// bound means "at most all of them".
struct GroundChoice {
    std::int64_t lower = 0;
    std::optional<std::int64_t> upper;
    std::vector<Atom> elements;  // sorted, unique

    int compare(const GroundChoice& o) const;
    std::string str() const;
};

struct GroundRule {
    int sourceIndex = 0;  // 1-based rule position; 0 marks an instance fact
    std::optional<Atom> head;
    std::optional<GroundChoice> choice;
    std::vector<GroundLiteral> body;  // sorted, unique
    std::set<Sig> aggSources;         // predicates folded in by aggregate evaluation

    bool isConstraint() const { return !head && !choice; }
    bool isFact() const { return head && body.empty(); }

    int compare(const GroundRule& o) const;
    bool operator<(const GroundRule& o) const { return compare(o) < 0; }
    std::string str() const;
};

// When the body holds, the count of true atoms must stay within
// [lower, upper]. Produced by choice translation in the engine; ground()
// leaves the list empty.
struct CardConstraint {
    std::int64_t lower = 0;
    std::optional<std::int64_t> upper;
    std::vector<Atom> atoms;  // sorted, unique
    std::vector<GroundLiteral> body;

    std::string str() const;
};

struct GroundProgram {
    std::vector<GroundRule> rules;  // instance facts first, then by source index
    std::vector<CardConstraint> cardConstraints;

    std::set<Atom> headAtoms() const;  // rule heads plus choice elements
    std::set<Atom> allAtoms() const;   // every atom occurring anywhere
    std::string str() const;
};

struct GrounderOptions {
    std::size_t maxAtoms = 1'000'000;     // possibility-closure cap
    bool keepFalseComparisonRules = false;  // keep dead instances, marked __false
};

// Instantiates the first view.length() rules over the instance. Placeholder
// constants are substituted, comparisons and aggregates are evaluated away,
// choice conditions are expanded against their (deterministic) extensions,
// and negative literals are kept. Output is deduplicated and canonically
// ordered, so equal inputs ground to byte-equal dumps.
GroundProgram ground(const PrefixView& view, const InputInstance& instance,
                     const GrounderOptions& opts = {});

// Precomputed terms mentioned by the full program and instance: expanded
// ground argument terms, placeholder bindings, instance fact arguments, and
// all tuple subterms of these.
std::vector<Term> herbrandTerms(const Program& p, const InputInstance& instance);

}  // namespace achieve
