#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "achieve/assertion.hpp"
#include "achieve/atom.hpp"

namespace achieve {

// What a program declares it expects from outside: input predicates whose
// extensions come from instance files, and placeholder constants with an
// optional validity condition.
struct InputSpec {
    struct Placeholder {
        std::string name;
        std::optional<Assertion> condition;
        std::string conditionText;
    };

    std::set<Sig> predicates;
    std::vector<Placeholder> placeholders;

    bool isInput(const Sig& s) const { return predicates.count(s) != 0; }
    bool isPlaceholder(const std::string& name) const {
        for (const auto& p : placeholders)
            if (p.name == name) return true;
        return false;
    }
    bool empty() const { return predicates.empty() && placeholders.empty(); }
};

struct InputInstance {
    std::string name;
    std::vector<Atom> facts;               // sorted, ground, input predicates only
    std::map<std::string, Term> bindings;  // placeholder name -> precomputed term

    const Term* binding(const std::string& n) const {
        auto it = bindings.find(n);
        return it == bindings.end() ? nullptr : &it->second;
    }
};

// Checks an instance against a spec: facts use declared input predicates and
// are ground, every placeholder is bound, and all validity conditions hold.
// Returns human-readable violations; empty means valid.
std::vector<std::string> validateInput(const InputInstance& instance, const InputSpec& spec);

} // namespace achieve
