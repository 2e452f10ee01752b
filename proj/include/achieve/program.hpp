#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "achieve/input.hpp"
#include "achieve/rule.hpp"

namespace achieve {

// One achieved-annotation, attached to the rule it follows. Several blocks
// on the same rule are merged into one conjunction by the parser.
struct RecordEntry {
    Assertion assertion;
    std::string text;          // surface form, for reports
    bool reconstructed = false;
    SourceSpan span;
};

// Partial map from prefix indices to assertions.
class Record {
public:
    void set(int index, RecordEntry entry) { entries_[index] = std::move(entry); }
    void erase(int index) { entries_.erase(index); }
    bool has(int index) const { return entries_.count(index) != 0; }
    const RecordEntry* find(int index) const {
        auto it = entries_.find(index);
        return it == entries_.end() ? nullptr : &it->second;
    }
    const std::map<int, RecordEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

private:
    std::map<int, RecordEntry> entries_;
};

struct Program {
    std::string name;
    std::vector<Rule> rules;   // rules[i].index == i+1
    Record record;
    InputSpec input;

    int size() const { return static_cast<int>(rules.size()); }
    std::string str() const;  // surface syntax incl. annotations
};

// The first k rules of a program. Keeps a pointer to the whole program so
// downstream stages can see the full rule set (e.g. for the term universe).
class PrefixView {
public:
    PrefixView(const Program& p, int k) : program_(&p), k_(k) {}

    const Program& program() const { return *program_; }
    int length() const { return k_; }
    const Rule& rule(int i) const { return program_->rules[i - 1]; }  // 1-based, i <= k

    auto begin() const { return program_->rules.begin(); }
    auto end() const { return program_->rules.begin() + k_; }

private:
    const Program* program_;
    int k_;
};

// Throws RangeError unless 0 <= k <= program size. prefix(p, 0) is empty.
PrefixView prefix(const Program& p, int k);

// Predicates occurring in the prefix (heads, choice elements and conditions,
// bodies, aggregate patterns) plus all declared input predicates.
std::set<Sig> preds(const PrefixView& view);

// Conjunction of all recorded assertions at indices <= k; True when none.
Assertion aStar(const Record& record, int k);
std::string aStarText(const Record& record, int k);

} // namespace achieve
