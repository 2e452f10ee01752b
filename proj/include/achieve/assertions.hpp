#pragma once

#include <set>
#include <variant>
#include <vector>

#include "achieve/assertion.hpp"
#include "achieve/atom.hpp"
#include "achieve/engine.hpp"
#include "achieve/input.hpp"

namespace achieve {

using TermSet = std::set<Term>;

// An assertion expression denotes either one precomputed term or a finite
// set of them; sets of k-tuples are sets of tuple terms, arity-1 extensions
// are sets of bare terms.
using Value = std::variant<Term, TermSet>;

// What an assertion is read against: placeholder bindings and input
// extensions come from the instance, every other extension from the model,
// and quantifiers without an explicit domain range over the universe.
struct EvalContext {
    const InputInstance* instance = nullptr;
    const Interpretation* model = nullptr;
    const std::vector<Term>* universe = nullptr;
    const InputSpec* spec = nullptr;
};

// Evaluates a closed assertion to a truth value. Throws EvalError on unbound
// placeholders, type mismatches (term versus set), and comprehension bodies
// whose variables cannot be solved left to right.
bool evalAssertion(const Assertion& a, const EvalContext& ctx);

// Closed expression evaluation, exposed for tests and for the completeness
// search's propagation passes.
Value evalAssertionExpr(const AExpr& e, const EvalContext& ctx);

// Evaluation with metavariables pre-bound, for callers that instantiate a
// quantifier body themselves.
bool evalAssertionWith(const AFormula& f, const std::vector<std::string>& vars,
                       const std::vector<Term>& values, const EvalContext& ctx);

// Transitive closure of a binary relation given as pair tuples.
TermSet transitiveClosure(const TermSet& pairs);

struct SatisfyStats {
    std::size_t candidates = 0;  // full assignments examined
    std::size_t satisfying = 0;
};

// All interpretations over predicateSet (input predicates fixed to the
// instance facts, the rest ranging over universe tuples) that satisfy the
// assertion. Propagation runs in three stages: extension-pinning equalities
// are applied first, then subset enumeration narrowed by pointwise foralls
// and bounded by cardinality conjuncts, and whatever remains is filtered
// per candidate. Results are canonically sorted. Throws BudgetExceeded with
// the counts so far when the search outgrows the budget.
std::vector<Interpretation> enumerateSatisfying(const Assertion& a,
                                                const InputInstance& instance,
                                                const std::set<Sig>& predicateSet,
                                                const std::vector<Term>& universe,
                                                const InputSpec& spec,
                                                const EnumerationBudget& budget = {},
                                                SatisfyStats* stats = nullptr);

// Streaming variant: interpretations arrive in search order, not sorted.
// Return false from the callback to stop early; stats are still filled in.
void enumerateSatisfying(const Assertion& a, const InputInstance& instance,
                         const std::set<Sig>& predicateSet, const std::vector<Term>& universe,
                         const InputSpec& spec, const EnumerationBudget& budget,
                         const std::function<bool(const Interpretation&)>& yield,
                         SatisfyStats* stats = nullptr);

} // namespace achieve
