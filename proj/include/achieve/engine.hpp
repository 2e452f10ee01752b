#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "achieve/grounder.hpp"

namespace achieve {

struct EnumerationBudget {
    std::size_t maxCandidates = 10'000'000;  // search-tree leaves / raw candidates
    std::size_t maxModels = 2'000'000;
    double timeoutSeconds = 0;  // 0 means no deadline
};

// Rewrites every choice rule into a pair of defeasible rules per element,
//   a :- body, not __c_a.      __c_a :- body, not a.
// plus a cardinality constraint over the elements. The fresh __c_ atoms are
// internal and never appear in reported models.
GroundProgram translateChoices(const GroundProgram& gp);

// The reduct of a choice-free program: rules with a negative literal false
// under the interpretation are dropped, remaining negative literals are
// stripped. Integrity constraints are not part of the result; callers check
// them against the interpretation directly.
GroundProgram reduct(const GroundProgram& gp, const Interpretation& interp);

// Least model of a negation-free program, by unit propagation over
// unsatisfied-premise counts.
Interpretation minimalModel(const GroundProgram& gp);

// Whether the interpretation (over program atoms, no __c_ markers) is a
// stable model. Accepts raw or choice-translated ground programs.
bool isStable(const GroundProgram& gp, const Interpretation& interp);

// Checks stability of many interpretations against one program; builds the
// translated, indexed form once.
class StableChecker {
public:
    explicit StableChecker(const GroundProgram& gp);
    ~StableChecker();
    StableChecker(StableChecker&&) noexcept;
    StableChecker& operator=(StableChecker&&) noexcept;

    bool isStable(const Interpretation& interp) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// All stable models, canonically ordered. Search branches on choice
// elements and on atoms caught in negative cycles; everything else follows
// deterministically. Throws BudgetExceeded when limits are hit.
std::vector<Interpretation> enumerateStableModels(const GroundProgram& gp,
                                                  const EnumerationBudget& budget = {});

// Streaming variant; return false from the callback to stop early.
void enumerateStableModels(const GroundProgram& gp, const EnumerationBudget& budget,
                           const std::function<bool(const Interpretation&)>& yield);

// Tests every subset of the head atoms for stability. Exponential; the
// independent cross-check for the search-based enumerator.
std::vector<Interpretation> enumerateBruteForce(const GroundProgram& gp,
                                                const EnumerationBudget& budget = {});

}  // namespace achieve
