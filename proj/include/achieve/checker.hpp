#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "achieve/assertions.hpp"
#include "achieve/program.hpp"

namespace achieve {

enum class Verdict { Pass, Fail, Inconclusive, Skipped };

std::string str(Verdict v);

// A stable model of some prefix at or after the annotation that falsifies
// the annotated assertion.
struct AchievementCounterexample {
    int prefix = 0;
    std::string instance;
    Interpretation model;
};

struct AchievementResult {
    Verdict verdict = Verdict::Skipped;
    std::optional<AchievementCounterexample> counterexample;  // set iff fail
    std::string note;
};

// An interpretation satisfying every assertion recorded up to the index
// without being a stable model of that prefix.
struct CompletenessCounterexample {
    std::string instance;
    Interpretation interpretation;
};

struct CompletenessResult {
    Verdict verdict = Verdict::Skipped;
    std::optional<CompletenessCounterexample> counterexample;  // set iff fail
    std::size_t candidates = 0;  // assignments examined, summed over instances
    std::string note;
};

struct AnnotationReport {
    int index = 0;
    std::string assertion;  // annotation text as written
    AchievementResult achievement;
    CompletenessResult completeness;
};

struct PrefixModelCount {
    std::string instance;
    int prefix = 0;
    std::size_t models = 0;
    bool exact = true;  // false when enumeration stopped at the budget
};

struct UniverseInfo {
    std::string instance;
    std::size_t terms = 0;
};

struct CheckOptions {
    bool achievements = true;
    bool completeness = true;
    EnumerationBudget budget;
};

struct CheckReport {
    std::string program;
    std::vector<std::string> instances;
    std::vector<AnnotationReport> annotations;  // ordered by index
    std::vector<PrefixModelCount> prefixModels;
    std::vector<UniverseInfo> universes;
    double seconds = 0;

    // Fail beats inconclusive beats pass; skipped never counts against.
    Verdict overall() const;
    // 0 all pass, 1 any fail, 2 any inconclusive.
    int exitCode() const;

    // Byte-deterministic for fixed inputs and budgets, so no timing inside.
    std::string toJson() const;
    // Human-readable report, timing included.
    std::string toText() const;
};

// Runs both judgments over an instance suite. For every annotated index k,
// the annotation must hold in each stable model of each prefix from k to
// the full program, per instance; and every interpretation over the
// prefix's predicates (input atoms fixed to the instance) satisfying the
// assertions recorded up to k must be a stable model of that prefix.
// Instances are validated first; violations throw InputError, as does an
// empty suite for a program that declares inputs. Programs without inputs
// run against one implicit empty instance.
CheckReport runCheck(const Program& p, const std::vector<InputInstance>& instances,
                     const CheckOptions& opts = {});

// Corpus-level corollary check for the Hamiltonian program: the in/2
// projections of its stable models, compared with the cycles of the
// instance graph recomputed by direct permutation search.
struct HamiltonianComparison {
    using EdgeSet = std::set<std::pair<std::string, std::string>>;
    std::vector<EdgeSet> fromModels;  // sorted, deduplicated
    std::vector<EdgeSet> fromOracle;

    bool agree() const { return fromModels == fromOracle; }
};

HamiltonianComparison hamiltonianCorrectness(const Program& p, const InputInstance& instance,
                                             const EnumerationBudget& budget = {});

}  // namespace achieve
