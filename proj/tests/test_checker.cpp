#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "achieve/assertions.hpp"
#include "achieve/checker.hpp"
#include "achieve/engine.hpp"
#include "achieve/error.hpp"
#include "achieve/grounder.hpp"
#include "achieve/parser.hpp"
#include "json.hpp"
#include "oracles/oracles.hpp"

using namespace achieve;

namespace {

std::filesystem::path corpusDir() {
    if (const char* env = std::getenv("ACHIEVE_CORPUS_DIR")) {
        return env;
    }
    return "corpus";
}

Program load(const std::string& file) {
    return parseProgramFile((corpusDir() / file).string());
}

InputInstance loadInstance(const std::string& file, const InputSpec& spec) {
    return parseInstanceFile((corpusDir() / "instances" / file).string(), spec);
}

std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

const AnnotationReport& annotation(const CheckReport& r, int index) {
    for (const AnnotationReport& a : r.annotations)
        if (a.index == index) return a;
    REQUIRE(false);
    return r.annotations.front();
}

std::vector<std::string> atomStrings(const Interpretation& m) {
    std::vector<std::string> out;
    for (const Atom& a : m) out.push_back(a.str());
    return out;
}

std::size_t prefixCount(const CheckReport& r, const std::string& instance, int prefix) {
    for (const PrefixModelCount& pm : r.prefixModels)
        if (pm.instance == instance && pm.prefix == prefix) return pm.models;
    REQUIRE(false);
    return 0;
}

}  // namespace

TEST_CASE("the queens record passes both judgments at n = 4") {
    Program p = load("nqueens.lp");
    InputInstance n4 = loadInstance("n4.facts", p.input);
    CheckReport r = runCheck(p, {n4});

    REQUIRE(r.annotations.size() == 6);
    for (const AnnotationReport& a : r.annotations) {
        CHECK(a.achievement.verdict == Verdict::Pass);
        CHECK(a.completeness.verdict == Verdict::Pass);
        CHECK_FALSE(a.achievement.counterexample.has_value());
        CHECK_FALSE(a.completeness.counterexample.has_value());
    }
    CHECK(r.overall() == Verdict::Pass);
    CHECK(r.exitCode() == 0);

    // The pinned row and col extensions leave only the queen subsets, so the
    // search space at index 3 is one binomial coefficient.
    CHECK(binom(16, 4) == 1820);
    std::vector<std::size_t> candidates;
    for (const AnnotationReport& a : r.annotations)
        candidates.push_back(a.completeness.candidates);
    CHECK(candidates == std::vector<std::size_t>{1, 1, 1820, 1820, 1820, 1820});

    CHECK(prefixCount(r, "n4", 3) == 1820);
    CHECK(prefixCount(r, "n4", 4) == 256);
    CHECK(prefixCount(r, "n4", 5) == 24);
    CHECK(prefixCount(r, "n4", 6) == 2);
    for (const PrefixModelCount& pm : r.prefixModels) CHECK(pm.exact);

    REQUIRE(r.universes.size() == 1);
    CHECK(r.universes[0].terms == 4);

    // Second route: re-enumerate each prefix and re-evaluate every earlier
    // annotation directly, without the checker's bookkeeping.
    std::vector<Term> universe = herbrandTerms(p, n4);
    for (int kp = 3; kp <= 6; ++kp) {
        std::vector<Interpretation> models = enumerateStableModels(ground(prefix(p, kp), n4));
        for (const Interpretation& m : models) {
            EvalContext ctx{&n4, &m, &universe, &p.input};
            for (const auto& [k, entry] : p.record.entries())
                if (k <= kp) CHECK(evalAssertion(entry.assertion, ctx));
        }
    }
}

TEST_CASE("moving the col annotation to the front fails achievement with a prefix-1 model") {
    Program p = load("nqueens.lp");
    InputInstance n4 = loadInstance("n4.facts", p.input);

    Program q = p;
    RecordEntry colEntry = *q.record.find(2);
    q.record.erase(2);
    q.record.set(1, colEntry);

    CheckReport r = runCheck(q, {n4});
    REQUIRE(r.annotations.size() == 5);

    const AnnotationReport& first = annotation(r, 1);
    CHECK(first.achievement.verdict == Verdict::Fail);
    REQUIRE(first.achievement.counterexample.has_value());
    CHECK(first.achievement.counterexample->prefix == 1);
    CHECK(first.achievement.counterexample->instance == "n4");
    CHECK(atomStrings(first.achievement.counterexample->model) ==
          std::vector<std::string>{"row(1)", "row(2)", "row(3)", "row(4)"});
    // No interpretation over the first prefix's only predicate can give col
    // the demanded extension, so completeness at 1 holds vacuously.
    CHECK(first.completeness.verdict == Verdict::Pass);
    CHECK(first.completeness.candidates == 16);

    // With the row annotation gone nothing pins row/1 any more, so later
    // prefixes admit satisfying interpretations that are not stable.
    const AnnotationReport& third = annotation(r, 3);
    CHECK(third.achievement.verdict == Verdict::Pass);
    CHECK(third.completeness.verdict == Verdict::Fail);
    REQUIRE(third.completeness.counterexample.has_value());
    const Interpretation& bad = third.completeness.counterexample->interpretation;
    std::vector<Term> universe = herbrandTerms(q, n4);
    EvalContext ctx{&n4, &bad, &universe, &q.input};
    CHECK(evalAssertion(aStar(q.record, 3), ctx));
    CHECK_FALSE(isStable(ground(prefix(q, 3), n4), bad));

    CHECK(r.overall() == Verdict::Fail);
    CHECK(r.exitCode() == 1);

    // Identical verdicts in both formats, and byte-identical JSON across runs.
    CHECK(r.toJson() == runCheck(q, {n4}).toJson());
    nlohmann::json doc = nlohmann::json::parse(r.toJson());
    CHECK(doc["program"] == "nqueens");
    CHECK(doc["instances"] == nlohmann::json::array({"n4"}));
    REQUIRE(doc["annotations"].size() == r.annotations.size());
    for (std::size_t i = 0; i < r.annotations.size(); ++i) {
        CHECK(doc["annotations"][i]["index"] == r.annotations[i].index);
        CHECK(doc["annotations"][i]["achievement"]["verdict"] ==
              str(r.annotations[i].achievement.verdict));
        CHECK(doc["annotations"][i]["completeness"]["verdict"] ==
              str(r.annotations[i].completeness.verdict));
    }
    CHECK(doc["annotations"][0]["achievement"]["counterexample"]["prefix"] == 1);
    CHECK(doc["annotations"][0]["achievement"]["counterexample"]["model"].size() == 4);
    std::string text = r.toText();
    CHECK(text.find("overall: fail") != std::string::npos);
    CHECK(text.find("stable model of prefix 1") != std::string::npos);
    CHECK(text.find("checked on 1 instance(s)") != std::string::npos);
}

TEST_CASE("deleting the diagonal annotation flips completeness at the full program") {
    Program p = load("nqueens.lp");
    InputInstance n4 = loadInstance("n4.facts", p.input);

    Program q = p;
    q.record.erase(6);

    CheckReport r = runCheck(q, {n4});
    REQUIRE(r.annotations.size() == 6);
    for (int k = 1; k <= 5; ++k) {
        CHECK(annotation(r, k).achievement.verdict == Verdict::Pass);
        CHECK(annotation(r, k).completeness.verdict == Verdict::Pass);
    }

    // Index 6 is no longer annotated, but the record still has to account
    // for the whole program; the checker reports it with achievement skipped.
    const AnnotationReport& last = annotation(r, 6);
    CHECK(last.achievement.verdict == Verdict::Skipped);
    CHECK(last.completeness.verdict == Verdict::Fail);
    REQUIRE(last.completeness.counterexample.has_value());
    CHECK(last.completeness.candidates > 0);

    // The reported interpretation satisfies everything recorded yet is not
    // stable: queens clash on a diagonal only.
    const Interpretation& bad = last.completeness.counterexample->interpretation;
    std::vector<Term> universe = herbrandTerms(q, n4);
    EvalContext ctx{&n4, &bad, &universe, &q.input};
    CHECK(evalAssertion(aStar(q.record, 6), ctx));
    CHECK_FALSE(isStable(ground(prefix(q, 6), n4), bad));
    CHECK_FALSE(evalAssertion(p.record.find(6)->assertion, ctx));

    CHECK(r.overall() == Verdict::Fail);
    CHECK(r.exitCode() == 1);
}

TEST_CASE("hamiltonian projections equal the permutation cycles") {
    Program ham = load("hamiltonian.lp");

    for (const auto& [file, cycles] : {std::pair<std::string, std::size_t>{"triangle.facts", 2},
                                       {"k4.facts", 6},
                                       {"path.facts", 0}}) {
        CAPTURE(file);
        InputInstance inst = loadInstance(file, ham.input);
        HamiltonianComparison cmp = hamiltonianCorrectness(ham, inst);
        CHECK(cmp.agree());
        CHECK(cmp.fromModels.size() == cycles);
        CHECK(cmp.fromOracle.size() == cycles);

        // Cross-check the built-in permutation search against the test
        // oracle library.
        std::vector<std::string> vertices;
        oracles::EdgeSet edges;
        for (const Atom& a : inst.facts) {
            if (a.pred() == "vertex") vertices.push_back(a.args()[0].str());
            if (a.pred() == "edge") edges.insert({a.args()[0].str(), a.args()[1].str()});
        }
        std::vector<oracles::EdgeSet> expect =
            oracles::hamiltonianCycles(vertices, edges, inst.binding("v0")->str());
        std::sort(expect.begin(), expect.end());
        CHECK(cmp.fromOracle == expect);
        CHECK(cmp.fromModels == expect);
    }
}

TEST_CASE("the hamiltonian record passes on the triangle") {
    Program ham = load("hamiltonian.lp");
    InputInstance tri = loadInstance("triangle.facts", ham.input);

    CheckReport r = runCheck(ham, {tri});
    REQUIRE(r.annotations.size() == 4);
    for (const AnnotationReport& a : r.annotations) {
        CHECK(a.achievement.verdict == Verdict::Pass);
        CHECK(a.completeness.verdict == Verdict::Pass);
    }
    CHECK(prefixCount(r, "triangle", 5) == 2);
    CHECK(r.exitCode() == 0);

    CheckOptions completeOnly;
    completeOnly.achievements = false;
    CheckReport c = runCheck(ham, {tri}, completeOnly);
    CHECK(c.prefixModels.empty());
    for (const AnnotationReport& a : c.annotations) {
        CHECK(a.achievement.verdict == Verdict::Skipped);
        CHECK(a.completeness.verdict == Verdict::Pass);
    }
    CHECK(c.overall() == Verdict::Pass);
}

TEST_CASE("a trivial record is always an achievement") {
    Program p = load("nqueens.lp");
    InputInstance n4 = loadInstance("n4.facts", p.input);

    Program q = p;
    q.record = Record{};
    for (int k = 1; k <= 6; ++k)
        q.record.set(k, RecordEntry{parseAssertion("true"), "true", false, {}});

    CheckOptions achievementsOnly;
    achievementsOnly.completeness = false;
    CheckReport r = runCheck(q, {n4}, achievementsOnly);
    REQUIRE(r.annotations.size() == 6);
    for (const AnnotationReport& a : r.annotations) {
        CHECK(a.achievement.verdict == Verdict::Pass);
        CHECK(a.completeness.verdict == Verdict::Skipped);
    }
    CHECK(r.overall() == Verdict::Pass);
    CHECK(r.exitCode() == 0);

    std::vector<std::size_t> models;
    for (const PrefixModelCount& pm : r.prefixModels) models.push_back(pm.models);
    CHECK(models == std::vector<std::size_t>{1, 1, 1820, 256, 24, 2});
}

TEST_CASE("budgets surface as inconclusive, never as a pass") {
    Program p = load("nqueens.lp");
    InputInstance n4 = loadInstance("n4.facts", p.input);

    CheckOptions opts;
    opts.budget.maxModels = 100;  // prefixes 3 and 4 have more
    CheckReport r = runCheck(p, {n4}, opts);

    for (int k : {1, 2, 3, 4}) {
        const AnnotationReport& a = annotation(r, k);
        CHECK(a.achievement.verdict == Verdict::Inconclusive);
        CHECK_FALSE(a.achievement.note.empty());
    }
    for (int k : {5, 6}) CHECK(annotation(r, k).achievement.verdict == Verdict::Pass);

    CHECK(annotation(r, 1).completeness.verdict == Verdict::Pass);
    CHECK(annotation(r, 2).completeness.verdict == Verdict::Pass);
    CHECK(annotation(r, 3).completeness.verdict == Verdict::Inconclusive);
    CHECK(annotation(r, 4).completeness.verdict == Verdict::Inconclusive);
    CHECK(annotation(r, 5).completeness.verdict == Verdict::Pass);
    CHECK(annotation(r, 6).completeness.verdict == Verdict::Pass);

    for (const PrefixModelCount& pm : r.prefixModels) {
        if (pm.prefix == 3 || pm.prefix == 4) {
            CHECK_FALSE(pm.exact);
            CHECK(pm.models == 100);
        } else {
            CHECK(pm.exact);
        }
    }

    CHECK(r.overall() == Verdict::Inconclusive);
    CHECK(r.exitCode() == 2);
    nlohmann::json doc = nlohmann::json::parse(r.toJson());
    CHECK(doc["annotations"][0]["achievement"]["verdict"] == "inconclusive");
    CHECK(doc["stats"]["prefixModels"][2]["exact"] == false);
}

TEST_CASE("programs without inputs run against one implicit empty instance") {
    Program p = parseProgram("p :- not q.\n%@ achieved: p and not q.\n");
    CheckReport r = runCheck(p, {});

    CHECK(r.instances == std::vector<std::string>{"(empty)"});
    REQUIRE(r.annotations.size() == 1);
    CHECK(r.annotations[0].achievement.verdict == Verdict::Pass);
    CHECK(r.annotations[0].completeness.verdict == Verdict::Pass);
    CHECK(r.annotations[0].completeness.candidates == 4);
    REQUIRE(r.universes.size() == 1);
    CHECK(r.universes[0].terms == 0);
    CHECK(prefixCount(r, "(empty)", 1) == 1);

    Program ham = load("hamiltonian.lp");
    CHECK_THROWS_AS(runCheck(ham, {}), InputError);

    InputInstance bad = loadInstance("triangle.facts", ham.input);
    bad.bindings.clear();
    CHECK_THROWS_WITH_AS(runCheck(ham, {bad}),
                         doctest::Contains("placeholder 'v0' is unbound"), InputError);
}

TEST_CASE("n = 5 passes with the same candidate law") {
    Program p = load("nqueens.lp");
    InputInstance n5 = loadInstance("n5.facts", p.input);
    CheckReport r = runCheck(p, {n5});

    for (const AnnotationReport& a : r.annotations) {
        CHECK(a.achievement.verdict == Verdict::Pass);
        CHECK(a.completeness.verdict == Verdict::Pass);
    }
    CHECK(binom(25, 5) == 53130);
    CHECK(annotation(r, 3).completeness.candidates == 53130);
    CHECK(prefixCount(r, "n5", 3) == 53130);
    CHECK(prefixCount(r, "n5", 6) == 10);
    CHECK(r.exitCode() == 0);
}
