#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "achieve/engine.hpp"
#include "achieve/error.hpp"
#include "achieve/grounder.hpp"
#include "achieve/parser.hpp"

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

GroundProgram groundText(const std::string& text) {
    Program p = parseProgram(text);
    return ground(prefix(p, p.size()), {});
}

GroundProgram groundCorpus(const std::string& program, const std::string& instance) {
    Program p = load(program);
    InputInstance in = instance.empty() ? InputInstance{} : loadInstance(instance, p.input);
    return ground(prefix(p, p.size()), in);
}

Atom at(const std::string& pred) {
    return Atom(pred, {});
}

Interpretation interp(std::vector<Atom> atoms) {
    return Interpretation(std::move(atoms));
}

std::set<std::string> ruleStrings(const GroundProgram& gp) {
    std::set<std::string> out;
    for (const GroundRule& r : gp.rules) out.insert(r.str());
    return out;
}

// Projection of a model onto one predicate, as printed atoms.
std::set<std::string> project(const Interpretation& m, const std::string& pred) {
    std::set<std::string> out;
    for (const Atom& a : m)
        if (a.pred() == pred) out.insert(a.str());
    return out;
}

}  // namespace

TEST_CASE("choice translation introduces complement rules and a bound") {
    GroundProgram gp = translateChoices(groundText("1 { a; b } 1."));
    CHECK(ruleStrings(gp) == std::set<std::string>{
                                 "a :- not __c_a.",
                                 "__c_a :- not a.",
                                 "b :- not __c_b.",
                                 "__c_b :- not b.",
                             });
    REQUIRE(gp.cardConstraints.size() == 1);
    const CardConstraint& cc = gp.cardConstraints[0];
    CHECK(cc.lower == 1);
    CHECK(cc.upper == 1);
    CHECK(cc.atoms == std::vector<Atom>{at("a"), at("b")});
    CHECK(cc.body.empty());

    // The choice body is carried into both complement rules and the bound.
    GroundProgram guarded = translateChoices(groundText("c. 0 { a } 1 :- c."));
    CHECK(ruleStrings(guarded) == std::set<std::string>{
                                      "c.",
                                      "a :- c, not __c_a.",
                                      "__c_a :- c, not a.",
                                  });
    REQUIRE(guarded.cardConstraints.size() == 1);
    CHECK(guarded.cardConstraints[0].body == std::vector<GroundLiteral>{{false, at("c")}});

    // Choice-free programs pass through untouched.
    GroundProgram plain = groundText("p(1). q(X) :- p(X).");
    CHECK(ruleStrings(translateChoices(plain)) == ruleStrings(plain));
}

TEST_CASE("reduct drops rules blocked by the interpretation") {
    GroundProgram gp = groundText("p :- not q. q :- not p.");

    GroundProgram rp = reduct(gp, interp({at("p")}));
    CHECK(ruleStrings(rp) == std::set<std::string>{"p."});
    CHECK(minimalModel(rp) == interp({at("p")}));

    GroundProgram rq = reduct(gp, interp({at("q")}));
    CHECK(ruleStrings(rq) == std::set<std::string>{"q."});

    GroundProgram rnone = reduct(gp, interp({}));
    CHECK(ruleStrings(rnone) == std::set<std::string>{"p.", "q."});

    GroundProgram rboth = reduct(gp, interp({at("p"), at("q")}));
    CHECK(rboth.rules.empty());

    CHECK_THROWS_AS(reduct(groundText("0 { a } 1."), interp({})), Error);
}

TEST_CASE("stability of the textbook two-atom programs") {
    GroundProgram even = groundText("p :- not q. q :- not p.");
    CHECK(isStable(even, interp({at("p")})));
    CHECK(isStable(even, interp({at("q")})));
    CHECK_FALSE(isStable(even, interp({})));
    CHECK_FALSE(isStable(even, interp({at("p"), at("q")})));
    CHECK(enumerateStableModels(even) ==
          std::vector<Interpretation>{interp({at("p")}), interp({at("q")})});

    GroundProgram self = groundText("a :- not a.");
    CHECK_FALSE(isStable(self, interp({})));
    CHECK_FALSE(isStable(self, interp({at("a")})));
    CHECK(enumerateStableModels(self).empty());
    CHECK(enumerateBruteForce(self).empty());

    // Odd negative cycle: no stable model either.
    GroundProgram odd = groundText("a :- not b. b :- not c. c :- not a.");
    CHECK(enumerateStableModels(odd).empty());
    CHECK(enumerateBruteForce(odd).empty());
}

TEST_CASE("minimal model of a definite program") {
    GroundProgram gp = groundText("p(a). q(X) :- p(X).");
    CHECK(minimalModel(gp) == interp({Atom("p", {Term::symbol("a")}),
                                      Atom("q", {Term::symbol("a")})}));
    CHECK_THROWS_AS(minimalModel(groundText("p :- not q.")), Error);
}

TEST_CASE("choices enumerate subsets within bounds") {
    CHECK(enumerateStableModels(groundText("0 { a } 1.")) ==
          std::vector<Interpretation>{interp({}), interp({at("a")})});

    CHECK(enumerateStableModels(groundText("1 { a; b } 1.")) ==
          std::vector<Interpretation>{interp({at("a")}), interp({at("b")})});

    CHECK(enumerateStableModels(groundText("c. 2 { a; b } 2 :- c.")) ==
          std::vector<Interpretation>{interp({at("a"), at("b"), at("c")})});

    // A choice whose elements ground away entirely cannot meet a positive
    // lower bound, so the program has no models at all.
    CHECK(enumerateStableModels(groundText("1 { p(X) : q(X) } 1.")).empty());

    // Unsupported atoms stay false even when the interpretation names them.
    GroundProgram gp = groundText("0 { a } 1. b :- a.");
    CHECK(isStable(gp, interp({at("a"), at("b")})));
    CHECK_FALSE(isStable(gp, interp({at("a")})));
    CHECK_FALSE(isStable(gp, interp({at("b")})));
}

TEST_CASE("derived atoms follow the decision atoms") {
    GroundProgram gp = groundText("0 { a } 1. b :- a. c :- not a.");
    CHECK(enumerateStableModels(gp) ==
          std::vector<Interpretation>{interp({at("a"), at("b")}), interp({at("c")})});
    CHECK(enumerateBruteForce(gp) == enumerateStableModels(gp));
}

TEST_CASE("stability checker is reusable across interpretations") {
    GroundProgram gp = groundCorpus("nqueens.lp", "n4.facts");
    std::vector<Interpretation> models = enumerateStableModels(gp);
    REQUIRE(models.size() == 2);

    StableChecker checker(gp);
    for (const Interpretation& m : models) CHECK(checker.isStable(m));

    // Dropping one queen breaks the cardinality bound.
    std::vector<Atom> fewer;
    bool dropped = false;
    for (const Atom& a : models[0]) {
        if (!dropped && a.pred() == "queen") {
            dropped = true;
            continue;
        }
        fewer.push_back(a);
    }
    CHECK_FALSE(checker.isStable(Interpretation(fewer)));

    // An atom outside the program's reach can never be in a model.
    std::vector<Atom> extra(models[0].atoms());
    extra.push_back(at("bogus"));
    CHECK_FALSE(checker.isStable(Interpretation(extra)));
}

TEST_CASE("corpus programs have the expected model counts") {
    CHECK(enumerateStableModels(groundCorpus("8queens.lp", "")).size() == 92);
    CHECK(enumerateStableModels(groundCorpus("nqueens.lp", "n4.facts")).size() == 2);
    CHECK(enumerateStableModels(groundCorpus("nqueens.lp", "n5.facts")).size() == 10);
    CHECK(enumerateStableModels(groundCorpus("nqueens.lp", "n6.facts")).size() == 4);
    CHECK(enumerateStableModels(groundCorpus("hamiltonian.lp", "triangle.facts")).size() == 2);
    CHECK(enumerateStableModels(groundCorpus("hamiltonian.lp", "k4.facts")).size() == 6);
    CHECK(enumerateStableModels(groundCorpus("hamiltonian.lp", "path.facts")).empty());
    CHECK(enumerateStableModels(groundCorpus("trees.lp", "k1.facts")).size() == 1);
    CHECK(enumerateStableModels(groundCorpus("trees.lp", "k2.facts")).size() == 3);
    CHECK(enumerateStableModels(groundCorpus("sca.lp", "s3n2.facts")).empty());
    CHECK(enumerateStableModels(groundCorpus("sca.lp", "s3n5.facts")).empty());
    CHECK(enumerateStableModels(groundCorpus("sca.lp", "s3n6.facts")).size() == 720);
    CHECK(enumerateStableModels(groundCorpus("borda.lp", "election1.facts")).size() == 1);
}

TEST_CASE("hamiltonian models are the two triangle tours") {
    std::vector<Interpretation> models =
        enumerateStableModels(groundCorpus("hamiltonian.lp", "triangle.facts"));
    REQUIRE(models.size() == 2);
    std::set<std::set<std::string>> tours;
    for (const Interpretation& m : models) tours.insert(project(m, "in"));
    CHECK(tours == std::set<std::set<std::string>>{
                       {"in(a,b)", "in(b,c)", "in(c,a)"},
                       {"in(a,c)", "in(b,a)", "in(c,b)"},
                   });
}

TEST_CASE("borda model carries the aggregate results") {
    std::vector<Interpretation> models =
        enumerateStableModels(groundCorpus("borda.lp", "election1.facts"));
    REQUIRE(models.size() == 1);
    CHECK(project(models[0], "winner") == std::set<std::string>{"winner(1)"});
    CHECK(project(models[0], "score") ==
          std::set<std::string>{"score(1,4)", "score(2,3)", "score(3,2)"});
}

TEST_CASE("search agrees with exhaustive subset checking") {
    const std::vector<std::string> programs = {
        "p :- not q. q :- not p.",
        "a :- not b. b :- not c. c :- not a.",
        "0 { a } 1. b :- a. c :- not a.",
        "1 { a; b } 1. d :- a, not e. e :- b.",
        "p(1..3). 1 { q(X) : p(X) } 2. :- q(1), q(2).",
        "0 { a } 1. 0 { b } 1. :- a, not b.",
    };
    for (const std::string& text : programs) {
        CAPTURE(text);
        GroundProgram gp = groundText(text);
        CHECK(enumerateStableModels(gp) == enumerateBruteForce(gp));
    }

    GroundProgram tri = groundCorpus("hamiltonian.lp", "triangle.facts");
    CHECK(enumerateStableModels(tri) == enumerateBruteForce(tri));
    GroundProgram k1 = groundCorpus("trees.lp", "k1.facts");
    CHECK(enumerateStableModels(k1) == enumerateBruteForce(k1));
}

TEST_CASE("dead comparison rules do not disturb the models") {
    Program nq = load("nqueens.lp");
    InputInstance n4 = loadInstance("n4.facts", nq.input);
    GrounderOptions keep;
    keep.keepFalseComparisonRules = true;
    GroundProgram lean = ground(prefix(nq, nq.size()), n4);
    GroundProgram full = ground(prefix(nq, nq.size()), n4, keep);
    CHECK(full.rules.size() > lean.rules.size());
    CHECK(enumerateStableModels(lean) == enumerateStableModels(full));
}

TEST_CASE("budgets abort the search with counts attached") {
    GroundProgram gp = groundText("0 { a } 1. 0 { b } 1.");

    EnumerationBudget tight;
    tight.maxCandidates = 2;
    try {
        enumerateStableModels(gp, tight);
        FAIL("expected BudgetExceeded");
    } catch (const BudgetExceeded& e) {
        CHECK(e.candidates == 3);
        CHECK(e.models == 2);
    }

    EnumerationBudget oneModel;
    oneModel.maxModels = 1;
    CHECK_THROWS_AS(enumerateStableModels(gp, oneModel), BudgetExceeded);

    EnumerationBudget bruteTight;
    bruteTight.maxCandidates = 3;
    CHECK_THROWS_AS(enumerateBruteForce(gp, bruteTight), BudgetExceeded);
}

TEST_CASE("streaming stops when the callback declines") {
    GroundProgram gp = groundText("1 { a; b } 1.");
    std::vector<Interpretation> seen;
    enumerateStableModels(gp, {}, [&](const Interpretation& m) {
        seen.push_back(m);
        return false;
    });
    CHECK(seen.size() == 1);
}

TEST_CASE("enumeration is deterministic and canonically ordered") {
    GroundProgram gp = groundCorpus("nqueens.lp", "n5.facts");
    std::vector<Interpretation> first = enumerateStableModels(gp);
    std::vector<Interpretation> second = enumerateStableModels(gp);
    CHECK(first == second);
    CHECK(std::is_sorted(first.begin(), first.end()));
}
