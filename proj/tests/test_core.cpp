#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "achieve/error.hpp"
#include "achieve/parser.hpp"
#include "achieve/program.hpp"

using namespace achieve;

namespace {

std::filesystem::path corpusDir() {
    if (const char* env = std::getenv("ACHIEVE_CORPUS_DIR")) {
        return env;
    }
    return "corpus";
}

std::vector<Term> expand(const Term& t) {
    std::vector<Term> out;
    expandGroundTerm(t, out);
    return out;
}

}  // namespace

TEST_CASE("ground term evaluation") {
    Term sum = Term::arith(ArithOp::Add,
                           {Term::integer(2),
                            Term::arith(ArithOp::Mul, {Term::integer(3), Term::integer(4)})});
    CHECK(evalGroundTerm(sum) == Term::integer(14));

    Term abs = Term::arith(ArithOp::Abs,
                           {Term::arith(ArithOp::Sub, {Term::integer(2), Term::integer(7)})});
    CHECK(evalGroundTerm(abs) == Term::integer(5));

    CHECK(evalGroundTerm(Term::arith(ArithOp::Div, {Term::integer(7), Term::integer(2)})) ==
          Term::integer(3));
    CHECK_THROWS_AS(
        evalGroundTerm(Term::arith(ArithOp::Div, {Term::integer(1), Term::integer(0)})),
        GroundingError);
}

TEST_CASE("ground term expansion") {
    CHECK(expand(Term::interval(Term::integer(1), Term::integer(3))) ==
          std::vector<Term>{Term::integer(1), Term::integer(2), Term::integer(3)});
    CHECK(expand(Term::interval(Term::integer(3), Term::integer(1))).empty());
    CHECK(expand(Term::pool({Term::integer(1), Term::integer(5)})) ==
          std::vector<Term>{Term::integer(1), Term::integer(5)});

    // Intervals expand through enclosing tuples.
    Term pair = Term::tuple({Term::interval(Term::integer(1), Term::integer(2)),
                             Term::symbol("a")});
    CHECK(expand(pair) == std::vector<Term>{Term::tuple({Term::integer(1), Term::symbol("a")}),
                                            Term::tuple({Term::integer(2), Term::symbol("a")})});
}

TEST_CASE("atoms and interpretations") {
    Atom q12("queen", {Term::integer(1), Term::integer(2)});
    CHECK(q12.str() == "queen(1,2)");
    CHECK(Atom("go", {}).str() == "go");
    CHECK(q12.sig().str() == "queen/2");

    Atom q21("queen", {Term::integer(2), Term::integer(1)});
    Atom c1("col", {Term::integer(1)});
    CHECK(q12 < q21);
    CHECK(c1 < q12);

    Interpretation m({q21, q12, q12, c1});
    CHECK(m.size() == 3);
    CHECK(m.atoms() == std::vector<Atom>{c1, q12, q21});
    CHECK(m.contains(q12));
    CHECK(!m.contains(Atom("queen", {Term::integer(3), Term::integer(3)})));
    CHECK(m.preds() == std::set<Sig>{{"col", 1}, {"queen", 2}});
}

TEST_CASE("assertion parsing round-trips") {
    auto rt = [](const std::string& text) { return parseAssertion(text).str(); };

    // These forms print back exactly as written.
    for (const std::string text : {
             "row/1 = {1..8}",
             "forall (I,J) in queen/2: I in {1..8} and J in {1..8}",
             "(v0,Y) in closure(in/2)",
             "reached/1 = { Y : (v0,Y) in closure(in/2) }",
             "N = sum{S : posScore(_,C,S)}",
             "count{p(X)} = 2",
             "not (Y > Y1 and X < X1)",
             "exists! Y: in(X,Y)",
             "in/2 <= edge/2",
             "|I-II| != |J-JJ|",
             "(1+2)*3 = 9",
             "forall X in sym/1: X = 1 or X = 2 or X = 3",
         }) {
        CAPTURE(text);
        CHECK(rt(text) == text);
    }

    // A quantifier inside a conjunction gains parentheses; printing is then
    // a fixpoint.
    std::string mixed = "|queen/2| = 8 and forall (I,J) in queen/2: I in {1..8}";
    std::string printed = rt(mixed);
    CHECK(printed == "|queen/2| = 8 and (forall (I,J) in queen/2: I in {1..8})");
    CHECK(rt(printed) == printed);

    // Multiplication binds tighter than addition and prints its grouping.
    CHECK(rt("1+2*3 = 7") == "1+(2*3) = 7");

    // A trailing period is accepted.
    CHECK(rt("row/1 = {1..4}.") == "row/1 = {1..4}");
}

TEST_CASE("assertion parsing rejects malformed input") {
    CHECK_THROWS_AS(parseAssertion("p("), ParseError);
    CHECK_THROWS_AS(parseAssertion("1 = 1 extra"), ParseError);
    CHECK_THROWS_AS(parseAssertion("forall _ in p/1: true"), ParseError);
    CHECK_THROWS_AS(parseAssertion("p(1) = 2"), ParseError);

    // name/INT is always an extension, never division.
    Assertion ext = parseAssertion("x/2 = {}");
    REQUIRE(ext.kind == AFormula::Kind::Cmp);
    CHECK(ext.exprs[0].kind == AExpr::Kind::Extension);
    CHECK(ext.exprs[0].name == "x");
    CHECK(ext.exprs[0].arity == 2);
}

TEST_CASE("corpus programs parse and print idempotently") {
    struct Expect {
        std::string file;
        int rules;
        std::set<int> recorded;
        bool reconstructed;
    };
    const std::vector<Expect> table = {
        {"8queens.lp", 6, {1, 2, 3, 4, 5, 6}, false},
        {"nqueens.lp", 6, {1, 2, 3, 4, 5, 6}, false},
        {"hamiltonian.lp", 5, {1, 2, 4, 5}, false},
        {"trees.lp", 10, {1, 2, 3, 4, 6, 7, 8, 9, 10}, true},
        {"sca.lp", 6, {1, 2, 3, 4, 5, 6}, true},
        {"borda.lp", 4, {1, 2, 3, 4}, true},
    };
    for (const auto& e : table) {
        CAPTURE(e.file);
        Program p = parseProgramFile((corpusDir() / e.file).string());
        CHECK(p.size() == e.rules);
        std::set<int> keys;
        for (const auto& [index, entry] : p.record.entries()) {
            keys.insert(index);
            CHECK(entry.reconstructed == e.reconstructed);
        }
        CHECK(keys == e.recorded);

        std::string s1 = p.str();
        CHECK(parseProgram(s1, p.name).str() == s1);
    }
}

TEST_CASE("corpus input declarations") {
    Program ham = parseProgramFile((corpusDir() / "hamiltonian.lp").string());
    CHECK(ham.input.predicates == std::set<Sig>{{"edge", 2}, {"vertex", 1}});
    REQUIRE(ham.input.placeholders.size() == 1);
    CHECK(ham.input.placeholders[0].name == "v0");
    CHECK(ham.input.placeholders[0].conditionText == "v0 in vertex/1");

    Program sca = parseProgramFile((corpusDir() / "sca.lp").string());
    CHECK(sca.input.predicates.empty());
    REQUIRE(sca.input.placeholders.size() == 2);
    CHECK(sca.input.placeholders[0].name == "s");
    CHECK(sca.input.placeholders[1].name == "n");

    Program borda = parseProgramFile((corpusDir() / "borda.lp").string());
    CHECK(borda.input.predicates == std::set<Sig>{{"p", 3}, {"votecount", 2}});
}

TEST_CASE("prefixes, preds and the running conjunction") {
    Program p = parseProgramFile((corpusDir() / "nqueens.lp").string());

    CHECK(prefix(p, 0).length() == 0);
    CHECK(prefix(p, 6).length() == 6);
    CHECK_THROWS_AS(prefix(p, 7), RangeError);
    CHECK_THROWS_AS(prefix(p, -1), RangeError);

    CHECK(preds(prefix(p, 0)).empty());
    CHECK(preds(prefix(p, 2)) == std::set<Sig>{{"col", 1}, {"row", 1}});
    CHECK(preds(prefix(p, 3)) == std::set<Sig>{{"col", 1}, {"queen", 2}, {"row", 1}});

    for (int k = 0; k < p.size(); ++k) {
        auto lo = preds(prefix(p, k));
        auto hi = preds(prefix(p, k + 1));
        CHECK(std::includes(hi.begin(), hi.end(), lo.begin(), lo.end()));
    }

    // Declared input predicates are present even in the empty prefix.
    Program ham = parseProgramFile((corpusDir() / "hamiltonian.lp").string());
    CHECK(preds(prefix(ham, 0)) == std::set<Sig>{{"edge", 2}, {"vertex", 1}});

    CHECK(aStar(p.record, 0).kind == AFormula::Kind::True);
    CHECK(aStar(p.record, 1).kind == AFormula::Kind::Cmp);
    Assertion a2 = aStar(p.record, 2);
    REQUIRE(a2.kind == AFormula::Kind::And);
    CHECK(a2.kids.size() == 2);
    CHECK(aStar(p.record, 6).kids.size() == 6);

    std::string t2 = aStarText(p.record, 2);
    CHECK(t2.find("row/1") != std::string::npos);
    CHECK(t2.find("col/1") != std::string::npos);

    // Hamiltonian's record skips index 3: a*(3) only collects entries 1, 2.
    CHECK(aStar(ham.record, 3).kids.size() == 2);
}

TEST_CASE("annotation attachment") {
    Program merged = parseProgram(
        "p(1).\n"
        "%@ achieved: 1 in p/1.\n"
        "%@ achieved: |p/1| = 1.\n");
    REQUIRE(merged.record.has(1));
    const RecordEntry* e = merged.record.find(1);
    CHECK(e->text == "(1 in p/1) and (|p/1| = 1)");
    CHECK(e->assertion.kind == AFormula::Kind::And);

    Program cont = parseProgram(
        "p(1). p(2).\n"
        "%@ achieved: 1 in p/1\n"
        "%@ and 2 in p/1.\n");
    CHECK(cont.record.find(2)->text == "1 in p/1 and 2 in p/1");

    Program rec = parseProgram(
        "p(1).\n"
        "%@ reconstructed\n"
        "%@ achieved: 1 in p/1.\n");
    CHECK(rec.record.find(1)->reconstructed);

    CHECK_THROWS_AS(parseProgram("%@ achieved: true.\np(1).\n"), ParseError);
    CHECK_THROWS_AS(parseProgram("p(1).\n%@ reconstructed\n"), ParseError);
    CHECK_THROWS_AS(parseProgram("p(1).\n%@ input: q/1.\n"), ParseError);
    CHECK_THROWS_AS(parseProgram("p(1).\n%@ achieved: 1 in q/1.\n"), ParseError);
}

TEST_CASE("rule parsing") {
    Program p = parseProgram(
        "node(1..3).\n"
        "1 { pick(X,Y) : node(Y), X != Y } 2 :- node(X).\n"
        ":- pick(X,X).\n"
        "Y < X :- pick(X,Y).\n");
    REQUIRE(p.size() == 4);
    CHECK(p.rules[0].isFact());
    CHECK(p.rules[1].isChoice());
    CHECK(p.rules[2].isConstraint());

    // A comparison head becomes its negation at the end of the body.
    CHECK(p.rules[3].isConstraint());
    REQUIRE(p.rules[3].body.size() == 2);
    CHECK(p.rules[3].str() == ":- pick(X,Y), Y >= X.");

    CHECK(parseProgram("{ p(X) : q(X) }. q(1).").rules[0].isChoice());
}

TEST_CASE("rule parsing rejects bad input") {
    CHECK_THROWS_AS(parseProgram("p(X)."), ParseError);
    CHECK_THROWS_AS(parseProgram("p(X) :- q(Y)."), ParseError);
    CHECK_THROWS_AS(parseProgram("p(X) :- not q(X)."), ParseError);
    CHECK_THROWS_WITH_AS(parseProgram("p(X) :- q(Y), not r(X)."),
                         doctest::Contains("unsafe variable 'X'"), ParseError);

    // Equalities propagate bindings before safety is judged.
    CHECK_NOTHROW(parseProgram("p(X) :- q(Y), X = Y+1. q(1)."));

    CHECK_THROWS_WITH_AS(parseProgram("1 { p(X) : not q(X) } 1."),
                         doctest::Contains("choice conditions"), ParseError);
    CHECK_THROWS_WITH_AS(parseProgram("__x(1)."), doctest::Contains("reserved"), ParseError);
    CHECK_THROWS_WITH_AS(parseProgram("#const n=3.\np(n)."),
                         doctest::Contains("instance files"), ParseError);
}

TEST_CASE("instance parsing") {
    Program nq = parseProgramFile((corpusDir() / "nqueens.lp").string());
    InputInstance n4 = parseInstanceFile((corpusDir() / "instances/n4.facts").string(), nq.input);
    CHECK(n4.name == "n4");
    CHECK(n4.facts.empty());
    REQUIRE(n4.binding("n") != nullptr);
    CHECK(*n4.binding("n") == Term::integer(4));

    Program ham = parseProgramFile((corpusDir() / "hamiltonian.lp").string());
    InputInstance tri =
        parseInstanceFile((corpusDir() / "instances/triangle.facts").string(), ham.input);
    CHECK(tri.facts.size() == 9);
    CHECK(std::is_sorted(tri.facts.begin(), tri.facts.end()));
    REQUIRE(tri.binding("v0") != nullptr);
    CHECK(*tri.binding("v0") == Term::symbol("a"));

    // Interval arguments expand into individual facts.
    Program g = parseProgram("%@ input: vertex/1.\np(X) :- vertex(X).");
    InputInstance iv = parseInstance("vertex(1..3).", g.input, "iv");
    CHECK(iv.facts.size() == 3);

    CHECK_THROWS_AS(parseInstance("foo(1).", nq.input, "bad"), InputError);
    CHECK_THROWS_AS(parseInstance("vertex(X).", ham.input, "bad"), InputError);
    CHECK_THROWS_AS(parseInstance("vertex(a).", ham.input, "bad"), InputError);  // v0 unbound
    CHECK_THROWS_AS(parseInstance("#const n=4. #const n=5.", nq.input, "bad"), InputError);
    CHECK_THROWS_AS(parseInstance("#const z=1.", nq.input, "bad"), InputError);
}
