#include "achieve/checker.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <sstream>
#include <utility>

#include "achieve/error.hpp"
#include "achieve/grounder.hpp"
#include "json.hpp"

namespace achieve {

namespace {

using nlohmann::ordered_json;

void appendNote(std::string& note, const std::string& more) {
    if (!note.empty()) note += "; ";
    note += more;
}

std::string joinAtoms(const Interpretation& m) {
    std::string s = "{";
    bool first = true;
    for (const Atom& a : m) {
        s += first ? " " : ", ";
        s += a.str();
        first = false;
    }
    s += first ? "}" : " }";
    return s;
}

ordered_json atomArray(const Interpretation& m) {
    ordered_json arr = ordered_json::array();
    for (const Atom& a : m) arr.push_back(a.str());
    return arr;
}

std::string caveatLine(std::size_t instances) {
    return "checked on " + std::to_string(instances) +
           " instance(s); completeness is bounded to the instance-derived term universe";
}

}  // namespace

std::string str(Verdict v) {
    switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
    case Verdict::Skipped: return "skipped";
    }
    return "?";
}

Verdict CheckReport::overall() const {
    Verdict acc = Verdict::Pass;
    for (const AnnotationReport& a : annotations) {
        for (Verdict v : {a.achievement.verdict, a.completeness.verdict}) {
            if (v == Verdict::Fail) return Verdict::Fail;
            if (v == Verdict::Inconclusive) acc = Verdict::Inconclusive;
        }
    }
    return acc;
}

int CheckReport::exitCode() const {
    switch (overall()) {
    case Verdict::Fail: return 1;
    case Verdict::Inconclusive: return 2;
    default: return 0;
    }
}

std::string CheckReport::toJson() const {
    ordered_json doc;
    doc["program"] = program;
    doc["instances"] = instances;
    ordered_json anns = ordered_json::array();
    for (const AnnotationReport& a : annotations) {
        ordered_json j;
        j["index"] = a.index;
        j["assertion"] = a.assertion;
        ordered_json ach;
        ach["verdict"] = str(a.achievement.verdict);
        if (a.achievement.counterexample) {
            const AchievementCounterexample& c = *a.achievement.counterexample;
            ordered_json cx;
            cx["prefix"] = c.prefix;
            cx["instance"] = c.instance;
            cx["model"] = atomArray(c.model);
            ach["counterexample"] = std::move(cx);
        }
        if (!a.achievement.note.empty()) ach["note"] = a.achievement.note;
        j["achievement"] = std::move(ach);
        ordered_json comp;
        comp["verdict"] = str(a.completeness.verdict);
        if (a.completeness.verdict != Verdict::Skipped)
            comp["candidates"] = a.completeness.candidates;
        if (a.completeness.counterexample) {
            const CompletenessCounterexample& c = *a.completeness.counterexample;
            ordered_json cx;
            cx["instance"] = c.instance;
            cx["interpretation"] = atomArray(c.interpretation);
            comp["counterexample"] = std::move(cx);
        }
        if (!a.completeness.note.empty()) comp["note"] = a.completeness.note;
        j["completeness"] = std::move(comp);
        anns.push_back(std::move(j));
    }
    doc["annotations"] = std::move(anns);
    ordered_json stats;
    stats["caveat"] = caveatLine(instances.size());
    ordered_json unis = ordered_json::array();
    for (const UniverseInfo& u : universes)
        unis.push_back(ordered_json{{"instance", u.instance}, {"terms", u.terms}});
    stats["universes"] = std::move(unis);
    ordered_json pms = ordered_json::array();
    for (const PrefixModelCount& pm : prefixModels)
        pms.push_back(ordered_json{{"instance", pm.instance},
                                   {"prefix", pm.prefix},
                                   {"models", pm.models},
                                   {"exact", pm.exact}});
    stats["prefixModels"] = std::move(pms);
    doc["stats"] = std::move(stats);
    return doc.dump(2) + "\n";
}

std::string CheckReport::toText() const {
    std::ostringstream os;
    os << "program " << program << "\n";
    os << "instances:";
    for (std::size_t i = 0; i < instances.size(); ++i) {
        os << " " << instances[i];
        if (i < universes.size()) os << " (universe: " << universes[i].terms << " terms)";
    }
    os << "\n";
    for (const AnnotationReport& a : annotations) {
        os << "annotation (" << a.index << "): " << a.assertion << "\n";
        os << "  achievement   " << str(a.achievement.verdict);
        if (a.achievement.counterexample) {
            const AchievementCounterexample& c = *a.achievement.counterexample;
            os << "\n    stable model of prefix " << c.prefix << " on " << c.instance
               << " violates the assertion:\n    " << joinAtoms(c.model);
        }
        if (!a.achievement.note.empty()) os << "\n    note: " << a.achievement.note;
        os << "\n";
        os << "  completeness  " << str(a.completeness.verdict);
        if (a.completeness.verdict != Verdict::Skipped)
            os << " (" << a.completeness.candidates << " candidates)";
        if (a.completeness.counterexample) {
            const CompletenessCounterexample& c = *a.completeness.counterexample;
            os << "\n    satisfies the record on " << c.instance
               << " but is not a stable model:\n    " << joinAtoms(c.interpretation);
        }
        if (!a.completeness.note.empty()) os << "\n    note: " << a.completeness.note;
        os << "\n";
    }
    if (!prefixModels.empty()) {
        os << "stable models by prefix:\n";
        for (const PrefixModelCount& pm : prefixModels)
            os << "  " << pm.instance << "  prefix " << pm.prefix << ": "
               << (pm.exact ? "" : ">= ") << pm.models << "\n";
    }
    os << caveatLine(instances.size()) << "\n";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", seconds);
    os << "overall: " << str(overall()) << " (" << buf << " s)\n";
    return os.str();
}

CheckReport runCheck(const Program& p, const std::vector<InputInstance>& instances,
                     const CheckOptions& opts) {
    auto t0 = std::chrono::steady_clock::now();

    std::vector<InputInstance> effective = instances;
    if (effective.empty()) {
        if (!p.input.predicates.empty() || !p.input.placeholders.empty())
            throw InputError(p.name + " declares inputs; provide at least one instance");
        InputInstance empty;
        empty.name = "(empty)";
        effective.push_back(std::move(empty));
    }
    for (const InputInstance& inst : effective) {
        std::vector<std::string> violations = validateInput(inst, p.input);
        if (!violations.empty()) {
            std::string msg = inst.name + ": " + violations.front();
            for (std::size_t i = 1; i < violations.size(); ++i) msg += "; " + violations[i];
            throw InputError(msg);
        }
    }

    CheckReport report;
    report.program = p.name;
    for (const InputInstance& inst : effective) report.instances.push_back(inst.name);

    const int n = static_cast<int>(p.size());
    const auto& entries = p.record.entries();
    std::map<int, AnnotationReport> accum;
    for (const auto& [k, e] : entries) {
        AnnotationReport& ar = accum[k];
        ar.index = k;
        ar.assertion = e.text;
        if (opts.achievements) ar.achievement.verdict = Verdict::Pass;
        if (opts.completeness) ar.completeness.verdict = Verdict::Pass;
    }
    // A record that stops before the last rule still claims to pin down the
    // final model set, so completeness is judged at the full program too.
    if (opts.completeness && !entries.empty() && !p.record.has(n)) {
        AnnotationReport& ar = accum[n];
        ar.index = n;
        ar.assertion = aStarText(p.record, n);
        ar.completeness.verdict = Verdict::Pass;
    }
    for (const InputInstance& inst : effective) {
        std::vector<Term> universe = herbrandTerms(p, inst);
        report.universes.push_back({inst.name, universe.size()});

        std::map<int, GroundProgram> groundCache;
        auto grounded = [&](int k) -> const GroundProgram& {
            auto it = groundCache.find(k);
            if (it == groundCache.end()) it = groundCache.emplace(k, ground(prefix(p, k), inst)).first;
            return it->second;
        };

        if (opts.achievements && !entries.empty()) {
            for (int kp = entries.begin()->first; kp <= n; ++kp) {
                std::size_t count = 0;
                bool exact = true;
                try {
                    enumerateStableModels(grounded(kp), opts.budget, [&](const Interpretation& m) {
                        ++count;
                        EvalContext ctx{&inst, &m, &universe, &p.input};
                        for (const auto& [k, e] : entries) {
                            if (k > kp) break;
                            AchievementResult& ar = accum[k].achievement;
                            if (ar.verdict == Verdict::Fail) continue;
                            bool ok = false;
                            std::string why;
                            try {
                                ok = evalAssertion(e.assertion, ctx);
                            } catch (const EvalError& ex) {
                                why = std::string("evaluation error: ") + ex.what();
                            }
                            if (!ok) {
                                ar.verdict = Verdict::Fail;
                                ar.counterexample = AchievementCounterexample{kp, inst.name, m};
                                if (!why.empty()) appendNote(ar.note, why);
                            }
                        }
                        return true;
                    });
                } catch (const BudgetExceeded& b) {
                    exact = false;
                    for (const auto& [k, e] : entries) {
                        if (k > kp) break;
                        AchievementResult& ar = accum[k].achievement;
                        if (ar.verdict == Verdict::Fail) continue;
                        ar.verdict = Verdict::Inconclusive;
                        appendNote(ar.note, "prefix " + std::to_string(kp) + " on " + inst.name +
                                                ": " + b.what());
                    }
                }
                report.prefixModels.push_back({inst.name, kp, count, exact});
            }
        }

        if (opts.completeness) {
            for (auto& [k, arep] : accum) {
                CompletenessResult& cr = arep.completeness;
                if (cr.verdict == Verdict::Skipped || cr.verdict == Verdict::Fail) continue;
                Assertion conj = aStar(p.record, k);
                std::set<Sig> predSet = preds(prefix(p, k));
                SatisfyStats st;
                // Built on the first candidate only; a vacuous search needs
                // no stability checks at all.
                std::optional<StableChecker> stable;
                try {
                    enumerateSatisfying(conj, inst, predSet, universe, p.input, opts.budget,
                                        [&](const Interpretation& cand) {
                                            if (!stable) stable.emplace(grounded(k));
                                            if (stable->isStable(cand)) return true;
                                            cr.verdict = Verdict::Fail;
                                            cr.counterexample =
                                                CompletenessCounterexample{inst.name, cand};
                                            return false;
                                        },
                                        &st);
                } catch (const BudgetExceeded& b) {
                    cr.verdict = Verdict::Inconclusive;
                    appendNote(cr.note, "on " + inst.name + ": " + b.what());
                } catch (const EvalError& ex) {
                    cr.verdict = Verdict::Inconclusive;
                    appendNote(cr.note, std::string("on ") + inst.name +
                                            ": evaluation error: " + ex.what());
                }
                cr.candidates += st.candidates;
            }
        }
    }

    for (auto& [k, ar] : accum) report.annotations.push_back(std::move(ar));
    report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

HamiltonianComparison hamiltonianCorrectness(const Program& p, const InputInstance& instance,
                                             const EnumerationBudget& budget) {
    HamiltonianComparison cmp;
    GroundProgram gp = ground(prefix(p, static_cast<int>(p.size())), instance);
    enumerateStableModels(gp, budget, [&](const Interpretation& m) {
        HamiltonianComparison::EdgeSet in;
        for (const Atom& a : m)
            if (a.pred() == "in" && a.arity() == 2)
                in.insert({a.args()[0].str(), a.args()[1].str()});
        cmp.fromModels.push_back(std::move(in));
        return true;
    });
    std::sort(cmp.fromModels.begin(), cmp.fromModels.end());
    cmp.fromModels.erase(std::unique(cmp.fromModels.begin(), cmp.fromModels.end()),
                         cmp.fromModels.end());

    std::vector<std::string> vertices;
    HamiltonianComparison::EdgeSet edges;
    for (const Atom& a : instance.facts) {
        if (a.pred() == "vertex" && a.arity() == 1) vertices.push_back(a.args()[0].str());
        if (a.pred() == "edge" && a.arity() == 2)
            edges.insert({a.args()[0].str(), a.args()[1].str()});
    }
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    const Term* v0 = instance.binding("v0");
    if (!v0) throw InputError("hamiltonian comparison needs a v0 binding");
    std::string start = v0->str();

    if (std::find(vertices.begin(), vertices.end(), start) != vertices.end()) {
        std::vector<std::string> rest;
        for (const std::string& v : vertices)
            if (v != start) rest.push_back(v);
        do {
            std::vector<std::string> tour{start};
            tour.insert(tour.end(), rest.begin(), rest.end());
            HamiltonianComparison::EdgeSet cycle;
            bool ok = true;
            for (std::size_t i = 0; i < tour.size() && ok; ++i) {
                std::pair<std::string, std::string> e{tour[i], tour[(i + 1) % tour.size()]};
                ok = edges.count(e) != 0;
                cycle.insert(std::move(e));
            }
            if (ok) cmp.fromOracle.push_back(std::move(cycle));
        } while (std::next_permutation(rest.begin(), rest.end()));
    }
    std::sort(cmp.fromOracle.begin(), cmp.fromOracle.end());
    return cmp;
}

}  // namespace achieve
