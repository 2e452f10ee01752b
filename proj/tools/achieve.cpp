// Command-line front end: check records, list stable models of prefixes,
// and replay the bundled corpus against its expected results.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "achieve/checker.hpp"
#include "achieve/engine.hpp"
#include "achieve/error.hpp"
#include "achieve/grounder.hpp"
#include "achieve/parser.hpp"
#include "json.hpp"

using namespace achieve;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct Config {
    std::string programPath;
    std::vector<std::string> instancePaths;
    int prefixIndex = 0;  // 0 means the full program
    std::size_t budgetCandidates = 0;
    std::size_t budgetModels = 0;
    double timeoutSeconds = 0;
    bool json = false;
    bool dumpGround = false;
    bool crosscheck = false;
};

EnumerationBudget toBudget(const Config& cfg) {
    EnumerationBudget b;
    if (cfg.budgetCandidates) b.maxCandidates = cfg.budgetCandidates;
    if (cfg.budgetModels) b.maxModels = cfg.budgetModels;
    if (cfg.timeoutSeconds > 0) b.timeoutSeconds = cfg.timeoutSeconds;
    return b;
}

// Programs with declared inputs refuse to run without instances; programs
// without any run against a single empty one.
std::vector<InputInstance> loadInstances(const Program& p, const Config& cfg) {
    std::vector<InputInstance> out;
    for (const std::string& path : cfg.instancePaths)
        out.push_back(parseInstanceFile(path, p.input));
    if (out.empty() && (!p.input.predicates.empty() || !p.input.placeholders.empty()))
        throw InputError(p.name + " declares inputs; pass at least one -i/--instance");
    return out;
}

std::string modelLine(const Interpretation& m) {
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

int runCheckCommand(const Config& cfg, bool achievements) {
    Program p = parseProgramFile(cfg.programPath);
    std::vector<InputInstance> instances = loadInstances(p, cfg);
    CheckOptions opts;
    opts.achievements = achievements;
    opts.budget = toBudget(cfg);
    CheckReport report = runCheck(p, instances, opts);
    std::cout << (cfg.json ? report.toJson() : report.toText());
    return report.exitCode();
}

int runModels(const Config& cfg) {
    Program p = parseProgramFile(cfg.programPath);
    int k = cfg.prefixIndex ? cfg.prefixIndex : static_cast<int>(p.size());
    std::vector<InputInstance> instances = loadInstances(p, cfg);
    if (instances.empty()) {
        InputInstance empty;
        empty.name = "(empty)";
        instances.push_back(std::move(empty));
    }
    EnumerationBudget budget = toBudget(cfg);

    int exitCode = 0;
    ordered_json doc;
    doc["program"] = p.name;
    doc["prefix"] = k;
    ordered_json runs = ordered_json::array();
    for (const InputInstance& inst : instances) {
        std::vector<std::string> violations = validateInput(inst, p.input);
        if (!violations.empty()) {
            std::string msg = inst.name + ": " + violations.front();
            for (std::size_t i = 1; i < violations.size(); ++i) msg += "; " + violations[i];
            throw InputError(msg);
        }
        GroundProgram gp = ground(prefix(p, k), inst);
        ordered_json run;
        run["instance"] = inst.name;
        if (cfg.dumpGround) {
            if (cfg.json)
                run["ground"] = gp.str();
            else
                std::cout << "ground prefix " << k << " on " << inst.name << ":\n" << gp.str();
        }
        try {
            std::vector<Interpretation> models = enumerateStableModels(gp, budget);
            if (cfg.json) {
                run["count"] = models.size();
                ordered_json arr = ordered_json::array();
                for (const Interpretation& m : models) arr.push_back(atomArray(m));
                run["models"] = std::move(arr);
            } else {
                std::cout << p.name << " prefix " << k << " on " << inst.name << ": "
                          << models.size() << (models.size() == 1 ? " model" : " models")
                          << "\n";
                for (const Interpretation& m : models) std::cout << "  " << modelLine(m) << "\n";
            }
            if (cfg.crosscheck) {
                std::vector<Interpretation> brute = enumerateBruteForce(gp, budget);
                bool agreed = brute == models;
                if (cfg.json)
                    run["crosscheck"] = agreed ? "ok" : "mismatch";
                else
                    std::cout << "crosscheck: "
                              << (agreed ? "exhaustive enumeration agrees"
                                         : "exhaustive enumeration DISAGREES")
                              << "\n";
                if (!agreed) exitCode = 1;
            }
        } catch (const BudgetExceeded& b) {
            if (cfg.json)
                run["error"] = b.what();
            else
                std::cout << p.name << " prefix " << k << " on " << inst.name
                          << ": inconclusive, " << b.what() << "\n";
            exitCode = std::max(exitCode, 2);
        }
        runs.push_back(std::move(run));
    }
    doc["runs"] = std::move(runs);
    if (cfg.json) std::cout << doc.dump(2) << "\n";
    return exitCode;
}

// One expected-results check within a corpus run; ok() compares lazily so
// mismatching values can be reported verbatim.
struct CorpusCheck {
    std::string name;
    json expected;
    json got;

    bool ok() const { return expected == got; }
};

std::size_t countModels(const Program& p, const InputInstance& inst,
                        const EnumerationBudget& budget) {
    std::size_t count = 0;
    GroundProgram gp = ground(prefix(p, static_cast<int>(p.size())), inst);
    enumerateStableModels(gp, budget, [&count](const Interpretation&) {
        ++count;
        return true;
    });
    return count;
}

json cyclesJson(const std::vector<HamiltonianComparison::EdgeSet>& cycles) {
    json arr = json::array();
    for (const auto& cycle : cycles) {
        json edges = json::array();
        for (const auto& [from, to] : cycle) edges.push_back(json::array({from, to}));
        arr.push_back(std::move(edges));
    }
    return arr;
}

int runCorpus(const Config& cfg) {
    namespace fs = std::filesystem;
    fs::path dir = "corpus";
    if (const char* env = std::getenv("ACHIEVE_CORPUS_DIR")) dir = env;

    std::ifstream manifestIn(dir / "manifest.json");
    if (!manifestIn) throw InputError("cannot open " + (dir / "manifest.json").string());
    json manifest = json::parse(manifestIn);

    EnumerationBudget budget = toBudget(cfg);
    bool anyFail = false;
    bool anyInconclusive = false;
    std::size_t runCount = 0;
    std::size_t mismatches = 0;
    json report = json::array();

    for (const json& entry : manifest.at("entries")) {
        Program p = parseProgramFile((dir / entry.at("program").get<std::string>()).string());
        for (const json& run : entry.at("runs")) {
            ++runCount;
            std::string label = p.name + "/" + run.at("name").get<std::string>();
            std::ifstream expectedIn(dir / run.at("expected").get<std::string>());
            if (!expectedIn)
                throw InputError("cannot open " +
                                 (dir / run.at("expected").get<std::string>()).string());
            json expected = json::parse(expectedIn);

            std::vector<InputInstance> instances;
            if (!run.at("instance").is_null())
                instances.push_back(parseInstanceFile(
                    (dir / run.at("instance").get<std::string>()).string(), p.input));
            const InputInstance* inst = nullptr;
            InputInstance empty;
            empty.name = "(empty)";
            inst = instances.empty() ? &empty : &instances.front();

            std::vector<CorpusCheck> checks;
            std::vector<std::string> inconclusiveChecks;
            for (const json& checkName : run.at("checks")) {
                const std::string what = checkName.get<std::string>();
                CorpusCheck c;
                c.name = what;
                c.expected = expected.at(what);
                try {
                    if (what == "models") {
                        c.got = countModels(p, *inst, budget);
                    } else if (what == "cycles") {
                        HamiltonianComparison cmp = hamiltonianCorrectness(p, *inst, budget);
                        c.got = cmp.agree() ? cyclesJson(cmp.fromModels)
                                            : json("projection/oracle disagreement");
                    } else if (what == "winner") {
                        GroundProgram gp =
                            ground(prefix(p, static_cast<int>(p.size())), *inst);
                        std::vector<Interpretation> models = enumerateStableModels(gp, budget);
                        json winners = json::array();
                        json scores = json::object();
                        if (models.size() == 1) {
                            for (const Atom& a : models.front()) {
                                if (a.pred() == "winner" && a.arity() == 1)
                                    winners.push_back(a.args()[0].value());
                                if (a.pred() == "score" && a.arity() == 2)
                                    scores[a.args()[0].str()] = a.args()[1].value();
                            }
                            c.got = winners;
                            checks.push_back(
                                CorpusCheck{"scores", expected.at("scores"), scores});
                        } else {
                            c.got = "expected a unique model, found " +
                                    std::to_string(models.size());
                        }
                    } else if (what == "record") {
                        CheckOptions opts;
                        opts.budget = budget;
                        CheckReport r = runCheck(p, instances, opts);
                        c.got = str(r.overall());
                    } else {
                        throw InputError("unknown corpus check: " + what);
                    }
                } catch (const BudgetExceeded& b) {
                    c.got = std::string("inconclusive: ") + b.what();
                    inconclusiveChecks.push_back(what);
                }
                checks.push_back(std::move(c));
            }

            bool allOk = true;
            json checksJson = json::object();
            std::string line = label + ":";
            for (const CorpusCheck& c : checks) {
                bool ok = c.ok();
                bool budgeted = std::find(inconclusiveChecks.begin(), inconclusiveChecks.end(),
                                          c.name) != inconclusiveChecks.end();
                allOk = allOk && ok;
                if (!ok) (budgeted ? anyInconclusive : anyFail) = true;
                checksJson[c.name] = {{"expected", c.expected}, {"got", c.got}, {"ok", ok}};
                line += " " + c.name + (ok ? " ok" : (budgeted ? " INCONCLUSIVE" : " MISMATCH"));
                if (!ok) line += " (expected " + c.expected.dump() + ", got " + c.got.dump() + ")";
            }
            if (!allOk) ++mismatches;
            report.push_back(
                {{"run", label}, {"ok", allOk}, {"checks", std::move(checksJson)}});
            if (!cfg.json) std::cout << line << "\n";
        }
    }

    if (cfg.json) {
        json doc = {{"ok", mismatches == 0}, {"runs", std::move(report)}};
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "corpus: " << runCount << " runs, "
                  << (mismatches == 0 ? "all ok"
                                      : std::to_string(mismatches) + " with mismatches")
                  << "\n";
    }
    return anyFail ? 1 : (anyInconclusive ? 2 : 0);
}

void addCommonOptions(CLI::App* sub, Config& cfg, bool withInstances) {
    if (withInstances) {
        sub->add_option("program", cfg.programPath, "annotated program file")->required();
        sub->add_option("-i,--instance", cfg.instancePaths, "input instance file (repeatable)");
    }
    sub->add_option("--budget-candidates", cfg.budgetCandidates,
                    "candidate limit for searches")
        ->check(CLI::PositiveNumber);
    sub->add_option("--budget-models", cfg.budgetModels, "model limit for enumerations")
        ->check(CLI::PositiveNumber);
    sub->add_option("--timeout", cfg.timeoutSeconds, "per-search timeout in seconds")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--json", cfg.json, "machine-readable output");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"achievement checker for annotated answer set programs"};
    app.require_subcommand(1);
    Config cfg;

    CLI::App* check =
        app.add_subcommand("check", "verify achievements and record completeness");
    addCommonOptions(check, cfg, true);

    CLI::App* complete = app.add_subcommand("complete", "verify record completeness only");
    addCommonOptions(complete, cfg, true);

    CLI::App* models = app.add_subcommand("models", "list stable models of a prefix");
    addCommonOptions(models, cfg, true);
    models->add_option("--prefix", cfg.prefixIndex, "check this prefix instead of the full program")
        ->check(CLI::PositiveNumber);
    models->add_flag("--dump-ground", cfg.dumpGround, "print the ground prefix");
    models->add_flag("--exhaustive-crosscheck", cfg.crosscheck,
                     "re-enumerate by brute force and compare");

    CLI::App* corpus =
        app.add_subcommand("corpus", "replay the bundled corpus against expected results");
    addCommonOptions(corpus, cfg, false);

    try {
        app.parse(argc, argv);
        if (check->parsed()) return runCheckCommand(cfg, true);
        if (complete->parsed()) return runCheckCommand(cfg, false);
        if (models->parsed()) return runModels(cfg);
        return runCorpus(cfg);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 3;
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
