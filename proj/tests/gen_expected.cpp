// Regenerates corpus/expected/*.json from the standalone oracles in
// tests/oracles.  The checker never links against this code, so a corpus
// run compares two independent computations.
//
// Usage: gen_expected [output-dir]   (default: corpus/expected)

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "json.hpp"
#include "oracles/oracles.hpp"

using nlohmann::ordered_json;

namespace {

void writeJson(const std::filesystem::path& path, const ordered_json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string());
    }
    out << doc.dump(2) << "\n";
    std::cout << "wrote " << path.string() << "\n";
}

ordered_json cyclesJson(const std::vector<oracles::EdgeSet>& cycles) {
    ordered_json arr = ordered_json::array();
    for (const auto& cycle : cycles) {
        ordered_json edges = ordered_json::array();
        for (const auto& [from, to] : cycle) {
            edges.push_back(ordered_json::array({from, to}));
        }
        arr.push_back(edges);
    }
    return arr;
}

}  // namespace

int main(int argc, char** argv) {
    std::filesystem::path outDir = argc > 1 ? argv[1] : "corpus/expected";
    std::filesystem::create_directories(outDir);

    // Queens: distinct solutions counted by a plain backtracker.
    {
        ordered_json doc;
        doc["models"] = oracles::queensCount(8);
        writeJson(outDir / "8queens.json", doc);
    }
    for (int n : {4, 5, 6}) {
        ordered_json doc;
        doc["models"] = oracles::queensCount(n);
        if (n != 6) {
            doc["record"] = "pass";
        }
        writeJson(outDir / ("nqueens_n" + std::to_string(n) + ".json"), doc);
    }

    // Hamiltonian cycles from the permutation oracle.  A stable model of the
    // cycle program is determined by its in/2 extension, so the model count
    // equals the cycle count.
    {
        std::vector<std::string> vs = {"a", "b", "c"};
        oracles::EdgeSet es = {{"a", "b"}, {"b", "a"}, {"b", "c"},
                               {"c", "b"}, {"a", "c"}, {"c", "a"}};
        auto cycles = oracles::hamiltonianCycles(vs, es, "a");
        ordered_json doc;
        doc["models"] = cycles.size();
        doc["cycles"] = cyclesJson(cycles);
        doc["record"] = "pass";
        writeJson(outDir / "hamiltonian_triangle.json", doc);
    }
    {
        std::vector<std::string> vs = {"a", "b", "c", "d"};
        oracles::EdgeSet es;
        for (const auto& x : vs) {
            for (const auto& y : vs) {
                if (x != y) {
                    es.insert({x, y});
                }
            }
        }
        auto cycles = oracles::hamiltonianCycles(vs, es, "a");
        ordered_json doc;
        doc["models"] = cycles.size();
        doc["cycles"] = cyclesJson(cycles);
        doc["record"] = "pass";
        writeJson(outDir / "hamiltonian_k4.json", doc);
    }
    {
        std::vector<std::string> vs = {"a", "b", "c"};
        oracles::EdgeSet es = {{"a", "b"}, {"b", "c"}};
        auto cycles = oracles::hamiltonianCycles(vs, es, "a");
        ordered_json doc;
        doc["models"] = cycles.size();
        doc["cycles"] = cyclesJson(cycles);
        doc["record"] = "pass";
        writeJson(outDir / "hamiltonian_path.json", doc);
    }

    // Ordered trees enumerated directly from the two caption conditions.
    for (int k : {1, 2}) {
        ordered_json doc;
        doc["models"] = oracles::orderedTrees(k).size();
        doc["record"] = "pass";
        writeJson(outDir / ("trees_k" + std::to_string(k) + ".json"), doc);
    }

    // Sequence covering arrays, exhaustive over row orderings.
    for (int n : {2, 5, 6}) {
        ordered_json doc;
        doc["models"] = oracles::scaCount(3, n);
        if (n == 2) {
            doc["record"] = "pass";
        }
        writeJson(outDir / ("sca_s3n" + std::to_string(n) + ".json"), doc);
    }

    // Borda election1: positional tally by hand.
    {
        std::vector<std::pair<std::vector<int>, int>> profiles = {
            {{1, 2, 3}, 2},  // two voters rank 1 > 2 > 3
            {{3, 2, 1}, 1},  // one voter ranks 3 > 2 > 1
        };
        auto result = oracles::bordaTally(3, profiles);
        ordered_json doc;
        doc["models"] = 1;  // the program has no choices
        doc["winner"] = result.winners;
        ordered_json scores = ordered_json::object();
        for (const auto& [cand, score] : result.scores) {
            scores[std::to_string(cand)] = score;
        }
        doc["scores"] = scores;
        doc["record"] = "pass";
        writeJson(outDir / "borda_election1.json", doc);
    }

    return 0;
}
