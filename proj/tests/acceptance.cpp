// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [path-to-spence-cli]
//
// The CLI path is needed for the determinism criterion; without it that
// criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "spence/spence.hpp"

using namespace spence;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
        }
    }
    void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string fmt(double x, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

// Shared by criteria 4-6 so each batch runs once.
struct BatchCache {
    std::vector<BatchStats> batches;
    const BatchStats& get(int k, int g, std::size_t count) {
        for (const auto& b : batches)
            if (b.k == k && b.g == g && b.count == count)
                return b;
        BatchSpec spec;
        spec.k = k;
        spec.g = g;
        spec.count = count;
        spec.baseSeed = 0;
        spec.keepReports = true;
        batches.push_back(runBatch(spec));
        return batches.back();
    }
};

Outcome structural() {
    Outcome o;
    const auto start = Clock::now();
    for (int k : {2, 3, 4}) {
        for (int g = 1; g <= 8; ++g) {
            GeneratorParams p{k, g, static_cast<std::uint64_t>(1000 * k + g)};
            CnfFormula f = generate(p);
            const auto kk = static_cast<std::uint64_t>(k);
            const std::uint64_t expectedClauses =
                2 * (static_cast<std::uint64_t>(g - 1) * binomial(2 * kk - 2, kk) + binomial(2 * kk - 1, kk));
            const std::string tag = "(k=" + std::to_string(k) + ",g=" + std::to_string(g) + ")";
            o.require(f.numVariables() == (2 * k - 2) * g + 1, tag + " variables");
            o.require(f.numClauses() == expectedClauses, tag + " clauses");
            if (k == 3)
                o.require(f.numClauses() == static_cast<std::size_t>(8 * g + 12), tag + " 8g+12");
        }
    }
    const std::vector<std::tuple<int, int, std::size_t>> rows{{3, 5, 52},  {3, 8, 76},  {3, 10, 92}, {3, 12, 108},
                                                              {3, 15, 132}, {4, 5, 190}, {4, 6, 220}};
    for (auto [k, g, m] : rows)
        o.require(generate({k, g, 1}).numClauses() == m, "table row (" + std::to_string(k) + "," + std::to_string(g) + ")");
    const auto ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    o.require(ms < 1000.0, "runtime < 1 s");
    o.note("24 grid points + 7 table rows exact in " + fmt(ms, 1) + " ms");
    return o;
}

Outcome unsatTheorem() {
    Outcome o;
    std::size_t brute = 0, dpll = 0;
    for (auto [k, g] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}}) {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            CnfFormula f = generate({k, g, seed});
            o.require(f.numVariables() <= 24, "brute-force size");
            if (solveBruteForce(f).sat())
                o.require(false, "brute force found SAT for (" + std::to_string(k) + "," + std::to_string(g) +
                                     ") seed " + std::to_string(seed));
            ++brute;
        }
    }
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        if (solveDpll(generate({3, 5, seed})).sat())
            o.require(false, "DPLL found SAT for (3,5) seed " + std::to_string(seed));
        ++dpll;
    }
    o.note(std::to_string(brute) + " brute-force + " + std::to_string(dpll) + " DPLL instances UNSAT");
    return o;
}

Outcome oracleEquivalence() {
    Outcome o;
    std::mt19937_64 rng(20261016);
    std::size_t disagreements = 0, sat = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 14); // 3..16 variables
        const int m = static_cast<int>((3.0 + static_cast<double>(rng() % 300) / 100.0) * n);
        std::vector<Clause> clauses;
        for (int c = 0; c < m; ++c) {
            std::vector<Literal> lits;
            while (lits.size() < 3) {
                Variable v = 1 + static_cast<Variable>(rng() % static_cast<unsigned>(n));
                bool dup = false;
                for (Literal l : lits)
                    dup = dup || l.variable() == v;
                if (!dup)
                    lits.emplace_back(v, (rng() & 1) ? Polarity::Positive : Polarity::Negative);
            }
            clauses.emplace_back(std::move(lits));
        }
        CnfFormula f(n, std::move(clauses));
        auto b = solveBruteForce(f);
        auto d = solveDpll(f);
        disagreements += b.status != d.status;
        sat += b.sat();
    }
    std::size_t deletions = 0, deletionDisagreements = 0;
    for (int g : {1, 2}) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            CnfFormula f = generate({3, g, seed});
            for (std::size_t i = 0; i < f.numClauses(); ++i) {
                CnfFormula r = deleteClause(f, i);
                deletionDisagreements += solveBruteForce(r).status != solveDpll(r).status;
                ++deletions;
            }
        }
    }
    o.require(disagreements == 0, std::to_string(disagreements) + " random-CNF disagreements");
    o.require(deletionDisagreements == 0, std::to_string(deletionDisagreements) + " deletion disagreements");
    o.note("1000 random 3-CNFs (" + std::to_string(sat) + " SAT) and " + std::to_string(deletions) +
           " deletions from 20 instances, 0 disagreements");
    return o;
}

Outcome rowOneReproduction(BatchCache& cache) {
    Outcome o;
    const auto& s = cache.get(3, 5, 500);
    o.require(s.clauseNumber == 52, "clause number 52");
    o.require(s.excluded == 0, "no exclusions");
    o.require(s.muPercent >= 58.0 && s.muPercent <= 72.0, "MU Percent " + fmt(s.muPercent, 1) + " in [58, 72]");
    o.require(s.meanSatNo && *s.meanSatNo >= 50.8 && *s.meanSatNo <= 51.8,
              "Mean Sat. No. " + fmt(s.meanSatNo.value_or(-1), 3) + " in [50.8, 51.8]");
    o.require(s.stdDevSatNo && *s.stdDevSatNo >= 0.4 && *s.stdDevSatNo <= 1.1,
              "Std. Dev. " + fmt(s.stdDevSatNo.value_or(-1), 3) + " in [0.4, 1.1]");
    o.note("MU " + fmt(s.muPercent, 1) + "% (target 65), mean " + fmt(s.meanSatNo.value_or(-1), 3) +
           " (target 51.3), sd " + fmt(s.stdDevSatNo.value_or(-1), 3) + " (target 0.71), " +
           std::to_string(s.elapsed.count()) + " ms");
    return o;
}

Outcome trendReproduction(BatchCache& cache) {
    Outcome o;
    const std::vector<std::pair<int, double>> rows{{5, 65.0}, {8, 79.0}, {10, 82.0}};
    double prev = -1.0;
    std::string seq;
    for (auto [g, target] : rows) {
        const auto& s = cache.get(3, g, 100);
        o.require(s.excluded == 0, "g=" + std::to_string(g) + " exclusions");
        o.require(std::abs(s.muPercent - target) <= 12.0,
                  "g=" + std::to_string(g) + " MU " + fmt(s.muPercent, 1) + " within 12 of " + fmt(target, 0));
        if (prev >= 0.0)
            o.require(s.muPercent >= prev - 8.0, "g=" + std::to_string(g) + " non-decreasing within 8 points");
        prev = s.muPercent;
        seq += (seq.empty() ? "" : ", ") + fmt(s.muPercent, 0);
    }
    o.note("MU percents for g=5,8,10 (n=100): " + seq + " (target 65, 79, 82)");
    return o;
}

Outcome reportSoundness(BatchCache& cache) {
    Outcome o;
    std::size_t witnesses = 0, reports = 0;
    for (const auto& b : cache.batches) {
        for (std::size_t i = 0; i < b.reports.size(); ++i) {
            const MuReport& r = b.reports[i];
            const CnfFormula f = generate({b.k, b.g, b.perFormula[i].seed});
            ++reports;
            for (std::size_t c = 0; c < r.deletions.size(); ++c) {
                const auto& d = r.deletions[c];
                if (!d.satAfterDeletion())
                    continue;
                if (!d.witness || !evaluate(deleteClause(f, c), *d.witness))
                    o.require(false, "witness for (" + std::to_string(b.k) + "," + std::to_string(b.g) + ") seed " +
                                         std::to_string(b.perFormula[i].seed) + " clause " + std::to_string(c));
                ++witnesses;
            }
            const auto n = r.satisfiabilityNumber();
            o.require(n.has_value() && r.isMu.has_value() && *r.isMu == (*n == r.clauseCount),
                      "isMu <=> satisfiability number = m");
        }
    }
    o.require(reports > 0, "batches present");
    o.note(std::to_string(witnesses) + " witnesses verified across " + std::to_string(reports) + " reports");
    return o;
}

Outcome cellCounting() {
    Outcome o;
    GeneratorParams p{3, 5, 20261016};
    CnfFormula f = generate(p);
    const std::size_t half = f.numClauses() / 2;
    CnfFormula c1(f.numVariables(), {f.clauses().begin(), f.clauses().begin() + static_cast<std::ptrdiff_t>(half)});
    CnfFormula c2(f.numVariables(), {f.clauses().begin() + static_cast<std::ptrdiff_t>(half), f.clauses().end()});
    std::vector<Variable> identity(static_cast<std::size_t>(p.numVariables()));
    std::iota(identity.begin(), identity.end(), 1);
    const auto pCells = partitionInOrder(p, identity).cells;
    const auto qCells = partitionInOrder(p, negativeOrder(p)).cells;

    std::mt19937_64 rng(7);
    std::size_t mismatches = 0, c1True = 0, c2True = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        // Density of true values drawn per assignment so both predicates vary.
        const double density = static_cast<double>(rng() % 1001) / 1000.0;
        std::bernoulli_distribution coin(density);
        Assignment a(p.numVariables());
        for (Variable v = 1; v <= p.numVariables(); ++v)
            a.set(v, coin(rng));
        auto atMost = [&](const std::vector<std::vector<Variable>>& cells, bool value) {
            for (const auto& cell : cells) {
                int n = 0;
                for (Variable v : cell)
                    n += *a.get(v) == value;
                if (n > p.k - 1)
                    return false;
            }
            return true;
        };
        const bool pred1 = atMost(pCells, false);
        const bool pred2 = atMost(qCells, true);
        mismatches += (evaluate(c1, a) != pred1) + (evaluate(c2, a) != pred2);
        c1True += pred1;
        c2True += pred2;
    }
    o.require(mismatches == 0, std::to_string(mismatches) + " mismatches");
    o.note("10000 assignments, 0 mismatches (C1 true " + std::to_string(c1True) + ", C2 true " +
           std::to_string(c2True) + ")");
    return o;
}

Outcome determinism(const std::string& cli) {
    Outcome o;
    if (cli.empty()) {
        o.require(false, "no CLI path given");
        return o;
    }
    const fs::path root = fs::temp_directory_path() / ("spence-acceptance-" + std::to_string(::getpid()));
    std::vector<std::string> csvs;
    for (const char* run : {"a", "b"}) {
        const fs::path dir = root / run;
        fs::create_directories(dir);
        const std::string cmd = "cd '" + dir.string() + "' && '" + cli +
                                "' experiment -k 3 -g 5 -n 50 --base-seed 42 >/dev/null 2>&1";
        o.require(std::system(cmd.c_str()) == 0, std::string("run ") + run + " exit status");
        std::ifstream in(dir / "spence-k3-g5-n50-s42.csv", std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        csvs.push_back(buf.str());
    }
    fs::remove_all(root);
    o.require(!csvs[0].empty(), "CSV written");
    o.require(csvs[0] == csvs[1], "byte-identical CSV");
    o.note("two runs produced " + std::to_string(csvs[0].size()) + "-byte CSVs, identical");
    return o;
}

} // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? fs::absolute(argv[1]).string() : "";
    BatchCache cache;

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"AC1 structural formulas", structural},
        {"AC2 unsatisfiability theorem", unsatTheorem},
        {"AC3 oracle equivalence", oracleEquivalence},
        {"AC4 row-1 statistical reproduction", [&] { return rowOneReproduction(cache); }},
        {"AC5 trend reproduction", [&] { return trendReproduction(cache); }},
        {"AC6 MuReport soundness", [&] { return reportSoundness(cache); }},
        {"AC7 cell-counting characterization", cellCounting},
        {"AC8 determinism", [&] { return determinism(cli); }},
    };

    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        failed += !o.pass;
        std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << ": " << o.detail << std::endl;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
