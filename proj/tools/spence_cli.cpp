// Command-line front end: generate, solve, check-mu, experiment, trend.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spence/spence.hpp"

namespace {

using namespace spence;

enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kUsage = 2,
    kParse = 3,
    kTimeout = 4,
    kIntegrity = 5,
    kExternal = 6,
    kNotUnsat = 7,
};

struct Config {
    int k = 3;
    int g = 5;
    std::vector<int> gValues;
    std::optional<std::uint64_t> seed;
    std::size_t count = 500;
    std::string backend = "dpll";
    std::string solverCommand;
    std::string output;
    std::string input;
    int parallelism = 1;
    long timeoutMs = 0;
    bool earlyExit = false;
    bool json = false;
    bool timings = false;
};

std::uint64_t entropySeed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

// Resolved configuration goes to stderr so stdout stays machine-readable.
void printConfig(const std::string& cmd, const std::vector<std::pair<std::string, std::string>>& items) {
    std::cerr << "c " << kToolVersion << " " << cmd;
    for (const auto& [key, value] : items)
        std::cerr << " " << key << "=" << value;
    std::cerr << "\n";
}

SolverBackend backendFor(const Config& c) {
    if (!c.solverCommand.empty())
        return SolverBackend::external(c.solverCommand);
    if (c.backend == "bruteforce")
        return SolverBackend::bruteForce();
    return SolverBackend::dpll();
}

std::string backendLabel(const Config& c) { return backendFor(c).name(); }

SolveOptions solveOptions(const Config& c) {
    SolveOptions o;
    if (c.timeoutMs > 0)
        o.deadline = Clock::now() + std::chrono::milliseconds(c.timeoutMs);
    return o;
}

CnfFormula readFormulaFile(const std::string& path) {
    std::ostringstream buf;
    if (path == "-") {
        buf << std::cin.rdbuf();
    } else {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw dimacs::ParseError(dimacs::ParseErrorKind::MissingHeader, 0, "cannot open '" + path + "'");
        buf << in.rdbuf();
    }
    return dimacs::read(buf.str());
}

void writeText(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write '" + path + "'");
    out << text;
}

std::string timeoutLabel(const Config& c) { return c.timeoutMs > 0 ? std::to_string(c.timeoutMs) + "ms" : "none"; }

int runGenerate(const Config& c) {
    GeneratorParams params{c.k, c.g, c.seed.value_or(0)};
    params.validate();
    printConfig("generate", {{"k", std::to_string(c.k)},
                             {"g", std::to_string(c.g)},
                             {"seed", std::to_string(params.seed)},
                             {"output", c.output.empty() ? "-" : c.output}});
    const auto comments = provenanceComments(params);
    writeText(c.output, dimacs::write(generate(params), comments));
    return kOk;
}

int runSolve(const Config& c) {
    printConfig("solve", {{"input", c.input}, {"backend", backendLabel(c)}, {"timeout", timeoutLabel(c)}});
    const CnfFormula f = readFormulaFile(c.input);
    SolveResult r = backendFor(c).solve(f, solveOptions(c));
    std::cout << toString(r.status) << "\n";
    if (r.model) {
        std::cout << "v";
        for (auto lit : r.model->toDimacs())
            std::cout << " " << lit;
        std::cout << " 0\n";
    }
    return kOk;
}

int runCheckMu(const Config& c) {
    printConfig("check-mu", {{"input", c.input},
                             {"backend", backendLabel(c)},
                             {"timeout", timeoutLabel(c)},
                             {"early-exit", c.earlyExit ? "yes" : "no"}});
    const CnfFormula f = readFormulaFile(c.input);
    MuOptions mo;
    mo.backend = backendFor(c);
    if (c.timeoutMs > 0)
        mo.timeoutPerSolve = std::chrono::milliseconds(c.timeoutMs);
    mo.earlyExit = c.earlyExit;
    MuReport r = analyzeMu(f, mo, c.input == "-" ? "stdin" : std::filesystem::path(c.input).filename().string());

    if (c.json) {
        std::cout << r.toJson().dump(2) << "\n";
        return kOk;
    }
    const std::string m = std::to_string(r.clauseCount);
    if (r.isMu)
        std::cout << "MU: " << (*r.isMu ? "yes" : "no");
    else
        std::cout << "MU: unknown";
    if (auto n = r.satisfiabilityNumber())
        std::cout << ", satisfiability number " << *n << "/" << m << "\n";
    else
        std::cout << ", satisfiability number in [" << r.satLower << ", " << r.satUpper << "]/" << m << "\n";
    std::cout << "positive-clause deletions sat: " << r.positive.sat << "/" << r.positive.tested << "\n";
    std::cout << "negative-clause deletions sat: " << r.negative.sat << "/" << r.negative.tested << "\n";
    if (r.timeouts > 0)
        std::cout << "timeouts: " << r.timeouts << "\n";
    std::cout << MuReport::csvHeader() << "\n" << r.csvRecord() << "\n";
    return kOk;
}

BatchSpec batchSpecFor(const Config& c, std::uint64_t baseSeed) {
    BatchSpec s;
    s.k = c.k;
    s.g = c.g;
    s.count = c.count;
    s.baseSeed = baseSeed;
    s.backend = backendFor(c);
    s.earlyExit = c.earlyExit;
    s.parallelism = c.parallelism;
    if (c.timeoutMs > 0)
        s.timeoutPerSolve = std::chrono::milliseconds(c.timeoutMs);
    return s;
}

std::string defaultCsvPath(const Config& c, const std::string& gLabel, std::uint64_t seed) {
    return "spence-k" + std::to_string(c.k) + "-g" + gLabel + "-n" + std::to_string(c.count) + "-s" +
           std::to_string(seed) + ".csv";
}

void reportBatches(const Config& c, const std::vector<BatchStats>& rows, const std::string& csvPath) {
    std::cout << tableHeader();
    for (const auto& r : rows)
        std::cout << tableRow(r);
    for (const auto& r : rows) {
        std::cout << "g=" << r.g << ": completed " << r.completed << "/" << r.count << ", excluded " << r.excluded
                  << ", positive deletions sat " << r.positive.sat << "/" << r.positive.tested
                  << ", negative deletions sat " << r.negative.sat << "/" << r.negative.tested << "\n";
    }
    writeText(csvPath, batchCsv(rows, c.timings));
    if (csvPath != "-")
        std::cout << "csv: " << csvPath << "\n";
}

std::vector<std::pair<std::string, std::string>> batchConfigItems(const Config& c, const std::string& gLabel,
                                                                  std::uint64_t seed, const std::string& csv) {
    return {{"k", std::to_string(c.k)},
            {"g", gLabel},
            {"n", std::to_string(c.count)},
            {"base-seed", std::to_string(seed)},
            {"backend", backendLabel(c)},
            {"parallelism", std::to_string(c.parallelism)},
            {"timeout", timeoutLabel(c)},
            {"early-exit", c.earlyExit ? "yes" : "no"},
            {"timings", c.timings ? "yes" : "no"},
            {"csv", csv}};
}

int runExperiment(const Config& c) {
    const std::uint64_t seed = c.seed.value_or(0);
    const std::string csv = c.output.empty() ? defaultCsvPath(c, std::to_string(c.g), seed) : c.output;
    printConfig("experiment", batchConfigItems(c, std::to_string(c.g), seed, csv));
    reportBatches(c, {runBatch(batchSpecFor(c, seed))}, csv);
    return kOk;
}

int runTrend(const Config& c) {
    const std::uint64_t seed = c.seed.value_or(0);
    std::string gLabel;
    for (std::size_t i = 0; i < c.gValues.size(); ++i)
        gLabel += (i ? "," : "") + std::to_string(c.gValues[i]);
    const std::string csv = c.output.empty() ? defaultCsvPath(c, "trend", seed) : c.output;
    printConfig("trend", batchConfigItems(c, gLabel, seed, csv));
    reportBatches(c, trendStudy(batchSpecFor(c, seed), c.gValues), csv);
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generate generalized Spence k-CNFs and measure their minimal unsatisfiability"};
    app.require_subcommand(1);
    Config c;
    std::uint64_t seedArg = 0;

    auto addSolverFlags = [&](CLI::App* sub) {
        sub->add_option("--backend", c.backend, "Internal backend")
            ->check(CLI::IsMember({"dpll", "bruteforce"}))
            ->capture_default_str();
        sub->add_option("--solver", c.solverCommand, "External DIMACS solver command (overrides --backend)");
        sub->add_option("--timeout", c.timeoutMs, "Per-solve timeout in milliseconds (0 = none)")
            ->check(CLI::NonNegativeNumber);
    };
    auto addKG = [&](CLI::App* sub) {
        sub->add_option("-k", c.k, "Clause width (>= 2)")->required()->check(CLI::Range(2, 32));
    };

    auto* gen = app.add_subcommand("generate", "Write a generated formula as DIMACS");
    addKG(gen);
    gen->add_option("-g", c.g, "Group count (>= 1)")->required()->check(CLI::PositiveNumber);
    auto* genSeed = gen->add_option("--seed", seedArg, "Permutation seed (drawn from entropy if omitted)");
    gen->add_option("-o,--output", c.output, "Output file (stdout if omitted)");

    auto* solve = app.add_subcommand("solve", "Decide satisfiability of a DIMACS file");
    solve->add_option("file", c.input, "DIMACS file, or - for stdin")->required();
    addSolverFlags(solve);

    auto* mu = app.add_subcommand("check-mu", "Single-clause deletion analysis of a DIMACS file");
    mu->add_option("file", c.input, "DIMACS file, or - for stdin")->required();
    addSolverFlags(mu);
    mu->add_flag("--early-exit", c.earlyExit, "Stop at the first deletion that stays UNSAT");
    mu->add_flag("--json", c.json, "Print the report as JSON");

    auto addBatchFlags = [&](CLI::App* sub) -> CLI::Option* {
        addKG(sub);
        sub->add_option("-n,--count", c.count, "Formulas per batch")->capture_default_str()->check(CLI::PositiveNumber);
        auto* s = sub->add_option("--base-seed", seedArg, "Seed of formula 0; formula i uses base-seed + i");
        sub->add_option("-o,--csv", c.output, "CSV output path (- for stdout)");
        sub->add_option("--parallelism", c.parallelism, "Concurrent formulas")->check(CLI::PositiveNumber);
        sub->add_flag("--early-exit", c.earlyExit, "MU screening only; no satisfiability-number statistics");
        sub->add_flag("--timings", c.timings, "Fill solve_millis in the CSV (makes it non-reproducible)");
        addSolverFlags(sub);
        return s;
    };
    auto* exp = app.add_subcommand("experiment", "Run one batch and report the table row");
    auto* expSeed = addBatchFlags(exp);
    exp->add_option("-g", c.g, "Group count (>= 1)")->required()->check(CLI::PositiveNumber);

    auto* trend = app.add_subcommand("trend", "Run one batch per g value");
    auto* trendSeed = addBatchFlags(trend);
    trend->add_option("-g", c.gValues, "Ascending group counts, e.g. 5,8,10")
        ->required()
        ->delimiter(',')
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    auto resolveSeed = [&](CLI::Option* opt) {
        if (opt->count() > 0) {
            c.seed = seedArg;
        } else {
            c.seed = entropySeed();
            std::cerr << "c no seed given; drew " << *c.seed << " from system entropy\n";
        }
    };

    try {
        if (*gen) {
            resolveSeed(genSeed);
            return runGenerate(c);
        }
        if (*solve)
            return runSolve(c);
        if (*mu)
            return runCheckMu(c);
        if (*exp) {
            resolveSeed(expSeed);
            return runExperiment(c);
        }
        if (*trend) {
            resolveSeed(trendSeed);
            return runTrend(c);
        }
    } catch (const dimacs::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kParse;
    } catch (const TimeoutError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kTimeout;
    } catch (const SolverIntegrityError& e) {
        std::cerr << "error: solver integrity: " << e.what() << "\n";
        return kIntegrity;
    } catch (const ExternalProcessError& e) {
        std::cerr << "error: external solver: " << e.what() << "\n";
        return kExternal;
    } catch (const ExternalOutputError& e) {
        std::cerr << "error: external solver: " << e.what() << "\n";
        return kExternal;
    } catch (const NotUnsatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNotUnsat;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInternal;
    }
    return kUsage;
}
