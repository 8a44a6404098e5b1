#include <cmath>

#include <gtest/gtest.h>

#include "spence/experiment.hpp"

using namespace spence;

namespace {

BatchSpec smallSpec(std::size_t count = 20) {
    BatchSpec s;
    s.k = 3;
    s.g = 3;
    s.count = count;
    s.baseSeed = 100;
    return s;
}

} // namespace

TEST(MeanAndSampleStdDev, KnownValues) {
    auto [m1, s1] = meanAndSampleStdDev({5.0});
    EXPECT_EQ(m1, 5.0);
    EXPECT_EQ(s1, 0.0);
    auto [m, s] = meanAndSampleStdDev({2, 4, 4, 4, 5, 5, 7, 9});
    EXPECT_DOUBLE_EQ(m, 5.0);
    EXPECT_DOUBLE_EQ(s, std::sqrt(32.0 / 7.0));
}

TEST(RunBatch, SingleMuFormulaStatistics) {
    // Find a seed whose formula is MU, then run a batch of one on it.
    std::uint64_t seed = 0;
    while (!analyzeMu(generate({3, 5, seed})).isMu.value())
        ++seed;
    BatchSpec s;
    s.k = 3;
    s.g = 5;
    s.count = 1;
    s.baseSeed = seed;
    auto stats = runBatch(s);
    EXPECT_EQ(stats.muPercent, 100.0);
    EXPECT_EQ(stats.meanSatNo, 52.0);
    EXPECT_EQ(stats.stdDevSatNo, 0.0);
    EXPECT_EQ(stats.clauseNumber, 52U);
}

TEST(RunBatch, SeedsDeriveFromBase) {
    auto stats = runBatch(smallSpec(5));
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(stats.perFormula[i].index, i);
        EXPECT_EQ(stats.perFormula[i].seed, 100 + i);
    }
}

TEST(RunBatch, AggregatesRecomputeFromPerFormula) {
    auto stats = runBatch(smallSpec(30));
    std::vector<double> xs;
    std::size_t mu = 0;
    for (const auto& f : stats.perFormula) {
        xs.push_back(static_cast<double>(*f.satisfiabilityNumber()));
        mu += *f.isMu ? 1 : 0;
        EXPECT_EQ(*f.isMu, *f.satisfiabilityNumber() == f.clauseCount);
    }
    auto [mean, sd] = meanAndSampleStdDev(xs);
    EXPECT_EQ(stats.meanSatNo, mean);
    EXPECT_EQ(stats.stdDevSatNo, sd);
    EXPECT_DOUBLE_EQ(stats.muPercent, 100.0 * static_cast<double>(mu) / 30.0);
    EXPECT_LE(*stats.meanSatNo, static_cast<double>(stats.clauseNumber));
    EXPECT_GE(stats.muPercent, 0.0);
    EXPECT_LE(stats.muPercent, 100.0);
    EXPECT_EQ(stats.completed, 30U);
    EXPECT_EQ(stats.excluded, 0U);
}

TEST(RunBatch, DeterministicAndParallelismIndependent) {
    auto a = runBatch(smallSpec());
    auto spec = smallSpec();
    spec.parallelism = 3;
    auto b = runBatch(spec);
    EXPECT_EQ(batchCsv({a}), batchCsv({b}));
    EXPECT_EQ(a.muPercent, b.muPercent);
}

TEST(RunBatch, EarlyExitKeepsMuPercentDropsSatStatistics) {
    auto full = runBatch(smallSpec());
    auto spec = smallSpec();
    spec.earlyExit = true;
    auto early = runBatch(spec);
    EXPECT_EQ(full.muPercent, early.muPercent);
    if (full.muPercent < 100.0) {
        EXPECT_FALSE(early.meanSatNo);
        EXPECT_FALSE(early.stdDevSatNo);
    }
}

TEST(RunBatch, TimeoutsAreExcludedAndCounted) {
    auto spec = smallSpec(4);
    spec.timeoutPerSolve = std::chrono::milliseconds(-1);
    auto stats = runBatch(spec);
    EXPECT_EQ(stats.completed, 0U);
    EXPECT_EQ(stats.excluded, 4U);
    for (const auto& f : stats.perFormula)
        EXPECT_TRUE(f.timedOut);
    auto csv = batchCsv({stats});
    EXPECT_NE(csv.find("3,3,100,36,,,\n"), std::string::npos) << csv;
    EXPECT_NE(csv.find("3,3,4,0,0.00,,\n"), std::string::npos) << csv;
}

TEST(RunBatch, KeptReportsCarryVerifiedWitnesses) {
    auto spec = smallSpec(5);
    spec.keepReports = true;
    auto stats = runBatch(spec);
    ASSERT_EQ(stats.reports.size(), 5U);
    for (std::size_t i = 0; i < 5; ++i) {
        auto f = generate(spec.params(i));
        for (std::size_t c = 0; c < f.numClauses(); ++c) {
            const auto& d = stats.reports[i].deletions[c];
            if (d.satAfterDeletion()) {
                ASSERT_TRUE(d.witness);
                EXPECT_TRUE(evaluate(deleteClause(f, c), *d.witness));
            }
        }
    }
}

TEST(RunBatch, InvalidSpec) {
    auto s = smallSpec();
    s.count = 0;
    EXPECT_THROW(runBatch(s), PreconditionError);
    s = smallSpec();
    s.k = 1;
    EXPECT_THROW(runBatch(s), PreconditionError);
}

TEST(Csv, SchemaAndSections) {
    auto stats = runBatch(smallSpec(2));
    auto csv = batchCsv({stats});
    EXPECT_EQ(csv.rfind("k,g,seed,clause_count,satisfiability_number,is_mu,solve_millis\n", 0), 0U);
    EXPECT_NE(csv.find("\n\nk,g,count,completed,mu_percent,mean_sat_no,std_dev_sat_no\n3,3,2,2,"), std::string::npos);
    // Without timings the last per-formula field is empty.
    for (const auto& f : stats.perFormula) {
        std::string row = "3,3," + std::to_string(f.seed) + ",36," + std::to_string(*f.satisfiabilityNumber()) + "," +
                          (*f.isMu ? "1" : "0") + ",\n";
        EXPECT_NE(csv.find(row), std::string::npos) << row;
    }
    auto timed = batchCsv({stats}, true);
    EXPECT_NE(timed, csv);
}

TEST(TrendStudy, OneRowPerG) {
    BatchSpec base = smallSpec(5);
    auto rows = trendStudy(base, {1, 2, 4});
    ASSERT_EQ(rows.size(), 3U);
    EXPECT_EQ(rows[0].g, 1);
    EXPECT_EQ(rows[0].clauseNumber, 20U);
    EXPECT_EQ(rows[2].clauseNumber, 44U);
    EXPECT_THROW(trendStudy(base, {5, 3}), PreconditionError);
    EXPECT_THROW(trendStudy(base, {}), PreconditionError);
}

TEST(Table, HasReferenceColumns) {
    auto stats = runBatch(smallSpec(3));
    auto header = tableHeader();
    for (const char* col : {"clause number", "MU Percent", "Mean Sat. No.", "Standard Dev."})
        EXPECT_NE(header.find(col), std::string::npos);
    EXPECT_NE(tableRow(stats).find("36"), std::string::npos);
}

// 50 formulas per row: the binomial standard error at p = 0.65 is about 6.7
// points, so +-25 points is a > 3.5 sigma band around the target percentages.
TEST(TrendStudy, SmallSampleSmokeRun) {
    BatchSpec base;
    base.k = 3;
    base.count = 50;
    base.baseSeed = 7;
    base.earlyExit = true;
    auto rows = trendStudy(base, {5, 8});
    ASSERT_EQ(rows.size(), 2U);
    EXPECT_NEAR(rows[0].muPercent, 65.0, 25.0);
    EXPECT_NEAR(rows[1].muPercent, 79.0, 25.0);
    EXPECT_EQ(rows[0].clauseNumber, 52U);
    EXPECT_EQ(rows[1].clauseNumber, 76U);
}
