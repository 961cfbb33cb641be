#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "lecho/echo.hpp"
#include "lecho/parallel.hpp"
#include "lecho/stats.hpp"

using namespace lecho;

namespace {

class ThreadsGuard {
public:
    explicit ThreadsGuard(const char* value) {
        if (const char* old = std::getenv(kThreadsEnvVar)) saved_ = old, had_ = true;
        if (value) ::setenv(kThreadsEnvVar, value, 1);
        else ::unsetenv(kThreadsEnvVar);
    }
    ~ThreadsGuard() {
        if (had_) ::setenv(kThreadsEnvVar, saved_.c_str(), 1);
        else ::unsetenv(kThreadsEnvVar);
    }

private:
    std::string saved_;
    bool had_ = false;
};

ModeTable table() {
    QuenchParams p;
    p.length = 50;
    p.h0 = 0.99;
    p.h1 = 1.01;
    p.beta = 30.0;
    return ModeTable(p);
}

}  // namespace

TEST(Parallel, ThreadCountFromEnvironment) {
    {
        ThreadsGuard g("3");
        EXPECT_EQ(thread_count(), 3u);
    }
    {
        ThreadsGuard g("zero");
        EXPECT_GE(thread_count(), 1u);
    }
    {
        ThreadsGuard g("-2");
        EXPECT_GE(thread_count(), 1u);
    }
}

TEST(Parallel, EveryIndexOnce) {
    ThreadsGuard g("4");
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
    parallel_for(0, [](std::size_t) { FAIL(); });
}

TEST(Parallel, PropagatesExceptions) {
    ThreadsGuard g("4");
    EXPECT_THROW(parallel_for(1000,
                              [](std::size_t i) {
                                  if (i == 777) throw std::runtime_error("boom");
                              }),
                 std::runtime_error);
}

TEST(Parallel, SamplesAreIdenticalForAnyThreadCount) {
    const ModeTable t = table();
    SampleSet one, many;
    {
        ThreadsGuard g("1");
        one = sample_logle(t, default_tau(50), 5000, 42);
    }
    {
        ThreadsGuard g("7");
        many = sample_logle(t, default_tau(50), 5000, 42);
    }
    EXPECT_EQ(one.times, many.times);
    EXPECT_EQ(one.z, many.z);
    EXPECT_EQ(one.z_mean, many.z_mean);
}

TEST(Parallel, SeriesIdenticalForAnyThreadCount) {
    const ModeTable t = table();
    std::vector<double> times(2000);
    for (std::size_t i = 0; i < times.size(); ++i) times[i] = 0.01 * static_cast<double>(i);
    std::vector<EchoPoint> one, many;
    {
        ThreadsGuard g("1");
        one = echo_series(t, times);
    }
    {
        ThreadsGuard g("5");
        many = echo_series(t, times);
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        EXPECT_EQ(one[i].le, many[i].le);
        EXPECT_EQ(one[i].lef, many[i].lef);
    }
}
