#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "padic/core.hpp"

namespace padic {

// SplitMix64 output function over (key, counter): the stream for a path is a pure
// function of (seed, path_id), so results do not depend on thread scheduling.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t path_id);
    std::uint64_t next();
    double uniform();  // in (0, 1]
    double exponential(double rate);
    std::uint64_t counter() const { return ctr_; }

private:
    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
};

// r-ball projection: the state is the distance exponent d >= r+1 to the target
// ball, or the target ball itself.
struct DistanceChainModel {
    ModelParams params;
    double exit_rate = 0.0;  // B_alpha(r)
    double q = 0.0;          // p^{-alpha}; P(jump exponent = r+1+i) = (1-q) q^i

    static DistanceChainModel make(const ModelParams& m);
    double jump_prob(int i) const;
    // rate of jumps that can change distance exponent d (those with m >= d)
    double active_rate(int d) const;
};

inline constexpr int kHit = -2147483647;

int sample_jump_exponent(const DistanceChainModel& model, CounterRng& rng);
// jump exponent conditioned on m >= d (memoryless shift of the geometric law)
int sample_jump_exponent_from(const DistanceChainModel& model, int d, CounterRng& rng);
// new distance exponent or kHit
int step_distance(const DistanceChainModel& model, int d, int m, CounterRng& rng);

struct ChainEvent {
    double time = 0.0;
    int distance = 0;  // kHit for entry into the target ball
};

struct ChainPath {
    std::uint64_t seed = 0;
    std::uint64_t path_id = 0;
    std::vector<ChainEvent> events;
    std::vector<double> hits;
    std::optional<double> censored_at;
};

enum class PathKind { FirstPassage, FirstReturn, Hitting };

// Full trajectory up to the horizon. FirstPassage/FirstReturn stop at the first hit.
// Only jumps that change the distance exponent are recorded.
ChainPath simulate_path(const DistanceChainModel& model, PathKind kind, double horizon, std::uint64_t seed,
                        std::uint64_t path_id);

std::optional<double> first_passage_sample(const DistanceChainModel& model, double horizon, CounterRng& rng);
// returns the exit time through *exit_time when given
std::optional<double> first_return_sample(const DistanceChainModel& model, double horizon, CounterRng& rng,
                                          double* exit_time = nullptr);
// entry times into the target ball during (0, T]
std::vector<double> hitting_sample(const DistanceChainModel& model, double T, CounterRng& rng);

// ---- estimators ----

struct MeanEstimate {
    double mean = 0.0;
    double sd = 0.0;
    long n = 0;
    double half_width(double z = 1.96) const;
};

class Welford {
public:
    void add(double x);
    void merge(const Welford& o);
    MeanEstimate result() const;
    long count() const { return n_; }

private:
    long n_ = 0;
    double mean_ = 0.0, m2_ = 0.0;
};

struct ProportionEstimate {
    double phat = 0.0;
    long n = 0;
    // |phat - p0| / sqrt(p0(1-p0)/n)
    double z_against(double p0) const;
};
ProportionEstimate proportion(long successes, long n);

// sup |ecdf - cdf| for the sample (sorted internally)
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);
double ecdf(const std::vector<double>& sorted, double x);
// DKW half-width sqrt(ln(2/delta)/(2n))
double dkw_half_width(long n, double delta = 0.05);

// ---- parallel driver ----

// PADIC_FPT_THREADS caps the worker count (default: hardware concurrency).
int worker_count();

// Runs fn(begin, end) over contiguous chunks of [0, n) on the worker pool.
void parallel_chunks(long n, const std::function<void(long, long)>& fn);

struct PassageBatch {
    std::vector<std::optional<double>> times;  // by path id
    long hits() const;
};
PassageBatch first_passage_batch(const DistanceChainModel& model, double horizon, long n, std::uint64_t seed);

struct ReturnBatch {
    std::vector<std::optional<double>> times;
    std::vector<double> exit_times;
    long returns() const;
};
ReturnBatch first_return_batch(const DistanceChainModel& model, double horizon, long n, std::uint64_t seed);

// counts[i] = number of entries by T for path i; entry times are not kept
std::vector<int> hitting_counts(const DistanceChainModel& model, double T, long n, std::uint64_t seed);

// CSV with columns path_id,event_index,time,distance_exponent_or_HIT
void write_paths_csv(const std::vector<ChainPath>& paths, const std::string& path);
std::string paths_csv(const std::vector<ChainPath>& paths);

}  // namespace padic
