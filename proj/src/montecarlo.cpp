#include "padic/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

namespace padic {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

// shared passage loop from distance d at time t; returns hit time or nullopt past horizon
std::optional<double> passage_from(const DistanceChainModel& model, int d, double t, double horizon, CounterRng& rng,
                                   ChainPath* rec) {
    while (true) {
        t += rng.exponential(model.active_rate(d));
        if (t > horizon) return std::nullopt;
        const int m = sample_jump_exponent_from(model, d, rng);
        const int nd = step_distance(model, d, m, rng);
        if (nd == d) continue;  // moved within the same sphere
        if (rec) rec->events.push_back({t, nd});
        if (nd == kHit) return t;
        d = nd;
    }
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t path_id) : key_(mix64(seed ^ mix64(path_id + kGamma))) {}

std::uint64_t CounterRng::next() { return mix64(key_ + (++ctr_) * kGamma); }

double CounterRng::uniform() { return (double(next() >> 11) + 1.0) * 0x1.0p-53; }

double CounterRng::exponential(double rate) { return -std::log(uniform()) / rate; }

DistanceChainModel DistanceChainModel::make(const ModelParams& m) {
    DistanceChainModel out;
    out.params = m;
    out.exit_rate = b_alpha_r(m);
    out.q = std::pow(double(m.p), -m.alpha);
    return out;
}

double DistanceChainModel::jump_prob(int i) const { return i < 0 ? 0.0 : (1.0 - q) * std::pow(q, i); }

double DistanceChainModel::active_rate(int d) const { return exit_rate * std::pow(q, d - params.r - 1); }

int sample_jump_exponent(const DistanceChainModel& model, CounterRng& rng) {
    return sample_jump_exponent_from(model, model.params.r + 1, rng);
}

int sample_jump_exponent_from(const DistanceChainModel& model, int d, CounterRng& rng) {
    // P(i >= j) = q^j
    const double i = std::floor(std::log(rng.uniform()) / std::log(model.q));
    return d + int(std::min(i, 1e6));
}

int step_distance(const DistanceChainModel& model, int d, int m, CounterRng& rng) {
    const int p = model.params.p, r = model.params.r;
    if (m < d) return d;
    if (m > d) return m;
    // uniform on the sphere of radius p^d: stays at d with probability (p-2)/(p-1),
    // otherwise lands in the target's sub-ball of radius p^{d-1}
    if (p > 2 && rng.uniform() <= double(p - 2) / double(p - 1)) return d;
    // inside B_{d-1}(target): P(distance <= p^{d-1-g}) = p^{-g}
    const double g = std::floor(-std::log(rng.uniform()) / std::log(double(p)));
    const double l = double(d - 1) - g;
    return l <= r ? kHit : int(l);
}

std::optional<double> first_passage_sample(const DistanceChainModel& model, double horizon, CounterRng& rng) {
    if (!(horizon > 0)) throw ValidationError({"horizon must be > 0"});
    // every point of Z_p sits at distance |a|_p = p^nu from the target
    return passage_from(model, model.params.nu, 0.0, horizon, rng, nullptr);
}

std::optional<double> first_return_sample(const DistanceChainModel& model, double horizon, CounterRng& rng,
                                          double* exit_time) {
    if (!(horizon > 0)) throw ValidationError({"horizon must be > 0"});
    const double e = rng.exponential(model.exit_rate);
    if (exit_time) *exit_time = e;
    if (e > horizon) return std::nullopt;
    return passage_from(model, sample_jump_exponent(model, rng), e, horizon, rng, nullptr);
}

std::vector<double> hitting_sample(const DistanceChainModel& model, double T, CounterRng& rng) {
    if (!(T > 0)) throw ValidationError({"T must be > 0"});
    std::vector<double> hits;
    double t = 0.0;
    int d = model.params.nu;
    while (true) {
        const auto h = passage_from(model, d, t, T, rng, nullptr);
        if (!h) return hits;
        hits.push_back(*h);
        t = *h + rng.exponential(model.exit_rate);
        if (t > T) return hits;
        d = sample_jump_exponent(model, rng);
    }
}

ChainPath simulate_path(const DistanceChainModel& model, PathKind kind, double horizon, std::uint64_t seed,
                        std::uint64_t path_id) {
    if (!(horizon > 0)) throw ValidationError({"horizon must be > 0"});
    CounterRng rng(seed, path_id);
    ChainPath path;
    path.seed = seed;
    path.path_id = path_id;
    double t = 0.0;
    int d = model.params.nu;
    if (kind == PathKind::FirstReturn) {
        t = rng.exponential(model.exit_rate);
        if (t > horizon) {
            path.censored_at = horizon;
            return path;
        }
        d = sample_jump_exponent(model, rng);
        path.events.push_back({t, d});
    } else {
        path.events.push_back({0.0, d});
    }
    while (true) {
        const auto h = passage_from(model, d, t, horizon, rng, &path);
        if (!h) {
            path.censored_at = horizon;
            return path;
        }
        path.hits.push_back(*h);
        if (kind != PathKind::Hitting) return path;
        t = *h + rng.exponential(model.exit_rate);
        if (t > horizon) {
            path.censored_at = horizon;
            return path;
        }
        d = sample_jump_exponent(model, rng);
        path.events.push_back({t, d});
    }
}

// ---- estimators ----

double MeanEstimate::half_width(double z) const { return n > 0 ? z * sd / std::sqrt(double(n)) : INFINITY; }

void Welford::add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / n_;
    m2_ += d * (x - mean_);
}

void Welford::merge(const Welford& o) {
    if (o.n_ == 0) return;
    const long n = n_ + o.n_;
    const double d = o.mean_ - mean_;
    mean_ += d * o.n_ / n;
    m2_ += o.m2_ + d * d * double(n_) * double(o.n_) / n;
    n_ = n;
}

MeanEstimate Welford::result() const {
    if (n_ == 0) throw ValidationError({"empty sample"});
    return {mean_, n_ > 1 ? std::sqrt(m2_ / (n_ - 1)) : 0.0, n_};
}

ProportionEstimate proportion(long successes, long n) {
    if (n <= 0) throw ValidationError({"empty sample"});
    return {double(successes) / n, n};
}

double ProportionEstimate::z_against(double p0) const {
    const double s = std::sqrt(p0 * (1.0 - p0) / n);
    if (s == 0.0) return phat == p0 ? 0.0 : INFINITY;
    return std::fabs(phat - p0) / s;
}

double ks_distance(std::vector<double> x, const std::function<double(double)>& cdf) {
    if (x.empty()) throw ValidationError({"empty sample"});
    std::sort(x.begin(), x.end());
    const double n = x.size();
    double d = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double F = cdf(x[i]);
        d = std::max({d, std::fabs((i + 1) / n - F), std::fabs(i / n - F)});
    }
    return d;
}

double ecdf(const std::vector<double>& sorted, double x) {
    if (sorted.empty()) throw ValidationError({"empty sample"});
    return double(std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin()) / sorted.size();
}

double dkw_half_width(long n, double delta) {
    if (n <= 0) throw ValidationError({"empty sample"});
    return std::sqrt(std::log(2.0 / delta) / (2.0 * n));
}

// ---- parallel driver ----

int worker_count() {
    int n = int(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (const char* env = std::getenv("PADIC_FPT_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return n;
}

void parallel_chunks(long n, const std::function<void(long, long)>& fn) {
    const int w = int(std::min<long>(worker_count(), std::max<long>(n, 1)));
    if (w <= 1) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(w);
    for (int i = 0; i < w; ++i) {
        const long b = n * i / w, e = n * (i + 1) / w;
        pool.emplace_back([&, i, b, e] {
            try {
                fn(b, e);
            } catch (...) {
                errs[i] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

long PassageBatch::hits() const {
    return std::count_if(times.begin(), times.end(), [](const auto& t) { return t.has_value(); });
}

long ReturnBatch::returns() const {
    return std::count_if(times.begin(), times.end(), [](const auto& t) { return t.has_value(); });
}

PassageBatch first_passage_batch(const DistanceChainModel& model, double horizon, long n, std::uint64_t seed) {
    PassageBatch out;
    out.times.resize(n);
    parallel_chunks(n, [&](long b, long e) {
        for (long i = b; i < e; ++i) {
            CounterRng rng(seed, std::uint64_t(i));
            out.times[i] = first_passage_sample(model, horizon, rng);
        }
    });
    return out;
}

ReturnBatch first_return_batch(const DistanceChainModel& model, double horizon, long n, std::uint64_t seed) {
    ReturnBatch out;
    out.times.resize(n);
    out.exit_times.resize(n);
    parallel_chunks(n, [&](long b, long e) {
        for (long i = b; i < e; ++i) {
            CounterRng rng(seed, std::uint64_t(i));
            out.times[i] = first_return_sample(model, horizon, rng, &out.exit_times[i]);
        }
    });
    return out;
}

std::vector<int> hitting_counts(const DistanceChainModel& model, double T, long n, std::uint64_t seed) {
    std::vector<int> out(n);
    parallel_chunks(n, [&](long b, long e) {
        for (long i = b; i < e; ++i) {
            CounterRng rng(seed, std::uint64_t(i));
            out[i] = int(hitting_sample(model, T, rng).size());
        }
    });
    return out;
}

std::string paths_csv(const std::vector<ChainPath>& paths) {
    std::ostringstream os;
    os << "path_id,event_index,time,distance_exponent_or_HIT\n";
    char buf[64];
    for (const auto& p : paths) {
        for (size_t i = 0; i < p.events.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", p.events[i].time);
            os << p.path_id << ',' << i << ',' << buf << ',';
            if (p.events[i].distance == kHit) os << "HIT";
            else os << p.events[i].distance;
            os << '\n';
        }
    }
    return os.str();
}

void write_paths_csv(const std::vector<ChainPath>& paths, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << paths_csv(paths);
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace padic
