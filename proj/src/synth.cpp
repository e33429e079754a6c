#include "mmq/synth.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <thread>

#include "mmq/errors.hpp"
#include "mmq/quantize.hpp"
#include "mmq/rng.hpp"

namespace mmq {

namespace {

constexpr std::size_t kClusterRestarts = 100;

std::uint64_t bits_of(double x) { return std::bit_cast<std::uint64_t>(x); }

Point vertex_point(std::uint64_t code, std::size_t d) {
    Point v(d, 0.0);
    for (std::size_t t = 0; t < d; ++t) v[t] = static_cast<double>((code >> t) & 1u);
    return v;
}

Point sphere_point(std::size_t d, double radius, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    while (true) {
        Point v(d);
        double n2 = 0.0;
        for (std::size_t t = 0; t < d; ++t) {
            v[t] = gauss(rng);
            n2 += v[t] * v[t];
        }
        if (n2 > 0.0) {
            const double scale = radius / std::sqrt(n2);
            for (double& c : v) c *= scale;
            return v;
        }
    }
}

double max_norm(const std::vector<Point>& pts) {
    double m = 0.0;
    for (const Point& p : pts) m = std::max(m, norm2(p));
    return m;
}

}  // namespace

void validate_spec(const MixtureSpec& spec) {
    if (spec.d < 1) throw SpecInvalid("mixture spec: d must be >= 1");
    if (spec.L < 1) throw SpecInvalid("mixture spec: L must be >= 1");
    if (spec.d < 63 && spec.L > (1ull << spec.d))
        throw SpecInvalid("mixture spec: L exceeds the 2^d hypercube vertices");
    if (spec.p < 1) throw SpecInvalid("mixture spec: p must be >= 1");
    if (spec.N < 1) throw SpecInvalid("mixture spec: N must be >= 1");
    if (spec.n_per_class < 1) throw SpecInvalid("mixture spec: n_per_class must be >= 1");
    if (!(spec.sphere_radius > 0.0)) throw SpecInvalid("mixture spec: sphere_radius must be > 0");
    if (spec.r < 0.0) throw SpecInvalid("mixture spec: r must be >= 0");
    if (spec.noise_sd < 0.0) throw SpecInvalid("mixture spec: noise_sd must be >= 0");
}

MixtureCenters gen_centers(const MixtureSpec& spec, std::uint64_t seed) {
    validate_spec(spec);
    MixtureCenters centers;

    std::mt19937_64 sphere_rng(substream(seed, "sphere"));
    for (std::size_t i = 0; i + 1 < spec.p; ++i)
        centers.shared.push_back(sphere_point(spec.d, spec.sphere_radius, sphere_rng));

    std::mt19937_64 vertex_rng(substream(seed, "vertices"));
    if (spec.d <= 20) {
        // Partial Fisher-Yates over the enumerated vertices.
        std::vector<std::uint64_t> codes(1ull << spec.d);
        std::iota(codes.begin(), codes.end(), 0ull);
        for (std::size_t i = 0; i < spec.L; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, codes.size() - 1);
            std::swap(codes[i], codes[pick(vertex_rng)]);
            centers.vertex_codes.push_back(codes[i]);
        }
    } else {
        std::set<std::uint64_t> seen;
        std::uniform_int_distribution<std::uint64_t> bits(0, (1ull << spec.d) - 1);
        while (centers.vertex_codes.size() < spec.L) {
            const std::uint64_t code = bits(vertex_rng);
            if (seen.insert(code).second) centers.vertex_codes.push_back(code);
        }
    }
    for (std::uint64_t code : centers.vertex_codes)
        centers.vertices.push_back(vertex_point(code, spec.d));
    return centers;
}

DiscreteMeasure sample_measure(const MixtureSpec& spec, const MixtureCenters& centers,
                               std::size_t cls, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Point> support;  // shared centers first, the class vertex last
    for (const Point& c : centers.shared) support.push_back(c);
    support.push_back(centers.vertices.at(cls));

    std::vector<Point> atoms;
    atoms.reserve(support.size() * spec.N);
    for (const Point& c : support) {
        for (std::size_t i = 0; i < spec.N; ++i) {
            Point x(spec.d);
            for (std::size_t t = 0; t < spec.d; ++t)
                x[t] = spec.r * c[t] + spec.noise_sd * gauss(rng);
            atoms.push_back(std::move(x));
        }
    }
    const double radius = std::max(1e-9, max_norm(atoms) * 1.01);
    return make_measure(std::move(atoms), std::vector<double>(support.size() * spec.N, 1.0),
                        radius);
}

DiscreteMeasure sample_measure(const MixtureSpec& spec, int label, std::uint64_t seed) {
    if (label < 1 || static_cast<std::size_t>(label) > spec.L)
        throw SpecInvalid("sample_measure: label out of [1, L]");
    const MixtureCenters centers = gen_centers(spec, seed);
    const std::size_t cls = static_cast<std::size_t>(label - 1);
    std::mt19937_64 rng(substream(seed, "atoms", centers.vertex_codes[cls]));
    return sample_measure(spec, centers, cls, rng);
}

MeasureSample gen_sample_blocked(const MixtureSpec& spec, const MixtureCenters& centers,
                                 std::uint64_t seed) {
    validate_spec(spec);
    MeasureSample sample;
    std::vector<int> labels;
    for (std::size_t cls = 0; cls < spec.L; ++cls) {
        std::mt19937_64 rng(substream(seed, "atoms", centers.vertex_codes[cls]));
        for (std::size_t i = 0; i < spec.n_per_class; ++i) {
            sample.measures.push_back(sample_measure(spec, centers, cls, rng));
            labels.push_back(static_cast<int>(cls) + 1);
        }
    }
    // One ball radius shared across the sample.
    double radius = 0.0;
    for (const DiscreteMeasure& m : sample.measures) radius = std::max(radius, m.ball_radius);
    for (DiscreteMeasure& m : sample.measures) m.ball_radius = radius;
    sample.labels = std::move(labels);
    return sample;
}

MeasureSample gen_sample(const MixtureSpec& spec, std::uint64_t seed) {
    MeasureSample blocked = gen_sample_blocked(spec, gen_centers(spec, seed), seed);
    std::vector<std::size_t> order(blocked.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(substream(seed, "shuffle"));
    seeded_shuffle(order, rng);

    MeasureSample out;
    std::vector<int> labels;
    for (std::size_t i : order) {
        out.measures.push_back(std::move(blocked.measures[i]));
        labels.push_back((*blocked.labels)[i]);
    }
    out.labels = std::move(labels);
    return out;
}

std::size_t lattice_side(std::size_t k, std::size_t d) {
    std::size_t m = 1;
    while (true) {
        const std::size_t next = m + 1;
        double cells = 1.0;
        for (std::size_t t = 0; t < d; ++t) cells *= static_cast<double>(next);
        if (cells > static_cast<double>(k)) return m;
        m = next;
    }
}

Codebook baseline_codebook(BaselineKind kind, const MeasureSample& sample, std::size_t k,
                           const MixtureSpec& spec, std::uint64_t seed) {
    validate_spec(spec);
    if (k < 1) throw SpecInvalid("baseline_codebook: k must be >= 1");
    if (sample.measures.empty()) throw EmptySample("baseline_codebook: empty sample");
    const std::size_t d = sample.measures[0].ambient_dim;
    double sample_radius = 0.0;
    for (const DiscreteMeasure& m : sample.measures)
        sample_radius = std::max(sample_radius, m.ball_radius);

    Codebook cb;
    cb.ambient_dim = d;

    if (kind == BaselineKind::rand) {
        // Weight-proportional draws (with replacement) from all atoms.
        std::vector<double> prefix;
        std::vector<const Point*> atoms;
        double total = 0.0;
        for (const DiscreteMeasure& m : sample.measures)
            for (std::size_t i = 0; i < m.size(); ++i) {
                total += m.weights[i];
                prefix.push_back(total);
                atoms.push_back(&m.points[i]);
            }
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (std::size_t j = 0; j < k; ++j) {
            const double u = unit(rng) * total;
            const std::size_t idx =
                std::lower_bound(prefix.begin(), prefix.end(), u) - prefix.begin();
            cb.codepoints.push_back(*atoms[std::min(idx, atoms.size() - 1)]);
        }
        cb.ball_radius = sample_radius;
    } else {
        const std::size_t m = lattice_side(k, d);
        const double hi = 10.0 * spec.r;
        std::vector<std::size_t> idx(d, 0);
        while (true) {
            Point pt(d);
            for (std::size_t t = 0; t < d; ++t)
                pt[t] = m == 1 ? hi / 2.0
                               : hi * static_cast<double>(idx[t]) / static_cast<double>(m - 1);
            cb.codepoints.push_back(std::move(pt));
            bool done = true;
            std::size_t t = d;
            while (t-- > 0) {
                if (++idx[t] < m) {
                    done = false;
                    break;
                }
                idx[t] = 0;
            }
            if (done) break;
        }
        cb.ball_radius = std::max(sample_radius, std::max(1e-9, hi * std::sqrt(static_cast<double>(d))));
    }
    return cb;
}

Embedding histogram_vectorize(const MeasureSample& sample, std::size_t bins_per_axis,
                              double box_hi) {
    if (bins_per_axis < 1) throw SpecInvalid("histogram_vectorize: bins_per_axis must be >= 1");
    if (!(box_hi > 0.0)) throw SpecInvalid("histogram_vectorize: box upper edge must be > 0");
    if (sample.measures.empty()) throw EmptySample("histogram_vectorize: empty sample");
    const std::size_t d = sample.measures[0].ambient_dim;
    std::size_t tiles = 1;
    for (std::size_t t = 0; t < d; ++t) tiles *= bins_per_axis;

    Embedding e;
    e.width = tiles;
    const double tile_w = box_hi / static_cast<double>(bins_per_axis);
    for (const DiscreteMeasure& m : sample.measures) {
        std::vector<double> row(tiles, 0.0);
        for (std::size_t i = 0; i < m.size(); ++i) {
            std::size_t flat = 0;
            for (std::size_t t = 0; t < d; ++t) {
                long bin = static_cast<long>(std::floor(m.points[i][t] / tile_w));
                bin = std::clamp(bin, 0l, static_cast<long>(bins_per_axis) - 1);
                flat = flat * bins_per_axis + static_cast<std::size_t>(bin);
            }
            row[flat] += m.weights[i];
        }
        e.rows.push_back(std::move(row));
    }
    return e;
}

std::string method_name(BenchMethod m) {
    switch (m) {
        case BenchMethod::atol: return "atol";
        case BenchMethod::rand: return "rand";
        case BenchMethod::grid: return "grid";
        case BenchMethod::histogram: return "histogram";
    }
    return "?";
}

BenchMethod parse_method(const std::string& name) {
    if (name == "atol") return BenchMethod::atol;
    if (name == "rand") return BenchMethod::rand;
    if (name == "grid") return BenchMethod::grid;
    if (name == "histogram") return BenchMethod::histogram;
    throw ConfigError("unknown method '" + name + "'");
}

namespace {

// Calibration subset: 10% of the measures rounded up, at least one, chosen
// without replacement on an RNG stream independent of the sampling stream.
MeasureSample calibration_subset(const MeasureSample& sample, std::uint64_t seed) {
    const std::size_t n = sample.size();
    const std::size_t want = std::max<std::size_t>(1, (n + 9) / 10);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < want; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(order[i], order[pick(rng)]);
    }
    order.resize(want);
    std::sort(order.begin(), order.end());
    MeasureSample subset;
    for (std::size_t i : order) subset.measures.push_back(sample.measures[i]);
    return subset;
}

Embedding embed_for_method(BenchMethod method, const MeasureSample& sample,
                           const MixtureSpec& spec, std::size_t budget, std::uint64_t master_seed,
                           std::size_t rep) {
    const VectorizeConfig base{1.0, KernelSpec{KernelKind::exponential}};
    switch (method) {
        case BenchMethod::atol: {
            MeasureSample calib =
                calibration_subset(sample, substream(master_seed, "calib", rep));
            QuantizeConfig qc;
            qc.k = budget;
            qc.algorithm = calib.size() >= 2 ? QuantizeAlgorithm::minibatch
                                             : QuantizeAlgorithm::minibatch_nosplit;
            qc.seed = substream(master_seed, "quantize", rep, budget);
            auto [cb, report] = minibatch_quantize(calib, qc);
            VectorizeConfig vc = base;
            vc.sigma = default_sigma(cb);
            return vectorize_sample(sample, cb, vc);
        }
        case BenchMethod::rand: {
            Codebook cb = baseline_codebook(BaselineKind::rand, sample, budget, spec,
                                            substream(master_seed, "rand", rep, budget));
            VectorizeConfig vc = base;
            vc.sigma = default_sigma(cb);
            return vectorize_sample(sample, cb, vc);
        }
        case BenchMethod::grid: {
            Codebook cb = baseline_codebook(BaselineKind::grid, sample, budget, spec, 0);
            VectorizeConfig vc = base;
            vc.sigma = default_sigma(cb);
            return vectorize_sample(sample, cb, vc);
        }
        case BenchMethod::histogram:
            return histogram_vectorize(sample, lattice_side(budget, spec.d), 10.0 * spec.r);
    }
    throw ConfigError("embed_for_method: unreachable");
}

struct SweepPoint {
    double value;         // budget or signal level
    std::size_t budget;   // vectorization budget at this point
    MixtureSpec spec;     // spec with r resolved for this point
    std::uint64_t sample_key;  // distinguishes per-point samples (q2)
};

std::vector<BenchResult> run_sweep(const std::string& sweep_name,
                                   const std::vector<SweepPoint>& points,
                                   const std::vector<BenchMethod>& methods, std::size_t reps,
                                   std::uint64_t seed, std::size_t threads) {
    if (reps < 1) throw SpecInvalid("bench: reps must be >= 1");
    if (methods.empty()) throw SpecInvalid("bench: no methods selected");
    if (points.empty()) throw SpecInvalid("bench: empty sweep");
    for (const SweepPoint& pt : points) validate_spec(pt.spec);

    const std::size_t combos = methods.size() * points.size();
    std::vector<std::vector<double>> nmis(combos, std::vector<double>(reps, 0.0));
    std::vector<std::vector<double>> walls(combos, std::vector<double>(reps, 0.0));

    auto run_rep = [&](std::size_t rep) {
        // Fresh sample per repetition, shared by every method and budget at a
        // given sweep point.
        std::vector<MeasureSample> samples;
        std::vector<ClusterLabels> truths;
        samples.reserve(points.size());
        truths.reserve(points.size());
        for (std::size_t pi = 0; pi < points.size(); ++pi) {
            if (pi > 0 && points[pi].sample_key == points[pi - 1].sample_key) {
                samples.push_back(samples[pi - 1]);
                truths.push_back(truths[pi - 1]);
            } else {
                samples.push_back(gen_sample(points[pi].spec,
                                             substream(seed, "sample", rep,
                                                       points[pi].sample_key)));
                truths.push_back(canonicalize(*samples.back().labels));
            }
        }
        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            for (std::size_t pi = 0; pi < points.size(); ++pi) {
                const SweepPoint& pt = points[pi];
                const auto t0 = std::chrono::steady_clock::now();
                Embedding emb =
                    embed_for_method(methods[mi], samples[pi], pt.spec, pt.budget, seed, rep);
                ClusterLabels labels = kmeans_vectors(
                    emb, pt.spec.L, kClusterRestarts,
                    substream(seed, "cluster:" + method_name(methods[mi]), rep,
                              bits_of(pt.value)));
                const double score = nmi(labels, truths[pi]);
                const auto t1 = std::chrono::steady_clock::now();
                nmis[mi * points.size() + pi][rep] = score;
                walls[mi * points.size() + pi][rep] =
                    std::chrono::duration<double, std::milli>(t1 - t0).count();
            }
        }
    };

    if (threads <= 1) {
        for (std::size_t rep = 0; rep < reps; ++rep) run_rep(rep);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const std::size_t workers = std::min(threads, reps);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&]() {
                while (true) {
                    const std::size_t rep = next.fetch_add(1);
                    if (rep >= reps) return;
                    run_rep(rep);
                }
            });
        for (auto& t : pool) t.join();
    }

    std::vector<BenchResult> results;
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        for (std::size_t pi = 0; pi < points.size(); ++pi) {
            BenchResult r;
            r.method = method_name(methods[mi]);
            r.sweep_name = sweep_name;
            r.sweep_value = points[pi].value;
            r.nmi_values = nmis[mi * points.size() + pi];
            r.wall_ms = walls[mi * points.size() + pi];
            double sum = 0.0;
            for (double v : r.nmi_values) sum += v;
            r.mean = sum / static_cast<double>(reps);
            double sq = 0.0;
            for (double v : r.nmi_values) sq += (v - r.mean) * (v - r.mean);
            const double sd = reps >= 2 ? std::sqrt(sq / static_cast<double>(reps - 1)) : 0.0;
            r.ci95 = 1.96 * sd / std::sqrt(static_cast<double>(reps));
            results.push_back(std::move(r));
        }
    }
    return results;
}

}  // namespace

std::vector<BenchResult> run_q1(const MixtureSpec& spec, const std::vector<std::size_t>& budgets,
                                const std::vector<BenchMethod>& methods, std::size_t reps,
                                std::uint64_t seed, std::size_t threads) {
    std::vector<SweepPoint> points;
    for (std::size_t k : budgets) {
        if (k < 1) throw SpecInvalid("run_q1: budgets must be >= 1");
        points.push_back({static_cast<double>(k), k, spec, 0});
    }
    return run_sweep("budget", points, methods, reps, seed, threads);
}

std::vector<BenchResult> run_q2(const MixtureSpec& spec, const std::vector<double>& signal_levels,
                                std::size_t budget, const std::vector<BenchMethod>& methods,
                                std::size_t reps, std::uint64_t seed, std::size_t threads) {
    if (budget < 1) throw SpecInvalid("run_q2: budget must be >= 1");
    std::vector<SweepPoint> points;
    for (double r : signal_levels) {
        MixtureSpec swept = spec;
        swept.r = r;
        points.push_back({r, budget, swept, bits_of(r)});
    }
    return run_sweep("signal", points, methods, reps, seed, threads);
}

}  // namespace mmq
