#include "mmq/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "mmq/errors.hpp"
#include "mmq/rng.hpp"

namespace mmq {

namespace {

void check_dims(const Codebook& cb, const DiscreteMeasure& m) {
    if (cb.ambient_dim != m.ambient_dim)
        throw DimensionMismatch("codebook dimension " + std::to_string(cb.ambient_dim) +
                                " vs measure dimension " + std::to_string(m.ambient_dim));
}

double codebook_movement(const Codebook& a, const Codebook& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += squared_distance(a.codepoints[j], b.codepoints[j]);
    return std::sqrt(s);
}

void project_into_ball(Point& p, double radius) {
    const double n = norm2(p);
    if (n > radius && n > 0.0) {
        const double scale = radius / n;
        for (double& c : p) c *= scale;
    }
}

double sample_ball_radius(const MeasureSample& sample) {
    double r = 0.0;
    for (const DiscreteMeasure& m : sample.measures) r = std::max(r, m.ball_radius);
    return r;
}

Codebook resolve_init(const MeasureSample& sample, const DiscreteMeasure& target,
                      const QuantizeConfig& cfg) {
    if (cfg.init) {
        if (cfg.init->size() != cfg.k)
            throw ConfigError("initial codebook has " + std::to_string(cfg.init->size()) +
                              " codepoints, expected k = " + std::to_string(cfg.k));
        check_dims(*cfg.init, sample.measures[0]);
        return *cfg.init;
    }
    return kmeanspp_init(target, cfg.k, substream(cfg.seed, "init"));
}

void finalize_report(QuantizeReport& report, const Codebook& cb, const DiscreteMeasure& mean) {
    report.cell_masses = cell_stats(cb, mean).masses;
    report.min_cell_mass =
        *std::min_element(report.cell_masses.begin(), report.cell_masses.end());
    if (cb.size() >= 2) {
        double sep = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < cb.size(); ++i)
            for (std::size_t j = i + 1; j < cb.size(); ++j)
                sep = std::min(sep, distance(cb.codepoints[i], cb.codepoints[j]));
        report.min_cell_separation = sep;
    }
}

}  // namespace

std::size_t voronoi_assign(const Codebook& cb, const Point& x) {
    if (cb.ambient_dim != x.size())
        throw DimensionMismatch("voronoi_assign: codebook dimension " +
                                std::to_string(cb.ambient_dim) + " vs point dimension " +
                                std::to_string(x.size()));
    std::size_t best = 0;
    double best_d2 = squared_distance(x, cb.codepoints[0]);
    for (std::size_t j = 1; j < cb.size(); ++j) {
        const double d2 = squared_distance(x, cb.codepoints[j]);
        if (d2 < best_d2) {  // strict: ties stay with the lowest index
            best_d2 = d2;
            best = j;
        }
    }
    return best;
}

double distortion(const Codebook& cb, const DiscreteMeasure& m) {
    check_dims(cb, m);
    double total = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        double best = squared_distance(m.points[i], cb.codepoints[0]);
        for (std::size_t j = 1; j < cb.size(); ++j)
            best = std::min(best, squared_distance(m.points[i], cb.codepoints[j]));
        total += m.weights[i] * best;
    }
    return total;
}

CellStats cell_stats(const Codebook& cb, const DiscreteMeasure& m) {
    check_dims(cb, m);
    CellStats stats;
    stats.masses.assign(cb.size(), 0.0);
    stats.moment_sums.assign(cb.size(), Point(cb.ambient_dim, 0.0));
    for (std::size_t i = 0; i < m.size(); ++i) {
        const std::size_t j = voronoi_assign(cb, m.points[i]);
        stats.masses[j] += m.weights[i];
        for (std::size_t t = 0; t < cb.ambient_dim; ++t)
            stats.moment_sums[j][t] += m.weights[i] * m.points[i][t];
    }
    return stats;
}

Codebook kmeanspp_init(const DiscreteMeasure& m, std::size_t k, std::uint64_t seed) {
    if (m.size() == 0) throw EmptySupport("kmeanspp_init: empty support");
    if (k == 0) throw ConfigError("kmeanspp_init: k must be >= 1");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // Draws an index with probability proportional to score, by inverting the
    // running sum. Callers guarantee total > 0.
    auto draw = [&](const std::vector<double>& score, double total) {
        const double u = unit(rng) * total;
        double acc = 0.0;
        for (std::size_t i = 0; i < score.size(); ++i) {
            acc += score[i];
            if (u < acc) return i;
        }
        return score.size() - 1;
    };

    Codebook cb;
    cb.ambient_dim = m.ambient_dim;
    cb.ball_radius = m.ball_radius;

    std::vector<double> min_d2(m.size(), std::numeric_limits<double>::infinity());
    const double mass = m.total_mass();
    cb.codepoints.push_back(m.points[draw(m.weights, mass)]);

    while (cb.codepoints.size() < k) {
        std::vector<double> score(m.size());
        double total = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            min_d2[i] = std::min(min_d2[i], squared_distance(m.points[i], cb.codepoints.back()));
            score[i] = m.weights[i] * min_d2[i];
            total += score[i];
        }
        if (total == 0.0) break;  // every atom coincides with a chosen codepoint
        cb.codepoints.push_back(m.points[draw(score, total)]);
    }
    // Short support: pad by cycling over what was chosen.
    const std::size_t chosen = cb.codepoints.size();
    while (cb.codepoints.size() < k)
        cb.codepoints.push_back(cb.codepoints[cb.codepoints.size() % chosen]);
    return cb;
}

Codebook lloyd_step(const Codebook& cb, const DiscreteMeasure& m, EmptyCellPolicy policy) {
    const CellStats stats = cell_stats(cb, m);
    Codebook next = cb;
    std::vector<std::size_t> empty_cells;
    for (std::size_t j = 0; j < cb.size(); ++j) {
        if (stats.masses[j] > 0.0) {
            for (std::size_t t = 0; t < cb.ambient_dim; ++t)
                next.codepoints[j][t] = stats.moment_sums[j][t] / stats.masses[j];
        } else if (policy == EmptyCellPolicy::reseed_farthest) {
            empty_cells.push_back(j);
        }
        // keep: leave the codepoint where it was
    }
    for (std::size_t j : empty_cells) {
        // Move to the support point farthest from every other codepoint,
        // lowest atom index on ties. Earlier reseeds count as occupied.
        double best_score = -1.0;
        std::size_t best_atom = 0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            double d = std::numeric_limits<double>::infinity();
            for (std::size_t l = 0; l < next.size(); ++l)
                if (l != j) d = std::min(d, squared_distance(m.points[i], next.codepoints[l]));
            if (d > best_score) {
                best_score = d;
                best_atom = i;
            }
        }
        next.codepoints[j] = m.points[best_atom];
    }
    return next;
}

std::size_t auto_iterations(std::size_t n) {
    if (n <= 1) return 1;
    const double t = std::ceil(std::log(static_cast<double>(n)) / std::log(4.0 / 3.0));
    return std::max<std::size_t>(1, static_cast<std::size_t>(t));
}

std::pair<Codebook, QuantizeReport> batch_quantize(const MeasureSample& sample,
                                                   const QuantizeConfig& cfg) {
    if (cfg.algorithm != QuantizeAlgorithm::batch)
        throw ConfigError("batch_quantize: config algorithm is not batch");
    if (sample.measures.empty()) throw EmptySample("batch_quantize: empty sample");
    if (cfg.k == 0) throw ConfigError("batch_quantize: k must be >= 1");

    const DiscreteMeasure mean = mean_measure(sample);
    Codebook cb = resolve_init(sample, mean, cfg);
    const std::size_t planned = cfg.iterations ? *cfg.iterations : auto_iterations(sample.size());

    QuantizeReport report;
    report.seed = cfg.seed;
    report.distortion_trace.push_back(distortion(cb, mean));
    if (cfg.trace_codebooks) report.codebook_trace.push_back(cb);

    for (std::size_t t = 1; t <= planned; ++t) {
        Codebook next = lloyd_step(cb, mean, cfg.empty_cell_policy);
        const double movement = codebook_movement(cb, next);
        cb = std::move(next);
        report.distortion_trace.push_back(distortion(cb, mean));
        if (cfg.trace_codebooks) report.codebook_trace.push_back(cb);
        report.iterations_run = t;
        if (movement < 1e-12) break;  // Lloyd fixed point, further steps are no-ops
    }

    finalize_report(report, cb, mean);
    return {std::move(cb), std::move(report)};
}

std::pair<Codebook, QuantizeReport> minibatch_quantize(const MeasureSample& sample,
                                                       const QuantizeConfig& cfg) {
    const bool split = cfg.algorithm == QuantizeAlgorithm::minibatch;
    if (!split && cfg.algorithm != QuantizeAlgorithm::minibatch_nosplit)
        throw ConfigError("minibatch_quantize: config algorithm is not a mini-batch mode");
    const std::size_t n = sample.size();
    if (n == 0) throw EmptySample("minibatch_quantize: empty sample");
    if (cfg.k == 0) throw ConfigError("minibatch_quantize: k must be >= 1");
    if (cfg.minibatch_size == 0) throw ConfigError("minibatch_quantize: batch size must be >= 1");
    if (split && cfg.minibatch_size < 2)
        throw BatchTooSmall("minibatch_quantize: split mode needs batches of at least 2 measures");

    // Seeded shuffled pass over the sample, chopped into T near-equal batches.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 shuffle_rng(substream(cfg.seed, "shuffle"));
    seeded_shuffle(order, shuffle_rng);

    std::size_t batches;
    if (cfg.iterations) {
        batches = *cfg.iterations;
        if (batches == 0 || batches > n)
            throw ConfigError("minibatch_quantize: batch count must be in [1, n]");
    } else {
        batches = (n + cfg.minibatch_size - 1) / cfg.minibatch_size;
    }
    const std::size_t base = n / batches;
    const std::size_t extra = n % batches;
    if (split && base < 2 && !(base == 1 && extra > 0))
        throw BatchTooSmall("minibatch_quantize: split mode needs batches of at least 2 measures");

    const double radius = sample_ball_radius(sample);
    const std::size_t dim = sample.measures[0].ambient_dim;

    std::vector<std::vector<std::size_t>> batch_members(batches);
    {
        std::size_t pos = 0;
        for (std::size_t b = 0; b < batches; ++b) {
            const std::size_t sz = base + (b < extra ? 1 : 0);
            if (split && sz < 2)
                throw BatchTooSmall(
                    "minibatch_quantize: split mode needs batches of at least 2 measures");
            for (std::size_t i = 0; i < sz; ++i) batch_members[b].push_back(order[pos++]);
        }
    }

    Codebook cb;
    if (cfg.init) {
        if (cfg.init->size() != cfg.k)
            throw ConfigError("initial codebook has " + std::to_string(cfg.init->size()) +
                              " codepoints, expected k = " + std::to_string(cfg.k));
        check_dims(*cfg.init, sample.measures[0]);
        cb = *cfg.init;
    } else {
        MeasureSample first_batch;
        for (std::size_t i : batch_members[0]) first_batch.measures.push_back(sample.measures[i]);
        cb = kmeanspp_init(mean_measure(first_batch), cfg.k, substream(cfg.seed, "init"));
    }

    QuantizeReport report;
    report.seed = cfg.seed;
    if (cfg.trace_codebooks) report.codebook_trace.push_back(cb);

    std::vector<double> cell_mass(cfg.k);
    std::vector<Point> gradient(cfg.k, Point(dim, 0.0));

    for (std::size_t t = 0; t < batches; ++t) {
        const std::vector<std::size_t>& members = batch_members[t];
        const std::size_t half = (members.size() + 1) / 2;
        const std::size_t mass_begin = 0;
        const std::size_t mass_end = split ? half : members.size();
        const std::size_t grad_begin = split ? half : 0;
        const std::size_t grad_end = members.size();

        std::fill(cell_mass.begin(), cell_mass.end(), 0.0);
        for (auto& g : gradient) std::fill(g.begin(), g.end(), 0.0);

        // Cell masses from the first half, update numerator from the second;
        // both are means over their half.
        const double inv_mass_count = 1.0 / static_cast<double>(mass_end - mass_begin);
        for (std::size_t s = mass_begin; s < mass_end; ++s) {
            const DiscreteMeasure& m = sample.measures[members[s]];
            for (std::size_t i = 0; i < m.size(); ++i) {
                const std::size_t j = voronoi_assign(cb, m.points[i]);
                cell_mass[j] += m.weights[i] * inv_mass_count;
            }
        }
        const double inv_grad_count = 1.0 / static_cast<double>(grad_end - grad_begin);
        for (std::size_t s = grad_begin; s < grad_end; ++s) {
            const DiscreteMeasure& m = sample.measures[members[s]];
            for (std::size_t i = 0; i < m.size(); ++i) {
                const std::size_t j = voronoi_assign(cb, m.points[i]);
                for (std::size_t c = 0; c < dim; ++c)
                    gradient[j][c] +=
                        m.weights[i] * (cb.codepoints[j][c] - m.points[i][c]) * inv_grad_count;
            }
        }

        const double step = 1.0 / static_cast<double>(t + 1);
        for (std::size_t j = 0; j < cfg.k; ++j) {
            if (cell_mass[j] <= 0.0) continue;  // empty cell: codepoint unchanged
            for (std::size_t c = 0; c < dim; ++c)
                cb.codepoints[j][c] -= step * gradient[j][c] / cell_mass[j];
            project_into_ball(cb.codepoints[j], radius);
        }
        report.iterations_run = t + 1;
        if (cfg.trace_codebooks) report.codebook_trace.push_back(cb);
    }

    finalize_report(report, cb, mean_measure(sample));
    return {std::move(cb), std::move(report)};
}

std::pair<Codebook, QuantizeReport> quantize(const MeasureSample& sample,
                                             const QuantizeConfig& cfg) {
    if (cfg.algorithm == QuantizeAlgorithm::batch) return batch_quantize(sample, cfg);
    return minibatch_quantize(sample, cfg);
}

}  // namespace mmq
