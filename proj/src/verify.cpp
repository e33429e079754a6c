#include "mmq/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "mmq/errors.hpp"
#include "mmq/quantize.hpp"

namespace mmq {

namespace {

constexpr std::size_t kBruteForceCap = 12;

bool masses_close(double a, double b) {
    return std::fabs(a - b) <= 1e-9 * std::max({std::fabs(a), std::fabs(b), 1e-300});
}

// 1-d W1 as the area between the two cumulative mass functions.
double w1_line(const DiscreteMeasure& m1, const DiscreteMeasure& m2) {
    std::vector<std::pair<double, std::pair<double, double>>> events;
    events.reserve(m1.size() + m2.size());
    for (std::size_t i = 0; i < m1.size(); ++i)
        events.push_back({m1.points[i][0], {m1.weights[i], 0.0}});
    for (std::size_t i = 0; i < m2.size(); ++i)
        events.push_back({m2.points[i][0], {0.0, m2.weights[i]}});
    std::sort(events.begin(), events.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    double area = 0.0, f1 = 0.0, f2 = 0.0;
    for (std::size_t t = 0; t < events.size(); ++t) {
        if (t > 0) area += std::fabs(f1 - f2) * (events[t].first - events[t - 1].first);
        f1 += events[t].second.first;
        f2 += events[t].second.second;
    }
    return area;
}

// Kuhn-Munkres with potentials, square cost matrix, O(n^3).
double min_assignment_cost(const std::vector<std::vector<double>>& cost) {
    const std::size_t n = cost.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = match[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    double total = 0.0;
    for (std::size_t j = 1; j <= n; ++j) total += cost[match[j] - 1][j - 1];
    return total;
}

bool uniform_weights(const DiscreteMeasure& m) {
    for (double w : m.weights)
        if (std::fabs(w - m.weights[0]) > 1e-12 * std::fabs(m.weights[0])) return false;
    return true;
}

}  // namespace

ShatteringCertificate check_shattering(const MeasureSample& sample, const Codebook& cb, int p,
                                       double r, double delta) {
    if (!sample.labels) throw MissingLabels("check_shattering: sample has no labels");
    validate_labels(sample);
    if (p < 1) throw ConfigError("check_shattering: p must be >= 1");
    if (!(r > 0.0)) throw ConfigError("check_shattering: r must be positive");
    if (!(delta > 0.0)) throw ConfigError("check_shattering: delta must be positive");

    const double small_radius = r / p;
    const double large_radius = 4.0 * p * r;
    const std::size_t n = sample.size();
    const std::size_t k = cb.size();

    // Ball masses per (measure, codepoint), both radii.
    std::vector<std::vector<double>> small(n, std::vector<double>(k));
    std::vector<std::vector<double>> large(n, std::vector<double>(k));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            small[i][j] = ball_mass(sample.measures[i], cb.codepoints[j], small_radius);
            large[i][j] = ball_mass(sample.measures[i], cb.codepoints[j], large_radius);
        }

    ShatteringCertificate cert;
    cert.p = p;
    cert.r = r;
    cert.delta = delta;
    const std::vector<int>& z = *sample.labels;
    for (std::size_t i1 = 0; i1 < n; ++i1) {
        for (std::size_t i2 = i1 + 1; i2 < n; ++i2) {
            if (z[i1] == z[i2]) continue;
            bool found = false;
            for (std::size_t j = 0; j < k && !found; ++j) {
                if (small[i1][j] >= large[i2][j] + delta) {
                    cert.witnesses.push_back({i1, i2, j, +1});
                    found = true;
                } else if (small[i2][j] >= large[i1][j] + delta) {
                    cert.witnesses.push_back({i1, i2, j, -1});
                    found = true;
                }
            }
            if (!found) cert.failing_pairs.push_back({i1, i2});
        }
    }
    cert.satisfied = cert.failing_pairs.empty();
    return cert;
}

double w1_exact(const DiscreteMeasure& m1, const DiscreteMeasure& m2) {
    if (m1.ambient_dim != m2.ambient_dim)
        throw DimensionMismatch("w1_exact: measures of different dimension");
    if (!masses_close(m1.total_mass(), m2.total_mass()))
        throw MassMismatch("w1_exact: total masses differ");

    if (m1.ambient_dim == 1) return w1_line(m1, m2);

    if (m1.size() != m2.size() || !uniform_weights(m1) || !uniform_weights(m2))
        throw UnsupportedInstance(
            "w1_exact: multi-d instances need uniform weights and equal support counts");

    const std::size_t n = m1.size();
    std::vector<std::vector<double>> cost(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) cost[i][j] = distance(m1.points[i], m2.points[j]);
    return m1.weights[0] * min_assignment_cost(cost);
}

ConcentrationResult check_concentration(const MeasureSample& sample, double w) {
    if (!sample.labels) throw MissingLabels("check_concentration: sample has no labels");
    validate_labels(sample);
    if (w < 0.0) throw ConfigError("check_concentration: w must be >= 0");

    const std::vector<int>& z = *sample.labels;
    ConcentrationResult res;
    for (std::size_t i1 = 0; i1 < sample.size(); ++i1) {
        for (std::size_t i2 = i1 + 1; i2 < sample.size(); ++i2) {
            if (z[i1] != z[i2]) continue;
            if (!masses_close(sample.measures[i1].total_mass(),
                              sample.measures[i2].total_mass())) {
                res.failing_pair = {i1, i2};
                res.reason = "mass";
                return res;
            }
            if (w1_exact(sample.measures[i1], sample.measures[i2]) > w) {
                res.failing_pair = {i1, i2};
                res.reason = "w1";
                return res;
            }
        }
    }
    res.ok = true;
    return res;
}

std::pair<Codebook, double> brute_force_kmeans(const DiscreteMeasure& m, std::size_t k) {
    const std::size_t n = m.size();
    if (n > kBruteForceCap)
        throw TooLarge("brute_force_kmeans: support of " + std::to_string(n) +
                       " atoms exceeds the cap of " + std::to_string(kBruteForceCap));
    if (k == 0 || k > n)
        throw ConfigError("brute_force_kmeans: need 1 <= k <= support size");
    const std::size_t d = m.ambient_dim;

    // Restricted-growth strings enumerate partitions into <= k blocks.
    std::vector<std::size_t> assign(n, 0);
    std::vector<std::size_t> best_assign;
    double best_sse = std::numeric_limits<double>::infinity();

    std::vector<double> mass(k), sqsum(k);
    std::vector<Point> vecsum(k, Point(d, 0.0));

    auto partition_sse = [&]() {
        const std::size_t blocks = 1 + *std::max_element(assign.begin(), assign.end());
        for (std::size_t b = 0; b < blocks; ++b) {
            mass[b] = 0.0;
            sqsum[b] = 0.0;
            std::fill(vecsum[b].begin(), vecsum[b].end(), 0.0);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t b = assign[i];
            mass[b] += m.weights[i];
            for (std::size_t t = 0; t < d; ++t) {
                vecsum[b][t] += m.weights[i] * m.points[i][t];
                sqsum[b] += m.weights[i] * m.points[i][t] * m.points[i][t];
            }
        }
        double sse = 0.0;
        for (std::size_t b = 0; b < blocks; ++b) {
            double c2 = 0.0;
            for (std::size_t t = 0; t < d; ++t) c2 += vecsum[b][t] * vecsum[b][t];
            sse += sqsum[b] - c2 / mass[b];
        }
        return sse;
    };

    // Iterate restricted-growth strings: assign[0] = 0 and
    // assign[i] <= 1 + max(assign[0..i-1]), all values < k.
    while (true) {
        const double sse = partition_sse();
        if (sse < best_sse) {
            best_sse = sse;
            best_assign = assign;
        }
        std::size_t i = n;
        while (i-- > 1) {
            std::size_t prefix_max = 0;
            for (std::size_t t = 0; t < i; ++t) prefix_max = std::max(prefix_max, assign[t]);
            if (assign[i] <= prefix_max && assign[i] + 1 < k) {
                ++assign[i];
                for (std::size_t t = i + 1; t < n; ++t) assign[t] = 0;
                break;
            }
        }
        if (i == 0) break;  // enumeration exhausted
    }

    const std::size_t blocks = 1 + *std::max_element(best_assign.begin(), best_assign.end());
    Codebook cb;
    cb.ambient_dim = d;
    cb.ball_radius = m.ball_radius;
    std::vector<double> bmass(blocks, 0.0);
    cb.codepoints.assign(blocks, Point(d, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t b = best_assign[i];
        bmass[b] += m.weights[i];
        for (std::size_t t = 0; t < d; ++t) cb.codepoints[b][t] += m.weights[i] * m.points[i][t];
    }
    for (std::size_t b = 0; b < blocks; ++b)
        for (std::size_t t = 0; t < d; ++t) cb.codepoints[b][t] /= bmass[b];
    while (cb.codepoints.size() < k) cb.codepoints.push_back(cb.codepoints[0]);
    return {std::move(cb), std::max(0.0, best_sse)};
}

CodebookDiagnostics codebook_diagnostics(const Codebook& cb, const DiscreteMeasure& m) {
    CodebookDiagnostics diag;
    if (cb.size() >= 2) {
        double sep = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < cb.size(); ++i)
            for (std::size_t j = i + 1; j < cb.size(); ++j)
                sep = std::min(sep, distance(cb.codepoints[i], cb.codepoints[j]));
        diag.min_separation = sep;
    }
    const CellStats stats = cell_stats(cb, m);
    diag.min_cell_mass = *std::min_element(stats.masses.begin(), stats.masses.end());
    return diag;
}

}  // namespace mmq
