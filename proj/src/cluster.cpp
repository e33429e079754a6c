#include "mmq/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "mmq/errors.hpp"
#include "mmq/rng.hpp"

namespace mmq {

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

struct Edge {
    std::size_t i, j;
    double w;
};

void check_square(const DistanceMatrix& dist) {
    const std::size_t n = dist.size();
    for (const auto& row : dist)
        if (row.size() != n) throw DataError("distance matrix is not square");
}

// Prim with lowest-index tie-breaking, then edges sorted by (weight, i, j).
std::vector<Edge> mst_edges(const DistanceMatrix& dist) {
    const std::size_t n = dist.size();
    std::vector<Edge> edges;
    if (n <= 1) return edges;

    std::vector<bool> in_tree(n, false);
    std::vector<double> key(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> parent(n, 0);
    key[0] = 0.0;
    for (std::size_t round = 0; round < n; ++round) {
        std::size_t u = n;
        for (std::size_t v = 0; v < n; ++v)
            if (!in_tree[v] && (u == n || key[v] < key[u])) u = v;
        in_tree[u] = true;
        if (u != 0) edges.push_back({std::min(u, parent[u]), std::max(u, parent[u]), key[u]});
        for (std::size_t v = 0; v < n; ++v) {
            if (!in_tree[v] && dist[u][v] < key[v]) {
                key[v] = dist[u][v];
                parent[v] = u;
            }
        }
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        if (a.w != b.w) return a.w < b.w;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });
    return edges;
}

ClusterLabels labels_from_components(UnionFind& uf, std::size_t n) {
    std::vector<int> raw(n);
    std::map<std::size_t, int> seen;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = uf.find(i);
        auto it = seen.find(root);
        if (it == seen.end()) it = seen.emplace(root, static_cast<int>(seen.size()) + 1).first;
        raw[i] = it->second;
    }
    ClusterLabels out;
    out.assignments = std::move(raw);
    out.n_clusters = static_cast<int>(seen.size());
    return out;
}

}  // namespace

ClusterLabels canonicalize(const std::vector<int>& raw) {
    ClusterLabels out;
    out.assignments.reserve(raw.size());
    std::map<int, int> seen;
    for (int v : raw) {
        auto it = seen.find(v);
        if (it == seen.end()) it = seen.emplace(v, static_cast<int>(seen.size()) + 1).first;
        out.assignments.push_back(it->second);
    }
    out.n_clusters = static_cast<int>(seen.size());
    return out;
}

DistanceMatrix linf_distances(const Embedding& e) {
    const std::size_t n = e.rows.size();
    DistanceMatrix dist(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = linf_distance(e.rows[i], e.rows[j]);
            dist[i][j] = d;
            dist[j][i] = d;
        }
    return dist;
}

LinkageResult single_linkage_tree(const DistanceMatrix& dist) {
    check_square(dist);
    const std::size_t n = dist.size();
    const std::vector<Edge> edges = mst_edges(dist);

    LinkageResult result;
    UnionFind uf(n);
    std::vector<std::size_t> cluster_id(n);
    std::iota(cluster_id.begin(), cluster_id.end(), 0);
    for (std::size_t t = 0; t < edges.size(); ++t) {
        const std::size_t ra = uf.find(edges[t].i);
        const std::size_t rb = uf.find(edges[t].j);
        result.merges.push_back({cluster_id[ra], cluster_id[rb], edges[t].w});
        uf.unite(ra, rb);
        cluster_id[uf.find(ra)] = n + t;
    }
    return result;
}

ClusterLabels single_linkage_threshold(const DistanceMatrix& dist, double tau) {
    if (tau < 0.0) throw BadThreshold("single_linkage: negative threshold");
    check_square(dist);
    const std::size_t n = dist.size();
    UnionFind uf(n);
    for (const Edge& e : mst_edges(dist))
        if (e.w <= tau) uf.unite(e.i, e.j);
    return labels_from_components(uf, n);
}

ClusterLabels single_linkage_count(const DistanceMatrix& dist, std::size_t n_clusters) {
    if (n_clusters == 0) throw ConfigError("single_linkage: n_clusters must be >= 1");
    check_square(dist);
    const std::size_t n = dist.size();
    const std::vector<Edge> edges = mst_edges(dist);
    // Merging the n - L cheapest tree edges == cutting the L - 1 largest.
    const std::size_t keep = n_clusters >= n ? 0 : n - n_clusters;
    UnionFind uf(n);
    for (std::size_t t = 0; t < keep; ++t) uf.unite(edges[t].i, edges[t].j);
    return labels_from_components(uf, n);
}

ClusterLabels kmeans_vectors(const Embedding& e, std::size_t n_clusters, std::size_t restarts,
                             std::uint64_t seed) {
    if (n_clusters == 0) throw ConfigError("kmeans_vectors: n_clusters must be >= 1");
    if (restarts == 0) throw ConfigError("kmeans_vectors: restarts must be >= 1");
    const std::size_t n = e.rows.size();
    if (n == 0) throw EmptySample("kmeans_vectors: empty embedding");
    const std::size_t dim = e.rows[0].size();

    auto sq_dist = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t t = 0; t < dim; ++t) {
            const double d = a[t] - b[t];
            s += d * d;
        }
        return s;
    };

    std::vector<int> best_labels;
    double best_cost = std::numeric_limits<double>::infinity();

    for (std::size_t r = 0; r < restarts; ++r) {
        std::mt19937_64 rng(substream(seed, "restart", r));
        std::uniform_real_distribution<double> unit(0.0, 1.0);

        // k-means++ seeding over rows.
        std::vector<std::vector<double>> centers;
        std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());
        {
            std::uniform_int_distribution<std::size_t> pick(0, n - 1);
            centers.push_back(e.rows[pick(rng)]);
        }
        while (centers.size() < n_clusters) {
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                min_d2[i] = std::min(min_d2[i], sq_dist(e.rows[i], centers.back()));
                total += min_d2[i];
            }
            if (total == 0.0) {
                // every row coincides with some center already
                centers.push_back(centers[0]);
                continue;
            }
            const double u = unit(rng) * total;
            double acc = 0.0;
            std::size_t chosen = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += min_d2[i];
                if (u < acc) {
                    chosen = i;
                    break;
                }
            }
            centers.push_back(e.rows[chosen]);
        }

        std::vector<int> labels(n, 0);
        for (std::size_t iter = 0; iter < 1000; ++iter) {
            for (std::size_t i = 0; i < n; ++i) {
                std::size_t best = 0;
                double bd = sq_dist(e.rows[i], centers[0]);
                for (std::size_t j = 1; j < centers.size(); ++j) {
                    const double d = sq_dist(e.rows[i], centers[j]);
                    if (d < bd) {
                        bd = d;
                        best = j;
                    }
                }
                labels[i] = static_cast<int>(best);
            }
            std::vector<std::vector<double>> sums(centers.size(), std::vector<double>(dim, 0.0));
            std::vector<std::size_t> counts(centers.size(), 0);
            for (std::size_t i = 0; i < n; ++i) {
                counts[labels[i]]++;
                for (std::size_t t = 0; t < dim; ++t) sums[labels[i]][t] += e.rows[i][t];
            }
            double movement = 0.0;
            for (std::size_t j = 0; j < centers.size(); ++j) {
                if (counts[j] == 0) continue;  // empty cluster: center stays
                for (std::size_t t = 0; t < dim; ++t) {
                    const double c = sums[j][t] / static_cast<double>(counts[j]);
                    const double d = c - centers[j][t];
                    movement += d * d;
                    centers[j][t] = c;
                }
            }
            if (std::sqrt(movement) < 1e-12) break;
        }

        double cost = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double bd = sq_dist(e.rows[i], centers[0]);
            for (std::size_t j = 1; j < centers.size(); ++j)
                bd = std::min(bd, sq_dist(e.rows[i], centers[j]));
            cost += bd;
        }
        if (cost < best_cost) {
            best_cost = cost;
            best_labels = labels;
        }
    }
    return canonicalize(best_labels);
}

double nmi(const ClusterLabels& a, const ClusterLabels& b) {
    if (a.assignments.size() != b.assignments.size())
        throw LengthMismatch("nmi: partitions of size " + std::to_string(a.assignments.size()) +
                             " vs " + std::to_string(b.assignments.size()));
    const std::size_t n = a.assignments.size();
    if (n == 0) throw LengthMismatch("nmi: empty partitions");

    std::map<std::pair<int, int>, std::size_t> joint;
    std::map<int, std::size_t> count_a, count_b;
    for (std::size_t i = 0; i < n; ++i) {
        joint[{a.assignments[i], b.assignments[i]}]++;
        count_a[a.assignments[i]]++;
        count_b[b.assignments[i]]++;
    }

    const double nf = static_cast<double>(n);
    auto entropy = [&](const std::map<int, std::size_t>& counts) {
        double h = 0.0;
        for (const auto& [label, c] : counts) {
            const double p = static_cast<double>(c) / nf;
            h -= p * std::log(p);
        }
        return h;
    };
    const double ha = entropy(count_a);
    const double hb = entropy(count_b);
    if (ha == 0.0 && hb == 0.0) return 1.0;  // both trivial partitions
    if (ha == 0.0 || hb == 0.0) return 0.0;

    double mi = 0.0;
    for (const auto& [cell, c] : joint) {
        const double pij = static_cast<double>(c) / nf;
        const double pa = static_cast<double>(count_a[cell.first]) / nf;
        const double pb = static_cast<double>(count_b[cell.second]) / nf;
        mi += pij * std::log(pij / (pa * pb));
    }
    return mi / std::sqrt(ha * hb);
}

}  // namespace mmq
