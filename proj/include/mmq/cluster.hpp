#pragma once

#include <cstdint>
#include <vector>

#include "mmq/vectorize.hpp"

namespace mmq {

// Cluster assignments, canonicalized to 1..n_clusters by first appearance.
struct ClusterLabels {
    std::vector<int> assignments;
    int n_clusters = 0;
};

ClusterLabels canonicalize(const std::vector<int>& raw);

struct Merge {
    std::size_t cluster_a;
    std::size_t cluster_b;
    double height;
};

// Agglomerative merge sequence: n-1 merges with non-decreasing heights.
// Singletons are clusters 0..n-1; merge t creates cluster n+t.
struct LinkageResult {
    std::vector<Merge> merges;
};

using DistanceMatrix = std::vector<std::vector<double>>;

DistanceMatrix linf_distances(const Embedding& e);

LinkageResult single_linkage_tree(const DistanceMatrix& dist);

// Cut the tree at height tau: edges with weight > tau are removed.
ClusterLabels single_linkage_threshold(const DistanceMatrix& dist, double tau);

// Cut the n_clusters-1 largest tree edges. Ties among equal edge weights are
// broken by lexicographic (i, j) order.
ClusterLabels single_linkage_count(const DistanceMatrix& dist, std::size_t n_clusters);

// Best-of-restarts Lloyd over embedding rows with k-means++ seeding; lowest
// within-cluster sum of squares wins, first restart on ties.
ClusterLabels kmeans_vectors(const Embedding& e, std::size_t n_clusters, std::size_t restarts,
                             std::uint64_t seed);

// Normalized mutual information, geometric-mean normalization, natural log.
// 1 when both partitions are single-cluster, 0 when exactly one entropy is
// zero.
double nmi(const ClusterLabels& a, const ClusterLabels& b);

}  // namespace mmq
