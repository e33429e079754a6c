#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mmq/codebook.hpp"
#include "mmq/measure.hpp"

namespace mmq {

struct ShatteringWitness {
    std::size_t i1, i2;     // cross-class pair, sample indices
    std::size_t codepoint;  // witnessing codepoint
    int direction;          // +1: mass(i1, small ball) dominates; -1: mass(i2, small ball)
};

struct ShatteringCertificate {
    bool satisfied = false;
    double p = 0, r = 0, delta = 0;
    std::vector<ShatteringWitness> witnesses;
    std::vector<std::pair<std::size_t, std::size_t>> failing_pairs;
};

// Exhaustive test that every cross-class pair differs by at least delta
// between the small ball (radius r/p) and the large ball (radius 4pr) around
// some codepoint. Closed Euclidean balls throughout.
ShatteringCertificate check_shattering(const MeasureSample& sample, const Codebook& cb, int p,
                                       double r, double delta);

// Exact 1-Wasserstein distance. 1-d instances take arbitrary weights
// (quantile coupling); multi-d instances need uniform equal weights and equal
// support counts (optimal assignment).
double w1_exact(const DiscreteMeasure& m1, const DiscreteMeasure& m2);

struct ConcentrationResult {
    bool ok = false;
    std::optional<std::pair<std::size_t, std::size_t>> failing_pair;
    std::string reason;  // "mass" or "w1" when a pair fails
};

// Verifies equal total masses and W1 <= w for every within-class pair.
ConcentrationResult check_concentration(const MeasureSample& sample, double w);

// Global optimum by enumerating all support partitions into at most k
// non-empty groups. Capped at 12 atoms.
std::pair<Codebook, double> brute_force_kmeans(const DiscreteMeasure& m, std::size_t k);

struct CodebookDiagnostics {
    std::optional<double> min_separation;  // B-hat, unset when k = 1
    double min_cell_mass = 0.0;            // p-hat_min
};

CodebookDiagnostics codebook_diagnostics(const Codebook& cb, const DiscreteMeasure& m);

}  // namespace mmq
