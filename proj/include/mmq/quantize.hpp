#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mmq/codebook.hpp"
#include "mmq/measure.hpp"

namespace mmq {

enum class QuantizeAlgorithm { batch, minibatch, minibatch_nosplit };

enum class EmptyCellPolicy { keep, reseed_farthest };

struct QuantizeConfig {
    std::size_t k = 1;
    QuantizeAlgorithm algorithm = QuantizeAlgorithm::batch;
    // Iteration budget. Unset resolves to ceil(log(n)/log(4/3)) for the batch
    // algorithm; for the mini-batch algorithms the batch count is derived
    // from minibatch_size unless set explicitly.
    std::optional<std::size_t> iterations;
    std::size_t minibatch_size = 1000;
    std::uint64_t seed = 0;
    std::optional<Codebook> init;  // unset = k-means++ seeding
    EmptyCellPolicy empty_cell_policy = EmptyCellPolicy::keep;
    bool trace_codebooks = false;  // keep per-iteration codebooks in the report
};

struct QuantizeReport {
    std::vector<double> distortion_trace;  // batch only: distortion per iteration
    std::vector<double> cell_masses;       // final p-hat_j against the sample mean measure
    std::optional<double> min_cell_separation;  // B-hat, unset when k = 1
    double min_cell_mass = 0.0;                 // p-hat_min
    std::size_t iterations_run = 0;
    std::uint64_t seed = 0;
    std::vector<Codebook> codebook_trace;  // filled only when trace_codebooks is set
};

struct CellStats {
    std::vector<double> masses;       // p-hat_j
    std::vector<Point> moment_sums;   // sum of weight * u over cell j
};

// Nearest-codepoint cell of x, 0-based. Equidistant points go to the lowest
// index.
std::size_t voronoi_assign(const Codebook& cb, const Point& x);

// Mass-weighted sum of squared distances to the nearest codepoint.
double distortion(const Codebook& cb, const DiscreteMeasure& m);

CellStats cell_stats(const Codebook& cb, const DiscreteMeasure& m);

// Weighted k-means++ over the support of m. If the support has fewer than k
// atoms, the remaining codepoints duplicate already-chosen ones.
Codebook kmeanspp_init(const DiscreteMeasure& m, std::size_t k, std::uint64_t seed);

Codebook lloyd_step(const Codebook& cb, const DiscreteMeasure& m,
                    EmptyCellPolicy policy = EmptyCellPolicy::keep);

std::pair<Codebook, QuantizeReport> batch_quantize(const MeasureSample& sample,
                                                   const QuantizeConfig& cfg);

std::pair<Codebook, QuantizeReport> minibatch_quantize(const MeasureSample& sample,
                                                       const QuantizeConfig& cfg);

// Dispatch on cfg.algorithm.
std::pair<Codebook, QuantizeReport> quantize(const MeasureSample& sample,
                                             const QuantizeConfig& cfg);

// ceil(log(n)/log(4/3)), at least 1.
std::size_t auto_iterations(std::size_t n);

}  // namespace mmq
