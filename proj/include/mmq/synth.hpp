#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mmq/cluster.hpp"
#include "mmq/codebook.hpp"
#include "mmq/measure.hpp"
#include "mmq/vectorize.hpp"

namespace mmq {

// Synthetic mixture generator: p-1 centers shared by every class on the
// sphere of radius sphere_radius, plus one distinct unit-hypercube vertex per
// class. Measures are N normal draws around each center of r * C_l.
struct MixtureSpec {
    std::size_t d = 2;
    std::size_t L = 3;
    std::size_t p = 4;
    double r = 1.0;
    std::size_t N = 25;
    double sphere_radius = 10.0;
    std::size_t n_per_class = 20;
    double noise_sd = 1.0;
};

void validate_spec(const MixtureSpec& spec);

struct MixtureCenters {
    std::vector<Point> shared;                // p - 1 sphere centers
    std::vector<Point> vertices;              // one per class, all distinct
    std::vector<std::uint64_t> vertex_codes;  // bit codes of the vertices
};

MixtureCenters gen_centers(const MixtureSpec& spec, std::uint64_t seed);

// One measure of class `cls` (0-based) drawing noise from `rng`.
DiscreteMeasure sample_measure(const MixtureSpec& spec, const MixtureCenters& centers,
                               std::size_t cls, std::mt19937_64& rng);

// Convenience: class label in [1, L], fresh centers and noise stream derived
// from the seed.
DiscreteMeasure sample_measure(const MixtureSpec& spec, int label, std::uint64_t seed);

// Class-blocked labeled sample; noise streams are keyed per hypercube vertex
// so a permuted vertex assignment yields the permuted blocks.
MeasureSample gen_sample_blocked(const MixtureSpec& spec, const MixtureCenters& centers,
                                 std::uint64_t seed);

// Blocked generation followed by a seeded shuffle.
MeasureSample gen_sample(const MixtureSpec& spec, std::uint64_t seed);

enum class BaselineKind { rand, grid };

// rand: k weight-proportional draws from the union of sample supports.
// grid: the largest m-per-axis lattice over [0, 10r]^d with m^d <= k.
Codebook baseline_codebook(BaselineKind kind, const MeasureSample& sample, std::size_t k,
                           const MixtureSpec& spec, std::uint64_t seed);

// Tile counts over [0, box_hi]^d, bins_per_axis per axis, row-major flatten.
// Atoms outside fall into the clamped edge tiles.
Embedding histogram_vectorize(const MeasureSample& sample, std::size_t bins_per_axis,
                              double box_hi);

enum class BenchMethod { atol, rand, grid, histogram };

std::string method_name(BenchMethod m);
BenchMethod parse_method(const std::string& name);

struct BenchResult {
    std::string method;
    std::string sweep_name;  // "budget" or "signal"
    double sweep_value = 0.0;
    std::vector<double> nmi_values;   // one per repetition
    std::vector<double> wall_ms;      // one per repetition
    double mean = 0.0;
    double ci95 = 0.0;  // 1.96 * sd / sqrt(reps)
};

// Q1: fixed signal level, sweep the vectorization budget.
std::vector<BenchResult> run_q1(const MixtureSpec& spec, const std::vector<std::size_t>& budgets,
                                const std::vector<BenchMethod>& methods, std::size_t reps,
                                std::uint64_t seed, std::size_t threads = 1);

// Q2: fixed budget, sweep the signal level r.
std::vector<BenchResult> run_q2(const MixtureSpec& spec, const std::vector<double>& signal_levels,
                                std::size_t budget, const std::vector<BenchMethod>& methods,
                                std::size_t reps, std::uint64_t seed, std::size_t threads = 1);

// Largest m with m^d <= k; the per-axis size used by grid and histogram.
std::size_t lattice_side(std::size_t k, std::size_t d);

}  // namespace mmq
