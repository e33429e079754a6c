#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mmq/codebook.hpp"
#include "mmq/measure.hpp"

namespace mmq {

// Bump-kernel family. laplace evaluates exactly like exponential and is kept
// as a separate label only.
enum class KernelKind { psi0, exponential, gaussian, laplace };

struct KernelSpec {
    KernelKind kind = KernelKind::exponential;
};

std::string kernel_name(KernelKind kind);
KernelKind parse_kernel(const std::string& name);

struct VectorizeConfig {
    double sigma = 1.0;
    KernelSpec kernel;
};

// n rows of kernel-smoothed masses, one per measure, one column per
// codepoint (or tile, for the histogram baseline).
struct Embedding {
    std::size_t width = 0;
    std::vector<std::vector<double>> rows;
    std::optional<Codebook> codebook;
    std::optional<VectorizeConfig> config;

    std::size_t size() const { return rows.size(); }
};

double kernel_eval(const KernelSpec& kernel, double u);

struct KernelCheckReport {
    bool bounded = false;          // sup psi <= 1
    bool near_one_inside = false;  // sup_{u <= 1/p} psi >= 1 - delta
    bool small_outside = false;    // sup_{u > 2p} psi <= delta
    bool lipschitz_ok = false;     // |psi(u)-psi(v)| <= |u-v| on adjacent grid pairs
    bool all() const { return bounded && near_one_inside && small_outside && lipschitz_ok; }
};

// Grid evaluation on [0, 4p] plus an analytic tail bound (the built-in
// kernels are non-increasing, so the tail supremum is the value at 2p).
// Violations finer than the grid step are undetectable by construction.
KernelCheckReport check_kernel(const KernelSpec& kernel, int p, double delta,
                               double grid_step = 1e-3);

// Component j = sum over atoms of weight * psi(||u - c_j|| / sigma).
std::vector<double> vectorize(const DiscreteMeasure& m, const Codebook& cb,
                              const VectorizeConfig& cfg);

Embedding vectorize_sample(const MeasureSample& sample, const Codebook& cb,
                           const VectorizeConfig& cfg);

// Half the minimum pairwise distance among distinct codepoints; the ball
// radius when k = 1 or all codepoints coincide.
double default_sigma(const Codebook& cb);

}  // namespace mmq
