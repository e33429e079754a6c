#include "mmq/vectorize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmq/errors.hpp"

namespace mmq {

std::string kernel_name(KernelKind kind) {
    switch (kind) {
        case KernelKind::psi0: return "psi0";
        case KernelKind::exponential: return "exp";
        case KernelKind::gaussian: return "gauss";
        case KernelKind::laplace: return "laplace";
    }
    return "?";
}

KernelKind parse_kernel(const std::string& name) {
    if (name == "psi0") return KernelKind::psi0;
    if (name == "exp" || name == "exponential") return KernelKind::exponential;
    if (name == "gauss" || name == "gaussian") return KernelKind::gaussian;
    if (name == "laplace") return KernelKind::laplace;
    throw ConfigError("unknown kernel '" + name + "'");
}

double kernel_eval(const KernelSpec& kernel, double u) {
    if (u < 0.0) throw NegativeArgument("kernel_eval: negative argument");
    switch (kernel.kind) {
        case KernelKind::psi0:
            return std::max(0.0, 1.0 - std::max(u - 1.0, 0.0));
        case KernelKind::exponential:
        case KernelKind::laplace:
            return std::exp(-u);
        case KernelKind::gaussian:
            return std::exp(-u * u / 2.0);
    }
    return 0.0;
}

KernelCheckReport check_kernel(const KernelSpec& kernel, int p, double delta, double grid_step) {
    if (p < 1) throw ConfigError("check_kernel: p must be >= 1");
    if (!(grid_step > 0.0)) throw ConfigError("check_kernel: grid_step must be positive");
    if (delta < 0.0) throw ConfigError("check_kernel: delta must be >= 0");

    const double inner = 1.0 / p;
    const double cutoff = 2.0 * p;
    const double hi = 4.0 * p;

    KernelCheckReport report;
    report.bounded = true;
    report.lipschitz_ok = true;
    double inside_sup = kernel_eval(kernel, 0.0);
    double tail_sup = kernel_eval(kernel, cutoff);  // non-increasing tail

    double prev_u = 0.0;
    double prev_v = kernel_eval(kernel, 0.0);
    const std::size_t steps = static_cast<std::size_t>(std::ceil(hi / grid_step));
    for (std::size_t i = 0; i <= steps; ++i) {
        const double u = static_cast<double>(i) * grid_step;
        const double v = kernel_eval(kernel, u);
        if (v > 1.0) report.bounded = false;
        if (u <= inner) inside_sup = std::max(inside_sup, v);
        if (u > cutoff) tail_sup = std::max(tail_sup, v);
        // 1e-12 slack absorbs rounding on exactly-slope-one segments
        if (std::fabs(v - prev_v) > std::fabs(u - prev_u) * (1.0 + 1e-9) + 1e-12)
            report.lipschitz_ok = false;
        prev_u = u;
        prev_v = v;
    }
    inside_sup = std::max(inside_sup, kernel_eval(kernel, inner));

    report.near_one_inside = inside_sup >= 1.0 - delta;
    report.small_outside = tail_sup <= delta;
    return report;
}

std::vector<double> vectorize(const DiscreteMeasure& m, const Codebook& cb,
                              const VectorizeConfig& cfg) {
    if (cb.ambient_dim != m.ambient_dim)
        throw DimensionMismatch("vectorize: codebook dimension " + std::to_string(cb.ambient_dim) +
                                " vs measure dimension " + std::to_string(m.ambient_dim));
    if (!(cfg.sigma > 0.0)) throw ConfigError("vectorize: sigma must be positive");

    std::vector<double> row(cb.size(), 0.0);
    for (std::size_t j = 0; j < cb.size(); ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i)
            acc += m.weights[i] *
                   kernel_eval(cfg.kernel, distance(m.points[i], cb.codepoints[j]) / cfg.sigma);
        row[j] = acc;
    }
    return row;
}

Embedding vectorize_sample(const MeasureSample& sample, const Codebook& cb,
                           const VectorizeConfig& cfg) {
    Embedding e;
    e.width = cb.size();
    e.codebook = cb;
    e.config = cfg;
    e.rows.reserve(sample.size());
    for (const DiscreteMeasure& m : sample.measures) e.rows.push_back(vectorize(m, cb, cfg));
    return e;
}

double default_sigma(const Codebook& cb) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cb.size(); ++i)
        for (std::size_t j = i + 1; j < cb.size(); ++j) {
            const double d = distance(cb.codepoints[i], cb.codepoints[j]);
            if (d > 0.0) best = std::min(best, d);
        }
    if (!std::isfinite(best)) return cb.ball_radius;  // k = 1 or all coincide
    return best / 2.0;
}

}  // namespace mmq
