#include "mmq/measure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mmq/errors.hpp"

namespace mmq {

double squared_distance(const Point& a, const Point& b) {
    if (a.size() != b.size())
        throw DimensionMismatch("squared_distance: dimensions " + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()));
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double distance(const Point& a, const Point& b) { return std::sqrt(squared_distance(a, b)); }

double linf_distance(const Point& a, const Point& b) {
    if (a.size() != b.size())
        throw DimensionMismatch("linf_distance: dimensions " + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::fabs(a[i] - b[i]));
    return s;
}

double norm2(const Point& a) {
    double s = 0.0;
    for (double x : a) s += x * x;
    return std::sqrt(s);
}

double DiscreteMeasure::total_mass() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

DiscreteMeasure make_measure(std::vector<Point> points, std::vector<double> weights,
                             double ball_radius) {
    if (points.empty()) throw EmptySupport("make_measure: no support points");
    if (points.size() != weights.size())
        throw DimensionMismatch("make_measure: " + std::to_string(points.size()) + " points vs " +
                                std::to_string(weights.size()) + " weights");
    if (!(ball_radius > 0.0) || !std::isfinite(ball_radius))
        throw ConfigError("make_measure: ball_radius must be positive and finite");

    const std::size_t dim = points[0].size();
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != dim)
            throw DimensionMismatch("make_measure: point " + std::to_string(i) + " has dimension " +
                                    std::to_string(points[i].size()) + ", expected " +
                                    std::to_string(dim));
        for (double c : points[i])
            if (!std::isfinite(c))
                throw DataError("make_measure: non-finite coordinate in point " +
                                std::to_string(i));
        if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
            throw NonPositiveWeight("make_measure: weight " + std::to_string(i) +
                                    " is not a positive finite number");
        if (norm2(points[i]) > ball_radius)
            throw PointOutsideBall("make_measure: point " + std::to_string(i) +
                                   " has norm > ball_radius");
    }

    DiscreteMeasure m;
    m.ambient_dim = dim;
    m.ball_radius = ball_radius;
    m.points = std::move(points);
    m.weights = std::move(weights);
    return m;
}

double ball_mass(const DiscreteMeasure& m, const Point& center, double radius, Norm norm) {
    if (center.size() != m.ambient_dim)
        throw DimensionMismatch("ball_mass: center dimension " + std::to_string(center.size()) +
                                " vs measure dimension " + std::to_string(m.ambient_dim));
    if (radius < 0.0) throw ConfigError("ball_mass: negative radius");
    double s = 0.0;
    for (std::size_t i = 0; i < m.points.size(); ++i) {
        const double d = norm == Norm::euclidean ? distance(m.points[i], center)
                                                 : linf_distance(m.points[i], center);
        if (d <= radius) s += m.weights[i];  // closed ball
    }
    return s;
}

DiscreteMeasure mean_measure(const MeasureSample& sample) {
    if (sample.measures.empty()) throw EmptySample("mean_measure: empty sample");
    const double inv_n = 1.0 / static_cast<double>(sample.size());
    DiscreteMeasure out;
    out.ambient_dim = sample.measures[0].ambient_dim;
    out.ball_radius = sample.measures[0].ball_radius;
    for (const DiscreteMeasure& m : sample.measures) {
        if (m.ambient_dim != out.ambient_dim)
            throw DimensionMismatch("mean_measure: mixed ambient dimensions in sample");
        out.ball_radius = std::max(out.ball_radius, m.ball_radius);
        for (std::size_t i = 0; i < m.size(); ++i) {
            out.points.push_back(m.points[i]);
            out.weights.push_back(m.weights[i] * inv_n);
        }
    }
    return out;
}

DiscreteMeasure coalesce(const DiscreteMeasure& m, double tolerance) {
    if (tolerance < 0.0) throw ConfigError("coalesce: negative tolerance");
    DiscreteMeasure out;
    out.ambient_dim = m.ambient_dim;
    out.ball_radius = m.ball_radius;
    for (std::size_t i = 0; i < m.size(); ++i) {
        bool merged = false;
        for (std::size_t j = 0; j < out.size(); ++j) {
            if (linf_distance(m.points[i], out.points[j]) <= tolerance) {
                out.weights[j] += m.weights[i];
                merged = true;
                break;
            }
        }
        if (!merged) {
            out.points.push_back(m.points[i]);
            out.weights.push_back(m.weights[i]);
        }
    }
    return out;
}

double mass_bound(const MeasureSample& sample) {
    double m = 0.0;
    for (const DiscreteMeasure& x : sample.measures) m = std::max(m, x.total_mass());
    return m;
}

void validate_labels(const MeasureSample& sample) {
    if (!sample.labels) return;
    if (sample.labels->size() != sample.measures.size())
        throw LengthMismatch("labels length " + std::to_string(sample.labels->size()) +
                             " vs sample size " + std::to_string(sample.measures.size()));
    for (int z : *sample.labels)
        if (z < 1) throw DataError("labels must be >= 1");
}

}  // namespace mmq
