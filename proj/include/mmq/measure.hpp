#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace mmq {

using Point = std::vector<double>;

enum class Norm { euclidean, linf };

double squared_distance(const Point& a, const Point& b);
double distance(const Point& a, const Point& b);
double linf_distance(const Point& a, const Point& b);
double norm2(const Point& a);

// A weighted finite point set on the closed ball B(0, R) of R^d.
// Immutable after construction; all operations are pure reads.
struct DiscreteMeasure {
    std::size_t ambient_dim = 0;
    double ball_radius = 0.0;
    std::vector<Point> points;
    std::vector<double> weights;

    std::size_t size() const { return points.size(); }
    double total_mass() const;
};

// A sample X_1,...,X_n with shared dimension and radius, optionally labeled
// with hidden classes in [1, L].
struct MeasureSample {
    std::vector<DiscreteMeasure> measures;
    std::optional<std::vector<int>> labels;

    std::size_t size() const { return measures.size(); }
};

// Validating constructor. Points with norm beyond the radius are rejected,
// never clipped.
DiscreteMeasure make_measure(std::vector<Point> points, std::vector<double> weights,
                             double ball_radius);

// Mass of the closed ball of the given radius around center.
double ball_mass(const DiscreteMeasure& m, const Point& center, double radius,
                 Norm norm = Norm::euclidean);

// Empirical mean measure: all support points concatenated in sample order,
// weights divided by n. Duplicate atoms are kept separate.
DiscreteMeasure mean_measure(const MeasureSample& sample);

// Optional post-pass merging atoms within L-inf `tolerance` of an earlier
// atom, summing weights. Off the default path: merging changes support
// cardinality.
DiscreteMeasure coalesce(const DiscreteMeasure& m, double tolerance);

// Largest total mass over the sample; the computed mass bound M.
double mass_bound(const MeasureSample& sample);

void validate_labels(const MeasureSample& sample);

}  // namespace mmq
