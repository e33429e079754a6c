#pragma once

#include <cstddef>
#include <vector>

#include "mmq/measure.hpp"

namespace mmq {

// An ordered list of k codepoints in B(0, R). Order is significant: cell
// indices and tie-breaking depend on it.
struct Codebook {
    std::size_t ambient_dim = 0;
    double ball_radius = 0.0;
    std::vector<Point> codepoints;

    std::size_t size() const { return codepoints.size(); }
};

}  // namespace mmq
