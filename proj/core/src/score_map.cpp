#include "mview/score_map.hpp"

#include "mview/error.hpp"

#include <cmath>

namespace mview {

double ScoreMap::sum() const {
    double total = 0.0;
    for (const double v : data_) {
        total += v;
    }
    return total;
}

void ScoreMap::validate() const {
    for (const double v : data_) {
        if (!std::isfinite(v)) {
            throw ShapeMismatch("score map contains non-finite entries");
        }
    }
}

}  // namespace mview
