#pragma once

#include <utility>
#include <vector>

namespace cpf {

struct SlopeFit {
    double slope = 0;
    double intercept = 0;  // natural log
    double r2 = 0;
    std::size_t points = 0;
};

// Least-squares line through (log x, log y). Needs >= min_points points, all
// positive; throws NumericError otherwise.
SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points, std::size_t min_points = 4);

}  // namespace cpf
