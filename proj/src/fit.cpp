#include "cpf/fit.hpp"

#include <cmath>
#include <string>

#include "cpf/error.hpp"

namespace cpf {

SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points, std::size_t min_points) {
    if (points.size() < min_points)
        throw NumericError("slope fit needs at least " + std::to_string(min_points) + " points, got " +
                           std::to_string(points.size()));
    double sx = 0, sy = 0;
    std::vector<double> lx, ly;
    for (const auto& [x, y] : points) {
        if (!(x > 0) || !(y > 0) || !std::isfinite(x) || !std::isfinite(y))
            throw NumericError("slope fit needs positive finite values");
        lx.push_back(std::log(x));
        ly.push_back(std::log(y));
        sx += lx.back();
        sy += ly.back();
    }
    const double n = static_cast<double>(points.size());
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx == 0) throw NumericError("slope fit needs distinct x values");
    SlopeFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    f.points = points.size();
    return f;
}

}  // namespace cpf
