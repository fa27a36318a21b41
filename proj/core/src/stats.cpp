/*
   Copyright 2026 The symsparse Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "symsparse/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "symsparse/error.hpp"

namespace symsparse {

double normal_quantile_two_sided(double alpha)
{
    require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(), 1.0 - alpha / 2.0);
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double alpha)
{
    require(trials > 0, "Wilson interval needs at least one trial");
    require(successes <= trials, "successes exceed trials");
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z = normal_quantile_two_sided(alpha);
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    Interval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
    // Keep lo <= phat <= hi exact at the boundaries.
    if (successes == 0) {
        ci.lo = 0.0;
    }
    if (successes == trials) {
        ci.hi = 1.0;
    }
    ci.lo = std::min(ci.lo, phat);
    ci.hi = std::max(ci.hi, phat);
    return ci;
}

std::optional<LinearFit> least_squares(std::span<const double> x, std::span<const double> y, double alpha)
{
    require(x.size() == y.size(), "x and y lengths differ");
    const std::size_t n = x.size();
    if (n < 2) {
        return std::nullopt;
    }
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) {
        return std::nullopt;
    }
    LinearFit fit;
    fit.points = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (n == 2) {
        fit.slope_stderr = 0.0;
        fit.slope_ci = {fit.slope, fit.slope};
        return fit;
    }
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - fit.intercept - fit.slope * x[i];
        rss += r * r;
    }
    const double dof = static_cast<double>(n - 2);
    fit.slope_stderr = std::sqrt(rss / dof / sxx);
    const double t = boost::math::quantile(boost::math::students_t_distribution<double>(dof), 1.0 - alpha / 2.0);
    fit.slope_ci = {fit.slope - t * fit.slope_stderr, fit.slope + t * fit.slope_stderr};
    return fit;
}

double median(std::span<const double> values)
{
    require(!values.empty(), "median of an empty sample");
    std::vector<double> v(values.begin(), values.end());
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

MeanCi mean_with_ci(std::span<const double> values)
{
    require(!values.empty(), "mean of an empty sample");
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) {
        mean += v;
    }
    mean /= n;
    if (values.size() < 2) {
        return {mean, 0.0};
    }
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    return {mean, normal_quantile_two_sided(0.05) * std::sqrt(ss / (n - 1.0) / n)};
}

} // namespace symsparse
