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

#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace symsparse {

struct Interval {
    double lo;
    double hi;
};

/// Wilson score interval for a binomial proportion at confidence 1 - alpha.
Interval wilson_interval(std::size_t successes, std::size_t trials, double alpha = 0.05);

/// Two-sided standard normal quantile z with P(|N| <= z) = 1 - alpha.
double normal_quantile_two_sided(double alpha);

struct LinearFit {
    double slope;
    double intercept;
    double slope_stderr;
    Interval slope_ci; // Student t, n - 2 degrees of freedom
    std::size_t points;
};

/// Ordinary least squares y = intercept + slope * x; needs >= 3 points with
/// distinct x for a confidence interval (with 2 points the CI is degenerate).
std::optional<LinearFit> least_squares(std::span<const double> x, std::span<const double> y, double alpha = 0.05);

double median(std::span<const double> values);

struct MeanCi {
    double mean;
    double halfwidth; // normal approximation, 95%
};

MeanCi mean_with_ci(std::span<const double> values);

} // namespace symsparse
