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

#include "symsparse/lcd.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "symsparse/ensemble.hpp"
#include "symsparse/error.hpp"

namespace symsparse {

namespace {

struct Breakpoint {
    double theta;
    std::size_t coord;
    bool operator>(const Breakpoint& other) const { return theta > other.theta; }
};

// Nearest-lattice bookkeeping for the magnitudes |x_i| along theta.
class LatticeScan {
public:
    LatticeScan(std::vector<double> magnitudes, double theta0) : a_(std::move(magnitudes)), k_(a_.size())
    {
        for (std::size_t i = 0; i < a_.size(); ++i) {
            k_[i] = std::floor(theta0 * a_[i] + 0.5);
            heap_.push({(k_[i] + 0.5) / a_[i], i});
            sum_sq_ += a_[i] * a_[i];
        }
        refresh();
    }

    double next_breakpoint() const { return heap_.top().theta; }

    // Advances every coordinate whose breakpoint is <= theta.
    void advance_to(double theta)
    {
        while (!heap_.empty() && heap_.top().theta <= theta) {
            const auto i = heap_.top().coord;
            heap_.pop();
            cross_ += 2.0 * k_[i] + 1.0;
            dot_ += a_[i];
            k_[i] += 1.0;
            heap_.push({(k_[i] + 0.5) / a_[i], i});
            if (++updates_ % (a_.size() + 64) == 0) {
                refresh();
            }
        }
    }

    // sum (theta a_i - k_i)^2 from the running quadratic; used for screening.
    double quadratic(double theta) const { return sum_sq_ * theta * theta - 2.0 * dot_ * theta + cross_; }

    // Same quantity evaluated coordinate by coordinate.
    double direct(double theta) const
    {
        double s = 0.0;
        for (std::size_t i = 0; i < a_.size(); ++i) {
            const double r = theta * a_[i] - k_[i];
            s += r * r;
        }
        return s;
    }

    double sum_sq() const { return sum_sq_; }
    double dot() const { return dot_; }

private:
    void refresh()
    {
        dot_ = 0.0;
        cross_ = 0.0;
        for (std::size_t i = 0; i < a_.size(); ++i) {
            dot_ += a_[i] * k_[i];
            cross_ += k_[i] * k_[i];
        }
    }

    std::vector<double> a_;
    std::vector<double> k_;
    std::priority_queue<Breakpoint, std::vector<Breakpoint>, std::greater<>> heap_;
    double sum_sq_ = 0.0;
    double dot_ = 0.0;
    double cross_ = 0.0;
    std::size_t updates_ = 0;
};

double binomial(std::size_t n, std::size_t k)
{
    if (k > n) {
        return 0.0;
    }
    k = std::min(k, n - k);
    double c = 1.0;
    for (std::size_t i = 1; i <= k; ++i) {
        c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return std::round(c);
}

} // namespace

double default_theta_cap(std::size_t n)
{
    const auto dn = static_cast<double>(n);
    return 10.0 * dn * std::sqrt(dn);
}

double lattice_distance(const Eigen::VectorXd& x, double theta)
{
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double v = theta * x[i];
        const double r = v - std::nearbyint(v);
        s += r * r;
    }
    return std::sqrt(s);
}

double lcd_threshold(double theta, double L)
{
    const double lg = std::log(theta / L);
    return lg > 0.0 ? L * std::sqrt(lg) : 0.0;
}

LcdResult lcd(const Eigen::VectorXd& x, double L, double theta_cap, double tol)
{
    require(L >= 1.0, "LCD scale L must be at least 1");
    require(theta_cap > L, "theta_cap must exceed L");
    require(tol > 0.0, "tolerance must be positive");
    std::vector<double> magnitudes;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x[i] != 0.0) {
            magnitudes.push_back(std::abs(x[i]));
        }
    }
    require(!magnitudes.empty(), "LCD of the zero vector is undefined");

    // Below theta = L the threshold is zero and the strict inequality fails.
    LatticeScan scan(std::move(magnitudes), L);
    const double L2 = L * L;
    auto gap = [&](double theta, double dist_sq) { return dist_sq - L2 * std::log(theta / L); };

    double left = L;
    while (left < theta_cap) {
        const double right = std::min(scan.next_breakpoint(), theta_cap);
        if (right > left) {
            // argmin of the convex gap on [left, right]
            const double A = scan.sum_sq();
            const double B = scan.dot();
            const double stationary = (B + std::sqrt(B * B + 2.0 * A * L2)) / (2.0 * A);
            const double at = std::clamp(stationary, left, right);
            const double screen = gap(at, scan.quadratic(at));
            const double slack = 1e-9 * (1.0 + A * at * at);
            if (screen < slack && gap(at, scan.direct(at)) < 0.0) {
                double lo = left;
                double hi = at;
                if (gap(lo, scan.direct(lo)) < 0.0) {
                    hi = lo;
                } else {
                    while (hi - lo > tol) {
                        const double mid = 0.5 * (lo + hi);
                        if (mid <= lo || mid >= hi) {
                            break;
                        }
                        if (gap(mid, scan.direct(mid)) < 0.0) {
                            hi = mid;
                        } else {
                            lo = mid;
                        }
                    }
                }
                return {hi, hi, std::sqrt(scan.direct(hi)), false};
            }
        }
        left = right;
        scan.advance_to(left);
    }
    return {theta_cap, theta_cap, lattice_distance(x, theta_cap), true};
}

bool lcd_certificate_holds(const Eigen::VectorXd& x, double L, const LcdResult& result, double tol)
{
    if (result.capped) {
        return result.value > L;
    }
    return result.value > L && std::abs(result.witness_theta - result.value) <= tol &&
           lattice_distance(x, result.witness_theta) < lcd_threshold(result.witness_theta, L) + tol;
}

Eigen::VectorXd normalized_restriction(const Eigen::VectorXd& x, const std::vector<std::size_t>& subset)
{
    require(!subset.empty(), "restriction to an empty subset");
    Eigen::VectorXd r(static_cast<Eigen::Index>(subset.size()));
    for (std::size_t k = 0; k < subset.size(); ++k) {
        require(subset[k] < static_cast<std::size_t>(x.size()), "subset index out of range");
        r[static_cast<Eigen::Index>(k)] = x[static_cast<Eigen::Index>(subset[k])];
    }
    const double norm = r.norm();
    require(norm > 0.0, "restriction of x to the subset vanishes");
    return r / norm;
}

RegularizedLcdResult regularized_lcd(const Eigen::VectorXd& x, const StructureConstants& consts, std::size_t budget,
                                     const RngStream& stream, const RegularizedLcdOptions& options)
{
    consts.validate();
    require(budget >= 1, "subset budget must be at least 1");
    const auto spread = spread_set(x, consts);
    if (!spread) {
        throw CapabilityError("regularized LCD needs an incompressible vector with a defined spread set");
    }
    const auto n = static_cast<std::size_t>(x.size());
    const auto k = fraction_count(consts.lambda, n);
    const std::size_t s = spread->size();
    if (k > s) {
        throw CapabilityError("ceil(lambda n) exceeds the spread set size");
    }
    const double cap = options.theta_cap > 0.0 ? options.theta_cap : default_theta_cap(n);

    RegularizedLcdResult best;
    best.lower_bound = -1.0;
    auto consider = [&](std::vector<std::size_t> subset) {
        const auto result = lcd(normalized_restriction(x, subset), consts.L, cap, options.tol);
        ++best.subsets_evaluated;
        if (result.value > best.lower_bound) {
            best.lower_bound = result.value;
            best.witness_subset = std::move(subset);
            best.witness = result;
            best.capped = result.capped;
        }
    };

    if (!options.sample_only && binomial(s, k) <= static_cast<double>(budget)) {
        best.exact = true;
        std::vector<std::size_t> pos(k);
        for (std::size_t i = 0; i < k; ++i) {
            pos[i] = i;
        }
        for (;;) {
            std::vector<std::size_t> subset(k);
            for (std::size_t i = 0; i < k; ++i) {
                subset[i] = (*spread)[pos[i]];
            }
            consider(std::move(subset));
            // next combination in lexicographic order
            std::size_t i = k;
            while (i > 0 && pos[i - 1] == s - k + (i - 1)) {
                --i;
            }
            if (i == 0) {
                break;
            }
            ++pos[i - 1];
            for (std::size_t j = i; j < k; ++j) {
                pos[j] = pos[j - 1] + 1;
            }
        }
    } else {
        for (std::size_t j = 0; j < budget; ++j) {
            const auto picks = random_subset(s, k, stream.substream(j));
            std::vector<std::size_t> subset(k);
            for (std::size_t i = 0; i < k; ++i) {
                subset[i] = (*spread)[picks[i]];
            }
            consider(std::move(subset));
        }
    }

    const auto replay = lcd(normalized_restriction(x, best.witness_subset), consts.L, cap, options.tol);
    if (replay.value != best.lower_bound) {
        throw std::logic_error("regularized LCD certificate does not replay");
    }
    return best;
}

const char* to_string(Membership m)
{
    switch (m) {
    case Membership::in:
        return "in";
    case Membership::out:
        return "out";
    case Membership::unknown:
        return "unknown";
    }
    return "unknown";
}

Membership sublevel_membership(const Eigen::VectorXd& x, const StructureConstants& consts, double level,
                               std::size_t budget, const RngStream& stream, const RegularizedLcdOptions& options)
{
    const auto r = regularized_lcd(x, consts, budget, stream, options);
    if (r.lower_bound > level) {
        return Membership::out;
    }
    if (r.exact && (!r.capped || level == std::numeric_limits<double>::infinity())) {
        return Membership::in;
    }
    return Membership::unknown;
}

} // namespace symsparse
