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

#include "symsparse/smallball.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "symsparse/csv.hpp"
#include "symsparse/ensemble.hpp"
#include "symsparse/error.hpp"

namespace symsparse {

namespace {

// Relative tolerance for window membership in the exact enumerations, where
// sums of products of atoms land on ties up to rounding.
constexpr double kTieTol = 1e-9;

double hoeffding_halfwidth(std::size_t samples, double alpha)
{
    return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(samples)));
}

// Largest mass of a closed window of width 2 eps over sorted weighted points.
template <class Value, class Weight>
double max_window_mass(std::size_t count, Value value, Weight weight, double width)
{
    double best = 0.0;
    double inside = 0.0;
    std::size_t hi = 0;
    for (std::size_t lo = 0; lo < count; ++lo) {
        if (hi < lo) {
            hi = lo;
            inside = 0.0;
        }
        while (hi < count && value(hi) - value(lo) <= width) {
            inside += weight(hi);
            ++hi;
        }
        best = std::max(best, inside);
        inside -= weight(lo);
    }
    return std::min(best, 1.0);
}

} // namespace

double dkw_window_halfwidth(std::size_t samples, double alpha)
{
    require(samples > 0, "no samples");
    require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
    return 2.0 * hoeffding_halfwidth(samples, alpha);
}

ConcentrationEstimate levy_concentration_scalar(std::span<const double> samples, double eps)
{
    require(!samples.empty(), "concentration estimate needs at least one sample");
    require(eps >= 0.0, "eps must be nonnegative");
    std::vector<double> sorted(samples.begin(), samples.end());
    for (double v : sorted) {
        require(std::isfinite(v), "non-finite sample");
    }
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    // Integer counts keep the estimate exact and monotone in eps.
    std::size_t best = 0;
    std::size_t hi = 0;
    for (std::size_t lo = 0; lo < n; ++lo) {
        hi = std::max(hi, lo);
        while (hi < n && sorted[hi] - sorted[lo] <= 2.0 * eps) {
            ++hi;
        }
        best = std::max(best, hi - lo);
    }
    ConcentrationEstimate est;
    est.epsilon = eps;
    est.samples = n;
    est.value = static_cast<double>(best) / static_cast<double>(n);
    est.ci_halfwidth = dkw_window_halfwidth(n);
    return est;
}

double levy_concentration_law(const DiscreteLaw& law, double eps)
{
    require(eps >= 0.0, "eps must be nonnegative");
    const DiscreteLaw atoms = normalize_law(law);
    return max_window_mass(
        atoms.size(), [&](std::size_t i) { return atoms[i].value; }, [&](std::size_t i) { return atoms[i].mass; },
        2.0 * eps);
}

ConcentrationEstimate levy_concentration_vector(const std::vector<Eigen::VectorXd>& samples, double eps)
{
    require(!samples.empty(), "concentration estimate needs at least one sample");
    require(eps >= 0.0, "eps must be nonnegative");
    const Eigen::Index dim = samples.front().size();
    require(dim > 0, "samples must have positive dimension");
    for (const auto& s : samples) {
        require(s.size() == dim, "samples have mismatched dimensions");
        require(s.allFinite(), "non-finite sample");
    }
    const std::size_t n = samples.size();

    // Sweep by the first coordinate: only points within eps of a center in
    // that coordinate can lie in its ball.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        const double a = samples[l][0];
        const double b = samples[r][0];
        return a < b || (a == b && l < r);
    });
    std::vector<double> first(n);
    for (std::size_t i = 0; i < n; ++i) {
        first[i] = samples[order[i]][0];
    }

    const double eps2 = eps * eps;
    auto count_ball = [&](const Eigen::VectorXd& center) {
        const auto lo = std::lower_bound(first.begin(), first.end(), center[0] - eps) - first.begin();
        const auto hi = std::upper_bound(first.begin(), first.end(), center[0] + eps) - first.begin();
        std::size_t count = 0;
        for (auto k = lo; k < hi; ++k) {
            if ((samples[order[static_cast<std::size_t>(k)]] - center).squaredNorm() <= eps2) {
                ++count;
            }
        }
        return count;
    };

    std::size_t best = count_ball(Eigen::VectorXd::Zero(dim));
    for (const auto& s : samples) {
        best = std::max(best, count_ball(s));
    }
    ConcentrationEstimate est;
    est.epsilon = eps;
    est.samples = n;
    est.value = static_cast<double>(best) / static_cast<double>(n);
    est.ci_halfwidth = dkw_window_halfwidth(n);
    est.lower_bound_of_sup = true;
    return est;
}

double lcd_smallball_bound(double p, double eps, double lcd_value)
{
    require(p > 0.0 && p <= 1.0, "p must lie in (0, 1]");
    require(eps >= 0.0, "eps must be nonnegative");
    require(lcd_value > 0.0, "lcd value must be positive");
    return eps + 1.0 / (std::sqrt(p) * lcd_value);
}

double rlcd_smallball_bound(double lambda, double p, double eps, double rlcd_lower)
{
    require(lambda > 0.0, "lambda must be positive");
    require(p > 0.0 && p <= 1.0, "p must lie in (0, 1]");
    require(eps >= 0.0, "eps must be nonnegative");
    require(rlcd_lower > 0.0, "regularized lcd bound must be positive");
    return eps / std::sqrt(lambda) + 1.0 / (std::sqrt(p) * rlcd_lower);
}

double rlcd_matrix_bound_log(double bracket, std::size_t n, double lambda)
{
    require(bracket >= 0.0, "bracket must be nonnegative");
    require(lambda > 0.0 && lambda < 1.0, "lambda must lie in (0, 1)");
    const double exponent = static_cast<double>(n) - lambda * static_cast<double>(n);
    if (bracket == 0.0) {
        return exponent > 0.0 ? -std::numeric_limits<double>::infinity() : 0.0;
    }
    return exponent * std::log(bracket);
}

PaleyZygmundResult paley_zygmund_check(const DiscreteLaw& law, double theta)
{
    require(theta >= 0.0 && theta <= 1.0, "theta must lie in [0, 1]");
    const DiscreteLaw atoms = normalize_law(law);
    double m1 = 0.0;
    double m2 = 0.0;
    for (const auto& a : atoms) {
        m1 += a.mass * a.value;
        m2 += a.mass * a.value * a.value;
    }
    require(m1 > 0.0, "Paley-Zygmund needs a positive mean");
    const double level = theta * m1;
    double prob = 0.0;
    for (const auto& a : atoms) {
        if (a.value > level) {
            prob += a.mass;
        }
    }
    const double gap = m1 - level;
    PaleyZygmundResult r{prob, gap * gap / m2, false};
    r.holds = r.probability >= r.bound * (1.0 - 1e-12);
    return r;
}

PaleyZygmundResult paley_zygmund_check(const EntryDistribution& dist, double theta)
{
    auto atoms = dist.atoms();
    if (!atoms) {
        throw CapabilityError("Paley-Zygmund check needs a finitely supported law, got " + dist.name());
    }
    return paley_zygmund_check(*atoms, theta);
}

CoordinateSampler sampler_for(const EntryDistribution& dist, double p)
{
    require(p >= 0.0 && p <= 1.0, "p must lie in [0, 1]");
    return [dist, p](const RngStream& stream, std::uint64_t index) {
        if (p < 1.0 && stream.substream(0x6d61736b).uniform(index) >= p) {
            return 0.0;
        }
        return dist.sample(stream, index);
    };
}

TensorizationReport tensorization_check(const CoordinateSampler& coordinate, std::size_t n, double eps,
                                        std::size_t trials, const RngStream& stream)
{
    require(n >= 1, "dimension must be positive");
    require(trials >= 1, "tensorization check needs at least one trial");
    require(eps >= 0.0, "eps must be nonnegative");
    std::vector<Eigen::VectorXd> vectors(trials, Eigen::VectorXd(static_cast<Eigen::Index>(n)));
    std::vector<double> coords;
    coords.reserve(trials * n);
    for (std::size_t t = 0; t < trials; ++t) {
        for (std::size_t k = 0; k < n; ++k) {
            const double v = coordinate(stream, t * n + k);
            vectors[t][static_cast<Eigen::Index>(k)] = v;
            coords.push_back(v);
        }
    }
    TensorizationReport r;
    r.trials = trials;
    r.vector_estimate = levy_concentration_vector(vectors, eps * std::sqrt(static_cast<double>(n))).value;
    r.coordinate_estimate = levy_concentration_scalar(coords, eps).value;
    r.fitted_constant = r.coordinate_estimate > 0.0
                            ? std::pow(r.vector_estimate, 1.0 / static_cast<double>(n)) / r.coordinate_estimate
                            : std::numeric_limits<double>::infinity();
    return r;
}

namespace {

void check_decoupling_inputs(const Eigen::MatrixXd& g, const std::vector<std::size_t>& j_set)
{
    require(g.rows() == g.cols(), "G must be square");
    require(g.rows() >= 2, "G must be at least 2x2");
    require((g - g.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff()),
            "G must be symmetric");
    const auto n = static_cast<std::size_t>(g.rows());
    require(!j_set.empty() && j_set.size() < n, "J must be a proper nonempty subset");
    std::vector<bool> seen(n, false);
    for (auto j : j_set) {
        require(j < n, "J index out of range");
        require(!seen[j], "J has duplicate indices");
        seen[j] = true;
    }
}

struct Split {
    std::vector<bool> in_j;
};

Split make_split(std::size_t n, const std::vector<std::size_t>& j_set)
{
    Split s{std::vector<bool>(n, false)};
    for (auto j : j_set) {
        s.in_j[j] = true;
    }
    return s;
}

double quadratic(const Eigen::MatrixXd& g, const Eigen::VectorXd& x)
{
    return x.dot(g * x);
}

// <G P_Jc (X - X'), P_J X> - v with v = -(<G Z, Z> - <G Z', Z'>) / 2 on the
// Jc x Jc minor. Equals (Q(X) - Q(Y + Z')) / 2 where Y = P_J X.
double decoupled_statistic(const Eigen::MatrixXd& g, const Split& split, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& xp)
{
    const Eigen::Index n = x.size();
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd zp = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (split.in_j[static_cast<std::size_t>(i)]) {
            y[i] = x[i];
        } else {
            z[i] = x[i];
            zp[i] = xp[i];
        }
    }
    const double bilinear = (g * (z - zp)).dot(y);
    const double v = -(quadratic(g, z) - quadratic(g, zp)) / 2.0;
    return bilinear - v;
}

} // namespace

DecouplingReport decoupling_consequence_check(const Eigen::MatrixXd& g, const std::vector<std::size_t>& j_set,
                                              const EntryDistribution& dist, double eps, std::size_t trials,
                                              const RngStream& stream, double x_sparsity)
{
    check_decoupling_inputs(g, j_set);
    require(eps >= 0.0, "eps must be nonnegative");
    require(trials >= 1, "decoupling check needs at least one trial");
    const auto n = static_cast<std::size_t>(g.rows());
    const Split split = make_split(n, j_set);

    std::vector<double> quad(trials);
    std::size_t hits = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const RngStream trial = stream.substream(t);
        const Eigen::VectorXd x = sample_sparse_vector(n, x_sparsity, dist, trial.substream(0));
        const Eigen::VectorXd xp = sample_sparse_vector(n, x_sparsity, dist, trial.substream(1));
        quad[t] = quadratic(g, x);
        if (std::abs(decoupled_statistic(g, split, x, xp)) <= eps) {
            ++hits;
        }
    }
    const ConcentrationEstimate lhs = levy_concentration_scalar(quad, eps);
    DecouplingReport r;
    r.trials = trials;
    r.lhs = lhs.value;
    r.rhs = static_cast<double>(hits) / static_cast<double>(trials);
    const double h = lhs.ci_halfwidth;
    r.slack = 2.0 * r.lhs * h + h * h + hoeffding_halfwidth(trials, 0.05);
    r.holds = r.lhs * r.lhs <= r.rhs + r.slack;
    return r;
}

DecouplingReport decoupling_consequence_exact(const Eigen::MatrixXd& g, const std::vector<std::size_t>& j_set,
                                              const DiscreteLaw& law, double eps)
{
    check_decoupling_inputs(g, j_set);
    require(eps >= 0.0, "eps must be nonnegative");
    const DiscreteLaw atoms = normalize_law(law);
    const auto n = static_cast<std::size_t>(g.rows());
    const std::size_t k = atoms.size();
    double configs = std::pow(static_cast<double>(k), 2.0 * static_cast<double>(n));
    require(configs <= 1e7, "exact decoupling enumeration is too large");
    const Split split = make_split(n, j_set);

    // Enumerate X once for the law of <GX, X>.
    std::size_t x_count = 1;
    for (std::size_t i = 0; i < n; ++i) {
        x_count *= k;
    }
    auto decode = [&](std::size_t code, Eigen::VectorXd& x) {
        double mass = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Atom& a = atoms[code % k];
            code /= k;
            x[static_cast<Eigen::Index>(i)] = a.value;
            mass *= a.mass;
        }
        return mass;
    };

    Eigen::VectorXd x(static_cast<Eigen::Index>(n));
    Eigen::VectorXd xp(static_cast<Eigen::Index>(n));
    std::vector<double> q_values(x_count);
    std::vector<double> masses(x_count);
    double scale = 1.0;
    for (std::size_t c = 0; c < x_count; ++c) {
        masses[c] = decode(c, x);
        q_values[c] = quadratic(g, x);
        scale = std::max(scale, std::abs(q_values[c]));
    }
    const double tie = kTieTol * scale;

    std::vector<std::size_t> order(x_count);
    for (std::size_t c = 0; c < x_count; ++c) {
        order[c] = c;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return q_values[l] < q_values[r]; });
    const double lhs = max_window_mass(
        x_count, [&](std::size_t i) { return q_values[order[i]]; }, [&](std::size_t i) { return masses[order[i]]; },
        2.0 * eps + tie);

    double rhs = 0.0;
    for (std::size_t c = 0; c < x_count; ++c) {
        decode(c, x);
        for (std::size_t d = 0; d < x_count; ++d) {
            const double mass = masses[c] * decode(d, xp);
            if (std::abs(decoupled_statistic(g, split, x, xp)) <= eps + tie) {
                rhs += mass;
            }
        }
    }
    DecouplingReport r;
    r.trials = 0;
    r.lhs = lhs;
    r.rhs = std::min(rhs, 1.0);
    r.slack = 0.0;
    r.holds = r.lhs * r.lhs <= r.rhs + 1e-12;
    return r;
}

DiscreteLaw masked_law(const DiscreteLaw& law, double p)
{
    require(p >= 0.0 && p <= 1.0, "p must lie in [0, 1]");
    DiscreteLaw out;
    out.reserve(law.size() + 1);
    for (const auto& a : normalize_law(law)) {
        out.push_back({a.value, a.mass * p});
    }
    out.push_back({0.0, 1.0 - p});
    return normalize_law(std::move(out));
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, const char* schema)
{
    CsvWriter csv(out, schema, 1, {"eps", "estimate", "ci", "bound_bracket", "pass"});
    for (const auto& r : rows) {
        csv.row() << r.eps << r.estimate << r.ci << r.bound_bracket << r.pass;
    }
}

} // namespace symsparse
