#include "omcool/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/NonLinearOptimization>

#include "omcool/errors.hpp"
#include "omcool/rwa.hpp"
#include "omcool/units.hpp"

namespace omcool {

namespace {

constexpr cdouble I{0.0, 1.0};
constexpr double kResidualTolerance = 1e-10;
constexpr double kMaxTailFraction = 0.01;
constexpr double kMaxNegativeFraction = 1e-4;
constexpr double kMaxFitResidual = 0.05;

std::string format_complex(cdouble z)
{
    std::ostringstream os;
    os.precision(10);
    os << "(" << z.real() << ", " << z.imag() << ")";
    return os.str();
}

}  // namespace

std::vector<Resonance> model_resonances(const DriftModel& model)
{
    std::vector<Resonance> out;
    for (const auto& mu : stability_eigenvalues(model)) {
        out.push_back({-mu.imag(), -2.0 * mu.real()});
        if (model.fidelity == Fidelity::rwa) out.push_back({mu.imag(), -2.0 * mu.real()});
    }
    std::sort(out.begin(), out.end(), [](const Resonance& l, const Resonance& r) {
        return l.center < r.center || (l.center == r.center && l.fwhm < r.fwhm);
    });
    return out;
}

Resonance dominant_resonance(const DriftModel& model, std::string_view label)
{
    const int idx = model.require_index(label);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(model.drift, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::eigensolver, "drift matrix eigenvalue iteration did not converge");
    }
    Eigen::Index best = 0;
    double weight = -1.0;
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
        const auto v = solver.eigenvectors().col(k);
        const double w = std::norm(v(idx)) / v.squaredNorm();
        if (w > weight) {
            weight = w;
            best = k;
        }
    }
    const cdouble mu = solver.eigenvalues()(best);
    return {-mu.imag(), -2.0 * mu.real()};
}

FrequencyGrid::FrequencyGrid(std::vector<double> points, std::vector<Resonance> anchors)
    : points_(std::move(points)), anchors_(std::move(anchors))
{
    if (points_.size() < 2) throw Error(ErrorKind::domain, "frequency grid needs at least two points");
    for (std::size_t i = 1; i < points_.size(); ++i) {
        if (!(points_[i] > points_[i - 1])) {
            throw Error(ErrorKind::domain, "frequency grid must be strictly increasing");
        }
    }
}

FrequencyGrid FrequencyGrid::around(std::span<const Resonance> resonances, const GridOptions& options)
{
    if (resonances.empty()) throw Error(ErrorKind::domain, "frequency grid needs at least one resonance");
    double outer = 0.0;
    for (const auto& r : resonances) {
        if (!(r.fwhm > 0.0) || !std::isfinite(r.fwhm) || !std::isfinite(r.center)) {
            throw Error(ErrorKind::domain, "resonance linewidth must be positive and finite");
        }
        outer = std::max({outer, 4.0 * std::abs(r.center),
                          std::abs(r.center) + options.outer_linewidths * r.fwhm,
                          std::abs(r.center) + options.span_linewidths * r.fwhm});
    }

    std::vector<double> pts;
    for (const auto& r : resonances) {
        const double step = r.fwhm / options.points_per_linewidth;
        const auto half = static_cast<long>(std::ceil(options.core_linewidths * options.points_per_linewidth));
        for (long k = -half; k <= half; ++k) pts.push_back(r.center + static_cast<double>(k) * step);
        double d = static_cast<double>(half) * step;
        while (r.center + d < outer || r.center - d > -outer) {
            d *= options.growth;
            if (r.center + d < outer) pts.push_back(r.center + d);
            if (r.center - d > -outer) pts.push_back(r.center - d);
        }
    }
    pts.push_back(-outer);
    pts.push_back(outer);
    std::sort(pts.begin(), pts.end());
    // Coincident centers produce near-duplicate points; keep one of each.
    double finest = std::numeric_limits<double>::infinity();
    for (const auto& r : resonances) finest = std::min(finest, r.fwhm / options.points_per_linewidth);
    const double merge = 1e-8 * finest;
    const double eps = std::numeric_limits<double>::epsilon();
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [merge, eps](double l, double r) {
                              return r - l < std::max(merge, 8.0 * eps * std::abs(r));
                          }),
              pts.end());
    pts.erase(std::remove_if(pts.begin(), pts.end(), [outer](double w) { return std::abs(w) > outer; }),
              pts.end());
    return FrequencyGrid(std::move(pts), {resonances.begin(), resonances.end()});
}

FrequencyGrid FrequencyGrid::for_model(const DriftModel& model, const GridOptions& options)
{
    const auto res = model_resonances(model);
    for (const auto& r : res) {
        if (!(r.fwhm > 0.0)) {
            throw Error(ErrorKind::unstable_system,
                        "cannot build a grid for a resonance with non-positive linewidth");
        }
    }
    return around(res, options);
}

FrequencyGrid FrequencyGrid::refined() const
{
    std::vector<double> pts;
    pts.reserve(2 * points_.size());
    for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
        pts.push_back(points_[i]);
        const double mid = 0.5 * (points_[i] + points_[i + 1]);
        if (mid > points_[i] && mid < points_[i + 1]) pts.push_back(mid);
    }
    pts.push_back(points_.back());
    return FrequencyGrid(std::move(pts), anchors_);
}

void FrequencyGrid::check_covers(std::span<const Resonance> resonances, const GridOptions& options) const
{
    const double lo = points_.front();
    const double hi = points_.back();
    for (const auto& r : resonances) {
        const double span = options.span_linewidths * r.fwhm;
        if (lo > r.center - span * (1.0 - 1e-12) || hi < r.center + span * (1.0 - 1e-12)) {
            std::ostringstream os;
            os.precision(10);
            os << "grid [" << lo << ", " << hi << "] does not cover resonance at " << r.center
               << " rad/s; required span [" << r.center - span << ", " << r.center + span << "]";
            throw Error(ErrorKind::insufficient_coverage, os.str());
        }
        const double core = options.core_linewidths * r.fwhm;
        // Points are absolute frequencies, so allow a few ulps of the center on top.
        const double max_step = r.fwhm / options.points_per_linewidth * (1.0 + 1e-6) +
                                16.0 * std::numeric_limits<double>::epsilon() * std::abs(r.center);
        auto first = std::lower_bound(points_.begin(), points_.end(), r.center - core);
        auto last = std::upper_bound(points_.begin(), points_.end(), r.center + core);
        if (first == points_.end() || std::distance(first, last) < 2) {
            throw Error(ErrorKind::insufficient_coverage, "grid has no points near resonance center");
        }
        // Include the neighbours straddling the core edges.
        if (first != points_.begin()) --first;
        if (last != points_.end()) ++last;
        for (auto it = first; it + 1 < last; ++it) {
            const double a = std::max(*it, r.center - core);
            const double b = std::min(*(it + 1), r.center + core);
            if (b - a > 1e-6 * max_step && *(it + 1) - *it > max_step) {
                std::ostringstream os;
                os.precision(10);
                os << "grid spacing " << *(it + 1) - *it << " rad/s near " << r.center
                   << " rad/s exceeds fwhm/" << options.points_per_linewidth;
                throw Error(ErrorKind::insufficient_coverage, os.str());
            }
        }
    }
}

double susceptibility_residual(const DriftModel& model, double omega, const Eigen::MatrixXcd& chi)
{
    const int n = model.dimension();
    const Eigen::MatrixXcd m = -I * omega * Eigen::MatrixXcd::Identity(n, n) - model.drift;
    const Eigen::MatrixXcd r = m * chi - Eigen::MatrixXcd::Identity(n, n);
    return r.norm() / (m.norm() * chi.norm());
}

Eigen::MatrixXcd susceptibility_matrix(const DriftModel& model, double omega)
{
    const int n = model.dimension();
    const Eigen::MatrixXcd m = -I * omega * Eigen::MatrixXcd::Identity(n, n) - model.drift;
    Eigen::MatrixXcd chi = m.partialPivLu().solve(Eigen::MatrixXcd::Identity(n, n));
    const double residual = chi.allFinite() ? susceptibility_residual(model, omega, chi)
                                            : std::numeric_limits<double>::infinity();
    if (!(residual <= kResidualTolerance)) {
        cdouble nearest{};
        double dist = std::numeric_limits<double>::infinity();
        for (const auto& mu : stability_eigenvalues(model)) {
            if (std::abs(-I * omega - mu) < dist) {
                dist = std::abs(-I * omega - mu);
                nearest = mu;
            }
        }
        std::ostringstream os;
        os.precision(10);
        os << "susceptibility singular at omega = " << omega << " rad/s (eigenvalue "
           << format_complex(nearest) << " rad/s, residual " << residual << ")";
        throw Error(ErrorKind::singular_matrix, os.str());
    }
    return chi;
}

namespace {

double trapezoid(std::span<const double> x, std::span<const double> y, std::size_t stride)
{
    double sum = 0.0;
    std::size_t i = 0;
    while (i + stride < x.size()) {
        sum += 0.5 * (x[i + stride] - x[i]) * (y[i] + y[i + stride]);
        i += stride;
    }
    if (i + 1 < x.size()) {
        const std::size_t j = x.size() - 1;
        sum += 0.5 * (x[j] - x[i]) * (y[i] + y[j]);
    }
    return sum;
}

double nearest_center(double w, std::span<const Resonance> anchors, double fallback)
{
    if (anchors.empty()) {
        return std::abs(w - fallback) < std::abs(w + fallback) ? fallback : -fallback;
    }
    double best = anchors.front().center;
    for (const auto& r : anchors) {
        if (std::abs(w - r.center) < std::abs(w - best)) best = r.center;
    }
    return best;
}

}  // namespace

OccupationIntegral integrate_occupation(std::span<const double> omega, std::span<const double> values,
                                        std::span<const Resonance> anchors, double omega_center)
{
    if (omega.size() != values.size() || omega.size() < 3) {
        throw Error(ErrorKind::domain, "integrate_occupation: need >= 3 matching samples");
    }
    const double body = trapezoid(omega, values, 1);
    const double coarse = trapezoid(omega, values, 2);

    const double lo = omega.front();
    const double hi = omega.back();
    const double tail = values.front() * std::abs(lo - nearest_center(lo, anchors, omega_center)) +
                        values.back() * std::abs(hi - nearest_center(hi, anchors, omega_center));

    // One Richardson step against the every-other-point subgrid; the grid is
    // geometric away from the cores, so the O(h^2) error model holds there too.
    const double extrapolated = body + (body - coarse) / 3.0;

    OccupationIntegral out;
    out.integral = extrapolated + tail;
    out.tail_fraction = out.integral > 0.0 ? tail / out.integral : 0.0;
    out.quadrature_error = out.integral > 0.0 ? std::abs(body - coarse) / 3.0 / out.integral : 0.0;
    if (out.tail_fraction > kMaxTailFraction) {
        std::ostringstream os;
        os.precision(6);
        os << "spectrum tails carry " << 100.0 * out.tail_fraction
           << "% of the integral; extend the grid beyond [" << lo << ", " << hi << "] rad/s";
        throw Error(ErrorKind::insufficient_coverage, os.str());
    }
    out.n_eff = out.integral / kTwoPi / 2.0 - 0.5;
    return out;
}

OccupationIntegral integrate_occupation(const FrequencyGrid& grid, std::span<const double> values,
                                        double omega_center)
{
    return integrate_occupation(grid.points(), values, grid.anchors(), omega_center);
}

namespace {

// Residuals of the scaled Lorentzian model. Parameters are
// (amplitude / a0, (x0 - c0) / w0, fwhm / w0, baseline / a0).
struct LorentzFunctor {
    using Scalar = double;
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

    std::vector<double> x;  // (omega - c0) / w0
    std::vector<double> y;  // value / a0

    int inputs() const { return 4; }
    int values() const { return static_cast<int>(x.size()); }

    int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& f) const
    {
        const double h2 = 0.25 * p(2) * p(2);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = x[i] - p(1);
            f(static_cast<Eigen::Index>(i)) = p(0) * h2 / (d * d + h2) + p(3) - y[i];
        }
        return 0;
    }

    int df(const Eigen::VectorXd& p, Eigen::MatrixXd& jac) const
    {
        const double h = 0.5 * p(2);
        const double h2 = h * h;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const auto row = static_cast<Eigen::Index>(i);
            const double d = x[i] - p(1);
            const double q = d * d + h2;
            jac(row, 0) = h2 / q;
            jac(row, 1) = p(0) * h2 * 2.0 * d / (q * q);
            // d/dw of h^2/(d^2+h^2) with h = w/2
            jac(row, 2) = p(0) * (h * d * d) / (q * q);
            jac(row, 3) = 1.0;
        }
        return 0;
    }
};

}  // namespace

LorentzFit fit_lorentzian(std::span<const double> omega, std::span<const double> values, FitWindow window)
{
    if (omega.size() != values.size()) throw Error(ErrorKind::domain, "fit_lorentzian: size mismatch");
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < omega.size(); ++i) {
        if (omega[i] >= window.lo && omega[i] <= window.hi) {
            xs.push_back(omega[i]);
            ys.push_back(values[i]);
        }
    }
    if (xs.size() < 8) throw Error(ErrorKind::fit_failure, "fit window holds fewer than 8 samples");

    std::size_t maxima = 0;
    for (std::size_t i = 1; i + 1 < ys.size(); ++i) {
        if (ys[i] > ys[i - 1] && ys[i] > ys[i + 1]) ++maxima;
    }
    if (maxima == 0) throw Error(ErrorKind::fit_failure, "no peak inside the fit window");
    if (maxima > 1) throw Error(ErrorKind::fit_failure, "fit window holds more than one peak");

    const auto peak = static_cast<std::size_t>(std::max_element(ys.begin(), ys.end()) - ys.begin());
    const double base0 = *std::min_element(ys.begin(), ys.end());
    const double a0 = ys[peak] - base0;
    if (!(a0 > 0.0)) throw Error(ErrorKind::fit_failure, "flat spectrum inside the fit window");

    // Initial width from the half-maximum crossings.
    const double half = base0 + 0.5 * a0;
    std::size_t left = peak;
    while (left > 0 && ys[left] > half) --left;
    std::size_t right = peak;
    while (right + 1 < ys.size() && ys[right] > half) ++right;
    double w0 = xs[right] - xs[left];
    if (!(w0 > 0.0)) w0 = xs.back() - xs.front();
    const double c0 = xs[peak];

    LorentzFunctor functor;
    functor.x.reserve(xs.size());
    functor.y.reserve(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        functor.x.push_back((xs[i] - c0) / w0);
        functor.y.push_back(ys[i] / a0);
    }

    Eigen::VectorXd p(4);
    p << 1.0, 0.0, 1.0, base0 / a0;
    Eigen::LevenbergMarquardt<LorentzFunctor> lm(functor);
    lm.parameters.xtol = 1e-9;
    lm.parameters.ftol = 1e-15;
    lm.parameters.maxfev = 2000;
    const auto status = lm.minimize(p);
    if (status == Eigen::LevenbergMarquardtSpace::ImproperInputParameters || !p.allFinite()) {
        throw Error(ErrorKind::fit_failure, "Lorentzian fit did not converge");
    }

    Eigen::VectorXd f(functor.values());
    functor(p, f);
    LorentzFit fit;
    fit.amplitude = p(0) * a0;
    fit.center = c0 + p(1) * w0;
    fit.fwhm = std::abs(p(2)) * w0;
    fit.baseline = p(3) * a0;
    fit.area = fit.amplitude * std::numbers::pi * fit.fwhm / 2.0;
    fit.rms_residual = std::sqrt(f.squaredNorm() / static_cast<double>(f.size())) / std::abs(p(0));
    if (!(fit.rms_residual <= kMaxFitResidual)) {
        std::ostringstream os;
        os << "Lorentzian fit residual " << 100.0 * fit.rms_residual << "% of peak exceeds 5%";
        throw Error(ErrorKind::fit_failure, os.str());
    }
    return fit;
}

namespace {

// Row vector (selection * chi * B): coefficient of each input channel in the
// selected quadrature. Full models select s + s_dag; the rotating-wave model
// selects s alone.
Eigen::RowVectorXcd channel_coefficients(const DriftModel& model, int sel, double omega)
{
    const Eigen::MatrixXcd chi = susceptibility_matrix(model, omega);
    Eigen::RowVectorXcd row = chi.row(sel);
    if (model.partner[static_cast<std::size_t>(sel)] >= 0) {
        row += chi.row(model.partner[static_cast<std::size_t>(sel)]);
    }
    return row * model.noise_input.cast<cdouble>();
}

}  // namespace

SpectrumResult position_spectrum(const DriftModel& model, std::string_view select, const FrequencyGrid& grid,
                                 const GridOptions& options)
{
    require_stable(model);
    const int sel = model.require_index(select);
    grid.check_covers(model_resonances(model), options);

    const auto& w = grid.points();
    SpectrumResult result;
    result.grid = grid;
    result.values.resize(w.size());
    double peak = 0.0;
    std::size_t negative = 0;
    double most_negative = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const Eigen::RowVectorXcd k = channel_coefficients(model, sel, w[i]);
        double s = (k.cwiseAbs2().transpose().array() * model.correlations.array()).sum();
        if (model.fidelity == Fidelity::rwa) {
            const Eigen::RowVectorXcd km = channel_coefficients(model, sel, -w[i]);
            s += (km.cwiseAbs2().transpose().array() * model.conjugate_correlations.array()).sum();
        }
        if (!std::isfinite(s)) throw Error(ErrorKind::numerical_failure, "non-finite spectral value");
        if (s < 0.0) {
            ++negative;
            most_negative = std::min(most_negative, s);
            s = 0.0;
        }
        peak = std::max(peak, s);
        result.values[i] = s;
    }
    if (most_negative < -1e-12 * peak ||
        static_cast<double>(negative) > kMaxNegativeFraction * static_cast<double>(w.size())) {
        throw Error(ErrorKind::numerical_failure, "spectrum has negative values beyond roundoff");
    }
    result.clipped = negative;

    const double center = std::abs(model.drift(sel, sel).imag());
    const auto occ = integrate_occupation(grid, result.values, center);
    result.n_eff = std::max(0.0, occ.n_eff);
    result.quadrature_error = occ.quadrature_error;
    result.tail_fraction = occ.tail_fraction;
    result.T_eff = center > 0.0 ? effective_temperature(result.n_eff, center) : 0.0;
    return result;
}

SpectrumResult position_spectrum(const DriftModel& model, std::string_view select, const GridOptions& options)
{
    require_stable(model);
    return position_spectrum(model, select, FrequencyGrid::for_model(model, options), options);
}

ForceSpectrum force_spectrum_numeric(const DriftModel& model, const SystemSpec& spec,
                                     std::span<const double> omega)
{
    require_stable(model);
    if (!(spec.mass_a > 0.0)) throw Error(ErrorKind::domain, "force spectrum needs mass_a > 0");
    const int a = model.require_index("a");
    const auto baths = bath_occupations(spec);
    const double wa = spec.mode_a.omega;
    const double scale = 0.5 * kHbar * spec.mass_a * wa;

    auto evaluate = [&](double w) {
        const Eigen::MatrixXcd chi = susceptibility_matrix(model, w);
        const Eigen::RowVectorXcd r = chi.row(a) * model.noise_input.cast<cdouble>() / chi(a, a);
        const Eigen::ArrayXd p = r.cwiseAbs2().transpose().array();
        return scale * ((p * model.correlations.array()).sum() + (p * model.conjugate_correlations.array()).sum());
    };

    ForceSpectrum out;
    out.omega.assign(omega.begin(), omega.end());
    out.S_FF.reserve(omega.size());
    for (double w : omega) out.S_FF.push_back(evaluate(w));
    out.S_FF_at_resonance = evaluate(wa);
    out.bare_value = scale * spec.mode_a.gamma * (2.0 * baths.nbar_a + 1.0);
    out.factor_at_resonance = out.bare_value > 0.0 ? out.S_FF_at_resonance / out.bare_value
                                                   : std::numeric_limits<double>::infinity();
    return out;
}

}  // namespace omcool
