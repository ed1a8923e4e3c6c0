#include "wingvol/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "wingvol/errors.hpp"

namespace wingvol {

namespace {

constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kNodes[j];
        const double sum = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[j] * sum;
        if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options) {
    if (!std::isfinite(a) || !std::isfinite(b)) throw InvalidArgument("integration limits must be finite");
    if (a == b) return {};
    if (a > b) {
        QuadratureResult r = integrate(f, b, a, options);
        r.value = -r.value;
        return r;
    }
    std::priority_queue<Panel> panels;
    Panel first = gauss_kronrod(f, a, b);
    double total = first.value;
    double error = first.error;
    panels.push(first);
    int count = 1;
    auto converged = [&] {
        return error <= std::max(options.abs_tol, options.rel_tol * std::abs(total)) ||
               error <= 50.0 * std::numeric_limits<double>::epsilon() * std::abs(total);
    };
    while (!converged()) {
        if (count >= options.max_intervals) {
            throw QuadratureFailure("adaptive quadrature did not converge: error " + std::to_string(error) +
                                    " on value " + std::to_string(total));
        }
        Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw QuadratureFailure("adaptive quadrature exhausted floating-point resolution");
        }
        Panel left = gauss_kronrod(f, worst.a, mid);
        Panel right = gauss_kronrod(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        ++count;
        if (!std::isfinite(total)) throw QuadratureFailure("integrand produced a non-finite value");
    }
    // Re-sum to remove drift from the running updates.
    double value = 0.0;
    double err = 0.0;
    while (!panels.empty()) {
        value += panels.top().value;
        err += panels.top().error;
        panels.pop();
    }
    return {value, err, count};
}

namespace {

// Samples the integrand; when neighbouring samples differ by more than the
// quadrature can resolve from its nodes, recurses into the sample intervals.
LogQuadratureResult integrate_log_impl(const std::function<double(double)>& log_f, double a, double b,
                                       const QuadratureOptions& options, int depth) {
    constexpr int samples = 257;
    constexpr double resolvable = 50.0;
    constexpr double negligible = 800.0;
    std::vector<double> xs(samples + 1);
    std::vector<double> vs(samples + 1);
    double shift = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= samples; ++i) {
        xs[i] = i == samples ? b : a + (b - a) * i / samples;
        vs[i] = log_f(xs[i]);
        if (vs[i] > shift) shift = vs[i];
    }
    if (!std::isfinite(shift)) {
        if (shift < 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
        throw QuadratureFailure("log integrand is not finite");
    }
    // An interval is unresolved when its samples jump by more than the nodes can
    // follow; a zero sample (log = -inf) is a root, which quadrature handles.
    auto unresolved = [&](int i) {
        const double hi = std::max(vs[i], vs[i - 1]);
        const double lo = std::min(vs[i], vs[i - 1]);
        return hi > shift - negligible && std::isfinite(lo) && hi - lo > resolvable;
    };
    bool resolved = true;
    for (int i = 1; i <= samples && resolved; ++i) resolved = !unresolved(i);
    if (!resolved && depth < 8) {
        double log_total = -std::numeric_limits<double>::infinity();
        double err = 0.0;
        auto add = [&](const LogQuadratureResult& piece) {
            if (piece.log_value == -std::numeric_limits<double>::infinity()) return;
            const double before = log_total;
            log_total = log_add(log_total, piece.log_value);
            err = err * std::exp(before - log_total) + piece.rel_error * std::exp(piece.log_value - log_total);
        };
        // Runs of resolved intervals go to one quadrature call, the rest recurse.
        int run_start = 0;
        for (int i = 1; i <= samples; ++i) {
            if (!unresolved(i)) continue;
            if (run_start < i - 1) add(integrate_log_impl(log_f, xs[run_start], xs[i - 1], options, depth + 1));
            add(integrate_log_impl(log_f, xs[i - 1], xs[i], options, depth + 1));
            run_start = i;
        }
        if (run_start < samples) add(integrate_log_impl(log_f, xs[run_start], xs[samples], options, depth + 1));
        return {log_total, err};
    }
    auto scaled = [&](double x) { return std::exp(log_f(x) - shift); };
    const QuadratureResult r = integrate(scaled, a, b, options);
    if (!(r.value > 0.0)) return {-std::numeric_limits<double>::infinity(), 0.0};
    return {shift + std::log(r.value), r.error / r.value};
}

}  // namespace

LogQuadratureResult integrate_log(const std::function<double(double)>& log_f, double a, double b,
                                  const QuadratureOptions& options) {
    return integrate_log_impl(log_f, a, b, options, 0);
}

LogQuadratureResult integrate_log_around(const std::function<double(double)>& log_f, double a, double b,
                                         double center, double width, const QuadratureOptions& options,
                                         double truncation) {
    if (!(a < b) || std::isnan(center) || !(width > 0.0)) throw InvalidArgument("bad log-integration window");
    center = std::clamp(center, a, b);
    // A centre within rounding distance of an end would leave a panel too narrow to subdivide.
    const double snap = 16.0 * std::numeric_limits<double>::epsilon() * std::abs(center);
    if (std::isfinite(b) && b - center <= snap) center = b;
    if (std::isfinite(a) && center - a <= snap) center = a;
    const double log_trunc = std::log(truncation);
    double total = -std::numeric_limits<double>::infinity();
    double err = 0.0;
    auto sweep = [&](int direction) {
        double edge = center;
        double h = width;
        const double bound = direction > 0 ? b : a;
        for (int step = 0; edge != bound; ++step) {
            if (step > 5000) throw QuadratureFailure("log integration did not reach its truncation level");
            const double next = direction > 0 ? std::min(edge + h, b) : std::max(edge - h, a);
            const LogQuadratureResult piece =
                integrate_log(log_f, std::min(edge, next), std::max(edge, next), options);
            const double before = total;
            total = log_add(total, piece.log_value);
            if (piece.log_value > -std::numeric_limits<double>::infinity()) {
                err += piece.rel_error * std::exp(piece.log_value - total);
            }
            if (step > 0 && piece.log_value < before + log_trunc) break;
            edge = next;
            h *= 1.5;
        }
    };
    sweep(+1);
    sweep(-1);
    return {total, err};
}

double log_add(double x, double y) {
    if (x < y) std::swap(x, y);
    if (y == -std::numeric_limits<double>::infinity()) return x;
    return x + std::log1p(std::exp(y - x));
}

}  // namespace wingvol
