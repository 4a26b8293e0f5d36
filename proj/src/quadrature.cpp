#include "swt/quadrature.hpp"

#include <cmath>
#include <queue>
#include <vector>

#include "swt/errors.hpp"

namespace swt {

namespace {

// Globally adaptive Simpson with a hard evaluation budget: panels are
// refined worst-error-first, so integrable endpoint singularities soak up
// panels without runaway recursion. Non-finite endpoint values are nudged
// inward (integrable singularities only).
struct Panel {
    double a, b;
    double fa, fm, fb;
    double coarse;   // Simpson on (a, b)
    double refined;  // Simpson on the two halves
    double flm, frm; // midpoint values of the halves
    double error;    // |refined - coarse| / 15
};

class AdaptiveSimpson {
  public:
    AdaptiveSimpson(const std::function<double(double)>& f, int budget)
        : f_(f), budget_(budget) {}

    double eval(double x, double lo, double hi) {
        ++count_;
        double v = f_(x);
        if (std::isfinite(v)) return v;
        const double w = (hi - lo) * 1e-9;
        v = f_(x == lo ? x + w : (x == hi ? x - w : x));
        return std::isfinite(v) ? v : 0.0;
    }

    Panel make_panel(double a, double b, double fa, double fm, double fb) {
        Panel p;
        p.a = a;
        p.b = b;
        p.fa = fa;
        p.fm = fm;
        p.fb = fb;
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        p.flm = eval(lm, a, b);
        p.frm = eval(rm, a, b);
        p.coarse = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        const double left = (m - a) / 6.0 * (fa + 4.0 * p.flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * p.frm + fb);
        p.refined = left + right;
        p.error = std::abs(p.refined - p.coarse) / 15.0;
        return p;
    }

    double run(double a, double b, double tol) {
        const double fa = eval(a, a, b);
        const double fb = eval(b, a, b);
        const double fm = eval(0.5 * (a + b), a, b);
        auto cmp = [](const Panel& x, const Panel& y) { return x.error < y.error; };
        std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> heap(cmp);
        heap.push(make_panel(a, b, fa, fm, fb));
        double total = heap.top().refined;
        double err = heap.top().error;
        while (count_ < budget_ && !heap.empty()) {
            const Panel worst = heap.top();
            if (err <= tol * std::max(std::abs(total), 1e-300)) break;
            if (worst.error <= 0.0) break;
            heap.pop();
            const double m = 0.5 * (worst.a + worst.b);
            Panel l = make_panel(worst.a, m, worst.fa, worst.flm, worst.fm);
            Panel r = make_panel(m, worst.b, worst.fm, worst.frm, worst.fb);
            total += l.refined + r.refined - worst.refined;
            err += l.error + r.error - worst.error;
            heap.push(l);
            heap.push(r);
        }
        return total;
    }

  private:
    const std::function<double(double)>& f_;
    int budget_;
    int count_ = 0;
};

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 int budget) {
    if (a == b) return 0.0;
    AdaptiveSimpson integrator(f, budget);
    return integrator.run(a, b, tol);
}

double integrate_power_left(const std::function<double(double)>& h, double a, double b,
                            double gamma, double tol, int budget) {
    if (!(gamma > -1.0)) throw ParameterError("integrate_power_left: gamma must exceed -1");
    if (gamma == 0.0) return integrate(h, a, b, tol, budget);
    const double q = gamma + 1.0;
    const double smax = std::pow(b - a, q);
    auto trans = [&](double s) { return h(a + std::pow(s, 1.0 / q)); };
    return integrate(trans, 0.0, smax, tol, budget) / q;
}

double integrate_power_right(const std::function<double(double)>& h, double a, double b,
                             double gamma, double tol, int budget) {
    if (!(gamma > -1.0)) throw ParameterError("integrate_power_right: gamma must exceed -1");
    if (gamma == 0.0) return integrate(h, a, b, tol, budget);
    const double q = gamma + 1.0;
    const double smax = std::pow(b - a, q);
    auto trans = [&](double s) { return h(b - std::pow(s, 1.0 / q)); };
    return integrate(trans, 0.0, smax, tol, budget) / q;
}

double integrate_tail(const std::function<double(double)>& f, double c, double delta,
                      double tol, int budget) {
    if (!(c > 0.0)) throw ParameterError("integrate_tail: lower limit must be positive");
    if (!(delta > 0.0)) throw ParameterError("integrate_tail: delta must be positive");
    // x = c/t maps [c, inf) to (0, 1]; f(c/t) c/t^2 ~ t^(delta-1) near 0.
    auto trans = [&](double t) {
        if (t <= 1e-300) return 0.0;
        const double x = c / t;
        return f(x) * x / t * std::pow(t, 1.0 - delta);
    };
    return integrate_power_left(trans, 0.0, 1.0, delta < 1.0 ? delta - 1.0 : 0.0, tol, budget);
}

} // namespace swt
