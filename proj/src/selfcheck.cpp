#include "swt/selfcheck.hpp"

#include <chrono>
#include <cmath>

#include "swt/errors.hpp"
#include "swt/estimators.hpp"
#include "swt/statutil.hpp"

namespace swt {

KernelPair random_kernel_pair(double alpha, std::size_t atoms, Xoshiro256pp& rng) {
    if (atoms < 2) throw ParameterError("random_kernel_pair: need at least 2 atoms");
    for (;;) {
        KernelPair p;
        p.alpha = alpha;
        bool shared_support = false;
        for (std::size_t i = 0; i < atoms; ++i) {
            const double mass = 0.1 + rng.uniform01();
            const double fv = 2.0 * rng.uniform_sym();
            const double gv = 2.0 * rng.uniform_sym();
            p.f.mass.push_back(mass);
            p.f.value.push_back(fv);
            p.g.mass.push_back(mass);
            p.g.value.push_back(gv);
            shared_support = shared_support || (fv != 0.0 && gv != 0.0);
        }
        if (shared_support && alpha_norm_pow(p.f, alpha) > 1e-6 &&
            alpha_norm_pow(p.g, alpha) > 1e-6)
            return p;
    }
}

double envelope_ratio_sweep(const std::vector<double>& alphas, std::size_t pairs,
                            std::size_t atoms, std::size_t grid, RngStream stream) {
    double worst = 0.0;
    std::vector<std::pair<double, double>> lattice;
    lattice.reserve(grid * grid);
    for (std::size_t i = 0; i < grid; ++i)
        for (std::size_t j = 0; j < grid; ++j) {
            const double u = -5.0 + 10.0 * static_cast<double>(i) / static_cast<double>(grid - 1);
            const double v = -5.0 + 10.0 * static_cast<double>(j) / static_cast<double>(grid - 1);
            lattice.emplace_back(u, v);
        }
    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
        Xoshiro256pp rng(stream.substream(ai));
        for (std::size_t r = 0; r < pairs; ++r) {
            const auto p = random_kernel_pair(alphas[ai], atoms, rng);
            for (UBound bound : {UBound::Plain, UBound::Gaussian, UBound::Coercive})
                worst = std::max(worst, u_envelope_ratio(p, lattice, bound));
        }
    }
    return worst;
}

namespace {

double rel_err(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

// Richardson extrapolation of symmetric differences: (4 D(h/2) - D(h)) / 3.
template <typename F>
double richardson(const F& d, double h) {
    return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

} // namespace

double derivative_check_sweep(const std::vector<double>& alphas, std::size_t points,
                              RngStream stream) {
    double worst = 0.0;
    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
        Xoshiro256pp rng(stream.substream(1000 + ai));
        const auto p = random_kernel_pair(alphas[ai], 4, rng);
        std::size_t accepted = 0;
        while (accepted < points) {
            auto draw = [&]() {
                const double mag = 0.1 + 2.4 * rng.uniform01();
                return rng.uniform01() < 0.5 ? mag : -mag;
            };
            const double u = draw();
            const double v = draw();
            // Stay clear of the mixed-derivative singular set and of
            // uninformative near-zero derivatives.
            bool near_singular = false;
            for (std::size_t i = 0; i < p.f.size(); ++i) {
                const double mix = u * p.f.value[i] + v * p.g.value[i];
                const double scale = std::abs(u * p.f.value[i]) + std::abs(v * p.g.value[i]);
                if (p.f.value[i] != 0.0 && p.g.value[i] != 0.0 && std::abs(mix) < 1e-2 * scale)
                    near_singular = true;
            }
            if (near_singular) continue;

            const double du = du_measure(p, u, v);
            const double fd_du = richardson(
                [&](double h) { return (u_measure(p, u + h, v) - u_measure(p, u - h, v)) / (2.0 * h); },
                1e-4);
            const double duv = dudv_measure(p, u, v);
            const double fd_duv = richardson(
                [&](double h) {
                    return (u_measure(p, u + h, v + h) - u_measure(p, u + h, v - h) -
                            u_measure(p, u - h, v + h) + u_measure(p, u - h, v - h)) /
                           (4.0 * h * h);
                },
                1e-4);
            if (std::abs(du) < 1e-4 || std::abs(duv) < 1e-4) continue;
            ++accepted;
            worst = std::max(worst, rel_err(du, fd_du));
            worst = std::max(worst, rel_err(duv, fd_duv));
        }
    }
    return worst;
}

double invariance_sweep(std::size_t transforms, RngStream stream) {
    Xoshiro256pp rng(stream.substream(77));
    double worst = 0.0;
    for (std::size_t t = 0; t < transforms; ++t) {
        const double alpha = 1.05 + 0.9 * rng.uniform01();
        const auto p = random_kernel_pair(alpha, 3 + rng.next() % 4, rng);
        const std::size_t n = p.f.size();
        std::vector<double> h(n);
        for (double& x : h) {
            x = 0.5 + 1.5 * rng.uniform01();
            if (rng.uniform01() < 0.5) x = -x;
        }
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        for (std::size_t i = n; i > 1; --i)
            std::swap(perm[i - 1], perm[rng.next() % i]);

        const auto q = representation_transform(p, h, perm);
        const double u = 1.3, v = -0.7;
        KernelPair ps{p.g, p.f, p.alpha}, qs{q.g, q.f, q.alpha};
        worst = std::max(worst, rel_err(m1_star(p), m1_star(q)));
        worst = std::max(worst, rel_err(m1_star(ps), m1_star(qs)));
        worst = std::max(worst, rel_err(m2(p), m2(q)));
        worst = std::max(worst, rel_err(u_measure(p, u, v), u_measure(q, u, v)));
        worst = std::max(worst, rel_err(i_measure(p, u, v), i_measure(q, u, v)));
    }
    return worst;
}

McReport run_selfcheck(RngStream stream) {
    const auto t0 = std::chrono::steady_clock::now();
    McReport rep;
    rep.name = "selfcheck";

    {
        Verdict v;
        v.name = "envelope-bounds";
        v.value = envelope_ratio_sweep({1.2, 1.5, 1.8}, 6, 4, 40, stream.substream(1));
        v.threshold = 1.0;
        v.pass = v.value <= 1.0;
        rep.verdicts.push_back(v);
    }
    {
        Verdict v;
        v.name = "derivative-formulas";
        v.value = derivative_check_sweep({1.2, 1.5, 1.8}, 25, stream.substream(2));
        v.threshold = 1e-5;
        v.pass = v.value <= 1e-5;
        rep.verdicts.push_back(v);
    }
    {
        Verdict v;
        v.name = "representation-invariance";
        v.value = invariance_sweep(50, stream.substream(3));
        v.threshold = 1e-10;
        v.pass = v.value <= 1e-10;
        rep.verdicts.push_back(v);
    }
    {
        const auto ineq = verify_pointwise_inequalities(100'000, {1.1, 1.5, 1.9}, stream.substream(4));
        Verdict v;
        v.name = "signed-power-inequalities";
        v.value = ineq.verdicts.front().value;
        v.threshold = 0.0;
        v.pass = ineq.all_pass();
        rep.verdicts.push_back(v);
    }
    {
        // Weight identities and the two exact estimator invariances.
        double worst = 0.0;
        Xoshiro256pp rng(stream.substream(5));
        for (int rep_i = 0; rep_i < 20; ++rep_i) {
            const int j_min = 1 + static_cast<int>(rng.next() % 3);
            const int j_max = j_min + 1 + static_cast<int>(rng.next() % 4);
            std::vector<double> hints;
            if (rng.uniform01() < 0.5)
                for (int j = j_min; j <= j_max; ++j) hints.push_back(0.2 + rng.uniform01());
            const auto w = ols_weights(j_min, j_max, hints);
            double s0 = 0.0, s1 = 0.0;
            for (std::size_t i = 0; i < w.w.size(); ++i) {
                s0 += w.w[i];
                s1 += w.w[i] * static_cast<double>(j_min + static_cast<int>(i));
            }
            worst = std::max({worst, std::abs(s0), std::abs(s1 - 1.0)});

            // Exact log-linear grid: H recovered exactly for any valid weights.
            const double hurst = 0.2 + 0.6 * rng.uniform01();
            WaveletCoefGrid grid;
            grid.j_min = j_min;
            for (int j = j_min; j <= j_max; ++j)
                grid.octaves.push_back(
                    std::vector<double>(8, std::pow(2.0, (hurst + 0.5) * j + 1.7)));
            const auto est = estimate_H_log(grid, w);
            worst = std::max(worst, std::abs(est.h_hat - hurst));
            // Scale invariance: multiplying every coefficient by c > 0.
            WaveletCoefGrid scaled = grid;
            for (auto& o : scaled.octaves)
                for (auto& d : o) d *= 3.7;
            worst = std::max(worst,
                             std::abs(estimate_H_log(scaled, w).h_hat - est.h_hat));
        }
        Verdict v;
        v.name = "weight-identities";
        v.value = worst;
        v.threshold = 1e-11;
        v.pass = worst <= 1e-11;
        rep.verdicts.push_back(v);
    }

    rep.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

} // namespace swt
