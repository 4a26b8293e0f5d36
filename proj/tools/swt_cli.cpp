// Command-line surface for stable-process dependence measures, LFSM
// synthesis, wavelet H estimation, and the Monte Carlo verification harness.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "swt/errors.hpp"
#include "swt/harness.hpp"
#include "swt/io.hpp"
#include "swt/parallel.hpp"
#include "swt/selfcheck.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct GlobalOpts {
    std::string out_dir;
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;
    int threads = 0;
    std::string format = "json";

    fs::path resolve_out() const {
        std::string dir = out_dir;
        if (dir.empty()) {
            const char* env = std::getenv("STABLE_WAVELET_OUT");
            dir = env ? env : ".";
        }
        fs::create_directories(dir);
        return dir;
    }
    swt::RngStream rng() const { return {seed, stream}; }
};

json base_config(const GlobalOpts& g) {
    return json{{"tool_version", kVersion}, {"seed", g.seed}, {"stream", g.stream}};
}

void apply_globals(const GlobalOpts& g) { swt::set_worker_threads(g.threads); }

void write_report(const GlobalOpts& g, const std::string& name, const swt::McReport& rep,
                  const json& config) {
    json doc = rep.to_json();
    doc["config"] = config;
    swt::write_text((g.resolve_out() / (name + ".json")).string(), doc.dump(2) + "\n");
    if (g.format == "csv" && !rep.long_form.empty())
        swt::write_long_csv((g.resolve_out() / (name + ".csv")).string(), rep.long_form);
    for (const auto& v : rep.verdicts)
        std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << v.name << "  value=" << v.value
                  << " threshold=" << v.threshold << '\n';
    if (rep.hypothesis_unmet) std::cout << "[WARN] hypothesis unmet for this configuration\n";
}

swt::MovingAverageSpec ma_from_flags(const std::string& family, double p, double alpha,
                                     double delta, double horizon) {
    swt::MovingAverageSpec spec;
    if (family == "power")
        spec.a = swt::MaKernel::power_law(p);
    else if (family == "indicator")
        spec.a = swt::MaKernel::indicator(0.0, 1.0);
    else
        throw swt::ParameterError("unknown kernel family: " + family);
    spec.alpha = alpha;
    spec.delta = delta;
    spec.horizon = horizon;
    return spec;
}

swt::FunctionalSpec functional_from_name(const std::string& name, double beta, double clip) {
    if (name == "log2abs") return swt::FunctionalSpec::log2abs();
    if (name == "abspow") return swt::FunctionalSpec::abs_pow(beta);
    if (name == "clip") return swt::FunctionalSpec::bounded_clip(clip);
    throw swt::ParameterError("unknown functional: " + name);
}

swt::WaveletFamily family_from_name(const std::string& name) {
    if (name == "haar") return swt::WaveletFamily::Haar;
    if (name == "daubechies") return swt::WaveletFamily::Daubechies;
    throw swt::ParameterError("unknown wavelet family: " + name);
}

int run(int argc, char** argv) {
    CLI::App app{"stable-wavelet toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--out", g.out_dir, "output directory (default: $STABLE_WAVELET_OUT or .)");
    app.add_option("--seed", g.seed, "base seed");
    app.add_option("--stream", g.stream, "stream id");
    app.add_option("--threads", g.threads, "worker thread cap (0 = cores)");
    app.add_option("--format", g.format, "json|csv report format")
        ->check(CLI::IsMember({"json", "csv"}));
    app.set_config("--config", "", "configuration file (INI; flags take precedence)");

    // ---- synth ----
    auto* synth = app.add_subcommand("synth", "synthesize an LFSM path");
    double s_alpha = 1.6, s_hurst = 0.7, s_delta = 1.0 / 16.0, s_horizon = 0.0;
    long s_n = 1024;
    std::string s_name = "path";
    synth->add_option("--alpha", s_alpha, "stability index in (1,2)");
    synth->add_option("--hurst", s_hurst, "self-similarity parameter in (0,1)");
    synth->add_option("--n", s_n, "path length");
    synth->add_option("--delta", s_delta, "control grid step");
    synth->add_option("--horizon", s_horizon, "left truncation (0 = 4n)");
    synth->add_option("--name", s_name, "output basename");
    synth->callback([&] {
        apply_globals(g);
        swt::LfsmSpec lfsm{s_alpha, s_hurst};
        swt::SynthesisConfig cfg;
        cfg.n = s_n;
        cfg.j_min = 1;
        cfg.j_max = 1;
        cfg.delta = s_delta;
        cfg.horizon = s_horizon;
        cfg.stream = g.rng();
        const auto path = swt::synth_lfsm_path(lfsm, cfg);
        const auto out = g.resolve_out() / (s_name + ".csv");
        swt::write_path_csv(out.string(), path);
        json meta = base_config(g);
        meta["alpha"] = s_alpha;
        meta["H"] = s_hurst;
        meta["n"] = s_n;
        meta["delta"] = cfg.effective_delta();
        meta["horizon"] = s_horizon > 0 ? s_horizon : 4.0 * static_cast<double>(s_n);
        swt::write_text(out.string() + ".meta.json", meta.dump(2) + "\n");
        std::cout << "wrote " << out.string() << " (" << path.size() << " samples)\n";
    });

    // ---- dwt ----
    auto* dwt = app.add_subcommand("dwt", "wavelet coefficients (direct or pyramidal)");
    std::string d_mode = "direct", d_family = "daubechies", d_input, d_name = "coeffs";
    int d_q = 2, d_jmin = 1, d_jmax = 5;
    double d_alpha = 1.6, d_hurst = 0.7, d_delta = 0.0, d_tail = 1e-6;
    long d_n = 16384;
    dwt->add_option("--mode", d_mode)->check(CLI::IsMember({"direct", "pyramidal"}));
    dwt->add_option("--family", d_family)->check(CLI::IsMember({"haar", "daubechies"}));
    dwt->add_option("--q", d_q, "vanishing moments");
    dwt->add_option("--alpha", d_alpha);
    dwt->add_option("--hurst", d_hurst);
    dwt->add_option("--n", d_n, "series length (direct mode)");
    dwt->add_option("--jmin", d_jmin);
    dwt->add_option("--jmax", d_jmax);
    dwt->add_option("--delta", d_delta, "control grid step (0 = auto)");
    dwt->add_option("--tail-tol", d_tail);
    dwt->add_option("--input", d_input, "path CSV (pyramidal mode)");
    dwt->add_option("--name", d_name, "output basename");
    dwt->callback([&] {
        apply_globals(g);
        const auto wavelet = swt::build_wavelet(family_from_name(d_family), d_q);
        swt::WaveletCoefGrid grid;
        if (d_mode == "direct") {
            swt::LfsmSpec lfsm{d_alpha, d_hurst};
            swt::SynthesisConfig cfg;
            cfg.n = d_n;
            cfg.j_min = d_jmin;
            cfg.j_max = d_jmax;
            cfg.delta = d_delta;
            cfg.tail_tol = d_tail;
            cfg.stream = g.rng();
            grid = swt::wavelet_coeffs_direct(lfsm, wavelet, cfg);
        } else {
            if (d_input.empty() || !fs::exists(d_input))
                throw swt::ConfigError("pyramidal mode requires an existing --input path file");
            const auto path = swt::read_path_csv(d_input);
            grid = swt::wavelet_coeffs_pyramidal(path, wavelet, d_jmax);
            grid.alpha = d_alpha;
            grid.hurst = d_hurst;
        }
        const auto out = g.resolve_out() / (d_name + ".csv");
        swt::write_grid_csv(out.string(), grid);
        std::cout << "wrote " << out.string() << '\n';
        auto counts = grid.counts();
        for (std::size_t i = 0; i < counts.size(); ++i)
            std::cout << "  N_" << (grid.j_min + static_cast<int>(i)) << " = " << counts[i]
                      << '\n';
    });

    // ---- estimate ----
    auto* est = app.add_subcommand("estimate", "wavelet H estimate from a coefficient grid");
    std::string e_input, e_method = "log", e_name = "estimate";
    double e_beta = 0.4, e_alpha = 0.0;
    int e_jmin = 0, e_jmax = 0;
    bool e_sigma2 = false;
    long e_lagcap = 0;
    est->add_option("--input", e_input)->required();
    est->add_option("--method", e_method)->check(CLI::IsMember({"log", "power"}));
    est->add_option("--beta", e_beta);
    est->add_option("--alpha", e_alpha, "stability index (overrides grid metadata)");
    est->add_option("--jmin", e_jmin, "restrict octaves (0 = all)");
    est->add_option("--jmax", e_jmax);
    est->add_flag("--sigma2", e_sigma2, "attach within-path plug-in variance");
    est->add_option("--lag-cap", e_lagcap, "covariance truncation (0 = default)");
    est->add_option("--name", e_name, "output basename");
    est->callback([&] {
        apply_globals(g);
        if (!fs::exists(e_input)) throw swt::ConfigError("no such grid file: " + e_input);
        auto grid = swt::read_grid_csv(e_input);
        if (e_jmin > 0 && e_jmax >= e_jmin) {
            if (e_jmin < grid.j_min || e_jmax > grid.j_max())
                throw swt::ConfigError("requested octave range not present in the grid");
            swt::WaveletCoefGrid cut = grid;
            cut.octaves.assign(grid.octaves.begin() + (e_jmin - grid.j_min),
                               grid.octaves.begin() + (e_jmax - grid.j_min + 1));
            cut.j_min = e_jmin;
            grid = std::move(cut);
        }
        const auto w = swt::ols_weights(grid.j_min, grid.j_max());
        auto res = e_method == "log"
                       ? swt::estimate_H_log(grid, w)
                       : swt::estimate_H_power(
                             grid, w, e_beta,
                             e_alpha > 0.0 ? std::optional<double>(e_alpha) : std::nullopt);
        if (e_sigma2) {
            const long cap = e_lagcap > 0
                                 ? e_lagcap
                                 : swt::default_lag_cap(grid.octaves.back().size());
            swt::SigmaMethod sm;
            sm.power = e_method == "power";
            sm.beta = e_beta;
            const auto sigma =
                swt::sigma_matrix({grid}, grid.j_min, grid.j_max(), cap, sm);
            double s2 = swt::sigma2_total(sigma, w);
            if (sm.power) s2 /= e_beta * e_beta;
            res.sigma2_hat = s2;
            res.warnings.push_back("sigma2 from a single grid: within-path covariance "
                                   "estimates, biased for short series");
            if (sm.power)
                res.warnings.push_back("sigma2 for the power estimator describes the "
                                       "asymptotic normal law only, not the normalized "
                                       "mean squared error");
        }
        json doc = swt::to_json(res);
        json cfgj = base_config(g);
        cfgj["input"] = e_input;
        cfgj["method"] = e_method;
        if (e_method == "power") cfgj["beta"] = e_beta;
        doc["config"] = cfgj;
        const auto out = g.resolve_out() / (e_name + ".json");
        swt::write_text(out.string(), doc.dump(2) + "\n");
        std::cout << doc.dump(2) << '\n';
    });

    // ---- depmeas ----
    auto* dep = app.add_subcommand("depmeas", "dependence measures of a kernel pair");
    std::vector<double> p_f, p_g, p_mass;
    double p_alpha = 1.5, p_madelta = 1.0 / 64.0, p_mahorizon = 0.0, p_map = 2.5;
    std::string p_mafamily;
    long p_lag = 0;
    std::string p_name = "depmeas";
    dep->add_option("--f", p_f, "kernel f atoms")->delimiter(',');
    dep->add_option("--g", p_g, "kernel g atoms")->delimiter(',');
    dep->add_option("--mass", p_mass, "atom masses (default all 1)")->delimiter(',');
    dep->add_option("--alpha", p_alpha);
    dep->add_option("--ma-family", p_mafamily, "power|indicator moving-average mode");
    dep->add_option("--ma-p", p_map, "power-law exponent");
    dep->add_option("--lag", p_lag, "moving-average lag n");
    dep->add_option("--ma-delta", p_madelta);
    dep->add_option("--ma-horizon", p_mahorizon);
    dep->add_option("--name", p_name);
    dep->callback([&] {
        apply_globals(g);
        swt::KernelPair pair;
        if (!p_mafamily.empty()) {
            const auto spec = ma_from_flags(p_mafamily, p_map, p_alpha, p_madelta, p_mahorizon);
            pair = swt::ma_kernel_pair(spec, p_lag);
        } else {
            if (p_f.empty() || p_f.size() != p_g.size())
                throw swt::ParameterError("--f and --g must have equal nonzero length");
            std::vector<double> mass = p_mass.empty() ? std::vector<double>(p_f.size(), 1.0)
                                                      : p_mass;
            pair = swt::KernelPair{{mass, p_f}, {mass, p_g}, p_alpha};
        }
        const auto rep = swt::dependence_report(pair);
        json doc = swt::to_json(rep);
        json cfgj = base_config(g);
        cfgj["alpha"] = pair.alpha;
        if (!p_mafamily.empty()) {
            cfgj["ma_family"] = p_mafamily;
            cfgj["lag"] = p_lag;
        } else {
            cfgj["f"] = pair.f.value;
            cfgj["g"] = pair.g.value;
            cfgj["mass"] = pair.f.mass;
        }
        doc["config"] = cfgj;
        swt::write_text((g.resolve_out() / (p_name + ".json")).string(), doc.dump(2) + "\n");
        std::cout << doc.dump(2) << '\n';
    });

    // ---- clt ----
    auto* clt = app.add_subcommand("clt", "central limit theorem Monte Carlo");
    std::string c_preset, c_family = "power", c_k = "log2abs";
    double c_p = 2.5, c_alpha = 1.5, c_delta = 1.0 / 64.0, c_beta = 0.4, c_clip = 2.0;
    std::vector<long> c_ns{1024, 4096, 16384};
    int c_reps = 200;
    long c_lagcap = 64;
    clt->add_option("--preset", c_preset, "iid-bounded | powerlaw-log");
    clt->add_option("--family", c_family);
    clt->add_option("--p", c_p);
    clt->add_option("--alpha", c_alpha);
    clt->add_option("--delta", c_delta);
    clt->add_option("--k", c_k, "log2abs | abspow | clip");
    clt->add_option("--beta", c_beta);
    clt->add_option("--clip", c_clip);
    clt->add_option("--n-values", c_ns)->delimiter(',');
    clt->add_option("--replicates", c_reps);
    clt->add_option("--lag-cap", c_lagcap);
    clt->callback([&] {
        apply_globals(g);
        swt::CltRunConfig cfg;
        if (c_preset == "iid-bounded") {
            cfg.ma = ma_from_flags("indicator", 0, 1.5, 1.0 / 64.0, 0);
            cfg.k = swt::FunctionalSpec::bounded_clip(2.0);
            cfg.n_values = {1024, 4096};
            cfg.replicates = 500;
        } else if (c_preset == "powerlaw-log") {
            cfg.ma = ma_from_flags("power", 2.5, 1.5, 1.0 / 64.0, 0);
            cfg.k = swt::FunctionalSpec::log2abs();
            cfg.n_values = {1024, 4096, 16384};
            cfg.replicates = 200;
        } else if (!c_preset.empty()) {
            throw swt::ParameterError("unknown preset: " + c_preset);
        } else {
            cfg.ma = ma_from_flags(c_family, c_p, c_alpha, c_delta, 0);
            cfg.k = functional_from_name(c_k, c_beta, c_clip);
            cfg.n_values = c_ns;
            cfg.replicates = c_reps;
        }
        cfg.lag_cap = c_lagcap;
        cfg.stream = g.rng();
        json cfgj = base_config(g);
        cfgj["kernel"] = cfg.ma.a.describe();
        cfgj["alpha"] = cfg.ma.alpha;
        cfgj["functional"] = cfg.k.describe();
        cfgj["n_values"] = cfg.n_values;
        cfgj["replicates"] = cfg.replicates;
        auto rep = swt::run_clt_mc(cfg);
        const auto series = swt::sigma2_series(cfg);
        const double lim_var = rep.metrics["per_n"].back()["normalized_variance"];
        swt::Verdict sv;
        sv.name = "series-matches-variance";
        sv.value = std::abs(series.value / lim_var - 1.0);
        sv.threshold = 0.2;
        sv.pass = sv.value <= 0.2;
        sv.note = "truncated covariance series vs Var(S_N)/N at largest N";
        rep.verdicts.push_back(sv);
        rep.metrics["series"] = {{"value", series.value},
                                 {"var0", series.var0},
                                 {"tail_decreasing", series.tail_decreasing}};
        write_report(g, "clt_report", rep, cfgj);
        throw CLI::RuntimeError(rep.exit_code());
    });

    // ---- bounds ----
    auto* bounds = app.add_subcommand("bounds", "tail-cut covariance scaling check");
    std::string b_preset;
    std::vector<double> b_f{1.0, 0.4}, b_g{0.4, 1.0}, b_bs{1.0, 2.0, 4.0};
    double b_alpha = 1.5, b_beta = 0.5;
    std::size_t b_mc = 1'000'000;
    bounds->add_option("--preset", b_preset, "thm22-default");
    bounds->add_option("--f", b_f)->delimiter(',');
    bounds->add_option("--g", b_g)->delimiter(',');
    bounds->add_option("--alpha", b_alpha);
    bounds->add_option("--beta", b_beta);
    bounds->add_option("--b-values", b_bs)->delimiter(',');
    bounds->add_option("--mc", b_mc);
    bounds->callback([&] {
        apply_globals(g);
        if (b_preset == "thm22-default") {
            b_f = {1.0, 0.4};
            b_g = {0.4, 1.0};
            b_alpha = 1.5;
            b_beta = 0.5;
            b_bs = {1.0, 2.0, 4.0};
            b_mc = 1'000'000;
        } else if (!b_preset.empty()) {
            throw swt::ParameterError("unknown preset: " + b_preset);
        }
        std::vector<double> mass(b_f.size(), 1.0);
        swt::KernelPair pair{{mass, b_f}, {mass, b_g}, b_alpha};
        const auto rep = swt::verify_cov_bound_b(pair, b_beta, b_bs, b_mc, g.rng());
        json cfgj = base_config(g);
        cfgj["f"] = b_f;
        cfgj["g"] = b_g;
        cfgj["alpha"] = b_alpha;
        cfgj["beta"] = b_beta;
        cfgj["b_values"] = b_bs;
        cfgj["mc"] = b_mc;
        write_report(g, "bounds_report", rep, cfgj);
        throw CLI::RuntimeError(rep.exit_code());
    });

    // ---- multiscale ----
    auto* multi = app.add_subcommand("multiscale", "joint normality across octaves");
    double m_alpha = 1.6, m_hurst = 0.7;
    int m_q = 2, m_jmin = 1, m_jmax = 2, m_reps = 300;
    long m_n = 16384, m_lagcap = 16;
    multi->add_option("--alpha", m_alpha);
    multi->add_option("--hurst", m_hurst);
    multi->add_option("--q", m_q);
    multi->add_option("--jmin", m_jmin);
    multi->add_option("--jmax", m_jmax);
    multi->add_option("--n", m_n);
    multi->add_option("--replicates", m_reps);
    multi->add_option("--lag-cap", m_lagcap);
    multi->callback([&] {
        apply_globals(g);
        swt::MultiscaleConfig cfg;
        cfg.lfsm = swt::LfsmSpec{m_alpha, m_hurst};
        cfg.q = m_q;
        cfg.j_min = m_jmin;
        cfg.j_max = m_jmax;
        cfg.n = m_n;
        cfg.replicates = m_reps;
        cfg.lag_cap = m_lagcap;
        cfg.stream = g.rng();
        const auto rep = swt::run_multiscale_clt(cfg);
        json cfgj = base_config(g);
        cfgj["alpha"] = m_alpha;
        cfgj["hurst"] = m_hurst;
        cfgj["q"] = m_q;
        cfgj["n"] = m_n;
        cfgj["replicates"] = m_reps;
        write_report(g, "multiscale_report", rep, cfgj);
        throw CLI::RuntimeError(rep.exit_code());
    });

    // ---- selfcheck ----
    auto* self = app.add_subcommand("selfcheck", "deterministic property suites");
    self->callback([&] {
        apply_globals(g);
        const auto rep = swt::run_selfcheck(g.rng());
        write_report(g, "selfcheck_report", rep, base_config(g));
        throw CLI::RuntimeError(rep.exit_code());
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::RuntimeError& e) {
        return e.get_exit_code(); // verdict-driven exit from a callback
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const swt::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const swt::DiagnosticsError& e) {
        std::cerr << "diagnostics error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
