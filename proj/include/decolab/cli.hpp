// cli.hpp: scenario runner behind the command-line tool. Each subcommand maps
// to one model study; run() validates the merged parameter set, dispatches,
// and returns a table plus a human-readable summary. File emission and flag
// parsing live in the tool; everything here is deterministic for a fixed
// (parameters, seed) pair so outputs can be byte-compared.
#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "decolab/collapse.hpp"
#include "decolab/constants.hpp"
#include "decolab/csvio.hpp"
#include "decolab/envariance.hpp"
#include "decolab/grid1d.hpp"
#include "decolab/nogo.hpp"
#include "decolab/oscdec.hpp"
#include "decolab/pilotwave.hpp"
#include "decolab/presets.hpp"
#include "decolab/qcore.hpp"
#include "decolab/rng.hpp"
#include "decolab/scatterdec.hpp"
#include "decolab/spinbath.hpp"
#include "decolab/svg.hpp"
#include "decolab/verify.hpp"
#include "decolab/vonneumann.hpp"

namespace decolab::cli {

inline constexpr const char* kVersion = "1.0.0";

// Caller mistakes (unknown name, bad or missing parameter): exit status 2.
// Everything else thrown by a scenario is a numerical failure: exit status 1.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::string subcommand;
    std::map<std::string, double> reals;
    std::map<std::string, long long> ints;
    std::map<std::string, std::string> strings;
    std::uint64_t seed = 42;
    std::string output_dir;  // empty: nothing written
    bool emit_svg = false;
    bool natural_units = false;  // hbar = G = 1 instead of SI values

    double real(const std::string& key) const {
        const auto it = reals.find(key);
        if (it == reals.end())
            throw UsageError(subcommand + ": missing real parameter '" + key + "'");
        return it->second;
    }
    long long integer(const std::string& key) const {
        const auto it = ints.find(key);
        if (it == ints.end())
            throw UsageError(subcommand + ": missing integer parameter '" + key + "'");
        return it->second;
    }
    const std::string& str(const std::string& key) const {
        const auto it = strings.find(key);
        if (it == strings.end())
            throw UsageError(subcommand + ": missing string parameter '" + key + "'");
        return it->second;
    }
    double hbar() const { return natural_units ? 1.0 : constants::hbar; }
    double newton_g() const { return natural_units ? 1.0 : constants::G; }
};

struct ScenarioResult {
    CsvTable table;  // metadata carries the full parameter echo, version, seed
    std::string summary;
    std::vector<SvgSeries> series;  // plotted when SVG emission is requested
    std::string svg_title, svg_x, svg_y;
    double wall_seconds = 0.0;  // reported on stdout only; files stay byte-stable
    bool ok = true;             // false when a verification criterion fails
};

// One entry of a subcommand's parameter schema. Keys use dashes, matching the
// long flag without the leading "--" and the key inside a config-file section.
struct ParamSpec {
    std::string key;
    char type = 'r';  // 'r' real, 'i' integer, 's' string
    double rdef = 0.0;
    long long idef = 0;
    std::string sdef;
    std::string help;
};

struct SubcommandSpec {
    std::string name;
    std::string help;
    std::vector<ParamSpec> params;
};

namespace detail {
inline ParamSpec rp(std::string key, double def, std::string help) {
    ParamSpec p;
    p.key = std::move(key);
    p.type = 'r';
    p.rdef = def;
    p.help = std::move(help);
    return p;
}
inline ParamSpec ip(std::string key, long long def, std::string help) {
    ParamSpec p;
    p.key = std::move(key);
    p.type = 'i';
    p.idef = def;
    p.help = std::move(help);
    return p;
}
inline ParamSpec sp(std::string key, std::string def, std::string help) {
    ParamSpec p;
    p.key = std::move(key);
    p.type = 's';
    p.sdef = std::move(def);
    p.help = std::move(help);
    return p;
}
}  // namespace detail

inline const std::vector<SubcommandSpec>& subcommands() {
    using detail::ip;
    using detail::rp;
    using detail::sp;
    static const std::vector<SubcommandSpec> specs = {
        {"spinbath",
         "Spin coupled to n environment spins: decoherence factor z(t)",
         {ip("n", 1000, "number of environment spins"),
          rp("g-max", 1.0, "couplings drawn uniformly from (0, g-max] rad/s"),
          rp("t-max", 5.0, "time span in seconds"),
          ip("steps", 500, "number of time steps")}},
        {"scatter",
         "Environmental scattering: coherence decay of a separated pair",
         {rp("eta", 1e20, "scatterer number density 1/m^3"),
          rp("v", 500.0, "mean scatterer speed m/s"),
          rp("sigma-t", 1e-18, "total cross section m^2"),
          rp("c-geom", 1.0, "geometric prefactor of the flux"),
          rp("lambda-env", 1e-9, "environment resolution length m"),
          rp("separation", 1e-6, "branch separation m"),
          rp("t-max", 1e-4, "time span s"),
          ip("steps", 400, "number of time steps")}},
        {"pendulum",
         "Damped gram-scale pendulum: decoherence vs relaxation",
         {sp("preset", "", "experiment preset name (see `presets`)"),
          rp("mass", 1e-3, "bob mass kg"),
          rp("period", 1.0, "oscillation period s"),
          rp("gamma", 0.1, "amplitude damping rate 1/s"),
          rp("separation", 1e-6, "branch amplitude separation m"),
          rp("t-max", 60.0, "time span s"),
          ip("steps", 600, "number of time steps")}},
        {"vonneumann",
         "Pointer premeasurement and Born sampling on a spin",
         {ip("points", 33, "pointer grid size"),
          rp("spacing", 1.0, "pointer grid spacing"),
          rp("coupling", 8.0, "g*tau, pointer shift per unit eigenvalue"),
          rp("up-weight", 0.36, "|amplitude|^2 of the spin-up branch"),
          ip("draws", 5000, "number of Born samples")}},
        {"grw",
         "Spontaneous localization of a two-packet superposition (hbar = 1 study)",
         {ip("grid", 1024, "grid size, power of two"),
          rp("span", 40.0, "grid length, centered on 0"),
          rp("center1", -3.0, "first packet center"),
          rp("center2", 3.0, "second packet center"),
          rp("sigma", 0.5, "packet width"),
          rp("weight1", 0.5, "probability weight of the first packet"),
          rp("d", 0.1, "localization width"),
          rp("lam", 1.0, "hit rate per particle 1/s"),
          ip("particles", 1, "number of rigidly co-located particles"),
          rp("mass", 1.0, "particle mass"),
          rp("hbar", 1.0, "Planck constant for this dimensionless study"),
          rp("t-max", 2.0, "time span"),
          rp("dt", 0.01, "unitary step")}},
        {"diosi",
         "Gravity-weighted norm of a uniform ball mass distribution",
         {ip("points", 448, "Monte Carlo points in the ball"),
          rp("radius", 1.0, "ball radius m"),
          rp("mass", 1.0, "total mass kg"),
          rp("r0", 1e-3, "regularization radius m")}},
        {"penrose",
         "Gravitational self-energy lifetime of a displaced mass",
         {sp("preset", "droplet-10um", "experiment preset name, or empty for explicit flags"),
          rp("mass", 0.0, "lump mass kg (with empty preset)"),
          rp("displacement", 0.0, "branch separation m (with empty preset)"),
          rp("smear-radius", 0.0, "mass smearing radius m (with empty preset)")}},
        {"vanwezel",
         "Stochastic attenuation of a two-site plate state (hbar = 1 study)",
         {rp("x1", 0.125, "first site position"),
          rp("x2", 0.875, "second site position"),
          rp("plate-width", 1.0, "plate width L"),
          rp("mass", 1.0, "plate mass"),
          rp("newton-g", 1.0, "gravitational constant of the study"),
          rp("hbar", 1.0, "Planck constant of the study"),
          ip("members", 200, "ensemble members"),
          ip("steps", 400, "attenuation steps per member"),
          rp("dt", 0.02, "step length")}},
        {"doublewell",
         "WKB amplitude suppression across a rectangular barrier (hbar = 1 study)",
         {rp("height", 5.0, "maximum barrier height swept from 0"),
          rp("halfwidth", 1.5, "barrier half width"),
          rp("span", 2.0, "potential grid covers [-span, span]"),
          rp("dx", 0.01, "potential grid spacing"),
          rp("mass", 1.0, "particle mass"),
          rp("hbar", 1.0, "Planck constant of the study"),
          rp("a1", -1.0, "left well position"),
          rp("a2", 1.0, "right well position"),
          ip("sweep", 40, "number of barrier heights")}},
        {"envariance",
         "Envariance route to outcome probabilities by branch counting",
         {ip("max-total", 16, "tabulate p = m/(m+n) for all m+n up to this")}},
        {"nogo",
         "Random tolerant measurement schemes vs the linearity bound",
         {ip("schemes", 20, "number of random schemes"),
          ip("apparatus-dim", 8, "apparatus dimension, even"),
          ip("n-ready", 2, "ready states per scheme"),
          rp("window", 0.05, "pointer expectation window"),
          rp("epsilon", 0.2, "tolerance parameter of the scheme")}},
        {"pilotwave",
         "Guided trajectories of a free packet (hbar = 1 study)",
         {ip("grid", 4096, "grid size, power of two"),
          rp("span", 200.0, "grid length, centered on 0"),
          rp("center", -30.0, "packet center"),
          rp("sigma", 2.0, "packet width"),
          rp("k0", 1.0, "packet momentum"),
          rp("mass", 1.0, "particle mass"),
          rp("hbar", 1.0, "Planck constant of the study"),
          rp("t-max", 30.0, "time span"),
          rp("dt", 0.05, "integrator step"),
          ip("n-traj", 256, "ensemble size"),
          ip("stride", 20, "record every this many steps")}},
        {"doubleslit",
         "Two-packet interference on a screen after free flight",
         {sp("preset", "fullerene-720amu", "experiment preset name, or empty for explicit flags"),
          rp("mass", 0.0, "particle mass kg (with empty preset)"),
          rp("velocity", 0.0, "beam speed m/s (with empty preset)"),
          rp("slit-sep", 0.0, "slit separation m (with empty preset)"),
          rp("slit-width", 0.0, "slit width m (with empty preset)"),
          rp("flight-length", 0.0, "slit-to-screen distance m (with empty preset)"),
          rp("coherence", 1.0, "cross-term scale in [0, 1]"),
          ip("points", 1201, "screen sample count")}},
        {"presets", "List the experiment preset catalog", {}},
        {"verify",
         "Run a verification suite; one line per criterion",
         {sp("suite", "all", "criterion name or 'all'"),
          sp("cli-path", "", "path to this binary, used by the determinism criterion")}},
    };
    return specs;
}

inline const SubcommandSpec& subcommand_spec(const std::string& name) {
    for (const SubcommandSpec& s : subcommands())
        if (s.name == name) return s;
    throw UsageError("unknown subcommand '" + name + "'");
}

// Schema defaults; flag and config-file values overwrite these before run().
inline RunConfig defaults_for(const std::string& name) {
    const SubcommandSpec& spec = subcommand_spec(name);
    RunConfig cfg;
    cfg.subcommand = name;
    for (const ParamSpec& p : spec.params) {
        if (p.type == 'r') cfg.reals[p.key] = p.rdef;
        else if (p.type == 'i') cfg.ints[p.key] = p.idef;
        else cfg.strings[p.key] = p.sdef;
    }
    return cfg;
}

namespace detail {

constexpr double kPi = 3.14159265358979323846;

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw UsageError(msg);
}

inline std::size_t checked_grid(long long n) {
    require(n >= 2 && (n & (n - 1)) == 0, "grid size must be a power of two >= 2");
    return static_cast<std::size_t>(n);
}

inline const Preset& preset_or_usage(const std::string& name) {
    try {
        return find_preset(name);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

inline double preset_param_or_usage(const Preset& p, const std::string& key) {
    try {
        return p.param(key);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

// Common metadata block: scenario identity first, then the full parameter
// echo in schema order so every output is reproducible from its own header.
inline void echo_metadata(CsvTable& t, const RunConfig& cfg) {
    t.metadata.emplace_back("scenario", cfg.subcommand);
    t.metadata.emplace_back("version", kVersion);
    t.metadata.emplace_back("seed", std::to_string(cfg.seed));
    t.metadata.emplace_back("natural_units", cfg.natural_units ? "1" : "0");
    for (const ParamSpec& p : subcommand_spec(cfg.subcommand).params) {
        if (p.type == 'r') t.metadata.emplace_back(p.key, format_real(cfg.real(p.key)));
        else if (p.type == 'i') t.metadata.emplace_back(p.key, std::to_string(cfg.integer(p.key)));
        else t.metadata.emplace_back(p.key, cfg.str(p.key));
    }
}

inline ScenarioResult run_spinbath(const RunConfig& cfg) {
    const long long n = cfg.integer("n");
    const double g_max = cfg.real("g-max");
    const double t_max = cfg.real("t-max");
    const long long steps = cfg.integer("steps");
    require(n >= 1, "spinbath: need n >= 1");
    require(g_max > 0.0, "spinbath: need g-max > 0");
    require(t_max > 0.0 && steps >= 1, "spinbath: need t-max > 0 and steps >= 1");

    const auto p = SpinBathParams::random(cfg.seed, static_cast<std::size_t>(n), g_max);
    ScenarioResult out;
    out.table.columns = {"t", "re_z", "im_z", "abs2"};
    SvgSeries curve;
    for (long long i = 0; i <= steps; ++i) {
        const double t = t_max * static_cast<double>(i) / static_cast<double>(steps);
        const cx z = decoherence_factor(p, t);
        out.table.rows.push_back({t, z.real(), z.imag(), std::norm(z)});
        curve.x.push_back(t);
        curve.y.push_back(std::norm(z));
    }
    curve.label = "|z|^2";
    out.series.push_back(std::move(curve));
    out.svg_title = "Spin-bath decoherence factor";
    out.svg_x = "t [s]";
    out.svg_y = "|z(t)|^2";
    out.summary = "spin bath: n = " + std::to_string(n) + ", couplings in (0, " + fmt(g_max) +
                  "] rad/s\n  |z(t-max)|^2 = " + fmt(out.table.rows.back()[3]) +
                  "\n  log recurrence order = " + fmt(recurrence_order(static_cast<std::size_t>(n)));
    return out;
}

inline ScenarioResult run_scatter(const RunConfig& cfg) {
    ScatterEnvParams p;
    p.eta = cfg.real("eta");
    p.v = cfg.real("v");
    p.sigma_t = cfg.real("sigma-t");
    p.c_geom = cfg.real("c-geom");
    p.lambda_env = cfg.real("lambda-env");
    const double sep = cfg.real("separation");
    const double t_max = cfg.real("t-max");
    const long long steps = cfg.integer("steps");
    require(t_max > 0.0 && steps >= 1, "scatter: need t-max > 0 and steps >= 1");
    const double tau = decoherence_time(p);

    ScenarioResult out;
    out.table.columns = {"t", "coherence"};
    SvgSeries curve;
    for (long long i = 0; i <= steps; ++i) {
        const double t = t_max * static_cast<double>(i) / static_cast<double>(steps);
        const double f = decay_factor(p, 0.0, sep, t);
        out.table.rows.push_back({t, f});
        curve.x.push_back(t);
        curve.y.push_back(f);
    }
    curve.label = "coherence";
    out.series.push_back(std::move(curve));
    out.svg_title = "Scattering decoherence";
    out.svg_x = "t [s]";
    out.svg_y = "off-diagonal factor";
    out.summary = "scattering environment: tau_d = " + fmt(tau) + " s at full resolution\n" +
                  "  separation / resolution length = " + fmt(sep / p.lambda_env) +
                  "\n  coherence at t-max = " + fmt(out.table.rows.back()[1]);
    return out;
}

inline ScenarioResult run_pendulum(const RunConfig& cfg) {
    PendulumParams p;
    const std::string& preset_name = cfg.str("preset");
    if (!preset_name.empty()) {
        const Preset& pr = preset_or_usage(preset_name);
        p.mass = preset_param_or_usage(pr, "mass_kg");
        p.omega = 2.0 * kPi / preset_param_or_usage(pr, "period_s");
        p.gamma = preset_param_or_usage(pr, "damping_rate_per_s");
        p.x02 = preset_param_or_usage(pr, "separation_m");
    } else {
        p.mass = cfg.real("mass");
        require(cfg.real("period") > 0.0, "pendulum: need period > 0");
        p.omega = 2.0 * kPi / cfg.real("period");
        p.gamma = cfg.real("gamma");
        p.x02 = cfg.real("separation");
    }
    p.x01 = 0.0;
    p.hbar = cfg.hbar();
    const double t_max = cfg.real("t-max");
    const long long steps = cfg.integer("steps");
    require(t_max > 0.0 && steps >= 1, "pendulum: need t-max > 0 and steps >= 1");
    const DecoherenceRatio ratio = decoherence_ratio(p);

    ScenarioResult out;
    out.table.columns = {"t", "log_abs_r", "abs_r"};
    SvgSeries curve;
    for (long long i = 0; i <= steps; ++i) {
        const double t = t_max * static_cast<double>(i) / static_cast<double>(steps);
        const auto f = pendulum_decoherence_factor(p, t);
        out.table.rows.push_back({t, f.log_magnitude, f.magnitude});
        curve.x.push_back(t);
        curve.y.push_back(f.log_magnitude);
    }
    curve.label = "ln |r|";
    out.series.push_back(std::move(curve));
    out.svg_title = "Pendulum branch coherence";
    out.svg_x = "t [s]";
    out.svg_y = "ln |r(t)|";
    out.summary = "damped pendulum: K = " + fmt(ratio.k) +
                  "\n  tau_d_over_tau = " + fmt(ratio.tau_d_over_tau) +
                  "\n  ln |r| at t-max = " + fmt(out.table.rows.back()[1]);
    return out;
}

inline ScenarioResult run_vonneumann(const RunConfig& cfg) {
    const long long points = cfg.integer("points");
    const double spacing = cfg.real("spacing");
    const double coupling = cfg.real("coupling");
    const double w = cfg.real("up-weight");
    const long long draws = cfg.integer("draws");
    require(points >= 3, "vonneumann: need points >= 3");
    require(spacing > 0.0, "vonneumann: need spacing > 0");
    require(w >= 0.0 && w <= 1.0, "vonneumann: up-weight must lie in [0, 1]");
    require(draws >= 0, "vonneumann: need draws >= 0");

    const FactorShape spin_shape({2});
    Eigen::MatrixXcd sz = Eigen::MatrixXcd::Zero(2, 2);
    sz(0, 0) = 1.0;
    sz(1, 1) = -1.0;
    const StateVector spin({cx(std::sqrt(w), 0.0), cx(std::sqrt(1.0 - w), 0.0)}, spin_shape);

    PointerApparatus app;
    app.num_points = static_cast<std::size_t>(points);
    app.ready_index = static_cast<std::size_t>(points / 2);
    app.spacing = spacing;
    app.x_first = -static_cast<double>(app.ready_index) * spacing;
    app.coupling = coupling;

    const StateVector joint = premeasure(spin, app, Operator::whole(sz, spin_shape));
    Eigen::MatrixXcd xop = Eigen::MatrixXcd::Zero(points, points);
    for (long long i = 0; i < points; ++i) xop(i, i) = app.position(static_cast<std::size_t>(i));
    const Operator pointer_obs = Operator::on_factor(xop, 1, joint.shape());
    const auto dist = outcome_distribution(joint, pointer_obs);

    std::map<long long, long long> counts;  // keyed by grid index to stay exact
    auto g = substream(cfg.seed, 0);
    for (long long i = 0; i < draws; ++i) {
        const auto rec = born_sample(joint, pointer_obs, g);
        counts[std::llround((rec.eigenvalue - app.x_first) / spacing)] += 1;
    }

    ScenarioResult out;
    out.table.columns = {"x_pointer", "probability", "frequency"};
    SvgSeries curve;
    for (const auto& [x, prob] : dist) {
        const long long idx = std::llround((x - app.x_first) / spacing);
        const auto it = counts.find(idx);
        const double freq =
            draws > 0 && it != counts.end()
                ? static_cast<double>(it->second) / static_cast<double>(draws)
                : 0.0;
        out.table.rows.push_back({x, prob, freq});
        curve.x.push_back(x);
        curve.y.push_back(prob);
    }
    curve.label = "probability";
    out.series.push_back(std::move(curve));
    out.svg_title = "Pointer outcome distribution";
    out.svg_x = "pointer position";
    out.svg_y = "probability";

    double p_up_drawn = 0.0;
    const double up_pos = app.ready_position() + coupling;
    for (const auto& r : out.table.rows)
        if (std::abs(r[0] - up_pos) < 0.5 * spacing) p_up_drawn = r[2];
    out.summary = "pointer measurement: P(up) = " + fmt(w) + ", P(down) = " + fmt(1.0 - w) +
                  "\n  sampled frequency at the up position = " + fmt(p_up_drawn) + " over " +
                  std::to_string(draws) + " draws";
    return out;
}

inline ScenarioResult run_grw(const RunConfig& cfg) {
    const std::size_t n = checked_grid(cfg.integer("grid"));
    const double span = cfg.real("span");
    require(span > 0.0, "grw: need span > 0");
    const double c1 = cfg.real("center1"), c2 = cfg.real("center2");
    const double sigma = cfg.real("sigma");
    const double w1 = cfg.real("weight1");
    require(w1 >= 0.0 && w1 <= 1.0, "grw: weight1 must lie in [0, 1]");
    GRWParams gp;
    gp.d = cfg.real("d");
    gp.lam = cfg.real("lam");
    gp.n_particles = static_cast<std::size_t>(cfg.integer("particles"));
    const double mass = cfg.real("mass");
    const double hbar = cfg.natural_units ? 1.0 : cfg.real("hbar");
    const double t_max = cfg.real("t-max"), dt = cfg.real("dt");

    const double dx = span / static_cast<double>(n);
    const Wavefunction1D g1 = gaussian_packet(n, -span / 2.0, dx, c1, sigma);
    const Wavefunction1D g2 = gaussian_packet(n, -span / 2.0, dx, c2, sigma);
    Wavefunction1D psi0 = g1;
    for (std::size_t i = 0; i < n; ++i)
        psi0.amps[i] = std::sqrt(w1) * g1.amps[i] + std::sqrt(1.0 - w1) * g2.amps[i];
    psi0.normalize();

    auto g = substream(cfg.seed, 0);
    const auto run = grw_trajectory(psi0, gp, mass, t_max, dt, g, hbar);

    ScenarioResult out;
    out.table.columns = {"x", "abs2_initial", "abs2_final"};
    SvgSeries before, after;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = psi0.position(i);
        out.table.rows.push_back({x, std::norm(psi0.amps[i]), std::norm(run.psi.amps[i])});
        before.x.push_back(x);
        before.y.push_back(std::norm(psi0.amps[i]));
        after.x.push_back(x);
        after.y.push_back(std::norm(run.psi.amps[i]));
    }
    before.label = "initial";
    after.label = "final";
    after.color = "#c23b22";
    out.series = {std::move(before), std::move(after)};
    out.svg_title = "Spontaneous localization";
    out.svg_x = "x";
    out.svg_y = "|psi|^2";

    double low_mass = 0.0;
    const double mid = 0.5 * (c1 + c2);
    for (std::size_t i = 0; i < n; ++i)
        if (run.psi.position(i) < mid) low_mass += std::norm(run.psi.amps[i]);
    low_mass *= dx;
    out.summary = "localization events: " + std::to_string(run.events.size());
    for (std::size_t k = 0; k < run.events.size() && k < 5; ++k)
        out.summary += "\n  hit at t = " + fmt(run.events[k].t) + ", center = " +
                       fmt(run.events[k].center);
    if (run.events.size() > 5) out.summary += "\n  ...";
    out.summary += "\n  final weight left of midpoint = " + fmt(low_mass);
    return out;
}

inline ScenarioResult run_diosi(const RunConfig& cfg) {
    const long long n = cfg.integer("points");
    const double radius = cfg.real("radius");
    const double mass = cfg.real("mass");
    const double r0 = cfg.real("r0");
    require(n >= 2, "diosi: need points >= 2");
    require(radius > 0.0 && mass > 0.0 && r0 > 0.0,
            "diosi: radius, mass, r0 must be positive");
    const double G = cfg.newton_g();

    auto g = substream(cfg.seed, 0);
    MassDensity cloud;
    for (long long i = 0; i < n; ++i) {
        double v[3];
        double n2 = 0.0;
        for (double& c : v) {
            c = normal_unit(g);
            n2 += c * c;
        }
        const double r = radius * std::cbrt(uniform_unit(g)) / std::sqrt(n2);
        cloud.points.push_back({r * v[0], r * v[1], r * v[2]});
        cloud.weights.push_back(mass / static_cast<double>(n));
    }

    ScenarioResult out;
    out.table.columns = {"r0", "self_energy_norm"};
    SvgSeries curve;
    double at_r0 = 0.0;
    for (double scale : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        const double norm = diosi_norm(cloud, r0 * scale, G);
        if (scale == 1.0) at_r0 = norm;
        out.table.rows.push_back({r0 * scale, norm});
        curve.x.push_back(r0 * scale);
        curve.y.push_back(norm);
    }
    curve.label = "norm";
    out.series.push_back(std::move(curve));
    out.svg_title = "Gravity-weighted self-energy vs regularization";
    out.svg_x = "r0 [m]";
    out.svg_y = "norm [J]";

    const double closed = 1.2 * G * mass * mass / radius;
    out.summary = "uniform ball: sampled norm = " + fmt(at_r0) + " J at r0 = " + fmt(r0) +
                  "\n  closed form (6/5) G m^2 / R = " + fmt(closed) +
                  "\n  relative deviation = " + fmt(std::abs(at_r0 / closed - 1.0));
    return out;
}

inline ScenarioResult run_penrose(const RunConfig& cfg) {
    double mass, displacement, smear;
    const std::string& preset_name = cfg.str("preset");
    if (!preset_name.empty()) {
        const Preset& pr = preset_or_usage(preset_name);
        if (std::any_of(pr.params.begin(), pr.params.end(),
                        [](const auto& kv) { return kv.first == "radius_m"; })) {
            const double r = preset_param_or_usage(pr, "radius_m");
            mass = preset_param_or_usage(pr, "density_kg_m3") * 4.0 / 3.0 * kPi * r * r * r;
        } else {
            mass = preset_param_or_usage(pr, "mass_kg");
        }
        displacement = preset_param_or_usage(pr, "displacement_m");
        smear = preset_param_or_usage(pr, "smear_radius_m");
    } else {
        mass = cfg.real("mass");
        displacement = cfg.real("displacement");
        smear = cfg.real("smear-radius");
    }
    require(mass > 0.0 && displacement > 0.0 && smear > 0.0,
            "penrose: mass, displacement, smear-radius must be positive "
            "(give --preset or all three flags)");

    const MassDensity here{{{0.0, 0.0, 0.0}}, {mass}};
    const MassDensity there{{{displacement, 0.0, 0.0}}, {mass}};

    ScenarioResult out;
    out.table.columns = {"smear_radius", "delta_e", "tau"};
    SvgSeries curve;
    PenroseResult center{};
    for (double scale : {0.5, 1.0, 2.0}) {
        const PenroseResult res =
            penrose_lifetime(here, there, smear * scale, cfg.newton_g(), cfg.hbar());
        if (scale == 1.0) center = res;
        out.table.rows.push_back({smear * scale, res.delta_e, res.tau});
        curve.x.push_back(smear * scale);
        curve.y.push_back(std::log10(res.tau));
    }
    curve.label = "log10 tau";
    out.series.push_back(std::move(curve));
    out.svg_title = "Self-energy lifetime vs smearing radius";
    out.svg_x = "r0 [m]";
    out.svg_y = "log10 tau [s]";

    out.summary = "superposition lifetime: delta_e = " + fmt(center.delta_e) + " J, tau = " +
                  fmt(center.tau) + " s\n  mass = " + fmt(mass) + " kg, displacement = " +
                  fmt(displacement) + " m, smear radius = " + fmt(smear) + " m\n  tau at r0/2 = " +
                  fmt(center.tau_r0_half) + " s, at 2 r0 = " + fmt(center.tau_r0_double) + " s";
    return out;
}

inline ScenarioResult run_vanwezel(const RunConfig& cfg) {
    VanWezelParams p;
    p.mass = cfg.real("mass");
    p.plate_width = cfg.real("plate-width");
    p.newton_g = cfg.real("newton-g");
    p.hbar = cfg.natural_units ? 1.0 : cfg.real("hbar");
    p.kinetic = false;  // two-site study: the attenuation term alone
    const double x1 = cfg.real("x1"), x2 = cfg.real("x2");
    require(x1 < x2, "vanwezel: need x1 < x2");
    const long long members = cfg.integer("members");
    const long long steps = cfg.integer("steps");
    const double dt = cfg.real("dt");
    require(members >= 1 && steps >= 1, "vanwezel: need members >= 1 and steps >= 1");
    require(dt > 0.0, "vanwezel: need dt > 0");

    Wavefunction1D psi0;
    psi0.x_first = x1;
    psi0.dx = x2 - x1;
    const double amp = 1.0 / std::sqrt(2.0 * psi0.dx);
    psi0.amps = {cx(amp, 0.0), cx(amp, 0.0)};

    std::vector<cx> coh(static_cast<std::size_t>(steps) + 1, cx(0.0, 0.0));
    const cx off0 = psi0.amps[0] * std::conj(psi0.amps[1]);
    for (long long m = 0; m < members; ++m) {
        auto g = substream(cfg.seed, static_cast<std::uint64_t>(m));
        Wavefunction1D psi = psi0;
        coh[0] += cx(1.0, 0.0);
        for (long long s = 0; s < steps; ++s) {
            psi = van_wezel_step(psi, p, uniform_unit(g), dt);
            coh[static_cast<std::size_t>(s) + 1] += psi.amps[0] * std::conj(psi.amps[1]) / off0;
        }
    }
    for (cx& c : coh) c /= static_cast<double>(members);

    // Exact single-step ensemble average over the uniform center draw.
    const double kappa = p.kappa();
    const int cells = 200;
    double f_step = 0.0;
    for (int i = 0; i <= cells; ++i) {
        const double xi = static_cast<double>(i) / cells;
        const double wgt = (i == 0 || i == cells) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        const double s2 = (x1 - xi) * (x1 - xi) + (x2 - xi) * (x2 - xi);
        f_step += wgt * std::exp(-kappa * dt * s2);
    }
    f_step /= 3.0 * cells;

    ScenarioResult out;
    out.table.columns = {"t", "re_coherence", "im_coherence", "model"};
    SvgSeries mean_curve, model_curve;
    for (std::size_t s = 0; s < coh.size(); ++s) {
        const double t = dt * static_cast<double>(s);
        const double model = std::pow(f_step, static_cast<double>(s));
        out.table.rows.push_back({t, coh[s].real(), coh[s].imag(), model});
        mean_curve.x.push_back(t);
        mean_curve.y.push_back(coh[s].real());
        model_curve.x.push_back(t);
        model_curve.y.push_back(model);
    }
    mean_curve.label = "ensemble mean";
    model_curve.label = "averaged step model";
    model_curve.color = "#c23b22";
    out.series = {std::move(mean_curve), std::move(model_curve)};
    out.svg_title = "Two-site coherence under stochastic attenuation";
    out.svg_x = "t";
    out.svg_y = "Re coherence";

    const double rate = -std::log(std::abs(coh.back())) / (dt * static_cast<double>(steps));
    out.summary = "stochastic attenuation: kappa = " + fmt(kappa) + "\n  measured decay rate = " +
                  fmt(rate) + ", averaged step model rate = " + fmt(-std::log(f_step) / dt) +
                  "\n  two-level estimate kappa (x2 - x1)^2 = " +
                  fmt(kappa * (x2 - x1) * (x2 - x1));
    return out;
}

inline ScenarioResult run_doublewell(const RunConfig& cfg) {
    const double height = cfg.real("height");
    const double halfwidth = cfg.real("halfwidth");
    const double span = cfg.real("span");
    const double dx = cfg.real("dx");
    const double mass = cfg.real("mass");
    const double hbar = cfg.natural_units ? 1.0 : cfg.real("hbar");
    const double a1 = cfg.real("a1"), a2 = cfg.real("a2");
    const long long sweep = cfg.integer("sweep");
    require(height >= 0.0 && halfwidth > 0.0, "doublewell: need height >= 0 and halfwidth > 0");
    require(span > 0.0 && dx > 0.0 && span / dx >= 2.0, "doublewell: bad grid");
    require(sweep >= 1, "doublewell: need sweep >= 1");

    const std::size_t cells = static_cast<std::size_t>(std::lround(2.0 * span / dx)) + 1;
    PotentialProfile profile{-span, dx, std::vector<double>(cells, 0.0)};

    ScenarioResult out;
    out.table.columns = {"barrier_height", "ratio", "log10_ratio"};
    SvgSeries curve;
    double final_ratio = 1.0;
    for (long long i = 0; i <= sweep; ++i) {
        const double h = height * static_cast<double>(i) / static_cast<double>(sweep);
        for (std::size_t c = 0; c < cells; ++c)
            profile.values[c] = std::abs(profile.position(c)) <= halfwidth ? h : 0.0;
        const double ratio = double_well_ratio(profile, mass, a1, a2, hbar);
        final_ratio = ratio;
        out.table.rows.push_back({h, ratio, std::log10(std::max(ratio, 1e-300))});
        curve.x.push_back(h);
        curve.y.push_back(std::log10(std::max(ratio, 1e-300)));
    }
    curve.label = "log10 ratio";
    out.series.push_back(std::move(curve));
    out.svg_title = "WKB suppression across a rectangular barrier";
    out.svg_x = "barrier height";
    out.svg_y = "log10 amplitude ratio";

    out.summary = "rectangular barrier sweep: ratio at height " + fmt(height) + " is " +
                  fmt(final_ratio) + "\n  exact exponent -sqrt(2 m V) * width / hbar = " +
                  fmt(-std::sqrt(2.0 * mass * height) *
                      (std::min(a2, halfwidth) - std::max(a1, -halfwidth)) / hbar);
    return out;
}

inline ScenarioResult run_envariance(const RunConfig& cfg) {
    const long long max_total = cfg.integer("max-total");
    require(max_total >= 2 && max_total <= 64, "envariance: max-total must lie in [2, 64]");

    SchmidtPair s;
    const double inv = 1.0 / std::sqrt(2.0);
    s.coefficients = {cx(inv, 0.0), std::polar(inv, 0.3)};
    s.system_labels = {0, 1};
    s.env_labels = {0, 1};
    const ChainReport chain = equal_prob_chain(s);

    ScenarioResult out;
    out.table.columns = {"m", "n", "p_num", "p_den", "p"};
    for (long long total = 2; total <= max_total; ++total)
        for (long long m = 1; m < total; ++m) {
            const Rational p = born_from_counting(static_cast<int>(m), static_cast<int>(total - m));
            out.table.rows.push_back({static_cast<double>(m), static_cast<double>(total - m),
                                      static_cast<double>(p.num), static_cast<double>(p.den),
                                      static_cast<double>(p.num) / static_cast<double>(p.den)});
        }
    out.summary = std::string("equal-coefficient chain: ") +
                  (chain.applies ? "applies" : "does not apply") + ", p_plus = " +
                  fmt(chain.p_plus) + ", max residual = " + fmt(chain.max_residual) +
                  "\n  branch counting tabulated for " + std::to_string(out.table.rows.size()) +
                  " (m, n) pairs: p = m / (m + n) exactly";
    return out;
}

inline ScenarioResult run_nogo(const RunConfig& cfg) {
    const long long schemes = cfg.integer("schemes");
    const long long dim = cfg.integer("apparatus-dim");
    const long long n_ready = cfg.integer("n-ready");
    const double window = cfg.real("window");
    const double epsilon = cfg.real("epsilon");
    require(schemes >= 1, "nogo: need schemes >= 1");
    require(dim >= 2 && dim % 2 == 0, "nogo: apparatus-dim must be even and >= 2");
    require(n_ready >= 1 && n_ready <= dim, "nogo: need 1 <= n-ready <= apparatus-dim");

    ScenarioResult out;
    out.table.columns = {"scheme", "distance", "max_epsilon", "linearity_residual",
                         "bound_violated"};
    SvgSeries curve, bound;
    double worst = 0.0;
    long long violated = 0;
    for (long long t = 0; t < schemes; ++t) {
        auto g = substream(cfg.seed, static_cast<std::uint64_t>(t));
        const TolerantScheme s = make_random_scheme(static_cast<std::size_t>(dim),
                                                    static_cast<std::size_t>(n_ready), g, window,
                                                    epsilon);
        const WitnessReport rep =
            impossibility_witness(s, static_cast<std::size_t>(t) % s.ready_states.size());
        worst = std::max(worst, rep.distance);
        violated += rep.bound_violated ? 1 : 0;
        out.table.rows.push_back({static_cast<double>(t), rep.distance, rep.max_epsilon,
                                  rep.linearity_residual, rep.bound_violated ? 1.0 : 0.0});
        curve.x.push_back(static_cast<double>(t));
        curve.y.push_back(rep.distance);
        bound.x.push_back(static_cast<double>(t));
        bound.y.push_back(1.0);
    }
    curve.label = "witness distance";
    bound.label = "distance ceiling";
    bound.color = "#c23b22";
    out.series = {std::move(curve), std::move(bound)};
    out.svg_title = "Calibrated schemes vs the linearity bound";
    out.svg_x = "scheme";
    out.svg_y = "distance";

    out.summary = "random calibrated schemes: " + std::to_string(violated) + "/" +
                  std::to_string(schemes) + " certified (distance <= 1)\n  max distance = " +
                  fmt(worst) + " (superposition input cannot reach a definite reading)";
    return out;
}

inline ScenarioResult run_pilotwave(const RunConfig& cfg) {
    const std::size_t n = checked_grid(cfg.integer("grid"));
    const double span = cfg.real("span");
    require(span > 0.0, "pilotwave: need span > 0");
    const double center = cfg.real("center");
    const double sigma = cfg.real("sigma");
    const double k0 = cfg.real("k0");
    const double mass = cfg.real("mass");
    const double hbar = cfg.natural_units ? 1.0 : cfg.real("hbar");
    const double t_max = cfg.real("t-max"), dt = cfg.real("dt");
    const long long n_traj = cfg.integer("n-traj");
    const long long stride = cfg.integer("stride");
    require(n_traj >= 1 && stride >= 1, "pilotwave: need n-traj >= 1 and stride >= 1");

    const Wavefunction1D psi0 =
        gaussian_packet(n, -span / 2.0, span / static_cast<double>(n), center, sigma, k0);
    auto g = substream(cfg.seed, 0);
    const EnsembleResult res = evolve_trajectories(psi0, mass, t_max, dt,
                                                   static_cast<std::size_t>(n_traj), g, hbar,
                                                   static_cast<std::size_t>(stride));

    ScenarioResult out;
    out.table.metadata.emplace_back("node_excluded", std::to_string(res.node_excluded));
    out.table.columns = {"traj", "t", "x"};
    for (std::size_t i = 0; i < res.trajectories.size(); ++i)
        for (std::size_t r = 0; r < res.trajectories[i].times.size(); ++r)
            out.table.rows.push_back({static_cast<double>(i), res.trajectories[i].times[r],
                                      res.trajectories[i].positions[r]});

    const std::size_t shown = std::min<std::size_t>(res.trajectories.size(), 24);
    for (std::size_t i = 0; i < shown; ++i) {
        SvgSeries fan;
        fan.x = res.trajectories[i].times;
        fan.y = res.trajectories[i].positions;
        out.series.push_back(std::move(fan));
    }
    out.svg_title = "Guided trajectory fan";
    out.svg_x = "t";
    out.svg_y = "x";

    double mean = 0.0, sq = 0.0;
    for (const Trajectory& tr : res.trajectories) {
        mean += tr.positions.back();
        sq += tr.positions.back() * tr.positions.back();
    }
    const double count = static_cast<double>(res.trajectories.size());
    mean /= count;
    out.summary = "guided ensemble: " + std::to_string(res.trajectories.size()) +
                  " trajectories, " + std::to_string(res.node_excluded) +
                  " excluded at nodes\n  final mean = " + fmt(mean) + ", final sd = " +
                  fmt(std::sqrt(std::max(sq / count - mean * mean, 0.0)));
    return out;
}

inline ScenarioResult run_doubleslit(const RunConfig& cfg) {
    DoubleSlitParams p;
    double velocity = 0.0, flight = 0.0;
    const std::string& preset_name = cfg.str("preset");
    const double hbar = cfg.hbar();
    if (!preset_name.empty()) {
        const Preset& pr = preset_or_usage(preset_name);
        p.mass = preset_param_or_usage(pr, "mass_kg");
        p.packet_sep = preset_param_or_usage(pr, "slit_separation_m");
        p.packet_width = 0.5 * preset_param_or_usage(pr, "slit_width_m");
        flight = preset_param_or_usage(pr, "flight_length_m");
        const bool has_velocity = std::any_of(pr.params.begin(), pr.params.end(),
                                              [](const auto& kv) { return kv.first == "velocity_m_s"; });
        velocity = has_velocity
                       ? preset_param_or_usage(pr, "velocity_m_s")
                       : constants::h /
                             (p.mass * preset_param_or_usage(pr, "de_broglie_wavelength_m"));
    } else {
        p.mass = cfg.real("mass");
        p.packet_sep = cfg.real("slit-sep");
        p.packet_width = 0.5 * cfg.real("slit-width");
        velocity = cfg.real("velocity");
        flight = cfg.real("flight-length");
    }
    require(p.mass > 0.0 && p.packet_sep > 0.0 && p.packet_width > 0.0 && velocity > 0.0 &&
                flight > 0.0,
            "doubleslit: mass, slit-sep, slit-width, velocity, flight-length must be positive "
            "(give --preset or explicit flags)");
    p.t = flight / velocity;
    p.coherence = cfg.real("coherence");
    p.hbar = hbar;
    const long long points = cfg.integer("points");
    require(points >= 3, "doubleslit: need points >= 3");

    const IntensityProfile profile = double_slit_pattern(p, static_cast<std::size_t>(points));
    const double visibility = fringe_visibility(profile);

    ScenarioResult out;
    out.table.columns = {"x", "intensity", "envelope"};
    SvgSeries pattern, envelope;
    for (std::size_t i = 0; i < profile.intensity.size(); ++i) {
        const double x = profile.position(i);
        out.table.rows.push_back({x, profile.intensity[i], profile.envelope[i]});
        pattern.x.push_back(x);
        pattern.y.push_back(profile.intensity[i]);
        envelope.x.push_back(x);
        envelope.y.push_back(profile.envelope[i]);
    }
    pattern.label = "intensity";
    envelope.label = "incoherent envelope";
    envelope.color = "#c23b22";
    out.series = {std::move(pattern), std::move(envelope)};
    out.svg_title = "Matter-wave interference on the screen";
    out.svg_x = "x [m]";
    out.svg_y = "intensity";

    const double lambda = constants::h / (p.mass * velocity);
    out.summary = "matter-wave interference: de Broglie wavelength = " + fmt(lambda) + " m\n" +
                  "  flight time = " + fmt(p.t) + " s, fringe spacing = " +
                  fmt(constants::h * p.t / (p.mass * p.packet_sep)) + " m\n  visibility = " +
                  fmt(visibility) + " at coherence " + fmt(p.coherence);
    return out;
}

inline ScenarioResult run_presets(const RunConfig&) {
    ScenarioResult out;
    for (const Preset& p : preset_catalog()) {
        if (!out.summary.empty()) out.summary += "\n";
        out.summary += p.name + "\n  " + p.description + "\n  source: " + p.source;
        for (const auto& [key, value] : p.params)
            out.summary += "\n    " + key + " = " + fmt(value);
    }
    return out;
}

inline ScenarioResult run_verify(const RunConfig& cfg) {
    std::vector<int> ids;
    try {
        ids = verify::suite_ids(cfg.str("suite"));
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    ScenarioResult out;
    out.table.columns = {"id", "observed", "expected", "tolerance", "pass"};
    int passed = 0;
    for (int id : ids) {
        const verify::CriterionResult r = verify::run_criterion(id, cfg.str("cli-path"));
        out.table.rows.push_back({static_cast<double>(r.id), r.observed, r.expected, r.tolerance,
                                  r.pass ? 1.0 : 0.0});
        if (!out.summary.empty()) out.summary += "\n";
        out.summary += verify::format_line(r);
        passed += r.pass ? 1 : 0;
        out.ok = out.ok && r.pass;
    }
    out.summary += "\n" + std::to_string(passed) + "/" + std::to_string(ids.size()) +
                   " criteria passed";
    return out;
}

}  // namespace detail

// Dispatch on the subcommand, time the scenario, and stamp the metadata echo.
inline ScenarioResult run(const RunConfig& cfg) {
    subcommand_spec(cfg.subcommand);  // unknown name: usage error
    using Runner = ScenarioResult (*)(const RunConfig&);
    static const std::map<std::string, Runner> runners = {
        {"spinbath", detail::run_spinbath},   {"scatter", detail::run_scatter},
        {"pendulum", detail::run_pendulum},   {"vonneumann", detail::run_vonneumann},
        {"grw", detail::run_grw},             {"diosi", detail::run_diosi},
        {"penrose", detail::run_penrose},     {"vanwezel", detail::run_vanwezel},
        {"doublewell", detail::run_doublewell}, {"envariance", detail::run_envariance},
        {"nogo", detail::run_nogo},           {"pilotwave", detail::run_pilotwave},
        {"doubleslit", detail::run_doubleslit}, {"presets", detail::run_presets},
        {"verify", detail::run_verify},
    };
    const auto t0 = std::chrono::steady_clock::now();
    ScenarioResult out = runners.at(cfg.subcommand)(cfg);
    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!out.table.columns.empty()) {
        CsvTable stamped;
        detail::echo_metadata(stamped, cfg);
        for (auto& kv : out.table.metadata) stamped.metadata.push_back(std::move(kv));
        stamped.columns = std::move(out.table.columns);
        stamped.rows = std::move(out.table.rows);
        out.table = std::move(stamped);
    }
    return out;
}

}  // namespace decolab::cli
