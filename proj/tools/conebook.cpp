// conebook: batch experiment runner. Each command reads a flat dotted-key
// config (file + --set overrides), runs one experiment with a deterministic
// seed, and writes <prefix>.csv, <prefix>.json, <prefix>.config and, for the
// picture-friendly commands, <prefix>.svg.

#include <cstdint>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "conebook/cone_field.hpp"
#include "conebook/config.hpp"
#include "conebook/errors.hpp"
#include "conebook/invariants.hpp"
#include "conebook/page_region.hpp"
#include "conebook/reachability.hpp"
#include "conebook/result_table.hpp"
#include "conebook/sphere_geometry.hpp"
#include "conebook/stochastic.hpp"
#include "conebook/svg.hpp"

#include "json.hpp"

namespace cb = conebook;

namespace {

constexpr const char* kVersion = "conebook 1.0.0";

const char* kConventions =
    "inner angle: full opening angle of the smallest enclosing cone "
    "(2 x axis-to-edge angle)\n"
    "reach law: radius = t * tan(theta/2); the competing edge-to-vertical "
    "reading t * tan(theta) is reported for comparison only\n"
    "reach-disk laws for probabilities: scaled = t*tan(theta/2)*mu(A), "
    "minkowski = t*tan(theta/2) + r(A); minkowski is the containment "
    "certificate and the default for upper bounds\n"
    "page measures: contact = 2 x euclidean area on the unit w-disk "
    "(total 2*pi); normalized = euclidean/pi (total 1); default normalized\n"
    "contact volume of S^3: 4*pi^2 (twice the round volume 2*pi^2)\n"
    "page variance: printed-formula value mu(P)^2/12 = 1/12; measured second "
    "central moment of the uniform unit-area disk = 1/(2*pi)\n"
    "sde constraint modes: project (minimal rotation onto the cone shell) "
    "and reject (resample up to 64 times, then project); both are "
    "approximations of an undefined constrained law\n"
    "seeds: default 0, never time-based; CONEBOOK_THREADS changes worker "
    "count but never results\n";

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

cb::Complex parse_complex(const std::string& s, const std::string& key) {
    std::istringstream in(s);
    double re = 0.0, im = 0.0;
    char comma = 0;
    if (!(in >> re)) throw cb::ConfigError("config key '" + key + "': expected 're,im'");
    if (in >> comma) {
        if (comma != ',' || !(in >> im)) {
            throw cb::ConfigError("config key '" + key + "': expected 're,im'");
        }
    }
    return cb::Complex(re, im);
}

cb::Complex get_complex(cb::Config& cfg, const std::string& key, const std::string& def) {
    return parse_complex(cfg.get_string(key, def), key);
}

cb::PageMeasure get_measure(cb::Config& cfg, const std::string& key = "measure",
                            const std::string& def = "normalized") {
    const std::string v = cfg.get_string(key, def);
    if (v == "contact") return cb::PageMeasure{cb::MeasureKind::Contact};
    if (v == "normalized") return cb::PageMeasure{cb::MeasureKind::Normalized};
    throw cb::ConfigError("config key '" + key + "': expected contact|normalized");
}

cb::QuadratureGrid get_grid(cb::Config& cfg) {
    cb::QuadratureGrid g;
    g.radial = static_cast<int>(cfg.get_int("quad.radial", g.radial));
    g.angular = static_cast<int>(cfg.get_int("quad.angular", g.angular));
    g.volume_lattice = static_cast<int>(cfg.get_int("quad.volume_lattice", g.volume_lattice));
    return g;
}

cb::ConeField get_field(cb::Config& cfg) {
    const std::string kind = cfg.get_string("field.kind", "collared");
    if (kind == "hopf_ray") return cb::hopf_ray_field();
    if (kind == "constant") {
        return cb::constant_cone_field(cfg.get_double("field.alpha0", 0.4));
    }
    if (kind == "collared") {
        return cb::collared_cone_field(cfg.get_double("field.alpha0", 0.4),
                                       cfg.get_double("field.collar_eps", 0.1));
    }
    if (kind == "dtheta_fan") return cb::dtheta_fan_field(cfg.get_double("field.span", 0.4));
    if (kind == "planar_fan") return cb::planar_fan_field(cfg.get_double("field.beta", 0.2));
    if (kind == "csv") return cb::cone_field_from_csv(cfg.get_string("field.file", ""));
    if (kind == "violation_binding") {
        return cb::violation_binding_field(cfg.get_double("field.alpha0", 0.4),
                                           cfg.get_double("field.collar_eps", 0.1));
    }
    if (kind == "violation_dtheta") {
        return cb::violation_dtheta_field(cfg.get_double("field.alpha0", 0.4),
                                          cfg.get_double("field.collar_eps", 0.1));
    }
    throw cb::ConfigError("config key 'field.kind': unknown field '" + kind + "'");
}

cb::Section get_section(cb::Config& cfg) {
    const std::string kind = cfg.get_string("section.kind", "reeb_hopf");
    if (kind == "reeb_hopf") return cb::Section::reeb_hopf();
    if (kind == "perturbed_flow") {
        return cb::Section::perturbed_flow(cfg.get_double("section.epsilon", 0.1));
    }
    throw cb::ConfigError("config key 'section.kind': expected reeb_hopf|perturbed_flow");
}

cb::PageRegion get_region(cb::Config& cfg, const std::string& prefix) {
    const std::string kind = cfg.get_string(prefix + ".kind", "disk");
    if (kind == "full") return cb::PageRegion::full();
    if (kind == "halfplane") return cb::PageRegion::halfplane();
    if (kind == "disk") {
        return cb::PageRegion::disk(get_complex(cfg, prefix + ".center", "0,0"),
                                    cfg.get_double(prefix + ".radius", 0.2));
    }
    if (kind == "annulus") {
        return cb::PageRegion::annulus(get_complex(cfg, prefix + ".center", "0,0"),
                                       cfg.get_double(prefix + ".r0", 0.1),
                                       cfg.get_double(prefix + ".r1", 0.3));
    }
    if (kind == "grid") {
        return cb::PageRegion::from_grid_file(cfg.get_string(prefix + ".file", ""));
    }
    throw cb::ConfigError("config key '" + prefix +
                          ".kind': expected disk|annulus|halfplane|grid|full");
}

// sigma(r) specification: a constant, or "a+b*r", or "a+b*r^2".
std::function<double(double)> parse_sigma(const std::string& s) {
    const char* p = s.c_str();
    char* end = nullptr;
    const double a = std::strtod(p, &end);
    if (end == p) throw cb::ConfigError("sde.sigma: cannot parse '" + s + "'");
    std::string rest(end);
    if (rest.empty()) {
        return [a](double) { return a; };
    }
    if (rest[0] != '+') throw cb::ConfigError("sde.sigma: cannot parse '" + s + "'");
    p = rest.c_str() + 1;
    const double b = std::strtod(p, &end);
    if (end == p) throw cb::ConfigError("sde.sigma: cannot parse '" + s + "'");
    const std::string tail(end);
    if (tail == "*r") return [a, b](double r) { return a + b * r; };
    if (tail == "*r^2") return [a, b](double r) { return a + b * r * r; };
    throw cb::ConfigError("sde.sigma: cannot parse '" + s + "'");
}

struct Emitter {
    std::string prefix;
    cb::Config* cfg = nullptr;
    std::uint64_t seed = 0;

    void stamp(cb::ResultTable& t, const std::string& measure) const {
        t.set_meta("tool", kVersion);
        t.set_meta("seed", std::to_string(seed));
        t.set_meta("measure", measure);
        t.set_meta("angle_convention", "full_opening");
        t.set_meta("config_hash", std::to_string(fnv1a(cfg->resolved_text())));
    }

    void write(const cb::ResultTable& t, const std::string& svg = "",
               const cb::ResultTable* extra = nullptr,
               const std::string& extra_suffix = "_growth") const {
        cb::write_file_atomic(prefix + ".csv", t.to_csv());
        cb::write_file_atomic(prefix + ".json", t.to_json());
        cb::write_file_atomic(prefix + ".config", cfg->resolved_text());
        if (extra) {
            cb::write_file_atomic(prefix + extra_suffix + ".csv", extra->to_csv());
        }
        if (!svg.empty()) cb::write_file_atomic(prefix + ".svg", svg);
    }
};

void run_reach(cb::Config& cfg, const Emitter& em) {
    const double theta = cfg.get_double("theta", cb::kPi / 2.0);
    const double t = cfg.get_double("t", 1.0);
    const int n = static_cast<int>(cfg.get_int("n", 10000));

    cb::ResultTable table({"theta", "t", "radius", "alt_radius", "mc_max_radius", "n"});
    em.stamp(table, "none");
    cb::HalfspaceReachSummary mc;
    if (n > 0) mc = cb::halfspace_reach_mc(theta, t, n, em.seed);
    table.add_row({theta, t, cb::reach_radius(t, theta),
                   theta < cb::kPi / 2.0 ? cb::reach_radius_alt(t, theta)
                                         : std::numeric_limits<double>::infinity(),
                   mc.max_radius, static_cast<long long>(n)});

    const double r = cb::reach_radius(t, theta);
    cb::SvgCanvas svg(std::max(1.2, 1.3 * r));
    svg.circle(cb::Complex(0, 0), r, "#c0392b");
    for (const auto& e : mc.endpoints) svg.dot(cb::Complex(e[0], e[1]), 1.2, "#2c3e50");
    svg.legend({{"endpoints at height t", "#2c3e50"}, {"t tan(theta/2) disk", "#c0392b"}});
    em.write(table, svg.finish());
}

void run_prob(cb::Config& cfg, const Emitter& em) {
    const cb::DiskSpec a{get_complex(cfg, "A.center", "0,0"),
                         cfg.get_double("A.radius", 0.1)};
    const cb::PageRegion b = get_region(cfg, "B");
    const double t = cfg.get_double("t", 1.0);
    const int n = static_cast<int>(cfg.get_int("n", 10000));
    const cb::PageMeasure m = get_measure(cfg);
    const std::string model_s = cfg.get_string("velocity_model", "cap");
    const cb::VelocityModel model =
        model_s == "base" ? cb::VelocityModel::UniformBase : cb::VelocityModel::UniformCap;

    cb::ConeField field = get_field(cfg);
    double theta = cfg.get_double("theta", -1.0);
    if (theta < 0.0) {
        theta = cb::integrability_max(field, 20000, em.seed).value;
    }

    cb::ResultTable table({"scenario", "law", "estimate", "ci_lo", "ci_hi", "n", "seed"});
    em.stamp(table, m.kind == cb::MeasureKind::Contact ? "contact" : "normalized");
    const long long seed_cell = static_cast<long long>(em.seed);
    table.add_row({std::string("formula"), std::string("scaled"),
                   cb::prob_formula(a, b, t, theta, m, cb::ReachLaw::Scaled), 0.0, 0.0,
                   0ll, seed_cell});
    table.add_row({std::string("formula"), std::string("minkowski"),
                   cb::prob_formula(a, b, t, theta, m, cb::ReachLaw::Minkowski), 0.0, 0.0,
                   0ll, seed_cell});
    std::vector<cb::Complex> endpoints;
    const cb::ProbMcResult mc =
        cb::prob_mc(field, a, b, t, n, em.seed, model, 1e-3, &endpoints);
    table.add_row({std::string("trajectories"), std::string("empirical"), mc.estimate,
                   mc.ci_lo, mc.ci_hi, static_cast<long long>(mc.n), seed_cell});

    cb::SvgCanvas svg;
    svg.circle(cb::Complex(0, 0), 1.0, "#888");
    const cb::SpherePoint moved = cb::hopf_flow(cb::PagePoint{0.0, a.center}.embed(), t);
    svg.circle(moved.z1, cb::reach_disk_radius(a, t, theta, cb::ReachLaw::Minkowski),
               "#c0392b");
    if (b.kind == cb::PageRegion::Kind::Disk) svg.circle(b.center, b.r1, "#27ae60");
    for (const auto& w : endpoints) svg.dot(w, 1.0, "#2c3e50");
    svg.legend({{"endpoints", "#2c3e50"},
                {"reach disk (minkowski)", "#c0392b"},
                {"target B", "#27ae60"}});
    em.write(table, svg.finish());
}

void run_invariants(cb::Config& cfg, const Emitter& em) {
    cb::ConeField field = get_field(cfg);
    const int n = static_cast<int>(cfg.get_int("invariants.n", 200000));
    const std::string vol_s = cfg.get_string("invariants.volume", "contact");
    const cb::VolumeForm vol =
        vol_s == "round" ? cb::VolumeForm::Round : cb::VolumeForm::Contact;

    const cb::MonteCarloScalar mean = cb::integrability_mean(field, n, em.seed, vol);
    const cb::MaxResult max = cb::integrability_max(field, n, em.seed);

    cb::ResultTable table({"quantity", "value", "stderr", "measure", "n", "seed"});
    em.stamp(table, vol_s);
    const long long seed_cell = static_cast<long long>(em.seed);
    table.add_row({std::string("I_m"), mean.value, mean.stderr_, vol_s,
                   static_cast<long long>(mean.n), seed_cell});
    table.add_row({std::string("I_M"), max.value, 0.0, std::string("sup"),
                   static_cast<long long>(max.n), seed_cell});
    table.add_row({std::string("contact_volume"), cb::contact_volume(), 0.0,
                   std::string("contact"), 0ll, seed_cell});
    em.write(table);
}

void run_calabi(cb::Config& cfg, const Emitter& em) {
    const cb::Section section = get_section(cfg);
    cb::PageRegion a = cb::PageRegion::full();
    if (cfg.has("A.kind")) a = get_region(cfg, "A");
    const cb::PageMeasure m = get_measure(cfg, "measure", "contact");
    const int n_max = static_cast<int>(cfg.get_int("calabi.n_max", 10));
    const double tau_cap = cfg.get_double("calabi.tau_cap", 1e6);
    const cb::QuadratureGrid g = get_grid(cfg);

    cb::ResultTable table({"quantity", "value", "stderr", "measure", "n", "seed"});
    const std::string measure_s =
        m.kind == cb::MeasureKind::Contact ? "contact" : "normalized";
    em.stamp(table, measure_s);
    table.add_row({std::string("CAL"), cb::calabi(section, a, m, tau_cap, g), 0.0,
                   measure_s, 0ll, static_cast<long long>(em.seed)});

    cb::ResultTable growth({"n", "cal_n", "cal_n_over_n"});
    em.stamp(growth, measure_s);
    for (const auto& row : cb::calabi_growth(section, a, m, n_max, tau_cap, g)) {
        growth.add_row({static_cast<long long>(row.n), row.cal_n, row.cal_n_over_n});
    }
    em.write(table, "", &growth);
}

void run_qstats(cb::Config& cfg, const Emitter& em) {
    const cb::PageMeasure m = get_measure(cfg);
    const cb::QuadratureGrid g = get_grid(cfg);
    const cb::PageStats stats = cb::page_uniform_stats(m, g);
    cb::ResultTable table({"quantity", "value", "note"});
    em.stamp(table, m.kind == cb::MeasureKind::Contact ? "contact" : "normalized");
    table.add_row({std::string("mean_re"), stats.mean.real(), std::string("")});
    table.add_row({std::string("mean_im"), stats.mean.imag(), std::string("")});
    table.add_row({std::string("variance_measured"), stats.variance,
                   std::string("second central moment, uniform unit-area disk")});
    table.add_row({std::string("variance_interval_formula"), stats.variance_interval,
                   std::string("mu(P)^2/12; differs from the disk value 1/(2 pi)")});
    em.write(table);
}

cb::SdeConfig get_sde_config(cb::Config& cfg) {
    cb::SdeConfig sc;
    sc.sigma = parse_sigma(cfg.get_string("sde.sigma", "1"));
    sc.mu3 = cfg.get_double("sde.mu3", 0.1);
    sc.step_h = cfg.get_double("sde.step_h", 1e-3);
    sc.horizon = cfg.get_double("sde.horizon", 1.0);
    const std::string mode = cfg.get_string("sde.mode", "project");
    if (mode == "project") {
        sc.mode = cb::ConstraintMode::Project;
    } else if (mode == "reject") {
        sc.mode = cb::ConstraintMode::Reject;
    } else {
        throw cb::ConfigError("config key 'sde.mode': expected project|reject");
    }
    sc.validate();
    return sc;
}

void run_sde(cb::Config& cfg, const Emitter& em) {
    const cb::SdeConfig sc = get_sde_config(cfg);
    const cb::Section section = get_section(cfg);
    const std::string model = cfg.get_string("sde.model", "halfspace");
    const int n_paths = static_cast<int>(cfg.get_int("sde.n_paths", 1000));
    cb::ResultTable table(
        {"path_id", "end_x", "end_y", "lift", "crossings", "stuck"});
    em.stamp(table, "none");
    if (model == "halfspace") {
        for (int i = 0; i < n_paths; ++i) {
            cb::RngStream rng(em.seed, static_cast<std::uint64_t>(i));
            const cb::SamplePath p =
                cb::euler_maruyama_halfspace(sc, section, cb::HalfSpaceState{}, rng);
            table.add_row({static_cast<long long>(i), p.end.x, p.end.y, p.theta_lift,
                           static_cast<long long>(p.crossings.size()), 0ll});
        }
    } else if (model == "cone") {
        cb::ConeField field = get_field(cfg);
        const cb::SpherePoint start =
            cb::PagePoint{0.0, get_complex(cfg, "sde.start", "0.3,0")}.embed();
        for (int i = 0; i < n_paths; ++i) {
            cb::RngStream rng(em.seed, static_cast<std::uint64_t>(i));
            const cb::SamplePath p =
                cb::euler_maruyama_cone(sc, field, section, start, rng, 0);
            table.add_row({static_cast<long long>(i), p.end_point.z1.real(),
                           p.end_point.z1.imag(), p.theta_lift,
                           static_cast<long long>(p.crossings.size()),
                           static_cast<long long>(p.stuck_at_binding ? 1 : 0)});
        }
    } else {
        throw cb::ConfigError("config key 'sde.model': expected halfspace|cone");
    }
    em.write(table);
}

void run_recur(cb::Config& cfg, const Emitter& em) {
    const cb::SdeConfig sc = get_sde_config(cfg);
    const cb::Section section = get_section(cfg);
    cb::ConeField field = get_field(cfg);
    const cb::Complex p0 = get_complex(cfg, "recurrence.start", "0.3,0");
    const cb::PageRegion u =
        cb::PageRegion::disk(get_complex(cfg, "recurrence.U.center", "0.3,0"),
                             cfg.get_double("recurrence.U.radius", 0.2));
    const int n_paths = static_cast<int>(cfg.get_int("recurrence.n_paths", 1000));
    const int max_returns = static_cast<int>(cfg.get_int("recurrence.max_returns", 200));

    const cb::RecurrenceReport rep = cb::recurrence_experiment(
        sc, field, section, p0, u, n_paths, max_returns, em.seed);

    cb::ResultTable table({"horizon", "hit_fraction", "trunc_mean", "median"});
    em.stamp(table, "none");
    table.set_meta("tail_slope", cb::format_double(rep.tail_slope));
    table.set_meta("constraint_mode",
                   sc.mode == cb::ConstraintMode::Project ? "project" : "reject");
    for (std::size_t i = 0; i < rep.horizons.size(); ++i) {
        table.add_row({static_cast<long long>(rep.horizons[i]), rep.hit_fraction[i],
                       rep.trunc_mean[i], rep.median});
    }

    cb::ResultTable paths({"path_id", "first_hit_n", "censored"});
    em.stamp(paths, "none");
    for (int i = 0; i < rep.n_paths; ++i) {
        const int hit = rep.first_hit[i];
        paths.add_row({static_cast<long long>(i),
                       static_cast<long long>(hit < 0 ? max_returns : hit),
                       static_cast<long long>(hit < 0 ? 1 : 0)});
    }

    cb::SvgCanvas svg(1.1);
    std::vector<cb::Complex> curve;
    curve.push_back(cb::Complex(-1.0, -1.0));
    for (std::size_t i = 0; i < rep.horizons.size(); ++i) {
        curve.push_back(cb::Complex(-1.0 + 2.0 * rep.horizons[i] / max_returns,
                                    -1.0 + 2.0 * rep.hit_fraction[i]));
    }
    svg.polyline(curve, "#2980b9", 2.0);
    svg.text(cb::Complex(-1.0, -1.08), "returns ->");
    svg.legend({{"hit fraction vs horizon", "#2980b9"}});
    em.write(table, svg.finish(), &paths, "_paths");
}

void run_check_adapted(cb::Config& cfg, const Emitter& em) {
    cb::ConeField field = get_field(cfg);
    const int samples = static_cast<int>(cfg.get_int("samples", 10000));
    const double tol = cfg.get_double("tol", 1e-9);
    const cb::AdaptednessReport rep =
        cb::check_adapted(field, [](const cb::SpherePoint& p, const cb::Vec4& v) {
            return cb::contact_form(p, v);
        }, samples, tol, em.seed);

    cb::ResultTable table({"flag", "pass", "worst", "wx1", "wy1", "wx2", "wy2"});
    em.stamp(table, "none");
    auto row = [&](const char* name, const cb::AdaptednessFlag& f) {
        const cb::Vec4 w = f.witness.ambient();
        table.add_row({std::string(name), static_cast<long long>(f.pass ? 1 : 0),
                       f.worst, w[0], w[1], w[2], w[3]});
    };
    row("binding_tangency", rep.binding_tangency);
    row("dtheta_positive", rep.dtheta_positive);
    row("alpha_positive", rep.alpha_positive);
    row("reeb_interior", rep.reeb_interior);
    em.write(table);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for cone structures on the open book of S^3"};
    app.set_version_flag("--version", kVersion);

    std::string command;
    std::string config_file;
    std::string prefix = "conebook_out";
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    bool list_conventions = false;

    app.add_option("command", command, "one of: reach prob invariants calabi qstats sde recur check-adapted");
    app.add_option("--config", config_file, "flat key=value config file");
    app.add_option("--set", overrides, "config override key=value (repeatable)");
    app.add_option("--out", prefix, "output path prefix");
    app.add_option("--seed", seed, "64-bit experiment seed");
    app.add_flag("--list-conventions", list_conventions,
                 "print fixed conventions and known discrepancy notes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (list_conventions) {
        std::cout << kConventions;
        return 0;
    }

    cb::Config cfg;
    try {
        if (!config_file.empty()) cfg.load_file(config_file);
        for (const auto& s : overrides) cfg.set_override(s);

        const Emitter em{prefix, &cfg, seed};
        if (command == "reach") {
            run_reach(cfg, em);
        } else if (command == "prob") {
            run_prob(cfg, em);
        } else if (command == "invariants") {
            run_invariants(cfg, em);
        } else if (command == "calabi") {
            run_calabi(cfg, em);
        } else if (command == "qstats") {
            run_qstats(cfg, em);
        } else if (command == "sde") {
            run_sde(cfg, em);
        } else if (command == "recur") {
            run_recur(cfg, em);
        } else if (command == "check-adapted") {
            run_check_adapted(cfg, em);
        } else if (command.empty()) {
            throw cb::ConfigError("missing command (try --help)");
        } else {
            throw cb::ConfigError("unknown command: " + command);
        }
        cfg.reject_unknown_keys();
    } catch (const cb::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        nlohmann::json j = {{"error", {{"kind", "config"}, {"message", e.what()}}}};
        cb::write_file_atomic(prefix + ".json", j.dump(2) + "\n");
        return 2;
    } catch (const cb::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        nlohmann::json j = {{"error", {{"kind", "numerical"}, {"message", e.what()}}}};
        cb::write_file_atomic(prefix + ".json", j.dump(2) + "\n");
        return 3;
    }
    return 0;
}
