// wqed: command-line front end. Each subcommand writes <name>.csv and a JSON
// sidecar <name>.json into the output directory (--out, else $WQED_OUTPUT_DIR,
// else ./out).
#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "cli.hpp"
#include "wqed/errors.hpp"

using namespace wqed;
using namespace wqed::cli;

namespace {

struct SystemFlags {
    std::string config;
    std::string geometry;
    std::optional<int> n;
    std::optional<double> omega0;
    std::string k0L, k0a;
    std::string drive;
    std::optional<double> detuning, transmission;
    bool non_markovian = false;
    std::string out, name;

    void attach(CLI::App* app) {
        app->add_option("--config", config, "key = value configuration file");
        app->add_option("--geometry", geometry, "infinite or semi-infinite");
        app->add_option("--n", n, "number of qubits");
        app->add_option("--omega0", omega0, "qubit frequency in units of Gamma");
        app->add_option("--k0L", k0L, "qubit-qubit phase, e.g. 0.5pi or pi/4");
        app->add_option("--k0a", k0a, "qubit-mirror phase, e.g. 0.25pi");
        app->add_option("--drive", drive, "resonant, detuned or target_transmission");
        app->add_option("--detuning", detuning, "E/2 - omega0 in units of Gamma (implies detuned)");
        app->add_option("--transmission", transmission, "target |t|^2 (implies target_transmission)");
        app->add_flag("--non-markovian", non_markovian, "record non-Markovian phases (two-photon parts stay Markovian)");
        app->add_option("--out", out, "output directory");
        app->add_option("--name", name, "file stem for the CSV and sidecar");
    }

    ConfigDocument document() const {
        ConfigDocument doc;
        if (!config.empty()) doc = load_config(config);
        auto& s = doc.system;
        if (!geometry.empty()) {
            if (geometry == "infinite") {
                s.geometry = Geometry::Infinite;
            } else if (geometry == "semi-infinite" || geometry == "semi") {
                s.geometry = Geometry::SemiInfinite;
            } else {
                throw ConfigError("geometry", "expected infinite or semi-infinite");
            }
        }
        if (n) s.n_qubits = *n;
        if (omega0) s.omega0 = *omega0 * s.gamma;
        if (!k0L.empty()) s.k0L = parse_phase(k0L, "k0L");
        if (!k0a.empty()) s.k0a = parse_phase(k0a, "k0a");
        if (non_markovian) s.markovian = false;
        if (detuning) doc.drive = Detuned{*detuning};
        if (transmission) doc.drive = TargetTransmission{*transmission};
        if (drive == "resonant") {
            doc.drive = Resonant{};
        } else if (drive == "detuned" && !detuning) {
            doc.drive = Detuned{0.0};
        } else if (drive == "target_transmission" && !transmission) {
            throw ConfigError("drive", "target_transmission needs --transmission");
        } else if (!drive.empty() && drive != "detuned" && drive != "target_transmission") {
            throw ConfigError("drive", "expected resonant, detuned or target_transmission");
        }
        // round trip through the canonical text validates every field
        return config_from_text(config_text(doc));
    }
};

void print_summary(const json& side) {
    std::cout << side.at("name").get<std::string>() << ": " << side.at("result").dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Few-photon scattering off qubit arrays on a waveguide"};
    app.require_subcommand(1);
    unsigned workers = 0;
    app.add_option("--workers", workers, "worker threads for sweeps (0: all cores)");

    struct Sub {
        CLI::App* app;
        SystemFlags flags;
    };
    std::vector<std::unique_ptr<Sub>> subs;
    auto make = [&](const std::string& name, const std::string& help) {
        subs.push_back(std::make_unique<Sub>(Sub{app.add_subcommand(name, help), {}}));
        subs.back()->flags.attach(subs.back()->app);
        return subs.back().get();
    };

    double k_min = 0.0, k_max = 0.0;
    std::size_t points = 0;
    auto* transport = make("transport", "t(k), r(k) on a frequency grid");
    auto* delay = make("delay", "transmission time delay on a frequency grid");
    for (auto* s : {transport, delay}) {
        s->app->add_option("--kmin", k_min, "grid start (units of Gamma)");
        s->app->add_option("--kmax", k_max, "grid end (units of Gamma)");
        s->app->add_option("--points", points, "grid points");
    }
    auto* poles = make("poles", "complex poles of the amplitudes");

    double w_min = 0.0, w_max = 0.0;
    auto* spectrum = make("spectrum", "incoherent two-photon power spectrum");
    spectrum->app->add_option("--wmin", w_min, "grid start (units of Gamma)");
    spectrum->app->add_option("--wmax", w_max, "grid end (units of Gamma)");
    spectrum->app->add_option("--points", points, "grid points");

    std::string channel = "reflected", preset;
    double t_max = 40.0;
    auto* g2 = make("g2", "second-order correlation g2(t)");
    g2->app->add_option("--channel", channel, "transmitted or reflected");
    g2->app->add_option("--tmax", t_max, "largest Gamma t");
    g2->app->add_option("--points", points, "time points");
    g2->app->add_option("--preset", preset, "run the g2 traces of a figure preset");

    double A = 0.1;
    auto* lang = make("langevin", "Heisenberg-Langevin regression spectrum at drive amplitude A");
    lang->app->add_option("--A", A, "coherent drive amplitude (A^2 photons per 1/Gamma)");
    lang->app->add_option("--wmin", w_min, "grid start (units of Gamma)");
    lang->app->add_option("--wmax", w_max, "grid end (units of Gamma)");
    lang->app->add_option("--points", points, "grid points");

    std::string fig_id, fig_out;
    bool list = false;
    std::optional<double> fig_tmax;
    auto* figure = app.add_subcommand("figure", "run every job of a figure preset");
    figure->add_option("id", fig_id, "fig2 ... fig15");
    figure->add_option("--out", fig_out, "output directory");
    figure->add_option("--tmax", fig_tmax, "override Gamma t range of g2 jobs");
    figure->add_flag("--list", list, "list presets");

    auto* crosscheck = app.add_subcommand("crosscheck", "scattering vs Langevin vs closed-form suites");

    std::string sidecar, replay_out;
    auto* rep = app.add_subcommand("replay", "re-run a job from its JSON sidecar");
    rep->add_option("sidecar", sidecar, "sidecar path")->required();
    rep->add_option("--out", replay_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        for (const auto& s : subs) {
            if (!s->app->parsed()) continue;
            const std::string cmd = s->app->get_name();
            Job job{cmd, s->flags.name.empty() ? cmd : s->flags.name, json::object()};
            if (cmd == "g2" && !preset.empty()) {
                auto p = figure_preset(preset);
                std::vector<Job> jobs;
                for (auto& j : p.jobs) {
                    if (j.command != "g2") continue;
                    if (!s->app->get_option("--tmax")->empty()) j.params["t_max"] = t_max;
                    if (points) j.params["points"] = points;
                    jobs.push_back(j);
                }
                for (const auto& side : run_jobs(jobs, output_dir(s->flags.out), workers)) print_summary(side);
                return kExitOk;
            }
            const auto doc = s->flags.document();
            job.params["config"] = config_text(doc);
            auto set = [&](const char* key, const char* flag, double v) {
                if (!s->app->get_option(flag)->empty()) job.params[key] = v;
            };
            if (cmd == "transport" || cmd == "delay") {
                set("k_min", "--kmin", k_min);
                set("k_max", "--kmax", k_max);
            } else if (cmd == "spectrum" || cmd == "langevin") {
                set("omega_min", "--wmin", w_min);
                set("omega_max", "--wmax", w_max);
            }
            if (cmd == "g2") {
                job.params["channel"] = channel;
                job.params["t_max"] = t_max;
            }
            if (cmd == "langevin") job.params["A"] = A;
            if (cmd != "poles" && !s->app->get_option("--points")->empty()) job.params["points"] = points;
            print_summary(run_job(job, output_dir(s->flags.out)));
            return kExitOk;
        }
        if (figure->parsed()) {
            if (list || fig_id.empty()) {
                for (const auto& id : preset_ids()) std::cout << id << "  " << figure_preset(id).description << '\n';
                return kExitOk;
            }
            auto p = figure_preset(fig_id);
            if (fig_tmax) {
                for (auto& j : p.jobs) {
                    if (j.command == "g2") j.params["t_max"] = *fig_tmax;
                }
            }
            const auto results = run_jobs(p.jobs, output_dir(fig_out), workers);
            for (const auto& side : results) print_summary(side);
            return kExitOk;
        }
        if (crosscheck->parsed()) {
            bool ok = true;
            for (const auto& r : crosscheck_suite()) {
                std::printf("%-4s %-58s %12.3e  (tol %.1e)\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.value,
                            r.tolerance);
                ok = ok && r.pass;
            }
            return ok ? kExitOk : kExitNumeric;
        }
        if (rep->parsed()) {
            print_summary(replay(sidecar, output_dir(replay_out)));
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const UnsupportedError& e) {
        std::cerr << "unsupported: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitOk;
}
