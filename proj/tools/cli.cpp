#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "wqed/boundstate.hpp"
#include "wqed/errors.hpp"
#include "wqed/langevin.hpp"
#include "wqed/transport.hpp"

namespace wqed::cli {

namespace fs = std::filesystem;
using transport::Channel;

double parse_phase(const std::string& text, const std::string& field) {
    auto number = [&](const std::string& s, double fallback) {
        if (s.empty()) return fallback;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw ConfigError(field, "cannot parse phase '" + text + "'");
        }
        if (used != s.size() || !std::isfinite(v)) throw ConfigError(field, "cannot parse phase '" + text + "'");
        return v;
    };
    const auto pos = text.find("pi");
    if (pos == std::string::npos) return number(text, 0.0);
    std::string coeff = text.substr(0, pos);
    if (!coeff.empty() && coeff.back() == '*') coeff.pop_back();
    const std::string rest = text.substr(pos + 2);
    double div = 1.0;
    if (!rest.empty()) {
        if (rest.front() != '/') throw ConfigError(field, "cannot parse phase '" + text + "'");
        div = number(rest.substr(1), 0.0);
        if (div == 0.0) throw ConfigError(field, "division by zero in '" + text + "'");
    }
    return number(coeff, 1.0) * kPi / div;
}

std::string config_text(const ConfigDocument& doc) {
    std::ostringstream os;
    write_config(os, doc);
    return os.str();
}

ConfigDocument config_from_text(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

std::string config_hash(const ConfigDocument& doc) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : config_text(doc)) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

fs::path output_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("WQED_OUTPUT_DIR"); env && *env) return env;
    return "out";
}

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const fs::path& path, const std::vector<std::string>& header) : out_(path) {
        if (!out_) throw ConfigError("output", "cannot write '" + path.string() + "'");
        for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
        out_ << '\n';
    }
    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << num(values[i]);
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / (n - 1.0);
    return v;
}

json poles_json(const transport::PoleSet& ps) {
    json arr = json::array();
    for (auto z : ps.poles) arr.push_back({z.real(), z.imag()});
    return arr;
}

json tolerances_json() {
    const numerics::QuadratureSpec q;
    return {{"pole_degeneracy", numerics::kDegeneracyThreshold},
            {"quad_abs", q.abs_tol},
            {"quad_rel", q.rel_tol},
            {"linear_solve_threshold", 1e-13}};
}

std::vector<double> grid_from(const json& p, const char* lo, const char* hi, double def_lo, double def_hi,
                              std::size_t def_n) {
    const double a = p.value(lo, def_lo);
    const double b = p.value(hi, def_hi);
    const auto n = p.value("points", def_n);
    if (n < 1) throw ConfigError("points", "must be positive");
    if (!(b >= a)) throw ConfigError(hi, "grid upper bound below lower bound");
    return linspace(a, b, n);
}

Channel parse_channel(const std::string& s) {
    if (s == "transmitted" || s == "R") return Channel::Transmitted;
    if (s == "reflected" || s == "L") return Channel::Reflected;
    throw ConfigError("channel", "expected transmitted or reflected");
}

void write_sidecar(const fs::path& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw ConfigError("output", "cannot write '" + path.string() + "'");
    out << doc.dump(2) << '\n';
}

json run_transport(const ConfigDocument& doc, const json& p, const fs::path& csv) {
    const auto& c = doc.system;
    const auto grid = grid_from(p, "k_min", "k_max", c.omega0 - 10.0 * c.gamma, c.omega0 + 10.0 * c.gamma, 1001);
    CsvWriter w(csv, {"k_over_Gamma", "re_t", "im_t", "re_r", "im_r", "T", "R"});
    double worst = 0.0;
    for (double k : grid) {
        const auto s = transport::solve_single_photon(c, k);
        const cplx t = c.geometry == Geometry::Infinite ? s.t() : cplx{0.0, 0.0};
        const cplx r = s.r();
        worst = std::max(worst, std::abs(std::norm(t) + std::norm(r) - 1.0));
        w.row({k / c.gamma, t.real(), t.imag(), r.real(), r.imag(), std::norm(t), std::norm(r)});
    }
    return {{"unitarity_residual", worst}};
}

json run_poles(const ConfigDocument& doc, const json&, const fs::path& csv) {
    const auto ps = transport::poles(doc.system);
    const double g = doc.system.gamma;
    CsvWriter w(csv, {"index", "omega_tilde_over_Gamma", "minus_half_gamma_tilde_over_Gamma", "gamma_tilde_over_Gamma"});
    for (std::size_t i = 0; i < ps.poles.size(); ++i) {
        w.row({static_cast<double>(i), ps.omega_tilde(i) / g, ps.poles[i].imag() / g, ps.gamma_tilde(i) / g});
    }
    const cplx m = ps.mean();
    return {{"mean", {m.real(), m.imag()}},
            {"near_degenerate", ps.near_degenerate},
            {"most_subradiant", ps.most_subradiant()},
            {"eigen_residual", ps.eigen_residual}};
}

json run_delay(const ConfigDocument& doc, const json& p, const fs::path& csv) {
    const auto& c = doc.system;
    const auto grid = grid_from(p, "k_min", "k_max", c.omega0 - 10.0 * c.gamma, c.omega0 + 10.0 * c.gamma, 1001);
    CsvWriter w(csv, {"k_over_Gamma", "tau_Gamma"});
    for (double k : grid) w.row({k / c.gamma, transport::time_delay(c, k) * c.gamma});
    return {{"tau_at_omega0", transport::time_delay(c, c.omega0) * c.gamma}};
}

json run_spectrum(const ConfigDocument& doc, const json& p, const fs::path& csv) {
    const auto& c = doc.system;
    const double E = 2.0 * resolve_drive(c, doc.drive);
    std::vector<double> grid = boundstate::default_omega_grid(c, E);
    if (p.contains("omega_min") || p.contains("omega_max") || p.contains("points")) {
        grid = grid_from(p, "omega_min", "omega_max", grid.front(), grid.back(), grid.size());
    }
    const auto sp = boundstate::incoherent_spectrum(c, E, grid);
    CsvWriter w(csv, {"omega_over_Gamma", "S_R", "S_L", "S_total", "S_normalized"});
    const auto tot = sp.total();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        w.row({grid[i] / c.gamma, sp.S_R[i], sp.S_L[i], tot[i], sp.normalized[i]});
    }
    return {{"E", E},
            {"flux", sp.flux},
            {"flux_error", sp.flux_error},
            {"coherent_weight_R", sp.coherent_weight_R},
            {"coherent_weight_L", sp.coherent_weight_L},
            {"interference_R", sp.interference_R},
            {"interference_L", sp.interference_L},
            {"warnings", sp.warnings}};
}

json run_g2(const ConfigDocument& doc, const json& p, const fs::path& csv) {
    const auto& c = doc.system;
    const double E = 2.0 * resolve_drive(c, doc.drive);
    const Channel ch = parse_channel(p.value("channel", std::string("reflected")));
    const auto t_grid = boundstate::default_t_grid(p.value("t_max", 40.0), p.value("points", std::size_t{2000}));
    const auto tr = boundstate::g2_trace(c, E, ch, t_grid);
    CsvWriter w(csv, {"Gamma_t", "g2"});
    for (std::size_t i = 0; i < t_grid.size(); ++i) w.row({t_grid[i], tr.values[i]});
    return {{"E", E},
            {"channel", ch == Channel::Transmitted ? "transmitted" : "reflected"},
            {"g2_0", tr.values.front()},
            {"g2_last", tr.values.back()},
            {"denominator_amplitude", {tr.denominator_amplitude.real(), tr.denominator_amplitude.imag()}}};
}

json run_langevin(const ConfigDocument& doc, const json& p, const fs::path& csv) {
    const auto& c = doc.system;
    const double k = resolve_drive(c, doc.drive);
    const double A = p.value("A", 0.1);
    const auto sys = langevin::build_system(c, A, k);
    const auto grid = grid_from(p, "omega_min", "omega_max", k - 6.0 * c.gamma, k + 6.0 * c.gamma, 2001);
    const auto sp = langevin::regression_spectrum(sys, grid);
    CsvWriter w(csv, {"omega_over_Gamma", "S_R", "S_L"});
    std::size_t skipped = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (sp.skipped[i]) {
            ++skipped;
            w.row({grid[i] / c.gamma, std::nan(""), std::nan("")});
        } else {
            w.row({grid[i] / c.gamma, sp.S_R[i], sp.S_L[i]});
        }
    }
    return {{"A", A},
            {"k", k},
            {"rabi", sys.rabi},
            {"coherent_R", sp.coherent_R},
            {"coherent_L", sp.coherent_L},
            {"incoherent_R", sp.incoherent_R},
            {"incoherent_L", sp.incoherent_L},
            {"conservation_residual", sp.conservation_residual},
            {"skipped_points", skipped},
            {"warnings", sys.warnings}};
}

}  // namespace

json run_job(const Job& job, const fs::path& dir) {
    const auto doc = config_from_text(job.params.at("config").get<std::string>());
    fs::create_directories(dir);
    const fs::path csv = dir / (job.name + ".csv");
    json result;
    if (job.command == "transport") {
        result = run_transport(doc, job.params, csv);
    } else if (job.command == "poles") {
        result = run_poles(doc, job.params, csv);
    } else if (job.command == "delay") {
        result = run_delay(doc, job.params, csv);
    } else if (job.command == "spectrum") {
        result = run_spectrum(doc, job.params, csv);
    } else if (job.command == "g2") {
        result = run_g2(doc, job.params, csv);
    } else if (job.command == "langevin") {
        result = run_langevin(doc, job.params, csv);
    } else {
        throw ConfigError("command", "unknown command '" + job.command + "'");
    }
    json side{{"command", job.command},
              {"name", job.name},
              {"params", job.params},
              {"config_hash", config_hash(doc)},
              {"drive", describe(doc.drive)},
              {"result", result},
              {"tolerances", tolerances_json()}};
    side["poles"] = poles_json(transport::poles(doc.system));
    write_sidecar(dir / (job.name + ".json"), side);
    return side;
}

json replay(const fs::path& sidecar, const fs::path& dir) {
    std::ifstream in(sidecar);
    if (!in) throw ConfigError("sidecar", "cannot open '" + sidecar.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("sidecar", e.what());
    }
    Job job{doc.at("command").get<std::string>(), doc.at("name").get<std::string>(), doc.at("params")};
    return run_job(job, dir);
}

std::vector<json> run_jobs(const std::vector<Job>& jobs, const fs::path& dir, unsigned workers) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(jobs.size(), 1)));
    std::vector<json> out(jobs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex mu;
    auto work = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            try {
                out[i] = run_job(jobs[i], dir);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

// ---------------------------------------------------------------------------
// Figure presets

std::vector<double> red_side_crossings(const SystemConfig& config, double target, std::size_t count) {
    std::vector<double> out;
    const auto ps = transport::poles(config);
    double min_gamma = config.gamma;
    for (std::size_t i = 0; i < ps.poles.size(); ++i) {
        if (ps.gamma_tilde(i) > 1e-9) min_gamma = std::min(min_gamma, ps.gamma_tilde(i));
    }
    const double step = std::min(config.gamma / 10.0, 0.25 * min_gamma);
    auto f = [&](double k) { return transport::transmission_probability(config, k) - target; };
    double prev_k = config.omega0, prev = -target;
    for (int n = 1; n * step <= 50.0 * config.gamma && out.size() < count; ++n) {
        const double k = config.omega0 - n * step;
        const double v = f(k);
        if ((v >= 0.0) != (prev >= 0.0)) {
            double a = prev_k, b = k, fa = prev;
            while (std::abs(b - a) > 1e-10) {
                const double m = 0.5 * (a + b);
                const double fm = f(m);
                if ((fm < 0.0) == (fa < 0.0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            out.push_back(0.5 * (a + b));
        }
        prev_k = k;
        prev = v;
    }
    return out;
}

namespace {

ConfigDocument make_doc(Geometry g, int n, double k0L_over_pi, double k0a_over_pi, DriveSpec drive) {
    ConfigDocument d;
    d.system.geometry = g;
    d.system.n_qubits = n;
    d.system.k0L = k0L_over_pi * kPi;
    d.system.k0a = k0a_over_pi * kPi;
    d.drive = drive;
    return d;
}

std::string tag(double over_pi) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%gpi", over_pi);
    std::string s = buf;
    std::replace(s.begin(), s.end(), '.', 'p');
    return s;
}

std::string drive_tag(const DriveSpec& d) {
    char buf[48];
    if (std::holds_alternative<Resonant>(d)) return "res";
    if (const auto* t = std::get_if<TargetTransmission>(&d)) {
        std::snprintf(buf, sizeof buf, "T%02d", static_cast<int>(std::lround(t->transmission * 100)));
        return buf;
    }
    std::snprintf(buf, sizeof buf, "d%+.6g", std::get<Detuned>(d).delta);
    std::string s = buf;
    std::replace(s.begin(), s.end(), '.', 'p');
    return s;
}

Job job(const std::string& fig, const std::string& command, const ConfigDocument& doc, json extra = json::object(),
        const std::string& suffix = "") {
    const auto& s = doc.system;
    std::string name = fig + "_" + command + "_N" + std::to_string(s.n_qubits);
    if (s.geometry == Geometry::SemiInfinite) name += "_semi_a" + tag(s.k0a / kPi);
    if (s.n_qubits > 1) name += "_L" + tag(s.k0L / kPi);
    name += "_" + drive_tag(doc.drive) + suffix;
    extra["config"] = config_text(doc);
    return {command, name, extra};
}

}  // namespace

std::vector<std::string> preset_ids() {
    std::vector<std::string> ids;
    for (int i = 2; i <= 15; ++i) ids.push_back("fig" + std::to_string(i));
    return ids;
}

FigurePreset figure_preset(const std::string& id) {
    const auto inf = Geometry::Infinite;
    const auto semi = Geometry::SemiInfinite;
    const DriveSpec res = Resonant{};
    const DriveSpec t50 = TargetTransmission{0.5};
    FigurePreset p{id, {}, {}};
    const json refl{{"channel", "reflected"}};
    const json trans{{"channel", "transmitted"}};

    if (id == "fig2") {
        p.description = "spectra, infinite waveguide, k0L = pi/2, N = 1, 2, 3, 5, 10, resonant and T = 50%";
        for (int n : {1, 2, 3, 5, 10}) {
            for (const auto& d : {res, t50}) p.jobs.push_back(job(id, "spectrum", make_doc(inf, n, 0.5, 0.5, d)));
        }
    } else if (id == "fig3") {
        p.description = "time delay, transmission and poles of 10 qubits, k0L = pi/4 and pi/2";
        const json grid{{"k_min", 90.0}, {"k_max", 100.0}, {"points", 4001}};
        for (double L : {0.25, 0.5}) {
            const auto d = make_doc(inf, 10, L, 0.5, res);
            p.jobs.push_back(job(id, "delay", d, grid));
            p.jobs.push_back(job(id, "transport", d, grid));
            p.jobs.push_back(job(id, "poles", d));
        }
    } else if (id == "fig4") {
        p.description = "spectra, infinite waveguide, k0L = pi/4, N = 2, 3, 5, 10, resonant and T = 50%";
        for (int n : {2, 3, 5, 10}) {
            for (const auto& d : {res, t50}) p.jobs.push_back(job(id, "spectrum", make_doc(inf, n, 0.25, 0.5, d)));
        }
    } else if (id == "fig5") {
        p.description = "reflection g2, resonant, N = 1, 2, 3, 5, 10, k0L = pi/2 and pi/4";
        for (double L : {0.5, 0.25}) {
            for (int n : {1, 2, 3, 5, 10}) {
                auto j = job(id, "g2", make_doc(inf, n, L, 0.5, res), refl);
                // one N = 1 panel per row: keep the file names apart
                if (n == 1) j.name = id + "_g2_N1_L" + tag(L) + "_res";
                p.jobs.push_back(j);
            }
        }
    } else if (id == "fig6" || id == "fig7") {
        const double L = id == "fig6" ? 0.5 : 0.25;
        p.description = "g2 at T = 50%, N = 5 and 10 with the N = 1 reference, k0L = " +
                        std::string(id == "fig6" ? "pi/2" : "pi/4");
        for (int n : {1, 5, 10}) {
            for (const auto& ch : {trans, refl}) {
                p.jobs.push_back(job(id, "g2", make_doc(inf, n, L, 0.5, t50), ch,
                                     "_" + ch.at("channel").get<std::string>()));
            }
        }
    } else if (id == "fig8") {
        p.description = "g2 of 10 qubits, k0L = pi/2, at the five red-side frequencies with T = 50%";
        const auto base = make_doc(inf, 10, 0.5, 0.5, res);
        for (double k : red_side_crossings(base.system, 0.5, 5)) {
            const auto d = make_doc(inf, 10, 0.5, 0.5, Detuned{(k - base.system.omega0) / base.system.gamma});
            for (const auto& ch : {trans, refl}) {
                p.jobs.push_back(job(id, "g2", d, ch, "_" + ch.at("channel").get<std::string>()));
            }
        }
    } else if (id == "fig9") {
        p.description = "long-time transmission g2 of 10 qubits, k0L = pi/2, T = 20%, 50%, 80%";
        const json lt{{"channel", "transmitted"}, {"t_max", 1000.0}, {"points", 5001}};
        for (double T : {0.2, 0.5, 0.8}) {
            p.jobs.push_back(job(id, "g2", make_doc(inf, 10, 0.5, 0.5, TargetTransmission{T}), lt));
        }
    } else if (id == "fig10") {
        p.description = "semi-infinite spectra: N = 1 at k0a = pi/2 and pi/4, N = 2 at k0a = pi/2, k0L = pi/2";
        for (double a : {0.5, 0.25}) {
            for (double det : {0.0, -1.0, -3.0}) {
                p.jobs.push_back(job(id, "spectrum", make_doc(semi, 1, 0.5, a, Detuned{det})));
            }
        }
        for (double det : {-3.5, -1.0, -0.5, 0.0}) {
            p.jobs.push_back(job(id, "spectrum", make_doc(semi, 2, 0.5, 0.5, Detuned{det})));
        }
    } else if (id == "fig11") {
        p.description = "semi-infinite spectra, N = 2, k0L = pi/2, k0a = pi/4, E/2 = 96.5, 99, 100, 101, 103.5";
        for (double det : {-3.5, -1.0, 0.0, 1.0, 3.5}) {
            p.jobs.push_back(job(id, "spectrum", make_doc(semi, 2, 0.5, 0.25, Detuned{det})));
        }
    } else if (id == "fig12") {
        p.description = "10 qubits in front of the mirror, k0L = k0a = pi/2, resonant: spectrum and g2";
        const auto d = make_doc(semi, 10, 0.5, 0.5, res);
        p.jobs.push_back(job(id, "spectrum", d));
        p.jobs.push_back(job(id, "g2", d, refl));
        p.jobs.push_back(job(id, "poles", d));
    } else if (id == "fig13") {
        p.description = "g2 of one qubit in front of the mirror, k0a = pi/2 and pi/4, resonant and +1 detuned";
        for (double a : {0.5, 0.25}) {
            for (double det : {0.0, 1.0, -1.0}) {
                p.jobs.push_back(job(id, "g2", make_doc(semi, 1, 0.5, a, Detuned{det}), refl));
            }
        }
    } else if (id == "fig14") {
        p.description = "g2 of one qubit far from the mirror, k0a = 41pi/2 and 20pi, resonant (Markovian)";
        for (double a : {20.5, 20.0}) p.jobs.push_back(job(id, "g2", make_doc(semi, 1, 0.5, a, res), refl));
    } else if (id == "fig15") {
        p.description = "g2 of two qubits in front of the mirror, k0L = pi/2, k0a = pi/2 and pi/4, resonant and -1";
        for (double a : {0.5, 0.25}) {
            for (double det : {0.0, -1.0}) {
                p.jobs.push_back(job(id, "g2", make_doc(semi, 2, 0.5, a, Detuned{det}), refl));
            }
        }
    } else {
        throw ConfigError("preset", "unknown figure preset '" + id + "' (fig2 ... fig15)");
    }
    return p;
}

// ---------------------------------------------------------------------------
// Cross-check suite

namespace {

double a7(const SystemConfig& c, double E, double w) {
    const double G = c.gamma, w0 = c.omega0;
    auto lor = [&](double x) { return x * x + G * G / 4.0; };
    return std::pow(G, 4) / (4.0 * kPi * kPi) / (lor(E - w0 - w) * lor(E / 2.0 - w0) * lor(w - w0));
}

CheckRow row(std::string name, double value, double tol) { return {std::move(name), value, tol, value <= tol}; }

}  // namespace

std::vector<CheckRow> crosscheck_suite() {
    std::vector<CheckRow> rows;

    {  // closed-form N = 1 spectrum
        SystemConfig c;
        double worst = 0.0;
        for (double half : {100.0, 99.5}) {
            const auto grid = linspace(95.0, 105.0, 401);
            const auto sp = boundstate::incoherent_spectrum(c, 2.0 * half, grid);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double ref = a7(c, 2.0 * half, grid[i]);
                worst = std::max({worst, std::abs(sp.S_R[i] - ref) / ref, std::abs(sp.S_L[i] - ref) / ref});
            }
        }
        rows.push_back(row("N=1 spectrum vs closed form (rel)", worst, 1e-6));
    }
    {  // T-matrix assembly vs direct bound-state form, plus residue vs quadrature spot checks
        SystemConfig c;
        c.n_qubits = 3;
        c.k0L = 0.25 * kPi;
        const double E = 2.0 * 99.6;
        double quad = 0.0;
        auto sink = [&](const boundstate::CrossCheck& x) { quad = std::max(quad, x.relative()); };
        const auto grid = linspace(96.0, 103.0, 57);
        const auto sp = boundstate::incoherent_spectrum(c, E, grid, sink);
        boundstate::Resolvent rv(c);
        const auto st = boundstate::two_photon_state(rv, E);
        double worst = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double d = boundstate::spectrum_direct(rv, st, Channel::Transmitted, grid[i]);
            worst = std::max(worst, std::abs(sp.S_R[i] - d));
            scale = std::max(scale, std::abs(d));
        }
        rows.push_back(row("N=3 T-matrix spectrum vs direct form (rel sup)", worst / scale, 1e-10));
        boundstate::g2_trace(c, E, Channel::Reflected, boundstate::default_t_grid(10.0, 50), sink);
        rows.push_back(row("residue sums vs quadrature (max rel)", quad, 1e-6));
    }
    {  // poles: eigenvalues vs amplitude-denominator reconstruction
        double worst = 0.0;
        for (double L : {0.25, 0.5}) {
            SystemConfig c;
            c.n_qubits = 10;
            c.k0L = L * kPi;
            const auto ps = transport::poles(c);
            for (cplx z : transport::reconstructed_poles(c)) {
                double best = 1e300;
                for (cplx p : ps.poles) best = std::min(best, std::abs(z - p));
                worst = std::max(worst, best);
            }
        }
        rows.push_back(row("N=10 reconstructed poles vs eigenvalues", worst, 1e-8));
    }
    {  // matching solve vs qubit-space resolvent
        SystemConfig c;
        c.n_qubits = 5;
        c.k0L = 0.3 * kPi;
        const auto cp = transport::couplings(c);
        double worst = 0.0;
        for (double k : {97.3, 99.9, 100.2, 103.0}) {
            const auto s = transport::solve_single_photon(c, k);
            worst = std::max({worst, std::abs(s.t() - transport::channel_amplitude(c, cp, Channel::Transmitted, k)),
                              std::abs(s.r() - transport::channel_amplitude(c, cp, Channel::Reflected, k))});
        }
        rows.push_back(row("N=5 matching solve vs effective Hamiltonian", worst, 1e-10));
    }
    {  // Langevin weak drive vs scattering amplitudes
        double worst = 0.0;
        for (int n : {1, 2}) {
            SystemConfig c;
            c.n_qubits = n;
            c.k0L = 0.3 * kPi;
            for (double k : {99.2, 100.0, 100.7}) {
                const auto w = langevin::weak_drive_amplitudes(c, k);
                const auto s = transport::solve_single_photon(c, k);
                worst = std::max({worst, std::abs(w.t - s.t()), std::abs(w.r - s.r())});
            }
        }
        rows.push_back(row("Langevin weak-drive amplitudes vs scattering (N=1,2)", worst, 1e-8));
    }
    {  // Langevin spectrum / (pi A^4) vs two-photon spectrum, and flux conservation
        double worst = 0.0, cons = 0.0;
        for (int n : {1, 2}) {
            SystemConfig c;
            c.n_qubits = n;
            const double E = 2.0 * 100.4;
            const auto grid = linspace(97.0, 104.0, 29);
            const auto ls = boundstate::incoherent_spectrum(c, E, grid);
            const double A = std::sqrt(1e-5);
            const auto sys = langevin::build_system(c, A, E / 2.0);
            const auto hl = langevin::regression_spectrum(sys, grid);
            double scale = 0.0, diff = 0.0;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                scale = std::max(scale, ls.S_R[i]);
                diff = std::max({diff, std::abs(hl.S_R[i] / (kPi * std::pow(A, 4)) - ls.S_R[i]),
                                 std::abs(hl.S_L[i] / (kPi * std::pow(A, 4)) - ls.S_L[i])});
            }
            worst = std::max(worst, diff / scale);
            cons = std::max(cons, std::abs(hl.conservation_residual));
        }
        rows.push_back(row("Langevin S/(pi A^4) vs two-photon spectrum, A^2=1e-5", worst, 1e-3));
        rows.push_back(row("Langevin flux conservation (rel)", cons, 1e-6));
    }
    {  // one-qubit steady state: linear solve vs closed form for s1
        double worst = 0.0;
        SystemConfig c;
        for (double d : {-2.0, 0.0, 0.5}) {
            for (double A : {0.05, 0.5, 2.0}) {
                const auto sys = langevin::build_system(c, A, c.omega0 + d);
                const auto s = langevin::steady_state(sys);
                worst = std::max(worst, std::abs(s(0) - langevin::steady_state_closed_form(1.0, d, sys.rabi).first));
            }
        }
        rows.push_back(row("one-qubit coherence: linear solve vs closed form", worst, 1e-12));
    }
    return rows;
}

}  // namespace wqed::cli
