#include "wqed/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "wqed/transport.hpp"

namespace wqed {

double SystemConfig::coupling() const { return std::sqrt(gamma / 2.0); }

std::vector<std::string> SystemConfig::validate() const {
    std::vector<std::string> warnings;
    if (n_qubits < 1) throw ConfigError("n_qubits", "must be at least 1");
    if (n_qubits > 16) throw ConfigError("n_qubits", "at most 16 qubits are supported");
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConfigError("gamma", "must be positive");
    if (!std::isfinite(omega0) || omega0 / gamma < 10.0) {
        throw ConfigError("omega0_over_gamma", "must be at least 10 (rotating-wave regime)");
    }
    if (!std::isfinite(k0L) || k0L < 0.0) throw ConfigError("k0L_over_pi", "must be non-negative");
    if (geometry == Geometry::SemiInfinite && (!std::isfinite(k0a) || k0a <= 0.0)) {
        throw ConfigError("k0a_over_pi", "must be positive for the semi-infinite geometry");
    }
    if (n_qubits == 1 && std::abs(k0L - 0.5 * kPi) > 1e-15) {
        warnings.emplace_back("k0L is unused for a single qubit");
    }
    if (!markovian) {
        warnings.emplace_back("two-photon and pole calculations always use Markovian phases");
    }
    return warnings;
}

std::vector<double> qubit_positions(const SystemConfig& config) {
    const int n = config.n_qubits;
    const double L = config.spacing();
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        if (config.geometry == Geometry::SemiInfinite) {
            x[static_cast<std::size_t>(i - 1)] = -config.mirror_distance() - (n - i) * L;
        } else {
            x[static_cast<std::size_t>(i - 1)] = (i - 1 - 0.5 * (n - 1)) * L;
        }
    }
    return x;
}

namespace {

double bisect(const std::function<double(double)>& f, double a, double b, double fa) {
    while (std::abs(b - a) > 1e-8) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

double target_transmission_frequency(const SystemConfig& config, double target) {
    if (config.geometry != Geometry::Infinite) {
        throw ConfigError("drive.mode",
                          "target transmission needs the infinite waveguide; reflection is total "
                          "in front of a mirror");
    }
    if (!(target >= 0.0 && target <= 1.0)) throw ConfigError("drive.value", "transmission must lie in [0, 1]");
    // t vanishes at omega0 for every array, so f(omega0) = -T.
    if (target == 0.0) return config.omega0;
    auto f = [&](double k) { return transport::transmission_probability(config, k) - target; };

    const auto ps = transport::poles(config);
    double min_gamma = config.gamma;
    for (std::size_t i = 0; i < ps.poles.size(); ++i) {
        if (ps.gamma_tilde(i) > 1e-9) min_gamma = std::min(min_gamma, ps.gamma_tilde(i));
    }
    const double step = std::min(config.gamma / 10.0, 0.25 * min_gamma);
    const double reach = 50.0 * config.gamma;
    double red_prev = -target, blue_prev = -target;
    for (int n = 1; n * step <= reach; ++n) {
        const double red_k = config.omega0 - n * step;
        const double blue_k = config.omega0 + n * step;
        const double red = f(red_k);
        const double blue = f(blue_k);
        const bool red_hit = (red >= 0.0) != (red_prev >= 0.0);
        const bool blue_hit = (blue >= 0.0) != (blue_prev >= 0.0);
        double red_root = 0.0, blue_root = 0.0;
        if (red_hit) red_root = bisect(f, red_k + step, red_k, red_prev);
        if (blue_hit) blue_root = bisect(f, blue_k - step, blue_k, blue_prev);
        if (red_hit && blue_hit) {
            const double dr = config.omega0 - red_root, db = blue_root - config.omega0;
            return db < dr - 1e-12 ? blue_root : red_root;
        }
        if (red_hit) return red_root;
        if (blue_hit) return blue_root;
        red_prev = red;
        blue_prev = blue;
    }
    throw ConvergenceError("resolve_drive: no frequency with the requested transmission within 50 Gamma",
                           target);
}

}  // namespace

double resolve_drive(const SystemConfig& config, const DriveSpec& drive) {
    return std::visit(
        [&](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Resonant>) {
                return config.omega0;
            } else if constexpr (std::is_same_v<T, Detuned>) {
                if (!std::isfinite(d.delta)) throw ConfigError("drive.value", "detuning must be finite");
                return config.omega0 + d.delta * config.gamma;
            } else {
                return target_transmission_frequency(config, d.transmission);
            }
        },
        drive);
}

std::string describe(const DriveSpec& drive) {
    char buf[64];
    if (std::holds_alternative<Resonant>(drive)) return "resonant";
    if (const auto* d = std::get_if<Detuned>(&drive)) {
        std::snprintf(buf, sizeof buf, "detuned(%.17g)", d->delta);
        return buf;
    }
    std::snprintf(buf, sizeof buf, "target_transmission(%.17g)", std::get<TargetTransmission>(drive).transmission);
    return buf;
}

// ---------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError(field, "not a number: '" + text + "'");
    }
    if (used != text.size() || !std::isfinite(v)) throw ConfigError(field, "not a number: '" + text + "'");
    return v;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

ConfigDocument parse_config(std::istream& in) {
    ConfigDocument doc;
    std::string mode = "resonant";
    std::optional<double> value;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno), "expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        auto& s = doc.system;
        if (key == "geometry") {
            if (val == "infinite") {
                s.geometry = Geometry::Infinite;
            } else if (val == "semi-infinite" || val == "semi_infinite" || val == "semiinfinite") {
                s.geometry = Geometry::SemiInfinite;
            } else {
                throw ConfigError(key, "expected infinite or semi-infinite");
            }
        } else if (key == "n_qubits") {
            const double n = parse_number(key, val);
            if (n != std::floor(n)) throw ConfigError(key, "must be an integer");
            s.n_qubits = static_cast<int>(n);
        } else if (key == "omega0_over_gamma") {
            s.omega0 = parse_number(key, val) * s.gamma;
        } else if (key == "k0L_over_pi") {
            s.k0L = parse_number(key, val) * kPi;
        } else if (key == "k0a_over_pi") {
            s.k0a = parse_number(key, val) * kPi;
        } else if (key == "markovian") {
            if (val == "true" || val == "1") {
                s.markovian = true;
            } else if (val == "false" || val == "0") {
                s.markovian = false;
            } else {
                throw ConfigError(key, "expected true or false");
            }
        } else if (key == "drive.mode") {
            mode = val;
        } else if (key == "drive.value") {
            value = parse_number(key, val);
        } else {
            throw ConfigError(key, "unknown key");
        }
    }
    if (mode == "resonant") {
        doc.drive = Resonant{};
    } else if (mode == "detuned") {
        doc.drive = Detuned{value.value_or(0.0)};
    } else if (mode == "target_transmission") {
        if (!value) throw ConfigError("drive.value", "target_transmission needs a value");
        if (*value < 0.0 || *value > 1.0) throw ConfigError("drive.value", "transmission must lie in [0, 1]");
        doc.drive = TargetTransmission{*value};
    } else {
        throw ConfigError("drive.mode", "expected resonant, detuned or target_transmission");
    }
    doc.system.validate();
    if (std::holds_alternative<TargetTransmission>(doc.drive) && doc.system.geometry != Geometry::Infinite) {
        throw ConfigError("drive.mode", "target_transmission needs the infinite geometry");
    }
    return doc;
}

ConfigDocument load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    return parse_config(in);
}

void write_config(std::ostream& out, const ConfigDocument& doc) {
    const auto& s = doc.system;
    out << "geometry = " << (s.geometry == Geometry::Infinite ? "infinite" : "semi-infinite") << '\n';
    out << "n_qubits = " << s.n_qubits << '\n';
    out << "omega0_over_gamma = " << fmt(s.omega0 / s.gamma) << '\n';
    out << "k0L_over_pi = " << fmt(s.k0L / kPi) << '\n';
    out << "k0a_over_pi = " << fmt(s.k0a / kPi) << '\n';
    out << "markovian = " << (s.markovian ? "true" : "false") << '\n';
    if (std::holds_alternative<Resonant>(doc.drive)) {
        out << "drive.mode = resonant\n";
    } else if (const auto* d = std::get_if<Detuned>(&doc.drive)) {
        out << "drive.mode = detuned\ndrive.value = " << fmt(d->delta) << '\n';
    } else {
        out << "drive.mode = target_transmission\ndrive.value = "
            << fmt(std::get<TargetTransmission>(doc.drive).transmission) << '\n';
    }
}

}  // namespace wqed
