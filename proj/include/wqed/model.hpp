// Physical configuration of N identical two-level systems on a waveguide.
//
// Units: Gamma = 1, c = 1, hbar = 1. Frequencies and momenta are multiples of
// Gamma, lengths are in units of c / Gamma.
#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "wqed/numerics.hpp"

namespace wqed {

enum class Geometry { Infinite, SemiInfinite };

struct SystemConfig {
    Geometry geometry = Geometry::Infinite;
    int n_qubits = 1;
    double omega0 = 100.0;
    double gamma = 1.0;
    double k0L = 0.5 * kPi;  // qubit-qubit phase k0 * L
    double k0a = 0.5 * kPi;  // qubit-mirror phase k0 * a (semi-infinite only)
    bool markovian = true;

    double k0() const { return omega0; }
    double coupling() const;  // V = sqrt(Gamma / 2)
    double spacing() const { return k0L / k0(); }
    double mirror_distance() const { return k0a / k0(); }

    /// Throws ConfigError naming the first invalid field. Returns warnings
    /// for suspicious but legal settings.
    std::vector<std::string> validate() const;

    bool operator==(const SystemConfig&) const = default;
};

struct Resonant {
    bool operator==(const Resonant&) const = default;
};
struct Detuned {
    double delta = 0.0;
    bool operator==(const Detuned&) const = default;
};
struct TargetTransmission {
    double transmission = 0.5;
    bool operator==(const TargetTransmission&) const = default;
};

/// Two identical incident photons with k1 = k2 = E/2.
using DriveSpec = std::variant<Resonant, Detuned, TargetTransmission>;

/// Strictly increasing qubit positions. Semi-infinite: x_i = -a - (N - i) L;
/// infinite: symmetric about x = 0.
std::vector<double> qubit_positions(const SystemConfig& config);

/// Incident single-photon frequency E/2 for a drive specification.
///
/// TargetTransmission picks the frequency closest to omega0 with |t|^2 = T:
/// the search walks outward from omega0 (red side before blue at each step)
/// and refines the first sign change of |t|^2 - T by bisection to 1e-8 Gamma.
double resolve_drive(const SystemConfig& config, const DriveSpec& drive);

std::string describe(const DriveSpec& drive);

// ---------------------------------------------------------------------------
// Flat key = value configuration documents.

struct ConfigDocument {
    SystemConfig system;
    DriveSpec drive = Resonant{};
};

/// Keys: geometry, n_qubits, omega0_over_gamma, k0L_over_pi, k0a_over_pi,
/// markovian, drive.mode, drive.value. '#' starts a comment.
ConfigDocument parse_config(std::istream& in);
ConfigDocument load_config(const std::string& path);
void write_config(std::ostream& out, const ConfigDocument& doc);

}  // namespace wqed
