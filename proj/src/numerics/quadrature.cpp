#include <algorithm>
#include <cmath>
#include <queue>

#include "wqed/numerics.hpp"

namespace wqed::numerics {

namespace {

// QUADPACK qk15 abscissae and weights.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    cplx value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(const F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const cplx fc = f(center);
    cplx kronrod = fc * kWgk[7];
    cplx gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const cplx f1 = f(center - dx);
        const cplx f2 = f(center + dx);
        kronrod += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

void QuadratureSpec::validate() const {
    if (abs_tol <= 0.0 || rel_tol <= 0.0) throw ConfigError("quadrature", "tolerances must be positive");
    if (max_subdivisions < 1) throw ConfigError("quadrature", "max_subdivisions must be positive");
    for (std::size_t i = 1; i < epsilon_ladder.size(); ++i) {
        if (!(epsilon_ladder[i] < epsilon_ladder[i - 1])) {
            throw ConfigError("quadrature", "epsilon ladder must be strictly decreasing");
        }
    }
    for (double e : epsilon_ladder) {
        if (e <= 0.0) throw ConfigError("quadrature", "epsilon ladder entries must be positive");
    }
}

QuadResult integrate(const Integrand& f, const Domain& domain, const QuadratureSpec& spec) {
    spec.validate();
    int evaluations = 0;
    // Integrand in the working variable and the initial cut points.
    std::function<cplx(double)> g;
    std::vector<double> cuts;
    if (domain.infinite) {
        const double lim = 0.5 * kPi;
        g = [&](double theta) {
            ++evaluations;
            const double c = std::cos(theta);
            if (c <= 0.0) return cplx{0.0, 0.0};
            const double k = domain.center + domain.scale * std::tan(theta);
            return f(k) * (domain.scale / (c * c));
        };
        cuts.push_back(-lim);
        for (double bp : domain.breakpoints) cuts.push_back(std::atan((bp - domain.center) / domain.scale));
        cuts.push_back(lim);
    } else {
        g = [&](double k) {
            ++evaluations;
            return f(k);
        };
        cuts.push_back(domain.a);
        for (double bp : domain.breakpoints) {
            if (bp > std::min(domain.a, domain.b) && bp < std::max(domain.a, domain.b)) cuts.push_back(bp);
        }
        cuts.push_back(domain.b);
    }
    const bool reversed = cuts.front() > cuts.back();
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<Segment> heap;
    cplx total{0.0, 0.0};
    double total_error = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        // split each initial interval a few times so narrow features are seen
        const int pieces = 4;
        for (int p = 0; p < pieces; ++p) {
            const double a = cuts[i] + (cuts[i + 1] - cuts[i]) * p / pieces;
            const double b = cuts[i] + (cuts[i + 1] - cuts[i]) * (p + 1) / pieces;
            auto s = gk15(g, a, b);
            total += s.value;
            total_error += s.error;
            heap.push(s);
        }
    }
    int subdivisions = 0;
    bool converged = true;
    while (total_error > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
        if (subdivisions >= spec.max_subdivisions) {
            converged = false;
            break;
        }
        const Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            converged = false;
            break;
        }
        auto left = gk15(g, worst.a, mid);
        auto right = gk15(g, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++subdivisions;
        if (subdivisions % 256 == 0) {
            // resum to wash out accumulated rounding in the running totals
            auto copy = heap;
            total = 0.0;
            total_error = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                total_error += copy.top().error;
                copy.pop();
            }
        }
    }
    QuadResult out{reversed ? -total : total, total_error, converged, evaluations};
    return out;
}

cplx extrapolate_to_zero(std::span<const double> x, std::span<const cplx> y) {
    if (x.size() != y.size() || x.empty()) throw Error("extrapolate_to_zero: bad sample sizes");
    std::vector<cplx> p(y.begin(), y.end());
    const std::size_t n = x.size();
    // Neville's scheme evaluated at 0
    for (std::size_t m = 1; m < n; ++m) {
        for (std::size_t i = 0; i + m < n; ++i) {
            p[i] = (x[i + m] * p[i] - x[i] * p[i + 1]) / (x[i + m] - x[i]);
        }
    }
    return p[0];
}

QuadResult quad_oracle(const RegularizedIntegrand& f, const Domain& domain, const QuadratureSpec& spec) {
    spec.validate();
    if (spec.epsilon_ladder.empty()) throw ConfigError("quadrature", "epsilon ladder is empty");
    std::vector<cplx> values;
    QuadResult out{};
    out.converged = true;
    for (double eps : spec.epsilon_ladder) {
        auto r = integrate([&](double k) { return f(k, eps); }, domain, spec);
        values.push_back(r.value);
        out.error = std::max(out.error, r.error);
        out.converged = out.converged && r.converged;
        out.evaluations += r.evaluations;
    }
    const auto& ladder = spec.epsilon_ladder;
    out.value = extrapolate_to_zero(ladder, values);
    if (values.size() >= 2) {
        const cplx coarser = extrapolate_to_zero(std::span(ladder).subspan(1),
                                                 std::span<const cplx>(values).subspan(1));
        out.error += std::abs(out.value - coarser);
    }
    return out;
}

}  // namespace wqed::numerics
