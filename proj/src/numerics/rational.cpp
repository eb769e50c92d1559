#include <algorithm>
#include <cmath>
#include <sstream>

#include "wqed/numerics.hpp"

namespace wqed::numerics {

cplx RationalFunction::operator()(cplx z) const {
    cplx sum{0.0, 0.0};
    for (const auto& t : terms_) sum += t.residue / (z - t.pole);
    cplx p{0.0, 0.0};
    for (auto it = polynomial_.rbegin(); it != polynomial_.rend(); ++it) p = p * z + *it;
    return sum + p;
}

int RationalFunction::decay_order() const {
    auto last = std::find_if(polynomial_.rbegin(), polynomial_.rend(),
                             [](cplx c) { return c != cplx{0.0, 0.0}; });
    if (last != polynomial_.rend()) {
        return -static_cast<int>(std::distance(last, polynomial_.rend()) - 1);
    }
    return 1;
}

RationalFunction RationalFunction::conjugated() const {
    std::vector<PoleTerm> t;
    t.reserve(terms_.size());
    for (const auto& term : terms_) t.push_back({std::conj(term.pole), std::conj(term.residue)});
    std::vector<cplx> p;
    p.reserve(polynomial_.size());
    for (auto c : polynomial_) p.push_back(std::conj(c));
    return RationalFunction(std::move(t), std::move(p));
}

RationalFunction RationalFunction::reflected(cplx s) const {
    // rho / (s - k - p) = -rho / (k - (s - p))
    std::vector<PoleTerm> t;
    t.reserve(terms_.size());
    for (const auto& term : terms_) t.push_back({s - term.pole, -term.residue});
    // polynomial q(s - k) expanded in k
    const std::size_t n = polynomial_.size();
    std::vector<cplx> p(n, cplx{0.0, 0.0});
    for (std::size_t d = 0; d < n; ++d) {
        // (s - k)^d = sum_j C(d,j) s^(d-j) (-k)^j
        double binom = 1.0;
        for (std::size_t j = 0; j <= d; ++j) {
            const double sign = (j % 2 == 0) ? 1.0 : -1.0;
            p[j] += polynomial_[d] * binom * std::pow(s, static_cast<double>(d - j)) * sign;
            binom = binom * static_cast<double>(d - j) / static_cast<double>(j + 1);
        }
    }
    return RationalFunction(std::move(t), std::move(p));
}

RationalFunction RationalFunction::scaled(cplx c) const {
    auto out = *this;
    for (auto& t : out.terms_) t.residue *= c;
    for (auto& p : out.polynomial_) p *= c;
    return out;
}

cplx residue_sum(std::span<const RationalFunction> factors, Contour contour, double tau, RealAxis real_axis) {
    if (tau > 0.0 && contour != Contour::Upper) {
        throw Error("residue_sum: exp(i k tau) with tau > 0 requires the upper contour");
    }
    if (tau < 0.0 && contour != Contour::Lower) {
        throw Error("residue_sum: exp(i k tau) with tau < 0 requires the lower contour");
    }
    if (tau == 0.0) {
        int decay = 0;
        for (const auto& f : factors) decay += f.decay_order();
        if (decay < 2) throw Error("residue_sum: integrand must decay at least as 1/k^2");
    }

    struct Located {
        std::size_t factor;
        std::size_t term;
    };
    std::vector<Located> enclosed;
    std::vector<cplx> all_poles;
    for (std::size_t f = 0; f < factors.size(); ++f) {
        const auto& terms = factors[f].terms();
        for (std::size_t t = 0; t < terms.size(); ++t) {
            const cplx p = terms[t].pole;
            all_poles.push_back(p);
            bool lower = p.imag() < 0.0;
            if (p.imag() == 0.0 && real_axis != RealAxis::Reject) lower = real_axis == RealAxis::Below;
            if (p.imag() == 0.0 && real_axis == RealAxis::Reject) {
                std::ostringstream os;
                os << "residue_sum: pole on the real axis at " << p;
                throw DegeneratePoles(os.str());
            }
            if ((contour == Contour::Lower) == lower) enclosed.push_back({f, t});
        }
    }
    for (const auto& loc : enclosed) {
        const cplx p = factors[loc.factor].terms()[loc.term].pole;
        int close = 0;
        for (cplx q : all_poles) {
            if (std::abs(p - q) < kDegeneracyThreshold) ++close;
        }
        if (close > 1) {
            std::ostringstream os;
            os << "residue_sum: near-degenerate poles at " << p;
            throw DegeneratePoles(os.str());
        }
    }

    cplx sum{0.0, 0.0};
    for (const auto& loc : enclosed) {
        const auto& term = factors[loc.factor].terms()[loc.term];
        cplx r = term.residue * std::exp(kI * term.pole * tau);
        for (std::size_t g = 0; g < factors.size(); ++g) {
            if (g != loc.factor) r *= factors[g](term.pole);
        }
        sum += r;
    }
    const double orientation = (contour == Contour::Upper) ? 1.0 : -1.0;
    return 2.0 * kPi * kI * orientation * sum;
}

RationalFunction cauchy_transform_lower(const RationalFunction& f) {
    if (f.decay_order() < 1) {
        throw Error("cauchy_transform_lower: integrand must be strictly proper");
    }
    std::vector<PoleTerm> out;
    for (const auto& t : f.terms()) {
        if (t.pole.imag() < 0.0) out.push_back({t.pole, -2.0 * kPi * kI * t.residue});
    }
    return RationalFunction(std::move(out));
}

}  // namespace wqed::numerics
