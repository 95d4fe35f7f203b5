#include "polyface/probcalc.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace polyface {

namespace {

constexpr double kLn2 = 0.6931471805599453094172321214581766;

/// Natural log of a positive big integer, accurate to a few ulps even for
/// values far beyond double range: peel off the exponent and take the log
/// of the leading 53 bits.
double log_big(const BigInt& z) {
    if (z <= 0) throw std::invalid_argument("log_big needs a positive integer");
    const auto bits = boost::multiprecision::msb(z);  // index of the top bit
    if (bits <= 900) return std::log(z.convert_to<double>());
    const unsigned shift = static_cast<unsigned>(bits - 52);
    const double top = BigInt(z >> shift).convert_to<double>();
    return std::log(top) + static_cast<double>(shift) * kLn2;
}

/// log C(n, l) by log-gamma.
double log_choose(double n, double l) {
    return std::lgamma(n + 1.0) - std::lgamma(l + 1.0) - std::lgamma(n - l + 1.0);
}

/// log sum_{l=0}^{m-1} C(M-1, l) with max-shifted, Kahan-compensated summation.
double log_binomial_head(int m, int M) {
    const int last = std::min(m - 1, M - 1);
    double peak = -std::numeric_limits<double>::infinity();
    std::vector<double> terms(static_cast<std::size_t>(last) + 1);
    for (int l = 0; l <= last; ++l) {
        terms[l] = log_choose(M - 1, l);
        peak = std::max(peak, terms[l]);
    }
    double sum = 0.0, comp = 0.0;
    for (double t : terms) {
        const double y = std::exp(t - peak) - comp;
        const double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    return peak + std::log(sum);
}

}  // namespace

double WendelProb::value() const {
    if (value_exact) return value_exact->convert_to<double>();
    return std::exp(value_log);
}

WendelProb wendel_probability(int m, int M) {
    if (m < 0) throw std::invalid_argument("wendel_probability: m must be nonnegative");
    if (M < 1) throw std::invalid_argument("wendel_probability: M must be at least 1");

    WendelProb result;
    result.m = m;
    result.M = M;

    if (m == 0) {
        result.value_exact = Rational(0);
        result.value_log = -std::numeric_limits<double>::infinity();
        return result;
    }
    if (m >= M) {
        // The head covers the whole binomial row, which sums to 2^{M-1}.
        result.value_exact = Rational(1);
        result.value_log = 0.0;
        return result;
    }

    if (M <= kWendelExactMaxPoints) {
        BigInt term = 1;  // C(M-1, 0)
        BigInt sum = 1;
        for (int l = 1; l <= m - 1; ++l) {
            term *= (M - l);
            term /= l;  // exact: C(M-1,l) = C(M-1,l-1) (M-l)/l
            sum += term;
        }
        const BigInt denom = BigInt(1) << (M - 1);
        result.value_exact = Rational(sum) / Rational(denom);
        result.value_log = log_big(sum) - static_cast<double>(M - 1) * kLn2;
    } else {
        result.value_log = log_binomial_head(m, M) - static_cast<double>(M - 1) * kLn2;
    }
    return result;
}

bool binomial_symmetry_check(int m, int M) {
    if (m < 0 || m > M) throw std::invalid_argument("binomial_symmetry_check needs 0 <= m <= M");
    const Rational a = *wendel_probability(m, M).value_exact;
    const Rational b = *wendel_probability(M - m, M).value_exact;
    return a + b == 1;
}

Rational expected_face_ratio(const DimensionSpec& dims, Shape shape) {
    dims.validate();
    if (shape == Shape::Simplex) {
        throw std::invalid_argument("expected_face_ratio covers the orthant and hypercube only");
    }
    const WendelProb p = wendel_probability(dims.N - dims.n, dims.N - dims.k);
    if (!p.value_exact) throw std::runtime_error("expected_face_ratio: dimensions beyond the exact range");
    return Rational(1) - *p.value_exact;
}

double shannon_entropy(double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw std::invalid_argument("shannon_entropy needs gamma in [0,1]");
    }
    if (gamma == 0.0 || gamma == 1.0) return 0.0;
    return -gamma * std::log(gamma) - (1.0 - gamma) * std::log(1.0 - gamma);
}

double psi_weak(double delta, double rho) {
    const double rd = rho * delta;
    return shannon_entropy(delta) + delta * shannon_entropy(rho) - shannon_entropy(rd) -
           (1.0 - rd) * kLn2;
}

double psi_strong(double delta, double rho) {
    const double rd = rho * delta;
    return shannon_entropy(delta) + delta * shannon_entropy(rho) - (1.0 - rd) * kLn2;
}

double psi_weak(const PhaseParams& p) {
    p.validate();
    return psi_weak(p.delta, p.rho);
}

double psi_strong(const PhaseParams& p) {
    p.validate();
    return psi_strong(p.delta, p.rho);
}

double rho_weak(double delta, Shape shape) {
    if (shape == Shape::Simplex) {
        throw std::invalid_argument("rho_weak covers the orthant and hypercube only");
    }
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("rho_weak needs delta in (0,1)");
    // (2 delta - 1)/delta equals 2 - 1/delta but evaluates exactly at
    // dyadic delta (e.g. rho_weak(0.75) is the double nearest 2/3).
    return std::max(0.0, (2.0 * delta - 1.0) / delta);
}

double rho_strong(double delta) {
    if (!(delta >= 0.5 && delta <= 1.0)) {
        throw std::invalid_argument("rho_strong is defined for delta in [1/2, 1]");
    }
    if (delta == 0.5) return 0.0;

    const auto psi = [delta](double rho) { return psi_strong(delta, rho); };

    // Bracket scan from 0, step 1e-3, for the first crossing from <=0 to >0.
    const double step = 1e-3;
    double lo = 0.0;
    double flo = psi(lo);
    if (flo > 0.0) return 0.0;
    double hi = lo;
    bool bracketed = false;
    for (int i = 1; i <= 1000; ++i) {
        hi = std::min(1.0 - 1e-9, i * step);
        const double fhi = psi(hi);
        if (fhi > 0.0) {
            bracketed = true;
            break;
        }
        lo = hi;
        flo = fhi;
        if (hi >= 1.0 - 1e-9) break;
    }
    if (!bracketed) throw std::runtime_error("rho_strong: no sign change found");

    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (psi(mid) > 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double curve_area(ThresholdCurve curve, int quad_points) {
    if (curve != ThresholdCurve::WeakHypercube) throw std::invalid_argument("unknown curve");
    if (quad_points < 100) throw std::invalid_argument("curve_area needs at least 100 panels");
    // The integrand vanishes on (0, 1/2]; Simpson on the smooth half.
    const int panels = quad_points + (quad_points % 2);  // even count
    const double a = 0.5, b = 1.0;
    const double h = (b - a) / panels;
    const auto f = [](double d) { return rho_weak(d == 1.0 ? 1.0 - 1e-15 : d); };
    double acc = f(a + 1e-15) + f(b);
    for (int i = 1; i < panels; ++i) acc += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
    return acc * h / 3.0;
}

std::string to_string(Regime regime) {
    switch (regime) {
        case Regime::LowerTail: return "LowerTail";
        case Regime::Middle: return "Middle";
        case Regime::UpperTail: return "UpperTail";
    }
    throw std::invalid_argument("unknown regime");
}

Regime regime_classify(const DimensionSpec& dims) {
    dims.validate();
    const double m = dims.N - dims.n;
    const double M = dims.N - dims.k;
    const double spread = std::sqrt(M / 4.0);
    if (m < M / 2.0 - spread) return Regime::LowerTail;
    if (m > M / 2.0 + spread) return Regime::UpperTail;
    return Regime::Middle;
}

std::string rational_to_string(const Rational& value) {
    std::ostringstream out;
    if (boost::multiprecision::denominator(value) == 1) {
        out << boost::multiprecision::numerator(value);
    } else {
        out << boost::multiprecision::numerator(value) << "/" << boost::multiprecision::denominator(value);
    }
    return out.str();
}

}  // namespace polyface
