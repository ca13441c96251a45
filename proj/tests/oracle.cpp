#include "oracle.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace oracle {

namespace {

using complexd = std::complex<double>;
using qbatch::qasm::CircuitIR;
using qbatch::qasm::Gate;
using qbatch::qasm::GateOp;

std::string bitstring(int n, std::uint64_t index) {
    std::string s(n, '0');
    for (int q = 0; q < n; ++q) {
        if ((index >> (n - 1 - q)) & 1ULL) s[q] = '1';
    }
    return s;
}

// Builds the full 2^n x 2^n matrix of one gate, row-major.
std::vector<complexd> dense_gate_matrix(const GateOp& op, int n) {
    const std::uint64_t dim = 1ULL << n;
    std::vector<complexd> m(dim * dim, complexd{0.0});

    complexd u2[2][2] = {};
    complexd u4[4][4] = {};
    bool two_qubit = false;
    const double is = 0.70710678118654752440;
    switch (op.gate) {
        case Gate::h:
            u2[0][0] = is; u2[0][1] = is;
            u2[1][0] = is; u2[1][1] = -is;
            break;
        case Gate::x:
            u2[0][1] = 1.0; u2[1][0] = 1.0;
            break;
        case Gate::rx: {
            const double c = std::cos(op.angle / 2.0), s = std::sin(op.angle / 2.0);
            u2[0][0] = c; u2[0][1] = complexd(0, -s);
            u2[1][0] = complexd(0, -s); u2[1][1] = c;
            break;
        }
        case Gate::rz:
            u2[0][0] = std::polar(1.0, -op.angle / 2.0);
            u2[1][1] = std::polar(1.0, op.angle / 2.0);
            break;
        case Gate::cx:
            two_qubit = true;
            u4[0][0] = 1.0; u4[1][1] = 1.0; u4[2][3] = 1.0; u4[3][2] = 1.0;
            break;
        case Gate::cz:
            two_qubit = true;
            u4[0][0] = 1.0; u4[1][1] = 1.0; u4[2][2] = 1.0; u4[3][3] = -1.0;
            break;
    }

    if (!two_qubit) {
        const int pos = n - 1 - op.q0;
        const std::uint64_t mask = 1ULL << pos;
        for (std::uint64_t r = 0; r < dim; ++r) {
            const int rb = static_cast<int>((r >> pos) & 1ULL);
            for (std::uint64_t c = 0; c < dim; ++c) {
                if ((r & ~mask) != (c & ~mask)) continue;
                const int cb = static_cast<int>((c >> pos) & 1ULL);
                m[r * dim + c] = u2[rb][cb];
            }
        }
    } else {
        const int p0 = n - 1 - op.q0;
        const int p1 = n - 1 - op.q1;
        const std::uint64_t mask = (1ULL << p0) | (1ULL << p1);
        for (std::uint64_t r = 0; r < dim; ++r) {
            const int r0 = static_cast<int>((r >> p0) & 1ULL);
            const int r1 = static_cast<int>((r >> p1) & 1ULL);
            for (std::uint64_t c = 0; c < dim; ++c) {
                if ((r & ~mask) != (c & ~mask)) continue;
                const int c0 = static_cast<int>((c >> p0) & 1ULL);
                const int c1 = static_cast<int>((c >> p1) & 1ULL);
                m[r * dim + c] = u4[(r0 << 1) | r1][(c0 << 1) | c1];
            }
        }
    }
    return m;
}

}  // namespace

std::map<std::string, double> dense_probabilities(const CircuitIR& c) {
    if (c.num_qubits > 12) {
        throw std::runtime_error("dense oracle capped at 12 qubits");
    }
    const std::uint64_t dim = 1ULL << c.num_qubits;
    std::vector<complexd> state(dim, complexd{0.0});
    state[0] = 1.0;
    for (const auto& op : c.ops) {
        const auto m = dense_gate_matrix(op, c.num_qubits);
        std::vector<complexd> next(dim, complexd{0.0});
        for (std::uint64_t r = 0; r < dim; ++r) {
            complexd acc{0.0};
            for (std::uint64_t k = 0; k < dim; ++k) acc += m[r * dim + k] * state[k];
            next[r] = acc;
        }
        state = std::move(next);
    }
    std::map<std::string, double> probs;
    for (std::uint64_t i = 0; i < dim; ++i) {
        const double p = std::norm(state[i]);
        if (p > 1e-12) probs[bitstring(c.num_qubits, i)] = p;
    }
    return probs;
}

namespace {

// Regularized upper incomplete gamma Q(a, x) by series / continued fraction.
double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::runtime_error("gamma_q domain");
    if (x == 0.0) return 1.0;
    const double gln = std::lgamma(a);
    if (x < a + 1.0) {
        // P(a,x) series, Q = 1 - P
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-15) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - gln);
    }
    // Lentz continued fraction for Q directly
    const double fpmin = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - gln) * h;
}

}  // namespace

double chi2_sf(double stat, int dof) {
    if (dof < 1) return 1.0;
    return gamma_q(dof / 2.0, stat / 2.0);
}

double chi2_pvalue(const qbatch::sim::MeasurementCounts& counts,
                   const std::map<std::string, double>& probs) {
    const double shots = static_cast<double>(counts.total_shots);
    double stat = 0.0;
    int bins = 0;
    double rest_expected = 0.0;
    double rest_observed = 0.0;
    double mass = 0.0;
    for (const auto& [bits, p] : probs) {
        mass += p;
        const double expected = p * shots;
        const auto it = counts.counts.find(bits);
        const double observed =
            it == counts.counts.end() ? 0.0 : static_cast<double>(it->second);
        if (expected < 5.0) {
            rest_expected += expected;
            rest_observed += observed;
            continue;
        }
        stat += (observed - expected) * (observed - expected) / expected;
        ++bins;
    }
    // outcomes the exact distribution assigns (numerically) zero probability
    for (const auto& [bits, count] : counts.counts) {
        if (probs.find(bits) == probs.end()) rest_observed += static_cast<double>(count);
    }
    rest_expected += (1.0 - mass) * shots;
    if (rest_expected >= 5.0) {
        stat += (rest_observed - rest_expected) * (rest_observed - rest_expected) /
                rest_expected;
        ++bins;
    }
    return chi2_sf(stat, bins - 1);
}

}  // namespace oracle
