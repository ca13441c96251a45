#include "qbatch/mps.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "qbatch/errors.hpp"
#include "qbatch/linalg.hpp"

namespace qbatch::sim {

namespace {

using complexd = std::complex<double>;
using Mat2 = std::array<std::array<complexd, 2>, 2>;
using Mat4 = std::array<std::array<complexd, 4>, 4>;

// Site tensor with shape [left, 2, right], laid out as data[(a*2+s)*right+b].
struct Site {
    int left = 1;
    int right = 1;
    std::vector<complexd> data;

    complexd& at(int a, int s, int b) { return data[(a * 2 + s) * right + b]; }
    complexd at(int a, int s, int b) const { return data[(a * 2 + s) * right + b]; }
};

Mat2 single_qubit_matrix(const qasm::GateOp& op) {
    const double inv_sqrt2 = 0.70710678118654752440;
    switch (op.gate) {
        case qasm::Gate::h:
            return {{{complexd(inv_sqrt2), complexd(inv_sqrt2)},
                     {complexd(inv_sqrt2), complexd(-inv_sqrt2)}}};
        case qasm::Gate::x:
            return {{{complexd(0.0), complexd(1.0)}, {complexd(1.0), complexd(0.0)}}};
        case qasm::Gate::rx: {
            const double c = std::cos(op.angle / 2.0), s = std::sin(op.angle / 2.0);
            return {{{complexd(c), complexd(0.0, -s)}, {complexd(0.0, -s), complexd(c)}}};
        }
        case qasm::Gate::rz: {
            return {{{std::polar(1.0, -op.angle / 2.0), complexd(0.0)},
                     {complexd(0.0), std::polar(1.0, op.angle / 2.0)}}};
        }
        default:
            throw ContractError("mps: not a single-qubit gate");
    }
}

// 4x4 matrix in the (s_first, s_second) basis of two adjacent sites;
// control_second marks a cx whose control sits on the second site.
Mat4 two_qubit_matrix(qasm::Gate gate, bool control_second) {
    Mat4 m{};
    auto set_identity = [&] {
        for (int i = 0; i < 4; ++i) m[i][i] = 1.0;
    };
    switch (gate) {
        case qasm::Gate::cx:
            if (!control_second) {
                m[0][0] = m[1][1] = 1.0;  // control 0: identity
                m[2][3] = m[3][2] = 1.0;  // control 1: flip target
            } else {
                m[0][0] = m[2][2] = 1.0;
                m[1][3] = m[3][1] = 1.0;
            }
            return m;
        case qasm::Gate::cz:
            set_identity();
            m[3][3] = -1.0;
            return m;
        default:
            throw ContractError("mps: not a two-qubit gate");
    }
}

Mat4 swap_matrix() {
    Mat4 m{};
    m[0][0] = m[3][3] = 1.0;
    m[1][2] = m[2][1] = 1.0;
    return m;
}

class MpsState {
public:
    MpsState(int num_qubits, int max_bond)
        : n_(num_qubits), max_bond_(max_bond), sites_(num_qubits) {
        for (auto& site : sites_) {
            site.left = site.right = 1;
            site.data.assign(2, complexd{0.0});
            site.at(0, 0, 0) = 1.0;
        }
    }

    void apply_single(int q, const Mat2& u) {
        Site& site = sites_[q];
        Site out = site;
        for (int a = 0; a < site.left; ++a) {
            for (int b = 0; b < site.right; ++b) {
                const complexd v0 = site.at(a, 0, b);
                const complexd v1 = site.at(a, 1, b);
                out.at(a, 0, b) = u[0][0] * v0 + u[0][1] * v1;
                out.at(a, 1, b) = u[1][0] * v0 + u[1][1] * v1;
            }
        }
        site = std::move(out);
    }

    // Applies a 4x4 gate to adjacent sites (i, i+1) via contraction and SVD.
    void apply_adjacent(int i, const Mat4& u) {
        const Site& a = sites_[i];
        const Site& b = sites_[i + 1];
        const int dl = a.left, dm = a.right, dr = b.right;

        // theta[al, s, t, br] = sum_m a[al,s,m] b[m,t,br]
        std::vector<complexd> theta(static_cast<std::size_t>(dl) * 4 * dr, complexd{0.0});
        for (int al = 0; al < dl; ++al) {
            for (int s = 0; s < 2; ++s) {
                for (int m = 0; m < dm; ++m) {
                    const complexd av = a.at(al, s, m);
                    if (av == complexd{0.0}) continue;
                    for (int t = 0; t < 2; ++t) {
                        for (int br = 0; br < dr; ++br) {
                            theta[((al * 2 + s) * 2 + t) * dr + br] += av * b.at(m, t, br);
                        }
                    }
                }
            }
        }
        // gate in the (s,t) index pair
        std::vector<complexd> rotated(theta.size(), complexd{0.0});
        for (int al = 0; al < dl; ++al) {
            for (int st = 0; st < 4; ++st) {
                for (int st2 = 0; st2 < 4; ++st2) {
                    const complexd g = u[st][st2];
                    if (g == complexd{0.0}) continue;
                    for (int br = 0; br < dr; ++br) {
                        rotated[(al * 4 + st) * dr + br] +=
                            g * theta[(al * 4 + st2) * dr + br];
                    }
                }
            }
        }
        // SVD of the (dl*2) x (2*dr) matrix
        std::vector<complexd> uu, vh;
        std::vector<double> sv;
        svd(dl * 2, 2 * dr, rotated, uu, sv, vh);

        int keep = static_cast<int>(sv.size());
        // drop exact numerical zeros, then enforce the bond cap
        while (keep > 1 && sv[keep - 1] < 1e-14) --keep;
        keep = std::min(keep, max_bond_);
        for (std::size_t k = keep; k < sv.size(); ++k) {
            truncation_loss_ += sv[k] * sv[k];
        }
        max_bond_reached_ = std::max(max_bond_reached_, keep);

        Site na;
        na.left = dl;
        na.right = keep;
        na.data.assign(static_cast<std::size_t>(dl) * 2 * keep, complexd{0.0});
        const int kfull = static_cast<int>(sv.size());
        for (int al = 0; al < dl; ++al) {
            for (int s = 0; s < 2; ++s) {
                for (int k = 0; k < keep; ++k) {
                    na.at(al, s, k) = uu[(al * 2 + s) * kfull + k];
                }
            }
        }
        Site nb;
        nb.left = keep;
        nb.right = dr;
        nb.data.assign(static_cast<std::size_t>(keep) * 2 * dr, complexd{0.0});
        for (int k = 0; k < keep; ++k) {
            for (int t = 0; t < 2; ++t) {
                for (int br = 0; br < dr; ++br) {
                    nb.at(k, t, br) = sv[k] * vh[k * (2 * dr) + (t * dr + br)];
                }
            }
        }
        sites_[i] = std::move(na);
        sites_[i + 1] = std::move(nb);
    }

    void apply_two_qubit(const qasm::GateOp& op) {
        int lo = op.q0, hi = op.q1;
        bool control_second = false;
        if (lo > hi) {
            std::swap(lo, hi);
            control_second = op.gate == qasm::Gate::cx;
        }
        // route hi down to lo+1
        for (int k = hi - 1; k > lo; --k) apply_adjacent(k, swap_matrix());
        apply_adjacent(lo, two_qubit_matrix(op.gate, control_second));
        for (int k = lo + 1; k < hi; ++k) apply_adjacent(k, swap_matrix());
    }

    void apply(const qasm::GateOp& op) {
        if (qasm::gate_is_two_qubit(op.gate)) {
            apply_two_qubit(op);
        } else {
            apply_single(op.q0, single_qubit_matrix(op));
        }
    }

    // Brings every site except the first into right-canonical form so the
    // sampling walk sees normalized conditionals.
    void right_canonicalize() {
        for (int i = n_ - 1; i > 0; --i) {
            Site& site = sites_[i];
            const int rows = site.left;
            const int cols = 2 * site.right;
            std::vector<complexd> m(site.data.begin(), site.data.end());
            // reshape [left, (2*right)]: data layout already matches
            std::vector<complexd> uu, vh;
            std::vector<double> sv;
            svd(rows, cols, m, uu, sv, vh);
            const int k = static_cast<int>(sv.size());

            Site ns;
            ns.left = k;
            ns.right = site.right;
            ns.data.assign(static_cast<std::size_t>(k) * cols, complexd{0.0});
            for (int r = 0; r < k; ++r) {
                for (int c = 0; c < cols; ++c) ns.data[r * cols + c] = vh[r * cols + c];
            }
            sites_[i] = std::move(ns);

            // absorb U * diag(S) into the left neighbour
            Site& prev = sites_[i - 1];
            Site np;
            np.left = prev.left;
            np.right = k;
            np.data.assign(static_cast<std::size_t>(prev.left) * 2 * k, complexd{0.0});
            for (int a = 0; a < prev.left; ++a) {
                for (int s = 0; s < 2; ++s) {
                    for (int r = 0; r < k; ++r) {
                        complexd acc{0.0};
                        for (int b = 0; b < prev.right; ++b) {
                            acc += prev.at(a, s, b) * uu[b * k + r] * sv[r];
                        }
                        np.at(a, s, r) = acc;
                    }
                }
            }
            sites_[i - 1] = std::move(np);
        }
    }

    // One shot: sequential conditional measurement along the chain. Only a
    // boundary vector is cloned per shot; the state itself is untouched.
    std::string sample(Rng& rng) const {
        std::string bits(n_, '0');
        std::vector<complexd> v{complexd{1.0}};
        for (int i = 0; i < n_; ++i) {
            const Site& site = sites_[i];
            std::vector<complexd> w0(site.right, complexd{0.0});
            std::vector<complexd> w1(site.right, complexd{0.0});
            for (int a = 0; a < site.left; ++a) {
                const complexd va = v[a];
                if (va == complexd{0.0}) continue;
                for (int b = 0; b < site.right; ++b) {
                    w0[b] += va * site.at(a, 0, b);
                    w1[b] += va * site.at(a, 1, b);
                }
            }
            double p0 = 0.0, p1 = 0.0;
            for (const auto& x : w0) p0 += std::norm(x);
            for (const auto& x : w1) p1 += std::norm(x);
            const double total = p0 + p1;
            const double u = rng.next_double() * total;
            const bool one = u >= p0;
            if (one) bits[i] = '1';
            auto& w = one ? w1 : w0;
            const double norm = std::sqrt(one ? p1 : p0);
            if (norm > 0.0) {
                for (auto& x : w) x /= norm;
            }
            v = std::move(w);
        }
        return bits;
    }

    void enumerate(std::map<std::string, double>& out, double prune) const {
        double norm2 = 0.0;
        {
            const Site& s0 = sites_[0];
            for (const auto& x : s0.data) norm2 += std::norm(x);
        }
        std::string bits(n_, '0');
        std::vector<complexd> v{complexd{1.0}};
        walk(0, bits, v, out, prune, norm2);
    }

    double truncation_loss() const { return truncation_loss_; }
    int max_bond_reached() const { return max_bond_reached_; }

private:
    void walk(int i, std::string& bits, const std::vector<complexd>& v,
              std::map<std::string, double>& out, double prune, double norm2) const {
        if (i == n_) {
            const double p = std::norm(v[0]) / norm2;
            if (p > prune) out[bits] = p;
            return;
        }
        const Site& site = sites_[i];
        for (int s = 0; s < 2; ++s) {
            std::vector<complexd> w(site.right, complexd{0.0});
            double mass = 0.0;
            for (int a = 0; a < site.left; ++a) {
                const complexd va = v[a];
                if (va == complexd{0.0}) continue;
                for (int b = 0; b < site.right; ++b) w[b] += va * site.at(a, s, b);
            }
            for (const auto& x : w) mass += std::norm(x);
            // prefix mass upper-bounds every leaf probability in the subtree
            if (mass <= prune * norm2) continue;
            bits[i] = static_cast<char>('0' + s);
            walk(i + 1, bits, w, out, prune, norm2);
            bits[i] = '0';
        }
    }

    int n_;
    int max_bond_;
    std::vector<Site> sites_;
    double truncation_loss_ = 0.0;
    int max_bond_reached_ = 1;
};

MpsState evolve_mps(const qasm::CircuitIR& c, int max_bond) {
    c.validate();
    if (max_bond < 1) throw ParameterError("run_mps: max_bond must be >= 1");
    MpsState state(c.num_qubits, max_bond);
    for (const auto& op : c.ops) state.apply(op);
    state.right_canonicalize();
    return state;
}

}  // namespace

MpsResult run_mps(const qasm::CircuitIR& c, std::int64_t shots, std::uint64_t seed,
                  int max_bond) {
    if (shots < 1) throw ParameterError("run_mps: shots must be >= 1");
    if (!c.measured) throw ContractError("run_mps: circuit has no terminal measurement");
    const MpsState state = evolve_mps(c, max_bond);
    Rng rng(seed);
    MpsResult result;
    result.counts.total_shots = shots;
    for (std::int64_t s = 0; s < shots; ++s) ++result.counts.counts[state.sample(rng)];
    result.truncation_loss = state.truncation_loss();
    result.max_bond_reached = state.max_bond_reached();
    return result;
}

std::map<std::string, double> mps_probabilities(const qasm::CircuitIR& c, int max_bond,
                                                double prune) {
    if (c.num_qubits > 20) {
        throw CapacityError("mps_probabilities: enumeration capped at 20 qubits");
    }
    const MpsState state = evolve_mps(c, max_bond);
    std::map<std::string, double> out;
    state.enumerate(out, prune);
    return out;
}

}  // namespace qbatch::sim
