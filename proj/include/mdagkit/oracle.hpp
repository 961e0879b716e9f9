#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "mdagkit/errors.hpp"
#include "mdagkit/mdag.hpp"
#include "mdagkit/projection.hpp"
#include "mdagkit/separation.hpp"

namespace mdagkit {

// Dense joint probability table over a Cartesian product state space.  The
// last variable varies fastest.  All arithmetic is exact up to floating
// point; nothing here is Monte Carlo.
struct DiscreteDistribution {
    std::vector<std::string> vars;
    std::vector<int> cards;
    std::vector<double> p;

    std::size_t cells() const { return p.size(); }

    int var_index(const std::string& name) const {
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (vars[i] == name) return static_cast<int>(i);
        throw DomainError("unknown variable '" + name + "'");
    }

    std::vector<std::size_t> strides() const {
        std::vector<std::size_t> s(vars.size());
        std::size_t acc = 1;
        for (int i = static_cast<int>(vars.size()) - 1; i >= 0; --i) {
            s[i] = acc;
            acc *= cards[i];
        }
        return s;
    }

    double total_mass() const {
        double m = 0;
        for (double x : p) m += x;
        return m;
    }

    void check_valid(double tol = 1e-12) const {
        for (double x : p)
            if (x < 0) throw DomainError("negative probability entry");
        if (std::abs(total_mass() - 1.0) > tol)
            throw DomainError("probability table mass differs from 1");
    }
};

// A canonical DAG together with one conditional probability table per vertex.
// Table layout: rows indexed by the joint state of the parents (in vertex
// index order, last parent fastest), each row a distribution over the vertex.
struct StructuralModel {
    MDag dag;  // no facets
    std::vector<int> cards;
    std::vector<std::vector<double>> cpt;
};

namespace detail {

inline std::size_t state_space_size(const std::vector<int>& cards, std::size_t cap = 10000000) {
    std::size_t n = 1;
    for (int c : cards) {
        n *= static_cast<std::size_t>(c);
        if (n > cap) throw DomainError("state space exceeds the cell cap");
    }
    return n;
}

// Deterministic uniform(0,1) and flat-simplex sampling on top of the fully
// specified mt19937_64 stream, so seeds reproduce across platforms.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline void sample_simplex(std::mt19937_64& rng, double* out, int k) {
    double sum = 0;
    for (int i = 0; i < k; ++i) {
        double u = uniform01(rng);
        out[i] = -std::log1p(-u);  // Exp(1)
        sum += out[i];
    }
    for (int i = 0; i < k; ++i) out[i] /= sum;
}

}  // namespace detail

// Exact joint distribution of a structural model: the product of the
// conditional tables along a topological order (every full state is a plain
// product, so the order only matters conceptually).
inline DiscreteDistribution joint(const StructuralModel& model) {
    int n = model.dag.size();
    DiscreteDistribution out;
    out.vars = model.dag.vertex_names();
    out.cards = model.cards;
    std::size_t cells = detail::state_space_size(out.cards);
    out.p.assign(cells, 0.0);
    auto strides = out.strides();
    std::vector<int> state(n, 0);
    for (std::size_t idx = 0; idx < cells; ++idx) {
        double prob = 1.0;
        for (int v = 0; v < n && prob > 0; ++v) {
            std::size_t row = 0;
            for (int par : model.dag.parents(v)) row = row * model.cards[par] + state[par];
            prob *= model.cpt[v][row * model.cards[v] + state[v]];
        }
        out.p[idx] = prob;
        for (int v = n - 1; v >= 0; --v) {
            if (++state[v] < out.cards[v]) break;
            state[v] = 0;
        }
    }
    return out;
}

// Exact sum over the dropped variables; keep preserves the original relative
// variable order.
inline DiscreteDistribution marginalize(const DiscreteDistribution& p,
                                        const std::vector<std::string>& keep) {
    std::vector<int> kept;
    for (const auto& k : keep) p.var_index(k);  // validation
    for (std::size_t i = 0; i < p.vars.size(); ++i)
        for (const auto& k : keep)
            if (p.vars[i] == k) kept.push_back(static_cast<int>(i));

    DiscreteDistribution out;
    for (int i : kept) {
        out.vars.push_back(p.vars[i]);
        out.cards.push_back(p.cards[i]);
    }
    out.p.assign(detail::state_space_size(out.cards), 0.0);
    auto out_strides = out.strides();
    auto in_strides = p.strides();
    std::vector<int> state(p.vars.size(), 0);
    for (std::size_t idx = 0; idx < p.cells(); ++idx) {
        std::size_t oidx = 0;
        for (std::size_t k = 0; k < kept.size(); ++k) oidx += out_strides[k] * state[kept[k]];
        out.p[oidx] += p.p[idx];
        for (int v = static_cast<int>(p.vars.size()) - 1; v >= 0; --v) {
            if (++state[v] < p.cards[v]) break;
            state[v] = 0;
        }
    }
    return out;
}

// Conditional independence X_A ⫫ X_B | X_C up to tol, checked on every
// context state with positive mass.
inline bool ci_holds(const DiscreteDistribution& p, const std::vector<std::string>& a,
                     const std::vector<std::string>& b, const std::vector<std::string>& c,
                     double tol) {
    std::vector<std::string> abc;
    for (const auto& groups : {&a, &b, &c})
        for (const auto& v : *groups) abc.push_back(v);
    DiscreteDistribution m = marginalize(p, abc);

    auto group_indices = [&](const std::vector<std::string>& g) {
        std::vector<int> idx;
        for (std::size_t i = 0; i < m.vars.size(); ++i)
            for (const auto& v : g)
                if (m.vars[i] == v) idx.push_back(static_cast<int>(i));
        return idx;
    };
    std::vector<int> ia = group_indices(a), ib = group_indices(b), ic = group_indices(c);

    auto key_of = [&](const std::vector<int>& state, const std::vector<int>& idx) {
        std::size_t key = 0;
        for (int i : idx) key = key * m.cards[i] + state[i];
        return key;
    };

    // accumulate p(a,c), p(b,c), p(c) keyed by flattened group states
    std::map<std::pair<std::size_t, std::size_t>, double> pac, pbc;
    std::map<std::size_t, double> pc;
    std::vector<int> state(m.vars.size(), 0);
    for (std::size_t idx = 0; idx < m.cells(); ++idx) {
        std::size_t ka = key_of(state, ia), kb = key_of(state, ib), kc = key_of(state, ic);
        pac[{ka, kc}] += m.p[idx];
        pbc[{kb, kc}] += m.p[idx];
        pc[kc] += m.p[idx];
        for (int v = static_cast<int>(m.vars.size()) - 1; v >= 0; --v) {
            if (++state[v] < m.cards[v]) break;
            state[v] = 0;
        }
    }

    state.assign(m.vars.size(), 0);
    for (std::size_t idx = 0; idx < m.cells(); ++idx) {
        std::size_t ka = key_of(state, ia), kb = key_of(state, ib), kc = key_of(state, ic);
        double mass_c = pc[kc];
        if (mass_c > 0) {
            double lhs = m.p[idx] / mass_c;
            double rhs = (pac[{ka, kc}] / mass_c) * (pbc[{kb, kc}] / mass_c);
            if (std::abs(lhs - rhs) > tol) return false;
        }
        for (int v = static_cast<int>(m.vars.size()) - 1; v >= 0; --v) {
            if (++state[v] < m.cards[v]) break;
            state[v] = 0;
        }
    }
    return true;
}

// Builds the canonical DAG of g, samples every conditional table from a flat
// simplex (one shared mt19937_64 stream seeded as given), and returns the
// exact margin over the observed vertices.  Latent cardinalities default to
// the product of the facet members' cardinalities, the safe bound for
// representing any distribution in the marginal model; per-latent overrides
// are keyed by latent name.
inline DiscreteDistribution sample_marginal(const MDag& g, const std::vector<int>& obs_cards,
                                            std::uint64_t seed,
                                            const std::map<std::string, int>& latent_cards = {}) {
    if (static_cast<int>(obs_cards.size()) != g.size())
        throw DomainError("sample_marginal needs one cardinality per observed vertex");
    for (int c : obs_cards)
        if (c < 2) throw DomainError("cardinalities must be at least 2");

    CanonicalDag canon = canonical_dag(g);
    StructuralModel model;
    model.dag = canon.graph;
    model.cards.assign(model.dag.size(), 0);
    for (int v = 0; v < g.size(); ++v)
        model.cards[model.dag.index_of(g.name(v))] = obs_cards[v];
    for (const auto& [latent, face] : canon.latents) {
        int card = 1;
        for (const auto& member : face) card *= obs_cards[g.index_of(member)];
        auto it = latent_cards.find(latent);
        if (it != latent_cards.end()) card = it->second;
        if (card < 2) throw DomainError("latent cardinality must be at least 2");
        model.cards[model.dag.index_of(latent)] = card;
    }

    std::mt19937_64 rng(seed);
    model.cpt.resize(model.dag.size());
    for (int v = 0; v < model.dag.size(); ++v) {
        std::size_t rows = 1;
        for (int par : model.dag.parents(v)) rows *= model.cards[par];
        model.cpt[v].resize(rows * model.cards[v]);
        for (std::size_t r = 0; r < rows; ++r)
            detail::sample_simplex(rng, model.cpt[v].data() + r * model.cards[v],
                                   model.cards[v]);
    }

    DiscreteDistribution full = joint(model);
    return marginalize(full, g.vertex_names());
}

// The probabilistic fixing reweighting p*(x) = q(x_v) / p(x_v | x_mb(v)) p(x).
// No renormalization is applied; when p lies in the marginal model the result
// is a distribution, which the mass check enforces.
inline DiscreteDistribution fix_distribution(const DiscreteDistribution& p, const MDag& g,
                                             int v, const std::vector<double>& qv) {
    if (!is_fixable(g, v)) throw DomainError("vertex '" + g.name(v) + "' is not fixable");
    if (p.vars != g.vertex_names())
        throw DomainError("distribution variables must match the graph vertices");
    int vi = p.var_index(g.name(v));
    if (static_cast<int>(qv.size()) != p.cards[vi])
        throw DomainError("marginal for the fixed vertex has the wrong cardinality");
    double qmass = 0;
    for (double x : qv) {
        if (x <= 0) throw DomainError("the fixing marginal must be strictly positive");
        qmass += x;
    }
    if (std::abs(qmass - 1.0) > 1e-9)
        throw DomainError("the fixing marginal must sum to 1");

    VSet mb = markov_blanket_formula(g, v);
    std::vector<std::string> vmb_names{g.name(v)};
    std::vector<std::string> mb_names;
    for (int w : mb) {
        vmb_names.push_back(g.name(w));
        mb_names.push_back(g.name(w));
    }
    DiscreteDistribution p_vmb = marginalize(p, vmb_names);
    DiscreteDistribution p_mb = marginalize(p, mb_names);

    auto vmb_strides = p_vmb.strides();
    auto mb_strides = p_mb.strides();
    std::vector<int> vmb_src(p_vmb.vars.size()), mb_src(p_mb.vars.size());
    for (std::size_t i = 0; i < p_vmb.vars.size(); ++i) vmb_src[i] = p.var_index(p_vmb.vars[i]);
    for (std::size_t i = 0; i < p_mb.vars.size(); ++i) mb_src[i] = p.var_index(p_mb.vars[i]);

    DiscreteDistribution out = p;
    std::vector<int> state(p.vars.size(), 0);
    for (std::size_t idx = 0; idx < p.cells(); ++idx) {
        if (p.p[idx] > 0) {
            std::size_t kv = 0, km = 0;
            for (std::size_t i = 0; i < vmb_src.size(); ++i)
                kv += vmb_strides[i] * state[vmb_src[i]];
            for (std::size_t i = 0; i < mb_src.size(); ++i)
                km += mb_strides[i] * state[mb_src[i]];
            double denom_joint = p_vmb.p[kv];
            double denom_mb = mb_src.empty() ? 1.0 : p_mb.p[km];
            if (denom_joint <= 0 || denom_mb <= 0)
                throw DomainError("zero conditional p(x_v | x_mb) on a positive-mass state");
            double conditional = denom_joint / denom_mb;
            out.p[idx] = qv[state[vi]] / conditional * p.p[idx];
        }
        for (int w = static_cast<int>(p.vars.size()) - 1; w >= 0; --w) {
            if (++state[w] < p.cards[w]) break;
            state[w] = 0;
        }
    }
    if (std::abs(out.total_mass() - 1.0) > 1e-9)
        throw DomainError("fixing produced mass " + std::to_string(out.total_mass()) +
                          "; the input is outside the marginal model or degenerate");
    return out;
}

// CHSH functional over four binary ±1 variables (state 0 reads as -1 and
// state 1 as +1): E[bd|-+] + E[bd|+-] + E[bd|--] - E[bd|++], conditioning on
// the settings (x_a, x_c).
inline double chsh_value(const DiscreteDistribution& p, const std::string& a,
                         const std::string& b, const std::string& c, const std::string& d) {
    DiscreteDistribution m = marginalize(p, {a, b, c, d});
    for (int card : m.cards)
        if (card != 2) throw DomainError("chsh_value expects binary variables");
    int ia = m.var_index(a), ib = m.var_index(b), ic = m.var_index(c), id = m.var_index(d);
    auto strides = m.strides();
    auto expectation = [&](int xa, int xc) {
        double mass = 0, corr = 0;
        for (int xb = 0; xb < 2; ++xb)
            for (int xd = 0; xd < 2; ++xd) {
                double val = m.p[strides[ia] * xa + strides[ib] * xb + strides[ic] * xc +
                                 strides[id] * xd];
                mass += val;
                corr += val * (xb == xd ? 1.0 : -1.0);
            }
        if (mass <= 0) throw DomainError("zero-mass setting context in chsh_value");
        return corr / mass;
    };
    return expectation(0, 1) + expectation(1, 0) + expectation(0, 0) - expectation(1, 1);
}

// The distribution from the worked CHSH example: settings a, c independent
// and uniform; outcomes b, d anti-correlated when both settings are +1 and
// perfectly correlated otherwise, uniform over the two permitted states.  It
// satisfies X_a ⫫ X_c | X_b and X_d ⫫ X_a | X_c yet reaches the algebraic
// CHSH maximum of 4.
inline DiscreteDistribution example1_distribution() {
    DiscreteDistribution out;
    out.vars = {"a", "b", "c", "d"};
    out.cards = {2, 2, 2, 2};
    out.p.assign(16, 0.0);
    auto strides = out.strides();
    for (int xa = 0; xa < 2; ++xa)
        for (int xb = 0; xb < 2; ++xb)
            for (int xc = 0; xc < 2; ++xc)
                for (int xd = 0; xd < 2; ++xd) {
                    bool both_plus = xa == 1 && xc == 1;
                    bool permitted = both_plus ? (xb != xd) : (xb == xd);
                    if (permitted)
                        out.p[strides[0] * xa + strides[1] * xb + strides[2] * xc +
                              strides[3] * xd] = 0.125;
                }
    return out;
}

}  // namespace mdagkit
