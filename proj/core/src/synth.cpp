#include "mlsim/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mlsim/errors.hpp"
#include "mlsim/rng.hpp"

namespace mlsim {

void SynthConfig::validate() const {
    if (n_nodes < 2) throw InputError("synth: need at least 2 nodes");
    if (layers.empty()) throw InputError("synth: need at least 1 layer");
    std::set<std::string> layer_names, attr_names;
    for (const auto& l : layers) {
        if (l.name.empty()) throw InputError("synth: empty layer name");
        if (!layer_names.insert(l.name).second)
            throw InputError("synth: duplicate layer '" + l.name + "'");
        if (!(l.rate > 0.0) || !std::isfinite(l.rate))
            throw InputError("synth: layer '" + l.name + "' rate must be > 0");
        if (!(l.dispersion > 0.0) || !std::isfinite(l.dispersion))
            throw InputError("synth: layer '" + l.name + "' dispersion must be > 0");
    }
    for (const auto& a : attributes) {
        if (a.name.empty()) throw InputError("synth: empty attribute name");
        if (!attr_names.insert(a.name).second)
            throw InputError("synth: duplicate attribute '" + a.name + "'");
    }
    for (const auto& h : homophily) {
        if (!layer_names.count(h.layer))
            throw InputError("synth: homophily references unknown layer '" + h.layer + "'");
        if (!attr_names.count(h.attribute))
            throw InputError("synth: homophily references unknown attribute '" + h.attribute +
                             "'");
        if (h.strength < 0.0 || !std::isfinite(h.strength))
            throw InputError("synth: homophily strength must be >= 0");
    }
    if (layer_coupling < 0.0 || layer_coupling > 1.0)
        throw InputError("synth: layer coupling must be in [0, 1]");
    if (cross_link_mode) {
        const bool has_cat = std::any_of(attributes.begin(), attributes.end(), [](const auto& a) {
            return a.kind == AttrKind::categorical;
        });
        if (!has_cat)
            throw InputError("synth: cross-link mode needs a categorical attribute");
    }
}

double homophily_multiplier(AttrKind kind, double h, double xi, double xj, double sigma) {
    if (kind == AttrKind::categorical) return xi == xj ? 1.0 + h : 1.0;
    if (sigma <= 0.0) return 1.0;
    return std::exp(-h * std::abs(xi - xj) / sigma);
}

namespace {

std::string node_name(std::size_t index, std::size_t width) {
    std::string digits = std::to_string(index);
    return "n" + std::string(width - digits.size(), '0') + digits;
}

} // namespace

SynthData generate(const SynthConfig& config) {
    config.validate();
    const std::size_t n = config.n_nodes;

    SynthData data;
    std::size_t width = std::to_string(n - 1).size();
    width = std::max<std::size_t>(width, 3);
    for (std::size_t i = 0; i < n; ++i) data.nodes.intern(node_name(i, width));

    // Attribute values, one derived stream per attribute.
    std::vector<std::vector<double>> attr_values(config.attributes.size());
    std::vector<double> attr_sigma(config.attributes.size(), 1.0);
    for (std::size_t a = 0; a < config.attributes.size(); ++a) {
        const auto& spec = config.attributes[a];
        rng::Engine g = rng::make_engine(config.seed, "attr:" + spec.name);
        auto& values = attr_values[a];
        values.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (spec.kind == AttrKind::categorical) {
                values[i] = rng::uniform01(g) < 0.5 ? 0.0 : 1.0;
                data.attrs.set_categorical(NodeId(i), spec.name, values[i] == 0.0 ? "a" : "b");
            } else {
                values[i] = rng::normal(g);
                data.attrs.set_numeric(NodeId(i), spec.name, values[i]);
            }
        }
        if (spec.kind == AttrKind::numeric) {
            double mean = 0.0;
            for (double v : values) mean += v;
            mean /= double(n);
            double var = 0.0;
            for (double v : values) var += (v - mean) * (v - mean);
            attr_sigma[a] = std::sqrt(var / double(n));
        }
    }
    data.attrs.finalize();

    // The group driving cross-link planting: first categorical attribute.
    std::ptrdiff_t group_attr = -1;
    if (config.cross_link_mode) {
        for (std::size_t a = 0; a < config.attributes.size(); ++a)
            if (config.attributes[a].kind == AttrKind::categorical) {
                group_attr = std::ptrdiff_t(a);
                break;
            }
    }

    std::vector<NodeId> node_set(n);
    for (std::size_t i = 0; i < n; ++i) node_set[i] = NodeId(i);

    const double rho = config.layer_coupling;
    double shared_dispersion = 0.0;
    for (const auto& l : config.layers) shared_dispersion += l.dispersion;
    shared_dispersion /= double(config.layers.size());

    for (const auto& lspec : config.layers) {
        DirectedCountLayer layer;
        layer.name = lspec.name;
        layer.node_set = node_set;

        // Homophily entries targeting this layer, as attribute indices.
        std::vector<std::pair<std::size_t, double>> active;
        for (const auto& h : config.homophily)
            if (h.layer == lspec.name)
                for (std::size_t a = 0; a < config.attributes.size(); ++a)
                    if (config.attributes[a].name == h.attribute)
                        active.emplace_back(a, h.strength);

        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                double mult = 1.0;
                for (const auto& [a, h] : active)
                    mult *= homophily_multiplier(config.attributes[a].kind, h, attr_values[a][i],
                                                 attr_values[a][j], attr_sigma[a]);
                if (group_attr >= 0 && attr_values[std::size_t(group_attr)][i] !=
                                           attr_values[std::size_t(group_attr)][j])
                    mult = 0.0; // cross-group base rate suppressed; planted below
                if (mult == 0.0) continue;

                double latent;
                {
                    rng::Engine g = rng::make_engine(config.seed, "pair:" + lspec.name, i, j);
                    latent = (1.0 - rho) * rng::gamma(g, lspec.dispersion) / lspec.dispersion;
                }
                if (rho > 0.0) {
                    rng::Engine g = rng::make_engine(config.seed, "pair-shared", i, j);
                    latent += rho * rng::gamma(g, shared_dispersion) / shared_dispersion;
                }

                rng::Engine g = rng::make_engine(config.seed, "count:" + lspec.name, i, j);
                const double count = double(rng::poisson(g, lspec.rate * mult * latent));
                if (count > 0.0) layer.add(NodeId(i), NodeId(j), count);
            }
        }

        if (group_attr >= 0) {
            const auto& group = attr_values[std::size_t(group_attr)];
            for (std::size_t i = 0; i < n; ++i) {
                double sumsq = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    if (i == j) continue;
                    const double c = layer.at(NodeId(i), NodeId(j));
                    sumsq += c * c;
                }
                std::vector<std::size_t> others;
                for (std::size_t j = 0; j < n; ++j)
                    if (group[j] != group[i]) others.push_back(j);
                if (others.empty()) continue;
                rng::Engine g = rng::make_engine(config.seed, "cross:" + lspec.name, i);
                const std::size_t target = others[rng::uniform_below(g, others.size())];
                // Strictly above 3 * sqrt(sum of squared counts), so at
                // alpha = 2 this link takes > 90% of the node's directed
                // weight (c^2 > 9 * sumsq) with margin to spare for rounding.
                const double c = std::max(1.0, std::floor(3.0 * std::sqrt(sumsq)) + 1.0);
                layer.entries[pack_pair(NodeId(i), NodeId(target))] = c;
            }
        }

        data.layers.push_back(std::move(layer));
    }
    return data;
}

} // namespace mlsim
