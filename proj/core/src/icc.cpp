#include "mlsim/icc.hpp"

#include <cmath>

#include "accum.hpp"
#include "mlsim/errors.hpp"

namespace mlsim {

const char* icc_convention_name(IccConvention c) {
    return c == IccConvention::canonical ? "canonical" : "strict-literal";
}

IccConvention icc_convention_from_name(const std::string& s) {
    if (s == "canonical") return IccConvention::canonical;
    if (s == "strict-literal") return IccConvention::strict_literal;
    throw InputError("unknown convention '" + s + "' (canonical | strict-literal)");
}

IccResult weighted_icc_samples(std::span<const EdgeSample> samples, IccConvention convention) {
    if (samples.empty()) throw UndefinedStatError("no linked pairs with attribute values");

    detail::KahanSum sw, swx;
    for (const auto& s : samples) {
        sw.add(s.w);
        swx.add(s.w * (s.xi + s.xj));
    }
    const double total_w = sw.get();
    if (total_w <= 0.0) throw UndefinedStatError("total link weight is zero");
    const double x_bar = swx.get() / (2.0 * total_w);

    detail::KahanSum s_num, t_num;
    for (const auto& s : samples) {
        const double di = s.xi - x_bar;
        const double dj = s.xj - x_bar;
        s_num.add(s.w * (di * di + dj * dj));
        t_num.add(s.w * (di * dj));
    }

    IccResult res;
    res.x_bar = x_bar;
    res.total_weight = total_w;
    res.pair_count = samples.size();
    res.convention = convention;
    res.s_sq = s_num.get() / (2.0 * total_w);
    res.t_sq = convention == IccConvention::canonical ? t_num.get() / total_w
                                                      : t_num.get() / (2.0 * total_w);
    if (res.s_sq <= 0.0)
        throw UndefinedStatError("attribute is constant over the linked sample (s^2 = 0)");
    res.r = res.t_sq / res.s_sq;
    return res;
}

IccResult weighted_icc(const WeightedLayer& layer, const AttributeTable& attrs,
                       const std::string& variable, IccConvention convention) {
    const Variable& var = attrs.require(variable);
    std::vector<EdgeSample> samples;
    samples.reserve(layer.edges.size());
    std::size_t excluded = 0;
    for (const auto& e : layer.edges) {
        auto i = var.values.find(e.a);
        auto j = var.values.find(e.b);
        if (i == var.values.end() || j == var.values.end()) {
            ++excluded;
            continue;
        }
        samples.push_back({i->second, j->second, e.w});
    }
    if (samples.empty())
        throw UndefinedStatError("layer '" + layer.name + "', variable '" + variable +
                                 "': no linked pair has values on both endpoints");
    IccResult res = weighted_icc_samples(samples, convention);
    res.excluded_pairs = excluded;
    res.alpha = layer.alpha;
    res.variable = variable;
    res.layer = layer.name;
    return res;
}

std::vector<IccSweepPoint> icc_alpha_sweep(const DirectedCountLayer& counts,
                                           const AttributeTable& attrs,
                                           const std::string& variable,
                                           std::span<const double> alphas,
                                           IccConvention convention) {
    std::vector<IccSweepPoint> out;
    out.reserve(alphas.size());
    for (double alpha : alphas) {
        IccSweepPoint point;
        point.alpha = alpha;
        try {
            point.result = weighted_icc(build_layer(counts, alpha), attrs, variable, convention);
        } catch (const UndefinedStatError& e) {
            point.error = e.what();
        }
        out.push_back(std::move(point));
    }
    return out;
}

} // namespace mlsim
