#include "mlsim/events.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "csv.hpp"
#include "mlsim/errors.hpp"

namespace mlsim {

const char* channel_name(Channel c) {
    switch (c) {
        case Channel::call: return "call";
        case Channel::sms: return "sms";
        case Channel::proximity: return "proximity";
    }
    return "?";
}

Channel channel_from_name(const std::string& tag) {
    if (tag == "call") return Channel::call;
    if (tag == "sms") return Channel::sms;
    if (tag == "proximity") return Channel::proximity;
    throw InputError("unknown layer tag '" + tag + "'");
}

namespace {

using detail::parse_f64;
using detail::parse_i64;
using detail::split_csv;

struct RawEvent {
    std::int64_t timestamp;
    std::string source, target;
    Channel channel;
    double magnitude;
};

} // namespace

std::vector<InteractionEvent> parse_events(std::istream& in, const std::string& filename,
                                           NodeTable& nodes) {
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    std::vector<RawEvent> raw;
    std::set<std::string> names;

    while (detail::next_row(in, line, lineno)) {
        if (!header_seen) {
            auto h = split_csv(line);
            if (h != std::vector<std::string>{"timestamp", "source", "target", "layer", "magnitude"})
                throw ParseError(filename, lineno,
                                 "expected header 'timestamp,source,target,layer,magnitude'");
            header_seen = true;
            continue;
        }
        auto f = split_csv(line);
        if (f.size() != 5)
            throw ParseError(filename, lineno,
                             "expected 5 fields, got " + std::to_string(f.size()));
        RawEvent ev;
        ev.timestamp = parse_i64(f[0], filename, lineno, "timestamp");
        ev.source = f[1];
        ev.target = f[2];
        if (ev.source.empty() || ev.target.empty())
            throw ParseError(filename, lineno, "empty node identifier");
        if (ev.source == ev.target)
            throw ParseError(filename, lineno, "source equals target ('" + ev.source + "')");
        try {
            ev.channel = channel_from_name(f[3]);
        } catch (const InputError& e) {
            throw ParseError(filename, lineno, e.what());
        }
        ev.magnitude = parse_f64(f[4], filename, lineno, "magnitude");
        if (ev.channel != Channel::proximity && ev.magnitude != 1.0)
            throw ParseError(filename, lineno,
                             std::string(channel_name(ev.channel)) + " magnitude must be 1");
        raw.push_back(std::move(ev));
        names.insert(raw.back().source);
        names.insert(raw.back().target);
    }
    // Intern names in sorted order so node ids do not depend on row order.
    for (const auto& n : names) nodes.intern(n);

    std::vector<InteractionEvent> events;
    events.reserve(raw.size());
    for (const auto& r : raw)
        events.push_back({r.timestamp, *nodes.find(r.source), *nodes.find(r.target), r.channel,
                          r.magnitude});
    std::stable_sort(events.begin(), events.end(),
                     [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
    return events;
}

std::vector<ParticipantActivity> participant_activity(std::span<const InteractionEvent> events) {
    struct Acc {
        std::int64_t first = 0, last = 0;
        bool seen = false;
        long calls = 0, sms = 0;
        std::set<std::int64_t> prox_bins;
    };
    std::unordered_map<NodeId, Acc> acc;
    constexpr std::int64_t kBin = 300;

    for (const auto& e : events) {
        for (NodeId n : {e.source, e.target}) {
            Acc& a = acc[n];
            if (!a.seen) {
                a.first = a.last = e.timestamp;
                a.seen = true;
            } else {
                a.first = std::min(a.first, e.timestamp);
                a.last = std::max(a.last, e.timestamp);
            }
            switch (e.channel) {
                case Channel::call: ++a.calls; break;
                case Channel::sms: ++a.sms; break;
                case Channel::proximity:
                    a.prox_bins.insert(e.timestamp >= 0 ? e.timestamp / kBin
                                                        : (e.timestamp - kBin + 1) / kBin);
                    break;
            }
        }
    }

    std::vector<ParticipantActivity> out;
    out.reserve(acc.size());
    for (const auto& [node, a] : acc) {
        ParticipantActivity p;
        p.node = node;
        p.span_days = double(a.last - a.first) / 86400.0;
        p.call_count = a.calls;
        p.sms_count = a.sms;
        p.proximity_hours = double(a.prox_bins.size()) * (double(kBin) / 3600.0);
        out.push_back(p);
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.node < y.node; });
    return out;
}

std::pair<std::vector<NodeId>, std::vector<ParticipantActivity>>
filter_participants(std::span<const InteractionEvent> events, const ActivityThresholds& thresholds) {
    auto activity = participant_activity(events);
    std::vector<NodeId> kept;
    for (const auto& a : activity)
        if (a.meets(thresholds)) kept.push_back(a.node);
    return {std::move(kept), std::move(activity)};
}

std::vector<InteractionEvent> filter_proximity_window(std::span<const InteractionEvent> events,
                                                      std::int64_t utc_offset_seconds) {
    std::vector<InteractionEvent> out;
    out.reserve(events.size());
    for (const auto& e : events) {
        if (e.channel != Channel::proximity)
            throw InputError("time-of-day filter applies to proximity events only");
        const std::int64_t local = e.timestamp + utc_offset_seconds;
        std::int64_t days = local / 86400;
        std::int64_t rem = local % 86400;
        if (rem < 0) {
            rem += 86400;
            --days;
        }
        // Epoch day 0 (1970-01-01) was a Thursday; 0 = Monday here.
        const int dow = int(((days % 7) + 7 + 3) % 7);
        const int hour = int(rem / 3600);
        if (dow >= 5 || hour >= 18) out.push_back(e);
    }
    return out;
}

namespace {

std::unordered_set<NodeId> to_set(std::span<const NodeId> nodes) {
    return {nodes.begin(), nodes.end()};
}

} // namespace

DirectedCountLayer aggregate_counts(std::span<const InteractionEvent> events, Channel channel,
                                    std::span<const NodeId> node_set) {
    if (channel == Channel::proximity)
        throw InputError("aggregate_counts handles call/sms; use aggregate_proximity");
    auto members = to_set(node_set);
    DirectedCountLayer layer;
    layer.name = channel_name(channel);
    layer.node_set.assign(node_set.begin(), node_set.end());
    std::sort(layer.node_set.begin(), layer.node_set.end());
    for (const auto& e : events) {
        if (e.channel != channel) continue;
        if (!members.count(e.source) || !members.count(e.target)) continue;
        layer.add(e.source, e.target, 1.0);
    }
    return layer;
}

DirectedCountLayer aggregate_proximity(std::span<const InteractionEvent> events,
                                       std::span<const NodeId> node_set, double rssi_threshold,
                                       double gap_cap_seconds) {
    if (gap_cap_seconds <= 0.0 || !std::isfinite(gap_cap_seconds))
        throw InputError("gap cap must be a positive number of seconds");
    const double bin_width = gap_cap_seconds / 2.0;
    auto members = to_set(node_set);

    // Marked bins per unordered pair; a bin is marked when either endpoint's
    // scan sees the other at or above the threshold in that window.
    std::unordered_map<std::uint64_t, std::set<std::int64_t>> bins;
    for (const auto& e : events) {
        if (e.channel != Channel::proximity) continue;
        if (!members.count(e.source) || !members.count(e.target)) continue;
        if (e.magnitude < rssi_threshold) continue;
        const NodeId a = std::min(e.source, e.target);
        const NodeId b = std::max(e.source, e.target);
        bins[pack_pair(a, b)].insert(std::int64_t(std::floor(double(e.timestamp) / bin_width)));
    }

    DirectedCountLayer layer;
    layer.name = channel_name(Channel::proximity);
    layer.node_set.assign(node_set.begin(), node_set.end());
    std::sort(layer.node_set.begin(), layer.node_set.end());
    for (const auto& [key, marked] : bins) {
        double seconds = 0.0;
        std::int64_t prev = 0;
        bool have_prev = false;
        for (std::int64_t b : marked) {
            if (have_prev && b == prev + 1) seconds += bin_width;
            prev = b;
            have_prev = true;
        }
        if (seconds > 0.0) {
            layer.add(pair_first(key), pair_second(key), seconds);
            layer.add(pair_second(key), pair_first(key), seconds);
        }
    }
    return layer;
}

} // namespace mlsim
