#pragma once

// Raw interaction events and the filters/aggregations that turn them into
// per-channel directed count layers.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mlsim/network.hpp"
#include "mlsim/nodes.hpp"

namespace mlsim {

enum class Channel { call, sms, proximity };

const char* channel_name(Channel c);
// Throws InputError on an unknown tag.
Channel channel_from_name(const std::string& tag);

struct InteractionEvent {
    std::int64_t timestamp = 0; // UTC seconds
    NodeId source = 0;
    NodeId target = 0;
    Channel channel = Channel::call;
    // 1 for call/sms; received signal strength for proximity scans (dBm-like,
    // typically negative).
    double magnitude = 0.0;
};

// CSV reader for the event schema `timestamp,source,target,layer,magnitude`
// (header required, '#' comment lines and blank lines skipped). Node names
// are interned into `nodes` in lexicographic order so identifiers are stable
// across runs regardless of row order. Returned events are sorted by
// timestamp (ties keep file order). Malformed rows raise ParseError carrying
// `filename:line`.
std::vector<InteractionEvent> parse_events(std::istream& in, const std::string& filename,
                                           NodeTable& nodes);

struct ActivityThresholds {
    double min_span_days = 90.0; // strict: span must exceed this
    long min_calls = 170;        // inclusive
    long min_sms = 950;          // inclusive
    double min_proximity_hours = 200.0; // inclusive
};

struct ParticipantActivity {
    NodeId node = 0;
    double span_days = 0.0;
    long call_count = 0;
    long sms_count = 0;
    double proximity_hours = 0.0;

    bool meets(const ActivityThresholds& t) const {
        return span_days > t.min_span_days && call_count >= t.min_calls &&
               sms_count >= t.min_sms && proximity_hours >= t.min_proximity_hours;
    }
};

// Per-node activity over all channels. A node participates in an event as
// either endpoint. Span is last minus first event timestamp in days.
// Proximity time is credited as one 5-minute bin per distinct 300 s window
// containing at least one scan involving the node (converted to hours).
std::vector<ParticipantActivity> participant_activity(std::span<const InteractionEvent> events);

// Nodes passing every threshold, sorted ascending, plus the per-node
// summaries for all nodes seen.
std::pair<std::vector<NodeId>, std::vector<ParticipantActivity>>
filter_participants(std::span<const InteractionEvent> events, const ActivityThresholds& thresholds);

// Keeps proximity events whose local time (UTC + fixed offset) falls on a
// Saturday/Sunday or on a weekday between 18:00 and 24:00. Call/sms events
// must not be routed through this filter (InputError).
std::vector<InteractionEvent> filter_proximity_window(std::span<const InteractionEvent> events,
                                                      std::int64_t utc_offset_seconds);

// Event counting for call/sms: n_ij = number of events i -> j with both
// endpoints in node_set. Order-insensitive.
DirectedCountLayer aggregate_counts(std::span<const InteractionEvent> events, Channel channel,
                                    std::span<const NodeId> node_set);

// Co-presence seconds from proximity scans. Time is cut into bins of
// gap_cap/2 seconds; a bin is marked for pair {i,j} when either device
// reports the other at or above rssi_threshold inside it. Every run of two
// consecutive marked bins credits one bin width of contact, so a single
// isolated scan contributes nothing and a gap longer than gap_cap breaks the
// run. T_ij is stored in both directions (the layer is symmetric before
// row normalization).
DirectedCountLayer aggregate_proximity(std::span<const InteractionEvent> events,
                                       std::span<const NodeId> node_set, double rssi_threshold,
                                       double gap_cap_seconds = 600.0);

} // namespace mlsim
