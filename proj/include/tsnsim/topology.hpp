#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tsnsim/clock.hpp"
#include "tsnsim/error.hpp"
#include "tsnsim/fiveg_config.hpp"
#include "tsnsim/ids.hpp"
#include "tsnsim/time.hpp"

namespace tsnsim {

enum class NodeKind { EndStation, Bridge, FiveGSBridge };

inline const char* to_string(NodeKind k)
{
    switch (k) {
    case NodeKind::EndStation: return "end_station";
    case NodeKind::Bridge: return "bridge";
    case NodeKind::FiveGSBridge: return "fiveg_bridge";
    }
    return "?";
}

/// Pinned grandmaster duty for redundant operation. Only meaningful on
/// gm-capable nodes; at most one of each role per domain.
enum class StaticRole { PrimaryGm, HotStandbyGm };

struct StaticRoleAssignment {
    StaticRole role;
    DomainId domain;
};

/// Fields a node advertises in announces, compared lexicographically
/// during election. Identity 0 means "derive from the node id".
struct AnnounceFields {
    std::uint8_t priority1 = 128;
    std::uint8_t clock_class = 248;
    std::uint8_t clock_accuracy = 0xFE;
    std::uint16_t variance = 0xFFFF;
    std::uint8_t priority2 = 128;
    ClockIdentity identity = 0;
};

struct NodeSpec {
    NodeId id = 0;
    std::string label;
    NodeKind kind = NodeKind::EndStation;
    bool gm_capable = false;
    std::optional<StaticRoleAssignment> static_role;
    AnnounceFields announce;
    ClockParams clock;
    Duration residence{250000000}; // bridge forwarding delay, 250 us
    std::optional<FivegConfig> fiveg;
};

/// Bidirectional link. Asymmetry is the signed difference of the two
/// directional delays (b-to-a minus a-to-b); zero means symmetric.
struct Link {
    NodeId a = 0;
    NodeId b = 0;
    Duration latency{500000}; // 500 ns
    Duration asymmetry{0};

    Duration delay_a_to_b() const { return latency - Duration{asymmetry.ps / 2}; }
    Duration delay_b_to_a() const { return delay_a_to_b() + asymmetry; }

    Duration delay_from(NodeId sender) const
    {
        return sender == a ? delay_a_to_b() : delay_b_to_a();
    }

    NodeId peer_of(NodeId n) const { return n == a ? b : a; }
};

struct PortRef {
    NodeId peer;
    std::size_t link_index;
};

/// Validated network graph. Ports of a node are its adjacency entries in
/// ascending peer id, so port numbering is reproducible.
class Topology {
public:
    const std::vector<NodeSpec>& nodes() const { return nodes_; }
    const std::vector<Link>& links() const { return links_; }

    const NodeSpec& node(NodeId id) const
    {
        auto it = index_.find(id);
        if (it == index_.end())
            throw ContractError("unknown node id " + std::to_string(id));
        return nodes_[it->second];
    }

    bool has_node(NodeId id) const { return index_.count(id) != 0; }

    /// Ports of `id`, ascending by peer id.
    const std::vector<PortRef>& neighbors(NodeId id) const
    {
        auto it = adjacency_.find(id);
        if (it == adjacency_.end())
            throw ContractError("unknown node id " + std::to_string(id));
        return it->second;
    }

    friend Topology validate_topology(std::vector<NodeSpec> nodes, std::vector<Link> links);

private:
    std::vector<NodeSpec> nodes_;
    std::vector<Link> links_;
    std::map<NodeId, std::size_t> index_;
    std::map<NodeId, std::vector<PortRef>> adjacency_;
};

/// Check structural invariants and build the adjacency. Messages name
/// the offending node or link. Validation is idempotent: a topology that
/// passed once passes again untouched.
inline Topology validate_topology(std::vector<NodeSpec> nodes, std::vector<Link> links)
{
    Topology topo;

    std::map<NodeId, std::size_t> index;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const NodeSpec& n = nodes[i];
        if (index.count(n.id))
            throw ValidationError("duplicate node id " + std::to_string(n.id));
        index[n.id] = i;
        if (n.static_role && !n.gm_capable)
            throw ValidationError("node " + std::to_string(n.id)
                                  + " has a static role but is not gm-capable");
        if (n.residence.ps < 0)
            throw ValidationError("node " + std::to_string(n.id)
                                  + " has negative residence time");
        if (n.fiveg && n.kind != NodeKind::FiveGSBridge)
            throw ValidationError("node " + std::to_string(n.id)
                                  + " carries 5GS parameters but is not a fiveg_bridge");
        if (!n.fiveg && n.kind == NodeKind::FiveGSBridge)
            throw ValidationError("fiveg_bridge node " + std::to_string(n.id)
                                  + " is missing its 5GS parameters");
        if (n.fiveg) {
            const FivegConfig& f = *n.fiveg;
            if (f.ue_error_min.ps < 0 || f.ue_error_max < f.ue_error_min)
                throw ValidationError("node " + std::to_string(n.id)
                                      + " has an invalid radio error band");
            if (f.transit.ps < 0 || f.transit_jitter.ps < 0
                || f.transit_jitter > f.transit)
                throw ValidationError("node " + std::to_string(n.id)
                                      + " has an invalid 5GS transit delay");
        }
    }

    // One pinned grandmaster of each kind per domain.
    std::set<std::pair<DomainId, StaticRole>> seen_roles;
    for (const NodeSpec& n : nodes) {
        if (!n.static_role) continue;
        auto key = std::make_pair(n.static_role->domain, n.static_role->role);
        if (!seen_roles.insert(key).second)
            throw ValidationError(
                "node " + std::to_string(n.id) + " duplicates the "
                + (n.static_role->role == StaticRole::PrimaryGm ? "primary" : "hot-standby")
                + " grandmaster role in domain " + std::to_string(n.static_role->domain));
    }

    std::map<NodeId, std::vector<PortRef>> adjacency;
    for (const auto& [id, _] : index) adjacency[id];

    std::set<std::pair<NodeId, NodeId>> seen_pairs;
    for (std::size_t li = 0; li < links.size(); ++li) {
        const Link& l = links[li];
        for (NodeId end : {l.a, l.b}) {
            if (!index.count(end))
                throw ValidationError("link " + std::to_string(li)
                                      + " references unknown node " + std::to_string(end));
        }
        if (l.a == l.b)
            throw ValidationError("link " + std::to_string(li) + " connects node "
                                  + std::to_string(l.a) + " to itself");
        if (l.latency.ps < 0)
            throw ValidationError("link " + std::to_string(li) + " has negative latency");
        auto pair = std::minmax(l.a, l.b);
        if (!seen_pairs.insert({pair.first, pair.second}).second)
            throw ValidationError("duplicate link between nodes " + std::to_string(l.a)
                                  + " and " + std::to_string(l.b));
        adjacency[l.a].push_back({l.b, li});
        adjacency[l.b].push_back({l.a, li});
    }

    for (auto& [id, ports] : adjacency) {
        std::sort(ports.begin(), ports.end(),
                  [](const PortRef& x, const PortRef& y) { return x.peer < y.peer; });
    }

    // DS-TT peers must be actual neighbors of the 5GS bridge.
    for (const NodeSpec& n : nodes) {
        if (!n.fiveg) continue;
        for (NodeId peer : n.fiveg->ds_tt_peers) {
            const auto& ports = adjacency[n.id];
            bool linked = std::any_of(ports.begin(), ports.end(),
                                      [&](const PortRef& p) { return p.peer == peer; });
            if (!linked)
                throw ValidationError("node " + std::to_string(n.id) + " lists ds-tt peer "
                                      + std::to_string(peer) + " that it has no link to");
        }
    }

    // Connectivity: every node reachable from the first.
    if (!nodes.empty()) {
        std::set<NodeId> visited;
        std::vector<NodeId> stack{nodes.front().id};
        while (!stack.empty()) {
            NodeId cur = stack.back();
            stack.pop_back();
            if (!visited.insert(cur).second) continue;
            for (const PortRef& p : adjacency[cur]) stack.push_back(p.peer);
        }
        for (const NodeSpec& n : nodes) {
            if (!visited.count(n.id))
                throw ValidationError("node " + std::to_string(n.id)
                                      + " is unreachable from node "
                                      + std::to_string(nodes.front().id));
        }
    }

    topo.nodes_ = std::move(nodes);
    topo.links_ = std::move(links);
    topo.index_ = std::move(index);
    topo.adjacency_ = std::move(adjacency);
    return topo;
}

} // namespace tsnsim
