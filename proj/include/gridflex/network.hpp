#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace gridflex {

enum class BusKind { Slack, Pq };

struct Bus {
    std::string id;
    BusKind kind = BusKind::Pq;
    double base_kv = 0.4;
    bool is_prosumer = false;
};

/// A series branch. For transformer branches `from` is the high-voltage
/// side, `length_km` is 0 and the r/x fields carry the nameplate
/// short-circuit resistance/reactance in percent on the transformer's own
/// rating (0/0 selects the 1%/4% default).
struct Branch {
    std::string from;
    std::string to;
    double length_km = 0.0;
    double r_ohm_per_km = 0.0;
    double x_ohm_per_km = 0.0;
    double ampacity_ka = 0.0;
    bool is_transformer = false;
    double rating_mva = 0.0;

    std::string id() const { return from + "-" + to; }
};

struct Network {
    std::vector<Bus> buses;
    std::vector<Branch> branches;
    int slack = -1;                     // bus index
    std::vector<int> prosumers;         // bus indices, file order

    int index_of(const std::string& bus_id) const;  // -1 when absent
    const Bus& bus(const std::string& bus_id) const;
    size_t num_buses() const { return buses.size(); }
};

/// Parses and validates the line-oriented network format:
///   bus,<id>,<slack|pq>,<kV>,<is_prosumer>
///   branch,<from>,<to>,<km>,<ohm_per_km_r>,<ohm_per_km_x>,<kA>,<is_trafo>,<MVA>
/// `#` comments. Throws ParseError / TopologyError.
Network load_network(const std::filesystem::path& path);

/// Same validation as load_network for networks built in code.
void validate_network(Network& net);

} // namespace gridflex
