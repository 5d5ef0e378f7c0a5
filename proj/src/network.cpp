#include "gridflex/network.hpp"

#include <fstream>
#include <set>

#include "gridflex/csv.hpp"
#include "gridflex/errors.hpp"

namespace gridflex {

int Network::index_of(const std::string& bus_id) const {
    for (size_t i = 0; i < buses.size(); ++i)
        if (buses[i].id == bus_id) return static_cast<int>(i);
    return -1;
}

const Bus& Network::bus(const std::string& bus_id) const {
    int i = index_of(bus_id);
    if (i < 0) throw TopologyError("unknown bus: " + bus_id);
    return buses[i];
}

void validate_network(Network& net) {
    std::set<std::string> seen;
    net.slack = -1;
    net.prosumers.clear();
    for (size_t i = 0; i < net.buses.size(); ++i) {
        const Bus& b = net.buses[i];
        if (!seen.insert(b.id).second) throw TopologyError("duplicate bus id: " + b.id);
        if (b.base_kv <= 0.0) throw TopologyError("bus " + b.id + ": base voltage must be > 0");
        if (b.kind == BusKind::Slack) {
            if (net.slack >= 0)
                throw TopologyError("more than one slack bus (" + net.buses[net.slack].id +
                                    ", " + b.id + ")");
            net.slack = static_cast<int>(i);
        }
        if (b.is_prosumer) net.prosumers.push_back(static_cast<int>(i));
    }
    if (net.slack < 0) throw TopologyError("no slack bus");

    for (const Branch& br : net.branches) {
        int f = net.index_of(br.from);
        int t = net.index_of(br.to);
        if (f < 0) throw TopologyError("branch " + br.id() + " references unknown bus " + br.from);
        if (t < 0) throw TopologyError("branch " + br.id() + " references unknown bus " + br.to);
        if (f == t) throw TopologyError("branch " + br.id() + " connects a bus to itself");
        if (br.is_transformer) {
            if (br.rating_mva <= 0.0)
                throw TopologyError("transformer " + br.id() + " needs a positive MVA rating");
            if (net.buses[f].base_kv <= net.buses[t].base_kv)
                throw TopologyError("transformer " + br.id() +
                                    ": from side must be the high-voltage side");
        } else {
            if (br.length_km <= 0.0)
                throw TopologyError("line " + br.id() + ": length must be > 0");
            if (br.ampacity_ka <= 0.0)
                throw TopologyError("line " + br.id() + ": ampacity must be > 0");
            if (net.buses[f].base_kv != net.buses[t].base_kv)
                throw TopologyError("line " + br.id() +
                                    " connects different voltage levels; use a transformer");
        }
    }
}

Network load_network(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open network file: " + path.string());

    Network net;
    std::string line;
    size_t lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.pop_back();
        if (line.empty()) continue;

        auto f = csv::split(line);
        const std::string ctx = path.string() + ":" + std::to_string(lineno);
        if (f[0] == "bus") {
            if (f.size() != 5) fail("bus record needs 5 fields");
            Bus b;
            b.id = f[1];
            if (b.id.empty()) fail("empty bus id");
            if (f[2] == "slack")
                b.kind = BusKind::Slack;
            else if (f[2] == "pq")
                b.kind = BusKind::Pq;
            else
                fail("bus kind must be 'slack' or 'pq', got '" + f[2] + "'");
            b.base_kv = csv::parse_double(f[3], ctx);
            long pros = csv::parse_long(f[4], ctx);
            if (pros != 0 && pros != 1) fail("is_prosumer must be 0 or 1");
            b.is_prosumer = pros == 1;
            net.buses.push_back(std::move(b));
        } else if (f[0] == "branch") {
            if (f.size() != 9) fail("branch record needs 9 fields");
            Branch br;
            br.from = f[1];
            br.to = f[2];
            br.length_km = csv::parse_double(f[3], ctx);
            br.r_ohm_per_km = csv::parse_double(f[4], ctx);
            br.x_ohm_per_km = csv::parse_double(f[5], ctx);
            br.ampacity_ka = csv::parse_double(f[6], ctx);
            long tr = csv::parse_long(f[7], ctx);
            if (tr != 0 && tr != 1) fail("is_trafo must be 0 or 1");
            br.is_transformer = tr == 1;
            br.rating_mva = csv::parse_double(f[8], ctx);
            net.branches.push_back(std::move(br));
        } else {
            fail("unknown record kind '" + f[0] + "'");
        }
    }

    validate_network(net);
    return net;
}

} // namespace gridflex
