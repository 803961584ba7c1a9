#include "mrfgc/configuration.hpp"

#include <algorithm>
#include <sstream>

namespace mrfgc {

RobotTypes::RobotTypes(std::vector<std::string> names, std::vector<int> counts) : names_(std::move(names)), counts_(std::move(counts))
{
    if (names_.size() != counts_.size()) fail(ErrorKind::InvalidArgument, "robot type names and counts differ in length");
    if (names_.empty()) fail(ErrorKind::InvalidArgument, "at least one robot type is required");
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        if (counts_[i] < 1) fail(ErrorKind::InvalidArgument, "robot type '" + names_[i] + "' needs at least one robot");
        for (std::size_t j = 0; j < i; ++j)
            if (names_[i] == names_[j]) fail(ErrorKind::InvalidArgument, "duplicate robot type '" + names_[i] + "'");
        total_ += counts_[i];
    }
}

RobotTypes RobotTypes::homogeneous(int k) { return RobotTypes({"robot"}, {k}); }

std::optional<RobotType> RobotTypes::find(const std::string& name) const
{
    for (int m = 0; m < type_count(); ++m)
        if (names_[m] == name) return m;
    return std::nullopt;
}

Configuration::Configuration(std::vector<Placement> placements)
{
    for (const auto& p : placements) add(p.vertex, p.type, p.count);
}

Configuration Configuration::all_at(Vertex v, const RobotTypes& types)
{
    Configuration c;
    for (int m = 0; m < types.type_count(); ++m) c.add(v, m, types.count(m));
    return c;
}

void Configuration::add(Vertex v, RobotType m, int count)
{
    if (count == 0) return;
    if (v < 0 || m < 0) fail(ErrorKind::InvalidArgument, "negative vertex or type in placement");
    auto it = std::lower_bound(placements_.begin(), placements_.end(), Placement{v, m, 0},
                               [](const Placement& a, const Placement& b) { return std::tie(a.vertex, a.type) < std::tie(b.vertex, b.type); });
    if (it != placements_.end() && it->vertex == v && it->type == m) {
        it->count += count;
        if (it->count < 0) fail(ErrorKind::InvalidArgument, "negative robot count");
        if (it->count == 0) placements_.erase(it);
    } else {
        if (count < 0) fail(ErrorKind::InvalidArgument, "negative robot count");
        placements_.insert(it, Placement{v, m, count});
    }
}

int Configuration::count(Vertex v, RobotType m) const
{
    for (const auto& p : placements_)
        if (p.vertex == v && p.type == m) return p.count;
    return 0;
}

int Configuration::count_at(Vertex v) const
{
    int c = 0;
    for (const auto& p : placements_)
        if (p.vertex == v) c += p.count;
    return c;
}

int Configuration::total() const
{
    int c = 0;
    for (const auto& p : placements_) c += p.count;
    return c;
}

int Configuration::total_of(RobotType m) const
{
    int c = 0;
    for (const auto& p : placements_)
        if (p.type == m) c += p.count;
    return c;
}

std::vector<Vertex> Configuration::occupied() const
{
    std::vector<Vertex> out;
    for (const auto& p : placements_)
        if (out.empty() || out.back() != p.vertex) out.push_back(p.vertex);
    return out;
}

Vertex Configuration::max_vertex() const { return placements_.empty() ? -1 : placements_.back().vertex; }

Configuration Configuration::mapped(std::span<const Vertex> map) const
{
    Configuration out;
    for (const auto& p : placements_) out.add(map[p.vertex], p.type, p.count);
    return out;
}

std::size_t Configuration::hash() const
{
    std::size_t h = 1469598103934665603ULL;
    for (const auto& p : placements_) {
        for (int x : {p.vertex, p.type, p.count}) {
            h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
    }
    return h;
}

std::vector<Vertex> AnchoredConfiguration::active() const
{
    if (formation < 0 && embedding.empty()) return config.occupied();
    std::vector<Vertex> out = embedding;
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Vertex> occupied(const Configuration& config) { return config.occupied(); }

bool is_connected_configuration(const Graph& g, const Configuration& config)
{
    auto occ = config.occupied();
    if (!occ.empty() && occ.back() >= g.vertex_count()) fail(ErrorKind::VertexOutOfRange, "configuration vertex out of range");
    return g.is_connected_subset(occ);
}

int traversal_time(const Traversal& x)
{
    if (x.empty()) fail(ErrorKind::InvalidArgument, "empty traversal");
    return static_cast<int>(x.size()) - 1;
}

std::string to_string(const Configuration& config, const Graph* g, const RobotTypes* types)
{
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (const auto& p : config.placements()) {
        if (!first) os << ", ";
        first = false;
        os << (g ? g->label(p.vertex) : std::to_string(p.vertex)) << ':' << (types ? types->name(p.type) : std::to_string(p.type)) << '=' << p.count;
    }
    os << '}';
    return os.str();
}

} // namespace mrfgc
