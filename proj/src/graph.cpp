#include "mrfgc/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace mrfgc {

Graph::Graph(int n, std::span<const Edge> edges, std::vector<std::string> labels) : adjacency_(n)
{
    if (n < 0) fail(ErrorKind::InvalidArgument, "negative vertex count");
    if (labels.empty()) {
        labels.reserve(n);
        for (int v = 0; v < n; ++v) labels.push_back(std::to_string(v));
    }
    if (static_cast<int>(labels.size()) != n) fail(ErrorKind::InvalidArgument, "label count does not match vertex count");
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n) fail(ErrorKind::VertexOutOfRange, "edge endpoint out of range");
        if (u == v) fail(ErrorKind::InvalidArgument, "self-loop at vertex " + std::to_string(u));
        adjacency_[u].push_back(v);
        adjacency_[v].push_back(u);
    }
    for (auto& adj : adjacency_) {
        std::sort(adj.begin(), adj.end());
        if (std::adjacent_find(adj.begin(), adj.end()) != adj.end()) fail(ErrorKind::InvalidArgument, "parallel edge");
    }
    edge_count_ = static_cast<int>(edges.size());
    labels_ = std::move(labels);
    for (int v = 0; v < n; ++v) {
        if (!label_index_.emplace(labels_[v], v).second) fail(ErrorKind::InvalidArgument, "duplicate vertex label '" + labels_[v] + "'");
    }
}

int Graph::max_degree() const
{
    int d = 0;
    for (const auto& adj : adjacency_) d = std::max(d, static_cast<int>(adj.size()));
    return d;
}

bool Graph::has_edge(Vertex u, Vertex v) const
{
    if (u < 0 || u >= vertex_count()) return false;
    const auto& adj = adjacency_[u];
    return std::binary_search(adj.begin(), adj.end(), v);
}

std::vector<Edge> Graph::edges() const
{
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (Vertex u = 0; u < vertex_count(); ++u)
        for (Vertex v : adjacency_[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

std::optional<Vertex> Graph::find_label(const std::string& label) const
{
    auto it = label_index_.find(label);
    if (it == label_index_.end()) return std::nullopt;
    return it->second;
}

bool Graph::is_connected() const
{
    std::vector<Vertex> all(vertex_count());
    std::iota(all.begin(), all.end(), 0);
    return is_connected_subset(all);
}

bool Graph::is_connected_subset(std::span<const Vertex> vertices) const
{
    if (vertices.empty()) return true;
    std::vector<char> in(vertex_count(), 0), seen(vertex_count(), 0);
    for (Vertex v : vertices) {
        if (v < 0 || v >= vertex_count()) fail(ErrorKind::VertexOutOfRange, "vertex " + std::to_string(v) + " out of range");
        in[v] = 1;
    }
    std::vector<Vertex> stack{vertices.front()};
    seen[vertices.front()] = 1;
    int reached = 0;
    while (!stack.empty()) {
        Vertex u = stack.back();
        stack.pop_back();
        ++reached;
        for (Vertex w : adjacency_[u])
            if (in[w] && !seen[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
    }
    int distinct = static_cast<int>(std::count(in.begin(), in.end(), 1));
    return reached == distinct;
}

Graph Graph::induced_subgraph(std::span<const Vertex> vertices) const
{
    std::vector<int> local(vertex_count(), -1);
    std::vector<std::string> labels;
    for (int i = 0; i < static_cast<int>(vertices.size()); ++i) {
        local.at(vertices[i]) = i;
        labels.push_back(labels_[vertices[i]]);
    }
    std::vector<Edge> edges;
    for (int i = 0; i < static_cast<int>(vertices.size()); ++i)
        for (Vertex w : adjacency_[vertices[i]])
            if (local[w] > i) edges.emplace_back(i, local[w]);
    return Graph(static_cast<int>(vertices.size()), edges, std::move(labels));
}

Contraction contract_edge(const Graph& g, Edge e)
{
    auto [u, v] = e;
    if (!g.has_edge(u, v)) fail(ErrorKind::EdgeNotPresent, "edge {" + std::to_string(u) + "," + std::to_string(v) + "} not in graph");
    Vertex keep = std::min(u, v), gone = std::max(u, v);
    Contraction out;
    out.merge_map.resize(g.vertex_count());
    std::vector<std::string> labels;
    int next = 0;
    for (Vertex w = 0; w < g.vertex_count(); ++w) {
        if (w == gone) continue;
        out.merge_map[w] = next++;
        labels.push_back(w == keep ? g.label(u) + "+" + g.label(v) : g.label(w));
    }
    out.merge_map[gone] = out.merge_map[keep];
    std::vector<Edge> edges;
    for (auto [a, b] : g.edges()) {
        Vertex x = out.merge_map[a], y = out.merge_map[b];
        if (x == y) continue;
        edges.emplace_back(std::min(x, y), std::max(x, y));
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    out.graph = Graph(next, edges, std::move(labels));
    return out;
}

bool is_tree(const Graph& g)
{
    return g.vertex_count() >= 1 && g.edge_count() == g.vertex_count() - 1 && g.is_connected();
}

RootedTree::RootedTree(Graph g, Vertex root) : graph_(std::move(g)), root_(root)
{
    if (!is_tree(graph_)) fail(ErrorKind::NotATree, "graph is not a tree");
    if (root < 0 || root >= graph_.vertex_count()) fail(ErrorKind::VertexOutOfRange, "root out of range");
    int n = graph_.vertex_count();
    parent_.assign(n, -1);
    children_.assign(n, {});
    depth_.assign(n, 0);
    std::vector<char> seen(n, 0);
    std::queue<Vertex> queue;
    queue.push(root);
    seen[root] = 1;
    while (!queue.empty()) {
        Vertex u = queue.front();
        queue.pop();
        preorder_.push_back(u);
        for (Vertex w : graph_.neighbors(u))
            if (!seen[w]) {
                seen[w] = 1;
                parent_[w] = u;
                depth_[w] = depth_[u] + 1;
                children_[u].push_back(w);
                queue.push(w);
            }
    }
}

} // namespace mrfgc
