#pragma once

#include "mrfgc/instance.hpp"
#include "mrfgc/tree_decomp.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

namespace mrfgc {

inline constexpr const char* kInstanceSchema = "mrfgc-instance/1";
inline constexpr const char* kTraversalSchema = "mrfgc-traversal/1";
inline constexpr const char* kLibrarySchema = "mrfgc-library/1";

/// FNV-1a 64 of the text, as 16 lowercase hex digits.
std::string content_hash(const std::string& text);

/// Loads a referenced library file by path (relative paths are the caller's business).
using LibraryLoader = std::function<std::string(const std::string& path)>;

struct InstanceDocument {
    Instance instance;
    std::optional<Vertex> root;
    std::optional<TreeDecomposition> decomposition;
    /// Set when the backend refers to a library file instead of inlining it.
    std::optional<std::string> library_path;
};

/// Parse errors carry "line L, column C"; semantic errors carry a JSON pointer.
InstanceDocument parse_instance(const std::string& text, const LibraryLoader& load = {});
std::string serialize_instance(const InstanceDocument& doc);
std::string serialize_instance(const Instance& inst);
std::string instance_hash(const Instance& inst);

FormationLibrary parse_library(const std::string& text);
std::string serialize_library(const FormationLibrary& lib);

struct TraversalDocument {
    std::string instance_hash;
    Traversal traversal;
};

/// Instance hash a traversal document claims, read without resolving labels.
std::string traversal_instance_hash(const std::string& text);
/// Anchors missing from the file are recomputed through the backend.
TraversalDocument parse_traversal(const std::string& text, const Instance& inst);
std::string serialize_traversal(const Instance& inst, const Traversal& x);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

RootedTree gen_random_tree(int n, int max_degree, std::uint64_t seed);

struct GeneratedGraph {
    Graph graph;
    TreeDecomposition decomposition; // width <= target
};

/// Random partial k-tree: every new vertex joins a random existing k-clique
/// and keeps a random nonempty subset of the edges to it.
GeneratedGraph gen_random_graph(int n, int target_tw, std::uint64_t seed);

} // namespace mrfgc
