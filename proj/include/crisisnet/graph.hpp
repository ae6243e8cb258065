#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "crisisnet/tweet.hpp"

namespace crisisnet {

// Weighted directed graph, no self-loops, one edge per ordered pair. Node
// indices follow lexicographic handle order so every traversal and export is
// deterministic.
struct MentionGraph {
  std::vector<std::string> nodes;
  std::unordered_map<std::string, int> index;
  std::map<std::pair<int, int>, double> edges;  // (u,v) -> weight
  std::unordered_map<int, std::string> agency_type;
  std::unordered_map<int, std::size_t> tweet_count;

  std::size_t node_count() const { return nodes.size(); }
  std::size_t edge_count() const { return edges.size(); }
  double total_weight() const;

  int node_index(const std::string& handle) const {
    auto it = index.find(handle);
    return it == index.end() ? -1 : it->second;
  }

  // in + out distinct edges, weights ignored.
  std::vector<int> total_degrees() const;

  // Undirected weighted view: w(u,v) + w(v,u) collapsed per unordered pair.
  std::map<std::pair<int, int>, double> undirected_edges() const;

  // 0/1 adjacency of the directed graph.
  Eigen::MatrixXd adjacency() const;
};

// Builds a graph with sorted nodes from (handle, handle, ...) content.
MentionGraph make_graph(const std::vector<std::string>& handles,
                        const std::vector<std::tuple<std::string, std::string, double>>& edges);

// Node set = authors plus mentioned handles; edge u->v weighted by mention
// count across the corpus.
MentionGraph build_mention_graph(const std::vector<Tweet>& tweets);

enum class PartitionKind { component, community };

struct Partition {
  PartitionKind kind = PartitionKind::component;
  std::vector<int> label;  // per node, in [0, num_groups)
  int num_groups = 0;

  std::vector<std::vector<int>> groups() const;
};

// Undirected connectivity; group ids ordered by smallest member handle.
Partition weak_components(const MentionGraph& g);

// Index of the largest weak component (ties -> smallest group id).
int largest_group(const Partition& p);

// Keeps exactly `keep` and edges within it. Unknown handles throw
// std::invalid_argument.
MentionGraph induced_subgraph(const MentionGraph& g,
                              const std::vector<std::string>& keep);
MentionGraph induced_subgraph(const MentionGraph& g,
                              const Partition& p, int group);

struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double spectral_radius(const Eigen::MatrixXd& a);

// W = [I - aA]^-1 = sum_l (aA)^l; requires a * rho(A) < 1, else
// DivergenceError.
Eigen::MatrixXd path_weight_matrix(const Eigen::MatrixXd& adjacency, double a);

// Newman modularity of a labeling on the undirected weighted view, with
// resolution parameter gamma.
double modularity(const MentionGraph& g, const std::vector<int>& labels,
                  double resolution = 1.0);

enum class CommunityMethod { modularity, pathweight };

// modularity: greedy multi-level maximization, seed-deterministic.
// pathweight: agglomerative merging by descending W_ij + W_ji on the
// undirected 0/1 adjacency, cut at the maximum-modularity level.
// `attenuation` <= 0 means 0.5 / rho(A).
Partition detect_communities(const MentionGraph& g, CommunityMethod method,
                             double resolution, std::uint64_t seed,
                             double attenuation = 0.0);

// E / (N (N-1)); N < 2 throws std::invalid_argument.
double density(const MentionGraph& g);
// E / N; empty graph throws std::invalid_argument.
double average_degree(const MentionGraph& g);
// Longest shortest path in the undirected view of the largest weak
// component; single node -> 0. Empty graph throws.
int diameter(const MentionGraph& g);

// Per group, top-k nodes by total degree, ties lexicographic.
std::vector<std::vector<std::pair<std::string, int>>> top_nodes(
    const MentionGraph& g, const Partition& p, std::size_t k);

struct GroupMetrics {
  int group = 0;
  PartitionKind kind = PartitionKind::component;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double density = 0.0;  // 0 when the group has fewer than 2 nodes
  double avg_degree = 0.0;
  int diameter = 0;
};

std::vector<GroupMetrics> partition_metrics(const MentionGraph& g,
                                            const Partition& p);

// CSV "group,kind,nodes,edges,density,avg_degree,diameter".
void write_metrics_csv(std::ostream& out, const std::vector<GroupMetrics>& rows);

// Node attribute input "handle,agency_type" (header optional).
void load_agency_types(MentionGraph& g, const std::string& path);

// Exports: nodes carry component/community/degree/agency_type, edges carry
// weight; node order lexicographic.
void export_gexf(std::ostream& out, const MentionGraph& g,
                 const Partition* components = nullptr,
                 const Partition* communities = nullptr);
void export_csv(std::ostream& out, const MentionGraph& g);
void export_dot(std::ostream& out, const MentionGraph& g);

// Reads back an edge-list CSV written by export_csv.
MentionGraph import_csv(std::istream& in);

}  // namespace crisisnet
