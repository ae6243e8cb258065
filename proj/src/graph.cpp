#include "crisisnet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace crisisnet {

double MentionGraph::total_weight() const {
  double w = 0;
  for (const auto& [_, weight] : edges) w += weight;
  return w;
}

std::vector<int> MentionGraph::total_degrees() const {
  std::vector<int> deg(nodes.size(), 0);
  for (const auto& [uv, _] : edges) {
    ++deg[uv.first];
    ++deg[uv.second];
  }
  return deg;
}

std::map<std::pair<int, int>, double> MentionGraph::undirected_edges() const {
  std::map<std::pair<int, int>, double> und;
  for (const auto& [uv, w] : edges) {
    auto key = std::minmax(uv.first, uv.second);
    und[{key.first, key.second}] += w;
  }
  return und;
}

Eigen::MatrixXd MentionGraph::adjacency() const {
  const auto n = static_cast<Eigen::Index>(nodes.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [uv, _] : edges) a(uv.first, uv.second) = 1.0;
  return a;
}

MentionGraph make_graph(
    const std::vector<std::string>& handles,
    const std::vector<std::tuple<std::string, std::string, double>>& edges) {
  std::set<std::string> all(handles.begin(), handles.end());
  for (const auto& [u, v, w] : edges) {
    all.insert(u);
    all.insert(v);
  }
  MentionGraph g;
  g.nodes.assign(all.begin(), all.end());
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    g.index[g.nodes[i]] = static_cast<int>(i);
  for (const auto& [u, v, w] : edges) {
    const int ui = g.index[u], vi = g.index[v];
    if (ui == vi) continue;
    g.edges[{ui, vi}] += w;
  }
  return g;
}

MentionGraph build_mention_graph(const std::vector<Tweet>& tweets) {
  std::set<std::string> handles;
  std::map<std::pair<std::string, std::string>, double> weights;
  std::map<std::string, std::size_t> authored;
  for (const auto& t : tweets) {
    handles.insert(t.author_handle);
    ++authored[t.author_handle];
    for (const auto& m : t.mentions) {
      handles.insert(m);
      weights[{t.author_handle, m}] += 1.0;
    }
  }
  MentionGraph g;
  g.nodes.assign(handles.begin(), handles.end());
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    g.index[g.nodes[i]] = static_cast<int>(i);
  for (const auto& [uv, w] : weights) {
    const int ui = g.index[uv.first], vi = g.index[uv.second];
    if (ui == vi) continue;  // self-mentions already dropped at extraction
    g.edges[{ui, vi}] = w;
  }
  for (const auto& [handle, n] : authored) g.tweet_count[g.index[handle]] = n;
  return g;
}

std::vector<std::vector<int>> Partition::groups() const {
  std::vector<std::vector<int>> out(num_groups);
  for (std::size_t i = 0; i < label.size(); ++i)
    out[label[i]].push_back(static_cast<int>(i));
  return out;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    // Smaller index wins so group ids follow smallest member.
    if (a > b) std::swap(a, b);
    parent[b] = a;
    return true;
  }
};

// Renumbers arbitrary labels so group ids follow the smallest member index
// (nodes are in handle order, so this is smallest member handle).
Partition canonical_partition(std::vector<int> raw, PartitionKind kind) {
  Partition p;
  p.kind = kind;
  p.label.assign(raw.size(), -1);
  std::unordered_map<int, int> renumber;
  int next = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto [it, inserted] = renumber.emplace(raw[i], next);
    if (inserted) ++next;
    p.label[i] = it->second;
  }
  p.num_groups = next;
  return p;
}

}  // namespace

Partition weak_components(const MentionGraph& g) {
  UnionFind uf(g.node_count());
  for (const auto& [uv, _] : g.edges) uf.unite(uv.first, uv.second);
  std::vector<int> raw(g.node_count());
  for (std::size_t i = 0; i < raw.size(); ++i)
    raw[i] = uf.find(static_cast<int>(i));
  return canonical_partition(std::move(raw), PartitionKind::component);
}

int largest_group(const Partition& p) {
  if (p.num_groups == 0) throw std::invalid_argument("empty partition");
  std::vector<std::size_t> sizes(p.num_groups, 0);
  for (int l : p.label) ++sizes[l];
  int best = 0;
  for (int gi = 1; gi < p.num_groups; ++gi)
    if (sizes[gi] > sizes[best]) best = gi;
  return best;
}

MentionGraph induced_subgraph(const MentionGraph& g,
                              const std::vector<std::string>& keep) {
  MentionGraph out;
  std::set<std::string> want;
  for (const auto& h : keep) {
    if (g.index.find(h) == g.index.end())
      throw std::invalid_argument("unknown node: " + h);
    want.insert(h);
  }
  out.nodes.assign(want.begin(), want.end());
  for (std::size_t i = 0; i < out.nodes.size(); ++i)
    out.index[out.nodes[i]] = static_cast<int>(i);
  for (const auto& [uv, w] : g.edges) {
    auto ui = out.index.find(g.nodes[uv.first]);
    auto vi = out.index.find(g.nodes[uv.second]);
    if (ui != out.index.end() && vi != out.index.end())
      out.edges[{ui->second, vi->second}] = w;
  }
  for (const auto& [idx, type] : g.agency_type) {
    auto it = out.index.find(g.nodes[idx]);
    if (it != out.index.end()) out.agency_type[it->second] = type;
  }
  for (const auto& [idx, n] : g.tweet_count) {
    auto it = out.index.find(g.nodes[idx]);
    if (it != out.index.end()) out.tweet_count[it->second] = n;
  }
  return out;
}

MentionGraph induced_subgraph(const MentionGraph& g, const Partition& p,
                              int group) {
  std::vector<std::string> keep;
  for (std::size_t i = 0; i < p.label.size(); ++i)
    if (p.label[i] == group) keep.push_back(g.nodes[i]);
  return induced_subgraph(g, keep);
}

double spectral_radius(const Eigen::MatrixXd& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, /*computeEigenvectors=*/false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::MatrixXd path_weight_matrix(const Eigen::MatrixXd& adjacency, double a) {
  if (a <= 0) throw std::invalid_argument("attenuation must be > 0");
  const double rho = spectral_radius(adjacency);
  // small slack so a computed rho of 0.99999999 still trips the guard
  if (a * rho >= 1.0 - 1e-9) {
    throw DivergenceError("attenuation " + std::to_string(a) +
                          " times spectral radius " + std::to_string(rho) +
                          " is >= 1; the path series diverges");
  }
  const auto n = adjacency.rows();
  const Eigen::MatrixXd system =
      Eigen::MatrixXd::Identity(n, n) - a * adjacency;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  if (!lu.isInvertible())
    throw DivergenceError("I - aA is numerically singular");
  return lu.inverse();
}

double modularity(const MentionGraph& g, const std::vector<int>& labels,
                  double resolution) {
  if (labels.size() != g.node_count())
    throw std::invalid_argument("label vector does not cover the graph");
  const auto und = g.undirected_edges();
  double two_m = 0.0;
  std::vector<double> degree(g.node_count(), 0.0);
  for (const auto& [uv, w] : und) {
    degree[uv.first] += w;
    degree[uv.second] += w;
    two_m += 2 * w;
  }
  if (two_m == 0) return 0.0;
  const int num_groups =
      labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<double> internal(num_groups, 0.0);  // 2 * internal weight
  std::vector<double> total(num_groups, 0.0);     // sum of degrees
  for (const auto& [uv, w] : und) {
    if (labels[uv.first] == labels[uv.second]) internal[labels[uv.first]] += 2 * w;
  }
  for (std::size_t i = 0; i < labels.size(); ++i) total[labels[i]] += degree[i];
  double q = 0.0;
  for (int c = 0; c < num_groups; ++c) {
    q += internal[c] / two_m -
         resolution * (total[c] / two_m) * (total[c] / two_m);
  }
  return q;
}

namespace {

struct UGraph {
  int n = 0;
  std::vector<std::vector<std::pair<int, double>>> adj;
  std::vector<double> degree;
  std::vector<double> self_loop;
  double two_m = 0.0;
};

UGraph undirected_view(const MentionGraph& g) {
  UGraph u;
  u.n = static_cast<int>(g.node_count());
  u.adj.resize(u.n);
  u.degree.assign(u.n, 0.0);
  u.self_loop.assign(u.n, 0.0);
  for (const auto& [uv, w] : g.undirected_edges()) {
    u.adj[uv.first].emplace_back(uv.second, w);
    u.adj[uv.second].emplace_back(uv.first, w);
    u.degree[uv.first] += w;
    u.degree[uv.second] += w;
    u.two_m += 2 * w;
  }
  return u;
}

// One Louvain level: greedy local moves until no gain. Returns true if any
// node moved.
bool louvain_local_pass(const UGraph& g, std::vector<int>& community,
                        double resolution, std::mt19937_64& rng) {
  // k_i counts self-loops twice, matching the modularity definition.
  std::vector<double> community_total(g.n, 0.0);
  for (int i = 0; i < g.n; ++i)
    community_total[community[i]] += g.degree[i] + 2 * g.self_loop[i];

  std::vector<int> order(g.n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  bool moved_any = false;
  bool moved = true;
  while (moved) {
    moved = false;
    for (int idx : order) {
      const int node = idx;
      const int home = community[node];
      std::unordered_map<int, double> link;  // community -> weight to it
      for (const auto& [nb, w] : g.adj[node]) link[community[nb]] += w;

      const double k = g.degree[node] + 2 * g.self_loop[node];
      community_total[home] -= k;

      int best = home;
      double best_gain = link.count(home)
                             ? link[home] - resolution * community_total[home] *
                                                k / g.two_m
                             : -resolution * community_total[home] * k / g.two_m;
      for (const auto& [c, w] : link) {
        if (c == home) continue;
        const double gain = w - resolution * community_total[c] * k / g.two_m;
        if (gain > best_gain + 1e-12 ||
            (gain > best_gain - 1e-12 && c < best)) {
          best_gain = gain;
          best = c;
        }
      }
      community_total[best] += k;
      if (best != home) {
        community[node] = best;
        moved = true;
        moved_any = true;
      }
    }
  }
  return moved_any;
}

UGraph aggregate(const UGraph& g, const std::vector<int>& community,
                 int num_groups) {
  UGraph out;
  out.n = num_groups;
  out.adj.resize(num_groups);
  out.degree.assign(num_groups, 0.0);
  out.self_loop.assign(num_groups, 0.0);
  std::map<std::pair<int, int>, double> agg;
  for (int i = 0; i < g.n; ++i) {
    out.self_loop[community[i]] += g.self_loop[i];
    for (const auto& [j, w] : g.adj[i]) {
      if (j < i) continue;  // undirected edges stored both ways
      const int a = community[i], b = community[j];
      if (a == b) {
        out.self_loop[a] += w;
      } else {
        auto key = std::minmax(a, b);
        agg[{key.first, key.second}] += w;
      }
    }
  }
  for (const auto& [ab, w] : agg) {
    out.adj[ab.first].emplace_back(ab.second, w);
    out.adj[ab.second].emplace_back(ab.first, w);
    out.degree[ab.first] += w;
    out.degree[ab.second] += w;
  }
  out.two_m = g.two_m;
  return out;
}

std::vector<int> compact_labels(const std::vector<int>& raw, int* num_groups) {
  std::unordered_map<int, int> renumber;
  std::vector<int> out(raw.size());
  int next = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto [it, inserted] = renumber.emplace(raw[i], next);
    if (inserted) ++next;
    out[i] = it->second;
  }
  if (num_groups) *num_groups = next;
  return out;
}

std::vector<int> louvain(const MentionGraph& g, double resolution,
                         std::uint64_t seed) {
  const int n = static_cast<int>(g.node_count());
  std::vector<int> labels(n);
  std::iota(labels.begin(), labels.end(), 0);
  UGraph level = undirected_view(g);
  if (level.two_m == 0) return labels;

  std::mt19937_64 rng(seed);
  for (;;) {
    std::vector<int> community(level.n);
    std::iota(community.begin(), community.end(), 0);
    const bool moved = louvain_local_pass(level, community, resolution, rng);
    int num_groups = 0;
    community = compact_labels(community, &num_groups);
    for (int i = 0; i < n; ++i) labels[i] = community[labels[i]];
    if (!moved || num_groups == level.n) break;
    level = aggregate(level, community, num_groups);
  }
  return labels;
}

std::vector<int> pathweight_agglomerative(const MentionGraph& g, double a) {
  const int n = static_cast<int>(g.node_count());
  // Undirected 0/1 adjacency.
  Eigen::MatrixXd adj = g.adjacency();
  adj = ((adj + adj.transpose()).array() > 0).cast<double>().matrix();
  const double auto_a = a > 0 ? a : 0.5 / std::max(spectral_radius(adj), 1e-12);
  const Eigen::MatrixXd w = path_weight_matrix(adj, auto_a);

  struct PairSim {
    int i, j;
    double sim;
  };
  std::vector<PairSim> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double sim = w(i, j) + w(j, i);
      if (sim > 1e-12) pairs.push_back({i, j, sim});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const PairSim& x, const PairSim& y) {
    if (x.sim != y.sim) return x.sim > y.sim;
    if (x.i != y.i) return x.i < y.i;
    return x.j < y.j;
  });

  // Replay merges tracking modularity; keep the best prefix.
  UnionFind uf(n);
  std::vector<int> labels(n), best_labels(n);
  auto snapshot = [&] {
    for (int i = 0; i < n; ++i) labels[i] = uf.find(i);
    return compact_labels(labels, nullptr);
  };
  best_labels = snapshot();
  double best_q = modularity(g, best_labels);
  for (const auto& p : pairs) {
    if (!uf.unite(p.i, p.j)) continue;
    std::vector<int> cur = snapshot();
    const double q = modularity(g, cur);
    if (q > best_q + 1e-12) {
      best_q = q;
      best_labels = cur;
    }
  }
  return best_labels;
}

}  // namespace

Partition detect_communities(const MentionGraph& g, CommunityMethod method,
                             double resolution, std::uint64_t seed,
                             double attenuation) {
  if (g.node_count() == 0) throw std::invalid_argument("empty graph");
  std::vector<int> raw;
  if (method == CommunityMethod::modularity) {
    raw = louvain(g, resolution, seed);
  } else {
    raw = pathweight_agglomerative(g, attenuation);
  }
  return canonical_partition(std::move(raw), PartitionKind::community);
}

double density(const MentionGraph& g) {
  const double n = static_cast<double>(g.node_count());
  if (n < 2) throw std::invalid_argument("density needs at least 2 nodes");
  return static_cast<double>(g.edge_count()) / (n * (n - 1));
}

double average_degree(const MentionGraph& g) {
  if (g.node_count() == 0)
    throw std::invalid_argument("average degree of an empty graph");
  return static_cast<double>(g.edge_count()) /
         static_cast<double>(g.node_count());
}

namespace {

// Eccentricities by BFS over an undirected adjacency list.
int bfs_max_distance(const std::vector<std::vector<int>>& adj, int start) {
  std::vector<int> dist(adj.size(), -1);
  std::deque<int> queue{start};
  dist[start] = 0;
  int far = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    far = std::max(far, dist[u]);
    for (int v : adj[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return far;
}

}  // namespace

int diameter(const MentionGraph& g) {
  if (g.node_count() == 0)
    throw std::invalid_argument("diameter of an empty graph");
  const Partition comps = weak_components(g);
  const MentionGraph sub = induced_subgraph(g, comps, largest_group(comps));
  std::vector<std::vector<int>> adj(sub.node_count());
  for (const auto& [uv, _] : sub.undirected_edges()) {
    adj[uv.first].push_back(uv.second);
    adj[uv.second].push_back(uv.first);
  }
  int best = 0;
  for (std::size_t i = 0; i < sub.node_count(); ++i)
    best = std::max(best, bfs_max_distance(adj, static_cast<int>(i)));
  return best;
}

std::vector<std::vector<std::pair<std::string, int>>> top_nodes(
    const MentionGraph& g, const Partition& p, std::size_t k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const std::vector<int> deg = g.total_degrees();
  std::vector<std::vector<std::pair<std::string, int>>> out(p.num_groups);
  for (int gi = 0; gi < p.num_groups; ++gi) {
    std::vector<std::pair<std::string, int>> members;
    for (std::size_t i = 0; i < p.label.size(); ++i)
      if (p.label[i] == gi) members.emplace_back(g.nodes[i], deg[i]);
    std::sort(members.begin(), members.end(),
              [](const auto& a, const auto& b) {
                if (a.second != b.second) return a.second > b.second;
                return a.first < b.first;
              });
    if (members.size() > k) members.resize(k);
    out[gi] = std::move(members);
  }
  return out;
}

std::vector<GroupMetrics> partition_metrics(const MentionGraph& g,
                                            const Partition& p) {
  std::vector<GroupMetrics> rows;
  for (int gi = 0; gi < p.num_groups; ++gi) {
    const MentionGraph sub = induced_subgraph(g, p, gi);
    GroupMetrics m;
    m.group = gi;
    m.kind = p.kind;
    m.nodes = sub.node_count();
    m.edges = sub.edge_count();
    m.density = sub.node_count() >= 2 ? density(sub) : 0.0;
    m.avg_degree = sub.node_count() >= 1 ? average_degree(sub) : 0.0;
    m.diameter = sub.node_count() >= 1 ? diameter(sub) : 0;
    rows.push_back(m);
  }
  return rows;
}

void write_metrics_csv(std::ostream& out, const std::vector<GroupMetrics>& rows) {
  out << "group,kind,nodes,edges,density,avg_degree,diameter\n";
  char buf[64];
  for (const auto& m : rows) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f", m.density, m.avg_degree);
    out << (m.group + 1) << ','
        << (m.kind == PartitionKind::component ? "component" : "community")
        << ',' << m.nodes << ',' << m.edges << ',' << buf << ',' << m.diameter
        << "\n";
  }
}

void load_agency_types(MentionGraph& g, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open agency file: " + path);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) continue;
    const std::string handle = line.substr(0, comma);
    const std::string type = line.substr(comma + 1);
    if (first && handle == "handle") {
      first = false;
      continue;
    }
    first = false;
    const int idx = g.node_index(handle);
    if (idx >= 0) g.agency_type[idx] = type;
  }
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string format_weight(double w) {
  char buf[32];
  if (w == std::floor(w) && std::abs(w) < 1e15) {
    std::snprintf(buf, sizeof buf, "%.0f", w);
  } else {
    std::snprintf(buf, sizeof buf, "%.6f", w);
  }
  return buf;
}

}  // namespace

void export_gexf(std::ostream& out, const MentionGraph& g,
                 const Partition* components, const Partition* communities) {
  const std::vector<int> deg = g.total_degrees();
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<gexf xmlns=\"http://www.gexf.net/1.2draft\" version=\"1.2\">\n"
      << "  <graph defaultedgetype=\"directed\">\n"
      << "    <attributes class=\"node\">\n"
      << "      <attribute id=\"0\" title=\"degree\" type=\"integer\"/>\n"
      << "      <attribute id=\"1\" title=\"component\" type=\"integer\"/>\n"
      << "      <attribute id=\"2\" title=\"community\" type=\"integer\"/>\n"
      << "      <attribute id=\"3\" title=\"agency_type\" type=\"string\"/>\n"
      << "    </attributes>\n"
      << "    <nodes>\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    out << "      <node id=\"" << i << "\" label=\"" << xml_escape(g.nodes[i])
        << "\">\n        <attvalues>\n"
        << "          <attvalue for=\"0\" value=\"" << deg[i] << "\"/>\n";
    if (components)
      out << "          <attvalue for=\"1\" value=\""
          << components->label[i] + 1 << "\"/>\n";
    if (communities)
      out << "          <attvalue for=\"2\" value=\""
          << communities->label[i] + 1 << "\"/>\n";
    auto at = g.agency_type.find(static_cast<int>(i));
    if (at != g.agency_type.end())
      out << "          <attvalue for=\"3\" value=\"" << xml_escape(at->second)
          << "\"/>\n";
    out << "        </attvalues>\n      </node>\n";
  }
  out << "    </nodes>\n    <edges>\n";
  std::size_t eid = 0;
  for (const auto& [uv, w] : g.edges) {
    out << "      <edge id=\"" << eid++ << "\" source=\"" << uv.first
        << "\" target=\"" << uv.second << "\" weight=\"" << format_weight(w)
        << "\"/>\n";
  }
  out << "    </edges>\n  </graph>\n</gexf>\n";
}

void export_csv(std::ostream& out, const MentionGraph& g) {
  out << "source,target,weight\n";
  for (const auto& [uv, w] : g.edges) {
    out << g.nodes[uv.first] << ',' << g.nodes[uv.second] << ','
        << format_weight(w) << "\n";
  }
}

void export_dot(std::ostream& out, const MentionGraph& g) {
  out << "digraph mentions {\n";
  for (const auto& n : g.nodes) out << "  \"" << n << "\";\n";
  for (const auto& [uv, w] : g.edges) {
    out << "  \"" << g.nodes[uv.first] << "\" -> \"" << g.nodes[uv.second]
        << "\" [weight=" << format_weight(w) << "];\n";
  }
  out << "}\n";
}

MentionGraph import_csv(std::istream& in) {
  std::vector<std::tuple<std::string, std::string, double>> edges;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("source,", 0) == 0) continue;
    }
    std::istringstream ss(line);
    std::string source, target, weight;
    if (!std::getline(ss, source, ',') || !std::getline(ss, target, ',') ||
        !std::getline(ss, weight)) {
      throw std::runtime_error("bad edge CSV line: " + line);
    }
    edges.emplace_back(source, target, std::stod(weight));
  }
  return make_graph({}, edges);
}

}  // namespace crisisnet
