#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>
#include <sstream>

#include "crisisnet/graph.hpp"
#include "crisisnet/dates.hpp"

using namespace crisisnet;

namespace {

Tweet tw(const std::string& author, std::vector<std::string> mentions) {
  Tweet t;
  t.id = author + std::to_string(mentions.size());
  t.author_handle = author;
  t.created_at = parse_rfc3339("2020-08-27T12:00:00Z");
  t.mentions = std::move(mentions);
  return t;
}

MentionGraph graph(const std::vector<std::string>& handles,
                   const std::vector<std::tuple<std::string, std::string, double>>& edges) {
  return make_graph(handles, edges);
}

}  // namespace

TEST_CASE("build_mention_graph") {
  const auto g = build_mention_graph(
      {tw("alice", {"bob", "carol"}), tw("alice", {"bob"}), tw("bob", {"alice"})});
  CHECK(g.node_count() == 3);
  CHECK(g.nodes == std::vector<std::string>{"alice", "bob", "carol"});
  CHECK(g.edge_count() == 3);
  const int a = g.node_index("alice"), b = g.node_index("bob");
  CHECK(g.edges.at({a, b}) == doctest::Approx(2.0));
  CHECK(g.edges.at({b, a}) == doctest::Approx(1.0));
  CHECK(g.total_weight() == doctest::Approx(4.0));
}

TEST_CASE("total degree counts distinct in and out edges") {
  const auto g = graph({"a", "b", "c"},
                       {{"a", "b", 5.0}, {"b", "a", 1.0}, {"a", "c", 1.0}});
  const auto deg = g.total_degrees();
  CHECK(deg[g.node_index("a")] == 3);
  CHECK(deg[g.node_index("b")] == 2);
  CHECK(deg[g.node_index("c")] == 1);
}

TEST_CASE("weak components, group ids by smallest member") {
  const auto g = graph({"a", "b", "c", "d", "e"},
                       {{"b", "a", 1.0}, {"d", "e", 1.0}});
  const Partition p = weak_components(g);
  CHECK(p.num_groups == 3);
  CHECK(p.label[g.node_index("a")] == p.label[g.node_index("b")]);
  CHECK(p.label[g.node_index("d")] == p.label[g.node_index("e")]);
  CHECK(p.label[g.node_index("a")] == 0);
  CHECK(p.label[g.node_index("c")] == 1);
  CHECK(p.label[g.node_index("d")] == 2);
  CHECK(largest_group(p) == 0);
}

TEST_CASE("weak components oracle on random digraphs") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 19);
    std::vector<std::string> handles;
    for (int i = 0; i < n; ++i) handles.push_back("n" + std::to_string(i));
    std::vector<std::tuple<std::string, std::string, double>> edges;
    std::map<std::pair<int, int>, bool> seen;
    const int m = static_cast<int>(rng() % (2 * n));
    for (int e = 0; e < m; ++e) {
      const int u = static_cast<int>(rng() % n), v = static_cast<int>(rng() % n);
      if (u == v || seen[{u, v}]) continue;
      seen[{u, v}] = true;
      edges.emplace_back(handles[u], handles[v], 1.0);
    }
    const auto g = make_graph(handles, edges);
    const Partition p = weak_components(g);

    // oracle: label propagation to a fixed point on the undirected view
    std::vector<int> oracle(g.node_count());
    for (std::size_t i = 0; i < oracle.size(); ++i) oracle[i] = static_cast<int>(i);
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& [uv, w] : g.edges) {
        (void)w;
        const int lo = std::min(oracle[uv.first], oracle[uv.second]);
        if (oracle[uv.first] != lo || oracle[uv.second] != lo) {
          oracle[uv.first] = oracle[uv.second] = lo;
          changed = true;
        }
      }
    }
    for (std::size_t i = 0; i < oracle.size(); ++i)
      for (std::size_t j = 0; j < oracle.size(); ++j)
        CHECK((p.label[i] == p.label[j]) == (oracle[i] == oracle[j]));
  }
}

TEST_CASE("induced subgraph") {
  const auto g = graph({"a", "b", "c"},
                       {{"a", "b", 2.0}, {"b", "c", 1.0}, {"c", "a", 1.0}});
  const auto sub = induced_subgraph(g, std::vector<std::string>{"a", "b"});
  CHECK(sub.node_count() == 2);
  CHECK(sub.edge_count() == 1);
  CHECK(sub.edges.at({sub.node_index("a"), sub.node_index("b")}) ==
        doctest::Approx(2.0));
  CHECK_THROWS_AS(induced_subgraph(g, std::vector<std::string>{"zzz"}),
                  std::invalid_argument);
}

TEST_CASE("spectral radius and path weights") {
  Eigen::MatrixXd a(2, 2);
  a << 0, 1, 1, 0;
  CHECK(spectral_radius(a) == doctest::Approx(1.0));

  const double att = 0.25;
  const Eigen::MatrixXd w = path_weight_matrix(a, att);
  // geometric series: W = I + aA + (aA)^2 + ...
  Eigen::MatrixXd series = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(2, 2);
  for (int l = 1; l <= 60; ++l) {
    power = power * (att * a);
    series += power;
  }
  CHECK((w - series).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((w - att * a * w - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-12);

  CHECK_THROWS_AS(path_weight_matrix(a, 1.0), DivergenceError);
  CHECK_THROWS_AS(path_weight_matrix(a, -0.5), std::invalid_argument);
}

TEST_CASE("modularity of a clean split") {
  const auto g = graph({"a", "b", "c", "d"},
                       {{"a", "b", 1.0}, {"c", "d", 1.0}});
  const double split = modularity(g, {0, 0, 1, 1});
  const double lumped = modularity(g, {0, 0, 0, 0});
  CHECK(split == doctest::Approx(0.5));
  CHECK(split > lumped);
}

TEST_CASE("community detection separates two bridged cliques") {
  std::vector<std::string> handles;
  std::vector<std::tuple<std::string, std::string, double>> edges;
  for (int side = 0; side < 2; ++side) {
    for (int i = 0; i < 5; ++i)
      handles.push_back((side ? "r" : "l") + std::to_string(i));
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        if (i != j)
          edges.emplace_back(handles[side * 5 + i], handles[side * 5 + j], 1.0);
  }
  edges.emplace_back("l0", "r0", 1.0);
  const auto g = make_graph(handles, edges);

  for (CommunityMethod method :
       {CommunityMethod::modularity, CommunityMethod::pathweight}) {
    const Partition p = detect_communities(g, method, 1.0, 7);
    CHECK(p.num_groups == 2);
    for (int i = 1; i < 5; ++i) {
      CHECK(p.label[g.node_index("l" + std::to_string(i))] ==
            p.label[g.node_index("l0")]);
      CHECK(p.label[g.node_index("r" + std::to_string(i))] ==
            p.label[g.node_index("r0")]);
    }
    CHECK(p.label[g.node_index("l0")] != p.label[g.node_index("r0")]);
  }
}

TEST_CASE("community detection is label-order invariant") {
  // same structure with relabeled handles (order-preserving within groups)
  const auto g1 = graph({"a", "b", "c", "d"},
                        {{"a", "b", 3.0}, {"b", "a", 3.0}, {"c", "d", 3.0},
                         {"d", "c", 3.0}, {"a", "c", 1.0}});
  const auto g2 = graph({"p", "q", "x", "y"},
                        {{"p", "q", 3.0}, {"q", "p", 3.0}, {"x", "y", 3.0},
                         {"y", "x", 3.0}, {"p", "x", 1.0}});
  const Partition p1 = detect_communities(g1, CommunityMethod::modularity, 1.0, 3);
  const Partition p2 = detect_communities(g2, CommunityMethod::modularity, 1.0, 3);
  CHECK(p1.label == p2.label);
}

TEST_CASE("density, average degree and diameter") {
  const auto g = graph({"a", "b", "c", "d"},
                       {{"a", "b", 1.0}, {"b", "c", 1.0}, {"c", "d", 1.0}});
  CHECK(density(g) == doctest::Approx(3.0 / 12.0));
  CHECK(average_degree(g) == doctest::Approx(3.0 / 4.0));
  CHECK(diameter(g) == 3);

  const auto lonely = graph({"a"}, {});
  CHECK(diameter(lonely) == 0);
  CHECK_THROWS_AS(density(lonely), std::invalid_argument);
  CHECK_THROWS_AS(average_degree(graph({}, {})), std::invalid_argument);

  // diameter comes from the largest component only
  const auto two = graph({"a", "b", "c", "d", "e"},
                         {{"a", "b", 1.0}, {"b", "c", 1.0}, {"d", "e", 1.0}});
  CHECK(diameter(two) == 2);
}

TEST_CASE("diameter matches an all-pairs oracle") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 13);
    std::vector<std::string> handles;
    for (int i = 0; i < n; ++i) handles.push_back("n" + std::to_string(i));
    std::vector<std::tuple<std::string, std::string, double>> edges;
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (u != v && rng() % 4 == 0)
          edges.emplace_back(handles[u], handles[v], 1.0);
    const auto g = make_graph(handles, edges);

    const int inf = 1 << 20;
    std::vector<std::vector<int>> dist(g.node_count(),
                                       std::vector<int>(g.node_count(), inf));
    for (std::size_t i = 0; i < g.node_count(); ++i) dist[i][i] = 0;
    for (const auto& [uv, w] : g.edges) {
      (void)w;
      dist[uv.first][uv.second] = 1;
      dist[uv.second][uv.first] = 1;
    }
    for (std::size_t k = 0; k < g.node_count(); ++k)
      for (std::size_t i = 0; i < g.node_count(); ++i)
        for (std::size_t j = 0; j < g.node_count(); ++j)
          if (dist[i][k] + dist[k][j] < dist[i][j])
            dist[i][j] = dist[i][k] + dist[k][j];

    const Partition p = weak_components(g);
    const int big = largest_group(p);
    int expected = 0;
    for (std::size_t i = 0; i < g.node_count(); ++i)
      for (std::size_t j = 0; j < g.node_count(); ++j)
        if (p.label[i] == big && p.label[j] == big)
          expected = std::max(expected, dist[i][j]);
    CHECK(diameter(g) == expected);
  }
}

TEST_CASE("top nodes per group") {
  const auto g = graph({"amy", "ann", "bob", "cat"},
                       {{"amy", "ann", 1.0}, {"ann", "amy", 1.0},
                        {"bob", "amy", 1.0}, {"cat", "amy", 1.0}});
  Partition p;
  p.kind = PartitionKind::community;
  p.label = {0, 0, 1, 1};
  p.num_groups = 2;
  const auto top = top_nodes(g, p, 2);
  REQUIRE(top.size() == 2);
  CHECK(top[0][0].first == "amy");
  CHECK(top[0][0].second == 4);
  CHECK(top[0][1].first == "ann");
  // degree tie between bob and cat breaks lexicographically
  CHECK(top[1][0].first == "bob");
  CHECK(top[1][1].first == "cat");
}

TEST_CASE("metrics csv") {
  const auto g = graph({"a", "b", "c"}, {{"a", "b", 1.0}, {"b", "c", 1.0}});
  const Partition p = weak_components(g);
  const auto rows = partition_metrics(g, p);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].nodes == 3);
  CHECK(rows[0].edges == 2);
  CHECK(rows[0].diameter == 2);

  std::ostringstream out;
  write_metrics_csv(out, rows);
  CHECK(out.str() ==
        "group,kind,nodes,edges,density,avg_degree,diameter\n"
        "1,component,3,2,0.333333,0.666667,2\n");
}

TEST_CASE("csv export and import round trip") {
  const auto g = graph({"a", "b", "c"},
                       {{"a", "b", 2.0}, {"b", "c", 1.5}, {"c", "a", 1.0}});
  std::ostringstream out;
  export_csv(out, g);
  std::istringstream in(out.str());
  const auto back = import_csv(in);
  CHECK(back.nodes == g.nodes);
  REQUIRE(back.edge_count() == g.edge_count());
  for (const auto& [uv, w] : g.edges)
    CHECK(back.edges.at(uv) == doctest::Approx(w));
}

TEST_CASE("gexf export contains nodes, edges and attributes") {
  auto g = graph({"kplc7news", "weatherchannel"},
                 {{"kplc7news", "weatherchannel", 3.0}});
  g.agency_type[g.node_index("kplc7news")] = "media";
  const Partition comps = weak_components(g);
  std::ostringstream out;
  export_gexf(out, g, &comps);
  const std::string body = out.str();
  CHECK(body.find("<gexf") != std::string::npos);
  CHECK(body.find("kplc7news") != std::string::npos);
  CHECK(body.find("media") != std::string::npos);
  CHECK(body.find("weight=\"3\"") != std::string::npos);
}

TEST_CASE("dot export") {
  const auto g = graph({"a", "b"}, {{"a", "b", 2.0}});
  std::ostringstream out;
  export_dot(out, g);
  const std::string body = out.str();
  CHECK(body.find("digraph") != std::string::npos);
  CHECK(body.find("\"a\" -> \"b\"") != std::string::npos);
}
