#include "hebbsync/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace hebbsync {

Graph::Graph(std::size_t n_vertices, std::vector<Edge> edges)
    : n_vertices_(n_vertices), edges_(std::move(edges)), adjacency_(n_vertices) {
    if (n_vertices_ == 0) {
        throw std::invalid_argument("graph must have at least one vertex");
    }
    for (auto& e : edges_) {
        if (e.i >= n_vertices_ || e.j >= n_vertices_) {
            throw std::invalid_argument("edge endpoint out of range");
        }
        if (e.i == e.j) {
            throw std::invalid_argument("self-loops are not allowed");
        }
        if (e.i > e.j) {
            std::swap(e.i, e.j);
        }
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
        throw std::invalid_argument("duplicate edge");
    }
    for (std::size_t k = 0; k < edges_.size(); ++k) {
        adjacency_[edges_[k].i].push_back({edges_[k].j, k});
        adjacency_[edges_[k].j].push_back({edges_[k].i, k});
    }
}

std::optional<std::size_t> Graph::edge_index(std::size_t i, std::size_t j) const {
    if (i > j) {
        std::swap(i, j);
    }
    const Edge key{i, j};
    auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
    if (it == edges_.end() || *it != key) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - edges_.begin());
}

bool Graph::is_connected() const {
    std::vector<bool> seen(n_vertices_, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t visited = 1;
    while (!stack.empty()) {
        const std::size_t v = stack.back();
        stack.pop_back();
        for (const auto& inc : adjacency_[v]) {
            if (!seen[inc.neighbor]) {
                seen[inc.neighbor] = true;
                ++visited;
                stack.push_back(inc.neighbor);
            }
        }
    }
    return visited == n_vertices_;
}

Graph complete_graph(std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("complete_graph: n must be positive");
    }
    std::vector<Edge> edges;
    edges.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            edges.push_back({i, j});
        }
    }
    return Graph(n, std::move(edges));
}

Graph path_graph(std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("path_graph: n must be positive");
    }
    std::vector<Edge> edges;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        edges.push_back({i, i + 1});
    }
    return Graph(n, std::move(edges));
}

Graph cycle_graph(std::size_t n) {
    if (n < 3) {
        throw std::invalid_argument("cycle_graph: n must be at least 3");
    }
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        edges.push_back({i, (i + 1) % n});
    }
    return Graph(n, std::move(edges));
}

Graph random_connected_graph(std::size_t n, double p, std::mt19937_64& rng) {
    if (n == 0) {
        throw std::invalid_argument("random_connected_graph: n must be positive");
    }
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    // Random spanning tree: attach each vertex of a shuffled order to an
    // earlier one.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t k = 1; k < n; ++k) {
        std::uniform_int_distribution<std::size_t> pick(0, k - 1);
        const std::size_t u = order[k];
        const std::size_t v = order[pick(rng)];
        adj[u][v] = adj[v][u] = true;
    }
    std::bernoulli_distribution coin(p);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (coin(rng)) {
                adj[i][j] = adj[j][i] = true;
            }
        }
    }
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (adj[i][j]) {
                edges.push_back({i, j});
            }
        }
    }
    return Graph(n, std::move(edges));
}

Graph read_edge_list(std::istream& in) {
    std::optional<std::size_t> n;
    std::vector<Edge> edges;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        std::string first;
        if (!(fields >> first)) {
            continue;
        }
        if (!n) {
            std::size_t count = 0;
            if (first != "n" || !(fields >> count)) {
                throw std::invalid_argument("edge list: expected header 'n <N>' on line " +
                                            std::to_string(line_no));
            }
            n = count;
            continue;
        }
        std::size_t i = 0;
        std::size_t j = 0;
        std::string rest;
        const auto [ptr, ec] = std::from_chars(first.data(), first.data() + first.size(), i);
        if (ec != std::errc{} || ptr != first.data() + first.size() || !(fields >> j) ||
            (fields >> rest)) {
            throw std::invalid_argument("edge list: malformed edge on line " +
                                        std::to_string(line_no));
        }
        edges.push_back({i, j});
    }
    if (!n) {
        throw std::invalid_argument("edge list: missing 'n <N>' header");
    }
    return Graph(*n, std::move(edges));
}

Graph load_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open edge list: " + path.string());
    }
    return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
    out << "n " << g.n_vertices() << '\n';
    for (const auto& e : g.edges()) {
        out << e.i << ' ' << e.j << '\n';
    }
}

Graph parse_graph_spec(std::string_view spec) {
    const auto colon = spec.find(':');
    if (colon != std::string_view::npos) {
        const auto kind = spec.substr(0, colon);
        const auto arg = spec.substr(colon + 1);
        std::size_t n = 0;
        const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), n);
        const bool numeric = ec == std::errc{} && ptr == arg.data() + arg.size();
        if (kind == "complete" || kind == "path" || kind == "cycle") {
            if (!numeric) {
                throw std::invalid_argument("graph spec: bad vertex count in '" +
                                            std::string(spec) + "'");
            }
            if (kind == "complete") return complete_graph(n);
            if (kind == "path") return path_graph(n);
            return cycle_graph(n);
        }
    }
    return load_edge_list(std::filesystem::path(std::string(spec)));
}

namespace {

void check_weights(const Graph& g, const Vector& w) {
    if (static_cast<std::size_t>(w.size()) != g.n_edges()) {
        throw std::invalid_argument("edge weight vector length does not match edge count");
    }
}

}  // namespace

Matrix incidence_matrix(const Graph& g, const Vector& edge_weights) {
    check_weights(g, edge_weights);
    Matrix b = Matrix::Zero(static_cast<Eigen::Index>(g.n_vertices()),
                            static_cast<Eigen::Index>(g.n_edges()));
    for (std::size_t k = 0; k < g.n_edges(); ++k) {
        const auto& e = g.edge(k);
        const auto col = static_cast<Eigen::Index>(k);
        b(static_cast<Eigen::Index>(e.i), col) = -edge_weights(col);
        b(static_cast<Eigen::Index>(e.j), col) = edge_weights(col);
    }
    return b;
}

Matrix laplacian_from_weights(const Graph& g, const Vector& edge_weights) {
    check_weights(g, edge_weights);
    const auto n = static_cast<Eigen::Index>(g.n_vertices());
    Matrix l = Matrix::Zero(n, n);
    for (std::size_t k = 0; k < g.n_edges(); ++k) {
        const auto i = static_cast<Eigen::Index>(g.edge(k).i);
        const auto j = static_cast<Eigen::Index>(g.edge(k).j);
        const double w = edge_weights(static_cast<Eigen::Index>(k));
        l(i, j) = -w;
        l(j, i) = -w;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        l(i, i) = -l.row(i).sum();
    }
    return l;
}

}  // namespace hebbsync
