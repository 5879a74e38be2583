#pragma once

#include <Eigen/Dense>

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace hebbsync {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Undirected edge, stored with i < j.
struct Edge {
    std::size_t i = 0;
    std::size_t j = 0;

    auto operator<=>(const Edge&) const = default;
};

/// Simple undirected graph with a canonical edge ordering.
///
/// Edges are normalized to i < j and sorted lexicographically on construction,
/// so edge index k is stable across every matrix, state vector and CSV column
/// built from the same graph. Immutable once constructed.
class Graph {
public:
    struct Incident {
        std::size_t neighbor;
        std::size_t edge;
    };

    /// Throws std::invalid_argument on self-loops, duplicate edges or
    /// out-of-range endpoints.
    Graph(std::size_t n_vertices, std::vector<Edge> edges);

    [[nodiscard]] std::size_t n_vertices() const noexcept { return n_vertices_; }
    [[nodiscard]] std::size_t n_edges() const noexcept { return edges_.size(); }
    [[nodiscard]] std::span<const Edge> edges() const noexcept { return edges_; }
    [[nodiscard]] const Edge& edge(std::size_t k) const { return edges_.at(k); }

    [[nodiscard]] std::span<const Incident> incident(std::size_t v) const {
        return adjacency_.at(v);
    }
    [[nodiscard]] std::size_t degree(std::size_t v) const { return adjacency_.at(v).size(); }

    [[nodiscard]] std::optional<std::size_t> edge_index(std::size_t i, std::size_t j) const;
    [[nodiscard]] bool is_connected() const;

private:
    std::size_t n_vertices_;
    std::vector<Edge> edges_;
    std::vector<std::vector<Incident>> adjacency_;
};

[[nodiscard]] Graph complete_graph(std::size_t n);
[[nodiscard]] Graph path_graph(std::size_t n);
[[nodiscard]] Graph cycle_graph(std::size_t n);

/// G(n, p) graph with a uniformly random spanning tree added, so the result is
/// always connected.
[[nodiscard]] Graph random_connected_graph(std::size_t n, double p, std::mt19937_64& rng);

/// Edge-list text format: a header line `n <N>` followed by one `i j` pair per
/// line. Blank lines and `#` comments are ignored.
[[nodiscard]] Graph read_edge_list(std::istream& in);
[[nodiscard]] Graph load_edge_list(const std::filesystem::path& path);
void write_edge_list(std::ostream& out, const Graph& g);

/// Resolves `complete:<N>`, `path:<N>`, `cycle:<N>`, or an edge-list file path.
[[nodiscard]] Graph parse_graph_spec(std::string_view spec);

/// N x E weighted incidence matrix. Column k carries -w_k at row i_k and +w_k
/// at row j_k.
[[nodiscard]] Matrix incidence_matrix(const Graph& g, const Vector& edge_weights);

/// Positive-semidefinite (for nonnegative weights) weighted Laplacian:
/// off-diagonal -w_ij on edges, diagonal the negated off-diagonal row sum.
[[nodiscard]] Matrix laplacian_from_weights(const Graph& g, const Vector& edge_weights);

}  // namespace hebbsync
