#include "helpers.hpp"

#include "hebbsync/graph.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <sstream>

using namespace hebbsync;

TEST_SUITE("graph") {

TEST_CASE("complete graphs have canonical edge lists") {
    const Graph k3 = complete_graph(3);
    REQUIRE(k3.n_vertices() == 3);
    REQUIRE(k3.n_edges() == 3);
    CHECK(k3.edge(0) == Edge{0, 1});
    CHECK(k3.edge(1) == Edge{0, 2});
    CHECK(k3.edge(2) == Edge{1, 2});

    const Graph k1 = complete_graph(1);
    CHECK(k1.n_vertices() == 1);
    CHECK(k1.n_edges() == 0);

    CHECK(complete_graph(5).n_edges() == 10);
    CHECK_THROWS_AS((void)complete_graph(0), std::invalid_argument);
}

TEST_CASE("construction normalizes and validates edges") {
    const Graph g(4, {{3, 1}, {0, 2}, {1, 0}});
    REQUIRE(g.n_edges() == 3);
    CHECK(g.edge(0) == Edge{0, 1});
    CHECK(g.edge(1) == Edge{0, 2});
    CHECK(g.edge(2) == Edge{1, 3});
    CHECK(std::is_sorted(g.edges().begin(), g.edges().end()));
    CHECK(g.edge_index(3, 1) == 2);
    CHECK_FALSE(g.edge_index(2, 3).has_value());
    CHECK(g.is_connected());

    CHECK_THROWS_AS(Graph(3, {{1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph(3, {{0, 3}}), std::invalid_argument);
    CHECK_FALSE(Graph(4, {{0, 1}, {2, 3}}).is_connected());
}

TEST_CASE("random connected graphs are connected and reproducible") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::mt19937_64 a(seed), b(seed);
        const Graph g = random_connected_graph(8, 0.3, a);
        const Graph h = random_connected_graph(8, 0.3, b);
        CHECK(g.is_connected());
        CHECK(std::equal(g.edges().begin(), g.edges().end(), h.edges().begin(), h.edges().end()));
    }
}

TEST_CASE("edge-list files and graph specs") {
    std::istringstream in("# triangle plus tail\nn 4\n0 1\n1 2 # inline\n\n2 0\n2 3\n");
    const Graph g = read_edge_list(in);
    CHECK(g.n_vertices() == 4);
    CHECK(g.n_edges() == 4);
    CHECK(g.edge(1) == Edge{0, 2});

    std::ostringstream out;
    write_edge_list(out, g);
    std::istringstream back(out.str());
    const Graph h = read_edge_list(back);
    CHECK(std::equal(g.edges().begin(), g.edges().end(), h.edges().begin(), h.edges().end()));

    std::istringstream missing("0 1\n");
    CHECK_THROWS_AS((void)read_edge_list(missing), std::invalid_argument);
    std::istringstream junk("n 3\n0 x\n");
    CHECK_THROWS_AS((void)read_edge_list(junk), std::invalid_argument);

    CHECK(parse_graph_spec("complete:4").n_edges() == 6);
    CHECK(parse_graph_spec("path:4").n_edges() == 3);
    CHECK(parse_graph_spec("cycle:5").n_edges() == 5);
    CHECK_THROWS_AS((void)parse_graph_spec("complete:x"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_graph_spec("/nonexistent/edges.txt"), std::invalid_argument);
}

TEST_CASE("incidence matrix orientation and weights") {
    const Graph g = path_graph(2);
    Vector w(1);
    w << 2.5;
    const Matrix b = incidence_matrix(g, w);
    CHECK(b(0, 0) == -2.5);
    CHECK(b(1, 0) == 2.5);

    const Graph k4 = complete_graph(4);
    CHECK(incidence_matrix(k4, Vector::Zero(6)).isZero(0.0));
    CHECK_THROWS_AS((void)incidence_matrix(k4, Vector::Zero(5)), std::invalid_argument);

    const Matrix bk = incidence_matrix(k4, Vector::LinSpaced(6, 1.0, 6.0));
    for (Eigen::Index c = 0; c < bk.cols(); ++c) {
        CHECK((bk.col(c).array() != 0.0).count() == 2);
        CHECK(bk.col(c).sum() == 0.0);
    }
}

TEST_CASE("B B^T is the Laplacian of the squared weights on K3") {
    const Graph k3 = complete_graph(3);
    Vector w(3);
    w << 1.0, 2.0, 3.0;
    const Matrix b = incidence_matrix(k3, w);

    // Oracle: explicit triple loop, then the hand-evaluated matrix for
    // squared weights (1, 4, 9) on edges (0,1), (0,2), (1,2).
    Matrix bbt = Matrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) bbt(i, j) += b(i, k) * b(j, k);
    Matrix expected(3, 3);
    expected << 5, -1, -4, -1, 10, -9, -4, -9, 13;
    CHECK((bbt - expected).cwiseAbs().maxCoeff() == 0.0);

    Vector sq(3);
    sq << 1.0, 4.0, 9.0;
    CHECK((laplacian_from_weights(k3, sq) - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Laplacian examples") {
    Vector one(1);
    one << 1.0;
    Matrix expected(2, 2);
    expected << 1, -1, -1, 1;
    CHECK(laplacian_from_weights(path_graph(2), one) == expected);

    const Matrix l3 = laplacian_from_weights(complete_graph(3), Vector::Ones(3));
    Eigen::SelfAdjointEigenSolver<Matrix> es(l3);
    CHECK(es.eigenvalues()(0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(es.eigenvalues()(1) == doctest::Approx(3.0));
    CHECK(es.eigenvalues()(2) == doctest::Approx(3.0));

    std::mt19937_64 rng(11);
    const Matrix l4 = laplacian_from_weights(complete_graph(4), test::uniform_vector(6, -2, 2, rng));
    CHECK(l4.rowwise().sum().cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("incidence/Laplacian invariants on random graphs") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 9);
        const Graph g = random_connected_graph(n, 0.4, rng);
        const Vector w = test::uniform_vector(static_cast<Eigen::Index>(g.n_edges()), -3, 3, rng);
        const Matrix b = incidence_matrix(g, w);
        const Matrix l = laplacian_from_weights(g, w.cwiseAbs2());
        const double scale = std::max(1.0, test::max_abs(l));
        CHECK(test::max_abs(b * b.transpose() - l) <= 1e-13 * scale);
        CHECK(l == l.transpose());
        CHECK((l * Vector::Ones(static_cast<Eigen::Index>(n))).lpNorm<Eigen::Infinity>() <
              1e-13 * scale);
    }
}

}  // TEST_SUITE
