#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "test_support.hpp"

using namespace wgl;

namespace {

// Shoelace area of a 2D cell from its edges, independent of the builder.
double polygon_area(const PolytopalMesh<2>& mesh, int c)
{
    // walk the edge loop
    const auto& cell = mesh.cell(c);
    std::multimap<int, int> adj;
    for (int f : cell.faces) {
        const auto& v = mesh.face(f).vertices;
        adj.emplace(v[0], v[1]);
        adj.emplace(v[1], v[0]);
    }
    std::vector<int> loop{mesh.face(cell.faces[0]).vertices[0]};
    int prev = -1;
    while (static_cast<int>(loop.size()) < cell.num_faces()) {
        const int cur = loop.back();
        auto [lo, hi] = adj.equal_range(cur);
        for (auto it = lo; it != hi; ++it)
            if (it->second != prev) {
                prev = cur;
                loop.push_back(it->second);
                break;
            }
    }
    double a = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i) {
        const auto& p = mesh.vertices()[loop[i]];
        const auto& q = mesh.vertices()[loop[(i + 1) % loop.size()]];
        a += p(0) * q(1) - q(0) * p(1);
    }
    return std::abs(a) / 2.0;
}

template <int D>
double vertex_diameter(const PolytopalMesh<D>& mesh, int c)
{
    double d = 0.0;
    for (int a : mesh.cell(c).vertices)
        for (int b : mesh.cell(c).vertices)
            d = std::max(d, (mesh.vertices()[a] - mesh.vertices()[b]).norm());
    return d;
}

template <int D>
void expect_conforming(const PolytopalMesh<D>& mesh)
{
    for (int f = 0; f < mesh.num_faces(); ++f) {
        const auto& face = mesh.face(f);
        int owners = 0;
        for (int c = 0; c < mesh.num_cells(); ++c)
            owners += std::count(mesh.cell(c).faces.begin(), mesh.cell(c).faces.end(), f);
        EXPECT_EQ(owners, face.is_boundary() ? 1 : 2) << "face " << f;
        if (face.is_boundary())
            continue;
        EXPECT_NE(face.cells[0], face.cells[1]);
        for (int side : face.cells) {
            const auto& cv = mesh.cell(side).vertices;
            for (int v : face.vertices)
                EXPECT_TRUE(std::binary_search(cv.begin(), cv.end(), v));
        }
    }
}

template <int D>
void expect_boundary_on_domain_boundary(const PolytopalMesh<D>& mesh)
{
    for (int f : mesh.boundary_faces()) {
        const auto& c = mesh.face(f).centroid;
        bool on = false;
        for (int d = 0; d < D; ++d)
            on = on || std::abs(c(d)) < 1e-14 || std::abs(c(d) - 1.0) < 1e-14;
        EXPECT_TRUE(on) << "boundary face " << f;
    }
}

} // namespace

TEST(QuadMesh, LevelOneCounts)
{
    const auto m = generate_quad_mesh(1);
    EXPECT_EQ(m.num_cells(), 4);
    EXPECT_EQ(m.num_faces(), 12);
    EXPECT_EQ(m.num_vertices(), 9);
}

TEST(QuadMesh, LevelTwoCounts)
{
    const auto m = generate_quad_mesh(2);
    EXPECT_EQ(m.num_cells(), 16);
    EXPECT_EQ(m.num_faces(), 40);
}

TEST(QuadMesh, LevelThreeShapeQuality)
{
    const auto m = generate_quad_mesh(3);
    ASSERT_EQ(m.num_cells(), 64);
    for (int c = 0; c < m.num_cells(); ++c) {
        const double area = polygon_area(m, c);
        EXPECT_GT(area, 0.0);
        EXPECT_NEAR(area, m.cell(c).measure, 1e-15);
        const double diam = vertex_diameter(m, c);
        EXPECT_LT(diam * diam / area, 5.0) << "cell " << c;
        EXPECT_EQ(m.cell(c).num_faces(), 4);
    }
}

TEST(QuadMesh, InteriorVerticesPerturbedByParity)
{
    const auto m = generate_quad_mesh(2);
    const double h = 0.25;
    int moved = 0;
    for (const auto& p : m.vertices()) {
        const double i = std::round(p(0) / h), j = std::round(p(1) / h);
        const Point<2> off = p - Point<2>(i * h, j * h);
        if (off.norm() > 1e-14) {
            ++moved;
            const double s = (static_cast<long>(i + j) % 2 == 0) ? 0.1 * h : -0.1 * h;
            EXPECT_NEAR(off(0), s, 1e-15);
            EXPECT_NEAR(off(1), s, 1e-15);
        }
    }
    EXPECT_EQ(moved, 9);
}

TEST(MixedMesh, MeasuresSumToOne)
{
    for (int level = 1; level <= 4; ++level)
        EXPECT_NEAR(generate_mixed_polygon_mesh(level).total_measure(), 1.0, 1e-12);
}

TEST(MixedMesh, LevelTwoHasQuadsPentagonsHexagons)
{
    const auto m = generate_mixed_polygon_mesh(2);
    std::set<int> sides;
    for (const auto& c : m.cells())
        sides.insert(c.num_faces());
    EXPECT_TRUE(sides.count(4));
    EXPECT_TRUE(sides.count(5));
    EXPECT_TRUE(sides.count(6));
}

TEST(MixedMesh, LevelThreeConforming)
{
    const auto m = generate_mixed_polygon_mesh(3);
    expect_conforming(m);
    expect_boundary_on_domain_boundary(m);
    for (int c = 0; c < m.num_cells(); ++c)
        EXPECT_NEAR(polygon_area(m, c), m.cell(c).measure, 1e-14);
}

TEST(WedgeMesh, LevelOneCount)
{
    EXPECT_EQ(generate_wedge_mesh(1).num_cells(), 16);
}

TEST(WedgeMesh, FiveFacesTwoTrianglesThreeQuads)
{
    for (int level = 1; level <= 2; ++level) {
        const auto m = generate_wedge_mesh(level);
        for (const auto& c : m.cells()) {
            ASSERT_EQ(c.num_faces(), 5);
            int tri = 0, quad = 0;
            for (int f : c.faces)
                (m.face(f).vertices.size() == 3 ? tri : quad) += 1;
            EXPECT_EQ(tri, 2);
            EXPECT_EQ(quad, 3);
        }
    }
}

TEST(WedgeMesh, LevelTwoVolumes)
{
    const auto m = generate_wedge_mesh(2);
    const double h = 0.25;
    for (const auto& c : m.cells())
        EXPECT_NEAR(c.measure, h * h * h / 2.0, 1e-15);
    expect_conforming(m);
    expect_boundary_on_domain_boundary(m);
}

TEST(WedgeMesh, DiagonalDirectionUniform)
{
    // every vertical quad face that is not axis-aligned lies in a plane x + y = const
    const auto m = generate_wedge_mesh(2);
    for (const auto& f : m.faces()) {
        const auto& n = f.normal;
        if (std::abs(n(2)) > 1e-12 || std::abs(n(0)) < 1e-12 || std::abs(n(1)) < 1e-12)
            continue;
        EXPECT_NEAR(std::abs(n(0)), std::abs(n(1)), 1e-14);
        EXPECT_GT(n(0) * n(1), 0.0);
    }
}

TEST(Meshes, PartitionOfUnitDomain)
{
    for (int level = 1; level <= 3; ++level) {
        EXPECT_NEAR(generate_quad_mesh(level).total_measure(), 1.0, 1e-12);
        EXPECT_NEAR(generate_mixed_polygon_mesh(level).total_measure(), 1.0, 1e-12);
        EXPECT_NEAR(generate_wedge_mesh(level).total_measure(), 1.0, 1e-12);
    }
}

TEST(Meshes, MeshSizeHalvesPerLevel)
{
    for (int level = 1; level <= 4; ++level) {
        EXPECT_NEAR(generate_quad_mesh(level + 1).h(), generate_quad_mesh(level).h() / 2, 1e-15);
        EXPECT_NEAR(generate_mixed_polygon_mesh(level + 1).h(), generate_mixed_polygon_mesh(level).h() / 2, 1e-15);
    }
    for (int level = 1; level <= 2; ++level)
        EXPECT_NEAR(generate_wedge_mesh(level + 1).h(), generate_wedge_mesh(level).h() / 2, 1e-15);
}

TEST(Meshes, ConformityAllFamilies)
{
    expect_conforming(generate_quad_mesh(2));
    expect_conforming(generate_mixed_polygon_mesh(2));
    expect_conforming(generate_wedge_mesh(1));
}

TEST(Meshes, InvalidLevelRejected)
{
    EXPECT_THROW(generate_quad_mesh(0), std::invalid_argument);
    EXPECT_THROW(generate_wedge_mesh(-1), std::invalid_argument);
}

TEST(Meshes, OutwardNormalsPointAway)
{
    const auto m = generate_mixed_polygon_mesh(2);
    for (const auto& c : m.cells())
        for (int lf = 0; lf < c.num_faces(); ++lf) {
            const auto n = c.outward_normal(lf, m.faces());
            EXPECT_GT(n.dot(m.face(c.faces[lf]).centroid - c.centroid), 0.0);
        }
}

TEST(MeshIo, RoundTrip2D)
{
    const auto m = generate_mixed_polygon_mesh(2);
    std::stringstream ss;
    write_mesh(ss, m);
    const auto r = read_mesh<2>(ss);
    ASSERT_EQ(r.num_vertices(), m.num_vertices());
    ASSERT_EQ(r.num_faces(), m.num_faces());
    ASSERT_EQ(r.num_cells(), m.num_cells());
    for (int v = 0; v < m.num_vertices(); ++v)
        EXPECT_EQ(r.vertices()[v], m.vertices()[v]);
    for (int f = 0; f < m.num_faces(); ++f) {
        EXPECT_EQ(r.face(f).vertices, m.face(f).vertices);
        EXPECT_EQ(r.face(f).is_boundary(), m.face(f).is_boundary());
    }
    for (int c = 0; c < m.num_cells(); ++c) {
        EXPECT_EQ(r.cell(c).faces, m.cell(c).faces);
        EXPECT_NEAR(r.cell(c).measure, m.cell(c).measure, 1e-16);
    }
}

TEST(MeshIo, RoundTrip3D)
{
    const auto m = generate_wedge_mesh(1);
    std::stringstream ss;
    write_mesh(ss, m);
    const auto r = read_mesh<3>(ss);
    ASSERT_EQ(r.num_cells(), m.num_cells());
    for (int c = 0; c < m.num_cells(); ++c)
        EXPECT_NEAR(r.cell(c).measure, m.cell(c).measure, 1e-16);
}

TEST(MeshIo, RejectsWrongDimensionAndGarbage)
{
    std::stringstream ss;
    write_mesh(ss, generate_quad_mesh(1));
    EXPECT_THROW(read_mesh<3>(ss), geometry_error);
    std::stringstream bad("wgl-mesh 2\nvertices x\n");
    EXPECT_THROW(read_mesh<2>(bad), geometry_error);
}

TEST(Decomposition, UnitSquareFan)
{
    const auto m = wgl::testing::unit_square_mesh();
    const auto d = decompose_cell(m, 0);
    ASSERT_EQ(d.size(), 4);
    for (double a : d.measures)
        EXPECT_NEAR(a, 0.25, 1e-15);
    for (const auto& pieces : d.face_pieces)
        EXPECT_EQ(pieces.size(), 1u);
    EXPECT_EQ(d.interior.size(), 4u);
}

TEST(Decomposition, TriangleFan)
{
    const auto m = wgl::testing::unit_triangle_mesh();
    const auto d = decompose_cell(m, 0);
    ASSERT_EQ(d.size(), 3);
    for (double a : d.measures)
        EXPECT_NEAR(a, 1.0 / 6.0, 1e-15);
}

TEST(Decomposition, WedgeFan)
{
    const auto m = wgl::testing::unit_wedge_mesh();
    const auto d = decompose_cell(m, 0);
    double vol = 0.0;
    for (double v : d.measures) {
        EXPECT_GT(v, 0.0);
        vol += v;
    }
    EXPECT_NEAR(vol, 0.5, 1e-13);
    const auto& cell = m.cell(0);
    for (int lf = 0; lf < cell.num_faces(); ++lf)
        EXPECT_EQ(d.face_pieces[lf].size(), m.face(cell.faces[lf]).vertices.size() == 4 ? 4u : 1u);
    EXPECT_EQ(d.size(), 2 + 3 * 4);
}

TEST(Decomposition, MeasuresPartitionEveryCell)
{
    auto check = [](const auto& mesh) {
        for (int c = 0; c < mesh.num_cells(); ++c) {
            const auto d = decompose_cell(mesh, c);
            double s = 0.0;
            for (double v : d.measures)
                s += v;
            EXPECT_NEAR(s, mesh.cell(c).measure, 1e-12 * mesh.cell(c).measure);
            const auto& cell = mesh.cell(c);
            for (int lf = 0; lf < cell.num_faces(); ++lf) {
                double fs = 0.0;
                for (const auto& p : d.face_pieces[lf])
                    fs += p.measure;
                const double fm = mesh.face(cell.faces[lf]).measure;
                EXPECT_NEAR(fs, fm, 1e-12 * fm);
            }
        }
    };
    check(generate_quad_mesh(3));
    check(generate_mixed_polygon_mesh(3));
    check(generate_wedge_mesh(2));
}

TEST(Decomposition, RejectsCentroidOutsideCell)
{
    // a dart whose vertex average lies outside the cell
    MeshBuilder<2> b;
    b.add_vertex(Point<2>(0, 0));
    b.add_vertex(Point<2>(1, 0));
    b.add_vertex(Point<2>(0.05, 0.05));
    b.add_vertex(Point<2>(0, 1));
    b.add_polygon({0, 1, 2, 3});
    EXPECT_THROW(
        {
            const auto m = std::move(b).build();
            decompose_cell(m, 0);
        },
        geometry_error);
}
