#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mesh.hpp"

namespace wgl {

namespace detail {
inline int cells_per_side(int level)
{
    if (level < 1 || level > 12)
        throw std::invalid_argument("mesh level must be in 1..12, got " + std::to_string(level));
    return 1 << level;
}
} // namespace detail

/// 2^level x 2^level quadrilaterals on the unit square. Interior vertex (i, j)
/// is shifted by +0.1h(1, 1) when i + j is even and by -0.1h(1, 1) otherwise.
inline PolytopalMesh<2> generate_quad_mesh(int level)
{
    const int n = detail::cells_per_side(level);
    const double h = 1.0 / n;
    MeshBuilder<2> b;
    auto id = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) {
            Point<2> p(i * h, j * h);
            if (i > 0 && i < n && j > 0 && j < n) {
                const double s = ((i + j) % 2 == 0) ? 0.1 * h : -0.1 * h;
                p += Point<2>(s, s);
            }
            b.add_vertex(p);
        }
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            b.add_polygon({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    return std::move(b).build();
}

/// Quadrilateral/pentagon/hexagon mesh of the unit square. Starting from the
/// uniform 2^level grid, every interior grid vertex (i, j) with i + j even has
/// the four corners meeting there cut off at edge midpoints; the four corner
/// triangles form a diamond cell. Interior squares lose two opposite corners
/// (hexagons), squares on the boundary lose one (pentagons), diamonds are
/// quadrilaterals.
inline PolytopalMesh<2> generate_mixed_polygon_mesh(int level)
{
    const int n = detail::cells_per_side(level);
    const double h = 1.0 / n;
    MeshBuilder<2> b;
    std::map<std::pair<int, int>, int> ids;  // doubled lattice coordinates
    auto vid = [&](int a, int c) {
        auto [it, inserted] = ids.try_emplace({a, c}, 0);
        if (inserted)
            it->second = b.add_vertex(Point<2>(0.5 * a * h, 0.5 * c * h));
        return it->second;
    };
    auto cut = [n](int i, int j) { return i > 0 && i < n && j > 0 && j < n && (i + j) % 2 == 0; };

    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const std::array<std::pair<int, int>, 4> corners{
                {{i, j}, {i + 1, j}, {i + 1, j + 1}, {i, j + 1}}};
            std::vector<int> loop;
            for (int c = 0; c < 4; ++c) {
                const auto [ci, cj] = corners[c];
                if (!cut(ci, cj)) {
                    loop.push_back(vid(2 * ci, 2 * cj));
                    continue;
                }
                const auto [pi, pj] = corners[(c + 3) % 4];
                const auto [ni, nj] = corners[(c + 1) % 4];
                loop.push_back(vid(pi + ci, pj + cj));
                loop.push_back(vid(ci + ni, cj + nj));
            }
            b.add_polygon(loop);
        }
    for (int j = 1; j < n; ++j)
        for (int i = 1; i < n; ++i)
            if (cut(i, j))
                b.add_polygon({vid(2 * i + 1, 2 * j), vid(2 * i, 2 * j + 1), vid(2 * i - 1, 2 * j),
                               vid(2 * i, 2 * j - 1)});
    return std::move(b).build();
}

/// Unit cube split into (2^level)^3 subcubes, each cut by the vertical plane
/// through the anti-diagonal of its horizontal cross-section into two
/// triangular prisms.
inline PolytopalMesh<3> generate_wedge_mesh(int level)
{
    const int n = detail::cells_per_side(level);
    const double h = 1.0 / n;
    MeshBuilder<3> b;
    auto id = [n](int i, int j, int l) { return (l * (n + 1) + j) * (n + 1) + i; };
    for (int l = 0; l <= n; ++l)
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i)
                b.add_vertex(Point<3>(i * h, j * h, l * h));
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                auto p = [&](int a, int c, int e) { return id(i + a, j + c, l + e); };
                const std::vector<int> diag{p(1, 0, 0), p(0, 1, 0), p(0, 1, 1), p(1, 0, 1)};
                b.add_cell({{p(0, 0, 0), p(1, 0, 0), p(0, 1, 0)},
                            {p(0, 0, 1), p(1, 0, 1), p(0, 1, 1)},
                            {p(0, 0, 0), p(1, 0, 0), p(1, 0, 1), p(0, 0, 1)},
                            {p(0, 0, 0), p(0, 1, 0), p(0, 1, 1), p(0, 0, 1)},
                            diag});
                b.add_cell({{p(1, 0, 0), p(1, 1, 0), p(0, 1, 0)},
                            {p(1, 0, 1), p(1, 1, 1), p(0, 1, 1)},
                            {p(1, 0, 0), p(1, 1, 0), p(1, 1, 1), p(1, 0, 1)},
                            {p(1, 1, 0), p(0, 1, 0), p(0, 1, 1), p(1, 1, 1)},
                            diag});
            }
    return std::move(b).build();
}

} // namespace wgl
