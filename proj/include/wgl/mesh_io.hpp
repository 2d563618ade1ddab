#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mesh.hpp"

namespace wgl {

// Plain-text mesh format:
//
//   wgl-mesh <dim>
//   vertices <nv>
//   <x> <y> [<z>]                        (nv lines)
//   faces <nf>
//   <n> <v_0> ... <v_{n-1}> <boundary>   (nf lines, boundary is 0 or 1)
//   cells <nc>
//   <m> <f_0> ... <f_{m-1}>              (nc lines)
//
// Coordinates are written with 17 significant digits so a round trip is exact.

template <int D>
void write_mesh(std::ostream& os, const PolytopalMesh<D>& mesh)
{
    char buf[64];
    os << "wgl-mesh " << D << "\n";
    os << "vertices " << mesh.num_vertices() << "\n";
    for (const auto& p : mesh.vertices()) {
        for (int d = 0; d < D; ++d) {
            std::snprintf(buf, sizeof buf, "%.17g", p(d));
            os << (d ? " " : "") << buf;
        }
        os << "\n";
    }
    os << "faces " << mesh.num_faces() << "\n";
    for (const auto& f : mesh.faces()) {
        os << f.vertices.size();
        for (int v : f.vertices)
            os << " " << v;
        os << " " << (f.is_boundary() ? 1 : 0) << "\n";
    }
    os << "cells " << mesh.num_cells() << "\n";
    for (const auto& c : mesh.cells()) {
        os << c.faces.size();
        for (int f : c.faces)
            os << " " << f;
        os << "\n";
    }
}

template <int D>
PolytopalMesh<D> read_mesh(std::istream& is)
{
    auto expect = [&is](const std::string& word) {
        std::string w;
        if (!(is >> w) || w != word)
            throw geometry_error("mesh file: expected '" + word + "', got '" + w + "'");
    };
    auto count = [&is](const char* what) {
        long n = -1;
        if (!(is >> n) || n < 0)
            throw geometry_error(std::string("mesh file: bad ") + what + " count");
        return static_cast<int>(n);
    };

    expect("wgl-mesh");
    if (count("dimension") != D)
        throw geometry_error("mesh file: dimension mismatch");

    MeshBuilder<D> b;
    expect("vertices");
    const int nv = count("vertex");
    for (int i = 0; i < nv; ++i) {
        Point<D> p;
        for (int d = 0; d < D; ++d)
            if (!(is >> p(d)))
                throw geometry_error("mesh file: truncated vertex " + std::to_string(i));
        b.add_vertex(p);
    }

    expect("faces");
    const int nf = count("face");
    std::vector<int> flags(nf);
    for (int i = 0; i < nf; ++i) {
        const int n = count("face vertex");
        std::vector<int> loop(n);
        for (auto& v : loop)
            if (!(is >> v) || v < 0 || v >= nv)
                throw geometry_error("mesh file: bad vertex id in face " + std::to_string(i));
        if (!(is >> flags[i]))
            throw geometry_error("mesh file: missing boundary flag in face " + std::to_string(i));
        b.add_face(loop);
    }

    expect("cells");
    const int nc = count("cell");
    for (int i = 0; i < nc; ++i) {
        const int m = count("cell face");
        std::vector<int> ids(m);
        for (auto& f : ids)
            if (!(is >> f))
                throw geometry_error("mesh file: truncated cell " + std::to_string(i));
        b.add_cell_faces(ids);
    }

    auto mesh = std::move(b).build();
    for (int f = 0; f < nf; ++f)
        if (mesh.face(f).is_boundary() != (flags[f] != 0))
            throw geometry_error("mesh file: boundary flag of face " + std::to_string(f)
                                 + " disagrees with cell adjacency");
    return mesh;
}

} // namespace wgl
