#pragma once

// Triangulated sheets-plus-necks model.  Sheet grids are stitched to the
// neck boundary rings through existing vertices so the mesh topology is
// exact: Euler characteristic plus boundary correction recovers the genus.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "catena/surface.hpp"

namespace catena {

struct MeshTag {
    enum Kind { Sheet = 0, Neck = 1 } kind = Sheet;
    int k = 0;
    int i = 0;  // neck index within the level (necks only)
    bool operator==(const MeshTag&) const = default;
};

struct SurfaceMesh {
    std::vector<std::array<double, 3>> vertices;
    std::vector<std::array<int, 3>> triangles;  // 0-based
    std::vector<MeshTag> tags;                   // one per vertex

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int triangle_count() const { return static_cast<int>(triangles.size()); }

    void validate() const {
        if (tags.size() != vertices.size())
            throw Error("mesh: tags must partition the vertices");
        for (const auto& t : triangles) {
            if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
                throw Error("mesh: degenerate triangle (repeated vertex)");
            for (int v : t)
                if (v < 0 || v >= vertex_count()) throw Error("mesh: vertex out of range");
        }
    }

    std::map<std::pair<int, int>, int> edge_use() const {
        std::map<std::pair<int, int>, int> use;
        for (const auto& t : triangles)
            for (int e = 0; e < 3; ++e) {
                int a = t[e], b = t[(e + 1) % 3];
                if (a > b) std::swap(a, b);
                ++use[{a, b}];
            }
        return use;
    }

    long euler_characteristic() const {
        const auto use = edge_use();
        return long(vertices.size()) - long(use.size()) + long(triangles.size());
    }

    int component_count() const {
        std::vector<int> parent(vertices.size());
        for (size_t v = 0; v < parent.size(); ++v) parent[v] = int(v);
        std::function<int(int)> find = [&](int v) {
            while (parent[v] != v) v = parent[v] = parent[parent[v]];
            return v;
        };
        for (const auto& t : triangles) {
            parent[find(t[0])] = find(t[1]);
            parent[find(t[1])] = find(t[2]);
        }
        std::set<int> roots;
        std::vector<bool> used(vertices.size(), false);
        for (const auto& t : triangles)
            for (int v : t) used[v] = true;
        for (size_t v = 0; v < parent.size(); ++v)
            if (used[v]) roots.insert(find(int(v)));
        return static_cast<int>(roots.size());
    }

    // number of boundary cycles (edges used by exactly one triangle)
    int boundary_loops() const {
        std::map<int, std::vector<int>> adj;
        for (const auto& [e, n] : edge_use())
            if (n == 1) {
                adj[e.first].push_back(e.second);
                adj[e.second].push_back(e.first);
            }
        std::set<std::pair<int, int>> seen;
        int loops = 0;
        for (const auto& [v0, nb] : adj) {
            for (int w0 : nb) {
                auto key = std::minmax(v0, w0);
                if (seen.count({key.first, key.second})) continue;
                ++loops;
                int prev = v0, cur = w0;
                seen.insert({key.first, key.second});
                while (cur != v0) {
                    const auto& cand = adj.at(cur);
                    int nxt = -1;
                    for (int c : cand) {
                        auto ck = std::minmax(cur, c);
                        if (c != prev && !seen.count({ck.first, ck.second})) {
                            nxt = c;
                            break;
                        }
                    }
                    if (nxt < 0) break;  // open chain; counted once
                    auto ck = std::minmax(cur, nxt);
                    seen.insert({ck.first, ck.second});
                    prev = cur;
                    cur = nxt;
                }
            }
        }
        return loops;
    }

    // genus from chi = 2 C - 2 g - b for a C-component surface with b
    // boundary cycles
    long genus_with_boundary_correction() const {
        const long chi = euler_characteristic();
        const long b = boundary_loops();
        const long C = component_count();
        return (2 * C - chi - b) / 2;
    }
};

// ---------------------------------------------------------------------------
// Segment/triangle intersection (Moller-Trumbore), for the spot check
// ---------------------------------------------------------------------------

namespace mesh_detail {

using V3 = std::array<double, 3>;

inline V3 sub(const V3& a, const V3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline V3 cross(const V3& a, const V3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]};
}
inline double dot(const V3& a, const V3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline bool segment_hits_triangle(const V3& p, const V3& q, const V3& t0, const V3& t1,
                                  const V3& t2) {
    const V3 dir = sub(q, p);
    const V3 e1 = sub(t1, t0), e2 = sub(t2, t0);
    const V3 h = cross(dir, e2);
    const double det = dot(e1, h);
    if (std::abs(det) < 1e-14) return false;  // parallel (coplanar ignored)
    const double inv = 1.0 / det;
    const V3 s = sub(p, t0);
    const double u = inv * dot(s, h);
    if (u < 1e-9 || u > 1.0 - 1e-9) return false;
    const V3 qv = cross(s, e1);
    const double v = inv * dot(dir, qv);
    if (v < 1e-9 || u + v > 1.0 - 1e-9) return false;
    const double ttt = inv * dot(e2, qv);
    return ttt > 1e-9 && ttt < 1.0 - 1e-9;
}

inline bool triangles_intersect(const V3& a0, const V3& a1, const V3& a2, const V3& b0,
                                const V3& b1, const V3& b2) {
    return segment_hits_triangle(a0, a1, b0, b1, b2) ||
           segment_hits_triangle(a1, a2, b0, b1, b2) ||
           segment_hits_triangle(a2, a0, b0, b1, b2) ||
           segment_hits_triangle(b0, b1, a0, a1, a2) ||
           segment_hits_triangle(b1, b2, a0, a1, a2) ||
           segment_hits_triangle(b2, b0, a0, a1, a2);
}

}  // namespace mesh_detail

inline int count_triangle_intersections(const SurfaceMesh& mesh, int samples,
                                        unsigned seed) {
    if (mesh.triangles.size() < 2) return 0;
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> pick(0, mesh.triangle_count() - 1);
    int hits = 0;
    for (int s = 0; s < samples; ++s) {
        const auto& ta = mesh.triangles[pick(rng)];
        const auto& tb = mesh.triangles[pick(rng)];
        bool share = false;
        for (int a : ta)
            for (int b : tb)
                if (a == b) share = true;
        if (share) continue;
        if (mesh_detail::triangles_intersect(mesh.vertices[ta[0]], mesh.vertices[ta[1]],
                                             mesh.vertices[ta[2]], mesh.vertices[tb[0]],
                                             mesh.vertices[tb[1]], mesh.vertices[tb[2]]))
            ++hits;
    }
    return hits;
}

// ---------------------------------------------------------------------------
// Mesh assembly
// ---------------------------------------------------------------------------

struct MeshOptions {
    int grid = 64;       // cells per sheet side
    int neck_rows = 16;  // rows along each neck wall
    bool unscaled_frame = false;  // emit phi_t^{-1}-coordinates (x,y scaled by 1/(2t))
    double t = 0;                 // needed for unscaled_frame
};

namespace mesh_detail {

struct SheetGrid {
    std::vector<int> vid;               // lattice vertex -> mesh vertex (-1 unused)
    int nx = 0, ny = 0;
    double hx = 0, hy = 0, x_lo = 0, y_lo = 0;
    std::vector<std::vector<int>> hole_loops;  // CCW vertex loops per hole
};

// lattice helpers
inline int lat(int ix, int iy, int nx) { return iy * (nx + 1) + ix; }

inline SheetGrid tessellate_sheet(SurfaceMesh& mesh, const SheetModel& sh, int grid) {
    SheetGrid sg;
    sg.nx = grid;
    sg.ny = grid;
    sg.x_lo = sh.x_lo;
    sg.y_lo = sh.y_lo;
    sg.hx = (sh.x_hi - sh.x_lo) / grid;
    sg.hy = (sh.y_hi - sh.y_lo) / grid;

    std::vector<cx> holes;
    for (cx n : sh.below) holes.push_back(n);
    for (cx n : sh.above) holes.push_back(n);
    const double cell = std::max(sg.hx, sg.hy);
    if (sh.glue_radius < 2.0 * cell)
        throw Error("mesh: grid too coarse for the gluing radius");

    auto corner = [&](int ix, int iy) {
        return cx(sg.x_lo + ix * sg.hx, sg.y_lo + iy * sg.hy);
    };
    std::vector<char> keep(size_t(grid) * grid, 0);
    auto kidx = [&](int ix, int iy) { return size_t(iy) * grid + ix; };
    for (int iy = 0; iy < grid; ++iy)
        for (int ix = 0; ix < grid; ++ix) {
            bool ok = true;
            for (cx h : holes)
                for (int c = 0; c < 4 && ok; ++c) {
                    const cx z = corner(ix + (c & 1), iy + (c >> 1));
                    if (std::abs(z - h) < sh.glue_radius) ok = false;
                }
            keep[kidx(ix, iy)] = ok;
        }

    // remove diagonal pinches so hole boundaries are simple cycles
    for (bool changed = true; changed;) {
        changed = false;
        for (int iy = 1; iy < grid; ++iy)
            for (int ix = 1; ix < grid; ++ix) {
                const bool c00 = keep[kidx(ix - 1, iy - 1)], c10 = keep[kidx(ix, iy - 1)];
                const bool c01 = keep[kidx(ix - 1, iy)], c11 = keep[kidx(ix, iy)];
                auto nearer = [&](int ax, int ay, int bx, int by) {
                    double da = 1e300, db = 1e300;
                    for (cx h : holes) {
                        da = std::min(da, std::abs(corner(ax, ay) + cx(sg.hx, sg.hy) * 0.5 - h));
                        db = std::min(db, std::abs(corner(bx, by) + cx(sg.hx, sg.hy) * 0.5 - h));
                    }
                    return da < db;
                };
                if (c00 && c11 && !c10 && !c01) {
                    keep[kidx(nearer(ix - 1, iy - 1, ix, iy) ? ix - 1 : ix,
                              nearer(ix - 1, iy - 1, ix, iy) ? iy - 1 : iy)] = 0;
                    changed = true;
                } else if (!c00 && !c11 && c10 && c01) {
                    keep[kidx(nearer(ix, iy - 1, ix - 1, iy) ? ix : ix - 1,
                              nearer(ix, iy - 1, ix - 1, iy) ? iy - 1 : iy)] = 0;
                    changed = true;
                }
            }
    }

    sg.vid.assign(size_t(grid + 1) * (grid + 1), -1);
    auto vertex_of = [&](int ix, int iy) {
        int& id = sg.vid[lat(ix, iy, grid)];
        if (id < 0) {
            const cx z = corner(ix, iy);
            id = mesh.vertex_count();
            mesh.vertices.push_back({z.real(), z.imag(), sh.surface_height(z)});
            mesh.tags.push_back({MeshTag::Sheet, sh.k, 0});
        }
        return id;
    };

    const int tri_base = mesh.triangle_count();
    for (int iy = 0; iy < grid; ++iy)
        for (int ix = 0; ix < grid; ++ix) {
            if (!keep[kidx(ix, iy)]) continue;
            const int v00 = vertex_of(ix, iy), v10 = vertex_of(ix + 1, iy);
            const int v11 = vertex_of(ix + 1, iy + 1), v01 = vertex_of(ix, iy + 1);
            mesh.triangles.push_back({v00, v10, v11});
            mesh.triangles.push_back({v00, v11, v01});
        }

    // directed boundary edges (region on the left) of this sheet's triangles
    std::map<std::pair<int, int>, int> use;
    for (int t = tri_base; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int e = 0; e < 3; ++e) {
            int a = tri[e], b = tri[(e + 1) % 3];
            auto key = std::minmax(a, b);
            ++use[{key.first, key.second}];
        }
    }
    std::map<int, int> next_on_boundary;  // directed edge successor map
    for (int t = tri_base; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int e = 0; e < 3; ++e) {
            int a = tri[e], b = tri[(e + 1) % 3];
            auto key = std::minmax(a, b);
            if (use[{key.first, key.second}] == 1) next_on_boundary[a] = b;
        }
    }

    // extract one CCW loop per hole
    for (cx h : holes) {
        const double r_assoc = sh.glue_radius + 3.0 * cell;
        int start = -1;
        double best = 1e300;
        for (const auto& [a, b] : next_on_boundary) {
            const auto& va = mesh.vertices[a];
            const double d = std::abs(cx(va[0], va[1]) - h);
            if (d < r_assoc && d < best) {
                best = d;
                start = a;
            }
        }
        if (start < 0) throw Error("mesh: no boundary loop found around a neck node");
        std::vector<int> loop{start};
        for (int cur = next_on_boundary.at(start); cur != start;
             cur = next_on_boundary.at(cur)) {
            loop.push_back(cur);
            if (loop.size() > next_on_boundary.size())
                throw Error("mesh: hole boundary walk did not close");
        }
        // triangle winding leaves the region on the left, so hole loops come
        // out clockwise around the node; reverse to CCW
        std::reverse(loop.begin(), loop.end());
        sg.hole_loops.push_back(std::move(loop));
    }
    return sg;
}

// stitch loopA (outer, CCW) to loopB (inner, CCW) with a greedy
// shortest-diagonal zipper using existing vertices only
inline void zipper(SurfaceMesh& mesh, const std::vector<int>& A,
                   const std::vector<int>& B) {
    auto pos = [&](int v) { return cx(mesh.vertices[v][0], mesh.vertices[v][1]); };
    // rotate B to start nearest A[0]
    size_t b0 = 0;
    double best = 1e300;
    for (size_t j = 0; j < B.size(); ++j) {
        const double d = std::abs(pos(B[j]) - pos(A[0]));
        if (d < best) {
            best = d;
            b0 = j;
        }
    }
    size_t i = 0, j = 0;
    const size_t na = A.size(), nb = B.size();
    auto Av = [&](size_t q) { return A[q % na]; };
    auto Bv = [&](size_t q) { return B[(b0 + q) % nb]; };
    while (i < na || j < nb) {
        const bool canA = i < na, canB = j < nb;
        const double dA = canA ? std::abs(pos(Av(i + 1)) - pos(Bv(j))) : 1e300;
        const double dB = canB ? std::abs(pos(Av(i)) - pos(Bv(j + 1))) : 1e300;
        if (canA && (!canB || dA <= dB)) {
            mesh.triangles.push_back({Av(i), Av(i + 1), Bv(j)});
            ++i;
        } else {
            mesh.triangles.push_back({Av(i), Bv(j + 1), Bv(j)});
            ++j;
        }
    }
}

}  // namespace mesh_detail

inline SurfaceMesh build_mesh(const SheetStack& stack, const std::vector<NeckModel>& necks,
                              const MeshOptions& opt = {}) {
    SurfaceMesh mesh;
    std::vector<mesh_detail::SheetGrid> grids;
    for (const auto& sh : stack.sheets)
        grids.push_back(mesh_detail::tessellate_sheet(mesh, sh, opt.grid));

    const int base_k = stack.sheets.front().k;
    for (const auto& nk : necks) {
        if (!nk.matched) continue;  // unmatched holes stay as boundary
        const auto& sh_lo = stack.sheets[nk.k - base_k];
        const auto& sg_lo = grids[nk.k - base_k];
        const auto& sg_hi = grids[nk.k + 1 - base_k];

        // ring density follows the sheet grid
        const double cell = std::max(sg_lo.hx, sg_lo.hy);
        const int nring = std::max(12, int(std::lround(2.0 * PI * nk.glue_radius / cell)));
        const int rows = std::max(4, opt.neck_rows);

        // boundary corrections: the revolution core is matched to the mean
        // gluing heights; a linear blend carries the angular variation of the
        // sheets so the patch boundary meets them exactly
        const auto& sh_hi = stack.sheets[nk.k + 1 - base_k];
        std::vector<double> delta_b(nring), delta_t(nring);
        for (int q = 0; q < nring; ++q) {
            const double th = 2.0 * PI * q / nring;
            const cx z = nk.center + nk.glue_radius * cx(std::cos(th), std::sin(th));
            delta_b[q] = sh_lo.surface_height(z) - nk.z_bottom;
            delta_t[q] = sh_hi.surface_height(z) - nk.z_top;
        }

        // wall vertices; row 0 at the bottom gluing circle
        std::vector<std::vector<int>> ring(rows + 1, std::vector<int>(nring));
        for (int s = 0; s <= rows; ++s) {
            const double sigma = -nk.sigma_max + 2.0 * nk.sigma_max * s / rows;
            const double rho = nk.radius_at_sigma(sigma);
            const double lam_t = (sigma + nk.sigma_max) / (2.0 * nk.sigma_max);
            const double lam_b = 1.0 - lam_t;
            for (int q = 0; q < nring; ++q) {
                const double th = 2.0 * PI * q / nring;
                const double z = nk.height_at_sigma(sigma) + lam_b * delta_b[q] +
                                 lam_t * delta_t[q];
                ring[s][q] = mesh.vertex_count();
                mesh.vertices.push_back({nk.center.real() + rho * std::cos(th),
                                         nk.center.imag() + rho * std::sin(th), z});
                mesh.tags.push_back({MeshTag::Neck, nk.k, nk.i});
            }
        }
        for (int s = 0; s < rows; ++s)
            for (int q = 0; q < nring; ++q) {
                const int q1 = (q + 1) % nring;
                mesh.triangles.push_back({ring[s][q], ring[s][q1], ring[s + 1][q1]});
                mesh.triangles.push_back({ring[s][q], ring[s + 1][q1], ring[s + 1][q]});
            }

        // locate the matching hole loops: on sheet k the hole sits among
        // `above` nodes, on sheet k+1 among `below` nodes
        auto find_loop = [&](const mesh_detail::SheetGrid& sg, const SheetModel& sh,
                             cx center) -> const std::vector<int>& {
            size_t hole_index = 0;
            bool found = false;
            size_t idx = 0;
            for (size_t b = 0; b < sh.below.size(); ++b, ++idx)
                if (std::abs(sh.below[b] - center) < 1e-9) {
                    hole_index = idx;
                    found = true;
                }
            for (size_t a = 0; a < sh.above.size(); ++a, ++idx)
                if (std::abs(sh.above[a] - center) < 1e-9) {
                    hole_index = idx;
                    found = true;
                }
            if (!found) throw Error("mesh: neck center not found among sheet nodes");
            return sg.hole_loops[hole_index];
        };

        mesh_detail::zipper(mesh, find_loop(sg_lo, sh_lo, nk.center), ring[0]);
        mesh_detail::zipper(mesh, find_loop(sg_hi, stack.sheets[nk.k + 1 - base_k], nk.center),
                            ring[rows]);
    }

    if (opt.unscaled_frame) {
        if (!(opt.t > 0)) throw Error("mesh: unscaled frame requires t > 0");
        for (auto& v : mesh.vertices) {
            v[0] /= 2.0 * opt.t;
            v[1] /= 2.0 * opt.t;
        }
    }
    mesh.validate();
    return mesh;
}

// ---------------------------------------------------------------------------
// Export: "v x y z" / "f i j k" with 1-based indices; tags as comments.
// Byte-deterministic for identical inputs.
// ---------------------------------------------------------------------------

inline std::string mesh_to_text(const SurfaceMesh& mesh) {
    std::string out;
    out += "# surface mesh\n";
    char buf[128];
    std::snprintf(buf, sizeof buf, "# vertices %d faces %d\n", mesh.vertex_count(),
                  mesh.triangle_count());
    out += buf;
    MeshTag cur{};
    bool first = true;
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        const auto& tag = mesh.tags[v];
        if (first || !(tag == cur)) {
            if (tag.kind == MeshTag::Sheet)
                std::snprintf(buf, sizeof buf, "# sheet %d\n", tag.k);
            else
                std::snprintf(buf, sizeof buf, "# neck %d %d\n", tag.k, tag.i);
            out += buf;
            cur = tag;
            first = false;
        }
        std::snprintf(buf, sizeof buf, "v %.9g %.9g %.9g\n", mesh.vertices[v][0],
                      mesh.vertices[v][1], mesh.vertices[v][2]);
        out += buf;
    }
    for (const auto& t : mesh.triangles) {
        std::snprintf(buf, sizeof buf, "f %d %d %d\n", t[0] + 1, t[1] + 1, t[2] + 1);
        out += buf;
    }
    return out;
}

inline void export_mesh(const SurfaceMesh& mesh, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("export_mesh: cannot open " + path);
    out << mesh_to_text(mesh);
    if (!out) throw Error("export_mesh: write failure for " + path);
}

// ---------------------------------------------------------------------------
// Discrete mean curvature (cotangent formula) at interior vertices; sanity
// check that the revolution patches are near-minimal.
// ---------------------------------------------------------------------------

inline double max_interior_mean_curvature(const SurfaceMesh& mesh) {
    using mesh_detail::cross;
    using mesh_detail::dot;
    using mesh_detail::sub;
    const int nv = mesh.vertex_count();
    std::vector<std::array<double, 3>> lap(nv, {0, 0, 0});
    std::vector<double> area(nv, 0.0);
    std::set<int> boundary;
    for (const auto& [e, n] : mesh.edge_use())
        if (n == 1) {
            boundary.insert(e.first);
            boundary.insert(e.second);
        }
    for (const auto& t : mesh.triangles) {
        const auto &p0 = mesh.vertices[t[0]], &p1 = mesh.vertices[t[1]],
                   &p2 = mesh.vertices[t[2]];
        const auto n = cross(sub(p1, p0), sub(p2, p0));
        const double A = 0.5 * std::sqrt(dot(n, n));
        for (int c = 0; c < 3; ++c) area[t[c]] += A / 3.0;
        for (int c = 0; c < 3; ++c) {
            const int i = t[c], j = t[(c + 1) % 3], o = t[(c + 2) % 3];
            const auto u = sub(mesh.vertices[i], mesh.vertices[o]);
            const auto v = sub(mesh.vertices[j], mesh.vertices[o]);
            const double cosang = dot(u, v);
            const auto cr = cross(u, v);
            const double sinang = std::sqrt(dot(cr, cr));
            if (sinang < 1e-14) continue;
            const double cotan = cosang / sinang;
            for (int d = 0; d < 3; ++d) {
                lap[i][d] += 0.5 * cotan * (mesh.vertices[j][d] - mesh.vertices[i][d]);
                lap[j][d] += 0.5 * cotan * (mesh.vertices[i][d] - mesh.vertices[j][d]);
            }
        }
    }
    double worst = 0.0;
    for (int v = 0; v < nv; ++v) {
        if (boundary.count(v) || area[v] <= 0) continue;
        const double mag = std::sqrt(dot(lap[v], lap[v]));
        worst = std::max(worst, mag / (2.0 * area[v]));
    }
    return worst;
}

// Revolution patch rho = w cosh((z - z0)/growth), used directly by the neck
// tessellation and by the catenoid sanity test (growth = w gives a true
// catenoid).
inline SurfaceMesh revolution_patch(double w, double growth, double sigma_max, int rows,
                                    int nring) {
    SurfaceMesh mesh;
    std::vector<std::vector<int>> ring(rows + 1, std::vector<int>(nring));
    for (int s = 0; s <= rows; ++s) {
        const double sigma = -sigma_max + 2.0 * sigma_max * s / rows;
        const double rho = w * std::cosh(sigma);
        const double z = growth * sigma;
        for (int q = 0; q < nring; ++q) {
            const double th = 2.0 * PI * q / nring;
            ring[s][q] = mesh.vertex_count();
            mesh.vertices.push_back({rho * std::cos(th), rho * std::sin(th), z});
            mesh.tags.push_back({MeshTag::Neck, 0, 1});
        }
    }
    for (int s = 0; s < rows; ++s)
        for (int q = 0; q < nring; ++q) {
            const int q1 = (q + 1) % nring;
            mesh.triangles.push_back({ring[s][q], ring[s][q1], ring[s + 1][q1]});
            mesh.triangles.push_back({ring[s][q], ring[s + 1][q1], ring[s + 1][q]});
        }
    return mesh;
}

}  // namespace catena
