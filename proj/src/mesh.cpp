#include "slaglab/mesh.hpp"
#include "slaglab/error.hpp"

#include <array>
#include <cmath>
#include <map>
#include <numbers>

namespace slaglab {

TriMesh icosphere(int level) {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    TriMesh m;
    const double v[12][3] = {{-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0},
                             {1, -phi, 0}, {0, -1, phi}, {0, 1, phi},
                             {0, -1, -phi}, {0, 1, -phi}, {phi, 0, -1},
                             {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
    for (const auto& p : v)
        m.vertices.push_back(Eigen::Vector3d(p[0], p[1], p[2]).normalized());
    m.faces = {{0, 11, 5},  {0, 5, 1},   {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
               {1, 5, 9},   {5, 11, 4},  {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
               {3, 9, 4},   {3, 4, 2},   {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
               {4, 9, 5},   {2, 4, 11},  {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    for (int l = 0; l < level; ++l) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            const int idx = static_cast<int>(m.vertices.size());
            m.vertices.push_back(
                (m.vertices[a] + m.vertices[b]).normalized());
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(4 * m.faces.size());
        for (const auto& f : m.faces) {
            const int ab = mid(f[0], f[1]);
            const int bc = mid(f[1], f[2]);
            const int ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        m.faces = std::move(next);
    }
    return m;
}

} // namespace slaglab

namespace slaglab::spectral {

using Eigen::MatrixXd;
using Eigen::MatrixXi;
using Eigen::VectorXd;
using std::numbers::pi;

namespace {

Eigen::MatrixXd simplex_gram(const MatrixXd& positions,
                             const Eigen::VectorXi& nodes) {
    const int d = static_cast<int>(nodes.size()) - 1;
    MatrixXd edges(positions.cols(), d);
    for (int i = 0; i < d; ++i)
        edges.col(i) =
            (positions.row(nodes(i + 1)) - positions.row(nodes(0)))
                .transpose();
    return edges.transpose() * edges;
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

} // namespace

double SurfaceMesh::cell_volume(int c) const {
    const Eigen::VectorXi nodes = cells.row(c).transpose();
    const double det = simplex_gram(positions, nodes).determinant();
    return std::sqrt(std::max(0.0, det)) / factorial(dim);
}

double SurfaceMesh::total_volume() const {
    double acc = 0.0;
    for (int c = 0; c < cell_count(); ++c) acc += cell_volume(c);
    return acc;
}

double SurfaceMesh::facet_measure(int b) const {
    const Eigen::VectorXi nodes = boundary_facets.row(b).transpose();
    const double det = simplex_gram(positions, nodes).determinant();
    return std::sqrt(std::max(0.0, det)) / factorial(dim - 1);
}

double SurfaceMesh::boundary_measure(int label) const {
    double acc = 0.0;
    for (int b = 0; b < boundary_facets.rows(); ++b)
        if (boundary_label[b] == label) acc += facet_measure(b);
    return acc;
}

nlohmann::json SurfaceMesh::to_json() const {
    nlohmann::json j;
    j["version"] = 1;
    j["dim"] = dim;
    nlohmann::json nodes = nlohmann::json::array();
    for (int i = 0; i < node_count(); ++i) {
        nlohmann::json node;
        node["id"] = i;
        node["position"] = std::vector<double>(
            positions.row(i).data(),
            positions.row(i).data() + positions.cols());
        if (params.rows() == positions.rows())
            node["params"] = std::vector<double>(
                params.row(i).data(), params.row(i).data() + params.cols());
        nodes.push_back(std::move(node));
    }
    j["nodes"] = std::move(nodes);
    nlohmann::json cellj = nlohmann::json::array();
    for (int c = 0; c < cell_count(); ++c)
        cellj.push_back(std::vector<int>(cells.row(c).data(),
                                         cells.row(c).data() + dim + 1));
    j["cells"] = std::move(cellj);
    nlohmann::json bj = nlohmann::json::array();
    for (int b = 0; b < boundary_facets.rows(); ++b)
        bj.push_back(
            {{"nodes", std::vector<int>(boundary_facets.row(b).data(),
                                        boundary_facets.row(b).data() + dim)},
             {"label", boundary_label[b]}});
    j["boundary"] = std::move(bj);
    return j;
}

namespace {

// Dompierre-style prism split: rotate so the smallest global id sits at
// corner 0, then pick the compatible diagonal pattern.
void split_prism(const std::array<int, 6>& prism,
                 std::vector<std::array<int, 4>>& out) {
    int rot = 0;
    for (int i = 1; i < 3; ++i)
        if (prism[i] < prism[rot]) rot = i;
    auto at = [&](int i) {
        if (i < 3) return prism[(i + rot) % 3];
        return prism[3 + (i - 3 + rot) % 3];
    };
    const int v0 = at(0), v1 = at(1), v2 = at(2), v3 = at(3), v4 = at(4),
              v5 = at(5);
    if (std::min(v1, v5) < std::min(v2, v4)) {
        out.push_back({v0, v1, v2, v5});
        out.push_back({v0, v1, v5, v4});
        out.push_back({v0, v4, v5, v3});
    } else {
        out.push_back({v0, v1, v2, v4});
        out.push_back({v0, v4, v2, v5});
        out.push_back({v0, v4, v5, v3});
    }
}

} // namespace

SurfaceMesh build_mesh(const gluing::ChartedSurface& surface,
                       const MeshResolution& res) {
    if (surface.n() != 3)
        throw ResolutionInfeasible("the product mesh is built for n = 3");
    if (res.sphere_level < 0 || res.sphere_level > 5)
        throw ResolutionInfeasible("sphere level must be in [0, 5]");
    if (res.axial_layers < 8 || res.axial_layers % 2 != 0 ||
        res.axial_layers > 512)
        throw ResolutionInfeasible(
            "axial layers must be even and within [8, 512]");

    const TriMesh sphere = icosphere(res.sphere_level);
    const int layers = res.axial_layers;
    const int nv = static_cast<int>(sphere.vertices.size());

    // axial grading: linear across the neck core, geometric outside
    const VectorXd mu_ref = Eigen::Vector3d(1, 1, 1).normalized();
    const double delta = surface.cfg().delta;
    const double lam_half[2] = {
        surface.lambda_at_radius(1, 0.5 * delta, mu_ref),
        surface.lambda_at_radius(2, 0.5 * delta, mu_ref)};
    const int core_half = std::max(4, layers / 16);
    const double tau_c = 2.0 * core_half / layers;
    auto lambda_of_tau = [&](double tau) {
        const int end = tau >= 0.0 ? 1 : 2;
        const double at = std::abs(tau);
        const double lh = lam_half[end - 1];
        double l;
        if (at <= tau_c) {
            l = lh * at / tau_c;
        } else {
            const double k =
                std::log(surface.lambda_max(end) / lh) / (1.0 - tau_c);
            l = lh * std::exp(k * (at - tau_c));
        }
        return tau >= 0.0 ? l : -l;
    };

    SurfaceMesh mesh;
    mesh.dim = 3;
    mesh.axial_layers = layers;
    mesh.sphere_verts = nv;
    const int nnodes = nv * (layers + 1);
    mesh.positions.resize(nnodes, 6);
    mesh.params.resize(nnodes, 4);
    for (int i = 0; i <= layers; ++i) {
        const double tau = -1.0 + 2.0 * i / layers;
        const double l = lambda_of_tau(tau);
        for (int j = 0; j < nv; ++j) {
            const int id = i * nv + j;
            const VectorXd mu = sphere.vertices[j];
            mesh.positions.row(id) = surface.point(l, mu).transpose();
            mesh.params(id, 0) = l;
            mesh.params.row(id).tail(3) = mu.transpose();
        }
    }

    std::vector<std::array<int, 4>> tets;
    tets.reserve(3 * layers * sphere.faces.size());
    std::vector<int> zones;
    for (int i = 0; i < layers; ++i) {
        for (const auto& f : sphere.faces) {
            const std::array<int, 6> prism = {
                i * nv + f[0],       i * nv + f[1],       i * nv + f[2],
                (i + 1) * nv + f[0], (i + 1) * nv + f[1], (i + 1) * nv + f[2]};
            const size_t before = tets.size();
            split_prism(prism, tets);
            // zone from the prism mid-parameter
            const double lmid = 0.5 * (mesh.params(prism[0], 0) +
                                       mesh.params(prism[3], 0));
            VectorXd mu_mid = (sphere.vertices[f[0]] + sphere.vertices[f[1]] +
                               sphere.vertices[f[2]])
                                  .normalized();
            const int end = lmid >= 0 ? 1 : 2;
            const double r = surface.s_radius(end, std::abs(lmid), mu_mid);
            int zone = 2;
            if (r >= delta) zone = 0;
            else if (r >= 0.5 * delta) zone = 1;
            for (size_t t = before; t < tets.size(); ++t) zones.push_back(zone);
        }
    }
    mesh.cells.resize(static_cast<int>(tets.size()), 4);
    for (size_t t = 0; t < tets.size(); ++t)
        for (int k = 0; k < 4; ++k) mesh.cells(static_cast<int>(t), k) = tets[t][k];
    mesh.cell_zone = std::move(zones);

    mesh.boundary_facets.resize(2 * static_cast<int>(sphere.faces.size()), 3);
    int row = 0;
    for (const auto& f : sphere.faces) {  // tau = -1: end 2
        for (int k = 0; k < 3; ++k) mesh.boundary_facets(row, k) = f[k];
        mesh.boundary_label.push_back(2);
        ++row;
    }
    for (const auto& f : sphere.faces) {  // tau = +1: end 1
        for (int k = 0; k < 3; ++k)
            mesh.boundary_facets(row, k) = layers * nv + f[k];
        mesh.boundary_label.push_back(1);
        ++row;
    }

    mesh.cell_gram.reserve(mesh.cell_count());
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const Eigen::VectorXi nodes = mesh.cells.row(c).transpose();
        MatrixXd g = simplex_gram(mesh.positions, nodes);
        if (g.determinant() <= 0.0)
            throw SingularMetric("degenerate cell in the product mesh");
        mesh.cell_gram.push_back(std::move(g));
    }
    return mesh;
}

SurfaceMesh sphere_test_mesh(int level) {
    const TriMesh s = icosphere(level);
    SurfaceMesh mesh;
    mesh.dim = 2;
    mesh.positions.resize(static_cast<int>(s.vertices.size()), 3);
    for (size_t i = 0; i < s.vertices.size(); ++i)
        mesh.positions.row(static_cast<int>(i)) = s.vertices[i].transpose();
    mesh.cells.resize(static_cast<int>(s.faces.size()), 3);
    for (size_t f = 0; f < s.faces.size(); ++f)
        for (int k = 0; k < 3; ++k)
            mesh.cells(static_cast<int>(f), k) = s.faces[f][k];
    mesh.boundary_facets.resize(0, 2);
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const Eigen::VectorXi nodes = mesh.cells.row(c).transpose();
        mesh.cell_gram.push_back(simplex_gram(mesh.positions, nodes));
        mesh.cell_zone.push_back(0);
    }
    return mesh;
}

SurfaceMesh cylinder_test_mesh(double length, int axial, int around) {
    SurfaceMesh mesh;
    mesh.dim = 2;
    const int nnodes = (axial + 1) * around;
    mesh.positions.resize(nnodes, 3);
    for (int i = 0; i <= axial; ++i)
        for (int j = 0; j < around; ++j) {
            const double x = length * i / axial;
            const double th = 2.0 * pi * j / around;
            mesh.positions.row(i * around + j) =
                Eigen::RowVector3d(std::cos(th), std::sin(th), x);
        }
    std::vector<std::array<int, 3>> tris;
    for (int i = 0; i < axial; ++i)
        for (int j = 0; j < around; ++j) {
            const int jn = (j + 1) % around;
            const int a = i * around + j, b = i * around + jn;
            const int c = (i + 1) * around + j, d = (i + 1) * around + jn;
            tris.push_back({a, b, d});
            tris.push_back({a, d, c});
        }
    mesh.cells.resize(static_cast<int>(tris.size()), 3);
    for (size_t t = 0; t < tris.size(); ++t)
        for (int k = 0; k < 3; ++k)
            mesh.cells(static_cast<int>(t), k) = tris[t][k];
    mesh.boundary_facets.resize(2 * around, 2);
    for (int j = 0; j < around; ++j) {
        mesh.boundary_facets(j, 0) = j;
        mesh.boundary_facets(j, 1) = (j + 1) % around;
        mesh.boundary_label.push_back(2);
        mesh.boundary_facets(around + j, 0) = axial * around + j;
        mesh.boundary_facets(around + j, 1) = axial * around + (j + 1) % around;
        mesh.boundary_label.push_back(1);
    }
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const Eigen::VectorXi nodes = mesh.cells.row(c).transpose();
        mesh.cell_gram.push_back(simplex_gram(mesh.positions, nodes));
        mesh.cell_zone.push_back(0);
    }
    return mesh;
}

} // namespace slaglab::spectral
