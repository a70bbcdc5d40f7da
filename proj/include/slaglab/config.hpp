#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "slaglab/gluing.hpp"

namespace slaglab {

/// One run configuration: model-problem defaults are n = 3, a = (1,1,1),
/// flat exterior disks of radius 1, beta = 0.1.
struct RunConfig {
    int version = 1;
    int n = 3;
    Eigen::VectorXd a = Eigen::VectorXd::Ones(3);
    double alpha = 0.1;
    double beta = 0.1;
    double quad_tol = 1e-10;
    double K_floor = 1.0;
    double R_weight = 1.0;
    double b_outer = 1.0;
    double outer_radius = 1.0;
    double alpha_ceiling = 0.25;
    int sphere_level = 3;
    int axial_layers = 64;
    gluing::Polynomial f1, f2;  // empty = flat special Lagrangian pieces

    static RunConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    /// FNV-1a over the canonical serialization; keys determinism contracts.
    std::uint64_t hash() const;
};

/// Everything assembled for one value of alpha.
struct ModelContext {
    RunConfig run;
    std::shared_ptr<const lawlor::LawlorNeck> neck;
    gluing::GlueConfig glue;
    std::shared_ptr<const gluing::ChartedSurface> surface;
    gluing::WeightFunction weight;
};

/// Builds (or loads from $SLAGLAB_CACHE) the neck tabulation for a config.
std::shared_ptr<const lawlor::LawlorNeck> get_neck(const RunConfig& cfg);

ModelContext build_model(const RunConfig& cfg, double alpha);

} // namespace slaglab
