#include "slaglab/config.hpp"
#include "slaglab/error.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace slaglab {

using nlohmann::json;

namespace {

gluing::Polynomial poly_from_json(const json& j, int n) {
    gluing::Polynomial p;
    p.n = n;
    if (j.is_null()) return p;
    for (const auto& term : j) {
        gluing::Polynomial::Term t;
        const auto& powers = term.at("powers");
        if (static_cast<int>(powers.size()) != n)
            throw ParseError("polynomial term arity mismatch");
        t.powers.resize(n);
        for (int i = 0; i < n; ++i) t.powers(i) = powers[i].get<int>();
        t.coeff = term.at("coeff").get<double>();
        p.terms.push_back(t);
    }
    p.validate();
    return p;
}

json poly_to_json(const gluing::Polynomial& p) {
    json out = json::array();
    for (const auto& t : p.terms)
        out.push_back({{"powers", std::vector<int>(t.powers.data(),
                                                   t.powers.data() +
                                                       t.powers.size())},
                       {"coeff", t.coeff}});
    return out;
}

} // namespace

RunConfig RunConfig::from_json(const json& j) {
    RunConfig cfg;
    try {
        if (j.contains("version")) cfg.version = j["version"].get<int>();
        if (cfg.version != 1) throw ParseError("unsupported config version");
        if (j.contains("n")) cfg.n = j["n"].get<int>();
        if (cfg.n < 3) throw ParseError("config requires n >= 3");
        cfg.a = Eigen::VectorXd::Ones(cfg.n);
        if (j.contains("a")) {
            if (static_cast<int>(j["a"].size()) != cfg.n)
                throw ParseError("length of 'a' must equal n");
            for (int k = 0; k < cfg.n; ++k) cfg.a(k) = j["a"][k].get<double>();
        }
        auto opt = [&](const char* key, double& slot) {
            if (j.contains(key)) slot = j[key].get<double>();
        };
        opt("alpha", cfg.alpha);
        opt("beta", cfg.beta);
        opt("quad_tol", cfg.quad_tol);
        opt("K_floor", cfg.K_floor);
        opt("R_weight", cfg.R_weight);
        opt("b_outer", cfg.b_outer);
        opt("outer_radius", cfg.outer_radius);
        opt("alpha_ceiling", cfg.alpha_ceiling);
        if (j.contains("sphere_level"))
            cfg.sphere_level = j["sphere_level"].get<int>();
        if (j.contains("axial_layers"))
            cfg.axial_layers = j["axial_layers"].get<int>();
        if (j.contains("f1")) cfg.f1 = poly_from_json(j["f1"], cfg.n);
        else cfg.f1.n = cfg.n;
        if (j.contains("f2")) cfg.f2 = poly_from_json(j["f2"], cfg.n);
        else cfg.f2.n = cfg.n;
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad config: ") + e.what());
    }
    return cfg;
}

json RunConfig::to_json() const {
    json j;
    j["version"] = version;
    j["n"] = n;
    j["a"] = std::vector<double>(a.data(), a.data() + n);
    j["alpha"] = alpha;
    j["beta"] = beta;
    j["quad_tol"] = quad_tol;
    j["K_floor"] = K_floor;
    j["R_weight"] = R_weight;
    j["b_outer"] = b_outer;
    j["outer_radius"] = outer_radius;
    j["alpha_ceiling"] = alpha_ceiling;
    j["sphere_level"] = sphere_level;
    j["axial_layers"] = axial_layers;
    j["f1"] = poly_to_json(f1);
    j["f2"] = poly_to_json(f2);
    return j;
}

std::uint64_t RunConfig::hash() const {
    const std::string s = to_json().dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::shared_ptr<const lawlor::LawlorNeck> get_neck(const RunConfig& cfg) {
    const auto params = lawlor::LawlorParams::make(cfg.a);
    const char* cache_dir = std::getenv("SLAGLAB_CACHE");
    std::filesystem::path path;
    if (cache_dir && *cache_dir) {
        RunConfig key;  // only the fields the tabulation depends on
        key.n = cfg.n;
        key.a = cfg.a;
        key.quad_tol = cfg.quad_tol;
        char name[64];
        std::snprintf(name, sizeof(name), "neck_%016llx.json",
                      static_cast<unsigned long long>(key.hash()));
        path = std::filesystem::path(cache_dir) / name;
        if (std::filesystem::exists(path)) {
            std::ifstream in(path);
            json j;
            in >> j;
            auto neck = std::make_shared<lawlor::LawlorNeck>(
                lawlor::LawlorNeck::from_json(j));
            if (neck->n() == cfg.n &&
                (neck->params().a - cfg.a).cwiseAbs().maxCoeff() < 1e-15 &&
                neck->quad_tol() == cfg.quad_tol)
                return neck;
        }
    }
    auto neck =
        std::make_shared<lawlor::LawlorNeck>(params, cfg.quad_tol);
    if (!path.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        std::ofstream out(path);
        if (out) out << lawlor::neck_to_json(*neck);
    }
    return neck;
}

ModelContext build_model(const RunConfig& cfg, double alpha) {
    ModelContext ctx;
    ctx.run = cfg;
    ctx.run.alpha = alpha;
    ctx.neck = get_neck(cfg);

    gluing::ExteriorPiece e1{ctx.neck->asymptotic_plane(1), cfg.f1,
                             cfg.outer_radius};
    gluing::ExteriorPiece e2{ctx.neck->asymptotic_plane(2), cfg.f2,
                             cfg.outer_radius};
    const double K = std::max({cfg.K_floor, e1.measured_K(),
                               e2.measured_K()});
    ctx.glue = gluing::select_parameters(alpha, K, ctx.neck->C0(),
                                         ctx.neck->R0(), cfg.n,
                                         cfg.alpha_ceiling);
    ctx.glue.beta = cfg.beta;
    ctx.glue.R_weight = cfg.R_weight;
    ctx.glue.b_outer = cfg.b_outer;
    ctx.surface = std::make_shared<const gluing::ChartedSurface>(
        gluing::build_surface(e1, e2, ctx.neck, ctx.glue));
    ctx.weight = gluing::weight_rho(*ctx.surface, ctx.glue);
    return ctx;
}

} // namespace slaglab
