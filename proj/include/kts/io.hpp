#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "kts/intersect.hpp"
#include "kts/solver.hpp"
#include "kts/tensor_poly.hpp"

// Problem and report files: one JSON object per file, schema-versioned.
// Doubles are serialized with shortest round-trip formatting, so
// write-then-read reproduces every value bit for bit.

namespace kts {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "kts-1";

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ProblemFile {
    enum class Mode { System2D, SurfaceLine };

    std::string schema_version = kSchemaVersion;
    Mode mode = Mode::System2D;
    std::optional<TensorPoly<2>> system;
    std::optional<TensorPoly<3>> surface;
    std::optional<Line3> line;
    SolveConfig config;
};

namespace detail {

inline const json& require_field(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
    return *it;
}

inline double number_at(const json& j, const std::string& where) {
    if (!j.is_number()) throw ParseError("field '" + where + "': expected a number");
    return j.get<double>();
}

template <std::size_t D>
TensorPoly<D> poly_from_json(const json& j, Basis basis, int m, int n) {
    const json& rows = require_field(j, "coefficients");
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(m + 1))
        throw ParseError("field 'coefficients': expected " + std::to_string(m + 1) + " rows");
    TensorPoly<D> p(basis, m, n);
    for (int i = 0; i <= m; ++i) {
        const json& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(n + 1))
            throw ParseError("field 'coefficients[" + std::to_string(i) + "]': expected " +
                             std::to_string(n + 1) + " entries");
        for (int jx = 0; jx <= n; ++jx) {
            const json& cell = row[static_cast<std::size_t>(jx)];
            const std::string where =
                "coefficients[" + std::to_string(i) + "][" + std::to_string(jx) + "]";
            if (!cell.is_array() || cell.size() != D)
                throw ParseError("field '" + where + "': expected " + std::to_string(D) +
                                 " numbers");
            Vec<D> c{};
            for (std::size_t k = 0; k < D; ++k) c[k] = number_at(cell[k], where);
            p.at(i, jx) = c;
        }
    }
    return p;
}

template <std::size_t D>
json poly_coeffs_json(const TensorPoly<D>& p) {
    json rows = json::array();
    for (int i = 0; i <= p.deg_u(); ++i) {
        json row = json::array();
        for (int j = 0; j <= p.deg_v(); ++j) {
            json cell = json::array();
            for (std::size_t k = 0; k < D; ++k) cell.push_back(p.at(i, j)[k]);
            row.push_back(cell);
        }
        rows.push_back(row);
    }
    return rows;
}

template <std::size_t N>
json vec_json(const Vec<N>& v) {
    json a = json::array();
    for (double x : v) a.push_back(x);
    return a;
}

template <std::size_t N>
Vec<N> vec_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != N)
        throw ParseError("field '" + where + "': expected " + std::to_string(N) + " numbers");
    Vec<N> v{};
    for (std::size_t k = 0; k < N; ++k) v[k] = number_at(j[k], where);
    return v;
}

inline SolveConfig config_from_json(const json& j) {
    SolveConfig cfg;
    const auto get = [&](const char* key, auto& slot) {
        const auto it = j.find(key);
        if (it == j.end()) return;
        using T = std::decay_t<decltype(slot)>;
        if constexpr (std::is_same_v<T, double>)
            slot = number_at(*it, std::string("config.") + key);
        else
            slot = it->get<T>();
    };
    get("min_patch_width", cfg.min_patch_width);
    get("max_patches", cfg.max_patches);
    get("newton_step_tol", cfg.newton_step_tol);
    get("newton_max_iter", cfg.newton_max_iter);
    get("zero_residual_tol", cfg.zero_residual_tol);
    get("duplicate_tol", cfg.duplicate_tol);
    if (cfg.min_patch_width <= 0 || cfg.max_patches == 0 || cfg.newton_step_tol <= 0 ||
        cfg.newton_max_iter <= 0 || cfg.zero_residual_tol <= 0 || cfg.duplicate_tol <= 0)
        throw ParseError("field 'config': all entries must be positive");
    return cfg;
}

inline json config_json(const SolveConfig& cfg) {
    return json{{"min_patch_width", cfg.min_patch_width},
                {"max_patches", cfg.max_patches},
                {"newton_step_tol", cfg.newton_step_tol},
                {"newton_max_iter", cfg.newton_max_iter},
                {"zero_residual_tol", cfg.zero_residual_tol},
                {"duplicate_tol", cfg.duplicate_tol}};
}

}  // namespace detail

inline ProblemFile problem_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("problem file must be a JSON object");
    ProblemFile pf;
    pf.schema_version = detail::require_field(j, "schema_version").get<std::string>();
    if (pf.schema_version != kSchemaVersion)
        throw ParseError("field 'schema_version': unsupported version '" + pf.schema_version +
                         "'");
    const std::string mode = detail::require_field(j, "mode").get<std::string>();
    const std::string basis_str = detail::require_field(j, "basis").get<std::string>();
    Basis basis;
    try {
        basis = basis_from_name(basis_str);
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("field 'basis': ") + e.what());
    }
    const json& degrees = detail::require_field(j, "degrees");
    if (!degrees.is_array() || degrees.size() != 2 || !degrees[0].is_number_integer() ||
        !degrees[1].is_number_integer())
        throw ParseError("field 'degrees': expected [m, n]");
    const int m = degrees[0].get<int>(), n = degrees[1].get<int>();
    if (m < 0 || n < 0) throw ParseError("field 'degrees': must be non-negative");

    if (mode == "system2d") {
        pf.mode = ProblemFile::Mode::System2D;
        pf.system = detail::poly_from_json<2>(j, basis, m, n);
    } else if (mode == "surface_line") {
        pf.mode = ProblemFile::Mode::SurfaceLine;
        if (m < 1 || n < 1) throw ParseError("field 'degrees': surface needs degrees >= 1");
        pf.surface = detail::poly_from_json<3>(j, basis, m, n);
        const json& line = detail::require_field(j, "line");
        Line3 l;
        l.p = detail::vec_from_json<3>(detail::require_field(line, "p"), "line.p");
        l.d = detail::vec_from_json<3>(detail::require_field(line, "d"), "line.d");
        pf.line = l;
    } else {
        throw ParseError("field 'mode': expected 'system2d' or 'surface_line'");
    }

    if (const auto it = j.find("config"); it != j.end())
        pf.config = detail::config_from_json(*it);
    return pf;
}

inline json to_json(const ProblemFile& pf) {
    json j;
    j["schema_version"] = pf.schema_version;
    if (pf.mode == ProblemFile::Mode::System2D) {
        j["mode"] = "system2d";
        j["basis"] = basis_name(pf.system->basis());
        j["degrees"] = {pf.system->deg_u(), pf.system->deg_v()};
        j["coefficients"] = detail::poly_coeffs_json(*pf.system);
    } else {
        j["mode"] = "surface_line";
        j["basis"] = basis_name(pf.surface->basis());
        j["degrees"] = {pf.surface->deg_u(), pf.surface->deg_v()};
        j["coefficients"] = detail::poly_coeffs_json(*pf.surface);
        j["line"] = {{"p", detail::vec_json(pf.line->p)}, {"d", detail::vec_json(pf.line->d)}};
    }
    j["config"] = detail::config_json(pf.config);
    return j;
}

inline ProblemFile read_problem_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return problem_from_json(j);
}

inline ProblemFile read_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return read_problem_text(ss.str());
}

inline json report_json(const SolveResult& res, std::optional<double> cond_lb,
                        double timing_ms) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["mode"] = "system2d";
    json zeros = json::array();
    for (const Vec2& z : res.zeros) zeros.push_back(detail::vec_json(z));
    j["zeros"] = zeros;
    json regions = json::array();
    for (const SafeRegion& sr : res.safe_regions)
        regions.push_back(json{{"zero", detail::vec_json(sr.zero)},
                               {"rho_star", sr.rho_star},
                               {"omega_star", sr.omega_star}});
    j["safe_regions"] = regions;
    j["stats"] = {{"patches_examined", res.stats.patches_examined},
                  {"smallest_width", res.stats.smallest_width},
                  {"max_newton_iterations", res.stats.max_newton_iterations}};
    json unresolved = json::array();
    for (const Patch& p : res.unresolved)
        unresolved.push_back(json{{"center", detail::vec_json(p.center)}, {"radius", p.radius}});
    j["unresolved"] = unresolved;
    j["complete"] = res.complete();
    j["budget_exhausted"] = res.budget_exhausted;
    if (cond_lb) j["cond_lb"] = *cond_lb;
    j["timing_ms"] = timing_ms;
    return j;
}

inline json report_json(const IntersectResult& res, double timing_ms) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["mode"] = "surface_line";
    json hits = json::array();
    for (const Intersection& hit : res.intersections)
        hits.push_back(json{{"uv", detail::vec_json(hit.uv)},
                            {"t", hit.t},
                            {"point", detail::vec_json(hit.point)},
                            {"residual", hit.residual}});
    j["intersections"] = hits;
    j["stats"] = {{"patches_examined", res.stats.patches_examined},
                  {"smallest_width", res.stats.smallest_width},
                  {"max_newton_iterations", res.stats.max_newton_iterations}};
    json unresolved = json::array();
    for (const Patch& p : res.unresolved)
        unresolved.push_back(json{{"center", detail::vec_json(p.center)}, {"radius", p.radius}});
    j["unresolved"] = unresolved;
    j["complete"] = res.complete();
    j["budget_exhausted"] = res.budget_exhausted;
    j["timing_ms"] = timing_ms;
    return j;
}

// Problem-file builders used by the fixture generator and tests.

inline ProblemFile make_system_problem(const TensorPoly<2>& f) {
    ProblemFile pf;
    pf.mode = ProblemFile::Mode::System2D;
    pf.system = f;
    return pf;
}

inline ProblemFile make_surface_problem(const TensorPoly<3>& surface, const Line3& line) {
    ProblemFile pf;
    pf.mode = ProblemFile::Mode::SurfaceLine;
    pf.surface = surface;
    pf.line = line;
    return pf;
}

}  // namespace kts
