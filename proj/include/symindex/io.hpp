#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "symindex/brake_orbits.hpp"
#include "symindex/omega_index.hpp"
#include "symindex/signature.hpp"

namespace symindex::io {

using nlohmann::json;

inline Mat matrix_from_json(const json& j) {
    if (j.contains("kind")) {
        NormalFormSpec spec;
        const std::string kind = j.at("kind");
        if (kind == "D") {
            spec.kind = NormalFormKind::D;
            spec.lambda = j.at("lambda");
        } else if (kind == "N1") {
            spec.kind = NormalFormKind::N1;
            spec.lambda = j.at("lambda");
            spec.b = j.at("b");
        } else if (kind == "R") {
            spec.kind = NormalFormKind::R;
            spec.theta = j.at("theta");
        } else if (kind == "N2") {
            spec.kind = NormalFormKind::N2;
            spec.theta = j.at("theta");
            Mat b(2, 2);
            const auto& rows = j.at("b");
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) b(r, c) = rows.at(r).at(c);
            spec.b_block = b;
        } else {
            throw ValidationError("matrix_from_json: unknown normal-form kind");
        }
        return normal_form(spec).matrix();
    }
    const int n = j.at("n");
    const auto& rows = j.at("rows");
    if (static_cast<int>(rows.size()) != 2 * n)
        throw ValidationError("matrix_from_json: rows must have 2n entries");
    Mat M(2 * n, 2 * n);
    for (int r = 0; r < 2 * n; ++r) {
        if (static_cast<int>(rows.at(r).size()) != 2 * n)
            throw ValidationError("matrix_from_json: row length mismatch");
        for (int c = 0; c < 2 * n; ++c) M(r, c) = rows.at(r).at(c);
    }
    return M;
}

inline json matrix_to_json(const Mat& M) {
    json rows = json::array();
    for (int r = 0; r < M.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
        rows.push_back(row);
    }
    return json{{"n", M.rows() / 2}, {"rows", rows}};
}

inline CoefficientPath coefficient_path_from_json(const json& j) {
    const double tau = j.at("tau");
    const int n = j.at("n");
    std::vector<double> grid;
    std::vector<Mat> values;
    if (j.contains("grid")) {
        for (const auto& t : j.at("grid")) grid.push_back(t.get<double>());
    }
    const auto& bs = j.at("B");
    for (const auto& bj : bs) {
        Mat M = matrix_from_json(bj);
        if (M.rows() != 2 * n) throw ValidationError("coefficient path: sample dimension");
        values.push_back(0.5 * (M + M.transpose()));
    }
    if (grid.empty()) {
        for (std::size_t i = 0; i < values.size(); ++i)
            grid.push_back(tau * static_cast<double>(i) / (values.size() - 1));
    }
    if (std::abs(grid.back() - tau) > 1e-12)
        throw ValidationError("coefficient path: grid must end at tau");
    return CoefficientPath(std::move(grid), std::move(values));
}

/// Path input: either a coefficient path (integrated on load) or raw samples.
inline SymplecticPath path_from_json(const json& j) {
    if (j.contains("B")) {
        int steps = j.value("steps", 0);
        return fundamental_solution(coefficient_path_from_json(j), steps);
    }
    const double tau = j.at("tau");
    std::vector<double> grid;
    std::vector<Mat> samples;
    if (j.contains("grid"))
        for (const auto& t : j.at("grid")) grid.push_back(t.get<double>());
    for (const auto& sj : j.at("samples")) samples.push_back(matrix_from_json(sj));
    if (grid.empty())
        for (std::size_t i = 0; i < samples.size(); ++i)
            grid.push_back(tau * static_cast<double>(i) / (samples.size() - 1));
    return SymplecticPath(std::move(grid), std::move(samples));
}

inline json path_to_json(const SymplecticPath& path) {
    json j;
    j["tau"] = path.tau();
    j["n"] = path.n();
    j["grid"] = path.grid();
    json samples = json::array();
    for (const Mat& s : path.samples()) samples.push_back(matrix_to_json(s));
    j["samples"] = samples;
    return j;
}

inline std::string path_to_csv(const SymplecticPath& path) {
    std::ostringstream os;
    os.precision(17);
    const int d = 2 * path.n();
    os << "t";
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) os << ",m" << r << c;
    os << "\n";
    for (std::size_t i = 0; i < path.grid().size(); ++i) {
        os << path.grid()[i];
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) os << "," << path.samples()[i](r, c);
        os << "\n";
    }
    return os.str();
}

inline const char* family_name(IndexFamily f) {
    switch (f) {
        case IndexFamily::L0: return "L0";
        case IndexFamily::L1: return "L1";
        case IndexFamily::OmegaL0: return "omegaL0";
        case IndexFamily::Periodic: return "periodic-omega";
    }
    return "?";
}

inline json index_record_to_json(const IndexRecord& rec) {
    json j;
    j["family"] = family_name(rec.family);
    if (rec.family == IndexFamily::OmegaL0 || rec.family == IndexFamily::Periodic)
        j["omega"] = rec.theta;
    j["index"] = rec.index;
    j["nullity"] = rec.nullity;
    return j;
}

inline json signature_to_json(const EpsSignature& s) {
    return json{{"side", s.side == EpsSide::Plus ? "plus" : "minus"},
                {"eps_used", s.eps_used},
                {"signature", s.signature},
                {"inertia", {s.inertia.plus, s.inertia.zero, s.inertia.minus}}};
}

inline std::string profile_to_csv(const OmegaProfile& prof) {
    std::ostringstream os;
    os.precision(17);
    os << "theta_start,theta_end,index\n";
    for (std::size_t k = 0; k + 1 < prof.cell_breaks.size(); ++k)
        os << prof.cell_breaks[k] << "," << prof.cell_breaks[k + 1] << "," << prof.cell_values[k]
           << "\n";
    return os.str();
}

inline std::string orbit_to_csv(const BrakeOrbit& orbit) {
    std::ostringstream os;
    os.precision(17);
    os << "t";
    for (int i = 0; i < 2 * orbit.H.n; ++i) os << ",x" << i;
    os << "\n";
    for (std::size_t i = 0; i < orbit.grid.size(); ++i) {
        os << orbit.grid[i];
        for (int c = 0; c < orbit.samples[i].size(); ++c) os << "," << orbit.samples[i](c);
        os << "\n";
    }
    return os.str();
}

inline Hamiltonian hamiltonian_from_json(const json& j) {
    const std::string kind = j.at("kind");
    const int n = j.value("n", 1);
    if (kind == "harmonic") return hamiltonians::harmonic(n);
    if (kind == "quartic") return hamiltonians::quartic(n);
    if (kind == "pure-quartic") return hamiltonians::pure_quartic(n);
    if (kind == "even-quartic") return hamiltonians::even_quartic(n);
    if (kind == "anisotropic")
        return hamiltonians::anisotropic(n, j.at("params").at("a"), j.at("params").at("b"));
    if (kind == "radial-poly") {
        std::vector<double> coeffs;
        for (const auto& c : j.at("params").at("coeffs")) coeffs.push_back(c.get<double>());
        return hamiltonians::radial_poly(n, std::move(coeffs));
    }
    throw ValidationError("hamiltonian_from_json: unknown kind");
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open input file: " + path);
    json j;
    in >> j;
    return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open output file: " + path);
    out << text;
}

}  // namespace symindex::io
