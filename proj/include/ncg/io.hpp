#pragma once

// JSON and CSV encodings: matrices as row-major nested arrays of [re, im]
// pairs, spectral triples, spectra, and check rows.

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ncg/matrix.hpp"
#include "ncg/report.hpp"
#include "ncg/spectral_triple.hpp"

namespace ncg::io {

using json = nlohmann::json;

/// Parse or schema problem in an input document.
class FormatError : public Error {
public:
    using Error::Error;
};

inline json matrix_to_json(const Mat& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Accepts [re, im] pairs or plain real numbers as entries.
inline Mat matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw FormatError("matrix: expected a nonempty array of rows");
    const Index rows = static_cast<Index>(j.size());
    if (!j.front().is_array()) throw FormatError("matrix: rows must be arrays");
    const Index cols = static_cast<Index>(j.front().size());
    Mat m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols) throw FormatError("matrix: ragged rows");
        for (Index c = 0; c < cols; ++c) {
            const json& e = row[static_cast<std::size_t>(c)];
            if (e.is_number()) {
                m(r, c) = e.get<double>();
            } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
                m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
            } else {
                throw FormatError("matrix: entries must be numbers or [re, im] pairs");
            }
        }
    }
    return m;
}

inline json triple_to_json(const FiniteSpectralTriple& t) {
    json j;
    j["hilbert_dim"] = t.hilbert_dim;
    j["algebra_basis"] = json::array();
    for (const Mat& a : t.algebra_basis) j["algebra_basis"].push_back(matrix_to_json(a));
    j["D"] = matrix_to_json(t.dirac);
    if (t.grading) j["gamma"] = matrix_to_json(*t.grading);
    if (t.real_structure) j["J0"] = matrix_to_json(t.real_structure->j0);
    if (t.base_indices) j["base_indices"] = *t.base_indices;
    return j;
}

inline FiniteSpectralTriple triple_from_json(const json& j) {
    if (!j.is_object()) throw FormatError("triple: expected an object");
    for (const char* key : {"hilbert_dim", "algebra_basis", "D"}) {
        if (!j.contains(key)) throw FormatError(std::string("triple: missing field ") + key);
    }
    FiniteSpectralTriple t;
    if (!j["hilbert_dim"].is_number_integer()) throw FormatError("triple: hilbert_dim must be an integer");
    t.hilbert_dim = j["hilbert_dim"].get<Index>();
    if (!j["algebra_basis"].is_array()) throw FormatError("triple: algebra_basis must be an array");
    for (const json& a : j["algebra_basis"]) t.algebra_basis.push_back(matrix_from_json(a));
    t.dirac = matrix_from_json(j["D"]);
    if (j.contains("gamma")) t.grading = matrix_from_json(j["gamma"]);
    if (j.contains("J0")) t.real_structure = RealStructure{matrix_from_json(j["J0"])};
    if (j.contains("base_indices")) {
        const json& b = j["base_indices"];
        if (!b.is_array() || !std::all_of(b.begin(), b.end(), [](const json& x) { return x.is_number_unsigned(); })) {
            throw FormatError("triple: base_indices must be an array of nonnegative integers");
        }
        t.base_indices = b.get<std::vector<std::size_t>>();
    }
    try {
        t.check_shapes();
    } catch (const DimensionError& e) {
        throw FormatError(e.what());
    }
    return t;
}

/// Fixed 15-significant-digit formatting used by every CSV table.
inline std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

/// Header `eigenvalue,multiplicity`, ascending.
inline void write_spectrum_csv(std::ostream& os, const Spectrum& s) {
    os << "eigenvalue,multiplicity\n";
    for (const auto& e : s.entries) os << format_number(e.eigenvalue) << ',' << e.multiplicity << '\n';
}

inline json check_to_json(const CheckResult& c) {
    return {{"check_name", c.name},
            {"passed", c.passed},
            {"residual", c.residual},
            {"tolerance", c.tolerance},
            {"required", c.required}};
}

} // namespace ncg::io
