// Text formats: whitespace matrix blocks with a `-inf` token, JSON for
// polynomials, grids, masks, and labelings, CSV for datasets and loss
// histories. Writers emit 17-significant-digit decimals so finite doubles
// round-trip exactly.

#pragma once

#include "tropical/grid.hpp"
#include "tropical/matrix.hpp"
#include "tropical/network.hpp"
#include "tropical/polynomial.hpp"
#include "tropical/scalar.hpp"
#include "tropical/topology.hpp"
#include "tropical/training.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tropical {

using Json = nlohmann::ordered_json;

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::string next_token(std::istream& in, const char* what) {
    std::string token;
    if (!(in >> token)) throw std::runtime_error(std::string("unexpected end of input reading ") + what);
    return token;
}

inline void expect_token(std::istream& in, const std::string& expected) {
    const std::string token = next_token(in, expected.c_str());
    if (token != expected)
        throw std::runtime_error("expected '" + expected + "', found '" + token + "'");
}

inline long parse_long(const std::string& token, const char* what) {
    std::size_t used = 0;
    long value = 0;
    try {
        value = std::stol(token, &used);
    } catch (const std::exception&) {
        throw std::runtime_error(std::string("invalid ") + what + ": '" + token + "'");
    }
    if (used != token.size()) throw std::runtime_error(std::string("invalid ") + what + ": '" + token + "'");
    return value;
}

} // namespace detail

// --- matrix blocks -----------------------------------------------------------

inline void write_matrix(std::ostream& out, const TropicalMatrix& m) {
    out << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << ' ';
            out << format_scalar(m(i, j));
        }
        out << '\n';
    }
}

inline TropicalMatrix read_matrix(std::istream& in) {
    const long rows = detail::parse_long(detail::next_token(in, "row count"), "row count");
    const long cols = detail::parse_long(detail::next_token(in, "column count"), "column count");
    if (rows <= 0 || cols <= 0) throw std::runtime_error("matrix block: dimensions must be positive");
    TropicalMatrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            m(i, j) = parse_scalar(detail::next_token(in, "matrix entry"));
    return m;
}

// --- grids, masks, labelings (JSON) ----------------------------------------------

inline Json grid_to_json(const GridSpec& grid) {
    return Json{{"lower", grid.lower}, {"upper", grid.upper}, {"resolution", grid.resolution}};
}

inline GridSpec grid_from_json(const Json& j) {
    GridSpec grid;
    grid.lower = j.at("lower").get<std::vector<double>>();
    grid.upper = j.at("upper").get<std::vector<double>>();
    grid.resolution = j.at("resolution").get<std::vector<int>>();
    grid.validate();
    return grid;
}

inline void write_cell_mask(std::ostream& out, const CellMask& mask) {
    Json j{{"grid", grid_to_json(mask.grid)}, {"cells", Json::array()}};
    for (auto m : mask.marked) j["cells"].push_back(m ? 1 : 0);
    out << j.dump(2) << '\n';
}

inline CellMask read_cell_mask(std::istream& in) {
    Json j = Json::parse(in);
    CellMask mask{grid_from_json(j.at("grid")), {}};
    for (const auto& c : j.at("cells")) mask.marked.push_back(c.get<int>() ? 1 : 0);
    if (mask.marked.size() != mask.grid.num_cells())
        throw std::runtime_error("cell mask: cell array length does not match the grid");
    return mask;
}

inline void write_labeling(std::ostream& out, const ComponentLabeling& labeling) {
    Json j{{"grid", grid_to_json(labeling.grid)},
           {"labels", labeling.labels},
           {"num_components", labeling.num_components}};
    out << j.dump(2) << '\n';
}

inline ComponentLabeling read_labeling(std::istream& in) {
    Json j = Json::parse(in);
    ComponentLabeling labeling{grid_from_json(j.at("grid")), j.at("labels").get<std::vector<int>>(),
                               j.at("num_components").get<int>()};
    if (labeling.labels.size() != labeling.grid.num_cells())
        throw std::runtime_error("labeling: label array length does not match the grid");
    return labeling;
}

inline void write_equivalence_report(std::ostream& out, const EquivalenceReport& report) {
    Json j{{"equivalent", report.equivalent},
           {"violations", Json::array()},
           {"unclassifiable", report.unclassifiable}};
    for (const auto& [a, b] : report.violations) j["violations"].push_back(Json::array({a, b}));
    out << j.dump(2) << '\n';
}

// --- polynomials (JSON) ------------------------------------------------------------

inline void write_polynomial(std::ostream& out, const TropicalPolynomial& p) {
    Json j{{"num_vars", p.num_vars()}, {"monomials", Json::array()}};
    for (const auto& m : p.monomials()) {
        Json jm{{"coeff", Json()}, {"exponents", m.exponents}};
        if (m.coeff.is_neg_inf())
            jm["coeff"] = "-inf";
        else
            jm["coeff"] = m.coeff.v;
        j["monomials"].push_back(std::move(jm));
    }
    out << j.dump(2) << '\n';
}

inline TropicalPolynomial read_polynomial(std::istream& in) {
    Json j = Json::parse(in);
    const auto num_vars = j.at("num_vars").get<std::size_t>();
    std::vector<Monomial> monomials;
    for (const auto& jm : j.at("monomials")) {
        Monomial m;
        const auto& coeff = jm.at("coeff");
        if (coeff.is_string()) {
            if (coeff.get<std::string>() != "-inf")
                throw std::runtime_error("polynomial: coefficient must be a number or \"-inf\"");
            m.coeff = TropicalScalar::neg_infinity();
        } else {
            m.coeff = TropicalScalar(coeff.get<double>());
        }
        m.exponents = jm.at("exponents").get<std::vector<int>>();
        monomials.push_back(std::move(m));
    }
    return TropicalPolynomial(num_vars, std::move(monomials));
}

// --- networks and approximators (text) -----------------------------------------------

inline void write_network(std::ostream& out, const LayeredNetwork& net) {
    out << "mode " << (net.mode() == NetMode::Classical ? "classical" : "tropical") << '\n';
    if (net.mode() == NetMode::Tropical && net.hbar().is_finite())
        out << "hbar " << format_double(net.hbar().value()) << '\n';
    out << "layers " << net.layers().size() << '\n';
    for (const auto& layer : net.layers()) {
        out << "weights\n";
        write_matrix(out, layer.weights);
        out << "bias\n";
        TropicalMatrix b(1, layer.bias.size());
        for (std::size_t i = 0; i < layer.bias.size(); ++i) b(0, i) = layer.bias[i];
        write_matrix(out, b);
    }
}

inline LayeredNetwork read_network(std::istream& in) {
    detail::expect_token(in, "mode");
    const std::string mode_token = detail::next_token(in, "mode value");
    NetMode mode;
    if (mode_token == "classical")
        mode = NetMode::Classical;
    else if (mode_token == "tropical")
        mode = NetMode::Tropical;
    else
        throw std::runtime_error("network: mode must be 'classical' or 'tropical'");

    HbarParam hbar = HbarParam::infinity();
    std::string token = detail::next_token(in, "network body");
    if (token == "hbar") {
        const TropicalScalar h = parse_scalar(detail::next_token(in, "hbar value"));
        hbar = HbarParam::finite(h.v);
        token = detail::next_token(in, "network body");
    }
    if (token != "layers") throw std::runtime_error("network: expected 'layers', found '" + token + "'");
    const long count = detail::parse_long(detail::next_token(in, "layer count"), "layer count");
    if (count <= 0) throw std::runtime_error("network: layer count must be positive");

    std::vector<NetworkLayer> layers;
    for (long k = 0; k < count; ++k) {
        detail::expect_token(in, "weights");
        TropicalMatrix weights = read_matrix(in);
        detail::expect_token(in, "bias");
        const TropicalMatrix b = read_matrix(in);
        if (b.rows() != 1 || b.cols() != weights.rows())
            throw std::runtime_error("network: bias block must be 1 x (output dim)");
        std::vector<TropicalScalar> bias(b.cols());
        for (std::size_t i = 0; i < b.cols(); ++i) bias[i] = b(0, i);
        layers.push_back(NetworkLayer{std::move(weights), std::move(bias)});
    }
    return LayeredNetwork(mode, std::move(layers), hbar);
}

inline void write_approximator(std::ostream& out, const Approximator& ap) {
    if (ap.units.empty() || ap.units.size() != ap.beta.size())
        throw std::invalid_argument("write_approximator: malformed approximator");
    out << "approximator\nnum_vars " << ap.units.front().weights.size() << "\nunits " << ap.units.size()
        << '\n';
    for (const auto& u : ap.units) {
        out << format_scalar(u.bias);
        for (const auto& w : u.weights) out << ' ' << format_scalar(w);
        out << '\n';
    }
    out << "beta\n";
    for (std::size_t i = 0; i < ap.beta.size(); ++i) {
        if (i) out << ' ';
        out << format_double(ap.beta[i]);
    }
    out << '\n';
}

inline Approximator read_approximator(std::istream& in) {
    detail::expect_token(in, "approximator");
    detail::expect_token(in, "num_vars");
    const long d = detail::parse_long(detail::next_token(in, "num_vars"), "num_vars");
    detail::expect_token(in, "units");
    const long n = detail::parse_long(detail::next_token(in, "unit count"), "unit count");
    if (d <= 0 || n <= 0) throw std::runtime_error("approximator: num_vars and units must be positive");
    Approximator ap;
    for (long i = 0; i < n; ++i) {
        TropicalUnit u;
        u.bias = parse_scalar(detail::next_token(in, "unit bias"));
        u.weights.resize(static_cast<std::size_t>(d));
        for (auto& w : u.weights) w = parse_scalar(detail::next_token(in, "unit weight"));
        validate_unit(u);
        ap.units.push_back(std::move(u));
    }
    detail::expect_token(in, "beta");
    ap.beta.resize(static_cast<std::size_t>(n));
    for (auto& b : ap.beta) {
        const TropicalScalar v = parse_scalar(detail::next_token(in, "beta entry"));
        if (v.is_neg_inf()) throw std::runtime_error("approximator: beta entries must be finite");
        b = v.v;
    }
    return ap;
}

// --- CSV ------------------------------------------------------------------------

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(field);
    return fields;
}

} // namespace detail

// n feature columns then one integer label column.
inline Dataset read_dataset_csv(std::istream& in, bool has_header) {
    Dataset data;
    std::string line;
    std::size_t line_no = 0;
    std::size_t columns = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (has_header && line_no == 1) continue;
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() < 2)
            throw std::runtime_error("dataset line " + std::to_string(line_no) +
                                     ": need at least one feature and a label");
        if (columns == 0) columns = fields.size();
        if (fields.size() != columns)
            throw std::runtime_error("dataset line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(columns) + " columns, found " +
                                     std::to_string(fields.size()));
        std::vector<double> x(columns - 1);
        for (std::size_t a = 0; a + 1 < columns; ++a) {
            const TropicalScalar v = parse_scalar(fields[a]);
            if (v.is_neg_inf())
                throw std::runtime_error("dataset line " + std::to_string(line_no) +
                                         ": features must be finite");
            x[a] = v.v;
        }
        data.features.push_back(std::move(x));
        data.labels.push_back(static_cast<int>(
            detail::parse_long(fields.back(), ("label on line " + std::to_string(line_no)).c_str())));
    }
    if (data.features.empty()) throw std::runtime_error("dataset: no data rows");
    return data;
}

inline void write_dataset_csv(std::ostream& out, const Dataset& data) {
    for (std::size_t i = 0; i < data.features.size(); ++i) {
        for (const double v : data.features[i]) out << format_double(v) << ',';
        out << data.labels[i] << '\n';
    }
}

// n feature columns then one real target column (fitting samples).
inline std::vector<std::pair<std::vector<double>, double>> read_xy_csv(std::istream& in, bool has_header) {
    std::vector<std::pair<std::vector<double>, double>> samples;
    std::string line;
    std::size_t line_no = 0;
    std::size_t columns = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (has_header && line_no == 1) continue;
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() < 2)
            throw std::runtime_error("samples line " + std::to_string(line_no) +
                                     ": need at least one feature and a target");
        if (columns == 0) columns = fields.size();
        if (fields.size() != columns)
            throw std::runtime_error("samples line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(columns) + " columns, found " +
                                     std::to_string(fields.size()));
        std::pair<std::vector<double>, double> sample;
        sample.first.resize(columns - 1);
        for (std::size_t a = 0; a + 1 < columns; ++a) {
            const TropicalScalar v = parse_scalar(fields[a]);
            if (v.is_neg_inf())
                throw std::runtime_error("samples line " + std::to_string(line_no) +
                                         ": features must be finite");
            sample.first[a] = v.v;
        }
        const TropicalScalar y = parse_scalar(fields.back());
        if (y.is_neg_inf())
            throw std::runtime_error("samples line " + std::to_string(line_no) + ": target must be finite");
        sample.second = y.v;
        samples.push_back(std::move(sample));
    }
    if (samples.empty()) throw std::runtime_error("samples: no data rows");
    return samples;
}

inline void write_loss_csv(std::ostream& out, const std::vector<double>& losses) {
    out << "epoch,loss\n";
    for (std::size_t i = 0; i < losses.size(); ++i) out << i << ',' << format_double(losses[i]) << '\n';
}

} // namespace tropical
