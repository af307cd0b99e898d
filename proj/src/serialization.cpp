#include "latscat/serialization.hpp"

#include <cstdio>
#include <fstream>

namespace latscat {

const char* kToolVersion = "latscat 0.1.0";

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2)
        throw validation_error("complex value must be a [re, im] pair");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

json matrix_to_json(const Eigen::MatrixXcd& m) {
    json data = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(complex_to_json(m(r, c)));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Eigen::MatrixXcd matrix_from_json(const json& j) {
    const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
    const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
    const json& data = j.at("data");
    if (static_cast<Eigen::Index>(data.size()) != rows * cols)
        throw validation_error("matrix data length does not match rows*cols");
    Eigen::MatrixXcd m(rows, cols);
    Eigen::Index i = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(data[i++]);
    return m;
}

json vertices_to_json(const std::vector<LatticePoint>& pts) {
    json out = json::array();
    for (const auto& p : pts) out.push_back(p.coords);
    return out;
}

std::vector<LatticePoint> vertices_from_json(const json& j) {
    std::vector<LatticePoint> out;
    for (const auto& e : j) out.emplace_back(e.get<std::vector<int>>());
    return out;
}

json green_table_to_json(const GreenTable& t) {
    json offsets = json::array();
    json values = json::array();
    for (const auto& [k, v] : t.values) {
        offsets.push_back(k.coords);
        values.push_back(complex_to_json(v));
    }
    return json{{"format", "latscat-green-v1"},
                {"tool", kToolVersion},
                {"d", t.d},
                {"lambda", t.lambda},
                {"sign", to_string(t.sign)},
                {"method", t.method},
                {"tolerance", t.tolerance},
                {"accuracy", t.accuracy},
                {"offsets", std::move(offsets)},
                {"values", std::move(values)}};
}

GreenTable green_table_from_json(const json& j) {
    if (j.value("format", "") != "latscat-green-v1")
        throw validation_error("not a green-table file");
    GreenTable t;
    t.d = j.at("d").get<int>();
    t.lambda = j.at("lambda").get<double>();
    t.sign = j.at("sign").get<std::string>() == "+" ? LimitSign::Plus : LimitSign::Minus;
    t.method = j.at("method").get<std::string>();
    t.tolerance = j.at("tolerance").get<double>();
    t.accuracy = j.at("accuracy").get<double>();
    const json& offs = j.at("offsets");
    const json& vals = j.at("values");
    if (offs.size() != vals.size()) throw validation_error("green table offsets/values mismatch");
    for (std::size_t i = 0; i < offs.size(); ++i)
        t.values[LatticePoint(offs[i].get<std::vector<int>>())] = complex_from_json(vals[i]);
    return t;
}

namespace {

const char* kind_name(BoundaryOpKind k) {
    switch (k) {
        case BoundaryOpKind::InteriorDN: return "interior-dn";
        case BoundaryOpKind::ExteriorDN: return "exterior-dn";
        case BoundaryOpKind::BOperator: return "boundary-b";
        case BoundaryOpKind::SingleLayer: return "single-layer";
        case BoundaryOpKind::DegTilde: return "deg-tilde";
        case BoundaryOpKind::Shift: return "shift";
    }
    return "interior-dn";
}

BoundaryOpKind kind_from_name(const std::string& s) {
    if (s == "interior-dn") return BoundaryOpKind::InteriorDN;
    if (s == "exterior-dn") return BoundaryOpKind::ExteriorDN;
    if (s == "boundary-b") return BoundaryOpKind::BOperator;
    if (s == "single-layer") return BoundaryOpKind::SingleLayer;
    if (s == "deg-tilde") return BoundaryOpKind::DegTilde;
    if (s == "shift") return BoundaryOpKind::Shift;
    throw validation_error("unknown boundary-operator kind '" + s + "'");
}

} // namespace

json boundary_operator_to_json(const BoundaryOperator& op, int d, int M) {
    return json{{"format", "latscat-boundary-op-v1"},
                {"tool", kToolVersion},
                {"kind", kind_name(op.kind)},
                {"d", d},
                {"M", M},
                {"lambda", op.lambda},
                {"sign", to_string(op.sign)},
                {"vertex_order", vertices_to_json(op.vertices)},
                {"matrix", matrix_to_json(op.mat)}};
}

BoundaryOperator boundary_operator_from_json(const json& j, int* d_out, int* M_out) {
    if (j.value("format", "") != "latscat-boundary-op-v1")
        throw validation_error("not a boundary-operator file");
    BoundaryOperator op;
    op.kind = kind_from_name(j.at("kind").get<std::string>());
    op.lambda = j.at("lambda").get<double>();
    op.sign = j.value("sign", "+") == "+" ? LimitSign::Plus : LimitSign::Minus;
    op.vertices = vertices_from_json(j.at("vertex_order"));
    op.mat = matrix_from_json(j.at("matrix"));
    if (d_out) *d_out = j.at("d").get<int>();
    if (M_out) *M_out = j.at("M").get<int>();
    const int nb = static_cast<int>(op.vertices.size());
    if (op.mat.rows() != nb || op.mat.cols() != nb)
        throw validation_error("boundary-operator matrix does not match the vertex order");
    return op;
}

json potential_to_json(const Potential& V) {
    json entries = json::array();
    for (const auto& [n, v] : V.support()) entries.push_back(json{{"n", n.coords}, {"v", v}});
    return json{{"format", "latscat-potential-v1"},
                {"tool", kToolVersion},
                {"d", V.domain().dim()},
                {"M", V.domain().side()},
                {"entries", std::move(entries)}};
}

Potential potential_from_json(const json& j) {
    if (j.value("format", "") != "latscat-potential-v1")
        throw validation_error("not a potential file");
    RectDomain domain(j.at("d").get<int>(), j.at("M").get<int>());
    Potential V(domain);
    for (const auto& e : j.at("entries"))
        V.set(LatticePoint(e.at("n").get<std::vector<int>>()), e.at("v").get<double>());
    return V;
}

json operator_matrix_to_json(const OperatorMatrix& op) {
    return json{{"format", "latscat-operator-v1"},
                {"tool", kToolVersion},
                {"rows", to_string(op.rows)},
                {"cols", to_string(op.cols)},
                {"lambda", op.lambda},
                {"sign", to_string(op.sign)},
                {"matrix", matrix_to_json(op.mat)}};
}

OperatorMatrix operator_matrix_from_json(const json& j) {
    if (j.value("format", "") != "latscat-operator-v1")
        throw validation_error("not an operator-matrix file");
    OperatorMatrix op;
    op.rows = j.at("rows").get<std::string>() == "angular" ? IndexKind::Angular : IndexKind::Boundary;
    op.cols = j.at("cols").get<std::string>() == "angular" ? IndexKind::Angular : IndexKind::Boundary;
    op.lambda = j.at("lambda").get<double>();
    op.sign = j.value("sign", "+") == "+" ? LimitSign::Plus : LimitSign::Minus;
    op.mat = matrix_from_json(j.at("matrix"));
    return op;
}

std::string config_hash(const json& config) {
    const std::string s = config.dump(); // nlohmann objects iterate in sorted key order
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

RunConfig RunConfig::from_json(const json& j) {
    RunConfig c;
    c.d = j.value("d", 2);
    c.M = j.value("M", 2);
    c.lambda = j.value("lambda", 0.3);
    const std::string sgn = j.value("limit_sign", "+");
    if (sgn != "+" && sgn != "-") throw validation_error("limit_sign must be '+' or '-'");
    c.sign = sgn == "+" ? LimitSign::Plus : LimitSign::Minus;
    c.n_theta = j.value("n_theta", 256);
    c.seed = j.value("seed", std::uint64_t(42));
    c.threads = j.value("threads", 0);

    if (j.contains("potential")) {
        const json& p = j.at("potential");
        const std::string type = p.value("type", "zero");
        if (type == "zero") {
            c.pot_kind = PotentialKind::Zero;
        } else if (type == "explicit") {
            c.pot_kind = PotentialKind::Explicit;
            for (const auto& e : p.at("entries"))
                c.entries.emplace_back(e.at("n").get<std::vector<int>>(), e.at("v").get<double>());
        } else if (type == "random") {
            c.pot_kind = PotentialKind::Random;
            if (p.contains("range")) {
                c.random_lo = p.at("range")[0].get<double>();
                c.random_hi = p.at("range")[1].get<double>();
            }
            if (p.contains("seed")) c.seed = p.at("seed").get<std::uint64_t>();
        } else {
            throw validation_error("potential.type must be zero | explicit | random");
        }
    }
    if (j.contains("green")) {
        const json& g = j.at("green");
        c.green_method = green_method_from_string(g.value("method", "auto"));
        c.green_tolerance = g.value("tolerance", 0.0);
    }
    c.raw = j;
    return c;
}

Potential RunConfig::make_potential() const {
    RectDomain domain(d, M);
    switch (pot_kind) {
        case PotentialKind::Zero: return Potential(domain);
        case PotentialKind::Random: return Potential::random(domain, random_lo, random_hi, seed);
        case PotentialKind::Explicit: {
            Potential V(domain);
            for (const auto& [n, v] : entries) V.set(LatticePoint(n), v);
            return V;
        }
    }
    return Potential(domain);
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open '" + path + "'");
    json j;
    in >> j;
    return j;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

} // namespace latscat
