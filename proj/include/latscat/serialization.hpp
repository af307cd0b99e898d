#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "latscat/dn_maps.hpp"
#include "latscat/green.hpp"
#include "latscat/operator_matrix.hpp"
#include "latscat/potential.hpp"

namespace latscat {

using nlohmann::json;

extern const char* kToolVersion;

/// Complex scalars serialize as [re, im]; matrices as row-major arrays of
/// those pairs.  The boundary-vertex order is always embedded next to any
/// boundary-indexed matrix so files can be consumed across runs.
json complex_to_json(const Complex& z);
Complex complex_from_json(const json& j);

json matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_json(const json& j);

json vertices_to_json(const std::vector<LatticePoint>& pts);
std::vector<LatticePoint> vertices_from_json(const json& j);

json green_table_to_json(const GreenTable& t);
GreenTable green_table_from_json(const json& j);

json boundary_operator_to_json(const BoundaryOperator& op, int d, int M);
BoundaryOperator boundary_operator_from_json(const json& j, int* d_out = nullptr,
                                             int* M_out = nullptr);

json potential_to_json(const Potential& V);
Potential potential_from_json(const json& j);

json operator_matrix_to_json(const OperatorMatrix& op);
OperatorMatrix operator_matrix_from_json(const json& j);

/// FNV-1a hash of the canonical (sorted-key) dump; embedded in every output.
std::string config_hash(const json& config);

/// Run configuration shared by the CLI commands.
struct RunConfig {
    int d = 2;
    int M = 2;
    double lambda = 0.3;
    LimitSign sign = LimitSign::Plus;

    enum class PotentialKind { Zero, Explicit, Random };
    PotentialKind pot_kind = PotentialKind::Zero;
    std::vector<std::pair<std::vector<int>, double>> entries;
    double random_lo = -0.5;
    double random_hi = 0.5;
    std::uint64_t seed = 42;

    int n_theta = 256;
    GreenMethod green_method = GreenMethod::Auto;
    double green_tolerance = 0.0; // 0 = method default
    int threads = 0;              // 0 = hardware concurrency

    json raw; // canonical echo for hashing / provenance

    static RunConfig from_json(const json& j);
    SpectralParam spectral() const { return SpectralParam(lambda, d, sign); }
    Potential make_potential() const;
    std::string hash() const { return config_hash(raw); }
};

json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

} // namespace latscat
