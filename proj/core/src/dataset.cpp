/// @file dataset.cpp
/// @brief Flow-table ingestion and perturbation-strength label generation.

#include "turbuq/dataset.hpp"

#include "turbuq/csv.hpp"
#include "turbuq/errors.hpp"
#include "turbuq/realizability.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace turbuq {

namespace {

const std::vector<std::string> kFlowColumns = {
    "point_id", "x",    "y",    "z",    "rho",  "u",    "v",    "w",
    "dudx",     "dudy", "dudz", "dvdx", "dvdy", "dvdz", "dwdx", "dwdy",
    "dwdz",     "p",    "dpdx", "dpdy", "dpdz", "k",    "dkdx", "dkdy",
    "dkdz",     "omega", "mu",  "mu_t", "d_wall", "mach",
    "tau_xx",   "tau_yy", "tau_zz", "tau_xy", "tau_xz", "tau_yz"};

const std::vector<std::string> kHifiColumns = {
    "point_id", "tau_xx", "tau_yy", "tau_zz", "tau_xy", "tau_xz", "tau_yz"};

void check_duplicate_ids(const std::vector<std::int64_t>& ids,
                         const std::vector<std::size_t>& line_numbers, const std::string& origin) {
    std::unordered_map<std::int64_t, std::size_t> seen;
    seen.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto [it, inserted] = seen.emplace(ids[i], i);
        if (!inserted) {
            std::ostringstream os;
            os << origin << ": duplicate point_id " << ids[i] << " (rows "
               << line_numbers[it->second] << " and " << line_numbers[i] << ")";
            throw data_error(os.str());
        }
    }
}

SymmetricTensor3 parse_stress(const csv::Table& t, std::size_t row, const std::string& origin) {
    SymmetricTensor3 tau;
    tau.xx = csv::parse_double(t, row, t.column("tau_xx"), origin);
    tau.yy = csv::parse_double(t, row, t.column("tau_yy"), origin);
    tau.zz = csv::parse_double(t, row, t.column("tau_zz"), origin);
    tau.xy = csv::parse_double(t, row, t.column("tau_xy"), origin);
    tau.xz = csv::parse_double(t, row, t.column("tau_xz"), origin);
    tau.yz = csv::parse_double(t, row, t.column("tau_yz"), origin);
    return tau;
}

void validate_record(const FlowRecord& rec, std::size_t line, const std::string& origin) {
    std::ostringstream os;
    os << origin << ": row " << line << " (point_id " << rec.point_id << "): ";
    if (rec.k < 0.0) {
        os << "negative turbulent kinetic energy k = " << rec.k;
        throw data_error(os.str());
    }
    if (rec.wall_distance < 0.0) {
        os << "negative wall distance";
        throw data_error(os.str());
    }
    if (!(rec.mu > 0.0)) {
        os << "molecular viscosity must be positive, got " << rec.mu;
        throw data_error(os.str());
    }
    if (!(rec.rho > 0.0)) {
        os << "density must be positive, got " << rec.rho;
        throw data_error(os.str());
    }
    for (double g : rec.grad_velocity.m) {
        if (!std::isfinite(g)) {
            os << "non-finite velocity gradient";
            throw data_error(os.str());
        }
    }
}

} // namespace

const std::vector<std::string>& flow_csv_columns() { return kFlowColumns; }

std::vector<FlowRecord> read_flow_csv(std::istream& in, const std::string& origin) {
    const csv::Table t = csv::read_stream(in, origin);
    csv::require_columns(t, kFlowColumns, origin);

    const int col_id = t.column("point_id");
    std::vector<FlowRecord> records;
    records.reserve(t.rows.size());
    std::vector<std::int64_t> ids;
    ids.reserve(t.rows.size());

    auto num = [&](std::size_t row, const char* name) {
        return csv::parse_double(t, row, t.column(name), origin);
    };

    for (std::size_t row = 0; row < t.rows.size(); ++row) {
        FlowRecord rec;
        rec.point_id = csv::parse_int(t, row, col_id, origin);
        rec.position = {num(row, "x"), num(row, "y"), num(row, "z")};
        rec.rho = num(row, "rho");
        rec.velocity = {num(row, "u"), num(row, "v"), num(row, "w")};
        rec.grad_velocity(0, 0) = num(row, "dudx");
        rec.grad_velocity(0, 1) = num(row, "dudy");
        rec.grad_velocity(0, 2) = num(row, "dudz");
        rec.grad_velocity(1, 0) = num(row, "dvdx");
        rec.grad_velocity(1, 1) = num(row, "dvdy");
        rec.grad_velocity(1, 2) = num(row, "dvdz");
        rec.grad_velocity(2, 0) = num(row, "dwdx");
        rec.grad_velocity(2, 1) = num(row, "dwdy");
        rec.grad_velocity(2, 2) = num(row, "dwdz");
        rec.pressure = num(row, "p");
        rec.grad_pressure = {num(row, "dpdx"), num(row, "dpdy"), num(row, "dpdz")};
        rec.k = num(row, "k");
        rec.grad_k = {num(row, "dkdx"), num(row, "dkdy"), num(row, "dkdz")};
        rec.omega = num(row, "omega");
        rec.mu = num(row, "mu");
        rec.mu_t = num(row, "mu_t");
        rec.wall_distance = num(row, "d_wall");
        rec.mach = num(row, "mach");
        rec.tau_model = parse_stress(t, row, origin);
        validate_record(rec, t.line_numbers[row], origin);
        ids.push_back(rec.point_id);
        records.push_back(rec);
    }
    check_duplicate_ids(ids, t.line_numbers, origin);
    return records;
}

std::vector<FlowRecord> read_flow_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open '" + path.string() + "'");
    return read_flow_csv(in, path.filename().string());
}

void write_flow_csv(std::ostream& out, const std::vector<FlowRecord>& records) {
    for (std::size_t i = 0; i < kFlowColumns.size(); ++i) {
        if (i) out << ',';
        out << kFlowColumns[i];
    }
    out << '\n';
    auto f = [](double v) { return csv::format_double(v); };
    for (const auto& r : records) {
        out << r.point_id << ',' << f(r.position[0]) << ',' << f(r.position[1]) << ','
            << f(r.position[2]) << ',' << f(r.rho) << ',' << f(r.velocity[0]) << ','
            << f(r.velocity[1]) << ',' << f(r.velocity[2]);
        for (int gi = 0; gi < 3; ++gi)
            for (int gj = 0; gj < 3; ++gj) out << ',' << f(r.grad_velocity(gi, gj));
        out << ',' << f(r.pressure) << ',' << f(r.grad_pressure[0]) << ',' << f(r.grad_pressure[1])
            << ',' << f(r.grad_pressure[2]) << ',' << f(r.k) << ',' << f(r.grad_k[0]) << ','
            << f(r.grad_k[1]) << ',' << f(r.grad_k[2]) << ',' << f(r.omega) << ',' << f(r.mu)
            << ',' << f(r.mu_t) << ',' << f(r.wall_distance) << ',' << f(r.mach) << ','
            << f(r.tau_model.xx) << ',' << f(r.tau_model.yy) << ',' << f(r.tau_model.zz) << ','
            << f(r.tau_model.xy) << ',' << f(r.tau_model.xz) << ',' << f(r.tau_model.yz) << '\n';
    }
}

std::vector<HifiStress> read_hifi_csv(std::istream& in, const std::string& origin) {
    const csv::Table t = csv::read_stream(in, origin);
    csv::require_columns(t, kHifiColumns, origin);
    const int col_id = t.column("point_id");

    std::vector<HifiStress> stresses;
    stresses.reserve(t.rows.size());
    std::vector<std::int64_t> ids;
    ids.reserve(t.rows.size());
    for (std::size_t row = 0; row < t.rows.size(); ++row) {
        HifiStress h;
        h.point_id = csv::parse_int(t, row, col_id, origin);
        h.tau = parse_stress(t, row, origin);
        ids.push_back(h.point_id);
        stresses.push_back(h);
    }
    check_duplicate_ids(ids, t.line_numbers, origin);
    return stresses;
}

std::vector<HifiStress> read_hifi_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open '" + path.string() + "'");
    return read_hifi_csv(in, path.filename().string());
}

void write_hifi_csv(std::ostream& out, const std::vector<HifiStress>& stresses) {
    for (std::size_t i = 0; i < kHifiColumns.size(); ++i) {
        if (i) out << ',';
        out << kHifiColumns[i];
    }
    out << '\n';
    auto f = [](double v) { return csv::format_double(v); };
    for (const auto& h : stresses) {
        out << h.point_id << ',' << f(h.tau.xx) << ',' << f(h.tau.yy) << ',' << f(h.tau.zz) << ','
            << f(h.tau.xy) << ',' << f(h.tau.xz) << ',' << f(h.tau.yz) << '\n';
    }
}

void write_labels_csv(std::ostream& out, const std::vector<std::int64_t>& ids,
                      const std::vector<double>& targets) {
    out << "point_id,p_true\n";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out << ids[i] << ',' << csv::format_double(targets[i]) << '\n';
    }
}

LabeledDataset read_labels_csv(const std::filesystem::path& path) {
    const csv::Table t = csv::read_file(path);
    const std::string origin = path.filename().string();
    csv::require_columns(t, {"point_id", "p_true"}, origin);
    const int col_id = t.column("point_id");
    const int col_p = t.column("p_true");

    LabeledDataset out;
    for (std::size_t row = 0; row < t.rows.size(); ++row) {
        out.point_ids.push_back(csv::parse_int(t, row, col_id, origin));
        out.targets.push_back(csv::parse_double(t, row, col_p, origin));
    }
    check_duplicate_ids(out.point_ids, t.line_numbers, origin);
    return out;
}

FlowCase load_case(const std::string& name, const std::filesystem::path& rans_path,
                   const std::filesystem::path& hifi_path) {
    FlowCase c;
    c.name = name;
    c.rans_path = rans_path;
    c.hifi_path = hifi_path;
    c.records = read_flow_csv(rans_path);
    c.hifi_stress = read_hifi_csv(hifi_path);
    return c;
}

LabeledDataset compute_labels(const FlowCase& flow_case) {
    std::unordered_map<std::int64_t, const HifiStress*> hifi_by_id;
    hifi_by_id.reserve(flow_case.hifi_stress.size());
    for (const auto& h : flow_case.hifi_stress) hifi_by_id.emplace(h.point_id, &h);

    std::vector<std::int64_t> missing;
    for (const auto& rec : flow_case.records) {
        if (hifi_by_id.find(rec.point_id) == hifi_by_id.end()) missing.push_back(rec.point_id);
    }
    if (flow_case.records.size() != flow_case.hifi_stress.size() || !missing.empty()) {
        std::unordered_map<std::int64_t, bool> rans_ids;
        for (const auto& rec : flow_case.records) rans_ids.emplace(rec.point_id, true);
        for (const auto& h : flow_case.hifi_stress) {
            if (rans_ids.find(h.point_id) == rans_ids.end()) missing.push_back(h.point_id);
        }
        std::ostringstream os;
        os << "case '" << flow_case.name << "': RANS and high-fidelity tables do not cover the "
           << "same point ids; unmatched:";
        const std::size_t shown = std::min<std::size_t>(missing.size(), 20);
        for (std::size_t i = 0; i < shown; ++i) os << ' ' << missing[i];
        if (missing.size() > shown) os << " ... (" << missing.size() << " total)";
        throw data_error(os.str());
    }

    LabeledDataset out;
    out.case_name = flow_case.name;
    out.point_ids.reserve(flow_case.records.size());
    out.targets.reserve(flow_case.records.size());

    for (const auto& rec : flow_case.records) {
        const HifiStress* hifi = hifi_by_id.at(rec.point_id);

        auto barycentric_or_rethrow = [&](const SymmetricTensor3& tau, const char* side) {
            try {
                const BarycentricPoint p = barycentric_of_stress(tau);
                if (!p.realizable()) {
                    std::ostringstream os;
                    os << "non-realizable " << side << " stress";
                    throw data_error(os.str());
                }
                return p;
            } catch (const std::exception& e) {
                std::ostringstream os;
                os << "case '" << flow_case.name << "', point_id " << rec.point_id << ": " << side
                   << " stress rejected: " << e.what();
                throw data_error(os.str());
            }
        };

        const BarycentricPoint x_rans = barycentric_or_rethrow(rec.tau_model, "modeled");
        const BarycentricPoint x_data = barycentric_or_rethrow(hifi->tau, "high-fidelity");
        const double p = perturbation_strength(x_data, x_rans);
        if (!(p >= 0.0 && p <= 1.0)) {
            std::ostringstream os;
            os << "case '" << flow_case.name << "', point_id " << rec.point_id
               << ": perturbation strength " << p << " outside [0, 1]";
            throw data_error(os.str());
        }
        out.point_ids.push_back(rec.point_id);
        out.targets.push_back(p);
    }
    return out;
}

} // namespace turbuq
