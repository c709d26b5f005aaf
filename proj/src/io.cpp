#include "ddsim/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

#include "ddsim/error.hpp"
#include "json_util.hpp"

namespace ddsim {

namespace json_util {

json parse(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::Io, "malformed " + what + " JSON: " + e.what());
    }
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& name) {
    require(j.is_array(), ErrorKind::InputContract, name + " must be an array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (rows == 0) return Eigen::MatrixXd(0, 0);
    require(j[0].is_array(), ErrorKind::InputContract, name + " must be an array of rows");
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        require(row.is_array() && static_cast<Eigen::Index>(row.size()) == cols,
                ErrorKind::InputContract, name + " has ragged rows");
        for (Eigen::Index c = 0; c < cols; ++c) {
            const json& v = row[static_cast<std::size_t>(c)];
            require(v.is_number(), ErrorKind::InputContract, name + " entries must be numbers");
            m(r, c) = v.get<double>();
        }
    }
    return m;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        out.push_back(std::move(row));
    }
    return out;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Trajectory trajectory_from_json(const json& j, const std::string& name) {
    require(j.is_array(), ErrorKind::InputContract, name + " must be an array of samples");
    if (j.empty()) return {};
    if (j[0].is_number()) {
        std::vector<double> v;
        for (const auto& e : j) {
            require(e.is_number(), ErrorKind::InputContract, name + " mixes scalars and arrays");
            v.push_back(e.get<double>());
        }
        return Trajectory::scalar(std::move(v));
    }
    const Eigen::MatrixXd m = matrix_from_json(j, name);
    Trajectory z(static_cast<std::size_t>(m.cols()), static_cast<std::size_t>(m.rows()));
    for (Eigen::Index t = 0; t < m.rows(); ++t)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            z(static_cast<std::size_t>(t), static_cast<std::size_t>(c)) = m(t, c);
    return z;
}

json trajectory_to_json(const Trajectory& z) {
    json out = json::array();
    for (std::size_t t = 0; t < z.length(); ++t) {
        if (z.channels() == 1) {
            out.push_back(z(t));
        } else {
            json s = json::array();
            for (std::size_t c = 0; c < z.channels(); ++c) s.push_back(z(t, c));
            out.push_back(std::move(s));
        }
    }
    return out;
}

StateSpaceModel model_from_json(const json& j) {
    require(j.is_object(), ErrorKind::InputContract, "model must be a JSON object");
    for (const char* key : {"A", "B", "C"})
        require(j.contains(key), ErrorKind::InputContract, std::string("model is missing ") + key);
    Eigen::MatrixXd A = matrix_from_json(j.at("A"), "A");
    Eigen::MatrixXd B = matrix_from_json(j.at("B"), "B");
    Eigen::MatrixXd C = matrix_from_json(j.at("C"), "C");
    Eigen::MatrixXd D = j.contains("D") ? matrix_from_json(j.at("D"), "D")
                                        : Eigen::MatrixXd::Zero(C.rows(), B.cols());
    return {std::move(A), std::move(B), std::move(C), std::move(D)};
}

json model_to_json(const StateSpaceModel& m) {
    return {{"A", matrix_to_json(m.A())},
            {"B", matrix_to_json(m.B())},
            {"C", matrix_to_json(m.C())},
            {"D", matrix_to_json(m.D())}};
}

SimulationTask task_from_json(const json& j) {
    require(j.is_object(), ErrorKind::InputContract, "task must be a JSON object");
    for (const char* key : {"u_ini", "y_ini", "u_s"})
        require(j.contains(key), ErrorKind::InputContract, std::string("task is missing ") + key);
    SimulationTask t{trajectory_from_json(j.at("u_ini"), "u_ini"),
                     trajectory_from_json(j.at("y_ini"), "y_ini"),
                     trajectory_from_json(j.at("u_s"), "u_s")};
    t.validate();
    return t;
}

json task_to_json(const SimulationTask& t) {
    return {{"u_ini", trajectory_to_json(t.u_ini)},
            {"y_ini", trajectory_to_json(t.y_ini)},
            {"u_s", trajectory_to_json(t.u_s)}};
}

json design_result_to_json(const DesignResult& r) {
    return {{"u_d_opt", trajectory_to_json(r.u_d_opt)},
            {"g_opt", vector_to_json(r.g_opt)},
            {"nu_opt", vector_to_json(r.nu_opt)},
            {"objective", r.objective},
            {"energy_used", r.energy_used},
            {"kkt_residual", r.kkt_residual},
            {"rhs_norm", r.rhs_norm},
            {"past_residual", r.past_residual},
            {"start_index", r.start_index},
            {"solver_report",
             {{"iterations", r.solver_report.iterations},
              {"outer_iterations", r.solver_report.outer_iterations},
              {"restoration_steps", r.solver_report.restoration_steps},
              {"converged", r.solver_report.converged},
              {"message", r.solver_report.message}}}};
}

}  // namespace json_util

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
    out << text;
    if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

StateSpaceModel parse_model_json(const std::string& text) {
    return json_util::model_from_json(json_util::parse(text, "model"));
}

StateSpaceModel load_model_json(const std::filesystem::path& path) {
    return parse_model_json(read_text(path));
}

std::string model_to_json(const StateSpaceModel& model) {
    return json_util::model_to_json(model).dump(2);
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool parse_number(std::string_view s, double& out) {
    s = trim(s);
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace

Trajectory parse_trajectory_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<double>> rows;
    bool header_time = false;
    bool first = true;
    std::size_t width = 0;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto fields = split(line, ',');
        std::vector<double> row(fields.size());
        bool numeric = true;
        for (std::size_t i = 0; i < fields.size() && numeric; ++i) numeric = parse_number(fields[i], row[i]);
        if (!numeric) {
            require(first, ErrorKind::Io, "non-numeric value on CSV line " + std::to_string(lineno));
            header_time = trim(fields[0]) == "t";
            width = fields.size();
            first = false;
            continue;
        }
        if (width == 0) width = row.size();
        require(row.size() == width, ErrorKind::Io, "ragged CSV row on line " + std::to_string(lineno));
        rows.push_back(std::move(row));
        first = false;
    }
    if (rows.empty()) return width > 0 ? Trajectory(width - (header_time ? 1 : 0), 0) : Trajectory{};
    bool drop_time = header_time;
    if (!header_time && width > 1) {
        drop_time = true;
        for (std::size_t t = 0; t < rows.size() && drop_time; ++t)
            drop_time = rows[t][0] == static_cast<double>(t);
        // A single row 0 is ambiguous; keep it as data.
        if (rows.size() < 2) drop_time = false;
    }
    const std::size_t off = drop_time ? 1 : 0;
    require(width > off, ErrorKind::Io, "CSV has no signal columns");
    Trajectory z(width - off, rows.size());
    for (std::size_t t = 0; t < rows.size(); ++t)
        for (std::size_t c = 0; c + off < width; ++c) z(t, c) = rows[t][c + off];
    return z;
}

Trajectory load_trajectory_csv(const std::filesystem::path& path) {
    return parse_trajectory_csv(read_text(path));
}

std::string trajectory_to_csv(const Trajectory& z) {
    std::string out = "t";
    for (std::size_t c = 0; c < z.channels(); ++c) out += ",ch" + std::to_string(c);
    out += '\n';
    char buf[32];
    for (std::size_t t = 0; t < z.length(); ++t) {
        out += std::to_string(t);
        for (std::size_t c = 0; c < z.channels(); ++c) {
            std::snprintf(buf, sizeof buf, ",%.17g", z(t, c));
            out += buf;
        }
        out += '\n';
    }
    return out;
}

void save_trajectory_csv(const std::filesystem::path& path, const Trajectory& z) {
    write_text(path, trajectory_to_csv(z));
}

SimulationTask parse_task_json(const std::string& text) {
    return json_util::task_from_json(json_util::parse(text, "task"));
}

SimulationTask load_task_json(const std::filesystem::path& path) {
    return parse_task_json(read_text(path));
}

std::string task_to_json(const SimulationTask& task) {
    return json_util::task_to_json(task).dump(2);
}

std::string design_result_to_json(const DesignResult& result) {
    return json_util::design_result_to_json(result).dump(2);
}

}  // namespace ddsim
