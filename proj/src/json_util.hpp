#pragma once

#include <Eigen/Dense>
#include <json.hpp>
#include <string>

#include "ddsim/design.hpp"
#include "ddsim/lti.hpp"
#include "ddsim/simulation.hpp"
#include "ddsim/trajectory.hpp"

namespace ddsim::json_util {

using nlohmann::json;

[[nodiscard]] json parse(const std::string& text, const std::string& what);

[[nodiscard]] Eigen::MatrixXd matrix_from_json(const json& j, const std::string& name);
[[nodiscard]] json matrix_to_json(const Eigen::MatrixXd& m);
[[nodiscard]] json vector_to_json(const Eigen::VectorXd& v);

[[nodiscard]] Trajectory trajectory_from_json(const json& j, const std::string& name);
[[nodiscard]] json trajectory_to_json(const Trajectory& z);

[[nodiscard]] StateSpaceModel model_from_json(const json& j);
[[nodiscard]] json model_to_json(const StateSpaceModel& m);

[[nodiscard]] SimulationTask task_from_json(const json& j);
[[nodiscard]] json task_to_json(const SimulationTask& t);

[[nodiscard]] json design_result_to_json(const DesignResult& r);

}  // namespace ddsim::json_util
