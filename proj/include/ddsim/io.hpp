#pragma once

#include <filesystem>
#include <string>

#include "ddsim/design.hpp"
#include "ddsim/lti.hpp"
#include "ddsim/simulation.hpp"
#include "ddsim/trajectory.hpp"

namespace ddsim {

[[nodiscard]] std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

// {"A": [[...]], "B": [[...]], "C": [[...]], "D": [[...]]}, row-major.
[[nodiscard]] StateSpaceModel parse_model_json(const std::string& text);
[[nodiscard]] StateSpaceModel load_model_json(const std::filesystem::path& path);
[[nodiscard]] std::string model_to_json(const StateSpaceModel& model);

// Header "t,c0,c1,..." then one row per sample. A header is optional on read;
// a first column named t (or equal to 0, 1, 2, ...) is treated as time.
[[nodiscard]] Trajectory parse_trajectory_csv(const std::string& text);
[[nodiscard]] Trajectory load_trajectory_csv(const std::filesystem::path& path);
[[nodiscard]] std::string trajectory_to_csv(const Trajectory& z);
void save_trajectory_csv(const std::filesystem::path& path, const Trajectory& z);

// {"u_ini": [...], "y_ini": [...], "u_s": [...]}; samples are numbers or
// per-channel arrays.
[[nodiscard]] SimulationTask parse_task_json(const std::string& text);
[[nodiscard]] SimulationTask load_task_json(const std::filesystem::path& path);
[[nodiscard]] std::string task_to_json(const SimulationTask& task);

[[nodiscard]] std::string design_result_to_json(const DesignResult& result);

}  // namespace ddsim
