#ifndef CHARTMORPH_TEST_SUPPORT_HPP
#define CHARTMORPH_TEST_SUPPORT_HPP

#include "chartmorph/service.hpp"

#include <random>
#include <string>
#include <vector>

namespace testsupport {

using namespace chartmorph;

std::string fixtures_dir();
std::vector<std::string> fixture_names();
std::string read_text(const std::string& path);
ChartPair load_fixture(const std::string& name);
Json fixture_request(const std::string& name, const Json& config = Json::object());

PlanBundle plan_fixture(const std::string& name, const PlanConfig& config = {});

// Random valid document pair over a shared column pool: up to two mapped
// dimensions, a measure level and possibly raw values (depth <= 4), at most
// six labels per dimension.
ChartPair random_pair(std::mt19937& rng);

std::vector<UnitKind> data_kinds(const TransitionPlan& plan);
std::vector<std::string> stage_kinds(const Stage& stage);

TransitionUnit make_unit(const std::string& id, UnitKind kind);

} // namespace testsupport

#endif
