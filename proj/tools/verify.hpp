#ifndef VSC_TOOLS_VERIFY_HPP
#define VSC_TOOLS_VERIFY_HPP

#include "vsc/mirror.hpp"

#include <json.hpp>

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace vsc::cli {

struct SuiteOptions {
    std::optional<Model> model;
    std::optional<Sector> sector;
    int samples = 50;
    unsigned seed = 1;
};

struct Check {
    std::string name;
    bool pass = false;
    nlohmann::json detail = nlohmann::json::object();
};

struct SuiteReport {
    std::string suite;
    std::vector<Check> checks;

    bool pass() const;
    nlohmann::json to_json() const;
};

const std::vector<std::string> &suite_names();
// Throws UsageError for an unknown suite.
SuiteReport run_suite(const std::string &name, const SuiteOptions &opts, MirrorEngine &engine);

// Random specs on the selection locus, insertions over classes 2..dim.
CorrelatorSpec random_closed_on_locus(const Model &model, int max_d, std::mt19937 &rng);
// Open sector; up to `max_units` O_1 insertions.
CorrelatorSpec random_open_on_locus(const Model &model, int max_d, int max_units, std::mt19937 &rng);

// Iterated residue of the sector's integrand without consulting the selection rule.
BigRational evaluate_ignoring_selection(const CorrelatorSpec &s, std::vector<std::size_t> order = {});

} // namespace vsc::cli

#endif
