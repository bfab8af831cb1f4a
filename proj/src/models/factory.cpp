#include "dynlay/models/factory.hpp"

#include <set>
#include <stdexcept>

#include "dynlay/models/davidson_harel.hpp"
#include "dynlay/models/force_atlas2.hpp"
#include "dynlay/models/fruchterman_reingold.hpp"
#include "dynlay/models/kamada_kawai.hpp"
#include "dynlay/models/linlog.hpp"

namespace dynlay::models {

namespace {

void check_keys(const std::string& model, const ModelParams& params,
                const std::set<std::string>& allowed)
{
    for (const auto& [key, value] : params) {
        if (!allowed.count(key)) {
            std::string known;
            for (const auto& k : allowed)
                known += (known.empty() ? "" : ", ") + k;
            throw std::invalid_argument("unknown parameter '" + key + "' for " + model +
                                        " (known: " + known + ")");
        }
    }
}

}  // namespace

const std::vector<std::string>& model_names()
{
    static const std::vector<std::string> names{"fr", "kk", "fa2", "dh", "linlog"};
    return names;
}

std::unique_ptr<ForceModel> make_model(const std::string& name, const ModelParams& params)
{
    if (name == "fr") {
        check_keys(name, params,
                   {"scale", "initial_temperature", "cooling", "rewarm", "stop_fraction"});
        return std::make_unique<FruchtermanReingold>(FruchtermanReingoldParams::from(params));
    }
    if (name == "kk") {
        check_keys(name, params, {"epsilon", "stiffness", "max_inner"});
        return std::make_unique<KamadaKawai>(KamadaKawaiParams::from(params));
    }
    if (name == "fa2") {
        check_keys(name, params,
                   {"repulsion", "gravity", "tolerance", "speed", "max_speed", "max_speed_growth",
                    "stop_fraction"});
        return std::make_unique<ForceAtlas2>(ForceAtlas2Params::from(params));
    }
    if (name == "dh") {
        check_keys(name, params,
                   {"initial_radius", "radius_decay", "radius_floor", "rewarm", "node_weight",
                    "border_weight", "edge_weight", "crossing_weight", "boltzmann"});
        return std::make_unique<DavidsonHarel>(DavidsonHarelParams::from(params));
    }
    if (name == "linlog") {
        check_keys(name, params, {"theta", "stop_fraction", "max_halvings"});
        return std::make_unique<LinLog>(LinLogParams::from(params));
    }
    throw std::invalid_argument("unknown algorithm '" + name + "' (expected fr, kk, fa2, dh, linlog)");
}

}  // namespace dynlay::models
