#include <map>
#include <stdexcept>

#include "json.hpp"
#include "spantree/training.hpp"
#include "spantree/util.hpp"

namespace spantree {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kSchemaName = "spantree-model";
constexpr int kSchemaVersion = 1;

ordered_json instance_to_json(const Instance& inst) {
    ordered_json j;
    j["id"] = inst.id;
    j["label"] = inst.label;
    ordered_json feats = ordered_json::array();
    for (double f : inst.features) feats.push_back(format_full(f));
    j["features"] = std::move(feats);
    return j;
}

Instance instance_from_json(const ordered_json& j) {
    Instance inst;
    inst.id = j.at("id").get<int>();
    inst.label = j.at("label").get<int>();
    for (const auto& cell : j.at("features")) {
        const auto v = parse_finite_double(cell.get<std::string>());
        if (!v) throw std::runtime_error("model file holds a non-finite feature value");
        inst.features.push_back(*v);
    }
    return inst;
}

ordered_json params_to_json(const HyperParams& p) {
    ordered_json j;
    j["gamma"] = p.gamma;
    j["boundary_alpha"] = format_full(p.boundary_alpha);
    j["beta_alpha"] = format_full(p.beta_alpha);
    j["best_spt"] = p.best_spt;
    j["k_neighbours"] = p.k_neighbours;
    j["k1"] = p.k1;
    j["s_fraction"] = format_full(p.s_fraction);
    j["seed"] = p.seed;
    return j;
}

HyperParams params_from_json(const ordered_json& j) {
    HyperParams p;
    p.gamma = j.at("gamma").get<int>();
    p.boundary_alpha = *parse_finite_double(j.at("boundary_alpha").get<std::string>());
    p.beta_alpha = *parse_finite_double(j.at("beta_alpha").get<std::string>());
    p.best_spt = j.at("best_spt").get<int>();
    p.k_neighbours = j.at("k_neighbours").get<int>();
    p.k1 = j.at("k1").get<int>();
    p.s_fraction = *parse_finite_double(j.at("s_fraction").get<std::string>());
    p.seed = j.at("seed").get<std::uint64_t>();
    return p;
}

ordered_json dict_to_json(const std::map<int, std::vector<TreeRecord>>& dict) {
    ordered_json arr = ordered_json::array();
    for (const auto& [owner_id, records] : dict) {
        ordered_json entry;
        entry["owner"] = owner_id;
        ordered_json recs = ordered_json::array();
        for (const auto& rec : records) {
            ordered_json r;
            r["nodes"] = rec.tree.node_ids;
            ordered_json edges = ordered_json::array();
            for (const auto& [i, j] : rec.tree.edges) edges.push_back({i, j});
            r["edges"] = std::move(edges);
            r["dist"] = format_full(rec.dist_to_owner);
            r["weight"] = format_full(rec.weight_sum);
            recs.push_back(std::move(r));
        }
        entry["records"] = std::move(recs);
        arr.push_back(std::move(entry));
    }
    return arr;
}

std::map<int, std::vector<TreeRecord>> dict_from_json(
    const ordered_json& arr, const std::map<int, const Instance*>& pool_by_id) {
    std::map<int, std::vector<TreeRecord>> dict;
    for (const auto& entry : arr) {
        std::vector<TreeRecord> records;
        for (const auto& r : entry.at("records")) {
            TreeRecord rec;
            for (const auto& node_id : r.at("nodes")) {
                const int id = node_id.get<int>();
                const auto it = pool_by_id.find(id);
                if (it == pool_by_id.end())
                    throw std::runtime_error("model references unknown instance id " +
                                             std::to_string(id));
                rec.tree.node_ids.push_back(id);
                rec.tree.nodes.push_back(it->second->features);
            }
            for (const auto& e : r.at("edges"))
                rec.tree.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
            rec.tree.weight_sum = 0.0;
            for (const auto& [i, j] : rec.tree.edges) {
                const double len =
                    euclidean_distance(rec.tree.nodes[static_cast<std::size_t>(i)],
                                       rec.tree.nodes[static_cast<std::size_t>(j)]);
                rec.tree.edge_lengths.push_back(len);
                rec.tree.weight_sum += len;
            }
            rec.dist_to_owner = *parse_finite_double(r.at("dist").get<std::string>());
            rec.weight_sum = *parse_finite_double(r.at("weight").get<std::string>());
            records.push_back(std::move(rec));
        }
        dict[entry.at("owner").get<int>()] = std::move(records);
    }
    return dict;
}

}  // namespace

void save_model(const TrainedModel& m, const std::string& path) {
    ordered_json j;
    j["schema"] = kSchemaName;
    j["schema_version"] = kSchemaVersion;
    j["feature_count"] = m.feature_count;
    j["params"] = params_to_json(m.params);
    ordered_json owners = ordered_json::array();
    for (const auto& inst : m.owners) owners.push_back(instance_to_json(inst));
    j["owners"] = std::move(owners);
    ordered_json x0 = ordered_json::array();
    for (const auto& inst : m.x0) x0.push_back(instance_to_json(inst));
    j["x0"] = std::move(x0);
    ordered_json x1 = ordered_json::array();
    for (const auto& inst : m.x1) x1.push_back(instance_to_json(inst));
    j["x1"] = std::move(x1);
    j["zeta0"] = dict_to_json(m.zeta0);
    j["zeta1"] = dict_to_json(m.zeta1);
    write_file(path, j.dump(1) + "\n");
}

TrainedModel load_model(const std::string& path) {
    ordered_json j;
    try {
        j = ordered_json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("model file is not valid JSON: " + std::string(e.what()));
    }
    if (!j.contains("schema") || j.at("schema").get<std::string>() != kSchemaName)
        throw std::runtime_error("not a model file (bad magic): " + path);
    if (j.at("schema_version").get<int>() != kSchemaVersion)
        throw std::runtime_error("unsupported model schema version in " + path);

    TrainedModel m;
    m.feature_count = j.at("feature_count").get<int>();
    m.params = params_from_json(j.at("params"));
    for (const auto& inst : j.at("owners")) m.owners.push_back(instance_from_json(inst));
    for (const auto& inst : j.at("x0")) m.x0.push_back(instance_from_json(inst));
    for (const auto& inst : j.at("x1")) m.x1.push_back(instance_from_json(inst));

    std::map<int, const Instance*> pool0;
    std::map<int, const Instance*> pool1;
    for (const auto& inst : m.x0) pool0[inst.id] = &inst;
    for (const auto& inst : m.x1) pool1[inst.id] = &inst;
    m.zeta0 = dict_from_json(j.at("zeta0"), pool0);
    m.zeta1 = dict_from_json(j.at("zeta1"), pool1);
    return m;
}

}  // namespace spantree
