#ifndef EMICAST_CHECKPOINT_HPP
#define EMICAST_CHECKPOINT_HPP

#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "emicast/core.hpp"
#include "emicast/lstm.hpp"
#include "emicast/preprocess.hpp"

namespace emicast {

inline constexpr int kCheckpointVersion = 1;
inline constexpr const char* kCheckpointFormat = "emicast-checkpoint";

/// Everything needed to resume inference on a trained model: shapes, flat
/// 64-bit parameters, the scaler that produced its inputs, and the training
/// config for provenance.
struct Checkpoint {
    LstmModel model;
    Scaler scaler;
    TrainConfig config;
    std::string config_hash; // pipeline config fingerprint, may be empty
};

inline void save_checkpoint(const Checkpoint& ckpt, std::ostream& out) {
    nlohmann::json j;
    j["format"] = kCheckpointFormat;
    j["version"] = kCheckpointVersion;
    j["layer_sizes"] = ckpt.model.layer_sizes();
    j["seq_len"] = ckpt.model.seq_len;
    j["dropout_rate"] = ckpt.model.dropout_rate;
    j["parameters"] = flatten_parameters(ckpt.model);
    j["scaler"] = {{"min", ckpt.scaler.min}, {"max", ckpt.scaler.max}};
    nlohmann::json cfg;
    cfg["batch_size"] = ckpt.config.batch_size;
    cfg["epochs"] = ckpt.config.epochs;
    cfg["dropout"] = ckpt.config.dropout;
    cfg["lr"] = ckpt.config.lr;
    cfg["seed"] = ckpt.config.seed;
    cfg["validation_fraction"] = ckpt.config.validation_fraction;
    if (ckpt.config.clip_norm) cfg["clip_norm"] = *ckpt.config.clip_norm;
    j["train_config"] = cfg;
    j["config_hash"] = ckpt.config_hash;
    out << j.dump(2) << '\n';
}

inline void save_checkpoint_file(const Checkpoint& ckpt, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::IoError, "cannot write " + path);
    save_checkpoint(ckpt, out);
}

inline Checkpoint load_checkpoint(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::MalformedRow, std::string("checkpoint is not valid JSON: ") + e.what());
    }
    if (!j.contains("format") || j["format"] != kCheckpointFormat)
        fail(ErrorCode::BadArgument, "not an emicast checkpoint");
    if (!j.contains("version") || j["version"].get<int>() != kCheckpointVersion)
        fail(ErrorCode::BadArgument, "unsupported checkpoint version");

    Checkpoint ckpt;
    const std::vector<int> sizes = j.at("layer_sizes").get<std::vector<int>>();
    const int seq_len = j.at("seq_len").get<int>();
    const double dropout = j.at("dropout_rate").get<double>();
    ckpt.model = init_model(sizes, seq_len, dropout, 0);
    const auto params = j.at("parameters").get<std::vector<double>>();
    assign_parameters(ckpt.model, params);

    ckpt.scaler.min = j.at("scaler").at("min").get<double>();
    ckpt.scaler.max = j.at("scaler").at("max").get<double>();

    const auto& cfg = j.at("train_config");
    ckpt.config.batch_size = cfg.at("batch_size").get<int>();
    ckpt.config.epochs = cfg.at("epochs").get<int>();
    ckpt.config.dropout = cfg.at("dropout").get<double>();
    ckpt.config.lr = cfg.at("lr").get<double>();
    ckpt.config.seed = cfg.at("seed").get<std::uint64_t>();
    ckpt.config.validation_fraction = cfg.at("validation_fraction").get<double>();
    if (cfg.contains("clip_norm")) ckpt.config.clip_norm = cfg.at("clip_norm").get<double>();
    ckpt.config_hash = j.value("config_hash", std::string());
    return ckpt;
}

inline Checkpoint load_checkpoint_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path);
    return load_checkpoint(in);
}

} // namespace emicast

#endif // EMICAST_CHECKPOINT_HPP
