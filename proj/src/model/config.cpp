#include "wattspell/model/config.hpp"

#include "wattspell/core/error.hpp"
#include "wattspell/layers/conv1d.hpp"

namespace wspl {

namespace {

template <typename T>
void read_key(nlohmann::json& j, const char* key, T& field) {
  auto it = j.find(key);
  if (it == j.end()) return;
  if constexpr (std::is_floating_point_v<T>) {
    if (!it->is_number()) throw DomainError(std::string("config key '") + key + "' expects a number");
    field = it->get<T>();
  } else {
    if (!it->is_number_integer() || (it->is_number_integer() && !it->is_number_unsigned() && it->get<long long>() < 0)) {
      throw DomainError(std::string("config key '") + key + "' expects a non-negative integer");
    }
    field = it->get<T>();
  }
  j.erase(it);
}

}  // namespace

void ModelConfig::validate() const {
  const auto positive = [](std::size_t v, const char* name) {
    if (v == 0) throw DomainError(std::string("config: ") + name + " must be positive");
  };
  positive(window_len, "window_len");
  positive(n_appliances, "n_appliances");
  positive(conv_filters, "conv_filters");
  positive(conv_kernel, "conv_kernel");
  positive(conv_stride, "conv_stride");
  positive(pool, "pool");
  positive(hidden, "hidden");
  positive(bilstm_layers, "bilstm_layers");
  positive(attention_width, "attention_width");
  positive(epochs, "epochs");
  positive(batch_size, "batch_size");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw DomainError("config: dropout must lie in [0, 1)");
  if (!(learning_rate > 0.0)) throw DomainError("config: learning_rate must be positive");
  if (!(on_threshold > 0.0 && on_threshold < 1.0)) throw DomainError("config: on_threshold must lie in (0, 1)");
  if (sequence_length() == 0) throw ShapeError("config: window too short for conv + pool");
}

std::size_t ModelConfig::conv_length() const { return conv_output_length(window_len, conv_kernel, conv_stride); }

std::size_t ModelConfig::sequence_length() const {
  const std::size_t n = conv_length();
  if (n < pool) {
    throw ShapeError("config: conv output length " + std::to_string(n) + " is shorter than pool " + std::to_string(pool));
  }
  return n / pool;
}

nlohmann::json to_json(const ModelConfig& c) {
  return nlohmann::json{{"window_len", c.window_len},
                        {"n_appliances", c.n_appliances},
                        {"conv_filters", c.conv_filters},
                        {"conv_kernel", c.conv_kernel},
                        {"conv_stride", c.conv_stride},
                        {"pool", c.pool},
                        {"hidden", c.hidden},
                        {"bilstm_layers", c.bilstm_layers},
                        {"attention_width", c.attention_width},
                        {"dropout", c.dropout},
                        {"learning_rate", c.learning_rate},
                        {"epochs", c.epochs},
                        {"batch_size", c.batch_size},
                        {"seed", c.seed},
                        {"on_threshold", c.on_threshold}};
}

void apply_model_keys(nlohmann::json& j, ModelConfig& c) {
  if (!j.is_object()) throw DomainError("config must be a JSON object");
  read_key(j, "window_len", c.window_len);
  read_key(j, "n_appliances", c.n_appliances);
  read_key(j, "conv_filters", c.conv_filters);
  read_key(j, "conv_kernel", c.conv_kernel);
  read_key(j, "conv_stride", c.conv_stride);
  read_key(j, "pool", c.pool);
  read_key(j, "hidden", c.hidden);
  read_key(j, "bilstm_layers", c.bilstm_layers);
  read_key(j, "attention_width", c.attention_width);
  read_key(j, "dropout", c.dropout);
  read_key(j, "learning_rate", c.learning_rate);
  read_key(j, "epochs", c.epochs);
  read_key(j, "batch_size", c.batch_size);
  read_key(j, "seed", c.seed);
  read_key(j, "on_threshold", c.on_threshold);
}

ModelConfig model_config_from_json(const nlohmann::json& j) {
  nlohmann::json rest = j;
  ModelConfig c;
  apply_model_keys(rest, c);
  if (!rest.empty()) throw DomainError("unknown config key '" + rest.begin().key() + "'");
  return c;
}

std::string canonical_text(const ModelConfig& config) { return to_json(config).dump(); }

}  // namespace wspl
