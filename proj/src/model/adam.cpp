#include "wattspell/model/adam.hpp"

#include <cmath>

#include "wattspell/core/error.hpp"
#include "wattspell/core/ops.hpp"

namespace wspl {

AdamState AdamState::for_params(const ModelParams& params, AdamOptions options) {
  AdamState s;
  s.m = params;
  s.m *= 0.0;
  s.v = s.m;
  s.options = options;
  return s;
}

void adam_update(std::span<double> theta, std::span<const double> grad, std::span<double> m, std::span<double> v,
                 std::uint64_t t, const AdamOptions& o) {
  if (grad.size() != theta.size() || m.size() != theta.size() || v.size() != theta.size()) {
    throw ShapeError("adam_update: block sizes disagree");
  }
  if (t == 0) throw DomainError("adam_update: step counter starts at 1");
  const double c1 = 1.0 - std::pow(o.beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(o.beta2, static_cast<double>(t));
  for (std::size_t i = 0; i < theta.size(); ++i) {
    m[i] = o.beta1 * m[i] + (1.0 - o.beta1) * grad[i];
    v[i] = o.beta2 * v[i] + (1.0 - o.beta2) * grad[i] * grad[i];
    const double m_hat = m[i] / c1;
    const double v_hat = v[i] / c2;
    theta[i] -= o.learning_rate * m_hat / (std::sqrt(v_hat) + o.epsilon);
  }
}

void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state) {
  std::vector<std::pair<std::string, const TensorD*>> g;
  grads.for_each([&](const std::string& name, const TensorD& t) { g.emplace_back(name, &t); });
  for (const auto& [name, t] : g) {
    if (!all_finite(*t)) throw TrainingError("non-finite gradient in parameter block " + name);
  }
  std::vector<TensorD*> ms, vs;
  state.m.for_each([&](const std::string&, TensorD& t) { ms.push_back(&t); });
  state.v.for_each([&](const std::string&, TensorD& t) { vs.push_back(&t); });

  ++state.step;
  std::size_t i = 0;
  params.for_each([&](const std::string& name, TensorD& theta) {
    if (i >= g.size() || g[i].second->shape() != theta.shape() || ms[i]->shape() != theta.shape()) {
      throw ShapeError("adam_step: block " + name + " does not mirror its gradient/moments");
    }
    adam_update(theta.values(), g[i].second->values(), ms[i]->values(), vs[i]->values(), state.step, state.options);
    ++i;
  });
}

}  // namespace wspl
