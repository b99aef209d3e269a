#include "lcrl/attribution/cs3.hpp"

#include <atomic>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace lcrl::attribution {

std::string to_string(Cs3Mode mode) { return mode == Cs3Mode::kResample ? "resample" : "hold"; }

Cs3Mode cs3_mode_from_string(const std::string& text) {
  if (text == "resample") return Cs3Mode::kResample;
  if (text == "hold") return Cs3Mode::kHoldAction;
  throw std::invalid_argument("cs3 mode must be 'resample' or 'hold', got '" + text + "'");
}

namespace {

int resolve_horizon(const env::Environment& env, const Cs3Options& options) {
  return options.horizon > 0 ? options.horizon : env.spec().state_dim;
}

void validate(const Cs3Options& options) {
  if (options.sampling_times < 1) throw std::invalid_argument("cs3: sampling_times must be >= 1");
  if (options.horizon < 0) throw std::invalid_argument("cs3: horizon must be >= 1 (0 selects m)");
  if (!(options.subset_probability >= 0.0 && options.subset_probability <= 1.0)) {
    throw std::invalid_argument("cs3: subset_probability must lie in [0, 1]");
  }
}

}  // namespace

Vector cs3_repeat(const env::Environment& env, int action, int repeat, const Cs3Options& options) {
  const env::EnvSpec& spec = env.spec();
  const int n = spec.action_dim;
  const int m = spec.state_dim;
  const int horizon = resolve_horizon(env, options);
  if (action < 0 || action >= n) throw std::out_of_range("cs3: action index out of range");

  const std::uint64_t repeat_seed = env::derive_seed(env::derive_seed(options.seed, static_cast<std::uint64_t>(action)),
                                                     static_cast<std::uint64_t>(repeat));
  std::mt19937_64 background_rng(env::derive_seed(repeat_seed, 1) ^ options.background_salt);
  std::mt19937_64 target_rng(env::derive_seed(repeat_seed, 2));

  auto base = env.clone();
  base->reset(env::derive_seed(repeat_seed, 0));
  auto with_target = base->clone();
  auto without_target = base->clone();

  std::bernoulli_distribution include(options.subset_probability);
  std::vector<int> subset;
  for (int k = 0; k < n; ++k) {
    if (k != action && include(background_rng)) subset.push_back(k);
  }

  auto draw = [&](std::mt19937_64& rng, int k) {
    std::uniform_real_distribution<double> dist(spec.action_lb[k], spec.action_ub[k]);
    return dist(rng);
  };

  const double held = options.mode == Cs3Mode::kHoldAction ? draw(target_rng, action) : 0.0;
  Vector contribution = Vector::Zero(m);
  for (int t = 0; t < horizon; ++t) {
    Vector a1 = Vector::Zero(n);
    for (int k : subset) a1[k] = draw(background_rng, k);
    const double a2 = options.mode == Cs3Mode::kHoldAction ? held : draw(target_rng, action);
    Vector a12 = a1;
    a12[action] = a2;

    const env::StepResult ra = with_target->step(a12);
    const env::StepResult rb = without_target->step(a1);
    if (!ra.state.allFinite() || !rb.state.allFinite()) {
      throw DivergenceError("cs3: non-finite state in paired rollout");
    }
    contribution += (ra.state - rb.state).cwiseAbs();
    if (ra.done || rb.done) break;
  }
  return contribution;
}

Cs3Matrix estimate_cs3(const env::Environment& env, const Cs3Options& options) {
  validate(options);
  const int n = env.spec().action_dim;
  const int m = env.spec().state_dim;
  const int st = options.sampling_times;
  const std::size_t jobs = static_cast<std::size_t>(n) * static_cast<std::size_t>(st);

  std::vector<Vector> contributions(jobs);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    for (std::size_t job = next++; job < jobs && !failed; job = next++) {
      try {
        contributions[job] = cs3_repeat(env, static_cast<int>(job / st), static_cast<int>(job % st), options);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, options.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  Cs3Matrix out;
  out.phi = Matrix::Zero(n, m);
  for (int i = 0; i < n; ++i) {
    Vector sum = Vector::Zero(m);
    for (int s = 0; s < st; ++s) sum += contributions[static_cast<std::size_t>(i) * st + s];
    out.phi.row(i) = (sum / static_cast<double>(st)).transpose();
  }
  out.sampling_times = st;
  out.horizon = resolve_horizon(env, options);
  out.mode = options.mode;
  out.subset_probability = options.subset_probability;
  return out;
}

}  // namespace lcrl::attribution
