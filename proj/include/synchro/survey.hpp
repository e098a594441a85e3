#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "synchro/automaton.hpp"
#include "synchro/config.hpp"
#include "synchro/generator.hpp"
#include "synchro/minimize.hpp"
#include "synchro/positive_product.hpp"
#include "synchro/primitivity.hpp"
#include "synchro/random.hpp"
#include "synchro/square_graph.hpp"

namespace synchro {

// ---------------------------------------------------------------------------
// Worker pool

/// Runs body(i) for i in [0, count) on `threads` workers. Results must be
/// written by index so the outcome does not depend on scheduling. The first
/// exception thrown by any task is rethrown after all workers stop.
inline void parallel_for(std::size_t count, std::size_t threads,
                         const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(count, 1));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------
// CSV

/// RFC 4180 field: quoted only when it holds a comma, quote or line break.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void write_csv_line(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k > 0) out << ',';
    out << csv_field(fields[k]);
  }
  out << '\n';
}

inline std::string na_or(const std::optional<std::size_t>& v) {
  return v ? std::to_string(*v) : "NA";
}

inline std::string fixed(double v, int digits = 6) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

// ---------------------------------------------------------------------------
// Survey of the three generation methods

enum class SurveyMethod {
  Uniform = 1,        // permutations plus one uniform rank n-1 letter
  RandomExtract = 2,  // minimal-primitive construction, random extraction
  FirstExtract = 3,   // minimal-primitive construction, lexicographic extraction
};

enum class TrialVerdict { Reducible, Imprimitive, Primitive, Unconverged };

inline const char* to_string(TrialVerdict v) {
  switch (v) {
    case TrialVerdict::Reducible:
      return "reducible";
    case TrialVerdict::Imprimitive:
      return "imprimitive";
    case TrialVerdict::Primitive:
      return "primitive";
    case TrialVerdict::Unconverged:
      return "unconverged";
  }
  return "?";
}

struct SurveyConfig {
  SurveyMethod method = SurveyMethod::FirstExtract;
  std::vector<std::size_t> primes;  // n is their product
  std::size_t trials = 2000;
  std::uint64_t seed = 0;
  std::size_t t1 = 1000;
  /// Alphabet size for the uniform method; 0 means primes.size().
  std::size_t uniform_letters = 0;
  bool audit_full = false;
  std::size_t threads = 0;

  std::size_t n() const {
    std::size_t n = 1;
    for (std::size_t q : primes) n *= q;
    return n;
  }
};

struct SurveyRow {
  int method = 0;
  std::size_t n = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  TrialVerdict verdict = TrialVerdict::Unconverged;
  std::optional<bool> minimal;
  std::optional<std::size_t> sync_eccentricity;
  std::optional<std::size_t> pair_diameter;
  std::size_t letters = 0;  // alphabet of the measured automaton, 0 if none
  bool audited = false;
  double elapsed_ms = 0.0;
};

/// Thrown when a sampled audit finds a primitive row whose automata do not
/// have the guaranteed properties.
class AuditFailure : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline bool audit_selected(const SurveyConfig& cfg, std::size_t trial) {
  return cfg.audit_full || trial % 100 == 0;
}

inline void measure(SurveyRow& row, const Automaton& a) {
  const DiameterReport d = diameters(a);
  row.sync_eccentricity = d.sync_eccentricity;
  row.pair_diameter = d.pair_diameter;
  row.letters = a.size();
}

inline void run_uniform_trial(const SurveyConfig& cfg, SurveyRow& row, Rng& rng) {
  const std::size_t letters =
      cfg.uniform_letters ? cfg.uniform_letters : cfg.primes.size();
  const MatrixSet s = sample_uniform_merging_set(row.n, letters, rng);
  const Automaton a = automaton_from_stochastic(s);
  if (!is_synchronizing(a)) {
    row.verdict = is_irreducible(s) ? TrialVerdict::Imprimitive
                                    : TrialVerdict::Reducible;
    return;
  }
  row.verdict = TrialVerdict::Primitive;
  row.minimal = is_minimally_synchronizing(a);
  measure(row, a);
}

inline void run_construction_trial(const SurveyConfig& cfg, SurveyRow& row,
                                   Rng& rng) {
  GeneratorConfig g;
  g.primes = cfg.primes;
  g.t1 = cfg.t1;
  g.method = cfg.method == SurveyMethod::RandomExtract ? ExtractMethod::Random
                                                       : ExtractMethod::Deterministic;
  g.seed = row.seed;
  const GeneratorOutcome out = minimal_primitive_search(g, rng);
  if (!out.converged) {
    row.verdict = TrialVerdict::Unconverged;
    return;
  }
  switch (out.verdict->cls) {
    case PrimitivityClass::Reducible:
      row.verdict = TrialVerdict::Reducible;
      return;
    case PrimitivityClass::Imprimitive:
      row.verdict = TrialVerdict::Imprimitive;
      return;
    case PrimitivityClass::Primitive:
      break;
  }
  row.verdict = TrialVerdict::Primitive;
  const Automaton a = associated_automaton(*out.set);
  const Automaton minimized = minimize_associated_automaton_unchecked(a, *out.set);
  row.minimal = is_minimally_synchronizing(minimized);
  if (audit_selected(cfg, row.trial)) {
    row.audited = true;
    if (!is_synchronizing(a) || !*row.minimal ||
        !is_minimally_primitive(*out.set)) {
      throw AuditFailure("audit failed at n = " + std::to_string(row.n) +
                         ", trial " + std::to_string(row.trial));
    }
  }
  measure(row, minimized);
}

}  // namespace detail

inline SurveyRow run_survey_trial(const SurveyConfig& cfg, std::size_t trial) {
  SurveyRow row;
  row.method = static_cast<int>(cfg.method);
  row.n = cfg.n();
  row.trial = trial;
  row.seed = cfg.seed ^ static_cast<std::uint64_t>(trial);
  Rng rng(row.seed);
  const auto start = std::chrono::steady_clock::now();
  if (cfg.method == SurveyMethod::Uniform) {
    detail::run_uniform_trial(cfg, row, rng);
  } else {
    detail::run_construction_trial(cfg, row, rng);
  }
  row.elapsed_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return row;
}

inline std::vector<SurveyRow> run_survey(const SurveyConfig& cfg) {
  if (cfg.primes.empty()) throw InvalidInput("no prime factors given");
  for (std::size_t q : cfg.primes) {
    if (q < 2) throw InvalidInput("every factor must be >= 2");
  }
  check_dimension(cfg.n());
  if (cfg.method != SurveyMethod::Uniform && cfg.primes.size() < 2) {
    throw InvalidInput("the construction needs at least two factors");
  }
  std::vector<SurveyRow> rows(cfg.trials);
  parallel_for(cfg.trials, cfg.threads,
               [&](std::size_t t) { rows[t] = run_survey_trial(cfg, t); });
  return rows;
}

inline void write_survey_header(std::ostream& out, bool timing) {
  std::vector<std::string> h{"method", "n", "trial", "seed", "verdict", "minimal",
                             "sync_eccentricity", "pair_diameter", "letters",
                             "audited"};
  if (timing) h.push_back("elapsed_ms");
  write_csv_line(out, h);
}

inline void write_survey_rows(std::ostream& out, const std::vector<SurveyRow>& rows,
                              bool timing) {
  for (const auto& r : rows) {
    std::vector<std::string> f{
        std::to_string(r.method),
        std::to_string(r.n),
        std::to_string(r.trial),
        std::to_string(r.seed),
        to_string(r.verdict),
        r.minimal ? (*r.minimal ? "true" : "false") : "NA",
        na_or(r.sync_eccentricity),
        na_or(r.pair_diameter),
        r.letters ? std::to_string(r.letters) : "NA",
        r.audited ? "true" : "false"};
    if (timing) f.push_back(fixed(r.elapsed_ms, 3));
    write_csv_line(out, f);
  }
}

/// Per-(method, n) aggregate. Fractions are over classified trials
/// (trials minus unconverged runs).
struct SurveySummary {
  int method = 0;
  std::size_t n = 0;
  std::size_t trials = 0;
  std::size_t unconverged = 0;
  std::size_t reducible = 0;
  std::size_t imprimitive = 0;
  std::size_t primitive = 0;
  std::optional<std::size_t> max_sync_eccentricity;
  double mean_sync_eccentricity = 0.0;
  std::optional<std::size_t> max_pair_diameter;
  double mean_pair_diameter = 0.0;

  std::size_t classified() const { return reducible + imprimitive + primitive; }
  double fraction(std::size_t count) const {
    return classified() ? static_cast<double>(count) / classified() : 0.0;
  }
  double nonprimitive_fraction() const { return fraction(reducible + imprimitive); }
};

inline SurveySummary summarize(const std::vector<SurveyRow>& rows) {
  SurveySummary s;
  if (rows.empty()) return s;
  s.method = rows.front().method;
  s.n = rows.front().n;
  s.trials = rows.size();
  double ecc_sum = 0.0, pair_sum = 0.0;
  std::size_t measured = 0;
  for (const auto& r : rows) {
    switch (r.verdict) {
      case TrialVerdict::Unconverged:
        ++s.unconverged;
        break;
      case TrialVerdict::Reducible:
        ++s.reducible;
        break;
      case TrialVerdict::Imprimitive:
        ++s.imprimitive;
        break;
      case TrialVerdict::Primitive:
        ++s.primitive;
        break;
    }
    if (r.sync_eccentricity && r.pair_diameter) {
      ++measured;
      ecc_sum += static_cast<double>(*r.sync_eccentricity);
      pair_sum += static_cast<double>(*r.pair_diameter);
      s.max_sync_eccentricity =
          std::max(s.max_sync_eccentricity.value_or(0), *r.sync_eccentricity);
      s.max_pair_diameter = std::max(s.max_pair_diameter.value_or(0), *r.pair_diameter);
    }
  }
  if (measured) {
    s.mean_sync_eccentricity = ecc_sum / measured;
    s.mean_pair_diameter = pair_sum / measured;
  }
  return s;
}

inline void write_summary_header(std::ostream& out) {
  write_csv_line(out, {"method", "n", "trials", "unconverged", "primitive",
                       "reducible", "imprimitive", "frac_nonprimitive",
                       "frac_reducible", "frac_imprimitive",
                       "max_sync_eccentricity", "mean_sync_eccentricity",
                       "max_pair_diameter", "mean_pair_diameter"});
}

inline void write_summary_row(std::ostream& out, const SurveySummary& s) {
  write_csv_line(out, {std::to_string(s.method), std::to_string(s.n),
                       std::to_string(s.trials), std::to_string(s.unconverged),
                       std::to_string(s.primitive), std::to_string(s.reducible),
                       std::to_string(s.imprimitive), fixed(s.nonprimitive_fraction()),
                       fixed(s.fraction(s.reducible)), fixed(s.fraction(s.imprimitive)),
                       na_or(s.max_sync_eccentricity),
                       s.max_sync_eccentricity ? fixed(s.mean_sync_eccentricity, 3) : "NA",
                       na_or(s.max_pair_diameter),
                       s.max_pair_diameter ? fixed(s.mean_pair_diameter, 3) : "NA"});
}

/// Trial count of the full-scale survey at dimension n.
inline std::size_t full_scale_trials(std::size_t n) { return 50 * n * n; }

// ---------------------------------------------------------------------------
// Random models

enum class RandomModel {
  PerturbedPermutations,  // m uniform permutations, one 0-entry flipped
  Bernoulli,              // m matrices with i.i.d. Bernoulli(p) entries
};

inline const char* to_string(RandomModel m) {
  return m == RandomModel::PerturbedPermutations ? "procedure1" : "bp";
}

struct RandomModelConfig {
  RandomModel model = RandomModel::PerturbedPermutations;
  std::size_t n = 100;
  std::size_t m = 2;
  double p = 0.0;  // Bernoulli only
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  bool exponent_bound = false;
  std::size_t threads = 0;
};

enum class ModelVerdict { Reducible, Imprimitive, Primitive, Undetermined };

/// Classification of an arbitrary binary set. Irreducibility is read off
/// the sum. Irreducible NZ sets go through is_primitive. Otherwise a
/// positive product is sought, either from the NZ matrices alone or by
/// column filling; if every matrix has a zero row (or every one a zero
/// column), all products do, so the set is not primitive.
inline ModelVerdict classify_binary_set(const MatrixSet& s) {
  if (!is_irreducible(s)) return ModelVerdict::Reducible;
  if (s.all_nz()) {
    return is_primitive(s).primitive() ? ModelVerdict::Primitive
                                       : ModelVerdict::Imprimitive;
  }
  auto has_zero_line = [](const BinaryMatrix& m) {
    for (std::size_t i = 0; i < m.n(); ++i) {
      if (m.row_count(i) == 0) return true;
    }
    return false;
  };
  bool all_zero_row = true, all_zero_col = true;
  std::vector<BinaryMatrix> nz;
  for (const auto& m : s) {
    all_zero_row = all_zero_row && has_zero_line(m);
    all_zero_col = all_zero_col && has_zero_line(m.transposed());
    if (is_nz(m)) nz.push_back(m);
  }
  if (all_zero_row || all_zero_col) return ModelVerdict::Imprimitive;
  if (!nz.empty()) {
    const MatrixSet sub(std::move(nz));
    if (is_irreducible(sub) && is_primitive(sub).primitive()) {
      return ModelVerdict::Primitive;
    }
  }
  if (greedy_positive_product_length(s)) return ModelVerdict::Primitive;
  return ModelVerdict::Undetermined;
}

struct RandomModelRow {
  RandomModel model = RandomModel::PerturbedPermutations;
  std::size_t n = 0;
  std::size_t m = 0;
  double p = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t primitive = 0;
  std::size_t reducible = 0;
  std::size_t imprimitive = 0;
  std::size_t undetermined = 0;
  /// Column-filling product lengths over primitive trials, when requested.
  std::optional<std::size_t> max_product_length;
  std::optional<double> mean_product_length;

  double fraction(std::size_t count) const {
    return trials ? static_cast<double>(count) / trials : 0.0;
  }
};

inline RandomModelRow run_random_model(const RandomModelConfig& cfg) {
  if (cfg.n < 2 || cfg.m < 2) throw InvalidInput("need n >= 2 and m >= 2");
  check_dimension(cfg.n);
  if (cfg.model == RandomModel::Bernoulli && !(cfg.p >= 0.0 && cfg.p <= 1.0)) {
    throw InvalidInput("p must lie in [0, 1]");
  }
  std::vector<ModelVerdict> verdicts(cfg.trials);
  std::vector<std::optional<std::size_t>> lengths(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
    Rng rng = Rng::for_trial(cfg.seed, t);
    const MatrixSet s = cfg.model == RandomModel::Bernoulli
                            ? random_binary_set(cfg.n, cfg.m, cfg.p, rng)
                            : sample_perturbed_permutation_set(cfg.n, cfg.m, rng);
    verdicts[t] = classify_binary_set(s);
    if (cfg.exponent_bound && verdicts[t] == ModelVerdict::Primitive) {
      lengths[t] = greedy_positive_product_length(s);
    }
  });
  RandomModelRow row;
  row.model = cfg.model;
  row.n = cfg.n;
  row.m = cfg.m;
  row.p = cfg.model == RandomModel::Bernoulli ? cfg.p : 0.0;
  row.trials = cfg.trials;
  row.seed = cfg.seed;
  std::size_t sum = 0, found = 0;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    switch (verdicts[t]) {
      case ModelVerdict::Primitive:
        ++row.primitive;
        break;
      case ModelVerdict::Reducible:
        ++row.reducible;
        break;
      case ModelVerdict::Imprimitive:
        ++row.imprimitive;
        break;
      case ModelVerdict::Undetermined:
        ++row.undetermined;
        break;
    }
    if (lengths[t]) {
      ++found;
      sum += *lengths[t];
      row.max_product_length = std::max(row.max_product_length.value_or(0), *lengths[t]);
    }
  }
  if (found) row.mean_product_length = static_cast<double>(sum) / found;
  return row;
}

inline void write_random_model_header(std::ostream& out) {
  write_csv_line(out, {"model", "n", "m", "p", "trials", "seed", "primitive_count",
                       "reducible_count", "imprimitive_count", "undetermined_count",
                       "frac_primitive", "frac_reducible", "frac_imprimitive",
                       "max_product_length", "mean_product_length"});
}

inline void write_random_model_row(std::ostream& out, const RandomModelRow& r) {
  write_csv_line(
      out, {to_string(r.model), std::to_string(r.n), std::to_string(r.m),
            r.model == RandomModel::Bernoulli ? fixed(r.p, 9) : "NA",
            std::to_string(r.trials), std::to_string(r.seed),
            std::to_string(r.primitive), std::to_string(r.reducible),
            std::to_string(r.imprimitive), std::to_string(r.undetermined),
            fixed(r.fraction(r.primitive)), fixed(r.fraction(r.reducible)),
            fixed(r.fraction(r.imprimitive)), na_or(r.max_product_length),
            r.mean_product_length ? fixed(*r.mean_product_length, 3) : "NA"});
}

}  // namespace synchro
