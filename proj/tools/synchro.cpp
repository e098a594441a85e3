#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "synchro/json_io.hpp"
#include "synchro/synchro.hpp"

namespace {

using namespace synchro;
using Json = nlohmann::json;

struct Io {
  std::string in = "-";
  std::string out = "-";
};

void add_io(CLI::App* cmd, Io& io, bool input) {
  if (input) cmd->add_option("--in", io.in, "Input JSON file, - for stdin");
  cmd->add_option("--out", io.out, "Output file, - for stdout");
}

Json read_json(const std::string& path) {
  if (path == "-") return json_io::parse(std::cin);
  std::ifstream f(path);
  if (!f) throw InvalidInput("cannot open " + path);
  return json_io::parse(f);
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw InvalidInput("cannot write " + path);
  f << text;
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump() + "\n"); }

/// Automaton commands accept an automaton, or a set whose associated
/// automaton is then used.
Automaton read_automaton(const std::string& path) {
  const Json j = read_json(path);
  if (j.is_object() && j.contains("letters")) return json_io::automaton_from_json(j);
  return associated_automaton(json_io::set_from_json(j));
}

std::string optional_line(const std::optional<std::size_t>& v) {
  return (v ? std::to_string(*v) : std::string("NA")) + "\n";
}

/// Prime factors of n, largest first.
std::vector<std::size_t> factorize(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      out.push_back(p);
      n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  std::sort(out.rbegin(), out.rend());
  return out;
}

ExtractMethod parse_extract(const std::string& s) {
  if (s == "random" || s == "2") return ExtractMethod::Random;
  if (s == "first" || s == "3") return ExtractMethod::Deterministic;
  throw InvalidInput("extraction method must be random|first (or 2|3)");
}

FamilyKind parse_kind(const std::string& s) {
  if (s == "E") return FamilyKind::E;
  if (s == "Ep") return FamilyKind::EPrime;
  if (s == "O") return FamilyKind::O;
  if (s == "Op") return FamilyKind::OPrime;
  throw InvalidInput("kind must be E, Ep, O or Op");
}

struct GenOptions {
  Io io;
  std::string config;
  std::vector<std::size_t> primes;
  std::size_t t1 = 1000;
  std::string method = "first";
  std::uint64_t seed = 0;
};

GeneratorConfig generator_config(const GenOptions& o) {
  GeneratorConfig cfg;
  cfg.primes = o.primes;
  cfg.t1 = o.t1;
  cfg.method = parse_extract(o.method);
  cfg.seed = o.seed;
  if (!o.config.empty()) {
    const Json j = read_json(o.config);
    if (!j.is_object()) throw InvalidInput("config must be a JSON object");
    try {
      if (j.contains("primes")) cfg.primes = j.at("primes").get<std::vector<std::size_t>>();
      if (j.contains("t1")) cfg.t1 = j.at("t1").get<std::size_t>();
      if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
      if (j.contains("method")) {
        const Json& m = j.at("method");
        cfg.method = parse_extract(m.is_string() ? m.get<std::string>() : m.dump());
      }
    } catch (const nlohmann::json::exception& e) {
      throw InvalidInput(std::string("bad config: ") + e.what());
    }
  }
  if (cfg.primes.empty()) throw InvalidInput("no prime factors given (--primes)");
  return cfg;
}

struct SurveyOptions {
  std::string out = "-";
  std::vector<int> methods{1, 2, 3};
  std::vector<std::size_t> primes;
  std::vector<std::size_t> n_list;
  std::size_t trials = 2000;
  bool full_scale = false;
  std::size_t t1 = 1000;
  std::uint64_t seed = 12345;
  std::size_t method1_letters = 0;
  std::size_t threads = 0;
  std::string format = "csv";
  bool summary = false;
  bool timing = false;
  bool audit_full = false;
};

Json row_json(const SurveyRow& r, bool timing) {
  Json j{{"method", r.method},
         {"n", r.n},
         {"trial", r.trial},
         {"seed", r.seed},
         {"verdict", to_string(r.verdict)},
         {"minimal", r.minimal ? Json(*r.minimal) : Json(nullptr)},
         {"sync_eccentricity", r.sync_eccentricity ? Json(*r.sync_eccentricity) : Json(nullptr)},
         {"pair_diameter", r.pair_diameter ? Json(*r.pair_diameter) : Json(nullptr)},
         {"letters", r.letters ? Json(r.letters) : Json(nullptr)},
         {"audited", r.audited}};
  if (timing) j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

Json summary_json(const SurveySummary& s) {
  return Json{{"method", s.method},
              {"n", s.n},
              {"trials", s.trials},
              {"unconverged", s.unconverged},
              {"primitive", s.primitive},
              {"reducible", s.reducible},
              {"imprimitive", s.imprimitive},
              {"frac_nonprimitive", s.nonprimitive_fraction()},
              {"frac_reducible", s.fraction(s.reducible)},
              {"frac_imprimitive", s.fraction(s.imprimitive)},
              {"max_sync_eccentricity",
               s.max_sync_eccentricity ? Json(*s.max_sync_eccentricity) : Json(nullptr)},
              {"mean_sync_eccentricity", s.mean_sync_eccentricity},
              {"max_pair_diameter",
               s.max_pair_diameter ? Json(*s.max_pair_diameter) : Json(nullptr)},
              {"mean_pair_diameter", s.mean_pair_diameter}};
}

void run_survey_command(const SurveyOptions& o) {
  if (o.format != "csv" && o.format != "json") throw InvalidInput("format must be csv or json");
  std::vector<std::vector<std::size_t>> factorizations;
  if (!o.primes.empty()) {
    if (!o.n_list.empty()) throw InvalidInput("give either --primes or --n-list");
    factorizations.push_back(o.primes);
  } else {
    const std::vector<std::size_t> ns = o.n_list.empty() ? std::vector<std::size_t>{12, 20, 30}
                                                         : o.n_list;
    for (std::size_t n : ns) {
      if (n < 2) throw InvalidInput("every n must be >= 2");
      factorizations.push_back(factorize(n));
    }
  }

  std::ostringstream csv;
  Json rows_json = Json::array(), summaries_json = Json::array();
  if (o.format == "csv") {
    if (o.summary) {
      write_summary_header(csv);
    } else {
      write_survey_header(csv, o.timing);
    }
  }
  for (const auto& primes : factorizations) {
    for (int method : o.methods) {
      if (method < 1 || method > 3) throw InvalidInput("methods are 1, 2 and 3");
      SurveyConfig cfg;
      cfg.method = static_cast<SurveyMethod>(method);
      cfg.primes = primes;
      cfg.trials = o.full_scale ? full_scale_trials(cfg.n()) : o.trials;
      cfg.seed = o.seed;
      cfg.t1 = o.t1;
      cfg.uniform_letters = o.method1_letters;
      cfg.audit_full = o.audit_full;
      cfg.threads = o.threads;
      const auto rows = run_survey(cfg);
      if (o.format == "csv") {
        if (o.summary) {
          write_summary_row(csv, summarize(rows));
        } else {
          write_survey_rows(csv, rows, o.timing);
        }
      } else {
        for (const auto& r : rows) rows_json.push_back(row_json(r, o.timing));
        summaries_json.push_back(summary_json(summarize(rows)));
      }
    }
  }
  if (o.format == "csv") {
    write_text(o.out, csv.str());
  } else {
    Json out{{"summary", summaries_json}};
    if (!o.summary) out["rows"] = rows_json;
    write_json(o.out, out);
  }
}

struct RandModelOptions {
  std::string out = "-";
  std::string model = "procedure1";
  std::size_t n = 100;
  std::size_t m = 2;
  std::optional<double> p;
  std::optional<double> np_offset;
  std::optional<double> two_np_offset;
  std::size_t trials = 200;
  std::uint64_t seed = 12345;
  bool exponent_bound = false;
  std::size_t threads = 0;
  std::string format = "csv";
};

void run_randmodel_command(const RandModelOptions& o) {
  RandomModelConfig cfg;
  if (o.model == "procedure1") {
    cfg.model = RandomModel::PerturbedPermutations;
  } else if (o.model == "bp") {
    cfg.model = RandomModel::Bernoulli;
  } else {
    throw InvalidInput("model must be procedure1 or bp");
  }
  cfg.n = o.n;
  cfg.m = o.m;
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.exponent_bound = o.exponent_bound;
  cfg.threads = o.threads;
  if (cfg.model == RandomModel::Bernoulli) {
    const int given = o.p.has_value() + o.np_offset.has_value() + o.two_np_offset.has_value();
    if (given != 1) throw InvalidInput("bp needs exactly one of --p, --np-offset, --2np-offset");
    const double n = static_cast<double>(o.n);
    if (o.p) cfg.p = *o.p;
    if (o.np_offset) cfg.p = (std::log(n) + *o.np_offset) / n;
    if (o.two_np_offset) cfg.p = (std::log(n) + *o.two_np_offset) / (2 * n);
    // An offset below -log n asks for a negative probability.
    if (!o.p) cfg.p = std::clamp(cfg.p, 0.0, 1.0);
  }
  const RandomModelRow row = run_random_model(cfg);
  if (o.format == "json") {
    write_json(o.out, Json{{"model", to_string(row.model)},
                           {"n", row.n},
                           {"m", row.m},
                           {"p", row.model == RandomModel::Bernoulli ? Json(row.p) : Json(nullptr)},
                           {"trials", row.trials},
                           {"seed", row.seed},
                           {"primitive_count", row.primitive},
                           {"reducible_count", row.reducible},
                           {"imprimitive_count", row.imprimitive},
                           {"undetermined_count", row.undetermined},
                           {"max_product_length", row.max_product_length
                                                      ? Json(*row.max_product_length)
                                                      : Json(nullptr)},
                           {"mean_product_length", row.mean_product_length
                                                       ? Json(*row.mean_product_length)
                                                       : Json(nullptr)}});
    return;
  }
  if (o.format != "csv") throw InvalidInput("format must be csv or json");
  std::ostringstream csv;
  write_random_model_header(csv);
  write_random_model_row(csv, row);
  write_text(o.out, csv.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Primitive matrix sets and synchronizing automata"};
  app.require_subcommand(1);

  Io check_io;
  auto* check = app.add_subcommand("check", "Classify a matrix set: primitive, imprimitive or reducible");
  add_io(check, check_io, true);

  Io aut_io;
  bool aut_transpose = false, aut_minimize = false;
  auto* automaton = app.add_subcommand("automaton", "Associated automaton of a matrix set");
  add_io(automaton, aut_io, true);
  automaton->add_flag("--transpose", aut_transpose, "Use the transposed set");
  automaton->add_flag("--minimize", aut_minimize,
                      "Drop one letter so a minimally primitive perturbed set gives a "
                      "minimally synchronizing automaton");

  Io diam_io;
  bool diam_pair = false;
  auto* diameter = app.add_subcommand("diameter", "Square-graph synchronization eccentricity");
  add_io(diameter, diam_io, true);
  diameter->add_flag("--pair", diam_pair, "Print the all-pairs diameter instead");

  Io rt_io;
  bool rt_word = false;
  std::size_t rt_cap = kDefaultSubsetCap;
  auto* rt = app.add_subcommand("rt", "Exact reset threshold by subset search (n <= 64)");
  add_io(rt, rt_io, true);
  rt->add_flag("--word", rt_word, "Print a shortest reset word instead");
  rt->add_option("--cap", rt_cap, "Maximum number of visited subsets");

  Io exp_io;
  std::size_t exp_max_length = 100000, exp_cap = kDefaultProductCap;
  auto* exp = app.add_subcommand("exp", "Exponent of a matrix set by product search");
  add_io(exp, exp_io, true);
  exp->add_option("--max-length", exp_max_length, "Longest product length searched");
  exp->add_option("--cap", exp_cap, "Maximum number of distinct products kept");

  Io fam_io;
  std::string fam_kind, fam_shape = "path", fam_set_out;
  std::size_t fam_n = 0, fam_i = 0, fam_j = 0;
  auto* family = app.add_subcommand("family", "Three-letter automata with quadratic reset threshold");
  add_io(family, fam_io, false);
  family->add_option("--kind", fam_kind, "E, Ep, O or Op");
  family->add_option("--n", fam_n, "Number of states")->required();
  family->add_option("--i", fam_i, "Merged state, 1-based (with --j instead of --kind)");
  family->add_option("--j", fam_j, "Target of the merge, 1-based");
  family->add_option("--shape", fam_shape, "path or cycle, for --i/--j");
  family->add_option("--set-out", fam_set_out, "Also write the matrix-set form here");

  GenOptions gen_opts;
  auto* gen = app.add_subcommand("gen", "Randomized construction of a minimally primitive set");
  add_io(gen, gen_opts.io, false);
  gen->add_option("--config", gen_opts.config, "JSON config with primes, t1, method, seed");
  gen->add_option("--primes", gen_opts.primes, "Factors q1,...,qm, n is their product")
      ->delimiter(',');
  gen->add_option("--t1", gen_opts.t1, "Partition draws allowed per factor");
  gen->add_option("--method", gen_opts.method, "Extraction: random|first (or 2|3)");
  gen->add_option("--seed", gen_opts.seed, "Random seed");

  SurveyOptions sv;
  auto* survey = app.add_subcommand("survey", "Monte-Carlo comparison of the three methods");
  survey->add_option("--out", sv.out, "Output file, - for stdout");
  survey->add_option("--method", sv.methods, "Methods to run (1,2,3)")->delimiter(',');
  survey->add_option("--primes", sv.primes, "Factors of a single n")->delimiter(',');
  survey->add_option("--n-list", sv.n_list, "Dimensions, each factored into primes")
      ->delimiter(',');
  survey->add_option("--trials", sv.trials, "Trials per (method, n)");
  survey->add_flag("--full-scale", sv.full_scale, "Use 50 n^2 trials per n");
  survey->add_option("--t1", sv.t1, "Partition draws allowed per factor");
  survey->add_option("--seed", sv.seed, "Base seed; trial t uses seed xor t");
  survey->add_option("--method1-letters", sv.method1_letters,
                     "Alphabet of method 1 (default: number of factors)");
  survey->add_option("--threads", sv.threads, "Worker threads, 0 for all cores");
  survey->add_option("--format", sv.format, "csv or json");
  survey->add_flag("--summary", sv.summary, "Write one aggregate row per (method, n)");
  survey->add_flag("--timing", sv.timing, "Add the elapsed_ms column");
  survey->add_flag("--audit-full", sv.audit_full, "Audit every primitive row");

  RandModelOptions rm;
  auto* randmodel = app.add_subcommand("randmodel", "Primitivity statistics of random matrix sets");
  randmodel->add_option("--out", rm.out, "Output file, - for stdout");
  randmodel->add_option("--model", rm.model, "procedure1 or bp");
  randmodel->add_option("--n", rm.n, "Dimension");
  randmodel->add_option("--m", rm.m, "Matrices per set");
  randmodel->add_option("--p", rm.p, "Entry probability (bp)");
  randmodel->add_option("--np-offset", rm.np_offset, "Set p so that np - log n equals this");
  randmodel->add_option("--2np-offset", rm.two_np_offset,
                        "Set p so that 2np - log n equals this (clamped at 0)");
  randmodel->add_option("--trials", rm.trials, "Number of sets");
  randmodel->add_option("--seed", rm.seed, "Base seed");
  randmodel->add_flag("--exponent-bound", rm.exponent_bound,
                      "Report column-filling product lengths");
  randmodel->add_option("--threads", rm.threads, "Worker threads, 0 for all cores");
  randmodel->add_option("--format", rm.format, "csv or json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*check) {
      const MatrixSet s = json_io::set_from_json(read_json(check_io.in));
      write_json(check_io.out, json_io::to_json(is_primitive(s)));
    } else if (*automaton) {
      MatrixSet s = json_io::set_from_json(read_json(aut_io.in));
      if (aut_transpose) s = s.transposed();
      Automaton a = associated_automaton(s);
      if (aut_minimize) a = minimize_associated_automaton(a, s);
      write_json(aut_io.out, json_io::to_json(a));
    } else if (*diameter) {
      const Automaton a = read_automaton(diam_io.in);
      if (diam_pair) {
        write_text(diam_io.out, std::to_string(diameters(a).pair_diameter) + "\n");
      } else {
        write_text(diam_io.out, optional_line(sync_eccentricity(a)));
      }
    } else if (*rt) {
      const Automaton a = read_automaton(rt_io.in);
      if (rt_word) {
        const auto w = shortest_reset_word(a, rt_cap);
        write_json(rt_io.out, w ? Json(*w) : Json(nullptr));
      } else {
        write_text(rt_io.out, optional_line(reset_threshold_exact(a, rt_cap)));
      }
    } else if (*exp) {
      const MatrixSet s = json_io::set_from_json(read_json(exp_io.in));
      write_text(exp_io.out, optional_line(exponent_bruteforce(s, exp_max_length, exp_cap)));
    } else if (*family) {
      Automaton a(1, {{0}});
      std::optional<MatrixSet> set;
      if (!fam_kind.empty()) {
        if (fam_i || fam_j) throw InvalidInput("give either --kind or --i/--j");
        const FamilyKind kind = parse_kind(fam_kind);
        a = build_family(kind, fam_n);
        set = build_family_set(kind, fam_n);
      } else {
        if (fam_i == 0 || fam_j == 0) throw InvalidInput("give --kind, or --i and --j");
        PairShape shape;
        if (fam_n % 2 == 1) {
          shape = PairShape::PathOdd;
        } else if (fam_shape == "path") {
          shape = PairShape::PathEven;
        } else if (fam_shape == "cycle") {
          shape = PairShape::CycleEven;
        } else {
          throw InvalidInput("shape must be path or cycle");
        }
        a = build_merge_automaton(shape, fam_n, fam_i - 1, fam_j - 1);
        set = build_merge_set(shape, fam_n, fam_i - 1, fam_j - 1);
      }
      write_json(fam_io.out, json_io::to_json(a));
      if (!fam_set_out.empty()) write_json(fam_set_out, json_io::to_json(*set));
    } else if (*gen) {
      const GeneratorOutcome out = minimal_primitive_search(generator_config(gen_opts));
      if (!out.converged) throw CapExhausted("construction did not converge within t1 draws");
      std::cerr << "verdict: " << to_string(out.verdict->cls) << "\n";
      write_json(gen_opts.io.out, json_io::to_json(*out.set));
    } else if (*survey) {
      run_survey_command(sv);
    } else if (*randmodel) {
      run_randmodel_command(rm);
    }
  } catch (const CapExhausted& e) {
    std::cerr << "cap exhausted: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
