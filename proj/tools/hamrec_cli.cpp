// hamrec: batch driver for the extractor, adversary and statistics modules.

#include <CLI11.hpp>
#include <json.hpp>

#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hamrec/acceptance.hpp"
#include "hamrec/adversary.hpp"
#include "hamrec/bitio.hpp"
#include "hamrec/budget.hpp"
#include "hamrec/error.hpp"
#include "hamrec/extractor.hpp"
#include "hamrec/hamming.hpp"
#include "hamrec/keylemma.hpp"
#include "hamrec/rng.hpp"
#include "hamrec/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hamrec;

namespace {

struct Common {
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  std::string format = "json";
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> n;
  std::optional<std::string> budget;
  std::optional<std::string> schedule_file;
  std::optional<std::string> input;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  template <class... T>
  void add(const T&... cells) {
    std::vector<std::string> row;
    (row.push_back(cell(cells)), ...);
    rows.push_back(std::move(row));
  }

  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  static std::string cell(bool b) { return b ? "true" : "false"; }
  static std::string cell(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
  template <class I>
    requires std::is_integral_v<I>
  static std::string cell(I v) {
    return std::to_string(v);
  }
};

struct Outcome {
  json result;
  Table table;
  int exit_code = 0;
};

json config_of(const CLI::App& app) {
  json cfg = json::object();
  for (const CLI::Option* opt : app.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help" || name == "config" || name == "version") continue;
    if (opt->count() == 0) {
      if (!opt->get_default_str().empty()) cfg[name] = opt->get_default_str();
      continue;
    }
    const auto& res = opt->results();
    cfg[name] = res.size() == 1 ? json(res.front()) : json(res);
  }
  return cfg;
}

BitString input_or_random(const Common& c, std::uint64_t default_length) {
  if (c.input) return bitio::load(*c.input);
  auto rng = trial_rng(c.seed, 0);
  return BitString::random(c.n.value_or(default_length), rng);
}

BudgetFunction budget_or(const Common& c, const std::string& fallback) {
  return BudgetFunction::parse(c.budget.value_or(fallback));
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::config, "cannot write " + path.string());
  out << text;
}

std::string render_csv(const Table& t, const json& header) {
  std::ostringstream out;
  out << "# command=" << header["command"].get<std::string>() << " version=" << header["version"].get<std::string>()
      << " seed=" << header["seed"].get<std::uint64_t>() << " config=" << header["config"].dump() << '\n';
  for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
  return out.str();
}

// ---- subcommands ----

Outcome run_extract(const Common& c, std::uint64_t blocks) {
  BlockSchedule sched;
  if (c.schedule_file) {
    std::ifstream in(*c.schedule_file);
    require(static_cast<bool>(in), ErrorKind::config, "cannot read schedule file " + *c.schedule_file);
    std::stringstream text;
    text << in.rdbuf();
    sched = BlockSchedule::parse_text(text.str());
  } else {
    sched = make_schedule(budget_or(c, "power:1/6"), blocks);
  }
  const BitString x = input_or_random(c, sched.total_length());
  const ExtractionTrace t = c.budget ? extract(x, sched, BudgetFunction::parse(*c.budget)) : extract(x, sched);
  Outcome o;
  o.table.header = {"k", "start", "end", "odd_end", "margin", "output", "robust"};
  json blocks_json = json::array();
  for (std::size_t k = 0; k < sched.size(); ++k) {
    const Block& b = sched[k];
    o.table.add(k, b.start, b.end, b.odd_end(), t.margins[k], static_cast<bool>(t.outputs[k]), static_cast<bool>(t.robust[k]));
    blocks_json.push_back({b.start, b.end});
  }
  std::vector<bool> robust(t.robust.begin(), t.robust.end());
  o.result = {{"input_length", x.size()},
              {"blocks", blocks_json},
              {"outputs", t.outputs.to_string()},
              {"margins", t.margins},
              {"robust", robust}};
  return o;
}

Outcome run_corrupt(const Common& c, const std::string& block_budget, std::uint64_t stages, std::uint64_t blocks,
                    double threshold) {
  const BudgetFunction p = budget_or(c, "power:2/3");
  BlockSchedule all_blocks;
  if (c.schedule_file) {
    std::ifstream in(*c.schedule_file);
    require(static_cast<bool>(in), ErrorKind::config, "cannot read schedule file " + *c.schedule_file);
    std::stringstream text;
    text << in.rdbuf();
    all_blocks = BlockSchedule::parse_text(text.str());
  } else {
    all_blocks = make_schedule(BudgetFunction::parse(block_budget), blocks);
  }
  const AdversarySchedule adv = make_adversary_schedule(all_blocks, p, stages, threshold);
  BlockSchedule sched = all_blocks.prefix(adv.blocks_used);
  for (std::size_t s = 0; s < adv.targets.size(); ++s) sched.set_stage(adv.targets[s], s);

  const BitString x = input_or_random(c, sched.total_length());
  CorruptionReport rep = corrupt(x, sched, adv);
  const fs::path y_path = fs::path(c.out_dir) / "corrupt_y.bin";
  bitio::save(y_path, rep.y);
  rep.y_file = y_path.filename().string();
  write_file(fs::path(c.out_dir) / "corrupt_schedule.txt", sched.to_text());

  const ExtractionTrace after = extract(rep.y, sched);
  bool re_extract_ok = true;
  for (const auto& st : rep.stages) {
    if (st.forced && after.outputs[st.target]) re_extract_ok = false;
  }
  const std::vector<std::uint64_t> checkpoints(adv.stage_bounds.begin() + 1, adv.stage_bounds.end());
  const bool verified = verify_similarity(rep, x, p, checkpoints);
  const GrowthReport growth = growth_conditions(adv);

  Outcome o;
  o.result = to_json(rep);
  o.result["stage_bounds"] = adv.stage_bounds;
  o.result["re_extraction_ok"] = re_extract_ok;
  o.result["verify_similarity"] = verified;
  o.result["growth_ratio"] = growth.ratios;
  std::vector<bool> tele(growth.telescoping.begin(), growth.telescoping.end());
  o.result["telescoping"] = tele;
  o.table.header = {"s", "window_start", "window_end", "target", "cost", "cumulative", "budget", "forced", "case"};
  for (std::size_t s = 0; s < rep.stages.size(); ++s) {
    const auto& st = rep.stages[s];
    o.table.add(st.stage, st.window.start, st.window.end, st.target, st.cost, rep.cumulative[s],
                p(st.window.size()), st.forced, st.case_id);
  }
  if (!re_extract_ok || !verified) o.exit_code = 1;
  return o;
}

Outcome run_harper(const Common& c, std::uint64_t ceiling) {
  const std::uint64_t n = c.n.value_or(3);
  Outcome o;
  o.table.header = {"n", "size", "d", "exhaustive_min", "sphere_value", "equal"};
  json rows = json::array();
  bool all_equal = true;
  for (std::uint64_t size = 0; size <= (std::uint64_t{1} << std::min<std::uint64_t>(n, 63)); ++size) {
    for (std::uint64_t d = 0; d <= n; ++d) {
      const HarperResult h = harper_min_neighborhood(n, size, d, ceiling);
      const bool eq = h.exhaustive_min == h.sphere_value;
      all_equal = all_equal && eq;
      o.table.add(n, size, d, h.exhaustive_min, h.sphere_value, eq);
      rows.push_back({{"size", size}, {"d", d}, {"exhaustive_min", h.exhaustive_min}, {"sphere_value", h.sphere_value}});
    }
  }
  o.result = {{"n", n}, {"all_equal", all_equal}, {"rows", rows}};
  return o;
}

std::vector<std::uint64_t> parse_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(item, &used));
      require(used == item.size(), ErrorKind::config, "bad list entry '" + item + "'");
    } catch (const std::logic_error&) {
      fail(ErrorKind::config, "bad list entry '" + item + "'");
    }
  }
  return out;
}

Outcome run_clt(const Common& c, const std::string& list) {
  std::vector<std::uint64_t> ns = c.n ? std::vector<std::uint64_t>{*c.n} : parse_list(list);
  Outcome o;
  o.table.header = {"n", "gap", "bound", "ok"};
  json rows = json::array();
  bool ok = true;
  for (auto n : ns) {
    const double gap = binomial_cdf_gap(n);
    const double bound = berry_esseen_bound(n);
    ok = ok && gap <= bound;
    o.table.add(n, gap, bound, gap <= bound);
    rows.push_back({{"n", n}, {"gap", gap}, {"bound", bound}});
  }
  o.result = {{"all_within_bound", ok}, {"rows", rows}};
  return o;
}

Outcome run_smallball(const Common& c, std::uint64_t n_min) {
  const BudgetFunction g = budget_or(c, "power:1/3");
  const std::uint64_t n_max = c.n.value_or(4096);
  Outcome o;
  o.table.header = {"n", "g", "exact", "exact_value", "bound", "ok"};
  json rows = json::array();
  bool ok = true;
  for (std::uint64_t n = std::max<std::uint64_t>(n_min, 1); n <= n_max; n *= 2) {
    const auto gn = static_cast<std::uint64_t>(g(n));
    const Dyadic exact = small_ball_probability(n, gn);
    const double bound = small_ball_bound(n, gn);
    const bool within = exact.to_double() <= bound;
    ok = ok && within;
    o.table.add(n, gn, exact.to_string(), exact.to_double(), bound, within);
    rows.push_back({{"n", n}, {"g", gn}, {"exact", exact.to_string()}, {"bound", bound}});
  }
  o.result = {{"budget", g.to_string()}, {"all_within_bound", ok}, {"rows", rows}};
  return o;
}

Outcome run_lil(const Common& c) {
  const std::uint64_t trials = c.trials.value_or(64);
  const std::uint64_t len = c.n.value_or(std::uint64_t{1} << 20);
  std::vector<std::uint64_t> samples;
  for (std::uint64_t n = 16; n <= len; n *= 2) samples.push_back(n);
  Outcome o;
  o.table.header = {"trial", "argmax_n", "max_statistic"};
  json per_trial = json::array();
  for (std::uint64_t t = 0; t < trials; ++t) {
    auto rng = trial_rng(c.seed, t);
    const LilScan scan = lil_scan(BitString::random(len, rng), 16, samples);
    json series = json::array();
    for (const auto& pt : scan.samples) series.push_back({pt.n, pt.statistic});
    per_trial.push_back({{"trial", t}, {"argmax_n", scan.max.n}, {"max", scan.max.statistic}, {"series", series}});
    o.table.add(t, scan.max.n, scan.max.statistic);
  }
  o.result = {{"length", len}, {"trials", per_trial}};
  return o;
}

Outcome run_weber(const Common& c, const std::string& kind) {
  const std::uint64_t n_max = c.n.value_or(20);
  require(n_max >= 1 && n_max <= 40, ErrorKind::domain, "weber: --n must be in [1, 40]");
  std::vector<std::uint64_t> nu;
  std::optional<std::uint64_t> threshold;
  if (kind == "naturals") {
    require(n_max <= 24, ErrorKind::resource, "weber: naturals limited to n <= 24");
    for (std::uint64_t j = 1; j <= (std::uint64_t{1} << n_max); ++j) nu.push_back(j);
  } else if (kind == "powers-of-4") {
    for (std::uint64_t v = 4; v <= (std::uint64_t{1} << n_max); v *= 4) nu.push_back(v);
  } else if (kind == "doubly-exponential") {
    for (std::uint64_t j = 0; (std::uint64_t{1} << j) <= n_max; ++j) nu.push_back(std::uint64_t{1} << (std::uint64_t{1} << j));
  } else if (kind == "sparse") {
    require(n_max <= 24, ErrorKind::resource, "weber: sparse re-verification limited to n <= 24");
    const SparseSubsequence s = sparse_subsequence([](std::uint64_t k) { return default_lambda(k); }, n_max);
    nu = s.nu;
    threshold = s.threshold;
  } else {
    fail(ErrorKind::config, "weber: unknown --nu '" + kind + "'");
  }
  const WeberSeries w = weber_series(nu, n_max);
  Outcome o;
  o.table.header = {"m", "p_m", "lambda"};
  json rows = json::array();
  for (std::uint64_t m = 1; m <= n_max; ++m) {
    const double lam = w.lambda(std::uint64_t{1} << m);
    o.table.add(m, w.p[m], lam);
    rows.push_back({{"m", m}, {"p", w.p[m]}, {"lambda", std::isfinite(lam) ? json(lam) : json(nullptr)}});
  }
  o.result = {{"nu_kind", kind}, {"nu_terms", nu.size()}, {"rows", rows}};
  if (kind != "naturals") o.result["nu"] = nu;
  if (threshold) o.result["threshold"] = *threshold;
  return o;
}

Dyadic parse_dyadic(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Dyadic(BigInt(std::stoull(text)), 0);
    const std::uint64_t num = std::stoull(text.substr(0, slash));
    const std::uint64_t den = std::stoull(text.substr(slash + 1));
    require(den != 0 && (den & (den - 1)) == 0, ErrorKind::config, "threshold denominator must be a power of two");
    return Dyadic(BigInt(num), static_cast<std::uint64_t>(std::countr_zero(den)));
  } catch (const std::logic_error&) {
    fail(ErrorKind::config, "bad threshold '" + text + "'");
  }
}

Outcome run_keylemma(const Common& c, const std::string& threshold) {
  const KeyLemmaReport rep = verify_key_lemma(c.n.value_or(8), c.trials.value_or(200), parse_dyadic(threshold), c.seed);
  Outcome o;
  o.result = to_json(rep);
  o.table.header = {"family", "size", "r", "d", "exact", "bound"};
  for (const auto& f : rep.families) {
    for (const auto& row : f.rows) o.table.add(f.label, f.size, f.r, row.d, row.exact.to_string(), row.bound.to_string());
  }
  if (rep.violations) o.exit_code = 1;
  return o;
}

Outcome run_select(const Common& c, const std::string& rule_name) {
  const SelectionRule rule = SelectionRule::named(rule_name);
  const BitString x = input_or_random(c, std::uint64_t{1} << 16);
  const FrequencyReport r = apply_selection(rule, x);
  Outcome o;
  o.table.header = {"rule", "length", "positions_examined", "ones_count", "relative_frequency"};
  o.table.add(rule.description, x.size(), r.positions_examined, r.ones_count,
              r.relative_frequency ? Table::cell(*r.relative_frequency) : std::string("undefined"));
  o.result = {{"rule", rule.description},
              {"length", x.size()},
              {"positions_examined", r.positions_examined},
              {"ones_count", r.ones_count},
              {"relative_frequency", r.relative_frequency ? json(*r.relative_frequency) : json(nullptr)},
              {"deviation_from_half", r.deviation_from_half()}};
  return o;
}

Outcome run_trace_refine(const Common& c) {
  std::vector<BitString> strings;
  if (c.input) {
    std::ifstream in(*c.input);
    require(static_cast<bool>(in), ErrorKind::config, "cannot read " + *c.input);
    strings = bitio::read_text(in);
  } else {
    auto rng = trial_rng(c.seed, 0);
    const std::uint64_t q = c.trials.value_or(4);
    for (std::uint64_t s = 0; s < q; ++s) strings.push_back(BitString::random(c.n.value_or(64), rng));
  }
  const Refinement r = majority_refinement(strings);
  Outcome o;
  std::vector<int> constants(r.constants.begin(), r.constants.end());
  o.result = {{"strings", strings.size()},
              {"length", strings.front().size()},
              {"positions", r.positions},
              {"constants", constants}};
  o.table.header = {"position"};
  for (auto p : r.positions) o.table.add(p);
  return o;
}

Outcome run_suite(const Common& c) {
  Outcome o;
  o.table.header = {"criterion", "pass", "title", "detail", "seconds"};
  json rows = json::array();
  acceptance::Options opt;
  opt.seed = c.seed;
  const auto results = acceptance::run_all(opt, [](const acceptance::Result& r) {
    std::cerr << acceptance::format_line(r) << std::endl;
  });
  for (const auto& r : results) {
    rows.push_back({{"criterion", r.id}, {"pass", r.pass}, {"title", r.title}, {"detail", r.detail}});
    std::string detail = r.detail;
    for (auto& ch : detail) {
      if (ch == ',') ch = ';';
    }
    o.table.add(r.id, r.pass, r.title, detail, r.seconds);
    if (!r.pass) o.exit_code = 1;
  }
  o.result = {{"criteria", rows}};
  return o;
}

int exit_code_for(ErrorKind kind) { return kind == ErrorKind::resource ? 3 : 2; }

void print_error(std::string_view kind, const std::string& message) {
  std::cerr << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hamrec: majority extractor, Hamming adversary and cube statistics"};
  app.set_version_flag("--version", std::string(HAMREC_VERSION));
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.fallthrough();
  app.set_config("--config", "", "Flat key=value configuration file");

  Common c;
  app.add_option("--seed", c.seed, "Root seed (64-bit)");
  app.add_option("--out-dir", c.out_dir, "Directory for report files");
  app.add_option("--format", c.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--trials", c.trials, "Trial count");
  app.add_option("--n", c.n, "Length or dimension");
  app.add_option("--budget", c.budget, "Budget token, e.g. power:2/3");
  app.add_option("--schedule-file", c.schedule_file, "Block schedule text file");
  app.add_option("--input", c.input, "Bitstream file (.bin packed, otherwise text)");

  auto* extract_cmd = app.add_subcommand("extract", "Majority extraction over a block schedule");
  std::uint64_t blocks = 6;
  extract_cmd->add_option("--blocks", blocks, "Blocks to generate when no schedule file is given");

  auto* corrupt_cmd = app.add_subcommand("corrupt", "Adversarial corruption against the extractor");
  std::string block_budget = "power:1/6";
  std::uint64_t stages = 4, corrupt_blocks = 12;
  double threshold = 1.0;
  corrupt_cmd->add_option("--block-budget", block_budget, "Budget g used to size extractor blocks");
  corrupt_cmd->add_option("--stages", stages, "Adversary stages");
  corrupt_cmd->add_option("--blocks", corrupt_blocks, "Candidate extractor blocks");
  corrupt_cmd->add_option("--threshold", threshold, "Required p(len)/sqrt(len) per stage window");

  auto* harper_cmd = app.add_subcommand("harper", "Exhaustive Harper check over all sizes and radii");
  std::uint64_t ceiling = kDefaultHarperCeiling;
  harper_cmd->add_option("--ceiling", ceiling, "Largest dimension searched exhaustively");

  auto* clt_cmd = app.add_subcommand("clt-check", "Binomial CDF gap against the Berry-Esseen bound");
  std::string clt_list = "10,100,1000,10000";
  clt_cmd->add_option("--n-list", clt_list, "Comma-separated n values (overridden by --n)");

  auto* small_cmd = app.add_subcommand("smallball", "Exact small-ball probability against its bound");
  std::uint64_t n_min = 16;
  small_cmd->add_option("--n-min", n_min, "Smallest n; doubles up to --n");

  auto* lil_cmd = app.add_subcommand("lil", "Iterated-logarithm statistic over random streams");

  auto* weber_cmd = app.add_subcommand("weber", "Weber statistics p_n and Lambda");
  std::string nu_kind = "sparse";
  weber_cmd->add_option("--nu", nu_kind, "naturals, powers-of-4, doubly-exponential or sparse");

  auto* key_cmd = app.add_subcommand("keylemma", "Ball containment against the shifted sphere tail");
  std::string key_threshold = "1/2";
  key_cmd->add_option("--threshold", key_threshold, "Dyadic bound on P(E) for sampled families");

  auto* select_cmd = app.add_subcommand("select", "Frequency of ones under a monotonic selection rule");
  std::string rule = "parity";
  select_cmd->add_option("--rule", rule, "all, even or parity");

  auto* refine_cmd = app.add_subcommand("trace-refine", "Iterated majority refinement");
  auto* suite_cmd = app.add_subcommand("suite", "Run every acceptance criterion");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("config", e.what());
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    Outcome o;
    if (sub == extract_cmd) o = run_extract(c, blocks);
    else if (sub == corrupt_cmd) {
      fs::create_directories(c.out_dir);
      o = run_corrupt(c, block_budget, stages, corrupt_blocks, threshold);
    } else if (sub == harper_cmd) o = run_harper(c, ceiling);
    else if (sub == clt_cmd) o = run_clt(c, clt_list);
    else if (sub == small_cmd) o = run_smallball(c, n_min);
    else if (sub == lil_cmd) o = run_lil(c);
    else if (sub == weber_cmd) o = run_weber(c, nu_kind);
    else if (sub == key_cmd) o = run_keylemma(c, key_threshold);
    else if (sub == select_cmd) o = run_select(c, rule);
    else if (sub == refine_cmd) o = run_trace_refine(c);
    else if (sub == suite_cmd) o = run_suite(c);

    json cfg = config_of(app);
    cfg.update(config_of(*sub));
    json report = {{"command", sub->get_name()},
                   {"version", HAMREC_VERSION},
                   {"seed", c.seed},
                   {"config", cfg},
                   {"result", o.result}};
    fs::create_directories(c.out_dir);
    std::string text;
    if (c.format == "csv") {
      text = render_csv(o.table, report);
    } else {
      text = report.dump(2) + "\n";
    }
    write_file(fs::path(c.out_dir) / (sub->get_name() + (c.format == "csv" ? ".csv" : ".json")), text);
    std::cout << text;
    return o.exit_code;
  } catch (const Error& e) {
    print_error(to_string(e.kind()), e.what());
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    print_error("config", e.what());
    return 2;
  }
}
