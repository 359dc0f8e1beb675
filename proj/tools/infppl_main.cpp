// infppl: run interval-conditioned probabilistic programs from the bundled
// catalog, sweep interval widths down toward zero, and compare runs across
// examples or modes.
//
// Exit codes: 0 success, 2 unknown example, 3 undefined estimate / zero
// accepted trials / rejection at infinitesimal width, 4 flag validation.
//
// All output on stdout is deterministic for fixed flags; wall-clock timing
// goes to stderr so repeated invocations stay byte-identical.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "infppl/infppl.hpp"

namespace {

using infppl::Example;
using infppl::InfNum;
using infppl::Mode;
using infppl::RunOptions;
using infppl::RunResult;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitUnknownExample = 2;
constexpr int kExitNoEstimate = 3;
constexpr int kExitBadFlags = 4;

int fail_flags(const std::string& message) {
  std::fprintf(stderr, "infppl: %s\n", message.c_str());
  return kExitBadFlags;
}

std::optional<Mode> parse_mode(const std::string& token) {
  if (token == "weighted") return Mode::kWeighted;
  if (token == "density") return Mode::kDensity;
  if (token == "rejection") return Mode::kRejection;
  return std::nullopt;
}

// A width is the token `eps` (one epsilon) or a positive decimal.  strtod
// rather than stod so that subnormal widths parse instead of throwing; they
// are legal, they just underflow the weights.
std::optional<InfNum> parse_width(const std::string& token) {
  if (token == "eps") return InfNum(1.0, 1);
  if (token.empty()) return std::nullopt;
  char* end = nullptr;
  const double w = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size() || !std::isfinite(w) || !(w > 0))
    return std::nullopt;
  return InfNum(w, 0);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t comma = s.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

// Worker thread count comes from the environment so the flag surface stays
// fixed; estimates are identical at any setting.
std::optional<int> threads_from_env() {
  const char* s = std::getenv("INFPPL_THREADS");
  if (s == nullptr || *s == '\0') return 1;
  char* end = nullptr;
  const long v = std::strtol(s, &end, 10);
  if (end == nullptr || *end != '\0' || v < 1 || v > 1024) return std::nullopt;
  return static_cast<int>(v);
}

// Either stdout or --output FILE, written in one shot.
int emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return 0;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) return fail_flags("cannot open output file: " + path);
  f << text;
  return f.good() ? 0 : fail_flags("cannot write output file: " + path);
}

struct RunRequest {
  const Example* example = nullptr;
  Mode mode = Mode::kWeighted;
  InfNum width{1.0, 1};
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
};

RunResult execute(const RunRequest& req, int threads, bool keep_trials) {
  // Rejection cannot condition on an infinitesimal interval regardless of
  // whether this particular program ever opens one; fail up front.
  if (req.mode == Mode::kRejection && req.width.order() != 0)
    throw infppl::RejectionWidthError();
  RunOptions o;
  o.threads = threads;
  o.keep_trials = keep_trials;
  return run(req.example->program, req.mode, req.width, req.trials, req.seed, o);
}

std::string csv_header() {
  return "width,estimate,trials,seed,min_order,effective_trials\n";
}

std::string csv_row(const std::string& width_token, const RunRequest& req,
                    const infppl::Estimate& e) {
  return width_token + "," + infppl::detail::format_double(e.value) + "," +
         std::to_string(req.trials) + "," + std::to_string(req.seed) + "," +
         std::to_string(e.min_order) + "," + std::to_string(e.effective_trials) + "\n";
}

ordered_json estimate_json(const RunRequest& req, const std::string& mode_token,
                           const infppl::Estimate& e) {
  ordered_json j;
  j["example"] = req.example->name;
  j["mode"] = mode_token;
  j["estimate"] = e.value;
  j["min_order"] = e.min_order;
  j["effective_trials"] = e.effective_trials;
  return j;
}

int cmd_run(const RunRequest& req, const std::string& mode_token,
            const std::string& width_token, const std::string& format,
            const std::string& output, int threads) {
  const auto result = execute(req, threads, false);
  std::string text;
  if (format == "json") {
    ordered_json j;
    j["example"] = req.example->name;
    j["mode"] = mode_token;
    j["width"] = width_token;
    j["trials"] = req.trials;
    j["seed"] = req.seed;
    j["estimate"] = result.estimate.value;
    j["min_order"] = result.estimate.min_order;
    j["effective_trials"] = result.estimate.effective_trials;
    text = j.dump() + "\n";
  } else {
    text = csv_header() + csv_row(width_token, req, result.estimate);
  }
  return emit(text, output);
}

int cmd_sweep(RunRequest req, const std::vector<std::string>& width_tokens,
              const std::string& output, int threads) {
  std::string text = csv_header();
  std::vector<std::string> tokens = width_tokens;
  tokens.push_back("eps");  // the limit the finite widths are headed for
  for (const auto& token : tokens) {
    req.width = *parse_width(token);
    try {
      const auto result = execute(req, threads, false);
      text += csv_row(token, req, result.estimate);
    } catch (const infppl::UndefinedEstimateError& e) {
      // No weight reached the leading order; report the row, keep sweeping.
      text += token + ",nan," + std::to_string(req.trials) + "," +
              std::to_string(req.seed) + "," + std::to_string(e.min_order()) + ",0\n";
    } catch (const infppl::ZeroAcceptedError&) {
      text += token + ",nan," + std::to_string(req.trials) + "," +
              std::to_string(req.seed) + ",0,0\n";
    } catch (const infppl::RejectionWidthError&) {
      text += token + ",nan," + std::to_string(req.trials) + "," +
              std::to_string(req.seed) + ",,0\n";
    }
  }
  return emit(text, output);
}

int cmd_compare(const RunRequest& left, const std::string& left_mode_token,
                const RunRequest& right, const std::string& right_mode_token,
                const std::string& width_token, const std::string& output,
                int threads) {
  const auto l = execute(left, threads, true);
  const auto r = execute(right, threads, true);

  // Trial-for-trial weight agreement: meaningful only when every pair sits
  // at the same epsilon order.
  ordered_json weight_diff;  // defaults to null
  bool orders_match = l.weights.size() == r.weights.size();
  double max_rel = 0.0;
  for (std::size_t i = 0; orders_match && i < l.weights.size(); ++i) {
    if (l.weights[i].order() != r.weights[i].order()) {
      orders_match = false;
      break;
    }
    const double a = l.weights[i].coeff(), b = r.weights[i].coeff();
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale > 0) max_rel = std::max(max_rel, std::abs(a - b) / scale);
  }
  if (orders_match) weight_diff = max_rel;

  const double le = l.estimate.value, re = r.estimate.value;
  const double escale = std::max(std::abs(le), std::abs(re));
  const double est_diff = escale > 0 ? std::abs(le - re) / escale : 0.0;

  ordered_json j;
  j["width"] = width_token;
  j["trials"] = left.trials;
  j["seed"] = left.seed;
  j["left"] = estimate_json(left, left_mode_token, l.estimate);
  j["right"] = estimate_json(right, right_mode_token, r.estimate);
  j["max_rel_weight_diff"] = weight_diff;
  j["estimate_rel_diff"] = est_diff;
  return emit(j.dump() + "\n", output);
}

int cmd_list(const std::string& format, const std::string& output) {
  std::string text;
  if (format == "csv") {
    text = "example,width_sensitive,exact,summary\n";
    for (const auto& e : infppl::catalog()) {
      text += e.name + "," + (e.width_sensitive ? "1" : "0") + ",";
      if (e.exact_value) text += infppl::detail::format_double(*e.exact_value);
      text += ",\"" + e.summary + "\"\n";
    }
  } else {
    ordered_json list = ordered_json::array();
    for (const auto& e : infppl::catalog()) {
      ordered_json j;
      j["example"] = e.name;
      j["summary"] = e.summary;
      j["width_sensitive"] = e.width_sensitive;
      if (e.exact_value)
        j["exact"] = *e.exact_value;
      else
        j["exact"] = nullptr;
      list.push_back(j);
    }
    text = list.dump(2) + "\n";
  }
  return emit(text, output);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"interval-conditioned probabilistic programs"};
  app.require_subcommand(1);

  std::string example_name, example_b;
  std::string mode_token = "weighted";
  std::string width_token = "eps";
  std::string format = "json";
  std::string widths_csv;
  std::string output;
  std::int64_t trials = 10000;
  std::int64_t seed = 1;

  auto* run_cmd = app.add_subcommand("run", "run one example and print the estimate");
  run_cmd->add_option("example", example_name, "catalog name (see 'list')")->required();
  run_cmd->add_option("--mode", mode_token, "weighted | density | rejection");
  run_cmd->add_option("--width", width_token, "interval width: decimal or 'eps'");
  run_cmd->add_option("--trials", trials, "number of trials");
  run_cmd->add_option("--seed", seed, "random seed");
  run_cmd->add_option("--format", format, "json | csv");
  run_cmd->add_option("--output", output, "write to file instead of stdout");

  auto* sweep_cmd = app.add_subcommand("sweep", "run at several widths plus the eps limit; CSV");
  sweep_cmd->add_option("example", example_name, "catalog name")->required();
  sweep_cmd->add_option("--widths", widths_csv, "comma-separated positive widths")->required();
  sweep_cmd->add_option("--mode", mode_token, "weighted | density | rejection");
  sweep_cmd->add_option("--trials", trials, "number of trials per width");
  sweep_cmd->add_option("--seed", seed, "random seed shared across widths");
  sweep_cmd->add_option("--output", output, "write to file instead of stdout");

  auto* compare_cmd = app.add_subcommand(
      "compare", "two examples at one mode, or one example across two modes; JSON");
  compare_cmd->add_option("example", example_name, "first example")->required();
  compare_cmd->add_option("example_b", example_b, "second example (omit when comparing modes)");
  compare_cmd->add_option("--mode", mode_token, "one mode, or two comma-separated modes");
  compare_cmd->add_option("--width", width_token, "interval width: decimal or 'eps'");
  compare_cmd->add_option("--trials", trials, "number of trials");
  compare_cmd->add_option("--seed", seed, "shared random seed");
  compare_cmd->add_option("--output", output, "write to file instead of stdout");

  auto* list_cmd = app.add_subcommand("list", "list the example catalog");
  list_cmd->add_option("--format", format, "json | csv");
  list_cmd->add_option("--output", output, "write to file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadFlags;
  }

  const auto threads = threads_from_env();
  if (!threads) return fail_flags("INFPPL_THREADS must be an integer in [1, 1024]");
  if (trials < 1) return fail_flags("--trials must be positive");

  const auto started = std::chrono::steady_clock::now();
  int code = 0;
  try {
    if (list_cmd->parsed()) {
      if (format != "json" && format != "csv")
        return fail_flags("--format must be json or csv");
      code = cmd_list(format, output);
    } else {
      RunRequest req;
      req.trials = trials;
      req.seed = static_cast<std::uint64_t>(seed);
      req.example = infppl::find_example(example_name);
      if (req.example == nullptr) {
        std::fprintf(stderr, "infppl: unknown example '%s' (try 'infppl list')\n",
                     example_name.c_str());
        return kExitUnknownExample;
      }

      if (run_cmd->parsed()) {
        const auto mode = parse_mode(mode_token);
        if (!mode) return fail_flags("--mode must be weighted, density, or rejection");
        const auto width = parse_width(width_token);
        if (!width) return fail_flags("--width must be a positive decimal or 'eps'");
        if (format != "json" && format != "csv")
          return fail_flags("--format must be json or csv");
        req.mode = *mode;
        req.width = *width;
        code = cmd_run(req, mode_token, width_token, format, output, *threads);
      } else if (sweep_cmd->parsed()) {
        const auto mode = parse_mode(mode_token);
        if (!mode) return fail_flags("--mode must be weighted, density, or rejection");
        req.mode = *mode;
        const auto tokens = split_commas(widths_csv);
        for (const auto& t : tokens) {
          const auto w = parse_width(t);
          if (!w || w->order() != 0)
            return fail_flags("--widths entries must be positive decimals, got '" + t + "'");
        }
        code = cmd_sweep(req, tokens, output, *threads);
      } else {  // compare
        const auto width = parse_width(width_token);
        if (!width) return fail_flags("--width must be a positive decimal or 'eps'");
        req.width = *width;

        const auto mode_tokens = split_commas(mode_token);
        RunRequest right = req;
        std::string left_mode, right_mode;
        if (!example_b.empty()) {
          if (mode_tokens.size() != 1)
            return fail_flags("comparing two examples takes a single --mode");
          left_mode = right_mode = mode_tokens[0];
          right.example = infppl::find_example(example_b);
          if (right.example == nullptr) {
            std::fprintf(stderr, "infppl: unknown example '%s' (try 'infppl list')\n",
                         example_b.c_str());
            return kExitUnknownExample;
          }
        } else {
          if (mode_tokens.size() != 2)
            return fail_flags(
                "comparing one example needs two comma-separated modes, e.g. "
                "--mode weighted,density");
          left_mode = mode_tokens[0];
          right_mode = mode_tokens[1];
        }
        const auto lm = parse_mode(left_mode), rm = parse_mode(right_mode);
        if (!lm || !rm) return fail_flags("--mode must be weighted, density, or rejection");
        req.mode = *lm;
        right.mode = *rm;
        code = cmd_compare(req, left_mode, right, right_mode, width_token, output, *threads);
      }
    }
  } catch (const infppl::UndefinedEstimateError& e) {
    std::fprintf(stderr, "infppl: %s\n", e.what());
    return kExitNoEstimate;
  } catch (const infppl::ZeroAcceptedError& e) {
    std::fprintf(stderr, "infppl: %s\n", e.what());
    return kExitNoEstimate;
  } catch (const infppl::RejectionWidthError& e) {
    std::fprintf(stderr, "infppl: %s\n", e.what());
    return kExitNoEstimate;
  }

  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - started);
  std::fprintf(stderr, "wall_ms %lld\n", static_cast<long long>(elapsed.count()));
  return code;
}
