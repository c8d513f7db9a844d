// flatline: command-line driver for parsing, running, flattening, hoisting
// and checking `.imp` programs.

#include "flatline/ctcheck.hpp"
#include "flatline/flatten.hpp"
#include "flatline/hoist.hpp"
#include "flatline/parser.hpp"
#include "flatline/proggen.hpp"
#include "flatline/report.hpp"
#include "flatline/semantics.hpp"
#include "flatline/simcheck.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace flatline;

namespace {

enum Exit
{
    kOk = 0,
    kFail = 1,
    kUsage = 2,
};

std::string sha256_hex(const std::string& data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i)
        out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return out.str();
}

std::size_t default_max_steps()
{
    if (const char* env = std::getenv("FLATLINE_MAX_STEPS")) {
        try {
            auto v = std::stoull(env);
            if (v > 0)
                return v;
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring invalid FLATLINE_MAX_STEPS='" << env << "'\n";
    }
    return 10000;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        if (!cur.empty())
            out.push_back(cur);
    return out;
}

Interval parse_interval(const std::string& text)
{
    auto dots = text.find("..");
    if (dots == std::string::npos)
        throw CLI::ValidationError("--domain", "expected lo..hi, got '" + text + "'");
    try {
        Interval i{std::stoll(text.substr(0, dots)), std::stoll(text.substr(dots + 2))};
        if (i.count() == 0)
            throw CLI::ValidationError("--domain", "empty interval '" + text + "'");
        return i;
    } catch (const std::logic_error&) {
        throw CLI::ValidationError("--domain", "expected lo..hi, got '" + text + "'");
    }
}

struct Common
{
    std::string file;
    bool json = false;
    std::string secrets;
    bool secrets_given = false;
    std::size_t max_steps = default_max_steps();
};

struct Input
{
    std::string text;
    std::string digest;
    Program program;
};

/// Reads and parses the input file, applying `--secret`.
Input load(const Common& c)
{
    std::ifstream in(c.file, std::ios::binary);
    if (!in)
        throw Error("cannot read '" + c.file + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    Input input;
    input.text = buf.str();
    input.digest = sha256_hex(input.text);
    input.program = parse_program(input.text);
    if (c.secrets_given) {
        input.program.secrets.clear();
        for (const auto& s : split(c.secrets, ',')) {
            input.program.secrets.insert(s);
            input.program.publics.erase(s);
        }
    }
    input.program = assign_colors(input.program);
    return input;
}

class Output
{
public:
    Output(const Common& c, std::string command) : common_(c), command_(std::move(command)) {}

    void set_digest(const std::string& d) { digest_ = d; }

    /// Emits the report (JSON mode) or the text, and returns @p code.
    int finish(int code, const std::string& status, const Json& payload, const std::string& text)
    {
        if (common_.json) {
            Json j = {{"version", "1"},
                      {"command", command_},
                      {"input", {{"file", common_.file}, {"sha256", digest_}}},
                      {"status", status},
                      {"exit_code", code},
                      {"payload", payload}};
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << text;
            if (!text.empty() && text.back() != '\n')
                std::cout << "\n";
        }
        return code;
    }

    int error(int code, const std::string& message, Json extra = Json::object())
    {
        return report(code, message, "flatline " + command_ + ": " + message, std::move(extra));
    }

    /// Like error(), with @p line printed verbatim in text mode.
    int report(int code, const std::string& message, const std::string& line, Json extra = Json::object())
    {
        if (common_.json) {
            extra["message"] = message;
            return finish(code, "error", extra, "");
        }
        std::cerr << line << "\n";
        return code;
    }

private:
    const Common& common_;
    std::string command_;
    std::string digest_;
};

//===----------------------------------------------------------------------===//
// Text renderings
//===----------------------------------------------------------------------===//

std::string color_name(Color c) { return c.white() ? "white" : "loop " + std::to_string(c.loop); }

void dump(const Cmd& c, int depth, std::ostringstream& out)
{
    std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    std::string tag = "  [" + color_name(c.color) + "]";
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Skip>)
                out << pad << "Skip" << tag << "\n";
            else if constexpr (std::is_same_v<T, Assign>)
                out << pad << "Assign " << n.name << " := " << pretty(*n.value) << tag << "\n";
            else if constexpr (std::is_same_v<T, Seq>) {
                out << pad << "Seq" << tag << "\n";
                dump(*n.first, depth + 1, out);
                dump(*n.second, depth + 1, out);
            } else if constexpr (std::is_same_v<T, If>) {
                out << pad << "If " << pretty(*n.cond) << tag << "\n";
                dump(*n.then_branch, depth + 1, out);
                dump(*n.else_branch, depth + 1, out);
            } else if constexpr (std::is_same_v<T, While>) {
                out << pad << "While " << pretty(*n.cond) << tag << "\n";
                dump(*n.body, depth + 1, out);
            } else {
                out << pad << "Switch " << pretty(*n.scrutinee) << tag << "\n";
                for (const auto& k : n.cases) {
                    out << pad << "  Case " << k.guard << "\n";
                    dump(*k.body, depth + 2, out);
                }
            }
        },
        c.node);
}

std::string join(const std::set<std::string>& s)
{
    std::string out;
    for (const auto& v : s)
        out += (out.empty() ? "" : ", ") + v;
    return out;
}

std::string text_of(const Verdict& v)
{
    std::ostringstream out;
    out << "verdict: " << to_string(v.kind) << "\n";
    out << "pairs checked: " << v.pairs_checked << "\n";
    if (v.witness) {
        const auto& w = *v.witness;
        out << "witness: " << to_string(w.kind) << " at step " << w.step << "\n";
        out << "  store a: " << to_string(w.store_a) << "\n";
        out << "  store b: " << to_string(w.store_b) << "\n";
        out << "  leak a:  " << to_string(w.leak_a) << "  (" << w.leak_a.size() << " atoms)\n";
        out << "  leak b:  " << to_string(w.leak_b) << "  (" << w.leak_b.size() << " atoms)\n";
    }
    if (v.reason)
        out << "reason: " << to_string(*v.reason) << (v.detail.empty() ? "" : " (" + v.detail + ")") << "\n";
    return out.str();
}

std::string text_of(const Calibration& cal, const NumTable& nominal)
{
    std::ostringstream out;
    auto expected = [&](const std::string& shape) -> std::string {
        if (shape == "assign")
            return std::to_string(nominal.n_assign_like);
        if (shape == "if")
            return std::to_string(nominal.n_if);
        if (shape == "while" || shape == "skip-seq")
            return std::to_string(nominal.n_skipseq_while);
        return "-";
    };
    out << "calibration (shape: observed count x occurrences | table):\n";
    for (const auto& [shape, hist] : cal) {
        out << "  " << shape << ":";
        for (const auto& [k, n] : hist)
            out << " " << k << "x" << n;
        out << " | " << expected(shape) << "\n";
    }
    return out.str();
}

std::string text_of(const SimReport& r)
{
    std::ostringstream out;
    out << "programs: " << r.programs_checked << ", runs: " << r.runs_checked << ", steps: " << r.steps_checked
        << ", incomplete runs: " << r.runs_incomplete << "\n";
    out << "failures: " << r.failures.size() << "\n";
    for (const auto& f : r.failures)
        out << "  run " << f.run << " step " << f.step << " [" << to_string(f.clause) << "] " << f.detail << "\n";
    return out.str();
}

//===----------------------------------------------------------------------===//
// Subcommands
//===----------------------------------------------------------------------===//

struct RunArgs
{
    std::string input;
    bool trace = false;
    bool flatten = false;
    bool hoist = false;
};

struct CtArgs
{
    std::string mode = "exhaustive";
    std::uint64_t seed = 0;
    std::size_t samples = 1000;
    std::string domain = "-2..2";
    std::string secret_domain;
    std::string public_domain;
    std::string observe = "full";
    bool flatten = false;
    bool hoist = false;
};

struct SimArgs
{
    std::string stores;
    bool calibrate = false;
    bool ct_diagrams = false;
    std::string table = "artifact";
    bool mutate = false;
    std::size_t samples = 10;
    std::uint64_t seed = 0;
    std::string domain = "-2..2";
    std::string mode = "random";
};

Program transform(const Program& p, bool do_hoist, bool do_flatten)
{
    Program out = p;
    if (do_hoist)
        out = hoist_program(out);
    if (do_flatten)
        out = flatten_program(out);
    return out;
}

int cmd_parse(const Common& c)
{
    Output out(c, "parse");
    auto in = load(c);
    out.set_digest(in.digest);
    std::ostringstream text;
    text << "dialect: " << (in.program.dialect == Dialect::Source ? "source" : "target") << "\n";
    text << "secret: " << join(in.program.secrets) << "\n";
    text << "public: " << join(in.program.publics) << "\n";
    dump(*in.program.body, 0, text);
    return out.finish(kOk, "ok", to_json(in.program), text.str());
}

int cmd_run(const Common& c, const RunArgs& a)
{
    Output out(c, "run");
    auto in = load(c);
    out.set_digest(in.digest);
    Program p = transform(in.program, a.hoist, a.flatten);
    Trace t = run({p.body, parse_store(a.input)}, {c.max_steps, false});

    std::ostringstream text;
    if (a.trace)
        for (std::size_t i = 0; i < t.steps.size(); ++i)
            text << "step " << i + 1 << ": " << t.steps[i].rule << " | " << to_string(t.steps[i].leak) << "\n";
    text << "status: " << to_string(t.status) << "\n";
    if (t.error)
        text << "error: " << to_string(*t.error) << "\n";
    text << "steps: " << t.steps.size() << "\n";
    text << "store: " << to_string(t.last.store) << "\n";
    text << "leakage: " << to_string(t.cumulative_leakage()) << "\n";

    Json payload = to_json(t);
    if (!a.trace)
        payload.erase("trace");
    int code = t.status == RunStatus::Terminated ? kOk : t.status == RunStatus::StepLimit ? kUsage : kFail;
    return out.finish(code, std::string(to_string(t.status)), payload, text.str());
}

int cmd_flatten(const Common& c)
{
    Output out(c, "flatten");
    auto in = load(c);
    out.set_digest(in.digest);
    Program p = flatten_program(in.program);
    auto text = pretty(p);
    return out.finish(kOk, "ok", {{"program", text}, {"ast", to_json(p)}}, text);
}

int cmd_hoist(const Common& c)
{
    Output out(c, "hoist");
    auto in = load(c);
    out.set_digest(in.digest);
    Program p = hoist_program(in.program);
    auto text = pretty(p);
    return out.finish(kOk, "ok", {{"program", text}, {"ast", to_json(p)}}, text);
}

Policy policy_from(const Program& p, const CtArgs& a)
{
    Policy pol = policy_for(p, parse_interval(a.domain));
    if (!a.secret_domain.empty())
        pol.secret_domain = parse_interval(a.secret_domain);
    if (!a.public_domain.empty())
        pol.public_domain = parse_interval(a.public_domain);
    pol.observer = a.observe == "length" ? Observer::Length : Observer::Full;
    return pol;
}

PairMode mode_from(const std::string& mode, std::uint64_t seed, std::size_t samples)
{
    return mode == "random" ? PairMode::random(seed, samples) : PairMode::exhaustive();
}

int cmd_check_ct(const Common& c, const CtArgs& a)
{
    Output out(c, "check-ct");
    auto in = load(c);
    out.set_digest(in.digest);
    Policy pol = policy_from(in.program, a);
    Program p = transform(in.program, a.hoist, a.flatten);
    Verdict v;
    try {
        v = check_oni(p, pol, mode_from(a.mode, a.seed, a.samples), c.max_steps);
    } catch (const BoundExceeded& e) {
        return out.error(kUsage, e.what());
    }
    std::ostringstream text;
    text << "secret inputs: " << join(pol.secrets) << "\n";
    text << "public inputs: " << join(pol.publics) << "\n";
    text << text_of(v);
    int code = v.kind == Verdict::Kind::Secure ? kOk : v.kind == Verdict::Kind::Insecure ? kFail : kUsage;
    Json payload = to_json(v);
    payload["secrets"] = pol.secrets;
    payload["publics"] = pol.publics;
    payload["observer"] = a.observe;
    return out.finish(code, std::string(to_string(v.kind)), payload, text.str());
}

int cmd_check_sim(const Common& c, const SimArgs& a)
{
    Output out(c, "check-sim");
    auto in = load(c);
    out.set_digest(in.digest);
    const Program& p = in.program;

    std::vector<Store> stores;
    if (!a.stores.empty()) {
        for (const auto& s : split(a.stores, ';'))
            stores.push_back(parse_store(s));
    } else {
        GenConfig g;
        g.value_domain = parse_interval(a.domain);
        auto inputs = upward_exposed(*p.body);
        for (std::size_t i = 0; i < a.samples; ++i) {
            g.seed = a.seed + i;
            stores.push_back(gen_store(g, inputs));
        }
    }

    SimOptions opts;
    opts.table = a.table == "nominal" ? NumTable::nominal() : NumTable::artifact();
    opts.max_steps = c.max_steps;
    opts.label = c.file;
    opts.mutate = a.mutate;

    SimReport report = check_general_simulation(p, stores, opts);
    std::string calibration_error;
    if (a.calibrate) {
        for (const auto& s : stores) {
            try {
                merge_into(report.calibration, calibrate_num(p, s, c.max_steps));
            } catch (const NoRelatedConfig& e) {
                calibration_error = e.what();
            }
        }
    }
    SimReport ct;
    if (a.ct_diagrams) {
        Policy pol = policy_for(p, parse_interval(a.domain));
        ct = check_ct_simulation(p, pol, mode_from(a.mode, a.seed, a.samples), opts);
    }

    std::ostringstream text;
    text << "table: " << a.table << "\n";
    text << "general simulation\n" << text_of(report);
    if (a.calibrate) {
        text << text_of(report.calibration, NumTable::nominal());
        if (!calibration_error.empty())
            text << "calibration stopped: " << calibration_error << "\n";
    }
    if (a.ct_diagrams)
        text << "ct diagrams\n" << text_of(ct);

    bool failed = !report.failures.empty() || !ct.failures.empty();
    Json payload = {{"table", to_json(opts.table)}, {"simulation", to_json(report)}};
    if (a.calibrate) {
        payload["nominal_table"] = to_json(NumTable::nominal());
        if (!calibration_error.empty())
            payload["calibration_error"] = calibration_error;
    }
    if (a.ct_diagrams)
        payload["ct_diagrams"] = to_json(ct);
    return out.finish(failed ? kFail : kOk, failed ? "fail" : "pass", payload, text.str());
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"flatline: control-flow flattening and constant-time checking for a small while-language"};
    app.require_subcommand(1);

    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("file", common.file, "Program file (.imp)")->required();
        sub->add_flag("--json", common.json, "Emit a JSON report");
        sub->add_option("--secret", common.secrets, "Comma-separated secret variables (overrides the file)")
            ->each([&](const std::string&) { common.secrets_given = true; });
        sub->add_option("--max-steps", common.max_steps, "Step budget per run (default: FLATLINE_MAX_STEPS or 10000)")
            ->check(CLI::PositiveNumber);
    };

    auto* parse = app.add_subcommand("parse", "Parse and color a program, dump its tree");
    add_common(parse);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Run a program and report the final store and leakage");
    add_common(run);
    run->add_option("--input", run_args.input, "Initial store, e.g. x=1,y=2");
    run->add_flag("--trace", run_args.trace, "Print every step with its leakage");
    run->add_flag("--flatten", run_args.flatten, "Run the flattened program");
    run->add_flag("--hoist", run_args.hoist, "Run the hoisted program");

    auto* flatten = app.add_subcommand("flatten", "Print the flattened program");
    add_common(flatten);
    auto* hoist = app.add_subcommand("hoist", "Print the hoisted program");
    add_common(hoist);

    CtArgs ct_args;
    auto* ct = app.add_subcommand("check-ct", "Check observational non-interference");
    add_common(ct);
    ct->add_option("--mode", ct_args.mode, "exhaustive or random")->check(CLI::IsMember({"exhaustive", "random"}));
    ct->add_option("--seed", ct_args.seed, "Seed for random mode");
    ct->add_option("--samples", ct_args.samples, "Pairs drawn in random mode");
    ct->add_option("--domain", ct_args.domain, "Input values lo..hi (default -2..2)");
    ct->add_option("--secret-domain", ct_args.secret_domain, "Secret values lo..hi (default: --domain)");
    ct->add_option("--public-domain", ct_args.public_domain, "Public values lo..hi (default: --domain)");
    ct->add_option("--observe", ct_args.observe, "full: compare leak atoms; length: compare per-step counts")
        ->check(CLI::IsMember({"full", "length"}));
    ct->add_flag("--flatten", ct_args.flatten, "Check the flattened program");
    ct->add_flag("--hoist", ct_args.hoist, "Check the hoisted program");

    SimArgs sim_args;
    auto* sim = app.add_subcommand("check-sim", "Check the simulation between a program and its flattening");
    add_common(sim);
    sim->add_option("--stores", sim_args.stores, "Initial stores, e.g. \"x=1,y=2;x=0,y=0\"");
    sim->add_option("--samples", sim_args.samples, "Stores (or pairs) to generate when --stores is absent");
    sim->add_option("--seed", sim_args.seed, "Seed for generated stores and pairs");
    sim->add_option("--domain", sim_args.domain, "Input values lo..hi (default -2..2)");
    sim->add_option("--mode", sim_args.mode, "Pair selection for --ct-diagrams: exhaustive or random")
        ->check(CLI::IsMember({"exhaustive", "random"}));
    sim->add_flag("--calibrate", sim_args.calibrate, "Report observed target step counts per source shape");
    sim->add_flag("--ct-diagrams", sim_args.ct_diagrams, "Also check the CT-simulation diagrams");
    sim->add_option("--table", sim_args.table, "Step-count table: artifact or nominal")
        ->check(CLI::IsMember({"artifact", "nominal"}));
    sim->add_flag("--mutate-flatten", sim_args.mutate, "Check against a deliberately broken flattening");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    std::string name = app.get_subcommands().front()->get_name();
    Output out(common, name);
    try {
        if (parse->parsed())
            return cmd_parse(common);
        if (run->parsed())
            return cmd_run(common, run_args);
        if (flatten->parsed())
            return cmd_flatten(common);
        if (hoist->parsed())
            return cmd_hoist(common);
        if (ct->parsed())
            return cmd_check_ct(common, ct_args);
        return cmd_check_sim(common, sim_args);
    } catch (const ParseError& e) {
        std::string msg = "expected " + e.expected() + ", found " + e.found();
        std::string where = common.file + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column());
        return out.report(kUsage, msg, where + ": error: " + msg,
                          {{"line", e.line()}, {"column", e.column()}, {"expected", e.expected()}, {"found", e.found()}});
    } catch (const CLI::ValidationError& e) {
        return out.error(kUsage, e.what());
    } catch (const EvalError& e) {
        return out.error(kFail, e.what());
    } catch (const Error& e) {
        return out.error(kUsage, e.what());
    }
}
