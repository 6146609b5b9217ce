#include "commands.hpp"

#include "cache.hpp"
#include "config.hpp"
#include "verify.hpp"

#include "vsc/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <memory>
#include <ostream>
#include <sstream>

namespace vsc::cli {

namespace {

struct GlobalFlags {
    std::string config_file;
    std::string cache_dir;
    bool no_cache = false;
    unsigned threads = 0;
    int retry_limit = -1;
};

struct Context {
    Config config;
    std::shared_ptr<NdjsonStore> store;
    std::unique_ptr<Evaluator> evaluator;
    std::unique_ptr<MirrorEngine> engine;
};

void open_context(Context &ctx, const GlobalFlags &g)
{
    // Precedence: flags, then $VSC_CACHE_DIR, then the config file.
    ctx.config = config_from_environment();
    if (!g.config_file.empty()) {
        ctx.config = load_config(g.config_file);
        if (const char *p = std::getenv("VSC_CACHE_DIR"); p && *p) ctx.config.cache_dir = p;
    }
    if (!g.cache_dir.empty()) ctx.config.cache_dir = g.cache_dir;
    if (g.threads > 0) ctx.config.threads = g.threads;
    if (g.retry_limit >= 0) ctx.config.retry_limit = g.retry_limit;
    if (!g.no_cache && !ctx.config.cache_dir.empty()) ctx.store = std::make_shared<NdjsonStore>(ctx.config.cache_dir);
    ctx.evaluator = std::make_unique<Evaluator>(EngineOptions{ctx.config.retry_limit, ctx.config.threads}, ctx.store);
    ctx.engine = std::make_unique<MirrorEngine>(*ctx.evaluator);
}

Sector parse_sector(const std::string &s)
{
    if (s == "closed") return Sector::Closed;
    if (s == "open") return Sector::Open;
    throw UsageError("sector must be 'closed' or 'open', got '" + s + "'");
}

nlohmann::json terms_json(const GradedSeries &s, const SeriesSymbols &sym)
{
    nlohmann::json terms = nlohmann::json::array();
    for (const auto &[k, c] : s.terms()) {
        nlohmann::json mono = nlohmann::json::object();
        for (std::size_t i = 0; i < s.classes().size(); ++i)
            if (k.x[i] > 0) mono[sym.var + std::to_string(s.classes()[i])] = k.x[i];
        terms.push_back({{"q", k.q.to_string()}, {"monomial", mono}, {"coefficient", to_string(c)}});
    }
    return terms;
}

struct SeriesArgs {
    std::string stage;
    std::string model = "cp:3";
    std::string sector = "closed";
    int a = 0;
    int b = 0;
    std::string dmax;
    int J = 0;
    int j_max = 0;
    int unit_extra = -1;
    std::string format = "text";
    std::string t0;
};

int cmd_series(Context &ctx, const SeriesArgs &args, std::ostream &out)
{
    const Model model = Model::parse(args.model);
    const Sector sector = parse_sector(args.sector);
    const HalfInt dmax = HalfInt::parse(args.dmax);
    if (!args.t0.empty() && args.t0 != "0") throw UsageError("--t0 only supports the slice t0 = 0");
    const bool slice = !args.t0.empty();
    if (sector == Sector::Closed && !dmax.is_integer()) throw UsageError("closed series need an integer --dmax");
    if (sector == Sector::Open && dmax.is_integer()) throw UsageError("open series need a half-integer --dmax");

    const int J = args.J > 0 ? args.J : ctx.config.closed_J > 0 ? ctx.config.closed_J : model.dim();
    int j_max = args.j_max > 0 ? args.j_max : model.is_hypersurface() ? model.dim() : ctx.config.open_j_max;
    auto policy = OpenTruncationPolicy::for_target(dmax, j_max);
    policy.unit_extra = args.unit_extra >= 0 ? args.unit_extra : ctx.config.unit_extra;

    auto finish = [&](const GradedSeries &s) { return slice ? s.slice_zero(0) : s; };

    if (args.stage == "mirror") {
        FormalMap map = sector == Sector::Closed  ? mirror_map_closed(model, dmax, J, *ctx.evaluator)
                        : model.is_hypersurface() ? mirror_map_closed(model, HalfInt::from_int(dmax.floor()), model.dim(), *ctx.evaluator)
                        : mirror_map_open_cp2(HalfInt::from_int(dmax.floor()), j_max, *ctx.evaluator);
        const SeriesSymbols sym{"q", "x"};
        if (args.format == "json") {
            nlohmann::json j{{"stage", "mirror"}, {"model", model.key()}, {"sector", args.sector},
                             {"dmax", map.dmax().to_string()}, {"components", nlohmann::json::object()}};
            for (int c : map.classes()) j["components"]["t" + std::to_string(c)] = terms_json(finish(map.component(c)), sym);
            out << j.dump(2) << "\n";
        } else if (args.format == "csv") {
            out << "component,q_degree,monomial,coefficient\n";
            for (int c : map.classes()) {
                const std::string csv = to_csv(finish(map.component(c)), sym);
                std::istringstream lines(csv);
                std::string line;
                std::getline(lines, line);
                while (std::getline(lines, line)) out << "t" << c << "," << line << "\n";
            }
        } else {
            for (int c : map.classes()) out << "t" << c << " = " << to_compact_text(finish(map.component(c)), sym) << "\n";
        }
        return kOk;
    }

    GradedSeries s = [&] {
        if (args.stage == "gf")
            return sector == Sector::Closed ? gf_closed(model, args.a, args.b, dmax, J, *ctx.evaluator)
                                            : gf_open(model, args.a, dmax, policy, *ctx.evaluator);
        if (args.stage == "gw")
            return sector == Sector::Closed ? ctx.engine->gw_closed(model, args.a, args.b, dmax, J)
                                            : ctx.engine->gw_open(model, args.a, dmax, policy);
        throw UsageError("series stage must be gf, mirror or gw");
    }();
    s = finish(s);
    const SeriesSymbols sym = args.stage == "gw" ? SeriesSymbols{"Q", "t"} : SeriesSymbols{"q", "x"};
    if (args.format == "json")
        out << nlohmann::json{{"stage", args.stage},
                              {"model", model.key()},
                              {"sector", args.sector},
                              {"dmax", dmax.to_string()},
                              {"terms", terms_json(s, sym)}}
                   .dump(2)
            << "\n";
    else if (args.format == "csv")
        out << to_csv(s, sym);
    else
        out << to_canonical_text(s, sym) << "\n";
    return kOk;
}

int cmd_table_disk(Context &ctx, int dmax, bool extended, const std::string &format, std::ostream &out)
{
    if (dmax < 1) throw UsageError("--dmax must be >= 1");
    if (dmax > 4 && !extended) throw UsageError("--dmax above 4 needs --extended");
    nlohmann::json rows = nlohmann::json::array();
    if (format == "text") out << "d\t<(O_h2)^(3d-2)>_disk,2d-1\n";
    for (int d = 1; d <= dmax; ++d) {
        const BigRational v = cp2_maximal_disk_invariant(*ctx.engine, d);
        if (format == "json")
            rows.push_back({{"d", d}, {"value", to_string(v)}});
        else
            out << d << "\t" << to_string(v) << "\n" << std::flush;
    }
    if (format == "json") out << nlohmann::json{{"rows", rows}}.dump(2) << "\n";
    return kOk;
}

} // namespace

int run(const std::vector<std::string> &argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Virtual structure constants, mirror maps and disk invariants", "vsc"};
    app.require_subcommand(1);
    GlobalFlags g;
    app.add_option("--config", g.config_file, "key = value configuration file (default: $VSC_CONFIG)");
    app.add_option("--cache-dir", g.cache_dir, "result cache directory (default: $VSC_CACHE_DIR)");
    app.add_flag("--no-cache", g.no_cache, "ignore the result cache");
    app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--retry-limit", g.retry_limit, "radius perturbation retries")->check(CLI::NonNegativeNumber);

    std::string model_text, sector_text = "closed", insert_text;
    int d = 1, a = 0, b = 0;
    auto *vsc_cmd = app.add_subcommand("vsc", "one virtual structure constant");
    vsc_cmd->add_option("--model", model_text, "cp:N or hyp:N:k")->required();
    vsc_cmd->add_option("--sector", sector_text, "closed or open");
    vsc_cmd->add_option("--d", d, "degree")->required();
    vsc_cmd->add_option("--a", a);
    vsc_cmd->add_option("--b", b);
    vsc_cmd->add_option("--insert", insert_text, "insertions j:m,j:m,...");

    SeriesArgs sa;
    auto *series_cmd = app.add_subcommand("series", "generating functions, mirror maps and GW series");
    series_cmd->add_option("stage", sa.stage, "gf, mirror or gw")->required()->check(CLI::IsMember({"gf", "mirror", "gw"}));
    series_cmd->add_option("--model", sa.model);
    series_cmd->add_option("--sector", sa.sector);
    series_cmd->add_option("--a", sa.a);
    series_cmd->add_option("--b", sa.b);
    series_cmd->add_option("--dmax", sa.dmax, "truncation degree, e.g. 3 or 5/2")->required();
    series_cmd->add_option("--J", sa.J, "closed sector: highest coupling class");
    series_cmd->add_option("--j-max", sa.j_max, "open sector: highest coupling class");
    series_cmd->add_option("--unit-extra", sa.unit_extra, "open sector: extra O_1 insertions above the cap");
    series_cmd->add_option("--format", sa.format)->check(CLI::IsMember({"text", "json", "csv"}));
    series_cmd->add_option("--t0", sa.t0, "restrict to t0 = 0");

    int table_dmax = 4;
    bool extended = false;
    std::string table_format = "text";
    auto *table_cmd = app.add_subcommand("table-disk", "maximal h^2-insertion disk invariants of CP^2");
    table_cmd->add_option("--dmax", table_dmax);
    table_cmd->add_flag("--extended", extended, "allow d = 5, 6");
    table_cmd->add_option("--format", table_format)->check(CLI::IsMember({"text", "json"}));

    std::string suite;
    std::string verify_model, verify_sector;
    SuiteOptions so;
    std::vector<std::string> suite_choices = suite_names();
    suite_choices.push_back("all");
    auto *verify_cmd = app.add_subcommand("verify", "invariant suites with a JSON pass/fail report");
    verify_cmd->add_option("suite", suite)->required()->check(CLI::IsMember(suite_choices));
    verify_cmd->add_option("--model", verify_model);
    verify_cmd->add_option("--sector", verify_sector);
    verify_cmd->add_option("--samples", so.samples)->check(CLI::PositiveNumber);
    verify_cmd->add_option("--seed", so.seed);

    std::vector<std::string> rest(argv.rbegin(), argv.rend() - 1);
    try {
        app.parse(rest);
    } catch (const CLI::ParseError &e) {
        std::ostringstream o, e2;
        const int code = app.exit(e, o, e2);
        out << o.str();
        err << e2.str();
        return code == 0 ? kOk : kUsage;
    }

    try {
        Context ctx;
        open_context(ctx, g);
        if (*vsc_cmd) {
            CorrelatorSpec spec{Model::parse(model_text), parse_sector(sector_text), d, a, b,
                                parse_insertions(insert_text)};
            if (spec.sector == Sector::Open) spec.b = 0;
            out << nlohmann::json{{"value", to_string(ctx.evaluator->value(spec))}}.dump() << "\n";
            return kOk;
        }
        if (*series_cmd) return cmd_series(ctx, sa, out);
        if (*table_cmd) return cmd_table_disk(ctx, table_dmax, extended, table_format, out);
        if (*verify_cmd) {
            if (!verify_model.empty()) so.model = Model::parse(verify_model);
            if (!verify_sector.empty()) so.sector = parse_sector(verify_sector);
            const std::vector<std::string> names = suite == "all" ? suite_names() : std::vector<std::string>{suite};
            bool pass = true;
            nlohmann::json reports = nlohmann::json::array();
            for (const auto &n : names) {
                const SuiteReport r = run_suite(n, so, *ctx.engine);
                pass = pass && r.pass();
                reports.push_back(r.to_json());
            }
            out << (names.size() == 1 ? reports[0] : nlohmann::json{{"pass", pass}, {"suites", reports}}).dump(2)
                << "\n";
            return pass ? kOk : kCheckFailed;
        }
    } catch (const IndecisivePole &e) {
        err << "error: " << e.what()
            << "\nhint: raise the radius retry limit (--retry-limit or retry_limit in the config file)\n";
        return kIndecisive;
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const BoundError &e) {
        err << "bound error: " << e.what() << "\n";
        return kBound;
    } catch (const UnsupportedError &e) {
        err << "unsupported: " << e.what() << "\n";
        return kUnsupported;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kUsage;
}

} // namespace vsc::cli
