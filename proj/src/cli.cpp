#include "pir2/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pir2/audit.hpp"
#include "pir2/capacity.hpp"
#include "pir2/nb_engine.hpp"
#include "pir2/net.hpp"
#include "pir2/ns_engine.hpp"
#include "pir2/ns_params.hpp"

namespace pir2::cli {

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 42;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("PIR_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw ParamError("PIR_SEED must be an unsigned integer");
        }
    }
    return kDefaultSeed;
}

struct ParamFlags {
    int n = 0, t1 = 0, k1 = 0, t2 = 0, k2 = 0;
    std::uint64_t modulus = 0;
    bool no_reduce = false;

    SystemParams to_params() const {
        SystemParams p;
        p.n_servers = n;
        p.t1 = t1;
        p.k1 = k1;
        p.t2 = t2;
        p.k2 = k2;
        p.modulus = modulus;
        p.reduction = no_reduce ? 1 : 0;
        p.validate();
        return p;
    }
};

void add_param_flags(CLI::App* cmd, ParamFlags& f) {
    cmd->add_option("--n", f.n, "number of servers N")->required();
    cmd->add_option("--t1", f.t1, "high privacy level T1")->required();
    cmd->add_option("--k1", f.k1, "number of high-privacy messages K1")->required();
    cmd->add_option("--t2", f.t2, "base privacy level T2")->required();
    cmd->add_option("--k2", f.k2, "total number of messages K2")->required();
    cmd->add_option("--modulus", f.modulus,
                    "prime field modulus (default: auto-selected)");
    cmd->add_flag("--no-reduce", f.no_reduce,
                  "keep the full message length N^K2 (no common-divisor reduction)");
}

json rational_json(const Rational& r) {
    return json{{"fraction", r.to_fraction_string()},
                {"decimal", r.to_decimal_string()}};
}

std::string rational_text(const Rational& r) {
    return r.to_fraction_string() + " (" + r.to_decimal_string() + ")";
}

void write_output(const std::string& text, const std::string& out_path,
                  std::ostream& out) {
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(out_path);
    if (!file) throw ParamError("cannot open output file " + out_path);
    file << text;
}

int cmd_rates(const ParamFlags& flags, const std::string& format,
              std::ostream& out) {
    const SystemParams p = flags.to_params();
    const capacity::RateReport rep = capacity::rate_report(p);
    const bool prop1_applies =
        p.n_servers == 3 && p.t1 == 2 && p.k1 == 2 && p.t2 == 1 && p.k2 == 3;
    if (format == "json") {
        json doc{{"params", p.label()},
                 {"r_ns", rational_json(rep.r_ns)},
                 {"r_nb", rational_json(rep.r_nb)},
                 {"r_upper", rational_json(rep.r_upper)},
                 {"r_naive", rational_json(rep.r_naive)},
                 {"d_gap", rational_json(rep.d_gap)},
                 {"coding_gain", rational_json(rep.coding_gain)},
                 {"best", capacity::winner_name(rep.best)}};
        if (prop1_applies)
            doc["refined_upper_bound"] = rational_json(capacity::prop1_bound());
        out << doc.dump(2) << "\n";
        return 0;
    }
    out << "system " << p.label() << "\n";
    out << "  r_ns        = " << rational_text(rep.r_ns) << "\n";
    out << "  r_nb        = " << rational_text(rep.r_nb) << "\n";
    out << "  r_upper     = " << rational_text(rep.r_upper) << "\n";
    out << "  r_naive     = " << rational_text(rep.r_naive) << "\n";
    out << "  d_gap       = " << rational_text(rep.d_gap) << "\n";
    out << "  coding_gain = " << rational_text(rep.coding_gain) << "\n";
    out << "  best scheme = " << capacity::winner_name(rep.best) << "\n";
    if (prop1_applies)
        out << "  note: refined upper bound "
            << rational_text(capacity::prop1_bound()) << " applies here\n";
    return 0;
}

int cmd_params(const ParamFlags& flags, const std::string& out_path,
               std::ostream& out) {
    const SystemParams p = flags.to_params();
    const ns_params::NsParameterTable t = ns_params::build_table(p);
    const long long r = ns::effective_reduction(p);
    json doc;
    doc["params"] = {{"n", p.n_servers}, {"t1", p.t1}, {"k1", p.k1},
                     {"t2", p.t2},       {"k2", p.k2}};
    doc["M"] = t.m_const;
    doc["message_length_unreduced"] = t.message_len;
    doc["reduction"] = r;
    doc["message_length"] = t.message_len / r;
    doc["modulus"] = ns::effective_modulus(p);
    json dtab = json::array();
    for (int i = 0; i <= t.imax; ++i) {
        json row = json::array();
        for (int j = 0; j <= t.jmax; ++j) row.push_back(t.at(i, j).d);
        dtab.push_back(row);
    }
    doc["d"] = dtab;
    json classes = json::array();
    for (int i = 0; i <= t.imax; ++i) {
        for (int j = 0; j <= t.jmax; ++j) {
            if (i + j == 0) continue;
            const auto& c = t.at(i, j);
            json entry{{"i", i},     {"j", j},     {"count", t.count(i, j)},
                       {"d", c.d},   {"m", c.m},   {"m_reduced", c.m / r}};
            if (c.n1) {
                entry["n1"] = *c.n1;
                entry["k1"] = *c.k1;
                entry["code_high"] = {*c.n1 / r, *c.k1 / r};
            }
            if (c.n2) {
                entry["n2"] = *c.n2;
                entry["k2"] = *c.k2;
                entry["code_low"] = {*c.n2 / r, *c.k2 / r};
            }
            classes.push_back(std::move(entry));
        }
    }
    doc["classes"] = classes;
    if (nb::supported(p)) {
        json nb_doc;
        const long long rnb = nb::effective_reduction(p);
        nb_doc["reduction"] = rnb;
        nb_doc["message_length"] = nb::message_length(p);
        nb_doc["modulus"] = nb::effective_modulus(p);
        for (int side = 0; side < 2; ++side) {
            // Describe per-target tables for the canonical targets 1 and K2.
            const int k_star = side == 0 ? 1 : p.k2;
            const nb::NbTables tables = nb::tables_structure(p, k_star);
            json tdoc;
            auto table_json = [](const nb::PrecodedTable& tab) {
                json tj;
                tj["kind"] = tab.kind == nb::PrecodedTable::Kind::Active
                                 ? "active"
                                 : "pure_interference";
                tj["total"] = tab.total;
                tj["total_unreduced"] = tab.total_unreduced;
                json groups = json::array();
                for (const auto& g : tab.groups)
                    groups.push_back({{"members", g.members},
                                      {"n", g.code_n},
                                      {"k", g.code_k}});
                tj["groups"] = groups;
                return tj;
            };
            tdoc["table_a"] = table_json(tables.a);
            tdoc["table_b"] = table_json(tables.b);
            nb_doc[side == 0 ? "target_1" : "target_k2"] = tdoc;
        }
        doc["nb"] = nb_doc;
    }
    write_output(doc.dump(2) + "\n", out_path, out);
    return 0;
}

int cmd_retrieve(const ParamFlags& flags, const std::string& scheme_flag,
                 int target, std::uint64_t seed, const std::string& transport_flag,
                 int port_base, const std::string& format, std::ostream& out) {
    const SystemParams p = flags.to_params();
    if (target < 1 || target > p.k2)
        throw ParamError("--target must lie in 1..K2");

    Scheme scheme = Scheme::NS;
    bool tie = false;
    if (scheme_flag == "ns") {
        scheme = Scheme::NS;
    } else if (scheme_flag == "nb") {
        scheme = Scheme::NB;
    } else if (scheme_flag == "auto") {
        const capacity::Winner w = capacity::best_scheme(p);
        tie = w == capacity::Winner::Tie;
        scheme = (w == capacity::Winner::NB && nb::supported(p)) ? Scheme::NB
                                                                 : Scheme::NS;
    } else {
        throw ParamError("--scheme must be ns, nb, or auto");
    }
    if (scheme == Scheme::NB && !nb::supported(p))
        throw ParamError("the block scheme needs K1 < K2; use --scheme ns");

    const net::Transport transport = [&] {
        if (transport_flag == "inproc") return net::Transport::InProc;
        if (transport_flag == "tcp") return net::Transport::TcpLoopback;
        throw ParamError("--transport must be inproc or tcp");
    }();

    const std::uint64_t q = scheme == Scheme::NS ? ns::effective_modulus(p)
                                                 : nb::effective_modulus(p);
    const long long msg_len = scheme == Scheme::NS ? ns::message_length(p)
                                                   : nb::message_length(p);
    net::ServerPool pool(net::random_messages(p.k2, msg_len, q, seed), p.n_servers,
                         q, transport, static_cast<std::uint16_t>(port_base));
    const net::RetrievalTranscript tr = net::retrieve(pool, p, scheme, target, seed);
    const Rational rate(BigInt(tr.message_len), BigInt(tr.downloaded_symbols));

    if (format == "json") {
        json doc{{"params", p.label()},
                 {"scheme", scheme_name(scheme)},
                 {"auto_tie", tie},
                 {"target", target},
                 {"seed", seed},
                 {"transport", transport_flag},
                 {"message_length", tr.message_len},
                 {"modulus", tr.modulus},
                 {"downloaded_symbols", tr.downloaded_symbols},
                 {"symbols_per_server", tr.symbols_per_server},
                 {"uploaded_bytes", tr.uploaded_bytes},
                 {"downloaded_bytes", tr.downloaded_bytes},
                 {"uploaded_bytes_per_server", tr.uploaded_bytes_per_server},
                 {"downloaded_bytes_per_server", tr.downloaded_bytes_per_server},
                 {"rate", rational_json(rate)},
                 {"recovered_hash", tr.recovered_hash},
                 {"recovery_ok", tr.recovered_ok},
                 {"wall_seconds", tr.wall_seconds}};
        out << doc.dump(2) << "\n";
    } else {
        out << "downloaded " << tr.downloaded_symbols << " symbols ("
            << tr.symbols_per_server[0] << " per server), rate "
            << rate.to_fraction_string() << ", recovery "
            << (tr.recovered_ok ? "OK" : "FAILED") << "\n";
        out << "scheme " << scheme_name(scheme);
        if (scheme_flag == "auto")
            out << " (auto" << (tie ? ", tie between ns and nb" : "") << ")";
        out << ", target " << target << ", seed " << seed << ", transport "
            << transport_flag << ", L=" << tr.message_len << ", q=" << tr.modulus
            << "\n";
    }
    return tr.recovered_ok ? 0 : 1;
}

int cmd_audit(const ParamFlags& flags, const std::string& scheme_flag,
              const std::string& protect, int level_flag, std::uint64_t seed,
              bool broken, const std::string& format, const std::string& out_path,
              std::ostream& out) {
    const SystemParams p = flags.to_params();
    audit::AuditTarget target;
    target.params = p;
    if (scheme_flag == "ns") {
        target.scheme = Scheme::NS;
    } else if (scheme_flag == "nb") {
        target.scheme = Scheme::NB;
        if (!nb::supported(p))
            throw ParamError("the block scheme needs K1 < K2; audit ns instead");
    } else {
        throw ParamError("--scheme must be ns or nb");
    }
    const int upto = protect == "high" ? p.k1 : p.k2;
    if (protect != "high" && protect != "all")
        throw ParamError("--protect must be high or all");
    for (int k = 1; k <= upto; ++k) target.protected_set.push_back(k);
    target.level = level_flag > 0 ? level_flag : (protect == "high" ? p.t1 : p.t2);
    if (target.level > p.n_servers)
        throw ParamError("--level cannot exceed the number of servers");

    audit::AuditReport rep;
    if (broken) {
        std::vector<QueryPlan> plans;
        for (int k : target.protected_set)
            plans.push_back(audit::broken_plan(p, k));
        rep = audit::audit_plans(plans, target.level);
    } else {
        rep = audit::audit(target, {seed});
    }

    std::string text;
    if (format == "json") {
        json doc{{"params", p.label()},
                 {"scheme", scheme_flag},
                 {"broken_fixture", broken},
                 {"protected_set", target.protected_set},
                 {"level", target.level},
                 {"pattern_ok", rep.pattern_ok},
                 {"positions_ok", rep.positions_ok},
                 {"checks", rep.entries.size()},
                 {"passed", rep.passed},
                 {"justification", rep.justification}};
        if (rep.first_counterexample)
            doc["first_counterexample"] = *rep.first_counterexample;
        json entries = json::array();
        for (const auto& e : rep.entries) {
            entries.push_back({{"k_star", e.k_star},
                               {"msg", e.msg},
                               {"colluders", e.colluders},
                               {"rows", e.rows},
                               {"rank", e.rank},
                               {"required", e.required},
                               {"equal_blocks", e.equal_blocks},
                               {"ok", e.ok}});
        }
        doc["entries"] = entries;
        text = doc.dump(2) + "\n";
    } else {
        std::ostringstream s;
        s << "audit " << scheme_flag << " " << p.label() << " S=1:" << upto
          << " T=" << target.level << (broken ? " (broken fixture)" : "") << ": "
          << (rep.passed ? "PASS" : "FAIL") << "\n";
        s << "  pattern identical: " << (rep.pattern_ok ? "yes" : "no") << "\n";
        s << "  rank/equality checks: " << rep.entries.size() << "\n";
        if (rep.first_counterexample)
            s << "  first counterexample: " << *rep.first_counterexample << "\n";
        text = s.str();
    }
    write_output(text, out_path, out);
    return rep.passed ? 0 : 1;
}

int cmd_sweep(const std::string& vary, int from, int to, int n, int t1, int t2,
              int k1, int k2, int k2_minus_k1, const std::string& out_path,
              std::ostream& out) {
    capacity::SweepSpec spec;
    if (vary == "k1") {
        spec.vary = capacity::SweepSpec::Vary::K1;
        spec.k2_minus_k1 = k2_minus_k1;
        if (t1 <= 0) throw ParamError("--t1 is required when varying k1");
    } else if (vary == "t1") {
        spec.vary = capacity::SweepSpec::Vary::T1;
        if (k1 <= 0 || k2 <= 0)
            throw ParamError("--k1 and --k2 are required when varying t1");
    } else {
        throw ParamError("--vary must be k1 or t1");
    }
    spec.lo = from;
    spec.hi = to;
    spec.n_servers = n;
    spec.t1 = t1;
    spec.t2 = t2;
    spec.k1 = k1;
    spec.k2 = k2;
    const auto rows = capacity::sweep(spec);
    write_output(capacity::sweep_csv(rows), out_path, out);
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"two-level private information retrieval toolkit"};
    app.require_subcommand(1);

    ParamFlags rates_flags;
    std::string rates_format = "text";
    CLI::App* rates = app.add_subcommand("rates", "exact rates and bounds");
    add_param_flags(rates, rates_flags);
    rates->add_option("--format", rates_format, "text or json");

    ParamFlags params_flags;
    std::string params_out;
    CLI::App* params = app.add_subcommand("params", "coding-group parameter table");
    add_param_flags(params, params_flags);
    params->add_option("--out", params_out, "write JSON to a file");

    ParamFlags retr_flags;
    std::string retr_scheme = "auto", retr_transport = "inproc",
                retr_format = "text";
    int retr_target = 1;
    int retr_port_base = 38470;
    std::uint64_t retr_seed = 0;
    CLI::App* retr = app.add_subcommand("retrieve", "run one retrieval end to end");
    add_param_flags(retr, retr_flags);
    retr->add_option("--scheme", retr_scheme, "ns, nb, or auto");
    retr->add_option("--target", retr_target, "message index to retrieve (1..K2)")
        ->required();
    CLI::Option* retr_seed_opt = retr->add_option("--seed", retr_seed, "64-bit seed");
    retr->add_option("--transport", retr_transport, "inproc or tcp");
    retr->add_option("--port-base", retr_port_base, "first TCP port (server 1)");
    retr->add_option("--format", retr_format, "text or json");

    ParamFlags audit_flags;
    std::string audit_scheme = "ns", audit_protect = "high", audit_format = "text",
                audit_out;
    int audit_level = 0;
    std::uint64_t audit_seed = 0;
    bool audit_broken = false;
    CLI::App* audit_cmd = app.add_subcommand("audit", "structural privacy audit");
    add_param_flags(audit_cmd, audit_flags);
    audit_cmd->add_option("--scheme", audit_scheme, "ns or nb");
    audit_cmd->add_option("--protect", audit_protect,
                          "high (S=1:K1, T=T1) or all (S=1:K2, T=T2)");
    audit_cmd->add_option("--level", audit_level, "override the audited level T");
    CLI::Option* audit_seed_opt =
        audit_cmd->add_option("--seed", audit_seed, "seed for the invariance check");
    audit_cmd->add_flag("--broken", audit_broken,
                        "audit the deliberately non-private fixture");
    audit_cmd->add_option("--format", audit_format, "text or json");
    audit_cmd->add_option("--out", audit_out, "write the report to a file");

    std::string sweep_vary, sweep_out;
    int sweep_from = 0, sweep_to = -1, sweep_n = 0, sweep_t1 = 0, sweep_t2 = 0,
        sweep_k1 = 0, sweep_k2 = 0, sweep_off = 0;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "rate sweep as CSV");
    sweep_cmd->add_option("--vary", sweep_vary, "k1 or t1")->required();
    sweep_cmd->add_option("--from", sweep_from, "first value")->required();
    sweep_cmd->add_option("--to", sweep_to, "last value")->required();
    sweep_cmd->add_option("--n", sweep_n, "number of servers")->required();
    sweep_cmd->add_option("--t1", sweep_t1, "high privacy level");
    sweep_cmd->add_option("--t2", sweep_t2, "base privacy level")->required();
    sweep_cmd->add_option("--k1", sweep_k1, "high-privacy message count");
    sweep_cmd->add_option("--k2", sweep_k2, "total message count");
    sweep_cmd->add_option("--k2-minus-k1", sweep_off,
                          "keep K2 = K1 + this offset when varying k1");
    sweep_cmd->add_option("--out", sweep_out, "write CSV to a file");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help and friends.
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (rates->parsed()) return cmd_rates(rates_flags, rates_format, out);
        if (params->parsed()) return cmd_params(params_flags, params_out, out);
        if (retr->parsed())
            return cmd_retrieve(retr_flags, retr_scheme, retr_target,
                                retr_seed_opt->count() ? retr_seed : default_seed(),
                                retr_transport, retr_port_base, retr_format, out);
        if (audit_cmd->parsed())
            return cmd_audit(audit_flags, audit_scheme, audit_protect, audit_level,
                             audit_seed_opt->count() ? audit_seed : default_seed(),
                             audit_broken, audit_format, audit_out, out);
        if (sweep_cmd->parsed())
            return cmd_sweep(sweep_vary, sweep_from, sweep_to, sweep_n, sweep_t1,
                             sweep_t2, sweep_k1, sweep_k2, sweep_off, sweep_out,
                             out);
        err << "error: no subcommand\n";
        return 2;
    } catch (const ParamError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace pir2::cli
