#pragma once

// The llpo command line. run_cli is the whole program; tools/main.cpp only
// forwards argv and the standard streams.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "llpo/llpo.hpp"
#include "llpo/properties.hpp"

namespace llpo {

namespace cli {

enum Exit : int { kOk = 0, kFails = 1, kInputError = 2 };

struct Options {
    bool json = false;
    std::size_t fuel = 1'000'000;
    std::size_t digit_cap = kDefaultDigitCap;
    std::size_t search_cap = 1'000'000;
    std::uint64_t seed = 1;
};

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Program load_valid(const std::string& path, std::ostream& err) {
    Program p;
    try {
        p = load_program(path);
    } catch (const std::exception& e) {
        throw InputError(path + ": " + e.what());
    }
    auto diags = validate_program(p);
    for (const auto& d : diags)
        if (d.severity == Severity::Warning) err << path << ": " << d.to_string() << "\n";
    for (const auto& d : diags)
        if (d.severity == Severity::Error) throw InputError(path + ": " + d.to_string());
    return p;
}

inline Term ground_term(const std::string& text, const Signature& sig) {
    Term t = [&] {
        try {
            return parse_term(text, sig);
        } catch (const std::exception& e) {
            throw InputError(std::string("term: ") + e.what());
        }
    }();
    if (!t.is_ground()) throw InputError("term " + t.to_string() + " is not ground");
    return t;
}

/// The certificate a command should work with: the declared valency and
/// precedence when both are complete and `infer` is off, otherwise a search
/// that keeps whatever was declared (or nothing, under `infer`).
struct Resolution {
    std::optional<Certificate> certificate;
    bool inferred = false;
    std::size_t candidates = 0;
    bool gave_up = false;
    std::vector<RuleFailure> failures;  // declared mode only
};

inline bool fully_declared(const Program& p) { return p.declared_valency() && p.precedence; }

inline Resolution resolve(const Program& p, bool infer, const Options& opt) {
    Resolution r;
    if (!infer && fully_declared(p)) {
        try {
            auto res = check_llpo(p, *p.declared_valency(), *p.precedence);
            r.certificate = std::move(res.certificate);
            r.failures = std::move(res.failures);
        } catch (const PrecedenceError& e) {
            throw InputError(e.what());
        }
        return r;
    }
    r.inferred = true;
    try {
        auto res = infer_certificate(p, opt.search_cap, infer ? SearchConstraints{} : declared_constraints(p));
        r.certificate = std::move(res.certificate);
        r.candidates = res.candidates;
    } catch (const SearchCapExceeded&) {
        r.gave_up = true;
        r.candidates = opt.search_cap;
    }
    return r;
}

inline nlohmann::json failure_json(const Program& p, const RuleFailure& f) {
    nlohmann::json j{{"rule", f.rule + 1}, {"text", p.rules[f.rule].to_string()}};
    if (f.obligation) j["obligation"] = f.obligation->to_string();
    return j;
}

inline void print_certificate(const Certificate& cert, const Program& p, bool proofs, std::ostream& out) {
    out << "valency:";
    for (const auto& f : p.signature.functions()) out << " " << f.name << valency_to_string(cert.valency.of(f.name));
    out << "\nprecedence: " << cert.precedence.to_string() << "\n";
    if (!proofs) return;
    for (std::size_t i = 0; i < cert.proofs.size(); ++i) {
        out << "\nrule " << i + 1 << ": " << p.rules[i].to_string() << "\n";
        render_text(*cert.proofs[i], out, 2);
    }
}

// ---------------------------------------------------------------------------
// Subcommands

inline int cmd_check(const std::string& file, bool infer, bool proofs, const std::string& cert_file,
                     const Options& opt, std::ostream& out, std::ostream& err) {
    Program p = load_valid(file, err);

    if (!cert_file.empty()) {
        std::ifstream in(cert_file);
        if (!in) throw InputError("cannot open " + cert_file);
        Certificate cert;
        try {
            auto j = nlohmann::json::parse(in);
            if (j.contains("certificate")) j = j.at("certificate");
            cert = certificate_from_json(j, p.signature);
        } catch (const std::exception& e) {
            throw InputError(cert_file + ": " + e.what());
        }
        bool ok = verify_certificate(p, cert);
        if (opt.json) out << nlohmann::json{{"program", file}, {"replayed", cert_file}, {"certified", ok}}.dump(2) << "\n";
        else out << (ok ? "certificate replays: certified\n" : "certificate does not replay\n");
        return ok ? kOk : kFails;
    }

    Resolution r = resolve(p, infer, opt);
    if (opt.json) {
        nlohmann::json j{{"program", file},
                         {"certified", r.certificate.has_value()},
                         {"inferred", r.inferred}};
        if (r.inferred) j["candidates"] = r.candidates;
        if (r.gave_up) j["gave_up"] = true;
        if (r.certificate) j["certificate"] = certificate_to_json(*r.certificate);
        auto fails = nlohmann::json::array();
        for (const auto& f : r.failures) fails.push_back(failure_json(p, f));
        j["failures"] = fails;
        out << j.dump(2) << "\n";
        return r.certificate ? kOk : kFails;
    }
    if (r.certificate) {
        out << "certified" << (r.inferred ? " (inferred after " + std::to_string(r.candidates) + " candidates)" : "")
            << "\n";
        print_certificate(*r.certificate, p, proofs, out);
        return kOk;
    }
    if (r.gave_up) {
        out << "search gave up after " << r.candidates << " candidates\n";
    } else if (r.inferred) {
        out << "no certificate in search space (" << r.candidates << " candidates)\n";
    } else {
        out << "not certified under the declared valency and precedence\n";
        for (const auto& f : r.failures) {
            out << "rule " << f.rule + 1 << ": " << p.rules[f.rule].to_string() << "\n";
            if (f.obligation) out << "  unmet: " << f.obligation->to_string() << "\n";
        }
    }
    return kFails;
}

inline int cmd_eval(const std::string& file, const std::string& expr, bool trace, const Options& opt,
                    std::ostream& out, std::ostream& err) {
    Program p = load_valid(file, err);
    Term t = ground_term(expr, p.signature);
    auto run = normalize(p, t, opt.fuel, trace);
    auto ev = cbv_eval(p, t, {}, {opt.fuel, EvalLimits{}.max_depth});
    bool fuel_out = run.status == NormalizeStatus::FuelExhausted;

    if (opt.json) {
        nlohmann::json j{{"term", t.to_string()}, {"steps", run.steps}, {"status", eval_status_name(ev.status)}};
        if (fuel_out) j["status"] = "fuel exhausted";
        j["normal_form"] = run.term.to_string();
        if (ev.status == EvalStatus::Value) {
            j["value"] = ev.value->to_string();
            j["h"] = ev.h;
            j["max_bindings"] = ev.max_bindings;
            j["max_binding_size"] = ev.max_binding_size;
        }
        if (trace) {
            auto steps = nlohmann::json::array();
            for (const auto& s : run.trace)
                steps.push_back({{"rule", s.rule + 1}, {"position", position_to_string(s.position)},
                                 {"term", s.result.to_string()}});
            j["trace"] = steps;
        }
        out << j.dump(2) << "\n";
    } else {
        if (trace) {
            out << t << "\n";
            for (const auto& s : run.trace)
                out << "  -> " << s.result << "   [rule " << s.rule + 1 << " at " << position_to_string(s.position)
                    << "]\n";
        }
        if (fuel_out) {
            out << "fuel exhausted after " << run.steps << " steps; last term " << run.term << "\n";
        } else if (ev.status == EvalStatus::Undefined) {
            out << "undefined (no rule matches " << ev.stuck << ")\n";
        } else if (ev.status != EvalStatus::Value) {
            out << eval_status_name(ev.status) << "\n";
        } else {
            out << *ev.value << "\n";
            out << "steps: " << run.steps << "\n";
            out << "h: " << ev.h << "\n";
            out << "max_bindings: " << ev.max_bindings << "\n";
            out << "max_binding_size: " << ev.max_binding_size << "\n";
        }
    }
    return !fuel_out && ev.status == EvalStatus::Value ? kOk : kFails;
}

inline int cmd_bound(const std::string& file, std::string symbol, std::size_t samples, const Options& opt,
                     std::ostream& out, std::ostream& err) {
    Program p = load_valid(file, err);
    if (symbol.empty()) symbol = p.signature.main();
    if (!p.signature.is_defined(symbol)) throw InputError(symbol + " is not a defined symbol");
    Resolution r = resolve(p, false, opt);
    if (!r.certificate) {
        out << "bound needs a certified program\n";
        return kFails;
    }
    BoundPoly P = bound_poly(p, r.certificate->precedence, symbol);
    nlohmann::json values = nlohmann::json::array();
    std::vector<std::string> lines;
    for (std::size_t n = 1; n <= samples; ++n) {
        std::string v;
        try {
            v = P.eval(mpz_class(static_cast<unsigned long>(n)), opt.digit_cap).to_string();
        } catch (const MagnitudeError& e) {
            v = std::string("exceeds digit cap (") + e.what() + ")";
        }
        values.push_back({{"X", n}, {"P", v}});
        lines.push_back("P(" + std::to_string(n) + ") = " + v);
    }
    if (opt.json) {
        out << nlohmann::json{{"symbol", symbol}, {"d", P.d}, {"rank", P.k}, {"poly", P.to_string()}, {"samples", values}}
                   .dump(2)
            << "\n";
    } else {
        out << "d=" << P.d << ", rank=" << P.k << ", " << P.to_string() << "\n";
        for (const auto& l : lines) out << l << "\n";
    }
    return kOk;
}

inline int cmd_qi(const std::string& file, const std::string& expr, const Options& opt, std::ostream& out,
                  std::ostream& err) {
    Program p = load_valid(file, err);
    Term t = ground_term(expr, p.signature);
    Valency nu;
    Precedence prec;
    if (fully_declared(p)) {
        nu = *p.declared_valency();
        prec = *p.precedence;
    } else {
        Resolution r = resolve(p, false, opt);
        if (!r.certificate) {
            out << "no valency and precedence declared, and none could be inferred\n";
            return kFails;
        }
        nu = r.certificate->valency;
        prec = r.certificate->precedence;
    }
    QIContext ctx = make_qi_context(p, nu, prec, opt.digit_cap);
    try {
        QIValue v = qi(t, p.signature, ctx);
        if (opt.json) out << nlohmann::json{{"term", t.to_string()}, {"d", ctx.d}, {"qi", v.to_string()}}.dump(2) << "\n";
        else out << v << "\n";
    } catch (const MagnitudeError& e) {
        out << "exceeds digit cap: " << e.what() << "\n";
        return kFails;
    }
    return kOk;
}

inline int cmd_compare(const std::string& file, const std::string& ordering, const Options& opt, std::ostream& out,
                       std::ostream& err) {
    Program p = load_valid(file, err);
    std::vector<bool> ok(p.rules.size(), false);
    std::vector<std::string> notes(p.rules.size());
    if (ordering == "llpo") {
        Resolution r = resolve(p, false, opt);
        if (r.certificate) {
            ok.assign(p.rules.size(), true);
        } else if (!r.inferred) {
            ok.assign(p.rules.size(), true);
            for (const auto& f : r.failures) {
                ok[f.rule] = false;
                if (f.obligation) notes[f.rule] = f.obligation->to_string();
            }
        } else {
            for (auto& n : notes) n = r.gave_up ? "search gave up" : "no valency and precedence orders every rule";
        }
    } else {
        Precedence prec = p.precedence ? *p.precedence : [&] {
            std::vector<std::string> all;
            for (const auto& f : p.signature.functions()) all.push_back(f.name);
            return Precedence::from_classes({all});
        }();
        for (std::size_t i = 0; i < p.rules.size(); ++i)
            ok[i] = ordering == "lpo" ? lpo(p.rules[i].rhs, p.rules[i].lhs, p.signature, prec)
                                      : mpo(p.rules[i].rhs, p.rules[i].lhs, p.signature, prec);
    }
    bool all = std::all_of(ok.begin(), ok.end(), [](bool b) { return b; });
    if (opt.json) {
        auto rules = nlohmann::json::array();
        for (std::size_t i = 0; i < p.rules.size(); ++i) {
            nlohmann::json j{{"rule", i + 1}, {"text", p.rules[i].to_string()}, {"oriented", static_cast<bool>(ok[i])}};
            if (!notes[i].empty()) j["note"] = notes[i];
            rules.push_back(j);
        }
        out << nlohmann::json{{"ordering", ordering}, {"all_oriented", all}, {"rules", rules}}.dump(2) << "\n";
    } else {
        for (std::size_t i = 0; i < p.rules.size(); ++i) {
            out << "rule " << i + 1 << ": " << p.rules[i].to_string() << "   " << (ok[i] ? "ok" : "fails") << "\n";
            if (!notes[i].empty()) out << "  " << notes[i] << "\n";
        }
    }
    return all ? kOk : kFails;
}

inline std::vector<std::size_t> parse_tiers(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            out.push_back(std::stoul(item));
        } catch (const std::exception&) {
            throw InputError("bad tier list: " + text);
        }
    }
    return out;
}

inline std::vector<ConstructorDecl> parse_constructors(const std::string& text) {
    std::vector<ConstructorDecl> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        auto slash = item.find('/');
        if (slash == std::string::npos) throw InputError("constructor " + item + " needs name/arity");
        try {
            out.push_back({item.substr(0, slash), std::stoul(item.substr(slash + 1))});
        } catch (const std::exception&) {
            throw InputError("bad constructor " + item);
        }
    }
    return out;
}

inline int cmd_schema(const std::string& kind, SchemaSpec spec, const std::string& tiers, const std::string& cons,
                      const std::string& out_file, const Options& opt, std::ostream& out, std::ostream& err) {
    if (kind == "flat") spec.kind = SchemaKind::Flat;
    else if (kind == "param-subst") spec.kind = SchemaKind::ParamSubst;
    else throw InputError("schema kind must be flat or param-subst");
    if (!tiers.empty()) spec.param_tiers = parse_tiers(tiers);
    if (!cons.empty()) spec.constructors = parse_constructors(cons);
    EmittedSchema emitted;
    try {
        emitted = emit_schema(spec);
    } catch (const SchemaError& e) {
        throw InputError(std::string("schema: ") + e.what());
    } catch (const SignatureError& e) {
        throw InputError(std::string("schema: ") + e.what());
    }
    auto res = check_llpo(emitted.program, emitted.valency, *emitted.program.precedence);
    std::string text = write_program(emitted.program, emitted.valency);
    if (!out_file.empty()) {
        std::ofstream f(out_file);
        if (!f) throw InputError("cannot write " + out_file);
        f << text;
    }
    if (opt.json) {
        nlohmann::json j{{"program", text}, {"certified", res.certified()}};
        if (!out_file.empty()) j["written"] = out_file;
        out << j.dump(2) << "\n";
    } else {
        if (out_file.empty()) out << text;
        else out << "wrote " << out_file << "\n";
        (out_file.empty() ? err : out) << (res.certified() ? "self-check: certified" : "self-check: NOT certified")
                                       << "\n";
    }
    return res.certified() ? kOk : kFails;
}

inline int cmd_verify(const std::string& file, std::size_t min_size, std::size_t max_size, const Options& opt,
                      std::ostream& out, std::ostream& err) {
    Program p = load_valid(file, err);
    Resolution r = resolve(p, false, opt);
    if (!r.certificate) {
        out << "verify needs a certified program\n";
        return kFails;
    }
    auto inputs = main_inputs(p.signature, min_size, max_size);
    auto dec = verify_decrease(p, *r.certificate, inputs, opt.fuel, opt.digit_cap);
    auto space = space_report(p, *r.certificate, inputs, opt.fuel, opt.digit_cap);
    if (opt.json) {
        out << nlohmann::json{{"inputs", inputs.size()},
                              {"decrease",
                               {{"steps", dec.steps},
                                {"root_checks", dec.root_checks},
                                {"unverified", dec.unverified},
                                {"violations", dec.violations}}},
                              {"space",
                               {{"checks", space.checks},
                                {"unverified", space.unverified},
                                {"undefined", space.undefined},
                                {"max_height", space.max_height},
                                {"max_h", space.max_h},
                                {"max_bindings", space.max_bindings},
                                {"max_binding_size", space.max_binding_size},
                                {"violations", space.violations}}}}
                   .dump(2)
            << "\n";
    } else {
        out << inputs.size() << " inputs of total size " << min_size << ".." << max_size << "\n";
        out << "decrease: " << dec.steps << " steps, " << dec.root_checks << " redexes, " << dec.unverified
            << " unverified, " << dec.violations.size() << " violations\n";
        for (const auto& v : dec.violations) out << "  " << v << "\n";
        for (const auto& n : dec.notes) out << "  unverified: " << n << "\n";
        out << "space: " << space.checks << " checks, " << space.unverified << " unverified, "
            << space.violations.size() << " violations; max height " << space.max_height << ", max h " << space.max_h
            << ", max bindings " << space.max_bindings << ", largest binding " << space.max_binding_size << "\n";
        for (const auto& v : space.violations) out << "  " << v << "\n";
    }
    return dec.ok() && space.ok() ? kOk : kFails;
}

inline int cmd_props(std::size_t pairs, const Options& opt, std::ostream& out) {
    auto report = run_ordering_properties(opt.seed, pairs);
    if (opt.json) {
        nlohmann::json j{{"seed", opt.seed}, {"pairs", report.pairs}};
        for (const auto& [name, stats] : report.properties)
            j["properties"][name] = {{"checked", stats.checked}, {"counterexamples", stats.counterexamples}};
        out << j.dump(2) << "\n";
    } else {
        out << "seed " << opt.seed << ", " << report.pairs << " pairs\n";
        for (const auto& [name, stats] : report.properties) {
            out << name << ": " << stats.checked << " checked, " << stats.counterexamples << " counterexamples\n";
            if (!stats.example.empty()) out << "  e.g. " << stats.example << "\n";
        }
    }
    return report.ok() ? kOk : kFails;
}

}  // namespace cli

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Light lexicographic path ordering toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    cli::Options opt;
    app.add_flag("--json", opt.json, "Machine-readable output");
    app.add_option("--fuel", opt.fuel, "Rewrite step budget")->check(CLI::PositiveNumber);
    app.add_option("--digit-cap", opt.digit_cap, "Largest exact number, in decimal digits")->check(CLI::PositiveNumber);
    app.add_option("--search-cap", opt.search_cap, "Certificate candidates to try")->check(CLI::PositiveNumber);
    app.add_option("--seed", opt.seed, "Seed for randomized checks");

    std::string file, expr, ordering = "llpo", symbol, cert_file, tiers, cons, out_file, kind;
    bool infer = false, proofs = false, trace = false, identity = false;
    std::size_t samples = 3, min_size = 1, max_size = 7, pairs = 10'000;
    SchemaSpec spec;

    auto* check = app.add_subcommand("check", "Certify a program");
    check->add_option("file", file, "Program (.trs)")->required();
    check->add_flag("--infer", infer, "Search for a valency and precedence, ignoring declarations");
    check->add_flag("--proof", proofs, "Print a proof tree per rule");
    check->add_option("--certificate", cert_file, "Replay a certificate written by --json");

    auto* eval = app.add_subcommand("eval", "Evaluate a ground term");
    eval->add_option("file", file, "Program (.trs)")->required();
    eval->add_option("-e,--expr", expr, "Ground term")->required();
    eval->add_flag("--trace", trace, "Print each rewrite step");

    auto* bound = app.add_subcommand("bound", "Print the bound polynomial of a symbol");
    bound->add_option("file", file, "Program (.trs)")->required();
    bound->add_option("--symbol", symbol, "Defined symbol (default: main)");
    bound->add_option("--samples", samples, "Evaluate P at 1..N");

    auto* qicmd = app.add_subcommand("qi", "Interpret a ground term");
    qicmd->add_option("file", file, "Program (.trs)")->required();
    qicmd->add_option("-e,--expr", expr, "Ground term")->required();

    auto* cmp = app.add_subcommand("compare", "Orient each rule with a path ordering");
    cmp->add_option("file", file, "Program (.trs)")->required();
    cmp->add_option("--ordering", ordering, "llpo, lpo or mpo")->check(CLI::IsMember({"llpo", "lpo", "mpo"}));

    auto* schema = app.add_subcommand("schema", "Emit a recursion schema as a program");
    schema->add_option("kind", kind, "flat or param-subst")->required();
    schema->add_option("--m", spec.branches, "Recursive calls in the step case");
    schema->add_option("--n", spec.params, "Side parameters");
    schema->add_option("--p-tier", spec.recursion_tier, "Tier of the recursion argument");
    schema->add_option("--out-tier", spec.output_tier, "Output tier");
    schema->add_option("--param-tiers", tiers, "Comma-separated tiers of the side parameters");
    schema->add_option("--constructors", cons, "Constructors, e.g. b/0,c/1");
    schema->add_flag("--identity", identity, "Pass parameters unchanged to recursive calls");
    schema->add_option("--out", out_file, "Write the program here");

    auto* verify = app.add_subcommand("verify", "Check interpretation decrease and space bounds on all small inputs");
    verify->add_option("file", file, "Program (.trs)")->required();
    verify->add_option("--min-size", min_size, "Smallest total input size");
    verify->add_option("--max-size", max_size, "Largest total input size");

    auto* props = app.add_subcommand("props", "Randomized ordering properties");
    props->add_option("--pairs", pairs, "Random term pairs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? cli::kOk : cli::kInputError;
    }

    try {
        if (*check) return cli::cmd_check(file, infer, proofs, cert_file, opt, out, err);
        if (*eval) return cli::cmd_eval(file, expr, trace, opt, out, err);
        if (*bound) return cli::cmd_bound(file, symbol, samples, opt, out, err);
        if (*qicmd) return cli::cmd_qi(file, expr, opt, out, err);
        if (*cmp) return cli::cmd_compare(file, ordering, opt, out, err);
        if (*schema) {
            spec.identity_substitutions = identity;
            return cli::cmd_schema(kind, spec, tiers, cons, out_file, opt, out, err);
        }
        if (*verify) return cli::cmd_verify(file, min_size, max_size, opt, out, err);
        if (*props) return cli::cmd_props(pairs, opt, out);
    } catch (const cli::InputError& e) {
        err << "error: " << e.what() << "\n";
        return cli::kInputError;
    } catch (const FuelExhausted& e) {
        err << "error: " << e.what() << "\n";
        return cli::kFails;
    } catch (const MagnitudeError& e) {
        err << "error: " << e.what() << "\n";
        return cli::kFails;
    }
    return cli::kInputError;
}

}  // namespace llpo
