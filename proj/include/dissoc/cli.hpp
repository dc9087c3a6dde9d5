#pragma once

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>

#include "dissoc/io.hpp"

namespace dissoc {

namespace detail {

inline bool scalar_array(const Json& a) {
    for (const auto& v : a)
        if (v.is_structured()) return false;
    return true;
}

// Human-oriented rendering of the same structure the JSON format emits.
inline void render_text(const Json& j, std::ostream& out, int indent = 0) {
    std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    for (const auto& [key, value] : j.items()) {
        if (value.is_object()) {
            out << pad << key << ":\n";
            render_text(value, out, indent + 1);
        } else if (value.is_array() && !scalar_array(value)) {
            out << pad << key << ":\n";
            for (const auto& item : value) {
                if (item.is_object()) {
                    out << pad << "  -\n";
                    render_text(item, out, indent + 2);
                } else {
                    out << pad << "  - " << item.dump() << "\n";
                }
            }
        } else {
            out << pad << key << ": " << value.dump() << "\n";
        }
    }
}

}  // namespace detail

// One instance backs every subcommand; only the parsed subcommand reads
// from it.
struct CliOptions {
    std::string group, elements, file, target, lambda, mset;
    std::string order = "input";
    std::string method = "nullcomb";
    std::string format = "json";
    std::uint64_t seed = kDefaultSeed;
    unsigned max_k = 0;  // 0 = library defaults
    unsigned m = 0, n = 0, trials = 0, plus = 0, minus = 0, ambient = 0;
    std::optional<unsigned> n_opt;
    std::uint64_t budget = 100000000;
    std::size_t instances = 100, set_size = 8;
    long long range = 100;
};

// Parses argv and runs one subcommand. Exit codes: 0 on success
// (negative findings such as dissociated:false are still success), 1
// when a checked property fails or a search for a representation or
// candidate comes up empty, 2 on usage, input, or limit errors.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CliOptions o;
    CLI::App app{"dissociated-set toolkit: testers, bases, bounds, and searches "
                 "over abelian groups"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", o.format, "output format: json or text")
            ->check(CLI::IsMember({"json", "text"}));
        sub->add_option("--max-k", o.max_k, "override every size limit with this value");
        sub->add_option("--seed", o.seed, "RNG seed (fixed default, never wall-clock)");
    };
    auto add_input = [&](CLI::App* sub) {
        sub->add_option("--group", o.group, "group descriptor: free:<n> or mod:<e>^<k>")
            ->required();
        sub->add_option("--elements", o.elements, "inline elements: \"a,b;c,d\"");
        sub->add_option("--file", o.file, "element file: one element per line");
    };

    CLI::App* c_check = app.add_subcommand("check", "test whether a set is dissociated");
    add_input(c_check);
    add_common(c_check);
    c_check->add_option("--method", o.method, "tester: nullcomb (3^k) or sums (2^k)")
        ->check(CLI::IsMember({"nullcomb", "sums"}));

    CLI::App* c_basis = app.add_subcommand("basis", "greedy maximal dissociated subset");
    add_input(c_basis);
    add_common(c_basis);
    c_basis->add_option("--order", o.order, "scan order: input, lex, reverse, random")
        ->check(CLI::IsMember({"input", "lex", "reverse", "random"}));

    CLI::App* c_dec = app.add_subcommand("decompose",
                                         "express a target over a dissociated set");
    add_input(c_dec);
    add_common(c_dec);
    c_dec->add_option("--target", o.target, "target element \"a,b\"")->required();

    CLI::App* c_max = app.add_subcommand("maximal-all",
                                         "enumerate all maximal dissociated subsets");
    add_input(c_max);
    add_common(c_max);

    CLI::App* c_b2 = app.add_subcommand("bound2",
                                        "compare two maximal dissociated subsets");
    add_input(c_b2);
    add_common(c_b2);
    c_b2->add_option("--lambda", o.lambda, "inline Lambda (default: greedy, input order)");
    c_b2->add_option("--mset", o.mset, "inline M (default: greedy, reverse order)");

    CLI::App* c_b3 = app.add_subcommand("bound3",
                                        "rank bounds for a maximal subset in Z_e^k");
    add_input(c_b3);
    add_common(c_b3);
    c_b3->add_option("--lambda", o.lambda, "inline Lambda (default: greedy, input order)");

    CLI::App* c_rank = app.add_subcommand("rank", "rank of the generated subgroup in Z_e^k");
    add_input(c_rank);
    add_common(c_rank);

    CLI::App* c_orth = app.add_subcommand("orth-prob",
                                          "orthogonality probability of a vector type");
    add_common(c_orth);
    c_orth->add_option("--plus", o.plus, "count of +1 entries")->required();
    c_orth->add_option("--minus", o.minus, "count of -1 entries")->required();
    c_orth->add_option("--ambient", o.ambient, "ambient dimension (default: plus+minus)");

    CLI::App* c_ub = app.add_subcommand("union-bound", "failure-probability union bound");
    add_common(c_ub);
    c_ub->add_option("--m", o.m, "target set size")->required();
    c_ub->add_option("--n", o.n, "ambient dimension")->required();

    CLI::App* c_minn = app.add_subcommand("minimal-n",
                                          "least n whose union bound passes");
    add_common(c_minn);
    c_minn->add_option("--m", o.m, "target set size")->required();

    CLI::App* c_con = app.add_subcommand("construct",
                                         "randomized dissociated subset of {0,1}^n");
    add_common(c_con);
    c_con->add_option("--m", o.m, "target set size")->required();
    c_con->add_option("--n", o.n_opt, "ambient dimension (default: minimal-n)");
    c_con->add_option("--trials", o.trials, "candidate budget")->default_val(100u);

    CLI::App* c_sr = app.add_subcommand("success-rate",
                                        "empirical covering-check success rate");
    add_common(c_sr);
    c_sr->add_option("--m", o.m, "target set size")->required();
    c_sr->add_option("--n", o.n, "ambient dimension")->required();
    c_sr->add_option("--trials", o.trials, "sample count")->default_val(200u);

    CLI::App* c_ln = app.add_subcommand("ln", "largest dissociated subset of {0,1}^n");
    add_common(c_ln);
    c_ln->add_option("--n", o.n, "dimension")->required();
    c_ln->add_option("--budget", o.budget, "node budget");

    CLI::App* c_md = app.add_subcommand("max-dissoc",
                                        "largest dissociated subset of a given set");
    add_input(c_md);
    add_common(c_md);
    c_md->add_option("--budget", o.budget, "node budget");

    CLI::App* c_st = app.add_subcommand("stress2", "randomized Theorem-2-style stress run");
    add_common(c_st);
    c_st->add_option("--group", o.group, "group descriptor (default free:1)");
    c_st->add_option("--instances", o.instances, "number of random sets")->default_val(100);
    c_st->add_option("--set-size", o.set_size, "size of each random set")->default_val(8);
    c_st->add_option("--range", o.range, "free coordinates drawn from [1, range]")
        ->default_val(100);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    const Limits limits = o.max_k > 0 ? Limits::with_max_k(o.max_k) : Limits::defaults();

    auto config_json = [&](const std::string& command, Json extra) {
        Json c;
        c["command"] = command;
        if (!o.group.empty()) c["group"] = o.group;
        if (!o.elements.empty()) c["elements"] = o.elements;
        if (!o.file.empty()) c["file"] = o.file;
        c["seed"] = o.seed;
        c["format"] = o.format;
        if (o.max_k > 0) c["max_k"] = o.max_k;
        c.update(extra);
        return c;
    };
    auto emit = [&](const Json& doc, int code) {
        if (o.format == "text")
            detail::render_text(doc, out);
        else
            out << doc.dump(2) << "\n";
        return code;
    };
    auto load_set = [&]() {
        if (o.elements.empty() == o.file.empty())
            throw InputError("provide exactly one of --elements and --file");
        GroupSpec g = parse_group(o.group);
        auto rows = o.elements.empty() ? parse_rows_file(o.file)
                                       : parse_rows_inline(o.elements);
        return make_set(g, rows);
    };

    try {
        if (c_check->parsed()) {
            ElementSet set = load_set();
            DissociationResult r = o.method == "sums" ? is_dissociated_sums(set, limits)
                                                      : is_dissociated_nullcomb(set, limits);
            Json doc;
            doc["config"] = config_json("check", Json{{"method", o.method}});
            doc["dissociated"] = r.dissociated;
            if (r.witness) doc["witness"] = witness_json(*r.witness);
            return emit(doc, 0);
        }
        if (c_basis->parsed()) {
            ElementSet A = load_set();
            ElementSet basis = greedy_maximal(A, parse_scan_order(o.order), o.seed, limits);
            Json doc;
            doc["config"] = config_json("basis", Json{{"order", o.order}});
            doc["size"] = basis.size();
            doc["basis"] = set_json(basis);
            return emit(doc, 0);
        }
        if (c_dec->parsed()) {
            ElementSet lambda = load_set();
            if (!is_dissociated_sums(lambda, limits).dissociated)
                throw InputError("decompose requires a dissociated set");
            auto rows = parse_rows_inline(o.target);
            if (rows.size() != 1) throw InputError("--target must hold exactly one element");
            Element target = reduce(lambda.group(), rows.front());
            Json doc;
            doc["config"] = config_json("decompose", Json{{"target", o.target}});
            try {
                CoefficientVector c = decompose(target, lambda, limits);
                doc["representable"] = true;
                doc["c"] = coeff_json(c);
                return emit(doc, 0);
            } catch (const NoRepresentation&) {
                doc["representable"] = false;
                return emit(doc, 1);
            }
        }
        if (c_max->parsed()) {
            ElementSet A = load_set();
            std::vector<ElementSet> all = enumerate_maximal(A, limits);
            Json doc;
            doc["config"] = config_json("maximal-all", Json::object());
            doc["count"] = all.size();
            Json arr = Json::array();
            for (const ElementSet& s : all) arr.push_back(set_json(s));
            doc["maximal_subsets"] = arr;
            return emit(doc, 0);
        }
        if (c_b2->parsed()) {
            ElementSet A = load_set();
            ElementSet lambda = o.lambda.empty()
                                    ? greedy_maximal(A, ScanOrder::input, o.seed, limits)
                                    : make_set(A.group(), parse_rows_inline(o.lambda));
            ElementSet mset = o.mset.empty()
                                  ? greedy_maximal(A, ScanOrder::reverse, o.seed, limits)
                                  : make_set(A.group(), parse_rows_inline(o.mset));
            BoundReport2 rep = check_theorem2(lambda, mset, A, limits);
            Json doc;
            doc["config"] = config_json("bound2", Json{{"lambda", o.lambda}, {"mset", o.mset}});
            doc["lambda"] = set_json(lambda);
            doc["m_set"] = set_json(mset);
            doc["report"] = bound2_json(rep);
            return emit(doc, rep.holds && rep.star_ok ? 0 : 1);
        }
        if (c_b3->parsed()) {
            ElementSet A = load_set();
            ElementSet lambda = o.lambda.empty()
                                    ? greedy_maximal(A, ScanOrder::input, o.seed, limits)
                                    : make_set(A.group(), parse_rows_inline(o.lambda));
            BoundReport3 rep = check_theorem3(A, lambda, limits);
            Json doc;
            doc["config"] = config_json("bound3", Json{{"lambda", o.lambda}});
            doc["lambda"] = set_json(lambda);
            doc["report"] = bound3_json(rep);
            return emit(doc, rep.holds ? 0 : 1);
        }
        if (c_rank->parsed()) {
            ElementSet A = load_set();
            Json doc;
            doc["config"] = config_json("rank", Json::object());
            doc["rank"] = subgroup_rank(A);
            return emit(doc, 0);
        }
        if (c_orth->parsed()) {
            TypeCount tc{o.plus, o.minus, o.ambient > 0 ? o.ambient : o.plus + o.minus};
            Json doc;
            doc["config"] = config_json(
                "orth-prob",
                Json{{"plus", o.plus}, {"minus", o.minus}, {"ambient", tc.m}});
            doc["probability"] = orth_json(orth_probability(tc));
            doc["bound"] = orth_probability_bound(tc);
            doc["population"] = type_population(tc);
            return emit(doc, 0);
        }
        if (c_ub->parsed()) {
            Json doc;
            doc["config"] = config_json("union-bound", Json{{"m", o.m}, {"n", o.n}});
            doc["report"] = union_bound_json(union_bound(o.m, o.n));
            return emit(doc, 0);
        }
        if (c_minn->parsed()) {
            unsigned n = minimal_n(o.m);
            Json doc;
            doc["config"] = config_json("minimal-n", Json{{"m", o.m}});
            doc["minimal_n"] = n;
            doc["report"] = union_bound_json(union_bound(o.m, n));
            return emit(doc, 0);
        }
        if (c_con->parsed()) {
            Json doc;
            doc["config"] = config_json(
                "construct", Json{{"m", o.m},
                                  {"n", o.n_opt ? Json(*o.n_opt) : Json(nullptr)},
                                  {"trials", o.trials}});
            try {
                ConstructResult res = construct(o.m, o.n_opt, o.trials, o.seed, limits);
                doc["n"] = res.n;
                doc["trials_used"] = res.trials_used;
                doc["columns"] = set_json(res.columns);
                doc["rows"] = rows_json(res.rows);
                doc["union_bound"] = union_bound_json(union_bound(o.m, res.n));
                return emit(doc, 0);
            } catch (const ExhaustedTrials& e) {
                doc["error"] = "exhausted_trials";
                doc["failed_trials"] = e.failed_trials;
                return emit(doc, 1);
            }
        }
        if (c_sr->parsed()) {
            SuccessRate r = success_rate(o.m, o.n, o.trials, o.seed, limits);
            Json doc;
            doc["config"] = config_json(
                "success-rate", Json{{"m", o.m}, {"n", o.n}, {"trials", o.trials}});
            doc["trials"] = r.trials;
            doc["successes"] = r.successes;
            doc["rate"] = r.rate;
            doc["union_bound_total"] = union_bound(o.m, o.n).total;
            return emit(doc, 0);
        }
        if (c_ln->parsed()) {
            SearchResult res = largest_binary_dissociated(o.n, o.budget, limits);
            Json doc;
            doc["config"] = config_json("ln", Json{{"n", o.n}, {"budget", o.budget}});
            doc["L"] = res.size;
            doc["exhausted"] = res.exhausted;
            doc["nodes_visited"] = res.nodes_visited;
            doc["best"] = set_json(res.best);
            return emit(doc, 0);
        }
        if (c_md->parsed()) {
            ElementSet A = load_set();
            SearchResult res = max_dissociated(A, o.budget, limits);
            Json doc;
            doc["config"] = config_json("max-dissoc", Json{{"budget", o.budget}});
            doc["result"] = search_json(res);
            return emit(doc, 0);
        }
        if (c_st->parsed()) {
            StressSpec sp{parse_group(o.group.empty() ? "free:1" : o.group), o.instances,
                          o.set_size, o.range, o.seed};
            StressReport rep = theorem2_stress(sp, limits);
            Json doc;
            doc["config"] = config_json("stress2",
                                        Json{{"instances", o.instances},
                                             {"set_size", o.set_size},
                                             {"range", o.range}});
            doc["report"] = stress_json(rep);
            return emit(doc, rep.violations == 0 ? 0 : 1);
        }
        err << "no subcommand selected\n";
        return 2;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const LimitError& e) {
        err << "limit error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace dissoc
