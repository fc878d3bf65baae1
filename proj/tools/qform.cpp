// Command-line surface for the binary-quadratic-form library and the sieve
// experiment harness.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "qform/experiments.hpp"

using namespace qform;

namespace {

std::string map_str(const UnimodularMap& u) {
    return "[" + to_string(u.p) + "," + to_string(u.q) + ";" + to_string(u.r) +
           "," + to_string(u.s) + "]";
}

SieveTables tables_for(const std::string& explicit_path, u64 needed) {
    std::string path = explicit_path;
    if (path.empty()) {
        const char* env = std::getenv("QFORM_TABLES");
        if (env) path = env;
    }
    if (!path.empty()) {
        SieveTables t = load_sieve(path);
        if (t.limit < needed)
            throw std::invalid_argument(
                "sieve tables at " + path + " stop at " +
                std::to_string(t.limit) + " but " + std::to_string(needed) +
                " is needed; rebuild with `qform sieve build`");
        return t;
    }
    return build_sieve(std::max<u64>(needed, 1000));
}

// Smallest valid composition exponent, scanning the residue class b (mod 2a).
i128 derive_exponent(const Form& f, const Form& F) {
    i128 delta = -discriminant(F);
    for (i128 j = 0; j < F.a; ++j) {
        i128 B = f.b + 2 * f.a * j;
        if (mod_floor(B - F.b, 2 * F.a) != 0) continue;
        if (mod_floor(B * B + delta, 4 * f.a * F.a) != 0) continue;
        return mod_floor(B, 2 * f.a * F.a);
    }
    throw std::invalid_argument(
        "no valid composition exponent exists for these forms");
}

int run(int argc, char** argv) {
    CLI::App app{"binary quadratic form algebra and sieve experiments"};
    app.require_subcommand(1);

    std::string form_s, form2_s, out_path, tables_path, config_path, csv_path;
    std::string lambda_kind = "constant-one";
    i64 disc = 0, d_arg = 1, res_a = 0, res_b = 1, m_arg = 0, n_arg = 0,
        X_arg = 0, Y_arg = 0, max_arg = 300;
    i128 B_arg = 0;
    bool have_B = false;
    u64 q_arg = 1, pmax = 1000000, limit = 0, budget = 100000, seed = 1;

    auto* c_reduce = app.add_subcommand("reduce", "Gauss-reduce a form");
    c_reduce->add_option("--form", form_s, "form a,b,c")->required();

    auto* c_equiv =
        app.add_subcommand("equivalent", "proper-equivalence witness");
    c_equiv->add_option("--form1", form_s)->required();
    c_equiv->add_option("--form2", form2_s)->required();

    auto* c_cg = app.add_subcommand("classgroup",
                                    "reduced forms of a discriminant");
    c_cg->add_option("--disc", disc, "negative discriminant")->required();

    auto* c_comp = app.add_subcommand("compose", "Dirichlet composition");
    c_comp->add_option("--form1", form_s)->required();
    c_comp->add_option("--form2", form2_s)->required();
    auto* bopt = c_comp->add_option_function<std::string>(
        "--B", [&](const std::string& s) { B_arg = parse_i128(s); have_B = true; },
        "composition exponent (derived if omitted)");
    (void)bopt;

    auto* c_ctx = app.add_subcommand("ctx", "composition context");
    auto* c_ctx_build = c_ctx->add_subcommand("build", "construct and emit JSON");
    c_ctx_build->add_option("--form", form_s)->required();
    c_ctx_build->add_option("--out", out_path, "output path (default stdout)");
    c_ctx_build->add_option("--budget", budget, "prime search budget");

    auto* c_sieve = app.add_subcommand("sieve", "sieve tables");
    auto* c_sieve_build = c_sieve->add_subcommand("build", "build and save");
    c_sieve_build->add_option("--limit", limit)->required();
    c_sieve_build->add_option("--out", out_path)->required();

    auto* c_rho = app.add_subcommand("rho", "local root count rho(d)");
    c_rho->add_option("--form", form_s)->required();
    c_rho->add_option("--d", d_arg)->required();
    bool rho_ab_mode = false;
    c_rho->add_flag("--ab", rho_ab_mode, "count F(b, nu) = a (mod d) instead");
    c_rho->add_option("--a", res_a, "target residue (with --ab)");
    c_rho->add_option("--b", res_b, "first argument (with --ab)");
    c_rho->add_option("--tables", tables_path);

    auto* c_hfq = app.add_subcommand("hfq", "partial Euler product H_{F,q}");
    c_hfq->add_option("--form", form_s)->required();
    c_hfq->add_option("--q", q_arg);
    c_hfq->add_option("--pmax", pmax);
    c_hfq->add_option("--tables", tables_path);

    auto* c_amn = app.add_subcommand(
        "amn-check", "verify the decomposition identity for a_{mn}");
    c_amn->add_option("--form", form_s)->required();
    c_amn->add_option("--max", max_arg, "check all coprime m,n up to this");
    c_amn->add_option("--lambda", lambda_kind,
                      "constant-one | von-mangoldt | prime-indicator | random");
    c_amn->add_option("--seed", seed);
    c_amn->add_option("--tables", tables_path);

    auto* c_dec = app.add_subcommand("decompose",
                                     "decompose a representation F(X,Y)=m*n");
    c_dec->add_option("--form", form_s)->required();
    c_dec->add_option("--m", m_arg)->required();
    c_dec->add_option("--n", n_arg)->required();
    c_dec->add_option("--X", X_arg)->required();
    c_dec->add_option("--Y", Y_arg)->required();
    std::string ctx_path;
    c_dec->add_option("--ctx", ctx_path, "context JSON (built if omitted)");

    auto* c_exp = app.add_subcommand("experiment", "run a measured experiment");
    c_exp->add_option("name", form2_s,
                      "theorem1 | corollary2 | level | bilinear | fi-check")
        ->required();
    c_exp->add_option("--config", config_path, "config JSON")->required();
    c_exp->add_option("--out", out_path, "report path (default stdout)");
    c_exp->add_option("--csv", csv_path, "also emit a flat CSV table");
    c_exp->add_option("--tables", tables_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);  // prints the help text or the parse error
        return code == 0 ? 0 : 1;
    }

    if (c_reduce->parsed()) {
        auto [g, U] = reduce(parse_form(form_s));
        std::cout << g.str() << "\n" << map_str(U) << "\n";
    } else if (c_equiv->parsed()) {
        auto w = properly_equivalent(parse_form(form_s), parse_form(form2_s));
        if (w)
            std::cout << "equivalent " << map_str(*w) << "\n";
        else
            std::cout << "not-equivalent\n";
    } else if (c_cg->parsed()) {
        auto classes = enumerate_reduced_forms(i128(disc));
        std::cout << "h = " << classes.size() << "\n";
        for (const auto& f : classes) std::cout << f.str() << "\n";
    } else if (c_comp->parsed()) {
        Form f = parse_form(form_s), g = parse_form(form2_s);
        i128 B = have_B ? B_arg : derive_exponent(f, g);
        Form h = dirichlet_compose(f, g, B);
        std::cout << h.str() << "\n";
        std::cout << "B = " << to_string(B) << "\n";
        std::cout << "reduced = " << reduce(h).first.str() << "\n";
    } else if (c_ctx_build->parsed()) {
        CompositionContext ctx = build_context(parse_form(form_s), budget);
        json j = context_to_json(ctx);
        if (out_path.empty())
            std::cout << j.dump(2) << "\n";
        else
            save_json_file(j, out_path);
    } else if (c_sieve_build->parsed()) {
        save_sieve(build_sieve(limit), out_path);
        std::cout << "wrote " << out_path << "\n";
    } else if (c_rho->parsed()) {
        Form F = parse_form(form_s);
        if (d_arg < 1) throw std::invalid_argument("rho: d must be positive");
        SieveTables t = tables_for(tables_path, u64(d_arg));
        if (rho_ab_mode)
            std::cout << rho_ab(u64(d_arg), res_a, res_b, F, t) << "\n";
        else
            std::cout << rho(u64(d_arg), F, t) << "\n";
    } else if (c_hfq->parsed()) {
        Form F = parse_form(form_s);
        SieveTables t = tables_for(tables_path, pmax);
        CompositionContext ctx = build_context(F);
        auto [v, tail] = h_fq(F, q_arg, ctx, pmax, t);
        std::cout << "H_Fq = " << v << "\n";
        std::cout << "tail = " << tail << "\n";
    } else if (c_amn->parsed()) {
        Form F = parse_form(form_s);
        CompositionContext ctx = build_context(F);
        SieveTables t = tables_for(tables_path, u64(max_arg) * u64(max_arg));
        LambdaSpec lambda;
        if (lambda_kind == "random") {
            std::vector<double> vals(size_t(4 * max_arg) + 1, 0.0);
            u64 state = seed * 6364136223846793005ull + 1442695040888963407ull;
            for (size_t i = 1; i < vals.size(); ++i) {
                state = state * 6364136223846793005ull + 1442695040888963407ull;
                vals[i] = double(i64(state >> 56) - 128);
            }
            lambda = LambdaSpec::from_table(std::move(vals), 1.0, 1000.0);
        } else {
            LambdaSpec::Kind k = LambdaSpec::parse_kind(lambda_kind);
            lambda.kind = k;
        }
        i64 checked = 0;
        double maxdiff = 0.0;
        for (i64 m = 1; m <= max_arg; ++m) {
            if (!ctx.coprime_to_pf(u128(m))) continue;
            for (i64 n = 1; n <= max_arg; ++n) {
                if (gcd128(m, n) != 1) continue;
                if (!ctx.coprime_to_pf(u128(i128(m) * i128(n)))) continue;
                double via = amn_via_decomposition(m, n, lambda, ctx, &t);
                double direct =
                    a_value_direct(F, i128(m) * i128(n), lambda, &t);
                maxdiff = std::max(maxdiff, std::abs(via - direct));
                ++checked;
            }
        }
        std::cout << "checked = " << checked << "\n";
        std::cout << "max |difference| = " << maxdiff << "\n";
        if (maxdiff > 1e-9)
            throw std::runtime_error("a_{mn} identity mismatch (fatal)");
    } else if (c_dec->parsed()) {
        Form F = parse_form(form_s);
        CompositionContext ctx =
            ctx_path.empty() ? build_context(F) : load_context(ctx_path);
        if (ctx.F != F)
            throw std::invalid_argument("context form does not match --form");
        auto tuples = decompose_representation(m_arg, n_arg, X_arg, Y_arg, ctx);
        for (const auto& t : tuples)
            std::cout << "f=" << t.f.str() << " u=" << to_string(t.u)
                      << " v=" << to_string(t.v) << " w=" << to_string(t.w)
                      << " z=" << to_string(t.z) << "\n";
    } else if (c_exp->parsed()) {
        json cj = load_json_file(config_path);
        cj["experiment"] = form2_s;
        ExperimentConfig cfg = parse_config(cj);
        cfg.experiment = form2_s;
        u64 needed = std::max<u64>(u64(cfg.X), cfg.pmax);
        SieveTables t = tables_for(tables_path, needed);
        ExperimentReport rep = run_experiment(cfg, t);
        json rj = rep.to_json();
        if (out_path.empty())
            std::cout << rj.dump(2) << "\n";
        else
            save_json_file(rj, out_path);
        if (!csv_path.empty()) {
            std::ofstream csv(csv_path);
            csv << rep.to_csv();
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
