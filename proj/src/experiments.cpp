#include "qform/experiments.hpp"

#include <algorithm>
#include <cmath>

namespace qform {

std::vector<i64> ExperimentConfig::x_grid() const {
    if (!grid.empty()) return grid;
    std::vector<i64> g;
    if (X / 100 >= 1) g.push_back(X / 100);
    if (X / 10 >= 1 && X / 10 != X / 100) g.push_back(X / 10);
    if (X >= 1 && X != X / 10) g.push_back(X);
    return g;
}

ExperimentConfig parse_config(const json& j) {
    ExperimentConfig cfg;
    cfg.experiment = j.value("experiment", "");
    if (j.contains("form")) cfg.F = form_from_json(j.at("form"));
    cfg.X = j.value("X", i64(100000));
    cfg.q = j.value("q", u64(1));
    cfg.a = j.value("a", i64(0));
    cfg.b = j.value("b", i64(0));
    cfg.D = j.value("D", i64(0));
    cfg.Y = j.value("Y", 0.0);
    cfg.Z = j.value("Z", 0.0);
    cfg.pmax = j.value("pmax", u64(1000000));
    cfg.chi_index = j.value("chi_index", 0);
    cfg.threads = j.value("threads", 1u);
    cfg.seed = j.value("seed", u64(1));
    cfg.ctx_path = j.value("ctx", std::string());
    if (j.contains("grid")) cfg.grid = j.at("grid").get<std::vector<i64>>();
    if (j.contains("lambda")) {
        const json& lj = j.at("lambda");
        auto kind = LambdaSpec::parse_kind(lj.value("kind", "constant-one"));
        switch (kind) {
            case LambdaSpec::Kind::ConstantOne:
                cfg.lambda = LambdaSpec::constant_one();
                break;
            case LambdaSpec::Kind::VonMangoldt:
                cfg.lambda = LambdaSpec::von_mangoldt();
                break;
            case LambdaSpec::Kind::PrimeIndicator:
                cfg.lambda = LambdaSpec::prime_indicator();
                break;
            case LambdaSpec::Kind::Table: {
                std::vector<double> vals =
                    lj.at("values").get<std::vector<double>>();
                cfg.lambda = LambdaSpec::from_table(
                    std::move(vals), lj.value("A", 1.0), lj.value("C", 64.0));
                break;
            }
        }
        if (lj.contains("mod_q"))
            cfg.lambda = cfg.lambda.restricted(lj.value("mod_b", i64(0)),
                                               lj.value("mod_q", u64(0)));
    }
    // Preconditions of the owning operations.
    if (cfg.X < 1) throw std::invalid_argument("config: X must be positive");
    if (cfg.q < 1) throw std::invalid_argument("config: q must be positive");
    if (!is_positive_definite(cfg.F) || !is_primitive(cfg.F))
        throw std::invalid_argument(
            "config: form must be primitive positive definite");
    if (i64(cfg.q) > cfg.X) throw std::invalid_argument("config: need X >= q");
    return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["experiment"] = cfg.experiment;
    j["form"] = form_to_json(cfg.F);
    j["X"] = cfg.X;
    j["q"] = cfg.q;
    j["a"] = cfg.a;
    j["b"] = cfg.b;
    j["D"] = cfg.D;
    j["Y"] = cfg.Y;
    j["Z"] = cfg.Z;
    json lj;
    lj["kind"] = cfg.lambda.kind_name();
    if (cfg.lambda.kind == LambdaSpec::Kind::Table) {
        lj["values"] = cfg.lambda.table;
        lj["A"] = cfg.lambda.bound_A;
        lj["C"] = cfg.lambda.bound_C;
    }
    if (cfg.lambda.cong_q > 0) {
        lj["mod_q"] = cfg.lambda.cong_q;
        lj["mod_b"] = cfg.lambda.cong_b;
    }
    j["lambda"] = std::move(lj);
    j["pmax"] = cfg.pmax;
    j["chi_index"] = cfg.chi_index;
    j["threads"] = cfg.threads;
    if (!cfg.grid.empty()) j["grid"] = cfg.grid;
    j["seed"] = cfg.seed;
    if (!cfg.ctx_path.empty()) j["ctx"] = cfg.ctx_path;
    return j;
}

json ExperimentReport::to_json() const {
    json j;
    j["schema"] = "qform-report-v1";
    j["version"] = kVersion;
    j["experiment"] = experiment;
    j["config"] = config_echo;
    j["results"] = results;
    return j;
}

std::string ExperimentReport::to_csv() const {
    std::string out = "quantity,value\n";
    for (auto it = results.begin(); it != results.end(); ++it) {
        const json& v = it.value();
        if (v.is_object()) {
            out += it.key() + ".re," + v.at("re").dump() + "\n";
            out += it.key() + ".im," + v.at("im").dump() + "\n";
        } else {
            out += it.key() + "," + v.dump() + "\n";
        }
    }
    return out;
}

namespace {

DirichletCharacter select_character(const ExperimentConfig& cfg) {
    auto chars = characters_mod(cfg.q);
    if (cfg.chi_index < 0 || size_t(cfg.chi_index) >= chars.size())
        throw std::invalid_argument("config: chi_index out of range");
    return chars[size_t(cfg.chi_index)];
}

u64 euler_phi(u64 q, const SieveTables& tables) {
    u64 phi = 1;
    for (auto [p, e] : tables.factor(q)) {
        phi *= p - 1;
        for (int i = 1; i < e; ++i) phi *= p;
    }
    return phi;
}

}  // namespace

ExperimentReport theorem1_experiment(const ExperimentConfig& cfg,
                                     const CompositionContext& ctx,
                                     const SieveTables& tables) {
    if (std::gcd(u64(mod_floor(cfg.a, i128(cfg.q))), cfg.q) != 1 && cfg.q > 1)
        throw std::invalid_argument("theorem1: gcd(a, q) must be 1");
    ExperimentReport rep;
    rep.experiment = "theorem1";
    rep.config_echo = config_to_json(cfg);

    auto [H, Htail] = h_fq(cfg.F, cfg.q, ctx, cfg.pmax, tables);
    rep.put("H_Fq", H);
    rep.put("H_Fq_tail", Htail);

    i128 gamma = cfg.F.c;
    for (i64 Xi : cfg.x_grid()) {
        KahanSum lhs, main_sum;
        lattice_iterate(cfg.F, Xi, [&](i64 l, i64 m, i64 N) {
            if (mod_floor(N - cfg.a, i128(cfg.q)) != 0) return;
            if (l >= 1) {
                double lv = cfg.lambda.eval(l, &tables);
                if (lv != 0.0) {
                    double vm = tables.lambda_vm[size_t(N)];
                    if (vm != 0.0) lhs.add(lv * vm);
                    if (gcd128(l, gamma * m) == 1 && ctx.coprime_to_pf(u128(N)))
                        main_sum.add(lv);
                }
            }
        });
        std::string sx = std::to_string(Xi);
        double main_term = H * main_sum.value();
        rep.put("lhs@" + sx, lhs.value());
        rep.put("restricted_sum@" + sx, main_sum.value());
        rep.put("main_term@" + sx, main_term);
        rep.put("ratio@" + sx, main_term != 0.0 ? lhs.value() / main_term : 0.0);
    }
    return rep;
}

ExperimentReport corollary2_experiment(const ExperimentConfig& cfg,
                                       const CompositionContext& ctx,
                                       const SieveTables& tables) {
    u64 q = cfg.q;
    if (q > 1 &&
        std::gcd(u64(mod_floor(cfg.a * i128(cfg.b), i128(q))), q) != 1)
        throw std::invalid_argument("corollary2: gcd(ab, q) must be 1");
    ExperimentReport rep;
    rep.experiment = "corollary2";
    rep.config_echo = config_to_json(cfg);

    auto [Hq, Hq_tail] = h_q(cfg.F, q, cfg.pmax, tables);
    i64 rq = rho_ab(q, cfg.a, cfg.b, cfg.F, tables);
    double delta = double(i64(ctx.Delta));
    double coef = Hq * double(rq) / (double(q) * double(euler_phi(q, tables)));
    rep.put("H_q", Hq);
    rep.put("H_q_tail", Hq_tail);
    rep.put("rho_q_ab", rq);

    for (i64 Xi : cfg.x_grid()) {
        KahanSum lhs;
        lattice_iterate(cfg.F, Xi, [&](i64 l, i64 m, i64 N) {
            (void)m;
            if (l < 1) return;
            if (mod_floor(N - cfg.a, i128(q)) != 0) return;
            if (mod_floor(l - cfg.b, i128(q)) != 0) return;
            double vl = tables.lambda_vm[size_t(l)];
            if (vl == 0.0) return;
            double vN = tables.lambda_vm[size_t(N)];
            if (vN == 0.0) return;
            lhs.add(vl * vN);
        });
        double main_term = coef * M_PI * double(Xi) / std::sqrt(delta);
        std::string sx = std::to_string(Xi);
        rep.put("lhs@" + sx, lhs.value());
        rep.put("main_term@" + sx, main_term);
        rep.put("ratio@" + sx, main_term != 0.0 ? lhs.value() / main_term : 0.0);
    }
    return rep;
}

ExperimentReport level_experiment(const ExperimentConfig& cfg,
                                  const CompositionContext& ctx,
                                  const SieveTables& tables) {
    ExperimentReport rep;
    rep.experiment = "level";
    rep.config_echo = config_to_json(cfg);
    DirichletCharacter chi = select_character(cfg);
    for (i64 Xi : cfg.x_grid()) {
        u64 D = cfg.D > 0 ? u64(std::min<i64>(cfg.D, Xi)) : isqrt64(u64(Xi));
        SieveHarness h(cfg.F, ctx, tables, Xi, cfg.lambda);
        double R = h.R_total(D, chi, cfg.threads);
        double denom = double(cfg.q) * double(cfg.q) * double(cfg.q) *
                       std::pow(double(D), 0.25) * std::pow(double(Xi), 0.75);
        std::string sx = std::to_string(Xi);
        rep.put("D@" + sx, i64(D));
        rep.put("R@" + sx, R);
        rep.put("ratio@" + sx, R / denom);
    }
    return rep;
}

ExperimentReport bilinear_experiment(const ExperimentConfig& cfg,
                                     const CompositionContext& ctx,
                                     const SieveTables& tables) {
    ExperimentReport rep;
    rep.experiment = "bilinear";
    rep.config_echo = config_to_json(cfg);
    DirichletCharacter chi = select_character(cfg);
    SieveHarness h(cfg.F, ctx, tables, cfg.X, cfg.lambda);
    std::complex<double> B = h.bilinear_B(cfg.Y, cfg.Z, chi);
    rep.put("B", B);
    rep.put("abs_B", std::abs(B));
    double lx = std::log(double(cfg.X));
    rep.put("abs_B_over_X_log2X", std::abs(B) / (double(cfg.X) * lx * lx));
    return rep;
}

ExperimentReport fi_check_experiment(const ExperimentConfig& cfg,
                                     const CompositionContext& ctx,
                                     const SieveTables& tables) {
    (void)ctx;
    if (cfg.F != Form{1, 0, 1})
        throw std::invalid_argument("fi-check: only the form 1,0,1 is supported");
    if (cfg.lambda.kind == LambdaSpec::Kind::VonMangoldt)
        throw std::invalid_argument(
            "fi-check: exact comparison needs an integer-valued weight");
    if (cfg.lambda.kind == LambdaSpec::Kind::Table)
        for (double v : cfg.lambda.table)
            if (v != std::floor(v))
                throw std::invalid_argument(
                    "fi-check: exact comparison needs an integer-valued weight");
    ExperimentReport rep;
    rep.experiment = "fi-check";
    rep.config_echo = config_to_json(cfg);

    auto aN = a_n_table(cfg.F, cfg.X, cfg.lambda, &tables);
    // Primitive two-squares representations for every value up to X.
    std::vector<std::vector<std::pair<i128, i128>>> reps(size_t(cfg.X) + 1);
    for (i64 n = 1; n <= cfg.X; ++n) reps[size_t(n)] = represent(cfg.F, n, true);

    i64 pairs = 0, mismatches = 0;
    for (i64 m = 1; m <= cfg.X; ++m) {
        for (i64 n = 1; m * n <= cfg.X; ++n) {
            if (std::gcd(m, n) != 1) continue;
            double sum = 0.0;
            for (auto& [w1, w2] : reps[size_t(m)])
                for (auto& [z1, z2] : reps[size_t(n)]) {
                    i128 l = w1 * z1 + w2 * z2;
                    if (l > 0) sum += cfg.lambda.eval(i64(l), &tables);
                }
            ++pairs;
            if (sum != 4.0 * aN[size_t(m * n)]) ++mismatches;
        }
    }
    rep.put("pairs_checked", pairs);
    rep.put("mismatches", mismatches);
    if (mismatches > 0)
        throw std::runtime_error(
            "fi-check: product identity mismatch (fatal correctness failure)");
    return rep;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg,
                                const SieveTables& tables) {
    CompositionContext ctx =
        cfg.ctx_path.empty() ? build_context(cfg.F) : load_context(cfg.ctx_path);
    if (ctx.F != cfg.F)
        throw std::invalid_argument(
            "config: context file was built for a different form");
    if (cfg.experiment == "theorem1") return theorem1_experiment(cfg, ctx, tables);
    if (cfg.experiment == "corollary2")
        return corollary2_experiment(cfg, ctx, tables);
    if (cfg.experiment == "level") return level_experiment(cfg, ctx, tables);
    if (cfg.experiment == "bilinear") return bilinear_experiment(cfg, ctx, tables);
    if (cfg.experiment == "fi-check") return fi_check_experiment(cfg, ctx, tables);
    throw std::invalid_argument("unknown experiment: " + cfg.experiment);
}

}  // namespace qform
