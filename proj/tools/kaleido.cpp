// Command-line front end: every subcommand wraps one library operation and
// speaks the shared JSON document format. Exit codes follow one convention:
// 0 = holds/success, 1 = fails, 2 = error or inconclusive.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kaleido/kaleido.hpp"
#include "suite.hpp"

using namespace kaleido;
using io::json;

namespace {

constexpr int kExitHolds = 0;
constexpr int kExitFails = 1;
constexpr int kExitError = 2;

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty())
        std::cout << io::dump(j);
    else
        io::save_file(out_path, j);
}

std::size_t env_or(const char* name, std::size_t fallback) {
    const char* v = std::getenv(name);
    if (!v) return fallback;
    return static_cast<std::size_t>(std::stoull(v));
}

json embedding_to_json(const DecEmbedding& e) {
    json m = json::object();
    for (const auto& [k, v] : e.map) m[std::to_string(k)] = v;
    return json{{"map", m}, {"rooted", e.rooted}};
}

struct CommonOut {
    std::string path;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kaleidoscopic trees: decorated rooted trees, partition arrows, converging convex orders"};
    app.require_subcommand(1);

    int threads = static_cast<int>(env_or("KALEIDO_THREADS", 1));
    std::uint64_t seed = 1337;
    app.add_option("--threads", threads, "worker threads for internal parallelism");
    app.add_option("--seed", seed, "seed for randomized sampling (fixed default for reproducibility)");

    // gen
    auto* gen = app.add_subcommand("gen", "build the tower tree A[h] over an alphabet");
    std::string gen_alpha, gen_out;
    int gen_h = 0;
    gen->add_option("--alphabet", gen_alpha, "alphabet document")->required();
    gen->add_option("--height", gen_h, "tower height h")->required();
    gen->add_option("-o,--out", gen_out, "output file (stdout by default)");

    // arrow
    auto* arrow = app.add_subcommand("arrow", "decide C -> (B)^k_A");
    std::string ar_c, ar_b, ar_a, ar_inst, ar_out;
    int ar_k = 2;
    bool ar_rooted = false;
    arrow->add_option("--C", ar_c, "decorated tree C");
    arrow->add_option("--B", ar_b, "decorated tree B");
    arrow->add_option("--A", ar_a, "decorated tree A");
    arrow->add_option("--instance", ar_inst, "arrow instance document (alternative to --C/--B/--A)");
    arrow->add_option("--k", ar_k, "number of colors");
    arrow->add_flag("--rooted", ar_rooted, "use rooted embeddings");
    arrow->add_option("-o,--out", ar_out, "verdict output file");

    // emb
    auto* emb = app.add_subcommand("emb", "enumerate embeddings between decorated trees");
    std::string emb_from, emb_to, emb_out;
    bool emb_rooted = false, emb_count = false;
    emb->add_option("--from", emb_from)->required();
    emb->add_option("--to", emb_to)->required();
    emb->add_flag("--rooted", emb_rooted);
    emb->add_flag("--count-only", emb_count);
    emb->add_option("-o,--out", emb_out);

    // aut
    auto* aut = app.add_subcommand("aut", "enumerate automorphisms of a decorated tree");
    std::string aut_in, aut_out;
    bool aut_count = false;
    aut->add_option("--in", aut_in)->required();
    aut->add_flag("--count-only", aut_count);
    aut->add_option("-o,--out", aut_out);

    // witness
    auto* wit = app.add_subcommand("witness", "search the A[h] family for an arrow witness");
    std::string wit_b, wit_a, wit_out, wit_family = "constant";
    int wit_k = 2;
    bool wit_rooted = false;
    std::size_t wit_budget = env_or("KALEIDO_BUDGET", 10'000'000);
    int wit_max_alpha = 6, wit_max_h = 12;
    wit->add_option("--B", wit_b)->required();
    wit->add_option("--A", wit_a)->required();
    wit->add_option("--k", wit_k);
    wit->add_flag("--rooted", wit_rooted);
    wit->add_option("--family", wit_family, "constant | linear-order");
    wit->add_option("--budget", wit_budget, "node budget");
    wit->add_option("--max-alphabet", wit_max_alpha);
    wit->add_option("--max-height", wit_max_h);
    wit->add_option("-o,--out", wit_out);

    // mono
    auto* mono = app.add_subcommand("mono", "find a monochromatic copy under a coloring");
    std::string mn_t, mn_b, mn_a, mn_gamma, mn_chain, mn_u, mn_out;
    bool mn_rooted = false, mn_follow = false, mn_fallback = false;
    mono->add_option("--T", mn_t, "ambient decorated tree (direct mode)");
    mono->add_option("--B", mn_b, "copy shape (direct mode)");
    mono->add_option("--A", mn_a, "colored shape (direct mode)");
    mono->add_option("--gamma", mn_gamma, "coloring assignment document")->required();
    mono->add_flag("--rooted", mn_rooted);
    mono->add_flag("--follow-proof", mn_follow, "replay the inductive construction over a chain");
    mono->add_option("--chain", mn_chain, "chain document (--follow-proof)");
    mono->add_option("--u", mn_u, "target copy shape (--follow-proof)");
    mono->add_flag("--fallback", mn_fallback, "fall back to direct search if a sub-arrow fails");
    mono->add_option("-o,--out", mn_out);

    // deuber
    auto* deu = app.add_subcommand("deuber", "measure the minimal m with B[m] -> (B[h])^k_{A[0]}");
    std::string deu_alpha, deu_out;
    int deu_h = 1, deu_k = 2, deu_max = 8;
    deu->add_option("--alphabet", deu_alpha)->required();
    deu->add_option("--h", deu_h);
    deu->add_option("--k", deu_k);
    deu->add_option("--max-m", deu_max, "largest m to try before reporting inconclusive");
    deu->add_option("-o,--out", deu_out);

    // cclo-enum
    auto* cen = app.add_subcommand("cclo-enum", "enumerate converging convex orders on a tree");
    std::string cen_tree, cen_out;
    std::size_t cen_max = 8;
    cen->add_option("--tree", cen_tree)->required();
    cen->add_option("--max-vertices", cen_max);
    cen->add_option("-o,--out", cen_out);

    // cclo-check
    auto* cck = app.add_subcommand("cclo-check", "check an order for convergence and convexity");
    std::string cck_order, cck_out;
    bool cck_duchesne = false;
    cck->add_option("--order", cck_order)->required();
    cck->add_flag("--duchesne", cck_duchesne, "also evaluate the original convexity reading");
    cck->add_option("-o,--out", cck_out);

    // pi
    auto* pi = app.add_subcommand("pi", "project a rooted ordered configuration to a linear order");
    std::string pi_cfg, pi_out;
    pi->add_option("--config", pi_cfg)->required();
    pi->add_option("-o,--out", pi_out);

    // realize
    auto* rea = app.add_subcommand("realize", "build a configuration realizing a CCLO");
    std::string rea_order, rea_out;
    rea->add_option("--order", rea_order)->required();
    rea->add_option("-o,--out", rea_out);

    // collapse
    auto* col = app.add_subcommand("collapse", "two distinct configurations with the same projected order");
    std::string col_tree, col_out;
    int col_x0 = 0, col_x1 = 0;
    col->add_option("--tree", col_tree)->required();
    col->add_option("--x0", col_x0)->required();
    col->add_option("--x1", col_x1)->required();
    col->add_option("-o,--out", col_out);

    // suite
    auto* sui = app.add_subcommand("suite", "run the invariant battery over a corpus directory");
    std::string sui_corpus, sui_out;
    std::size_t sui_max = 5;
    sui->add_option("--corpus", sui_corpus)->required();
    sui->add_option("--max-size", sui_max, "largest tree size for exhaustive order batteries");
    sui->add_option("-o,--out", sui_out);

    CLI11_PARSE(app, argc, argv);
    exec::set_thread_count(threads);
    auto t0 = std::chrono::steady_clock::now();
    int rc = kExitHolds;

    try {
        if (*gen) {
            RelStructure alpha = io::relstruct_from_json(io::load_file(gen_alpha));
            emit(io::decorated_to_json(build_Ah(alpha, gen_h)), gen_out);
        } else if (*arrow) {
            ArrowInstance inst = [&] {
                if (!ar_inst.empty()) return io::arrow_from_json(io::load_file(ar_inst)).instance;
                if (ar_c.empty() || ar_b.empty() || ar_a.empty())
                    throw std::invalid_argument("arrow: need --instance or all of --C/--B/--A");
                return ArrowInstance{io::decorated_from_json(io::load_file(ar_c)),
                                     io::decorated_from_json(io::load_file(ar_b)),
                                     io::decorated_from_json(io::load_file(ar_a)), ar_k, ar_rooted};
            }();
            if (ar_inst.empty()) {
                inst.k = ar_k;
                inst.rooted = ar_rooted;
            }
            ArrowVerdict v = decide_arrow(inst);
            emit(io::verdict_to_json(v), ar_out);
            rc = v.holds ? kExitHolds : kExitFails;
        } else if (*emb) {
            DecoratedTree s = io::decorated_from_json(io::load_file(emb_from));
            DecoratedTree t = io::decorated_from_json(io::load_file(emb_to));
            auto embs = dec_embeddings(s, t, emb_rooted);
            json j{{"schema", "kaleido.embeddings/1"}, {"count", embs.size()}, {"rooted", emb_rooted}};
            if (!emb_count) {
                json maps = json::array();
                for (const auto& e : embs) maps.push_back(embedding_to_json(e));
                j["maps"] = maps;
            }
            emit(j, emb_out);
        } else if (*aut) {
            DecoratedTree t = io::decorated_from_json(io::load_file(aut_in));
            auto autos = dec_automorphisms(t);
            json j{{"schema", "kaleido.automorphisms/1"}, {"count", autos.size()}};
            if (!aut_count) {
                json maps = json::array();
                for (const auto& e : autos) maps.push_back(embedding_to_json(e));
                j["maps"] = maps;
            }
            emit(j, aut_out);
        } else if (*wit) {
            DecoratedTree b = io::decorated_from_json(io::load_file(wit_b));
            DecoratedTree a = io::decorated_from_json(io::load_file(wit_a));
            AlphabetFamily family = wit_family == "linear-order" ? linear_order_family() : constant_family();
            if (wit_family != "linear-order" && wit_family != "constant")
                throw std::invalid_argument("witness: unknown family " + wit_family);
            WitnessResult res = witness_search(b, a, wit_k, wit_rooted, family, wit_budget, wit_max_alpha, wit_max_h);
            json j{{"schema", "kaleido.witness/1"},
                   {"found", res.found()},
                   {"nodes_used", res.nodes_used},
                   {"candidates_tried", res.candidates_tried}};
            if (res.found()) {
                j["alphabet_size"] = res.alphabet_size;
                j["height"] = res.height;
                j["witness"] = io::decorated_to_json(*res.witness);
            }
            emit(j, wit_out);
            rc = res.found() ? kExitHolds : kExitError;
        } else if (*mono) {
            ColoringAssignment gamma = io::coloring_from_json(io::load_file(mn_gamma));
            if (mn_follow) {
                if (mn_chain.empty() || mn_u.empty())
                    throw std::invalid_argument("mono --follow-proof: need --chain and --u");
                io::ChainDoc chain = io::chain_from_json(io::load_file(mn_chain));
                DecoratedTree u = io::decorated_from_json(io::load_file(mn_u));
                auto res = proof_follow_mono(chain.entries, gamma, u, chain.point_alphabet, chain.ell, mn_fallback);
                json j{{"schema", "kaleido.mono/1"}, {"found", res.ok()}, {"message", res.message}};
                if (res.failed_level) j["failed_level"] = *res.failed_level;
                if (res.ok()) {
                    j["copy"] = embedding_to_json(res.copy->copy);
                    j["color"] = res.copy->color;
                }
                json subtree = json::array();
                for (int v : res.final_subtree) subtree.push_back(v);
                j["final_subtree"] = subtree;
                emit(j, mn_out);
                rc = res.ok() ? kExitHolds : kExitFails;
            } else {
                if (mn_t.empty() || mn_b.empty() || mn_a.empty())
                    throw std::invalid_argument("mono: need --T, --B and --A (or --follow-proof)");
                DecoratedTree t = io::decorated_from_json(io::load_file(mn_t));
                DecoratedTree b = io::decorated_from_json(io::load_file(mn_b));
                DecoratedTree a = io::decorated_from_json(io::load_file(mn_a));
                auto res = find_mono_copy(t, b, a, gamma, mn_rooted);
                json j{{"schema", "kaleido.mono/1"}, {"found", res.has_value()}};
                if (res) {
                    j["copy"] = embedding_to_json(res->copy);
                    j["color"] = res->color;
                } else {
                    j["message"] = "search exhausted: no monochromatic copy";
                }
                emit(j, mn_out);
                rc = res ? kExitHolds : kExitFails;
            }
        } else if (*deu) {
            RelStructure alpha = io::relstruct_from_json(io::load_file(deu_alpha));
            DeuberReport rep = deuber_explore(alpha, deu_h, deu_k, deu_max);
            json trail = json::array();
            for (auto [m, holds] : rep.trail) trail.push_back(json::array({m, holds}));
            json j{{"schema", "kaleido.deuber/1"}, {"found", rep.found},   {"h", rep.h},
                   {"k", rep.k},                  {"deuber_bound", rep.deuber_bound}, {"trail", trail},
                   {"stats", io::stats_to_json(rep.total)}};
            if (rep.found) {
                j["m"] = rep.m;
                j["within_bound"] = rep.within_bound;
            }
            emit(j, deu_out);
            rc = rep.found ? kExitHolds : kExitError;
        } else if (*cen) {
            Tree t = io::tree_from_json(io::load_file(cen_tree));
            auto orders = enumerate_cclo(t, cen_max);
            json arr = json::array();
            for (const auto& o : orders) {
                json ranks = json::object();
                for (const auto& [v, r] : o.ranks) ranks[std::to_string(v)] = r;
                arr.push_back(ranks);
            }
            emit(json{{"schema", "kaleido.orders/1"}, {"count", orders.size()}, {"orders", arr}}, cen_out);
        } else if (*cck) {
            TreeLinearOrder o = io::order_from_json(io::load_file(cck_order));
            LineData ld(o.tree);
            auto conv = is_converging(o, ld);
            json j{{"schema", "kaleido.check/1"}, {"converging", json{{"ok", conv.ok}, {"witness", conv.tuple}}}};
            bool pass = conv.ok;
            if (conv.ok) {
                auto cvx = is_convex(o, ld);
                j["convex"] = json{{"ok", cvx.ok}, {"witness", cvx.tuple}};
                pass = cvx.ok;
                if (cck_duchesne) j["duchesne"] = is_convex_duchesne(o, ld);
            }
            emit(j, cck_out);
            rc = pass ? kExitHolds : kExitFails;
        } else if (*pi) {
            OrderedConfiguration cfg(io::decorated_from_json(io::load_file(pi_cfg)));
            emit(io::order_to_json(pi_order(cfg)), pi_out);
        } else if (*rea) {
            TreeLinearOrder o = io::order_from_json(io::load_file(rea_order));
            OrderedConfiguration cfg = realize_cclo(o.tree, o);
            emit(io::decorated_to_json(cfg.dt()), rea_out);
        } else if (*col) {
            Tree t = io::tree_from_json(io::load_file(col_tree));
            auto [q1, q2] = collapse_pair(t, col_x0, col_x1);
            TreeLinearOrder p1 = pi_order(q1), p2 = pi_order(q2);
            bool agree = true;
            for (int x : t.vertices())
                for (int y : t.vertices())
                    if (x != y && p1.less(x, y) != p2.less(x, y)) agree = false;
            json j{{"schema", "kaleido.collapse/1"},
                   {"q1", io::decorated_to_json(q1.dt())},
                   {"q2", io::decorated_to_json(q2.dt())},
                   {"distinct", !(q1 == q2)},
                   {"pi_agree_on_tree", agree}};
            emit(j, col_out);
            rc = (agree && !(q1 == q2)) ? kExitHolds : kExitFails;
        } else if (*sui) {
            auto res = suite::run_corpus(sui_corpus, sui_max, seed);
            emit(res.report, sui_out);
            rc = res.all_pass ? kExitHolds : kExitFails;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }

    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << "elapsed_ms=" << ms << "\n";
    return rc;
}
