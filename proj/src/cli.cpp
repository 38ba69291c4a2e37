/*
 * Copyright 2026 The SemGloVe Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "semglove/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <exception>
#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "io_util.hpp"
#include "semglove/config.hpp"
#include "semglove/cooc_matrix.hpp"
#include "semglove/cooc_mlm.hpp"
#include "semglove/cooc_san.hpp"
#include "semglove/cooc_window.hpp"
#include "semglove/dump_format.hpp"
#include "semglove/error.hpp"
#include "semglove/eval.hpp"
#include "semglove/parallel.hpp"
#include "semglove/trainer.hpp"
#include "semglove/vocab.hpp"
#include "semglove/word_vectors.hpp"

#ifndef SEMGLOVE_VERSION
#define SEMGLOVE_VERSION "0.0.0"
#endif
#ifndef SEMGLOVE_BUILD_TYPE
#define SEMGLOVE_BUILD_TYPE "unknown"
#endif

namespace semglove {

namespace {

namespace fs = std::filesystem;

struct Context {
    const PipelineConfig& cfg;
    std::ostream& out;
    std::ostream& err;
};

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Vocabulary make_vocab(const fs::path& corpus, std::uint64_t min_count, int threads) {
    if (threads <= 1) {
        return build_vocab_file(corpus, min_count);
    }
    auto in = detail::open_in(corpus);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        lines.push_back(std::move(line));
    }
    return build_vocab(lines, min_count, threads);
}

std::uint64_t min_count_of(const PipelineConfig& cfg) {
    const auto m = cfg.get_int("min_count");
    if (m < 1) {
        throw UsageError("min_count must be >= 1");
    }
    return static_cast<std::uint64_t>(m);
}

void report_matrix(const Context& ctx, const char* what, const CoocMatrix& m, const fs::path& out) {
    ctx.err << what << ": " << m.nnz() << " pairs -> " << out.string() << '\n';
}

int cmd_vocab(const Context& ctx) {
    const auto out = ctx.cfg.get_path("out");
    const auto vocab =
        make_vocab(ctx.cfg.get_path("corpus"), min_count_of(ctx.cfg), ctx.cfg.threads());
    save_vocab(vocab, out);
    ctx.err << "vocab: " << vocab.size() << " words -> " << out.string() << '\n';
    return kExitOk;
}

CoocMatrix window_matrix(const PipelineConfig& cfg, const fs::path& corpus, const Vocabulary& vocab) {
    auto in = detail::open_in(corpus);
    return build_window_cooc(in, vocab, cfg.window_config(), cfg.threads());
}

CoocMatrix san_matrix(const PipelineConfig& cfg, const fs::path& corpus, const Vocabulary& vocab) {
    const auto san = cfg.san_config();
    DumpReader dump(cfg.get_path("dump"));
    auto in = detail::open_in(corpus);
    return build_san_cooc(dump, in, vocab, san, cfg.threads());
}

CoocMatrix mlm_matrix(const PipelineConfig& cfg, const Vocabulary& vocab) {
    const auto mlm = cfg.mlm_config();
    const auto lex = load_lexicon(cfg.get_path("lexicon"));
    DumpReader dump(cfg.get_path("dump"));
    return build_mlm_cooc(dump, vocab, lex, mlm, cfg.threads());
}

int cmd_cooc_window(const Context& ctx) {
    const auto out = ctx.cfg.get_path("out");
    ctx.cfg.window_config();
    const auto vocab = load_vocab(ctx.cfg.get_path("vocab"));
    const auto m = window_matrix(ctx.cfg, ctx.cfg.get_path("corpus"), vocab);
    save_bin(m, out);
    report_matrix(ctx, "cooc-window", m, out);
    return kExitOk;
}

int cmd_cooc_san(const Context& ctx) {
    const auto out = ctx.cfg.get_path("out");
    ctx.cfg.san_config();
    const auto vocab = load_vocab(ctx.cfg.get_path("vocab"));
    const auto m = san_matrix(ctx.cfg, ctx.cfg.get_path("corpus"), vocab);
    save_bin(m, out);
    report_matrix(ctx, "cooc-san", m, out);
    return kExitOk;
}

int cmd_cooc_mlm(const Context& ctx) {
    const auto out = ctx.cfg.get_path("out");
    ctx.cfg.mlm_config();
    const auto vocab = load_vocab(ctx.cfg.get_path("vocab"));
    const auto m = mlm_matrix(ctx.cfg, vocab);
    save_bin(m, out);
    report_matrix(ctx, "cooc-mlm", m, out);
    return kExitOk;
}

int cmd_cooc_intersect(const Context& ctx) {
    const auto out = ctx.cfg.get_path("out");
    const auto support = load_bin(ctx.cfg.get_path("support"));
    const auto values = load_bin(ctx.cfg.get_path("values"));
    const auto m = cooc_intersect(support, values);
    save_bin(m, out);
    report_matrix(ctx, "cooc-intersect", m, out);
    return kExitOk;
}

std::uint64_t seed_of(const PipelineConfig& cfg) {
    const auto s = cfg.get_int("seed");
    if (s < 0) {
        throw UsageError("seed must be >= 0");
    }
    return static_cast<std::uint64_t>(s);
}

int cmd_shuffle(const Context& ctx) {
    const auto out = ctx.cfg.get_path("out");
    shuffle_file(ctx.cfg.get_path("in"), out, seed_of(ctx.cfg));
    ctx.err << "shuffle: -> " << out.string() << '\n';
    return kExitOk;
}

void train_to_file(const Context& ctx, const fs::path& cooc, const Vocabulary& vocab,
                   const fs::path& out) {
    auto tc = ctx.cfg.train_config();
    tc.seed = seed_of(ctx.cfg);
    const auto records = load_records(cooc);
    Stopwatch clock;
    const auto result = train(records, vocab.size(), tc, [&](int epoch, double loss) {
        ctx.err << "epoch " << epoch << " loss " << loss << " (" << clock.seconds() << " s)\n";
    });
    save_vectors(finalize(result.embeddings, vocab.words()), out);
    ctx.err << "train: " << vocab.size() << " vectors of dim " << tc.dim << " -> " << out.string()
            << '\n';
}

int cmd_train(const Context& ctx) {
    const auto out = ctx.cfg.get_path("out");
    ctx.cfg.train_config();
    const auto vocab = load_vocab(ctx.cfg.get_path("vocab"));
    train_to_file(ctx, ctx.cfg.get_path("cooc"), vocab, out);
    return kExitOk;
}

int cmd_eval(const Context& ctx) {
    const auto vectors = load_vectors(ctx.cfg.get_path("vectors"));
    const auto dataset = load_dataset(ctx.cfg.get_path("dataset"));
    ctx.out << format_report(evaluate(vectors, dataset)) << '\n';
    return kExitOk;
}

int cmd_nearest(const Context& ctx) {
    const auto& word = ctx.cfg.get("word");
    if (word.empty()) {
        throw UsageError("missing required --word");
    }
    const auto k = ctx.cfg.get_int("k");
    if (k < 1) {
        throw UsageError("k must be >= 1");
    }
    const auto vectors = load_vectors(ctx.cfg.get_path("vectors"));
    for (const auto& n : nearest(vectors, word, static_cast<std::size_t>(k))) {
        std::string line = n.word + ' ';
        detail::append_double(line, n.similarity);
        ctx.out << line << '\n';
    }
    return kExitOk;
}

int cmd_validate_dump(const Context& ctx) {
    const double tol = ctx.cfg.get_real("tolerance");
    if (!(tol >= 0.0)) {
        throw UsageError("tolerance must be >= 0");
    }
    const auto v = validate_dump(ctx.cfg.get_path("dump"), tol);
    ctx.out << "mode " << to_string(v.header.mode) << " top_k " << v.header.top_k << " layers "
            << v.header.n_layers << " heads " << v.header.n_heads << " records " << v.records
            << " flagged_rows " << v.flagged_rows << " flagged_records " << v.flagged_records
            << '\n';
    return kExitOk;
}

int cmd_pipeline(const Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto work = cfg.get_path("work_dir");
    const auto corpus = cfg.get_path("corpus");
    const auto source = cfg.source();
    // Fail on bad settings before doing any work.
    cfg.train_config();
    switch (source) {
        case Source::kWindow:
            cfg.window_config();
            break;
        case Source::kSan:
            cfg.san_config();
            cfg.get_path("dump");
            break;
        case Source::kMlm:
            cfg.mlm_config();
            cfg.get_path("dump");
            cfg.get_path("lexicon");
            break;
    }
    std::error_code ec;
    fs::create_directories(work, ec);
    if (ec) {
        throw IoError("cannot create " + work.string() + ": " + ec.message());
    }
    const auto vocab_path = work / "vocab.txt";
    const auto cooc_path = work / "cooccur.bin";
    const auto shuf_path = work / "shuf.bin";
    const auto vectors_path = cfg.has("out") ? cfg.get_path("out") : work / "vectors.txt";

    Stopwatch clock;
    const auto vocab = make_vocab(corpus, min_count_of(cfg), cfg.threads());
    save_vocab(vocab, vocab_path);
    ctx.err << "vocab: " << vocab.size() << " words (" << clock.seconds() << " s)\n";

    CoocMatrix m;
    switch (source) {
        case Source::kWindow:
            m = window_matrix(cfg, corpus, vocab);
            break;
        case Source::kSan:
            m = san_matrix(cfg, corpus, vocab);
            break;
        case Source::kMlm:
            m = mlm_matrix(cfg, vocab);
            break;
    }
    save_bin(m, cooc_path);
    ctx.err << "cooc-" << to_string(source) << ": " << m.nnz() << " pairs (" << clock.seconds()
            << " s)\n";
    m = CoocMatrix();

    shuffle_file(cooc_path, shuf_path, seed_of(cfg));
    train_to_file(ctx, shuf_path, vocab, vectors_path);

    if (cfg.has("dataset")) {
        const auto vectors = load_vectors(vectors_path);
        const auto dataset = load_dataset(cfg.get_path("dataset"));
        ctx.out << format_report(evaluate(vectors, dataset)) << '\n';
    }
    ctx.err << "pipeline: done (" << clock.seconds() << " s)\n";
    return kExitOk;
}

struct Command {
    const char* name;
    const char* help;
    std::vector<std::string_view> keys;
    std::function<int(const Context&)> fn;
};

std::vector<Command> commands() {
    return {
        {"vocab", "Count words of a corpus into a vocabulary file",
         {"corpus", "min_count", "threads", "out"}, cmd_vocab},
        {"cooc-window", "Distance-weighted window co-occurrence counts",
         {"corpus", "vocab", "window", "symmetric", "threads", "out"}, cmd_cooc_window},
        {"cooc-san", "Co-occurrence counts from a self-attention dump",
         {"dump", "corpus", "vocab", "window", "select_top", "distance", "threads", "out"},
         cmd_cooc_san},
        {"cooc-mlm", "Co-occurrence counts from a masked-LM prediction dump",
         {"dump", "vocab", "lexicon", "top", "distance", "threads", "out"}, cmd_cooc_mlm},
        {"cooc-intersect", "Keep the pairs of one matrix with the values of another",
         {"support", "values", "out"}, cmd_cooc_intersect},
        {"shuffle", "Shuffle co-occurrence records", {"in", "seed", "out"}, cmd_shuffle},
        {"train", "Fit word vectors to co-occurrence records",
         {"cooc", "vocab", "dim", "x_max", "alpha", "lr", "iters", "grad_clip", "threads", "seed",
          "out"},
         cmd_train},
        {"eval", "Spearman correlation on a word-similarity dataset", {"vectors", "dataset"},
         cmd_eval},
        {"nearest", "Print the nearest neighbors of a word", {"vectors", "word", "k"},
         cmd_nearest},
        {"validate-dump", "Check an SGDV dump and report row-sum deviations",
         {"dump", "tolerance"}, cmd_validate_dump},
        {"pipeline", "vocab, co-occurrence, shuffle, train and eval in one run",
         {"work_dir", "corpus", "source", "dump", "lexicon", "dataset", "min_count", "window",
          "symmetric", "select_top", "distance", "top", "dim", "x_max", "alpha", "lr", "iters",
          "grad_clip", "threads", "seed", "out"},
         cmd_pipeline},
    };
}

struct Bound {
    std::string key;
    CLI::App* owner = nullptr;
    CLI::Option* option = nullptr;
    std::string value;
};

void print_error(std::ostream& err, const char* category, const std::string& what) {
    std::string msg = what;
    for (auto& ch : msg) {
        if (ch == '\n' || ch == '\r') {
            ch = ' ';
        }
    }
    err << "error[" << category << "]: " << msg << '\n';
}

}  // namespace

std::string version_string() {
    std::string v = "semglove " SEMGLOVE_VERSION " (" SEMGLOVE_BUILD_TYPE ", ";
#if defined(__clang__)
    v += "clang " __clang_version__;
#elif defined(__GNUC__)
    v += "gcc " __VERSION__;
#else
    v += "unknown compiler";
#endif
    v += openmp_enabled() ? ", openmp)" : ", no openmp)";
    return v;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Word embeddings from window, self-attention and masked-LM co-occurrence counts",
                 "semglove"};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);

    const auto cmds = commands();
    // Option storage must stay put while CLI11 holds pointers into it.
    std::vector<std::unique_ptr<Bound>> bound;
    std::vector<std::pair<CLI::App*, const Command*>> subs;
    std::string config_path;
    bool dry_run = false;

    for (const auto& cmd : cmds) {
        CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
        sub->add_option("--config", config_path, "key=value config file; flags override it");
        sub->add_flag("--dry-run", dry_run, "print the resolved config and exit");
        for (auto key : cmd.keys) {
            const ConfigKey* entry = PipelineConfig::find_key(key);
            auto b = std::make_unique<Bound>();
            b->key = std::string(key);
            b->owner = sub;
            std::string help(entry->help);
            if (!entry->default_value.empty()) {
                help += " (default ";
                help += entry->default_value;
                help += ')';
            }
            b->option = sub->add_option("--" + std::string(entry->flag), b->value, help);
            bound.push_back(std::move(b));
        }
        subs.emplace_back(sub, &cmd);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kExitOk;
        }
        print_error(err, "usage", e.what());
        return kExitUsage;
    }

    for (const auto& [sub, cmd] : subs) {
        if (!sub->parsed()) {
            continue;
        }
        try {
            PipelineConfig cfg;
            if (!config_path.empty()) {
                cfg.load_file(config_path);
            }
            for (const auto& b : bound) {
                if (b->owner == sub && b->option->count() > 0) {
                    cfg.set(b->key, b->value);
                }
            }
            if (dry_run) {
                out << cfg.to_text();
                return kExitOk;
            }
            return cmd->fn(Context{cfg, out, err});
        } catch (const UsageError& e) {
            print_error(err, e.category(), e.what());
            return kExitUsage;
        } catch (const Error& e) {
            print_error(err, e.category(), e.what());
            return kExitDataError;
        } catch (const std::bad_alloc&) {
            print_error(err, "memory", "out of memory");
            return kExitDataError;
        } catch (const std::exception& e) {
            print_error(err, "internal", e.what());
            return kExitDataError;
        }
    }
    return kExitUsage;
}

}  // namespace semglove
