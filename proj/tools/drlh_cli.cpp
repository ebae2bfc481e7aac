#include "drlh/codebook.hpp"
#include "drlh/dataset.hpp"
#include "drlh/encoder.hpp"
#include "drlh/errors.hpp"
#include "drlh/retrieval.hpp"
#include "drlh/sweep.hpp"
#include "drlh/trainer.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

using namespace drlh;

namespace {

constexpr const char* kFormats = R"(File formats:
  codebook   text; header "# drlh-codebook v1 b=<b> C=<C> n=<n> D=<D> R=<R> seed=<s>",
             then one codeword per line as b characters '0'/'1' (class order)
  codes      text; one code per line, b characters '0'/'1', first character is bit 0
  features   binary little-endian; magic "DRLHFV1" (7 bytes), u32 n, u32 d_f,
             then n*d_f float32 values row-major
  labels     text; one line per item, comma-separated class indices ("2,5")
  model      binary; "DRLHQN1\n", one line of in:out:activation:dropout layer
             descriptors, then every layer's weights (row-major, out x in) and
             biases as little-endian float64
  config     text; "key = value" per line, '#' comments, unknown keys rejected.
             Keys: batch_size buffer_capacity dropout epochs eps_decay_epochs
             eps_end eps_start eta expert_prob gamma hidden learning_rate
             max_steps run_seed seed sigma target_sync_interval
  train log  "# key = value [(default)]" header lines, then one tab-separated
             line per epoch: epoch epsilon mean_reward mean_len
             mean_terminal_dpos wall_seconds

Exit codes: 0 success, 1 I/O or format error, 2 infeasible parameters.)";

std::ofstream open_out(const std::string& path)
{
    std::ofstream os(path);
    if (!os)
        throw IoError("cannot open '" + path + "' for writing");
    return os;
}

std::vector<std::size_t> parse_values(const std::string& text)
{
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            std::size_t used = 0;
            const auto v = std::stoull(item, &used);
            if (used != item.size())
                throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw InvalidArgument("bad value '" + item + "' in --values");
        }
        if (comma == std::string::npos)
            break;
        pos = comma + 1;
    }
    return out;
}

ParsedConfig load_config(const std::string& path)
{
    if (path.empty()) {
        ParsedConfig p;
        p.config.validate();
        return p;
    }
    return parse_train_config_file(path);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hashing by deep Q-learning over BCH label codewords"};
    app.footer(kFormats);
    app.require_subcommand(1);
    unsigned threads = 1;
    app.add_option("--threads", threads, "Worker threads for encoding, ranking and evaluation")
        ->check(CLI::Range(1u, 256u));

    // codebook
    auto* cb = app.add_subcommand("codebook", "Build the BCH class codebook and print D, R, n");
    std::size_t cb_classes = 0, cb_bits = 0;
    std::uint64_t cb_seed = 0;
    std::string cb_out;
    cb->add_option("--classes", cb_classes, "Number of classes C")->required();
    cb->add_option("--bits", cb_bits, "Code width b")->required();
    cb->add_option("--seed", cb_seed, "Seed for the random padding bits");
    cb->add_option("--out", cb_out, "Codebook file to write");

    // synth
    auto* sy = app.add_subcommand("synth", "Write a synthetic Gaussian-cluster dataset");
    SynthOptions so;
    std::string sy_prefix;
    bool sy_no_train_in_db = false;
    sy->add_option("--classes", so.num_classes, "Number of classes")->capture_default_str();
    sy->add_option("--per-class", so.per_class, "Items per class")->capture_default_str();
    sy->add_option("--dim", so.dim, "Feature dimension")->capture_default_str();
    sy->add_option("--spread", so.spread, "Noise standard deviation")->capture_default_str();
    sy->add_option("--seed", so.seed, "Generator seed")->capture_default_str();
    sy->add_option("--train-fraction", so.train_fraction, "Training share per class")->capture_default_str();
    sy->add_option("--query-fraction", so.query_fraction, "Query share per class")->capture_default_str();
    sy->add_flag("--db-without-train", sy_no_train_in_db, "Keep training items out of the database files");
    sy->add_option("--out-prefix", sy_prefix,
                   "Writes <prefix>.{train,query,db}.{fv,labels}; the db set holds the training items too")
        ->required();

    // train
    auto* tr = app.add_subcommand("train", "Train the Q-network");
    std::string tr_features, tr_labels, tr_codebook, tr_config, tr_model, tr_log;
    tr->add_option("--features", tr_features, "Training features")->required();
    tr->add_option("--labels", tr_labels, "Training labels")->required();
    tr->add_option("--codebook", tr_codebook, "Codebook file")->required();
    tr->add_option("--config", tr_config, "Hyperparameter file (defaults when omitted)");
    tr->add_option("--out-model", tr_model, "Model file to write")->required();
    tr->add_option("--log", tr_log, "Training log to write (default: standard output)");

    // encode
    auto* en = app.add_subcommand("encode", "Encode items with a trained model");
    std::string en_model, en_features, en_codebook, en_out;
    std::uint64_t en_seed = 0;
    std::optional<std::size_t> en_max_steps;
    en->add_option("--model", en_model, "Model file")->required();
    en->add_option("--features", en_features, "Features to encode")->required();
    en->add_option("--codebook", en_codebook, "Codebook file")->required();
    en->add_option("--seed", en_seed, "Run seed for the initial codes (the training run_seed)");
    en->add_option("--max-steps", en_max_steps, "Step cap M (default b)");
    en->add_option("--out", en_out, "Codes file to write")->required();

    // eval
    auto* ev = app.add_subcommand("eval", "Hamming-ranking mAP of query codes against database codes");
    std::string ev_qc, ev_ql, ev_dc, ev_dl, ev_out;
    std::size_t ev_topk = 0;
    ev->add_option("--query-codes", ev_qc, "Query codes")->required();
    ev->add_option("--query-labels", ev_ql, "Query labels")->required();
    ev->add_option("--db-codes", ev_dc, "Database codes")->required();
    ev->add_option("--db-labels", ev_dl, "Database labels")->required();
    ev->add_option("--topk", ev_topk, "Ranking depth (default: whole database)");
    ev->add_option("--out", ev_out, "Also write the report here");

    // sweep
    auto* sw = app.add_subcommand("sweep", "mAP over values of eta (retrains) or M (re-encodes)");
    std::string sw_param, sw_values, sw_model, sw_config, sw_codebook;
    std::string sw_tf, sw_tl, sw_qf, sw_ql, sw_df, sw_dl;
    std::size_t sw_topk = 0;
    sw->add_option("--param", sw_param, "eta or M")->required()->check(CLI::IsMember({"eta", "M"}));
    sw->add_option("--values", sw_values, "Comma-separated values")->required();
    sw->add_option("--codebook", sw_codebook, "Codebook file")->required();
    sw->add_option("--model", sw_model, "Trained model (M sweep)");
    sw->add_option("--config", sw_config, "Hyperparameter file (eta sweep)");
    sw->add_option("--train-features", sw_tf, "Training features (eta sweep)");
    sw->add_option("--train-labels", sw_tl, "Training labels (eta sweep)");
    sw->add_option("--query-features", sw_qf, "Query features")->required();
    sw->add_option("--query-labels", sw_ql, "Query labels")->required();
    sw->add_option("--db-features", sw_df, "Database features")->required();
    sw->add_option("--db-labels", sw_dl, "Database labels")->required();
    sw->add_option("--topk", sw_topk, "Ranking depth (default: whole database)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*cb) {
            const auto book = build_codebook(cb_classes, cb_bits, cb_seed);
            if (!cb_out.empty())
                write_codebook_file(cb_out, book);
            std::printf("n=%zu D=%zu R=%zu\n", book.bch_length, book.min_distance, book.radius);
        } else if (*sy) {
            const auto data = synth_gaussian(so);
            const auto write = [&](const std::string& name, const Dataset& d) {
                save_features(sy_prefix + "." + name + ".fv", d);
                save_labels(sy_prefix + "." + name + ".labels", d);
            };
            write("train", data.subset(Split::train));
            write("query", data.subset(Split::query));
            write("db", retrieval_database(data, !sy_no_train_in_db));
            std::printf("nearest-center accuracy %.4f\n", nearest_center_accuracy(data, synth_centers(so)));
        } else if (*tr) {
            const auto data = load_features(tr_features, tr_labels);
            const auto book = read_codebook_file(tr_codebook);
            const auto parsed = load_config(tr_config);
            std::ofstream file;
            std::ostream* log = &std::cout;
            if (!tr_log.empty()) {
                file = open_out(tr_log);
                log = &file;
            }
            *log << describe_config(parsed, book) << std::flush;
            const auto result = run_training(data, book, parsed.config, log);
            result.net.save(tr_model);
        } else if (*en) {
            const auto book = read_codebook_file(en_codebook);
            EnvConfig env_config = EnvConfig::defaults_for(book);
            if (en_max_steps)
                env_config.max_steps = *en_max_steps;
            const auto data = load_features(en_features);
            const Environment env(book, env_config, data.dim);
            const auto net = QNetwork::load(en_model, env.state_dim(), env.num_actions());
            write_codes_file(en_out, encode_dataset(net, data, env, en_seed, threads));
        } else if (*ev) {
            const auto qc = read_codes_file(ev_qc);
            const auto dc = read_codes_file(ev_dc);
            const auto ql = load_labels(ev_ql);
            const auto dl = load_labels(ev_dl);
            if (qc.size() != ql.size() || dc.size() != dl.size())
                throw HeaderMismatch("code and label files disagree on the item count");
            auto report = mean_average_precision(qc, ql, dc, dl, ev_topk ? ev_topk : dc.size(), threads);
            report.config = {{"query_codes", ev_qc}, {"db_codes", ev_dc}};
            write_report(std::cout, report);
            if (!ev_out.empty()) {
                auto os = open_out(ev_out);
                write_report(os, report);
            }
        } else if (*sw) {
            const auto book = read_codebook_file(sw_codebook);
            const auto query = load_features(sw_qf, sw_ql);
            const auto db = load_features(sw_df, sw_dl);
            const auto values = parse_values(sw_values);
            const std::size_t top_k = sw_topk ? sw_topk : db.size();
            std::vector<SweepPoint> points;
            if (sw_param == "M") {
                if (sw_model.empty())
                    throw InvalidArgument("--param M needs --model");
                const auto parsed = load_config(sw_config);
                const auto base = parsed.config.env_config(book);
                const Environment env(book, base, query.dim);
                const auto net = QNetwork::load(sw_model, env.state_dim(), env.num_actions());
                points = sweep_max_steps(net, book, base, query, db, values, parsed.config.run_seed, top_k, threads);
            } else {
                if (sw_tf.empty() || sw_tl.empty())
                    throw InvalidArgument("--param eta needs --train-features and --train-labels");
                const auto train = load_features(sw_tf, sw_tl);
                const auto parsed = load_config(sw_config);
                points = sweep_eta(train, query, db, book, parsed.config, values, top_k, threads, &std::cerr);
            }
            std::cout << format_sweep_table(sw_param, points);
        }
    } catch (const TooManyClasses& e) {
        std::cerr << "drlh: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "drlh: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
