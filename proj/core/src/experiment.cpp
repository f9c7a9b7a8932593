#include "tweetsent/experiment.hpp"

#include <cerrno>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <system_error>

#include <nlohmann/json.hpp>
#include "tweetsent/csv.hpp"
#include "tweetsent/error.hpp"
#include "tweetsent/evaluate.hpp"
#include "tweetsent/hash.hpp"

namespace tweetsent {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

// Runs `f`, prefixing any library error with the command and stage name.
template <typename F>
auto stage(std::string_view command, std::string_view name, F&& f) -> decltype(f()) {
  const std::string prefix = std::string(command) + " [" + std::string(name) + "]: ";
  try {
    return f();
  } catch (const ModelFormatError& e) {
    throw ModelFormatError(prefix + e.what());
  } catch (const DataError& e) {
    throw DataError(prefix + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const NumericError& e) {
    throw NumericError(prefix + e.what());
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ojson class_counts_json(const LabeledCorpus& corpus) {
  ojson j = ojson::object();
  const auto counts = corpus.class_counts();
  for (auto s : kAllSentiments) j[std::string(to_string(s))] = counts[code(s)];
  return j;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<std::int64_t> parse_id(std::string_view s) {
  const std::string t = trim(s);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) return std::nullopt;
  return v;
}

std::optional<double> parse_real(std::string_view s) {
  const std::string t = trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v)) return std::nullopt;
  return v;
}

void require(bool ok, std::string_view key, std::string_view why) {
  if (!ok) throw ConfigError("config key '" + std::string(key) + "' is required " + std::string(why));
}

fs::path subword_sidecar(const fs::path& model_file) {
  fs::path p = model_file;
  p += ".subword";
  return p;
}

void write(RunSummary& summary, const fs::path& path, std::string_view content) {
  csv::write_text_file(path, content);
  summary.files.push_back(path);
}

std::string predictions_csv(const std::vector<std::int64_t>& ids, const std::vector<Prediction>& preds) {
  csv::Writer w;
  w.row({"id", "label", "score_negative", "score_neutral", "score_positive"});
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& p = preds[i];
    w.row({std::to_string(ids[i]), std::string(to_string(p.label)), format_fixed(p.scores[0]),
           format_fixed(p.scores[1]), format_fixed(p.scores[2])});
  }
  return w.str();
}

}  // namespace

// ---------------------------------------------------------------------------

OutputLock::OutputLock(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  path_ = dir / kFileName;
  std::FILE* f = std::fopen(path_.c_str(), "wx");
  if (!f) {
    if (errno == EEXIST) {
      throw ConfigError("output directory " + dir.string() + " is in use by another run (remove " + path_.string() +
                        " if no run is active)");
    }
    throw ConfigError("cannot create lock file " + path_.string());
  }
  std::fclose(f);
}

OutputLock::~OutputLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

std::vector<Tokens> preprocess_all(const LabeledCorpus& corpus, const PreprocessConfig& config) {
  config.validate();
  std::vector<Tokens> docs;
  docs.reserve(corpus.size());
  for (const auto& r : corpus.records()) docs.push_back(run_pipeline(r.text, config));
  return docs;
}

PreprocessConfig fit_preprocess(const ExperimentConfig& config, const LabeledCorpus& fit_on) {
  PreprocessConfig p = config.preprocess_rules();
  if (p.has_step(Step::kCorrectSpelling)) {
    std::vector<Tokens> before;
    before.reserve(fit_on.size());
    for (const auto& r : fit_on.records()) before.push_back(run_pipeline_before(r.text, p, Step::kCorrectSpelling));
    p.spell = SpellPolicy::from_token_sequences(before, config.spell_min_freq);
  }
  p.validate();
  return p;
}

ExternalVectors load_external_vectors(const fs::path& path) {
  const csv::Table t = csv::read_file(path);
  if (t.header.size() < 2 || trim(t.header[0]) != "id") {
    throw DataError(path.string() + ": document vector file needs header `id,d0,d1,...`");
  }
  ExternalVectors out;
  out.dimension = t.header.size() - 1;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::string where = path.string() + ": row " + std::to_string(r + 1);
    if (row.fields.size() != t.header.size()) {
      throw DataError(where + ": expected " + std::to_string(t.header.size()) + " fields, got " +
                      std::to_string(row.fields.size()));
    }
    const auto id = parse_id(row.fields[0]);
    if (!id) throw DataError(where + ": id is not an integer");
    DenseVector v(out.dimension);
    for (std::size_t k = 0; k < out.dimension; ++k) {
      const auto x = parse_real(row.fields[k + 1]);
      if (!x) throw DataError(where + ": component " + std::to_string(k) + " is not a finite number");
      v[k] = *x;
    }
    out.ids.push_back(*id);
    out.vectors.emplace_back(std::move(v));
  }
  if (out.vectors.empty()) throw DataError(path.string() + ": no document vectors");
  return out;
}

void check_alignment(const ExternalVectors& vectors, const LabeledCorpus& corpus, const fs::path& path) {
  if (vectors.ids.size() != corpus.size()) {
    throw DataError(path.string() + ": " + std::to_string(vectors.ids.size()) + " document vectors but the split has " +
                    std::to_string(corpus.size()) + " rows");
  }
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (vectors.ids[i] != corpus[i].id) {
      throw DataError(path.string() + ": row " + std::to_string(i + 1) + " has id " + std::to_string(vectors.ids[i]) +
                      " but the split has id " + std::to_string(corpus[i].id));
    }
  }
}

// ---------------------------------------------------------------------------

Featurizer::Featurizer(const VectorizerState& state, const fs::path& model_path) : state_(state) {
  auto verified = [&](const fs::path& p) {
    const std::string digest = file_digest(p);
    if (digest != state_.vectors_digest) {
      throw DataError(p.string() + " has changed since the model was trained (digest " + digest + ", expected " +
                      state_.vectors_digest + ")");
    }
    return p;
  };
  if (state_.kind == VectorizerKind::kSubword) {
    subword_ = load_subword_model(verified(model_path.parent_path() / state_.vectors_file));
  } else if (state_.kind == VectorizerKind::kPretrained) {
    table_ = load_vectors(verified(state_.vectors_file));
  }
}

FeatureVector Featurizer::transform(const Tokens& tokens) const {
  switch (state_.kind) {
    case VectorizerKind::kBow:
      return bow_transform(tokens, state_.vocabulary, state_.weighting);
    case VectorizerKind::kSubword:
      return embed_document(*subword_, tokens).vector;
    case VectorizerKind::kPretrained:
      return embed_document(*table_, tokens).vector;
    case VectorizerKind::kExternal:
      break;
  }
  throw ConfigError("an external-vectors model scores document vectors, not text");
}

// ---------------------------------------------------------------------------

RunSummary cmd_split(const ExperimentConfig& c) {
  require(!c.corpus.empty(), "corpus", "by split");
  OutputLock lock(c.output_dir);
  RunSummary out;
  const std::string hash = c.hash();
  const LabeledCorpus corpus = stage("split", "load", [&] { return load_corpus(c.corpus, c.schema); });
  const CorpusSplit parts = stage("split", "shuffle", [&] { return shuffle_split(corpus, c.split); });
  write(out, c.train_file, corpus_to_csv(parts.train));
  write(out, c.test_file, corpus_to_csv(parts.test));

  ojson m;
  m["config_hash"] = hash;
  m["corpus"] = c.corpus.string();
  m["corpus_digest"] = file_digest(c.corpus);
  m["seed"] = c.split.seed;
  m["train_ratio"] = c.split.train_ratio;
  m["stratified"] = c.split.stratified;
  m["total"] = corpus.size();
  m["train_size"] = parts.train.size();
  m["test_size"] = parts.test.size();
  m["train_class_counts"] = class_counts_json(parts.train);
  m["test_class_counts"] = class_counts_json(parts.test);
  m["train_file"] = c.train_file.string();
  m["test_file"] = c.test_file.string();
  write(out, c.output_dir / "split_manifest.json", m.dump(2) + "\n");
  out.notes.push_back("split " + std::to_string(corpus.size()) + " records into " +
                      std::to_string(parts.train.size()) + " train / " + std::to_string(parts.test.size()) + " test");
  return out;
}

RunSummary cmd_train(const ExperimentConfig& c) {
  const auto started = std::chrono::steady_clock::now();
  const std::string started_at = utc_timestamp();
  OutputLock lock(c.output_dir);
  RunSummary out;
  const std::string hash = c.hash();

  const LabeledCorpus train = stage("train", "load", [&] { return load_corpus(c.train_file, split_file_schema()); });
  ModelBundle bundle;
  bundle.name = c.model_name;
  bundle.config_hash = hash;
  bundle.seed = c.split.seed;
  bundle.preprocess = stage("train", "preprocess", [&] { return fit_preprocess(c, train); });
  std::vector<Tokens> docs;
  if (c.vectorizer != VectorizerKind::kExternal) {
    docs = stage("train", "preprocess", [&] { return preprocess_all(train, bundle.preprocess); });
  }

  std::vector<FeatureVector> x;
  std::optional<SkipgramReport> skipgram;
  std::string vocabulary_csv;
  stage("train", "vectorize", [&] {
    auto& v = bundle.vectorizer;
    v.kind = c.vectorizer;
    switch (c.vectorizer) {
      case VectorizerKind::kBow: {
        v.vocabulary = Vocabulary::build(docs, c.bow_min_count);
        if (v.vocabulary.size() == 0) throw DataError("vocabulary is empty after preprocessing");
        v.weighting = c.bow_weighting;
        v.dimension = v.vocabulary.size();
        for (const auto& d : docs) x.emplace_back(bow_transform(d, v.vocabulary, v.weighting));
        vocabulary_csv = v.vocabulary.to_csv();
        break;
      }
      case VectorizerKind::kSubword: {
        SkipgramReport report;
        const SubwordModel model = train_skipgram(docs, c.subword, &report);
        const fs::path sidecar = subword_sidecar(c.model_file);
        save_subword_model(model, sidecar);
        out.files.push_back(sidecar);
        v.vectors_file = sidecar.filename().string();
        v.vectors_digest = file_digest(sidecar);
        v.dimension = model.dimension();
        for (const auto& d : docs) x.emplace_back(embed_document(model, d).vector);
        vocabulary_csv = model.words().to_csv();
        skipgram = std::move(report);
        break;
      }
      case VectorizerKind::kPretrained: {
        require(!c.vectors.empty(), "vectors", "when vectorizer = pretrained");
        const EmbeddingTable table = load_vectors(c.vectors);
        v.vectors_file = c.vectors.string();
        v.vectors_digest = file_digest(c.vectors);
        v.dimension = table.dimension();
        for (const auto& d : docs) x.emplace_back(embed_document(table, d).vector);
        break;
      }
      case VectorizerKind::kExternal: {
        require(!c.train_vectors.empty(), "train_vectors", "when vectorizer = external");
        ExternalVectors ev = load_external_vectors(c.train_vectors);
        check_alignment(ev, train, c.train_vectors);
        v.dimension = ev.dimension;
        x = std::move(ev.vectors);
        break;
      }
    }
  });

  const auto labels = train.labels();
  bundle.classifier = stage("train", "fit", [&] { return ovr_train(c.model, c.learner, x, labels); });
  const auto predictions = bundle.classifier.predict_all(x);
  std::vector<Sentiment> predicted;
  for (const auto& p : predictions) predicted.push_back(p.label);
  const MetricsReport fit = metrics(confusion_matrix(labels, predicted));

  stage("train", "save", [&] {
    save_model(bundle, c.model_file);
    out.files.push_back(c.model_file);
    if (!vocabulary_csv.empty()) write(out, c.output_dir / "vocabulary.csv", vocabulary_csv);
  });

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  ojson log;
  log["started_at"] = started_at;
  log["wall_seconds"] = seconds;
  log["config_hash"] = hash;
  log["seed"] = c.split.seed;
  log["model_name"] = c.model_name;
  log["vectorizer"] = std::string(to_string(c.vectorizer));
  log["model"] = std::string(to_string(c.model));
  log["native_multiclass"] = bundle.classifier.native_multiclass();
  log["train_file"] = c.train_file.string();
  log["train_size"] = train.size();
  log["feature_dimension"] = bundle.vectorizer.dimension;
  log["train_accuracy"] = fit.accuracy;
  log["train_macro_recall"] = fit.macro_recall;
  log["train_macro_f1"] = fit.macro_f1;
  if (skipgram) {
    log["skipgram_initial_loss"] = skipgram->initial_loss;
    log["skipgram_final_loss"] = skipgram->final_loss;
    log["skipgram_epoch_loss"] = skipgram->epoch_loss;
    log["skipgram_updates"] = skipgram->updates;
  }
  write(out, c.output_dir / "train_log.json", log.dump(2) + "\n");
  out.notes.push_back("trained " + c.model_name + " on " + std::to_string(train.size()) +
                      " records; training accuracy " + format_fixed(fit.accuracy, 4));
  return out;
}

RunSummary cmd_evaluate(const ExperimentConfig& c) {
  OutputLock lock(c.output_dir);
  RunSummary out;
  const std::string hash = c.hash();
  const ModelBundle bundle = stage("evaluate", "load model", [&] { return load_model(c.model_file); });
  const LabeledCorpus test = stage("evaluate", "load", [&] { return load_corpus(c.test_file, split_file_schema()); });

  std::vector<FeatureVector> x;
  std::size_t dimension = 0;
  stage("evaluate", "vectorize", [&] {
    if (bundle.vectorizer.kind == VectorizerKind::kExternal) {
      require(!c.test_vectors.empty(), "test_vectors", "to evaluate an external-vectors model");
      ExternalVectors ev = load_external_vectors(c.test_vectors);
      check_alignment(ev, test, c.test_vectors);
      dimension = ev.dimension;
      x = std::move(ev.vectors);
      return;
    }
    const Featurizer featurizer(bundle.vectorizer, c.model_file);
    dimension = featurizer.dimension();
    for (const auto& d : preprocess_all(test, bundle.preprocess)) x.push_back(featurizer.transform(d));
  });
  if (dimension != bundle.classifier.dimension()) {
    throw DataError("evaluate: vectorizer produces dimension " + std::to_string(dimension) +
                    " but the model expects " + std::to_string(bundle.classifier.dimension()));
  }

  const auto predictions = stage("evaluate", "predict", [&] { return bundle.classifier.predict_all(x); });
  const auto truth = test.labels();
  std::vector<Sentiment> predicted;
  for (const auto& p : predictions) predicted.push_back(p.label);
  const MetricsReport report = metrics(confusion_matrix(truth, predicted));

  write(out, c.output_dir / "metrics.csv", metrics_to_csv(report));
  write(out, c.output_dir / "metrics.json", metrics_to_json(report, {bundle.name, bundle.seed, hash}));
  const std::vector<NamedReport> named = {{bundle.name, report}};
  write(out, c.output_dir / "comparison_row.csv", comparison_to_csv(compare_models(named)));

  csv::Writer w;
  w.row({"id", "truth", "predicted"});
  for (std::size_t i = 0; i < test.size(); ++i) {
    w.row({std::to_string(test[i].id), std::string(to_string(truth[i])), std::string(to_string(predicted[i]))});
  }
  write(out, c.output_dir / "test_predictions.csv", w.str());
  out.notes.push_back(bundle.name + ": accuracy " + format_fixed(report.accuracy, 4) + ", macro recall " +
                      format_fixed(report.macro_recall, 4) + ", macro F1 " + format_fixed(report.macro_f1, 4));
  return out;
}

RunSummary cmd_predict(const ExperimentConfig& c) {
  require(!c.input.empty(), "input", "by predict");
  OutputLock lock(c.output_dir);
  RunSummary out;
  const ModelBundle bundle = stage("predict", "load model", [&] { return load_model(c.model_file); });
  const csv::Table table = stage("predict", "load", [&] { return csv::read_file(c.input); });
  const bool external = bundle.vectorizer.kind == VectorizerKind::kExternal;

  std::optional<std::size_t> text_col;
  std::optional<std::size_t> id_col;
  if (external) {
    id_col = 0;
  } else {
    text_col = table.column(c.schema.text_column);
    if (!text_col) throw DataError(c.input.string() + ": missing column '" + c.schema.text_column + "'");
    id_col = table.column(c.schema.id_column.empty() ? "id" : c.schema.id_column);
    if (!id_col && !c.schema.id_column.empty()) {
      throw DataError(c.input.string() + ": missing column '" + c.schema.id_column + "'");
    }
  }

  std::vector<std::int64_t> ids;
  std::vector<FeatureVector> x;
  std::vector<std::string> malformed;
  std::optional<Featurizer> featurizer;
  if (!external) {
    featurizer = stage("predict", "vectorize", [&] { return Featurizer(bundle.vectorizer, c.model_file); });
  }
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& f = table.rows[r].fields;
    const std::string row = "row " + std::to_string(r + 1);
    if (f.size() != table.header.size()) {
      malformed.push_back(row + ": expected " + std::to_string(table.header.size()) + " fields, got " +
                          std::to_string(f.size()));
      continue;
    }
    std::int64_t id = static_cast<std::int64_t>(r + 1);
    if (id_col) {
      const auto parsed = parse_id(f[*id_col]);
      if (!parsed) {
        malformed.push_back(row + ": id is not an integer");
        continue;
      }
      id = *parsed;
    }
    if (external) {
      DenseVector v(f.size() - 1);
      bool ok = true;
      for (std::size_t k = 1; k < f.size() && ok; ++k) {
        const auto value = parse_real(f[k]);
        ok = value.has_value();
        if (ok) v[k - 1] = *value;
      }
      if (!ok) {
        malformed.push_back(row + ": non-numeric vector component");
        continue;
      }
      x.emplace_back(std::move(v));
    } else {
      if (trim(f[*text_col]).empty()) {
        malformed.push_back(row + ": empty text");
        continue;
      }
      x.push_back(featurizer->transform(run_pipeline(f[*text_col], bundle.preprocess)));
    }
    ids.push_back(id);
  }
  if (!malformed.empty() && !c.lenient) {
    std::string msg = c.input.string() + ": " + std::to_string(malformed.size()) + " malformed row(s)";
    for (const auto& m : malformed) msg += "\n  " + m;
    msg += "\n(set lenient = true to skip them)";
    throw DataError(msg);
  }
  const auto predictions = stage("predict", "predict", [&] { return bundle.classifier.predict_all(x); });
  write(out, c.predictions_file, predictions_csv(ids, predictions));
  out.notes.push_back("scored " + std::to_string(ids.size()) + " rows with " + bundle.name);
  if (!malformed.empty()) {
    out.notes.push_back("skipped " + std::to_string(malformed.size()) + " malformed row(s):");
    for (const auto& m : malformed) out.notes.push_back("  " + m);
  }
  return out;
}

RunSummary cmd_freq(const ExperimentConfig& c) {
  require(!c.corpus.empty(), "corpus", "by freq");
  OutputLock lock(c.output_dir);
  RunSummary out;
  const LabeledCorpus corpus = stage("freq", "load", [&] { return load_corpus(c.corpus, c.schema); });
  const auto docs = stage("freq", "preprocess", [&] { return preprocess_all(corpus, fit_preprocess(c, corpus)); });
  const auto terms = stage("freq", "count", [&] { return term_frequencies(docs, c.top_n); });
  write(out, c.output_dir / "term_frequencies.csv", term_frequencies_to_csv(terms));
  write(out, c.output_dir / "class_distribution.csv", class_distribution(corpus).to_csv());
  write(out, c.output_dir / "tag_distribution.csv", tag_distribution(corpus).to_csv());
  out.notes.push_back("counted " + std::to_string(corpus.size()) + " records; " + std::to_string(terms.size()) +
                      " terms exported");
  return out;
}

RunSummary cmd_compare(const ExperimentConfig& c, std::span<const fs::path> reports) {
  if (reports.empty()) throw ConfigError("compare: no metrics reports given");
  OutputLock lock(c.output_dir);
  RunSummary out;
  std::vector<NamedReport> named;
  for (const auto& path : reports) {
    try {
      const auto j = nlohmann::json::parse(csv::read_text_file(path));
      NamedReport r;
      r.name = j.at("model").get<std::string>();
      r.report.accuracy = j.at("accuracy");
      r.report.macro_recall = j.at("macro_recall");
      r.report.macro_f1 = j.at("macro_f1");
      named.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path.string() + ": not a metrics report: " + e.what());
    }
  }
  const auto rows = compare_models(named);
  write(out, c.output_dir / "comparison.csv", comparison_to_csv(rows));
  for (const auto& r : rows) {
    out.notes.push_back(r.name + "  accuracy " + format_fixed(r.accuracy, 4) + "  macro recall " +
                        format_fixed(r.macro_recall, 4) + "  macro F1 " + format_fixed(r.macro_f1, 4));
  }
  return out;
}

}  // namespace tweetsent
