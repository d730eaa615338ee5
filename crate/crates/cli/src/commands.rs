use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use sert::baselines::{
    ensemble_rank, expanded_query_rank, reciprocal_rank_product, Baseline, CollectionStatistics, Smoothing,
};
use sert::bench::{loglinear_scaling, model1_scaling, model2_scaling, BenchConfig, ScalingReport};
use sert::corpus::{
    generate_synthetic_corpus, read_jsonl, write_jsonl, Corpus, SynthConfig, SynthVariant, Tokenizer,
};
use sert::eval::{
    compare_reports, entropy_ap_correlation, evaluate, EntropyCorrelation, GainMode, Metric, MetricReport,
    Qrels, SignificanceResult,
};
use sert::model::LogLinearModel;
use sert::query::{read_queries, write_queries, Query};
use sert::ranking::{Ranking, Run, RunEntry};
use sert::training::{train_with, OptimizerKind, TrainingConfig};
use sert::{Error, Result, Scalar};

use crate::args::*;
use crate::output::*;

fn tokenizer(args: &TokenizerArgs) -> Result<Tokenizer> {
    if args.no_stopwords {
        Ok(Tokenizer::without_stopwords())
    } else if let Some(path) = &args.stopwords {
        Tokenizer::from_stopword_file(path)
    } else {
        Ok(Tokenizer::default())
    }
}

fn gain(g: Gain) -> GainMode {
    match g {
        Gain::Exponential => GainMode::Exponential,
        Gain::Binary => GainMode::Binary,
    }
}

fn training_config(args: &TrainingArgs) -> TrainingConfig {
    TrainingConfig {
        window: args.window,
        batch_size: args.batch_size,
        weight_decay: args.weight_decay,
        optimizer: match args.sgd {
            Some(learning_rate) => OptimizerKind::Sgd { learning_rate },
            None => OptimizerKind::Adadelta {
                rho: args.rho,
                eps: args.eps,
            },
        },
        epochs: args.epochs,
        overlapping: !args.no_overlap,
        seed: args.seed,
        dim: args.dim,
        init_embeddings: args.init_embeddings.clone(),
    }
}

fn require<'a>(path: &'a Option<std::path::PathBuf>, flag: &str, why: &str) -> Result<&'a Path> {
    path.as_deref()
        .ok_or_else(|| Error::InvalidArgument(format!("{flag} is required {why}")))
}

fn ensure_exists(paths: &[&Path]) -> Result<()> {
    for p in paths {
        if !p.exists() {
            return Err(Error::io(*p, std::io::Error::from(std::io::ErrorKind::NotFound)));
        }
    }
    Ok(())
}

fn nonempty<T>(list: &[T], flag: &str) -> Result<()> {
    if list.is_empty() {
        return Err(Error::InvalidArgument(format!("{flag} needs at least one value")));
    }
    Ok(())
}

pub fn index(args: &IndexArgs) -> Result<()> {
    let tk = tokenizer(&args.tokenizer)?;
    let raw = read_jsonl(&args.corpus)?;
    let corpus = Corpus::index(&raw, &tk, args.vocab_size)?;
    corpus.save(&args.out)?;
    println!(
        "indexed {} documents, {} candidates, vocabulary {} -> {}",
        corpus.documents.len(),
        corpus.registry.len(),
        corpus.vocabulary.len(),
        args.out.display()
    );
    Ok(())
}

fn train_model<T: Scalar>(corpus: &Corpus, config: &TrainingConfig, log: Option<&Path>) -> Result<LogLinearModel<T>> {
    let mut writer = match log {
        Some(p) => Some((p, BufWriter::new(File::create(p).map_err(|e| Error::io(p, e))?))),
        None => None,
    };
    let mut failure = None;
    let model = train_with(corpus, config, |entry| {
        if let Some((p, w)) = writer.as_mut() {
            let line = serde_json::to_string(entry).expect("plain struct");
            if let Err(e) = writeln!(w, "{line}") {
                failure.get_or_insert(Error::io(*p, e));
            }
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    if let Some((p, mut w)) = writer {
        w.flush().map_err(|e| Error::io(p, e))?;
    }
    Ok(model)
}

pub fn train(args: &TrainArgs, precision: Precision) -> Result<()> {
    let corpus = Corpus::load(&args.index)?;
    let config = training_config(&args.training);
    let log = args.log.as_deref();
    match precision {
        Precision::F32 => train_model::<f32>(&corpus, &config, log)?.save(&args.model)?,
        Precision::F64 => train_model::<f64>(&corpus, &config, log)?.save(&args.model)?,
    }
    println!("model -> {}", args.model.display());
    Ok(())
}

fn load_model<T: Scalar>(path: &Path) -> Result<LogLinearModel<T>> {
    let m = LogLinearModel::<f32>::load(path)?;
    LogLinearModel::new(m.params.cast(), m.vocabulary, m.registry)
}

/// Everything a ranking system may need, loaded once.
struct Resources<T> {
    model: Option<LogLinearModel<T>>,
    corpus: Option<Corpus>,
    stats: Option<CollectionStatistics>,
}

impl<T: Scalar> Resources<T> {
    fn registry(&self) -> &sert::corpus::CandidateRegistry {
        match (&self.model, &self.corpus) {
            (Some(m), _) => &m.registry,
            (None, Some(c)) => &c.registry,
            (None, None) => unreachable!("checked when loading"),
        }
    }

    fn rank(&self, system: System, tk: &Tokenizer, q: &Query, args: &RankArgs) -> Result<Ranking> {
        let strict = args.strict_oov;
        if system == System::LogLinear {
            let model = self.model.as_ref().expect("checked when loading");
            return model.rank(tk, &q.id, &q.text, !strict);
        }
        let corpus = self.corpus.as_ref().expect("checked when loading");
        let stats = self.stats.as_ref().expect("checked when loading");
        let tokens = tk.tokenize(&q.text);
        if strict {
            if let Some(t) = tokens.iter().find(|t| corpus.vocabulary.id(t).is_none()) {
                return Err(Error::UnknownTerm(t.clone()));
            }
        }
        let ids = corpus.vocabulary.encode(&tokens);
        if args.expand > 0 && matches!(system, System::Model1Jm | System::Model1Dirichlet) {
            let model = self
                .model
                .as_ref()
                .ok_or_else(|| Error::InvalidArgument("--expand needs --model".into()))?;
            let smoothing = if system == System::Model1Jm {
                Smoothing::jelinek_mercer()
            } else {
                Smoothing::dirichlet_for(stats)
            };
            return expanded_query_rank(&model.params, stats, &q.id, &ids, args.expand, smoothing);
        }
        baseline(system).rank(stats, &q.id, &ids)
    }
}

fn baseline(system: System) -> Baseline {
    match system {
        System::Model1Jm => Baseline::Model1Jm,
        System::Model1Dirichlet => Baseline::Model1Dirichlet,
        System::Model2Jm => Baseline::Model2Jm,
        System::Model2Dirichlet => Baseline::Model2Dirichlet,
        System::Tfidf => Baseline::Tfidf,
        System::LogLinear => unreachable!("log-linear is not a baseline"),
    }
}

fn system_name(system: System) -> &'static str {
    match system {
        System::LogLinear => "log-linear",
        other => baseline(other).tag(),
    }
}

fn rank_with<T: Scalar>(args: &RankArgs, tk: &Tokenizer, queries: &[Query]) -> Result<()> {
    let systems: Vec<System> = std::iter::once(args.system).chain(args.ensemble_with).collect();
    let needs_model = systems.contains(&System::LogLinear) || args.expand > 0;
    let needs_index = systems.iter().any(|&s| s != System::LogLinear);
    let model = if needs_model {
        Some(load_model::<T>(require(&args.model, "--model", "for this system")?)?)
    } else {
        None
    };
    let corpus = if needs_index {
        Some(Corpus::load(require(&args.index, "--index", "for baseline systems")?)?)
    } else {
        None
    };
    if let (Some(m), Some(c)) = (&model, &corpus) {
        if m.registry != c.registry {
            return Err(Error::InvalidArgument("model and index list different candidates".into()));
        }
    }
    let stats = corpus.as_ref().map(|c| CollectionStatistics::new(c, Default::default()));
    let res = Resources { model, corpus, stats };

    let mut rankings = Vec::with_capacity(queries.len());
    for q in queries {
        let mut r = res.rank(args.system, tk, q, args)?;
        if let Some(other) = args.ensemble_with {
            r = ensemble_rank(&r, &res.rank(other, tk, q, args)?)?;
        }
        rankings.push(r);
    }
    let tag = args.tag.clone().unwrap_or_else(|| match args.ensemble_with {
        Some(o) => format!("{}+{}", system_name(args.system), system_name(o)),
        None => system_name(args.system).to_string(),
    });
    Run::from_rankings(&tag, &rankings, res.registry()).save(&args.out)?;
    println!("ranked {} queries -> {}", rankings.len(), args.out.display());
    Ok(())
}

pub fn rank(args: &RankArgs, precision: Precision) -> Result<()> {
    let tk = tokenizer(&args.tokenizer)?;
    let queries = read_queries(&args.queries)?;
    match precision {
        Precision::F32 => rank_with::<f32>(args, &tk, &queries),
        Precision::F64 => rank_with::<f64>(args, &tk, &queries),
    }
}

#[derive(Serialize)]
struct EvalReport<'a> {
    run: String,
    metrics: &'a MetricReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    entropy_correlation: Option<EntropyCorrelation>,
}

pub fn eval(args: &EvalArgs) -> Result<()> {
    let run = Run::load(&args.run)?;
    let qrels = Qrels::load(&args.qrels)?;
    let report = evaluate(&run, &qrels, gain(args.gain))?;
    println!("{}", metric_table(&report));
    let correlation = if args.entropy {
        let c = entropy_ap_correlation(&run, &qrels, args.permutations, args.seed)?;
        println!("entropy/AP correlation: r = {:.4}, p = {:.4}", c.r, c.p_value);
        Some(c)
    } else {
        None
    };
    if let Some(path) = &args.json {
        write_json(
            path,
            &EvalReport {
                run: run.tag.clone(),
                metrics: &report,
                entropy_correlation: correlation,
            },
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct TopicDiff<'a> {
    query: &'a str,
    ap_a: f64,
    ap_b: f64,
    difference: f64,
}

#[derive(Serialize)]
struct CompareReport<'a> {
    run_a: &'a str,
    run_b: &'a str,
    a: &'a MetricReport,
    b: &'a MetricReport,
    significance: Vec<SignificanceResult>,
}

fn fuse_runs(a: &Run, b: &Run) -> Result<Run> {
    let mut out = Run::new(format!("{}+{}", a.tag, b.tag));
    for (qid, ea) in &a.queries {
        let Some(eb) = b.queries.get(qid) else { continue };
        let names = |e: &[RunEntry]| e.iter().map(|x| x.candidate.clone()).collect::<Vec<_>>();
        let fused = reciprocal_rank_product(&names(ea), &names(eb))?;
        out.queries.insert(
            qid.clone(),
            fused.into_iter().map(|(candidate, score)| RunEntry { candidate, score }).collect(),
        );
    }
    Ok(out)
}

pub fn compare(args: &CompareArgs) -> Result<()> {
    let a = Run::load(&args.run_a)?;
    let b = Run::load(&args.run_b)?;
    let qrels = Qrels::load(&args.qrels)?;
    let ra = evaluate(&a, &qrels, gain(args.gain))?;
    let rb = evaluate(&b, &qrels, gain(args.gain))?;
    let significance = compare_reports(&ra, &rb, args.permutations, args.seed)?;

    let (name_a, name_b) = (tag_or(&a, "a"), tag_or(&b, "b"));
    println!("{}", side_by_side((&name_a, &ra), (&name_b, &rb)));
    println!();
    println!("{:<9}  {:>10}  {:>8}  {:>8}", "metric", "mean diff", "p", "adj. p");
    for s in &significance {
        println!(
            "{:<9}  {:>10.4}  {:>8.4}  {:>8.4}",
            s.metric, s.mean_difference, s.p_value, s.adjusted_p_value
        );
    }

    create_dir(&args.out_dir)?;
    let diffs: Vec<TopicDiff> = ra
        .per_query
        .iter()
        .filter_map(|(q, ma)| {
            let mb = rb.per_query.get(q)?;
            Some(TopicDiff {
                query: q,
                ap_a: ma.get(Metric::Map),
                ap_b: mb.get(Metric::Map),
                difference: ma.get(Metric::Map) - mb.get(Metric::Map),
            })
        })
        .collect();
    write_csv(&args.out_dir.join("per_topic_ap.csv"), &diffs)?;
    write_json(
        &args.out_dir.join("compare.json"),
        &CompareReport {
            run_a: &name_a,
            run_b: &name_b,
            a: &ra,
            b: &rb,
            significance,
        },
    )?;
    if let Some(path) = &args.ensemble {
        fuse_runs(&a, &b)?.save(path)?;
        println!("ensemble run -> {}", path.display());
    }
    Ok(())
}

fn tag_or(run: &Run, fallback: &str) -> String {
    if run.tag.is_empty() {
        fallback.to_string()
    } else {
        run.tag.clone()
    }
}

#[derive(Serialize)]
struct WindowRow {
    window: usize,
    #[serde(rename = "MAP")]
    map: f64,
    #[serde(rename = "MRR")]
    mrr: f64,
}

fn sweep_with<T: Scalar>(args: &SweepWindowArgs, corpus: &Corpus, queries: &[Query], qrels: &Qrels) -> Result<Vec<WindowRow>> {
    let tk = tokenizer(&args.tokenizer)?;
    let mut rows = Vec::new();
    for &window in &args.windows {
        let config = TrainingConfig {
            window,
            ..training_config(&args.training)
        };
        let model = train_model::<T>(corpus, &config, None)?;
        let rankings = queries
            .iter()
            .map(|q| model.rank(&tk, &q.id, &q.text, true))
            .collect::<Result<Vec<_>>>()?;
        let report = evaluate(&Run::from_rankings("sweep", &rankings, &model.registry), qrels, GainMode::Exponential)?;
        println!("n={window:<3} MAP {:.4}  MRR {:.4}", report.aggregate.ap, report.aggregate.rr);
        rows.push(WindowRow {
            window,
            map: report.aggregate.ap,
            mrr: report.aggregate.rr,
        });
    }
    Ok(rows)
}

pub fn sweep_window(args: &SweepWindowArgs, precision: Precision) -> Result<()> {
    nonempty(&args.windows, "--windows")?;
    ensure_exists(&[&args.index, &args.queries, &args.qrels])?;
    let corpus = Corpus::load(&args.index)?;
    let queries = read_queries(&args.queries)?;
    let qrels = Qrels::load(&args.qrels)?;
    let rows = match precision {
        Precision::F32 => sweep_with::<f32>(args, &corpus, &queries, &qrels)?,
        Precision::F64 => sweep_with::<f64>(args, &corpus, &queries, &qrels)?,
    };
    write_csv(&args.out, &rows)
}

#[derive(Serialize)]
struct ExpansionRow {
    k: usize,
    #[serde(rename = "MAP")]
    map: f64,
}

pub fn expand_sweep(args: &ExpandSweepArgs) -> Result<()> {
    nonempty(&args.k, "--k")?;
    ensure_exists(&[&args.index, &args.model, &args.queries, &args.qrels])?;
    let tk = tokenizer(&args.tokenizer)?;
    let corpus = Corpus::load(&args.index)?;
    let model = LogLinearModel::<f32>::load(&args.model)?;
    if model.vocabulary != corpus.vocabulary {
        return Err(Error::InvalidArgument("model and index use different vocabularies".into()));
    }
    let queries = read_queries(&args.queries)?;
    let qrels = Qrels::load(&args.qrels)?;
    let stats = CollectionStatistics::new(&corpus, Default::default());
    let smoothing = if args.dirichlet {
        Smoothing::dirichlet_for(&stats)
    } else {
        Smoothing::jelinek_mercer()
    };
    let encoded: Vec<(&Query, Vec<u32>)> = queries
        .iter()
        .map(|q| (q, corpus.vocabulary.encode(&tk.tokenize(&q.text))))
        .collect();
    let mut rows = Vec::new();
    for &k in &args.k {
        let rankings = encoded
            .iter()
            .map(|(q, ids)| expanded_query_rank(&model.params, &stats, &q.id, ids, k, smoothing))
            .collect::<Result<Vec<_>>>()?;
        let report = evaluate(&Run::from_rankings("expand", &rankings, &corpus.registry), &qrels, GainMode::Exponential)?;
        println!("k={k:<3} MAP {:.4}", report.aggregate.ap);
        rows.push(ExpansionRow {
            k,
            map: report.aggregate.ap,
        });
    }
    write_csv(&args.out, &rows)
}

fn print_scaling(r: &ScalingReport, unit: &str) {
    println!("{}", r.system);
    for p in &r.points {
        println!("  {:>6} {unit}s  {:.6} s", p.size, p.seconds);
    }
    println!(
        "  fit: {:.3e} s per {unit}, intercept {:.3e} s, R² {:.4}",
        r.fit.slope, r.fit.intercept, r.fit.r_squared
    );
}

pub fn bench(args: &BenchArgs, precision: Precision) -> Result<()> {
    nonempty(&args.sizes, "--sizes")?;
    let config = BenchConfig {
        dim: args.dim,
        vocab_size: args.vocab,
        queries: args.queries,
        query_len: args.query_len,
        repeats: args.repeats,
        seed: args.seed,
    };
    let mut reports = vec![match precision {
        Precision::F32 => loglinear_scaling::<f32>(&args.sizes, &config)?,
        Precision::F64 => loglinear_scaling::<f64>(&args.sizes, &config)?,
    }];
    print_scaling(&reports[0], "candidate");
    if args.baselines {
        let m1 = model1_scaling(&[25, 50, 100, 200], 5, &config)?;
        print_scaling(&m1, "document");
        let m2 = model2_scaling(20, &[5, 10, 20, 40], &config)?;
        print_scaling(&m2, "document");
        reports.push(m1);
        reports.push(m2);
    }
    if let Some(path) = &args.json {
        write_json(path, &reports)?;
    }
    Ok(())
}

pub fn synth(args: &SynthArgs) -> Result<()> {
    let variant = match args.variant {
        Variant::Plain => SynthVariant::Plain,
        Variant::Synonyms => SynthVariant::Synonyms,
        Variant::Mixed => SynthVariant::Mixed,
    };
    let config = SynthConfig::new(args.candidates, args.docs, args.vocab, args.noise, args.seed).with_variant(variant);
    let s = generate_synthetic_corpus(&config)?;
    create_dir(&args.out)?;
    write_jsonl(&args.out.join("corpus.jsonl"), &s.documents)?;
    write_queries(&args.out.join("queries.tsv"), &s.queries)?;
    s.qrels.save(&args.out.join("qrels.txt"))?;
    println!(
        "{} documents, {} candidates, {} queries -> {}",
        s.documents.len(),
        s.registry.len(),
        s.queries.len(),
        args.out.display()
    );
    Ok(())
}
