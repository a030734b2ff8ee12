use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use tam_core::ensemble::{run_variant, EnsembleConfig, Variant};
use tam_core::eval::{report, Run};
use tam_core::graph::{edge_class_counts, homophily_stats, load_graph, save_graph, GraphFiles, LoadReport};
use tam_core::inject::{camouflage, inject as inject_anomalies, InjectionConfig};
use tam_core::lamnet::TrainConfig;
use tam_core::nsgt::truncate_sequence;
use tam_core::seed::rng_for;
use tam_core::synth::OneClassBenchmark;
use tam_core::{AttributedGraph, Error, Result};

use crate::config::{parse_hidden, parse_seeds, RunOverrides};
use crate::output::{read_scores, scores_csv, truncation_rows, write_file, TRUNCATION_HEADER};
use crate::{BenchArgs, EvalArgs, InjectArgs, RunArgs, StatsArgs, TruncateArgs};

fn load(prefix: &Path) -> Result<(AttributedGraph, LoadReport)> {
    let (g, report) = load_graph(&GraphFiles::from_prefix(prefix))?;
    if !report.removed_nodes.is_empty() {
        eprintln!(
            "note: dropped {} isolated node(s); output ids refer to the input file",
            report.removed_nodes.len()
        );
    }
    Ok((g, report))
}

/// Input id of every loaded node.
fn original_ids(report: &LoadReport) -> Vec<usize> {
    (0..report.remap.len())
        .filter(|&i| report.remap[i].is_some())
        .collect()
}

fn parse_cliques(spec: &str) -> Result<(usize, usize)> {
    let bad = || Error::Config(format!("expected COUNTxSIZE, got {spec:?}"));
    let (p, q) = spec.split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?))
}

pub fn inject(args: InjectArgs) -> Result<()> {
    if args.structural.is_none() && args.contextual.is_none() {
        return Err(Error::Config("nothing to inject: pass --structural and/or --contextual".into()));
    }
    let (g, _) = load(&args.input)?;
    let (num_cliques, clique_size) = match &args.structural {
        Some(spec) => parse_cliques(spec)?,
        None => (0, 2),
    };
    let cfg = InjectionConfig {
        clique_size,
        num_cliques,
        num_contextual: args.contextual.unwrap_or(0),
        candidate_pool: args.k,
        seed: args.seed,
    };
    let (out, record) = inject_anomalies(&g, &cfg)?;
    save_graph(&out, &args.output)?;
    println!(
        "injected {} structural and {} contextual anomalies into {} nodes",
        record.cliques.iter().map(Vec::len).sum::<usize>(),
        record.swaps.len(),
        out.num_nodes()
    );
    Ok(())
}

pub fn stats(args: StatsArgs) -> Result<()> {
    let (g, _) = load(&args.input)?;
    println!("nodes {}", g.num_nodes());
    println!("edges {}", g.num_edges());
    println!("attributes {}", g.num_attributes());
    if let Some(labels) = g.labels() {
        let h = homophily_stats(g.adjacency(), labels)?;
        let counts = edge_class_counts(g.adjacency(), labels);
        println!("anomalies {}", labels.iter().filter(|&&l| l).count());
        let fmt = |v: Option<f64>| v.map_or("-".into(), |v| format!("{v:.4}"));
        println!("mean homophily (normal) {}", fmt(h.mean_normal()));
        println!("mean homophily (anomalous) {}", fmt(h.mean_anomalous()));
        println!(
            "edges normal-normal {} normal-anomaly {} anomaly-anomaly {}",
            counts.normal_normal, counts.normal_anomaly, counts.anomaly_anomaly
        );
    }
    let cfg = EnsembleConfig {
        runs: args.runs,
        depth: args.depth,
        master_seed: args.seed,
        ..Default::default()
    };
    let structures = tam_core::ensemble::member_structures(&g, Variant::Tam, &cfg)?;
    let mut text = String::from(TRUNCATION_HEADER);
    truncation_rows(&mut text, args.seed, g.adjacency(), &structures, g.labels())?;
    print!("{text}");
    Ok(())
}

pub fn truncate(args: TruncateArgs) -> Result<()> {
    let (g, report) = load(&args.input)?;
    let ids = original_ids(&report);
    let set = truncate_sequence(&g, args.depth, tam_core::seed::derive_seed(args.seed, "nsgt", 0))?;
    for (k, level) in set.levels.iter().enumerate() {
        let mut text = String::new();
        for (i, j) in level.edges() {
            writeln!(text, "{} {}", ids[i], ids[j]).unwrap();
        }
        let mut path = args.output.as_os_str().to_owned();
        path.push(format!(".k{}.edges", k + 1));
        write_file(Path::new(&path), &text)?;
        println!("k={} edges={}", k + 1, level.num_edges());
    }
    Ok(())
}

fn run_overrides(args: &RunArgs) -> Result<RunOverrides> {
    Ok(RunOverrides {
        input: args.input.clone(),
        runs: args.runs,
        depth: args.depth,
        epochs: args.epochs,
        learning_rate: args.learning_rate,
        lambda: args.lambda,
        hidden_dims: args.hidden.as_deref().map(parse_hidden).transpose()?,
        seeds: args.seeds.as_deref().map(parse_seeds).transpose()?,
        variant: args.variant.as_deref().map(str::parse).transpose()?,
        out: args.out.clone(),
        jobs: args.jobs,
    })
}

pub fn run(args: RunArgs) -> Result<()> {
    let file = match &args.config {
        Some(path) => RunOverrides::load(path)?,
        None => RunOverrides::default(),
    };
    let cfg = file.merge(run_overrides(&args)?).resolve()?;
    let (g, load_report) = load(&cfg.input)?;
    let ids = original_ids(&load_report);
    let lambda = cfg
        .lambda
        .unwrap_or(if g.kinds().is_some() { 1.0 } else { 0.0 });
    let n = g.num_nodes();

    let mut per_seed = Vec::with_capacity(cfg.seeds.len());
    let mut stats = String::from(TRUNCATION_HEADER);
    let mut timing = String::from("seed,variant,members,seconds\n");
    for &seed in &cfg.seeds {
        let ens_cfg = EnsembleConfig {
            runs: cfg.runs,
            depth: cfg.depth,
            train: TrainConfig {
                epochs: cfg.epochs,
                learning_rate: cfg.learning_rate,
                lambda,
                hidden_dims: cfg.hidden_dims,
                ..Default::default()
            },
            master_seed: seed,
            jobs: cfg.jobs,
        };
        let start = Instant::now();
        let outcome = run_variant(&g, cfg.variant, &ens_cfg).inspect_err(|_| {
            eprintln!("seed {seed}: {} failed", cfg.variant);
        })?;
        let seconds = start.elapsed().as_secs_f64();
        let structures: Vec<_> = match &outcome.ensemble {
            Some(ens) => ens.members.iter().map(|(id, m)| (*id, m.structure.clone())).collect(),
            None => outcome.structures.clone(),
        };
        truncation_rows(&mut stats, seed, g.adjacency(), &structures, g.labels())?;
        writeln!(timing, "{seed},{},{},{seconds:.3}", cfg.variant, outcome.scores.members.len()).unwrap();
        write_file(
            &cfg.out.join(format!("scores.seed{seed}.csv")),
            &scores_csv(&ids, &outcome.scores.scores),
        )?;
        if args.save_models {
            if let Some(ens) = &outcome.ensemble {
                ens.save(cfg.out.join("models").join(format!("seed{seed}")))?;
            }
        }
        eprintln!("seed {seed}: {} done in {seconds:.1}s", cfg.variant);
        per_seed.push(outcome.scores.scores);
    }

    let mut mean = vec![0.0; n];
    for scores in &per_seed {
        for (m, s) in mean.iter_mut().zip(scores) {
            *m += s;
        }
    }
    let count = per_seed.len() as f64;
    mean.iter_mut().for_each(|m| *m /= count);
    write_file(&cfg.out.join("scores.csv"), &scores_csv(&ids, &mean))?;
    write_file(&cfg.out.join("truncation_stats.csv"), &stats)?;
    write_file(&cfg.out.join("timing.csv"), &timing)?;

    match g.labels() {
        Some(labels) => {
            let runs: Vec<Run<'_>> = cfg
                .seeds
                .iter()
                .zip(&per_seed)
                .map(|(&seed, scores)| Run {
                    seed,
                    scores,
                    labels,
                    kinds: g.kinds(),
                })
                .collect();
            let rep = report(&runs)?;
            write_file(&cfg.out.join("report.csv"), &rep.to_csv())?;
            print!("{rep}");
        }
        None => eprintln!("note: graph has no labels; skipping the report"),
    }
    Ok(())
}

pub fn eval(args: EvalArgs) -> Result<()> {
    let (g, load_report) = load(&args.input)?;
    let labels = g.require_labels()?;
    let mut runs_scores = Vec::with_capacity(args.scores.len());
    for path in &args.scores {
        let mut scores = vec![None; g.num_nodes()];
        for (id, s) in read_scores(path)? {
            let node = load_report
                .remap
                .get(id)
                .copied()
                .flatten()
                .ok_or_else(|| Error::Config(format!("{}: node {id} is not in the graph", path.display())))?;
            scores[node] = Some(s);
        }
        let scores: Vec<f64> = scores
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| Error::Config(format!("{}: no score for node {i}", path.display()))))
            .collect::<Result<_>>()?;
        runs_scores.push(scores);
    }
    let runs: Vec<Run<'_>> = runs_scores
        .iter()
        .enumerate()
        .map(|(i, scores)| Run {
            seed: i as u64,
            scores,
            labels,
            kinds: g.kinds(),
        })
        .collect();
    let rep = report(&runs)?;
    print!("{rep}");
    if let Some(out) = &args.out {
        write_file(out, &rep.to_csv())?;
    }
    Ok(())
}

pub fn bench(args: BenchArgs) -> Result<()> {
    let seeds = parse_seeds(&args.seeds)?;
    let bench = OneClassBenchmark::default();
    if let Some(prefix) = &args.emit {
        let g = bench.generate(seeds[0])?;
        save_graph(&g, prefix)?;
        println!("wrote benchmark graph for seed {} to {}", seeds[0], prefix.display());
        return Ok(());
    }
    let variants = args
        .variants
        .split(',')
        .map(str::parse)
        .collect::<Result<Vec<Variant>>>()?;
    let train = TrainConfig {
        epochs: args.epochs,
        learning_rate: args.learning_rate,
        lambda: args.lambda,
        hidden_dims: parse_hidden(&args.hidden)?,
        ..Default::default()
    };
    let mut csv = String::from("seed,variant,auroc,auprc,seconds\n");
    println!("{:>6}  {:<20} {:>7} {:>7} {:>8}", "seed", "variant", "AUROC", "AUPRC", "seconds");
    for &seed in &seeds {
        let mut g = bench.generate(seed)?;
        if args.camouflage > 0.0 {
            g = camouflage(&g, args.camouflage, &mut rng_for(seed, "camouflage", 0))?.0;
        }
        let labels = g.require_labels()?.to_vec();
        for &variant in &variants {
            let cfg = EnsembleConfig {
                runs: args.runs,
                depth: args.depth,
                train: train.clone(),
                master_seed: seed,
                jobs: args.jobs,
            };
            let start = Instant::now();
            let scores = run_variant(&g, variant, &cfg)?.scores.scores;
            let seconds = start.elapsed().as_secs_f64();
            let auroc = tam_core::eval::auroc(&scores, &labels)?;
            let auprc = tam_core::eval::auprc(&scores, &labels)?;
            println!("{seed:>6}  {:<20} {auroc:>7.4} {auprc:>7.4} {seconds:>8.1}", variant.to_string());
            writeln!(csv, "{seed},{variant},{auroc},{auprc},{seconds:.3}").unwrap();
        }
    }
    if let Some(out) = &args.out {
        write_file(out, &csv)?;
    }
    Ok(())
}
