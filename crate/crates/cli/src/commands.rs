use std::fs;
use std::io::Write;
use std::path::Path;

use labelprop::engine::{active_passive_run, Convergence, RunConfig, Schedule, TiePolicy};
use labelprop::generators::{self, PlantedSpec};
use labelprop::graph::{signed_reweight, SignedScheme};
use labelprop::io::{self, EdgeList, IdMap};
use labelprop::objectives::{degeneracy_stats, nmi, objective_f, ObjectiveReport};
use labelprop::pipelines::{self, CopraMode};
use labelprop::rules::{CitationMode, PreferenceMode};
use labelprop::{Graph, Partition, Rule};
use serde::Serialize;

use crate::args::*;
use crate::Failure;

pub fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Detect(a) => detect(a),
        Command::Consensus(a) => consensus(a),
        Command::Hierarchy(a) => hierarchy(a),
        Command::Overlap(a) => overlap(a),
        Command::Equivalence(a) => equivalence(a),
        Command::Generate(a) => generate(a),
        Command::Eval(a) => eval(a),
        Command::Benchmark(a) => crate::bench::benchmark(a),
    }
}

/// Seed to use; missing seeds are a usage error when `CI` is set.
pub fn resolve_seed(seed: Option<u64>) -> Result<u64, Failure> {
    match seed {
        Some(s) => Ok(s),
        None if std::env::var_os("CI").is_some() => {
            Err(Failure::Usage("--seed is required when CI is set".into()))
        }
        None => Ok(0),
    }
}

pub fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn write_report<T: Serialize>(path: Option<&Path>, report: &T) -> Result<(), Failure> {
    if let Some(p) = path {
        let mut text =
            serde_json::to_string_pretty(report).map_err(|e| Failure::Data(e.to_string()))?;
        text.push('\n');
        fs::write(p, text)?;
    }
    Ok(())
}

fn config(a: &ConfigArgs) -> Result<RunConfig, Failure> {
    Ok(RunConfig {
        schedule: match a.schedule {
            ScheduleName::Sync => Schedule::Sync,
            ScheduleName::Async => Schedule::Async,
            ScheduleName::Semisync => Schedule::SemiSync,
            ScheduleName::Bipartite => Schedule::BipartiteAlternating,
        },
        tie: match a.tie {
            TieName::Random => TiePolicy::Random,
            TieName::Retention => TiePolicy::Retention,
            TieName::Inclusion => TiePolicy::Inclusion,
            TieName::Smallest => TiePolicy::SmallestLabel,
        },
        convergence: match a.convergence {
            ConvergenceName::NoChange => Convergence::NoChange,
            ConvergenceName::Equilibrium => Convergence::Equilibrium,
            ConvergenceName::Fixed => Convergence::FixedIterations,
        },
        max_iters: a.max_iters,
        seed: resolve_seed(a.seed)?,
        probabilistic: a.probabilistic,
    })
}

/// Reads an edge list and reweights signed graphs for propagation.
fn load(path: &Path, signed: SignedName) -> Result<EdgeList, Failure> {
    let mut el = io::read_edge_list(path)?;
    if el.graph.is_signed() {
        let scheme = match signed {
            SignedName::EqualTotal => SignedScheme::EqualTotal,
            SignedName::Unit => SignedScheme::Fixed {
                positive: 1.0,
                negative: -1.0,
            },
        };
        el.graph = signed_reweight(&el.graph, scheme)?;
    }
    Ok(el)
}

fn rule(a: &RuleArgs, g: &Graph) -> Result<Rule, Failure> {
    let needs_lambda = || {
        a.lambda.ok_or_else(|| {
            Failure::Usage(format!("--rule {:?} needs --lambda", a.rule).to_lowercase())
        })
    };
    Ok(match a.rule {
        RuleName::Standard => Rule::Standard,
        RuleName::Cpm => Rule::Cpm {
            lambda: needs_lambda()?,
        },
        RuleName::Modularity => match a.lambda {
            Some(lambda) => Rule::Modularity { lambda },
            None => Rule::modularity_for(g),
        },
        RuleName::Apm => Rule::apm(needs_lambda()?)?,
        RuleName::Degree => Rule::Preference {
            prefs: g.degrees().to_vec(),
            mode: PreferenceMode::Promote,
        },
        RuleName::Defensive => Rule::Defensive,
        RuleName::Offensive => Rule::Offensive,
        RuleName::Balanced => Rule::Balanced {
            gamma: a.gamma,
            defensive: false,
        },
        RuleName::BalancedDefensive => Rule::Balanced {
            gamma: a.gamma,
            defensive: true,
        },
        RuleName::Neighborhood => Rule::NeighborhoodStrength,
        RuleName::Tau => Rule::GeneralTau { tau: a.tau },
        RuleName::Cocitation => Rule::Citation(CitationMode::Cocitation),
        RuleName::Bibcoupling => Rule::Citation(CitationMode::BibliographicCoupling),
    })
}

/// Hamiltonian parameters implied by the rule, for the objective report.
fn lambdas(r: &Rule, a: &RuleArgs) -> (Option<f64>, Option<f64>, Option<f64>) {
    match (a.rule, r) {
        (RuleName::Apm, Rule::Cpm { lambda }) => (Some(*lambda), None, a.lambda),
        (_, Rule::Cpm { lambda }) => (Some(*lambda), None, None),
        (_, Rule::Modularity { lambda }) => (None, Some(*lambda), None),
        _ => (None, None, None),
    }
}

#[derive(Serialize)]
struct Degeneracy {
    tiny_fraction: f64,
    largest_fraction: f64,
}

impl Degeneracy {
    fn of(p: &Partition) -> Self {
        let (tiny_fraction, largest_fraction) = degeneracy_stats(p);
        Degeneracy {
            tiny_fraction,
            largest_fraction,
        }
    }
}

#[derive(Serialize)]
struct RunReport {
    command: &'static str,
    seed: u64,
    nodes: usize,
    groups: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    relabel_counts: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rounds: Option<usize>,
    /// Two-step equivalence: groups before the two-hop refinement.
    #[serde(skip_serializing_if = "Option::is_none")]
    communities: Option<usize>,
    converged: bool,
    objectives: ObjectiveReport,
    degeneracy: Degeneracy,
}

impl RunReport {
    fn new(
        command: &'static str,
        seed: u64,
        g: &Graph,
        p: &Partition,
        lambdas: (Option<f64>, Option<f64>, Option<f64>),
    ) -> Self {
        RunReport {
            command,
            seed,
            nodes: g.node_count(),
            groups: p.num_groups(),
            iterations: None,
            relabel_counts: None,
            rounds: None,
            communities: None,
            converged: true,
            objectives: ObjectiveReport::new(g, p.labels(), lambdas.0, lambdas.1, lambdas.2),
            degeneracy: Degeneracy::of(p),
        }
    }
}

fn detect(a: DetectArgs) -> Result<(), Failure> {
    let cfg = config(&a.config)?;
    let el = load(&a.graph, a.config.signed)?;
    let r = rule(&a.rule, &el.graph)?;
    let result = if a.active_passive {
        active_passive_run(&el.graph, &r, &cfg)?
    } else {
        labelprop::run(&el.graph, &r, &cfg)?
    };
    write_output(
        a.out.output.as_deref(),
        &io::write_partition(&result.partition, &el.ids),
    )?;
    let mut report = RunReport::new(
        "detect",
        cfg.seed,
        &el.graph,
        &result.partition,
        lambdas(&r, &a.rule),
    );
    report.iterations = Some(result.iterations);
    report.relabel_counts = Some(result.relabel_counts);
    report.converged = result.converged;
    write_report(a.out.report.as_deref(), &report)
}

fn consensus(a: ConsensusArgs) -> Result<(), Failure> {
    let cfg = config(&a.config)?;
    let el = load(&a.graph, a.config.signed)?;
    let r = rule(&a.rule, &el.graph)?;
    let result = pipelines::consensus(&el.graph, &r, &cfg, a.runs, a.threshold, a.max_rounds)?;
    write_output(
        a.out.output.as_deref(),
        &io::write_partition(&result.partition, &el.ids),
    )?;
    let mut report = RunReport::new(
        "consensus",
        cfg.seed,
        &el.graph,
        &result.partition,
        lambdas(&r, &a.rule),
    );
    report.rounds = Some(result.rounds);
    report.converged = result.converged;
    write_report(a.out.report.as_deref(), &report)
}

#[derive(Serialize)]
struct LevelReport {
    level: usize,
    groups: usize,
    f: f64,
    q: Option<f64>,
}

#[derive(Serialize)]
struct HierarchyReport {
    command: &'static str,
    seed: u64,
    refined: bool,
    levels: Vec<LevelReport>,
}

fn hierarchy(a: HierarchyArgs) -> Result<(), Failure> {
    let cfg = config(&a.config)?;
    let el = load(&a.graph, a.config.signed)?;
    let r = rule(&a.rule, &el.graph)?;
    let mut h = pipelines::hierarchy_agglomerate(&el.graph, &r, &cfg)?;
    if a.refine {
        h = pipelines::hierarchy_refine(&el.graph, &h, &r, &cfg)?;
    }
    io::write_hierarchy(&a.out_dir, &h, &el.ids)?;
    let levels = h
        .lifted_levels()
        .iter()
        .enumerate()
        .map(|(level, p)| LevelReport {
            level,
            groups: p.num_groups(),
            f: objective_f(&el.graph, p.labels()),
            q: labelprop::objectives::modularity_q(&el.graph, p.labels()).ok(),
        })
        .collect();
    let report = HierarchyReport {
        command: "hierarchy",
        seed: cfg.seed,
        refined: a.refine,
        levels,
    };
    write_report(a.report.as_deref(), &report)
}

#[derive(Serialize)]
struct CoverReport {
    command: &'static str,
    method: &'static str,
    seed: u64,
    nodes: usize,
    groups: usize,
    overlapping_nodes: usize,
    iterations: usize,
    converged: bool,
}

fn overlap(a: OverlapArgs) -> Result<(), Failure> {
    let seed = resolve_seed(a.seed)?;
    let el = load(&a.graph, SignedName::EqualTotal)?;
    let (method, result) = if let Some(nu) = a.copra_nu {
        (
            "copra",
            pipelines::copra(&el.graph, CopraMode::MaxGroups(nu), a.max_iters, seed)?,
        )
    } else if let Some(rho) = a.copra_rho {
        (
            "copra",
            pipelines::copra(&el.graph, CopraMode::Relative(rho), a.max_iters, seed)?,
        )
    } else {
        let m = a.memory.as_deref().unwrap_or_default();
        let t: usize = m[0]
            .parse()
            .map_err(|_| Failure::Usage(format!("--memory T must be a count, got '{}'", m[0])))?;
        let r: f64 = m[1]
            .parse()
            .map_err(|_| Failure::Usage(format!("--memory R must be a number, got '{}'", m[1])))?;
        ("memory", pipelines::memory_lpa(&el.graph, t, r, seed)?)
    };
    write_output(
        a.out.output.as_deref(),
        &io::write_cover(&result.cover, &el.ids),
    )?;
    let report = CoverReport {
        command: "overlap",
        method,
        seed,
        nodes: el.graph.node_count(),
        groups: result.cover.groups().len(),
        overlapping_nodes: result
            .cover
            .affiliations()
            .iter()
            .filter(|a| a.len() > 1)
            .count(),
        iterations: result.iterations,
        converged: result.converged,
    };
    write_report(a.out.report.as_deref(), &report)
}

fn equivalence(a: EquivalenceArgs) -> Result<(), Failure> {
    let cfg = config(&a.config)?;
    let el = load(&a.graph, a.config.signed)?;
    let (partition, report) = if a.two_step {
        let res = pipelines::two_step_equivalence(&el.graph, &cfg)?;
        let mut report = RunReport::new(
            "equivalence",
            cfg.seed,
            &el.graph,
            &res.partition,
            (None, None, None),
        );
        report.communities = Some(res.communities.num_groups());
        (res.partition, report)
    } else {
        let mode = if a.cocitation {
            CitationMode::Cocitation
        } else {
            CitationMode::BibliographicCoupling
        };
        let res = labelprop::run(&el.graph, &Rule::Citation(mode), &cfg)?;
        let mut report = RunReport::new(
            "equivalence",
            cfg.seed,
            &el.graph,
            &res.partition,
            (None, None, None),
        );
        report.iterations = Some(res.iterations);
        report.relabel_counts = Some(res.relabel_counts);
        report.converged = res.converged;
        (res.partition, report)
    };
    write_output(
        a.out.output.as_deref(),
        &io::write_partition(&partition, &el.ids),
    )?;
    write_report(a.out.report.as_deref(), &report)
}

fn generate(a: GenerateArgs) -> Result<(), Failure> {
    let seed = resolve_seed(a.seed)?;
    let mut truth = None;
    let g = match a.kind {
        GenerateKind::Er { n, degree } => generators::erdos_renyi(n, degree, seed)?,
        GenerateKind::Planted {
            n,
            groups,
            degree,
            mu,
        } => {
            let spec = PlantedSpec {
                n,
                groups,
                avg_degree: degree,
                mu,
                seed,
            };
            let (g, p) = generators::planted_partition(&spec)?;
            truth = Some(io::write_partition(&p, &IdMap::numeric(n)));
            g
        }
        GenerateKind::Grid { rows, cols, remove } => {
            generators::triangular_grid(rows, cols, &remove)?
        }
        GenerateKind::Cliques { k, shared } => {
            let (g, cover) = generators::overlapping_cliques(k, shared)?;
            truth = Some(io::write_cover(&cover, &IdMap::numeric(g.node_count())));
            g
        }
        GenerateKind::Karate => generators::karate_club(),
    };
    let ids = IdMap::numeric(g.node_count());
    write_output(a.output.as_deref(), &io::write_edge_list(&g, &ids))?;
    match (a.truth, truth) {
        (Some(path), Some(text)) => fs::write(path, text)?,
        (Some(_), None) => return Err(Failure::Usage("this generator has no ground truth".into())),
        _ => {}
    }
    Ok(())
}

#[derive(Serialize)]
struct EvalReport {
    nodes: usize,
    groups: usize,
    degeneracy: Degeneracy,
    #[serde(skip_serializing_if = "Option::is_none")]
    objectives: Option<ObjectiveReport>,
}

fn eval(a: EvalArgs) -> Result<(), Failure> {
    if let Some(files) = &a.nmi {
        let ref_text = fs::read_to_string(&files[0])?;
        let out_text = fs::read_to_string(&files[1])?;
        let ids = io::partition_nodes(&ref_text)?;
        let reference = io::parse_partition(&ref_text, &ids)?;
        let result = io::parse_partition(&out_text, &ids)?;
        println!("{}", nmi(&reference, &result)?);
        return Ok(());
    }
    let path = a
        .partition
        .as_ref()
        .expect("clap requires --nmi or --partition");
    let text = fs::read_to_string(path)?;
    let (graph, ids) = match &a.graph {
        Some(g) => {
            let el = load(g, SignedName::EqualTotal)?;
            (Some(el.graph), el.ids)
        }
        None => (None, io::partition_nodes(&text)?),
    };
    let p = io::parse_partition(&text, &ids)?;
    let report = EvalReport {
        nodes: p.len(),
        groups: p.num_groups(),
        degeneracy: Degeneracy::of(&p),
        objectives: graph
            .map(|g| ObjectiveReport::new(&g, p.labels(), a.lambda1, a.lambda2, a.lambda3)),
    };
    let text = serde_json::to_string_pretty(&report).map_err(|e| Failure::Data(e.to_string()))?;
    println!("{text}");
    Ok(())
}
