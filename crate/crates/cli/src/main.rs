use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tuckerlab::batch::{self, VERSION};
use tuckerlab::complex::{Triangulation, TriangulationDoc};
use tuckerlab::generate::{generate, hemisphere_chain, random_labelling, GeneratorSpec};
use tuckerlab::labels::{LabelFunction, LabelFunctionDoc, LabelSetDescriptor};
use tuckerlab::parity::RuleKind;
use tuckerlab::reduction::{extend, ShellConfig};
use tuckerlab::theorems::{check_instance, crosscheck_propositions, exhaustive_check, TheoremId};

#[derive(Parser, Debug)]
#[command(name = "tuckerlab", version, about = "Exact checks of Tucker/Sperner-type lemmas on triangulated polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug, Clone, Serialize)]
struct Global {
    /// Base seed; sample i uses seed + i.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1)]
    samples: u64,
    /// Cap on enumerated labellings for exhaustive runs and searches.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    budget: u64,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    #[serde(skip)]
    out: Option<PathBuf>,
    /// Print the JSON report instead of a summary.
    #[arg(long, global = true)]
    #[serde(skip)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a triangulation (and optionally a random valid labelling).
    Gen(GenArgs),
    /// Validate labellings and search for witnesses.
    Check(CheckArgs),
    /// Run the parity framework.
    Parity(ParityArgs),
    /// Shell reduction to Tucker's lemma.
    Reduce(ReduceArgs),
    /// Compare the combinatorial predicates with the hull test on all label multisets.
    Crosscheck(CrosscheckArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
struct Input {
    /// Generator spec, e.g. cross:2, cube:2:k=3, simplex:2:k=4, bary(cross:3,rounds=1).
    #[arg(long = "gen", conflicts_with = "triangulation")]
    generator: Option<String>,
    /// Triangulation JSON file.
    #[arg(long)]
    triangulation: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
struct GenArgs {
    #[command(flatten)]
    input: Input,
    /// Also draw a random valid labelling for this theorem.
    #[arg(long)]
    theorem: Option<String>,
    #[arg(long)]
    labels_out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
struct CheckArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long)]
    theorem: String,
    /// Check this labelling instead of sampling.
    #[arg(long)]
    labelling: Option<PathBuf>,
    /// Enumerate every valid labelling (up to --budget).
    #[arg(long)]
    exhaustive: bool,
    #[arg(long)]
    no_crosscheck: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
enum Rule {
    Tucker,
    Cubical,
}

#[derive(Args, Debug, Clone, Serialize)]
struct ParityArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum)]
    rule: Rule,
    /// Label family, e.g. cross:3 or cube:3.
    #[arg(long)]
    labels: String,
    /// Look for an antipodal labelling with no forbidden simplex: exhaustive
    /// when at most --budget exist, else --budget seeded draws.
    #[arg(long)]
    search_nonforbidden: bool,
    /// Rejection-sampling attempts per sample.
    #[arg(long, default_value_t = 10_000)]
    attempts: usize,
    /// Members listed per level in the trace.
    #[arg(long, default_value_t = 4)]
    trace: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
struct ReduceArgs {
    #[command(flatten)]
    input: Input,
    /// oct-in-2oct, cube-in-2oct or oct-in-2cube.
    #[arg(long)]
    config: String,
    /// Write the extended instance of the first sample here.
    #[arg(long)]
    extension: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
struct CrosscheckArgs {
    #[arg(long)]
    labels: String,
    /// Largest multiset size (default: dimension + 1).
    #[arg(long)]
    max_size: Option<usize>,
}

#[derive(Serialize)]
struct Report<'a, C: Serialize, R: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    global: &'a Global,
    config: &'a C,
    result: R,
}

/// Failures that are not usage errors: exit code 1.
#[derive(Debug)]
struct Refuted(String);

impl std::fmt::Display for Refuted {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Refuted {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<Refuted>() => {
            eprintln!("refuted: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let g = &cli.global;
    match &cli.command {
        Command::Gen(a) => cmd_gen(g, a),
        Command::Check(a) => cmd_check(g, a),
        Command::Parity(a) => cmd_parity(g, a),
        Command::Reduce(a) => cmd_reduce(g, a),
        Command::Crosscheck(a) => cmd_crosscheck(g, a),
    }
}

fn load(input: &Input) -> Result<Triangulation> {
    match (&input.generator, &input.triangulation) {
        (Some(spec), _) => {
            let spec: GeneratorSpec = spec.parse()?;
            Ok(generate(&spec)?)
        }
        (None, Some(path)) => {
            let doc: TriangulationDoc = read_json(path)?;
            Ok(doc.into_triangulation()?)
        }
        (None, None) => bail!("one of --gen or --triangulation is required"),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

fn theorem(s: &str) -> Result<TheoremId> {
    s.parse().map_err(|e: String| anyhow!(e))
}

fn dim_of(t: &Triangulation) -> Result<usize> {
    Ok(t.domain().ok_or_else(|| anyhow!("triangulation has no domain"))?.dim)
}

/// Writes or prints the report, then prints `summary` unless `--json`.
fn emit<C: Serialize, R: Serialize>(g: &Global, command: &'static str, config: &C, result: R, summary: &str) -> Result<()> {
    let report = Report {
        tool: "tuckerlab",
        version: VERSION,
        command,
        global: g,
        config,
        result,
    };
    if let Some(path) = &g.out {
        write_json(path, &report)?;
    }
    if g.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("{summary}");
    }
    Ok(())
}

fn cmd_gen(g: &Global, a: &GenArgs) -> Result<()> {
    let t = load(&a.input)?;
    let doc = TriangulationDoc::from_triangulation(&t);
    if let Some(name) = &a.theorem {
        let id = theorem(name)?;
        let lambda = random_labelling(id, &t, dim_of(&t)?, g.seed)?;
        let ldoc = LabelFunctionDoc::from_function(&lambda);
        match &a.labels_out {
            Some(path) => write_json(path, &ldoc)?,
            None => println!("{}", serde_json::to_string_pretty(&ldoc)?),
        }
    }
    match &g.out {
        Some(path) => {
            write_json(path, &doc)?;
            if !g.json {
                println!(
                    "{} vertices, {} maximal simplices -> {}",
                    t.vertex_count(),
                    t.maximal_simplices().len(),
                    path.display()
                );
            }
        }
        None => println!("{}", serde_json::to_string_pretty(&doc)?),
    }
    Ok(())
}

fn cmd_check(g: &Global, a: &CheckArgs) -> Result<()> {
    let t = load(&a.input)?;
    let id = theorem(&a.theorem)?;
    if let Some(path) = &a.labelling {
        let lambda: LabelFunction = read_json::<LabelFunctionDoc>(path)?.into_function()?;
        let report = check_instance(id, &t, &lambda)?;
        let cross = if a.no_crosscheck || !lambda.codomain().has_negation() {
            None
        } else {
            Some(crosscheck_propositions(&t, &lambda))
        };
        let summary = match &report.witness {
            Some(w) => format!("{}: witness {:?} ({:?})", id.name(), w.simplex.ids(), w.kind),
            None if !report.valid => format!("{}: labelling violates the hypotheses", id.name()),
            None => format!("{}: no witness", id.name()),
        };
        let invalid = !report.valid;
        let refuted = report.valid && report.witness.is_none();
        let mismatch = cross.as_ref().is_some_and(|c| !c.ok());
        #[derive(Serialize)]
        struct Single {
            check: tuckerlab::theorems::CheckReport,
            #[serde(skip_serializing_if = "Option::is_none")]
            crosscheck: Option<tuckerlab::report::ValidationReport>,
        }
        emit(g, "check", a, Single { check: report, crosscheck: cross }, &summary)?;
        if invalid {
            bail!("labelling violates the hypotheses of {}", id.name());
        }
        if refuted || mismatch {
            return Err(Refuted(summary).into());
        }
        return Ok(());
    }
    if a.exhaustive {
        let codomain = LabelSetDescriptor::new(id.codomain_kind(), dim_of(&t)?)?;
        let Some(summary) = exhaustive_check(id, &t, codomain, g.budget)? else {
            bail!("valid-labelling count exceeds --budget {}", g.budget);
        };
        let line = format!(
            "{}: {}/{} valid labellings have a witness",
            id.name(),
            summary.witnesses,
            summary.valid_labellings
        );
        let refuted = !summary.refutations.is_empty();
        emit(g, "check", a, &summary, &line)?;
        if refuted {
            return Err(Refuted(line).into());
        }
        return Ok(());
    }
    let sweep = batch::check_sweep(id, &t, g.seed, g.samples, !a.no_crosscheck)?;
    let line = format!(
        "{}: {}/{} witnesses, {} refutations, {} invalid, {} cross-check mismatches",
        id.name(),
        sweep.witnesses,
        sweep.samples,
        sweep.refutations.len(),
        sweep.invalid.len(),
        sweep.crosscheck_mismatches.len()
    );
    let ok = sweep.ok();
    emit(g, "check", a, &sweep, &line)?;
    if !ok {
        return Err(Refuted(line).into());
    }
    Ok(())
}

fn cmd_parity(g: &Global, a: &ParityArgs) -> Result<()> {
    let t = load(&a.input)?;
    let ls: LabelSetDescriptor = a.labels.parse().map_err(|e: String| anyhow!(e))?;
    let rule = match a.rule {
        Rule::Tucker => RuleKind::TuckerRule,
        Rule::Cubical => RuleKind::CubicalRule,
    };
    let chain = hemisphere_chain(&t)?;
    let sweep = if a.search_nonforbidden {
        match batch::parity_search(&chain, ls, rule, g.seed, g.budget, a.trace)? {
            Some(s) => s,
            None => return Err(Refuted(format!("no forbidden-free antipodal labelling found (budget {})", g.budget)).into()),
        }
    } else {
        batch::parity_sweep(&chain, ls, rule, g.seed, g.samples, a.attempts, a.trace)?
    };
    let mut line = format!(
        "M sizes {:?}; {} completed, {} aborted on a forbidden simplex; even-degree {}; symmetric {}",
        sweep.chain.level_sizes, sweep.completed, sweep.aborted, sweep.chain.even_degrees, sweep.chain.strictly_symmetric
    );
    if let Some(cf) = sweep.chain.closed_form {
        line += &format!("; closed form {cf}");
    }
    if let Some(pb) = sweep.chain.phi_bound {
        line += &format!("; Φ-bound {pb}");
    }
    if let Some(r) = sweep.runs.iter().find(|r| r.completed) {
        line += &format!("; counts {:?}", r.counts);
    }
    let ok = sweep.ok();
    emit(g, "parity", a, &sweep, &line)?;
    if !ok {
        return Err(Refuted(line).into());
    }
    Ok(())
}

fn cmd_reduce(g: &Global, a: &ReduceArgs) -> Result<()> {
    let t = load(&a.input)?;
    let cfg: ShellConfig = a.config.parse().map_err(|e: String| anyhow!(e))?;
    let n = dim_of(&t)?;
    if !cfg.supports(n) {
        bail!("{cfg} is not supported in dimension {n}");
    }
    if t.domain() != Some(&cfg.inner(n)) {
        bail!("{cfg} needs a triangulation of the {}", cfg.inner(n));
    }
    if let Some(path) = &a.extension {
        let lambda = random_labelling(cfg.inner_theorem(), &t, n, g.seed)?;
        let res = extend(&t, &lambda, cfg)?;
        #[derive(Serialize)]
        struct ExtensionDoc {
            triangulation: TriangulationDoc,
            labels: LabelFunctionDoc,
            provenance: Vec<(Vec<u32>, tuckerlab::reduction::Provenance)>,
        }
        write_json(
            path,
            &ExtensionDoc {
                triangulation: TriangulationDoc::from_triangulation(&res.t_star),
                labels: LabelFunctionDoc::from_function(&res.lambda_star),
                provenance: res.provenance.iter().map(|(s, p)| (s.ids(), *p)).collect(),
            },
        )?;
    }
    let sweep = batch::reduction_sweep(cfg, &t, g.seed, g.samples)?;
    let line = format!(
        "{cfg}: {}/{} INNER witnesses, {} failures",
        sweep.inner_witnesses,
        sweep.samples,
        sweep.failures.len()
    );
    let ok = sweep.ok();
    emit(g, "reduce", a, &sweep, &line)?;
    if !ok {
        return Err(Refuted(line).into());
    }
    Ok(())
}

fn cmd_crosscheck(g: &Global, a: &CrosscheckArgs) -> Result<()> {
    let ls: LabelSetDescriptor = a.labels.parse().map_err(|e: String| anyhow!(e))?;
    let sweep = batch::proposition_sweep(ls, a.max_size.unwrap_or(ls.dim + 1));
    let line = format!(
        "{ls}: {} multisets, {} positive, {} mismatches",
        sweep.cases, sweep.positives, sweep.mismatches
    );
    let ok = sweep.mismatches == 0;
    emit(g, "crosscheck", a, &sweep, &line)?;
    if !ok {
        return Err(Refuted(line).into());
    }
    Ok(())
}
