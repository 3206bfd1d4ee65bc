//! `chainrecon` command line.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::analysis::{self, DEFAULT_THRESHOLD};
use crate::ensemble::{default_epsilon_grid, EnsembleConfig, TopologyMode};
use crate::estimation::{self, reconstruct_nearest_neighbor, reconstruct_next_nearest};
use crate::graph::{self, GraphDocument};
use crate::model::SystemSpec;
use crate::output::{self, Series};
use crate::spectral::eigendecompose;

#[derive(Debug, Parser)]
#[command(
    name = "chainrecon",
    version,
    about = "Coupling reconstruction from spectral data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Assemble the Hamiltonian of a spec file.
    Build {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Eigenvalues and squared overlaps of sites 1 and 2.
    Spectrum {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Diagonalise a spec and reconstruct its couplings.
    Reconstruct {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = Recursion::Nearest)]
        recursion: Recursion,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Zero forcing closure of an initial vertex set.
    ZeroForcing {
        /// JSON document {"n_vertices": n, "edges": [[a, b], ...], "initial": [...]}.
        #[arg(long)]
        graph: PathBuf,
        /// Comma-separated initial blue vertices; overrides the document.
        #[arg(long, value_delimiter = ',')]
        initial: Option<Vec<usize>>,
        /// Also report the zero forcing number (exhaustive search).
        #[arg(long)]
        minimum: bool,
        #[arg(long, default_value_t = graph::DEFAULT_BRUTE_FORCE_CAP)]
        cap: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Ensemble-mean error per coupling at one epsilon.
    ErrorProfile {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Critical length against epsilon for one or more chain lengths.
    CriticalLength {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Error profiles of several topologies on paired instances.
    TopologyCompare {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        /// `label=topology`, repeatable. Defaults to nnn plus the two
        /// long-range stand-ins on 20 sites, or nnn and random otherwise.
        #[arg(long = "variant")]
        variants: Vec<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Recursion {
    Nearest,
    NextNearest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output file; stdout when absent (no manifest is written then).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
struct EnsembleArgs {
    /// JSON ensemble configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    sites: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    epsilon: Option<Vec<f64>>,
    #[arg(long)]
    instances: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    low: Option<f64>,
    #[arg(long)]
    high: Option<f64>,
    /// nnn | random[:count] | long-range-a | long-range-b | file:<path>
    #[arg(long)]
    topology: Option<String>,
    #[arg(long)]
    workers: Option<usize>,
    /// Also write a line chart of the main series.
    #[arg(long)]
    svg: Option<PathBuf>,
}

/// Every field optional so a config file may set any subset.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartialConfig {
    master_seed: Option<u64>,
    instances: Option<usize>,
    n_sites: Option<usize>,
    coupling_low: Option<f64>,
    coupling_high: Option<f64>,
    epsilon_grid: Option<Vec<f64>>,
    topology: Option<TopologyMode>,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub config: serde_json::Value,
    pub master_seed: Option<u64>,
    pub started_at: String,
    pub finished_at: String,
    pub outputs: Vec<String>,
    pub version: String,
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

/// Output files produced by one subcommand, written only after every
/// computation has succeeded.
struct Artifacts {
    primary: String,
    svg: Option<String>,
}

struct Resolved {
    config: EnsembleConfig,
    sites: Vec<usize>,
    workers: Option<usize>,
}

fn execute(command: Command) -> anyhow::Result<()> {
    let started_at = chrono::Utc::now().to_rfc3339();
    let (name, output, svg_path, config_json, seed, artifacts) = match command {
        Command::Build { spec, output } => {
            let spec = read_spec(&spec)?;
            let h = spec.hamiltonian()?;
            let text = match output.format.unwrap_or(Format::Csv) {
                Format::Csv => output::matrix_csv(&h.rows()),
                Format::Json => pretty(&json!({"dim": h.dim(), "entries": h.rows()})),
            };
            (
                "build",
                output,
                None,
                serde_json::to_value(&spec)?,
                None,
                Artifacts {
                    primary: text,
                    svg: None,
                },
            )
        }
        Command::Spectrum { spec, output } => {
            let spec = read_spec(&spec)?;
            let s = eigendecompose(&spec.hamiltonian()?)?;
            let text = match output.format.unwrap_or(Format::Csv) {
                Format::Csv => output::spectrum_csv(&s),
                Format::Json => pretty(&json!({
                    "eigenvalues": s.eigenvalues(),
                    "overlaps_site1": s.site_overlaps(1)?,
                    "overlaps_site2": if s.dim() > 1 { s.site_overlaps(2)? } else { Vec::new() },
                    "near_degenerate": s.near_degenerate(),
                })),
            };
            (
                "spectrum",
                output,
                None,
                serde_json::to_value(&spec)?,
                None,
                Artifacts {
                    primary: text,
                    svg: None,
                },
            )
        }
        Command::Reconstruct {
            spec,
            recursion,
            output,
        } => {
            let spec = read_spec(&spec)?;
            let text = reconstruct(&spec, recursion, output.format.unwrap_or(Format::Csv))?;
            (
                "reconstruct",
                output,
                None,
                serde_json::to_value(&spec)?,
                None,
                Artifacts {
                    primary: text,
                    svg: None,
                },
            )
        }
        Command::ZeroForcing {
            graph,
            initial,
            minimum,
            cap,
            output,
        } => {
            let text = read(&graph)?;
            let doc: GraphDocument = serde_json::from_str(&text)
                .with_context(|| format!("malformed graph JSON in {}", graph.display()))?;
            let g = doc.graph()?;
            let start = initial
                .unwrap_or_else(|| doc.initial.clone())
                .into_iter()
                .collect();
            let closure = graph::zero_forcing_closure(&g, &start)?;
            let verdict = closure.len() == g.n_vertices();
            let number = if minimum {
                Some(graph::minimum_zero_forcing_number(&g, cap)?)
            } else {
                None
            };
            let body = match output.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let list: Vec<String> = closure.iter().map(usize::to_string).collect();
                    let mut s = format!("closure: {}\nzero_forcing: {verdict}\n", list.join(","));
                    if let Some(k) = number {
                        s.push_str(&format!("zero_forcing_number: {k}\n"));
                    }
                    s
                }
                Format::Json => pretty(&json!({
                    "closure": closure,
                    "zero_forcing": verdict,
                    "zero_forcing_number": number,
                })),
            };
            let cfg = json!({"graph": serde_json::to_value(&doc)?, "initial": start, "cap": cap});
            (
                "zero-forcing",
                output,
                None,
                cfg,
                None,
                Artifacts {
                    primary: body,
                    svg: None,
                },
            )
        }
        Command::ErrorProfile { ensemble, output } => {
            let svg_path = ensemble.svg.clone();
            let r = resolve(&ensemble, vec![1e-4])?;
            let [n] = r.sites[..] else {
                bail!("error-profile takes a single --sites value")
            };
            let config = EnsembleConfig {
                n_sites: n,
                ..r.config
            };
            let epsilon = single_epsilon(&config, "error-profile")?;
            config.validate()?;
            let report = with_workers(r.workers, || analysis::error_profile(&config, epsilon))??;
            let text = match output.format.unwrap_or(Format::Csv) {
                Format::Csv => output::error_profile_csv(&report.profiles),
                Format::Json => pretty(&report),
            };
            let svg = svg_path.as_ref().map(|_| {
                let mean = report
                    .profiles
                    .iter()
                    .map(|p| (p.site as f64, p.mean_delta))
                    .collect();
                let bound = report
                    .profiles
                    .iter()
                    .map(|p| (p.site as f64, p.bound))
                    .collect();
                output::line_chart_svg(
                    &format!("mean error, N = {n}, eps = {epsilon:e}"),
                    "n",
                    "Delta_n",
                    &[
                        Series {
                            label: "mean".into(),
                            points: mean,
                        },
                        Series {
                            label: "bound".into(),
                            points: bound,
                        },
                    ],
                    false,
                    true,
                )
            });
            let seed = config.master_seed;
            (
                "error-profile",
                output,
                svg_path,
                serde_json::to_value(&config)?,
                Some(seed),
                Artifacts { primary: text, svg },
            )
        }
        Command::CriticalLength {
            ensemble,
            threshold,
            output,
        } => {
            let svg_path = ensemble.svg.clone();
            let r = resolve(&ensemble, default_epsilon_grid())?;
            if !(threshold > 0.0) {
                bail!("--threshold must be positive");
            }
            let configs: Vec<EnsembleConfig> = r
                .sites
                .iter()
                .map(|&n| EnsembleConfig {
                    n_sites: n,
                    ..r.config.clone()
                })
                .collect();
            for c in &configs {
                c.validate()?;
                if c.epsilon_grid.is_empty() {
                    bail!("epsilon grid is empty");
                }
            }
            let results = with_workers(r.workers, || -> crate::Result<Vec<_>> {
                let mut all = Vec::new();
                for c in &configs {
                    all.extend(analysis::critical_length_sweep(c, threshold)?);
                }
                Ok(all)
            })??;
            let text = match output.format.unwrap_or(Format::Csv) {
                Format::Csv => output::critical_length_csv(&results),
                Format::Json => pretty(&results),
            };
            let svg = svg_path.as_ref().map(|_| {
                let series: Vec<Series> = r
                    .sites
                    .iter()
                    .map(|&n| Series {
                        label: format!("N = {n}"),
                        points: results
                            .iter()
                            .filter(|x| x.n_sites == n)
                            .map(|x| (x.epsilon, x.mean_lc))
                            .collect(),
                    })
                    .collect();
                output::line_chart_svg(
                    &format!("critical length, tau = {threshold}"),
                    "epsilon",
                    "L_C",
                    &series,
                    true,
                    false,
                )
            });
            let cfg = json!({"ensemble": serde_json::to_value(&r.config)?, "sites": r.sites, "threshold": threshold});
            let seed = r.config.master_seed;
            (
                "critical-length",
                output,
                svg_path,
                cfg,
                Some(seed),
                Artifacts { primary: text, svg },
            )
        }
        Command::TopologyCompare {
            ensemble,
            variants,
            output,
        } => {
            let svg_path = ensemble.svg.clone();
            let r = resolve(&ensemble, vec![1e-4])?;
            let [n] = r.sites[..] else {
                bail!("topology-compare takes a single --sites value")
            };
            let config = EnsembleConfig {
                n_sites: n,
                ..r.config
            };
            let epsilon = single_epsilon(&config, "topology-compare")?;
            let variants = parse_variants(&variants, n)?;
            config.validate()?;
            let out = with_workers(r.workers, || {
                analysis::topology_compare(&config, &variants, epsilon)
            })??;
            let text = match output.format.unwrap_or(Format::Csv) {
                Format::Csv => output::topology_compare_csv(&out),
                Format::Json => pretty(&out),
            };
            let svg = svg_path.as_ref().map(|_| {
                let series: Vec<Series> = out
                    .iter()
                    .map(|v| Series {
                        label: v.label.clone(),
                        points: v
                            .report
                            .profiles
                            .iter()
                            .map(|p| (p.site as f64, p.mean_delta))
                            .collect(),
                    })
                    .collect();
                output::line_chart_svg(
                    &format!("mean error by topology, N = {n}"),
                    "n",
                    "Delta_n",
                    &series,
                    false,
                    true,
                )
            });
            let labels: Vec<_> = variants
                .iter()
                .map(|(l, m)| json!({"label": l, "topology": m}))
                .collect();
            let cfg = json!({"ensemble": serde_json::to_value(&config)?, "variants": labels});
            let seed = config.master_seed;
            (
                "topology-compare",
                output,
                svg_path,
                cfg,
                Some(seed),
                Artifacts { primary: text, svg },
            )
        }
    };

    emit(
        name,
        &output,
        svg_path.as_deref(),
        config_json,
        seed,
        artifacts,
        started_at,
    )
}

fn emit(
    name: &str,
    output: &OutputArgs,
    svg_path: Option<&Path>,
    config: serde_json::Value,
    master_seed: Option<u64>,
    artifacts: Artifacts,
    started_at: String,
) -> anyhow::Result<()> {
    let mut written = Vec::new();
    match &output.out {
        Some(path) => {
            fs::write(path, &artifacts.primary)
                .with_context(|| format!("writing {}", path.display()))?;
            written.push(path.display().to_string());
        }
        None => print!("{}", artifacts.primary),
    }
    if let (Some(path), Some(svg)) = (svg_path, &artifacts.svg) {
        fs::write(path, svg).with_context(|| format!("writing {}", path.display()))?;
        written.push(path.display().to_string());
    }
    if let Some(path) = &output.out {
        let manifest = RunManifest {
            subcommand: name.to_string(),
            config,
            master_seed,
            started_at,
            finished_at: chrono::Utc::now().to_rfc3339(),
            outputs: written,
            version: env!("CARGO_PKG_VERSION").to_string(),
        };
        let mpath = manifest_path(path);
        fs::write(&mpath, pretty(&manifest))
            .with_context(|| format!("writing {}", mpath.display()))?;
    }
    Ok(())
}

/// `profile.csv` -> `profile.manifest.json`.
pub fn manifest_path(out: &Path) -> PathBuf {
    out.with_extension("manifest.json")
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_spec(path: &Path) -> anyhow::Result<SystemSpec> {
    SystemSpec::from_json(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn reconstruct(spec: &SystemSpec, recursion: Recursion, format: Format) -> anyhow::Result<String> {
    let chain = spec.chain();
    let pert = spec.perturbation();
    let s = eigendecompose(&spec.hamiltonian()?)?;
    let e = s.eigenvalues();
    Ok(match recursion {
        Recursion::Nearest => {
            let mut rec = reconstruct_nearest_neighbor(e, &s.site_overlaps(1)?, chain.n_sites - 1)?;
            rec.attach_errors(&chain.nearest)?;
            match format {
                Format::Csv => output::reconstruction_table(&chain.nearest, &rec),
                Format::Json => pretty(&json!({
                    "recursion": "nearest",
                    "c_true": chain.nearest,
                    "estimated": rec.estimated,
                    "errors_delta": rec.errors_delta,
                    "breakdown_at": rec.breakdown_at,
                    "estimated_overlaps": rec.estimated_overlaps,
                    "near_degenerate": s.near_degenerate(),
                })),
            }
        }
        Recursion::NextNearest => {
            if chain.n_sites < 3 {
                bail!("the next-nearest recursion needs at least 3 sites");
            }
            let rec = reconstruct_next_nearest(
                e,
                &s.site_overlaps(1)?,
                &s.site_overlaps(2)?,
                pert.epsilon,
            )?;
            let deltas = estimation::estimation_errors(&chain.nearest, &rec.estimated_c)?;
            match format {
                Format::Csv => output::reconstruct_csv(&chain.nearest, &rec.estimated_c, &deltas),
                Format::Json => pretty(&json!({
                    "recursion": "next-nearest",
                    "c_true": chain.nearest,
                    "estimated_c": rec.estimated_c,
                    "estimated_d": rec.estimated_d,
                    "errors_delta": deltas,
                    "breakdown_at": rec.breakdown_at,
                    "near_degenerate": s.near_degenerate(),
                })),
            }
        }
    })
}

/// Accepts `[[i, j], ...]` or `{"edges": [[i, j], ...]}`.
#[derive(Deserialize)]
#[serde(untagged)]
enum EdgeFile {
    Pairs(Vec<(usize, usize)>),
    Document { edges: Vec<(usize, usize)> },
}

fn parse_topology(text: &str) -> anyhow::Result<TopologyMode> {
    if let Some(path) = text.strip_prefix("file:") {
        let body = read(Path::new(path))?;
        let edges = match serde_json::from_str::<EdgeFile>(&body)
            .with_context(|| format!("malformed edge list in {path}"))?
        {
            EdgeFile::Pairs(p) | EdgeFile::Document { edges: p } => p,
        };
        return Ok(TopologyMode::FixedEdges(edges));
    }
    Ok(TopologyMode::parse(text)?)
}

fn parse_variants(raw: &[String], n_sites: usize) -> anyhow::Result<Vec<(String, TopologyMode)>> {
    if raw.is_empty() {
        let mut v = vec![("nnn".to_string(), TopologyMode::Nnn)];
        if n_sites == 20 {
            v.push(("long-range-a".into(), TopologyMode::parse("long-range-a")?));
            v.push(("long-range-b".into(), TopologyMode::parse("long-range-b")?));
        } else {
            v.push(("random".into(), TopologyMode::RandomEdges(None)));
        }
        return Ok(v);
    }
    raw.iter()
        .map(|item| {
            let (label, mode) = item
                .split_once('=')
                .unwrap_or((item.as_str(), item.as_str()));
            if label.contains(',') {
                bail!("variant label '{label}' may not contain commas");
            }
            Ok((label.to_string(), parse_topology(mode)?))
        })
        .collect()
}

fn resolve(args: &EnsembleArgs, default_grid: Vec<f64>) -> anyhow::Result<Resolved> {
    let file = match &args.config {
        Some(path) => serde_json::from_str::<PartialConfig>(&read(path)?)
            .with_context(|| format!("malformed config in {}", path.display()))?,
        None => PartialConfig::default(),
    };
    let defaults = EnsembleConfig::default();
    let topology = match &args.topology {
        Some(t) => parse_topology(t)?,
        None => file.topology.unwrap_or(defaults.topology),
    };
    let sites = match &args.sites {
        Some(s) if !s.is_empty() => s.clone(),
        Some(_) => bail!("--sites is empty"),
        None => vec![file.n_sites.unwrap_or(defaults.n_sites)],
    };
    let config = EnsembleConfig {
        master_seed: args
            .seed
            .or(file.master_seed)
            .unwrap_or(defaults.master_seed),
        instances: args
            .instances
            .or(file.instances)
            .unwrap_or(defaults.instances),
        n_sites: sites[0],
        coupling_low: args
            .low
            .or(file.coupling_low)
            .unwrap_or(defaults.coupling_low),
        coupling_high: args
            .high
            .or(file.coupling_high)
            .unwrap_or(defaults.coupling_high),
        epsilon_grid: args
            .epsilon
            .clone()
            .or(file.epsilon_grid)
            .unwrap_or(default_grid),
        topology,
    };
    if args.workers == Some(0) {
        bail!("--workers must be at least 1");
    }
    Ok(Resolved {
        config,
        sites,
        workers: args.workers,
    })
}

fn single_epsilon(config: &EnsembleConfig, command: &str) -> anyhow::Result<f64> {
    match config.epsilon_grid[..] {
        [e] => Ok(e),
        _ => Err(anyhow!(
            "{command} takes exactly one --epsilon value, got {}",
            config.epsilon_grid.len()
        )),
    }
}

fn with_workers<R: Send>(
    workers: Option<usize>,
    f: impl FnOnce() -> R + Send,
) -> anyhow::Result<R> {
    match workers {
        None => Ok(f()),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(k).build()?;
            Ok(pool.install(f))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_subcommand() {
        for argv in [
            vec!["chainrecon", "build", "--spec", "s.json"],
            vec![
                "chainrecon",
                "spectrum",
                "--spec",
                "s.json",
                "--format",
                "json",
            ],
            vec![
                "chainrecon",
                "reconstruct",
                "--spec",
                "s.json",
                "--recursion",
                "next-nearest",
            ],
            vec![
                "chainrecon",
                "zero-forcing",
                "--graph",
                "g.json",
                "--initial",
                "1,2",
                "--minimum",
            ],
            vec![
                "chainrecon",
                "error-profile",
                "--sites",
                "30",
                "--epsilon",
                "1e-4",
                "--instances",
                "10",
                "--seed",
                "42",
            ],
            vec![
                "chainrecon",
                "critical-length",
                "--sites",
                "20,30,40",
                "--threshold",
                "0.122",
                "--seed",
                "7",
            ],
            vec![
                "chainrecon",
                "topology-compare",
                "--sites",
                "20",
                "--variant",
                "r=random:18",
                "--workers",
                "2",
            ],
        ] {
            Cli::try_parse_from(&argv).unwrap_or_else(|e| panic!("{argv:?}: {e}"));
        }
    }

    #[test]
    fn rejects_unknown_flags_and_subcommands() {
        assert!(Cli::try_parse_from(["chainrecon", "error-profile", "--bogus"]).is_err());
        assert!(Cli::try_parse_from(["chainrecon", "fly"]).is_err());
        assert_eq!(run(["chainrecon", "fly"]), 2);
    }

    #[test]
    fn flags_override_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("cfg.json");
        fs::write(
            &cfg,
            r#"{"master_seed": 5, "instances": 3, "n_sites": 12, "epsilon_grid": [0.01]}"#,
        )
        .unwrap();
        let cli = Cli::try_parse_from([
            "chainrecon",
            "error-profile",
            "--config",
            cfg.to_str().unwrap(),
            "--seed",
            "9",
        ])
        .unwrap();
        let Command::ErrorProfile { ensemble, .. } = cli.command else {
            unreachable!()
        };
        let r = resolve(&ensemble, vec![1e-4]).unwrap();
        assert_eq!(r.config.master_seed, 9);
        assert_eq!(r.config.instances, 3);
        assert_eq!(r.sites, vec![12]);
        assert_eq!(r.config.epsilon_grid, vec![0.01]);
    }

    #[test]
    fn config_with_unknown_field_is_malformed() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("cfg.json");
        fs::write(&cfg, r#"{"seeds": 5}"#).unwrap();
        let out = dir.path().join("x.csv");
        let code = run([
            "chainrecon",
            "error-profile",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 1);
        assert!(!out.exists());
    }

    #[test]
    fn default_variants_depend_on_length() {
        let v = parse_variants(&[], 20).unwrap();
        assert_eq!(v.len(), 3);
        assert_eq!(v[1].0, "long-range-a");
        let v = parse_variants(&[], 12).unwrap();
        assert_eq!(v[1].1, TopologyMode::RandomEdges(None));
        let v = parse_variants(&["nnn".to_string()], 12).unwrap();
        assert_eq!(v, vec![("nnn".to_string(), TopologyMode::Nnn)]);
    }
}
