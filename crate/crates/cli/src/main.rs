//! `randcx`: generate random complexes, compute their invariants, and run
//! seeded experiments.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use randcomplex::collapse::collapse;
use randcomplex::geometry::{gen_points, Distribution, PointCloud};
use randcomplex::homology::betti_numbers;
use randcomplex::lab::experiments::{
    betti_curves, betti_curves_csv, giant_component_experiment, giant_csv, link_distribution_check_against,
    persistence_csv, persistence_experiment, PERSISTENCE_CAP_FACTOR,
};
use randcomplex::lab::{estimate, scan, GridScale, ModelConfig, PropertySpec};
use randcomplex::persistence::{cech_filtration, diagram_csv, persistence_diagram, rips_filtration};
use randcomplex::snf::{integer_homology, DEFAULT_SNF_BUDGET};
use randcomplex::spectral::{cheeger_number, garland_certificate, spectral_gap};
use randcomplex::theory::{self, GeometricModel, ThresholdModel};
use randcomplex::{scx, Domain, Error, RngSeed, SimplicialComplex};

#[derive(Parser)]
#[command(name = "randcx", version, about = "Random simplicial complexes: generation, invariants, experiments")]
struct Cli {
    /// master seed
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo trials (per grid point for scans)
    #[arg(long, global = true, default_value_t = 1000)]
    trials: u64,
    /// worker threads, 0 = all cores
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Sample one complex and write it as .scx
    Gen {
        #[command(flatten)]
        model: ModelArgs,
        /// stream index of the draw
        #[arg(long, default_value_t = 0)]
        trial: u64,
        /// also write the point cloud (geometric models) as CSV
        #[arg(long)]
        points_out: Option<PathBuf>,
    },
    /// Betti numbers of a complex
    Betti {
        /// .scx file, `-` for stdin
        input: PathBuf,
        /// f2, fp:q, or rational
        #[arg(long, default_value = "rational")]
        field: String,
        #[arg(long)]
        reduced: bool,
    },
    /// Integer homology via Smith normal form
    Snf {
        input: PathBuf,
        /// largest number of faces per degree
        #[arg(long, default_value_t = DEFAULT_SNF_BUDGET)]
        budget: usize,
    },
    /// Greedy d-collapse
    Collapse {
        input: PathBuf,
        #[arg(long)]
        d: usize,
    },
    /// Normalized Laplacian spectrum of the 1-skeleton
    Spectral {
        input: PathBuf,
        /// also compute the Cheeger number by enumeration
        #[arg(long)]
        cheeger: bool,
    },
    /// Spectral-gap certificate for H_{d−1} = 0
    Garland {
        input: PathBuf,
        #[arg(long)]
        d: usize,
    },
    /// Persistence diagram of a point cloud (CSV, one point per row)
    Persist {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Filt::Rips)]
        filtration: Filt,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        max_r: f64,
    },
    /// Threshold constants c_d and c_d*
    Constants {
        /// inclusive range such as 2..10
        #[arg(long, default_value = "2..10")]
        d_range: String,
    },
    /// Evaluate a closed-form prediction by name
    Predict {
        #[command(subcommand)]
        formula: Formula,
    },
    /// Fraction of draws with a property, with a 95% interval
    Estimate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        property: String,
    },
    /// Coupled estimates over a parameter grid
    Scan {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        property: String,
        /// comma-separated values, or start:stop:count
        #[arg(long)]
        grid: String,
        /// absolute, or per-n (grid value c means parameter c/n)
        #[arg(long, default_value = "absolute")]
        scale: String,
    },
    /// Largest component of G(n, c/n)
    Giant {
        #[arg(long)]
        n: usize,
        /// comma-separated c values
        #[arg(long)]
        c: String,
    },
    /// Maximal persistence of uniform points in [0,1]^d
    PersistExp {
        /// comma-separated point counts
        #[arg(long, default_value = "100,300,1000")]
        n_list: String,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Filt::Rips)]
        filtration: Filt,
        #[arg(long, default_value_t = PERSISTENCE_CAP_FACTOR)]
        cap_factor: f64,
    },
    /// Two-sample test: vertex link of Y_2(n, p) against G(n−1, p)
    Linkcheck {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        /// probability of the comparison graph (defaults to p)
        #[arg(long)]
        p_graph: Option<f64>,
    },
    /// Mean Betti numbers of X(n, p) over a p-grid with the |E[χ]| prediction
    BettiCurves {
        #[arg(long, default_value_t = 25)]
        n: usize,
        #[arg(long)]
        grid: String,
        #[arg(long, default_value_t = 4)]
        max_dim: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Filt {
    Rips,
    Cech,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelKind {
    Gnp,
    Lm,
    Clique,
    Multi,
    Rips,
    Cech,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: ModelKind,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: Option<f64>,
    /// comma-separated p_1,p_2,… for the multi-parameter model
    #[arg(long)]
    probs: Option<String>,
    #[arg(long)]
    r: Option<f64>,
    /// face dimension (lm) or ambient dimension (rips, cech)
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    max_dim: Option<usize>,
    #[arg(long, default_value = "uniform-cube")]
    distribution: String,
}

#[derive(Subcommand)]
enum Formula {
    /// leading-order threshold: gnp-connectivity, lm-homology, clique-vanishing
    Threshold {
        #[arg(long)]
        model: String,
        #[arg(long)]
        n: usize,
        /// d for lm-homology, k for clique-vanishing
        #[arg(long, default_value_t = 1)]
        d_or_k: usize,
    },
    /// lim P[H_1(G(n, c/n)) = 0], c < 1
    ProbAcyclic {
        #[arg(long)]
        c: f64,
    },
    /// Poisson mean of (d+1)-simplex boundaries in Y_d(n, c/n)
    SimplexBoundaries {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        c: f64,
    },
    /// lim P[H_d(Y_d(n, c/n)) = 0], c < c_d*
    TopVanishing {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        c: f64,
    },
    /// E[f_i] of the clique complex X(n, p)
    ExpectedFaces {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        i: usize,
    },
    /// |E[χ(X(n, p))]|
    Euler {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
    },
    /// first-order E[β_k(X(n, p))] and its validity window
    BettiFirstOrder {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        k: usize,
    },
    /// vanishing direction of H^{k−1} for p_i = n^{−α_i}
    Fowler {
        /// comma-separated exponents
        #[arg(long)]
        alphas: String,
        #[arg(long)]
        k: usize,
    },
    /// normalizing exponents of E[β_k] for rips or cech
    GeometricScaling {
        #[arg(long)]
        model: String,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
    },
    /// window in nr^d around the vanishing of H_k of a Čech complex
    HomologyWindow {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
    },
    /// positive root of x = 1 − e^{−cx}
    GiantFraction {
        #[arg(long)]
        c: f64,
    },
}

/// Errors raised by the CLI itself, mapped to exit codes.
enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// One command's result: CSV text and an equivalent JSON value.
struct Output {
    csv: String,
    json: Value,
}

impl Output {
    fn new(csv: String, json: impl Serialize) -> Self {
        Output { csv, json: serde_json::to_value(json).expect("serializable output") }
    }

    /// A single-row table from (column, value) pairs.
    fn record(fields: &[(&str, Value)]) -> Self {
        let header: Vec<&str> = fields.iter().map(|f| f.0).collect();
        let row: Vec<String> = fields.iter().map(|f| csv_cell(&f.1)).collect();
        let json: serde_json::Map<String, Value> = fields.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        Output { csv: format!("{}\n{}\n", header.join(","), row.join(",")), json: Value::Object(json) }
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Array(items) => items.iter().map(csv_cell).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

fn domain(msg: impl Into<String>) -> Failure {
    Failure::Lib(Error::domain(msg))
}

fn read_input(path: &PathBuf) -> CliResult<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
    }
}

fn read_complex(path: &PathBuf) -> CliResult<SimplicialComplex> {
    Ok(scx::parse(&read_input(path)?)?)
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> CliResult<Vec<T>> {
    s.split(',')
        .map(|x| x.trim().parse::<T>().map_err(|_| domain(format!("cannot parse {what} value '{x}'"))))
        .collect()
}

/// `a,b,c` or `start:stop:count` (inclusive, evenly spaced).
fn parse_grid(s: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let (a, b): (f64, f64) = (
            parts[0].trim().parse().map_err(|_| domain(format!("bad grid start '{}'", parts[0])))?,
            parts[1].trim().parse().map_err(|_| domain(format!("bad grid stop '{}'", parts[1])))?,
        );
        let m: usize = parts[2].trim().parse().map_err(|_| domain(format!("bad grid count '{}'", parts[2])))?;
        if m == 0 {
            return Err(domain("grid count must be positive"));
        }
        if m == 1 {
            return Ok(vec![a]);
        }
        return Ok((0..m).map(|i| a + (b - a) * i as f64 / (m - 1) as f64).collect());
    }
    parse_list(s, "grid")
}

fn parse_range(s: &str) -> CliResult<(usize, usize)> {
    let bad = || domain(format!("cannot parse range '{s}'; expected a..b"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

impl ModelArgs {
    fn config(&self) -> CliResult<ModelConfig> {
        self.config_with(None)
    }

    /// `fallback` stands in for a missing --p/--r when a grid supplies the parameter.
    fn config_with(&self, fallback: Option<f64>) -> CliResult<ModelConfig> {
        let need_p = || self.p.or(fallback).ok_or_else(|| domain("this model needs --p"));
        let need_r = || self.r.or(fallback).ok_or_else(|| domain("this model needs --r"));
        let n = self.n;
        Ok(match self.model {
            ModelKind::Gnp => ModelConfig::Gnp { n, p: need_p()? },
            ModelKind::Lm => ModelConfig::LinialMeshulam { n, d: self.d.ok_or_else(|| domain("lm needs --d"))?, p: need_p()? },
            ModelKind::Clique => ModelConfig::Clique { n, p: need_p()?, max_dim: self.max_dim.unwrap_or(n.saturating_sub(1)) },
            ModelKind::Multi => {
                let probs = self.probs.as_deref().ok_or_else(|| domain("multi needs --probs"))?;
                ModelConfig::Multiparameter { n, probs: parse_list(probs, "probability")? }
            }
            ModelKind::Rips | ModelKind::Cech => {
                let distribution: Distribution = self.distribution.parse()?;
                let (dim, r, max_dim) = (self.d.unwrap_or(2), need_r()?, self.max_dim.unwrap_or(2));
                if self.model == ModelKind::Rips {
                    ModelConfig::Rips { n, dim, distribution, r, max_dim }
                } else {
                    ModelConfig::Cech { n, dim, distribution, r, max_dim }
                }
            }
        })
    }
}

fn run(cli: &Cli) -> CliResult<Output> {
    let (seed, trials, jobs) = (cli.seed, cli.trials, cli.jobs);
    Ok(match &cli.command {
        Command::Gen { model, trial, points_out } => {
            let config = model.config()?;
            config.validate()?;
            let s = RngSeed::new(seed, *trial);
            if let (Some(path), ModelConfig::Rips { n, dim, distribution, .. } | ModelConfig::Cech { n, dim, distribution, .. }) =
                (points_out, &config)
            {
                let points: PointCloud = gen_points(*n, *dim, *distribution, s)?;
                fs::write(path, points.to_csv())?;
            }
            let x = config.sample(s)?;
            let text = scx::to_string(&x);
            Output { csv: text.clone(), json: json!({ "model": config, "seed": s, "scx": text }) }
        }
        Command::Betti { input, field, reduced } => {
            let x = read_complex(input)?;
            let field = Domain::parse(field)?;
            let b = betti_numbers(&x, field, *reduced);
            let mut csv = String::from("k,betti,field,reduced\n");
            for (k, v) in b.betti.iter().enumerate() {
                csv.push_str(&format!("{k},{v},{field},{reduced}\n"));
            }
            Output::new(csv, json!({ "field": field.to_string(), "reduced": reduced, "betti": b.betti }))
        }
        Command::Snf { input, budget } => {
            let x = read_complex(input)?;
            let h = integer_homology(&x, *budget)?;
            let mut csv = String::from("k,free,torsion,group\n");
            for (k, g) in h.groups.iter().enumerate() {
                let t: Vec<String> = g.torsion.iter().map(u64::to_string).collect();
                csv.push_str(&format!("{k},{},{},{g}\n", g.free, t.join(" ")));
            }
            Output::new(csv, &h)
        }
        Command::Collapse { input, d } => {
            let x = read_complex(input)?;
            let r = collapse(&x, *d)?;
            Output::record(&[
                ("collapsed", json!(r.collapsed)),
                ("steps", json!(r.steps.len())),
                ("residual_f_vector", json!(r.residual.0)),
            ])
        }
        Command::Spectral { input, cheeger } => {
            let x = read_complex(input)?;
            let r = spectral_gap(&x)?;
            let h = if *cheeger { Some(cheeger_number(&x)?) } else { None };
            Output::record(&[
                ("lambda2", json!(r.lambda2)),
                ("connected", json!(r.connected)),
                ("isolated", json!(r.isolated)),
                ("cheeger", json!(h)),
                ("eigenvalues", json!(r.eigenvalues)),
            ])
        }
        Command::Garland { input, d } => {
            let x = read_complex(input)?;
            let r = garland_certificate(&x, *d)?;
            let (face, lambda) = match &r.witness {
                Some((face, l)) => (
                    Some(face.as_ref().map_or_else(|| "empty".to_string(), |s| format!("{:?}", s.vertices()))),
                    Some(*l),
                ),
                None => (None, None),
            };
            Output::record(&[
                ("certified", json!(r.certified)),
                ("witness_face", json!(face)),
                ("witness_lambda2", json!(lambda)),
                ("links_checked", json!(r.links_checked)),
            ])
        }
        Command::Persist { input, filtration, k, max_r } => {
            let points = PointCloud::from_csv(&read_input(input)?)?;
            let f = match filtration {
                Filt::Rips => rips_filtration(&points, *max_r, k + 1)?,
                Filt::Cech => cech_filtration(&points, *max_r, k + 1)?,
            };
            let pairs = persistence_diagram(&f, *k);
            Output::new(diagram_csv(&pairs), &pairs)
        }
        Command::Constants { d_range } => {
            let (a, b) = parse_range(d_range)?;
            let mut csv = String::from("d,c_d,c_d_star,residual_c_d,residual_c_d_star\n");
            let mut rows = Vec::new();
            for d in a..=b {
                let (c, s) = (theory::c_collapse(d)?, theory::c_star(d)?);
                csv.push_str(&format!("{d},{},{},{:e},{:e}\n", c.value, s.value, c.residual, s.residual));
                rows.push(json!({ "d": d, "c_d": c.value, "c_d_star": s.value,
                                  "residual_c_d": c.residual, "residual_c_d_star": s.residual }));
            }
            Output::new(csv, rows)
        }
        Command::Predict { formula } => predict(formula)?,
        Command::Estimate { model, property } => {
            let config = model.config()?;
            let prop: PropertySpec = property.parse()?;
            let e = estimate(&config, &prop, trials, seed, jobs)?;
            Output::record(&[
                ("model", json!(config.to_string())),
                ("property", json!(prop.to_string())),
                ("estimate", json!(e.estimate)),
                ("ci_lo", json!(e.ci_lo)),
                ("ci_hi", json!(e.ci_hi)),
                ("successes", json!(e.successes)),
                ("trials", json!(e.trials)),
                ("errors", json!(e.errors)),
            ])
        }
        Command::Scan { model, property, grid, scale } => {
            let grid = parse_grid(grid)?;
            let scale: GridScale = scale.parse()?;
            let config = model.config_with(grid.first().map(|&g| scale.apply(g, model.n)))?;
            let prop: PropertySpec = property.parse()?;
            let s = scan(&config, &prop, &grid, scale, trials, seed, jobs)?;
            if let Some(c) = s.crossing {
                eprintln!("crossing at {c}");
            }
            if s.total_errors() > 0 {
                eprintln!("{} trials failed; first error: {}", s.total_errors(), s.first_error.as_deref().unwrap_or(""));
            }
            Output::new(s.to_csv(), &s)
        }
        Command::Giant { n, c } => {
            let rows = giant_component_experiment(*n, &parse_list(c, "c")?, trials, seed, jobs)?;
            Output::new(giant_csv(&rows), &rows)
        }
        Command::PersistExp { n_list, d, k, filtration, cap_factor } => {
            let model = match filtration {
                Filt::Rips => GeometricModel::Rips,
                Filt::Cech => GeometricModel::Cech,
            };
            let rows = persistence_experiment(model, &parse_list(n_list, "n")?, *d, *k, *cap_factor, trials, seed, jobs)?;
            Output::new(persistence_csv(&rows), &rows)
        }
        Command::Linkcheck { n, p, p_graph } => {
            let t = link_distribution_check_against(*n, *p, p_graph.unwrap_or(*p), trials, seed)?;
            Output::record(&[
                ("statistic", json!(t.statistic)),
                ("df", json!(t.df)),
                ("p_value", json!(t.p_value)),
                ("bins", json!(t.bins.len())),
            ])
        }
        Command::BettiCurves { n, grid, max_dim } => {
            let rows = betti_curves(*n, &parse_grid(grid)?, *max_dim, trials, seed, jobs)?;
            Output::new(betti_curves_csv(&rows), &rows)
        }
    })
}

fn predict(formula: &Formula) -> CliResult<Output> {
    let value = |name: &str, v: f64| Output::record(&[("formula", json!(name)), ("value", json!(v))]);
    Ok(match formula {
        Formula::Threshold { model, n, d_or_k } => {
            let m: ThresholdModel = model.parse()?;
            value(&format!("threshold:{m}"), theory::threshold_function(m, *n, *d_or_k)?)
        }
        Formula::ProbAcyclic { c } => value("prob-acyclic", theory::prob_acyclic_limit(*c)?),
        Formula::SimplexBoundaries { d, c } => value("simplex-boundaries", theory::expected_simplex_boundaries(*d, *c)?),
        Formula::TopVanishing { d, c } => value("top-vanishing", theory::prob_top_vanishing_limit(*d, *c)?),
        Formula::ExpectedFaces { n, p, i } => value("expected-faces", theory::expected_faces_clique(*n, *p, *i)?),
        Formula::Euler { n, p } => value("euler", theory::euler_prediction(*n, *p)?),
        Formula::BettiFirstOrder { n, p, k } => {
            let b = theory::expected_betti_first_order(*n, *p, *k)?;
            if !b.in_window {
                eprintln!("warning: p = {p} lies outside the window ({}, {})", b.window.0, b.window.1);
            }
            Output::record(&[
                ("formula", json!("betti-first-order")),
                ("value", json!(b.value)),
                ("in_window", json!(b.in_window)),
                ("window_lo", json!(b.window.0)),
                ("window_hi", json!(b.window.1)),
            ])
        }
        Formula::Fowler { alphas, k } => {
            let r = theory::fowler_domination(&parse_list(alphas, "exponent")?, *k)?;
            Output::record(&[("formula", json!("fowler")), ("value", json!(r.to_string()))])
        }
        Formula::GeometricScaling { model, d, k } => {
            let g = theory::geometric_scaling(model.parse()?, *d, *k)?;
            Output::record(&[("formula", json!("geometric-scaling")), ("n_exp", json!(g.n_exp)), ("r_exp", json!(g.r_exp))])
        }
        Formula::HomologyWindow { n, d, k } => {
            let w = theory::homology_window(*n, *d, *k)?;
            Output::record(&[("formula", json!("homology-window")), ("persist", json!(w.persist)), ("vanish", json!(w.vanish))])
        }
        Formula::GiantFraction { c } => value("giant-fraction", theory::giant_fraction(*c)),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| {
        let text = match cli.format {
            Format::Csv => out.csv,
            Format::Json => serde_json::to_string_pretty(&out.json).expect("valid JSON") + "\n",
        };
        match &cli.out {
            Some(path) => fs::write(path, text)?,
            None => io::stdout().write_all(text.as_bytes())?,
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("randcx: {e}");
            ExitCode::from(if e.is_resource() { 3 } else { 2 })
        }
        Err(Failure::Io(msg)) => {
            eprintln!("randcx: {msg}");
            ExitCode::from(2)
        }
    }
}
