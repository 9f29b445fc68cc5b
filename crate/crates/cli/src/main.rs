//! `wgwa`: explore weight modules over rank-one weak generalized Weyl algebras.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use wgwa_core::band::{band_data_from_cycle, detect_band_data, PModuleData};
use wgwa_core::descriptor::{
    from_json, to_json, BandDescriptor, CatalogueDescriptor, ClassificationDescriptor,
    ErrorDescriptor, MatrixDump, OrbitDescriptor, RelationDescriptor, StringDescriptor, SCHEMA,
};
use wgwa_core::field::parse_rational;
use wgwa_core::oracle::{brute_simple_rational, DEFAULT_CLOSURE_BUDGET, RANDOM_SEED};
use wgwa_core::{
    band_iso, brute_simple, build_band, build_string, check_relations, classify_point, export_dot,
    forward_orbit, heisenberg_catalogue, pmodule_is_simple, string_act, string_is_simple,
    to_matrices, BandError, BandModule, BandVariant, BruteOptions, ClassifyBounds, ClassifyError,
    DescriptorError, Generator, HeisenbergSpec, MaxIdeal, ModuleRef, OracleError, Realization,
    Simplicity, StringError, StringKind, StringModule, TailCertificate, UniverseError,
    UniverseSpec, WeightUniverse, ZDot,
};

#[derive(Parser, Debug)]
#[command(
    name = "wgwa",
    version,
    about = "Weight modules over rank-one weak generalized Weyl algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,
    /// Maximum number of `down` steps when following orbits.
    #[arg(long, global = true, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    orbit_steps: u64,
    /// Depth of upward exploration.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    up_depth: u64,
    /// Budget for exhaustive subspace and isomorphism searches.
    #[arg(long, global = true, env = "WGWA_BUDGET", default_value_t = DEFAULT_CLOSURE_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Seed for randomized fallbacks.
    #[arg(long, global = true, default_value_t = RANDOM_SEED)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
    Dot,
}

/// Which ring and endomorphism to work over.
#[derive(Args, Debug, Clone)]
struct UniverseArgs {
    /// Polynomial ring over F_p.
    #[arg(long, value_name = "P", conflicts_with_all = ["power", "affine", "constant"],
          required_unless_present_any = ["power", "affine", "constant"])]
    fp: Option<u64>,
    /// Coefficients of f, constant term first (with --fp; default: f = h).
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        requires = "fp"
    )]
    f: Vec<i64>,
    /// Coefficients of t, constant term first (default: t = h).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    t: Vec<String>,
    /// f = h^N on 0 and the roots of unity.
    #[arg(long, value_name = "N")]
    power: Option<u64>,
    /// With --power: the point where t vanishes (`zero` or `angle:q`).
    #[arg(long, requires = "power", allow_hyphen_values = true)]
    vanish: Option<String>,
    /// f = A*h + B over the rationals.
    #[arg(
        long,
        value_name = "A,B",
        value_delimiter = ',',
        num_args = 1,
        allow_hyphen_values = true
    )]
    affine: Option<Vec<String>>,
    /// Constant f = THETA over the rationals.
    #[arg(long, value_name = "THETA", allow_hyphen_values = true)]
    constant: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Follow `down` from a point until the orbit cycles.
    Orbit {
        #[command(flatten)]
        universe: UniverseArgs,
        #[arg(long, allow_hyphen_values = true)]
        start: String,
    },
    /// Report the string and band families in the class of a point.
    Classify {
        #[command(flatten)]
        universe: UniverseArgs,
        #[arg(long, allow_hyphen_values = true)]
        start: String,
    },
    /// Build a string module and test it for simplicity.
    String {
        #[command(flatten)]
        universe: UniverseArgs,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Position of the first point of the window.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        lo: i64,
        /// Points of the window, lowest first.
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        window: Vec<String>,
        /// What is known above the window: `periodic:K`, `distinct` or `constant`.
        #[arg(long)]
        certificate: Option<String>,
        /// Emit the matrix dump instead of the descriptor (bounded strings only).
        #[arg(long)]
        matrices: bool,
    },
    /// Build a band module on a down-cycle.
    Band {
        #[command(flatten)]
        universe: UniverseArgs,
        /// Detect the cycle from the orbit of this point.
        #[arg(
            long,
            conflicts_with = "cycle",
            required_unless_present = "cycle",
            allow_hyphen_values = true
        )]
        cycle_from: Option<String>,
        /// The cycle c_0, ..., c_{k-1} with down(c_{i+1}) = c_i.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        cycle: Vec<String>,
        /// The matrix alpha, rows separated by `;` and entries by spaces.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, value_enum, default_value_t = VariantArg::M)]
        variant: VariantArg,
        /// Emit the matrix dump instead of the descriptor.
        #[arg(long)]
        matrices: bool,
        /// Compare against the band module in this descriptor file.
        #[arg(long)]
        compare: Option<PathBuf>,
    },
    /// Check the defining relations and simplicity of a module file.
    Check {
        /// A matrix dump, string descriptor or band descriptor.
        #[arg(long)]
        module: PathBuf,
    },
    /// Catalogue of simple weight modules over a generalized Heisenberg algebra.
    Heisenberg {
        /// `const:THETA`, `affine:A,B` or `power:N`.
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        /// The parameter z-dot (so t = h + z-dot). For `power:N`: `0`,
        /// `outside`, or `angle:q` for the root of unity exp(2 pi i q).
        #[arg(long, allow_hyphen_values = true)]
        zdot: String,
    },
    /// Graphviz rendering of the points near some seeds.
    ExportDot {
        #[command(flatten)]
        universe: UniverseArgs,
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        start: Vec<String>,
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Bounded,
    LeftInfinite,
    RightInfinite,
    DoubleInfinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    #[value(name = "M", alias = "m")]
    M,
    #[value(name = "N", alias = "n")]
    N,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Universe(#[from] UniverseError),
    #[error(transparent)]
    String(#[from] StringError),
    #[error(transparent)]
    Band(#[from] BandError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Descriptor(#[from] DescriptorError),
}

impl CliError {
    fn tag(&self) -> &'static str {
        match self {
            CliError::Input(_) => "input",
            CliError::Io { .. } => "io",
            CliError::Universe(_) => "universe",
            CliError::String(_) => "string",
            CliError::Band(_) => "band",
            CliError::Oracle(_) => "oracle",
            CliError::Classify(_) => "classify",
            CliError::Descriptor(_) => "descriptor",
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn rational(s: &str) -> Result<BigRational> {
    parse_rational(s).ok_or_else(|| CliError::Input(format!("not a rational number: {s:?}")))
}

fn rationals(v: &[String]) -> Result<Vec<BigRational>> {
    v.iter().map(|s| rational(s)).collect()
}

impl UniverseArgs {
    fn f_or_identity(&self) -> Vec<i64> {
        if self.f.is_empty() {
            vec![0, 1]
        } else {
            self.f.clone()
        }
    }

    fn spec(&self) -> Result<UniverseSpec> {
        if let Some(p) = self.fp {
            if self.t.is_empty() {
                return Ok(UniverseSpec::FinitePoly {
                    p,
                    f: self.f_or_identity(),
                    t: vec![0, 1],
                });
            }
            let t = self
                .t
                .iter()
                .map(|s| {
                    s.trim()
                        .parse::<i64>()
                        .map_err(|_| CliError::Input(format!("not an integer: {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(UniverseSpec::FinitePoly {
                p,
                f: self.f_or_identity(),
                t,
            });
        }
        if let Some(n) = self.power {
            let zdot = match self.vanish.as_deref() {
                None | Some("outside") => ZDot::Outside,
                Some(point) => {
                    let probe = WeightUniverse::new(UniverseSpec::PowerMap {
                        n,
                        zdot: ZDot::Outside,
                    })?;
                    ZDot::At(probe.parse_ideal(point)?)
                }
            };
            return Ok(UniverseSpec::PowerMap { n, zdot });
        }
        let t = if self.t.is_empty() {
            vec![BigRational::zero(), BigRational::one()]
        } else {
            rationals(&self.t)?
        };
        if let Some(ab) = &self.affine {
            let [a, b] = ab.as_slice() else {
                return Err(CliError::Input("--affine takes A,B".into()));
            };
            return Ok(UniverseSpec::Affine {
                a: rational(a)?,
                b: rational(b)?,
                t,
            });
        }
        if let Some(theta) = &self.constant {
            return Ok(UniverseSpec::Constant {
                theta: rational(theta)?,
                t,
            });
        }
        Err(CliError::Input("no universe given".into()))
    }

    fn universe(&self) -> Result<WeightUniverse> {
        Ok(WeightUniverse::new(self.spec()?)?)
    }
}

fn bounds(c: &Common) -> ClassifyBounds {
    ClassifyBounds {
        orbit_steps: c.orbit_steps as usize,
        up_depth: c.up_depth as usize,
        ..ClassifyBounds::default()
    }
}

fn brute_options(c: &Common) -> BruteOptions {
    BruteOptions {
        budget: c.budget,
        randomized: true,
        seed: c.seed,
    }
}

fn ideal_list(v: &[MaxIdeal]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn read_file(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })
}

fn parse_certificate(s: &str) -> Result<TailCertificate> {
    match s {
        "distinct" => Ok(TailCertificate::DistinctTail),
        "constant" => Ok(TailCertificate::EventuallyConstantTail),
        _ => s
            .strip_prefix("periodic:")
            .and_then(|k| k.parse().ok())
            .map(TailCertificate::Periodic)
            .ok_or_else(|| CliError::Input(format!("unknown certificate {s:?}"))),
    }
}

fn parse_heisenberg(f: &str, zdot: &str) -> Result<HeisenbergSpec> {
    let bad = || {
        CliError::Input(format!(
            "unknown f {f:?}; use const:THETA, affine:A,B or power:N"
        ))
    };
    let (kind, args) = f.split_once(':').ok_or_else(bad)?;
    match kind {
        "const" | "constant" => Ok(HeisenbergSpec::Constant {
            theta: rational(args)?,
            zdot: rational(zdot)?,
        }),
        "affine" => {
            let (a, b) = args.split_once(',').ok_or_else(bad)?;
            Ok(HeisenbergSpec::Affine {
                a: rational(a)?,
                b: rational(b)?,
                zdot: rational(zdot)?,
            })
        }
        "power" => {
            let n: u64 = args.trim().parse().map_err(|_| bad())?;
            // t = h + zdot vanishes at -zdot
            let zdot = match zdot.trim() {
                "outside" => ZDot::Outside,
                "0" | "zero" => ZDot::At(MaxIdeal::Zero),
                other => {
                    let q = other
                        .strip_prefix("angle:")
                        .and_then(parse_rational)
                        .ok_or_else(|| {
                            CliError::Input(format!("zdot {other:?}: use 0, outside or angle:q"))
                        })?;
                    let neg = q + BigRational::new(1.into(), 2.into());
                    let num = i64::try_from(neg.numer())
                        .map_err(|_| CliError::Input("angle too large".into()))?;
                    let den = i64::try_from(neg.denom())
                        .map_err(|_| CliError::Input("angle too large".into()))?;
                    ZDot::At(
                        MaxIdeal::angle(num, den)
                            .ok_or_else(|| CliError::Input("bad angle".into()))?,
                    )
                }
            };
            Ok(HeisenbergSpec::Power { n, zdot })
        }
        _ => Err(bad()),
    }
}

fn simplicity_word(s: Simplicity) -> &'static str {
    match s {
        Simplicity::Simple => "simple",
        Simplicity::NotSimple => "not simple",
        Simplicity::ProbablySimple => "probably simple",
    }
}

fn realization_simplicity(r: &Realization, opts: &BruteOptions) -> Result<Simplicity> {
    Ok(match r {
        Realization::Prime(fm) => brute_simple(fm, opts)?,
        Realization::Rational(fm) => brute_simple_rational(fm, opts)?,
    })
}

/// Rows of the string action on the stored window.
fn string_table(m: &StringModule) -> Result<String> {
    let mut out = String::new();
    for i in m.lo()..=m.top() {
        let e = m.unit(i)?;
        let show = |r: Option<wgwa_core::StringElement>| match r {
            None => "0".to_string(),
            Some(v) => format!("{} e_{}", v.value.value_string(), v.position),
        };
        let x = match string_act(m, &Generator::X, &e) {
            Ok(r) => show(r),
            Err(_) => "(above window)".into(),
        };
        let y = show(string_act(m, &Generator::Y, &e)?);
        writeln!(out, "  e_{i} at {}: X -> {x}, Y -> {y}", m.point(i)?).unwrap();
    }
    Ok(out)
}

fn band_module(
    u: &WeightUniverse,
    common: &Common,
    cycle_from: Option<&str>,
    cycle: &[String],
    alpha: &str,
    variant: VariantArg,
) -> Result<BandModule> {
    let data = match cycle_from {
        Some(start) => detect_band_data(u, &u.parse_ideal(start)?, common.orbit_steps as usize)?,
        None => {
            let points = cycle
                .iter()
                .map(|s| u.parse_ideal(s))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            band_data_from_cycle(u, points)?
        }
    };
    let c0 = data.cycle()[0].clone();
    let alpha = alpha
        .split(';')
        .map(|row| {
            row.split_whitespace()
                .map(|entry| {
                    let q = rational(entry)?;
                    if u.is_finite_poly() {
                        if !q.denom().is_one() {
                            return Err(CliError::Input(format!(
                                "entry {entry:?} must be an integer"
                            )));
                        }
                        let v = i64::try_from(q.numer())
                            .map_err(|_| CliError::Input("entry too large".into()))?;
                        Ok(u.from_int(&c0, v))
                    } else {
                        Ok(u.reduce(&c0, &wgwa_core::RingElem::Rational(vec![q]))?)
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let variant = match variant {
        VariantArg::M => BandVariant::M,
        VariantArg::N => BandVariant::N,
    };
    Ok(build_band(&data, &PModuleData { alpha }, variant)?)
}

fn no_dot(command: &str) -> ! {
    Cli::command()
        .error(
            ErrorKind::ArgumentConflict,
            format!("--output dot is not available for `{command}`"),
        )
        .exit()
}

fn run(cli: &Cli) -> Result<String> {
    let common = &cli.common;
    let json = common.output == Output::Json;
    match &cli.command {
        Command::Orbit { universe, start } => {
            let u = universe.universe()?;
            let start = u.parse_ideal(start)?;
            let orbit = forward_orbit(&u, &start, common.orbit_steps as usize);
            Ok(match common.output {
                Output::Json => to_json(&OrbitDescriptor::new(&u, &start, &orbit)),
                Output::Dot => {
                    let seeds: Vec<MaxIdeal> = orbit.points().cloned().collect();
                    export_dot(&u, &seeds, 0)
                }
                Output::Text => {
                    let mut s = format!(
                        "tail: [{}]\ncycle: [{}]\n",
                        ideal_list(&orbit.tail),
                        ideal_list(&orbit.cycle)
                    );
                    if !orbit.is_complete() {
                        writeln!(s, "no cycle within {} steps", orbit.steps_used).unwrap();
                    }
                    writeln!(s, "steps used: {}", orbit.steps_used).unwrap();
                    s
                }
            })
        }
        Command::Classify { universe, start } => {
            let u = universe.universe()?;
            let start = u.parse_ideal(start)?;
            let report = classify_point(&u, &start, &bounds(common));
            Ok(match common.output {
                Output::Json => to_json(&ClassificationDescriptor::new(&u, &report)),
                Output::Dot => export_dot(&u, &[start], common.up_depth as usize),
                Output::Text => report.to_string(),
            })
        }
        Command::String {
            universe,
            kind,
            lo,
            window,
            certificate,
            matrices,
        } => {
            if common.output == Output::Dot {
                no_dot("string");
            }
            let u = universe.universe()?;
            let points = window
                .iter()
                .map(|s| u.parse_ideal(s))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let kind = match kind {
                KindArg::Bounded => StringKind::Bounded(points.len().saturating_sub(1)),
                KindArg::LeftInfinite => StringKind::LeftInfinite,
                KindArg::RightInfinite => StringKind::RightInfinite,
                KindArg::DoubleInfinite => StringKind::DoubleInfinite,
            };
            let cert = certificate.as_deref().map(parse_certificate).transpose()?;
            let module = build_string(&u, kind, *lo, points)?.with_certificate(cert);
            if *matrices {
                let r = to_matrices(ModuleRef::String(&module))?;
                return Ok(to_json(&MatrixDump::from_realization(&r)));
            }
            if json {
                return Ok(to_json(&StringDescriptor::from_module(&module)));
            }
            let mut s = format!(
                "{} string, positions from {}: [{}]\n",
                kind,
                module.lo(),
                ideal_list(module.window())
            );
            match string_is_simple(&module, cert) {
                Ok(v) => writeln!(s, "simple: {v}").unwrap(),
                Err(e) => writeln!(s, "simple: undetermined ({e})").unwrap(),
            }
            s.push_str(&string_table(&module)?);
            Ok(s)
        }
        Command::Band {
            universe,
            cycle_from,
            cycle,
            alpha,
            variant,
            matrices,
            compare,
        } => {
            if common.output == Output::Dot {
                no_dot("band");
            }
            let u = universe.universe()?;
            let module = band_module(&u, common, cycle_from.as_deref(), cycle, alpha, *variant)?;
            let budget = common.budget;
            let iso = match compare {
                Some(path) => Some(from_json::<BandDescriptor>(&read_file(path)?)?.to_module()?),
                None => None,
            }
            .map(|other| band_iso(&module, &other, budget))
            .transpose()?;
            if *matrices {
                let r = to_matrices(ModuleRef::Band(&module))?;
                return Ok(to_json(&MatrixDump::from_realization(&r)));
            }
            if json {
                return Ok(to_json(&BandDescriptor::from_module(&module)?));
            }
            let mut s = format!(
                "band {} on [{}], k = {}, dim L = {}\n",
                module.variant(),
                ideal_list(module.cycle()),
                module.period(),
                module.dim()
            );
            match pmodule_is_simple(module.data(), module.pmodule(), budget) {
                Ok(v) => writeln!(s, "simple: {v}").unwrap(),
                Err(e) => writeln!(s, "simple: undetermined ({e})").unwrap(),
            }
            writeln!(s, "X bijective: {}", module.x_bijective()).unwrap();
            writeln!(s, "Y bijective: {}", module.y_bijective()).unwrap();
            if let Some(iso) = iso {
                writeln!(s, "isomorphic to comparison module: {iso}").unwrap();
            }
            Ok(s)
        }
        Command::Check { module } => {
            if common.output == Output::Dot {
                no_dot("check");
            }
            let text = read_file(module)?;
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(DescriptorError::from)?;
            let realization = if value.get("H").is_some() {
                from_json::<MatrixDump>(&text)?.to_realization()?
            } else if value.get("cycle").is_some() {
                to_matrices(ModuleRef::Band(
                    &from_json::<BandDescriptor>(&text)?.to_module()?,
                ))?
            } else if value.get("window").is_some() {
                to_matrices(ModuleRef::String(
                    &from_json::<StringDescriptor>(&text)?.to_module()?,
                ))?
            } else {
                return Err(CliError::Input("unrecognized module file".into()));
            };
            let report = match &realization {
                Realization::Prime(fm) => check_relations(fm),
                Realization::Rational(fm) => check_relations(fm),
            };
            let simple = if report.ok {
                Some(
                    simplicity_word(realization_simplicity(
                        &realization,
                        &brute_options(common),
                    )?)
                    .to_string(),
                )
            } else {
                None
            };
            let desc = RelationDescriptor {
                schema: SCHEMA.into(),
                ok: report.ok,
                violations: report.violations.iter().map(ToString::to_string).collect(),
                simple,
            };
            if json {
                return Ok(to_json(&desc));
            }
            let mut s = format!("dimension {}\n", realization.dim());
            if desc.ok {
                s.push_str("relations: ok\n");
            } else {
                writeln!(s, "relations: violated ({})", desc.violations.join("; ")).unwrap();
            }
            if let Some(v) = &desc.simple {
                writeln!(s, "simple: {v}").unwrap();
            }
            Ok(s)
        }
        Command::Heisenberg { f, zdot } => {
            if common.output == Output::Dot {
                no_dot("heisenberg");
            }
            let spec = parse_heisenberg(f, zdot)?;
            let report = heisenberg_catalogue(&spec, &bounds(common))?;
            Ok(if json {
                to_json(&CatalogueDescriptor::from(&report))
            } else {
                report.to_string()
            })
        }
        Command::ExportDot {
            universe,
            start,
            depth,
        } => {
            if json {
                return Err(CliError::Input(
                    "export-dot writes DOT; drop --output json".into(),
                ));
            }
            let u = universe.universe()?;
            let seeds = start
                .iter()
                .map(|s| u.parse_ideal(s))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            Ok(export_dot(&u, &seeds, *depth))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if cli.common.output == Output::Json {
                print!("{}", to_json(&ErrorDescriptor::new(e.tag(), e.to_string())));
            }
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
