use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lagten::curves;
use lagten::epw::{self, LagrangianSubspace};
use lagten::field::{FieldSpec, Scalar};
use lagten::hyper;
use lagten::jsonio;
use lagten::lattice;
use lagten::poly::MultiPoly;
use lagten::tens::{self, TenConfig};

use lagten_cli::{run_suite, sha256_hex, SuiteConfig, DEFAULT_BUDGET};

#[derive(Parser)]
#[command(
    name = "lagten",
    version,
    about = "Exact computations with configurations of pairwise incident planes in P^5"
)]
struct Cli {
    /// Seed for every randomized search and sampling step
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Cap on the number of projective points any scan may visit
    #[arg(long, global = true)]
    budget: Option<u128>,
    /// Write the JSON output here; "-" selects standard output
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<String>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Construct, verify, and transform configurations of ten or more planes
    Ten {
        #[command(subcommand)]
        cmd: TenCmd,
    },
    /// Linear systems of hypersurfaces with assigned base planes
    Cubic {
        #[command(subcommand)]
        cmd: CubicCmd,
    },
    /// Degeneracy loci of Lagrangian subspaces of the wedge cube
    Epw {
        #[command(subcommand)]
        cmd: EpwCmd,
    },
    /// Integer Gram matrices and their invariants
    Lattice {
        #[command(subcommand)]
        cmd: LatticeCmd,
    },
    /// Tens of planes built from linear systems on a ten nodal sextic
    Coble {
        #[command(subcommand)]
        cmd: CobleCmd,
    },
    /// Run the full baseline check suite and emit a report
    Suite {
        /// JSON config with keys seed, budget, recipes, imports
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Recipe {
    /// Ten planes from three conics over F_29
    #[value(name = "3331")]
    ThreeConic,
    /// Thirteen planes from three quadrics over F_11
    #[value(name = "morin13")]
    Morin13,
}

#[derive(Subcommand)]
enum TenCmd {
    /// Build a named configuration and print it as TenConfig JSON
    Construct {
        #[arg(long)]
        recipe: Recipe,
        /// Base field characteristic, where the recipe allows a choice
        #[arg(long)]
        p: Option<u64>,
        /// Extension degree over the base; the recipes work over quadratic
        /// extensions
        #[arg(long)]
        k: Option<usize>,
    },
    /// Check incidences, distinctness, span, and isotropy of a configuration
    Verify {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: Option<String>,
    },
    /// Apply the correlation sending each plane to its pairing-orthogonal
    Dualize {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: Option<String>,
    },
    /// Rank of the linearized incidence system in a common chart
    TangentRank {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum CubicCmd {
    /// Forms of the given degree vanishing on every plane of a configuration
    ThroughPlanes {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(short = 'd', long, default_value_t = 3)]
        degree: usize,
    },
    /// Enumerate singular points of a form over the base field and extensions
    Scan {
        #[arg(long, value_name = "FILE")]
        form: PathBuf,
        #[arg(short = 'K', long = "max-ext", default_value_t = 2)]
        max_ext: usize,
    },
}

#[derive(Subcommand)]
enum EpwCmd {
    /// Recover the degeneracy sextic of the span of a configuration
    Form {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: Option<String>,
    },
    /// Corank of a single point against the span of a configuration
    Corank {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Six comma separated integers, read in the base field
        #[arg(long)]
        point: String,
    },
    /// Scan the projectivized span for decomposable vectors
    Theta {
        /// Characteristic for the built-in search configuration
        #[arg(long, default_value_t = 5)]
        p: u64,
        /// Scan this configuration instead of the built-in one
        #[arg(long = "in", value_name = "FILE")]
        input: Option<PathBuf>,
    },
    /// Test whether a sextic is a scalar multiple of a power of a base form
    CheckPower {
        #[arg(long, value_name = "FILE")]
        form: PathBuf,
        #[arg(long, value_name = "FILE")]
        base: PathBuf,
        #[arg(long)]
        exp: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GramPreset {
    /// Plane classes h, P_1 .. P_10: rank 11, det 2^10 * 13
    #[value(name = "M10")]
    M10,
    /// Plane classes with an eleventh plane: rank 12, det 2^11 * 14
    #[value(name = "M11")]
    M11,
    /// Degree two form of the double cover: rank 11, det 2^11 * 13
    #[value(name = "BB")]
    Bb,
    /// diag(2, -2, .., -2): rank 11, det -2^11
    #[value(name = "EPW")]
    Epw,
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Print a named Gram matrix with its determinant and invariant factors
    Gram {
        #[arg(long)]
        preset: GramPreset,
    },
    /// Smith normal form of an integer matrix given as JSON rows
    Smith {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CobleTen {
    Septic,
    Decimic,
}

#[derive(Subcommand)]
enum CobleCmd {
    /// Build the multiplication ten of the chosen kind over F_p
    Build {
        #[arg(long)]
        kind: CobleTen,
        /// Characteristic to scan for the ten nodes; defaults to the frozen
        /// first prime where all ten are rational
        #[arg(long)]
        prime: Option<u64>,
    },
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let seed = cli.seed.unwrap_or(0);
    let budget = cli.budget.unwrap_or(DEFAULT_BUDGET);
    let json_dest = cli.json.clone();

    match cli.cmd {
        Cmd::Ten { cmd } => ten_cmd(cmd, seed, json_dest),
        Cmd::Cubic { cmd } => cubic_cmd(cmd, budget, json_dest),
        Cmd::Epw { cmd } => epw_cmd(cmd, seed, budget, json_dest),
        Cmd::Lattice { cmd } => lattice_cmd(cmd, json_dest),
        Cmd::Coble { cmd } => coble_cmd(cmd, json_dest),
        Cmd::Suite { config } => suite_cmd(config, cli.seed, cli.budget, json_dest),
    }
}

/// Writes stable JSON to the chosen destination; None and "-" mean stdout.
fn emit(v: &Value, dest: Option<&str>) -> anyhow::Result<()> {
    let text = jsonio::to_string_stable(v);
    match dest {
        None | Some("-") => println!("{text}"),
        Some(path) => fs::write(path, text + "\n").with_context(|| format!("writing {path}"))?,
    }
    Ok(())
}

fn read_config(path: &Path) -> anyhow::Result<TenConfig> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let v: Value =
        serde_json::from_slice(&bytes).with_context(|| format!("parsing {}", path.display()))?;
    TenConfig::from_json(&v).with_context(|| format!("decoding {}", path.display()))
}

/// Accepts the output of `epw form` or `cubic through-planes`: a field header
/// plus a form under "sextic", "form", or a one element "basis".
fn read_form(path: &Path) -> anyhow::Result<(FieldSpec, MultiPoly)> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let v: Value =
        serde_json::from_slice(&bytes).with_context(|| format!("parsing {}", path.display()))?;
    let field = jsonio::field_from_json(
        v.get("field").with_context(|| format!("{}: missing field header", path.display()))?,
    )?;
    for key in ["sextic", "form"] {
        if let Some(p) = v.get(key) {
            if !p.is_null() {
                return Ok((field.clone(), jsonio::poly_from_json(&field, p)?));
            }
        }
    }
    if let Some(Value::Array(basis)) = v.get("basis") {
        if basis.len() == 1 {
            return Ok((field.clone(), jsonio::poly_from_json(&field, &basis[0])?));
        }
        bail!("{}: basis holds {} forms, expected exactly one", path.display(), basis.len());
    }
    bail!("{}: no form found under \"sextic\", \"form\", or \"basis\"", path.display());
}

fn ten_cmd(cmd: TenCmd, seed: u64, json_dest: Option<String>) -> anyhow::Result<()> {
    match cmd {
        TenCmd::Construct { recipe, p, k } => {
            if let Some(k) = k {
                if k != 2 {
                    bail!("the recipes are built over quadratic extensions; --k must be 2");
                }
            }
            let config = match recipe {
                Recipe::ThreeConic => {
                    if let Some(p) = p {
                        if p != 29 {
                            bail!("the three conic recipe is tied to p = 29");
                        }
                    }
                    tens::construct_3331(seed)?.config
                }
                Recipe::Morin13 => tens::construct_morin13(seed, p.unwrap_or(11))?.config,
            };
            emit(&config.to_json(), json_dest.as_deref())
        }
        TenCmd::Verify { input, out } => {
            let config = read_config(&input)?;
            let rep = config.verify();
            let dest = out.or(json_dest);
            emit(&rep.to_json(&config.field), dest.as_deref())?;
            if !rep.all_incident || !rep.planes_distinct {
                std::process::exit(1);
            }
            Ok(())
        }
        TenCmd::Dualize { input, out } => {
            let config = read_config(&input)?;
            let dest = out.or(json_dest);
            emit(&config.dualize().to_json(), dest.as_deref())
        }
        TenCmd::TangentRank { input } => {
            let config = read_config(&input)?;
            let rep = tens::tangent_rank(&config, seed)?;
            let v = json!({
                "chart": rep.chart.0.iter().map(|&c| c as u64).collect::<Vec<u64>>(),
                "coordinate_changes": rep.coordinate_changes,
                "rank": rep.rank,
                "parameter_count": rep.parameter_count,
                "tangent_dim": rep.tangent_dim,
            });
            emit(&v, json_dest.as_deref())
        }
    }
}

fn cubic_cmd(cmd: CubicCmd, budget: u128, json_dest: Option<String>) -> anyhow::Result<()> {
    match cmd {
        CubicCmd::ThroughPlanes { input, degree } => {
            let config = read_config(&input)?;
            let sys = hyper::through_planes(&config.field, &config.planes, degree);
            let basis: Vec<Value> = sys
                .basis
                .iter()
                .map(|b| jsonio::poly_to_json(&config.field, b))
                .collect();
            let mut v = json!({
                "field": jsonio::field_to_json(&config.field),
                "n": sys.n,
                "d": sys.d,
                "dim": sys.dim(),
                "cond_rank": sys.cond_rank,
                "basis": basis,
            });
            if sys.dim() == 1 {
                v["form"] = jsonio::poly_to_json(&config.field, &sys.basis[0]);
            }
            emit(&v, json_dest.as_deref())
        }
        CubicCmd::Scan { form, max_ext } => {
            let (field, f) = read_form(&form)?;
            let outcome = hyper::singular_scan(&field, &f, max_ext, budget)?;
            let found: Vec<Value> = outcome
                .found
                .iter()
                .map(|s| {
                    json!({
                        "level": s.level,
                        "field": jsonio::field_to_json(&s.field),
                        "point": jsonio::scalar_row_to_json(&s.field, &s.point),
                    })
                })
                .collect();
            let v = json!({
                "scanned": outcome.scanned_points.to_string(),
                "max_level": outcome.max_level,
                "found": found,
                "note": outcome.note,
            });
            emit(&v, json_dest.as_deref())
        }
    }
}

fn epw_cmd(
    cmd: EpwCmd,
    seed: u64,
    budget: u128,
    json_dest: Option<String>,
) -> anyhow::Result<()> {
    match cmd {
        EpwCmd::Form { input, out } => {
            let config = read_config(&input)?;
            let a = LagrangianSubspace::from_config(&config)?;
            let rep = epw::epw_form(&a, seed)?;
            let path = match rep.path {
                Some(epw::FormPath::ExactDivision) => json!("exact-division"),
                Some(epw::FormPath::AffineChart) => json!("affine-chart"),
                None => Value::Null,
            };
            let sextic = match &rep.sextic {
                Some(s) => jsonio::poly_to_json(&rep.field, s),
                None => Value::Null,
            };
            let v = json!({
                "field": jsonio::field_to_json(&rep.field),
                "sextic": sextic,
                "chart": rep.chart,
                "path": path,
                "coefficients_in_base": rep.coefficients_in_base,
                "checked_points": rep.checked_points,
                "cross_checked_charts": rep.cross_checked_charts,
            });
            let dest = out.or(json_dest);
            emit(&v, dest.as_deref())
        }
        EpwCmd::Corank { input, point } => {
            let config = read_config(&input)?;
            let a = LagrangianSubspace::from_config(&config)?;
            let coords: Vec<i64> = point
                .split(',')
                .map(|s| s.trim().parse::<i64>().context("point coordinates must be integers"))
                .collect::<anyhow::Result<_>>()?;
            if coords.len() != 6 {
                bail!("expected six comma separated coordinates, got {}", coords.len());
            }
            let v: Vec<Scalar> = coords.iter().map(|&c| config.field.from_i64(c)).collect();
            if v.iter().all(|x| config.field.is_zero(x)) {
                bail!("the zero vector is not a projective point");
            }
            let k = epw::corank(&a, &v);
            emit(&json!({ "corank": k, "degenerate": k > 0 }), json_dest.as_deref())
        }
        EpwCmd::Theta { p, input } => {
            let (field, config) = match input {
                Some(path) => {
                    let config = read_config(&path)?;
                    (config.field.clone(), config)
                }
                None => {
                    let field = FieldSpec::prime(p)?;
                    let config = tens::ruling_ten(&field, seed)?;
                    (field, config)
                }
            };
            let a = LagrangianSubspace::from_config(&config)?;
            let rep = epw::theta_enumerate(&a, budget)?;
            let recovered = config
                .planes
                .iter()
                .all(|pl| epw::contains_plane(&field, &rep.planes, pl));
            let planes: Vec<Value> =
                rep.planes.iter().map(|pl| jsonio::plane_to_json(&field, pl)).collect();
            let v = json!({
                "scanned": rep.scanned.to_string(),
                "count": rep.planes.len(),
                "contains_configured": recovered,
                "planes": planes,
            });
            emit(&v, json_dest.as_deref())
        }
        EpwCmd::CheckPower { form, base, exp } => {
            let (field, sextic) = read_form(&form)?;
            let (base_field, base_form) = read_form(&base)?;
            if field != base_field {
                bail!("the two forms live over different fields");
            }
            let equal = epw::is_scalar_power(&field, &sextic, &base_form, exp);
            emit(&json!({ "equal": equal, "exp": exp }), json_dest.as_deref())?;
            if !equal {
                std::process::exit(1);
            }
            Ok(())
        }
    }
}

fn lattice_cmd(cmd: LatticeCmd, json_dest: Option<String>) -> anyhow::Result<()> {
    match cmd {
        LatticeCmd::Gram { preset } => {
            let l = match preset {
                GramPreset::M10 => lattice::plane_class_gram(10),
                GramPreset::M11 => lattice::plane_class_gram(11),
                GramPreset::Bb => lattice::bb_matrix(),
                GramPreset::Epw => lattice::epw_polarization(),
            };
            let factors: Vec<String> =
                l.discriminant_factors().iter().map(|x| x.to_string()).collect();
            let v = json!({
                "label": l.label,
                "gram": jsonio::intmat_to_json(&l.gram),
                "det": l.det().to_string(),
                "invariant_factors": factors,
            });
            emit(&v, json_dest.as_deref())
        }
        LatticeCmd::Smith { input } => {
            let bytes =
                fs::read(&input).with_context(|| format!("reading {}", input.display()))?;
            let v: Value = serde_json::from_slice(&bytes)
                .with_context(|| format!("parsing {}", input.display()))?;
            let m = jsonio::intmat_from_json(v.get("gram").unwrap_or(&v))?;
            let snf = m.smith();
            let ok = snf.left.mul(&m).mul(&snf.right) == snf.d;
            let v = json!({
                "diagonal": snf.d.diagonal().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "left": jsonio::intmat_to_json(&snf.left),
                "right": jsonio::intmat_to_json(&snf.right),
                "transform_check": ok,
            });
            emit(&v, json_dest.as_deref())
        }
    }
}

fn coble_cmd(cmd: CobleCmd, json_dest: Option<String>) -> anyhow::Result<()> {
    match cmd {
        CobleCmd::Build { kind, prime } => {
            let (field, nodes) = match prime {
                None => curves::winger_nodes()?,
                Some(p) => {
                    let field = FieldSpec::prime(p)?;
                    let f = curves::winger_sextic(&field);
                    let nodes = curves::find_nodes(&field, &f, 2)?;
                    if nodes.len() != 10 {
                        bail!(
                            "the sextic has {} singular points over F_{p} and extensions, not 10",
                            nodes.len()
                        );
                    }
                    if nodes.points.iter().any(|(pt, _)| pt.len() != 3) {
                        bail!("unexpected singular point shape");
                    }
                    (field, nodes)
                }
            };
            let data = match kind {
                CobleTen::Septic => curves::coble_septic_ten(&field, &nodes)?,
                CobleTen::Decimic => curves::coble_decimic_ten(&field, &nodes)?,
            };
            let rep = data.config.verify();
            eprintln!(
                "target system dim {}, per node dims {:?}, span {}, isotropic {}",
                data.system.dim(),
                data.per_node_dims.first().unwrap_or(&(0, 0)),
                rep.span_dim,
                rep.isotropic
            );
            emit(&data.config.to_json(), json_dest.as_deref())
        }
    }
}

fn suite_cmd(
    config: Option<PathBuf>,
    seed_flag: Option<u64>,
    budget_flag: Option<u128>,
    json_dest: Option<String>,
) -> anyhow::Result<()> {
    let mut digests = BTreeMap::new();
    let mut cfg = match config {
        Some(path) => {
            let (cfg, digest) = SuiteConfig::load(&path)?;
            digests.insert(format!("config:{}", path.display()), digest);
            cfg
        }
        None => {
            digests.insert(
                "config:default".to_string(),
                sha256_hex(b"built-in default configuration"),
            );
            SuiteConfig::default()
        }
    };
    if let Some(seed) = seed_flag {
        cfg.seed = seed;
    }
    if let Some(budget) = budget_flag {
        cfg.budget = budget;
    }
    let report = run_suite(&cfg, digests)?;
    emit(&report.to_json(true), json_dest.as_deref())?;
    eprintln!("{}", report.summary());
    if report.has_failure() {
        std::process::exit(1);
    }
    Ok(())
}
