//! `bextlab`: file-based front end. Every input and output document is JSON of the
//! form `{"format": 1, "kind": ..., "data": ...}`; reports go to stdout.
//!
//! Exit codes: 0 pass, 1 mathematical failure, 2 parse error, 3 size bound.

use bextlab::barcx::{build_l, homology, l_basis, validate_bimodule, validate_ring, Bimodule, ChainComplex, FinRing};
use bextlab::biext::{verify_biext, verify_butterfly, BiextCocycle, ButterflyCocycle};
use bextlab::catring::{self, CatRingError, MonoidData, RingPresentation};
use bextlab::cohom::{cohomology_group, Cochain5, CocycleMode, CohomError};
use bextlab::fingroup::FinGroup;
use bextlab::multiext::{compose, iso_check, validate_multiext, MultiExt, MultiExtError};
use bextlab::xmod::{validate_braiding, validate_xmod, BraidedXMod, XMod};
use bextlab::{max_search, Report};
use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use thiserror::Error;

const FORMAT: u32 = 1;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Math(String),
    #[error("size bound exceeded: {size} > {bound}")]
    SizeBound { size: u128, bound: u64 },
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Math(_) => 1,
            CliError::Parse(_) | CliError::Io { .. } => 2,
            CliError::SizeBound { .. } => 3,
        }
    }
}

impl From<MultiExtError> for CliError {
    fn from(e: MultiExtError) -> Self {
        match e {
            MultiExtError::SearchSpaceTooLarge { size, bound } => CliError::SizeBound { size, bound },
            MultiExtError::TooLarge(n) => CliError::SizeBound {
                size: n as u128,
                bound: 8192,
            },
            MultiExtError::Malformed(s) => CliError::Parse(s),
            e => CliError::Math(e.to_string()),
        }
    }
}

impl From<CatRingError> for CliError {
    fn from(e: CatRingError) -> Self {
        match e {
            CatRingError::MultiExt(e) => e.into(),
            e => CliError::Math(e.to_string()),
        }
    }
}

impl From<CohomError> for CliError {
    fn from(e: CohomError) -> Self {
        match e {
            CohomError::Shape => CliError::Parse(e.to_string()),
            e => CliError::Math(e.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
enum Kind {
    Group,
    Xmod,
    BraidedXmod,
    Biext,
    Butterfly,
    Multiext,
    Ring,
    Bimodule,
    Presentation,
    Monoid,
    Cocycle,
    Complex,
}

#[derive(Serialize, Deserialize)]
struct Doc {
    format: u32,
    kind: Kind,
    data: Value,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Mode {
    H3_2,
    H3_3,
    Twisted,
}

impl From<Mode> for CocycleMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::H3_2 => CocycleMode::H3_2,
            Mode::H3_3 => CocycleMode::H3_3,
            Mode::Twisted => CocycleMode::Twisted,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "bextlab",
    version,
    about = "Braided crossed modules, biextensions and ring cohomology over finite tables"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the validator for the document's kind.
    Validate {
        path: PathBuf,
        /// Expected kind; defaults to the kind stored in the file.
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        /// Ring for a bimodule document.
        #[arg(long)]
        ring: Option<PathBuf>,
        /// Presentation for a monoid document.
        #[arg(long)]
        presentation: Option<PathBuf>,
    },
    /// Compose an outer multi-extension with inner ones.
    Compose {
        outer: PathBuf,
        inner: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Search for an isomorphism between two multi-extensions.
    Iso { first: PathBuf, second: PathBuf },
    /// Invariant factors and representatives of a cohomology group.
    Cohomology {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        module: PathBuf,
        #[arg(long, value_enum, default_value = "twisted")]
        mode: Mode,
    },
    /// Homology of `L^level(A)` or of a stored complex.
    Homology {
        #[arg(long, conflicts_with = "complex")]
        ring: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        level: usize,
        #[arg(long)]
        complex: Option<PathBuf>,
        #[arg(long)]
        degree: usize,
        /// Also write the complex.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Twisted cocycle of a presentation with monoid data.
    Decompose {
        #[arg(long)]
        presentation: PathBuf,
        #[arg(long)]
        monoid: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Presentation and monoid data realizing a twisted cocycle.
    Reconstruct {
        #[arg(long)]
        cocycle: PathBuf,
        /// Skeleton presentation; without it a split skeleton is searched.
        #[arg(long)]
        skeleton: Option<PathBuf>,
        #[arg(long, required_unless_present = "skeleton")]
        ring: Option<PathBuf>,
        #[arg(long, required_unless_present = "skeleton")]
        module: Option<PathBuf>,
        #[arg(long)]
        out_presentation: PathBuf,
        #[arg(long)]
        out_monoid: PathBuf,
    },
    /// Pentagon identity on the associator extracted from the monoid data.
    Pentagon {
        #[arg(long)]
        presentation: PathBuf,
        #[arg(long)]
        monoid: PathBuf,
    },
    /// Coordinates of the twisted class, from monoid data or from a cocycle.
    Class {
        #[arg(long)]
        presentation: Option<PathBuf>,
        #[arg(long, requires = "presentation")]
        monoid: Option<PathBuf>,
        #[arg(long, conflicts_with = "monoid")]
        cocycle: Option<PathBuf>,
        #[arg(long)]
        ring: Option<PathBuf>,
        #[arg(long)]
        module: Option<PathBuf>,
    },
}

/// Stdout payload plus the exit status it implies.
struct Outcome {
    body: Value,
    passed: bool,
}

impl Outcome {
    fn ok(body: Value) -> Self {
        Outcome { body, passed: true }
    }
}

fn read_doc(path: &Path) -> Result<Doc, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let doc: Doc = serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    if doc.format != FORMAT {
        return Err(CliError::Parse(format!(
            "{}: unsupported format {}",
            path.display(),
            doc.format
        )));
    }
    Ok(doc)
}

fn decode<T: DeserializeOwned>(doc: Doc, want: Kind, path: &Path) -> Result<T, CliError> {
    if doc.kind != want {
        return Err(CliError::Parse(format!(
            "{}: expected kind {want:?}, found {:?}",
            path.display(),
            doc.kind
        )));
    }
    serde_json::from_value(doc.data).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn load<T: DeserializeOwned>(path: &Path, want: Kind) -> Result<T, CliError> {
    decode(read_doc(path)?, want, path)
}

fn write_doc<T: Serialize>(path: &Path, kind: Kind, data: &T) -> Result<(), CliError> {
    let doc = Doc {
        format: FORMAT,
        kind,
        data: serde_json::to_value(data).expect("serializable"),
    };
    let text = serde_json::to_string_pretty(&doc).expect("serializable") + "\n";
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn report_json(kind: &str, r: &Report) -> Outcome {
    Outcome {
        body: json!({"format": FORMAT, "kind": kind, "passed": r.passed(), "checks": r.checks}),
        passed: r.passed(),
    }
}

fn require(path: &Option<PathBuf>, flag: &str) -> Result<PathBuf, CliError> {
    path.clone()
        .ok_or_else(|| CliError::Parse(format!("{flag} is required here")))
}

fn check_bound(size: u128) -> Result<(), CliError> {
    let bound = max_search();
    if size > bound as u128 {
        return Err(CliError::SizeBound { size, bound });
    }
    Ok(())
}

fn validate(
    path: &Path,
    kind: Option<Kind>,
    ring: &Option<PathBuf>,
    pres: &Option<PathBuf>,
) -> Result<Outcome, CliError> {
    let doc = read_doc(path)?;
    let kind = kind.unwrap_or(doc.kind);
    let (name, report) = match kind {
        Kind::Group => {
            let _: FinGroup = decode(doc, kind, path)?;
            ("group", Report::default())
        }
        Kind::Xmod => ("xmod", validate_xmod(&decode::<XMod>(doc, kind, path)?)),
        Kind::BraidedXmod => (
            "braided_xmod",
            validate_braiding(&decode::<BraidedXMod>(doc, kind, path)?),
        ),
        Kind::Biext => ("biext", verify_biext(&decode::<BiextCocycle>(doc, kind, path)?)),
        Kind::Butterfly => (
            "butterfly",
            verify_butterfly(&decode::<ButterflyCocycle>(doc, kind, path)?),
        ),
        Kind::Multiext => ("multiext", validate_multiext(&decode::<MultiExt>(doc, kind, path)?)),
        Kind::Ring => ("ring", validate_ring(&decode::<FinRing>(doc, kind, path)?)),
        Kind::Bimodule => {
            let m: Bimodule = decode(doc, kind, path)?;
            let r: FinRing = load(&require(ring, "--ring")?, Kind::Ring)?;
            ("bimodule", validate_bimodule(&r, &m))
        }
        Kind::Presentation => (
            "presentation",
            catring::validate_presentation(&decode(doc, kind, path)?),
        ),
        Kind::Monoid => {
            let m: MonoidData = decode(doc, kind, path)?;
            let p: RingPresentation = load(&require(pres, "--presentation")?, Kind::Presentation)?;
            let mut r = catring::validate_monoid(&p, &m)?;
            if r.passed() {
                r.merge("", catring::pentagon_check(&p, &m)?);
            }
            ("monoid", r)
        }
        Kind::Cocycle | Kind::Complex => {
            return Err(CliError::Parse(format!("no validator for kind {kind:?}")));
        }
    };
    Ok(report_json(name, &report))
}

fn run(cmd: Cmd) -> Result<Outcome, CliError> {
    match cmd {
        Cmd::Validate {
            path,
            kind,
            ring,
            presentation,
        } => validate(&path, kind, &ring, &presentation),
        Cmd::Compose { outer, inner, out } => {
            let e: MultiExt = load(&outer, Kind::Multiext)?;
            let fs: Vec<MultiExt> = inner
                .iter()
                .map(|p| load(p, Kind::Multiext))
                .collect::<Result<_, _>>()?;
            let refs: Vec<&MultiExt> = fs.iter().collect();
            let c = compose(&e, &refs)?;
            write_doc(&out, Kind::Multiext, &c)?;
            Ok(Outcome::ok(
                json!({"format": FORMAT, "arity": c.arity(), "size": c.len()}),
            ))
        }
        Cmd::Iso { first, second } => {
            let a: MultiExt = load(&first, Kind::Multiext)?;
            let b: MultiExt = load(&second, Kind::Multiext)?;
            let found = iso_check(&a, &b, max_search())?;
            Ok(Outcome {
                passed: found.is_some(),
                body: json!({"format": FORMAT, "isomorphic": found.is_some(), "map": found}),
            })
        }
        Cmd::Cohomology { ring, module, mode } => {
            let r: FinRing = load(&ring, Kind::Ring)?;
            let m: Bimodule = load(&module, Kind::Bimodule)?;
            let n = r.order() as u128;
            check_bound(n.pow(4) * m.m.order() as u128)?;
            let g = cohomology_group(&r, &m, mode.into())?;
            let reps: Vec<Vec<usize>> = g.representatives.iter().map(Cochain5::flatten).collect();
            Ok(Outcome::ok(json!({
                "format": FORMAT,
                "mode": g.mode,
                "factors": g.factors,
                "representatives": reps,
            })))
        }
        Cmd::Homology {
            ring,
            level,
            complex,
            degree,
            out,
        } => {
            let c: ChainComplex = match (ring, complex) {
                (_, Some(path)) => load(&path, Kind::Complex)?,
                (Some(path), None) => {
                    let r: FinRing = load(&path, Kind::Ring)?;
                    if !(2..=3).contains(&level) {
                        return Err(CliError::Parse(format!("level must be 2 or 3, got {level}")));
                    }
                    let dims: Vec<u128> = (0..=3).map(|d| l_basis(&r, level, d).len() as u128).collect();
                    check_bound(dims.windows(2).map(|w| w[0] * w[1]).max().unwrap_or(0))?;
                    build_l(&r, level)
                }
                (None, None) => return Err(CliError::Parse("--ring or --complex is required".into())),
            };
            if let Some(out) = out {
                write_doc(&out, Kind::Complex, &c)?;
            }
            Ok(Outcome::ok(
                json!({"format": FORMAT, "degree": degree, "factors": homology(&c, degree)}),
            ))
        }
        Cmd::Decompose {
            presentation,
            monoid,
            out,
        } => {
            let p: RingPresentation = load(&presentation, Kind::Presentation)?;
            let m: MonoidData = load(&monoid, Kind::Monoid)?;
            let xi = catring::decompose(&p, &m)?;
            let class = catring::twisted_class(&p.ring, &p.module, &xi)?;
            if let Some(out) = out {
                write_doc(&out, Kind::Cocycle, &xi)?;
            }
            Ok(Outcome::ok(json!({"format": FORMAT, "cocycle": xi, "class": class})))
        }
        Cmd::Reconstruct {
            cocycle,
            skeleton,
            ring,
            module,
            out_presentation,
            out_monoid,
        } => {
            let xi: Cochain5 = load(&cocycle, Kind::Cocycle)?;
            let skel = match skeleton {
                Some(path) => load(&path, Kind::Presentation)?,
                None => {
                    let r: FinRing = load(&require(&ring, "--ring")?, Kind::Ring)?;
                    let m: Bimodule = load(&require(&module, "--module")?, Kind::Bimodule)?;
                    catring::split_skeleton_for(&r, &m, &xi)?
                }
            };
            let (p, m) = catring::reconstruct(&xi, &skel)?;
            write_doc(&out_presentation, Kind::Presentation, &p)?;
            write_doc(&out_monoid, Kind::Monoid, &m)?;
            Ok(Outcome::ok(json!({"format": FORMAT, "size": m.e2.len()})))
        }
        Cmd::Pentagon { presentation, monoid } => {
            let p: RingPresentation = load(&presentation, Kind::Presentation)?;
            let m: MonoidData = load(&monoid, Kind::Monoid)?;
            Ok(report_json("pentagon", &catring::pentagon_check(&p, &m)?))
        }
        Cmd::Class {
            presentation,
            monoid,
            cocycle,
            ring,
            module,
        } => {
            let class = match (monoid, cocycle) {
                (Some(m), _) => {
                    let p: RingPresentation = load(&require(&presentation, "--presentation")?, Kind::Presentation)?;
                    let m: MonoidData = load(&m, Kind::Monoid)?;
                    catring::class_of(&p, &m)?
                }
                (None, Some(c)) => {
                    let xi: Cochain5 = load(&c, Kind::Cocycle)?;
                    let (r, m) = match presentation {
                        Some(p) => {
                            let p: RingPresentation = load(&p, Kind::Presentation)?;
                            (p.ring, p.module)
                        }
                        None => (
                            load(&require(&ring, "--ring")?, Kind::Ring)?,
                            load(&require(&module, "--module")?, Kind::Bimodule)?,
                        ),
                    };
                    catring::twisted_class(&r, &m, &xi)?
                }
                (None, None) => return Err(CliError::Parse("--monoid or --cocycle is required".into())),
            };
            Ok(Outcome::ok(json!({"format": FORMAT, "class": class})))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    // Malformed tables that pass deserialization can index out of range deep in a validator.
    std::panic::set_hook(Box::new(|_| {}));
    match std::panic::catch_unwind(|| run(cli.cmd)) {
        Ok(Ok(out)) => {
            println!("{}", serde_json::to_string_pretty(&out.body).expect("serializable"));
            ExitCode::from(if out.passed { 0 } else { 1 })
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            let body = json!({"format": FORMAT, "error": e.to_string(), "exit": e.code()});
            println!("{}", serde_json::to_string_pretty(&body).expect("serializable"));
            ExitCode::from(e.code())
        }
        Err(_) => {
            eprintln!("error: malformed input");
            ExitCode::from(2)
        }
    }
}
