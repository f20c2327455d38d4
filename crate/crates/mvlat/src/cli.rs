//! Command-line entry point: lattice minima, complexes, diagrams,
//! geometric codes, candidate lists, stabilization sweeps, words and the
//! alphabet audit.
//!
//! Exit codes: 0 success, 2 domain error, 1 internal invariant failure,
//! 64 usage. Output goes to stdout unless --out is given; a relative
//! --out is resolved against the MVLAT_OUT directory when that is set.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use std::io::Write;
use std::path::PathBuf;

use crate::complex::{build_complex, lattice_complex, signature, skeleton_graphs, MVComplex};
use crate::diagram::{layout, render, validate_diagram, RenderFormat};
use crate::geocode::{check_conditions, decode_code, encode_triple, CombPart, GeometricCode};
use crate::minima::{
    fold_rank1, vrm_bruteforce, AxialSet, LatticeSpec, MinimalityMode, Point3,
};
use crate::numth::gcd;
use crate::stabilize::{detect_thresholds, grid_csv, sweep};
use crate::words::{alphabet_audit, word_of, LetterDict};
use crate::xilist::{vrm_fast, xi_list, XiKind};
use crate::{Error, Result};

#[derive(Parser)]
#[command(name = "mvlat", version, about = "Minkowski-Voronoi continued fractions in dimension 3")]
struct Cli {
    /// Worker threads for sweeps and audits (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Reserved; every computation is deterministic already.
    #[arg(long, global = true)]
    seedless: bool,

    /// Output file (stdout when absent); relative paths resolve against
    /// the MVLAT_OUT directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct LatticeArgs {
    /// First multiplier of the rank-1 lattice Γ(a,b,N).
    #[arg(long)]
    a: Option<u64>,
    /// Second multiplier.
    #[arg(long)]
    b: Option<u64>,
    /// Modulus.
    #[arg(long = "N")]
    n: Option<u64>,
    /// Axial-set JSON file instead of a lattice.
    #[arg(long, conflicts_with_all = ["a", "b", "n"])]
    set: Option<PathBuf>,
    /// Minimality predicate: open (lattice semantics) or literal.
    #[arg(long)]
    mode: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Voronoi relative minima of a lattice or an axial-set file.
    Vrm {
        #[command(flatten)]
        lattice: LatticeArgs,
        /// Cross-check the structural fast path against brute force.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Build the Minkowski-Voronoi complex.
    Complex {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Lay out the canonical diagram and render it.
    Diagram {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, default_value = "svg")]
        format: String,
    },
    /// Geometric code of a triple (a,b,N).
    Encode {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long = "N")]
        n: u64,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Triple (a,b,N) of a geometric code.
    Decode {
        #[arg(long)]
        alpha: u64,
        #[arg(long)]
        beta: u64,
        #[arg(long)]
        gamma: u64,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        u: u64,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Dump the structural candidate list Ξ with provenance.
    Xi {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long = "N")]
        n: u64,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Stabilization sweep over the (t,u) grid of one combinatorial part.
    Sweep {
        #[arg(long)]
        alpha: u64,
        #[arg(long)]
        beta: u64,
        #[arg(long)]
        gamma: u64,
        #[arg(long)]
        a: u64,
        #[arg(long, default_value_t = 6)]
        tmax: u64,
        #[arg(long, default_value_t = 6)]
        umax: u64,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Diagram word of a lattice.
    Word {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long = "N")]
        n: u64,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Letter-alphabet audit over the a = 2 corpus.
    Audit {
        #[arg(long, default_value_t = 11)]
        bmax: u64,
        #[arg(long, default_value_t = 1000)]
        nmax: u64,
        /// Persist the letter dictionary to this JSON file.
        #[arg(long)]
        dict: Option<PathBuf>,
        #[arg(long, default_value = "text")]
        format: String,
    },
}

/// Parse argv, run, and hand back the would-be stdout bytes. Used by the
/// fixture replay tests; `--out` is ignored here.
pub fn run_to_bytes<I, S>(args: I) -> Result<Vec<u8>>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::Domain(e.to_string()))?;
    execute(&cli)
}

/// Parse argv and run; returns the process exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return code;
        }
    };
    if let Some(jobs) = cli.jobs {
        // best effort: the pool may already exist in-process (tests)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match execute(&cli) {
        Ok(output) => {
            if write_output(cli.out.as_deref(), &output).is_err() {
                return 1;
            }
            0
        }
        Err(e) => {
            eprintln!("mvlat: {e}");
            e.exit_code()
        }
    }
}

fn write_output(out: Option<&std::path::Path>, bytes: &[u8]) -> Result<()> {
    match out {
        None => {
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
        Some(path) => {
            let path = match std::env::var_os("MVLAT_OUT") {
                Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
                _ => path.to_path_buf(),
            };
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            std::fs::write(path, bytes)?;
            Ok(())
        }
    }
}

enum Source {
    Lattice(LatticeSpec),
    Set(AxialSet, MinimalityMode),
}

fn resolve_source(args: &LatticeArgs) -> Result<Source> {
    if let Some(path) = &args.set {
        let set: AxialSet = serde_json::from_slice(&std::fs::read(path)?)?;
        let mode = match args.mode.as_deref() {
            None | Some("literal") => MinimalityMode::Literal,
            Some("open") => MinimalityMode::OpenInterior,
            Some(other) => return Err(Error::Domain(format!("unknown mode {other}"))),
        };
        return Ok(Source::Set(set, mode));
    }
    match (args.a, args.b, args.n) {
        (Some(a), Some(b), Some(n)) => {
            if let Some(m) = args.mode.as_deref() {
                if m != "open" {
                    return Err(Error::Domain(
                        "lattice pipelines use the open minimality mode".into(),
                    ));
                }
            }
            Ok(Source::Lattice(LatticeSpec::new(a, b, n)?))
        }
        _ => Err(Error::Domain("need either --set or all of --a --b --N".into())),
    }
}

fn complex_of(source: &Source) -> Result<MVComplex> {
    match source {
        Source::Lattice(spec) => lattice_complex(spec),
        Source::Set(set, mode) => {
            let ground = match mode {
                MinimalityMode::Literal => vrm_bruteforce(set),
                MinimalityMode::OpenInterior => set.points.clone(),
            };
            build_complex(set, &ground, *mode)
        }
    }
}

fn execute(cli: &Cli) -> Result<Vec<u8>> {
    match &cli.cmd {
        Cmd::Vrm { lattice, oracle, format } => {
            let source = resolve_source(lattice)?;
            let minima: Vec<Point3> = match &source {
                Source::Lattice(spec) => {
                    let fast_ok = spec.b >= 2 && spec.n % spec.b != 0;
                    let brute = || -> Result<Vec<Point3>> {
                        Ok(vrm_bruteforce(&fold_rank1(spec)?.0))
                    };
                    if fast_ok {
                        let fast = vrm_fast(spec)?;
                        if *oracle && fast != brute()? {
                            return Err(Error::Internal(
                                "fast minima disagree with brute force".into(),
                            ));
                        }
                        fast
                    } else {
                        brute()?
                    }
                }
                Source::Set(set, _) => vrm_bruteforce(set),
            };
            match format.as_str() {
                "text" => {
                    let mut s = String::new();
                    for p in &minima {
                        s.push_str(&format!("{} {} {}\n", p.x, p.y, p.z));
                    }
                    Ok(s.into_bytes())
                }
                "json" => Ok(serde_json::to_vec_pretty(&minima)?),
                other => Err(Error::UnknownFormat(other.into())),
            }
        }
        Cmd::Complex { lattice, format } => {
            let c = complex_of(&resolve_source(lattice)?)?;
            match format.as_str() {
                "json" => Ok(serde_json::to_vec_pretty(&c)?),
                "text" => {
                    let g = skeleton_graphs(&c);
                    let mut s = format!(
                        "faces: {}\nedges: {}\nvertices: {}\nrays: {}\nsignature: {}\n",
                        c.faces.len(),
                        c.edges.len(),
                        c.vertices.len(),
                        g.voronoi_rays.len(),
                        signature(&c)?.short_hash()
                    );
                    for v in &c.vertices {
                        s.push_str(&format!(
                            "vertex {:?} corner {}\n",
                            v.triple, v.corner
                        ));
                    }
                    Ok(s.into_bytes())
                }
                other => Err(Error::UnknownFormat(other.into())),
            }
        }
        Cmd::Diagram { lattice, format } => {
            let c = complex_of(&resolve_source(lattice)?)?;
            let d = layout(&c)?;
            let violations = validate_diagram(&c, &d);
            if !violations.is_empty() {
                for v in &violations {
                    eprintln!("violation: {v}");
                }
                return Err(Error::Internal(format!(
                    "diagram fails validation with {} violations",
                    violations.len()
                )));
            }
            render(&d, format.parse::<RenderFormat>()?)
        }
        Cmd::Encode { a, b, n, format } => {
            let code = encode_triple(*a, *b, *n)?;
            match format.as_str() {
                "text" => Ok(format!(
                    "alpha={} beta={} gamma={} a={} t={} u={}\n",
                    code.comb.alpha, code.comb.beta, code.comb.gamma, code.comb.a, code.t, code.u
                )
                .into_bytes()),
                "json" => Ok(serde_json::to_vec_pretty(&code)?),
                other => Err(Error::UnknownFormat(other.into())),
            }
        }
        Cmd::Decode { alpha, beta, gamma, a, t, u, format } => {
            let code = GeometricCode {
                comb: CombPart::new(*alpha, *beta, *gamma, *a),
                t: *t,
                u: *u,
            };
            let (da, db, dn) = decode_code(&code)?;
            let cc = check_conditions(&code);
            match format.as_str() {
                "text" => Ok(format!("a={da} b={db} N={dn}\n").into_bytes()),
                "json" => Ok(serde_json::to_vec_pretty(&serde_json::json!({
                    "a": da, "b": db, "N": dn,
                    "cond31": cc.cond31, "cond32": cc.cond32,
                }))?),
                other => Err(Error::UnknownFormat(other.into())),
            }
        }
        Cmd::Xi { a, b, n, format } => {
            let spec = LatticeSpec::new(*a, *b, *n)?;
            if !spec.coprime() {
                return Err(Error::Domain("xi: gcd(a,N) = gcd(b,N) = 1 required".into()));
            }
            let code = encode_triple(*a, *b, *n)?;
            let entries = xi_list(&spec, &code)?;
            match format.as_str() {
                "csv" => {
                    let mut s = String::from("idx,kind,k,eps,slot,raw_x,x,y,z,valid\n");
                    for (i, e) in entries.iter().enumerate() {
                        let (kind, k, eps, slot) = match e.kind {
                            XiKind::Type1 { k } => ("type1", k, 0, 0),
                            XiKind::Type2 { k, eps, slot } => ("type2", k, eps, slot as u64),
                            XiKind::Type3 { k } => ("type3", k, 0, 0),
                            XiKind::Axis { axis } => ("axis", axis as u64, 0, 0),
                        };
                        match e.point {
                            Some(p) => s.push_str(&format!(
                                "{i},{kind},{k},{eps},{slot},{},{},{},{},1\n",
                                e.raw_x, p.x, p.y, p.z
                            )),
                            None => s.push_str(&format!(
                                "{i},{kind},{k},{eps},{slot},{},,,,0\n",
                                e.raw_x
                            )),
                        }
                    }
                    Ok(s.into_bytes())
                }
                "json" => Ok(serde_json::to_vec_pretty(&entries)?),
                other => Err(Error::UnknownFormat(other.into())),
            }
        }
        Cmd::Sweep { alpha, beta, gamma, a, tmax, umax, format } => {
            let comb = CombPart::new(*alpha, *beta, *gamma, *a);
            let grid = sweep(&comb, *tmax, *umax)?;
            match format.as_str() {
                "csv" => Ok(grid_csv(&grid).into_bytes()),
                "json" => {
                    let report = detect_thresholds(&grid)?;
                    Ok(serde_json::to_vec_pretty(&serde_json::json!({
                        "report": report,
                        "grid": grid,
                    }))?)
                }
                other => Err(Error::UnknownFormat(other.into())),
            }
        }
        Cmd::Word { a, b, n, format } => {
            let spec = LatticeSpec::new(*a, *b, *n)?;
            let c = lattice_complex(&spec)?;
            let d = layout(&c)?;
            let mut dict = LetterDict::new();
            let word = word_of(&c, &d, &mut dict)?;
            match format.as_str() {
                "text" => {
                    let ids: Vec<String> = word.letters.iter().map(|l| l.to_string()).collect();
                    Ok(format!("{}\n", ids.join(" ")).into_bytes())
                }
                "json" => Ok(serde_json::to_vec_pretty(&serde_json::json!({
                    "letters": word.letters,
                    "classes": dict.classes,
                }))?),
                other => Err(Error::UnknownFormat(other.into())),
            }
        }
        Cmd::Audit { bmax, nmax, dict, format } => {
            let corpus = a2_corpus(*bmax, *nmax);
            let report = alphabet_audit(&corpus)?;
            if let Some(path) = dict {
                write_output(Some(path), &serde_json::to_vec_pretty(&report.dict)?)?;
            }
            match format.as_str() {
                "text" => Ok(format!(
                    "lattices: {}\ndistinct letter classes: {}\nhead classes: {:?}\nconjecture (<= 14): {}\n",
                    report.lattices,
                    report.distinct_classes,
                    report.head_classes,
                    if report.conjecture_consistent() { "consistent" } else { "violated" },
                )
                .into_bytes()),
                "json" => Ok(serde_json::to_vec_pretty(&report)?),
                other => Err(Error::UnknownFormat(other.into())),
            }
        }
    }
}

/// The audit corpus: all Γ(2,b,N) with 2 <= b <= bmax, b <= N/2,
/// N <= nmax, N odd and coprime to b (so b never divides N).
pub fn a2_corpus(bmax: u64, nmax: u64) -> Vec<LatticeSpec> {
    let mut corpus = Vec::new();
    for b in 2..=bmax {
        for n in (2 * b).max(3)..=nmax {
            if gcd(2, n) == 1 && gcd(b, n) == 1 {
                corpus.push(LatticeSpec { a: 2, b, n });
            }
        }
    }
    corpus
}
