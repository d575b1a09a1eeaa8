//! The `xc` command-line front end.

mod selftest;

pub use selftest::{run_selftest, CriterionResult, SelftestOptions};

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::{builtin_uqsl2, AnyAlgebra, MatrixXCAlgebra};
use crate::gauss::XCGaussDiagram;
use crate::invariant::{iota_realize, long_knot_scalar, Evaluator};
use crate::moves::{apply, builtin_pattern_text, find_insertion_sites, find_sites, orbit, MoveKind, MoveSite};
use crate::parse::ParseError;
use crate::polyak::{framing_formula, pairing, parse_formula};
use crate::ring::Scalar;
use crate::tangle::{from_gauss, to_gauss, XCTangleGraph};
use crate::virtualt::{bracket_oracle, forget, lift, SignedGaussCode};

pub const DEFAULT_SEED: u64 = 20_240_611;

#[derive(Parser, Debug)]
#[command(name = "xc", version, about = "XC-Gauss diagrams, XC-tangles and their universal invariant")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Seed for randomized commands.
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    JsonLines,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check that a diagram file is a valid XC-Gauss diagram.
    Validate { diagram: PathBuf },
    /// Print the chord-renumbering-invariant key of a diagram.
    Canon { diagram: PathBuf },
    /// Compose two diagrams: `second` is stacked on top of `first`.
    Compose { first: PathBuf, second: PathBuf },
    /// Juxtapose two diagrams side by side.
    Tensor { left: PathBuf, right: PathBuf },
    /// Convert a diagram to its tangle graph.
    ToTangle { diagram: PathBuf },
    /// Read off the diagram of a tangle graph.
    ToGauss { tangle: PathBuf },
    /// Lift a signed Gauss code to an XC-Gauss diagram.
    Lift { code: PathBuf },
    /// Drop all diamonds of a diagram.
    Forget { diagram: PathBuf },
    /// Evaluate the universal invariant.
    Zeval {
        /// Algebra file, or `builtin`.
        #[arg(long, default_value = "builtin")]
        algebra: String,
        #[arg(long)]
        diagram: PathBuf,
        /// Print the permutation applied to the value as one matrix.
        #[arg(long)]
        iota: bool,
        /// Print the scalar of a one-strand value.
        #[arg(long, conflicts_with = "iota")]
        scalar: bool,
    },
    /// Check the XC-algebra axioms.
    Axioms {
        #[arg(long, default_value = "builtin")]
        algebra: String,
    },
    /// Pair a Gauss-diagram formula with a one-strand diagram.
    Pair {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        diagram: PathBuf,
    },
    /// Evaluate the framing formula on a one-strand diagram.
    Framing { diagram: PathBuf },
    /// Move engine.
    #[command(subcommand)]
    Moves(MovesCmd),
    /// Normalized Kauffman bracket of a one-strand code, in q with A^2 = q^-1.
    Bracket { code: PathBuf },
    /// Run the acceptance checks and print a pass/fail table.
    Selftest {
        /// Random samples per randomized criterion.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

#[derive(Subcommand, Debug)]
enum MovesCmd {
    /// Print the pattern table.
    Patterns,
    /// List move sites in a diagram.
    List {
        diagram: PathBuf,
        #[arg(long)]
        kind: Option<MoveKindArg>,
        /// List insertion sites instead.
        #[arg(long)]
        insertions: bool,
    },
    /// Apply the site with the given index from `moves list` (same options).
    Apply {
        diagram: PathBuf,
        #[arg(long)]
        kind: Option<MoveKindArg>,
        #[arg(long)]
        insertions: bool,
        #[arg(long)]
        site: usize,
    },
    /// Bounded breadth-first closure under all moves.
    Orbit {
        diagram: PathBuf,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long, default_value_t = 8)]
        max_size: usize,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MoveKindArg {
    G0,
    G0r,
    G1f,
    G2,
    G2p,
    G3,
}

impl From<MoveKindArg> for MoveKind {
    fn from(k: MoveKindArg) -> MoveKind {
        match k {
            MoveKindArg::G0 => MoveKind::G0,
            MoveKindArg::G0r => MoveKind::G0r,
            MoveKindArg::G1f => MoveKind::G1f,
            MoveKindArg::G2 => MoveKind::G2,
            MoveKindArg::G2p => MoveKind::G2p,
            MoveKindArg::G3 => MoveKind::G3,
        }
    }
}

enum Failure {
    /// exit 2
    Usage(String),
    /// exit 1
    Domain(String),
}

impl Failure {
    fn parse(path: &Path, e: ParseError) -> Failure {
        Failure::Usage(format!("{}:{e}", path.display()))
    }
}

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

struct Out {
    format: Format,
    buf: Vec<u8>,
}

impl Out {
    fn emit(&mut self, text: &str, obj: Value) {
        match self.format {
            Format::Text => {
                self.buf.extend_from_slice(text.as_bytes());
                if !text.ends_with('\n') {
                    self.buf.push(b'\n');
                }
            }
            Format::JsonLines => {
                self.buf.extend_from_slice(obj.to_string().as_bytes());
                self.buf.push(b'\n');
            }
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(rendered.as_bytes());
            } else {
                let _ = stderr.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    let mut out = Out { format: cli.format, buf: Vec::new() };
    let result = dispatch(&cli, &mut out);
    let _ = stdout.write_all(&out.buf);
    match result {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            2
        }
        Err(Failure::Domain(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            1
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_diagram(path: &Path) -> Result<XCGaussDiagram, Failure> {
    let d = XCGaussDiagram::parse(&read(path)?).map_err(|e| Failure::parse(path, e))?;
    d.validate().map_err(domain)?;
    Ok(d)
}

fn load_code(path: &Path) -> Result<SignedGaussCode, Failure> {
    let g = SignedGaussCode::parse(&read(path)?).map_err(|e| Failure::parse(path, e))?;
    g.validate().map_err(domain)?;
    Ok(g)
}

fn load_algebra(spec: &str) -> Result<AnyAlgebra, Failure> {
    if spec == "builtin" {
        return Ok(AnyAlgebra::Laurent(builtin_uqsl2()));
    }
    let path = Path::new(spec);
    AnyAlgebra::parse(&read(path)?).map_err(|e| Failure::parse(path, e))
}

fn diagram_json(d: &XCGaussDiagram) -> Value {
    json!({ "diagram": d.to_string(), "key": d.canonical_key().0 })
}

fn dispatch(cli: &Cli, out: &mut Out) -> Result<i32, Failure> {
    match &cli.cmd {
        Cmd::Validate { diagram } => {
            let d = XCGaussDiagram::parse(&read(diagram)?).map_err(|e| Failure::parse(diagram, e))?;
            match d.validate() {
                Ok(()) => {
                    out.emit("ok", json!({ "valid": true }));
                    Ok(0)
                }
                Err(e) => {
                    out.emit(&format!("invalid: {e}"), json!({ "valid": false, "error": e.to_string() }));
                    Ok(1)
                }
            }
        }
        Cmd::Canon { diagram } => {
            let d = load_diagram(diagram)?;
            let k = d.canonical_key().0;
            out.emit(&k, json!({ "key": k }));
            Ok(0)
        }
        Cmd::Compose { first, second } => {
            let (d1, d2) = (load_diagram(first)?, load_diagram(second)?);
            let d = XCGaussDiagram::compose(&d2, &d1).map_err(domain)?;
            out.emit(&d.to_string(), diagram_json(&d));
            Ok(0)
        }
        Cmd::Tensor { left, right } => {
            let d = XCGaussDiagram::tensor(&load_diagram(left)?, &load_diagram(right)?);
            out.emit(&d.to_string(), diagram_json(&d));
            Ok(0)
        }
        Cmd::ToTangle { diagram } => {
            let t = from_gauss(&load_diagram(diagram)?).map_err(domain)?;
            out.emit(&t.to_string(), json!({ "tangle": t.to_string() }));
            Ok(0)
        }
        Cmd::ToGauss { tangle } => {
            let t = XCTangleGraph::parse(&read(tangle)?).map_err(|e| Failure::parse(tangle, e))?;
            let d = to_gauss(&t).map_err(domain)?;
            out.emit(&d.to_string(), diagram_json(&d));
            Ok(0)
        }
        Cmd::Lift { code } => {
            let d = lift(&load_code(code)?);
            out.emit(&d.to_string(), diagram_json(&d));
            Ok(0)
        }
        Cmd::Forget { diagram } => {
            let g = forget(&load_diagram(diagram)?);
            out.emit(&g.to_string(), json!({ "code": g.to_string() }));
            Ok(0)
        }
        Cmd::Zeval { algebra, diagram, iota, scalar } => {
            let d = load_diagram(diagram)?;
            match load_algebra(algebra)? {
                AnyAlgebra::Laurent(a) => zeval_cmd(a, &d, *iota, *scalar, out),
                AnyAlgebra::Rational(a) => zeval_cmd(a, &d, *iota, *scalar, out),
            }
        }
        Cmd::Axioms { algebra } => {
            let rep = load_algebra(algebra)?.check_axioms();
            match out.format {
                Format::Text => out.emit(&rep.to_string(), Value::Null),
                Format::JsonLines => {
                    for r in &rep.results {
                        out.emit("", json!({ "axiom": r.name, "pass": r.pass, "detail": r.detail }));
                    }
                }
            }
            Ok(if rep.all_pass() { 0 } else { 1 })
        }
        Cmd::Pair { formula, diagram } => {
            let g = parse_formula(&read(formula)?).map_err(|e| Failure::parse(formula, e))?;
            let v = pairing(&g, &load_diagram(diagram)?).map_err(domain)?;
            out.emit(&v.to_string(), json!({ "value": v.to_string() }));
            Ok(0)
        }
        Cmd::Framing { diagram } => {
            let v = framing_formula(&load_diagram(diagram)?).map_err(domain)?;
            out.emit(&v.to_string(), json!({ "framing": v.to_string() }));
            Ok(0)
        }
        Cmd::Bracket { code } => {
            let v = bracket_oracle(&load_code(code)?).map_err(domain)?;
            out.emit(&v.to_string(), json!({ "bracket": v.to_string() }));
            Ok(0)
        }
        Cmd::Moves(m) => moves_cmd(m, out),
        Cmd::Selftest { samples } => {
            let opts = SelftestOptions { samples: *samples, seed: cli.seed };
            let results = run_selftest(&opts);
            let mut all = true;
            for r in &results {
                all &= r.pass;
                let line =
                    format!("{:>2} {:<4} {:<28} {}", r.id, if r.pass { "PASS" } else { "FAIL" }, r.name, r.detail);
                out.emit(
                    line.trim_end(),
                    json!({ "criterion": r.id, "name": r.name, "pass": r.pass, "detail": r.detail }),
                );
            }
            Ok(if all { 0 } else { 1 })
        }
    }
}

fn zeval_cmd<S: Scalar>(
    a: MatrixXCAlgebra<S>,
    d: &XCGaussDiagram,
    iota: bool,
    scalar: bool,
    out: &mut Out,
) -> Result<i32, Failure> {
    let ev = Evaluator::new(a).map_err(domain)?;
    let z = ev.zeval(d).map_err(domain)?;
    if scalar {
        let s = long_knot_scalar(&z).map_err(domain)?;
        out.emit(&s.to_string(), json!({ "scalar": s.to_string() }));
        return Ok(0);
    }
    let sigma: Vec<String> = z.sigma.iter().map(|s| (s + 1).to_string()).collect();
    let m = if iota { iota_realize(&z) } else { z.value.clone() };
    let rows: Vec<Vec<String>> =
        (0..m.rows()).map(|r| (0..m.cols()).map(|c| m.get(r, c).to_string()).collect()).collect();
    let text =
        if iota { format!("iota:\n{m}") } else { format!("strands: {}\nsigma: {}\nvalue:\n{m}", z.n, sigma.join(" ")) };
    out.emit(text.trim_end(), json!({ "strands": z.n, "sigma": sigma, "matrix": rows, "iota": iota }));
    Ok(0)
}

fn select_sites(d: &XCGaussDiagram, kind: Option<MoveKindArg>, insertions: bool) -> Vec<MoveSite> {
    let kinds: Vec<MoveKind> = match kind {
        Some(k) => vec![k.into()],
        None => MoveKind::ALL.to_vec(),
    };
    kinds.into_iter().flat_map(|k| if insertions { find_insertion_sites(d, k) } else { find_sites(d, k) }).collect()
}

fn moves_cmd(m: &MovesCmd, out: &mut Out) -> Result<i32, Failure> {
    match m {
        MovesCmd::Patterns => {
            out.emit(builtin_pattern_text(), json!({ "patterns": builtin_pattern_text() }));
            Ok(0)
        }
        MovesCmd::List { diagram, kind, insertions } => {
            let d = load_diagram(diagram)?;
            let sites = select_sites(&d, *kind, *insertions);
            if sites.is_empty() && out.format == Format::Text {
                out.emit("no sites", Value::Null);
            }
            for (i, s) in sites.iter().enumerate() {
                out.emit(&format!("{i}: {s}"), json!({ "index": i, "kind": s.kind().name(), "site": s.to_string() }));
            }
            Ok(0)
        }
        MovesCmd::Apply { diagram, kind, insertions, site } => {
            let d = load_diagram(diagram)?;
            let sites = select_sites(&d, *kind, *insertions);
            let s = sites
                .get(*site)
                .ok_or_else(|| Failure::Domain(format!("site {site} out of range ({} sites)", sites.len())))?;
            let e = apply(&d, s).map_err(domain)?;
            out.emit(&e.to_string(), diagram_json(&e));
            Ok(0)
        }
        MovesCmd::Orbit { diagram, depth, max_size } => {
            let d = load_diagram(diagram)?;
            let o = orbit(&d, *depth, *max_size);
            for k in o.members.keys() {
                out.emit(&k.0, json!({ "key": k.0 }));
            }
            let summary = format!("members: {}\ntruncated: {}", o.members.len(), o.truncated);
            out.emit(&summary, json!({ "members": o.members.len(), "truncated": o.truncated }));
            Ok(0)
        }
    }
}

/// Seeded generator shared by randomized commands.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
