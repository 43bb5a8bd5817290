//! Command-line front end: argument parsing, input loading and report emission.
//!
//! [`run`] is the whole program minus process setup, so tests can drive it in-process.

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use tropfan::chow::oracle::oracle_ring;
use tropfan::chow::{chow_ring, deligne_resolution_check, hodge_iso_check, keel_check};
use tropfan::fan::{barycentric_star_subdivision, is_balanced, is_unimodular, star_fan};
use tropfan::homology::{betti_table, is_tropical_homology_manifold, pd_battery};
use tropfan::io::{parse_fan, parse_function, parse_matroid, write_fan, FanFile};
use tropfan::kahler::{is_kahler, ConewiseLinearFunction};
use tropfan::linalg::{q, QMatrix, Q};
use tropfan::matroid::{bergman_fan, uniform_matroid, Structure};
use tropfan::modification::{modification_report, tropical_modification};
use tropfan::report::tuple;
use tropfan::{fixtures, Cone, Error, Fan, Report, Verdict};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "tropfan", version, about = "Exact tropical homology, Chow rings and Kähler checks for unimodular fans")]
struct Cli {
    /// Also write the report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Input {
    /// Fan file, or `-` for standard input.
    input: Option<String>,
    /// Use a built-in fixture instead of a file.
    #[arg(long, value_name = "NAME")]
    fixture: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StructureArg {
    Fine,
    Coarse,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a fan.
    Validate(Input),
    /// Check that every cone is unimodular.
    Unimodular(Input),
    /// Check the balancing condition.
    Balanced(Input),
    /// Print the star fan of a cone.
    Star {
        #[command(flatten)]
        input: Input,
        /// Ray indices of the cone, comma separated (empty for the zero cone).
        #[arg(long, value_name = "RAYS", allow_hyphen_values = true)]
        cone: String,
    },
    /// Print the barycentric star subdivision at a cone.
    Subdivide {
        #[command(flatten)]
        input: Input,
        /// Ray indices of the cone, comma separated.
        #[arg(long, value_name = "RAYS")]
        cone: String,
    },
    /// Tropical Hodge numbers of the compactification.
    Betti(Input),
    /// Poincaré-duality battery.
    Pd(Input),
    /// Tropical homology manifold check over all stars.
    Thm(Input),
    /// Chow ring dimensions and bases, cross-checked against the brute-force ring.
    Chow {
        #[command(flatten)]
        input: Input,
        /// Skip the brute-force cross-check above this many rays.
        #[arg(long, default_value_t = 12, value_name = "N")]
        max_rays_oracle: usize,
    },
    /// Compare Chow ring dimensions with the diagonal tropical cohomology.
    HodgeIso(Input),
    /// Keel decomposition of the subdivision at a cone.
    Keel {
        #[command(flatten)]
        input: Input,
        /// Ray indices of the cone, comma separated.
        #[arg(long, value_name = "RAYS")]
        cone: String,
    },
    /// Exactness of the tropical Deligne resolution.
    Deligne {
        #[command(flatten)]
        input: Input,
        /// Degree; all degrees when omitted.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Kähler package on every star, with a supplied or searched ample function.
    Kahler {
        #[command(flatten)]
        input: Input,
        /// File with one value per ray (a `function` line or bare numbers).
        #[arg(long, value_name = "PATH")]
        function: Option<PathBuf>,
    },
    /// Print the Bergman fan of a matroid file or of a uniform matroid.
    Bergman {
        /// Matroid file, or `-` for standard input.
        input: Option<String>,
        /// Use the uniform matroid of rank R on N elements.
        #[arg(long, num_args = 2, value_names = ["R", "N"])]
        uniform: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value = "fine")]
        structure: StructureArg,
        /// Shorthand for `--structure fine`.
        #[arg(long, conflicts_with_all = ["coarse"])]
        fine: bool,
        /// Shorthand for `--structure coarse`.
        #[arg(long)]
        coarse: bool,
    },
    /// Print the tropical modification along the function in the file or `--function`.
    Modify {
        #[command(flatten)]
        input: Input,
        /// File with one value per ray (a `function` line or bare numbers).
        #[arg(long, value_name = "PATH")]
        function: Option<PathBuf>,
    },
    /// List, print or write the built-in fixtures.
    Fixtures {
        /// Print this fixture as a fan file.
        name: Option<String>,
        /// Write every fixture to DIR/NAME.fan.
        #[arg(long, value_name = "DIR")]
        write: Option<PathBuf>,
    },
}

struct Loaded {
    file: FanFile,
    source: String,
    digest: String,
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn read_source(path: &str, stdin: &mut dyn Read) -> Result<(String, String), Error> {
    if path == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s).map_err(|e| Error::Invalid(format!("reading standard input: {e}")))?;
        Ok((s, "<stdin>".into()))
    } else {
        let s = fs::read_to_string(path).map_err(|e| Error::Invalid(format!("reading {path}: {e}")))?;
        Ok((s, path.to_string()))
    }
}

fn load(input: &Input, stdin: &mut dyn Read) -> Result<Loaded, Error> {
    let (text, source) = match (&input.input, &input.fixture) {
        (Some(_), Some(_)) => return Err(Error::Invalid("give either a file or --fixture, not both".into())),
        (None, None) => return Err(Error::Invalid("no input: give a fan file, `-` or --fixture NAME".into())),
        (None, Some(name)) => {
            let fan = fixtures::by_name(name).ok_or_else(|| {
                Error::Invalid(format!("unknown fixture `{name}` (known: {})", fixtures::NAMES.join(", ")))
            })?;
            let func: Option<Vec<Q>> = fixtures::function_for(name).map(|v| v.into_iter().map(q).collect());
            (write_fan(&fan, func.as_deref()), format!("fixture {name}"))
        }
        (Some(path), None) => read_source(path, stdin)?,
    };
    let file = parse_fan(&text)?;
    Ok(Loaded { file, source, digest: digest(text.as_bytes()) })
}

fn parse_cone(fan: &Fan, s: &str) -> Result<Cone, Error> {
    let rays: Vec<usize> = s
        .split(',')
        .map(str::trim)
        .filter(|w| !w.is_empty())
        .map(|w| w.parse().map_err(|_| Error::Invalid(format!("bad ray index `{w}` in --cone"))))
        .collect::<Result<_, _>>()?;
    let c = Cone::new(rays.clone());
    if c.dim() != rays.len() || !fan.contains(&c) {
        return Err(Error::NotACone(rays));
    }
    Ok(c)
}

fn load_function(path: &std::path::Path) -> Result<Vec<Q>, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Invalid(format!("reading {}: {e}", path.display())))?;
    parse_function(&text)
}

/// Output of one command: a report and, for fan-producing commands, a fan file.
struct Outcome {
    report: Report,
    fan_text: Option<String>,
    source: String,
    digest: String,
}

fn header(command: &str, o: &Outcome) -> String {
    format!("command: {command}\ninput: {}\ninput sha256: {}\n", o.source, o.digest)
}

fn exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::Pass | Verdict::Info => EXIT_PASS,
        Verdict::Fail | Verdict::NotCertified => EXIT_FAIL,
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate(_) => "validate",
        Command::Unimodular(_) => "unimodular",
        Command::Balanced(_) => "balanced",
        Command::Star { .. } => "star",
        Command::Subdivide { .. } => "subdivide",
        Command::Betti(_) => "betti",
        Command::Pd(_) => "pd",
        Command::Thm(_) => "thm",
        Command::Chow { .. } => "chow",
        Command::HodgeIso(_) => "hodge-iso",
        Command::Keel { .. } => "keel",
        Command::Deligne { .. } => "deligne",
        Command::Kahler { .. } => "kahler",
        Command::Bergman { .. } => "bergman",
        Command::Modify { .. } => "modify",
        Command::Fixtures { .. } => "fixtures",
    }
}

fn checked(l: Loaded, report: Report) -> Outcome {
    Outcome { report, fan_text: None, source: l.source, digest: l.digest }
}

fn validate_report(fan: &Fan) -> Report {
    Report::new("valid fan", Verdict::Pass)
        .fact("rank", fan.rank())
        .fact("rays", fan.num_rays())
        .fact("dimension", fan.dim())
        .fact("pure", fan.is_pure())
        .fact("f-vector", tuple(&fan.f_vector()))
        .fact("weights", if fan.explicit_weights().is_some() { "explicit" } else { "default" })
}

fn chow_report(fan: &Fan, max_rays_oracle: usize) -> Result<Report, Error> {
    let ring = chow_ring(fan)?;
    let mut r = Report::new("Chow ring", Verdict::Info).fact("dimensions", tuple(&ring.dims()));
    for k in 0..=ring.top_degree() {
        let cones: Vec<String> = ring.basis_cones(k).iter().map(ToString::to_string).collect();
        r = r.fact(format!("basis A^{k}"), cones.join(" "));
    }
    if ring.is_balanced() {
        let top = ring.top_degree();
        let degs: Vec<Q> = (0..ring.dim(top)).map(|i| ring.degree(&ring.unit(top, i))).collect::<Result<_, _>>()?;
        r = r.fact("degrees of top basis", tuple(&degs));
    }
    if fan.num_rays() <= max_rays_oracle {
        let o = oracle_ring(fan)?;
        let mut agree = o.dims() == ring.dims();
        if agree {
            for k in 0..=ring.top_degree() {
                let cols: Vec<Vec<Q>> = ring.basis_cones(k).iter().map(|c| o.normal_form_of_cone(c)).collect();
                let m = QMatrix::from_rows(cols.len(), (0..o.dim(k)).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect());
                agree &= m.rank() == ring.dim(k);
            }
        }
        r.verdict = if agree { Verdict::Pass } else { Verdict::Fail };
        r = r.fact("oracle dimensions", tuple(&o.dims()));
        if !agree {
            r = r.witness("structured basis disagrees with the brute-force quotient ring");
        }
    } else {
        r = r.note(format!("brute-force cross-check skipped: {} rays exceed {max_rays_oracle}", fan.num_rays()));
    }
    Ok(r)
}

fn betti_report(fan: &Fan) -> Result<Report, Error> {
    let t = betti_table(fan)?;
    let mut r = Report::new("tropical cohomology", Verdict::Info)
        .fact("dimension", t.d)
        .fact("diagonal", tuple(&t.diagonal()))
        .fact("betti numbers", tuple(&t.betti_numbers()));
    for p in 0..=t.d {
        r = r.fact(format!("h^{{{p},q}}"), tuple(&t.cohomology[p]));
    }
    for p in 0..=t.d {
        r = r.fact(format!("h_{{{p},q}}"), tuple(&t.homology[p]));
    }
    Ok(r)
}

fn execute(cmd: &Command, stdin: &mut dyn Read) -> Result<Outcome, Error> {
    Ok(match cmd {
        Command::Validate(i) => {
            let l = load(i, stdin)?;
            let r = validate_report(&l.file.fan);
            checked(l, r)
        }
        Command::Unimodular(i) => {
            let l = load(i, stdin)?;
            let r = is_unimodular(&l.file.fan)?;
            checked(l, r)
        }
        Command::Balanced(i) => {
            let l = load(i, stdin)?;
            let r = is_balanced(&l.file.fan)?;
            checked(l, r)
        }
        Command::Star { input, cone } => {
            let l = load(input, stdin)?;
            let c = parse_cone(&l.file.fan, cone)?;
            let s = star_fan(&l.file.fan, &c)?;
            let parents: Vec<usize> = s.parent_ray.clone();
            let r = Report::new("star", Verdict::Info)
                .fact("cone", &c)
                .fact("rank", s.fan.rank())
                .fact("f-vector", tuple(&s.fan.f_vector()))
                .fact("parent rays", tuple(&parents));
            let text = write_fan(&s.fan, None);
            Outcome { report: r, fan_text: Some(text), source: l.source, digest: l.digest }
        }
        Command::Subdivide { input, cone } => {
            let l = load(input, stdin)?;
            let c = parse_cone(&l.file.fan, cone)?;
            let s = barycentric_star_subdivision(&l.file.fan, &c)?;
            let r = Report::new("subdivision", Verdict::Info)
                .fact("cone", &c)
                .fact("new ray", tuple(s.fan.ray(s.new_ray)))
                .fact("f-vector", tuple(&s.fan.f_vector()));
            let text = write_fan(&s.fan, None);
            Outcome { report: r, fan_text: Some(text), source: l.source, digest: l.digest }
        }
        Command::Betti(i) => {
            let l = load(i, stdin)?;
            let r = betti_report(&l.file.fan)?;
            checked(l, r)
        }
        Command::Pd(i) => {
            let l = load(i, stdin)?;
            let r = pd_battery(&l.file.fan)?;
            checked(l, r)
        }
        Command::Thm(i) => {
            let l = load(i, stdin)?;
            let r = is_tropical_homology_manifold(&l.file.fan)?;
            checked(l, r)
        }
        Command::Chow { input, max_rays_oracle } => {
            let l = load(input, stdin)?;
            let r = chow_report(&l.file.fan, *max_rays_oracle)?;
            checked(l, r)
        }
        Command::HodgeIso(i) => {
            let l = load(i, stdin)?;
            let r = hodge_iso_check(&l.file.fan)?;
            checked(l, r)
        }
        Command::Keel { input, cone } => {
            let l = load(input, stdin)?;
            let c = parse_cone(&l.file.fan, cone)?;
            let r = keel_check(&l.file.fan, &c)?;
            checked(l, r)
        }
        Command::Deligne { input, k } => {
            let l = load(input, stdin)?;
            let fan = &l.file.fan;
            let r = match k {
                Some(k) => deligne_resolution_check(fan, *k)?,
                None => {
                    let children: Vec<Report> =
                        (0..=fan.dim()).map(|k| deligne_resolution_check(fan, k)).collect::<Result<_, _>>()?;
                    let ok = children.iter().all(Report::passed);
                    children.into_iter().fold(Report::from_bool("Deligne resolutions", ok), Report::child)
                }
            };
            checked(l, r)
        }
        Command::Kahler { input, function } => {
            let l = load(input, stdin)?;
            let f = match function {
                Some(p) => Some(ConewiseLinearFunction::new(&l.file.fan, load_function(p)?)?),
                None => None,
            };
            let r = is_kahler(&l.file.fan, f.as_ref())?;
            checked(l, r)
        }
        Command::Bergman { input, uniform, structure, fine, coarse } => {
            let structure = match (fine, coarse, structure) {
                (true, _, _) => Structure::Fine,
                (_, true, _) => Structure::Coarse,
                (_, _, StructureArg::Fine) => Structure::Fine,
                (_, _, StructureArg::Coarse) => Structure::Coarse,
            };
            let (m, source, dg) = match (uniform, input) {
                (Some(rn), None) => {
                    let m = uniform_matroid(rn[0], rn[1])?;
                    (m, format!("uniform matroid U({},{})", rn[0], rn[1]), digest(format!("uniform {} {}", rn[0], rn[1]).as_bytes()))
                }
                (None, Some(path)) => {
                    let (text, source) = read_source(path, stdin)?;
                    (parse_matroid(&text)?, source, digest(text.as_bytes()))
                }
                _ => return Err(Error::Invalid("give either a matroid file or --uniform R N".into())),
            };
            let fan = bergman_fan(&m, structure)?;
            let r = Report::new("Bergman fan", Verdict::Info)
                .fact("structure", format!("{structure:?}").to_lowercase())
                .fact("rank", fan.rank())
                .fact("f-vector", tuple(&fan.f_vector()));
            Outcome { report: r, fan_text: Some(write_fan(&fan, None)), source, digest: dg }
        }
        Command::Modify { input, function } => {
            let l = load(input, stdin)?;
            let values = match (function, &l.file.function) {
                (Some(p), _) => load_function(p)?,
                (None, Some(v)) => v.clone(),
                (None, None) => return Err(Error::Invalid("no function: add a `function` line or pass --function".into())),
            };
            let f = ConewiseLinearFunction::new(&l.file.fan, values)?;
            let res = tropical_modification(&l.file.fan, &f)?;
            let r = modification_report(&l.file.fan, &res)?;
            Outcome { report: r, fan_text: Some(write_fan(&res.graph_fan, None)), source: l.source, digest: l.digest }
        }
        Command::Fixtures { name, write } => {
            let mut r = Report::new("fixtures", Verdict::Info).fact("names", fixtures::NAMES.join(" "));
            let mut fan_text = None;
            if let Some(name) = name {
                let fan = fixtures::by_name(name).ok_or_else(|| Error::Invalid(format!("unknown fixture `{name}`")))?;
                let func: Option<Vec<Q>> = fixtures::function_for(name).map(|v| v.into_iter().map(q).collect());
                fan_text = Some(write_fan(&fan, func.as_deref()));
            }
            if let Some(dir) = write {
                fs::create_dir_all(dir).map_err(|e| Error::Invalid(format!("creating {}: {e}", dir.display())))?;
                for (n, fan) in fixtures::all() {
                    let func: Option<Vec<Q>> = fixtures::function_for(n).map(|v| v.into_iter().map(q).collect());
                    let path = dir.join(format!("{n}.fan"));
                    fs::write(&path, write_fan(&fan, func.as_deref()))
                        .map_err(|e| Error::Invalid(format!("writing {}: {e}", path.display())))?;
                }
                r = r.fact("written to", dir.display());
            }
            Outcome { report: r, fan_text, source: "built-in".into(), digest: digest(fixtures::NAMES.join(",").as_bytes()) }
        }
    })
}

fn uses_stdin(c: &Command) -> bool {
    let input = match c {
        Command::Validate(i) | Command::Unimodular(i) | Command::Balanced(i) | Command::Betti(i) | Command::Pd(i) => i,
        Command::Thm(i) | Command::HodgeIso(i) => i,
        Command::Star { input, .. }
        | Command::Subdivide { input, .. }
        | Command::Chow { input, .. }
        | Command::Keel { input, .. }
        | Command::Deligne { input, .. }
        | Command::Kahler { input, .. }
        | Command::Modify { input, .. } => input,
        Command::Bergman { input, .. } => return input.as_deref() == Some("-"),
        Command::Fixtures { .. } => return false,
    };
    input.input.as_deref() == Some("-")
}

/// Runs the program on `args` (including the program name). Check reports go to
/// `stdout`; commands that produce a fan print the fan there and the report on `stderr`.
pub fn run(args: &[String], stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let out: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(out, "{}", e.render());
            return code;
        }
    };
    let threads = std::env::var("TROPFAN_THREADS").ok().and_then(|s| s.parse::<usize>().ok());
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: thread pool: {e}");
            return EXIT_INPUT;
        }
    };
    let name = command_name(&cli.command);
    // read standard input up front so the computation can run on the pool
    let mut buffered = Vec::new();
    if uses_stdin(&cli.command) {
        if let Err(e) = stdin.read_to_end(&mut buffered) {
            let _ = writeln!(stderr, "error: reading standard input: {e}");
            return EXIT_INPUT;
        }
    }
    let outcome = match pool.install(|| execute(&cli.command, &mut buffered.as_slice())) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let text = format!("{}{}", header(name, &outcome), outcome.report.render());
    if let Some(path) = &cli.report {
        if let Err(e) = fs::write(path, &text) {
            let _ = writeln!(stderr, "error: writing {}: {e}", path.display());
            return EXIT_INPUT;
        }
    }
    match &outcome.fan_text {
        Some(fan) => {
            let _ = write!(stdout, "{fan}");
            if cli.report.is_none() {
                let _ = write!(stderr, "{text}");
            }
        }
        None => {
            let _ = write!(stdout, "{text}");
        }
    }
    exit_code(outcome.report.verdict)
}
