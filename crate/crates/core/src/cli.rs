//! Command-line front end: JSON on stdout, SVG files on request.
//!
//! Exit codes: 0 on success, 1 on a domain error (reported as JSON on
//! stderr), 2 on a usage error.

use std::ffi::OsString;
use std::fmt::Debug;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::atf::{check_dia_invariance, delta_m, delta_m_steps, mutate_diagram};
use crate::germ::{
    germ_equivalent, germ_invariants, germ_product_torus, germ_theta_from_normals, germ_theta_product_from_normals,
    germ_toric_fibre, germ_upsilon, known_discrepancy, markov_normals, GermSource, ThetaMode,
};
use crate::json::{
    diagram_from_json, diagram_to_json, equivalence_to_json, germ_from_json, germ_to_json, invariants_to_json,
    markov_tree_to_json, mutation_to_json, parse_value, polytope_from_json, rational_to_json, to_line,
};
use crate::locality::{epsilon_threshold, has_property_cs, theorem_d_condition, ChartSpec, Family};
use crate::markov::{markov_tree, path_to_triple, MarkovTriple};
use crate::rational::{parse, ExtRational, Rational};
use crate::reduction::{ProductTorusSpec, UpsilonParams};
use crate::svg::{render_svg, RenderOptions};

#[derive(Parser, Debug)]
#[command(name = "atfgerm", version, about = "Exact ATF diagrams, Markov triangles and displacement-energy germs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Markov triples
    #[command(subcommand)]
    Markov(MarkovCmd),
    /// Base diagrams and mutations
    #[command(subcommand)]
    Diagram(DiagramCmd),
    /// Displacement-energy germs
    #[command(subcommand)]
    Germ(GermCmd),
    /// Chart smallness predicates
    #[command(subcommand)]
    Check(CheckCmd),
    /// Exact verification suites
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand, Debug)]
enum MarkovCmd {
    /// Breadth-first tree of sorted triples up to a maximal entry
    Tree {
        #[arg(long)]
        max_entry: u64,
    },
}

#[derive(Subcommand, Debug)]
enum DiagramCmd {
    /// Markov triangle reached from the CP² diagram
    DeltaM {
        #[arg(long, value_parser = parse_triple)]
        triple: Triple,
        /// Tree slots to follow; must lead to the given triple
        #[arg(long, value_parser = parse_slots)]
        path: Option<Slots>,
    },
    /// Mutate a diagram at one node
    Mutate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        node: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render a diagram as SVG
    Render {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        chambers: bool,
        #[arg(long)]
        labels: bool,
        #[arg(long, default_value_t = 400)]
        width: u32,
        #[arg(long, default_value_t = 400)]
        height: u32,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    Literal,
    Cone,
}

#[derive(Subcommand, Debug)]
enum GermCmd {
    /// Germ of Υ_k(a1, a2)
    Upsilon {
        #[arg(short = 'k', long = "k")]
        k: i64,
        #[arg(long, value_parser = parse_rational)]
        a1: Rational,
        #[arg(long, value_parser = parse_rational)]
        a2: Rational,
    },
    /// Germ of Θ_m(a), optionally times a product torus
    Theta {
        #[arg(long, value_parser = parse_triple)]
        triple: Triple,
        #[arg(long, value_parser = parse_rational)]
        area: Rational,
        #[arg(long, value_parser = parse_rationals)]
        tail: Option<Rationals>,
        #[arg(long, value_enum, default_value = "literal")]
        mode: ModeArg,
    },
    /// Germ of a product torus
    Product {
        #[arg(long, value_parser = parse_rationals)]
        a: Rationals,
    },
    /// Germ of a toric fibre; accepts a polytope or a diagram file
    Toric {
        #[arg(long)]
        polytope: PathBuf,
        #[arg(long, value_parser = parse_rationals)]
        point: Rationals,
    },
    /// Decide unimodular equivalence of two germs
    Compare {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Unimodular invariants of a germ
    Invariants {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FamilyArg {
    Upsilon,
    Theta,
}

#[derive(Subcommand, Debug)]
enum CheckCmd {
    /// Smallness of a product torus in a chart
    Cs {
        #[arg(long, value_parser = parse_rationals)]
        torus: Rationals,
        #[arg(long, value_parser = parse_rational)]
        radius: Rational,
        #[arg(long, value_parser = parse_ext)]
        lambda_s: ExtRational,
    },
    /// Size bound for the exotic tori placed in a chart
    Epsilon {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, value_parser = parse_rational)]
        radius: Rational,
        #[arg(long, value_parser = parse_ext)]
        lambda_s: ExtRational,
    },
    /// Conditions for Θ_m(a) × T(tail) in a chart
    TheoremD {
        #[arg(long, value_parser = parse_rational)]
        area: Rational,
        #[arg(long, value_parser = parse_rationals)]
        tail: Option<Rationals>,
        #[arg(long, value_parser = parse_rational)]
        radius: Rational,
        #[arg(long, value_parser = parse_ext)]
        lambda_s: ExtRational,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// Integral-affine distance is preserved along every mutation to a triple
    DiaInvariance {
        #[arg(long, value_parser = parse_triple)]
        triple: Triple,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Debug)]
struct Triple([u64; 3]);

#[derive(Clone, Debug)]
struct Slots(Vec<usize>);

#[derive(Clone, Debug)]
struct Rationals(Vec<Rational>);

fn parse_rational(s: &str) -> Result<Rational, String> {
    parse(s).map_err(|e| e.to_string())
}

fn parse_rationals(s: &str) -> Result<Rationals, String> {
    s.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>().map(Rationals)
}

fn parse_ext(s: &str) -> Result<ExtRational, String> {
    s.parse::<ExtRational>().map_err(|e| e.to_string())
}

fn parse_triple(s: &str) -> Result<Triple, String> {
    let xs = s
        .split(',')
        .map(|x| x.trim().parse::<u64>().map_err(|_| format!("{x:?} is not a positive integer")))
        .collect::<Result<Vec<_>, _>>()?;
    let t: [u64; 3] = xs.try_into().map_err(|_| "expected three comma-separated integers".to_string())?;
    Ok(Triple(t))
}

fn parse_slots(s: &str) -> Result<Slots, String> {
    if s.trim().is_empty() {
        return Ok(Slots(Vec::new()));
    }
    s.split(',')
        .map(|x| match x.trim().parse::<usize>() {
            Ok(v @ 1..=3) => Ok(v),
            _ => Err(format!("{x:?} is not a slot 1, 2 or 3")),
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Slots)
}

/// A domain error: the module it arose in, the error variant, and its text.
#[derive(Debug)]
struct CliError {
    module: String,
    error: String,
    message: String,
}

const WRAPPERS: [(&str, &str); 11] = [
    ("Lattice", "lattice"),
    ("Polytope", "polytope"),
    ("Atf", "atf"),
    ("Markov", "markov"),
    ("Reduction", "reduction"),
    ("Germ", "germ"),
    ("Json", "json"),
    ("Rational", "rational"),
    ("Locality", "locality"),
    ("Svg", "svg"),
    ("Io", "cli"),
];

impl CliError {
    /// Peels transparent wrapper variants so the innermost module and
    /// variant name are reported.
    fn from_error<E: std::error::Error + Debug>(module: &str, e: &E) -> Self {
        let mut module = module.to_string();
        let debug = format!("{e:?}");
        let mut rest = debug.as_str();
        loop {
            let end = rest.find(|c: char| !(c.is_alphanumeric() || c == '_')).unwrap_or(rest.len());
            let ident = &rest[..end];
            let wrapped = WRAPPERS.iter().find(|(w, _)| *w == ident);
            match wrapped {
                Some((_, m)) if rest[end..].starts_with('(') => {
                    module = m.to_string();
                    rest = &rest[end + 1..rest.len() - 1];
                }
                _ => {
                    return CliError { module, error: ident.to_string(), message: e.to_string() };
                }
            }
        }
    }

    fn new(module: &str, error: &str, message: String) -> Self {
        CliError { module: module.into(), error: error.into(), message }
    }
}

macro_rules! domain {
    ($module:literal) => {
        |e| CliError::from_error($module, &e)
    };
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new("cli", "Io", format!("{}: {e}", path.display())))?;
    parse_value(&text).map_err(domain!("json"))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::new("cli", "Io", format!("{}: {e}", path.display())))
}

fn chart(radius: &Rational, lambda_s: &ExtRational) -> Result<ChartSpec, CliError> {
    ChartSpec::new(radius.clone(), lambda_s.clone()).map_err(domain!("locality"))
}

fn markov_triple(t: &Triple) -> Result<MarkovTriple, CliError> {
    MarkovTriple::new(t.0).map_err(domain!("markov"))
}

fn execute(cmd: Command) -> Result<Value, CliError> {
    match cmd {
        Command::Markov(MarkovCmd::Tree { max_entry }) => {
            let tree = markov_tree(max_entry).map_err(domain!("markov"))?;
            Ok(markov_tree_to_json(&tree))
        }
        Command::Diagram(DiagramCmd::DeltaM { triple, path }) => {
            let m = markov_triple(&triple)?;
            let path = match path {
                Some(p) => p.0,
                None => path_to_triple(m).map_err(domain!("markov"))?,
            };
            let (d, reached) = delta_m(&path).map_err(domain!("atf"))?;
            if reached != m.sorted() {
                return Err(CliError::new("atf", "PathMismatch", format!("path reaches {reached}, not {}", m.sorted())));
            }
            Ok(diagram_to_json(&d))
        }
        Command::Diagram(DiagramCmd::Mutate { input, node, out }) => {
            let d = diagram_from_json(&read_json(&input)?).map_err(domain!("json"))?;
            let (next, tau) = mutate_diagram(&d, node).map_err(domain!("atf"))?;
            write_file(&out, &(to_line(&diagram_to_json(&next)) + "\n"))?;
            Ok(json!({ "mutation": mutation_to_json(&tau), "out": out.display().to_string() }))
        }
        Command::Diagram(DiagramCmd::Render { input, out, chambers, labels, width, height }) => {
            let d = diagram_from_json(&read_json(&input)?).map_err(domain!("json"))?;
            let opts = RenderOptions { width, height, chambers, nodes: true, vertex_labels: labels };
            let svg = render_svg(&d, &opts).map_err(domain!("svg"))?;
            write_file(&out, &svg)?;
            Ok(json!({ "out": out.display().to_string(), "bytes": svg.len() }))
        }
        Command::Germ(GermCmd::Upsilon { k, a1, a2 }) => {
            let p = UpsilonParams::new(k, a1.clone(), a2.clone()).map_err(domain!("reduction"))?;
            let src = GermSource::Upsilon { k, a1, a2 };
            Ok(germ_to_json(&germ_upsilon(&p), Some(&src)))
        }
        Command::Germ(GermCmd::Theta { triple, area, tail, mode }) => {
            let m = markov_triple(&triple)?;
            let normals = markov_normals(&m).map_err(domain!("germ"))?;
            let tail = tail.map(|t| t.0).unwrap_or_default();
            let mode = match mode {
                ModeArg::Literal => ThetaMode::Literal,
                ModeArg::Cone => ThetaMode::Cone,
            };
            let g = if tail.is_empty() {
                germ_theta_from_normals(&normals, &area, mode)
            } else if mode == ThetaMode::Cone {
                return Err(CliError::new("germ", "UnsupportedMode", "cone mode takes no tail".into()));
            } else {
                germ_theta_product_from_normals(&normals, &area, &tail)
            }
            .map_err(domain!("germ"))?;
            let src = (tail.is_empty() && mode == ThetaMode::Literal)
                .then(|| GermSource::Theta { triple: m.sorted().entries(), area });
            Ok(germ_to_json(&g, src.as_ref()))
        }
        Command::Germ(GermCmd::Product { a }) => {
            let t = ProductTorusSpec::new(a.0).map_err(domain!("reduction"))?;
            Ok(germ_to_json(&germ_product_torus(&t), None))
        }
        Command::Germ(GermCmd::Toric { polytope, point }) => {
            let v = read_json(&polytope)?;
            let p = polytope_from_json(v.get("polytope").unwrap_or(&v)).map_err(domain!("json"))?;
            let g = germ_toric_fibre(&p, &point.0).map_err(domain!("germ"))?;
            Ok(germ_to_json(&g, None))
        }
        Command::Germ(GermCmd::Compare { left, right }) => {
            let (g, gs) = germ_from_json(&read_json(&left)?).map_err(domain!("json"))?;
            let (h, hs) = germ_from_json(&read_json(&right)?).map_err(domain!("json"))?;
            let e = germ_equivalent(&g, &h).map_err(domain!("germ"))?;
            let flags: Vec<&str> = match (&gs, &hs) {
                (Some(a), Some(b)) => known_discrepancy(a, b).into_iter().collect(),
                _ => Vec::new(),
            };
            Ok(equivalence_to_json(&e, &germ_invariants(&g), &germ_invariants(&h), &flags))
        }
        Command::Germ(GermCmd::Invariants { input }) => {
            let (g, _) = germ_from_json(&read_json(&input)?).map_err(domain!("json"))?;
            Ok(invariants_to_json(&germ_invariants(&g)))
        }
        Command::Check(CheckCmd::Cs { torus, radius, lambda_s }) => {
            let t = ProductTorusSpec::new(torus.0).map_err(domain!("reduction"))?;
            let r = has_property_cs(&t, &chart(&radius, &lambda_s)?);
            Ok(json!({
                "cs": r.holds,
                "slack_capacity": rational_to_json(&r.slack_capacity),
                "slack_sphere": r.slack_sphere.to_string(),
            }))
        }
        Command::Check(CheckCmd::Epsilon { family, radius, lambda_s }) => {
            let family = match family {
                FamilyArg::Upsilon => Family::Upsilon,
                FamilyArg::Theta => Family::Theta,
            };
            let eps = epsilon_threshold(family, &chart(&radius, &lambda_s)?);
            Ok(json!({ "family": family.name(), "epsilon": rational_to_json(&eps) }))
        }
        Command::Check(CheckCmd::TheoremD { area, tail, radius, lambda_s }) => {
            let tail = tail.map(|t| t.0).unwrap_or_default();
            let r = theorem_d_condition(&area, &tail, &chart(&radius, &lambda_s)?).map_err(domain!("locality"))?;
            Ok(json!({
                "holds": r.holds,
                "tail_bound": r.tail_bound,
                "capacity": r.capacity,
                "sphere": r.sphere,
                "slack_capacity": rational_to_json(&r.slack_capacity),
                "slack_sphere": r.slack_sphere.to_string(),
            }))
        }
        Command::Verify(VerifyCmd::DiaInvariance { triple, samples, seed }) => {
            let m = markov_triple(&triple)?;
            let path = path_to_triple(m).map_err(domain!("markov"))?;
            let steps = delta_m_steps(&path).map_err(domain!("atf"))?;
            let mut reports = Vec::new();
            let mut total = 0usize;
            for pair in steps.windows(2) {
                let (before, from, _) = &pair[0];
                let (after, to, tau) = &pair[1];
                let tau = tau.as_ref().expect("every step after the root has a mutation");
                let r = check_dia_invariance(before, after, tau, samples, seed).map_err(domain!("atf"))?;
                total += r.failures.len();
                reports.push(json!({
                    "from": from.entries(),
                    "to": to.entries(),
                    "samples": r.samples,
                    "failures": r.failures.len(),
                }));
            }
            Ok(json!({
                "triple": m.sorted().entries(),
                "seed": seed,
                "steps": reports,
                "failures": total,
                "passed": total == 0,
            }))
        }
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    2
                }
            };
        }
    };
    match execute(cli.command) {
        Ok(v) => {
            let _ = writeln!(stdout, "{}", to_line(&v));
            0
        }
        Err(e) => {
            let v = json!({ "module": e.module, "error": e.error, "message": e.message });
            let _ = writeln!(stderr, "{}", to_line(&v));
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("atfgerm").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn check_cs_example() {
        let (code, out, _) = call(&["check", "cs", "--torus", "1,2,3", "--radius", "8", "--lambda-s", "inf"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), r#"{"cs":true,"slack_capacity":"1","slack_sphere":"inf"}"#);
    }

    #[test]
    fn usage_and_domain_errors() {
        assert_eq!(call(&["markov", "tree"]).0, 2);
        assert_eq!(call(&["diagram", "delta-m", "--triple", "1,1"]).0, 2);
        let (code, _, err) = call(&["diagram", "delta-m", "--triple", "2,2,2"]);
        assert_eq!(code, 1);
        assert_eq!(err.trim(), r#"{"module":"markov","error":"NotMarkov","message":"[2, 2, 2] does not satisfy the Markov equation"}"#);
        let (code, _, err) = call(&["germ", "theta", "--triple", "1,1,1", "--area", "1", "--tail", "1/4"]);
        assert_eq!(code, 1);
        assert!(err.contains(r#""error":"TailTooSmall""#));
    }

    #[test]
    fn error_names_are_innermost() {
        let e = crate::germ::GermError::Atf(crate::atf::AtfError::Markov(crate::markov::MarkovError::Overflow));
        let c = CliError::from_error("germ", &e);
        assert_eq!((c.module.as_str(), c.error.as_str()), ("markov", "Overflow"));
    }
}
