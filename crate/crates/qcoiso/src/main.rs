use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use qcoiso::classical::{classical_report, LieAlgebra};
use qcoiso::recipes::{builtin_recipe, parse_recipe};
use qcoiso::render::{identity_text, report_text};
use qcoiso::rootsys::{CartanType, RootSystem};
use qcoiso::uqalg::{NCPoly, Uq};
use qcoiso::verify::{
    commutator_templates, golden, run_full_verification, solve_golden, Golden, RightBasis, VerifyOptions, GOLDEN_NAMES,
};

/// Exit status for bad input, distinct from the verdict codes 0/1/2.
const USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "qcoiso", version, about = "Coisotropic subalgebras and their quantizations in U_q(g)")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List positive roots, marking the admissible ones with `*`.
    Roots {
        #[command(flatten)]
        case: TypeArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Build h from [e_beta, pi] and check that it is coisotropic.
    Classical {
        #[command(flatten)]
        case: TypeArgs,
        #[arg(long)]
        beta: String,
        /// Compute even when beta is not admissible.
        #[arg(long)]
        force: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the full pipeline: admissibility, classical, recipe, coideal, flatness.
    Verify(VerifyArgs),
    /// Solve a built-in identity (ijkj, eiej-ekej, so-odd-5term, g2-e2t) or a template file.
    Solve {
        name: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Recipe files.
    Recipe {
        #[command(subcommand)]
        cmd: RecipeCmd,
    },
}

#[derive(Subcommand)]
enum RecipeCmd {
    /// Check a recipe file against the schema and the algebra.
    Validate { file: PathBuf },
    /// Print the built-in recipe of a case as JSON.
    Show {
        #[command(flatten)]
        case: TypeArgs,
        #[arg(long)]
        beta: String,
    },
}

#[derive(Args, Clone)]
struct TypeArgs {
    /// Series letter: A, B, C, D, E, F or G.
    #[arg(long = "type")]
    ty: String,
    #[arg(long)]
    rank: usize,
}

impl TypeArgs {
    fn cartan(&self) -> Result<CartanType, String> {
        CartanType::parse(&self.ty, self.rank).map_err(|e| e.to_string())
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "type", required_unless_present = "recipe")]
    ty: Option<String>,
    #[arg(long, required_unless_present = "recipe")]
    rank: Option<usize>,
    #[arg(long, required_unless_present = "recipe")]
    beta: Option<String>,
    /// User recipe file; type, rank and beta are read from it.
    #[arg(long, conflicts_with_all = ["ty", "rank", "beta"])]
    recipe: Option<PathBuf>,
    /// Bound on the degree of generator products (default: twice the recipe degree).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_degree: Option<u64>,
    #[arg(long)]
    no_timings: bool,
    #[arg(long)]
    skip_flatness: bool,
    #[arg(long, value_enum, default_value_t = Basis::Shuffle)]
    right_basis: Basis,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads (default: available cores).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Basis {
    Shuffle,
    Lex,
    RevLex,
    Spanning,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.cmd {
        Cmd::Roots { case, format } => roots(&case, format),
        Cmd::Classical { case, beta, force, format } => classical(&case, &beta, force, format),
        Cmd::Verify(args) => verify(args),
        Cmd::Solve { name, format } => solve(&name, format),
        Cmd::Recipe { cmd: RecipeCmd::Validate { file } } => {
            let text = std::fs::read_to_string(&file).map_err(|e| format!("{}: {e}", file.display()))?;
            let r = parse_recipe(&text).map_err(|e| e.to_string())?;
            println!("ok: {}{} beta = {}, {} generators, degree {}", r.ty, r.rank, r.beta, r.generators.len(), r.max_degree());
            Ok(0)
        }
        Cmd::Recipe { cmd: RecipeCmd::Show { case, beta } } => {
            let rs = RootSystem::build(case.cartan()?).map_err(|e| e.to_string())?;
            let root = rs.parse_root(&beta).map_err(|e| e.to_string())?;
            let r = builtin_recipe(rs.ty, &root).map_err(|e| e.to_string())?;
            println!("{}", r.to_json());
            Ok(0)
        }
    }
}

fn roots(case: &TypeArgs, format: Format) -> Result<u8, String> {
    let rs = RootSystem::build(case.cartan()?).map_err(|e| e.to_string())?;
    let rows: Vec<(String, Vec<i64>, bool)> = rs
        .positive_roots
        .iter()
        .map(|r| (rs.format_root(r), r.simple_decomp.clone(), rs.is_admissible(r)))
        .collect();
    match format {
        Format::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|(n, d, a)| serde_json::json!({"root": n, "simple": d, "admissible": a}))
                .collect();
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
        }
        Format::Text => {
            for (n, d, a) in &rows {
                println!("{} {n:<16} {d:?}", if *a { "*" } else { " " });
            }
            let k = rows.iter().filter(|r| r.2).count();
            println!("{} positive roots, {k} admissible", rows.len());
        }
    }
    Ok(0)
}

fn classical(case: &TypeArgs, beta: &str, force: bool, format: Format) -> Result<u8, String> {
    let rs = RootSystem::build(case.cartan()?).map_err(|e| e.to_string())?;
    let root = rs.parse_root(beta).map_err(|e| e.to_string())?;
    if !rs.is_admissible(&root) && !force {
        eprintln!("{} is not admissible for {} (some root string has three consecutive values); use --force to compute anyway", rs.format_root(&root), rs.ty);
        return Ok(1);
    }
    let alg = LieAlgebra::build(&rs)?;
    let rep = classical_report(&alg, &root);
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rep).unwrap()),
        Format::Text => println!("{rep}\n{} generators", rep.generators.len()),
    }
    Ok(if rep.checks.closure && rep.checks.coideal { 0 } else { 1 })
}

fn verify(a: VerifyArgs) -> Result<u8, String> {
    if let Some(n) = a.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global().map_err(|e| e.to_string())?;
    }
    let user = match &a.recipe {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            Some(parse_recipe(&text).map_err(|e| e.to_string())?)
        }
        None => None,
    };
    let (ty, beta) = match &user {
        Some(r) => (r.cartan_type().map_err(|e| e.to_string())?, r.beta.clone()),
        None => {
            let case = TypeArgs { ty: a.ty.clone().unwrap(), rank: a.rank.unwrap() };
            (case.cartan()?, a.beta.clone().unwrap())
        }
    };
    let opts = VerifyOptions {
        max_degree: a.max_degree.map(|d| d as usize),
        timings: !a.no_timings,
        right_basis: match a.right_basis {
            Basis::Shuffle => RightBasis::Shuffle,
            Basis::Lex => RightBasis::Quotient { reversed: false },
            Basis::RevLex => RightBasis::Quotient { reversed: true },
            Basis::Spanning => RightBasis::Spanning,
        },
        skip_flatness: a.skip_flatness,
    };
    let report = run_full_verification(ty, &beta, user.as_ref(), &opts).map_err(|e| e.to_string())?;
    let body = match a.format {
        Format::Json => serde_json::to_string_pretty(&report).unwrap() + "\n",
        Format::Text => report_text(&report),
    };
    match &a.out {
        Some(p) => std::fs::write(p, body).map_err(|e| format!("{}: {e}", p.display()))?,
        None => print!("{body}"),
    }
    Ok(report.verdict.exit_code() as u8)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TemplateFile {
    #[serde(rename = "type")]
    ty: String,
    rank: usize,
    target: String,
    templates: Vec<NamedPoly>,
    /// Let letters of non-adjacent simple roots commute.
    #[serde(default)]
    commute_nonadjacent: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NamedPoly {
    name: String,
    poly: String,
}

fn solve(name: &str, format: Format) -> Result<u8, String> {
    let gd = match golden(name) {
        Some(g) => g,
        None => {
            let path = PathBuf::from(name);
            if !path.exists() {
                return Err(format!("unknown identity {name:?}; built-in names: {}", GOLDEN_NAMES.join(", ")));
            }
            template_golden(&path)?
        }
    };
    let rep = solve_golden(&gd);
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rep).unwrap()),
        Format::Text => print!("{}", identity_text(&rep)),
    }
    Ok(if rep.solvable { 0 } else { 1 })
}

fn template_golden(path: &PathBuf) -> Result<Golden, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let tf: TemplateFile = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let ty = CartanType::parse(&tf.ty, tf.rank).map_err(|e| e.to_string())?;
    let uq = Uq::new(&RootSystem::build(ty).map_err(|e| e.to_string())?);
    let target = NCPoly::parse(&tf.target, uq.rank).map_err(|e| format!("target: {e}"))?;
    let mut templates = Vec::new();
    for t in &tf.templates {
        templates.push((t.name.clone(), NCPoly::parse(&t.poly, uq.rank).map_err(|e| format!("{}: {e}", t.name))?));
    }
    let commutators = if tf.commute_nonadjacent {
        let c = target.terms.keys().next().map(|m| qcoiso::uqalg::content(&m.word, uq.rank)).unwrap_or(vec![0; uq.rank]);
        commutator_templates(&uq, &c)
    } else {
        Vec::new()
    };
    Ok(Golden {
        name: "file",
        case: "template file",
        target_label: tf.target.clone(),
        target,
        templates,
        commutators,
        paper: None,
        at_one: None,
    })
}

