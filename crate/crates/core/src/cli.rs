//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for infeasibility verdicts and solver
//! failures, 2 for usage, I/O and parse errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;

use crate::approx::{frt_embed, frt_solve, matching_solve, shortest_path_solve};
use crate::flow::{check_feasible, extract_routing, split_report, Feasibility, FlowError};
use crate::generators::{
    gen_expander, gen_kneser, gen_random, gen_sat, normalize_formula, parse_dimacs, sat_certificate,
};
use crate::latency::{latency_exact, latency_solve_greedy, walk_cost, LatencyWalk};
use crate::lp::{budget_from_env, solve_exact, solve_lp, LpError, DEFAULT_NODE_BUDGET};
use crate::model::{expand_parallel, mst_cost, plan_cost, CapacityPlan, Instance};
use crate::text::{
    format_float, format_weight, parse_instance, parse_plan, parse_walk, parse_weight,
    serialize_instance, serialize_plan, serialize_walk,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const CSV_HEADER: &str = "family,param,algorithm,cost,bound,ratio,seed";

#[derive(Debug, Parser)]
#[command(
    name = "sandkit",
    version,
    about = "Network design with fractionally-subadditive cut requirements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve an instance and print its cost.
    Solve(SolveArgs),
    /// Check a capacity plan against every cut constraint.
    Check(InstancePlanArgs),
    /// Generate an instance family.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Latency variant: build or evaluate root-anchored walks.
    #[command(subcommand)]
    Latency(LatencyCommand),
    /// Route a two-color plan and print its split report.
    Diagnose(InstancePlanArgs),
    /// CSV sweep over the odd-graph or expander families.
    GapReport(GapArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Alg {
    Exact,
    Lp,
    Matching,
    Sp,
    Frt,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    alg: Alg,
    #[arg(short, long)]
    input: PathBuf,
    /// Where to write the plan.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Branch-and-bound node budget; defaults to SANDKIT_BUDGET or 1000000.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Debug, Args)]
struct InstancePlanArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    plan: PathBuf,
}

#[derive(Debug, Subcommand)]
enum GenCommand {
    /// Reduction from a DIMACS formula.
    Sat {
        #[arg(long)]
        cnf: PathBuf,
        /// Weight of the clause edges; defaults to 2m + 8p + 1.
        #[arg(long = "M")]
        big_m: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the certificate plan of a satisfying assignment here.
        #[arg(long)]
        plan: Option<PathBuf>,
    },
    /// Odd graph plus root with its fractional plan.
    Kneser {
        #[arg(long)]
        s: usize,
        /// One color per unordered edge instead of one per direction.
        #[arg(long)]
        unordered: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        plan: Option<PathBuf>,
    },
    /// Random regular graph plus root with its reference plan.
    Expander {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        colors: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        plan: Option<PathBuf>,
    },
    /// Random connected instance.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Terminals per color.
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        wmin: i64,
        #[arg(long, default_value_t = 10)]
        wmax: i64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LatencyAlg {
    Greedy,
    Exact,
}

#[derive(Debug, Subcommand)]
enum LatencyCommand {
    /// Build a walk and print its prefix lengths and latency.
    Solve {
        #[arg(long, value_enum, default_value_t = LatencyAlg::Greedy)]
        alg: LatencyAlg,
        #[arg(short, long)]
        input: PathBuf,
        /// Where to write the walk.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Score a given walk.
    Eval {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        walk: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Kneser,
    Expander,
}

#[derive(Debug, Args)]
struct GapArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Odd-graph sizes; defaults to 2 and 3.
    #[arg(long)]
    s: Vec<usize>,
    #[arg(long)]
    unordered: bool,
    /// Also solve the cut LP for each odd graph.
    #[arg(long)]
    lp: bool,
    #[arg(long, default_value_t = 16)]
    n: usize,
    #[arg(long, default_value_t = 6)]
    d: usize,
    #[arg(long, default_value_t = 4)]
    b: usize,
    #[arg(long, default_value_t = 50)]
    colors: usize,
    /// Generator seed for the expander.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of tree-embedding seeds, starting at 0.
    #[arg(long, default_value_t = 16)]
    seeds: u64,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Verdict(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Verdict(_) => EXIT_VERDICT,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Verdict(m) => m,
        }
    }
}

type CliResult = Result<i32, CliError>;

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn verdict(e: impl std::fmt::Display) -> CliError {
    CliError::Verdict(e.to_string())
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, CliError> {
    parse_instance(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_plan(path: &Path) -> Result<CapacityPlan, CliError> {
    parse_plan(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Writes `text` to `path`, or into `out` when no path is given.
fn emit(out: &mut String, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write(p, text),
        None => {
            out.push_str(text);
            Ok(())
        }
    }
}

fn cost_text(inst: &Instance, plan: &CapacityPlan) -> Result<String, CliError> {
    plan_cost(inst, plan).map(|c| c.to_string()).map_err(usage)
}

fn solve(args: &SolveArgs, out: &mut String) -> CliResult {
    let inst = load_instance(&args.input)?;
    let plan = match args.alg {
        Alg::Exact => {
            let budget = args
                .budget
                .unwrap_or_else(|| budget_from_env(DEFAULT_NODE_BUDGET));
            match solve_exact(&inst, budget) {
                Ok(o) => {
                    let _ = writeln!(
                        out,
                        "optimum={} nodes={} cuts={}",
                        format_weight(&o.optimum),
                        o.nodes,
                        o.cuts
                    );
                    o.plan
                }
                Err(LpError::BudgetExceeded {
                    incumbent,
                    lower_bound,
                    nodes,
                }) => {
                    let mut msg = format!(
                        "budget exhausted after {nodes} nodes, lower bound {}",
                        format_float(lower_bound)
                    );
                    if let Some(inc) = incumbent {
                        let _ = write!(msg, ", incumbent {}", format_weight(&inc.cost));
                        if let Some(p) = &args.output {
                            write(p, &serialize_plan(&inc.plan))?;
                        }
                    }
                    return Err(verdict(msg));
                }
                Err(e) => return Err(verdict(e)),
            }
        }
        Alg::Lp => {
            let o = solve_lp(&inst).map_err(verdict)?;
            let _ = writeln!(
                out,
                "optimum={} nodes=0 cuts={}",
                format_float(o.optimum),
                o.cuts
            );
            o.plan
        }
        Alg::Matching => {
            let (plan, pairing) = matching_solve(&inst).map_err(verdict)?;
            let side = |v: Option<usize>| v.map_or_else(|| "-".to_string(), |v| v.to_string());
            for p in &pairing.pairs {
                let _ = writeln!(
                    out,
                    "pair {} {} cost={}",
                    side(p.green),
                    side(p.blue),
                    format_weight(&p.steiner_cost)
                );
            }
            let _ = writeln!(out, "optimum={}", cost_text(&inst, &plan)?);
            plan
        }
        Alg::Sp => {
            let plan = shortest_path_solve(&inst).map_err(verdict)?;
            let _ = writeln!(out, "optimum={}", cost_text(&inst, &plan)?);
            plan
        }
        Alg::Frt => {
            let plan = frt_solve(&inst, args.seed).map_err(verdict)?;
            let _ = writeln!(
                out,
                "optimum={} seed={}",
                cost_text(&inst, &plan)?,
                args.seed
            );
            plan
        }
    };
    if let Some(p) = &args.output {
        write(p, &serialize_plan(&plan))?;
    }
    Ok(EXIT_OK)
}

fn check(args: &InstancePlanArgs, out: &mut String) -> CliResult {
    let inst = load_instance(&args.input)?;
    let plan = load_plan(&args.plan)?;
    match check_feasible(&inst, &plan).map_err(usage)? {
        Feasibility::Feasible => {
            out.push_str("feasible\n");
            Ok(EXIT_OK)
        }
        Feasibility::Violation(cut) => {
            let _ = writeln!(
                out,
                "violated {cut} lhs={}",
                format_float(cut.lhs(&inst, &plan))
            );
            Ok(EXIT_VERDICT)
        }
    }
}

fn diagnose(args: &InstancePlanArgs, out: &mut String) -> CliResult {
    let inst = load_instance(&args.input)?;
    let plan = load_plan(&args.plan)?;
    plan.check_len(&inst).map_err(usage)?;
    let CapacityPlan::Integral(caps) = &plan else {
        return Err(usage("diagnose needs an integral plan"));
    };
    // One unit-capacity copy per unit of capacity, so each copy carries at
    // most one walk of a color.
    let expansion = expand_parallel(&inst);
    let mut seen = vec![0u64; inst.edge_count()];
    let unit: Vec<u64> = expansion
        .origin
        .iter()
        .map(|&e| {
            seen[e] += 1;
            u64::from(seen[e] <= caps[e])
        })
        .collect();
    let expanded = &expansion.instance;
    let routing = match extract_routing(expanded, &CapacityPlan::Integral(unit)) {
        Ok(r) => r,
        Err(FlowError::Infeasible(cut)) => {
            let _ = writeln!(out, "violated {cut}");
            return Ok(EXIT_VERDICT);
        }
        Err(e) => return Err(usage(e)),
    };
    let mut report = split_report(expanded, &routing).map_err(usage)?;
    for split in &mut report.splits {
        for e in &mut split.edges {
            *e = expansion.origin[*e];
        }
    }
    report.shared_edges = report
        .shared_edges
        .iter()
        .map(|&e| expansion.origin[e])
        .collect();
    out.push_str(&report.to_text(expanded));
    Ok(EXIT_OK)
}

fn generate(cmd: &GenCommand, out: &mut String, err: &mut String) -> CliResult {
    match cmd {
        GenCommand::Sat {
            cnf,
            big_m,
            output,
            plan,
        } => {
            let raw = parse_dimacs(&read(cnf)?).map_err(usage)?;
            let (formula, flipped) = normalize_formula(&raw).map_err(usage)?;
            if !flipped.is_empty() {
                let ids: Vec<String> = flipped.iter().map(|v| (v + 1).to_string()).collect();
                let _ = writeln!(err, "flipped variables {}", ids.join(" "));
            }
            let big_m = big_m
                .as_deref()
                .map(|s| parse_weight(s).ok_or_else(|| usage(format!("invalid M `{s}`"))))
                .transpose()?;
            let (inst, map) = gen_sat(&formula, big_m).map_err(usage)?;
            emit(out, output.as_deref(), &serialize_instance(&inst))?;
            if let Some(p) = plan {
                let assignment = formula
                    .brute_force_model()
                    .ok_or_else(|| verdict("formula is unsatisfiable; no certificate plan"))?;
                let (_, cert) =
                    sat_certificate(&inst, &formula, &assignment, &map).map_err(usage)?;
                write(p, &serialize_plan(&cert))?;
                let _ = writeln!(
                    err,
                    "certificate cost {}",
                    format_weight(&map.certificate_cost())
                );
            }
        }
        GenCommand::Kneser {
            s,
            unordered,
            output,
            plan,
        } => {
            let (inst, frac) = gen_kneser(*s, !unordered).map_err(usage)?;
            emit(out, output.as_deref(), &serialize_instance(&inst))?;
            if let Some(p) = plan {
                write(p, &serialize_plan(&frac))?;
            }
        }
        GenCommand::Expander {
            n,
            d,
            b,
            colors,
            seed,
            output,
            plan,
        } => {
            let (inst, reference) = gen_expander(*n, *d, *b, *colors, *seed).map_err(usage)?;
            emit(out, output.as_deref(), &serialize_instance(&inst))?;
            if let Some(p) = plan {
                write(p, &serialize_plan(&reference))?;
            }
        }
        GenCommand::Random {
            n,
            k,
            size,
            seed,
            wmin,
            wmax,
            output,
        } => {
            let inst = gen_random(*n, *k, *size, *seed, *wmin..=*wmax).map_err(usage)?;
            emit(out, output.as_deref(), &serialize_instance(&inst))?;
        }
    }
    Ok(EXIT_OK)
}

fn print_walk(out: &mut String, walk: &LatencyWalk) {
    let prefix: Vec<String> = walk.prefix_lengths.iter().map(format_weight).collect();
    let _ = writeln!(out, "walk {}", serialize_walk(&walk.vertices).trim_end());
    let _ = writeln!(out, "prefix {}", prefix.join(" "));
    let _ = writeln!(out, "latency={}", format_weight(&walk.cost));
}

fn latency(cmd: &LatencyCommand, out: &mut String) -> CliResult {
    match cmd {
        LatencyCommand::Solve { alg, input, output } => {
            let inst = load_instance(input)?;
            let walk = match alg {
                LatencyAlg::Greedy => latency_solve_greedy(&inst),
                LatencyAlg::Exact => latency_exact(&inst),
            }
            .map_err(verdict)?;
            print_walk(out, &walk);
            if let Some(p) = output {
                write(p, &serialize_walk(&walk.vertices))?;
            }
            Ok(EXIT_OK)
        }
        LatencyCommand::Eval { input, walk } => {
            let inst = load_instance(input)?;
            let vertices =
                parse_walk(&read(walk)?).map_err(|e| usage(format!("{}: {e}", walk.display())))?;
            match walk_cost(&inst, &vertices) {
                Ok(w) => {
                    print_walk(out, &w);
                    Ok(EXIT_OK)
                }
                Err(e) => {
                    let _ = writeln!(out, "invalid {e}");
                    Ok(EXIT_VERDICT)
                }
            }
        }
    }
}

fn csv_row(
    out: &mut String,
    family: &str,
    param: &str,
    alg: &str,
    cost: f64,
    bound: Option<f64>,
    seed: Option<u64>,
) {
    let bound_text = bound.map(format_float).unwrap_or_default();
    let ratio = bound
        .filter(|_| cost > 0.0)
        .map(|b| format_float(b / cost))
        .unwrap_or_default();
    let seed = seed.map(|s| s.to_string()).unwrap_or_default();
    let _ = writeln!(
        out,
        "{family},{param},{alg},{},{bound_text},{ratio},{seed}",
        format_float(cost)
    );
}

fn gap_report(args: &GapArgs, out: &mut String) -> CliResult {
    let _ = writeln!(out, "{CSV_HEADER}");
    match args.family {
        Family::Kneser => {
            let sizes = if args.s.is_empty() {
                vec![2, 3]
            } else {
                args.s.clone()
            };
            for s in sizes {
                let (inst, plan) = gen_kneser(s, !args.unordered).map_err(usage)?;
                let frac = plan_cost(&inst, &plan).map_err(usage)?.to_f64();
                let mst = mst_cost(&inst).map_err(usage)?.to_f64().unwrap_or(f64::NAN);
                let param = s.to_string();
                csv_row(out, "kneser", &param, "fractional", frac, Some(mst), None);
                if args.lp {
                    let lp = solve_lp(&inst).map_err(verdict)?;
                    csv_row(out, "kneser", &param, "lp", lp.optimum, Some(mst), None);
                }
            }
        }
        Family::Expander => {
            let (inst, reference) =
                gen_expander(args.n, args.d, args.b, args.colors, args.seed).map_err(usage)?;
            let param = format!("n={} d={} b={}", args.n, args.d, args.b);
            let ref_cost = plan_cost(&inst, &reference).map_err(usage)?.to_f64();
            csv_row(
                out,
                "expander",
                &param,
                "reference",
                ref_cost,
                None,
                Some(args.seed),
            );
            let mut costs = Vec::new();
            let mut tree_costs = Vec::new();
            for seed in 0..args.seeds {
                let plan = frt_solve(&inst, seed).map_err(verdict)?;
                let cost = plan_cost(&inst, &plan).map_err(usage)?.to_f64();
                csv_row(
                    out,
                    "expander",
                    &param,
                    "frt",
                    cost,
                    Some(ref_cost),
                    Some(seed),
                );
                costs.push(cost);
                let tree = frt_embed(&inst, seed).map_err(verdict)?;
                let tree_cost = tree.solution_cost(&inst).to_f64().unwrap_or(f64::NAN);
                csv_row(
                    out,
                    "expander",
                    &param,
                    "frt-tree",
                    tree_cost,
                    Some(ref_cost),
                    Some(seed),
                );
                tree_costs.push(tree_cost);
            }
            if !costs.is_empty() {
                csv_row(
                    out,
                    "expander",
                    &param,
                    "frt-median",
                    median(costs),
                    Some(ref_cost),
                    None,
                );
                csv_row(
                    out,
                    "expander",
                    &param,
                    "frt-tree-median",
                    median(tree_costs),
                    Some(ref_cost),
                    None,
                );
            }
        }
    }
    Ok(EXIT_OK)
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    }
}

/// Runs the command line `args` (program name first), writing standard output
/// and error text to the given sinks. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut impl Write, stderr: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut out = String::new();
    let mut err = String::new();
    let result = match &cli.command {
        Command::Solve(a) => solve(a, &mut out),
        Command::Check(a) => check(a, &mut out),
        Command::Gen(g) => generate(g, &mut out, &mut err),
        Command::Latency(l) => latency(l, &mut out),
        Command::Diagnose(a) => diagnose(a, &mut out),
        Command::GapReport(a) => gap_report(a, &mut out),
    };
    let code = result.unwrap_or_else(|e| {
        let _ = writeln!(err, "error: {}", e.message());
        e.code()
    });
    let _ = stdout.write_all(out.as_bytes());
    let _ = stderr.write_all(err.as_bytes());
    code
}

pub fn main_entry() -> i32 {
    run(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("sandkit").chain(args.iter().copied()),
            &mut o,
            &mut e,
        );
        (
            code,
            String::from_utf8(o).unwrap(),
            String::from_utf8(e).unwrap(),
        )
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_str(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["solve", "--alg", "exact"]).0, EXIT_USAGE);
        let (code, _, err) = run_str(&["check", "-i", "/nonexistent/x", "-p", "/nonexistent/y"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("cannot read"));
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_str(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("gap-report"));
    }

    #[test]
    fn kneser_gap_row() {
        let (code, out, _) = run_str(&["gap-report", "--family", "kneser", "--s", "3"]);
        assert_eq!(code, EXIT_OK);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "kneser,3,fractional,32.8,36,1.097560976,");
    }

    #[test]
    fn csv_ratio_omitted_without_bound() {
        let mut s = String::new();
        csv_row(&mut s, "f", "p", "a", 2.0, None, Some(4));
        assert_eq!(s, "f,p,a,2,,,4\n");
    }
}
