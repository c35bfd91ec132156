use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use csn_dss::flow::{enumeration_size, DEFAULT_BUDGET};
use csn_dss::gf256::Gf256;
use csn_dss::ia::{self, NodeContent};
use csn_dss::mincut::enumerate_distributions;
use csn_dss::params::{repair_params, ParamFile};
use csn_dss::rational::{int, parse_rational, to_csv_string, to_fraction_string};
use csn_dss::tradeoff::{self, Preset, TradeoffPoint};
use csn_dss::{
    brute_force_capacity, build_ifg, capacity, max_flow, validate, CapacityResult, Error, FileSize, IfgOptions,
    Rational, RepairParams, SystemParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const EXIT_OK: u8 = 0;
const EXIT_INVALID: u8 = 1;
const EXIT_DISAGREE: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "csn-dss", version, about = "Capacity and repair tools for clustered storage with separate nodes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form capacity with the minimising repair sequence.
    Capacity(Common),
    /// Minimum storage over a β_C sweep, or minimum β_C at a given --alpha.
    Tradeoff(Common),
    /// Compare closed form, max-flow and exhaustive search.
    Verify(Common),
    /// Encode a random file with the (6,4) code and repair every node.
    SimulateRepair(Common),
    /// List selected-node distributions and their order counts.
    Enumerate(Common),
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long = "L")]
    clusters: Option<usize>,
    #[arg(long = "R")]
    cluster_size: Option<usize>,
    #[arg(long = "S")]
    separate: Option<usize>,
    #[arg(long = "dC")]
    d_c: Option<usize>,
    #[arg(long = "betaI", value_parser = rational_arg)]
    beta_i: Option<Rational>,
    #[arg(long = "betaC", value_parser = rational_arg)]
    beta_c: Option<Rational>,
    #[arg(long = "betaS", value_parser = rational_arg)]
    beta_s: Option<Rational>,
    #[arg(long, value_parser = rational_arg)]
    alpha: Option<Rational>,
    #[arg(long = "M", value_parser = rational_arg)]
    file_size: Option<Rational>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, value_enum)]
    preset: Option<PresetName>,
    /// Maximum number of graphs the exhaustive search may build.
    #[arg(long)]
    budget: Option<u128>,
    /// key=value parameter file; explicit flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed for the code simulator.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Repair only this node (1..=6) in simulate-repair.
    #[arg(long)]
    failed: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
enum Format {
    Json,
    Csv,
    #[default]
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum PresetName {
    Fig5,
    Fig6,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Failure with the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Infeasible { .. } => EXIT_INFEASIBLE,
            _ => EXIT_INVALID,
        };
        Failure { code, message: e.to_string() }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INVALID, message: message.into() }
}

/// Flags merged over the config file over the preset.
#[derive(Debug, Clone)]
struct Resolved {
    sys: SystemParams,
    d_c: Option<usize>,
    beta_i: Option<Rational>,
    beta_c: Option<Rational>,
    beta_s: Rational,
    alpha: Option<Rational>,
    file_size: Option<Rational>,
    preset: Option<Preset>,
}

impl Resolved {
    fn epsilon(&self) -> Rational {
        self.preset.as_ref().map_or(int(1), |p| p.epsilon)
    }

    fn d_c(&self) -> Result<usize, Failure> {
        self.d_c
            .or_else(|| self.preset.as_ref().map(Preset::default_d_c))
            .ok_or_else(|| invalid("missing --dC"))
    }

    /// β_I from the flag, or `ε·β_C` when only β_C is known.
    fn beta_i_for(&self, beta_c: Rational) -> Result<Rational, Failure> {
        match (self.beta_i, &self.preset) {
            (Some(b), _) => Ok(b),
            (None, Some(p)) => Ok(p.epsilon * beta_c),
            (None, None) => Err(invalid("missing --betaI")),
        }
    }

    fn repair(&self) -> Result<RepairParams, Failure> {
        let beta_c = self.beta_c.ok_or_else(|| invalid("missing --betaC"))?;
        let alpha = self.alpha.ok_or_else(|| invalid("missing --alpha"))?;
        let rep = RepairParams {
            alpha,
            beta_i: self.beta_i_for(beta_c)?,
            beta_c,
            beta_s: self.beta_s,
            ..repair_params(&self.sys, self.d_c()?)
        };
        validate(&self.sys, &rep).into_result()?;
        Ok(rep)
    }

    fn file_size(&self) -> Result<Option<FileSize>, Failure> {
        self.file_size
            .or_else(|| self.preset.as_ref().map(|p| p.file_size))
            .map(FileSize::new)
            .transpose()
            .map_err(Failure::from)
    }
}

fn resolve(c: &Common) -> Result<Resolved, Failure> {
    let preset = c.preset.map(|p| match p {
        PresetName::Fig5 => tradeoff::fig5(),
        PresetName::Fig6 => tradeoff::fig6(),
    });
    let file = match &c.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
            ParamFile::parse(&text)?
        }
        None => ParamFile::default(),
    };
    let base = preset.as_ref().map(|p| p.sys);
    let pick = |flag: Option<usize>, cfg: Option<usize>, pre: Option<usize>, name: &str| {
        flag.or(cfg).or(pre).ok_or_else(|| invalid(format!("missing --{name}")))
    };
    let k = pick(c.k, file.k, base.map(|s| s.k), "k")?;
    let clusters = pick(c.clusters, file.clusters, base.map(|s| s.clusters), "L")?;
    let cluster_size = pick(c.cluster_size, file.cluster_size, base.map(|s| s.cluster_size), "R")?;
    let separate = c.separate.or(file.separate).or(base.map(|s| s.separate)).unwrap_or(0);
    let n = c
        .n
        .or(file.n)
        .or(base.map(|s| s.n))
        .unwrap_or_else(|| clusters * cluster_size + separate);
    let sys = SystemParams::new(n, k, clusters, cluster_size, separate);
    sys.check()?;
    Ok(Resolved {
        sys,
        d_c: c.d_c.or(file.d_c),
        beta_i: c.beta_i.or(file.beta_i),
        beta_c: c.beta_c.or(file.beta_c),
        beta_s: c.beta_s.or(file.beta_s).unwrap_or_default(),
        alpha: c.alpha.or(file.alpha),
        file_size: c.file_size.or(file.file_size),
        preset,
    })
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serialisable output") + "\n"
}

fn fmt_order(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}

fn capacity_text(r: &CapacityResult) -> String {
    let mut out = format!("{}\n", to_fraction_string(&r.capacity));
    let _ = writeln!(out, "s* = {}", r.argmin_s);
    let _ = writeln!(out, "pi* = {}", r.argmin_pi);
    if let Some(j) = r.separate_position {
        let _ = writeln!(out, "separate position = {j}");
    }
    if !r.complete {
        out.push_str("note: distributions with s_0 >= 2 not searched; value is an upper bound\n");
    }
    out
}

fn run_capacity(c: &Common) -> Result<(String, u8), Failure> {
    let r = resolve(c)?;
    let rep = r.repair()?;
    let result = capacity(&r.sys, &rep)?;
    let out = match c.format {
        Format::Json => json(&result),
        Format::Csv => format!("capacity\n{}\n", to_csv_string(&result.capacity)),
        Format::Text => capacity_text(&result),
    };
    let short = r.file_size()?.is_some_and(|m| result.capacity < m.value());
    Ok((out, if short { EXIT_INFEASIBLE } else { EXIT_OK }))
}

#[derive(Serialize)]
struct CurveRow {
    d_c: usize,
    #[serde(flatten)]
    point: TradeoffPoint,
}

#[derive(Serialize)]
struct BetaAnswer {
    #[serde(with = "csn_dss::rational::as_num_den")]
    alpha: Rational,
    d_c: usize,
    #[serde(with = "csn_dss::rational::as_num_den")]
    epsilon: Rational,
    #[serde(with = "csn_dss::rational::as_num_den")]
    beta_c: Rational,
    #[serde(with = "csn_dss::rational::as_num_den")]
    beta_i: Rational,
}

fn run_tradeoff(c: &Common) -> Result<(String, u8), Failure> {
    let r = resolve(c)?;
    let m = r.file_size()?.ok_or_else(|| invalid("missing --M"))?;
    let epsilon = match (r.beta_i, r.beta_c) {
        (Some(bi), Some(bc)) if bc != int(0) => bi / bc,
        _ => r.epsilon(),
    };

    if let Some(alpha) = r.alpha {
        let d_c = r.d_c()?;
        let beta_c = tradeoff::min_beta_c(&r.sys, alpha, d_c, epsilon, r.beta_s, m)?;
        let answer = BetaAnswer { alpha, d_c, epsilon, beta_c, beta_i: epsilon * beta_c };
        let out = match c.format {
            Format::Json => json(&answer),
            Format::Csv => format!(
                "alpha,beta_C,beta_I\n{},{},{}\n",
                to_csv_string(&alpha),
                to_csv_string(&beta_c),
                to_csv_string(&answer.beta_i)
            ),
            Format::Text => format!("{}\n", to_fraction_string(&beta_c)),
        };
        return Ok((out, EXIT_OK));
    }

    let single = r.beta_c.is_some();
    let sweep: Vec<Rational> = match (r.beta_c, &r.preset) {
        (Some(b), _) => vec![b],
        (None, Some(p)) => p.sweep.clone(),
        (None, None) => return Err(invalid("give --betaC, --alpha or --preset")),
    };
    let d_cs: Vec<usize> = match (r.d_c, &r.preset) {
        (Some(d), _) => vec![d],
        (None, Some(p)) => p.d_c_values.clone(),
        (None, None) => return Err(invalid("missing --dC")),
    };
    let multi = d_cs.len() > 1;
    let mut rows = Vec::new();
    for &d_c in &d_cs {
        for point in tradeoff::tradeoff_curve(&r.sys, epsilon, d_c, r.beta_s, m, &sweep)? {
            rows.push(CurveRow { d_c, point });
        }
    }
    let infeasible = rows.iter().any(|row| row.point.alpha.is_none());
    let out = match c.format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut out = String::from(if multi { "d_C,beta_C,alpha,capacity\n" } else { "beta_C,alpha,capacity\n" });
            for row in &rows {
                if multi {
                    let _ = write!(out, "{},", row.d_c);
                }
                let p = &row.point;
                let alpha = p.alpha.as_ref().map_or("infeasible".to_string(), to_csv_string);
                let cap = p.capacity.as_ref().map_or(String::new(), to_csv_string);
                let _ = writeln!(out, "{},{alpha},{cap}", to_csv_string(&p.beta_c));
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for row in &rows {
                let p = &row.point;
                let alpha = match (&p.alpha, &p.deficit) {
                    (Some(a), _) => to_fraction_string(a),
                    (None, Some(d)) => format!("infeasible (deficit {})", to_fraction_string(d)),
                    (None, None) => "infeasible".into(),
                };
                let _ = writeln!(
                    out,
                    "d_C={} beta_C={} beta_I={} gamma={} alpha={alpha}",
                    row.d_c,
                    to_fraction_string(&p.beta_c),
                    to_fraction_string(&p.beta_i),
                    to_fraction_string(&p.gamma)
                );
            }
            out
        }
    };
    Ok((out, if single && infeasible { EXIT_INFEASIBLE } else { EXIT_OK }))
}

#[derive(Serialize)]
struct VerifyReport {
    agree: bool,
    closed_form: CapacityResult,
    #[serde(with = "csn_dss::rational::as_num_den")]
    max_flow: Rational,
    brute_force: CapacityResult,
    s0_range: Vec<usize>,
    /// Search over every `s_0`, reported when the system has `S ≥ 2`.
    full_range: Option<CapacityResult>,
}

fn run_verify(c: &Common) -> Result<(String, u8), Failure> {
    let r = resolve(c)?;
    let rep = r.repair()?;
    let budget = c.budget.unwrap_or(DEFAULT_BUDGET);
    let closed = capacity(&r.sys, &rep)?;
    let graph = build_ifg(&r.sys, &rep, &closed.argmin_s, &closed.argmin_pi, &IfgOptions::default())?;
    let flow_value = max_flow(&graph);
    let s0_range: Vec<usize> = (0..=r.sys.separate.min(1)).collect();
    let brute = brute_force_capacity(&r.sys, &rep, &s0_range, budget)?;
    let full_range = if r.sys.separate >= 2 {
        let all: Vec<usize> = (0..=r.sys.separate.min(r.sys.k)).collect();
        match enumeration_size(&r.sys, &all) {
            Ok(size) if size <= budget => Some(brute_force_capacity(&r.sys, &rep, &all, budget)?),
            _ => None,
        }
    } else {
        None
    };
    let agree = closed.capacity == flow_value && flow_value == brute.capacity;
    let report = VerifyReport { agree, closed_form: closed, max_flow: flow_value, brute_force: brute, s0_range, full_range };
    let out = match c.format {
        Format::Json => json(&report),
        Format::Csv => format!(
            "closed_form,max_flow,brute_force,agree\n{},{},{},{}\n",
            to_csv_string(&report.closed_form.capacity),
            to_csv_string(&report.max_flow),
            to_csv_string(&report.brute_force.capacity),
            agree
        ),
        Format::Text => {
            let cf = to_fraction_string(&report.closed_form.capacity);
            let mf = to_fraction_string(&report.max_flow);
            let bf = to_fraction_string(&report.brute_force.capacity);
            let mut out = if agree {
                format!("AGREE: closed-form = max-flow = brute-force = {cf}\n")
            } else {
                format!("DISAGREE: closed-form = {cf}, max-flow = {mf}, brute-force = {bf}\n")
            };
            let _ = writeln!(
                out,
                "closed-form witness: s = {}, pi = {}",
                report.closed_form.argmin_s, report.closed_form.argmin_pi
            );
            let _ = writeln!(
                out,
                "brute-force witness: s = {}, pi = {} (s_0 <= {})",
                report.brute_force.argmin_s,
                report.brute_force.argmin_pi,
                report.s0_range.iter().max().copied().unwrap_or(0)
            );
            if let Some(full) = &report.full_range {
                let _ = writeln!(
                    out,
                    "all s_0: {} at s = {}, pi = {}",
                    to_fraction_string(&full.capacity),
                    full.argmin_s,
                    full.argmin_pi
                );
            }
            out
        }
    };
    Ok((out, if agree { EXIT_OK } else { EXIT_DISAGREE }))
}

#[derive(Serialize)]
struct RepairRecord {
    plan: ia::RepairPlan,
    transcript: ia::RepairTranscript,
    restored: NodeContent,
    expected: NodeContent,
    ok: bool,
}

#[derive(Serialize)]
struct Simulation {
    seed: u64,
    code: ia::CodeSpec,
    file: Vec<Gf256>,
    nodes: Vec<NodeContent>,
    reconstructions_ok: usize,
    reconstructions: usize,
    repairs: Vec<RepairRecord>,
}

fn run_simulate(c: &Common) -> Result<(String, u8), Failure> {
    for (given, fixed, name) in [
        (c.n, 6, "n"),
        (c.k, 4, "k"),
        (c.clusters, 2, "L"),
        (c.cluster_size, 3, "R"),
        (c.separate, 0, "S"),
    ] {
        if given.is_some_and(|v| v != fixed) {
            return Err(invalid(format!("the simulated code is fixed at n=6, k=4, L=2, R=3, S=0 (got --{name})")));
        }
    }
    let failed: Vec<usize> = match c.failed {
        Some(f) if (1..=ia::NODES).contains(&f) => vec![f],
        Some(f) => return Err(invalid(format!("--failed {f} outside 1..=6"))),
        None => (1..=ia::NODES).collect(),
    };
    let code = ia::make_code(c.seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let file: [Gf256; 8] = std::array::from_fn(|_| Gf256(rng.gen()));
    let nodes = ia::encode(&file, &code);
    let mut reconstructions_ok = 0;
    let mut reconstructions = 0;
    for set in ia::four_subsets() {
        reconstructions += 1;
        let picked: Vec<_> = set.iter().map(|&i| (i, nodes[i - 1])).collect();
        if ia::reconstruct(&picked, &code).is_ok_and(|f| f == file) {
            reconstructions_ok += 1;
        }
    }
    let mut repairs = Vec::new();
    for &f in &failed {
        let plan = ia::plan_repair(f, &code)?;
        let alive: Vec<_> = (1..=ia::NODES).filter(|&i| i != f).map(|i| (i, nodes[i - 1])).collect();
        let (restored, transcript) = ia::repair(&plan, &alive, &code)?;
        let expected = nodes[f - 1];
        let ok = restored == expected && transcript.symbol_count() == ia::REPAIR_SYMBOLS;
        repairs.push(RepairRecord { plan, transcript, restored, expected, ok });
    }
    let all_ok = reconstructions_ok == reconstructions && repairs.iter().all(|r| r.ok);
    let sim = Simulation {
        seed: c.seed,
        code,
        file: file.to_vec(),
        nodes: nodes.to_vec(),
        reconstructions_ok,
        reconstructions,
        repairs,
    };
    let out = match c.format {
        Format::Json => json(&sim),
        Format::Csv => {
            let mut out = String::from("failed,from,symbol\n");
            for r in &sim.repairs {
                for t in &r.transcript.transfers {
                    let _ = writeln!(out, "{},{},{}", r.plan.failed, t.from, t.symbol);
                }
            }
            out
        }
        Format::Text => {
            let mut out = format!("seed {}\n", sim.seed);
            let list = |v: &[Gf256; 4]| v.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(" ");
            let _ = writeln!(out, "g = [{}], h = [{}]", list(&sim.code.g), list(&sim.code.h));
            let _ = writeln!(out, "g' = [{}], h' = [{}]", list(&sim.code.g_prime), list(&sim.code.h_prime));
            let _ = writeln!(out, "file = {}", sim.file.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(" "));
            let _ = writeln!(out, "reconstruction: {}/{} four-subsets ok", sim.reconstructions_ok, sim.reconstructions);
            for r in &sim.repairs {
                let sent: Vec<String> = r.transcript.transfers.iter().map(|t| format!("{}:{}", t.from, t.symbol)).collect();
                let _ = writeln!(
                    out,
                    "node {}: {} symbols [{}] -> ({}, {}) {}",
                    r.plan.failed,
                    r.transcript.symbol_count(),
                    sent.join(" "),
                    r.restored.x,
                    r.restored.y,
                    if r.ok { "ok" } else { "MISMATCH" }
                );
            }
            out
        }
    };
    Ok((out, if all_ok { EXIT_OK } else { EXIT_DISAGREE }))
}

#[derive(Serialize)]
struct DistributionRow {
    s: Vec<usize>,
    orders: u128,
}

fn run_enumerate(c: &Common) -> Result<(String, u8), Failure> {
    let r = resolve(c)?;
    let mut rows = Vec::new();
    for s0 in 0..=r.sys.separate.min(r.sys.k) {
        let Ok(dists) = enumerate_distributions(&r.sys, s0) else { continue };
        for s in dists {
            rows.push(DistributionRow { orders: s.order_count(), s: s.counts().to_vec() });
        }
    }
    let total: u128 = rows.iter().map(|r| r.orders).sum();
    let out = match c.format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut out = String::from("s,orders\n");
            for row in &rows {
                let _ = writeln!(out, "\"{}\",{}", fmt_order(&row.s), row.orders);
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for row in &rows {
                let _ = writeln!(out, "s = {}  |Pi(s)| = {}", fmt_order(&row.s), row.orders);
            }
            let _ = writeln!(out, "{} distributions, {total} graphs", rows.len());
            out
        }
    };
    Ok((out, EXIT_OK))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Capacity(c) => run_capacity(c),
        Command::Tradeoff(c) => run_tradeoff(c),
        Command::Verify(c) => run_verify(c),
        Command::SimulateRepair(c) => run_simulate(c),
        Command::Enumerate(c) => run_enumerate(c),
    };
    match result {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
