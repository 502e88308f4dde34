//! Argument parsing and dispatch for the `ht` binary.
//!
//! [`run`] never prints; it returns the exit code and both output streams so
//! the binary and the tests share one code path.

use std::path::Path;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use ht_core::characters::{axiom_report, gram, multiplicativity_check, CharError, Character};
use ht_core::exactnum::Rational;
use ht_core::plgroup::{sign_invariant, Family, PLMap, PlError};
use ht_core::sft::{
    base_family, base_generators, check_base_conditions, from_thompson, to_thompson, Graph, PeriodicPoint, SftError,
    TabularElement, DEFAULT_SFT_DEPTH,
};
use ht_core::suite::{acceptance, summary_table};
use ht_core::witness::{
    certify_cover, certify_displacement, certify_join, certify_map_interval, conjugate_sequence,
    covering_neighborhood, disjoint_conjugates, displacement_witness, join, map_interval, verify_base, BaseSet,
    WitnessError, DEFAULT_DEPTH_CAP,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_DATA: u8 = 2;
pub const EXIT_INFEASIBLE: u8 = 3;

/// Environment variable overriding the default search depth of bounded searches.
pub const DEPTH_CAP_VAR: &str = "HT_DEPTH_CAP";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResult {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
    Infeasible(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
            CliError::Infeasible(_) => EXIT_INFEASIBLE,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Infeasible(m) => m,
        }
    }
}

impl From<PlError> for CliError {
    fn from(e: PlError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<WitnessError> for CliError {
    fn from(e: WitnessError) -> Self {
        match e {
            WitnessError::SearchExhausted(_) | WitnessError::ClosuresIntersect(..) => {
                CliError::Infeasible(e.to_string())
            }
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<SftError> for CliError {
    fn from(e: SftError) -> Self {
        match e {
            SftError::SearchExhausted(_) => CliError::Infeasible(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<CharError> for CliError {
    fn from(e: CharError) -> Self {
        CliError::Data(e.to_string())
    }
}

type CliResult = Result<Value, CliError>;

#[derive(Parser, Debug)]
#[command(name = "ht", version, about = "Exact computations in Higman-Thompson groups and SFT full groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Operations on single elements of F, F0 and G.
    #[command(subcommand)]
    Elem(ElemCmd),
    /// Compressibility witnesses for the standard base.
    #[command(subcommand)]
    Witness(WitnessCmd),
    /// Character evaluation and axiom checks.
    #[command(subcommand)]
    Char(CharCmd),
    /// Full groups of shifts of finite type.
    #[command(subcommand)]
    Sft(SftCmd),
    /// Batch suites.
    #[command(subcommand)]
    Suite(SuiteCmd),
}

#[derive(Args, Debug)]
struct ElementArg {
    /// Element JSON, inline or as a file path.
    #[arg(long)]
    element: String,
}

#[derive(Args, Debug)]
struct ElementsArg {
    /// JSON array of elements, inline or as a file path.
    #[arg(long)]
    elements: String,
}

#[derive(Args, Debug)]
struct SpaceArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    r: u32,
}

#[derive(Args, Debug)]
struct SeedArg {
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum ElemCmd {
    /// Parse, validate and print the canonical form.
    Validate {
        #[command(flatten)]
        element: ElementArg,
        /// Re-check membership in another family (F, F0 or G).
        #[arg(long)]
        family: Option<Family>,
    },
    /// Product g1 g2 ... gk, applying gk first.
    Compose(ElementsArg),
    Inverse(ElementArg),
    Eval {
        #[command(flatten)]
        element: ElementArg,
        #[arg(long)]
        at: String,
    },
    Support(ElementArg),
    FixMeasure(ElementArg),
    /// Endpoint slope exponents.
    Abel(ElementArg),
    /// Cylinder permutation sign (odd n only).
    Sign(ElementArg),
}

#[derive(Subcommand, Debug)]
enum WitnessCmd {
    /// Base set containing the support of an F0 element.
    Cover(ElementArg),
    /// Element of F0 mapping U1 into U2.
    MapInterval {
        #[command(flatten)]
        space: SpaceArgs,
        /// U1 as "a,b".
        #[arg(long)]
        from: String,
        /// U2 as "a,b".
        #[arg(long)]
        to: String,
    },
    /// Element fixing U2 pointwise and moving U1 off U3.
    Displace {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        u1: String,
        #[arg(long)]
        u2: String,
        #[arg(long)]
        u3: String,
    },
    /// Base set containing U1 and U2.
    Join {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        u1: String,
        #[arg(long)]
        u2: String,
    },
    /// Distinct conjugates with pairwise quotients in F0.
    Conjugates {
        #[command(flatten)]
        element: ElementArg,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Conjugates of an F0 element with disjoint supports, and their product.
    DisjointProduct {
        #[command(flatten)]
        element: ElementArg,
        #[arg(long)]
        m: usize,
    },
    /// Checks all four conditions on random instances.
    VerifyBase {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[command(flatten)]
        seed: SeedArg,
    },
}

#[derive(Args, Debug)]
struct CharacterArg {
    /// regular, identity, abel:θ0,θ1, convex:α:χ1+χ2 or fixmeasure.
    #[arg(long)]
    character: String,
}

#[derive(Subcommand, Debug)]
enum CharCmd {
    Eval {
        #[command(flatten)]
        character: CharacterArg,
        #[command(flatten)]
        element: ElementArg,
    },
    /// Gram matrix χ(g_i g_j^-1) and its eigenvalue verdict.
    Gram {
        #[command(flatten)]
        character: CharacterArg,
        #[command(flatten)]
        elements: ElementsArg,
    },
    Axioms {
        #[command(flatten)]
        character: CharacterArg,
        #[command(flatten)]
        elements: ElementsArg,
    },
    /// χ(gh) against χ(g)χ(h) for g, h with disjoint supports.
    Mult {
        #[command(flatten)]
        character: CharacterArg,
        #[arg(long)]
        g: String,
        #[arg(long)]
        h: String,
    },
}

#[derive(Args, Debug)]
struct GraphArg {
    /// Graph JSON, inline or as a file path.
    #[arg(long)]
    graph: String,
}

#[derive(Subcommand, Debug)]
enum SftCmd {
    /// Validate a graph, a tabular element, or both.
    Validate {
        #[arg(long)]
        graph: Option<String>,
        #[arg(long)]
        element: Option<String>,
    },
    /// Product a1 a2 ... ak of tabular elements, applying ak first.
    Compose(ElementsArg),
    Support(ElementArg),
    /// Generators and the base family around x0.
    Base {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        x0: String,
        #[arg(long, default_value_t = 1)]
        level: usize,
    },
    ToThompson(ElementArg),
    FromThompson {
        #[command(flatten)]
        element: ElementArg,
        /// Defaults to the full n-shift.
        #[arg(long)]
        graph: Option<String>,
    },
    CheckBase {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        x0: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long)]
        depth: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum SuiteCmd {
    /// Runs acceptance criteria 1 to 10.
    Acceptance(SeedArg),
}

/// Parses `args` (including the program name) and runs the command,
/// reading the depth override from the process environment.
pub fn run(args: &[String]) -> CommandResult {
    run_with_depth_cap(args, std::env::var(DEPTH_CAP_VAR).ok().as_deref())
}

/// Like [`run`] with an explicit value for the depth override.
pub fn run_with_depth_cap(args: &[String], depth_cap: Option<&str>) -> CommandResult {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    CommandResult { code: EXIT_OK, stdout: text, stderr: String::new() }
                }
                _ => CommandResult { code: EXIT_USAGE, stdout: String::new(), stderr: text },
            };
        }
    };
    let mut stderr = String::new();
    let outcome = parse_depth_cap(depth_cap).and_then(|cap| dispatch(cli.command, cap, &mut stderr));
    match outcome {
        Ok(value) => {
            let mut stdout = serde_json::to_string_pretty(&value).expect("JSON values serialize");
            stdout.push('\n');
            CommandResult { code: EXIT_OK, stdout, stderr }
        }
        Err(e) => {
            stderr.push_str(&format!("error: {}\n", e.message()));
            CommandResult { code: e.code(), stdout: String::new(), stderr }
        }
    }
}

fn parse_depth_cap(raw: Option<&str>) -> Result<Option<u32>, CliError> {
    raw.map(|s| {
        s.trim()
            .parse::<u32>()
            .ok()
            .filter(|&d| d > 0)
            .ok_or_else(|| CliError::Usage(format!("{DEPTH_CAP_VAR} must be a positive integer, got {s:?}")))
    })
    .transpose()
}

/// Inline JSON if the argument starts like a JSON document, otherwise a path.
fn read_input(arg: &str) -> Result<String, CliError> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(Path::new(arg)).map_err(|e| CliError::Data(format!("cannot read {arg}: {e}")))
}

fn parse_json(arg: &str) -> Result<Value, CliError> {
    serde_json::from_str(&read_input(arg)?).map_err(|e| CliError::Data(e.to_string()))
}

fn element(arg: &str) -> Result<PLMap, CliError> {
    PLMap::from_json(&read_input(arg)?).map_err(CliError::Data)
}

fn elements(arg: &str) -> Result<Vec<PLMap>, CliError> {
    serde_json::from_str(&read_input(arg)?).map_err(|e| CliError::Data(e.to_string()))
}

fn tabular(arg: &str) -> Result<TabularElement, CliError> {
    TabularElement::from_json(&read_input(arg)?).map_err(CliError::Data)
}

fn graph(arg: &str) -> Result<Graph, CliError> {
    Graph::from_json(&read_input(arg)?).map_err(CliError::Data)
}

fn character(arg: &CharacterArg) -> Result<Character, CliError> {
    arg.character.parse::<Character>().map_err(CliError::from)
}

fn rational(text: &str) -> Result<Rational, CliError> {
    text.trim().parse().map_err(|e: ht_core::exactnum::NumError| CliError::Data(e.to_string()))
}

/// Parses `"a,b"` into a base set of `(0, r)`.
fn base_set(space: &SpaceArgs, text: &str) -> Result<BaseSet, CliError> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| CliError::Usage(format!("expected an interval \"a,b\", got {text:?}")))?;
    Ok(BaseSet::new(space.n, space.r, rational(a)?, rational(b)?)?)
}

fn to_value<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("library types serialize")
}

fn product<T>(items: Vec<T>, compose: impl Fn(&T, &T) -> Result<T, CliError>) -> Result<T, CliError> {
    let mut iter = items.into_iter();
    let first = iter.next().ok_or_else(|| CliError::Data("empty element list".into()))?;
    iter.try_fold(first, |acc, next| compose(&acc, &next))
}

fn dispatch(command: Command, depth_cap: Option<u32>, stderr: &mut String) -> CliResult {
    match command {
        Command::Elem(cmd) => elem(cmd),
        Command::Witness(cmd) => witness(cmd, depth_cap),
        Command::Char(cmd) => chars(cmd),
        Command::Sft(cmd) => sft(cmd, depth_cap),
        Command::Suite(SuiteCmd::Acceptance(seed)) => {
            let outcomes = acceptance(seed.seed);
            stderr.push_str(&summary_table(&outcomes));
            Ok(json!({
                "seed": seed.seed,
                "all_pass": outcomes.iter().all(|o| o.pass),
                "criteria": outcomes.iter().map(|o| json!({
                    "id": o.id,
                    "title": o.title,
                    "pass": o.pass,
                    "detail": o.detail,
                })).collect::<Vec<_>>(),
            }))
        }
    }
}

fn elem(cmd: ElemCmd) -> CliResult {
    match cmd {
        ElemCmd::Validate { element: e, family } => {
            let mut g = element(&e.element)?;
            if let Some(family) = family {
                g = g.with_family(family)?;
            }
            Ok(json!({ "valid": true, "element": g }))
        }
        ElemCmd::Compose(e) => {
            let g = product(elements(&e.elements)?, |a, b| Ok(a.compose(b)?))?;
            Ok(to_value(&g))
        }
        ElemCmd::Inverse(e) => Ok(to_value(&element(&e.element)?.inverse())),
        ElemCmd::Eval { element: e, at } => {
            let g = element(&e.element)?;
            let x = rational(&at)?;
            let y = g.evaluate(&x)?;
            Ok(json!({ "x": x, "value": y }))
        }
        ElemCmd::Support(e) => {
            let support = element(&e.element)?.support();
            Ok(json!({ "support": support.to_string(), "intervals": support }))
        }
        ElemCmd::FixMeasure(e) => Ok(json!({ "fix_measure": element(&e.element)?.fix_measure() })),
        ElemCmd::Abel(e) => Ok(to_value(&element(&e.element)?.endpoint_slopes()?)),
        ElemCmd::Sign(e) => Ok(json!({ "sign": sign_invariant(&element(&e.element)?)? })),
    }
}

fn checks_pass(checks: &[ht_core::witness::Check]) -> bool {
    checks.iter().all(|c| c.pass)
}

fn witness(cmd: WitnessCmd, depth_cap: Option<u32>) -> CliResult {
    match cmd {
        WitnessCmd::Cover(e) => {
            let g = element(&e.element)?;
            let u = covering_neighborhood(&g)?;
            let checks = certify_cover(&g, &u);
            Ok(json!({ "cover": u, "certificate": { "pass": checks_pass(&checks), "checks": checks } }))
        }
        WitnessCmd::MapInterval { space, from, to } => {
            let (u1, u2) = (base_set(&space, &from)?, base_set(&space, &to)?);
            let w = map_interval(&u1, &u2)?;
            let checks = certify_map_interval(&u1, &u2, &w.element);
            Ok(json!({
                "element": w.element,
                "branch": w.branch,
                "nodes": w.nodes,
                "certificate": { "pass": checks_pass(&checks), "checks": checks },
            }))
        }
        WitnessCmd::Displace { space, u1, u2, u3 } => {
            let (u1, u2, u3) = (base_set(&space, &u1)?, base_set(&space, &u2)?, base_set(&space, &u3)?);
            let w = displacement_witness(&u1, &u2, &u3)?;
            let checks = certify_displacement(&u1, &u2, &u3, &w.element);
            Ok(json!({
                "element": w.element,
                "branch": w.branch,
                "nodes": w.nodes,
                "certificate": { "pass": checks_pass(&checks), "checks": checks },
            }))
        }
        WitnessCmd::Join { space, u1, u2 } => {
            let (u1, u2) = (base_set(&space, &u1)?, base_set(&space, &u2)?);
            let u3 = join(&u1, &u2)?;
            let checks = certify_join(&u1, &u2, &u3);
            Ok(json!({ "join": u3, "certificate": { "pass": checks_pass(&checks), "checks": checks } }))
        }
        WitnessCmd::Conjugates { element: e, m, seed } => {
            let g = element(&e.element)?;
            let cap = depth_cap.unwrap_or(DEFAULT_DEPTH_CAP);
            Ok(to_value(&conjugate_sequence(&g, m, seed.seed, cap)?))
        }
        WitnessCmd::DisjointProduct { element: e, m } => {
            Ok(to_value(&disjoint_conjugates(&element(&e.element)?, m)?))
        }
        WitnessCmd::VerifyBase { space, samples, seed } => {
            let d = ht_core::plgroup::GroupDescriptor::new(space.n, space.r, Family::F0)?;
            let reports = verify_base(d, samples, seed.seed);
            Ok(json!({
                "n": space.n,
                "r": space.r,
                "samples": samples,
                "seed": seed.seed,
                "all_pass": reports.iter().all(|r| r.passed()),
                "reports": reports,
            }))
        }
    }
}

fn chars(cmd: CharCmd) -> CliResult {
    match cmd {
        CharCmd::Eval { character: c, element: e } => {
            let chi = character(&c)?;
            let value = chi.eval(&element(&e.element)?)?;
            let z = value.to_complex();
            Ok(json!({ "character": chi, "value": value.to_string(), "approx": [z.re, z.im] }))
        }
        CharCmd::Gram { character: c, elements: e } => Ok(to_value(&gram(&character(&c)?, &elements(&e.elements)?)?)),
        CharCmd::Axioms { character: c, elements: e } => {
            Ok(to_value(&axiom_report(&character(&c)?, &elements(&e.elements)?)?))
        }
        CharCmd::Mult { character: c, g, h } => {
            Ok(to_value(&multiplicativity_check(&character(&c)?, &element(&g)?, &element(&h)?)?))
        }
    }
}

fn point(graph: &Graph, arg: &str) -> Result<PeriodicPoint, CliError> {
    Ok(PeriodicPoint::from_json(graph, &read_input(arg)?)?)
}

fn sft(cmd: SftCmd, depth_cap: Option<u32>) -> CliResult {
    match cmd {
        SftCmd::Validate { graph: None, element: None } => {
            Err(CliError::Usage("sft validate needs --graph or --element".into()))
        }
        SftCmd::Validate { graph: g, element: e } => {
            let mut out = json!({ "valid": true });
            if let Some(g) = g {
                let g = graph(&g)?;
                out["graph"] = json!({ "vertices": g.vertex_count(), "edges": g.edges().len() });
            }
            if let Some(e) = e {
                out["element"] = tabular(&e)?.to_json_value();
            }
            Ok(out)
        }
        SftCmd::Compose(e) => {
            let list = match parse_json(&e.elements)? {
                Value::Array(items) => items,
                _ => return Err(CliError::Data("expected a JSON array of tabular elements".into())),
            };
            let items = list
                .iter()
                .map(|v| TabularElement::from_json(&v.to_string()).map_err(CliError::Data))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(product(items, |a, b| Ok(a.compose(b)?))?.to_json_value())
        }
        SftCmd::Support(e) => {
            let a = tabular(&e.element)?;
            let support = a.support();
            Ok(json!({ "support": support.display(a.graph()), "cylinders": support.to_ids(a.graph()) }))
        }
        SftCmd::Base { graph: g, x0, level } => {
            let g = graph(&g.graph)?;
            let x0 = point(&g, &x0)?;
            let generators: Vec<Vec<String>> = base_generators(&g, &x0, level).iter().map(|t| g.ids(t)).collect();
            let family: Vec<String> = base_family(&g, &x0, level).iter().map(|u| u.display(&g)).collect();
            Ok(json!({ "x0": x0.to_json(&g), "level": level, "generators": generators, "family": family }))
        }
        SftCmd::ToThompson(e) => Ok(to_value(&to_thompson(&tabular(&e.element)?)?)),
        SftCmd::FromThompson { element: e, graph: g } => {
            let h = element(&e.element)?;
            let g = match g {
                Some(g) => graph(&g)?,
                None => Graph::full_shift(h.descriptor().n as usize)?,
            };
            Ok(from_thompson(&h, &g)?.to_json_value())
        }
        SftCmd::CheckBase { graph: g, x0, samples, seed, depth } => {
            let g = graph(&g.graph)?;
            let x0 = point(&g, &x0)?;
            let depth = depth.or(depth_cap.map(|d| d as usize)).unwrap_or(DEFAULT_SFT_DEPTH);
            let reports = check_base_conditions(&g, &x0, samples, seed.seed, depth);
            Ok(json!({
                "samples": samples,
                "seed": seed.seed,
                "depth": depth,
                "all_pass": reports.iter().all(|r| r.passed()),
                "reports": reports,
            }))
        }
    }
}
