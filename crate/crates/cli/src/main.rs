//! Batch verification front end: materialize ranking rules, check axioms,
//! classify representations, enumerate weak orders, search signatures, and
//! reproduce the characterization results.
//!
//! Exit codes: 0 success, 1 property failure (some requested axiom fails,
//! an empty search, or an unmet reproduction expectation), 2 usage or input
//! error. Reports are deterministic: identical bytes across runs and across
//! worker counts.

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{Value, json};

use suffkit::alloc::{Bounds, ProfileSpace};
use suffkit::axioms::{self, Axiom};
use suffkit::characterize::{HarnessConfig, classify};
use suffkit::enumerate::{
    EnumBounds, SearchMode, ordered_bell, rank_levels, run_axiom, search_signature,
};
use suffkit::relations::{Rule, RuleSpec, materialize, profile_ids};
use suffkit::reproduce;
use suffkit::space::{SpaceSpec, ValidatedSpace, builtin};

#[derive(Parser)]
#[command(
    name = "suffkit",
    version,
    about = "Axiom checking and representation recovery for sufficientarian orderings on finite domains"
)]
struct Cli {
    /// Worker threads (default: all cores). Reports do not depend on this.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write the JSON report to this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SpaceArgs {
    /// Built-in fixture name (B2, C3, G2, G3, D12, U5, U9) or a space JSON
    /// file path.
    #[arg(long)]
    space: String,
    /// Number of agents (at least 2).
    #[arg(long)]
    agents: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Materialize a rule and check axioms against it.
    Check {
        #[command(flatten)]
        space: SpaceArgs,
        /// Inline rule JSON (starts with '{') or a rule file path.
        #[arg(long)]
        rule: String,
        /// Comma-separated axiom list, or "all" for every axiom the space
        /// supports.
        #[arg(long, default_value = "all")]
        axioms: String,
    },
    /// Materialize a rule and report its representation ladder.
    Derive {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        rule: String,
    },
    /// Count weak orders over the profile space (direct) or its orbit
    /// quotient, cross-checking the ordered Bell recurrence.
    Enumerate {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, default_value = "quotient")]
        mode: String,
    },
    /// Exhaustively search enumerated weak orders for an axiom signature.
    Search {
        #[command(flatten)]
        space: SpaceArgs,
        /// Axioms that must hold, comma-separated.
        #[arg(long, default_value = "")]
        satisfy: String,
        /// Axioms that must fail, comma-separated.
        #[arg(long, default_value = "")]
        violate: String,
        #[arg(long, default_value = "quotient")]
        mode: String,
    },
    /// Re-run a named result (thm1, thm2, prop4, independence, example1,
    /// example2, example3, mariotti) over its documented fixtures.
    Reproduce { target: String },
}

struct CliError(String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

fn load_space(name_or_path: &str) -> Result<ValidatedSpace, CliError> {
    let spec = match builtin(name_or_path) {
        Ok(spec) => spec,
        Err(_) if name_or_path.contains('.') || name_or_path.contains('/') => {
            let text = fs::read_to_string(name_or_path)
                .map_err(|e| CliError(format!("cannot read space file `{name_or_path}`: {e}")))?;
            SpaceSpec::from_json(&text)?
        }
        Err(e) => return Err(e.into()),
    };
    Ok(ValidatedSpace::load(&spec)?)
}

fn load_rule(
    arg: &str,
    space: &ValidatedSpace,
    agents: usize,
) -> Result<(RuleSpec, Rule), CliError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg)
            .map_err(|e| CliError(format!("cannot read rule file `{arg}`: {e}")))?
    };
    let mut spec = RuleSpec::from_json(&text)?;
    // Inline explicit-relation file references before resolving.
    if let RuleSpec::Explicit {
        file: Some(path),
        levels,
        table,
    } = &spec
    {
        if levels.is_some() || table.is_some() {
            return Err(CliError(
                "explicit rule needs exactly one of `file`, `levels`, `table`".into(),
            ));
        }
        let text = fs::read_to_string(path)
            .map_err(|e| CliError(format!("cannot read relation file `{path}`: {e}")))?;
        let inner: Value = serde_json::from_str(&text)
            .map_err(|e| CliError(format!("invalid relation file `{path}`: {e}")))?;
        spec = serde_json::from_value(json!({
            "type": "explicit",
            "levels": inner.get("levels").cloned(),
            "table": inner.get("table").cloned(),
        }))
        .map_err(|e| CliError(format!("invalid relation file `{path}`: {e}")))?;
    }
    let rule = spec.resolve(space, agents)?;
    Ok((spec, rule))
}

fn parse_axiom_list(s: &str) -> Result<Vec<Axiom>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| Axiom::parse(p).ok_or_else(|| CliError(format!("unknown axiom `{p}`"))))
        .collect()
}

/// Every axiom the space can express: the seven core ones, plus
/// order/meet/unit-chain dependent ones when the structure is present.
fn applicable_axioms(space: &ValidatedSpace) -> Vec<Axiom> {
    let mut out = vec![
        Axiom::WeakOrder,
        Axiom::Symmetry,
        Axiom::Separability,
        Axiom::SufficientarianJudgment,
        Axiom::DualSufficientarianJudgment,
        Axiom::WeakSufficientarianJudgment,
        Axiom::NonDegeneracy,
    ];
    if space.has_order() {
        out.push(Axiom::Monotonicity);
    }
    if space.meet_table().is_some() {
        out.push(Axiom::GeqComplements);
    }
    if let Some(vals) = space.numeric_chain()
        && vals.iter().max() == Some(&suffkit::Rat::ONE)
    {
        out.push(Axiom::AbsoluteIndividualImprovement);
        // The threshold axiom quantifies over grid values strictly
        // inside (0,1); with none, "all" skips it (an explicit request
        // still runs it and fails on the empty candidate set).
        if vals
            .iter()
            .any(|v| *v > suffkit::Rat::ZERO && *v < suffkit::Rat::ONE)
        {
            out.push(Axiom::PrioritarianThreshold);
        }
    }
    out
}

fn emit(report: &Value, human: &str, out: &Option<PathBuf>) -> Result<(), CliError> {
    println!("{human}");
    if let Some(path) = out {
        let mut text = serde_json::to_string_pretty(report)
            .map_err(|e| CliError(format!("cannot serialize report: {e}")))?;
        text.push('\n');
        fs::write(path, text)
            .map_err(|e| CliError(format!("cannot write `{}`: {e}", path.display())))?;
    }
    Ok(())
}

fn cmd_check(
    space_args: &SpaceArgs,
    rule_arg: &str,
    axioms_arg: &str,
    out: &Option<PathBuf>,
) -> Result<u8, CliError> {
    let space = load_space(&space_args.space)?;
    let ps = ProfileSpace::new(space.len(), space_args.agents, &Bounds::default())?;
    let (rule_spec, rule) = load_rule(rule_arg, &space, space_args.agents)?;
    let rel = materialize(&rule, &space, &ps)?;

    let requested = if axioms_arg.trim() == "all" {
        applicable_axioms(&space)
    } else {
        parse_axiom_list(axioms_arg)?
    };

    let mut verdicts = Vec::new();
    let mut all_hold = true;
    let mut human = vec![format!(
        "check: space {} ({} elements), {} agents, rule {}",
        space.name(),
        space.len(),
        space_args.agents,
        rule.name()
    )];
    for axiom in &requested {
        let rendered = if *axiom == Axiom::PrioritarianThreshold {
            let outcome = axioms::check_prioritarian_threshold(&rel, &space, &ps)?;
            all_hold &= outcome.verdict.holds;
            outcome.render(&space, &ps)
        } else {
            let v = run_axiom(*axiom, &rel, &space, &ps)?;
            all_hold &= v.holds;
            v.render(&space, &ps)
        };
        human.push(render_verdict_line(&rendered));
        verdicts.push(rendered);
    }
    human.push(format!(
        "result: {}",
        if all_hold {
            "all hold"
        } else {
            "violations found"
        }
    ));

    let report = json!({
        "schema": 1,
        "command": "check",
        "space": space.name(),
        "agents": space_args.agents,
        "rule": rule_spec,
        "verdicts": verdicts,
        "all_hold": all_hold,
    });
    emit(&report, &human.join("\n"), out)?;
    Ok(if all_hold { 0 } else { 1 })
}

fn render_verdict_line(v: &Value) -> String {
    let axiom = v["axiom"].as_str().unwrap_or("?");
    let holds = v["holds"].as_bool().unwrap_or(false);
    let checked = v["checked"].as_u64().unwrap_or(0);
    if holds {
        format!("  {axiom}: holds ({checked} instantiations)")
    } else if !v["witness"].is_null() {
        format!("  {axiom}: FAILS, witness {}", v["witness"])
    } else if axiom == "prioritarian_threshold" {
        format!("  {axiom}: FAILS (no grid value works; see per_beta)")
    } else {
        format!("  {axiom}: FAILS (no strict pair exists)")
    }
}

fn cmd_derive(
    space_args: &SpaceArgs,
    rule_arg: &str,
    out: &Option<PathBuf>,
) -> Result<u8, CliError> {
    let space = load_space(&space_args.space)?;
    let ps = ProfileSpace::new(space.len(), space_args.agents, &Bounds::default())?;
    let (rule_spec, rule) = load_rule(rule_arg, &space, space_args.agents)?;
    let rel = materialize(&rule, &space, &ps)?;
    let classification = classify(&rel, &space, &ps);
    let rendered = classification.render(&space, &ps);

    let mut human = vec![format!(
        "derive: space {} ({} elements), {} agents, rule {}",
        space.name(),
        space.len(),
        space_args.agents,
        rule.name()
    )];
    let flag = |v: &Value| match v {
        Value::Bool(true) => "yes",
        Value::Bool(false) => "no",
        _ => "n/a",
    };
    human.push(format!(
        "  sufficientarian: {} (S = {})",
        flag(&rendered["is_sufficientarian"]),
        rendered["sufficient_set"]
    ));
    human.push(format!(
        "  monotone: {}, generalized threshold: {}, threshold: {} (beta = {})",
        flag(&rendered["is_monotone_sufficientarian"]),
        flag(&rendered["is_generalized_threshold"]),
        flag(&rendered["is_threshold"]),
        rendered["threshold"]
    ));
    human.push(format!(
        "  endogenous leximin: {}, star order: {}",
        flag(&rendered["is_endogenous_leximin"]),
        rendered["star_order"]["levels"]
    ));

    let report = json!({
        "schema": 1,
        "command": "derive",
        "space": space.name(),
        "agents": space_args.agents,
        "rule": rule_spec,
        "classification": rendered,
    });
    emit(&report, &human.join("\n"), out)?;
    Ok(0)
}

fn cmd_enumerate(
    space_args: &SpaceArgs,
    mode: &str,
    out: &Option<PathBuf>,
) -> Result<u8, CliError> {
    let space = load_space(&space_args.space)?;
    let ps = ProfileSpace::new(space.len(), space_args.agents, &Bounds::default())?;
    let mode = SearchMode::parse(mode).ok_or_else(|| CliError(format!("unknown mode `{mode}`")))?;
    let bounds = EnumBounds::default();
    let orbits = ps.orbits();

    let (k, mut count) = match mode {
        SearchMode::Direct => (ps.len(), 0u64),
        SearchMode::Quotient => (orbits.orbit_count(), 0u64),
    };
    match mode {
        SearchMode::Direct => {
            suffkit::enumerate::WeakOrders::new(k, &bounds)?.for_each(|_, _| count += 1)
        }
        SearchMode::Quotient => {
            suffkit::enumerate::SymmetricWeakOrders::new(&ps, &orbits, &bounds)?
                .for_each(|_, _| count += 1)
        }
    }
    let expected = ordered_bell(k).map(|c| c.to_string());
    let matches = expected.as_deref() == Some(count.to_string().as_str());

    let report = json!({
        "schema": 1,
        "command": "enumerate",
        "space": space.name(),
        "agents": space_args.agents,
        "mode": mode.as_str(),
        "profiles": ps.len(),
        "orbits": orbits.orbit_count(),
        "k": k,
        "count": count,
        "ordered_bell": expected,
        "match": matches,
    });
    let human = format!(
        "enumerate: {} weak orders over {} items ({} mode); recurrence check: {}",
        count,
        k,
        mode.as_str(),
        if matches { "ok" } else { "MISMATCH" }
    );
    emit(&report, &human, out)?;
    Ok(if matches { 0 } else { 1 })
}

fn cmd_search(
    space_args: &SpaceArgs,
    satisfy: &str,
    violate: &str,
    mode: &str,
    out: &Option<PathBuf>,
) -> Result<u8, CliError> {
    let space = load_space(&space_args.space)?;
    let ps = ProfileSpace::new(space.len(), space_args.agents, &Bounds::default())?;
    let mode = SearchMode::parse(mode).ok_or_else(|| CliError(format!("unknown mode `{mode}`")))?;
    let satisfy = parse_axiom_list(satisfy)?;
    let violate = parse_axiom_list(violate)?;

    let outcome = search_signature(
        &space,
        &ps,
        &satisfy,
        &violate,
        mode,
        &EnumBounds::default(),
    )?;
    let first = outcome.first.as_ref().map(|hit| {
        let levels: Vec<Vec<Vec<String>>> = rank_levels(&hit.ranks)
            .iter()
            .map(|level| {
                level
                    .iter()
                    .map(|&idx| profile_ids(&space, &ps, idx))
                    .collect()
            })
            .collect();
        json!({"index": hit.index, "levels": levels})
    });

    let report = json!({
        "schema": 1,
        "command": "search",
        "space": space.name(),
        "agents": space_args.agents,
        "mode": mode.as_str(),
        "satisfy": satisfy.iter().map(|a| a.as_str()).collect::<Vec<_>>(),
        "violate": violate.iter().map(|a| a.as_str()).collect::<Vec<_>>(),
        "scanned": outcome.scanned,
        "count": outcome.count,
        "first": first,
    });
    let human = match &outcome.first {
        Some(hit) => format!(
            "search: {} of {} weak orders match; first at enumeration index {}",
            outcome.count, outcome.scanned, hit.index
        ),
        None => format!("search: no match among {} weak orders", outcome.scanned),
    };
    emit(&report, &human, out)?;
    Ok(if outcome.count > 0 { 0 } else { 1 })
}

fn cmd_reproduce(target: &str, out: &Option<PathBuf>) -> Result<u8, CliError> {
    let report = match reproduce::run_named(target, &HarnessConfig::default()) {
        Ok(r) => r,
        Err(reproduce::ReproduceError::UnknownTarget(t)) => {
            return Err(CliError(format!(
                "unknown reproduce target `{t}` (expected one of thm1, thm2, prop4, independence, example1, example2, example3, mariotti)"
            )));
        }
        Err(e) => return Err(CliError(e.to_string())),
    };
    let human = format!(
        "reproduce {}: {}",
        report.target.as_str(),
        if report.ok {
            "ok"
        } else {
            "EXPECTATIONS NOT MET"
        }
    );
    emit(&report.json, &human, out)?;
    Ok(if report.ok { 0 } else { 1 })
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    if let Some(workers) = cli.workers {
        if workers == 0 {
            return Err(CliError("--workers must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .map_err(|e| CliError(format!("cannot configure worker pool: {e}")))?;
    }
    match &cli.command {
        Command::Check {
            space,
            rule,
            axioms,
        } => cmd_check(space, rule, axioms, &cli.out),
        Command::Derive { space, rule } => cmd_derive(space, rule, &cli.out),
        Command::Enumerate { space, mode } => cmd_enumerate(space, mode, &cli.out),
        Command::Search {
            space,
            satisfy,
            violate,
            mode,
        } => cmd_search(space, satisfy, violate, mode, &cli.out),
        Command::Reproduce { target } => cmd_reproduce(target, &cli.out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
