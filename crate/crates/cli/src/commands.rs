//! Subcommand dispatch. Every report names its mode (pure, mixed-grid k,
//! grid step) so approximate results are never mistaken for exact ones.

use std::fmt::Write as _;
use std::fs;

use serde_json::{json, Value};

use optimin_core::coop::{
    self, coalition_label, coop_value, nucleolus, optimin_coop, optimin_coop_with_floor, shapley, CoreReport, TUGame,
};
use optimin_core::decisions::{decision_value, gilboa_reduction_check, optimin_acts};
use optimin_core::generators::{named_game, named_tu, parse_range, sweep, Family, NamedTag};
use optimin_core::io;
use optimin_core::matching::{
    deferred_acceptance, is_stable, matching_value, optimin_matchings, profitable_group_deviations, MarriageProblem,
    Matching, Side, Stability,
};
use optimin_core::noncoop::{
    maximin_profile, nash_pure, optimin_grid_2p, optimin_pure, value_mixed_2p, value_pure_with, value_table_with,
    DeviationRule, EvaluatedProfile,
};
use optimin_core::selftest::selftest;
use optimin_core::zerosum::{maximin_lp, optimin_equals_maximin_check, StatisticalGame};
use optimin_core::{Error, NormalFormGame, PureProfile, Result};

use crate::render::{self, header, jlabels, jmixture, jnum, jnums, jprofile, mixture, num, nums, output};
use crate::{input, Cli, Command, CoopAction, Format, ZerosumAction};

pub struct Outcome {
    pub text: String,
    /// False when the command ran but reports a failure (selftest).
    pub success: bool,
}

fn ok(text: String) -> Result<Outcome> {
    Ok(Outcome { text, success: true })
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let f = cli.format;
    match &cli.command {
        Command::Optimin { game, mode } => match mode.mixed_grid {
            None => optimin(f, game),
            Some(k) => optimin_grid(f, game, k),
        },
        Command::Value { game, profile, mixed, any_deviation } => {
            let rule = if *any_deviation { DeviationRule::Any } else { DeviationRule::BetterResponse };
            value(f, game, profile.as_deref(), mixed.as_deref(), rule)
        }
        Command::Nash { game } => nash(f, game),
        Command::Maximin { game } => maximin(f, game),
        Command::Zerosum { action } => match action {
            ZerosumAction::Solve { game } => zerosum_solve(f, game),
            ZerosumAction::Check { game, profile } => zerosum_check(f, game, profile),
        },
        Command::Coop { action } => coop_command(f, action),
        Command::Match { problem, matching } => matching_command(f, problem, matching.as_deref()),
        Command::Decide { problem } => decide(f, problem),
        Command::Gen { family, params, out } => generate(family, params, out.as_deref()),
        Command::Sweep { family, param, range, params } => sweep_command(f, family, param, range, params),
        Command::Selftest => {
            let (text, passed) = selftest()?;
            Ok(Outcome { text, success: passed })
        }
    }
}

fn pure_rows(game: &NormalFormGame, rows: &[EvaluatedProfile<PureProfile>], table: &mut String) {
    let width = rows.iter().map(|e| render::profile(game, &e.profile).len()).max().unwrap_or(0);
    for e in rows {
        let _ = writeln!(table, "  {:<width$}  value {}", render::profile(game, &e.profile), nums(&e.value));
    }
}

fn pure_json(game: &NormalFormGame, rows: &[EvaluatedProfile<PureProfile>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|e| {
                json!({
                    "profile": jprofile(game, &e.profile),
                    "value": jnums(&e.value),
                    "witnesses": e.witnesses.iter().map(|w| jprofile(game, w)).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

fn optimin(f: Format, source: &str) -> Result<Outcome> {
    let game = input::game(source)?;
    let set = optimin_pure(&game);
    ok(output(
        f,
        || {
            let mut t = header(&game, source);
            let _ = writeln!(t, "mode: pure\noptimin profiles: {}", set.len());
            pure_rows(&game, &set, &mut t);
            t
        },
        || json!({"game": source, "mode": "pure", "optimin": pure_json(&game, &set)}),
    ))
}

fn optimin_grid(f: Format, source: &str, k: usize) -> Result<Outcome> {
    let game = input::game(source)?;
    let grid = optimin_grid_2p(&game, k)?;
    ok(output(
        f,
        || {
            let mut t = header(&game, source);
            let _ = writeln!(
                t,
                "mode: mixed-grid k={k} (grid-approximate, {} profiles evaluated)\noptimin profiles: {}",
                grid.evaluated,
                grid.points.len()
            );
            for e in &grid.points {
                let _ = writeln!(t, "  {}  value {}", mixture(&e.profile), nums(&e.value));
            }
            t
        },
        || {
            let points: Vec<Value> = grid
                .points
                .iter()
                .map(|e| json!({"profile": jmixture(&e.profile), "value": jnums(&e.value)}))
                .collect();
            json!({"game": source, "mode": "mixed-grid", "resolution": k, "evaluated": grid.evaluated, "optimin": points})
        },
    ))
}

fn value(f: Format, source: &str, profile: Option<&str>, mixed: Option<&str>, rule: DeviationRule) -> Result<Outcome> {
    let game = input::game(source)?;
    let rule_name = match rule {
        DeviationRule::BetterResponse => "better-response",
        DeviationRule::Any => "any-deviation",
    };
    if let Some(text) = mixed {
        if rule == DeviationRule::Any {
            return Err(Error::Parameter("--any-deviation applies to pure profiles only".into()));
        }
        let p = input::mixed(text, &game)?;
        let e = value_mixed_2p(&game, &p)?;
        return ok(output(
            f,
            || {
                let mut t = header(&game, source);
                let _ = writeln!(t, "mode: mixed (exact)\nprofile {}\nvalue {}", mixture(&p), nums(&e.value));
                for (i, w) in e.witnesses.iter().enumerate() {
                    let _ = writeln!(t, "  worst case of {} at {}", game.players()[i], mixture(w));
                }
                t
            },
            || {
                json!({
                    "game": source, "mode": "mixed", "profile": jmixture(&p), "value": jnums(&e.value),
                    "witnesses": e.witnesses.iter().map(|w| jmixture(w)).collect::<Vec<_>>(),
                })
            },
        ));
    }
    let rows = match profile {
        Some(text) => vec![value_pure_with(&game, &game.parse_profile(text)?, rule)?],
        None => value_table_with(&game, rule),
    };
    ok(output(
        f,
        || {
            let mut t = header(&game, source);
            let _ = writeln!(t, "mode: pure, deviations: {rule_name}");
            pure_rows(&game, &rows, &mut t);
            t
        },
        || json!({"game": source, "mode": "pure", "deviations": rule_name, "values": pure_json(&game, &rows)}),
    ))
}

fn nash(f: Format, source: &str) -> Result<Outcome> {
    let game = input::game(source)?;
    let set = nash_pure(&game);
    ok(output(
        f,
        || {
            let mut t = header(&game, source);
            let _ = writeln!(t, "mode: pure\nnash equilibria: {}", set.len());
            for p in &set {
                let _ =
                    writeln!(t, "  {}  payoff {}", render::profile(&game, p), nums(&game.payoff(p).expect("valid")));
            }
            t
        },
        || {
            let eq: Vec<Value> = set
                .iter()
                .map(|p| json!({"profile": jprofile(&game, p), "payoff": jnums(&game.payoff(p).expect("valid"))}))
                .collect();
            json!({"game": source, "mode": "pure", "nash": eq})
        },
    ))
}

fn maximin(f: Format, source: &str) -> Result<Outcome> {
    let game = input::game(source)?;
    let sets = maximin_profile(&game);
    let names = |m: &optimin_core::noncoop::MaximinSet| -> Vec<String> {
        m.strategies.iter().map(|&s| game.strategy_label(m.player, s).to_string()).collect()
    };
    ok(output(
        f,
        || {
            let mut t = header(&game, source);
            t.push_str("mode: pure\n");
            for m in &sets {
                let _ = writeln!(
                    t,
                    "  player {}: security {}, maximin strategies {{{}}}",
                    game.players()[m.player],
                    num(&m.security),
                    names(m).join(", ")
                );
            }
            t
        },
        || {
            let players: Vec<Value> = sets
                .iter()
                .map(|m| json!({"player": game.players()[m.player], "security": jnum(&m.security), "strategies": names(m)}))
                .collect();
            json!({"game": source, "mode": "pure", "maximin": players})
        },
    ))
}

fn statistical(source: &str) -> Result<StatisticalGame> {
    StatisticalGame::new(input::game(source)?)
}

fn zerosum_solve(f: Format, source: &str) -> Result<Outcome> {
    let game = statistical(source)?;
    let sols = [maximin_lp(&game, 0)?, maximin_lp(&game, 1)?];
    let g = game.game();
    ok(output(
        f,
        || {
            let mut t = header(g, source);
            t.push_str("mode: mixed (exact LP)\n");
            for s in &sols {
                let _ = writeln!(
                    t,
                    "  {}: maximin mixture {} guarantees {}",
                    g.players()[s.player],
                    mixture(std::slice::from_ref(&s.mixture)),
                    num(&s.value)
                );
            }
            let _ = writeln!(t, "game value (to {}): {}", g.players()[0], num(&sols[0].value));
            t
        },
        || {
            let players: Vec<Value> = sols
                .iter()
                .map(|s| {
                    json!({
                        "player": g.players()[s.player],
                        "strategies": g.strategies()[s.player],
                        "mixture": jnums(&s.mixture),
                        "guarantee": jnum(&s.value),
                    })
                })
                .collect();
            json!({"game": source, "mode": "mixed", "value": jnum(&sols[0].value), "players": players})
        },
    ))
}

fn zerosum_check(f: Format, source: &str, text: &str) -> Result<Outcome> {
    let game = statistical(source)?;
    let p = input::mixed(text, game.game())?;
    let holds = optimin_equals_maximin_check(&game, &p)?;
    ok(output(
        f,
        || {
            let mut t = header(game.game(), source);
            let verdict = if holds { "is" } else { "is not" };
            let _ = writeln!(t, "mode: mixed (exact LP)\n{} {verdict} an optimin (maximin) pair", mixture(&p));
            t
        },
        || json!({"game": source, "mode": "mixed", "profile": jmixture(&p), "optimin": holds}),
    ))
}

fn tu_header(game: &TUGame, source: &str) -> String {
    format!(
        "game: {source} ({} players, {})\n",
        game.num_players(),
        if game.is_cohesive() { "cohesive" } else { "not cohesive" }
    )
}

fn coop_command(f: Format, action: &CoopAction) -> Result<Outcome> {
    match action {
        CoopAction::Optimin { game, step, floor } => {
            let source = &game.game;
            let g = input::tu_game(source)?;
            let step = input::rational(step, "--step")?;
            let result = match floor {
                Some(text) => optimin_coop_with_floor(&g, &step, &input::rationals(text, "floor")?)?,
                None => optimin_coop(&g, &step)?,
            };
            ok(output(
                f,
                || {
                    let mut t = tu_header(&g, source);
                    let _ = writeln!(
                        t,
                        "mode: grid-step {} (lattice of {} allocations, floor {})\noptimin allocations: {}",
                        result.step,
                        result.lattice_size,
                        nums(&result.floor),
                        result.points.len()
                    );
                    for (x, v) in &result.points {
                        let _ = writeln!(t, "  {}  value {}", nums(x), nums(v));
                    }
                    t
                },
                || {
                    let points: Vec<Value> =
                        result.points.iter().map(|(x, v)| json!({"allocation": jnums(x), "value": jnums(v)})).collect();
                    json!({
                        "game": source, "mode": "grid-step", "step": jnum(&result.step), "floor": jnums(&result.floor),
                        "lattice_size": result.lattice_size, "optimin": points,
                    })
                },
            ))
        }
        CoopAction::Value { game, alloc } => {
            let source = &game.game;
            let g = input::tu_game(source)?;
            let x = input::allocation(alloc)?;
            let v = coop_value(&g, &x)?;
            let threats: Vec<(usize, Vec<String>)> = (0..g.num_players())
                .map(|i| Ok((i, coop::dominating_coalitions(&g, &x, i)?.into_iter().map(coalition_label).collect())))
                .collect::<Result<_>>()?;
            ok(output(
                f,
                || {
                    let mut t = tu_header(&g, source);
                    let _ = writeln!(t, "mode: exact\nallocation {}\nvalue {}", nums(&x), nums(&v));
                    for (i, s) in &threats {
                        let _ = writeln!(t, "  player {}: deviating coalitions {{{}}}", i + 1, s.join("} {"));
                    }
                    t
                },
                || {
                    let threats: Vec<Value> = threats.iter().map(|(_, s)| jlabels(s.iter().cloned())).collect();
                    json!({"game": source, "mode": "exact", "allocation": jnums(&x), "value": jnums(&v), "deviations": threats})
                },
            ))
        }
        CoopAction::Core { game } => {
            let source = &game.game;
            let g = input::tu_game(source)?;
            let report = coop::core(&g);
            ok(output(
                f,
                || {
                    let mut t = tu_header(&g, source);
                    t.push_str("mode: exact LP\n");
                    match &report {
                        CoreReport::Empty => t.push_str("core: empty\n"),
                        CoreReport::Nonempty { witness, ranges } => {
                            let kind = if report.is_singleton() { "single point" } else { "nonempty" };
                            let _ = writeln!(t, "core: {kind}, contains {}", nums(witness));
                            for (i, (lo, hi)) in ranges.iter().enumerate() {
                                let _ = writeln!(t, "  x{} in [{}, {}]", i + 1, num(lo), num(hi));
                            }
                        }
                    }
                    t
                },
                || match &report {
                    CoreReport::Empty => json!({"game": source, "mode": "exact", "core": "empty"}),
                    CoreReport::Nonempty { witness, ranges } => json!({
                        "game": source, "mode": "exact",
                        "core": if report.is_singleton() { "single point" } else { "nonempty" },
                        "witness": jnums(witness),
                        "ranges": ranges.iter().map(|(lo, hi)| jnums(&[lo.clone(), hi.clone()])).collect::<Vec<_>>(),
                    }),
                },
            ))
        }
        CoopAction::Shapley { game } => point_report(f, &game.game, "shapley", shapley),
        CoopAction::Nucleolus { game } => point_report(f, &game.game, "nucleolus", nucleolus),
    }
}

fn point_report(
    f: Format,
    source: &str,
    what: &str,
    solve: fn(&TUGame) -> Result<coop::Allocation>,
) -> Result<Outcome> {
    let g = input::tu_game(source)?;
    let x = solve(&g)?;
    ok(output(
        f,
        || format!("{}mode: exact\n{what}: {}\n", tu_header(&g, source), nums(&x)),
        || json!({"game": source, "mode": "exact", what: jnums(&x)}),
    ))
}

fn matching_json(problem: &MarriageProblem, m: &Matching) -> Value {
    let pairs: Vec<Value> = (0..problem.size())
        .map(|a| jlabels([problem.label(a), problem.label(m.partner(a))]))
        .chain(
            (problem.size()..2 * problem.size())
                .filter(|&b| m.partner(b) == b)
                .map(|b| jlabels([problem.label(b), problem.label(b)])),
        )
        .collect();
    Value::Array(pairs)
}

fn value_labels(problem: &MarriageProblem, value: &[usize]) -> Vec<String> {
    value.iter().map(|&j| problem.label(j).to_string()).collect()
}

fn stability_text(problem: &MarriageProblem, s: &Stability) -> String {
    match s {
        Stability::Stable => "stable".into(),
        Stability::BlockingIndividual(i) => format!("blocked by {} (prefers being single)", problem.label(*i)),
        Stability::BlockingPair(a, b) => format!("blocked by the pair {}-{}", problem.label(*a), problem.label(*b)),
    }
}

fn matching_command(f: Format, path: &str, matching: Option<&str>) -> Result<Outcome> {
    let p = input::marriage(path)?;
    if let Some(text) = matching {
        let m = input::matching(text, &p)?;
        let stability = is_stable(&p, &m)?;
        let value = matching_value(&p, &m)?;
        let deviations = profitable_group_deviations(&p, &m)?;
        let group =
            |d: &optimin_core::matching::GroupDeviation| -> Vec<String> {
                d.rematch
                    .iter()
                    .filter(|(i, j)| i <= j)
                    .map(|&(i, j)| {
                        if i == j {
                            format!("{}-single", p.label(i))
                        } else {
                            format!("{}-{}", p.label(i), p.label(j))
                        }
                    })
                    .collect()
            };
        return ok(output(
            f,
            || {
                let mut t = format!("problem: {path} ({} + {} individuals)\nmode: exhaustive\n", p.size(), p.size());
                let _ = writeln!(t, "matching {}\n{}", m.display(&p), stability_text(&p, &stability));
                let _ = writeln!(t, "value (worst partner per individual):");
                for (i, v) in value.iter().enumerate() {
                    let _ = writeln!(t, "  {}: {}", p.label(i), p.label(*v));
                }
                let _ = writeln!(t, "profitable group deviations: {}", deviations.len());
                for d in &deviations {
                    let _ = writeln!(t, "  {}", group(d).join(" "));
                }
                t
            },
            || {
                json!({
                    "problem": path, "mode": "exhaustive", "matching": matching_json(&p, &m),
                    "stability": stability_text(&p, &stability),
                    "value": value_labels(&p, &value),
                    "deviations": deviations.iter().map(group).collect::<Vec<_>>(),
                })
            },
        ));
    }
    let proposing = [(Side::A, deferred_acceptance(&p, Side::A)), (Side::B, deferred_acceptance(&p, Side::B))];
    let set = optimin_matchings(&p)?;
    ok(output(
        f,
        || {
            let mut t = format!("problem: {path} ({} + {} individuals)\nmode: exhaustive\n", p.size(), p.size());
            for (side, m) in &proposing {
                let _ = writeln!(t, "deferred acceptance ({side:?} proposing): {}", m.display(&p));
            }
            let _ = writeln!(t, "optimin matchings: {}", set.len());
            for (m, v) in &set {
                let stable = is_stable(&p, m).map(|s| s == Stability::Stable).unwrap_or(false);
                let _ = writeln!(
                    t,
                    "  {}{}  value [{}]",
                    m.display(&p),
                    if stable { " (stable)" } else { "" },
                    value_labels(&p, v).join(" ")
                );
            }
            t
        },
        || {
            let da: Vec<Value> = proposing.iter().map(|(_, m)| matching_json(&p, m)).collect();
            let opt: Vec<Value> = set
                .iter()
                .map(|(m, v)| {
                    json!({
                        "matching": matching_json(&p, m),
                        "stable": is_stable(&p, m).map(|s| s == Stability::Stable).unwrap_or(false),
                        "value": value_labels(&p, v),
                    })
                })
                .collect();
            json!({"problem": path, "mode": "exhaustive", "deferred_acceptance": da, "optimin": opt})
        },
    ))
}

fn decide(f: Format, path: &str) -> Result<Outcome> {
    let file = input::decision(path)?;
    let (p, oc) = (&file.problem, &file.oc);
    let values = p
        .feasible_profiles()
        .into_iter()
        .map(|(a, s)| Ok(((a, s), decision_value(p, oc, a, s)?)))
        .collect::<Result<Vec<_>>>()?;
    let best = optimin_acts(p, oc)?;
    let gilboa = gilboa_reduction_check(p, oc)?;
    let label = |(a, s): (usize, usize)| format!("({}, {})", p.acts()[a], p.states()[s]);
    let value_text = |v: &optimin_core::decisions::DecisionValue| match &v.nature {
        Some(n) => format!("({}, {})", num(&v.dm), num(n)),
        None => format!("({})", num(&v.dm)),
    };
    let ranking =
        if best.dm_only { "decision maker's value alone (Nature has no utility)" } else { "Pareto in both values" };
    let reduction = match gilboa.reduction_holds {
        Some(true) => "holds",
        Some(false) => "fails",
        None => "hypotheses violated",
    };
    ok(output(
        f,
        || {
            let mut t =
                format!("problem: {path} ({} acts, {} states)\nmode: pure acts\n", p.acts().len(), p.states().len());
            let _ = writeln!(t, "values:");
            for (pr, v) in &values {
                let _ = writeln!(t, "  {}  {}", label(*pr), value_text(v));
            }
            let _ = writeln!(t, "ranking: {ranking}\noptimin profiles:");
            for (pr, v) in &best.profiles {
                let _ = writeln!(t, "  {}  {}", label(*pr), value_text(v));
            }
            let acts: Vec<&str> = best.acts().iter().map(|&a| p.acts()[a].as_str()).collect();
            let _ = writeln!(t, "optimin acts: {{{}}}", acts.join(", "));
            let _ = writeln!(t, "maximin reduction: {reduction}");
            for n in &gilboa.notes {
                let _ = writeln!(t, "  note: {n}");
            }
            t
        },
        || {
            let row = |(pr, v): &((usize, usize), optimin_core::decisions::DecisionValue)| {
                json!({
                    "act": p.acts()[pr.0], "state": p.states()[pr.1], "dm": jnum(&v.dm),
                    "nature": v.nature.as_ref().map(jnum),
                })
            };
            json!({
                "problem": path, "mode": "pure",
                "values": values.iter().map(row).collect::<Vec<_>>(),
                "ranking": if best.dm_only { "dm" } else { "pareto" },
                "optimin": best.profiles.iter().map(row).collect::<Vec<_>>(),
                "optimin_acts": best.acts().iter().map(|&a| p.acts()[a].clone()).collect::<Vec<_>>(),
                "maximin_reduction": {
                    "constant_oc": gilboa.constant_oc, "dm_only": gilboa.dm_only,
                    "holds": gilboa.reduction_holds, "notes": gilboa.notes,
                },
            })
        },
    ))
}

fn family_with(name: &str, params: &[String]) -> Result<Family> {
    params.iter().try_fold(Family::defaults(name)?, |fam, kv| {
        let (k, v) = kv.split_once('=').ok_or_else(|| Error::Parameter(format!("expected key=value, got '{kv}'")))?;
        fam.set(k.trim(), v.trim())
    })
}

fn generate(name: &str, params: &[String], out: Option<&str>) -> Result<Outcome> {
    let text = match name.parse::<NamedTag>() {
        Ok(tag) => {
            if !params.is_empty() {
                return Err(Error::Parameter(format!("named instance '{tag}' takes no parameters")));
            }
            if tag.is_cooperative() {
                io::write_tu(&named_tu(tag)?)
            } else {
                io::write_game(&named_game(tag)?)
            }
        }
        Err(_) => io::write_game(&family_with(name, params)?.build()?),
    };
    match out {
        Some(path) => {
            fs::write(path, &text).map_err(|e| Error::Parse { path: path.to_string(), message: e.to_string() })?;
            ok(String::new())
        }
        None => ok(text),
    }
}

fn sweep_command(f: Format, name: &str, param: &str, range: &str, params: &[String]) -> Result<Outcome> {
    let base = family_with(name, params)?;
    let values = parse_range(range)?;
    let report = sweep(&base, param, &values)?;
    let set =
        |labels: &[String]| format!("{{{}}}", labels.iter().map(|l| format!("({l})")).collect::<Vec<_>>().join(" "));
    ok(output(
        f,
        || {
            let mut t = format!("# family: {name}\n# mode: pure\n{param}\toptimin\tnash\n");
            for row in &report.rows {
                let _ = writeln!(t, "{}\t{}\t{}", row.parameter, set(&row.optimin), set(&row.nash));
            }
            for th in &report.thresholds {
                let _ = writeln!(
                    t,
                    "# threshold: between {param}={} and {param}={}: {} -> {}",
                    th.below,
                    th.at,
                    set(&th.from),
                    set(&th.to)
                );
            }
            t
        },
        || {
            let rows: Vec<Value> = report
                .rows
                .iter()
                .map(|r| json!({"value": jnum(&r.parameter), "optimin": r.optimin, "nash": r.nash}))
                .collect();
            let thresholds: Vec<Value> = report
                .thresholds
                .iter()
                .map(|t| json!({"below": jnum(&t.below), "at": jnum(&t.at), "from": t.from, "to": t.to}))
                .collect();
            json!({"family": name, "parameter": param, "mode": "pure", "rows": rows, "thresholds": thresholds})
        },
    ))
}
