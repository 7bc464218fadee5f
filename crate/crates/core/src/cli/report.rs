//! JSON and CSV renderings of analysis results.
//!
//! Scalars appear as `{"exact": ..., "decimal": ...}`; the exact string is
//! authoritative. Object keys are sorted, so equal inputs give equal bytes.

use std::fmt::Write as _;

use serde_json::{json, Value};

use super::config::{Settings, System};
use crate::diagnostics::{invariance_window_measure, rigidity_profile, RigidityProfile};
use crate::dynpart::{
    bad_approx_stat, build_tower, idoc_check, lin_rec_stat, loop_towers, partition, DynError, IdocOutcome,
    LinRecStat, Tower,
};
use crate::iet::Iet;
use crate::interval::{Interval, IntervalUnion};
use crate::perm::Permutation;
use crate::scalar::Scalar;
use crate::step::StepFunction;

pub const DIGITS: usize = 12;

pub const LIN_REC_CAVEAT: &str = "linear recurrence not certifiable at finite horizon; finite evidence only";
pub const RIGIDITY_CAVEAT: &str =
    "finite-horizon screening only; absence of rigidity candidates does not certify mild mixing";

pub fn num(s: &Scalar) -> Value {
    json!({ "exact": s.to_string(), "decimal": s.to_decimal(DIGITS) })
}

fn nums(values: &[Scalar]) -> Value {
    Value::Array(values.iter().map(num).collect())
}

fn interval(iv: &Interval) -> Value {
    json!({ "left": num(&iv.left), "right": num(&iv.right) })
}

pub fn header(command: &str) -> Value {
    json!({
        "command": command,
        "toolkit": { "name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION") },
    })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

pub fn perm_facts(perm: &Permutation) -> Value {
    let graph = perm.endpoint_graph();
    let d = perm.d();
    let mut facts = json!({
        "text": perm.to_string(),
        "d": d,
        "irreducible": perm.is_irreducible(),
        "sigma": graph.sigma(),
        "orbits": graph.orbits(),
    });
    let extra = if d == 1 {
        json!({
            "type_w": Value::Null,
            "type_w_note": "suppressed for d = 1: the endpoints 0 and 1 are the only vertices",
            "loop_through_zero": Value::Null,
        })
    } else {
        json!({
            "type_w": graph.is_type_w(),
            "loop_through_zero": graph.loop_through_zero(),
        })
    };
    facts = merge(facts, extra);
    facts
}

fn input(settings: &Settings, system: &System) -> Value {
    let mut value = json!({
        "name": system.name,
        "source": system.source,
        "permutation": system.perm.to_string(),
        "normalize": system.normalize,
        "horizon": settings.horizon,
        "eps": num(&settings.eps),
        "threshold": num(&settings.threshold),
    });
    if let Some(lengths) = &system.lengths_input {
        value["lengths_input"] = nums(lengths);
    }
    if let Some(iet) = &system.iet {
        value["lengths"] = nums(iet.lengths());
    }
    value
}

fn idoc_json(outcome: &IdocOutcome) -> Value {
    match outcome {
        IdocOutcome::Pass { horizon } => json!({ "status": "pass", "horizon": horizon }),
        IdocOutcome::Failure { n, point, source } => json!({
            "status": "failure",
            "n": n,
            "point": num(point),
            "source": num(source),
        }),
    }
}

fn lin_rec_summary(stat: &LinRecStat) -> Value {
    let last = stat.rows.last();
    json!({
        "horizon": stat.rows.len(),
        "min_n_eps_n": num(&stat.min),
        "argmin": stat.argmin,
        "eps_at_horizon": last.map(|r| num(&r.eps_n)),
        "all_n_eps_n_at_most_one": stat.all_at_most_one,
        "first_collision": stat.first_collision,
        "status": LIN_REC_CAVEAT,
    })
}

fn rigidity_summary(profile: &RigidityProfile, horizon: usize) -> Value {
    let (min, argmin) = match profile.min() {
        Some((m, n)) => (Some(num(m)), Some(n)),
        None => (None, None),
    };
    let summary = if profile.candidate_rigid_times.is_empty() {
        format!("no rigidity sequence detected up to N = {horizon}")
    } else {
        format!("rigidity candidates found up to N = {horizon}")
    };
    json!({
        "horizon": horizon,
        "eps": num(&profile.eps),
        "threshold": num(&profile.threshold),
        "min_measure": min,
        "argmin": argmin,
        "candidate_rigid_times": profile.candidate_rigid_times,
        "summary": summary,
        "caveat": RIGIDITY_CAVEAT,
    })
}

/// The applicability note. It says "main theorem applies" only for an
/// irreducible type-W permutation.
pub fn theorem_note(perm: &Permutation) -> Value {
    let irreducible = perm.is_irreducible();
    let type_w = perm.d() >= 2 && perm.is_type_w();
    let note = if irreducible && type_w {
        "main theorem applies: the permutation is irreducible and type W (both certified exactly); \
         mild mixing follows if the map is also linearly recurrent"
            .to_string()
    } else {
        let mut reasons = Vec::new();
        if !irreducible {
            reasons.push("the permutation is reducible");
        }
        if perm.d() < 2 {
            reasons.push("d = 1 has no type-W structure");
        } else if !type_w {
            reasons.push("the permutation is not type W");
        }
        format!("main theorem hypotheses not met: {}", reasons.join("; "))
    };
    json!({
        "irreducible": irreducible,
        "type_w": type_w,
        "hypotheses_certified": irreducible && type_w,
        "note": note,
        "linear_recurrence": LIN_REC_CAVEAT,
    })
}

pub struct AnalyzeOutput {
    pub json: Value,
    pub lin_rec_csv: String,
    pub rigidity_csv: String,
}

pub fn analyze(settings: &Settings, system: &System, iet: &Iet) -> AnalyzeOutput {
    let n = settings.horizon;
    let idoc = idoc_check(iet, n);
    let lin_rec = lin_rec_stat(iet, n);
    let bad_approx = match bad_approx_stat(iet, n) {
        Ok(stat) => json!({
            "horizon": n,
            "min": num(&stat.min),
            "n": stat.n,
            "p": num(&stat.p),
            "q": num(&stat.q),
        }),
        Err(e) => json!({ "horizon": n, "unavailable": e.to_string() }),
    };
    let profile = rigidity_profile(iet, n, &settings.eps, &settings.threshold);
    let json = merge(
        header("analyze"),
        json!({
            "input": input(settings, system),
            "permutation": perm_facts(&system.perm),
            "idoc": idoc_json(&idoc),
            "linear_recurrence": lin_rec_summary(&lin_rec),
            "bad_approximation": bad_approx,
            "rigidity": rigidity_summary(&profile, n),
            "theorem": theorem_note(&system.perm),
        }),
    );
    AnalyzeOutput {
        json,
        lin_rec_csv: lin_rec.to_csv(DIGITS),
        rigidity_csv: profile.to_csv(DIGITS),
    }
}

pub fn perm_report(system: &System) -> (Value, String) {
    let graph = system.perm.endpoint_graph();
    let mut csv = String::from("vertex,sigma,orbit\n");
    for (v, s) in graph.sigma().iter().enumerate() {
        let orbit = graph.orbits().iter().position(|o| o.contains(&v)).unwrap_or(0);
        let _ = writeln!(csv, "{v},{s},{orbit}");
    }
    let json = merge(
        header("perm"),
        json!({
            "input": { "name": system.name, "source": system.source },
            "permutation": perm_facts(&system.perm),
            "theorem": theorem_note(&system.perm),
        }),
    );
    (json, csv)
}

pub fn catalog_report(settings: &Settings) -> (Value, String) {
    let mut csv = String::from("name,perm,lengths,irreducible,type_w\n");
    let mut entries = Vec::new();
    for entry in &settings.catalog.entries {
        let type_w = (entry.perm.d() >= 2).then(|| entry.perm.is_type_w());
        let lengths = entry.lengths.as_ref().map(|l| nums(l));
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            entry.name,
            entry.perm,
            entry
                .lengths
                .as_ref()
                .map(|l| l.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(";"))
                .unwrap_or_default(),
            entry.perm.is_irreducible(),
            type_w.map(|t| t.to_string()).unwrap_or_default()
        );
        entries.push(json!({
            "name": entry.name,
            "permutation": entry.perm.to_string(),
            "lengths": lengths,
            "irreducible": entry.perm.is_irreducible(),
            "type_w": type_w,
        }));
    }
    let json = merge(
        header("catalog"),
        json!({ "catalog": { "source": settings.catalog.source, "entries": entries } }),
    );
    (json, csv)
}

pub fn eps_report(settings: &Settings, system: &System, iet: &Iet) -> (Value, String) {
    let stat = lin_rec_stat(iet, settings.horizon);
    let rows: Vec<Value> = stat
        .rows
        .iter()
        .map(|r| {
            json!({
                "n": r.n,
                "eps_n": num(&r.eps_n),
                "n_eps_n": num(&r.n_eps_n),
                "min_so_far": num(&r.min_so_far),
            })
        })
        .collect();
    let json = merge(
        header("eps"),
        json!({
            "input": input(settings, system),
            "linear_recurrence": lin_rec_summary(&stat),
            "rows": rows,
        }),
    );
    (json, stat.to_csv(DIGITS))
}

fn tower_json(t: &Tower, iet: &Iet) -> Value {
    json!({
        "base": interval(&t.base),
        "p": t.p,
        "q": t.q,
        "height": t.height(),
        "measure": num(&t.measure()),
        "disjoint": t.is_disjoint(),
        "floors_are_translates": t.floors_are_translates(iet),
        "height_bound_holds": t.height_bound_holds(),
    })
}

pub fn tower_report(settings: &Settings, system: &System, iet: &Iet) -> Result<(Value, String), DynError> {
    let n = settings.horizon;
    let part = partition(iet, n);
    let mut csv = String::from("kind,index,p,q,height,measure,disjoint,bound_holds\n");
    let mut cell_towers = Vec::new();
    for (idx, cell) in part.cells().into_iter().enumerate() {
        if cell.length() != part.eps {
            continue;
        }
        let tower = build_tower(iet, cell, n)?;
        let _ = writeln!(
            csv,
            "cell,{idx},{},{},{},{},{},{}",
            tower.p,
            tower.q,
            tower.height(),
            tower.measure(),
            tower.is_disjoint(),
            tower.height_bound_holds()
        );
        let mut value = tower_json(&tower, iet);
        value["cell_index"] = json!(idx);
        cell_towers.push(value);
    }
    let loops = match loop_towers(iet, n) {
        Ok(towers) => {
            let list: Vec<Value> = towers
                .iter()
                .map(|lt| {
                    let _ = writeln!(
                        csv,
                        "loop,{},{},{},{},{},{},{}",
                        lt.vertex,
                        lt.tower.p,
                        lt.tower.q,
                        lt.tower.height(),
                        lt.measure,
                        lt.disjoint,
                        lt.measure_bound_holds
                    );
                    json!({
                        "vertex": lt.vertex,
                        "complete": lt.complete,
                        "disjoint": lt.disjoint,
                        "measure": num(&lt.measure),
                        "measure_bound": num(&lt.measure_bound),
                        "measure_bound_holds": lt.measure_bound_holds,
                        "floors": lt.tower.floors.iter().map(interval).collect::<Vec<_>>(),
                    })
                })
                .collect();
            json!({ "towers": list })
        }
        Err(e) => json!({ "unavailable": e.to_string() }),
    };
    let json = merge(
        header("tower"),
        json!({
            "input": input(settings, system),
            "n": n,
            "eps_n": num(&part.eps),
            "partition_points": part.points.len(),
            "cell_towers": cell_towers,
            "loop_towers": loops,
        }),
    );
    Ok((json, csv))
}

pub fn rigidity_report(settings: &Settings, system: &System, iet: &Iet) -> (Value, String) {
    let profile = rigidity_profile(iet, settings.horizon, &settings.eps, &settings.threshold);
    let entries: Vec<Value> = profile
        .entries
        .iter()
        .map(|e| json!({ "n": e.n, "measure": num(&e.measure), "is_candidate": e.is_candidate }))
        .collect();
    let mut json = merge(
        header("rigidity"),
        json!({
            "input": input(settings, system),
            "rigidity": rigidity_summary(&profile, settings.horizon),
            "entries": entries,
        }),
    );
    if let Some(delta) = &settings.delta {
        // Test function: indicator of the first exchanged interval.
        let first = IntervalUnion::single(Scalar::zero(), iet.lengths()[0].clone());
        let f = StepFunction::indicator(&first);
        let measure = invariance_window_measure(iet, &f, delta, settings.b, 1);
        json["invariance_window"] = json!({
            "function": "indicator of the first interval",
            "delta": num(delta),
            "b": settings.b,
            "shift_power": 1,
            "measure": num(&measure),
        });
    }
    (json, profile.to_csv(DIGITS))
}
