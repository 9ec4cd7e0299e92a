//! Human tables and machine-readable JSON for computed structures.
//! serde_json's default map is ordered, so emitted files are
//! deterministic byte-for-byte for identical inputs.

use crate::files::{CliError, CliResult};
use kanlift_core::fibration::FibreObject;
use kanlift_core::giry::SimWitness;
use kanlift_core::util::rational::format_q;
use serde_json::{json, Value};
use std::fmt::Write as _;

pub fn fibre_to_json(obj: &FibreObject) -> CliResult<Value> {
    Ok(match obj {
        FibreObject::Pred(s) => json!({
            "kind": "pred",
            "ambient": s.ambient().atoms(),
            "members": s.members().collect::<Vec<_>>(),
        }),
        FibreObject::Pre(p) => {
            let atoms = p.carrier().atoms();
            let pairs: Vec<Value> = p
                .pairs()
                .map(|(i, j)| json!([atoms[i], atoms[j]]))
                .collect();
            json!({
                "kind": "preorder",
                "carrier": atoms,
                "pairs": pairs,
            })
        }
        FibreObject::Top(t) => {
            let atoms = t.carrier().atoms();
            let opens = t
                .opens()
                .map_err(|e| CliError::Schema(format!("cannot render topology: {e}")))?;
            let families: Vec<Value> = opens
                .iter()
                .map(|m| Value::from(m.ones().map(|i| atoms[i].clone()).collect::<Vec<_>>()))
                .collect();
            json!({
                "kind": "topology",
                "carrier": atoms,
                "opens": families,
            })
        }
        FibreObject::ERel(r) => {
            let atoms = r.carrier().atoms();
            let pairs: Vec<Value> = r
                .pairs()
                .map(|(i, j)| json!([atoms[i], atoms[j]]))
                .collect();
            json!({
                "kind": "endorelation",
                "carrier": atoms,
                "pairs": pairs,
            })
        }
        FibreObject::BRel(r) => {
            let left = r.left().atoms();
            let right = r.right().atoms();
            let pairs: Vec<Value> = r
                .pairs()
                .map(|(i, j)| json!([left[i], right[j]]))
                .collect();
            json!({
                "kind": "relation",
                "left": left,
                "right": right,
                "pairs": pairs,
            })
        }
        FibreObject::Met(m) => {
            let atoms = m.carrier().atoms();
            let n = atoms.len();
            let rows: Vec<Value> = (0..n)
                .map(|i| {
                    Value::from(
                        (0..n)
                            .map(|j| m.at(i, j).to_string())
                            .collect::<Vec<_>>(),
                    )
                })
                .collect();
            json!({
                "kind": "metric_space",
                "carrier": atoms,
                "matrix": rows,
            })
        }
    })
}

fn grid(labels: &[String], cell: impl Fn(usize, usize) -> String) -> String {
    let width = labels
        .iter()
        .map(String::len)
        .max()
        .unwrap_or(1)
        .max(3);
    let mut out = String::new();
    let _ = write!(out, "{:width$} |", "");
    for l in labels {
        let _ = write!(out, " {l:>width$}");
    }
    out.push('\n');
    for (i, l) in labels.iter().enumerate() {
        let _ = write!(out, "{l:>width$} |");
        for j in 0..labels.len() {
            let _ = write!(out, " {:>width$}", cell(i, j));
        }
        out.push('\n');
    }
    out
}

pub fn fibre_to_table(obj: &FibreObject) -> CliResult<String> {
    Ok(match obj {
        FibreObject::Pred(s) => {
            let members: Vec<_> = s.members().cloned().collect();
            format!(
                "predicate over {} atoms: {{{}}}\n",
                s.ambient().len(),
                members.join(", ")
            )
        }
        FibreObject::Pre(p) => {
            let labels: Vec<String> = p.carrier().atoms().to_vec();
            format!(
                "preorder on {} elements (rows ≤ columns):\n{}",
                labels.len(),
                grid(&labels, |i, j| {
                    if p.le(i, j) { "1".into() } else { "·".into() }
                })
            )
        }
        FibreObject::Top(t) => {
            let atoms = t.carrier().atoms();
            let opens = t
                .opens()
                .map_err(|e| CliError::Schema(format!("cannot render topology: {e}")))?;
            let mut out = format!("topology with {} open sets:\n", opens.len());
            for m in opens {
                let names: Vec<_> = m.ones().map(|i| atoms[i].clone()).collect();
                let _ = writeln!(out, "  {{{}}}", names.join(", "));
            }
            out
        }
        FibreObject::ERel(r) => {
            let labels: Vec<String> = r.carrier().atoms().to_vec();
            format!(
                "relation on {} elements:\n{}",
                labels.len(),
                grid(&labels, |i, j| {
                    if r.related(i, j) { "1".into() } else { "·".into() }
                })
            )
        }
        FibreObject::BRel(r) => {
            let mut out = format!("relation with {} pairs:\n", r.pairs().count());
            for (i, j) in r.pairs() {
                let _ = writeln!(out, "  ({}, {})", r.left().atom(i), r.right().atom(j));
            }
            out
        }
        FibreObject::Met(m) => {
            let labels: Vec<String> = m.carrier().atoms().to_vec();
            format!(
                "pseudometric on {} points:\n{}",
                labels.len(),
                grid(&labels, |i, j| m.at(i, j).to_string())
            )
        }
    })
}

pub fn witness_to_json(w: &SimWitness) -> Value {
    json!({
        "pair": [w.pair.0, w.pair.1],
        "action": w.action,
        "v": w.v,
        "w": w.w,
        "lhs": format_q(&w.lhs),
        "rhs": format_q(&w.rhs),
    })
}

pub fn witness_to_text(w: &SimWitness) -> String {
    let wtext = match &w.w {
        Some(atoms) => format!(", W = {{{}}}", atoms.join(", ")),
        None => String::new(),
    };
    format!(
        "witness: pair ({}, {}), action {}, V = {{{}}}{}, masses {} vs {}",
        w.pair.0,
        w.pair.1,
        w.action,
        w.v.join(", "),
        wtext,
        format_q(&w.lhs),
        format_q(&w.rhs)
    )
}

pub fn write_result(out: Option<&std::path::Path>, value: &Value) -> CliResult<()> {
    if let Some(path) = out {
        let mut text = serde_json::to_string_pretty(value)
            .map_err(|e| CliError::Schema(format!("cannot serialise result: {e}")))?;
        text.push('\n');
        std::fs::write(path, text)
            .map_err(|e| CliError::Schema(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}
