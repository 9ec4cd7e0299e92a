//! Instance-file formats: versioned JSON wrappers with exact `p/q`
//! rationals, converted into core types with full validation.
//!
//! Exit-code policy: malformed or schema-invalid files map to exit 2,
//! cross-file mismatches (tags, carriers, actions) to exit 3.

use kanlift_core::fibration::{BinRel, FibreObject, Metric, Preorder, Topology};
use kanlift_core::finset::{FinSet, Subset};
use kanlift_core::measurable::{FinMeasSpace, Lmp, SubProb};
use kanlift_core::util::mask::Mask;
use kanlift_core::util::rational::{parse_q, ExtQ, Q};
use kanlift_core::density::{Lasso, StreamParam};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::Path;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug)]
pub enum CliError {
    /// Exit 2: unreadable, unparsable, or schema-invalid input.
    Schema(String),
    /// Exit 3: mutually inconsistent inputs.
    Mismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Mismatch(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Schema(m) | CliError::Mismatch(m) => m,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn schema(msg: impl Into<String>) -> CliError {
    CliError::Schema(msg.into())
}

fn mismatch(msg: impl Into<String>) -> CliError {
    CliError::Mismatch(msg.into())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    format_version: u32,
    kind: String,
    payload: serde_json::Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PreorderPayload {
    carrier: Vec<String>,
    #[serde(default)]
    pairs: Vec<(String, String)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TopologyPayload {
    carrier: Vec<String>,
    #[serde(default)]
    opens: Vec<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PredPayload {
    ambient: Vec<String>,
    #[serde(default)]
    members: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MetricPayload {
    carrier: Vec<String>,
    #[serde(default)]
    distances: Vec<(String, String, String)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LmpPayload {
    states: Vec<String>,
    #[serde(default)]
    blocks: Option<Vec<Vec<String>>>,
    actions: Vec<String>,
    #[serde(default)]
    kernel: BTreeMap<String, BTreeMap<String, BTreeMap<String, String>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationPayload {
    #[serde(default)]
    left: Option<Vec<String>>,
    #[serde(default)]
    right: Option<Vec<String>>,
    pairs: Vec<(String, String)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasurePayload {
    #[serde(default)]
    blocks: Option<Vec<Vec<String>>>,
    masses: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum LassoSpec {
    Compact(String),
    Split { prefix: Vec<String>, cycle: Vec<String> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StreamParamPayload {
    alphabet: Vec<String>,
    #[serde(default)]
    lassos: Vec<LassoSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamEntryPayload {
    r: Vec<String>,
    s: serde_json::Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LiftingParamPayload {
    entries: Vec<ParamEntryPayload>,
}

const ATOM_CHARS: &str = "letters, digits, and _ - * ' .";

fn validate_atom(a: &str) -> CliResult<()> {
    let ok = !a.is_empty()
        && a.chars()
            .all(|c| c.is_ascii_alphanumeric() || "_-*'.".contains(c));
    if ok {
        Ok(())
    } else {
        Err(schema(format!(
            "invalid atom `{a}`: atoms may contain {ATOM_CHARS}"
        )))
    }
}

fn finset_of(atoms: &[String], what: &str) -> CliResult<FinSet> {
    for a in atoms {
        validate_atom(a)?;
    }
    FinSet::new(atoms.iter().cloned()).map_err(|e| schema(format!("{what}: {e}")))
}

fn load_file(path: &Path, expect_kind: &str) -> CliResult<serde_json::Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| schema(format!("cannot read {}: {e}", path.display())))?;
    let file: InstanceFile = serde_json::from_str(&text)
        .map_err(|e| schema(format!("{}: {e}", path.display())))?;
    if file.format_version != FORMAT_VERSION {
        return Err(schema(format!(
            "{}: unsupported format_version {}",
            path.display(),
            file.format_version
        )));
    }
    if file.kind != expect_kind {
        return Err(schema(format!(
            "{}: expected kind `{expect_kind}`, found `{}`",
            path.display(),
            file.kind
        )));
    }
    Ok(file.payload)
}

fn decode<T: serde::de::DeserializeOwned>(payload: serde_json::Value, what: &str) -> CliResult<T> {
    serde_json::from_value(payload).map_err(|e| schema(format!("{what}: {e}")))
}

pub fn load_preorder(path: &Path) -> CliResult<Preorder> {
    let p: PreorderPayload = decode(load_file(path, "preorder")?, "preorder payload")?;
    let carrier = finset_of(&p.carrier, "preorder carrier")?;
    Preorder::generated_by(&carrier, p.pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())))
        .map_err(|e| schema(format!("preorder pairs: {e}")))
}

pub fn load_topology(path: &Path) -> CliResult<Topology> {
    let p: TopologyPayload = decode(load_file(path, "topology")?, "topology payload")?;
    let carrier = finset_of(&p.carrier, "topology carrier")?;
    let mut subbasis = Vec::new();
    for open in &p.opens {
        let subset = Subset::from_atoms(&carrier, open.iter().map(String::as_str))
            .map_err(|e| schema(format!("topology opens: {e}")))?;
        subbasis.push(subset.mask().clone());
    }
    Ok(Topology::generate(&carrier, &subbasis))
}

pub fn load_pred(path: &Path) -> CliResult<Subset> {
    let p: PredPayload = decode(load_file(path, "pred")?, "pred payload")?;
    let ambient = finset_of(&p.ambient, "pred ambient")?;
    Subset::from_atoms(&ambient, p.members.iter().map(String::as_str))
        .map_err(|e| schema(format!("pred members: {e}")))
}

pub fn load_metric(path: &Path) -> CliResult<Metric> {
    let p: MetricPayload = decode(load_file(path, "metric_space")?, "metric payload")?;
    let carrier = finset_of(&p.carrier, "metric carrier")?;
    let n = carrier.len();
    let mut matrix: Vec<Option<ExtQ>> = vec![None; n * n];
    for i in 0..n {
        matrix[i * n + i] = Some(ExtQ::zero());
    }
    for (a, b, dist) in &p.distances {
        let i = carrier
            .index_of(a)
            .ok_or_else(|| schema(format!("metric distances: unknown atom `{a}`")))?;
        let j = carrier
            .index_of(b)
            .ok_or_else(|| schema(format!("metric distances: unknown atom `{b}`")))?;
        let d = ExtQ::parse(dist).map_err(|e| schema(format!("invalid rational: {e}")))?;
        for k in [i * n + j, j * n + i] {
            if let Some(existing) = &matrix[k] {
                if *existing != d {
                    return Err(schema(format!(
                        "metric distances: conflicting entries for ({a},{b})"
                    )));
                }
            }
            matrix[k] = Some(d.clone());
        }
    }
    let full: Vec<ExtQ> = matrix.into_iter().map(|e| e.unwrap_or(ExtQ::Inf)).collect();
    Metric::new(carrier, full).map_err(|e| schema(format!("metric: {e}")))
}

fn build_space(carrier: &FinSet, blocks: &Option<Vec<Vec<String>>>) -> CliResult<FinMeasSpace> {
    match blocks {
        None => Ok(FinMeasSpace::discrete(carrier)),
        Some(blocks) => {
            let mut masks = Vec::new();
            for blk in blocks {
                let subset = Subset::from_atoms(carrier, blk.iter().map(String::as_str))
                    .map_err(|e| schema(format!("blocks: {e}")))?;
                masks.push(subset.mask().clone());
            }
            FinMeasSpace::new(carrier.clone(), masks).map_err(|e| schema(format!("blocks: {e}")))
        }
    }
}

/// Block masses are keyed by the block representative: the first carrier
/// atom of the block.
fn block_representative(space: &FinMeasSpace, block: usize) -> &str {
    let first = space.blocks()[block].ones().next().expect("nonempty block");
    space.carrier().atom(first)
}

fn masses_for(
    space: &FinMeasSpace,
    masses: &BTreeMap<String, String>,
    what: &str,
) -> CliResult<SubProb> {
    let mut per_block = vec![Q::from_integer(0.into()); space.block_count()];
    for (key, value) in masses {
        let point = space
            .carrier()
            .index_of(key)
            .ok_or_else(|| schema(format!("{what}: unknown atom `{key}`")))?;
        let block = space.block_of(point);
        if key != block_representative(space, block) {
            return Err(schema(format!(
                "{what}: mass key `{key}` is not its block representative `{}`",
                block_representative(space, block)
            )));
        }
        per_block[block] = parse_q(value).map_err(|e| schema(format!("invalid rational: {e}")))?;
    }
    SubProb::new(space.clone(), per_block).map_err(|e| schema(format!("{what}: {e}")))
}

pub fn load_lmp(path: &Path) -> CliResult<Lmp> {
    let p: LmpPayload = decode(load_file(path, "lmp")?, "lmp payload")?;
    let states = finset_of(&p.states, "lmp states")?;
    let actions = finset_of(&p.actions, "lmp actions")?;
    let space = build_space(&states, &p.blocks)?;
    for action in p.kernel.keys() {
        if actions.index_of(action).is_none() {
            return Err(schema(format!("lmp kernel: unknown action `{action}`")));
        }
    }
    let mut kernel = Vec::with_capacity(actions.len());
    for a in actions.atoms() {
        let per_action = p.kernel.get(a);
        let mut row = Vec::with_capacity(states.len());
        for s in states.atoms() {
            let masses = per_action.and_then(|m| m.get(s));
            let measure = match masses {
                None => SubProb::zero(&space),
                Some(m) => masses_for(&space, m, &format!("kernel[{a}][{s}]"))?,
            };
            row.push(measure);
        }
        if let Some(per_action) = per_action {
            for s in per_action.keys() {
                if states.index_of(s).is_none() {
                    return Err(schema(format!("lmp kernel: unknown state `{s}`")));
                }
            }
        }
        kernel.push(row);
    }
    Lmp::new(space, actions, kernel).map_err(|e| schema(format!("lmp: {e}")))
}

/// Loads a relation file and fits it between the given carriers.
pub fn load_relation(path: &Path, left: &FinSet, right: &FinSet) -> CliResult<BinRel> {
    let p: RelationPayload = decode(load_file(path, "relation")?, "relation payload")?;
    if let Some(declared) = &p.left {
        let declared = finset_of(declared, "relation left carrier")?;
        if &declared != left {
            return Err(mismatch(format!(
                "relation left carrier {:?} differs from the process states {:?}",
                declared, left
            )));
        }
    }
    if let Some(declared) = &p.right {
        let declared = finset_of(declared, "relation right carrier")?;
        if &declared != right {
            return Err(mismatch(format!(
                "relation right carrier {:?} differs from the process states {:?}",
                declared, right
            )));
        }
    }
    let mut rows = vec![Mask::empty(right.len()); left.len()];
    for (a, b) in &p.pairs {
        let i = left
            .index_of(a)
            .ok_or_else(|| mismatch(format!("relation pair atom `{a}` not a left state")))?;
        let j = right
            .index_of(b)
            .ok_or_else(|| mismatch(format!("relation pair atom `{b}` not a right state")))?;
        rows[i].insert(j);
    }
    Ok(BinRel::from_rows(left.clone(), right.clone(), rows))
}

/// Loads a measure over the carrier of a metric space; optional blocks give
/// a coarser σ-algebra.
pub fn load_measure(path: &Path, carrier: &FinSet) -> CliResult<SubProb> {
    let p: MeasurePayload = decode(load_file(path, "measure")?, "measure payload")?;
    let space = build_space(carrier, &p.blocks)?;
    masses_for(&space, &p.masses, "measure masses")
}

pub fn load_stream_param(path: &Path) -> CliResult<StreamParam> {
    let p: StreamParamPayload = decode(load_file(path, "stream_param")?, "stream_param payload")?;
    let alphabet = finset_of(&p.alphabet, "stream alphabet")?;
    let mut lassos = Vec::new();
    for spec in &p.lassos {
        let lasso = match spec {
            LassoSpec::Compact(text) => Lasso::parse(&alphabet, text),
            LassoSpec::Split { prefix, cycle } => Lasso::new(
                &alphabet,
                prefix.iter().map(String::as_str),
                cycle.iter().map(String::as_str),
            ),
        }
        .map_err(|e| schema(format!("stream_param lassos: {e}")))?;
        lassos.push(lasso);
    }
    StreamParam::new(alphabet, lassos).map_err(|e| schema(format!("stream_param: {e}")))
}

fn fibre_object_from_value(value: serde_json::Value) -> CliResult<FibreObject> {
    #[derive(Deserialize)]
    struct Tagged {
        kind: String,
        #[serde(flatten)]
        rest: serde_json::Value,
    }
    let tagged: Tagged = decode(value, "parameter fibre object")?;
    match tagged.kind.as_str() {
        "preorder" => {
            let p: PreorderPayload = decode(tagged.rest, "preorder payload")?;
            let carrier = FinSet::new(p.carrier.iter().cloned())
                .map_err(|e| schema(format!("preorder carrier: {e}")))?;
            let pre = Preorder::generated_by(
                &carrier,
                p.pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())),
            )
            .map_err(|e| schema(format!("preorder pairs: {e}")))?;
            Ok(FibreObject::Pre(pre))
        }
        "topology" => {
            let p: TopologyPayload = decode(tagged.rest, "topology payload")?;
            let carrier = FinSet::new(p.carrier.iter().cloned())
                .map_err(|e| schema(format!("topology carrier: {e}")))?;
            let mut subbasis = Vec::new();
            for open in &p.opens {
                let subset = Subset::from_atoms(&carrier, open.iter().map(String::as_str))
                    .map_err(|e| schema(format!("topology opens: {e}")))?;
                subbasis.push(subset.mask().clone());
            }
            Ok(FibreObject::Top(Topology::generate(&carrier, &subbasis)))
        }
        "pred" => {
            let p: PredPayload = decode(tagged.rest, "pred payload")?;
            let ambient = FinSet::new(p.ambient.iter().cloned())
                .map_err(|e| schema(format!("pred ambient: {e}")))?;
            let sub = Subset::from_atoms(&ambient, p.members.iter().map(String::as_str))
                .map_err(|e| schema(format!("pred members: {e}")))?;
            Ok(FibreObject::Pred(sub))
        }
        other => Err(schema(format!(
            "parameter fibre object: unsupported kind `{other}`"
        ))),
    }
}

/// Loads an inline lifting parameter: entries of `(R, S)` where `S` must
/// lie above the powerset carrier of `R` (named `{}`, `{r}`, `{r1,r2}`, …).
pub fn load_lifting_param(
    path: &Path,
) -> CliResult<kanlift_core::codensity::LiftingParam> {
    let p: LiftingParamPayload = decode(load_file(path, "lifting_param")?, "lifting_param payload")?;
    if p.entries.is_empty() {
        return Err(schema("lifting_param: entries must be nonempty"));
    }
    let mut entries = Vec::new();
    for entry in p.entries {
        let r = finset_of(&entry.r, "parameter carrier R")?;
        let s = fibre_object_from_value(entry.s)?;
        entries.push((r, s));
    }
    Ok(kanlift_core::codensity::LiftingParam { entries })
}

/// Loads the instance for `lift` as a fibre object, by kind sniffing.
pub fn load_lift_instance(path: &Path) -> CliResult<FibreObject> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| schema(format!("cannot read {}: {e}", path.display())))?;
    let file: InstanceFile = serde_json::from_str(&text)
        .map_err(|e| schema(format!("{}: {e}", path.display())))?;
    if file.format_version != FORMAT_VERSION {
        return Err(schema(format!(
            "{}: unsupported format_version {}",
            path.display(),
            file.format_version
        )));
    }
    match file.kind.as_str() {
        "preorder" => Ok(FibreObject::Pre(load_preorder(path)?)),
        "topology" => Ok(FibreObject::Top(load_topology(path)?)),
        "pred" => Ok(FibreObject::Pred(load_pred(path)?)),
        "metric_space" => Ok(FibreObject::Met(load_metric(path)?)),
        other => Err(schema(format!(
            "{}: kind `{other}` cannot be lifted",
            path.display()
        ))),
    }
}
