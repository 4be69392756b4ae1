//! JSON documents for convergences, maps, families and search witnesses.
//!
//! Subsets serialize as label arrays in carrier order, and as comma-joined
//! keys inside limit tables. Output objects use sorted keys.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::convergence::Convergence;
use crate::enumerate::SearchOutcome;
use crate::error::{Error, Result};
use crate::family::{Carrier, CarrierMap, SetFamily, Subset};
use crate::maps::{ClassificationReport, MapContext, Witness};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConvergenceDoc {
    points: Vec<String>,
    #[serde(default)]
    lim: Option<BTreeMap<String, Vec<String>>>,
    #[serde(default)]
    vicinity: Option<BTreeMap<String, Vec<String>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapDoc {
    map: BTreeMap<String, String>,
}

/// 1-based line of the first occurrence of `"needle"` in `text`.
fn line_of(text: &str, needle: &str) -> Option<usize> {
    let quoted = format!("\"{needle}\"");
    let at = text.find(&quoted)?;
    Some(text[..at].matches('\n').count() + 1)
}

fn located(text: &str, needle: &str, msg: String) -> Error {
    match line_of(text, needle) {
        Some(line) => Error::Document(format!("line {line}: {msg}")),
        None => Error::Document(msg),
    }
}

pub fn subset_key(carrier: &Carrier, s: Subset) -> String {
    carrier.labels_of(s).join(",")
}

pub fn subset_json(carrier: &Carrier, s: Subset) -> Value {
    Value::from(carrier.labels_of(s))
}

fn parse_labels(text: &str, carrier: &Carrier, labels: &[String]) -> Result<Subset> {
    labels.iter().try_fold(Subset::EMPTY, |acc, l| {
        let x = carrier
            .index_of(l)
            .map_err(|_| located(text, l, format!("unknown point label {l:?}")))?;
        Ok(acc.union(Subset::singleton(x)))
    })
}

fn parse_key(text: &str, carrier: &Carrier, key: &str) -> Result<Subset> {
    let labels: Vec<String> = key.split(',').map(|s| s.trim().to_string()).collect();
    if labels.iter().any(String::is_empty) {
        return Err(located(text, key, format!("malformed subset key {key:?}")));
    }
    parse_labels(text, carrier, &labels)
}

/// Parses a convergence document, either a full limit table or the
/// pretopology shorthand `{"vicinity": {point: [labels]}}`.
pub fn parse_convergence(text: &str) -> Result<Convergence> {
    let doc: ConvergenceDoc = serde_json::from_str(text)?;
    let carrier = Carrier::new(doc.points.iter().cloned())?;
    match (doc.lim, doc.vicinity) {
        (Some(lim), None) => {
            let mut table = vec![None; carrier.powerset_len()];
            for (key, labels) in &lim {
                let a = parse_key(text, &carrier, key)?;
                if a.is_empty() {
                    return Err(located(text, key, "empty subset key".into()));
                }
                if table[a.index()].is_some() {
                    return Err(located(text, key, format!("duplicate entry for {{{key}}}")));
                }
                table[a.index()] = Some(parse_labels(text, &carrier, labels)?);
            }
            Convergence::validate(carrier, &table)
        }
        (None, Some(vic)) => {
            let mut vicinities = vec![None; carrier.size()];
            for (point, labels) in &vic {
                let x = carrier
                    .index_of(point)
                    .map_err(|_| located(text, point, format!("unknown point label {point:?}")))?;
                vicinities[x] = Some(parse_labels(text, &carrier, labels)?);
            }
            let vicinities = vicinities
                .into_iter()
                .enumerate()
                .map(|(x, v)| {
                    v.ok_or_else(|| Error::Document(format!("missing vicinity for point {:?}", carrier.label(x))))
                })
                .collect::<Result<Vec<_>>>()?;
            Convergence::from_vicinities(carrier, &vicinities)
        }
        (Some(_), Some(_)) => Err(Error::Document("give either \"lim\" or \"vicinity\", not both".into())),
        (None, None) => Err(Error::Document("missing \"lim\" table".into())),
    }
}

pub fn convergence_json(conv: &Convergence) -> Value {
    let carrier = conv.carrier();
    let lim: Map<String, Value> = carrier
        .nonempty_subsets()
        .map(|a| (subset_key(carrier, a), subset_json(carrier, conv.lim(a))))
        .collect();
    json!({ "points": carrier.labels(), "lim": lim })
}

/// Parses `{"map": {source label: target label}}` between two carriers.
pub fn parse_map(text: &str, source: &Arc<Carrier>, target: &Arc<Carrier>) -> Result<CarrierMap> {
    let doc: MapDoc = serde_json::from_str(text)?;
    let mut images = vec![None; source.size()];
    for (x, y) in &doc.map {
        let xi = source
            .index_of(x)
            .map_err(|_| located(text, x, format!("unknown source label {x:?}")))?;
        let yi = target
            .index_of(y)
            .map_err(|_| located(text, y, format!("unknown target label {y:?}")))?;
        images[xi] = Some(yi);
    }
    let images = images
        .into_iter()
        .enumerate()
        .map(|(x, y)| y.ok_or_else(|| Error::Document(format!("no image for {:?}", source.label(x)))))
        .collect::<Result<Vec<_>>>()?;
    CarrierMap::new(source.clone(), target.clone(), images)
}

/// Builds a classification context from map, source and optional target
/// documents. Without a target the map's image labels, sorted, carry the
/// final convergence of the source.
pub fn context_from_documents(map: &str, source: &str, target: Option<&str>) -> Result<MapContext> {
    let xi = parse_convergence(source)?;
    let tau = target.map(parse_convergence).transpose()?;
    let target_carrier = match &tau {
        Some(t) => t.carrier().clone(),
        None => {
            let doc: MapDoc = serde_json::from_str(map)?;
            let mut labels: Vec<&str> = doc.map.values().map(String::as_str).collect();
            labels.sort();
            labels.dedup();
            Carrier::new(labels)?
        }
    };
    let f = parse_map(map, xi.carrier(), &target_carrier)?;
    let tau = match tau {
        Some(t) => t,
        None => crate::maps::final_convergence(&f, &xi)?,
    };
    MapContext::new(f, xi, tau)
}

pub fn map_json(f: &CarrierMap) -> Value {
    let map: Map<String, Value> = (0..f.source().size())
        .map(|x| {
            (
                f.source().label(x).to_string(),
                Value::from(f.target().label(f.apply(x))),
            )
        })
        .collect();
    json!({ "map": map })
}

/// Parses a family as an array of label arrays.
pub fn parse_family(text: &str, carrier: &Arc<Carrier>) -> Result<SetFamily> {
    let sets: Vec<Vec<String>> = serde_json::from_str(text)?;
    let members = sets
        .iter()
        .map(|labels| parse_labels(text, carrier, labels))
        .collect::<Result<Vec<_>>>()?;
    SetFamily::new(carrier.clone(), members)
}

pub fn family_json(fam: &SetFamily) -> Value {
    let c = fam.carrier();
    Value::from(fam.members().iter().map(|&s| subset_json(c, s)).collect::<Vec<_>>())
}

pub fn report_json(report: &ClassificationReport, witnesses: Option<&[Witness]>) -> Value {
    let flags: Map<String, Value> = ClassificationReport::FLAGS
        .iter()
        .map(|f| (f.to_string(), Value::from(report.get(f).expect("registered flag"))))
        .collect();
    let mut out = json!({ "flags": flags });
    if let Some(ws) = witnesses {
        let w: Map<String, Value> = ws
            .iter()
            .map(|w| (w.flag.clone(), Value::from(w.detail.clone())))
            .collect();
        out["witnesses"] = Value::Object(w);
    }
    out
}

pub fn context_json(ctx: &MapContext) -> Value {
    json!({
        "source": convergence_json(&ctx.xi),
        "target": convergence_json(&ctx.tau),
        "map": map_json(&ctx.f)["map"].clone(),
    })
}

/// A search outcome: the witness triple, or the exhaustion count.
pub fn search_json(predicate: &str, outcome: &SearchOutcome) -> Value {
    match outcome {
        SearchOutcome::Witness { context, position } => json!({
            "predicate": predicate,
            "found": true,
            "position": [position.0, position.1, position.2, position.3],
            "witness": context_json(context),
        }),
        SearchOutcome::Exhausted { checked } => json!({
            "predicate": predicate,
            "found": false,
            "checked": checked,
        }),
    }
}

/// Reads back a witness document into a map context.
pub fn parse_witness(text: &str) -> Result<MapContext> {
    let v: Value = serde_json::from_str(text)?;
    let w = v
        .get("witness")
        .ok_or_else(|| Error::Document("no \"witness\" entry".into()))?;
    let field = |name: &str| {
        w.get(name)
            .cloned()
            .ok_or_else(|| Error::Document(format!("witness lacks {name:?}")))
    };
    let xi = parse_convergence(&field("source")?.to_string())?;
    let tau = parse_convergence(&field("target")?.to_string())?;
    let map = json!({ "map": field("map")? }).to_string();
    let f = parse_map(&map, xi.carrier(), tau.carrier())?;
    MapContext::new(f, xi, tau)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub path: String,
    pub ok: bool,
    /// `convergence` or `witness`, once the document parsed.
    pub kind: Option<&'static str>,
    pub message: Option<String>,
}

/// Validates one document: a witness if it has a `"witness"` entry, a
/// convergence otherwise.
pub fn validate_text(text: &str) -> Result<&'static str> {
    let v: Value = serde_json::from_str(text)?;
    if v.get("witness").is_some() {
        parse_witness(text)?;
        Ok("witness")
    } else {
        parse_convergence(text)?;
        Ok("convergence")
    }
}

pub fn validate_files<P: AsRef<Path>>(paths: &[P]) -> Vec<Diagnostic> {
    paths
        .iter()
        .map(|p| {
            let path = p.as_ref().display().to_string();
            let r = std::fs::read_to_string(p)
                .map_err(|e| Error::Document(format!("cannot read: {e}")))
                .and_then(|text| validate_text(&text));
            match r {
                Ok(kind) => Diagnostic {
                    path,
                    ok: true,
                    kind: Some(kind),
                    message: None,
                },
                Err(e) => Diagnostic {
                    path,
                    ok: false,
                    kind: None,
                    message: Some(e.to_string()),
                },
            }
        })
        .collect()
}

pub fn to_pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}
