//! JSON documents: parsing with structural checks, and canonical output.
//!
//! Canonical form: keys sorted, points sorted with the matrix permuted to
//! match, pair lists sorted, rationals reduced and written as strings.

use std::collections::BTreeMap;
use std::sync::Arc;

use finmet::{ExtValue, FinSpace};
use serde_json::{json, Map, Value};

use crate::error::{CliError, Result};

pub type LabelMap = BTreeMap<String, String>;
pub type LabelPairs = Vec<(String, String)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceDoc {
    pub points: Vec<String>,
    pub d: Vec<Vec<ExtValue>>,
}

/// A map whose codomain is implied by its position in the enclosing
/// document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowDoc {
    pub dom: SpaceDoc,
    pub map: LabelMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismDoc {
    pub dom: SpaceDoc,
    pub cod: SpaceDoc,
    pub map: LabelMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringDoc {
    pub base: SpaceDoc,
    pub legs: Vec<ArrowDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentDoc {
    pub base: SpaceDoc,
    pub covering: Vec<ArrowDoc>,
    pub charts: Vec<ArrowDoc>,
    pub transitions: BTreeMap<(usize, usize), LabelPairs>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrespondenceDoc {
    pub left: SpaceDoc,
    pub right: SpaceDoc,
    pub pairs: LabelPairs,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyDoc {
    pub total: SpaceDoc,
    pub base: SpaceDoc,
    pub projection: LabelMap,
    /// Map of the total space into an ambient space, for families presented
    /// inside a product.
    pub embedding: Option<LabelMap>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedFamilyDoc {
    pub family: FamilyDoc,
    pub sections: Vec<LabelMap>,
}

/// Spaces to glue, with identifications `((space, label), (space, label))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingDoc {
    pub spaces: Vec<SpaceDoc>,
    pub identify: Vec<((usize, String), (usize, String))>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Space(SpaceDoc),
    Morphism(MorphismDoc),
    Covering(CoveringDoc),
    Descent(DescentDoc),
    Correspondence(CorrespondenceDoc),
    Family(FamilyDoc),
    PointedFamily(PointedFamilyDoc),
    Gluing(GluingDoc),
    /// Operation output; the payload is kept as plain JSON.
    Result(Map<String, Value>),
}

pub const KINDS: &[&str] =
    &["space", "morphism", "covering", "descent", "correspondence", "family", "pointed-family", "gluing", "result"];

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Space(_) => "space",
            Document::Morphism(_) => "morphism",
            Document::Covering(_) => "covering",
            Document::Descent(_) => "descent",
            Document::Correspondence(_) => "correspondence",
            Document::Family(_) => "family",
            Document::PointedFamily(_) => "pointed-family",
            Document::Gluing(_) => "gluing",
            Document::Result(_) => "result",
        }
    }
}

fn perr(path: &str, message: impl Into<String>) -> CliError {
    CliError::Parse { position: path.to_string(), message: message.into() }
}

/// Parses a document. Only structure is checked here; metric axioms and
/// map properties are left to the operations.
pub fn parse_document(text: &str) -> Result<Document> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::Parse {
        position: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    from_value(&value)
}

pub fn from_value(value: &Value) -> Result<Document> {
    let m = obj(value, "$")?;
    let kind = string(field(m, "kind", "$")?, "$.kind")?;
    let p = "$";
    let doc = match kind.as_str() {
        "space" => {
            keys(m, &["kind", "points", "d"], p)?;
            Document::Space(space_fields(m, p)?)
        }
        "morphism" => {
            keys(m, &["kind", "dom", "cod", "map"], p)?;
            Document::Morphism(MorphismDoc {
                dom: space_at(m, "dom", p)?,
                cod: space_at(m, "cod", p)?,
                map: label_map(field(m, "map", p)?, "$.map")?,
            })
        }
        "covering" => {
            keys(m, &["kind", "base", "legs"], p)?;
            Document::Covering(CoveringDoc { base: space_at(m, "base", p)?, legs: arrows(field(m, "legs", p)?, "$.legs")? })
        }
        "descent" => {
            keys(m, &["kind", "base", "covering", "charts", "transitions"], p)?;
            Document::Descent(DescentDoc {
                base: space_at(m, "base", p)?,
                covering: arrows(field(m, "covering", p)?, "$.covering")?,
                charts: arrows(field(m, "charts", p)?, "$.charts")?,
                transitions: transitions(field(m, "transitions", p)?, "$.transitions")?,
            })
        }
        "correspondence" => {
            keys(m, &["kind", "left", "right", "pairs"], p)?;
            Document::Correspondence(CorrespondenceDoc {
                left: space_at(m, "left", p)?,
                right: space_at(m, "right", p)?,
                pairs: label_pairs(field(m, "pairs", p)?, "$.pairs")?,
            })
        }
        "family" => {
            keys(m, &["kind", "total", "base", "projection", "embedding"], p)?;
            Document::Family(family_fields(m, p)?)
        }
        "pointed-family" => {
            keys(m, &["kind", "total", "base", "projection", "embedding", "sections"], p)?;
            let sections = array(field(m, "sections", p)?, "$.sections")?
                .iter()
                .enumerate()
                .map(|(k, s)| label_map(s, &format!("$.sections[{k}]")))
                .collect::<Result<_>>()?;
            Document::PointedFamily(PointedFamilyDoc { family: family_fields(m, p)?, sections })
        }
        "gluing" => {
            keys(m, &["kind", "spaces", "identify"], p)?;
            let spaces = array(field(m, "spaces", p)?, "$.spaces")?
                .iter()
                .enumerate()
                .map(|(k, s)| space_value(s, &format!("$.spaces[{k}]")))
                .collect::<Result<_>>()?;
            let identify = array(field(m, "identify", p)?, "$.identify")?
                .iter()
                .enumerate()
                .map(|(k, e)| {
                    let path = format!("$.identify[{k}]");
                    let ends = fixed(e, 2, &path)?;
                    Ok((tagged(&ends[0], &format!("{path}[0]"))?, tagged(&ends[1], &format!("{path}[1]"))?))
                })
                .collect::<Result<_>>()?;
            Document::Gluing(GluingDoc { spaces, identify })
        }
        "result" => {
            let mut payload = m.clone();
            payload.remove("kind");
            Document::Result(payload)
        }
        other => return Err(CliError::UnknownKind(other.to_string())),
    };
    Ok(doc)
}

fn obj<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| perr(path, "expected an object"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| perr(path, "expected an array"))
}

fn fixed<'a>(v: &'a Value, n: usize, path: &str) -> Result<&'a Vec<Value>> {
    let a = array(v, path)?;
    if a.len() != n {
        return Err(perr(path, format!("expected {n} entries, got {}", a.len())));
    }
    Ok(a)
}

fn field<'a>(m: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    m.get(key).ok_or_else(|| perr(path, format!("missing field {key:?}")))
}

fn keys(m: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    match m.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(perr(path, format!("unknown field {k:?}"))),
        None => Ok(()),
    }
}

fn string(v: &Value, path: &str) -> Result<String> {
    v.as_str().map(str::to_string).ok_or_else(|| perr(path, "expected a string"))
}

fn index(v: &Value, path: &str) -> Result<usize> {
    v.as_u64().map(|i| i as usize).ok_or_else(|| perr(path, "expected a nonnegative integer"))
}

fn ext_value(v: &Value, path: &str) -> Result<ExtValue> {
    let s = v.as_str().ok_or_else(|| perr(path, "expected a rational written as a string"))?;
    s.parse::<ExtValue>().map_err(|e| match e {
        finmet::Error::Negative(_) => CliError::Malformed(finmet::Error::BadRational(s.to_string())),
        e => CliError::Malformed(e),
    })
}

fn space_fields(m: &Map<String, Value>, path: &str) -> Result<SpaceDoc> {
    let points = array(field(m, "points", path)?, &format!("{path}.points"))?
        .iter()
        .enumerate()
        .map(|(i, p)| string(p, &format!("{path}.points[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let rows = array(field(m, "d", path)?, &format!("{path}.d"))?;
    let mut d = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let rp = format!("{path}.d[{i}]");
        let cells = array(row, &rp)?;
        d.push(cells.iter().enumerate().map(|(j, c)| ext_value(c, &format!("{rp}[{j}]"))).collect::<Result<Vec<_>>>()?);
    }
    if points.is_empty() {
        return Err(CliError::Malformed(finmet::Error::Empty));
    }
    if d.len() != points.len() {
        return Err(CliError::Malformed(finmet::Error::Shape { rows: points.len(), row: d.len(), len: d.len() }));
    }
    if let Some((row, r)) = d.iter().enumerate().find(|(_, r)| r.len() != points.len()) {
        return Err(CliError::Malformed(finmet::Error::Shape { rows: points.len(), row, len: r.len() }));
    }
    Ok(SpaceDoc { points, d })
}

fn space_value(v: &Value, path: &str) -> Result<SpaceDoc> {
    let m = obj(v, path)?;
    keys(m, &["points", "d"], path)?;
    space_fields(m, path)
}

fn space_at(m: &Map<String, Value>, key: &str, path: &str) -> Result<SpaceDoc> {
    space_value(field(m, key, path)?, &format!("{path}.{key}"))
}

fn label_map(v: &Value, path: &str) -> Result<LabelMap> {
    obj(v, path)?.iter().map(|(k, t)| Ok((k.clone(), string(t, &format!("{path}.{k}"))?))).collect()
}

fn label_pairs(v: &Value, path: &str) -> Result<LabelPairs> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let p = format!("{path}[{i}]");
            let ab = fixed(e, 2, &p)?;
            Ok((string(&ab[0], &p)?, string(&ab[1], &p)?))
        })
        .collect()
}

fn tagged(v: &Value, path: &str) -> Result<(usize, String)> {
    let e = fixed(v, 2, path)?;
    Ok((index(&e[0], path)?, string(&e[1], path)?))
}

fn arrows(v: &Value, path: &str) -> Result<Vec<ArrowDoc>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let p = format!("{path}[{i}]");
            let m = obj(a, &p)?;
            keys(m, &["dom", "map"], &p)?;
            Ok(ArrowDoc { dom: space_at(m, "dom", &p)?, map: label_map(field(m, "map", &p)?, &format!("{p}.map"))? })
        })
        .collect()
}

fn transitions(v: &Value, path: &str) -> Result<BTreeMap<(usize, usize), LabelPairs>> {
    let mut out = BTreeMap::new();
    for (key, list) in obj(v, path)? {
        let bad = || perr(path, format!("transition key {key:?} is not of the form \"i,j\""));
        let (i, j) = key.split_once(',').ok_or_else(bad)?;
        let parse = |s: &str| {
            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            s.parse::<usize>().map_err(|_| bad())
        };
        let pair = (parse(i)?, parse(j)?);
        if out.insert(pair, label_pairs(list, &format!("{path}.{key}"))?).is_some() {
            return Err(bad());
        }
    }
    Ok(out)
}

fn family_fields(m: &Map<String, Value>, p: &str) -> Result<FamilyDoc> {
    Ok(FamilyDoc {
        total: space_at(m, "total", p)?,
        base: space_at(m, "base", p)?,
        projection: label_map(field(m, "projection", p)?, "$.projection")?,
        embedding: m.get("embedding").map(|e| label_map(e, "$.embedding")).transpose()?,
    })
}

// ---- output ----

impl SpaceDoc {
    pub fn from_space(space: &FinSpace) -> SpaceDoc {
        SpaceDoc { points: space.labels().to_vec(), d: space.matrix() }
    }

    /// Validates the metric axioms.
    pub fn build(&self) -> finmet::Result<Arc<FinSpace>> {
        finmet::validate_space(self.points.clone(), self.d.clone()).map(|(s, _)| Arc::new(s))
    }

    fn to_value(&self) -> Value {
        let mut order: Vec<usize> = (0..self.points.len()).collect();
        order.sort_by(|&a, &b| self.points[a].cmp(&self.points[b]));
        let points: Vec<&str> = order.iter().map(|&i| self.points[i].as_str()).collect();
        let d: Vec<Vec<String>> =
            order.iter().map(|&i| order.iter().map(|&j| self.d[i][j].to_string()).collect()).collect();
        json!({ "points": points, "d": d })
    }
}

fn map_value(m: &LabelMap) -> Value {
    Value::Object(m.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect())
}

fn pairs_value(pairs: &LabelPairs) -> Value {
    let mut sorted = pairs.clone();
    sorted.sort();
    json!(sorted.iter().map(|(a, b)| [a, b]).collect::<Vec<_>>())
}

fn arrows_value(arrows: &[ArrowDoc]) -> Value {
    json!(arrows.iter().map(|a| json!({ "dom": a.dom.to_value(), "map": map_value(&a.map) })).collect::<Vec<_>>())
}

fn family_into(f: &FamilyDoc, m: &mut Map<String, Value>) {
    m.insert("total".into(), f.total.to_value());
    m.insert("base".into(), f.base.to_value());
    m.insert("projection".into(), map_value(&f.projection));
    if let Some(e) = &f.embedding {
        m.insert("embedding".into(), map_value(e));
    }
}

pub fn to_value(doc: &Document) -> Value {
    let mut m = Map::new();
    match doc {
        Document::Space(s) => {
            if let Value::Object(o) = s.to_value() {
                m.extend(o);
            }
        }
        Document::Morphism(f) => {
            m.insert("dom".into(), f.dom.to_value());
            m.insert("cod".into(), f.cod.to_value());
            m.insert("map".into(), map_value(&f.map));
        }
        Document::Covering(c) => {
            m.insert("base".into(), c.base.to_value());
            m.insert("legs".into(), arrows_value(&c.legs));
        }
        Document::Descent(d) => {
            m.insert("base".into(), d.base.to_value());
            m.insert("covering".into(), arrows_value(&d.covering));
            m.insert("charts".into(), arrows_value(&d.charts));
            let t = d.transitions.iter().map(|((i, j), pairs)| (format!("{i},{j}"), pairs_value(pairs))).collect();
            m.insert("transitions".into(), Value::Object(t));
        }
        Document::Correspondence(c) => {
            m.insert("left".into(), c.left.to_value());
            m.insert("right".into(), c.right.to_value());
            m.insert("pairs".into(), pairs_value(&c.pairs));
        }
        Document::Family(f) => family_into(f, &mut m),
        Document::PointedFamily(p) => {
            family_into(&p.family, &mut m);
            m.insert("sections".into(), json!(p.sections.iter().map(map_value).collect::<Vec<_>>()));
        }
        Document::Gluing(g) => {
            m.insert("spaces".into(), json!(g.spaces.iter().map(SpaceDoc::to_value).collect::<Vec<_>>()));
            let mut ids = g.identify.clone();
            ids.sort();
            let ids: Vec<Value> = ids.iter().map(|((i, a), (j, b))| json!([[i, a], [j, b]])).collect();
            m.insert("identify".into(), Value::Array(ids));
        }
        Document::Result(payload) => m.extend(payload.clone()),
    }
    m.insert("kind".into(), Value::String(doc.kind().to_string()));
    Value::Object(m)
}

/// Canonical text: pretty-printed JSON with sorted keys and a final newline.
pub fn serialize(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(&to_value(doc)).expect("documents are plain JSON");
    s.push('\n');
    s
}
