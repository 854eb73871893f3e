use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use clap::Parser;
use finmet::gh::{
    chain_upper_bound, correspondence_from_family, gh_enum_oracle, gh_exact, glue_over_two_points, DEFAULT_GH_BUDGET,
};
use finmet::limits::DEFAULT_GROUP_CAP;
use finmet::lsm::{
    check_cocycle, covering_compose, covering_from_submetry, covering_pullback, glue_descent, glue_morphisms,
    local_submetry_radius,
};
use finmet::submetry::{
    diagonal_family, family_to_map, hausdorff_distance, hyperspace, map_to_family, pointed_pullback,
    proper_family_check, submetry_check, SubFamily, SubsetRef, DEFAULT_HYPERSPACE_CAP,
};
use finmet::{colimit_glue, fiber_product, l_infty_product, metric_identification, quotient_by_group};
use finmet::{check_morphism, validate_space, ExtValue, GroupAction, Morphism};
use serde_json::{json, Map, Value};

use crate::convert::{self, space_doc};
use crate::document::{parse_document, serialize, Document, SpaceDoc};
use crate::error::{CliError, Result};
use crate::registry;
use crate::samples;
use crate::schema::schema;

#[derive(Parser, Debug)]
#[command(name = "finmet", version, about = "Exact finite metric geometry on JSON documents")]
struct Args {
    /// Command to run.
    command: Option<String>,
    /// Extra positional arguments (the document kind for `generate`).
    rest: Vec<String>,
    /// Input document; repeat for multi-input commands.
    #[arg(long = "in", value_name = "FILE")]
    inputs: Vec<PathBuf>,
    /// Write the output document here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Size cap for hyperspace, group and Gromov-Hausdorff enumeration.
    #[arg(long, value_name = "N")]
    cap: Option<u128>,
    /// Seed for `generate`.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Print the JSON Schema of a document kind.
    #[arg(long, value_name = "KIND")]
    schema: Option<String>,
    /// Subset as a JSON array of labels (`hausdorff`, given twice).
    #[arg(long, value_name = "JSON")]
    subset: Vec<String>,
    /// Radius for `covering-from-submetry` and `glue-2r`.
    #[arg(long, value_name = "R")]
    radius: Option<String>,
    /// Fiber matching as a JSON object (`chain-bound`, one per link).
    #[arg(long, value_name = "JSON")]
    link: Vec<String>,
}

/// Output text and exit status of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
    /// The text went to `--out` rather than stdout.
    pub written: bool,
}

fn failure(op: Option<&str>, e: &CliError) -> (String, i32) {
    let mut m = Map::new();
    m.insert("op".into(), op.map_or(Value::Null, |o| json!(o)));
    m.insert("ok".into(), json!(false));
    m.insert("error".into(), e.report());
    (serialize(&Document::Result(m)), e.exit_code())
}

/// Runs one command; `argv` excludes the program name.
pub fn run_command<S: AsRef<str>>(argv: &[S]) -> Outcome {
    let full = std::iter::once("finmet").chain(argv.iter().map(AsRef::as_ref));
    let args = match Args::try_parse_from(full) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { text: e.to_string(), code: 0, written: false };
            }
            let (text, code) = failure(None, &CliError::Usage(e.to_string()));
            return Outcome { text, code, written: false };
        }
    };
    let (text, code) = match execute(&args) {
        Ok((doc, code)) => (serialize(&doc), code),
        Err(e) => failure(args.command.as_deref(), &e),
    };
    if let Some(path) = &args.out {
        if let Err(e) = std::fs::write(path, &text) {
            let err = CliError::Io { path: path.display().to_string(), message: e.to_string() };
            let (text, code) = failure(args.command.as_deref(), &err);
            return Outcome { text, code, written: false };
        }
        return Outcome { text, code, written: true };
    }
    Outcome { text, code, written: false }
}

fn execute(args: &Args) -> Result<(Document, i32)> {
    if let Some(kind) = &args.schema {
        let s = schema(kind).ok_or_else(|| CliError::UnknownKind(kind.clone()))?;
        let mut m = Map::new();
        m.insert("op".into(), json!("schema"));
        m.insert("ok".into(), json!(true));
        m.insert("schema".into(), s);
        return Ok((Document::Result(m), 0));
    }
    let command = args.command.as_deref().ok_or_else(|| CliError::Usage("no command given".into()))?;
    if command == "generate" {
        let kind = args.rest.first().ok_or_else(|| CliError::Usage("generate needs a document kind".into()))?;
        return Ok((samples::sample(kind, args.seed.unwrap_or(0))?, 0));
    }
    if registry::lookup(command).is_none() {
        return Err(CliError::UnknownCommand(command.to_string()));
    }
    if !args.rest.is_empty() {
        return Err(CliError::Usage(format!("unexpected argument {:?}", args.rest[0])));
    }
    Ctx { args, command, docs: Vec::new() }.dispatch()
}

struct Ctx<'a> {
    args: &'a Args,
    command: &'a str,
    docs: Vec<Document>,
}

fn ok(op: &str, fields: Value) -> Document {
    let mut m = Map::new();
    m.insert("op".into(), json!(op));
    m.insert("ok".into(), json!(true));
    if let Value::Object(f) = fields {
        m.extend(f);
    }
    Document::Result(m)
}

macro_rules! expect {
    ($ctx:expr, $i:expr, $variant:ident, $name:literal) => {
        match &$ctx.docs[$i] {
            Document::$variant(d) => d,
            other => {
                return Err(CliError::WrongKind {
                    command: $ctx.command.to_string(),
                    index: $i,
                    expected: $name.to_string(),
                    got: other.kind().to_string(),
                })
            }
        }
    };
}

fn lib<T>(r: finmet::Result<T>) -> Result<T> {
    r.map_err(CliError::Core)
}

fn parse_json<T: FromJson>(flag: &str, text: &str) -> Result<T> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))?;
    T::from_json(&v).ok_or_else(|| CliError::Usage(format!("--{flag}: unexpected JSON shape")))
}

trait FromJson: Sized {
    fn from_json(v: &Value) -> Option<Self>;
}

impl FromJson for Vec<String> {
    fn from_json(v: &Value) -> Option<Self> {
        v.as_array()?.iter().map(|s| s.as_str().map(str::to_string)).collect()
    }
}

impl FromJson for BTreeMap<String, String> {
    fn from_json(v: &Value) -> Option<Self> {
        v.as_object()?.iter().map(|(k, s)| Some((k.clone(), s.as_str()?.to_string()))).collect()
    }
}

fn labels(f: &Morphism) -> Value {
    json!(f.label_map())
}

impl Ctx<'_> {
    fn arity(&mut self, min: usize, max: Option<usize>) -> Result<()> {
        let got = self.args.inputs.len();
        if got < min || max.is_some_and(|m| got > m) {
            let expected = match max {
                Some(m) if m == min => min.to_string(),
                Some(m) => format!("{min}..={m}"),
                None => format!("at least {min}"),
            };
            return Err(CliError::Arity { command: self.command.to_string(), expected, got });
        }
        for path in &self.args.inputs {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
            self.docs.push(parse_document(&text)?);
        }
        Ok(())
    }

    fn exact(&mut self, n: usize) -> Result<()> {
        self.arity(n, Some(n))
    }

    fn radius(&self) -> Result<Option<ExtValue>> {
        self.args
            .radius
            .as_deref()
            .map(|r| r.parse::<ExtValue>().map_err(CliError::Malformed))
            .transpose()
    }

    fn space(&self, i: usize) -> Result<Arc<finmet::FinSpace>> {
        let s: &SpaceDoc = expect!(self, i, Space, "space");
        lib(s.build())
    }

    fn morphism(&self, i: usize) -> Result<Morphism> {
        let m = expect!(self, i, Morphism, "morphism");
        lib(convert::morphism(m))
    }

    fn dispatch(mut self) -> Result<(Document, i32)> {
        let op = self.command;
        let doc = match op {
            "validate" => {
                self.exact(1)?;
                let s = expect!(self, 0, Space, "space");
                let (space, class) = lib(validate_space(s.points.clone(), s.d.clone()))?;
                ok(op, json!({
                    "space": Document::Space(space_doc(&space)).payload(),
                    "class": { "is_metric": class.is_metric, "is_pseudo": class.is_pseudo },
                }))
            }
            "morphism" => {
                self.exact(1)?;
                let f = self.morphism(0)?;
                ok(op, json!({
                    "surjective": f.is_surjective(),
                    "injective": f.is_injective(),
                    "isometry": f.is_isometry(),
                }))
            }
            "product" => {
                self.exact(2)?;
                let span = lib(l_infty_product(&self.space(0)?, &self.space(1)?))?;
                ok(op, json!({
                    "space": Document::Space(space_doc(&span.space)).payload(),
                    "left": labels(&span.left), "right": labels(&span.right),
                }))
            }
            "fiber-product" => {
                self.exact(2)?;
                let span = lib(fiber_product(&self.morphism(0)?, &self.morphism(1)?))?;
                ok(op, json!({
                    "space": Document::Space(space_doc(&span.space)).payload(),
                    "left": labels(&span.left), "right": labels(&span.right),
                }))
            }
            "colimit" => {
                self.exact(1)?;
                let g = expect!(self, 0, Gluing, "gluing");
                let spaces = lib(g.spaces.iter().map(SpaceDoc::build).collect::<finmet::Result<Vec<_>>>())?;
                let locate = |(i, l): &(usize, String)| -> Result<(usize, usize)> {
                    let s = spaces.get(*i).ok_or_else(|| {
                        CliError::Core(finmet::Error::UnknownPoint { label: l.clone(), context: format!("space {i}") })
                    })?;
                    Ok((*i, lib(s.require(l, "identification"))?))
                };
                let ids = g.identify.iter().map(|(a, b)| Ok((locate(a)?, locate(b)?))).collect::<Result<Vec<_>>>()?;
                let c = lib(colimit_glue(&spaces, &ids))?;
                ok(op, json!({
                    "space": Document::Space(space_doc(&c.space)).payload(),
                    "injections": c.injections.iter().map(labels).collect::<Vec<_>>(),
                }))
            }
            "quotient-group" => {
                self.arity(1, None)?;
                let x = self.space(0)?;
                let gens = (1..self.docs.len()).map(|i| self.morphism(i)).collect::<Result<Vec<_>>>()?;
                let action = lib(GroupAction::from_morphisms(x, &gens))?;
                let cap = self.args.cap.map_or(DEFAULT_GROUP_CAP, |c| c.min(usize::MAX as u128) as usize);
                let (q, p) = lib(quotient_by_group(&action, cap))?;
                ok(op, json!({ "space": Document::Space(space_doc(&q)).payload(), "projection": labels(&p) }))
            }
            "identify" => {
                self.exact(1)?;
                let (q, p) = lib(metric_identification(&self.space(0)?))?;
                ok(op, json!({ "space": Document::Space(space_doc(&q)).payload(), "projection": labels(&p) }))
            }
            "hausdorff" => {
                self.exact(1)?;
                if self.args.subset.len() != 2 {
                    return Err(CliError::Usage("hausdorff needs exactly two --subset arguments".into()));
                }
                let x = self.space(0)?;
                let f0: Vec<String> = parse_json("subset", &self.args.subset[0])?;
                let f1: Vec<String> = parse_json("subset", &self.args.subset[1])?;
                let a = lib(SubsetRef::from_labels(x.clone(), &f0))?;
                let b = lib(SubsetRef::from_labels(x, &f1))?;
                ok(op, json!({ "value": lib(hausdorff_distance(&a, &b))?.to_string() }))
            }
            "submetry" => {
                self.exact(1)?;
                let f = self.morphism(0)?;
                let r = lib(submetry_check(&f))?;
                let witness = r.witness.as_ref().map(|w| {
                    json!({
                        "point": f.dom().label(w.point), "target": f.cod().label(w.target),
                        "deficit": w.deficit.to_string(),
                    })
                });
                let mut doc = ok(op, json!({
                    "verdict": r.verdict, "surjective": r.surjective, "definition": r.definition,
                    "fiber_min": r.fiber_min, "ball": r.ball, "witness": witness,
                }));
                if let Document::Result(m) = &mut doc {
                    m.insert("ok".into(), json!(r.verdict));
                }
                return Ok((doc, if r.verdict { 0 } else { 1 }));
            }
            "proper" => {
                self.exact(1)?;
                let p = match &self.docs[0] {
                    Document::Family(f) => lib(convert::projection(f))?,
                    _ => self.morphism(0)?,
                };
                let fam = lib(proper_family_check(&p))?;
                let fibers: BTreeMap<&str, Vec<&str>> = (0..p.cod().len())
                    .map(|b| (p.cod().label(b), fam.fiber(b).iter().map(|&a| p.dom().label(a)).collect()))
                    .collect();
                ok(op, json!({ "fibers": fibers }))
            }
            "hyperspace" => {
                self.exact(1)?;
                let h = lib(hyperspace(&self.morphism(0)?, self.args.cap.unwrap_or(DEFAULT_HYPERSPACE_CAP)))?;
                ok(op, json!({
                    "space": Document::Space(space_doc(h.space())).payload(),
                    "fiber_map": labels(h.fiber_map()),
                }))
            }
            "map-to-family" => {
                self.exact(2)?;
                let h = lib(hyperspace(&self.morphism(0)?, self.args.cap.unwrap_or(DEFAULT_HYPERSPACE_CAP)))?;
                let fam = lib(map_to_family(&h, &self.morphism(1)?))?;
                Document::Family(convert::family_doc(fam.family.projection(), Some(&fam.to_x)))
            }
            "family-to-map" => {
                self.exact(2)?;
                let f = self.morphism(0)?;
                let h = lib(hyperspace(&f, self.args.cap.unwrap_or(DEFAULT_HYPERSPACE_CAP)))?;
                let fd = expect!(self, 1, Family, "family");
                let emb = fd
                    .embedding
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("family-to-map needs a family with an embedding".into()))?;
                let p = lib(convert::projection(fd))?;
                let to_x = lib(check_morphism(p.dom().clone(), f.dom().clone(), emb))?;
                let family = lib(proper_family_check(&p))?;
                let g = lib(family_to_map(&h, &SubFamily { family, to_x }))?;
                Document::Morphism(convert::morphism_doc(&g))
            }
            "pointed-pullback" => {
                self.exact(2)?;
                let pf = expect!(self, 0, PointedFamily, "pointed-family");
                let fam = lib(convert::pointed(pf))?;
                let out = lib(pointed_pullback(&fam, &self.morphism(1)?))?;
                Document::PointedFamily(convert::pointed_doc(&out))
            }
            "diagonal-family" => {
                self.exact(1)?;
                let pf = expect!(self, 0, PointedFamily, "pointed-family");
                let out = lib(diagonal_family(&lib(convert::pointed(pf))?))?;
                Document::PointedFamily(convert::pointed_doc(&out))
            }
            "lsm-radius" => {
                self.exact(1)?;
                let f = self.morphism(0)?;
                let mut radius = BTreeMap::new();
                for x in 0..f.dom().len() {
                    radius.insert(f.dom().label(x).to_string(), lib(local_submetry_radius(&f, x))?.to_string());
                }
                ok(op, json!({ "radius": radius }))
            }
            "lsm-check" => {
                self.exact(1)?;
                let c = expect!(self, 0, Covering, "covering");
                let cov = lib(convert::covering(c))?;
                ok(op, json!({ "legs": cov.legs().len() }))
            }
            "covering-from-submetry" => {
                self.exact(1)?;
                let r = self.radius()?.ok_or_else(|| CliError::Usage("--radius is required".into()))?;
                let cov = lib(covering_from_submetry(&self.morphism(0)?, &r))?;
                Document::Covering(convert::covering_doc(&cov))
            }
            "covering-pullback" => {
                self.exact(2)?;
                let cov = lib(convert::covering(expect!(self, 0, Covering, "covering")))?;
                let out = lib(covering_pullback(&cov, &self.morphism(1)?))?;
                Document::Covering(convert::covering_doc(&out))
            }
            "covering-compose" => {
                self.arity(1, None)?;
                let cov = lib(convert::covering(expect!(self, 0, Covering, "covering")))?;
                let mut refinements = Vec::new();
                for i in 1..self.docs.len() {
                    refinements.push(lib(convert::covering(expect!(self, i, Covering, "covering")))?);
                }
                let out = lib(covering_compose(&cov, &refinements))?;
                Document::Covering(convert::covering_doc(&out))
            }
            "glue-morphisms" => {
                self.arity(2, None)?;
                let c = expect!(self, 0, Covering, "covering");
                let cov = lib(convert::covering(c).map_err(|e| match e {
                    finmet::Error::TripleUnliftable { .. } => finmet::Error::NotCovering(e.to_string()),
                    e => e,
                }))?;
                let pieces = (1..self.docs.len()).map(|i| self.morphism(i)).collect::<Result<Vec<_>>>()?;
                let g = lib(glue_morphisms(&cov, &pieces))?;
                Document::Morphism(convert::morphism_doc(&g))
            }
            "cocycle" => {
                self.exact(1)?;
                let datum = lib(convert::descent(expect!(self, 0, Descent, "descent")))?;
                lib(check_cocycle(&datum))?;
                ok(op, json!({}))
            }
            "glue-descent" => {
                self.exact(1)?;
                let datum = lib(convert::descent(expect!(self, 0, Descent, "descent")))?;
                let g = lib(glue_descent(&datum))?;
                ok(op, json!({
                    "total": Document::Space(space_doc(&g.total)).payload(),
                    "projection": labels(&g.projection),
                    "chart_maps": g.chart_maps.iter().map(labels).collect::<Vec<_>>(),
                }))
            }
            "distortion" => {
                self.exact(1)?;
                let c = lib(convert::correspondence(expect!(self, 0, Correspondence, "correspondence")))?;
                ok(op, json!({ "value": c.distortion().to_string() }))
            }
            "gh" => {
                self.exact(2)?;
                let r = lib(gh_exact(&self.space(0)?, &self.space(1)?, self.args.cap.unwrap_or(DEFAULT_GH_BUDGET)))?;
                ok(op, json!({
                    "value": r.value.to_string(),
                    "pairs": r.witness.label_pairs().iter().map(|(a, b)| [a, b]).collect::<Vec<_>>(),
                    "phi": r.phi_labels(),
                    "psi": r.psi_labels(),
                }))
            }
            "gh-oracle" => {
                self.exact(2)?;
                let (x, y) = (self.space(0)?, self.space(1)?);
                let v = lib(gh_enum_oracle(&x, &y))?;
                ok(op, json!({ "value": v.to_string() }))
            }
            "glue-2r" => {
                self.exact(1)?;
                let c = lib(convert::correspondence(expect!(self, 0, Correspondence, "correspondence")))?;
                let fam = lib(glue_over_two_points(&c, self.radius()?.as_ref()))?;
                Document::Family(convert::family_doc(fam.family().projection(), None))
            }
            "corr-from-family" => {
                self.exact(1)?;
                let fam = lib(convert::two_point_family(expect!(self, 0, Family, "family")))?;
                let c = lib(correspondence_from_family(&fam))?;
                Document::Correspondence(convert::correspondence_doc(&c))
            }
            "chain-bound" => {
                self.arity(1, None)?;
                let mut fams = Vec::new();
                for i in 0..self.docs.len() {
                    fams.push(lib(convert::two_point_family(expect!(self, i, Family, "family")))?);
                }
                let links = self
                    .args
                    .link
                    .iter()
                    .map(|l| parse_json::<BTreeMap<String, String>>("link", l))
                    .collect::<Result<Vec<_>>>()?;
                if links.len() + 1 != fams.len() {
                    return Err(CliError::Usage(format!("{} families need {} --link", fams.len(), fams.len() - 1)));
                }
                ok(op, json!({ "bound": lib(chain_upper_bound(&fams, &links))?.to_string() }))
            }
            other => unreachable!("registry command {other} has no handler"),
        };
        Ok((doc, 0))
    }
}

impl Document {
    /// The document as JSON without its `kind` field.
    pub fn payload(&self) -> Value {
        let mut v = crate::document::to_value(self);
        if let Value::Object(m) = &mut v {
            m.remove("kind");
        }
        v
    }
}
