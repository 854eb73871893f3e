//! Seeded sample documents of every kind.

use std::sync::Arc;

use finmet::generate::{self, Rng8};
use finmet::gh::{gh_exact, glue_over_two_points, Correspondence, DEFAULT_GH_BUDGET};
use finmet::lsm::{decompose, lsm_covering_check};
use finmet::space::label;
use finmet::submetry::{proper_family_check, PointedFamily};
use finmet::{l_infty_product, FinSpace, Morphism};
use rand::Rng;
use serde_json::{json, Map};

use crate::convert::*;
use crate::document::{Document, GluingDoc, KINDS};
use crate::error::{CliError, Result};

fn space(rng: &mut Rng8, max: usize) -> Arc<FinSpace> {
    let n = rng.gen_range(1..=max);
    Arc::new(generate::metric(rng, n))
}

fn correspondence(rng: &mut Rng8) -> Correspondence {
    let x = space(rng, 3);
    let y = space(rng, 3);
    let mut pairs: Vec<(usize, usize)> = (0..x.len()).map(|a| (a, rng.gen_range(0..y.len()))).collect();
    pairs.extend((0..y.len()).map(|b| (rng.gen_range(0..x.len()), b)));
    Correspondence::new(x, y, pairs).expect("total by construction")
}

/// A random document of `kind`, reproducible from `seed`.
pub fn sample(kind: &str, seed: u64) -> Result<Document> {
    let mut rng = generate::rng(seed);
    let rng = &mut rng;
    let doc = match kind {
        "space" => Document::Space(space_doc(&space(rng, 5))),
        "morphism" => {
            let f = if rng.gen_bool(0.5) {
                generate::submetry(rng, 5)
            } else {
                let (x, y) = (space(rng, 4), space(rng, 4));
                generate::lipschitz_map(rng, &x, &y)
            };
            Document::Morphism(morphism_doc(&f))
        }
        "covering" => {
            let base = space(rng, 3);
            let k = rng.gen_range(1..=2);
            let legs = (0..k).map(|_| generate::submetry_onto(rng, &base, 2)).collect();
            Document::Covering(covering_doc(&lsm_covering_check(base, legs)?))
        }
        "descent" => {
            let base = space(rng, 3);
            let k = rng.gen_range(1..=2);
            let legs = (0..k).map(|_| generate::submetry_onto(rng, &base, 2)).collect();
            let cov = lsm_covering_check(base.clone(), legs)?;
            let p = generate::submetry_onto(rng, &base, 2);
            Document::Descent(descent_doc(&decompose(&p, &cov)?))
        }
        "correspondence" => Document::Correspondence(correspondence_doc(&correspondence(rng))),
        "family" => {
            let c = correspondence(rng);
            let r = if c.distortion().is_zero() { Some(generate::rational(rng, 3, 2)) } else { None };
            let fam = glue_over_two_points(&c, r.as_ref())?;
            Document::Family(family_doc(fam.family().projection(), None))
        }
        "pointed-family" => {
            let (x, f) = (space(rng, 3), space(rng, 2));
            let prod = l_infty_product(&x, &f)?;
            let fam = proper_family_check(&prod.left)?;
            let mut sections = Vec::new();
            for _ in 0..rng.gen_range(0..=2) {
                let at = rng.gen_range(0..f.len());
                let map = (0..x.len())
                    .map(|a| prod.space.index_of(&label::pair(x.label(a), f.label(at))).expect("product point"))
                    .collect();
                sections.push(Morphism::new(x.clone(), prod.space.clone(), map)?);
            }
            Document::PointedFamily(pointed_doc(&PointedFamily::new(fam, sections)?))
        }
        "gluing" => {
            let spaces: Vec<_> = (0..rng.gen_range(1..=3)).map(|_| space(rng, 3)).collect();
            let mut identify = Vec::new();
            for _ in 0..rng.gen_range(0..=3) {
                let i = rng.gen_range(0..spaces.len());
                let j = rng.gen_range(0..spaces.len());
                let a = spaces[i].label(rng.gen_range(0..spaces[i].len())).to_string();
                let b = spaces[j].label(rng.gen_range(0..spaces[j].len())).to_string();
                identify.push(((i, a), (j, b)));
            }
            Document::Gluing(GluingDoc { spaces: spaces.iter().map(|s| space_doc(s)).collect(), identify })
        }
        "result" => {
            let (x, y) = (space(rng, 3), space(rng, 3));
            let r = gh_exact(&x, &y, DEFAULT_GH_BUDGET)?;
            let mut m = Map::new();
            m.insert("op".into(), json!("gh"));
            m.insert("ok".into(), json!(true));
            m.insert("value".into(), json!(r.value.to_string()));
            m.insert("phi".into(), json!(r.phi_labels()));
            m.insert("psi".into(), json!(r.psi_labels()));
            Document::Result(m)
        }
        other => return Err(CliError::UnknownKind(other.to_string())),
    };
    debug_assert!(KINDS.contains(&doc.kind()));
    Ok(doc)
}
