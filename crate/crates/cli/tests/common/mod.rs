#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use finmet::gh::{glue_over_two_points, Correspondence};
use finmet::lsm::{decompose, lsm_covering_check};
use finmet::space::label;
use finmet::submetry::{hyperspace, proper_family_check, PointedFamily};
use finmet::{l_infty_product, validate_space, ExtValue, FinSpace, Morphism};
use finmet_cli::convert::*;
use finmet_cli::document::{CoveringDoc, Document, FamilyDoc, GluingDoc, MorphismDoc, PointedFamilyDoc};
use finmet_cli::{run_command, serialize};

pub fn v(s: &str) -> ExtValue {
    s.parse().unwrap()
}

pub fn space(labels: &[&str], rows: &[&[&str]]) -> Arc<FinSpace> {
    let m = rows.iter().map(|r| r.iter().map(|s| v(s)).collect()).collect();
    Arc::new(validate_space(labels.iter().map(|s| s.to_string()).collect(), m).unwrap().0)
}

pub fn two(r: &str) -> Arc<FinSpace> {
    Arc::new(FinSpace::two_point(&v(r)).unwrap())
}

pub fn line3() -> Arc<FinSpace> {
    space(&["a", "b", "c"], &[&["0", "1", "2"], &["1", "0", "1"], &["2", "1", "0"]])
}

pub fn lm(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

fn sdoc(s: &FinSpace) -> Document {
    Document::Space(space_doc(s))
}

fn mdoc(f: &Morphism) -> Document {
    Document::Morphism(morphism_doc(f))
}

fn raw_morphism(dom: &FinSpace, cod: &FinSpace, map: &[(&str, &str)]) -> Document {
    Document::Morphism(MorphismDoc { dom: space_doc(dom), cod: space_doc(cod), map: lm(map) })
}

/// One invocation: input documents (or raw text) plus extra flags.
#[derive(Clone)]
pub struct Case {
    pub inputs: Vec<String>,
    pub flags: Vec<String>,
}

impl Case {
    fn new(docs: Vec<Document>, flags: &[&str]) -> Case {
        Case { inputs: docs.iter().map(serialize).collect(), flags: flags.iter().map(|s| s.to_string()).collect() }
    }

    pub fn run(&self, command: &str, dir: &Path) -> (String, i32) {
        let mut argv = vec![command.to_string()];
        for (k, text) in self.inputs.iter().enumerate() {
            let path: PathBuf = dir.join(format!("{command}-{k}.json"));
            std::fs::write(&path, text).unwrap();
            argv.push("--in".into());
            argv.push(path.display().to_string());
        }
        argv.extend(self.flags.iter().cloned());
        let out = run_command(&argv);
        (out.text, out.code)
    }

    /// The same invocation with the first input replaced by broken JSON.
    pub fn malformed(&self) -> Case {
        let mut c = self.clone();
        c.inputs[0] = "{\"kind\": \"space\", ".into();
        c
    }
}

pub struct Fixture {
    pub command: &'static str,
    pub pass: Case,
    pub fail: Case,
    pub fail_code: &'static str,
}

fn pointed_square() -> PointedFamily {
    let x = two("1");
    let prod = l_infty_product(&x, &x).unwrap();
    let fam = proper_family_check(&prod.left).unwrap();
    let map = (0..x.len()).map(|a| prod.space.index_of(&label::pair(x.label(a), "0")).unwrap()).collect();
    PointedFamily::new(fam, vec![Morphism::new(x, prod.space.clone(), map).unwrap()]).unwrap()
}

fn descent_doc_three_legs() -> finmet_cli::document::DescentDoc {
    let x = two("1");
    let cov = lsm_covering_check(x.clone(), vec![Morphism::identity(x.clone()); 3]).unwrap();
    let prod = l_infty_product(&two("1"), &x).unwrap();
    descent_doc(&decompose(&prod.right, &cov).unwrap())
}

/// A passing and a violating input set for every registry command.
pub fn fixtures() -> Vec<Fixture> {
    let x = two("1");
    let y = two("2");
    let pt = Arc::new(FinSpace::point());
    let l3 = line3();
    let bad = Document::Space(finmet_cli::document::SpaceDoc {
        points: vec!["a".into(), "b".into(), "c".into()],
        d: vec![vec![v("0"), v("1"), v("5")], vec![v("1"), v("0"), v("1")], vec![v("5"), v("1"), v("0")]],
    });
    let inf = Document::Space(finmet_cli::document::SpaceDoc {
        points: vec!["a".into(), "b".into()],
        d: vec![vec![v("0"), v("inf")], vec![v("inf"), v("0")]],
    });
    let pseudo = space(&["a", "b"], &[&["0", "0"], &["0", "0"]]);
    let id_x = Morphism::identity(x.clone());
    let id_y = Morphism::identity(y.clone());
    let swap_x = Morphism::new(x.clone(), x.clone(), vec![1, 0]).unwrap();
    let nonsub = Morphism::new(y.clone(), x.clone(), vec![0, 1]).unwrap();
    let proj = l_infty_product(&x, &x).unwrap().right;
    let to_pt = Morphism::to_point(x.clone());
    let hyp = hyperspace(&to_pt, 4095).unwrap();
    let g = Morphism::new(x.clone(), hyp.space().clone(), vec![hyp.index_of_subset(&[0]).unwrap(), hyp.index_of_subset(&[0, 1]).unwrap()])
        .unwrap();
    let fam_from_g = finmet::submetry::map_to_family(&hyp, &g).unwrap();
    let fam_doc = Document::Family(family_doc(fam_from_g.family.projection(), Some(&fam_from_g.to_x)));
    let bad_sub = Document::Family(FamilyDoc {
        total: space_doc(&y),
        base: space_doc(&pt),
        projection: lm(&[("0", "*"), ("2", "*")]),
        embedding: Some(lm(&[("0", "0"), ("2", "1")])),
    });
    let pointed = Document::PointedFamily(pointed_doc(&pointed_square()));
    let bad_pointed = Document::PointedFamily(PointedFamilyDoc {
        family: family_doc(&nonsub, None),
        sections: vec![],
    });
    let cov_x = Document::Covering(CoveringDoc { base: space_doc(&x), legs: vec![arrow_doc(&id_x)] });
    let two_legs = Document::Covering(CoveringDoc { base: space_doc(&x), legs: vec![arrow_doc(&id_x), arrow_doc(&id_x)] });
    let points_only = Document::Covering(CoveringDoc {
        base: space_doc(&x),
        legs: vec![arrow_doc(&Morphism::constant(pt.clone(), x.clone(), 0)), arrow_doc(&Morphism::constant(pt.clone(), x.clone(), 1))],
    });
    let descent = descent_doc_three_legs();
    let mut broken = descent.clone();
    broken.transitions.remove(&(0, 1));
    let corr_xy = Correspondence::from_labels(x.clone(), y.clone(), &[("0".into(), "0".into()), ("1".into(), "2".into())]).unwrap();
    let corr_pt = Correspondence::new(pt.clone(), pt.clone(), [(0, 0)]).unwrap();
    let partial = Document::Correspondence(finmet_cli::document::CorrespondenceDoc {
        left: space_doc(&x),
        right: space_doc(&y),
        pairs: vec![("0".into(), "0".into())],
    });
    let fam_2r = glue_over_two_points(&corr_xy, None).unwrap();
    let fam_2r_doc = Document::Family(family_doc(fam_2r.family().projection(), None));
    let back = Correspondence::new(y.clone(), x.clone(), corr_xy.pairs().iter().map(|&(a, b)| (b, a))).unwrap();
    let fam_back = Document::Family(family_doc(glue_over_two_points(&back, None).unwrap().family().projection(), None));
    let l3_fam = Document::Family(family_doc(&l_infty_product(&l3, &x).unwrap().left, None));
    let big = Arc::new(finmet::generate::metric(&mut finmet::generate::rng(1), 5));
    let four = Arc::new(finmet::generate::metric(&mut finmet::generate::rng(2), 4));

    let c = Case::new;
    vec![
        Fixture { command: "validate", pass: c(vec![sdoc(&x)], &[]), fail: c(vec![bad.clone()], &[]), fail_code: "E_TRIANGLE" },
        Fixture {
            command: "morphism",
            pass: c(vec![mdoc(&id_x)], &[]),
            fail: c(vec![raw_morphism(&x, &y, &[("0", "0"), ("1", "2")])], &[]),
            fail_code: "E_NOT_LIPSCHITZ",
        },
        Fixture { command: "product", pass: c(vec![sdoc(&x), sdoc(&y)], &[]), fail: c(vec![bad.clone(), sdoc(&x)], &[]), fail_code: "E_TRIANGLE" },
        Fixture {
            command: "fiber-product",
            pass: c(vec![mdoc(&id_x), mdoc(&id_x)], &[]),
            fail: c(vec![mdoc(&id_x), mdoc(&id_y)], &[]),
            fail_code: "E_DOMAIN_MISMATCH",
        },
        Fixture {
            command: "colimit",
            pass: c(vec![Document::Gluing(GluingDoc { spaces: vec![space_doc(&x), space_doc(&x)], identify: vec![((0, "1".into()), (1, "0".into()))] })], &[]),
            fail: c(vec![Document::Gluing(GluingDoc { spaces: vec![space_doc(&x)], identify: vec![((0, "7".into()), (0, "0".into()))] })], &[]),
            fail_code: "E_UNKNOWN_POINT",
        },
        Fixture {
            command: "quotient-group",
            pass: c(vec![sdoc(&x), mdoc(&swap_x)], &[]),
            fail: c(vec![sdoc(&x), mdoc(&Morphism::constant(x.clone(), x.clone(), 0))], &[]),
            fail_code: "E_NOT_BIJECTIVE",
        },
        Fixture { command: "identify", pass: c(vec![sdoc(&pseudo)], &[]), fail: c(vec![bad.clone()], &[]), fail_code: "E_TRIANGLE" },
        Fixture {
            command: "hausdorff",
            pass: c(vec![sdoc(&l3)], &["--subset", r#"["a"]"#, "--subset", r#"["b","c"]"#]),
            fail: c(vec![sdoc(&l3)], &["--subset", r#"["zz"]"#, "--subset", r#"["a"]"#]),
            fail_code: "E_UNKNOWN_POINT",
        },
        Fixture { command: "submetry", pass: c(vec![mdoc(&id_x)], &[]), fail: c(vec![mdoc(&nonsub)], &[]), fail_code: "" },
        Fixture { command: "proper", pass: c(vec![mdoc(&proj)], &[]), fail: c(vec![mdoc(&nonsub)], &[]), fail_code: "E_NOT_SUBMETRY" },
        Fixture {
            command: "hyperspace",
            pass: c(vec![mdoc(&to_pt)], &[]),
            fail: c(vec![mdoc(&to_pt)], &["--cap", "2"]),
            fail_code: "E_TOO_LARGE",
        },
        Fixture {
            command: "map-to-family",
            pass: c(vec![mdoc(&to_pt), mdoc(&g)], &[]),
            fail: c(vec![mdoc(&to_pt), mdoc(&id_x)], &[]),
            fail_code: "E_DOMAIN_MISMATCH",
        },
        Fixture {
            command: "family-to-map",
            pass: c(vec![mdoc(&to_pt), fam_doc], &[]),
            fail: c(vec![mdoc(&to_pt), bad_sub], &[]),
            fail_code: "E_NOT_PROPER",
        },
        Fixture {
            command: "pointed-pullback",
            pass: c(vec![pointed.clone(), mdoc(&id_x)], &[]),
            fail: c(vec![pointed.clone(), mdoc(&id_y)], &[]),
            fail_code: "E_DOMAIN_MISMATCH",
        },
        Fixture { command: "diagonal-family", pass: c(vec![pointed], &[]), fail: c(vec![bad_pointed], &[]), fail_code: "E_NOT_SUBMETRY" },
        Fixture {
            command: "lsm-radius",
            pass: c(vec![mdoc(&id_x)], &[]),
            fail: c(vec![mdoc(&Morphism::identity(pseudo.clone()))], &[]),
            fail_code: "E_NOT_METRIC",
        },
        Fixture { command: "lsm-check", pass: c(vec![cov_x.clone()], &[]), fail: c(vec![points_only.clone()], &[]), fail_code: "E_TRIPLE_UNLIFTABLE" },
        Fixture {
            command: "covering-from-submetry",
            pass: c(vec![mdoc(&id_x)], &["--radius", "1"]),
            fail: c(vec![mdoc(&nonsub)], &["--radius", "1"]),
            fail_code: "E_NOT_SUBMETRY",
        },
        Fixture {
            command: "covering-pullback",
            pass: c(vec![cov_x.clone(), mdoc(&id_x)], &[]),
            fail: c(vec![cov_x.clone(), mdoc(&id_y)], &[]),
            fail_code: "E_DOMAIN_MISMATCH",
        },
        Fixture {
            command: "covering-compose",
            pass: c(vec![cov_x.clone(), cov_x.clone()], &[]),
            fail: c(vec![cov_x.clone()], &[]),
            fail_code: "E_DOMAIN_MISMATCH",
        },
        Fixture {
            command: "glue-morphisms",
            pass: c(vec![cov_x.clone(), mdoc(&id_x)], &[]),
            fail: c(vec![two_legs, mdoc(&id_x), mdoc(&swap_x)], &[]),
            fail_code: "E_INCOMPATIBLE",
        },
        Fixture {
            command: "cocycle",
            pass: c(vec![Document::Descent(descent.clone())], &[]),
            fail: c(vec![Document::Descent(broken.clone())], &[]),
            fail_code: "E_MISSING_TRANSITION",
        },
        Fixture {
            command: "glue-descent",
            pass: c(vec![Document::Descent(descent)], &[]),
            fail: c(vec![Document::Descent(broken)], &[]),
            fail_code: "E_MISSING_TRANSITION",
        },
        Fixture {
            command: "distortion",
            pass: c(vec![Document::Correspondence(correspondence_doc(&corr_xy))], &[]),
            fail: c(vec![partial], &[]),
            fail_code: "E_NOT_TOTAL",
        },
        Fixture { command: "gh", pass: c(vec![sdoc(&x), sdoc(&y)], &[]), fail: c(vec![inf, sdoc(&x)], &[]), fail_code: "E_INFINITE_DISTANCE" },
        Fixture {
            command: "gh-oracle",
            pass: c(vec![sdoc(&x), sdoc(&y)], &[]),
            fail: c(vec![sdoc(&big), sdoc(&four)], &[]),
            fail_code: "E_TOO_LARGE",
        },
        Fixture {
            command: "glue-2r",
            pass: c(vec![Document::Correspondence(correspondence_doc(&corr_xy))], &[]),
            fail: c(vec![Document::Correspondence(correspondence_doc(&corr_pt))], &[]),
            fail_code: "E_DEGENERATE_RADIUS",
        },
        Fixture { command: "corr-from-family", pass: c(vec![fam_2r_doc.clone()], &[]), fail: c(vec![l3_fam], &[]), fail_code: "E_NOT_TWO_POINT" },
        Fixture {
            command: "chain-bound",
            pass: c(vec![fam_2r_doc.clone(), fam_back.clone()], &["--link", r#"{"1:0":"0:0","1:2":"0:2"}"#]),
            fail: c(vec![fam_2r_doc, fam_back], &["--link", r#"{"1:0":"0:0","1:2":"0:0"}"#]),
            fail_code: "E_LINK_NOT_ISOMETRY",
        },
    ]
}

/// The error code of a failure report, if any.
pub fn error_code(text: &str) -> Option<String> {
    let v: serde_json::Value = serde_json::from_str(text).ok()?;
    v.get("error")?.get("code")?.as_str().map(str::to_string)
}
